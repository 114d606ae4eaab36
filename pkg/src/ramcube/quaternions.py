"""Integer quaternion arithmetic and reduction into finite matrix groups.

Quaternions are Lipschitz integers a0 + a1*i + a2*j + a3*k with the Hamilton
relations i^2 = j^2 = k^2 = -1 and ij = k.  The module provides

  * exact arithmetic (product, main involution, norm),
  * enumeration of the norm-p generator alphabet (odd scalar part, even
    vector part, one alphabet per prime direction),
  * a splitting of the quaternions into 2x2 matrices over Z/N1 via a
    residue pair x^2 + y^2 + 1 = 0 (mod N1),
  * the finite vertex groups: matrices with determinant in the subgroup
    generated by the primes, divided by two scalar subgroups, together
    with the canonical section between the two quotients.

2x2 matrices over Z/N1 are stored as 4-tuples (m00, m01, m10, m11).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import GeneratorCountError, InvalidModulusError

MAT_IDENTITY = (1, 0, 0, 1)


@dataclass(frozen=True)
class Quaternion:
    """Lipschitz quaternion a0 + a1*i + a2*j + a3*k with integer entries."""

    a0: int
    a1: int
    a2: int
    a3: int

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a0, a1, a2, a3 = self.a0, self.a1, self.a2, self.a3
        b0, b1, b2, b3 = other.a0, other.a1, other.a2, other.a3
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a0, -self.a1, -self.a2, -self.a3)

    def conjugate(self) -> "Quaternion":
        """Main involution: negate the vector part."""
        return Quaternion(self.a0, -self.a1, -self.a2, -self.a3)

    def norm(self) -> int:
        return self.a0 ** 2 + self.a1 ** 2 + self.a2 ** 2 + self.a3 ** 2

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a0, self.a1, self.a2, self.a3)


QUATERNION_ONE = Quaternion(1, 0, 0, 0)


def norm(q: Quaternion) -> int:
    return q.norm()


def conjugate(q: Quaternion) -> Quaternion:
    return q.conjugate()


def multiply(q1: Quaternion, q2: Quaternion) -> Quaternion:
    return q1 * q2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def enumerate_generators(p: int, n0: int = 2) -> list[Quaternion]:
    """All norm-p quaternions with a0 odd positive and a1, a2, a3 even.

    For p = 1 (mod 4) there are exactly p + 1 of them and the list is closed
    under the main involution.  Raises GeneratorCountError when the count
    comes out wrong (it always does for p = 3 (mod 4), where no such
    representation exists).
    """
    if n0 != 2:
        raise ValueError("only the n0 = 2 normalization is supported")
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    lim = math.isqrt(p)
    odds = range(1, lim + 1, 2)
    evens = [a for a in range(-lim, lim + 1) if a % 2 == 0]
    found = []
    for a0 in odds:
        rest = p - a0 * a0
        for a1, a2 in itertools.product(evens, repeat=2):
            rem = rest - a1 * a1 - a2 * a2
            if rem < 0:
                continue
            a3 = math.isqrt(rem)
            if a3 * a3 == rem and a3 % 2 == 0:
                found.append((a0, a1, a2, a3))
                if a3 != 0:
                    found.append((a0, a1, a2, -a3))
    found.sort()
    if len(found) != p + 1:
        raise GeneratorCountError(
            f"expected {p + 1} normalized norm-{p} quaternions, found {len(found)}"
        )
    gens = [Quaternion(*c) for c in found]
    assert all(g.conjugate() in gens for g in gens)
    return gens


@dataclass(frozen=True)
class ResiduePair:
    """Solution of x^2 + y^2 + 1 = 0 (mod n1) fixing the matrix splitting."""

    n1: int
    x: int
    y: int


def solve_residue(n1: int) -> ResiduePair:
    """Smallest solution of x^2 + y^2 + 1 = 0 (mod n1), minimizing y then x.

    A solution exists for every odd prime modulus.  With y minimized first,
    moduli with -1 a square give the pair (sqrt(-1), 0).
    """
    if not is_prime(n1) or n1 == 2:
        raise InvalidModulusError(f"n1 must be an odd prime, got {n1}")
    for y in range(n1):
        yy = (y * y + 1) % n1
        for x in range(n1):
            if (x * x + yy) % n1 == 0:
                return ResiduePair(n1, x, y)
    raise AssertionError("unreachable: residue solution exists for odd primes")


Mat = tuple[int, int, int, int]


def embed(q: Quaternion, res: ResiduePair) -> Mat:
    """Ring homomorphism into 2x2 matrices over Z/n1.

    1 -> Id, i -> [[x, y], [y, -x]], j -> [[0, -1], [1, 0]],
    k = ij -> [[y, -x], [-x, -y]].  det(embed(q)) = norm(q) (mod n1).
    """
    n1, x, y = res.n1, res.x, res.y
    a0, a1, a2, a3 = q.coeffs()
    return (
        (a0 + a1 * x + a3 * y) % n1,
        (-a2 + a1 * y - a3 * x) % n1,
        (a2 + a1 * y - a3 * x) % n1,
        (a0 - a1 * x - a3 * y) % n1,
    )


def mat_mul(a: Mat, b: Mat, n1: int) -> Mat:
    return (
        (a[0] * b[0] + a[1] * b[2]) % n1,
        (a[0] * b[1] + a[1] * b[3]) % n1,
        (a[2] * b[0] + a[3] * b[2]) % n1,
        (a[2] * b[1] + a[3] * b[3]) % n1,
    )


def mat_det(m: Mat, n1: int) -> int:
    return (m[0] * m[3] - m[1] * m[2]) % n1


def _cyclic_subgroup(generators: list[int], n1: int) -> frozenset[int]:
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                v = (a * g) % n1
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return frozenset(seen)


class MatrixGroupPair:
    """The two finite vertex groups and the section between them.

    Both groups consist of 2x2 matrices over Z/n1 whose determinant lies in
    A = <p_1, ..., p_g>, divided by a scalar subgroup:

      * the coarse group divides by B  = <p_1, ..., p_g, -1>,
      * the fine group divides by B' = <p_1, ..., p_g>.

    Elements are stored as canonical coset representatives: the
    lexicographically least entry tuple among all scalar multiples.  The
    canonical section sends a coarse representative to the identical matrix
    viewed in the fine group (a coarse-canonical tuple is automatically
    fine-canonical).  The quotient fine -> coarse has kernel of order 1 or 2.
    """

    def __init__(self, primes: tuple[int, ...], n1: int, residue: ResiduePair,
                 A: frozenset[int], B: frozenset[int], B_prime: frozenset[int],
                 elements: list[Mat], elements_fine: list[Mat]):
        self.primes = primes
        self.n1 = n1
        self.residue = residue
        self.A = A
        self.B = B
        self.B_prime = B_prime
        self.elements = elements
        self.elements_fine = elements_fine
        self.index = {m: i for i, m in enumerate(elements)}
        self.index_fine = {m: i for i, m in enumerate(elements_fine)}
        self.identity = self.index[MAT_IDENTITY]
        self.identity_fine = self.index_fine[MAT_IDENTITY]
        self.kernel_order = len(elements_fine) // len(elements)
        # coarse-canonical representatives are fine-canonical, so the
        # canonical section is the identity on representatives
        self.section = [self.index_fine[m] for m in elements]
        self._alt_section = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def order_fine(self) -> int:
        return len(self.elements_fine)

    def canonical(self, m: Mat) -> Mat:
        n1 = self.n1
        return min(tuple((s * e) % n1 for e in m) for s in self.B)

    def canonical_fine(self, m: Mat) -> Mat:
        n1 = self.n1
        return min(tuple((s * e) % n1 for e in m) for s in self.B_prime)

    def mul(self, i: int, j: int) -> int:
        return self.index[self.canonical(mat_mul(self.elements[i], self.elements[j], self.n1))]

    def mul_fine(self, i: int, j: int) -> int:
        return self.index_fine[
            self.canonical_fine(mat_mul(self.elements_fine[i], self.elements_fine[j], self.n1))
        ]

    def inv(self, i: int) -> int:
        m = self.elements[i]
        d = mat_det(m, self.n1)
        dinv = pow(d, -1, self.n1)
        adj = ((m[3] * dinv) % self.n1, (-m[1] * dinv) % self.n1,
               (-m[2] * dinv) % self.n1, (m[0] * dinv) % self.n1)
        return self.index[self.canonical(adj)]

    def project(self, fine_idx: int) -> int:
        """Quotient map from the fine group onto the coarse group."""
        return self.index[self.canonical(self.elements_fine[fine_idx])]

    def alt_section(self) -> list[int]:
        """The other lift of each coarse element (equals the section when the
        kernel is trivial)."""
        if self._alt_section is None:
            if self.kernel_order == 1:
                self._alt_section = list(self.section)
            else:
                mu = next(iter(self.B - self.B_prime))
                n1 = self.n1
                self._alt_section = [
                    self.index_fine[self.canonical_fine(tuple((mu * e) % n1 for e in m))]
                    for m in self.elements
                ]
        return self._alt_section

    def predicted_order(self) -> int:
        """Order prediction from the quadratic-residue criterion.

        |H| = n1*(n1-1)*(n1+1) when -1 lies in the subgroup generated by the
        primes mod n1 (the full projective-size case), and half of that
        otherwise.
        """
        full = self.n1 * (self.n1 - 1) * (self.n1 + 1)
        return full if (self.n1 - 1) in self.A else full // 2

    def __repr__(self):
        return (f"MatrixGroupPair(primes={self.primes}, n1={self.n1}, "
                f"order={self.order}, kernel={self.kernel_order})")


def build_group(primes, n0: int = 2, n1: int | None = None) -> MatrixGroupPair:
    """Enumerate the coarse/fine vertex groups for a prime set and level n1."""
    if n0 != 2:
        raise ValueError("only the n0 = 2 normalization is supported")
    if n1 is None:
        raise TypeError("n1 is required")
    primes = tuple(primes)
    if not is_prime(n1) or n1 == 2:
        raise InvalidModulusError(f"n1 must be an odd prime, got {n1}")
    for p in primes:
        if p % n1 == 0:
            raise InvalidModulusError(f"n1 = {n1} divides the prime {p}")
    residue = solve_residue(n1)
    A = _cyclic_subgroup([p % n1 for p in primes], n1)
    B = _cyclic_subgroup([p % n1 for p in primes] + [n1 - 1], n1)
    B_prime = A
    coarse = set()
    fine = set()
    rng = range(n1)
    for m in itertools.product(rng, rng, rng, rng):
        if mat_det(m, n1) in A:
            coarse.add(min(tuple((s * e) % n1 for e in m) for s in B))
            fine.add(min(tuple((s * e) % n1 for e in m) for s in B_prime))
    return MatrixGroupPair(primes, n1, residue, A, B, B_prime,
                           sorted(coarse), sorted(fine))

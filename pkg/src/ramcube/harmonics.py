"""Cochains, boundary operators, Laplacians, star spectra, Hodge theory.

Cochains of direction set I are stored on one representative orientation
per unoriented cube (the canonical one when parities exist); the completely
alternating extension s(inv_j(c)) = -T_{c,j} s(c) is applied algebraically
during operator assembly.  In representative coordinates the natural
2^{-|I|}-weighted inner product becomes the standard one, so adjoints are
plain conjugate transposes.

Conventions:
  * boundary       (d_j s)(c) = T_{c,j}^{-1} s(top_j c) - s(bot_j c)
  * coboundary     (d*_j t)(r) = sum over top_j(c) = r of T_{c,j} t(c)
  * total d        sum over j not in I of (-1)^{#(k in I, k < j)} d_j
  * Laplacian      box_{j,I} = d*_j d_j (j not in I), d_j d*_j (j in I)
  * star           S_{j,I} = r_j - box_{j,I}; entrywise it is the
                   transition-twisted adjacency operator of the link graph

where T_{c,j} is the transition of the direction-j edge at the bottom
corner of c.  All matrix blocks are assembled sparse; star matrices are
returned dense for the eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .complexes import CubicalComplex, dirs_of, mask_of
from .errors import ConstructionError, VerificationError
from .localsystems import LocalSystem, trivial_system


class Harmonics:
    """Operator workspace for one complex and one local system."""

    def __init__(self, X: CubicalComplex, L: LocalSystem | None = None):
        self.X = X
        self.L = L if L is not None else trivial_system(X)
        if self.L.fiber_dim > 0 and self.L.transitions:
            for j in range(1, X.g + 1):
                mask = 1 << (j - 1)
                if mask in X.tables and len(self.L.transitions[j - 1]) != X.tables[mask].n:
                    raise ConstructionError("local system does not match the complex")
        self.m = self.L.fiber_dim
        self.dtype = np.result_type(self.L.dtype, np.float64)
        self._reps: dict[int, np.ndarray] = {}
        self._rep_pos: dict[int, np.ndarray] = {}
        self._expand: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._bnd: dict[tuple[int, int], sparse.csr_matrix] = {}
        self._cobnd: dict[tuple[int, int], sparse.csr_matrix] = {}

    # -- representative bookkeeping ------------------------------------

    def reps(self, mask: int) -> np.ndarray:
        if mask not in self._reps:
            if self.X.has_parities:
                r = self.X.canonical_indices(mask)
            else:
                # orbit leaders: smallest oriented index in each orientation orbit
                t = self.X.tables[mask]
                leader = np.arange(t.n)
                for _ in dirs_of(mask):
                    for j in dirs_of(mask):
                        leader = np.minimum(leader, leader[t.inv[j]])
                r = np.flatnonzero(leader == np.arange(t.n))
            self._reps[mask] = r
            pos = -np.ones(self.X.tables[mask].n, dtype=np.int64)
            pos[r] = np.arange(len(r))
            self._rep_pos[mask] = pos
        return self._reps[mask]

    def rep_pos(self, mask: int) -> np.ndarray:
        self.reps(mask)
        return self._rep_pos[mask]

    def dim(self, mask: int) -> int:
        return len(self.reps(mask)) * self.m

    def level_masks(self, i: int) -> list[int]:
        return self.X.masks_of_dim(i)

    def level_dim(self, i: int) -> int:
        return sum(self.dim(mask) for mask in self.level_masks(i))

    def _edge_transitions(self, mask: int, j: int) -> np.ndarray:
        """T_{c,j} for every oriented cube of the direction set (the
        transition of the direction-j edge at the bottom corner)."""
        edges = self.X.edge_vector(mask, j)
        return self.L.transitions[j - 1][edges]

    def expand(self, mask: int):
        """Alternation data: per oriented cube, the representative slot and
        the m x m coefficient with s(cube) = coeff @ s(representative)."""
        if mask not in self._expand:
            t = self.X.tables[mask]
            pos = self.rep_pos(mask)
            slot = -np.ones(t.n, dtype=np.int64)
            coeff = np.zeros((t.n, self.m, self.m), dtype=self.dtype)
            rep = self.reps(mask)
            slot[rep] = pos[rep]
            coeff[rep] = np.eye(self.m)
            frontier = list(rep)
            trans = {j: self._edge_transitions(mask, j) for j in dirs_of(mask)}
            while frontier:
                nxt = []
                for c in frontier:
                    for j in dirs_of(mask):
                        s = t.inv[j][c]
                        if slot[s] < 0:
                            slot[s] = slot[c]
                            coeff[s] = -trans[j][c] @ coeff[c]
                            nxt.append(s)
                frontier = nxt
            if np.any(slot < 0):
                raise ConstructionError("orientation orbits do not reach representatives")
            self._expand[mask] = (slot, coeff)
        return self._expand[mask]

    # -- sparse block assembly ------------------------------------------

    def _blocks_to_csr(self, rows, cols, blocks, n_row_blocks, n_col_blocks):
        m = self.m
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        blocks = np.asarray(blocks, dtype=self.dtype)
        N = len(rows)
        if N == 0:
            return sparse.csr_matrix((n_row_blocks * m, n_col_blocks * m), dtype=self.dtype)
        rr = (rows[:, None, None] * m + np.arange(m)[None, :, None])
        cc = (cols[:, None, None] * m + np.arange(m)[None, None, :])
        rr = np.broadcast_to(rr, (N, m, m)).ravel()
        cc = np.broadcast_to(cc, (N, m, m)).ravel()
        mat = sparse.coo_matrix((blocks.ravel(), (rr, cc)),
                                shape=(n_row_blocks * m, n_col_blocks * m))
        return mat.tocsr()

    # -- boundary operators ----------------------------------------------

    def partial_boundary(self, j: int, mask: int) -> sparse.csr_matrix:
        """d_j from C^I to C^(I + {j}), I the given direction set, j not in I."""
        if mask & (1 << (j - 1)):
            raise ConstructionError(f"direction {j} already lies in the direction set")
        key = (j, mask)
        if key in self._bnd:
            return self._bnd[key]
        up = mask | (1 << (j - 1))
        t = self.X.tables[up]
        reps_up = self.reps(up)
        slot_lo, coeff_lo = self.expand(mask)
        trans = self._edge_transitions(up, j)

        tops = t.top[j][reps_up]
        bots = t.bot[j][reps_up]
        rows = np.arange(len(reps_up))
        # T^{-1} = conjugate transpose for unitary transitions
        tinv = trans[reps_up].conj().transpose(0, 2, 1)
        blk_top = np.einsum("nab,nbc->nac", tinv, coeff_lo[tops])
        blk_bot = -coeff_lo[bots]
        mat = self._blocks_to_csr(
            np.concatenate([rows, rows]),
            np.concatenate([slot_lo[tops], slot_lo[bots]]),
            np.concatenate([blk_top, blk_bot]),
            len(reps_up), len(self.reps(mask)))
        self._bnd[key] = mat
        return mat

    def partial_coboundary(self, j: int, mask: int) -> sparse.csr_matrix:
        """d*_j from C^(I + {j}) to C^I, assembled from its defining sum
        (it equals the conjugate transpose of partial_boundary)."""
        if mask & (1 << (j - 1)):
            raise ConstructionError(f"direction {j} already lies in the direction set")
        key = (j, mask)
        if key in self._cobnd:
            return self._cobnd[key]
        up = mask | (1 << (j - 1))
        t = self.X.tables[up]
        pos_lo = self.rep_pos(mask)
        slot_up, coeff_up = self.expand(up)
        trans = self._edge_transitions(up, j)

        all_up = np.arange(t.n)
        rows = pos_lo[t.top[j][all_up]]
        keep = rows >= 0
        cubes = all_up[keep]
        blk = np.einsum("nab,nbc->nac", trans[cubes], coeff_up[cubes])
        mat = self._blocks_to_csr(rows[keep], slot_up[cubes], blk,
                                  len(self.reps(mask)), len(self.reps(up)))
        self._cobnd[key] = mat
        return mat

    @staticmethod
    def _alpha(mask: int, j: int) -> int:
        """Number of directions in the set below j (the sign exponent)."""
        return bin(mask & ((1 << (j - 1)) - 1)).count("1")

    def total_d(self, i: int) -> sparse.csr_matrix:
        """d from level i to level i + 1 with alternating direction signs."""
        src = self.level_masks(i)
        dst = self.level_masks(i + 1)
        grid = [[None] * len(src) for _ in dst]
        for a, mask in enumerate(src):
            for j in range(1, self.X.g + 1):
                up = mask | (1 << (j - 1))
                if up == mask or up not in self.X.tables:
                    continue
                sign = -1.0 if self._alpha(mask, j) % 2 else 1.0
                grid[dst.index(up)][a] = self.partial_boundary(j, mask) * sign
        if not dst:
            return sparse.csr_matrix((0, self.level_dim(i)), dtype=self.dtype)
        return sparse.bmat(grid, format="csr")

    def total_dstar(self, i: int) -> sparse.csr_matrix:
        """d* from level i + 1 to level i (the adjoint of total_d(i))."""
        src = self.level_masks(i + 1)
        dst = self.level_masks(i)
        grid = [[None] * len(src) for _ in dst]
        for a, up in enumerate(src):
            for j in dirs_of(up):
                mask = up & ~(1 << (j - 1))
                sign = -1.0 if self._alpha(mask, j) % 2 else 1.0
                grid[dst.index(mask)][a] = self.partial_coboundary(j, mask) * sign
        if not src:
            return sparse.csr_matrix((self.level_dim(i), 0), dtype=self.dtype)
        return sparse.bmat(grid, format="csr")

    # -- Laplacians and star operators ------------------------------------

    def laplacian(self, j: int, mask: int) -> sparse.csr_matrix:
        """box_{j,I} on C^I: d*_j d_j when j is outside I, d_j d*_j inside."""
        if mask & (1 << (j - 1)):
            sub = mask & ~(1 << (j - 1))
            return self.partial_boundary(j, sub) @ self.partial_coboundary(j, sub)
        return self.partial_coboundary(j, mask) @ self.partial_boundary(j, mask)

    def total_laplacian(self, mask: int) -> sparse.csr_matrix:
        out = None
        for j in range(1, self.X.g + 1):
            if (mask | (1 << (j - 1))) not in self.X.tables and not mask & (1 << (j - 1)):
                continue
            term = self.laplacian(j, mask)
            out = term if out is None else out + term
        return out

    def total_laplacian_level(self, i: int) -> sparse.csr_matrix:
        return sparse.block_diag([self.total_laplacian(m) for m in self.level_masks(i)],
                                 format="csr")

    def star_matrix(self, j: int, mask: int) -> np.ndarray:
        """Dense Hermitian star operator on C^I: the transition-twisted
        adjacency operator of the directional link graph."""
        if mask & (1 << (j - 1)):
            raise ConstructionError(f"direction {j} lies in the direction set")
        up = mask | (1 << (j - 1))
        if up not in self.X.tables:
            raise ConstructionError("no cubes extend the direction set")
        t = self.X.tables[up]
        pos = self.rep_pos(mask)
        trans = self._edge_transitions(up, j)
        if self.X.has_parities:
            o = self.X.origin(up)
            keep = np.ones(t.n, dtype=bool)
            for k in dirs_of(mask):
                keep &= self.X.parities[o, k - 1] == 0
            edges = np.flatnonzero(keep)
        else:
            if mask != 0:
                raise ConstructionError("star on positive-dimensional cochains requires parities")
            edges = np.arange(t.n)
        rows = pos[t.top[j][edges]]
        cols = pos[t.bot[j][edges]]
        if rows.min(initial=0) < 0 or cols.min(initial=0) < 0:
            raise ConstructionError("link edge hit a non-representative face")
        n = len(self.reps(mask))
        m = self.m
        out = np.zeros((n * m, n * m), dtype=self.dtype)
        for e, r_, c_ in zip(edges, rows, cols):
            out[r_ * m:(r_ + 1) * m, c_ * m:(c_ + 1) * m] += trans[e]
        return out

    # -- spectra, cohomology, Hodge ---------------------------------------

    def cohomology_dims(self, rank_tol: float = 1e-8) -> list[int]:
        """Betti numbers h^0..h^g of the total complex via numerical ranks."""
        ranks = []
        for i in range(self.X.g):
            D = self.total_d(i)
            if min(D.shape) == 0:
                ranks.append(0)
                continue
            sv = np.linalg.svd(D.toarray(), compute_uv=False)
            ranks.append(int(np.sum(sv > rank_tol * sv[0])) if sv[0] > 0 else 0)
        dims = [self.level_dim(i) for i in range(self.X.g + 1)]
        h = []
        for i in range(self.X.g + 1):
            r_out = ranks[i] if i < self.X.g else 0
            r_in = ranks[i - 1] if i > 0 else 0
            h.append(dims[i] - r_out - r_in)
        return h

    def euler_characteristic(self) -> int:
        """Independent alternating sum over unoriented cube counts."""
        chi = 0
        for mask, cnt in self.X.unoriented_counts().items():
            chi += (-1) ** bin(mask).count("1") * cnt * self.m
        return chi

    @staticmethod
    def _project_onto_range(A: sparse.csr_matrix, c: np.ndarray) -> np.ndarray:
        """Orthogonal projection of c onto the column space of A."""
        if A.shape[0] * A.shape[1] <= 4_000_000:
            Ad = A.toarray()
            x, *_ = np.linalg.lstsq(Ad, c, rcond=None)
            return Ad @ x
        from scipy.sparse.linalg import lsmr
        x = lsmr(A, c, atol=1e-13, btol=1e-13, maxiter=10 * max(A.shape))[0]
        return A @ x

    def hodge_project(self, i: int, c: np.ndarray):
        """Split a level-i cochain into (harmonic, image of d, image of d*)."""
        c = np.asarray(c, dtype=self.dtype)
        p_d = np.zeros_like(c)
        p_ds = np.zeros_like(c)
        if i > 0:
            p_d = self._project_onto_range(self.total_d(i - 1).tocsr(), c)
        if i < self.X.g:
            p_ds = self._project_onto_range(self.total_d(i).conj().T.tocsr(), c)
        return c - p_d - p_ds, p_d, p_ds

    def eigenspace_transfer_check(self, j: int, mask: int, tol: float = 1e-8):
        """Nonzero spectra of box_j agree on C^I and C^(I + {j}) (with
        multiplicity); the zero eigenspaces are excluded."""
        up = mask | (1 << (j - 1))
        lo = spectrum(self.laplacian(j, mask).toarray())
        hi = spectrum(self.laplacian(j, up).toarray())
        zero_tol = tol * max(1.0, self.X.r(j))
        lo_nz = lo[lo > zero_tol]
        hi_nz = hi[hi > zero_tol]
        if len(lo_nz) != len(hi_nz):
            return False, {"lower": len(lo_nz), "upper": len(hi_nz)}
        mism = float(np.max(np.abs(lo_nz - hi_nz))) if len(lo_nz) else 0.0
        return mism <= tol * max(1.0, self.X.r(j)), {"max_mismatch": mism,
                                                     "count": len(lo_nz)}


# ----------------------------------------------------------------------
# spectra and classification

def spectrum(M: np.ndarray, hermitian_tol: float = 1e-10) -> np.ndarray:
    """All real eigenvalues of a Hermitian matrix, descending."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("spectrum expects a square matrix")
    if not np.allclose(M, M.conj().T, rtol=0.0, atol=hermitian_tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(M)[::-1]


@dataclass
class RamanujanVerdict:
    r: int
    bound: float                 # 2 sqrt(r - 1)
    mu: float                    # largest |eigenvalue| away from +-r
    is_ramanujan: bool
    trivial_plus: int            # multiplicity of +r
    trivial_minus: int           # multiplicity of -r
    n_nontrivial: int
    gap: float                   # r - mu
    tol: float


def classify_ramanujan(eigs, r: int, tol: float = 1e-8) -> RamanujanVerdict:
    """Split off the trivial eigenvalues +-r and test mu <= 2 sqrt(r-1).

    The +r multiplicity counts the connected components of the underlying
    link graph (for the trivial system) and -r its bipartite components."""
    eigs = np.asarray(eigs, dtype=float)
    window = tol * max(r, 1)
    plus = np.abs(eigs - r) <= window
    minus = np.abs(eigs + r) <= window
    nontrivial = eigs[~(plus | minus)]
    mu = float(np.max(np.abs(nontrivial))) if nontrivial.size else 0.0
    bound = 2.0 * math.sqrt(max(r - 1, 0))
    return RamanujanVerdict(r, bound, mu, mu <= bound + tol,
                            int(plus.sum()), int(minus.sum()),
                            int(nontrivial.size), r - mu, tol)


@dataclass
class SpectrumEntry:
    j: int
    dirs: tuple[int, ...]
    dim: int
    eigenvalues: np.ndarray
    verdict: RamanujanVerdict


@dataclass
class SpectrumReport:
    entries: list[SpectrumEntry] = field(default_factory=list)

    @property
    def overall_ramanujan(self) -> bool:
        return all(e.verdict.is_ramanujan for e in self.entries)

    def mu_by_level(self) -> dict:
        """Per (j, i): the maximum mu over direction sets of size i."""
        out: dict = {}
        for e in self.entries:
            key = (e.j, len(e.dirs))
            out[key] = max(out.get(key, 0.0), e.verdict.mu)
        return out

    def csv_rows(self):
        """Rows (j, dirs-bitmask, index, eigenvalue, class)."""
        for e in self.entries:
            window = e.verdict.tol * max(e.verdict.r, 1)
            for idx, lam in enumerate(e.eigenvalues):
                if abs(lam - e.verdict.r) <= window:
                    cls = "trivial+"
                elif abs(lam + e.verdict.r) <= window:
                    cls = "trivial-"
                else:
                    cls = "nontrivial"
                yield (e.j, mask_of(e.dirs), idx, float(lam), cls)


def spectrum_report(X: CubicalComplex, L: LocalSystem | None = None,
                    tol: float = 1e-8, max_dim: int = 20000,
                    workspace: Harmonics | None = None) -> SpectrumReport:
    """Star spectra and Ramanujan verdicts for every admissible (j, I)."""
    H = workspace if workspace is not None else Harmonics(X, L)
    report = SpectrumReport()
    for mask in X.masks():
        for j in range(1, X.g + 1):
            bit = 1 << (j - 1)
            if mask & bit or (mask | bit) not in X.tables:
                continue
            dim = H.dim(mask)
            if dim > max_dim:
                raise VerificationError(
                    f"star operator dimension {dim} exceeds the cap {max_dim}; "
                    f"raise max_dim to proceed")
            S = H.star_matrix(j, mask)
            eigs = spectrum(S)
            verdict = classify_ramanujan(eigs, X.r(j), tol)
            report.entries.append(SpectrumEntry(j, dirs_of(mask), dim, eigs, verdict))
    return report


# ----------------------------------------------------------------------
# convenience wrappers taking direction tuples

def partial_boundary(X, L, j, dirs=()):
    return Harmonics(X, L).partial_boundary(j, mask_of(dirs))


def partial_coboundary(X, L, j, dirs=()):
    return Harmonics(X, L).partial_coboundary(j, mask_of(dirs))


def total_d(X, L, i):
    return Harmonics(X, L).total_d(i)


def total_dstar(X, L, i):
    return Harmonics(X, L).total_dstar(i)


def laplacian(X, L, j, dirs=()):
    return Harmonics(X, L).laplacian(j, mask_of(dirs))


def total_laplacian(X, L, i):
    return Harmonics(X, L).total_laplacian_level(i)


def star_matrix(X, L, j, dirs=()):
    return Harmonics(X, L).star_matrix(j, mask_of(dirs))


def hodge_project(X, L, i, c):
    return Harmonics(X, L).hodge_project(i, c)


def cohomology_dims(X, L, rank_tol: float = 1e-8):
    return Harmonics(X, L).cohomology_dims(rank_tol)


def eigenspace_transfer_check(X, L, j, dirs=(), tol: float = 1e-8):
    return Harmonics(X, L).eigenspace_transfer_check(j, mask_of(dirs), tol)

"""Finite regular cubical complexes with oriented cube tables.

A complex of dimension g stores, for every direction subset I of {1..g},
the set of oriented I-cubes together with three families of maps:

  bot_j, top_j : oriented I-cubes -> oriented (I - {j})-cubes   (j in I)
  inv_j       : oriented I-cubes -> oriented I-cubes            (j in I)

subject to the axioms

  (1) the inv_j generate a copy of (Z/2)^I acting simply transitively on
      the orientations of each cube,
  (2) top_j inv_k = inv_k top_j and bot_j inv_k = inv_k bot_j for j != k,
  (3) top_j inv_j = bot_j,
  (4) every oriented I-cube is the j-th top of exactly r_j oriented
      (I + {j})-cubes for j not in I.

Direction subsets are keyed by bitmask (bit j-1 for direction j).  Vertices
may carry per-direction parities p_j in {0,1}, flipped exactly by
direction-j edges; when parities are present each unoriented cube has a
canonical orientation (the one whose bottom vertex has parity 0 in every
direction of I).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError


def mask_of(dirs) -> int:
    m = 0
    for j in dirs:
        m |= 1 << (j - 1)
    return m


def dirs_of(mask: int) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


@dataclass
class CubeTable:
    """Oriented cubes of one direction set, with face and inversion maps."""

    n: int
    bot: dict[int, np.ndarray] = field(default_factory=dict)
    top: dict[int, np.ndarray] = field(default_factory=dict)
    inv: dict[int, np.ndarray] = field(default_factory=dict)


class CubicalComplex:
    def __init__(self, g: int, regularities, tables: dict[int, CubeTable],
                 parities=None, vertex_labels=None):
        self.g = g
        self.regularities = tuple(regularities)
        self.tables = tables
        self.parities = None if parities is None else np.asarray(parities, dtype=np.uint8)
        self.vertex_labels = vertex_labels
        self.arith = None  # set by the arithmetic builder
        self._origin_cache: dict[int, np.ndarray] = {}

    @property
    def n_vertices(self) -> int:
        return self.tables[0].n

    @property
    def has_parities(self) -> bool:
        return self.parities is not None

    def masks(self):
        return sorted(self.tables)

    def masks_of_dim(self, i: int):
        return [m for m in self.masks() if bin(m).count("1") == i]

    def n_cubes(self, mask: int) -> int:
        return self.tables[mask].n

    def r(self, j: int) -> int:
        return self.regularities[j - 1]

    def origin(self, mask: int) -> np.ndarray:
        """Iterated bottom vertex of every oriented cube of this direction set."""
        if mask not in self._origin_cache:
            idx = np.arange(self.tables[mask].n)
            m = mask
            for j in dirs_of(mask):
                idx = self.tables[m].bot[j][idx]
                m &= ~(1 << (j - 1))
            self._origin_cache[mask] = idx
        return self._origin_cache[mask]

    def edge_vector(self, mask: int, j: int) -> np.ndarray:
        """Oriented direction-j edge at the bottom corner of each cube
        (iterated bottom over all other directions)."""
        idx = np.arange(self.tables[mask].n)
        m = mask
        for k in dirs_of(mask):
            if k == j:
                continue
            idx = self.tables[m].bot[k][idx]
            m &= ~(1 << (k - 1))
        return idx

    def canonical_indices(self, mask: int) -> np.ndarray:
        """Oriented cubes whose bottom vertex has parity 0 in every direction
        of the cube (one per unoriented cube).  Vertices (mask 0) carry no
        orientation and need no parities."""
        if mask == 0:
            return np.arange(self.tables[0].n)
        if not self.has_parities:
            raise ConstructionError("canonical orientations require parities")
        o = self.origin(mask)
        keep = np.ones(len(o), dtype=bool)
        for j in dirs_of(mask):
            keep &= self.parities[o, j - 1] == 0
        return np.flatnonzero(keep)

    def unoriented_counts(self) -> dict[int, int]:
        return {m: self.tables[m].n >> bin(m).count("1") for m in self.masks()}

    def __repr__(self):
        return (f"CubicalComplex(g={self.g}, r={self.regularities}, "
                f"vertices={self.n_vertices})")


@dataclass
class AxiomFailure:
    axiom: int
    mask: int
    index: int
    detail: str


@dataclass
class AxiomReport:
    passed: bool
    failures: list[AxiomFailure]
    checked: dict[int, bool]

    def __bool__(self):
        return self.passed


def _first_bad(cond: np.ndarray) -> int:
    return int(np.flatnonzero(~cond)[0])


def verify_axioms(X: CubicalComplex) -> AxiomReport:
    """Exhaustively check axioms (1)-(4); failures are reported with a witness."""
    failures = []
    checked = {1: True, 2: True, 3: True, 4: True}

    for mask in X.masks():
        if mask == 0:
            continue
        t = X.tables[mask]
        dirs = dirs_of(mask)
        idx = np.arange(t.n)

        # (1) each inv_j is a fixed-point-free involution, they commute, and
        # orbits have full size 2^|I|
        for j in dirs:
            if not np.all(t.inv[j][t.inv[j]] == idx):
                failures.append(AxiomFailure(1, mask, _first_bad(t.inv[j][t.inv[j]] == idx),
                                             f"inv_{j} is not an involution"))
            if np.any(t.inv[j] == idx):
                failures.append(AxiomFailure(1, mask, _first_bad(t.inv[j] != idx),
                                             f"inv_{j} has a fixed point"))
        for a in dirs:
            for b in dirs:
                if a < b and not np.all(t.inv[a][t.inv[b]] == t.inv[b][t.inv[a]]):
                    failures.append(AxiomFailure(1, mask,
                                                 _first_bad(t.inv[a][t.inv[b]] == t.inv[b][t.inv[a]]),
                                                 f"inv_{a} and inv_{b} do not commute"))
        orbit = idx[None, :]
        for j in dirs:
            orbit = np.concatenate([orbit, t.inv[j][orbit]], axis=0)
        distinct = np.sort(orbit, axis=0)
        full = np.all(distinct[1:] != distinct[:-1], axis=0)
        if not np.all(full):
            failures.append(AxiomFailure(1, mask, _first_bad(full),
                                         "orientation orbit smaller than 2^|I|"))

        # (2) face maps commute with inversions in other directions
        for j in dirs:
            sub = mask & ~(1 << (j - 1))
            ts = X.tables[sub]
            for k in dirs:
                if k == j:
                    continue
                if not np.all(t.top[j][t.inv[k]] == ts.inv[k][t.top[j]]):
                    failures.append(AxiomFailure(2, mask,
                                                 _first_bad(t.top[j][t.inv[k]] == ts.inv[k][t.top[j]]),
                                                 f"top_{j} does not commute with inv_{k}"))
                if not np.all(t.bot[j][t.inv[k]] == ts.inv[k][t.bot[j]]):
                    failures.append(AxiomFailure(2, mask,
                                                 _first_bad(t.bot[j][t.inv[k]] == ts.inv[k][t.bot[j]]),
                                                 f"bot_{j} does not commute with inv_{k}"))

        # (3) top_j inv_j = bot_j
        for j in dirs:
            if not np.all(t.top[j][t.inv[j]] == t.bot[j]):
                failures.append(AxiomFailure(3, mask,
                                             _first_bad(t.top[j][t.inv[j]] == t.bot[j]),
                                             f"top_{j} inv_{j} != bot_{j}"))

    # (4) every oriented I-cube is the j-th top of exactly r_j (I+{j})-cubes
    for mask in X.masks():
        for j in range(1, X.g + 1):
            up = mask | (1 << (j - 1))
            if up == mask or up not in X.tables:
                continue
            counts = np.bincount(X.tables[up].top[j], minlength=X.tables[mask].n)
            if not np.all(counts == X.r(j)):
                failures.append(AxiomFailure(4, mask, _first_bad(counts == X.r(j)),
                                             f"not the {j}-top of exactly r_{j} cubes"))

    for f in failures:
        checked[f.axiom] = False
    return AxiomReport(not failures, failures, checked)


def verify_parities(X: CubicalComplex):
    """Check p_j(top e) = p_j(bot e) exactly for j different from the edge
    direction.  Returns (ok, witness) with witness = (direction, edge index)."""
    if not X.has_parities:
        raise ConstructionError("complex carries no parities")
    p = X.parities
    for j in range(1, X.g + 1):
        mask = 1 << (j - 1)
        if mask not in X.tables:
            continue
        t = X.tables[mask]
        bv = p[t.bot[j]]
        tv = p[t.top[j]]
        same = bv == tv
        want = np.ones(X.g, dtype=bool)
        want[j - 1] = False
        ok = np.all(same == want[None, :], axis=1)
        if not np.all(ok):
            return False, (j, _first_bad(ok))
    return True, None


def infer_parities(X: CubicalComplex):
    """Propagate parities from an arbitrary basepoint of each component.

    Returns an (n_vertices, g) array, or None when no consistent assignment
    exists (some direction has an odd closed walk)."""
    n = X.n_vertices
    par = -np.ones((n, X.g), dtype=np.int16)
    adj = [[] for _ in range(n)]
    for j in range(1, X.g + 1):
        mask = 1 << (j - 1)
        if mask not in X.tables:
            continue
        t = X.tables[mask]
        for e in range(t.n):
            adj[t.bot[j][e]].append((t.top[j][e], j))
    for s in range(n):
        if par[s, 0] >= 0:
            continue
        par[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w, j in adj[v]:
                want = par[v].copy()
                want[j - 1] ^= 1
                if par[w, 0] < 0:
                    par[w] = want
                    stack.append(w)
                elif not np.array_equal(par[w], want):
                    return None
    return par.astype(np.uint8)


def product(X1: CubicalComplex, X2: CubicalComplex) -> CubicalComplex:
    """Product complex: directions of X2 are shifted past those of X1."""
    g = X1.g + X2.g
    tables: dict[int, CubeTable] = {}
    for m1 in X1.masks():
        for m2 in X2.masks():
            mask = m1 | (m2 << X1.g)
            t1, t2 = X1.tables[m1], X2.tables[m2]
            n1, n2 = t1.n, t2.n
            t = CubeTable(n1 * n2)
            i1 = np.repeat(np.arange(n1), n2)
            i2 = np.tile(np.arange(n2), n1)
            for j in dirs_of(m1):
                t.bot[j] = t1.bot[j][i1] * n2 + i2
                t.top[j] = t1.top[j][i1] * n2 + i2
                t.inv[j] = t1.inv[j][i1] * n2 + i2
            for j2 in dirs_of(m2):
                j = j2 + X1.g
                t.bot[j] = i1 * X2.tables[m2 & ~(1 << (j2 - 1))].n + t2.bot[j2][i2]
                t.top[j] = i1 * X2.tables[m2 & ~(1 << (j2 - 1))].n + t2.top[j2][i2]
                t.inv[j] = i1 * n2 + t2.inv[j2][i2]
            tables[mask] = t
    parities = None
    if X1.has_parities and X2.has_parities:
        n1, n2 = X1.n_vertices, X2.n_vertices
        i1 = np.repeat(np.arange(n1), n2)
        i2 = np.tile(np.arange(n2), n1)
        parities = np.concatenate([X1.parities[i1], X2.parities[i2]], axis=1)
    labels = None
    if X1.vertex_labels is not None and X2.vertex_labels is not None:
        labels = [f"{a}|{b}" for a in X1.vertex_labels for b in X2.vertex_labels]
    return CubicalComplex(g, X1.regularities + X2.regularities, tables, parities, labels)


def disjoint_union(X1: CubicalComplex, X2: CubicalComplex) -> CubicalComplex:
    if X1.g != X2.g or X1.regularities != X2.regularities:
        raise ConstructionError("disjoint union requires equal dimensions and regularities")
    tables = {}
    for mask in X1.masks():
        t1, t2 = X1.tables[mask], X2.tables[mask]
        t = CubeTable(t1.n + t2.n)
        for j in dirs_of(mask):
            sub = mask & ~(1 << (j - 1))
            off = X1.tables[sub].n
            t.bot[j] = np.concatenate([t1.bot[j], t2.bot[j] + off])
            t.top[j] = np.concatenate([t1.top[j], t2.top[j] + off])
            t.inv[j] = np.concatenate([t1.inv[j], t2.inv[j] + t1.n])
        tables[mask] = t
    parities = None
    if X1.has_parities and X2.has_parities:
        parities = np.concatenate([X1.parities, X2.parities], axis=0)
    return CubicalComplex(X1.g, X1.regularities, tables, parities)


@dataclass
class LinkGraph:
    """Directional link: vertices are canonical I-cubes, oriented edges are
    the (I + {j})-cubes whose I-part of the orientation is canonical."""

    j: int
    mask: int
    r: int
    n_vertices: int
    vertex_cubes: np.ndarray    # oriented I-cube index per link vertex
    edge_cubes: np.ndarray      # oriented (I+{j})-cube index per link edge
    origin: np.ndarray
    terminus: np.ndarray
    opposite: np.ndarray
    vertex_labels: list[str] | None = None


def link_graph(X: CubicalComplex, j: int, dirs=()) -> LinkGraph:
    """The graph whose vertices are the I-cubes and whose edges are the
    (I + {j})-cubes, for j not in I.  Requires parities."""
    mask = mask_of(dirs) if not isinstance(dirs, int) else dirs
    if mask & (1 << (j - 1)):
        raise ConstructionError(f"direction {j} lies in the cube directions")
    up = mask | (1 << (j - 1))
    if up not in X.tables:
        raise ConstructionError("no cubes in the requested directions")
    verts = X.canonical_indices(mask)
    vpos = -np.ones(X.tables[mask].n, dtype=np.int64)
    vpos[verts] = np.arange(len(verts))

    o = X.origin(up)
    keep = np.ones(len(o), dtype=bool)
    for k in dirs_of(mask):
        keep &= X.parities[o, k - 1] == 0
    edges = np.flatnonzero(keep)
    epos = -np.ones(X.tables[up].n, dtype=np.int64)
    epos[edges] = np.arange(len(edges))

    t = X.tables[up]
    origin = vpos[t.bot[j][edges]]
    terminus = vpos[t.top[j][edges]]
    opposite = epos[t.inv[j][edges]]
    if origin.min(initial=0) < 0 or terminus.min(initial=0) < 0 or opposite.min(initial=0) < 0:
        raise ConstructionError("link extraction hit a non-canonical face; parities inconsistent")

    labels = None
    if mask == 0 and X.vertex_labels is not None:
        labels = [X.vertex_labels[i] for i in verts]
    return LinkGraph(j, mask, X.r(j), len(verts), verts, edges,
                     origin, terminus, opposite, labels)


def connected_components(link: LinkGraph):
    """Union-find over the link graph.  Returns (count, labels)."""
    parent = np.arange(link.n_vertices)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in zip(link.origin, link.terminus):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    labels = np.array([find(a) for a in range(link.n_vertices)])
    roots, labels = np.unique(labels, return_inverse=True)
    return len(roots), labels


# ----------------------------------------------------------------------
# small constructors (used by tests and demos)

def graph_complex(n_vertices: int, edges, r: int, parities=None) -> CubicalComplex:
    """A 1-dimensional complex from an undirected edge list."""
    m = len(edges)
    bot = np.empty(2 * m, dtype=np.int64)
    top = np.empty(2 * m, dtype=np.int64)
    inv = np.empty(2 * m, dtype=np.int64)
    for t, (u, v) in enumerate(edges):
        bot[2 * t], top[2 * t] = u, v
        bot[2 * t + 1], top[2 * t + 1] = v, u
        inv[2 * t], inv[2 * t + 1] = 2 * t + 1, 2 * t
    tables = {0: CubeTable(n_vertices), 1: CubeTable(2 * m, {1: bot}, {1: top}, {1: inv})}
    if parities is not None:
        parities = np.asarray(parities, dtype=np.uint8).reshape(n_vertices, 1)
    return CubicalComplex(1, (r,), tables, parities)


def cycle_complex(n: int) -> CubicalComplex:
    edges = [(v, (v + 1) % n) for v in range(n)]
    parities = [[v % 2] for v in range(n)] if n % 2 == 0 else None
    return graph_complex(n, edges, 2, parities)


def complete_graph_complex(n: int) -> CubicalComplex:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return graph_complex(n, edges, n - 1)


def box_complex(g: int) -> CubicalComplex:
    """The unit g-cube: a (1,...,1)-regular complex on 2^g vertices.

    Oriented I-cubes are encoded by their base corner in {0,1}^g; flipping
    the orientation in direction j moves the base across that direction."""
    tables = {}
    n = 1 << g
    for mask in range(1 << g):
        t = CubeTable(n)
        for j in dirs_of(mask):
            bit = 1 << (j - 1)
            idx = np.arange(n)
            t.bot[j] = idx
            t.top[j] = idx ^ bit
            t.inv[j] = idx ^ bit
        tables[mask] = t
    parities = np.array([[(c >> (j - 1)) & 1 for j in range(1, g + 1)] for c in range(n)],
                        dtype=np.uint8)
    return CubicalComplex(g, (1,) * g, tables, parities)


# ----------------------------------------------------------------------
# DOT export

def skeleton_dot(X: CubicalComplex, name: str = "skeleton") -> str:
    """The 1-skeleton as undirected DOT, one edge per unoriented edge,
    with a dir attribute naming the tree direction."""
    lines = [f"graph {name} {{"]
    for v in range(X.n_vertices):
        label = X.vertex_labels[v] if X.vertex_labels is not None else str(v)
        lines.append(f'  v{v} [label="{label}"];')
    for j in range(1, X.g + 1):
        mask = 1 << (j - 1)
        if mask not in X.tables:
            continue
        t = X.tables[mask]
        for e in range(t.n):
            if e < t.inv[j][e]:
                lines.append(f"  v{t.bot[j][e]} -- v{t.top[j][e]} [dir={j}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def link_dot(link: LinkGraph, name: str = "link") -> str:
    lines = [f"graph {name} {{"]
    for v in range(link.n_vertices):
        label = link.vertex_labels[v] if link.vertex_labels is not None else str(v)
        lines.append(f'  v{v} [label="{label}"];')
    for e in range(len(link.edge_cubes)):
        if e < link.opposite[e]:
            lines.append(f"  v{link.origin[e]} -- v{link.terminus[e]} [dir={link.j}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, path) -> None:
    text = skeleton_dot(obj) if isinstance(obj, CubicalComplex) else link_dot(obj)
    with open(path, "w") as fh:
        fh.write(text)

"""Finite Delta-complexes, their integer chain complexes, and chains.

A Delta-complex is encoded by facet references: a p-simplex lists the
indices of its p+1 facets (simplices of dimension p-1) in face order, so
vertex orderings are implicit in facet position and identifications such
as the one-vertex torus are expressible.  Cell ids are (dim, index)
pairs.  The induced boundary matrices must satisfy boundary-of-boundary
= 0; construction fails otherwise.

Complexes built from explicit vertex tuples additionally remember the
tuple of each simplex, which is what the signed vertex-permutation
action (and hence the oriented chain quotient) needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque

import numpy as np

from .snf import as_int_matrix, zero_matrix

Cell = tuple[int, int]  # (dimension, index)


@dataclass(frozen=True)
class IntegerChain:
    """Sparse integer combination of p-simplices; no zero coefficients."""

    degree: int
    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): int(v) for k, v in self.coeffs.items() if int(v) != 0}
        object.__setattr__(self, "coeffs", clean)

    def l1(self) -> int:
        return sum(abs(v) for v in self.coeffs.values())

    def __add__(self, other: "IntegerChain") -> "IntegerChain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return IntegerChain(self.degree, out)

    def __sub__(self, other: "IntegerChain") -> "IntegerChain":
        return self + other.scale(-1)

    def scale(self, a: int) -> "IntegerChain":
        return IntegerChain(self.degree, {k: a * v for k, v in self.coeffs.items()})

    def __neg__(self) -> "IntegerChain":
        return self.scale(-1)

    def to_vector(self, length: int) -> list[int]:
        v = [0] * length
        for k, c in self.coeffs.items():
            if not 0 <= k < length:
                raise ValueError(f"simplex index {k} out of range for length {length}")
            v[k] = c
        return v

    @classmethod
    def from_vector(cls, degree: int, vec) -> "IntegerChain":
        return cls(degree, {i: int(v) for i, v in enumerate(vec) if int(v) != 0})


def l1_norm(c: IntegerChain) -> int:
    """Sum of absolute coefficients of a chain."""
    return c.l1()


@dataclass(frozen=True)
class ChainComplexZ:
    """Free graded Z-modules with integer boundary matrices.

    boundaries[i] is the matrix of d_{i+1} : C_{i+1} -> C_i, of shape
    dims[i] x dims[i+1].  Composites of consecutive boundaries must
    vanish identically; this is checked at construction.
    """

    dims: tuple[int, ...]
    boundaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        mats = []
        for i, B in enumerate(self.boundaries):
            B = as_int_matrix(B)
            want = (dims[i], dims[i + 1])
            if B.shape != want:
                raise ValueError(f"boundary {i + 1} has shape {B.shape}, expected {want}")
            mats.append(B)
        object.__setattr__(self, "boundaries", tuple(mats))
        for i in range(len(mats) - 1):
            if 0 in mats[i].shape or 0 in mats[i + 1].shape:
                continue
            prod = mats[i] @ mats[i + 1]
            if any(prod[r, c] != 0 for r in range(prod.shape[0]) for c in range(prod.shape[1])):
                raise ValueError(f"boundary composition d_{i + 1} d_{i + 2} != 0")

    @property
    def dim(self) -> int:
        return len(self.dims) - 1

    def boundary(self, p: int) -> np.ndarray:
        """Matrix of d_p : C_p -> C_{p-1} for 1 <= p <= dim."""
        if not 1 <= p <= self.dim:
            raise ValueError(f"degree {p} out of range 1..{self.dim}")
        return self.boundaries[p - 1]

    def rank(self, p: int) -> int:
        if not 0 <= p <= self.dim:
            raise ValueError(f"degree {p} out of range 0..{self.dim}")
        return self.dims[p]

    def boundary_of(self, c: IntegerChain) -> IntegerChain:
        p = c.degree
        if p == 0:
            return IntegerChain(-1, {})
        B = self.boundary(p)
        out = {}
        for j, a in c.coeffs.items():
            if not 0 <= j < self.dims[p]:
                raise ValueError(f"simplex index {j} out of range in degree {p}")
            for i in range(self.dims[p - 1]):
                v = B[i, j]
                if v:
                    out[i] = out.get(i, 0) + a * int(v)
        return IntegerChain(p - 1, out)

    def is_cycle(self, c: IntegerChain) -> bool:
        if c.degree == 0:
            return True
        return not self.boundary_of(c).coeffs


@dataclass(frozen=True)
class PseudomanifoldReport:
    pure: bool
    facet_counts_ok: bool
    strongly_connected: bool
    offenders: dict

    @property
    def ok(self) -> bool:
        return self.pure and self.facet_counts_ok and self.strongly_connected


class DeltaComplex:
    """Finite Delta-complex given by facet-reference tables.

    ``simplices[p-1][i]`` is the list of p+1 facet indices of the i-th
    p-simplex (facets live in dimension p-1; dimension-0 facets are
    vertex indices).  ``vertex_tuples`` is present only for complexes
    built from explicit vertex tuples.
    """

    def __init__(self, vertices: int, simplices: list[list[list[int]]],
                 vertex_tuples: list[list[tuple[int, ...]]] | None = None):
        self.vertices = int(vertices)
        if self.vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        self.simplices = [[list(map(int, s)) for s in level] for level in simplices]
        for p_minus_1, level in enumerate(self.simplices):
            p = p_minus_1 + 1
            lower = self.vertices if p == 1 else len(self.simplices[p - 2])
            for idx, refs in enumerate(level):
                if len(refs) != p + 1:
                    raise ValueError(
                        f"{p}-simplex {idx} lists {len(refs)} facets, expected {p + 1}")
                for r in refs:
                    if not 0 <= r < lower:
                        raise ValueError(
                            f"{p}-simplex {idx} references missing facet {r} "
                            f"in dimension {p - 1}")
        self.vertex_tuples = None
        if vertex_tuples is not None:
            vt = [[tuple(int(v) for v in t) for t in level] for level in vertex_tuples]
            if len(vt) != len(self.simplices) + 1:
                raise ValueError("vertex_tuples must cover dimensions 0..dim")
            self.vertex_tuples = vt
        self._boundaries: dict[int, np.ndarray] = {}
        self._check_dd_zero()

    # -- construction -------------------------------------------------

    @classmethod
    def from_vertex_tuples(cls, top_tuples, dim: int | None = None) -> "DeltaComplex":
        """Build a complex from vertex tuples, closing under face deletion.

        Each distinct tuple becomes one simplex; the i-th facet of a
        tuple is the tuple with its i-th entry deleted.  Tuples with
        repeated vertices are allowed (they are degenerate simplices and
        project to zero in the oriented quotient).
        """
        tuples = [tuple(int(v) for v in t) for t in top_tuples]
        if not tuples:
            raise ValueError("need at least one simplex")
        d = dim if dim is not None else max(len(t) for t in tuples) - 1
        by_dim: list[dict[tuple[int, ...], int]] = [dict() for _ in range(d + 1)]

        def register(t: tuple[int, ...]) -> int:
            p = len(t) - 1
            if t in by_dim[p]:
                return by_dim[p][t]
            idx = len(by_dim[p])
            by_dim[p][t] = idx
            return idx

        queue = deque(tuples)
        while queue:
            t = queue.popleft()
            p = len(t) - 1
            if t in by_dim[p]:
                continue
            register(t)
            if p > 0:
                for i in range(p + 1):
                    queue.append(t[:i] + t[i + 1:])
        # vertex index in the complex = the vertex id itself
        vert_ids = sorted(v for (v,) in by_dim[0])
        if vert_ids != list(range(len(vert_ids))):
            raise ValueError("vertex ids must be 0..n-1 with no gaps")
        by_dim[0] = {(v,): v for v in vert_ids}
        n_vertices = len(vert_ids)
        simplices = []
        vertex_tuples = [[(v,) for v in range(n_vertices)]]
        for p in range(1, d + 1):
            ordered = sorted(by_dim[p], key=lambda t: (by_dim[p][t]))
            index_of = {t: i for i, t in enumerate(ordered)}
            by_dim[p] = index_of
            level = []
            for t in ordered:
                refs = []
                for i in range(p + 1):
                    face = t[:i] + t[i + 1:]
                    refs.append(by_dim[p - 1][face])
                level.append(refs)
            simplices.append(level)
            vertex_tuples.append(ordered)
        return cls(n_vertices, simplices, vertex_tuples=vertex_tuples)

    # -- basic accessors ----------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices)

    def n_cells(self, p: int) -> int:
        if p == 0:
            return self.vertices
        if 1 <= p <= self.dim:
            return len(self.simplices[p - 1])
        return 0

    def cells(self) -> list[Cell]:
        out = [(0, i) for i in range(self.vertices)]
        for p in range(1, self.dim + 1):
            out.extend((p, i) for i in range(self.n_cells(p)))
        return out

    def facet_refs(self, cell: Cell) -> list[int]:
        p, i = cell
        if p == 0:
            return []
        return self.simplices[p - 1][i]

    def facets_with_signs(self, cell: Cell) -> list[tuple[int, int]]:
        """(facet index, (-1)^position) per appearance, in face order."""
        return [(f, -1 if k % 2 else 1) for k, f in enumerate(self.facet_refs(cell))]

    def boundary_matrix(self, p: int) -> np.ndarray:
        """Matrix of d_p; column j is the alternating facet sum of p-simplex j."""
        if not 1 <= p <= self.dim:
            raise ValueError(f"degree {p} out of range 1..{self.dim}")
        if p in self._boundaries:
            return self._boundaries[p]
        m, n = self.n_cells(p - 1), self.n_cells(p)
        B = zero_matrix(m, n)
        for j in range(n):
            for f, s in self.facets_with_signs((p, j)):
                B[f, j] += s
        self._boundaries[p] = B
        return B

    def chain_complex(self) -> ChainComplexZ:
        dims = tuple(self.n_cells(p) for p in range(self.dim + 1))
        bnds = tuple(self.boundary_matrix(p) for p in range(1, self.dim + 1))
        return ChainComplexZ(dims=dims, boundaries=bnds)

    def _check_dd_zero(self):
        for p in range(2, self.dim + 1):
            A = self.boundary_matrix(p - 1)
            B = self.boundary_matrix(p)
            if 0 in A.shape or 0 in B.shape:
                continue
            prod = A @ B
            for r in range(prod.shape[0]):
                for c in range(prod.shape[1]):
                    if prod[r, c] != 0:
                        raise ValueError(
                            f"malformed gluing: d_{p - 1} d_{p} != 0 at "
                            f"entry ({r},{c})")

    # -- corner vertices ----------------------------------------------

    def corner_vertices(self, cell: Cell) -> tuple[int, ...]:
        """Vertex id at each corner position of a simplex.

        Corner j of a p-simplex is corner j-1 of its 0th facet for j >= 1
        and corner 0 of its 1st facet for j = 0; the simplicial identities
        (enforced via dd=0) make this well defined.
        """
        p, i = cell
        if self.vertex_tuples is not None:
            return self.vertex_tuples[p][i]
        if p == 0:
            return (i,)
        refs = self.facet_refs(cell)
        tail = self.corner_vertices((p - 1, refs[0]))
        head = self.corner_vertices((p - 1, refs[1]))
        return (head[0],) + tail

    def subface(self, cell: Cell, keep: tuple[int, ...]) -> Cell:
        """Face of a simplex spanned by the given corner positions."""
        p, i = cell
        keep = tuple(sorted(set(keep)))
        if not keep or keep[-1] > p:
            raise ValueError(f"positions {keep} invalid for dimension {p}")
        positions = list(range(p + 1))
        cur = cell
        while len(positions) > len(keep):
            drop = max(k for k, pos in enumerate(positions) if pos not in keep)
            refs = self.facet_refs(cur)
            cur = (cur[0] - 1, refs[drop])
            positions.pop(drop)
        return cur

    # -- pseudomanifold machinery --------------------------------------

    def validate_pseudomanifold(self, d: int | None = None) -> PseudomanifoldReport:
        """Purity, two-cofaces-per-facet, and strong connectivity report.

        Strong connectivity (top cells connected through shared facets)
        is demanded here on top of the facet-count condition; it is
        reported as its own flag.
        """
        d = self.dim if d is None else d
        if d != self.dim:
            raise ValueError(f"complex has dimension {self.dim}, not {d}")
        offenders: dict = {}

        # purity: every cell lies under some d-simplex
        covered = {(d, i) for i in range(self.n_cells(d))}
        for p in range(d, 0, -1):
            for i in range(self.n_cells(p)):
                if (p, i) in covered:
                    for f in self.facet_refs((p, i)):
                        covered.add((p - 1, f))
        all_cells = set(self.cells())
        not_covered = sorted(all_cells - covered)
        pure = not not_covered
        if not_covered:
            offenders["not_under_top_cell"] = not_covered

        # each (d-1)-simplex meets exactly two d-simplex facet slots
        counts_ok = True
        incidences: dict[int, list[tuple[int, int]]] = {}
        if d >= 1:
            for j in range(self.n_cells(d)):
                for pos, f in enumerate(self.facet_refs((d, j))):
                    incidences.setdefault(f, []).append((j, pos))
            bad = {f: len(v) for f, v in incidences.items() if len(v) != 2}
            for f in range(self.n_cells(d - 1)):
                if f not in incidences:
                    bad[f] = 0
            if bad:
                counts_ok = False
                offenders["facet_coface_counts"] = bad

        # dual connectivity through shared facets
        n_top = self.n_cells(d)
        connected = n_top <= 1
        if n_top > 1 and d >= 1:
            adj: dict[int, set[int]] = {j: set() for j in range(n_top)}
            for f, inc in incidences.items():
                tops = [j for j, _ in inc]
                for a in tops:
                    for b in tops:
                        if a != b:
                            adj[a].add(b)
            seen = {0}
            dq = deque([0])
            while dq:
                x = dq.popleft()
                for y in sorted(adj[x]):
                    if y not in seen:
                        seen.add(y)
                        dq.append(y)
            connected = len(seen) == n_top
            if not connected:
                offenders["dual_components"] = sorted(set(range(n_top)) - seen)
        return PseudomanifoldReport(pure=pure, facet_counts_ok=counts_ok,
                                    strongly_connected=connected, offenders=offenders)

    def fundamental_cycle(self) -> IntegerChain:
        """Coherent +-1 orientation of the top cells, as a cycle.

        Signs are propagated breadth-first through the dual adjacency
        graph in simplex-index order, so the output is reproducible.
        Raises on non-orientable pseudomanifolds (the propagation meets a
        contradiction) and on non-pseudomanifolds.
        """
        d = self.dim
        report = self.validate_pseudomanifold()
        if not report.ok:
            raise ValueError(f"not a pseudomanifold: {report.offenders}")
        n_top = self.n_cells(d)
        if d == 0:
            return IntegerChain(0, {i: 1 for i in range(n_top)})
        incidences: dict[int, list[tuple[int, int]]] = {}
        for j in range(n_top):
            for pos, f in enumerate(self.facet_refs((d, j))):
                incidences.setdefault(f, []).append((j, -1 if pos % 2 else 1))

        eps: dict[int, int] = {}
        for start in range(n_top):
            if start in eps:
                continue
            eps[start] = 1
            dq = deque([start])
            while dq:
                j = dq.popleft()
                for f, _ in self.facets_with_signs((d, j)):
                    (j1, s1), (j2, s2) = incidences[f]
                    if j1 == j2:
                        if s1 + s2 != 0:
                            raise ValueError(
                                f"non-orientable: facet {f} repeats in top cell "
                                f"{j1} with equal signs")
                        continue
                    # coherence: eps[j1]*s1 + eps[j2]*s2 == 0
                    if j1 in eps and j2 in eps:
                        if eps[j1] * s1 + eps[j2] * s2 != 0:
                            raise ValueError(
                                f"non-orientable: contradiction at facet {f}")
                    elif j1 in eps:
                        eps[j2] = -eps[j1] * s1 * s2
                        dq.append(j2)
                    elif j2 in eps:
                        eps[j1] = -eps[j2] * s2 * s1
                        dq.append(j1)
        z = IntegerChain(d, eps)
        cc = self.chain_complex()
        if not cc.is_cycle(z):
            raise ValueError("orientation propagation did not produce a cycle")
        return z

    # -- misc -----------------------------------------------------------

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * self.n_cells(p) for p in range(self.dim + 1))

    def __repr__(self):
        counts = [self.n_cells(p) for p in range(self.dim + 1)]
        return f"DeltaComplex(cells per dim {counts})"


def build_delta_complex(vertices: int, simplices: list[list[list[int]]]) -> DeltaComplex:
    """Validated construction from a facet-reference table."""
    return DeltaComplex(vertices, simplices)

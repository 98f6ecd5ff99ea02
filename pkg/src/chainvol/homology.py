"""Exact integer homology, the size functional, and abelianizations.

Homology groups come out of Smith normal form: the betti number in
degree p is n_p - rank d_p - rank d_{p+1} and the torsion coefficients
are the invariant factors of d_{p+1} exceeding 1.  The size of a group
is its rank plus the log of its torsion cardinality (natural log by
default; the base is a knob so every comparison elsewhere can share
one base).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .complexes import ChainComplexZ, DeltaComplex, IntegerChain
from .snf import smith_normal_form, matrix_rank, solve_integer, zero_matrix


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group: rank plus invariant factors >= 2."""

    betti: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        tor = tuple(int(t) for t in self.torsion)
        if any(t < 2 for t in tor):
            raise ValueError(f"torsion coefficients must be >= 2, got {tor}")
        for a, b in zip(tor, tor[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {tor} is not a divisibility chain")
        object.__setattr__(self, "torsion", tor)
        object.__setattr__(self, "betti", int(self.betti))

    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def direct_sum(*groups: HomologyGroup) -> HomologyGroup:
    """Direct sum, renormalizing the torsion into a divisibility chain."""
    betti = sum(g.betti for g in groups)
    tors = [t for g in groups for t in g.torsion]
    if not tors:
        return HomologyGroup(betti, ())
    D = zero_matrix(len(tors), len(tors))
    for i, t in enumerate(tors):
        D[i, i] = t
    factors = smith_normal_form(D).nontrivial_factors()
    return HomologyGroup(betti, tuple(factors))


def size(H: HomologyGroup, base: float | str = "e") -> float:
    """Rank plus log of the torsion cardinality."""
    t = H.torsion_order()
    if base == "e":
        return H.betti + math.log(t)
    return H.betti + math.log(t) / math.log(float(base))


def homology(C: ChainComplexZ, p: int) -> HomologyGroup:
    """H_p of an integer chain complex, with torsion."""
    if not 0 <= p <= C.dim:
        raise ValueError(f"degree {p} out of range 0..{C.dim}")
    n_p = C.dims[p]
    rank_in = matrix_rank(C.boundary(p)) if p >= 1 else 0
    if p < C.dim:
        dec = smith_normal_form(C.boundary(p + 1))
        rank_out = dec.rank
        torsion = dec.nontrivial_factors()
    else:
        rank_out = 0
        torsion = []
    return HomologyGroup(n_p - rank_in - rank_out, tuple(torsion))


def all_homology(C: ChainComplexZ) -> list[HomologyGroup]:
    return [homology(C, p) for p in range(C.dim + 1)]


def homology_of_complex(K: DeltaComplex, p: int | None = None):
    cc = K.chain_complex()
    if p is None:
        return all_homology(cc)
    return homology(cc, p)


def abelianization(generators, relators) -> HomologyGroup:
    """Abelianization of a group presentation.

    ``generators`` is a list of names or a count; each relator is a word,
    a sequence of (generator, exponent) pairs, which is abelianized to
    its exponent-sum vector (commutators contribute zero automatically).
    """
    if isinstance(generators, int):
        names = list(range(generators))
    else:
        names = list(generators)
    index = {g: i for i, g in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate generator names")
    g = len(names)
    cols = []
    for r, word in enumerate(relators):
        vec = [0] * g
        for gen, exp in word:
            if gen not in index:
                raise ValueError(f"relator {r} references undefined generator {gen!r}")
            vec[index[gen]] += int(exp)
        cols.append(vec)
    if not cols:
        return HomologyGroup(g, ())
    R = zero_matrix(g, len(cols))
    for j, vec in enumerate(cols):
        for i, v in enumerate(vec):
            R[i, j] = v
    dec = smith_normal_form(R)
    return HomologyGroup(g - dec.rank, tuple(dec.nontrivial_factors()))


def commutator_word(a, b):
    """[a, b] = a b a^-1 b^-1 as a word (exponent sums all zero)."""
    return [(a, 1), (b, 1), (a, -1), (b, -1)]


def homologous(C: ChainComplexZ, z1: IntegerChain, z2: IntegerChain):
    """Decide whether two p-cycles differ by a boundary, with witness.

    Returns (True, w) with d w = z1 - z2, or (False, obstruction) where
    the obstruction names the coordinate of the diagonalized system that
    has no integer solution.
    """
    p = z1.degree
    if z2.degree != p:
        raise ValueError("cycles must share a degree")
    if not C.is_cycle(z1) or not C.is_cycle(z2):
        raise ValueError("inputs must be cycles")
    diff = (z1 - z2).to_vector(C.dims[p])
    if p == C.dim:
        A = zero_matrix(C.dims[p], 0)
    else:
        A = C.boundary(p + 1)
    w, obstruction = solve_integer(A, diff)
    if w is None:
        return False, obstruction
    return True, IntegerChain(p + 1, {i: v for i, v in enumerate(w) if v})

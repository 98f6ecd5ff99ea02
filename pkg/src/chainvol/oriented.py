"""The signed vertex-permutation quotient of chains and its norm.

For complexes whose simplices carry explicit vertex tuples, the
symmetric group acts by permuting tuple entries with a sign.  The
quotient identifies a simplex with sign(g) times its g-permutation and
kills simplices fixed by a transposition (repeated-vertex tuples).
Orbit coordinates are indexed by the sorted vertex tuple, the
lexicographically least representative.

The norm of an orbit-coordinate chain equals the sum of absolute orbit
coefficients: picking one representative per orbit realizes that value,
and the coefficients of any lift sign-sum to the orbit coefficient, so
no lift does better.  This closed form is validated against exhaustive
lift enumeration in the tests rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import DeltaComplex, IntegerChain


def permutation_sign(perm) -> int:
    """Sign of a permutation given as a tuple of images."""
    perm = list(perm)
    n = len(perm)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_sign(t: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sorted tuple and the sign of the sorting permutation (0 if repeats)."""
    if len(set(t)) != len(t):
        return tuple(sorted(t)), 0
    order = sorted(range(len(t)), key=lambda i: t[i])
    return tuple(t[i] for i in order), permutation_sign(order)


@dataclass(frozen=True)
class OrientedChain:
    """Chain in orbit coordinates: sorted nondegenerate tuple -> coefficient."""

    degree: int
    coeffs: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, v in self.coeffs.items():
            t = tuple(int(x) for x in t)
            if len(t) != self.degree + 1:
                raise ValueError(f"tuple {t} has wrong length for degree {self.degree}")
            if tuple(sorted(t)) != t or len(set(t)) != len(t):
                raise ValueError(f"orbit representative {t} is not sorted/nondegenerate")
            if int(v) != 0:
                clean[t] = int(v)
        object.__setattr__(self, "coeffs", clean)

    def l1(self) -> int:
        return sum(abs(v) for v in self.coeffs.values())

    def __add__(self, other: "OrientedChain") -> "OrientedChain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return OrientedChain(self.degree, out)

    def __sub__(self, other: "OrientedChain") -> "OrientedChain":
        return self + other.scale(-1)

    def scale(self, a: int) -> "OrientedChain":
        return OrientedChain(self.degree, {k: a * v for k, v in self.coeffs.items()})

    def boundary(self) -> "OrientedChain":
        if self.degree == 0:
            raise ValueError("0-chains have no boundary; compare augmentations instead")
        out: dict[tuple[int, ...], int] = {}
        for t, a in self.coeffs.items():
            for i in range(len(t)):
                face = t[:i] + t[i + 1:]
                s = -1 if i % 2 else 1
                out[face] = out.get(face, 0) + s * a
        return OrientedChain(self.degree - 1, out)


def require_vertex_tuples(K: DeltaComplex):
    if K.vertex_tuples is None:
        raise ValueError(
            "oriented operations need vertex-tuple simplices; this complex "
            "has facet identifications only")


def project_oriented(K: DeltaComplex, c: IntegerChain) -> OrientedChain:
    """Project a chain to orbit coordinates.

    The coefficient of an orbit is the signed sum over its member
    simplices; simplices with a repeated vertex are dropped (they are
    fixed by a transposition, hence zero in the quotient).
    """
    require_vertex_tuples(K)
    p = c.degree
    out: dict[tuple[int, ...], int] = {}
    for idx, a in c.coeffs.items():
        t = K.vertex_tuples[p][idx]
        rep, sign = sort_sign(t)
        if sign == 0:
            continue
        out[rep] = out.get(rep, 0) + sign * a
    return OrientedChain(p, out)


def oriented_norm_chain(c: OrientedChain) -> int:
    """Minimal l1 norm over lifts of an orbit-coordinate chain."""
    return c.l1()


def tuple_boundary(c: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
    """Alternating-face boundary of a chain of raw vertex tuples."""
    out: dict[tuple[int, ...], int] = {}
    for t, a in c.items():
        for i in range(len(t)):
            face = t[:i] + t[i + 1:]
            s = -1 if i % 2 else 1
            v = out.get(face, 0) + s * a
            if v:
                out[face] = v
            else:
                out.pop(face, None)
    return out


def orbit_reps(K: DeltaComplex, p: int) -> list[tuple[int, ...]]:
    """Sorted list of nondegenerate orbit representatives in degree p."""
    require_vertex_tuples(K)
    reps = set()
    for t in K.vertex_tuples[p]:
        rep, sign = sort_sign(t)
        if sign != 0:
            reps.add(rep)
    return sorted(reps)

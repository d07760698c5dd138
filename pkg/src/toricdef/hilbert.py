"""Hilbert bases of pointed cones and the decorated generator set E."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import floor
from typing import Optional, Sequence

from .cones import ConeError, CrossSection, PointedCone
from .exact import dot, hermite_normal_form, inverse, rank
from .eta import support_data


class HilbertError(ConeError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    """Hilbert basis elements; once decorated, each non-R element carries (c, eta0*(c))."""

    elements: tuple[tuple[int, ...], ...]
    r_index: Optional[int] = None
    decorations: tuple[Optional[tuple[tuple[int, ...], int]], ...] = ()

    @property
    def non_r(self) -> list[int]:
        return [i for i in range(len(self.elements)) if i != self.r_index]


def _parallelepiped_points(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Lattice points sum q_i g_i with 0 <= q_i < 1, excluding 0."""
    n = len(gens)
    h, _ = hermite_normal_form([list(g) for g in gens])
    inv = inverse([list(g) for g in gens])
    diag = [h[i][i] for i in range(n)]
    out = []
    # coset representatives of Z^n / (row lattice) are the boxes under the HNF pivots
    for y in product(*[range(d) for d in diag]):
        q = [sum(Fraction(y[i]) * inv[i][j] for i in range(n)) for j in range(n)]
        frac = [x - floor(x) for x in q]
        p = tuple(int(sum(frac[j] * gens[j][k] for j in range(n))) for k in range(n))
        if any(p):
            out.append(p)
    return out


def _canonical_key(v: Sequence[int]):
    return (v[-1], tuple(v[:-1]))


def hilbert_basis(c: PointedCone) -> GeneratorSet:
    """Minimal generating set of the lattice points of a pointed full-dimensional cone."""
    if not c.is_pointed:
        raise HilbertError("cone is not pointed")
    if not c.is_full_dimensional:
        raise HilbertError("cone is not full-dimensional")
    n = c.rank
    rays = list(c.rays)
    candidates = set(rays)
    # every lattice point lies in some simplicial subcone spanned by n independent rays
    for sub in combinations(rays, n):
        if rank([list(r) for r in sub]) < n:
            continue
        candidates.update(_parallelepiped_points(list(sub)))
    # a strictly positive grading: x - y in the cone forces deg y < deg x
    w = [sum(col) for col in zip(*c.facets)]
    cand = sorted(candidates, key=lambda v: (dot(w, v), _canonical_key(v)))
    basis: list[tuple[int, ...]] = []
    for x in cand:
        dx = dot(w, x)
        if not any(dot(w, y) < dx and c.contains(tuple(a - b for a, b in zip(x, y))) for y in basis):
            basis.append(x)
    return GeneratorSet(tuple(sorted(basis, key=_canonical_key)))


def e_decorate(g: GeneratorSet, q: CrossSection) -> GeneratorSet:
    """Split each element as [c, z] in R-adapted coordinates and check z = eta0*(c).

    R is adjoined when it is not irreducible; E is then a generating set
    containing R rather than the Hilbert basis itself.
    """
    r = tuple(q.R)
    elements = g.elements
    if r not in elements:
        if any(dot(a, r) < 0 for a in q.cone.rays):
            raise HilbertError("R is not in the dual cone")
        elements = tuple(sorted(elements + (r,), key=_canonical_key))
    decorations = []
    for e in elements:
        c, z = q.split_covector(e)
        if e == r:
            decorations.append(None)
            continue
        sd = support_data(q, c)
        if sd.eta0star != z:
            raise HilbertError(f"generator {e} has height {z}, expected eta0* = {sd.eta0star}")
        decorations.append((tuple(c), z))
    return GeneratorSet(elements, elements.index(r), tuple(decorations))


def represent(g: GeneratorSet, target: Sequence[int], bound: int, allowed: Optional[Sequence[int]] = None) -> Optional[list[int]]:
    """Lexicographically smallest p in N^|E| with sum p_i e_i = target (R excluded)."""
    from .exact import solve_nonneg_integer

    idx = [i for i in g.non_r if allowed is None or i in allowed]
    if not idx:
        return [0] * len(g.elements) if not any(target) else None
    a = [[g.elements[i][k] for i in idx] for k in range(len(target))]
    sol = solve_nonneg_integer(a, list(target), bound)
    if sol is None:
        return None
    out = [0] * len(g.elements)
    for i, v in zip(idx, sol):
        out[i] = v
    return out

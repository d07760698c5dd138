"""Support data and the eta functionals on V(Q).

Functionals live in V* and are stored as collapsed coordinate vectors (one
entry per edge component); two vectors denote the same functional when
they agree on a basis of V(Q).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Optional, Sequence, Union

from .cones import ConeError, CrossSection, PointedCone
from .exact import clear_denominators, dot, solve_nonneg_integer
from .minkowski import SummandSpace, summand_space


class EtaError(ConeError):
    pass


@dataclass(frozen=True)
class SupportDatum:
    c: tuple[int, ...]
    vertex_index: int
    eta0: Fraction
    eta0star: int
    path: tuple[int, ...]  # vertices visited from the origin to v(c)


@dataclass(frozen=True)
class EdgePath:
    lam: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class EtaFunctional:
    coords: tuple[Fraction, ...]

    @property
    def component_sum(self) -> Fraction:
        return sum(self.coords, Fraction(0))

    def __add__(self, other: "EtaFunctional") -> "EtaFunctional":
        return EtaFunctional(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "EtaFunctional") -> "EtaFunctional":
        return EtaFunctional(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k) -> "EtaFunctional":
        return EtaFunctional(tuple(Fraction(k) * a for a in self.coords))

    def evaluate(self, t: Sequence) -> Fraction:
        return sum((a * Fraction(b) for a, b in zip(self.coords, t)), Fraction(0))


SpaceLike = Union[CrossSection, SummandSpace]


@lru_cache(maxsize=64)
def _cached_space(q: CrossSection) -> SummandSpace:
    return summand_space(q)


def _space(x: SpaceLike) -> SummandSpace:
    return x if isinstance(x, SummandSpace) else _cached_space(x)


def _section(x: SpaceLike) -> CrossSection:
    return x.section if isinstance(x, SummandSpace) else x


def pairing(v: Sequence[Fraction], c: Sequence[int]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(v, c)), Fraction(0))


def _check_tail(q: CrossSection, c: Sequence[int]) -> None:
    if len(c) != q.plane_dim:
        raise EtaError("covector has the wrong length")
    for r in q.tail_rays:
        if dot(r, c) < 0:
            raise EtaError("unbounded below: c is negative on a tail ray")


def descent(q: CrossSection, start: int, c: Sequence[int]) -> list[int]:
    """Walk from start, always to the smallest-index strictly c-decreasing neighbour."""
    path = [start]
    cur = start
    while True:
        here = pairing(q.vertices[cur], c)
        nxt = next((w for w, _, _ in q.neighbours[cur] if pairing(q.vertices[w], c) < here), None)
        if nxt is None:
            return path
        path.append(nxt)
        cur = nxt


def support_data(x: SpaceLike, c: Sequence[int]) -> SupportDatum:
    q = _section(x)
    c = tuple(c)
    _check_tail(q, c)
    if not any(c):
        return SupportDatum(c, q.origin, Fraction(0), 0, (q.origin,))
    path = descent(q, q.origin, c)
    v = path[-1]
    eta0 = -pairing(q.vertices[v], c)
    return SupportDatum(c, v, eta0, ceil(eta0), tuple(path))


def lambda_of(q: CrossSection, vertex_path: Sequence[int]) -> tuple[int, ...]:
    """Edge-count vector of a vertex path (signed by edge orientation)."""
    lam = [0] * len(q.edges)
    for a, b in zip(vertex_path, vertex_path[1:]):
        for w, k, sign in q.neighbours[a]:
            if w == b:
                lam[k] += sign
                break
        else:
            raise EtaError("path leaves the compact 1-skeleton")
    return tuple(lam)


def monotone_path(x: SpaceLike, from_v: int, to_v: int, c: Sequence[int]) -> EdgePath:
    """Edge path from from_v to to_v along which <., c> never increases."""
    q = _section(x)
    if from_v == to_v:
        return EdgePath(tuple([0] * len(q.edges)), (from_v,))
    path = descent(q, from_v, c)
    if path[-1] != to_v:
        prev = {from_v: None}
        queue = deque([from_v])
        while queue:
            v = queue.popleft()
            if v == to_v:
                break
            val = pairing(q.vertices[v], c)
            for w, _, _ in q.neighbours[v]:
                if w not in prev and pairing(q.vertices[w], c) <= val:
                    prev[w] = v
                    queue.append(w)
        if to_v not in prev:
            raise EtaError("no monotone path between the vertices")
        path = [to_v]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
    return EdgePath(lambda_of(q, path), tuple(path))


def _collapse(q: CrossSection, full: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * len(q.components)
    for i, v in enumerate(full):
        out[q.component_of[i]] += v
    return tuple(out)


def eta_full(q: CrossSection, lam: Sequence[int], c: Sequence[int]) -> tuple[Fraction, ...]:
    return tuple(-l * pairing(e.direction, c) for l, e in zip(lam, q.edges))


def eta(x: SpaceLike, c: Sequence[int]) -> EtaFunctional:
    """eta(c)_i = -lambda_i <d^i, c> along the descent path to v(c), collapsed."""
    q = _section(x)
    sd = support_data(q, c)
    return EtaFunctional(_collapse(q, eta_full(q, lambda_of(q, sd.path), c)))


def e_vector(q: CrossSection, v: int) -> tuple[int, ...]:
    """Collapsed unit vector of the component through a non-lattice vertex."""
    inc = [k for k, e in enumerate(q.edges) if v in (e.tail, e.head)]
    if not inc:
        raise EtaError("vertex has no compact edge")
    comps = {q.component_of[k] for k in inc}
    if len(comps) != 1 and not q.is_lattice(v):
        raise EtaError("edges at a non-lattice vertex lie in different components")
    out = [0] * len(q.components)
    out[q.component_of[inc[0]]] = 1
    return tuple(out)


def _check_integral(c: Sequence) -> tuple[int, ...]:
    if any(Fraction(x).denominator != 1 for x in c):
        raise EtaError("c is not integral")
    return tuple(int(x) for x in c)


def eta_star(x: SpaceLike, c: Sequence[int]) -> EtaFunctional:
    """eta(c) + (eta0*(c) - eta0(c)) e[v(c)]."""
    q = _section(x)
    c = _check_integral(c)
    sd = support_data(q, c)
    base = eta(q, c)
    gap = sd.eta0star - sd.eta0
    if not gap:
        return base
    e = e_vector(q, sd.vertex_index)
    return EtaFunctional(tuple(a + gap * b for a, b in zip(base.coords, e)))


def eta_star_refined(x: SpaceLike, base_c: Sequence[int], c: Sequence[int]) -> EtaFunctional:
    """Functional of c along the path to v(base_c) followed by a c-monotone path to v(c)."""
    q = _section(x)
    base_c = _check_integral(base_c)
    c = _check_integral(c)
    sb = support_data(q, base_c)
    sd = support_data(q, c)
    lam = lambda_of(q, sb.path)
    mu = monotone_path(q, sb.vertex_index, sd.vertex_index, c).lam
    full = eta_full(q, [a + b for a, b in zip(lam, mu)], c)
    coords = _collapse(q, full)
    gap = sd.eta0star - sd.eta0
    if gap:
        e = e_vector(q, sd.vertex_index)
        coords = tuple(a + gap * b for a, b in zip(coords, e))
    return EtaFunctional(coords)


def same_functional(x: SpaceLike, a: EtaFunctional, b: EtaFunctional) -> bool:
    s = _space(x)
    d = (a - b).coords
    return all(sum(Fraction(v) * w for v, w in zip(row, d)) == 0 for row in s.v_basis)


def nonneg_representative(x: SpaceLike, a: EtaFunctional) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest n in N^m with n = a in V*, or None."""
    s = _space(x)
    total = a.component_sum
    if total.denominator != 1 or total < 0:
        return None
    rows = [list(v) for v in s.v_basis]
    rhs = [sum(Fraction(v) * w for v, w in zip(row, a.coords)) for row in rows]
    if any(r.denominator != 1 for r in rhs):
        return None
    sol = solve_nonneg_integer(rows, [int(r) for r in rhs], int(total))
    return tuple(sol) if sol is not None else None


def geq(x: SpaceLike, a: EtaFunctional, b: EtaFunctional) -> bool:
    """a >= b iff a - b lies in the image of N^N in V*_Z."""
    return nonneg_representative(x, a - b) is not None


def ray_evaluations(x: SpaceLike, a: EtaFunctional) -> list[Fraction]:
    s = _space(x)
    return [a.evaluate(r) for r in s.c_rays]


def in_dual_tautological(x: SpaceLike, c: Sequence[int], eta_: EtaFunctional) -> bool:
    """[c, eta] lies in the dual of the tautological cone: eta - eta(c) >= 0 on C(Q)."""
    return all(v >= 0 for v in ray_evaluations(x, eta_ - eta(x if isinstance(x, CrossSection) else x.section, c)))


def in_gamma(x: SpaceLike, c: Sequence[int], eta_: EtaFunctional) -> bool:
    """[c, eta] lies in Gamma: eta - eta*(c) >= 0 on C(Q)."""
    return all(v >= 0 for v in ray_evaluations(x, eta_ - eta_star(_section(x), c)))


def tautological_cone(x: SpaceLike) -> PointedCone:
    """Cone in A x R^m generated by (v_t, t) for rays t of C(Q) and (r, 0) for tail rays r."""
    from .minkowski import summand_polytope

    s = _space(x)
    q = s.section
    gens = []
    for t in s.c_rays:
        poly = summand_polytope(s, t)
        for v in poly.vertex_map:
            gens.append(clear_denominators(list(v) + list(t)))
    for r in q.tail_rays:
        gens.append(list(r) + [0] * s.n_components)
    return PointedCone.from_rays(gens)

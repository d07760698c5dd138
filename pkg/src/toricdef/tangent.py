"""Relation spaces over the sets E_j, the dimensions of T1(-R) and T2(-kR), and 3-d degree theory."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Optional, Sequence

from .cones import (
    ConeError,
    CrossSection,
    PointedCone,
    RigidError,
    check_codim2_smooth,
    cross_section,
    dual_cone,
    faces,
)
from .exact import dot, hermite_normal_form, is_primitive, kernel_lattice, nullspace, rank, solve_rational, vec_gcd
from .eta import eta_star
from .hilbert import GeneratorSet
from .minkowski import SummandSpace, summand_space


class HypothesisError(ConeError):
    """A theorem hypothesis (smoothness, interior R, primitive edges) fails."""


@dataclass(frozen=True)
class ESets:
    """Index sets into g.elements, one per vertex of Q (in vertex order)."""

    per_vertex: tuple[frozenset[int], ...]
    boundary: frozenset[int]
    k: Optional[int] = None


def _vertex_ray(q: CrossSection, j: int) -> tuple[int, ...]:
    return q.cone.rays[q.vertex_rays[j]]


def e_sets(q: CrossSection, g: GeneratorSet, k: Optional[int] = None) -> ESets:
    """E_j = {r : <a^j, r> < <a^j, R>}; with k, E_j^k = {r : <a^j, r> < k <a^j, R>} plus R."""
    if g.r_index is None:
        raise ConeError("generator set is not decorated")
    level = 1 if k is None else k
    per = []
    for j in range(len(q.vertices)):
        a = _vertex_ray(q, j)
        height = dot(a, q.R)
        s = {i for i in g.non_r if dot(a, g.elements[i]) < level * height}
        if k is not None:
            s.add(g.r_index)
        per.append(frozenset(s))
    rays = q.cone.rays
    boundary = frozenset(i for i, e in enumerate(g.elements) if any(dot(a, e) == 0 for a in rays))
    return ESets(tuple(per), boundary, k)


def relation_basis(g: GeneratorSet, subset: Sequence[int]) -> list[list[Fraction]]:
    """Basis of L(S) = {q : sum q_i e_i = 0}, as vectors indexed by all of g.elements."""
    idx = sorted(subset)
    if not idx:
        return []
    n = len(g.elements)
    mat = [[g.elements[i][r] for i in idx] for r in range(len(g.elements[0]))]
    out = []
    for v in nullspace(mat, len(idx)):
        full = [Fraction(0)] * n
        for i, x in zip(idx, v):
            full[i] = Fraction(x)
        out.append(full)
    return out


def relation_dim(g: GeneratorSet, subset: Sequence[int]) -> int:
    idx = sorted(subset)
    if not idx:
        return 0
    return len(idx) - rank([list(g.elements[i]) for i in idx])


def _span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    return rank([list(v) for v in vectors]) if vectors else 0


def _require_smooth(c: PointedCone) -> None:
    if not check_codim2_smooth(c):
        raise HypothesisError("cone is not smooth in codimension two")


def t1_dimension(q: CrossSection, g: GeneratorSet, s: Optional[SummandSpace] = None) -> tuple[int, int]:
    """(dim V(Q) - 1, dim L(E on the boundary) / (L(E on the boundary) meet sum_j L(E_j)))."""
    _require_smooth(q.cone)
    s = s or summand_space(q)
    via_v = s.dim - 1
    es = e_sets(q, g)
    lb = relation_basis(g, es.boundary)
    sum_ej = [v for ej in es.per_vertex for v in relation_basis(g, ej)]
    d_b, d_sum = _span_dim(lb), _span_dim(sum_ej)
    meet = d_b + d_sum - _span_dim(lb + sum_ej)
    return via_v, d_b - meet


def ks_pairing(s: SummandSpace, g: GeneratorSet, t: Sequence, q: Sequence) -> Fraction:
    """Phi(t, q) = sum_{nu, i} t_i q_nu eta*_i(c^nu); R contributes nothing."""
    if g.r_index is None:
        raise ConeError("generator set is not decorated")
    if len(t) != s.n_components or len(q) != len(g.elements):
        raise ConeError("pairing arguments have the wrong length")
    total = Fraction(0)
    for i in g.non_r:
        if q[i]:
            c = g.decorations[i][0]
            total += Fraction(q[i]) * eta_star(s, c).evaluate(t)
    return total


def t2_dimension(q: CrossSection, g: GeneratorSet, k: int) -> int:
    """dim ker(sum_j L(E_j^k) -> L(E)) - dim im(sum_edges L(E_i^k meet E_j^k) -> sum_j L(E_j^k))."""
    _require_smooth(q.cone)
    if k < 1:
        raise ConeError("k must be positive")
    es = e_sets(q, g, k)
    n = len(g.elements)
    blocks = [relation_basis(g, ej) for ej in es.per_vertex]
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + len(b))
    total = offsets[-1]
    if not total:
        return 0
    # sum map: block coordinates -> Q^E
    sum_cols = [v for b in blocks for v in b]
    ker = total - rank([list(col) for col in sum_cols])
    # edge map: relation q on E_i meet E_j goes to (q in block i) - (q in block j)
    images = []
    for e in q.edges:
        for rel in relation_basis(g, es.per_vertex[e.tail] & es.per_vertex[e.head]):
            vec = [Fraction(0)] * total
            for side, sign in ((e.tail, 1), (e.head, -1)):
                coords = _coordinates(blocks[side], rel, n)
                for a, x in enumerate(coords):
                    vec[offsets[side] + a] += sign * x
            images.append(vec)
    return ker - _span_dim(images)


def _coordinates(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction], n: int) -> list[Fraction]:
    mat = [[basis[a][i] for a in range(len(basis))] for i in range(n)]
    sol = solve_rational(mat, list(v))
    if sol is None:
        raise ConeError("relation is not in the span of the block")
    return sol


@dataclass(frozen=True)
class CompanionReport:
    lattice_vertices: tuple[tuple[Fraction, ...], ...]
    dim_v: int
    dim_v_companion: int

    @property
    def agrees(self) -> bool:
        return self.dim_v == self.dim_v_companion


def gorenstein_companion(c: PointedCone, R: Sequence[int]) -> tuple[PointedCone, CompanionReport]:
    """Cone over the convex hull of the lattice vertices of Q, with a V(Q) comparison."""
    if c.rank != 3:
        raise HypothesisError("the companion is defined for rank 3 cones")
    if any(dot(a, R) <= 0 for a in c.rays):
        raise HypothesisError("R is not in the interior of the dual cone")
    q = cross_section(c, R)
    lattice = [j for j in range(len(q.vertices)) if q.is_lattice(j)]
    rays = [list(c.rays[q.vertex_rays[j]]) for j in lattice]
    companion = PointedCone.from_rays(rays)
    if not companion.is_full_dimensional:
        raise HypothesisError("the lattice vertices of Q do not span a polygon")
    for f in faces(companion, 2):
        i, j = sorted(f)
        u = [a - b for a, b in zip(companion.rays[i], companion.rays[j])]
        if vec_gcd(u) != 1:
            raise HypothesisError(f"edge {companion.rays[i]} - {companion.rays[j]} of Q' is not primitive")
    q2 = cross_section(companion, R)
    rep = CompanionReport(tuple(q.vertices[j] for j in lattice), summand_space(q).dim, summand_space(q2).dim)
    return companion, rep


def _solve_integral(rows: list[Sequence[int]], rhs: list[int]) -> Optional[tuple[int, ...]]:
    sol = solve_rational([list(r) for r in rows], rhs)
    if sol is None or rank([list(r) for r in rows]) < len(rows[0]):
        return None
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def _line_points(a2: Sequence[int], a4: Sequence[int], cone: PointedCone) -> list[tuple[int, ...]]:
    """Lattice points of [a2 = 1] meet [a4 = 0] meet the dual cone (must be bounded)."""
    lat = kernel_lattice([list(a2) + [-1], list(a4) + [0]], 4).as_lists()
    if len(lat) != 2:
        return []
    # HNF with the height coordinate first: row 0 carries the height, row 1 has height 0
    h, _ = hermite_normal_form([[x[3]] + x[:3] for x in lat])
    if h[0][0] != 1:
        return []
    base, direction = h[0][1:], h[1][1:]
    lo, hi = None, None
    for f in cone.facets:
        a, b = dot(f, base), dot(f, direction)
        # a + s b >= 0
        if b > 0:
            bound = Fraction(-a, b)
            lo = bound if lo is None else max(lo, bound)
        elif b < 0:
            bound = Fraction(-a, b)
            hi = bound if hi is None else min(hi, bound)
        elif a < 0:
            return []
    if lo is None or hi is None:
        raise HypothesisError("search line is unbounded")
    return [tuple(x + s * y for x, y in zip(base, direction)) for s in range(ceil(lo), floor(hi) + 1)]


def degree_candidates(c: PointedCone) -> set[tuple[int, ...]]:
    rays = list(c.rays)
    dual = dual_cone(c)
    out: set[tuple[int, ...]] = set()
    for sub in combinations(rays, 4):
        r = _solve_integral(list(sub), [1, 1, 1, 1])
        if r is not None:
            out.add(r)
    for one in combinations(rays, 2):
        for zero in rays:
            if zero in one:
                continue
            r = _solve_integral([one[0], one[1], zero], [1, 1, 0])
            if r is not None:
                out.add(r)
    adjacent = {frozenset(f) for f in faces(c, 2)}
    for i, j in combinations(range(len(rays)), 2):
        if frozenset((i, j)) in adjacent:
            continue
        for a2, a4 in ((rays[i], rays[j]), (rays[j], rays[i])):
            out.update(_line_points(a2, a4, dual))
    return {r for r in out if any(r) and dual.contains(r)}


def v_dimension(c: PointedCone, R: Sequence[int]) -> int:
    """dim V(Q(R)); 0 when Q has no lattice vertex (rigid)."""
    try:
        return summand_space(cross_section(c, R)).dim
    except RigidError:
        return 0


def interesting_degrees(c: PointedCone) -> list[tuple[int, ...]]:
    """Primitive R in the dual cone with dim V(Q(R)) / 1 nonzero, in sorted order."""
    if c.rank != 3 or not c.is_full_dimensional or not c.is_pointed:
        raise HypothesisError("interesting degrees need a full-dimensional pointed rank 3 cone")
    _require_smooth(c)
    return sorted(r for r in degree_candidates(c) if is_primitive(r) and v_dimension(c, r) >= 2)

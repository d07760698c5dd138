"""The base ideal J, its difference-variable form, and the graded space W = J / J~."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cones import CrossSection
from .exact import ExactError, clear_denominators, dot, kernel_lattice, rank
from .minkowski import SummandSpace, summand_space
from .polys import MonomialOrder, Poly, groebner, in_ideal, linear_form, monomials_of_degree


class BaseSpaceError(ExactError):
    pass


def t_names(m: int) -> list[str]:
    return [f"t{i + 1}" for i in range(m)]


def w_names(m: int) -> list[str]:
    """Consecutive differences w{i}{i+1} = t_i - t_{i+1}."""
    return [f"w{i + 1}{i + 2}" if m < 10 else f"w{i + 1}_{i + 2}" for i in range(m - 1)]


def power_sum(coeffs: Sequence, k: int) -> Poly:
    m = len(coeffs)
    terms = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * m
            e[i] = k
            terms[tuple(e)] = Fraction(c)
    return Poly(terms, m)


def face_polynomials(q: CrossSection, k: int) -> list[Poly]:
    """For each compact 2-face and plane coordinate, sum_i t_i^k eps_i d^i (collapsed)."""
    if k < 1:
        raise BaseSpaceError("k must be positive")
    from .minkowski import two_face_matrix

    out = []
    for row in two_face_matrix(q):
        if any(row):
            out.append(power_sum(clear_denominators(row), k))
    return out


def v_perp_basis(s: SummandSpace) -> list[list[int]]:
    """HNF lattice basis of V-perp in collapsed integer coordinates."""
    if not s.v_basis:
        return [[int(i == j) for j in range(s.n_components)] for i in range(s.n_components)]
    return kernel_lattice([list(v) for v in s.v_basis], s.n_components).as_lists()


def in_v_perp(s: SummandSpace, d: Sequence) -> bool:
    return all(dot(v, d) == 0 for v in s.v_basis)


def g_poly(s: SummandSpace, d: Sequence, k: int) -> Poly:
    """sum_i d_i t_i^k for d in V-perp."""
    if k < 1:
        raise BaseSpaceError("k must be positive")
    if len(d) != s.n_components or not in_v_perp(s, d):
        raise BaseSpaceError("d is not in V-perp")
    return power_sum(d, k)


def toric_equation(s: SummandSpace, d: Sequence[int]) -> Poly:
    """prod t^{d+} - prod t^{d-} for integral d in V-perp."""
    if any(Fraction(x).denominator != 1 for x in d) or not in_v_perp(s, d) or len(d) != s.n_components:
        raise BaseSpaceError("d is not in V-perp intersected with Z^m")
    plus = tuple(max(int(x), 0) for x in d)
    minus = tuple(max(-int(x), 0) for x in d)
    if plus == minus:
        return Poly.zero(len(d))
    return Poly({plus: 1}, len(d)) - Poly({minus: 1}, len(d))


def to_difference_variables(p: Poly) -> Poly:
    """Rewrite a translation-invariant polynomial in w_{i,i+1} = t_i - t_{i+1}.

    t_i = t_m + w_{i,i+1} + ... + w_{m-1,m}; the result must not involve t_m.
    """
    m = p.nvars
    # ring: w_12, ..., w_{m-1,m}, t_m
    images = []
    for i in range(m):
        coeffs = [0] * m
        for j in range(i, m - 1):
            coeffs[j] = 1
        coeffs[m - 1] = 1
        images.append(linear_form(coeffs, m))
    q = p.substitute(images) if p else Poly.zero(m)
    out = {}
    for e, c in q.terms.items():
        if e[-1]:
            raise BaseSpaceError("polynomial is not translation invariant")
        out[e[:-1]] = c
    return Poly(out, m - 1)


def from_difference_variables(p: Poly) -> Poly:
    m = p.nvars + 1
    images = [linear_form([0] * i + [1, -1] + [0] * (m - i - 2), m) for i in range(m - 1)]
    return p.substitute(images) if p else Poly.zero(m)


@dataclass(frozen=True)
class BaseIdeal:
    generators: tuple[Poly, ...]
    diff_generators: tuple[Poly, ...]
    truncation_k: int
    minimalized: bool
    v_perp: tuple[tuple[int, ...], ...]
    n_vars: int

    @property
    def order(self) -> MonomialOrder:
        return MonomialOrder()

    def groebner(self) -> list[Poly]:
        return groebner(self.generators, self.order)

    def contains(self, f: Poly) -> bool:
        return in_ideal(f, self.groebner(), self.order)


def _minimal_generators(gb: list[Poly], order: MonomialOrder) -> list[Poly]:
    # homogeneous ideal: keep a basis element unless the earlier kept ones generate it
    kept: list[Poly] = []
    for g in sorted(gb, key=lambda p: (p.degree(), order.key(order.leading(p)))):
        if kept and in_ideal(g, groebner(kept, order), order):
            continue
        kept.append(g)
    return kept


def base_ideal(q: CrossSection, extra_truncation: int = 1, s: Optional[SummandSpace] = None) -> BaseIdeal:
    """J generated by g_{d,k} for an HNF basis d of V-perp and 1 <= k <= sum(d+)."""
    s = s or summand_space(q)
    m = s.n_components
    basis = v_perp_basis(s)
    order = MonomialOrder()
    if not basis or m <= 1:
        return BaseIdeal((), (), 0, True, (), m)
    kmax = max(sum(max(x, 0) for x in d) for d in basis)

    def gens_up_to(K):
        return [g_poly(s, d, k) for k in range(1, K + 1) for d in basis]

    gb = groebner(gens_up_to(kmax), order)
    if extra_truncation > 0:
        gb_extra = groebner(gens_up_to(kmax + extra_truncation), order)
        if not all(in_ideal(g, gb, order) for g in gb_extra):
            raise BaseSpaceError("base ideal grew beyond the truncation degree")
    gens = _minimal_generators(gb, order)
    diff = [to_difference_variables(g) for g in gens]
    worder = MonomialOrder()
    diff = [d.content_normalized(worder) for d in diff]
    return BaseIdeal(tuple(gens), tuple(diff), kmax, True, tuple(tuple(d) for d in basis), m)


def _graded_span(gens: Sequence[Poly], n: int, k: int, skip_degree_k: bool = False) -> list[Poly]:
    out = []
    for g in gens:
        dg = g.degree()
        if dg > k or (skip_degree_k and dg == k):
            continue
        for mono in monomials_of_degree(n, k - dg):
            out.append(g.mul_term(mono, Fraction(1)))
    return out


def _dim_span(polys: Sequence[Poly], basis: Sequence[tuple[int, ...]]) -> int:
    if not polys:
        return 0
    idx = {m: i for i, m in enumerate(basis)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(basis)
        for mono, c in p.terms.items():
            row[idx[mono]] = c
        rows.append(row)
    return rank(rows)


def obstruction_space_dims(b: BaseIdeal, kmax: int) -> list[int]:
    """dim W_k for k = 1..kmax, where W = J / ((w) J + J_1 C[w])."""
    if not b.diff_generators:
        return [0] * kmax
    n = b.n_vars - 1
    gens = list(b.diff_generators)
    linear = [g for g in gens if g.degree() == 1]
    dims = []
    for k in range(1, kmax + 1):
        mons = monomials_of_degree(n, k)
        j_k = _graded_span(gens, n, k)
        # (w) J in degree k: generators of degree < k times a nonconstant monomial
        jt_k = _graded_span(gens, n, k, skip_degree_k=True) + _graded_span(linear, n, k)
        dims.append(_dim_span(j_k, mons) - _dim_span(jt_k, mons))
    return dims

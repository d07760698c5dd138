"""Toric equations f of Y, their liftings F over the base, and flatness checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .base_space import BaseIdeal, base_ideal
from .cones import ConeError, CrossSection
from .exact import dot, solve_nonneg_integer
from .eta import (
    EtaFunctional,
    eta_star,
    eta_star_refined,
    nonneg_representative,
    pairing,
    support_data,
)
from .hilbert import GeneratorSet
from .minkowski import SummandSpace, summand_space
from .polys import MonomialOrder, Poly, groebner, reduce


class FamilyError(ConeError):
    pass


@dataclass(frozen=True, order=True)
class EquationTag:
    a: tuple[int, ...]
    b: tuple[int, ...]
    alpha: int
    beta: int


@dataclass(frozen=True)
class FamilyEquation:
    tag: EquationTag
    f: Poly
    F: Poly
    rep: tuple[int, ...]


# --- toric ideal ---------------------------------------------------------


def _grading(columns: Sequence[Sequence[int]]):
    """The cone generated by the columns and a linear form positive on all of them."""
    from .cones import PointedCone

    cone = PointedCone.from_rays([list(col) for col in columns])
    if not cone.is_pointed or not cone.is_full_dimensional:
        raise FamilyError("semigroup cone is not pointed and full-dimensional")
    # facets of a full-dimensional pointed cone sum to an interior point of its dual
    form = [sum(col) for col in zip(*cone.facets)]
    if any(dot(form, col) <= 0 for col in columns):
        raise FamilyError("no positive grading found")
    return cone, form


def _positive_weights(columns: Sequence[Sequence[int]]) -> list[int]:
    _, form = _grading(columns)
    return [dot(form, col) for col in columns]


class _FiberSolver:
    """All x in N^n with sum x_i columns_i = b.

    Suffix solutions are memoized on (first variable, remainder) and shared
    between degrees; every remainder must stay in the semigroup cone.
    """

    def __init__(self, columns: Sequence[Sequence[int]], facets: Sequence[Sequence[int]], form: Sequence[int]):
        self.columns = [tuple(c) for c in columns]
        self.facets = facets
        self.form = form
        self.wts = [dot(form, col) for col in columns]
        self.memo: dict = {}

    def _suffixes(self, i: int, rest: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        n = len(self.columns)
        if not any(rest):
            return ((0,) * (n - i),)
        if i == n:
            return ()
        key = (i, rest)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        col = self.columns[i]
        for k in range(dot(self.form, rest) // self.wts[i] + 1):
            nxt = tuple(r - k * c for r, c in zip(rest, col))
            if k and any(dot(f, nxt) < 0 for f in self.facets):
                break
            for tail in self._suffixes(i + 1, nxt):
                out.append((k,) + tail)
        self.memo[key] = tuple(out)
        return self.memo[key]

    def fiber(self, b: Sequence[int]) -> list[tuple[int, ...]]:
        return sorted(self._suffixes(0, tuple(b)), reverse=True)


def _fiber(columns: Sequence[Sequence[int]], facets: Sequence[Sequence[int]], form: Sequence[int], b: Sequence[int]) -> list[tuple[int, ...]]:
    return _FiberSolver(columns, facets, form).fiber(b)


def _fibers(columns: Sequence[Sequence[int]], max_degree: int, max_weight: Optional[int] = None) -> dict:
    """Complete monomial fibers for every degree reached by a monomial of total degree <= max_degree.

    With max_weight, only degrees of at most that weight under the positive
    grading are visited.
    """
    n = len(columns)
    dim = len(columns[0])
    cone, form = _grading(columns)
    wts = [dot(form, col) for col in columns]
    degrees = set()
    for d in range(1, max_degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            if max_weight is not None and sum(wts[i] for i in combo) > max_weight:
                continue
            degrees.add(tuple(sum(columns[i][k] for i in combo) for k in range(dim)))
    ordered = sorted(degrees, key=lambda b: (dot(form, b), b))
    solver = _FiberSolver(columns, cone.facets, form)
    return {b: solver.fiber(b) for b in ordered}


def _components(monos: list[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    parent = list(range(len(monos)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(monos)):
        for j in range(i + 1, len(monos)):
            if any(a and b for a, b in zip(monos[i], monos[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i, m in enumerate(monos):
        groups.setdefault(find(i), []).append(m)
    comps = [sorted(g, reverse=True) for g in groups.values()]
    return sorted(comps, key=lambda g: g[0], reverse=True)


def variable_columns(g: GeneratorSet) -> list[tuple[int, ...]]:
    """Generators in variable order: z_1..z_w (non-R elements), then t for R."""
    return [g.elements[i] for i in g.non_r] + [g.elements[g.r_index]]


def _tag_of(u: Sequence[int], v: Sequence[int]) -> EquationTag:
    return EquationTag(tuple(u[:-1]), tuple(v[:-1]), u[-1], v[-1])


def tag_binomial(tag: EquationTag) -> Poly:
    u = tuple(tag.a) + (tag.alpha,)
    v = tuple(tag.b) + (tag.beta,)
    return Poly({u: 1}, len(u)) - Poly({v: 1}, len(v))


def degrevlex_key(priority: Sequence[int]):
    """Graded reverse lex key on exponent vectors, variables ranked by ``priority`` (first is largest)."""

    def key(m: Sequence[int]) -> tuple:
        p = [m[i] for i in priority]
        return (sum(p), tuple(-x for x in reversed(p)))

    return key


def toric_ideal(
    g: GeneratorSet,
    max_degree: int = 6,
    max_weight: Optional[int] = None,
    priority: Optional[Sequence[Sequence[int]]] = None,
) -> list[tuple[EquationTag, Poly]]:
    """Minimal binomial generators of the toric ideal, one per missing fiber-graph link.

    In each degree, monomials sharing a variable are linked. Every component
    of that graph that misses the smallest monomial of the fiber contributes
    (its smallest monomial) - (smallest monomial of the fiber), smallest in
    graded reverse lex. ``priority`` lists generator elements from the largest
    variable down; by default t comes first, then z_1, ..., z_w.
    """
    if g.r_index is None:
        raise FamilyError("generator set is not decorated")
    cols = variable_columns(g)
    if priority is None:
        order = [len(cols) - 1] + list(range(len(cols) - 1))
    else:
        order = [cols.index(tuple(e)) for e in priority]
        if sorted(order) != list(range(len(cols))):
            raise FamilyError("priority must list every generator once")
    key = degrevlex_key(order)
    fibers = _fibers(cols, max_degree, max_weight)
    out = []
    for b, monos in fibers.items():
        if len(monos) < 2:
            continue
        low = min(monos, key=key)
        found = []
        for comp in _components(monos):
            if low not in comp:
                found.append(min(comp, key=key))
        for head in sorted(found, key=key):
            tag = _tag_of(head, low)
            out.append((tag, tag_binomial(tag)))
    return out


def fiber_of(g: GeneratorSet, u: Sequence[int]) -> list[tuple[int, ...]]:
    """All monomials (in variable order) with the same degree as u."""
    cols = variable_columns(g)
    cone, form = _grading(cols)
    target = [sum(u[i] * cols[i][k] for i in range(len(cols))) for k in range(len(cols[0]))]
    return _fiber(cols, cone.facets, form, target)


# --- liftings -------------------------------------------------------------


class Family:
    """Shared data for lifting equations of Y over the base ideal."""

    def __init__(self, q: CrossSection, g: GeneratorSet, base: Optional[BaseIdeal] = None, refined: bool = True):
        if g.r_index is None:
            raise FamilyError("generator set is not decorated")
        self.q = q
        self.g = g
        self.space: SummandSpace = summand_space(q)
        self.base = base if base is not None else base_ideal(q, s=self.space)
        self.refined = refined
        self.w = len(g.non_r)
        self.m = self.space.n_components
        self.cs = [tuple(g.decorations[i][0]) for i in g.non_r]
        self.heights = [g.decorations[i][1] for i in g.non_r]
        self.cols = variable_columns(g)
        self.weights = _positive_weights(self.cols)
        self._rep_cache: dict = {}
        self._refined_cache: dict = {}

    @cached_property
    def eta_stars(self) -> list[EtaFunctional]:
        return [eta_star(self.q, c) for c in self.cs]

    @property
    def f_ring(self) -> int:
        return self.w + 1

    @property
    def F_ring(self) -> int:
        return self.w + self.m

    def f_names(self) -> list[str]:
        return [f"z{i + 1}" for i in range(self.w)] + ["t"]

    def F_names(self) -> list[str]:
        return [f"Z{i + 1}" for i in range(self.w)] + [f"t{i + 1}" for i in range(self.m)]

    def F_weights(self) -> list[int]:
        return self.weights[:-1] + [self.weights[-1]] * self.m

    def f_weights(self) -> list[int]:
        return list(self.weights)

    def c_of(self, a: Sequence[int]) -> tuple[int, ...]:
        dim = self.q.plane_dim
        return tuple(sum(a[n] * self.cs[n][k] for n in range(self.w)) for k in range(dim))

    def face_vertices(self, c: Sequence[int]) -> frozenset[int]:
        if not any(c):
            return frozenset(range(len(self.q.vertices)))
        vals = [pairing(v, c) for v in self.q.vertices]
        lo = min(vals)
        return frozenset(i for i, v in enumerate(vals) if v == lo)

    def face_tail(self, c: Sequence[int]) -> frozenset:
        return frozenset(r for r in self.q.tail_rays if dot(r, c) == 0)

    def representation(self, c: Sequence[int]) -> tuple[int, ...]:
        """p^c: smallest p in N^w with [c, eta0*(c)] = sum p_nu [c^nu, eta0*(c^nu)].

        Generators whose face contains the face of c are tried first; if they
        cannot reach the target, all generators are allowed.
        """
        c = tuple(c)
        if c in self._rep_cache:
            return self._rep_cache[c]
        z = support_data(self.q, c).eta0star
        target = list(c) + [z]
        if not any(target):
            self._rep_cache[c] = (0,) * self.w
            return self._rep_cache[c]
        fv, ft = self.face_vertices(c), self.face_tail(c)
        preferred = [
            n for n in range(self.w)
            if fv <= self.face_vertices(self.cs[n]) and ft <= self.face_tail(self.cs[n])
        ]
        bound = dot(self._form, self.q.join_covector(c, z)) // min(self.weights[:-1])
        sol = None
        for allowed in (preferred, list(range(self.w))):
            if not allowed:
                continue
            rows = [[(list(self.cs[n]) + [self.heights[n]])[k] for n in allowed] for k in range(len(target))]
            sol = solve_nonneg_integer(rows, target, bound)
            if sol is not None:
                break
        if sol is None:
            raise FamilyError(f"no representation of {target} by the generators")
        p = [0] * self.w
        for n, v in zip(allowed, sol):
            p[n] = v
        self._rep_cache[c] = tuple(p)
        return self._rep_cache[c]

    @cached_property
    def _form(self) -> list[int]:
        return _grading(self.cols)[1]

    def _refined(self, c: tuple[int, ...]) -> list[EtaFunctional]:
        if c not in self._refined_cache:
            self._refined_cache[c] = [eta_star_refined(self.q, c, self.cs[n]) for n in range(self.w)]
        return self._refined_cache[c]

    def _exponent(self, coeffs: Sequence[int], extra: int, c: Sequence[int]) -> tuple[int, ...]:
        """Nonnegative integral representative of extra*e1 + sum coeffs eta*(c^nu) - eta*(c)."""
        m = self.m
        if self.refined:
            parts = self._refined(c)
            base = eta_star_refined(self.q, c, c) if any(c) else EtaFunctional(tuple([Fraction(0)] * m))
        else:
            parts = self.eta_stars
            base = eta_star(self.q, c)
        vec = [Fraction(0)] * m
        vec[0] += extra
        for n, k in enumerate(coeffs):
            if k:
                vec = [a + k * b for a, b in zip(vec, parts[n].coords)]
        vec = [a - b for a, b in zip(vec, base.coords)]
        if all(x.denominator == 1 and x >= 0 for x in vec):
            return tuple(int(x) for x in vec)
        rep = nonneg_representative(self.space, EtaFunctional(tuple(vec)))
        if rep is None:
            raise FamilyError("no nonnegative exponent representative")
        return rep

    def f_poly(self, tag: EquationTag) -> Poly:
        return tag_binomial(tag)

    def f_in_F_ring(self, tag: EquationTag) -> Poly:
        """f(Z, t_1)."""
        n = self.F_ring
        u = list(tag.a) + [tag.alpha] + [0] * (self.m - 1)
        v = list(tag.b) + [tag.beta] + [0] * (self.m - 1)
        return Poly({tuple(u): 1}, n) - Poly({tuple(v): 1}, n)

    def lift(self, tag: EquationTag) -> FamilyEquation:
        self.check_tag(tag)
        c = self.c_of(tag.a)
        p = self.representation(c)
        ea = self._exponent(tag.a, tag.alpha, c)
        eb = self._exponent(tag.b, tag.beta, c)
        n = self.F_ring
        zp = tuple(p) + (0,) * self.m
        corr = Poly({zp[: self.w] + ea: 1}, n) - Poly({zp[: self.w] + eb: 1}, n)
        F = self.f_in_F_ring(tag) - corr
        return FamilyEquation(tag, self.f_poly(tag), F, tuple(p))

    def check_tag(self, tag: EquationTag) -> None:
        if self.c_of(tag.a) != self.c_of(tag.b):
            raise FamilyError("tag sides have different c-degree")
        ha = sum(x * h for x, h in zip(tag.a, self.heights)) + tag.alpha
        hb = sum(x * h for x, h in zip(tag.b, self.heights)) + tag.beta
        if ha != hb:
            raise FamilyError("tag sides have different R-degree")

    def character(self, exp: Sequence[int]) -> tuple:
        """Image of Z^a t^e in E* x V*: ([c], eta) with eta evaluated on a V basis."""
        a, e = exp[: self.w], exp[self.w:]
        c = self.c_of(a)
        eta = [Fraction(x) for x in e]
        for n, k in enumerate(a):
            if k:
                eta = [x + k * y for x, y in zip(eta, self.eta_stars[n].coords)]
        ev = tuple(sum(Fraction(v) * x for v, x in zip(row, eta)) for row in self.space.v_basis)
        return c, ev

    def special_fiber_poly(self, F: Poly) -> Poly:
        n = self.f_ring
        images = [Poly.var(i, n) for i in range(self.w)] + [Poly.var(self.w, n)] * self.m
        return F.substitute(images)

    def base_ideal_in_F_ring(self) -> list[Poly]:
        n = self.F_ring
        images = [Poly.var(self.w + i, n) for i in range(self.m)]
        return [g.substitute(images) for g in self.base.generators]

    def order(self) -> MonomialOrder:
        return MonomialOrder(self.F_weights())


def lift_equation(fam: Family, tag: EquationTag) -> FamilyEquation:
    return fam.lift(tag)


def special_fiber(fam: Family, eqs: Sequence[FamilyEquation]) -> list[Poly]:
    return [fam.special_fiber_poly(e.F) for e in eqs]


# --- flatness checks ------------------------------------------------------


@dataclass
class RelationReport:
    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _ideal_gb(fam: Family, eqs: Sequence[FamilyEquation], bound: Optional[int]) -> list[Poly]:
    return groebner([e.F for e in eqs] + fam.base_ideal_in_F_ring(), fam.order(), bound)


def check_relation_lifts(
    fam: Family,
    eqs: Sequence[FamilyEquation],
    shifts: int = 1,
    s_pairs: bool = True,
    max_pairs: Optional[int] = None,
) -> RelationReport:
    """Check the three relation types, and S-polynomial relations, lift over the base.

    Type (i) and (ii) must hold exactly. Type (iii) defects and lifted
    S-relations must reduce to 0 modulo J + (t_i - t_j) * (F).
    """
    rep = RelationReport()
    order = fam.order()
    n = fam.F_ring
    # (ii)
    cnt = 0
    for e in eqs:
        t2 = EquationTag(e.tag.a, e.tag.b, e.tag.alpha + 1, e.tag.beta + 1)
        lifted = fam.lift(t2)
        if Poly.var(fam.w, n) * e.F - lifted.F:
            rep.failures.append(("ii", e.tag))
        cnt += 1
    rep.checked["ii"] = cnt
    # (i): route every equation through each other monomial of its fiber
    cnt = 0
    for e in eqs:
        u = tuple(e.tag.a) + (e.tag.alpha,)
        v = tuple(e.tag.b) + (e.tag.beta,)
        for r in fiber_of(fam.g, u):
            if r in (u, v):
                continue
            ur, rv = _tag_of(u, r), _tag_of(r, v)
            lhs = fam.lift(ur).F + fam.lift(rv).F
            if lhs - e.F:
                rep.failures.append(("i", e.tag, r))
            cnt += 1
    rep.checked["i"] = cnt
    # (iii) and S-relations: membership in J + (w) * (F)
    diff_ideal = _difference_times_F(fam, eqs)
    targets = []
    for e in eqs:
        for nu in range(fam.w):
            for k in range(1, shifts + 1):
                r = [0] * fam.w
                r[nu] = k
                t3 = EquationTag(
                    tuple(x + y for x, y in zip(e.tag.a, r)),
                    tuple(x + y for x, y in zip(e.tag.b, r)),
                    e.tag.alpha,
                    e.tag.beta,
                )
                zr = tuple(r) + (0,) * fam.m
                defect = e.F.mul_term(zr, Fraction(1)) - fam.lift(t3).F
                targets.append((("iii", e.tag, nu, k), defect))
    if s_pairs:
        targets.extend(_s_relations(fam, eqs, max_pairs))
    bound = max((p.degree(fam.F_weights()) for _, p in targets), default=0)
    gb = groebner(diff_ideal, order, bound)
    cnt = {"iii": 0, "S": 0}
    for label, p in targets:
        cnt[label[0]] += 1
        if reduce(p, gb, order):
            rep.failures.append(label)
    rep.checked.update(cnt)
    return rep


def _difference_times_F(fam: Family, eqs: Sequence[FamilyEquation]) -> list[Poly]:
    n = fam.F_ring
    diffs = [Poly.var(fam.w + i, n) - Poly.var(fam.w + i + 1, n) for i in range(fam.m - 1)]
    return [d * e.F for d in diffs for e in eqs] + fam.base_ideal_in_F_ring()


def _binomial_tag(p: Poly) -> EquationTag:
    if len(p.terms) != 2 or sorted(p.terms.values()) != [-1, 1]:
        raise FamilyError("expected a pure binomial")
    u = next(m for m, c in p.terms.items() if c == 1)
    v = next(m for m, c in p.terms.items() if c == -1)
    return _tag_of(u, v)


def _s_relations(fam: Family, eqs: Sequence[FamilyEquation], max_pairs: Optional[int]):
    """Lift each S-pair syzygy of the f's and evaluate it on the F's.

    The reducers are the f's together with a binomial Groebner basis of the
    toric ideal; every element of it is itself tagged and lifted.
    """
    f_order = MonomialOrder(fam.f_weights())
    ext = list(eqs)
    known = {e.f for e in eqs} | {-e.f for e in eqs}
    for b in groebner([e.f for e in eqs], f_order):
        if b not in known:
            ext.append(fam.lift(_binomial_tag(b)))
    fs = [e.f for e in ext]
    out = []
    pairs = [(i, j) for i in range(len(eqs)) for j in range(i + 1, len(eqs))]
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    for i, j in pairs:
        coeffs = _syzygy(fs, i, j, f_order)
        if coeffs is None:
            raise FamilyError("S-polynomial does not reduce to zero")
        total = Poly.zero(fam.F_ring)
        for k, ck in coeffs.items():
            total = total + _to_F_ring(fam, ck) * ext[k].F
        out.append((("S", eqs[i].tag, eqs[j].tag), total))
    return out


def _to_F_ring(fam: Family, p: Poly) -> Poly:
    n = fam.F_ring
    images = [Poly.var(i, n) for i in range(fam.w)] + [Poly.var(fam.w, n)]
    return p.substitute(images)


def _syzygy(fs: Sequence[Poly], i: int, j: int, order: MonomialOrder) -> Optional[dict[int, Poly]]:
    """Coefficients s with sum s_k f_k = 0 coming from S(f_i, f_j) reduced by the f's.

    Returns None if the S-polynomial does not reduce to zero by the f's.
    """
    fi, fj = fs[i], fs[j]
    li, lj = order.leading(fi), order.leading(fj)
    lcm = tuple(max(a, b) for a, b in zip(li, lj))
    n = fi.nvars
    coeffs: dict[int, Poly] = {}

    def add(k, p):
        coeffs[k] = coeffs.get(k, Poly.zero(n)) + p

    mi = Poly({tuple(a - b for a, b in zip(lcm, li)): 1 / fi.terms[li]}, n)
    mj = Poly({tuple(a - b for a, b in zip(lcm, lj)): 1 / fj.terms[lj]}, n)
    s = mi * fi - mj * fj
    add(i, mi)
    add(j, -mj)
    lts = [(order.leading(f), k) for k, f in enumerate(fs)]
    p = dict(s.terms)
    guard = 0
    while p:
        guard += 1
        if guard > 10000:
            return None
        m = max(p, key=order.key)
        for lt, k in lts:
            if all(x <= y for x, y in zip(lt, m)):
                c = p[m] / fs[k].terms[lt]
                shift = tuple(x - y for x, y in zip(m, lt))
                term = Poly({shift: c}, n)
                add(k, -term)
                for gm, gc in fs[k].terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            return None
    return {k: v for k, v in coeffs.items() if v}


def build_family(
    q: CrossSection, g: GeneratorSet, max_degree: int = 6, base: Optional[BaseIdeal] = None, max_weight: Optional[int] = None
):
    fam = Family(q, g, base)
    eqs = [fam.lift(tag) for tag, _ in toric_ideal(g, max_degree, max_weight)]
    return fam, eqs

"""Acceptance suite: one check per criterion, each recorded as a PASS or FAIL line."""
import random
import sys
from fractions import Fraction

import sympy

from cases import polygon_generators, random_cone, random_full_cone, random_smooth_case
from conftest import PRINTED_E, PRINTED_F, PRINTED_LIFTS, Fixture, PrintedMap, parse_monomial, parse_terms
from oracles import binomial_expr, facets_by_vertex_enumeration, hilbert_by_box, monomials_up_to
from toricdef.base_space import obstruction_space_dims
from toricdef.cones import PointedCone, dual_cone
from toricdef.eta import (
    EtaFunctional,
    eta,
    eta_star,
    geq,
    in_dual_tautological,
    in_gamma,
    lambda_of,
    nonneg_representative,
    ray_evaluations,
    support_data,
)
from toricdef.family import Family, check_relation_lifts, special_fiber, toric_ideal, variable_columns
from toricdef.hilbert import hilbert_basis
from toricdef.polys import MonomialOrder, Poly, groebner, in_ideal, reduce
from toricdef.tangent import t1_dimension, t2_dimension

RESULTS = []

HEXAGON_TABLE = [
    ((6, -2), (0, Fraction(1, 2)), (0, 0, 0, 0, 0, -1), (0, 0, 0, 1)),
    ((1, 0), (0, 0), (0, 0, 0, 0, 0, 0), (0, 0, 0, 0)),
    ((0, 1), (0, 0), (0, 0, 0, 0, 0, 0), (0, 0, 0, 0)),
    ((2, -1), (Fraction(1, 2), 2), (0, 0, 0, 0, -1, -1), (0, 0, 0, 1)),
    ((-1, -1), (2, 1), (1, 1, 0, 0, 0, 0), (1, 2, 0, 0)),
    ((-1, 1), (1, 0), (1, 0, 0, 0, 0, 0), (1, 0, 0, 0)),
    ((0, -1), (Fraction(1, 2), 2), (0, 0, 0, 0, -1, -1), (0, 0, 0, 2)),
    ((-1, 0), (2, 1), (1, 1, 0, 0, 0, 0), (1, 1, 0, 0)),
]


def record(number, title, ok, detail=""):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok


def image(cols, u):
    return tuple(sum(e * col[k] for e, col in zip(u, cols)) for k in range(len(cols[0])))


def sides(tag):
    return tuple(tag.a) + (tag.alpha,), tuple(tag.b) + (tag.beta,)


# --- the checks -----------------------------------------------------------


def check_1_hilbert_basis(hexagon):
    got = set(hexagon.hilbert.elements)
    return got == set(PRINTED_E) and len(hexagon.hilbert.elements) == 9, f"{len(got)} elements"


def check_2_base_ideal(hexagon):
    t1, t2, t3, t4 = (Poly.var(i, 4) for i in range(4))
    printed = [t2 + t3 - 2 * t4, t1 - 2 * t3 + t4, t3 * t3 - 2 * t3 * t4 + t4 * t4]
    ours = list(hexagon.base.generators)
    order = MonomialOrder()
    gb_ours, gb_printed = groebner(ours, order), groebner(printed, order)
    mutual = all(in_ideal(p, gb_ours, order) for p in printed) and all(in_ideal(p, gb_printed, order) for p in ours)
    w12, w23, w34 = (Poly.var(i, 3) for i in range(3))
    printed_w = [w23 + 2 * w34, w12 + w23 - w34, w34 * w34]

    def unit_multiple(p, q):
        if set(p.terms) != set(q.terms):
            return False
        ratios = {p.terms[m] / q.terms[m] for m in p.terms}
        return len(ratios) == 1

    diff = list(hexagon.base.diff_generators)
    w_ok = len(diff) == 3 and all(any(unit_multiple(p, q) for q in printed_w) for p in diff)
    w_ok = w_ok and all(any(unit_multiple(p, q) for p in diff) for q in printed_w)
    return mutual and w_ok, f"mutual reduction {mutual}, w-form {w_ok}"


def check_3_eta_table(hexagon):
    q = hexagon.section
    bad = 0
    for c, v, lam, star in HEXAGON_TABLE:
        sd = support_data(q, c)
        es = eta_star(q, c)
        row_ok = (
            q.vertices[sd.vertex_index] == v
            and lambda_of(q, sd.path) == lam
            and es.coords == star
            and es.component_sum == sd.eta0star
        )
        bad += not row_ok
    return bad == 0, f"{len(HEXAGON_TABLE) - bad}/8 rows"


def check_4_toric_ideal(hexagon, printed_map):
    eqs = toric_ideal(hexagon.generators, 6, priority=PRINTED_E)
    ours = {frozenset(sides(tag)) for tag, _ in eqs}
    printed = {printed_map.f_binomial(row) for row in PRINTED_F}
    return len(eqs) == 20 and ours == printed, f"{len(ours & printed)}/20 printed binomials, {len(eqs)} returned"


def check_5_liftings(hexagon, printed_map):
    fam = Family(hexagon.section, hexagon.generators, hexagon.base)
    eqs = [fam.lift(tag) for tag, _ in toric_ideal(hexagon.generators, 6, priority=PRINTED_E)]
    n = fam.F_ring

    def printed_F(i):
        out = Poly.zero(n)
        for sign, body in parse_terms(PRINTED_LIFTS[i]):
            exp, refs = parse_monomial(body, "F")
            term = Poly({printed_map.F_from_printed(exp): sign}, n)
            for r in refs:
                term = term * printed_F(r)
            out = out + term
        return out

    order = fam.order()
    gb = groebner([e.F for e in eqs] + fam.base_ideal_in_F_ring(), order)
    by_f = {frozenset(sides(e.tag)): e for e in eqs}
    agree = 0
    for i, row in enumerate(PRINTED_F):
        e = by_f.get(printed_map.f_binomial(row))
        if e is None:
            continue
        p = printed_F(i)
        agree += not reduce(p - e.F, gb, order) or not reduce(p + e.F, gb, order)
    fiber_ok = special_fiber(fam, eqs) == [e.f for e in eqs]
    return agree == 20 and fiber_ok, f"{agree}/20 rows agree, special fiber {fiber_ok}"


def check_6_counterexample(heptagon):
    q = heptagon.section
    c = (-1, -1)
    x = EtaFunctional((Fraction(5), Fraction(1), Fraction(3, 5), Fraction(2, 5)))
    ray = (13, 0, 15, 10)
    k = list(heptagon.space.c_rays).index(ray) if ray in heptagon.space.c_rays else None
    witness = ray_evaluations(q, x - eta_star(q, c))[k] if k is not None else None
    ok = (
        eta(q, c).coords == (5, 1, Fraction(1, 5), 0)
        and eta_star(q, c).coords == (5, 1, 1, 0)
        and in_dual_tautological(q, c, x)
        and not in_gamma(q, c, x)
        and witness == -2
    )
    return ok, f"witness {witness} on {ray}"


def check_7_t1(hexagon, heptagon, square):
    fixtures = [t1_dimension(fx.section, fx.generators) for fx in (hexagon, heptagon, square)]
    ok = fixtures == [(1, 1)] * 3
    rng = random.Random(3)
    agree = 0
    for i in range(24):
        _, q, g = random_smooth_case(rng, polygon=i % 3 != 2)
        via_v, via_e = t1_dimension(q, g)
        agree += via_v == via_e
    return ok and agree == 24, f"fixtures {[a for a, _ in fixtures]}, random {agree}/24"


def check_8_lemma(hexagon, heptagon):
    checked = bad = 0
    for fx, seed in ((hexagon, 31), (heptagon, 37)):
        q = fx.section
        g = fx.generators
        cs = [g.decorations[i][0] for i in g.non_r]
        stars = [eta_star(q, c) for c in cs]
        for c, s in zip(cs, stars):
            sd = support_data(q, c)
            checked += 1
            bad += not (
                nonneg_representative(q, s) is not None
                and s.component_sum == sd.eta0star
                and eta(q, c).component_sum == sd.eta0
            )
        rng = random.Random(seed)
        for _ in range(50):
            coeffs = [rng.randint(0, 2) if rng.random() < 0.4 else 0 for _ in cs]
            c = tuple(sum(k * x[j] for k, x in zip(coeffs, cs)) for j in range(2))
            total = EtaFunctional(tuple(Fraction(0) for _ in stars[0].coords))
            for k, s in zip(coeffs, stars):
                total = total + s.scale(k)
            star = eta_star(q, c)
            checked += 1
            bad += not (
                geq(q, total, star)
                and nonneg_representative(q, star) is not None
                and star.component_sum == support_data(q, c).eta0star
            )
    return bad == 0, f"{checked - bad}/{checked} cases"


def check_9_flatness(hexagon):
    fam = Family(hexagon.section, hexagon.generators, hexagon.base)
    eqs = [fam.lift(tag) for tag, _ in toric_ideal(hexagon.generators, 6, priority=PRINTED_E)]
    rep = check_relation_lifts(fam, eqs)
    counts = ", ".join(f"{k} {rep.checked[k]}" for k in sorted(rep.checked))
    return rep.ok and rep.checked.get("S", 0) == 190, f"{counts}; failures {len(rep.failures)}"


def check_10_obstructions(hexagon, heptagon):
    rows = []
    ok = True
    for fx in (hexagon, heptagon):
        w = obstruction_space_dims(fx.base, 3)
        t2 = [t2_dimension(fx.section, fx.generators, k) for k in (1, 2, 3)]
        ok = ok and all(a <= b for a, b in zip(w, t2))
        rows.append(f"W {w} <= T2 {t2}")
    return ok, "; ".join(rows)


def check_11_oracles():
    rng = random.Random(2024)
    duals = 0
    for trial in range(50):
        n = 3 if trial < 30 else 4
        c = PointedCone.from_rays(random_full_cone(rng, n, rng.randint(n, n + 3)))
        duals += set(dual_cone(c).rays) == facets_by_vertex_enumeration(list(c.rays))
    rng = random.Random(99)
    bases = 0
    for trial in range(30):
        c = random_cone(rng, 2 if trial < 12 else 3)
        bases += set(hilbert_basis(c).elements) == hilbert_by_box(list(c.rays))
    rng = random.Random(5)
    ideals = 0
    for _ in range(10):
        g = polygon_generators(rng)
        cols = variable_columns(g)
        xs = sympy.symbols(f"x0:{len(cols)}")
        exprs = [binomial_expr(*sides(tag), xs) for tag, _ in toric_ideal(g, 4)]
        gb = sympy.groebner(exprs, *xs, order="grevlex", domain="QQ")
        fibers = {}
        for u in monomials_up_to(len(cols), 4):
            fibers.setdefault(image(cols, u), []).append(u)
        ideals += all(
            gb.reduce(binomial_expr(u, monos[0], xs))[1] == 0 for monos in fibers.values() for u in monos[1:]
        ) and all(image(cols, a) == image(cols, b) for a, b in (sides(t) for t, _ in toric_ideal(g, 4)))
    return duals == 50 and bases == 30 and ideals == 10, f"dual {duals}/50, hilbert {bases}/30, toric {ideals}/10"


# --- pytest entry points --------------------------------------------------


def run_check(number, title, fn, *args):
    try:
        ok, detail = fn(*args)
    except Exception as exc:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    record(number, title, ok, detail)
    assert ok, detail


def test_criterion_01_hilbert_basis(hexagon):
    run_check(1, "hexagon Hilbert basis equals the printed nine elements", check_1_hilbert_basis, hexagon)


def test_criterion_02_base_ideal(hexagon):
    run_check(2, "hexagon base ideal and its difference form", check_2_base_ideal, hexagon)


def test_criterion_03_eta_table(hexagon):
    run_check(3, "hexagon eta-bar* table", check_3_eta_table, hexagon)


def test_criterion_04_toric_ideal(hexagon, printed_map):
    run_check(4, "hexagon toric ideal equals the printed 20 binomials", check_4_toric_ideal, hexagon, printed_map)


def test_criterion_05_liftings(hexagon, printed_map):
    run_check(5, "hexagon liftings and special fiber", check_5_liftings, hexagon, printed_map)


def test_criterion_06_counterexample(heptagon):
    run_check(6, "heptagon non-saturated semigroup", check_6_counterexample, heptagon)


def test_criterion_07_t1(hexagon, heptagon, square):
    run_check(7, "T1 computed two ways", check_7_t1, hexagon, heptagon, square)


def test_criterion_08_lemma(hexagon, heptagon):
    run_check(8, "eta-bar* representability, superadditivity and sums", check_8_lemma, hexagon, heptagon)


def test_criterion_09_flatness(hexagon):
    run_check(9, "relations lift over the base", check_9_flatness, hexagon)


def test_criterion_10_obstructions(hexagon, heptagon):
    run_check(10, "dim W_k <= dim T2(-kR)", check_10_obstructions, hexagon, heptagon)


def test_criterion_11_oracles():
    run_check(11, "dual cone, Hilbert basis and toric ideal oracles", check_11_oracles)


if __name__ == "__main__":
    hexagon, heptagon, square = Fixture("hexagon"), Fixture("heptagon"), Fixture("square")
    pm = PrintedMap(hexagon)
    checks = [
        (1, "hexagon Hilbert basis equals the printed nine elements", check_1_hilbert_basis, (hexagon,)),
        (2, "hexagon base ideal and its difference form", check_2_base_ideal, (hexagon,)),
        (3, "hexagon eta-bar* table", check_3_eta_table, (hexagon,)),
        (4, "hexagon toric ideal equals the printed 20 binomials", check_4_toric_ideal, (hexagon, pm)),
        (5, "hexagon liftings and special fiber", check_5_liftings, (hexagon, pm)),
        (6, "heptagon non-saturated semigroup", check_6_counterexample, (heptagon,)),
        (7, "T1 computed two ways", check_7_t1, (hexagon, heptagon, square)),
        (8, "eta-bar* representability, superadditivity and sums", check_8_lemma, (hexagon, heptagon)),
        (9, "relations lift over the base", check_9_flatness, (hexagon,)),
        (10, "dim W_k <= dim T2(-kR)", check_10_obstructions, (hexagon, heptagon)),
        (11, "dual cone, Hilbert basis and toric ideal oracles", check_11_oracles, ()),
    ]
    failed = 0
    for number, title, fn, args in checks:
        try:
            ok, detail = fn(*args)
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failed += not record(number, title, ok, detail)
    sys.exit(1 if failed else 0)

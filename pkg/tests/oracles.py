"""Independent reference computations built on sympy and brute force."""
from itertools import combinations, product
from math import gcd
from functools import reduce

import sympy


def primitive(v):
    g = reduce(gcd, (abs(x) for x in v), 0)
    return tuple(x // g for x in v) if g else tuple(v)


def facets_by_vertex_enumeration(rays):
    """Facet normals of a full-dimensional cone: normals of (n-1)-subsets supporting every ray."""
    n = len(rays[0])
    out = set()
    for sub in combinations(rays, n - 1):
        ns = sympy.Matrix(sub).nullspace()
        if len(ns) != 1:
            continue
        v = ns[0]
        den = sympy.ilcm(*[x.q for x in v])
        normal = primitive([int(x * den) for x in v])
        vals = [sum(a * b for a, b in zip(normal, r)) for r in rays]
        if all(x >= 0 for x in vals):
            out.add(normal)
        elif all(x <= 0 for x in vals):
            out.add(tuple(-x for x in normal))
    return out


def in_cone(facets, v):
    return all(sum(a * b for a, b in zip(f, v)) >= 0 for f in facets)


def hilbert_by_box(rays):
    """Irreducible lattice points of a pointed full-dimensional cone, found in a bounding box.

    Every Hilbert basis element lies in the half-open parallelepiped of some
    n independent rays, hence in the box of coordinate bounds sum |r_k| and
    below the weight bound sum of the n heaviest rays.
    """
    facets = facets_by_vertex_enumeration(rays)
    n = len(rays[0])
    w = [sum(col) for col in zip(*facets)]
    weights = sorted((sum(a * b for a, b in zip(w, r)) for r in rays), reverse=True)
    wmax = sum(weights[:n])
    bounds = [sum(abs(r[k]) for r in rays) for k in range(n)]
    pts = []
    for v in product(*[range(-b, b + 1) for b in bounds]):
        if any(v) and in_cone(facets, v):
            wv = sum(a * b for a, b in zip(w, v))
            if wv < wmax or v in rays:
                pts.append((wv, v))
    pts.sort()
    basis = []
    for wv, v in pts:
        if not any(wy < wv and in_cone(facets, tuple(a - b for a, b in zip(v, y))) for wy, y in pts):
            basis.append(v)
    return set(basis)


def monomials_up_to(nvars, degree):
    out = []
    for d in range(degree + 1):
        for combo in combinations(range(nvars + d - 1), nvars - 1):
            prev, exp = -1, []
            for c in combo:
                exp.append(c - prev - 1)
                prev = c
            exp.append(nvars + d - 1 - prev - 1)
            out.append(tuple(exp))
    return out


def kernel_binomials(columns, degree):
    """All binomials u - v of total degree <= degree with equal image under the columns."""
    fibers = {}
    for u in monomials_up_to(len(columns), degree):
        b = tuple(sum(e * col[k] for e, col in zip(u, columns)) for k in range(len(columns[0])))
        fibers.setdefault(b, []).append(u)
    out = []
    for monos in fibers.values():
        for u, v in combinations(monos, 2):
            out.append((u, v))
    return out


def to_sympy(terms, symbols):
    """{exponent: coefficient} -> sympy expression."""
    expr = 0
    for exp, c in terms.items():
        m = sympy.Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else c
        for s, e in zip(symbols, exp):
            m = m * s**e
        expr += m
    return sympy.expand(expr)


def binomial_expr(u, v, symbols):
    return to_sympy({tuple(u): 1, tuple(v): -1}, symbols)


def sympy_rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0

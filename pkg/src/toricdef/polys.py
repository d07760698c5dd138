"""Sparse multivariate polynomials over Q and a truncated Buchberger algorithm."""
from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Optional, Sequence

Monomial = tuple[int, ...]


class Poly:
    """Immutable sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, object], nvars: int):
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self.nvars = nvars
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls({}, n)

    @classmethod
    def const(cls, c, n: int) -> "Poly":
        return cls({(0,) * n: c}, n)

    @classmethod
    def var(cls, i: int, n: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return cls({tuple(e): 1}, n)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Poly":
        return cls({tuple(exp): coeff}, len(exp))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(out, self.nvars)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly({m: c * v for m, v in self.terms.items()}, self.nvars)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, exp: Monomial, coeff: Fraction) -> "Poly":
        return Poly(
            {tuple(a + b for a, b in zip(m, exp)): c * coeff for m, c in self.terms.items()}, self.nvars
        )

    def degree(self, weights: Optional[Sequence[int]] = None) -> int:
        if not self.terms:
            return -1
        w = weights or (1,) * self.nvars
        return max(sum(a * b for a, b in zip(m, w)) for m in self.terms)

    def is_homogeneous(self, weights: Optional[Sequence[int]] = None) -> bool:
        w = weights or (1,) * self.nvars
        return len({sum(a * b for a, b in zip(m, w)) for m in self.terms}) <= 1

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by images[i] (all images share one ring)."""
        n = images[0].nvars if images else 0
        out = Poly.zero(n)
        powers: dict[tuple[int, int], Poly] = {}
        for m, c in self.terms.items():
            term = Poly.const(c, n)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    term = term * powers[key]
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def content_normalized(self, order: "MonomialOrder") -> "Poly":
        """Scale so the leading coefficient is 1."""
        if not self.terms:
            return self
        lc = self.terms[order.leading(self)]
        return self * (1 / lc)

    def format(self, names: Sequence[str], order: Optional["MonomialOrder"] = None) -> str:
        if not self.terms:
            return "0"
        order = order or MonomialOrder()
        parts = []
        for m in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(m) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Poly({self.format([f'x{i}' for i in range(self.nvars)])})"


class MonomialOrder:
    """Weighted degree, ties broken lexicographically (x0 > x1 > ...).

    With unit weights this is graded lex.
    """

    def __init__(self, weights: Optional[Sequence[int]] = None):
        self.weights = tuple(weights) if weights is not None else None
        self._cache: dict[Monomial, tuple] = {}

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            w = self.weights or (1,) * len(m)
            k = (sum(a * b for a, b in zip(m, w)), m)
            self._cache[m] = k
        return k

    def degree(self, m: Monomial) -> int:
        return self.key(m)[0]

    def leading(self, p: Poly) -> Monomial:
        return max(p.terms, key=self.key)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def reduce(f: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Full normal form of f modulo basis (leading terms with respect to order)."""
    lts = [(order.leading(g), g) for g in basis if g]
    p = dict(f.terms)
    rem: dict[Monomial, Fraction] = {}
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for lt, g in lts:
            if _divides(lt, m):
                factor = c / g.terms[lt]
                shift = tuple(x - y for x, y in zip(m, lt))
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = p.get(t, 0) - factor * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Poly(rem, f.nvars)


def groebner(
    polys: Iterable[Poly],
    order: Optional[MonomialOrder] = None,
    degree_bound: Optional[int] = None,
) -> list[Poly]:
    """Reduced Groebner basis via Buchberger with the coprime criterion.

    With ``degree_bound`` only S-pairs whose lcm has weighted degree at most
    the bound are processed; for ideals homogeneous in the order's weights
    the result is exact up to that degree.
    """
    order = order or MonomialOrder()
    basis: list[Poly] = []
    for p in polys:
        if p:
            basis.append(p.content_normalized(order))
    if not basis:
        return []
    lt = [order.leading(g) for g in basis]
    heap: list[tuple[tuple, int, int]] = []
    pending: set[tuple[int, int]] = set()

    def push(i: int, j: int) -> None:
        heapq.heappush(heap, (order.key(_lcm(lt[i], lt[j])), i, j))
        pending.add((i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)
    while heap:
        (deg, m), i, j = heapq.heappop(heap)
        pending.discard((i, j))
        a, b = lt[i], lt[j]
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        if degree_bound is not None and deg > degree_bound:
            continue
        # chain criterion: some k with lt[k] | m and pairs (i,k), (j,k) already handled
        if any(
            k != i and k != j and _divides(lt[k], m)
            and (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            continue
        gi, gj = basis[i], basis[j]
        s = gi.mul_term(tuple(x - y for x, y in zip(m, a)), 1 / gi.terms[a]) - gj.mul_term(
            tuple(x - y for x, y in zip(m, b)), 1 / gj.terms[b]
        )
        r = reduce(s, basis, order)
        if r:
            r = r.content_normalized(order)
            basis.append(r)
            lt.append(order.leading(r))
            k = len(basis) - 1
            for x in range(k):
                push(x, k)
    return _reduce_basis(basis, order)


def _reduce_basis(basis: list[Poly], order: MonomialOrder) -> list[Poly]:
    # drop elements whose leading term is divisible by another's
    basis = sorted(basis, key=lambda g: order.key(order.leading(g)))
    minimal: list[Poly] = []
    for g in basis:
        lg = order.leading(g)
        if not any(_divides(order.leading(h), lg) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = reduce(g, others, order)
        out.append(r.content_normalized(order))
    return sorted(out, key=lambda g: order.key(order.leading(g)))


def in_ideal(f: Poly, gb: Sequence[Poly], order: MonomialOrder) -> bool:
    return not reduce(f, gb, order)


def same_ideal(a: Sequence[Poly], b: Sequence[Poly], order: Optional[MonomialOrder] = None) -> bool:
    """Mutual reduction test."""
    order = order or MonomialOrder()
    ga, gb = groebner(a, order), groebner(b, order)
    return all(in_ideal(f, gb, order) for f in a) and all(in_ideal(f, ga, order) for f in b)


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent vectors in n variables of total degree d, lex descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def linear_form(coeffs: Sequence, n: Optional[int] = None) -> Poly:
    n = n or len(coeffs)
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = 1
            out[tuple(e)] = c
    return Poly(out, n)

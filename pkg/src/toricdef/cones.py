"""Polyhedral cones, duality, faces and the cross-section polyhedron Q(R)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from .exact import (
    ExactError,
    IntMatrix,
    dot,
    hermite_normal_form,
    hnf_rows,
    identity,
    integer_inverse,
    is_primitive,
    mat_vec,
    primitive_part,
    rank,
    transpose,
    vec_gcd,
)

Vector = tuple[int, ...]


class ConeError(ExactError):
    pass


class RigidError(ConeError):
    """Raised when Q(R) has no lattice vertex."""


def _tight(ray: Sequence[int], ineqs: Sequence[Sequence[int]]) -> frozenset[int]:
    return frozenset(i for i, h in enumerate(ineqs) if dot(h, ray) == 0)


def double_description(
    ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], n: int
) -> tuple[list[Vector], list[Vector]]:
    """Generators of {y : h.y >= 0 for h in ineqs, e.y = 0 for e in eqs}.

    Returns ``(rays, lineality)``; rays are primitive and sorted, the
    lineality basis is HNF-reduced. Motzkin's incremental method with the
    combinatorial adjacency test.
    """
    lin: list[list[int]] = identity(n)
    rays: list[list[int]] = []
    done: list[list[int]] = []  # processed inequalities, for tight sets
    constraints = [(list(e), True) for e in eqs] + [(list(h), False) for h in ineqs]
    for h, is_eq in constraints:
        if not any(h):
            continue
        p = next((l for l in lin if dot(h, l) != 0), None)
        if p is not None:
            hp = dot(h, p)
            if hp < 0:
                p, hp = [-x for x in p], -hp
            new_lin = []
            for l in lin:
                if l is p or l == [-x for x in p]:
                    continue
                hl = dot(h, l)
                v = [hp * a - hl * b for a, b in zip(l, p)] if hl else l
                if any(v):
                    new_lin.append(primitive_part(v))
            new_lin = [l for l in new_lin if any(l)]
            new_rays = []
            for r in rays:
                hr = dot(h, r)
                v = [hp * a - hr * b for a, b in zip(r, p)] if hr else r
                new_rays.append(primitive_part(v))
            if not is_eq:
                new_rays.append(primitive_part(p))
            lin = _independent(new_lin)
            rays = new_rays
        else:
            vals = [dot(h, r) for r in rays]
            pos = [r for r, v in zip(rays, vals) if v > 0]
            neg = [r for r, v in zip(rays, vals) if v < 0]
            zero = [r for r, v in zip(rays, vals) if v == 0]
            dim_pointed = n - len(lin) - len([e for e, q in constraints if q])
            tights = {tuple(r): _tight(r, done) for r in rays}
            combos = []
            for rp in pos:
                zp = tights[tuple(rp)]
                hp = dot(h, rp)
                for rn in neg:
                    common = zp & tights[tuple(rn)]
                    if len(common) < dim_pointed - 2 and dim_pointed > 2:
                        continue
                    adjacent = True
                    for r in rays:
                        if r is rp or r is rn:
                            continue
                        if common <= tights[tuple(r)]:
                            adjacent = False
                            break
                    if adjacent:
                        hn = dot(h, rn)
                        v = [hp * a - hn * b for a, b in zip(rn, rp)]
                        combos.append(primitive_part(v))
            rays = zero + combos if is_eq else pos + zero + combos
        if not is_eq:
            done.append(h)
        # drop duplicates
        seen = set()
        uniq = []
        for r in rays:
            if tuple(r) not in seen:
                seen.add(tuple(r))
                uniq.append(r)
        rays = uniq
    lin_rows = hnf_rows(lin) if lin else []
    return sorted(tuple(r) for r in rays), [tuple(r) for r in lin_rows]


def _independent(vs: list[list[int]]) -> list[list[int]]:
    out: list[list[int]] = []
    for v in vs:
        if rank(out + [v]) > len(out):
            out.append(v)
    return out


@dataclass(frozen=True)
class PointedCone:
    """A rational polyhedral cone with generator and facet descriptions.

    ``lineality`` is empty for pointed cones; ``equations`` is empty for
    full-dimensional ones. Facet normals pair nonnegatively with every ray.
    """

    rank: int
    rays: tuple[Vector, ...]
    facets: tuple[Vector, ...]
    lineality: tuple[Vector, ...] = ()
    equations: tuple[Vector, ...] = ()

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[int]], lineality: Sequence[Sequence[int]] = ()) -> "PointedCone":
        if not rays and not lineality:
            raise ConeError("a cone needs at least one generator")
        n = len((list(rays) + list(lineality))[0])
        gens = [list(r) for r in rays if any(r)]
        lin = [list(l) for l in lineality if any(l)]
        neg_lin = [[-x for x in l] for l in lin]
        facets, equations = double_description(gens + lin + neg_lin, [], n)
        cone = cls._assemble(n, gens, lin, facets, equations)
        return cone

    @classmethod
    def from_inequalities(
        cls, ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]] = (), n: Optional[int] = None
    ) -> "PointedCone":
        if n is None:
            n = len((list(ineqs) + list(eqs))[0])
        rays, lin = double_description(ineqs, eqs, n)
        if not rays and not lin:
            raise ConeError("the cone is the origin")
        return cls.from_rays(rays, lin)

    @classmethod
    def _assemble(cls, n, gens, lin, facets, equations) -> "PointedCone":
        # irredundant rays: extreme modulo lineality
        lin_dim = len(lin) and rank(lin)
        dim = rank(gens + lin) if gens or lin else 0
        extreme = []
        seen = set()
        for g in gens:
            p = tuple(primitive_part(g))
            if p in seen:
                continue
            tight = [list(f) for f in facets if dot(f, p) == 0]
            r = rank(tight + [list(e) for e in equations]) if (tight or equations) else 0
            if r == n - lin_dim - 1 and not _in_span(p, lin):
                seen.add(p)
                extreme.append(p)
        if not lin and dim and not extreme:
            raise ConeError("no extreme rays found")
        return cls(n, tuple(sorted(extreme)), tuple(facets), tuple(tuple(primitive_part(l)) for l in hnf_rows(lin)) if lin else (), tuple(equations))

    @cached_property
    def dim(self) -> int:
        gens = [list(r) for r in self.rays] + [list(l) for l in self.lineality]
        return rank(gens) if gens else 0

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, v: Sequence) -> bool:
        return all(dot(f, v) >= 0 for f in self.facets) and all(dot(e, v) == 0 for e in self.equations)

    def interior_point(self) -> Vector:
        return tuple(sum(col) for col in zip(*self.rays)) if self.rays else tuple([0] * self.rank)


def _in_span(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    if not basis:
        return not any(v)
    return rank(list(basis) + [list(v)]) == rank(basis)


def dual_cone(c: PointedCone) -> PointedCone:
    """The dual cone; rays and facets swap roles, as do lineality and equations."""
    return PointedCone(c.rank, c.facets, c.rays, c.equations, c.lineality)


def faces(c: PointedCone, dim: int) -> list[frozenset[int]]:
    """Faces of dimension ``dim`` as sets of ray indices (into ``c.rays``)."""
    if dim < 0 or dim > c.rank:
        raise ConeError("face dimension out of range")
    full = frozenset(range(len(c.rays)))
    zero_sets = [frozenset(i for i, r in enumerate(c.rays) if dot(f, r) == 0) for f in c.facets]
    lattice = {full}
    for z in zero_sets:
        lattice |= {f & z for f in lattice}
    lin = [list(l) for l in c.lineality]
    out = []
    for f in lattice:
        gens = [list(c.rays[i]) for i in f] + lin
        d = rank(gens) if gens else 0
        if d == dim:
            out.append(f)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def minors_gcd_2(u: Sequence[int], v: Sequence[int]) -> int:
    return vec_gcd([u[i] * v[j] - u[j] * v[i] for i, j in combinations(range(len(u)), 2)])


def check_codim2_smooth(c: PointedCone) -> bool:
    """True iff every two-dimensional face is spanned by part of a lattice basis."""
    for f in faces(c, 2):
        if len(f) != 2:
            return False
        i, j = sorted(f)
        if minors_gcd_2(c.rays[i], c.rays[j]) != 1:
            return False
    return True


# --- cross-section -------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Oriented compact edge from vertex ``tail`` to vertex ``head``."""

    tail: int
    head: int
    direction: tuple[Fraction, ...]


@dataclass(frozen=True)
class TwoFace:
    vertices: tuple[int, ...]
    signs: tuple[int, ...]  # one entry per edge, in {-1, 0, 1}


@dataclass(frozen=True)
class CrossSection:
    """Q = sigma cap [R = 1] in coordinates where R is the last coordinate.

    ``basis_change`` is a unimodular matrix P with P a = h (v, 1) for each
    vertex ray a of height h; the chosen origin vertex sits at 0.
    Covectors m in M become [c, z] = m P^{-1}.
    """

    cone: PointedCone
    R: Vector
    basis_change: tuple[Vector, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    heights: tuple[int, ...]
    vertex_rays: tuple[int, ...]
    tail_rays: tuple[Vector, ...]
    edges: tuple[Edge, ...]
    two_faces: tuple[TwoFace, ...]
    components: tuple[tuple[int, ...], ...]
    origin: int

    @property
    def plane_dim(self) -> int:
        return self.cone.rank - 1

    def is_lattice(self, i: int) -> bool:
        return self.heights[i] == 1

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        out = [0] * len(self.edges)
        for k, comp in enumerate(self.components):
            for i in comp:
                out[i] = k
        return tuple(out)

    @cached_property
    def neighbours(self) -> dict[int, list[tuple[int, int, int]]]:
        """vertex -> sorted list of (other vertex, edge index, direction sign)."""
        nb: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(len(self.vertices))}
        for k, e in enumerate(self.edges):
            nb[e.tail].append((e.head, k, 1))
            nb[e.head].append((e.tail, k, -1))
        for v in nb:
            nb[v].sort()
        return nb

    @cached_property
    def basis_inverse(self) -> IntMatrix:
        return integer_inverse([list(r) for r in self.basis_change])

    def split_covector(self, m: Sequence[int]) -> tuple[tuple[int, ...], int]:
        """Write m in M as [c, z] in adapted coordinates."""
        mp = [sum(m[i] * self.basis_inverse[i][j] for i in range(len(m))) for j in range(len(m))]
        return tuple(mp[:-1]), mp[-1]

    def join_covector(self, c: Sequence[int], z: int) -> Vector:
        mp = list(c) + [z]
        P = self.basis_change
        return tuple(sum(mp[i] * P[i][j] for i in range(len(mp))) for j in range(len(mp)))

    def to_plane(self, a: Sequence[int]) -> tuple[tuple[Fraction, ...], int]:
        x = mat_vec(self.basis_change, a)
        h = x[-1]
        return tuple(Fraction(v, h) if h else Fraction(v) for v in x[:-1]), h

    def from_plane(self, v: Sequence, h: int = 1) -> tuple[Fraction, ...]:
        x = [Fraction(s) * h for s in v] + [Fraction(h)]
        return tuple(mat_vec(self.basis_inverse, x))


def adapted_basis(R: Sequence[int]) -> IntMatrix:
    """Unimodular P whose last row is R (identity when R is the last unit vector)."""
    n = len(R)
    if list(R) == [0] * (n - 1) + [1]:
        return identity(n)
    # U R^T = e_1 with U unimodular, so R U^T = e_1^T and R = e_1 (U^T)^{-1}
    h, u = hermite_normal_form([[x] for x in R])
    if h[0][0] != 1:
        raise ConeError("R is not primitive")
    p = integer_inverse(transpose(u))
    return p[1:] + [p[0]]


def _ccw_key(center: Sequence[Fraction], start: Sequence[Fraction]):
    # exact angular order around center, starting at start
    sx, sy = start[0] - center[0], start[1] - center[1]

    def half(x, y):
        # 0 for angle in [0, pi), 1 for [pi, 2pi) measured from (sx, sy)
        cr = sx * y - sy * x
        dt = sx * x + sy * y
        return 0 if (cr > 0 or (cr == 0 and dt > 0)) else 1

    def key(p):
        x, y = p[0] - center[0], p[1] - center[1]
        return (half(x, y), _AngleCmp(x, y, sx, sy))

    return key


class _AngleCmp:
    __slots__ = ("x", "y")

    def __init__(self, x, y, sx, sy):
        # rotate so that (sx, sy) points along the positive axis
        self.x = sx * x + sy * y
        self.y = sx * y - sy * x

    def __lt__(self, other):
        # within one half plane: a < b iff cross(a, b) > 0
        return self.x * other.y - self.y * other.x > 0

    def __eq__(self, other):
        return self.x * other.y - self.y * other.x == 0


def cross_section(c: PointedCone, R: Sequence[int]) -> CrossSection:
    """Build Q(R) with ordered vertices, oriented edges, 2-faces and components."""
    R = tuple(int(x) for x in R)
    if len(R) != c.rank:
        raise ConeError("R has the wrong length")
    if not any(R) or not is_primitive(R):
        raise ConeError("R is not primitive")
    if not c.is_pointed:
        raise ConeError("cone is not pointed")
    vals = [dot(a, R) for a in c.rays]
    if any(v < 0 for v in vals):
        raise ConeError("R is negative on a ray of the cone")
    P = adapted_basis(R)
    images = [mat_vec(P, a) for a in c.rays]
    lattice_pts = [tuple(x[:-1]) for x, v in zip(images, vals) if v == 1]
    if not lattice_pts:
        raise RigidError("rigid in degree -R: Q has no lattice vertex")
    o = min(lattice_pts)
    # shear so that the chosen lattice vertex moves to the origin
    n = c.rank
    shear = identity(n)
    for i in range(n - 1):
        shear[i][n - 1] = -o[i]
    P = [[sum(shear[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    images = [mat_vec(P, a) for a in c.rays]
    vert_rays = [k for k, v in enumerate(vals) if v >= 1]
    tail = tuple(sorted(tuple(primitive_part(images[k][:-1])) for k, v in enumerate(vals) if v == 0))
    pts = {k: tuple(Fraction(x, vals[k]) for x in images[k][:-1]) for k in vert_rays}
    origin_ray = next(k for k in vert_rays if vals[k] == 1 and not any(pts[k]))

    two = faces(c, 2)
    adjacent = {frozenset(f) for f in two if len(f) == 2}
    dq = n - 1
    if dq == 2 and len(vert_rays) >= 3:
        center = [sum(pts[k][i] for k in vert_rays) / len(vert_rays) for i in range(2)]
        # push the center into the interior direction of the tail cone
        for t in tail:
            center = [center[i] + Fraction(t[i]) for i in range(2)]
        key = _ccw_key(center, pts[origin_ray])
        order = sorted(vert_rays, key=lambda k: key(pts[k]))
    else:
        order = sorted(vert_rays, key=lambda k: (pts[k] != pts[origin_ray], pts[k]))
    vertices = tuple(pts[k] for k in order)
    index = {k: i for i, k in enumerate(order)}

    edges: list[Edge] = []
    if dq == 2:
        m = len(order)
        for i in range(m):
            j = (i + 1) % m
            if m == 2 and i == 1:
                break
            if frozenset((order[i], order[j])) in adjacent:
                edges.append(Edge(i, j, tuple(b - a for a, b in zip(vertices[i], vertices[j]))))
    else:
        for i, j in combinations(range(len(order)), 2):
            if frozenset((order[i], order[j])) in adjacent:
                edges.append(Edge(i, j, tuple(b - a for a, b in zip(vertices[i], vertices[j]))))
    edge_of = {frozenset((e.tail, e.head)): k for k, e in enumerate(edges)}

    two_faces: list[TwoFace] = []
    for f in faces(c, 3) if n >= 3 else []:
        if not all(vals[k] >= 1 for k in f):
            continue
        verts = sorted(index[k] for k in f)
        cyc = _polygon_cycle(verts, edge_of)
        signs = [0] * len(edges)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            k = edge_of[frozenset((a, b))]
            signs[k] = 1 if edges[k].tail == a else -1
        if dq == 2:
            # keep the counterclockwise orientation
            signs = _orient_ccw(signs, edges, vertices)
        two_faces.append(TwoFace(tuple(verts), tuple(signs)))

    # components: edges glued through non-lattice vertices
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in range(len(vertices)):
        if vals[order[v]] == 1:
            continue
        inc = [k for k, e in enumerate(edges) if v in (e.tail, e.head)]
        for k in inc[1:]:
            parent[find(k)] = find(inc[0])
    groups: dict[int, list[int]] = {}
    for k in range(len(edges)):
        groups.setdefault(find(k), []).append(k)
    components = tuple(sorted(tuple(g) for g in groups.values()))

    return CrossSection(
        cone=c,
        R=R,
        basis_change=tuple(tuple(r) for r in P),
        vertices=vertices,
        heights=tuple(vals[k] for k in order),
        vertex_rays=tuple(order),
        tail_rays=tail,
        edges=tuple(edges),
        two_faces=tuple(two_faces),
        components=components,
        origin=index[origin_ray],
    )


def _polygon_cycle(verts: list[int], edge_of: dict) -> list[int]:
    adj = {v: sorted(w for w in verts if w != v and frozenset((v, w)) in edge_of) for v in verts}
    start = verts[0]
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            raise ConeError("compact 2-face is not a polygon")
        w = nxt[0]
        if w == start:
            break
        cyc.append(w)
        prev, cur = cur, w
        if len(cyc) > len(verts):
            raise ConeError("compact 2-face is not a polygon")
    return cyc


def _orient_ccw(signs, edges, vertices):
    area = Fraction(0)
    for k, s in enumerate(signs):
        if not s:
            continue
        a, b = (edges[k].tail, edges[k].head) if s > 0 else (edges[k].head, edges[k].tail)
        p, q = vertices[a], vertices[b]
        area += p[0] * q[1] - p[1] * q[0]
    if area < 0:
        return [-s for s in signs]
    return signs


def cone_from_json(data: dict) -> tuple[PointedCone, Vector]:
    """Parse {"rays": [[int,...],...], "R": [int,...]}."""
    if not isinstance(data, dict) or "rays" not in data or "R" not in data:
        raise ConeError("input must be an object with 'rays' and 'R'")
    rays = data["rays"]
    R = data["R"]
    ok = isinstance(rays, list) and rays and all(
        isinstance(r, list) and r and all(type(x) is int for x in r) for r in rays
    )
    if not ok or not (isinstance(R, list) and all(type(x) is int for x in R)):
        raise ConeError("rays and R must be lists of integers")
    n = len(R)
    if any(len(r) != n for r in rays):
        raise ConeError("rays and R must have equal length")
    return PointedCone.from_rays(rays), tuple(R)

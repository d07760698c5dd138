"""The summand space V(Q), the summand cone C(Q), and summand polyhedra Q_t."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import ConeError, CrossSection, double_description
from .exact import clear_denominators, kernel_lattice, mat_vec


@dataclass(frozen=True)
class SummandSpace:
    """V(Q) and C(Q) in collapsed coordinates (one coordinate per component)."""

    section: CrossSection
    collapse: tuple[int, ...]
    v_basis: tuple[tuple[int, ...], ...]
    c_rays: tuple[tuple[int, ...], ...]
    two_face_matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def n_edges(self) -> int:
        return len(self.collapse)

    @property
    def n_components(self) -> int:
        return len(self.section.components)

    @property
    def dim(self) -> int:
        return len(self.v_basis)

    def expand(self, t: Sequence) -> list:
        """Collapsed parameter vector to one entry per edge."""
        return [t[k] for k in self.collapse]

    def contains(self, t: Sequence) -> bool:
        return all(sum(Fraction(a) * b for a, b in zip(row, t)) == 0 for row in self.two_face_matrix)


def two_face_matrix(q: CrossSection) -> list[list[Fraction]]:
    """Rows of the closing conditions sum_i t_i eps_i d^i = 0, per ambient coordinate."""
    m = len(q.components)
    rows = []
    for face in q.two_faces:
        for coord in range(q.plane_dim):
            row = [Fraction(0)] * m
            for i, s in enumerate(face.signs):
                if s:
                    row[q.component_of[i]] += s * q.edges[i].direction[coord]
            rows.append(row)
    return rows


def summand_space(q: CrossSection) -> SummandSpace:
    m = len(q.components)
    mat = two_face_matrix(q)
    nonzero = [r for r in mat if any(r)]
    basis = kernel_lattice(nonzero, m).as_lists() if m else []
    if m:
        ineqs = [[int(i == j) for j in range(m)] for i in range(m)]
        eqs = [clear_denominators(r) for r in nonzero]
        rays, lin = double_description(ineqs, eqs, m)
        if lin:
            raise ConeError("summand cone is not pointed")
    else:
        rays = []
    return SummandSpace(
        section=q,
        collapse=q.component_of,
        v_basis=tuple(tuple(b) for b in basis),
        c_rays=tuple(sorted(rays, reverse=True)),
        two_face_matrix=tuple(tuple(r) for r in mat),
    )


@dataclass(frozen=True)
class SummandPolytope:
    vertex_map: tuple[tuple[Fraction, ...], ...]
    tail: tuple[tuple[int, ...], ...]

    def __add__(self, other: "SummandPolytope") -> "SummandPolytope":
        return minkowski_sum(self, other)


def summand_polytope(s: SummandSpace, t: Sequence) -> SummandPolytope:
    """Vertices v_t obtained by walking edges from the origin, scaling d^i by t_i."""
    q = s.section
    t = [Fraction(x) for x in t]
    if len(t) != s.n_components:
        raise ConeError("parameter has the wrong length")
    if any(x < 0 for x in t):
        raise ConeError("negative summand parameter")
    if not s.contains(t):
        raise ConeError("not a summand parameter")
    full = s.expand(t)
    dim = q.plane_dim
    pos: dict[int, tuple[Fraction, ...]] = {q.origin: tuple([Fraction(0)] * dim)}
    queue = [q.origin]
    while queue:
        v = queue.pop(0)
        for w, k, sign in q.neighbours[v]:
            step = tuple(sign * full[k] * x for x in q.edges[k].direction)
            target = tuple(a + b for a, b in zip(pos[v], step))
            if w in pos:
                if pos[w] != target:
                    raise ConeError("edge walk is not closed; parameter outside V(Q)")
            else:
                pos[w] = target
                queue.append(w)
    missing = [v for v in range(len(q.vertices)) if v not in pos]
    if missing:
        raise ConeError("compact 1-skeleton is disconnected")
    return SummandPolytope(tuple(pos[v] for v in range(len(q.vertices))), q.tail_rays)


def walk(q: CrossSection, t_full: Sequence, path: Sequence[int]) -> tuple[Fraction, ...]:
    """Endpoint of a vertex path from the origin, with edges scaled by t_full."""
    pos = [Fraction(0)] * q.plane_dim
    for a, b in zip(path, path[1:]):
        k = next(k for w, k, _ in q.neighbours[a] if w == b)
        sign = 1 if q.edges[k].tail == a else -1
        pos = [p + sign * Fraction(t_full[k]) * d for p, d in zip(pos, q.edges[k].direction)]
    return tuple(pos)


def minkowski_sum(p: SummandPolytope, p2: SummandPolytope) -> SummandPolytope:
    if p.tail != p2.tail or len(p.vertex_map) != len(p2.vertex_map):
        raise ConeError("summands have different tail cones")
    return SummandPolytope(
        tuple(tuple(a + b for a, b in zip(u, v)) for u, v in zip(p.vertex_map, p2.vertex_map)),
        p.tail,
    )


def evaluate(eta: Sequence, t: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(eta, t)), Fraction(0))


def v_coordinates(s: SummandSpace, t: Sequence) -> list[Fraction]:
    """Collapsed t evaluated against each v-basis vector (used for equality in V*)."""
    return mat_vec([[Fraction(x) for x in b] for b in s.v_basis], [Fraction(x) for x in t])

"""Command line front end: run pipeline stages on a cone given as JSON."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Optional

from .base_space import BaseIdeal, BaseSpaceError, base_ideal, obstruction_space_dims, t_names, w_names
from .cones import ConeError, CrossSection, PointedCone, cone_from_json, cross_section, dual_cone
from .eta import eta_star, lambda_of, support_data
from .exact import ExactError
from .family import Family, FamilyEquation, FamilyError, check_relation_lifts, toric_ideal
from .hilbert import GeneratorSet, e_decorate, hilbert_basis
from .minkowski import SummandSpace, summand_space
from .polys import MonomialOrder
from .tangent import HypothesisError, gorenstein_companion, interesting_degrees, t1_dimension, t2_dimension

STAGES = (
    "cross-section",
    "summands",
    "base-space",
    "eta-table",
    "hilbert",
    "toric-ideal",
    "lift",
    "t1",
    "t2",
    "degrees",
    "all",
)

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    pass


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


@dataclass
class PipelineConfig:
    input: Path
    stage: str
    max_degree: int = 6
    kmax: int = 3
    extra_truncation: int = 1
    fmt: str = "text"

    def __post_init__(self):
        if self.stage not in STAGES:
            raise InputError(f"unknown subcommand {self.stage}")
        if self.max_degree < 1 or self.kmax < 1 or self.extra_truncation < 0:
            raise InputError("degree bounds must be positive")


class Pipeline:
    """Lazily computed stages for one cone and degree R."""

    def __init__(self, cone: PointedCone, R, config: PipelineConfig):
        self.cone = cone
        self.R = R
        self.config = config

    @cached_property
    def section(self) -> CrossSection:
        return cross_section(self.cone, self.R)

    @cached_property
    def space(self) -> SummandSpace:
        return summand_space(self.section)

    @cached_property
    def base(self) -> BaseIdeal:
        return base_ideal(self.section, self.config.extra_truncation, self.space)

    @cached_property
    def generators(self) -> GeneratorSet:
        return e_decorate(self.hilbert, self.section)

    @cached_property
    def family(self) -> Family:
        return Family(self.section, self.generators, self.base)

    @cached_property
    def equations(self) -> list[FamilyEquation]:
        return [self.family.lift(tag) for tag, _ in toric_ideal(self.generators, self.config.max_degree)]

    # --- report sections ---

    def cross_section_report(self) -> dict:
        q = self.section
        return {
            "vertices": [fmt_vec(v) + ("" if q.is_lattice(i) else " *") for i, v in enumerate(q.vertices)],
            "edges": [f"d{k + 1}: {e.tail + 1} -> {e.head + 1} {fmt_vec(e.direction)}" for k, e in enumerate(q.edges)],
            "components": [" ".join(f"d{k + 1}" for k in comp) for comp in q.components],
            "tail rays": [fmt_vec(r) for r in q.tail_rays],
        }

    def summands_report(self) -> dict:
        s = self.space
        return {
            "dim V": s.dim,
            "V basis": [fmt_vec(v) for v in s.v_basis],
            "C rays": [fmt_vec(r) for r in s.c_rays],
        }

    def base_space_report(self) -> dict:
        b = self.base
        m = b.n_vars
        order = MonomialOrder()
        return {
            "V-perp basis": [fmt_vec(d) for d in b.v_perp],
            "truncation k": b.truncation_k,
            "J": [g.format(t_names(m), order) for g in b.generators],
            "J in differences": [g.format(w_names(m), order) for g in b.diff_generators],
            "dim W_k": list(obstruction_space_dims(b, self.config.kmax)),
        }

    def eta_table_report(self) -> dict:
        q, g = self.section, self.generators
        rows = []
        for nu, i in enumerate(g.non_r):
            c, z = g.decorations[i]
            sd = support_data(q, c)
            lam = lambda_of(q, sd.path)
            rows.append(
                f"z{nu + 1} | c={fmt_vec(c)} | v={fmt_vec(q.vertices[sd.vertex_index])}"
                f" | lambda={fmt_vec(lam)} | eta*={fmt_vec(eta_star(q, c).coords)} | eta0*={z}"
            )
        return {"rows": rows}

    @cached_property
    def hilbert(self) -> GeneratorSet:
        return hilbert_basis(dual_cone(self.cone))

    def hilbert_report(self) -> dict:
        elements = self.hilbert.elements
        R = tuple(self.R)
        return {
            "size": len(elements),
            "elements": [fmt_vec(e) + (" = R" if e == R else "") for e in elements],
            "R irreducible": R in elements,
        }

    def variables_report(self) -> dict:
        g = self.generators
        names = []
        nu = 0
        for i, e in enumerate(g.elements):
            if i == g.r_index:
                names.append(f"t = {fmt_vec(e)}")
            else:
                nu += 1
                names.append(f"z{nu} = {fmt_vec(e)}")
        return {"variables": names}

    def toric_ideal_report(self) -> dict:
        fam = self.family
        rows = [f"{k} | {fmt_vec(e.tag.a)},{fmt_vec(e.tag.b)},{e.tag.alpha},{e.tag.beta} | {e.f.format(fam.f_names())}"
                for k, e in enumerate(self.equations)]
        return {**self.variables_report(), "count": len(rows), "f": rows}

    def lift_report(self) -> dict:
        fam = self.family
        rows = [
            f"{k} | {e.f.format(fam.f_names())} | {e.F.format(fam.F_names())}" for k, e in enumerate(self.equations)
        ]
        rep = check_relation_lifts(fam, self.equations)
        return {
            **self.variables_report(),
            "count": len(rows),
            "F": rows,
            "special fiber equals f": all(fam.special_fiber_poly(e.F) == e.f for e in self.equations),
            "relations checked": {k: rep.checked[k] for k in sorted(rep.checked)},
            "relation failures": len(rep.failures),
        }

    def t1_report(self) -> dict:
        via_v, via_e = t1_dimension(self.section, self.generators, self.space)
        return {"t1": via_v, "via V": via_v, "via E": via_e, "C rays": [fmt_vec(r) for r in self.space.c_rays]}

    def t2_report(self) -> dict:
        ks = range(1, self.config.kmax + 1)
        return {
            "dim T2(-kR)": [t2_dimension(self.section, self.generators, k) for k in ks],
            "dim W_k": list(obstruction_space_dims(self.base, self.config.kmax)),
        }

    def degrees_report(self) -> dict:
        out: dict = {"interesting degrees": [fmt_vec(r) for r in interesting_degrees(self.cone)]}
        try:
            comp, rep = gorenstein_companion(self.cone, self.R)
        except HypothesisError as exc:
            out["companion"] = f"not defined: {exc}"
            return out
        out["companion rays"] = [fmt_vec(r) for r in comp.rays]
        out["dim V"] = rep.dim_v
        out["dim V companion"] = rep.dim_v_companion
        return out

    def report(self, stage: str) -> dict:
        handlers = {
            "cross-section": self.cross_section_report,
            "summands": self.summands_report,
            "base-space": self.base_space_report,
            "eta-table": self.eta_table_report,
            "hilbert": self.hilbert_report,
            "toric-ideal": self.toric_ideal_report,
            "lift": self.lift_report,
            "t1": self.t1_report,
            "t2": self.t2_report,
            "degrees": self.degrees_report,
        }
        if stage == "all":
            order = [s for s in STAGES if s not in ("all", "toric-ideal", "degrees")]
            return {s: handlers[s]() for s in order}
        return {stage: handlers[stage]()}


def render_text(report: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:" if indent else f"== {key} ==")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and all(isinstance(x, str) for x in value):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {x}" for x in value)
        else:
            lines.append(f"{pad}{key}: {json.dumps(value) if isinstance(value, (list, bool)) else value}")
    return lines


def load_input(path: Path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from exc
    try:
        return cone_from_json(data)
    except ConeError as exc:
        raise InputError(str(exc)) from exc


def run(config: PipelineConfig) -> tuple[int, str]:
    try:
        cone, R = load_input(config.input)
    except InputError as exc:
        return EXIT_INPUT, f"input error: {exc}"
    pipe = Pipeline(cone, R, config)
    try:
        report = pipe.report(config.stage)
    except (FamilyError, BaseSpaceError) as exc:
        return EXIT_INTERNAL, f"invariant failure: {exc}"
    except ConeError as exc:
        return EXIT_HYPOTHESIS, f"hypothesis violated: {exc}"
    except ExactError as exc:
        return EXIT_INTERNAL, f"invariant failure: {exc}"
    if config.fmt == "json":
        return EXIT_OK, json.dumps(report, indent=2)
    return EXIT_OK, "\n".join(render_text(report))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricdef", description=__doc__)
    p.add_argument("stage", choices=STAGES)
    p.add_argument("--input", required=True, type=Path, help="JSON file with integer 'rays' and 'R'")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--max-degree", type=int, default=6, help="total degree bound for the toric ideal")
    p.add_argument("--kmax", type=int, default=3, help="largest k for T2(-kR) and W_k")
    p.add_argument("--extra-truncation", type=int, default=1, help="extra degrees checked for the base ideal")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = PipelineConfig(args.input, args.stage, args.max_degree, args.kmax, args.extra_truncation, args.fmt)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, text = run(config)
    print(text, file=sys.stdout if status == EXIT_OK else sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

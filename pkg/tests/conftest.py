import json
import re
from pathlib import Path

import pytest

import toricdef
from toricdef.base_space import base_ideal
from toricdef.cones import cone_from_json, cross_section, dual_cone
from toricdef.family import Family, toric_ideal, variable_columns
from toricdef.hilbert import e_decorate, hilbert_basis
from toricdef.minkowski import summand_space

DATA = Path(toricdef.__file__).parent / "data"


class Fixture:
    """One cone with R and every derived object the tests share."""

    def __init__(self, name):
        self.path = DATA / f"{name}.json"
        self.cone, self.R = cone_from_json(json.loads(self.path.read_text()))
        self.dual = dual_cone(self.cone)
        self.section = cross_section(self.cone, self.R)
        self.space = summand_space(self.section)
        self.hilbert = hilbert_basis(self.dual)
        self.generators = e_decorate(self.hilbert, self.section)
        self._base = None

    @property
    def base(self):
        if self._base is None:
            self._base = base_ideal(self.section, s=self.space)
        return self._base


@pytest.fixture(scope="session")
def hexagon():
    return Fixture("hexagon")


@pytest.fixture(scope="session")
def heptagon():
    return Fixture("heptagon")


@pytest.fixture(scope="session")
def square():
    return Fixture("square")


@pytest.fixture(scope="session")
def orthant():
    return Fixture("orthant")


# The printed hexagon example lists E as R, z1, ..., z8 in this order.
PRINTED_E = [
    (0, 0, 1),
    (6, -2, 1),
    (1, 0, 0),
    (0, 1, 0),
    (2, -1, 1),
    (-1, -1, 3),
    (-1, 1, 1),
    (0, -1, 2),
    (-1, 0, 2),
]

PRINTED_F = [
    "z6z7 - tz8", "z3z7 - z2z8", "z5z6 - z8^2", "tz6 - z3z8", "z3z5 - tz8",
    "z2z5 - tz7", "tz5 - z7z8", "tz3 - z2z6", "t^2 - z2z8", "z2z7^2 - z4z5",
    "z2^2z8 - z4z6", "z2^2z7 - tz4", "tz2z7 - z4z8", "z4^3 - z1z7", "tz2^2 - z3z4",
    "z2z4^2z7 - z1z5", "z2z3z4^2 - z1z6", "z2^2z4^2 - tz1", "tz2z4^2 - z1z8", "z2^4z4 - z1z3",
]

# Lifted rows; "F8" and "F14" refer to earlier rows of the same list.
PRINTED_LIFTS = [
    "Z6Z7 - Z8t3", "Z3Z7 - t4^2 + F8", "Z5Z6 - Z8^2", "Z6t2 - Z3Z8", "Z3Z5 - Z8t2",
    "Z2Z5 - Z7t4", "Z5t3 - Z7Z8", "Z3t1 - Z2Z6", "t1t2 - Z2Z8", "Z2Z7^2 - Z4Z5",
    "Z2t1t4 - Z4Z6 - Z2F8", "Z2^2Z7 - Z4t4", "Z2Z7t3 - Z4Z8", "Z4^3 - Z1Z7", "Z2^2t4 - Z3Z4",
    "Z2Z4^2Z7 - Z1Z5", "Z2^3Z4t1 - Z1Z6 - Z2Z4F14", "Z2^2Z4^2 - Z1t4", "Z2Z4^2t3 - Z1Z8", "Z2^4Z4 - Z1Z3",
]

_TOKEN = re.compile(r"(F\d+|Z\d|z\d|t\d|t)(?:\^(\d))?")


def parse_monomial(text, kind):
    """Printed monomial -> exponent vector over (t, z1..z8) or (Z1..Z8, t1..t4), plus F references."""
    exp = [0] * (9 if kind == "f" else 12)
    refs = []
    for var, power in _TOKEN.findall(text):
        k = int(power or 1)
        if var.startswith("F"):
            refs.append(int(var[1:]))
        elif var == "t":
            exp[0] += k
        elif var[0] == "z":
            exp[int(var[1:])] += k
        elif var[0] == "Z":
            exp[int(var[1:]) - 1] += k
        else:
            exp[8 + int(var[1:]) - 1] += k
    return tuple(exp), refs


def parse_terms(row):
    """'a - b + c' -> [(sign, text)]."""
    out = []
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", row.replace(" ", "")):
        out.append((-1 if sign == "-" else 1, body))
    return out


class PrintedMap:
    """Translates the printed variable numbering of the hexagon example into ours."""

    def __init__(self, fixture):
        g = fixture.generators
        self.cols = variable_columns(g)
        self.printed_z = PRINTED_E[1:]
        self.perm = [self.cols.index(p) for p in self.printed_z]

    def f_from_printed(self, exp):
        """(t, z1..z8) in printed numbering -> our (z1..z8, t)."""
        out = [0] * 9
        for i, p in enumerate(self.perm):
            out[p] = exp[i + 1]
        out[8] = exp[0]
        return tuple(out)

    def F_from_printed(self, exp):
        """(Z1..Z8, t1..t4) in printed numbering -> ours."""
        out = [0] * 12
        for i, p in enumerate(self.perm):
            out[p] = exp[i]
        out[8:] = exp[8:]
        return tuple(out)

    def f_binomial(self, row):
        (s1, a), (s2, b) = parse_terms(row)
        u = self.f_from_printed(parse_monomial(a, "f")[0])
        v = self.f_from_printed(parse_monomial(b, "f")[0])
        return frozenset([u, v])

    def priority(self):
        return PRINTED_E


@pytest.fixture(scope="session")
def printed_map(hexagon):
    return PrintedMap(hexagon)


@pytest.fixture(scope="session")
def hexagon_family(hexagon):
    fam = Family(hexagon.section, hexagon.generators, hexagon.base)
    tags = toric_ideal(hexagon.generators, 6, priority=PRINTED_E)
    eqs = [fam.lift(tag) for tag, _ in tags]
    return fam, eqs


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

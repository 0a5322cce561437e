import re
import pytest
from pathlib import Path
from typing import Dict, List, Tuple
from click.testing import CliRunner
from kpc.models import Instance
from kpc.services.instance_service import validate_instance
from kpc.services.exact_service import solve_oracle
from kpc.services.generator_service import SplitMix64, random_instance

FIXTURES = Path(__file__).parent / "fixtures"

SUITE_SEED = 20240601
SUITE_SIZE = 500
SUITE_DENSITIES = [d / 10 for d in range(10)]


@pytest.fixture
def fig1_raw() -> dict:
    """The six-item example: profits, weights, c = 20 and four conflicts"""
    return {
        "name": "fig1",
        "capacity": 20,
        "profits": [6, 9, 9, 3, 7, 2],
        "weights": [7, 9, 4, 3, 6, 1],
        "edges": [(0, 1), (0, 4), (2, 3), (2, 4)],
    }


@pytest.fixture
def fig1(fig1_raw) -> Instance:
    return validate_instance(fig1_raw)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


def build_suite() -> List[Instance]:
    """n in [8, 18], profits and weights in [1, 100], densities 0.0 .. 0.9"""
    rng = SplitMix64(SUITE_SEED)
    suite = []
    for index in range(SUITE_SIZE):
        n = 8 + rng.below(11)
        density = SUITE_DENSITIES[index % len(SUITE_DENSITIES)]
        suite.append(random_instance(rng, n, density, name=f"suite-{index}"))
    return suite


@pytest.fixture(scope="session")
def oracle_suite() -> List[Tuple[Instance, int]]:
    """Random instances paired with their exhaustive optimum, computed once per session"""
    return [(inst, solve_oracle(inst).profit) for inst in build_suite()]


LP_SECTIONS = ("Maximize", "Subject To", "Binaries", "End")
LP_TERM = re.compile(r"^(?:(\d+) )?(x\d+)$")
LP_ROW = re.compile(r"^([A-Za-z_][\w]*):\s*(.*)$")


def parse_lp(text: str) -> Dict:
    """
    Grammar-level reader for the LP subset the exporter writes: comment lines,
    the four sections in order, named rows with '+'-joined terms, continuation
    lines, '<=' senses with integer right-hand sides, binary declarations.
    """
    sections: Dict[str, List[str]] = {}
    current = None
    order = []
    for raw in text.split("\n"):
        if raw.startswith("\\") or raw == "":
            continue
        if raw in LP_SECTIONS:
            current = raw
            order.append(raw)
            sections[current] = []
            continue
        assert current is not None, f"content before any section: {raw!r}"
        assert len(raw) <= 255, "LP line too long"
        sections[current].append(raw)
    assert order == list(LP_SECTIONS), f"sections out of order: {order}"
    assert sections["End"] == []

    def statements(lines: List[str]) -> List[str]:
        joined: List[str] = []
        for line in lines:
            stripped = line.strip()
            if LP_ROW.match(stripped):
                joined.append(stripped)
            else:
                assert joined and stripped.startswith(("+", "<=")), f"bad continuation {line!r}"
                joined[-1] += " " + stripped
        return joined

    def expression(text: str) -> Dict[str, int]:
        coefficients: Dict[str, int] = {}
        if not text.strip():
            return coefficients
        for term in text.split(" + "):
            match = LP_TERM.match(term.strip())
            assert match, f"bad term {term!r}"
            coefficients[match.group(2)] = int(match.group(1) or 1)
        return coefficients

    objective = statements(sections["Maximize"])
    assert len(objective) == 1
    name, body = LP_ROW.match(objective[0]).groups()
    parsed = {"objective": expression(body), "rows": {}, "binaries": []}

    for row in statements(sections["Subject To"]):
        name, body = LP_ROW.match(row).groups()
        lhs, sense, rhs = body.rpartition(" <= ")[0], "<=", body.rpartition(" <= ")[2]
        assert lhs, f"row {name} has no '<=' sense"
        parsed["rows"][name] = (expression(lhs), sense, int(rhs))

    for line in sections["Binaries"]:
        for token in line.split():
            assert re.match(r"^x\d+$", token), f"bad binary {token!r}"
            parsed["binaries"].append(token)
    return parsed


@pytest.fixture
def lp_parser():
    return parse_lp

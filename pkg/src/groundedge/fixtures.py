"""Regression checks of reference worked-example numbers on the bundled graphs."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping

from .datasets import dataset_path
from .graph import Graph, load_edge_list
from .optimize import exhaustive_optimum, greedy_exact, greedy_fast, verify_problem_equivalence
from .spectral import GroundedSystem, smallest_eigenpair

REQUIRED = ("fig1", "path8", "karate", "florentine", "southern_women", "social30")
EXPECTED_SIZE = {
    "fig1": (5, 5), "path8": (8, 7), "karate": (34, 78),
    "florentine": (15, 20), "southern_women": (32, 89), "social30": (30, 81),
}

# (label, pair) -> expected eigenvalue on the five-node graph grounded at 0
FIG1_PAIRS = (
    ((0, 2), (0, 4), 1.120), ((0, 3), (0, 4), 1.120), ((0, 2), (0, 3), 1.120),
    ((0, 2), (2, 3), 1.000), ((0, 3), (2, 3), 1.000), ((0, 4), (2, 3), 0.829),
    ((0, 2), (1, 4), 1.000), ((0, 3), (1, 4), 1.000), ((0, 4), (1, 4), 0.824),
    ((2, 3), (1, 4), 0.697),
)


class FixtureMissingError(FileNotFoundError):
    pass


@dataclass
class Check:
    name: str
    expected: float
    measured: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(abs(self.measured - self.expected) <= self.tolerance)

    @property
    def diff(self) -> float:
        return self.measured - self.expected


def _flag(name: str, ok: bool) -> Check:
    return Check(name, 1.0, 1.0 if ok else 0.0, 0.0)


@dataclass
class FixtureReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failed),
            "checks": [dict(asdict(c), diff=c.diff) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        w = max(len(c.name) for c in self.checks)
        rows = [f"{'check':<{w}}  {'expected':>10}  {'measured':>12}  {'diff':>10}  result"]
        for c in self.checks:
            rows.append(f"{c.name:<{w}}  {c.expected:>10.4f}  {c.measured:>12.6f}  {c.diff:>+10.2e}  "
                        f"{'pass' if c.passed else 'FAIL'}")
        return "\n".join(rows)


def load_fixtures(overrides: Mapping[str, Graph] | None = None) -> dict[str, Graph]:
    graphs = dict(overrides or {})
    for name in REQUIRED:
        if name in graphs:
            continue
        path = dataset_path(name)
        if not path.exists():
            raise FixtureMissingError(f"bundled fixture {name!r} missing at {path}")
        graphs[name] = load_edge_list(path)
    return graphs


def _lam(g: Graph, grounded, edges=()) -> float:
    return smallest_eigenpair(GroundedSystem(g.add_edges(edges) if edges else g, grounded)).eigenvalue


def run_fixture_suite(graphs: Mapping[str, Graph] | None = None) -> FixtureReport:
    """Run every worked-example check; ``graphs`` replaces bundled fixtures by name."""
    fx = load_fixtures(graphs)
    checks: list[Check] = []

    for name, (n, m) in EXPECTED_SIZE.items():
        checks.append(Check(f"{name}.nodes", n, fx[name].n, 0))
        checks.append(Check(f"{name}.edges", m, fx[name].m, 0))

    p8 = fx["path8"]
    l0 = _lam(p8, (0,))
    la = _lam(p8, (0,), [(0, 2)])
    le = _lam(p8, (0,), [(0, 6)])
    lae = _lam(p8, (0,), [(0, 2), (0, 6)])
    checks += [
        Check("path8.lambda_empty", 0.0437, l0, 1e-3),
        Check("path8.lambda_{(0,2)}", 0.0644, la, 1e-3),
        Check("path8.lambda_{(0,6)}", 0.1837, le, 1e-3),
        Check("path8.lambda_{(0,2),(0,6)}", 0.2544, lae, 1e-3),
        Check("path8.gain_small_set", 0.14, le - l0, 5e-3),
        Check("path8.gain_large_set", 0.19, lae - la, 5e-3),
        _flag("path8.gain_grows_with_set", le - l0 < lae - la),
    ]
    greedy_p8 = greedy_exact(GroundedSystem(p8, (0,)), 1).final_lambda
    checks.append(_flag("path8.greedy_k1_at_least_0.1837", greedy_p8 >= 0.1837 - 1e-3))

    f1 = fx["fig1"]
    f0 = _lam(f1, (0,))
    checks.append(Check("fig1.lambda_empty", 0.1864, f0, 1e-3))
    checks.append(Check("fig1.lambda_{(2,3)}_minus_empty", 0.0, _lam(f1, (0,), [(2, 3)]) - f0, 1e-9))
    for e1, e2, want in FIG1_PAIRS:
        checks.append(Check(f"fig1.lambda_{{{e1},{e2}}}".replace(" ", ""), want, _lam(f1, (0,), [e1, e2]), 1e-3))
    sys1 = GroundedSystem(f1, (0,))
    eq = verify_problem_equivalence(sys1, 2)
    checks += [
        Check("fig1.optimum_all_pairs", 1.120, eq.lambda_all_pairs, 1e-3),
        Check("fig1.optimum_grounded_pairs", 1.120, eq.lambda_grounded_pairs, 1e-3),
        _flag("fig1.optima_coincide", math.isclose(eq.lambda_all_pairs, eq.lambda_grounded_pairs,
                                                   rel_tol=0, abs_tol=1e-9)),
        Check("fig1.exhaustive_k2", 1.120, exhaustive_optimum(sys1, 2).final_lambda, 2e-3),
        Check("fig1.greedy_k2", 1.120, greedy_exact(sys1, 2).final_lambda, 2e-3),
        Check("fig1.fast_k2", 1.120, greedy_fast(sys1, 2).final_lambda, 2e-3),
    ]
    return FixtureReport(checks)

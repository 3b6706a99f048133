"""Experiment runner: configuration, grounded-node sampling, dispatch and CSV output."""

from __future__ import annotations

import csv
import io
import logging
import sys as _sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from .datasets import DATASETS, dataset_path
from .estimators import METHODS
from .graph import Graph, largest_connected_component, load_edge_list
from .optimize import MethodError, RunResult, ratio_bounds
from .spectral import DisconnectedFollowersError, GroundedSystem, SolverSettings

logger = logging.getLogger(__name__)

CSV_HEADER = ("method", "step", "edge_u", "edge_v", "lambda", "score", "elapsed_ms", "seed")


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 1)."""


class DataError(ValueError):
    """Graph file or grounded set unusable (exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    ``graph_path`` is an edge-list file or the name of a bundled dataset.
    Exactly one of ``grounded`` (raw labels) and ``random_grounded`` (a
    count, sampled with ``seed``) must be given.  ``timing=False`` writes
    ``elapsed_ms`` as 0 so repeated runs produce identical bytes.
    """

    graph_path: str
    k: int
    methods: tuple[str, ...] = ("greedy", "fast")
    grounded: tuple[int, ...] | None = None
    random_grounded: int | None = None
    seed: int = 0
    epsilon: float = 1e-3
    dense_threshold: int = 2048
    exhaustive_cap: int = 10**6
    output_path: str | None = None
    timing: bool = True

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if (self.grounded is None) == (self.random_grounded is None):
            raise ConfigError("give exactly one of an explicit grounded list or a random grounded count")
        if self.grounded is not None and not self.grounded:
            raise ConfigError("grounded list is empty")
        if self.random_grounded is not None and self.random_grounded < 1:
            raise ConfigError("random grounded count must be >= 1")
        if not self.methods:
            raise ConfigError("no methods selected")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown method(s) {unknown}; choose from {list(METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate method names")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.dense_threshold < 1 or self.exhaustive_cap < 1:
            raise ConfigError("dense threshold and exhaustive cap must be positive")

    def settings(self) -> SolverSettings:
        return SolverSettings(epsilon=self.epsilon, dense_threshold=self.dense_threshold, seed=self.seed)


def sample_grounded(n: int, count: int, seed: int) -> tuple[int, ...]:
    """``count`` distinct node ids drawn uniformly from ``range(n)`` with PCG64(seed)."""
    if count >= n:
        raise ConfigError(f"random grounded count {count} must be below the node count {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return tuple(sorted(int(v) for v in rng.choice(n, size=count, replace=False)))


def resolve_graph_path(spec: str) -> Path:
    p = Path(spec)
    if p.exists():
        return p
    if spec in DATASETS:
        return dataset_path(spec)
    raise DataError(f"graph file not found: {spec}")


def load_graph(spec: str) -> Graph:
    """Load an edge list (or bundled dataset) and keep its largest connected component."""
    path = resolve_graph_path(spec)
    try:
        g = load_edge_list(path)
    except (ValueError, OSError) as exc:  # parse errors, bad labels, undecodable bytes
        raise DataError(str(exc)) from exc
    if g.n < 2:
        raise DataError(f"{spec}: graph needs at least two nodes")
    lcc, _ = largest_connected_component(g)
    if lcc.n < g.n:
        logger.info("%s: kept largest component, %d of %d nodes", spec, lcc.n, g.n)
    return lcc


def resolve_grounded(g: Graph, cfg: ExperimentConfig) -> tuple[int, ...]:
    if cfg.random_grounded is not None:
        return sample_grounded(g.n, cfg.random_grounded, cfg.seed)
    ids = []
    for label in cfg.grounded:
        try:
            ids.append(g.node_of_label(label))
        except KeyError:
            raise DataError(f"grounded node {label} is not in the largest connected component") from None
    if len(set(ids)) >= g.n:
        raise DataError("every node of the component is grounded")
    return tuple(sorted(set(ids)))


@dataclass
class ExperimentOutcome:
    graph: Graph
    grounded: tuple[int, ...]
    results: dict[str, RunResult] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)
    runtime_ms: dict[str, float] = field(default_factory=dict)
    csv_text: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures


def _csv_rows(name: str, result: RunResult, labels: np.ndarray, seed: int, timing: bool):
    for step, st in enumerate(result.steps, start=1):
        u, v = st.edge
        yield (name, step, int(labels[u]), int(labels[v]), f"{st.lambda_after:.12g}",
               f"{st.score:.12g}", f"{st.elapsed_ms:.3f}" if timing else "0", seed)


def run_experiment(cfg: ExperimentConfig, stream: TextIO | None = None) -> ExperimentOutcome:
    """Run every configured method and write the CSV.

    Methods run sequentially on the same system.  A failing method is
    recorded in ``failures`` (its completed steps are still written) and
    the remaining methods continue.  Edges are written grounded endpoint
    first, in the raw labels of the input file.
    """
    stream = _sys.stdout if stream is None else stream
    g = load_graph(cfg.graph_path)
    grounded = resolve_grounded(g, cfg)
    system = GroundedSystem(g, grounded)
    settings = cfg.settings()
    out = ExperimentOutcome(g, grounded)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for name in cfg.methods:
        t0 = time.perf_counter()
        try:
            result = METHODS[name](system, cfg.k, settings, cfg.exhaustive_cap)
        except MethodError as exc:
            result = exc.partial
            out.failures[name] = str(exc)
        except Exception as exc:  # noqa: BLE001 - one method's failure must not stop the rest
            result = None
            out.failures[name] = f"{type(exc).__name__}: {exc}"
        out.runtime_ms[name] = (time.perf_counter() - t0) * 1e3
        if result is not None:
            out.results[name] = result
            writer.writerows(_csv_rows(name, result, g.labels, cfg.seed, cfg.timing))
        if name in out.failures:
            logger.error("method %s failed: %s", name, out.failures[name])
    out.csv_text = buf.getvalue()
    if cfg.output_path:
        Path(cfg.output_path).write_text(out.csv_text, encoding="utf-8")

    labels = ",".join(str(int(g.labels[s])) for s in grounded)
    print(f"graph: {cfg.graph_path} (n={g.n}, m={g.m}), grounded: {labels}, k={cfg.k}", file=stream)
    for name in cfg.methods:
        ms = out.runtime_ms[name]
        if name in out.failures:
            print(f"  {name:<12} FAILED ({out.failures[name]})  {ms:.1f} ms", file=stream)
        else:
            r = out.results[name]
            print(f"  {name:<12} lambda {r.initial_lambda:.6g} -> {r.final_lambda:.6g}  {ms:.1f} ms", file=stream)
    print(f"total runtime: {sum(out.runtime_ms.values()):.1f} ms", file=stream)
    return out


def bounds_report(cfg: ExperimentConfig) -> str:
    """Submodularity-ratio and curvature bounds for the configured graph and grounded set."""
    g = load_graph(cfg.graph_path)
    grounded = resolve_grounded(g, cfg)
    try:
        b = ratio_bounds(GroundedSystem(g, grounded), cfg.settings())
    except DisconnectedFollowersError as exc:
        raise DataError(str(exc)) from exc
    lines = [
        f"n                  {b.n}",
        f"s                  {b.s}",
        f"lambda2            {b.lambda2:.12g}",
        f"gamma_lower        {b.gamma_lower:.12g}",
        f"alpha_upper        {b.alpha_upper:.12g}",
        f"approx_ratio_lower {b.approx_ratio_lower:.12g}" if b.informative else "approx_ratio_lower n/a",
        f"informative        {'yes' if b.informative else 'not informative'}",
    ]
    return "\n".join(lines) + "\n"

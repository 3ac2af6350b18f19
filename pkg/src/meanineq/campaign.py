"""Seeded verification campaigns and random violation search.

A campaign draws instances (finite spaces, state/observable triples, or
random-matrix spaces), runs the matching verifier on each, and aggregates
counts and extremes.  Trial k of function j always receives the generator
``split_rng(seed, j, k)``, so replays are bit-identical at any parallelism
degree, and the worst case is reconstructed from its (function, trial)
coordinates rather than stored.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .functions import RepresentingFunction, get_function
from .operator_means import MATRIX_TOL, OperatorMeanSpec
from .reports import InequalityReport, VERDICT_VIOLATED
from .sampling import sample_density, sample_spd, split_rng
from .verify import (
    SCALAR_TOL,
    FiniteJointSpace,
    construct_counterexample,
    matrix_space,
    scalar_space,
    space_to_jsonable,
    verify_numeric,
    verify_operator,
    verify_random_matrix,
)

MODES = ("num", "op", "rm")

#: Scalar-instance sampler range: values are log-uniform on [1/16, 16].
VALUE_LOG2_RANGE = 4.0

DEFAULT_DIMS = (2, 6)
DEFAULT_ATOMS = (1, 12)


@dataclass(frozen=True)
class CampaignConfig:
    mode: str
    functions: tuple[str, ...]
    trials: int
    dims: tuple[int, int] = DEFAULT_DIMS
    atoms: tuple[int, int] = DEFAULT_ATOMS
    tol: float | None = None
    seed: int = 0

    def resolved_tol(self) -> float:
        if self.tol is not None:
            return float(self.tol)
        return SCALAR_TOL if self.mode == "num" else MATRIX_TOL


@dataclass(frozen=True)
class FunctionStats:
    trials: int
    violations: int
    worst_gap: float | None
    max_abs_gap: float | None


@dataclass(frozen=True)
class CampaignSummary:
    mode: str
    functions: tuple[str, ...]
    trials: int
    violations: int
    worst_gap: float | None
    worst_case: dict | None
    per_function: dict[str, FunctionStats]
    tol: float
    seed: int
    dims: tuple[int, int]
    atoms: tuple[int, int]


def validate_config(config: CampaignConfig) -> None:
    """Reject a bad configuration before any trial runs."""
    if config.mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}, got {config.mode!r}")
    if not config.functions:
        raise UsageError("campaign needs at least one function id")
    for fid in config.functions:
        f = get_function(fid)
        if config.mode in ("op", "rm"):
            OperatorMeanSpec(f)
    if config.trials < 0:
        raise UsageError(f"trials must be >= 0, got {config.trials!r}")
    lo, hi = config.dims
    if not (1 <= lo <= hi <= 64):
        raise UsageError(f"dims range must satisfy 1 <= min <= max <= 64, got {config.dims!r}")
    lo, hi = config.atoms
    if not (1 <= lo <= hi):
        raise UsageError(f"atoms range must satisfy 1 <= min <= max, got {config.atoms!r}")
    if config.tol is not None and config.tol <= 0.0:
        raise UsageError(f"tol must be positive, got {config.tol!r}")


def _parse_range(value: str, key: str) -> tuple[int, int]:
    parts = value.split("-") if "-" in value else [value, value]
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except (ValueError, IndexError):
        raise UsageError(f"config key {key!r} needs 'min-max' or a single integer, got {value!r}") from None
    return lo, hi


def parse_campaign_config(text: str) -> CampaignConfig:
    """Parse the flat key=value config format.

    Keys: mode (num|op|rm), functions (comma list of function ids), trials,
    dims (min-max), atoms (min-max), tol, seed.  Lines starting with ``#``
    are comments.
    """
    fields: dict[str, str] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise UsageError(f"config line {ln!r} is not 'key = value'")
        key, _, value = ln.partition("=")
        key, value = key.strip(), value.strip()
        if key in fields:
            raise UsageError(f"duplicate config key {key!r}")
        fields[key] = value
    known = {"mode", "functions", "trials", "dims", "atoms", "tol", "seed"}
    unknown = set(fields) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for required in ("mode", "functions", "trials"):
        if required not in fields:
            raise UsageError(f"config is missing required key {required!r}")
    try:
        trials = int(fields["trials"])
    except ValueError:
        raise UsageError(f"trials must be an integer, got {fields['trials']!r}") from None
    kwargs: dict = {
        "mode": fields["mode"],
        "functions": tuple(s.strip() for s in fields["functions"].split(",") if s.strip()),
        "trials": trials,
    }
    if "dims" in fields:
        kwargs["dims"] = _parse_range(fields["dims"], "dims")
    if "atoms" in fields:
        kwargs["atoms"] = _parse_range(fields["atoms"], "atoms")
    if "tol" in fields:
        try:
            kwargs["tol"] = float(fields["tol"])
        except ValueError:
            raise UsageError(f"tol must be a float, got {fields['tol']!r}") from None
    if "seed" in fields:
        try:
            kwargs["seed"] = int(fields["seed"])
        except ValueError:
            raise UsageError(f"seed must be an integer, got {fields['seed']!r}") from None
    config = CampaignConfig(**kwargs)
    validate_config(config)
    return config


def load_campaign_config(path) -> CampaignConfig:
    from pathlib import Path

    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {p}: {exc}") from None
    return parse_campaign_config(text)


def _log_uniform_values(rng: np.random.Generator, count: int) -> np.ndarray:
    return 2.0 ** rng.uniform(-VALUE_LOG2_RANGE, VALUE_LOG2_RANGE, size=count)


def _dirichlet_probs(rng: np.random.Generator, count: int) -> np.ndarray:
    e = rng.exponential(1.0, size=count)
    return e / e.sum()


def sample_scalar_space(
    rng: np.random.Generator, atoms: tuple[int, int] = DEFAULT_ATOMS
) -> FiniteJointSpace:
    """Random scalar space: Dirichlet probabilities, log-uniform values."""
    k = int(rng.integers(atoms[0], atoms[1] + 1))
    p = _dirichlet_probs(rng, k)
    x = _log_uniform_values(rng, k)
    y = _log_uniform_values(rng, k)
    return scalar_space(zip(p, x, y))


def sample_operator_triple(
    rng: np.random.Generator, dims: tuple[int, int] = DEFAULT_DIMS
):
    """Random (rho, A, B) with a density state and SPD observables."""
    n = int(rng.integers(dims[0], dims[1] + 1))
    rho = sample_density(n, rng)
    a = sample_spd(n, rng)
    b = sample_spd(n, rng)
    return rho, a, b


def sample_matrix_space(
    rng: np.random.Generator,
    dims: tuple[int, int] = DEFAULT_DIMS,
    atoms: tuple[int, int] = DEFAULT_ATOMS,
) -> FiniteJointSpace:
    """Random matrix-mode space with a density matrix on every atom."""
    n = int(rng.integers(dims[0], dims[1] + 1))
    k = int(rng.integers(atoms[0], atoms[1] + 1))
    p = _dirichlet_probs(rng, k)
    entries = []
    for i in range(k):
        rho = sample_density(n, rng)
        x = sample_spd(n, rng)
        y = sample_spd(n, rng)
        entries.append((p[i], x, y, rho))
    return matrix_space(entries)


def _run_trial(config: CampaignConfig, fid: str, fi: int, t: int) -> InequalityReport:
    rng = split_rng(config.seed, fi, t)
    tol = config.resolved_tol()
    if config.mode == "num":
        space = sample_scalar_space(rng, config.atoms)
        return verify_numeric(space, get_function(fid), tol, seed=config.seed)
    if config.mode == "op":
        rho, a, b = sample_operator_triple(rng, config.dims)
        return verify_operator(rho, a, b, OperatorMeanSpec(get_function(fid)), tol, seed=config.seed)
    space = sample_matrix_space(rng, config.dims, config.atoms)
    return verify_random_matrix(space, OperatorMeanSpec(get_function(fid)), tol, seed=config.seed)


def _worst_case_payload(config: CampaignConfig, fid: str, fi: int, t: int) -> dict:
    rng = split_rng(config.seed, fi, t)
    if config.mode == "num":
        space = sample_scalar_space(rng, config.atoms)
    elif config.mode == "op":
        rho, a, b = sample_operator_triple(rng, config.dims)
        space = matrix_space([(1.0, a, b, rho)])
    else:
        space = sample_matrix_space(rng, config.dims, config.atoms)
    return {"function": fid, "trial": t, "space": space_to_jsonable(space)}


def run_campaign(config: CampaignConfig, workers: int = 1) -> CampaignSummary:
    """Run every (function, trial) pair and aggregate.

    ``workers`` > 1 executes trials in a thread pool; the summary is
    identical at any worker count because each trial derives its generator
    from the campaign seed and aggregation is order-independent.
    """
    validate_config(config)
    tasks = [
        (fid, fi, t)
        for fi, fid in enumerate(config.functions)
        for t in range(config.trials)
    ]

    def one(task) -> float:
        fid, fi, t = task
        return _run_trial(config, fid, fi, t).gap

    if workers > 1 and tasks:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            gaps = list(pool.map(one, tasks))
    else:
        gaps = [one(task) for task in tasks]

    tol = config.resolved_tol()
    per_function: dict[str, FunctionStats] = {}
    violations = 0
    worst: tuple[float, int, int] | None = None
    for fi, fid in enumerate(config.functions):
        chunk = gaps[fi * config.trials : (fi + 1) * config.trials]
        fviol = sum(1 for g in chunk if g < -tol)
        violations += fviol
        per_function[fid] = FunctionStats(
            trials=len(chunk),
            violations=fviol,
            worst_gap=min(chunk) if chunk else None,
            max_abs_gap=max(abs(g) for g in chunk) if chunk else None,
        )
        for t, g in enumerate(chunk):
            if worst is None or (g, fi, t) < worst:
                worst = (g, fi, t)

    worst_gap = worst[0] if worst is not None else None
    worst_case = None
    if violations > 0 and worst is not None:
        _, fi, t = worst
        worst_case = _worst_case_payload(config, config.functions[fi], fi, t)
    return CampaignSummary(
        mode=config.mode,
        functions=config.functions,
        trials=len(tasks),
        violations=violations,
        worst_gap=worst_gap,
        worst_case=worst_case,
        per_function=per_function,
        tol=tol,
        seed=config.seed,
        dims=config.dims,
        atoms=config.atoms,
    )


def search_violation(
    f: RepresentingFunction,
    rng: np.random.Generator,
    budget: int,
    tol: float = SCALAR_TOL,
    seed: int | None = None,
) -> InequalityReport:
    """Random-restart search for the most negative two-point gap.

    Draws (x1, x2, p) with log-uniform values and uniform weight and keeps
    the report with the smallest gap.  Pure restart, no refinement: the
    objective is piecewise smooth with kinks exactly where violations live.
    """
    if budget < 1:
        raise UsageError(f"search budget must be >= 1, got {budget!r}")
    best: InequalityReport | None = None
    for _ in range(budget):
        x1 = float(_log_uniform_values(rng, 1)[0])
        x2 = float(_log_uniform_values(rng, 1)[0])
        p = float(rng.uniform())
        if x1 == x2 or not 0.0 < p < 1.0:
            continue
        space = construct_counterexample(f, x1, x2, p)
        report = verify_numeric(space, f, tol, seed=seed)
        if best is None or report.gap < best.gap:
            best = report
    if best is None:
        # Astronomically unlikely: every draw was degenerate.
        space = construct_counterexample(f, 1.0, 2.0, 0.5)
        best = verify_numeric(space, f, tol, seed=seed)
    return best


def is_violated(report: InequalityReport) -> bool:
    return report.verdict == VERDICT_VIOLATED

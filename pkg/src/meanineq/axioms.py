"""Grid-based probes of the mean axioms and of midpoint concavity.

Everything here is a finite, decidable check on a caller-supplied grid of
positive abscissae: no symbolic reasoning.  A probe reports the worst
violation it found together with the inputs that witnessed it, and a check
passes exactly when its violation is at most the report tolerance.

Continuity is probed with a two-scale jump estimator.  For deltas d and 10d
the symmetric spread e(d) = |m(x(1+d), y) - m(x(1-d), y)| is linear in d for
continuous functions (kinks included) but saturates at the jump size for a
step, so the extrapolated limit (10*e(d) - e(10d)) / 9 is ~0 in the first
case and ~J in the second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .functions import RepresentingFunction, default_grid

SCALAR_TOL = 1e-10

_JUMP_DELTA = 1e-7
_HOMOGENEITY_SCALES = (0.5, 2.0, 10.0)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    violation: float
    witness: tuple[float, ...]
    passed: bool


@dataclass(frozen=True)
class AxiomReport:
    function: str
    tol: float
    grid_lo: float
    grid_hi: float
    grid_points: int
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class ConcavityVerdict:
    function: str
    concave: bool
    defect: float
    witness: tuple[float, float] | None
    tol: float


def _prepare_grid(grid) -> np.ndarray:
    if grid is None:
        return default_grid()
    arr = np.unique(np.asarray(grid, dtype=float))
    if arr.size == 0:
        raise UsageError("probe grid must be non-empty")
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0.0):
        raise UsageError("probe grid entries must be finite and strictly positive")
    return arr


def _mean_on(f: RepresentingFunction, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """mean(x, y) = y * f(x / y), broadcast over array arguments."""
    return ys * f.eval_array(xs / ys)


def _jump_estimate(spread_small: np.ndarray, spread_big: np.ndarray) -> np.ndarray:
    return (10.0 * spread_small - spread_big) / 9.0


def _suffix_min(m: np.ndarray) -> np.ndarray:
    s = m.copy()
    for i in range(s.shape[0] - 2, -1, -1):
        np.minimum(s[i, :], s[i + 1, :], out=s[i, :])
    for j in range(s.shape[1] - 2, -1, -1):
        np.minimum(s[:, j], s[:, j + 1], out=s[:, j])
    return s


def check_axioms(
    f: RepresentingFunction, grid=None, tol: float = SCALAR_TOL
) -> AxiomReport:
    """Probe the mean axioms for the mean generated by ``f`` on a grid.

    Covers the six mean axioms (fixed point, symmetry, betweenness, joint
    monotonicity, continuity, positive homogeneity) over all grid pairs,
    plus the conditions on the generating function itself (positivity,
    f(1) = 1, the symmetry functional equation t*f(1/t) = f(t), monotone
    increase, continuity).  Violations are relative wherever a natural
    scale exists, so a single tolerance is meaningful across checks.
    """
    if not (isinstance(tol, (int, float)) and tol > 0.0):
        raise UsageError(f"tol must be positive, got {tol!r}")
    g = _prepare_grid(grid)
    n = g.size
    checks: list[AxiomCheck] = []

    def add(name: str, violation: float, witness: tuple[float, ...]) -> None:
        v = float(violation)
        checks.append(AxiomCheck(name, v, witness, v <= tol))

    fg = f.eval_array(g)
    d1, d2 = _JUMP_DELTA, 10.0 * _JUMP_DELTA

    # Conditions on f itself.
    k = int(np.argmin(fg))
    add("f-positivity", -fg[k], (float(g[k]),))

    add("f-normalization", abs(float(f(1.0)) - 1.0), (1.0,))

    sym = np.abs(g * f.eval_array(1.0 / g) - fg) / np.abs(fg)
    k = int(np.argmax(sym))
    add("f-symmetry", sym[k], (float(g[k]),))

    if n >= 2:
        inc = fg[:-1] - fg[1:]
        k = int(np.argmax(inc))
        add("f-increasing", inc[k], (float(g[k]), float(g[k + 1])))
    else:
        add("f-increasing", 0.0, (float(g[0]),))

    e1 = np.abs(f.eval_array(g * (1.0 + d1)) - f.eval_array(g * (1.0 - d1)))
    e2 = np.abs(f.eval_array(g * (1.0 + d2)) - f.eval_array(g * (1.0 - d2)))
    jump = _jump_estimate(e1, e2) / np.abs(fg)
    k = int(np.argmax(jump))
    add("f-continuity", jump[k], (float(g[k]),))

    # Axioms of the induced mean, probed on all grid pairs.
    xs, ys = np.meshgrid(g, g, indexing="ij")
    m = _mean_on(f, xs, ys)

    diag = np.abs(np.diag(m) - g) / g
    k = int(np.argmax(diag))
    add("mean-fixed-point", diag[k], (float(g[k]), float(g[k])))

    asym = np.abs(m - m.T) / np.maximum(np.abs(m), np.abs(m.T))
    i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
    add("mean-symmetry", asym[i, j], (float(g[i]), float(g[j])))

    if n >= 2:
        lo, hi = np.minimum(xs, ys), np.maximum(xs, ys)
        between = np.where(xs == ys, -np.inf, np.maximum(lo - m, m - hi) / hi)
        i, j = np.unravel_index(int(np.argmax(between)), between.shape)
        add("mean-betweenness", between[i, j], (float(g[i]), float(g[j])))

        smin = _suffix_min(m)
        cand = (m[:-1, :-1] - smin[1:, 1:]) / m[:-1, :-1]
        i, j = np.unravel_index(int(np.argmax(cand)), cand.shape)
        block = m[i + 1 :, j + 1 :]
        bi, bj = np.unravel_index(int(np.argmin(block)), block.shape)
        add(
            "mean-monotonicity",
            cand[i, j],
            (float(g[i]), float(g[j]), float(g[i + 1 + bi]), float(g[j + 1 + bj])),
        )
    else:
        add("mean-betweenness", 0.0, (float(g[0]), float(g[0])))
        add("mean-monotonicity", 0.0, (float(g[0]), float(g[0])))

    e1 = np.abs(_mean_on(f, xs * (1.0 + d1), ys) - _mean_on(f, xs * (1.0 - d1), ys))
    e2 = np.abs(_mean_on(f, xs * (1.0 + d2), ys) - _mean_on(f, xs * (1.0 - d2), ys))
    jump = _jump_estimate(e1, e2) / np.abs(m)
    i, j = np.unravel_index(int(np.argmax(jump)), jump.shape)
    add("mean-continuity", jump[i, j], (float(g[i]), float(g[j])))

    worst_h = -np.inf
    witness_h: tuple[float, ...] = (float(g[0]), float(g[0]), _HOMOGENEITY_SCALES[0])
    for c in _HOMOGENEITY_SCALES:
        hv = np.abs(_mean_on(f, c * xs, c * ys) - c * m) / (c * m)
        i, j = np.unravel_index(int(np.argmax(hv)), hv.shape)
        if hv[i, j] > worst_h:
            worst_h = float(hv[i, j])
            witness_h = (float(g[i]), float(g[j]), c)
    add("mean-homogeneity", worst_h, witness_h)

    return AxiomReport(
        function=f.id,
        tol=float(tol),
        grid_lo=float(g[0]),
        grid_hi=float(g[-1]),
        grid_points=n,
        checks=tuple(checks),
    )


def concavity_probe(
    f: RepresentingFunction, grid=None, tol: float = 1e-9
) -> ConcavityVerdict:
    """Midpoint-concavity test over all grid pairs.

    Non-concave iff some pair (a, b) has f((a+b)/2) < (f(a)+f(b))/2 - tol;
    the witness is the worst such pair.  A "concave" verdict only means no
    violation was found at this grid resolution.
    """
    g = _prepare_grid(grid)
    if g.size < 2:
        raise UsageError("concavity probe needs a grid with at least 2 points")
    a = g[:, None]
    b = g[None, :]
    defect = (f.eval_array(a) + f.eval_array(b)) / 2.0 - f.eval_array((a + b) / 2.0)
    i, j = np.unravel_index(int(np.argmax(defect)), defect.shape)
    worst = float(defect[i, j])
    concave = worst <= tol
    witness = None if concave else (float(min(g[i], g[j])), float(max(g[i], g[j])))
    return ConcavityVerdict(
        function=f.id, concave=concave, defect=worst, witness=witness, tol=float(tol)
    )

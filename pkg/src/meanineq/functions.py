"""Representing functions and the scalar means they generate.

A normalized symmetric function f on (0, inf) generates a bivariate mean
through the perspective construction::

    mean(x, y) = y * f(x / y)

and every mean in the axiomatic class arises this way, with the function
recovered as ``f(t) = mean(1, t)``.  This module holds the function
catalog (arithmetic, WYD family, geometric, harmonic, logarithmic, and a
deliberately non-concave piecewise-affine entry) plus the scalar-side
operations; the operator-side analogues live in :mod:`.operator_means`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, UsageError

# Switch-over to the continuous extension of the logarithmic mean: when
# |log(x/y)| falls below this, the 0/0 formula is replaced by its limit.
LOG_MEAN_EXTENSION_CUTOFF = 1e-12

# Default probe grid: 33 log-spaced points on [1/16, 16], symmetric about 1
# under t -> 1/t so the functional equation t*f(1/t) = f(t) is exercised on
# both tails.
DEFAULT_GRID_POINTS = 33
DEFAULT_GRID_LO = 1.0 / 16.0
DEFAULT_GRID_HI = 16.0

ArrayLike = Union[float, np.ndarray]


def default_grid() -> np.ndarray:
    """The default probe grid of positive abscissae (see module notes)."""
    return 2.0 ** np.linspace(-4.0, 4.0, DEFAULT_GRID_POINTS)


def _require_positive(value: ArrayLike, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if not np.all(arr > 0.0):
        raise DomainError(f"{name} must be strictly positive, got {value!r}")
    return arr


@dataclass(frozen=True)
class RepresentingFunction:
    """A scalar function f on (0, inf) that generates a bivariate mean.

    ``fn`` must accept and return numpy arrays (scalars are promoted).  The
    ``claims_*`` flags record what the catalog asserts about the entry; they
    are declarations, not certificates, and the axiom/concavity probes in
    :mod:`.axioms` exist to test them.
    """

    id: str
    fn: Callable[[np.ndarray], np.ndarray]
    params: tuple[float, ...] = ()
    claims_concave: bool = True
    claims_operator_monotone: bool = True

    def __call__(self, t: ArrayLike) -> ArrayLike:
        arr = _require_positive(t, "t")
        out = np.asarray(self.fn(arr), dtype=float)
        if out.ndim == 0:
            return float(out)
        return out

    def eval_array(self, t: np.ndarray) -> np.ndarray:
        """Vectorized evaluation without scalar unwrapping (functional calculus)."""
        arr = _require_positive(t, "t")
        return np.asarray(self.fn(arr), dtype=float)


def _arithmetic(x: np.ndarray) -> np.ndarray:
    return (1.0 + x) / 2.0


def _geometric(x: np.ndarray) -> np.ndarray:
    return np.sqrt(x)


def _harmonic(x: np.ndarray) -> np.ndarray:
    return 2.0 * x / (x + 1.0)


def _logarithmic(x: np.ndarray) -> np.ndarray:
    lx = np.log(x)
    near_one = np.abs(lx) < LOG_MEAN_EXTENSION_CUTOFF
    safe = np.where(near_one, 1.0, lx)
    return np.where(near_one, 1.0, (x - 1.0) / safe)


def _counterexample_g(x: np.ndarray) -> np.ndarray:
    # Two affine branches with a kink at 1; both branches agree at value 1.
    return np.where(x <= 1.0, (x + 3.0) / 4.0, (3.0 * x + 1.0) / 4.0)


def _wyd_fn(beta: float) -> Callable[[np.ndarray], np.ndarray]:
    def fn(x: np.ndarray) -> np.ndarray:
        return (x**beta + x ** (1.0 - beta)) / 2.0

    return fn


def wyd_function(beta: float) -> RepresentingFunction:
    """WYD family entry (x^b + x^(1-b))/2; b must lie in the open interval (0, 1)."""
    if not (isinstance(beta, (int, float)) and math.isfinite(beta)):
        raise UsageError(f"wyd beta must be a finite number, got {beta!r}")
    if not 0.0 < beta < 1.0:
        raise UsageError(f"wyd beta must lie in (0, 1), got {beta!r}")
    beta = float(beta)
    return RepresentingFunction(
        id=f"wyd:{beta!r}", fn=_wyd_fn(beta), params=(beta,)
    )


_FIXED_CATALOG: dict[str, RepresentingFunction] = {
    "arithmetic": RepresentingFunction("arithmetic", _arithmetic),
    "geometric": RepresentingFunction("geometric", _geometric),
    "harmonic": RepresentingFunction("harmonic", _harmonic),
    "logarithmic": RepresentingFunction("logarithmic", _logarithmic),
    "counterexample-g": RepresentingFunction(
        "counterexample-g",
        _counterexample_g,
        claims_concave=False,
        claims_operator_monotone=False,
    ),
}

#: The names accepted by :func:`get_function`; ``wyd:<beta>`` carries a parameter.
CATALOG_IDS = ("arithmetic", "wyd:<beta>", "geometric", "harmonic", "logarithmic", "counterexample-g")


def get_function(fid: str) -> RepresentingFunction:
    """Resolve a function id string (the CLI / config grammar) to a catalog entry.

    Accepted: ``arithmetic``, ``wyd:<beta>`` (beta in (0,1)), ``geometric``,
    ``harmonic``, ``logarithmic``, ``counterexample-g``.
    """
    if not isinstance(fid, str):
        raise UsageError(f"function id must be a string, got {fid!r}")
    name = fid.strip()
    if name in _FIXED_CATALOG:
        return _FIXED_CATALOG[name]
    if name.startswith("wyd:"):
        raw = name[len("wyd:") :]
        try:
            beta = float(raw)
        except ValueError:
            raise UsageError(f"unparseable wyd beta {raw!r} in function id {fid!r}") from None
        return wyd_function(beta)
    raise UsageError(
        f"unknown function id {fid!r}; expected one of {', '.join(CATALOG_IDS)}"
    )


def eval_f(f: RepresentingFunction, t: float) -> float:
    """Evaluate the representing function at t > 0."""
    return float(f(float(t)))


def perspective_num(f: RepresentingFunction, x: ArrayLike, t: ArrayLike) -> ArrayLike:
    """Scalar perspective t * f(x / t) for x, t > 0 (broadcasts)."""
    xa = _require_positive(x, "x")
    ta = _require_positive(t, "t")
    out = ta * np.asarray(f.fn(xa / ta), dtype=float)
    if out.ndim == 0:
        return float(out)
    return out


def mean_num(f: RepresentingFunction, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """The mean generated by f: y * f(x / y), equal to perspective_num(f, x, y)."""
    return perspective_num(f, x, y)


def function_from_mean(mean: Callable[[float, float], float], t: float) -> float:
    """Recover the representing function of a mean: f(t) = mean(1, t)."""
    tv = float(t)
    if not (math.isfinite(tv) and tv > 0.0):
        raise DomainError(f"t must be strictly positive, got {t!r}")
    return float(mean(1.0, tv))

"""The universal inequality record shared by every verifier."""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

from .errors import NumericError

VERDICT_HOLDS = "holds"
VERDICT_VIOLATED = "violated"
VERDICT_EQUALITY = "equality"


def classify_gap(gap: float, tol: float) -> str:
    """violated iff gap < -tol; equality iff |gap| <= tol; holds otherwise."""
    if gap < -tol:
        return VERDICT_VIOLATED
    if abs(gap) <= tol:
        return VERDICT_EQUALITY
    return VERDICT_HOLDS


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of a verified inequality and the signed gap rhs - lhs."""

    lhs: float
    rhs: float
    gap: float
    tol: float
    verdict: str
    function: str
    mode: str
    dims: int
    atoms: int
    seed: int | None = None


def inequality_report(
    lhs: float,
    rhs: float,
    tol: float,
    function: str,
    mode: str,
    dims: int,
    atoms: int,
    seed: int | None = None,
) -> InequalityReport:
    lhs = float(lhs)
    rhs = float(rhs)
    if not (isfinite(lhs) and isfinite(rhs)):
        raise NumericError(f"non-finite inequality sides lhs={lhs!r} rhs={rhs!r}")
    gap = rhs - lhs
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        tol=float(tol),
        verdict=classify_gap(gap, float(tol)),
        function=function,
        mode=mode,
        dims=int(dims),
        atoms=int(atoms),
        seed=seed,
    )

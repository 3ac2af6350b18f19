"""Non-commutative perspectives and Kubo-Ando operator means.

The perspective of a function f at positive definite A, B is::

    P_f(A, B) = A^(1/2) f(A^(-1/2) B A^(-1/2)) A^(1/2)

and the operator mean generated by an operator monotone representing
function is exactly this perspective, so that the scalar reduction for
commuting arguments is a*f(b/a) per joint eigenvalue pair.  This module
also carries the transformer-inequality checks, the Jensen inequality for
sums of congruences, state expectations Tr(rho A), and a commuting-pair
oracle used to cross-check the perspective against scalar means.

All inequality checks here use the concave orientation: the catalog's
operator monotone functions are operator concave, so compressions land
below the mean of the compressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, NotPositiveDefiniteError, PreconditionError, UsageError
from .functions import RepresentingFunction, get_function, perspective_num
from .linalg import (
    CLAMP_TOL,
    COND_LIMIT,
    PD_FLOOR,
    congruence,
    frobenius,
    rebuild,
    sym_eigen,
    sym_matrix,
)
from .reports import InequalityReport, inequality_report

#: Default tolerance for matrix-path inequality verdicts.
MATRIX_TOL = 1e-8

#: Relative commutator norm accepted by commuting-pair preconditions.
COMMUTE_TOL = 1e-10

#: Partition-of-unity slack: sum of c_i^T c_i may not exceed I beyond this.
PARTITION_TOL = 1e-10

#: Relative smallest singular value below which a square factor is treated
#: as non-invertible for the equality case.
INVERTIBLE_RTOL = 1e-10

ScalarFn = Union[RepresentingFunction, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class OperatorMeanSpec:
    """A representing function admitted to the operator (Kubo-Ando) calculus.

    Only catalog entries flagged operator monotone are accepted; the
    non-concave counterexample entry is rejected at construction.
    """

    f: RepresentingFunction

    def __post_init__(self):
        if not self.f.claims_operator_monotone:
            raise UsageError(
                f"function {self.f.id!r} is not flagged operator monotone and "
                "cannot generate an operator mean"
            )

    @property
    def id(self) -> str:
        return self.f.id


def operator_mean_spec(fid: str) -> OperatorMeanSpec:
    """Resolve a function id to an operator-mean spec (rejects non-monotone ids)."""
    return OperatorMeanSpec(get_function(fid))


@dataclass(frozen=True)
class TransformerReport:
    """Outcome of a transformer-inequality check lhs <= rhs (Loewner order)."""

    lhs: np.ndarray
    rhs: np.ndarray
    min_eig_gap: float
    verdict: str
    equality_case: bool
    equality_defect: float
    tol: float

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def _eval_scalar_fn(fn: ScalarFn, lam: np.ndarray) -> np.ndarray:
    if isinstance(fn, RepresentingFunction):
        return fn.eval_array(lam)
    return np.asarray(fn(lam), dtype=float)


def _pd_spectrum(a: np.ndarray, label: str, pd_floor: float):
    lam, q = sym_eigen(a)
    low, high = float(lam[0]), float(lam[-1])
    if low <= pd_floor:
        raise NotPositiveDefiniteError(
            f"{label} is not positive definite at floor {pd_floor!r} "
            f"(min eigenvalue {low!r})",
            min_eigenvalue=low,
        )
    if high / low > COND_LIMIT:
        raise DomainError(
            f"{label} condition number {high / low:.3e} exceeds the guard {COND_LIMIT:.0e}"
        )
    return lam, q


def operator_perspective(
    fn: ScalarFn, a, b, pd_floor: float = PD_FLOOR
) -> np.ndarray:
    """Evaluate the non-commutative perspective P_f(A, B).

    Both arguments must be positive definite with condition number within
    the guard; the inner matrix A^(-1/2) B A^(-1/2) gets the usual roundoff
    clamp before the functional calculus.
    """
    sa, sb = sym_matrix(a), sym_matrix(b)
    if sa.shape != sb.shape:
        raise UsageError(f"dimension mismatch: {sa.shape} vs {sb.shape}")
    lam_a, q_a = _pd_spectrum(sa, "first argument", pd_floor)
    _pd_spectrum(sb, "second argument", pd_floor)
    sqrt_a = rebuild(np.sqrt(lam_a), q_a)
    inv_sqrt_a = rebuild(1.0 / np.sqrt(lam_a), q_a)
    inner = sym_matrix(inv_sqrt_a @ sb @ inv_sqrt_a)
    lam_m, q_m = sym_eigen(inner)
    low = float(lam_m[0])
    if low <= 0.0:
        if low <= -CLAMP_TOL:
            raise DomainError(
                f"inner perspective matrix has eigenvalue {low!r}; inputs are not "
                "numerically positive definite"
            )
        lam_m = np.maximum(lam_m, CLAMP_TOL)
    f_inner = rebuild(_eval_scalar_fn(fn, lam_m), q_m)
    return sym_matrix(sqrt_a @ f_inner @ sqrt_a)


def operator_mean(spec: OperatorMeanSpec, a, b) -> np.ndarray:
    """The Kubo-Ando mean of positive definite A and B generated by the spec."""
    if not isinstance(spec, OperatorMeanSpec):
        raise UsageError("operator_mean needs an OperatorMeanSpec")
    return operator_perspective(spec.f, a, b)


def _simultaneous_eigenbasis(sa: np.ndarray, sb: np.ndarray):
    """Shared eigenbasis of a commuting symmetric pair.

    Diagonalizes A + mu*B for a generic mu; for exactly commuting inputs any
    eigenbasis of that combination diagonalizes both.  A few mu values are
    tried and the one with the smallest off-diagonal residual wins, which
    protects against accidental eigenvalue collisions of the combination.
    """
    scale = frobenius(sb)
    ratio = frobenius(sa) / scale if scale > 0.0 else 1.0
    best = None
    for mult in (0.6180339887498949, 0.8739190558871641, 1.070466269319124):
        q = sym_eigen(sa + (mult * ratio) * sb).eigenvectors
        da = q.T @ sa @ q
        db = q.T @ sb @ q
        off = frobenius(da - np.diag(np.diag(da))) + frobenius(db - np.diag(np.diag(db)))
        if best is None or off < best[0]:
            best = (off, q, np.diag(da).copy(), np.diag(db).copy())
    off, q, da, db = best
    limit = 1e-7 * max(1.0, frobenius(sa) + frobenius(sb))
    if off > limit:
        raise PreconditionError(
            f"inputs are not simultaneously diagonalizable at tolerance "
            f"(off-diagonal residual {off:.3e})"
        )
    return q, da, db


def commuting_oracle(
    spec: OperatorMeanSpec, a, b, tol: float = COMMUTE_TOL
) -> np.ndarray:
    """Independent mean for commuting PD pairs via scalar means per eigenvalue.

    Requires ||AB - BA||_F <= tol * ||A||_F * ||B||_F; simultaneous
    diagonalization then reduces the mean to one scalar mean per joint
    eigenvalue pair, bypassing the perspective formula entirely.
    """
    if not isinstance(spec, OperatorMeanSpec):
        raise UsageError("commuting_oracle needs an OperatorMeanSpec")
    sa, sb = sym_matrix(a), sym_matrix(b)
    if sa.shape != sb.shape:
        raise UsageError(f"dimension mismatch: {sa.shape} vs {sb.shape}")
    comm = frobenius(sa @ sb - sb @ sa)
    limit = tol * max(frobenius(sa) * frobenius(sb), 1e-300)
    if comm > limit:
        raise PreconditionError(
            f"commutator norm {comm:.3e} exceeds {limit:.3e}; pair is not commuting"
        )
    q, da, db = _simultaneous_eigenbasis(sa, sb)
    if np.any(da <= 0.0) or np.any(db <= 0.0):
        raise DomainError("commuting oracle needs positive definite inputs")
    # Scalar reduction of the perspective: a * f(b / a) per joint eigenvalue.
    vals = perspective_num(spec.f, db, da)
    return rebuild(np.asarray(vals, dtype=float), q)


def expectation_state(rho, a) -> float:
    """Expectation of an observable in a state: Tr(rho A)."""
    r = np.asarray(rho, dtype=float)
    m = np.asarray(a, dtype=float)
    if r.shape != m.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise UsageError(f"dimension mismatch: state {r.shape}, observable {m.shape}")
    return float(np.einsum("ij,ji->", r, m))


def _transformer_report(
    lhs: np.ndarray,
    rhs: np.ndarray,
    tol: float,
    equality_possible: bool,
) -> TransformerReport:
    gap_min = float(np.linalg.eigvalsh(rhs - lhs)[0])
    scale = max(frobenius(rhs), 1e-300)
    defect = frobenius(lhs - rhs) / scale
    return TransformerReport(
        lhs=lhs,
        rhs=rhs,
        min_eig_gap=gap_min,
        verdict="holds" if gap_min >= -tol else "violated",
        equality_case=bool(equality_possible and defect <= tol),
        equality_defect=defect,
        tol=float(tol),
    )


def check_transformer(
    spec: OperatorMeanSpec, a, b, c, tol: float = MATRIX_TOL
) -> TransformerReport:
    """Verify the transformer inequality C^T m(A,B) C <= m(C^T A C, C^T B C).

    ``c`` may be any real matrix with matching row count, including a
    rectangular compression; both compressed arguments must stay positive
    definite.  The equality case is asserted only for invertible square C
    with relative Frobenius defect within tol.
    """
    sa, sb = sym_matrix(a), sym_matrix(b)
    cm = np.asarray(c, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != sa.shape[0]:
        raise UsageError(f"transformer factor shape {cm.shape} does not match {sa.shape}")
    mean_ab = operator_mean(spec, sa, sb)
    lhs = congruence(cm, mean_ab)
    try:
        rhs = operator_mean(spec, congruence(cm, sa), congruence(cm, sb))
    except NotPositiveDefiniteError as exc:
        raise DomainError(
            f"congruence destroys positive definiteness: {exc}"
        ) from None
    invertible = False
    if cm.shape[0] == cm.shape[1]:
        svals = np.linalg.svd(cm, compute_uv=False)
        invertible = float(svals[-1]) > INVERTIBLE_RTOL * max(float(svals[0]), 1e-300)
    return _transformer_report(lhs, rhs, tol, invertible)


def check_jensen_sum(
    spec: OperatorMeanSpec,
    triples: Sequence[tuple],
    tol: float = MATRIX_TOL,
) -> TransformerReport:
    """Jensen inequality for sums of congruences (concave orientation).

    For factors with sum of c_i^T c_i below the identity (partition of unity
    or any sub-unital family, e.g. c_i = sqrt(lam_i) e_i from a spectral
    resolution of a density matrix), verifies::

        sum_i c_i^T m(A_i, B_i) c_i  <=  m(sum_i c_i^T A_i c_i, sum_i c_i^T B_i c_i)

    Raises a precondition error when the family exceeds the identity.
    """
    if not isinstance(spec, OperatorMeanSpec):
        raise UsageError("check_jensen_sum needs an OperatorMeanSpec")
    if len(triples) == 0:
        raise UsageError("check_jensen_sum needs at least one (c, A, B) triple")
    cs = [np.asarray(c, dtype=float) for c, _, _ in triples]
    n = cs[0].shape[0]
    if any(c.ndim != 2 or c.shape[0] != n for c in cs):
        raise UsageError("all congruence factors must share the same row dimension")
    k = cs[0].shape[1]
    if any(c.shape[1] != k for c in cs):
        raise UsageError("all congruence factors must share the same column dimension")
    total = sum(c.T @ c for c in cs)
    excess = float(np.linalg.eigvalsh(sym_matrix(total) - np.eye(k))[-1])
    if excess > PARTITION_TOL:
        raise PreconditionError(
            f"partition-of-unity violation: sum of c_i^T c_i exceeds the identity "
            f"by {excess:.3e}"
        )
    lhs = np.zeros((k, k))
    sum_a = np.zeros((k, k))
    sum_b = np.zeros((k, k))
    for c, a, b in triples:
        cm = np.asarray(c, dtype=float)
        sa, sb = sym_matrix(a), sym_matrix(b)
        lhs = lhs + congruence(cm, operator_mean(spec, sa, sb))
        sum_a = sum_a + congruence(cm, sa)
        sum_b = sum_b + congruence(cm, sb)
    lhs = sym_matrix(lhs)
    rhs = operator_mean(spec, sym_matrix(sum_a), sym_matrix(sum_b))
    return _transformer_report(lhs, rhs, tol, equality_possible=True)


def trace_perspective_check(
    f: RepresentingFunction, a, b, tol: float = MATRIX_TOL
) -> InequalityReport:
    """Compare Tr P_f(A, B) with P_f(Tr A, Tr B) for commuting PD pairs.

    For concave f the trace side lies below the scalar side; for a convex
    (non-concave-flagged) f the orientation reverses.  The trace side is
    computed via the commuting scalar reduction, not the matrix perspective.
    """
    sa, sb = sym_matrix(a), sym_matrix(b)
    if sa.shape != sb.shape:
        raise UsageError(f"dimension mismatch: {sa.shape} vs {sb.shape}")
    comm = frobenius(sa @ sb - sb @ sa)
    limit = COMMUTE_TOL * max(frobenius(sa) * frobenius(sb), 1e-300)
    if comm > limit:
        raise PreconditionError(
            f"commutator norm {comm:.3e} exceeds {limit:.3e}; pair is not commuting"
        )
    _, da, db = _simultaneous_eigenbasis(sa, sb)
    if np.any(da <= 0.0) or np.any(db <= 0.0):
        raise DomainError("trace perspective check needs positive definite inputs")
    trace_side = float(np.sum(perspective_num(f, db, da)))
    scalar_side = float(perspective_num(f, float(np.sum(db)), float(np.sum(da))))
    if f.claims_concave:
        lhs, rhs = trace_side, scalar_side
    else:
        lhs, rhs = scalar_side, trace_side
    return inequality_report(
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        function=f.id,
        mode="trace",
        dims=sa.shape[0],
        atoms=1,
    )

"""Dense real symmetric linear algebra: eigen-calculus and order tests.

Matrices are plain float64 ``numpy`` arrays; :func:`sym_matrix` is the
validating constructor used at every public boundary (it enforces squareness,
finiteness, the supported dimension range and exact symmetry by averaging).
The eigensolver is LAPACK's symmetric driver via ``numpy.linalg.eigh``,
wrapped so that eigenvalues are ascending and failures surface as package
errors; everything downstream (functional calculus, square roots, Loewner
comparisons) goes through it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NotPositiveDefiniteError, NumericError, UsageError

#: Positive-definiteness floor: matrices whose smallest eigenvalue is at or
#: below this are rejected from inverse-square-root paths, never regularized.
PD_FLOOR = 1e-10

#: Largest supported matrix dimension.
MAX_DIM = 64

#: Condition-number guard for perspective computations.
COND_LIMIT = 1e8

#: Roundoff protection: eigenvalues this far below a positive domain floor
#: are clamped up instead of rejected (see apply_function).
CLAMP_TOL = 1e-12

#: Largest symmetry violation accepted by the text-format loader.
LOAD_SYMMETRY_TOL = 1e-9


class SpectralDecomposition(NamedTuple):
    """Eigenpairs of a symmetric matrix: ascending values, orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_matrix(values) -> np.ndarray:
    """Build a validated symmetric matrix (symmetry enforced by averaging)."""
    a = np.asarray(values, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 1 or n > MAX_DIM:
        raise UsageError(f"matrix dimension must be in [1, {MAX_DIM}], got {n}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must all be finite")
    return (a + a.T) / 2.0


def sym_eigen(a) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix.

    Returns ascending eigenvalues and an orthogonal eigenvector matrix with
    columns paired to them; deterministic for a fixed input.
    """
    s = sym_matrix(a)
    try:
        lam, q = np.linalg.eigh(s)
    except np.linalg.LinAlgError as exc:
        off = float(np.linalg.norm(s - np.diag(np.diag(s))))
        raise NumericError(
            f"symmetric eigensolver failed to converge (off-diagonal norm {off:.3e})"
        ) from exc
    return SpectralDecomposition(lam, q)


def rebuild(lam: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Assemble Q diag(lam) Q^T, re-symmetrized to absorb roundoff."""
    return sym_matrix((q * lam) @ q.T)


def apply_function(
    a,
    fn: Callable[[np.ndarray], np.ndarray],
    domain_floor: float | None = None,
    clamp_tol: float = 0.0,
) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix via its eigenvalues.

    Parameters
    ----------
    a : array_like
        Symmetric input matrix.
    fn : callable
        Vectorized scalar function applied to the eigenvalue array.
    domain_floor : float, optional
        Every eigenvalue must exceed this (0 for functions on the open
        positive half-line).  Violations raise a domain error carrying the
        offending eigenvalue.
    clamp_tol : float
        Roundoff protection for matrices that are positive (semi)definite by
        construction: eigenvalues within ``clamp_tol`` below ``domain_floor``
        are clamped up to ``domain_floor + clamp_tol`` instead of rejected.

    Returns
    -------
    numpy.ndarray
        Q diag(fn(lam)) Q^T, re-symmetrized.
    """
    lam, q = sym_eigen(a)
    if domain_floor is not None:
        low = float(lam[0])
        if low <= domain_floor:
            if clamp_tol > 0.0 and low > domain_floor - clamp_tol:
                lam = np.maximum(lam, domain_floor + clamp_tol)
            else:
                raise DomainError(
                    f"eigenvalue {low!r} at or below domain floor {domain_floor!r}"
                )
    out = np.asarray(fn(lam), dtype=float)
    if not np.all(np.isfinite(out)):
        raise NumericError("scalar function produced non-finite eigenvalue images")
    return rebuild(out, q)


def _require_pd(lam: np.ndarray, label: str, pd_floor: float) -> None:
    low = float(lam[0])
    if low <= pd_floor:
        raise NotPositiveDefiniteError(
            f"{label} is not positive definite at floor {pd_floor!r} "
            f"(min eigenvalue {low!r})",
            min_eigenvalue=low,
        )


def sqrt_pd(a, pd_floor: float = PD_FLOOR) -> np.ndarray:
    """Positive-definite square root; rejects matrices with min eigenvalue <= floor."""
    lam, q = sym_eigen(a)
    _require_pd(lam, "matrix", pd_floor)
    return rebuild(np.sqrt(lam), q)


def inv_sqrt_pd(a, pd_floor: float = PD_FLOOR) -> np.ndarray:
    """Inverse positive-definite square root; same domain policy as sqrt_pd."""
    lam, q = sym_eigen(a)
    _require_pd(lam, "matrix", pd_floor)
    return rebuild(1.0 / np.sqrt(lam), q)


def min_eigenvalue(a) -> float:
    return float(np.linalg.eigvalsh(sym_matrix(a))[0])


def loewner_leq(a, b, tol: float = 1e-12) -> bool:
    """Loewner order test: A <= B iff min eigenvalue of B - A is >= -tol."""
    sa, sb = sym_matrix(a), sym_matrix(b)
    if sa.shape != sb.shape:
        raise UsageError(f"dimension mismatch: {sa.shape} vs {sb.shape}")
    return min_eigenvalue(sb - sa) >= -tol


def trace(a) -> float:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"trace needs a square matrix, got shape {m.shape}")
    return float(np.trace(m))


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float)))


def matmul(a, b) -> np.ndarray:
    ma = np.asarray(a, dtype=float)
    mb = np.asarray(b, dtype=float)
    if ma.ndim != 2 or mb.ndim != 2 or ma.shape[1] != mb.shape[0]:
        raise UsageError(f"incompatible shapes for matmul: {ma.shape} and {mb.shape}")
    return ma @ mb


def congruence(c, a) -> np.ndarray:
    """Congruence C^T A C, re-symmetrized to absorb roundoff.

    ``c`` may be rectangular (n rows, k columns), compressing an n-dim
    symmetric matrix to a k-dim one.
    """
    cm = np.asarray(c, dtype=float)
    sa = sym_matrix(a)
    if cm.ndim != 2 or cm.shape[0] != sa.shape[0]:
        raise UsageError(
            f"congruence shape mismatch: C is {cm.shape}, A is {sa.shape}"
        )
    if not np.all(np.isfinite(cm)):
        raise DomainError("congruence factor entries must be finite")
    return sym_matrix(cm.T @ sa @ cm)


def load_matrix(path) -> np.ndarray:
    """Read the matrix text format: a line with n, then n rows of n values.

    Blank lines and lines starting with ``#`` are skipped.  A symmetry
    violation larger than 1e-9 (max-abs entry) is an error; smaller ones are
    absorbed by the symmetrizing constructor.
    """
    p = Path(path)
    try:
        raw = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read matrix file {p}: {exc}") from None
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError(f"matrix file {p} is empty")
    try:
        n = int(lines[0])
    except ValueError:
        raise UsageError(f"matrix file {p}: first line must be the dimension") from None
    if n < 1 or n > MAX_DIM:
        raise UsageError(f"matrix file {p}: dimension {n} outside [1, {MAX_DIM}]")
    if len(lines) != n + 1:
        raise UsageError(f"matrix file {p}: expected {n} rows, found {len(lines) - 1}")
    rows = []
    for k, ln in enumerate(lines[1:]):
        parts = ln.split()
        if len(parts) != n:
            raise UsageError(f"matrix file {p}: row {k + 1} has {len(parts)} values, expected {n}")
        try:
            rows.append([float(tok) for tok in parts])
        except ValueError:
            raise UsageError(f"matrix file {p}: row {k + 1} has a non-numeric value") from None
    a = np.array(rows, dtype=float)
    if not np.all(np.isfinite(a)):
        raise UsageError(f"matrix file {p}: entries must be finite")
    skew = float(np.max(np.abs(a - a.T)))
    if skew > LOAD_SYMMETRY_TOL:
        raise UsageError(
            f"matrix file {p}: symmetry violation {skew:.3e} exceeds {LOAD_SYMMETRY_TOL}"
        )
    return sym_matrix(a)


def save_matrix(path, a) -> None:
    """Write a matrix in the text format with 17-significant-digit values."""
    s = sym_matrix(a)
    lines = [str(s.shape[0])]
    for row in s:
        lines.append(" ".join(format(v, ".17g") for v in row))
    Path(path).write_text("\n".join(lines) + "\n")

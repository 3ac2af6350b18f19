"""Exact verification of the expectation inequality on finite spaces.

The object under test is always the same: with lhs the expectation of the
mean and rhs the mean of the expectations, the signed gap rhs - lhs must be
non-negative (up to tolerance) when the generating function is concave.
Three settings share that shape:

* scalar: E(m(X, Y)) vs m(E X, E Y) over a finite joint space,
* operator: Tr(rho m(A, B)) vs m(Tr(rho A), Tr(rho B)) in a fixed state,
* random matrix: atom-wise state expectations averaged over a finite space.

All sums are exact weighted sums over atoms; no Monte Carlo error enters the
verdicts (campaigns sample the *instances*, not the integrals).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DomainError, UsageError
from .functions import RepresentingFunction, mean_num
from .linalg import PD_FLOOR, load_matrix, min_eigenvalue, sym_matrix
from .operator_means import MATRIX_TOL, OperatorMeanSpec, expectation_state, operator_mean
from .reports import InequalityReport, inequality_report
from .sampling import check_density

SCALAR_TOL = 1e-10

PROB_SUM_TOL = 1e-12

MODE_SCALAR = "scalar"
MODE_MATRIX = "matrix"


@dataclass(frozen=True)
class Atom:
    probability: float
    x: Union[float, np.ndarray]
    y: Union[float, np.ndarray]
    rho: np.ndarray | None = None


@dataclass(frozen=True)
class FiniteJointSpace:
    mode: str
    atoms: tuple[Atom, ...]

    @property
    def dims(self) -> int:
        if self.mode == MODE_SCALAR:
            return 1
        return int(self.atoms[0].x.shape[0])

    @property
    def has_densities(self) -> bool:
        return self.mode == MODE_MATRIX and all(a.rho is not None for a in self.atoms)


def _check_probabilities(probs: list[float]) -> None:
    if not probs:
        raise UsageError("a finite joint space needs at least one atom")
    for p in probs:
        if not (math.isfinite(p) and p >= 0.0):
            raise DomainError(f"atom probability must be finite and >= 0, got {p!r}")
    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise DomainError(f"atom probabilities sum to {total!r}, not 1")


def scalar_space(entries) -> FiniteJointSpace:
    """Build a scalar-mode space from (probability, x, y) triples."""
    atoms = []
    probs = []
    for entry in entries:
        p, x, y = entry
        p, x, y = float(p), float(x), float(y)
        if not (math.isfinite(x) and x > 0.0 and math.isfinite(y) and y > 0.0):
            raise DomainError(f"scalar atom values must be positive, got ({x!r}, {y!r})")
        probs.append(p)
        atoms.append(Atom(p, x, y))
    _check_probabilities(probs)
    return FiniteJointSpace(MODE_SCALAR, tuple(atoms))


def matrix_space(entries) -> FiniteJointSpace:
    """Build a matrix-mode space from (p, X, Y) or (p, X, Y, rho) tuples.

    X and Y must be positive definite; densities, when present, must pass
    the density-matrix checks.  All atoms share one dimension.
    """
    atoms = []
    probs = []
    dim = None
    for entry in entries:
        if len(entry) == 3:
            p, x, y = entry
            rho = None
        elif len(entry) == 4:
            p, x, y, rho = entry
        else:
            raise UsageError("matrix atoms are (p, X, Y) or (p, X, Y, rho) tuples")
        p = float(p)
        x, y = sym_matrix(x), sym_matrix(y)
        if dim is None:
            dim = x.shape[0]
        if x.shape[0] != dim or y.shape[0] != dim:
            raise UsageError("all atoms of a matrix space must share one dimension")
        for label, m in (("X", x), ("Y", y)):
            low = min_eigenvalue(m)
            if low <= PD_FLOOR:
                raise DomainError(
                    f"matrix atom {label} is not positive definite (min eigenvalue {low!r})"
                )
        if rho is not None:
            rho = check_density(rho)
            if rho.shape[0] != dim:
                raise UsageError("atom density dimension differs from the observables")
        probs.append(p)
        atoms.append(Atom(p, x, y, rho))
    _check_probabilities(probs)
    return FiniteJointSpace(MODE_MATRIX, tuple(atoms))


def expectation_scalar(space: FiniteJointSpace, which) -> float:
    """Exact expectation over a scalar space.

    ``which`` selects the integrand: "x", "y", or a representing function f
    for the atom-wise mean m_f(x, y).
    """
    if space.mode != MODE_SCALAR:
        raise UsageError(f"expectation_scalar needs a scalar-mode space, got {space.mode!r}")
    total = 0.0
    if isinstance(which, RepresentingFunction):
        for a in space.atoms:
            total += a.probability * float(mean_num(which, a.x, a.y))
        return total
    if which == "x":
        for a in space.atoms:
            total += a.probability * a.x
        return total
    if which == "y":
        for a in space.atoms:
            total += a.probability * a.y
        return total
    raise UsageError(f"which must be 'x', 'y' or a representing function, got {which!r}")


def verify_numeric(
    space: FiniteJointSpace,
    f: RepresentingFunction,
    tol: float = SCALAR_TOL,
    seed: int | None = None,
) -> InequalityReport:
    """Scalar expectation inequality: E(m_f(X,Y)) vs m_f(E X, E Y), exact sums."""
    lhs = expectation_scalar(space, f)
    ex = expectation_scalar(space, "x")
    ey = expectation_scalar(space, "y")
    rhs = float(mean_num(f, ex, ey))
    return inequality_report(
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        function=f.id,
        mode="num",
        dims=1,
        atoms=len(space.atoms),
        seed=seed,
    )


def construct_counterexample(
    f: RepresentingFunction, x1: float, x2: float, p: float
) -> FiniteJointSpace:
    """Two-point space with Y constant 1: X takes x1, x2 with weights p, 1-p.

    Verifying it computes the gap f(p*x1 + (1-p)*x2) - (p*f(x1) + (1-p)*f(x2)),
    the midpoint-concavity defect of f at that weighting: any non-concave f
    yields a violation for some choice of (x1, x2, p).
    """
    p = float(p)
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise UsageError(f"p must lie strictly inside (0, 1), got {p!r}")
    x1, x2 = float(x1), float(x2)
    if x1 == x2:
        raise UsageError("x1 and x2 must differ")
    return scalar_space([(p, x1, 1.0), (1.0 - p, x2, 1.0)])


def verify_operator(
    rho,
    a,
    b,
    spec: OperatorMeanSpec,
    tol: float = MATRIX_TOL,
    seed: int | None = None,
) -> InequalityReport:
    """Operator expectation inequality in a state: Tr(rho m(A,B)) vs m(E A, E B)."""
    rho = check_density(rho)
    sa, sb = sym_matrix(a), sym_matrix(b)
    if rho.shape != sa.shape or rho.shape != sb.shape:
        raise UsageError(
            f"dimension mismatch: rho {rho.shape}, A {sa.shape}, B {sb.shape}"
        )
    mean_ab = operator_mean(spec, sa, sb)
    lhs = expectation_state(rho, mean_ab)
    ea = expectation_state(rho, sa)
    eb = expectation_state(rho, sb)
    if ea <= PD_FLOOR or eb <= PD_FLOOR:
        raise DomainError(
            f"state expectations must be positive, got E(A)={ea!r}, E(B)={eb!r}"
        )
    rhs = float(mean_num(spec.f, ea, eb))
    return inequality_report(
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        function=spec.id,
        mode="op",
        dims=sa.shape[0],
        atoms=1,
        seed=seed,
    )


def verify_random_matrix(
    space: FiniteJointSpace,
    spec: OperatorMeanSpec,
    tol: float = MATRIX_TOL,
    seed: int | None = None,
) -> InequalityReport:
    """Random-matrix inequality: atom-averaged state expectations of the mean
    against the scalar mean of the atom-averaged state expectations."""
    if space.mode != MODE_MATRIX:
        raise UsageError(f"verify_random_matrix needs a matrix-mode space, got {space.mode!r}")
    if not space.has_densities:
        raise UsageError("verify_random_matrix needs a density matrix on every atom")
    lhs = 0.0
    ex = 0.0
    ey = 0.0
    for atom in space.atoms:
        mean_xy = operator_mean(spec, atom.x, atom.y)
        lhs += atom.probability * expectation_state(atom.rho, mean_xy)
        ex += atom.probability * expectation_state(atom.rho, atom.x)
        ey += atom.probability * expectation_state(atom.rho, atom.y)
    if ex <= PD_FLOOR or ey <= PD_FLOOR:
        raise DomainError(
            f"averaged state expectations must be positive, got {ex!r}, {ey!r}"
        )
    rhs = float(mean_num(spec.f, ex, ey))
    return inequality_report(
        lhs=lhs,
        rhs=rhs,
        tol=tol,
        function=spec.id,
        mode="rm",
        dims=space.dims,
        atoms=len(space.atoms),
        seed=seed,
    )


def _try_float(token: str) -> float | None:
    try:
        return float(token)
    except ValueError:
        return None


def load_space(path) -> FiniteJointSpace:
    """Read a space file: one atom per line.

    Scalar mode lines are ``p x y``; matrix mode lines are ``p x_path y_path``
    or ``p x_path y_path rho_path`` with paths resolved relative to the space
    file.  Blank lines and ``#`` comments are skipped.
    """
    p = Path(path)
    try:
        raw = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read space file {p}: {exc}") from None
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError(f"space file {p} has no atoms")
    rows = [ln.split() for ln in lines]
    scalar = all(
        len(r) == 3 and _try_float(r[1]) is not None and _try_float(r[2]) is not None
        for r in rows
    )
    if scalar:
        entries = []
        for r in rows:
            prob = _try_float(r[0])
            if prob is None:
                raise UsageError(f"space file {p}: bad probability {r[0]!r}")
            entries.append((prob, float(r[1]), float(r[2])))
        return scalar_space(entries)
    base = p.parent
    entries = []
    for r in rows:
        if len(r) not in (3, 4):
            raise UsageError(
                f"space file {p}: matrix atoms need 'p x_path y_path [rho_path]'"
            )
        prob = _try_float(r[0])
        if prob is None:
            raise UsageError(f"space file {p}: bad probability {r[0]!r}")
        x = load_matrix(base / r[1])
        y = load_matrix(base / r[2])
        if len(r) == 4:
            entries.append((prob, x, y, load_matrix(base / r[3])))
        else:
            entries.append((prob, x, y))
    return matrix_space(entries)


def save_space(path, space: FiniteJointSpace) -> None:
    """Write a scalar-mode space in the line format with 17-digit values."""
    if space.mode != MODE_SCALAR:
        raise UsageError("only scalar-mode spaces can be saved to the line format")
    lines = [
        f"{a.probability:.17g} {a.x:.17g} {a.y:.17g}" for a in space.atoms
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def space_to_jsonable(space: FiniteJointSpace) -> dict:
    """Self-contained JSON structure for a space (campaign worst-case records)."""
    if space.mode == MODE_SCALAR:
        return {
            "mode": MODE_SCALAR,
            "atoms": [[a.probability, a.x, a.y] for a in space.atoms],
        }
    out = []
    for a in space.atoms:
        entry = {"p": a.probability, "x": a.x.tolist(), "y": a.y.tolist()}
        if a.rho is not None:
            entry["rho"] = a.rho.tolist()
        out.append(entry)
    return {"mode": MODE_MATRIX, "atoms": out}

"""Dense real symmetric matrices with a deterministic spectral calculus.

Every bound in this package reduces to eigendecompositions of small real
symmetric matrices.  The eigensolver is a cyclic Jacobi iteration with a
fixed row-major sweep order, so its output is a pure function of the input
across runs and platforms; the seeded fuzz harness relies on that.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    ConvergenceError,
    DomainViolation,
    InvalidMatrix,
    NotPositiveDefinite,
    ShapeError,
)

__all__ = [
    "SymmetricMatrix",
    "SpectralDecomposition",
    "LoewnerRelation",
    "LoewnerVerdict",
    "eigendecompose",
    "apply_scalar_function",
    "loewner_compare",
    "natural_power",
    "matrix_sqrt_inv_sqrt",
    "strict_positivity_tolerance",
]

_ASYMMETRY_REL = 1e-8
_SWEEP_CAP = 100
_OFFDIAG_REL = 1e-14
_INTEGER_TOL = 1e-12
_CLAMP_REL = 1e-10


class SymmetricMatrix:
    """Immutable dense real symmetric matrix.

    Entries are symmetrized on construction; inputs whose asymmetry exceeds
    ``1e-8 * max|entry|`` are rejected instead of silently averaged.  The
    eigendecomposition and the (A^{1/2}, A^{-1/2}) pair are cached lazily,
    which is what makes repeated bound evaluations on the same operator cheap.
    """

    def __init__(self, entries, *, clamp_warning: bool = False):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidMatrix(f"expected a square matrix, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise InvalidMatrix("matrix entries must be finite")
        scale = float(np.abs(arr).max())
        asymmetry = float(np.abs(arr - arr.T).max())
        if asymmetry > _ASYMMETRY_REL * scale:
            raise InvalidMatrix(
                f"asymmetry {asymmetry:.3e} exceeds {_ASYMMETRY_REL:.0e} * scale {scale:.3e}"
            )
        arr = (arr + arr.T) / 2.0
        arr.setflags(write=False)
        self._entries = arr
        self._decomposition = None
        self._roots = None
        self.clamp_warning = clamp_warning

    @classmethod
    def identity(cls, dim: int) -> "SymmetricMatrix":
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, values) -> "SymmetricMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def norm_max(self) -> float:
        return float(np.abs(self._entries).max())

    @property
    def trace(self) -> float:
        return float(np.trace(self._entries))

    def squared(self) -> "SymmetricMatrix":
        return SymmetricMatrix(self._entries @ self._entries)

    def as_scalar(self) -> float:
        if self.dim != 1:
            raise ShapeError(f"matrix of dimension {self.dim} is not a scalar")
        return float(self._entries[0, 0])

    def min_eigenvalue(self) -> float:
        return float(eigendecompose(self).eigenvalues[0])

    def max_eigenvalue(self) -> float:
        return float(eigendecompose(self).eigenvalues[-1])

    def __add__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        self._check_dim(other)
        return SymmetricMatrix(self._entries + other._entries)

    def __sub__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        self._check_dim(other)
        return SymmetricMatrix(self._entries - other._entries)

    def __neg__(self):
        return SymmetricMatrix(-self._entries)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return SymmetricMatrix(self._entries * float(scalar))

    __rmul__ = __mul__

    def _check_dim(self, other: "SymmetricMatrix") -> None:
        if self.dim != other.dim:
            raise ShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __repr__(self):
        return f"SymmetricMatrix(dim={self.dim})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def recombine(self, values) -> np.ndarray:
        """Q diag(values) Q^T as a plain array."""
        vals = np.asarray(values, dtype=float)
        q = self.eigenvectors
        return (q * vals) @ q.T

    def reconstruct(self) -> np.ndarray:
        return self.recombine(self.eigenvalues)


def strict_positivity_tolerance(matrix: SymmetricMatrix) -> float:
    """Eigenvalue floor below which a matrix does not count as strictly positive."""
    return 1e-12 * (1.0 + matrix.norm_max)


def _cyclic_jacobi(a: np.ndarray):
    n = a.shape[0]
    q = np.eye(n)
    if n == 1:
        return np.diag(a).copy(), q
    threshold = _OFFDIAG_REL * float(np.linalg.norm(a))
    for _ in range(_SWEEP_CAP):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                diff = a[r, r] - a[p, p]
                if abs(apr) < 1e-36 * abs(diff):
                    t = apr / diff  # angle underflows; first-order tangent
                else:
                    tau = diff / (2.0 * apr)
                    t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                a[p, r] = 0.0
                a[r, p] = 0.0
                q_p = q[:, p].copy()
                q_r = q[:, r].copy()
                q[:, p] = c * q_p - s * q_r
                q[:, r] = s * q_p + c * q_r
    else:
        raise ConvergenceError("Jacobi sweep cap reached without convergence")
    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], q[:, order]


def eigendecompose(matrix: SymmetricMatrix) -> SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors by cyclic Jacobi.

    Sweeps run in row-major pair order until the off-diagonal Frobenius mass
    drops below 1e-14 times the Frobenius norm of the input, capped at 100
    sweeps.  Deterministic for a fixed input.
    """
    if matrix._decomposition is None:
        lam, q = _cyclic_jacobi(matrix.entries.copy())
        lam.setflags(write=False)
        q.setflags(write=False)
        matrix._decomposition = SpectralDecomposition(lam, q)
    return matrix._decomposition


def apply_scalar_function(matrix: SymmetricMatrix, fn) -> SymmetricMatrix:
    """Evaluate a scalar function on the spectrum: Q diag(fn(lambda)) Q^T."""
    dec = eigendecompose(matrix)
    lam = dec.eigenvalues
    lo, hi = fn.domain
    inside = (lam > lo) & (lam < hi)
    if not bool(inside.all()):
        offending = float(lam[~inside][0])
        raise DomainViolation(
            f"eigenvalue {offending!r} outside the domain {fn.domain} of {fn.name}"
        )
    values = np.asarray(fn.eval(lam), dtype=float)
    if not np.isfinite(values).all():
        raise DomainViolation(f"{fn.name} is not finite on the spectrum")
    return SymmetricMatrix(dec.recombine(values))


class LoewnerRelation(str, enum.Enum):
    LESS_OR_EQUAL = "<="
    GREATER_OR_EQUAL = ">="
    EQUAL = "=="
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class LoewnerVerdict:
    """Outcome of one positive-semidefinite order comparison.

    ``gap_min_eig``/``gap_max_eig`` are the extreme eigenvalues of rhs - lhs.
    """

    relation: LoewnerRelation
    gap_min_eig: float
    gap_max_eig: float
    tolerance_used: float

    @property
    def holds_le(self) -> bool:
        return self.relation in (LoewnerRelation.LESS_OR_EQUAL, LoewnerRelation.EQUAL)

    @property
    def holds_ge(self) -> bool:
        return self.relation in (LoewnerRelation.GREATER_OR_EQUAL, LoewnerRelation.EQUAL)


def loewner_compare(lhs: SymmetricMatrix, rhs: SymmetricMatrix, tol: float | None = None) -> LoewnerVerdict:
    """Compare lhs and rhs in the positive-semidefinite order.

    lhs <= rhs holds when the minimum eigenvalue of rhs - lhs is >= -tol; the
    default tolerance scales with the operands, 1e-8 * (1 + max norm).
    """
    if lhs.dim != rhs.dim:
        raise ShapeError(f"dimension mismatch: {lhs.dim} vs {rhs.dim}")
    if tol is None:
        tol = 1e-8 * (1.0 + max(lhs.norm_max, rhs.norm_max))
    if tol < 0.0:
        raise BadParameter("tolerance must be nonnegative")
    dec = eigendecompose(rhs - lhs)
    gap_min = float(dec.eigenvalues[0])
    gap_max = float(dec.eigenvalues[-1])
    le = gap_min >= -tol
    ge = gap_max <= tol
    if le and ge:
        relation = LoewnerRelation.EQUAL
    elif le:
        relation = LoewnerRelation.LESS_OR_EQUAL
    elif ge:
        relation = LoewnerRelation.GREATER_OR_EQUAL
    else:
        relation = LoewnerRelation.INCOMPARABLE
    return LoewnerVerdict(relation, gap_min, gap_max, float(tol))


def matrix_sqrt_inv_sqrt(matrix: SymmetricMatrix):
    """(A^{1/2}, A^{-1/2}) for strictly positive A."""
    if matrix._roots is None:
        dec = eigendecompose(matrix)
        floor = strict_positivity_tolerance(matrix)
        smallest = float(dec.eigenvalues[0])
        if smallest <= floor:
            raise NotPositiveDefinite(
                f"minimum eigenvalue {smallest:.6e} is not above {floor:.3e}"
            )
        roots = np.sqrt(dec.eigenvalues)
        matrix._roots = (
            SymmetricMatrix(dec.recombine(roots)),
            SymmetricMatrix(dec.recombine(1.0 / roots)),
        )
    return matrix._roots


def _power_values(eigenvalues: np.ndarray, exponent: float):
    """Eigenvalues raised to ``exponent`` with PSD clamping for fractional powers.

    Returns (values, clamped).  Integer exponents go through signed powers;
    fractional exponents require the spectrum to be >= -clamp where clamp is
    1e-10 relative, and anything in [-clamp, 0) is clamped to zero.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    nearest = round(exponent)
    if abs(exponent - nearest) < _INTEGER_TOL:
        k = int(nearest)
        if k < 0:
            floor = 1e-12 * (1.0 + float(np.abs(lam).max()))
            if bool(np.any(np.abs(lam) <= floor)):
                raise DomainViolation("negative power of a singular matrix")
        return lam ** float(k), False
    clamp = _CLAMP_REL * (1.0 + float(np.abs(lam).max()))
    if float(lam[0]) < -clamp:
        raise DomainViolation(
            f"eigenvalue {float(lam[0]):.6e} is negative; fractional power undefined"
        )
    clamped = bool(float(lam.min()) < 0.0)
    values = np.clip(lam, 0.0, None)
    if exponent < 0.0 and bool(np.any(values == 0.0)):
        raise DomainViolation("negative fractional power of a singular matrix")
    return values**exponent, clamped


def natural_power(base: SymmetricMatrix, other: SymmetricMatrix, exponent: float) -> SymmetricMatrix:
    """A^{1/2} (A^{-1/2} B A^{-1/2})^p A^{1/2} for strictly positive A.

    Interpolates from A at p=0 to B at p=1; the weighted geometric mean for
    p in [0, 1].  Fractional p needs the sandwiched middle factor to be
    positive semidefinite; eigenvalues within -1e-10 relative of zero are
    clamped to zero and flagged through ``clamp_warning`` on the result.
    """
    if base.dim != other.dim:
        raise ShapeError(f"dimension mismatch: {base.dim} vs {other.dim}")
    root, inv_root = matrix_sqrt_inv_sqrt(base)
    inner = SymmetricMatrix(inv_root.entries @ other.entries @ inv_root.entries)
    dec = eigendecompose(inner)
    values, clamped = _power_values(dec.eigenvalues, exponent)
    mid = dec.recombine(values)
    return SymmetricMatrix(root.entries @ mid @ root.entries, clamp_warning=clamped)

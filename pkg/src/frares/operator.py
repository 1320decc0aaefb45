"""Finite-dimensional linear operators with cached resolvent solves.

An operator is stored in one of three variants: a scalar multiple of the
identity, a diagonal, or a dense square matrix.  The resolvent solve

    R x = tau**(-alpha) * (tau**(-alpha) I - A)^{-1} x

is the single linear-algebra primitive everything else builds on; the shifted
matrix is factored once per (A, alpha, tau) and the factors are reused across
all later solves.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import linalg

SCALAR = "scalar"
DIAGONAL = "diagonal"
DENSE = "dense"


class ResolventSetError(ValueError):
    """tau**(-alpha) is not in the resolvent set of the operator."""


@dataclass(frozen=True)
class LinOp:
    """A linear operator A on R^d in scalar, diagonal, or dense form."""

    kind: str
    value: np.ndarray
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in (SCALAR, DIAGONAL, DENSE):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        self.value.setflags(write=False)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == SCALAR:
            return float(self.value) * x
        if self.kind == DIAGONAL:
            return self.value * x
        return self.value @ x

    def matrix(self) -> np.ndarray:
        """Dense realization, mainly for tests and display."""
        if self.kind == SCALAR:
            return float(self.value) * np.eye(self.dim)
        if self.kind == DIAGONAL:
            return np.diag(self.value)
        return np.array(self.value)

    def norm_inf(self) -> float:
        """Maximum row sum norm."""
        if self.kind == SCALAR:
            return abs(float(self.value))
        if self.kind == DIAGONAL:
            return float(np.max(np.abs(self.value)))
        return float(np.max(np.sum(np.abs(self.value), axis=1)))

    def eigenvalues(self) -> np.ndarray:
        if self.kind == SCALAR:
            return np.full(self.dim, float(self.value))
        if self.kind == DIAGONAL:
            return np.array(self.value)
        return np.linalg.eigvals(self.value)

    def descriptor(self) -> str:
        if self.kind == SCALAR:
            return f"scalar:{float(self.value):.17g}"
        if self.kind == DIAGONAL:
            return "diag:" + ",".join(f"{v:.17g}" for v in self.value)
        return f"dense:{self.dim}x{self.dim}"


def scalar_op(lam: float, dim: int = 1) -> LinOp:
    """lam times the identity on R^dim."""
    return LinOp(kind=SCALAR, value=np.asarray(float(lam)), dim=dim)


def diag_op(values) -> LinOp:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("diagonal operator needs a nonempty 1-d value array")
    return LinOp(kind=DIAGONAL, value=arr, dim=arr.size)


def dense_op(matrix) -> LinOp:
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"dense operator needs a square matrix, got shape {arr.shape}")
    return LinOp(kind=DENSE, value=arr, dim=arr.shape[0])


def laplacian_1d(d: int, h: float) -> LinOp:
    """Dirichlet 1-d Laplacian: tridiagonal (1/h^2) [1, -2, 1] on R^d.

    All eigenvalues are negative real, which makes it the standard dissipative
    test generator.
    """
    if d < 2:
        raise ValueError(f"laplacian needs dimension >= 2, got d={d}")
    if h <= 0:
        raise ValueError(f"grid spacing must be positive, got h={h}")
    mat = np.zeros((d, d))
    np.fill_diagonal(mat, -2.0)
    idx = np.arange(d - 1)
    mat[idx, idx + 1] = 1.0
    mat[idx + 1, idx] = 1.0
    return dense_op(mat / h**2)


def op_from_matrix_file(path) -> LinOp:
    """Dense operator from a plain-text file of whitespace-separated rows."""
    arr = np.loadtxt(Path(path), ndmin=2)
    return dense_op(arr)


def op_from_descriptor(text: str) -> LinOp:
    """Parse operator shorthand.

    Forms:  scalar:LAMBDA | diag:V1,V2,... | laplacian:DIM:H | file:PATH
    """
    head, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"malformed operator descriptor {text!r}")
    if head == "scalar":
        return scalar_op(float(rest))
    if head == "diag":
        return diag_op([float(v) for v in rest.split(",")])
    if head == "laplacian":
        dim_text, sep2, h_text = rest.partition(":")
        if not sep2:
            raise ValueError(f"laplacian descriptor needs DIM:H, got {text!r}")
        return laplacian_1d(int(dim_text), float(h_text))
    if head == "file":
        return op_from_matrix_file(rest)
    raise ValueError(f"unknown operator descriptor kind {head!r}")


@dataclass(frozen=True)
class ResolventHandle:
    """Reusable factorization of (tau**(-alpha) I - A).

    `solve` applies the inverse of the shifted operator; `shift` holds
    tau**(-alpha).  The handle is immutable after construction, so concurrent
    solves against one handle are safe.
    """

    op: LinOp
    alpha: float
    tau: float
    shift: float
    cond: float
    factor: object

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve (shift I - A) y = b for vector or stacked-column b."""
        b = np.asarray(b, dtype=float)
        if self.op.kind == SCALAR:
            return b / float(self.factor)
        if self.op.kind == DIAGONAL:
            denom = self.factor
            if b.ndim >= 2:
                denom = denom.reshape((-1,) + (1,) * (b.ndim - 1))
            return b / denom
        return linalg.lu_solve(self.factor, b)


def resolvent_handle(
    op: LinOp, alpha: float, tau: float, cond_limit: float = 1e12
) -> ResolventHandle:
    """Factor (tau**(-alpha) I - A) once, rejecting near-singular shifts.

    A condition estimate above `cond_limit` means tau**(-alpha) is not usably
    inside the resolvent set and raises ResolventSetError.
    """
    if alpha <= 0 or tau <= 0:
        raise ValueError(f"alpha and tau must be positive, got alpha={alpha}, tau={tau}")
    shift = tau ** (-alpha)
    if op.kind in (SCALAR, DIAGONAL):
        lam = np.atleast_1d(np.asarray(op.value, dtype=float))
        denom = shift - lam
        scale = np.max(np.abs(lam)) + abs(shift)
        if np.any(denom == 0.0) or scale / np.min(np.abs(denom)) > cond_limit:
            raise ResolventSetError(
                f"tau**(-alpha) = {shift:.6g} is not in the resolvent set of {op.descriptor()}"
            )
        factor = float(denom[0]) if op.kind == SCALAR else denom
        cond = float(scale / np.min(np.abs(denom)))
        return ResolventHandle(op=op, alpha=alpha, tau=tau, shift=shift, cond=cond, factor=factor)
    mat = shift * np.eye(op.dim) - op.value
    try:
        cond = float(np.linalg.cond(mat, 1))
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > cond_limit:
        raise ResolventSetError(
            f"tau**(-alpha) = {shift:.6g} is not in the resolvent set of {op.descriptor()} "
            f"(condition estimate {cond:.3e})"
        )
    factor = linalg.lu_factor(mat)
    return ResolventHandle(op=op, alpha=alpha, tau=tau, shift=shift, cond=cond, factor=factor)


def resolvent_apply(handle: ResolventHandle, x: np.ndarray) -> np.ndarray:
    """R x = tau**(-alpha) (tau**(-alpha) I - A)^{-1} x via the cached solve."""
    return handle.shift * handle.solve(x)


# Value-level algebra for operator sequences.  A family of operators generated
# by a scalar / diagonal / dense A is stored as an array of values with one of
# the shapes (), (d,), (d, d) per step; the helpers below give the matching
# product, identity, application, and norm without densifying.


def op_identity(kind: str, dim: int) -> np.ndarray:
    if kind == SCALAR:
        return np.asarray(1.0)
    if kind == DIAGONAL:
        return np.ones(dim)
    return np.eye(dim)


def op_mul(kind: str, a, b):
    """Operator composition at value level."""
    if kind == DENSE:
        return a @ b
    return a * b


def op_apply(kind: str, a, x: np.ndarray) -> np.ndarray:
    if kind == DENSE:
        return a @ x
    return a * x


def op_norm(kind: str, a) -> float:
    """Frobenius norm of the value's realization (plain |.| for scalars)."""
    return float(np.linalg.norm(np.ravel(a)))

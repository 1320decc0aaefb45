"""Discrete (alpha, beta)-resolvent families built three independent ways,
plus the identity checks that cross-validate them.

A family generated by A with step tau is the operator sequence S^0..S^N
satisfying

    S^n x = k(beta, n) x + tau * A * sum_{j<=n} k(alpha, n-j) S^j x.

The module constructs it

  * explicitly, as S^n = sum_{j=1..n+1} a(n, j) R^j from a coefficient table
    and accumulated resolvent solves,
  * recursively, solving the defining equation step by step, and
  * as a bounded-operator series sum_j k(alpha*j + beta, n) A^j,

and provides a-posteriori checks: the defining equation residual, the
two-index functional equation, the generating-function (Z-transform)
identity, and Poisson subordination of exponential families.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import integrate, linalg, stats

from . import _ddouble as dd
from .kernels import ConvergenceError, kernel_seq, mittag_leffler
from .operator import (
    DENSE,
    SCALAR,
    LinOp,
    ResolventHandle,
    op_identity,
    op_mul,
    op_norm,
    resolvent_handle,
    scalar_op,
)

SERIES_MAX_TERMS = 100_000


@dataclass(frozen=True)
class CoeffTable:
    """Lower-triangular coefficients a(n, l), 0 <= n <= N, 1 <= l <= n+1.

    Row n expands S^n over resolvent powers R^1..R^{n+1}.  Stored as a dense
    (N+1, N+1) array with zeros outside the triangle; entry(n, l) gives the
    one-based-column value.

    The entries grow like alpha**n for alpha > 1 while the row sums stay at
    k(beta, n), so the table is computed in double-double arithmetic;
    `table` holds the rounded float64 values and `table_lo` the compensation
    parts that the explicit construction consumes to evaluate the
    representation without cancellation loss.
    """

    alpha: float
    beta: float
    tau: float
    table: np.ndarray
    table_lo: np.ndarray

    def __post_init__(self) -> None:
        self.table.setflags(write=False)
        self.table_lo.setflags(write=False)

    @property
    def last_index(self) -> int:
        return self.table.shape[0] - 1

    def entry(self, n: int, l: int) -> float:
        if not 1 <= l <= n + 1:
            raise IndexError(f"column {l} outside 1..{n + 1} for row {n}")
        return float(self.table[n, l - 1])

    def row(self, n: int) -> np.ndarray:
        return self.table[n, : n + 1]

    def row_sums(self) -> np.ndarray:
        return self.table.sum(axis=1)

    def row_abs_sums(self) -> np.ndarray:
        return np.abs(self.table).sum(axis=1)


def coeff_table(alpha: float, beta: float, tau: float, n: int) -> CoeffTable:
    """Fill the coefficient table by its three recursions.

    With ka = k(alpha, .), kb = k(beta, .):

        a(0, 1) = kb(0)
        a(1, 1) = (kb(1) ka(0) - kb(0) ka(1)) / ka(0)
        a(1, 2) = kb(0) ka(1) / ka(0)

    and for rows n >= 2, reading a(j, l) as 0 outside 1 <= l <= j+1:

        a(n, 1)   = (kb(n) ka(0) - sum_{j<n} ka(n-j) a(j, 1)) / ka(0)
        a(n, l)   = (sum_{j<n} ka(n-j) a(j, l-1)
                     - sum_{j<n} ka(n-j) a(j, l)) / ka(0),   2 <= l <= n
        a(n, n+1) = ka(1) a(n-1, n) / ka(0)

    Every tau power cancels out of the recursion except for one overall
    factor: a(n, l) = tau**(beta-1) * p(n, l) where p only involves the
    Gamma ratios c(alpha, i) = ka(i)/ka(0) and c(beta, i) = kb(i)/kb(0).
    The p recursion is carried in double-double arithmetic, which keeps the
    rounded entries exact to the last float64 digit despite their growth.
    """
    if alpha <= 0 or beta <= 0 or tau <= 0:
        raise ValueError(
            f"parameters must be positive, got alpha={alpha}, beta={beta}, tau={tau}"
        )
    if n < 0:
        raise ValueError(f"table size must be nonnegative, got n={n}")
    ca = _gamma_ratio_dd(alpha, n)
    cb = _gamma_ratio_dd(beta, n)
    alpha_dd = dd.from_float(alpha)
    p = dd.zeros((n + 1, n + 1))
    dd.setitem(p, (0, 0), dd.from_float(1.0))
    if n >= 1:
        dd.setitem(p, (1, 0), dd.sub(dd.index(cb, 1), alpha_dd))
        dd.setitem(p, (1, 1), alpha_dd)
    for row in range(2, n + 1):
        # g[c] = sum_{j<row} c(alpha, row-j) * p(j, c); zero padding keeps
        # the out-of-triangle reads silent.
        g = dd.zeros(n + 1)
        for j in range(row):
            g = dd.add(g, dd.mul(dd.index(ca, row - j), dd.index(p, (j, slice(None)))))
        dd.setitem(p, (row, 0), dd.sub(dd.index(cb, row), dd.index(g, 0)))
        dd.setitem(
            p,
            (row, slice(1, row)),
            dd.sub(dd.index(g, slice(0, row - 1)), dd.index(g, slice(1, row))),
        )
        dd.setitem(p, (row, row), dd.mul(alpha_dd, dd.index(p, (row - 1, row - 1))))
    scaled = dd.mul(dd.from_float(tau ** (beta - 1.0)), p)
    return CoeffTable(alpha=alpha, beta=beta, tau=tau, table=scaled[0], table_lo=scaled[1])


def _gamma_ratio_dd(order: float, n: int):
    """Double-double sequence c(i) = Gamma(order + i) / (Gamma(order) i!)."""
    hi = np.empty(n + 1)
    lo = np.empty(n + 1)
    cur = dd.from_float(1.0)
    hi[0], lo[0] = cur
    for i in range(n):
        cur = dd.div(
            dd.mul(cur, dd.add(dd.from_float(order), dd.from_float(float(i)))),
            dd.from_float(float(i + 1)),
        )
        hi[i + 1], lo[i + 1] = cur
    return hi, lo


@dataclass(frozen=True)
class ResolventFamily:
    """Concrete realization of S^0..S^N for a scalar/diagonal/dense generator.

    `values` has shape (N+1,), (N+1, d), or (N+1, d, d) matching the
    generator variant; `method` records which construction produced it.
    """

    alpha: float
    beta: float
    tau: float
    op: LinOp
    values: np.ndarray
    method: str

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    @property
    def last_index(self) -> int:
        return self.values.shape[0] - 1

    @property
    def kind(self) -> str:
        return self.op.kind

    def op_at(self, n: int):
        return self.values[n]

    def apply(self, n: int, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == DENSE:
            return self.values[n] @ x
        return self.values[n] * x

    def norms(self) -> np.ndarray:
        """Frobenius norm of each S^n."""
        flat = self.values.reshape(self.values.shape[0], -1)
        return np.linalg.norm(flat, axis=1)


def _kernel_conv_family(k: np.ndarray, values: np.ndarray) -> np.ndarray:
    """(k * S)^n = sum_{j<=n} k(n-j) S^j for every n, at value level."""
    out = np.zeros_like(values)
    for n in range(values.shape[0]):
        out[n] = np.tensordot(k[: n + 1][::-1], values[: n + 1], axes=(0, 0))
    return out


def family_explicit(op: LinOp, table: CoeffTable, n: int | None = None) -> ResolventFamily:
    """Family from the explicit representation S^n = sum_j a(n, j) R^j.

    Resolvent powers come from repeated solves on the cached factorization,
    never from forming an explicit inverse.  Because the coefficients grow
    like alpha**n against boundedly many matching digits in the power sums,
    powers and sums are carried in double-double arithmetic alongside the
    table's compensated entries; only the finished S^n rounds to float64.
    """
    if n is None:
        n = table.last_index
    if n > table.last_index:
        raise ValueError(f"table holds rows 0..{table.last_index}, need {n}")
    handle = resolvent_handle(op, table.alpha, table.tau)
    if op.kind == DENSE:
        r_dd = _dense_resolvent_dd(op, handle)
        power = r_dd
        matmul = True
    else:
        shift_dd = dd.from_float(handle.shift)
        lam = np.asarray(op.value, dtype=float)
        r_dd = dd.div(shift_dd, dd.sub(shift_dd, dd.from_float(lam)))
        power = r_dd
        matmul = False
    value_shape = np.shape(r_dd[0])
    values = np.zeros((n + 1,) + value_shape)
    acc = [dd.zeros(value_shape) for _ in range(n + 1)]
    for j in range(n + 1):
        # R^{j+1} enters row n for every n >= j with weight a(n, j+1).
        for row in range(j, n + 1):
            coeff = (table.table[row, j], table.table_lo[row, j])
            acc[row] = dd.add(acc[row], dd.mul(coeff, power))
        if j < n:
            power = dd.matmul(r_dd, power) if matmul else dd.mul(r_dd, power)
    for row in range(n + 1):
        values[row] = dd.to_float(acc[row])
    return ResolventFamily(
        alpha=table.alpha, beta=table.beta, tau=table.tau, op=op, values=values,
        method="explicit",
    )


def _dense_resolvent_dd(op: LinOp, handle: ResolventHandle):
    """R = shift * (shift I - A)^{-1} to double-double accuracy.

    Starts from the float64 solve and applies iterative refinement with
    residuals formed in double-double; two corrections reach the working
    precision for the well-conditioned shifts the handle admits.
    """
    d = op.dim
    eye = np.eye(d)
    mat = handle.shift * eye - np.asarray(op.value, dtype=float)
    rhs_dd = dd.from_float(handle.shift * eye)
    x_dd = dd.from_float(handle.solve(handle.shift * eye))
    mat_dd = dd.from_float(mat)
    for _ in range(3):
        resid = dd.sub(rhs_dd, dd.matmul(mat_dd, x_dd))
        x_dd = dd.add(x_dd, dd.from_float(handle.solve(dd.to_float(resid))))
    return x_dd


def family_recursive(
    op: LinOp, alpha: float, beta: float, tau: float, n: int
) -> ResolventFamily:
    """Family from the defining equation, solved step by step.

    At each n the implicit part is isolated:

        (I - tau**alpha A) S^n = k(beta, n) I + tau A sum_{j<n} k(alpha, n-j) S^j,

    and the cached shifted factorization gives S^n directly.
    """
    handle = resolvent_handle(op, alpha, tau)
    ka = kernel_seq(alpha, tau, max(n, 1)).values
    kb = kernel_seq(beta, tau, max(n, 1)).values
    ident = op_identity(op.kind, op.dim)
    a_val = np.asarray(op.value, dtype=float) if op.kind != SCALAR else float(op.value)
    values = np.zeros((n + 1,) + np.shape(ident))
    for step in range(n + 1):
        if step == 0:
            rhs = kb[0] * ident
        else:
            hist = np.tensordot(ka[1 : step + 1][::-1], values[:step], axes=(0, 0))
            rhs = kb[step] * ident + tau * op_mul(op.kind, a_val, hist)
        values[step] = handle.shift * handle.solve(rhs)
    return ResolventFamily(
        alpha=alpha, beta=beta, tau=tau, op=op, values=values, method="recursive"
    )


def family_series(
    op: LinOp, alpha: float, beta: float, tau: float, n: int, tol: float = 1e-12
) -> ResolventFamily:
    """Family from the bounded-operator series S^n = sum_j k(alpha*j + beta, n) A^j.

    Valid when the operator norm estimate is below 1 and tau**alpha < 1; the
    series is truncated once the a-priori term bound
    max_n k(alpha*j + beta, n) * ||A||^j drops below tol.
    """
    norm_a = op.norm_inf()
    if norm_a >= 1.0:
        raise ValueError(
            f"series construction needs ||A|| < 1, estimate is {norm_a:.6g}"
        )
    if tau**alpha >= 1.0:
        raise ValueError(
            f"series construction needs tau**alpha < 1, got {tau ** alpha:.6g}"
        )
    ident = op_identity(op.kind, op.dim)
    a_val = np.asarray(op.value, dtype=float) if op.kind != SCALAR else float(op.value)
    power = ident
    values = np.zeros((n + 1,) + np.shape(ident))
    for j in range(SERIES_MAX_TERMS):
        k = kernel_seq(alpha * j + beta, tau, n).values
        bound = float(np.max(k)) * norm_a**j
        if j > 0 and bound < tol:
            break
        values += _outer_terms(k, power)
        power = op_mul(op.kind, a_val, power)
    else:
        raise ConvergenceError(
            f"series construction did not reach tol={tol} within {SERIES_MAX_TERMS} terms"
        )
    return ResolventFamily(
        alpha=alpha, beta=beta, tau=tau, op=op, values=values, method="series"
    )


def _outer_terms(k: np.ndarray, power) -> np.ndarray:
    """k(n) * P for every n, stacked along a new leading axis."""
    return np.multiply.outer(k, power)


def resolvent_equation_residual(family: ResolventFamily) -> np.ndarray:
    """Per-step relative residual of the defining equation.

    For each n the residual of S^n = k(beta, n) I + tau A (k_alpha * S)^n is
    normalized by the largest of the three term norms, so families whose
    entries grow keep a meaningful scale.
    """
    op = family.op
    n_last = family.last_index
    ka = kernel_seq(family.alpha, family.tau, max(n_last, 1)).values
    kb = kernel_seq(family.beta, family.tau, max(n_last, 1)).values
    ident = op_identity(op.kind, op.dim)
    a_val = np.asarray(op.value, dtype=float) if op.kind != SCALAR else float(op.value)
    ks = _kernel_conv_family(ka, family.values)
    out = np.empty(n_last + 1)
    for n in range(n_last + 1):
        lhs = family.values[n]
        t_id = kb[n] * ident
        t_conv = family.tau * op_mul(op.kind, a_val, ks[n])
        resid = op_norm(op.kind, lhs - t_id - t_conv)
        scale = max(op_norm(op.kind, lhs), op_norm(op.kind, t_id), op_norm(op.kind, t_conv))
        out[n] = resid / scale if scale > 0 else resid
    return out


def commutation_residual(family: ResolventFamily) -> np.ndarray:
    """Per-step relative residual of A S^n - S^n A (identically zero for
    scalar and diagonal variants)."""
    op = family.op
    n_last = family.last_index
    out = np.empty(n_last + 1)
    if op.kind != DENSE:
        out.fill(0.0)
        return out
    a_val = np.asarray(op.value, dtype=float)
    for n in range(n_last + 1):
        s = family.values[n]
        resid = op_norm(DENSE, a_val @ s - s @ a_val)
        scale = op_norm(DENSE, a_val @ s)
        out[n] = resid / scale if scale > 0 else resid
    return out


def family_max_relative_difference(a: ResolventFamily, b: ResolventFamily) -> float:
    """max_n ||S_a^n - S_b^n|| / scale_n, the uniqueness cross-check metric.

    The per-step scale is the larger of the two step norms, floored at the
    family's overall maximum norm times machine-level headroom so that steps
    that decay to zero do not dominate the ratio spuriously.
    """
    if a.values.shape != b.values.shape:
        raise ValueError("families must share generator variant and length")
    n_last = a.last_index
    norms = np.maximum(a.norms(), b.norms())
    floor = float(np.max(norms))
    worst = 0.0
    for n in range(n_last + 1):
        diff = op_norm(a.kind, a.values[n] - b.values[n])
        scale = max(norms[n], 1e-8 * floor)
        worst = max(worst, diff / scale)
    return worst


class FunctionalEquationCheck(NamedTuple):
    residual: float
    scale: float


def check_functional_equation(
    family: ResolventFamily, m: int, n: int
) -> FunctionalEquationCheck:
    """Residual of the two-index functional equation

        S^m (ka*S)^n - (ka*S)^m S^n = k(beta, m) (ka*S)^n - k(beta, n) (ka*S)^m

    evaluated with operator compositions.  `scale` is the largest norm among
    the four assembled terms, the natural magnitude for a relative gate.
    """
    top = max(m, n)
    if top > family.last_index:
        raise ValueError(f"family holds steps 0..{family.last_index}, need {top}")
    kind = family.kind
    ka = kernel_seq(family.alpha, family.tau, max(top, 1)).values
    kb = kernel_seq(family.beta, family.tau, max(top, 1)).values
    ks = _kernel_conv_family(ka, family.values[: top + 1])
    t1 = op_mul(kind, family.values[m], ks[n])
    t2 = op_mul(kind, ks[m], family.values[n])
    t3 = kb[m] * ks[n]
    t4 = kb[n] * ks[m]
    residual = op_norm(kind, t1 - t2 - t3 + t4)
    scale = max(op_norm(kind, t) for t in (t1, t2, t3, t4))
    return FunctionalEquationCheck(residual=residual, scale=scale)


@dataclass(frozen=True)
class ZTransformCheck:
    """Outcome of a truncated generating-function comparison.

    `status` is "ok" when the geometric tail beyond the stored range is
    certified below `tail_bound`, otherwise "inconclusive"; `residual` is the
    relative mismatch of the truncated transform against the closed form.
    """

    status: str
    residual: float
    tail: float
    tail_bound: float

    @property
    def conclusive(self) -> bool:
        return self.status == "ok"


def kernel_ztransform_check(
    alpha: float, tau: float, z: float, n: int, tail_bound: float = 1e-6
) -> ZTransformCheck:
    """Compare sum_{j<=n} z^-j k(alpha, j) with tau**(alpha-1) z**alpha / (z-1)**alpha.

    The kernel ratio k(j+1)/k(j) = (alpha+j)/(j+1) bounds the dropped tail by
    an exact geometric sum, so the certificate here is rigorous.
    """
    if z <= 1:
        raise ValueError(f"transform comparison needs real z > 1, got z={z}")
    k = kernel_seq(alpha, tau, n + 1).values
    partial = float(np.sum(z ** -np.arange(n + 1) * k[: n + 1]))
    closed = tau ** (alpha - 1.0) * z**alpha / (z - 1.0) ** alpha
    ratio = (alpha + n + 1.0) / (n + 2.0) if alpha >= 1 else 1.0
    if ratio >= z:
        tail = math.inf
    else:
        tail = k[n + 1] * z ** -(n + 1.0) / (1.0 - ratio / z)
    residual = abs(partial - closed) / abs(closed)
    tail_rel = tail / abs(closed)
    status = "ok" if tail_rel <= tail_bound else "inconclusive"
    return ZTransformCheck(status=status, residual=residual, tail=tail_rel, tail_bound=tail_bound)


def check_ztransform(
    family: ResolventFamily, z: float, tail_bound: float = 1e-6
) -> ZTransformCheck:
    """Compare the truncated family transform with its closed form

        (1/tau) w**(alpha-beta) (w**alpha I - A)^{-1},   w = (z-1)/(tau z),

    at real z > 1.  The dropped tail is certified with an empirical growth
    ratio taken over the last stored steps; if that ratio reaches z the
    result is inconclusive rather than failed.
    """
    if z <= 1:
        raise ValueError(f"transform comparison needs real z > 1, got z={z}")
    op = family.op
    n_last = family.last_index
    weights = z ** -np.arange(n_last + 1)
    partial = np.tensordot(weights, family.values, axes=(0, 0))
    w = (z - 1.0) / (family.tau * z)
    closed = _shifted_inverse(op, w**family.alpha)
    closed = (w ** (family.alpha - family.beta) / family.tau) * closed
    resid = op_norm(op.kind, partial - closed)
    scale = op_norm(op.kind, closed)
    residual = resid / scale if scale > 0 else resid
    norms = family.norms()
    window = norms[-min(10, n_last + 1) :]
    ratios = window[1:] / np.where(window[:-1] > 0, window[:-1], np.inf)
    growth = float(np.max(ratios)) if ratios.size else 1.0
    growth = max(growth, 1e-6)
    if growth >= z or norms[-1] == 0.0:
        tail_rel = 0.0 if norms[-1] == 0.0 else math.inf
    else:
        tail = norms[-1] * z ** -float(n_last) * (growth / z) / (1.0 - growth / z)
        tail_rel = tail / scale if scale > 0 else tail
    status = "ok" if tail_rel <= tail_bound else "inconclusive"
    return ZTransformCheck(status=status, residual=residual, tail=tail_rel, tail_bound=tail_bound)


def _shifted_inverse(op: LinOp, shift: float):
    """(shift I - A)^{-1} at value level, via a linear solve for dense A."""
    if op.kind == SCALAR:
        return np.asarray(1.0 / (shift - float(op.value)))
    if op.kind != DENSE:
        return 1.0 / (shift - op.value)
    mat = shift * np.eye(op.dim) - op.value
    return linalg.solve(mat, np.eye(op.dim))


def subordinate_exponential(omega: float, tau: float, n: int) -> np.ndarray:
    """Quadrature values of integral rho(n, tau, t) exp(omega t) dt, n = 0..N.

    This realizes Poisson subordination of the scalar exponential family and
    cross-checks the backward-Euler specialization: the exact value is
    (1 - omega tau)^-(n+1).
    """
    if tau <= 0:
        raise ValueError(f"step size must be positive, got tau={tau}")
    if omega >= 1.0 / tau:
        raise ValueError(f"subordination needs omega < 1/tau, got omega={omega}")
    rate = 1.0 / tau - omega
    out = np.empty(n + 1)
    for idx in range(n + 1):
        upper = float(stats.gamma.isf(1e-14, idx + 1, scale=1.0 / rate))

        def integrand(t, _idx=idx):
            if t <= 0.0:
                return 1.0 / tau if _idx == 0 else 0.0
            logw = -t / tau + _idx * math.log(t / tau) - math.log(tau) - math.lgamma(_idx + 1)
            return math.exp(logw + omega * t)

        value, err = integrate.quad(
            integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-13, limit=300
        )
        if err > 1e-9:
            raise ConvergenceError(
                f"subordination quadrature at n={idx} has error estimate {err:.3e}"
            )
        out[idx] = value
    return out


@dataclass(frozen=True)
class MittagLefflerComparison:
    """Side-by-side table of the discrete family against t**(beta-1) E(alpha, beta)(-rho t**alpha).

    Rows start at n = 1: the continuous profile is singular at t = 0 whenever
    beta < 1, so the origin carries no comparable value.
    """

    rho: float
    alpha: float
    beta: float
    tau: float
    t: np.ndarray
    discrete: np.ndarray
    continuous: np.ndarray
    abs_error: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(self.abs_error))

    def errors_on(self, t_values: np.ndarray) -> np.ndarray:
        """Errors restricted to grid points shared with another run."""
        idx = []
        for tv in np.asarray(t_values, dtype=float):
            hits = np.nonzero(np.isclose(self.t, tv, rtol=0, atol=1e-12))[0]
            if hits.size:
                idx.append(hits[0])
        return self.abs_error[np.array(idx, dtype=int)]


def compare_mittag_leffler(
    rho: float, alpha: float, beta: float, n: int
) -> MittagLefflerComparison:
    """Discretize on [0, 1] with tau = 1/N, generator -rho, and compare.

    The discrete sequence comes from the step-by-step construction; the
    continuous profile is evaluated by the series Mittag-Leffler routine.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if n < 1:
        raise ValueError(f"need at least one step, got n={n}")
    tau = 1.0 / n
    family = family_recursive(scalar_op(-rho), alpha, beta, tau, n)
    steps = np.arange(1, n + 1)
    t = steps * tau
    discrete = family.values[1:]
    continuous = np.array(
        [tv ** (beta - 1.0) * mittag_leffler(alpha, beta, -rho * tv**alpha).value for tv in t]
    )
    return MittagLefflerComparison(
        rho=rho,
        alpha=alpha,
        beta=beta,
        tau=tau,
        t=t,
        discrete=np.array(discrete),
        continuous=continuous,
        abs_error=np.abs(np.array(discrete) - continuous),
    )


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def save_family(family: ResolventFamily, path) -> None:
    """Write the family as CSV (row per step, matrices flattened row-major)
    with a JSON metadata sidecar next to it."""
    path = Path(path)
    flat = family.values.reshape(family.values.shape[0], -1)
    residuals = resolvent_equation_residual(family)
    if family.kind == SCALAR:
        names = ["s"]
    elif family.kind == DENSE:
        d = family.op.dim
        names = [f"s_{i}_{j}" for i in range(d) for j in range(d)]
    else:
        names = [f"s_{i}" for i in range(family.op.dim)]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n"] + names + ["resolvent_residual"])
        for n in range(flat.shape[0]):
            writer.writerow([n] + [_fmt(v) for v in flat[n]] + [_fmt(residuals[n])])
    meta = {
        "alpha": family.alpha,
        "beta": family.beta,
        "tau": family.tau,
        "n": family.last_index,
        "operator": family.op.descriptor(),
        "method": family.method,
    }
    meta_path = path.with_suffix(path.suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def save_table(table: CoeffTable, path) -> None:
    """Write the coefficient table in long form: one row per (n, l) pair."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "l", "a"])
        for n in range(table.last_index + 1):
            for l in range(1, n + 2):
                writer.writerow([n, l, _fmt(table.entry(n, l))])
    meta = {
        "alpha": table.alpha,
        "beta": table.beta,
        "tau": table.tau,
        "n": table.last_index,
    }
    meta_path = path.with_suffix(path.suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")

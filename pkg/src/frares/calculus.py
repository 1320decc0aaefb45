"""Backward differences, fractional sums, and Caputo-type fractional
backward differences on vector-valued sequences.

All operators share one convention: a sequence reads as the zero vector at
negative indices.  Every identity in this package is stated and tested under
that single convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import kernel_seq


@dataclass(frozen=True)
class VecSeq:
    """A finite vector-valued sequence v^0..v^N on a uniform grid of step tau.

    Entries are stored as an (N+1, d) array; reads below index 0 return the
    zero vector.
    """

    tau: float
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError(f"step size must be positive, got tau={self.tau}")
        if self.entries.ndim != 2:
            raise ValueError("entries must be a 2-d array of shape (N+1, d)")
        self.entries.setflags(write=False)

    @classmethod
    def from_values(cls, values, tau: float) -> "VecSeq":
        """Build from an (N+1,) scalar sequence or an (N+1, d) array."""
        arr = np.array(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls(tau=tau, entries=arr)

    @classmethod
    def constant(cls, value, n: int, tau: float) -> "VecSeq":
        vec = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(tau=tau, entries=np.tile(vec, (n + 1, 1)))

    @classmethod
    def zeros(cls, n: int, dim: int, tau: float) -> "VecSeq":
        return cls(tau=tau, entries=np.zeros((n + 1, dim)))

    def __len__(self) -> int:
        return self.entries.shape[0]

    @property
    def dim(self) -> int:
        return self.entries.shape[1]

    @property
    def last_index(self) -> int:
        return self.entries.shape[0] - 1

    def at(self, j: int) -> np.ndarray:
        """Entry v^j, zero-extended for j < 0."""
        if j < 0:
            return np.zeros(self.dim)
        if j > self.last_index:
            raise IndexError(f"index {j} beyond stored range 0..{self.last_index}")
        return self.entries[j]


def backward_diff(v: VecSeq, m: int, n: int) -> np.ndarray:
    """Backward difference of order m at index n:

        (1/tau**m) * sum_{j=0..m} C(m, j) (-1)**j v^{n-j},

    with v reading as zero below index 0.
    """
    if m < 1:
        raise ValueError(f"difference order must be a positive integer, got m={m}")
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    acc = np.zeros(v.dim)
    for j in range(m + 1):
        acc += math.comb(m, j) * (-1.0) ** j * v.at(n - j)
    return acc / v.tau**m


def frac_sum(v: VecSeq, alpha: float) -> VecSeq:
    """Fractional sum of order alpha: out^n = tau * sum_{j<=n} k(alpha, n-j) v^j."""
    if alpha <= 0:
        raise ValueError(f"fractional sum order must be positive, got alpha={alpha}")
    n_last = v.last_index
    k = kernel_seq(alpha, v.tau, n_last).values
    out = np.empty_like(v.entries)
    for n in range(n_last + 1):
        out[n] = v.tau * (k[: n + 1][::-1] @ v.entries[: n + 1])
    return VecSeq(tau=v.tau, entries=out)


def caputo_diff(v: VecSeq, alpha: float, n: int) -> np.ndarray:
    """Caputo fractional backward difference of order alpha at index n.

    For m-1 < alpha < m this is the order-(m-alpha) fractional sum of the
    order-m backward difference:

        tau * sum_{j=0..n} k(m-alpha, n-j) * (backward_diff(v, m))^j.

    Integer alpha dispatches to the plain backward difference of that order.
    """
    if alpha <= 0:
        raise ValueError(f"order must be positive, got alpha={alpha}")
    if float(alpha).is_integer():
        return backward_diff(v, int(alpha), n)
    m = math.ceil(alpha)
    k = kernel_seq(m - alpha, v.tau, n).values
    acc = np.zeros(v.dim)
    for j in range(n + 1):
        acc += k[n - j] * backward_diff(v, m, j)
    return v.tau * acc

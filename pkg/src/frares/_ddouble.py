"""Vectorized double-double (compensated) arithmetic.

The explicit-representation coefficients grow like alpha**n while the family
values they reconstruct stay bounded, so evaluating the representation in
plain float64 loses up to ~alpha**n worth of significance to cancellation.
Carrying the coefficient recursion and the power sums in double-double
(roughly 32 significant digits) keeps the final float64 values correctly
rounded at every practically reachable horizon.

A double-double value is a pair (hi, lo) of float64 arrays with
|lo| <= ulp(hi)/2; all operations broadcast like the underlying numpy ops.
No transcendental functions are needed here: every quantity fed into these
routines is either rational in the parameters or an already-rounded float64
constant shared with the plain-precision code paths.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _fast_two_sum(a, b):
    # requires |a| >= |b| componentwise (or a == 0)
    s = a + b
    err = b - (s - a)
    return s, err


def _two_prod(a, b):
    p = a * b
    ah = _SPLITTER * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLITTER * b
    bh = bh - (bh - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def from_float(a):
    a = np.asarray(a, dtype=float)
    return a.copy(), np.zeros_like(a)


def to_float(x):
    return x[0] + x[1]


def zeros(shape):
    return np.zeros(shape), np.zeros(shape)


def neg(x):
    return -x[0], -x[1]


def add(x, y):
    # Accurate (non-sloppy) variant: safe under heavy cancellation.
    s1, s2 = _two_sum(x[0], y[0])
    t1, t2 = _two_sum(x[1], y[1])
    s2 = s2 + t1
    s1, s2 = _fast_two_sum(s1, s2)
    s2 = s2 + t2
    return _fast_two_sum(s1, s2)


def sub(x, y):
    return add(x, neg(y))


def mul(x, y):
    p, e = _two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return _fast_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = sub(x, mul(from_float(q1), y))
    q2 = r[0] / y[0]
    r = sub(r, mul(from_float(q2), y))
    q3 = r[0] / y[0]
    s, e = _two_sum(q1, q2)
    return _fast_two_sum(s, e + q3)


def dot_accumulate(acc, scalar, vec):
    """acc + scalar * vec, all double-double."""
    return add(acc, mul(scalar, vec))


def matmul(x, y):
    """Double-double matrix product for (d, d) operands."""
    d = x[0].shape[0]
    acc = zeros((d, y[0].shape[1]))
    for k in range(d):
        xk = (x[0][:, k : k + 1], x[1][:, k : k + 1])
        yk = (y[0][k : k + 1, :], y[1][k : k + 1, :])
        acc = add(acc, mul(xk, yk))
    return acc


def index(x, key):
    return x[0][key], x[1][key]


def setitem(x, key, value):
    x[0][key] = value[0]
    x[1][key] = value[1]

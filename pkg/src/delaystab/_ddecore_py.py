"""Pure-Python RK4 method-of-steps kernel (fallback for the compiled core).

Kept operation-for-operation identical to ``_ddecore.pyx`` so that both
backends produce the same trajectories to rounding.
"""
import math

import numpy as np

MACKEY_GLASS = 0
LASOTA = 1


def _F(model, y, n):
    if model == MACKEY_GLASS:
        return y / (1.0 + y ** n)
    return y ** n * math.exp(-y)


def _delayed(x, dx, pos, h, x0):
    # value at fractional node position ``pos``; constant history before 0
    if pos <= 0.0:
        return x0
    j = int(math.floor(pos))
    s = pos - j
    if s == 0.0:
        return x[j]
    s2 = s * s
    s3 = s2 * s
    return ((2.0 * s3 - 3.0 * s2 + 1.0) * x[j] + (s3 - 2.0 * s2 + s) * h * dx[j]
            + (-2.0 * s3 + 3.0 * s2) * x[j + 1] + (s3 - s2) * h * dx[j + 1])


def integrate_kernel(model, beta, gamma, n, eta, tau, x0, h, nsteps):
    """Integrate from t=0 with history x0; returns (x, dx, failed_index).

    ``failed_index`` is -1 on success, else the first step whose state is not
    strictly positive (arrays are filled up to that index).
    """
    x = np.empty(nsteps + 1)
    dx = np.empty(nsteps + 1)
    tau_h = tau / h
    x[0] = x0
    dx[0] = eta * (beta * _F(model, x0, n) - gamma * x0)
    for i in range(nsteps):
        xi = x[i]
        y0 = _delayed(x, dx, i - tau_h, h, x0)
        y5 = _delayed(x, dx, i + 0.5 - tau_h, h, x0)
        y1 = _delayed(x, dx, i + 1.0 - tau_h, h, x0)
        k1 = eta * (beta * _F(model, y0, n) - gamma * xi)
        k2 = eta * (beta * _F(model, y5, n) - gamma * (xi + 0.5 * h * k1))
        k3 = eta * (beta * _F(model, y5, n) - gamma * (xi + 0.5 * h * k2))
        fy1 = beta * _F(model, y1, n)
        k4 = eta * (fy1 - gamma * (xi + h * k3))
        xn = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[i + 1] = xn
        dx[i + 1] = eta * (fy1 - gamma * xn)
        if not xn > 0.0:
            return x, dx, i + 1
    return x, dx, -1

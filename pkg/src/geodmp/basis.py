"""Gaussian basis functions over the phase variable and their LWR fit."""
import numpy as np

#: Ridge term added to every per-basis normal equation.
LWR_REG = 1e-8


def phase(progress, alpha_x):
    """Closed-form phase ``x = exp(-alpha_x * progress)`` for normalized progress."""
    return np.exp(-alpha_x * np.asarray(progress, dtype=float))


def integrate_phase(progress, alpha_x):
    """Integrate ``dx/dp = -alpha_x x`` with classical RK4 on the given grid.

    Used to cross-check :func:`phase`; the generators use the closed form.
    """
    progress = np.asarray(progress, dtype=float)
    x = np.empty_like(progress)
    x[0] = np.exp(-alpha_x * progress[0])

    def rhs(val):
        return -alpha_x * val

    for k in range(len(progress) - 1):
        h = progress[k + 1] - progress[k]
        k1 = rhs(x[k])
        k2 = rhs(x[k] + 0.5 * h * k1)
        k3 = rhs(x[k] + 0.5 * h * k2)
        k4 = rhs(x[k] + h * k3)
        x[k + 1] = x[k] + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    return x


def centers(n_basis, alpha_x):
    """Centers spaced uniformly in normalized progress, ``exp(-alpha_x i/(N-1))``."""
    if n_basis < 2:
        raise ValueError("need at least two basis functions")
    return np.exp(-alpha_x * np.arange(n_basis) / (n_basis - 1))


def widths(c):
    """Widths ``1 / (2 dc^2)`` from the gap to the next center; last one repeats."""
    h = 1.0 / (2.0 * np.diff(c) ** 2)
    return np.append(h, h[-1])


def activations(x, c, h):
    """Basis activations ``psi_i(x)``, shape ``(len(x), len(c))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.exp(-h * (x[:, np.newaxis] - c) ** 2)


def normalized_sum(x, weights, c, h):
    """``sum_i w_i psi_i(x) / sum_i psi_i(x)`` for each phase value."""
    psi = activations(x, c, h)
    return psi @ weights / psi.sum(axis=1, keepdims=True)


def lwr_weights(x, targets, c, h, reg=LWR_REG):
    """Per-basis weighted least squares for the model ``target = w x``.

    Parameters
    ----------
    x : array, shape (n_samples,)
        Phase at each sample.
    targets : array, shape (n_samples, n_dims)
        Forcing targets already divided by the goal scaling.

    Returns
    -------
    weights : array, shape (n_basis, n_dims)
    """
    x = np.asarray(x, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(len(x), -1)
    psi = activations(x, c, h)
    num = psi.T @ (x[:, np.newaxis] * targets)
    den = psi.T @ x**2 + reg
    return num / den[:, np.newaxis]


def lstsq_weights(x, targets, c, h, reg=LWR_REG):
    """Ridge least squares for the full normalized model.

    Solves ``sum_i w_i psi_i(x_k) / sum_j psi_j(x_k) * x_k = target_k`` for
    all samples at once instead of one basis at a time.
    """
    x = np.asarray(x, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(len(x), -1)
    psi = activations(x, c, h)
    design = psi / psi.sum(axis=1, keepdims=True) * x[:, np.newaxis]
    gram = design.T @ design + reg * np.eye(len(c))
    return np.linalg.solve(gram, design.T @ targets)


SOLVERS = {"lstsq": lstsq_weights, "lwr": lwr_weights}


def fit_weights(x, targets, c, h, solver="lstsq"):
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    return SOLVERS[solver](x, targets, c, h)


def goal_scaling(delta, eps):
    """Replace components of ``delta`` smaller than ``eps`` by ``+-eps``."""
    delta = np.asarray(delta, dtype=float)
    sign = np.where(delta < 0.0, -1.0, 1.0)
    return np.where(np.abs(delta) < eps, sign * eps, delta)

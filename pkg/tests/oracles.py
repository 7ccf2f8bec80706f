"""Symbolic reference values computed independently of the library."""
import numpy as np
import sympy as sp

X, Y, Z, T = sp.symbols("x y z t", real=True)
COORDS = (X, Y, Z)


def grad(f):
    return sp.Matrix([sp.diff(f, s) for s in COORDS])


def div(a):
    return sum(sp.diff(a[i], s) for i, s in enumerate(COORDS))


def evaluate(expr, grid, t):
    """Sample a scalar sympy expression of (x, y, z, t) on a rank-3 grid."""
    fn = sp.lambdify((X, Y, Z, T), expr, "numpy")
    x, y, z = grid.coords
    return np.broadcast_to(np.asarray(fn(x, y, z, t), dtype=float), grid.shape)


def norms(arrays):
    """(rms, max) of |residual| over every sample and component of ``arrays``."""
    stack = np.abs(np.stack([np.asarray(a) for a in arrays]))
    return float(np.sqrt(np.mean(stack**2))), float(np.max(stack))


def gauge_f(speed, k, c, amplitude=1):
    """Gauge wave moving along +x at ``speed`` with phase speed c^2/speed."""
    return amplitude * sp.sin(k * (X + c**2 / speed * T))


def plane_wave_fields(c, amplitude=1, k=1):
    wave = amplitude * sp.cos(k * (X - c * T))
    return sp.Matrix([0, wave, 0]), sp.Matrix([0, 0, wave / c])


def invariance_residuals(f, E, B, c):
    """Symbolic residual fields of the four invariance conditions."""
    g, ft = grad(f), sp.diff(f, T)
    return {
        "grad_f_dot_B": g.dot(B),
        "grad_f_dot_E": g.dot(E),
        "grad_f_cross_E": g.cross(E) - ft * B,
        "grad_f_cross_B": g.cross(B) + ft * E / c**2,
    }


def energy_residual(f, c, flux_sign):
    """``u_t + div(flux_sign * phi A)`` for ``A = -grad f``, ``phi = f_t``."""
    A = -grad(f)
    phi = sp.diff(f, T)
    u = (phi**2 + c**2 * A.dot(A)) / (2 * c**2)
    return sp.simplify(sp.diff(u, T) + div(flux_sign * phi * A))

"""Direction sets on S^2."""
import numpy as np

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def fibonacci_sphere(m: int) -> np.ndarray:
    """Deterministic, nearly uniform lattice of ``m`` unit vectors."""
    k = np.arange(m)
    z = 1.0 - (2.0 * k + 1.0) / m
    rho = np.sqrt(1.0 - z * z)
    phi = k * GOLDEN_ANGLE
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def uniform_sphere(m: int, seed=None, rng=None) -> np.ndarray:
    """Uniform unit vectors by rejection from the cube ``[-1, 1]^3``."""
    rng = np.random.default_rng(seed) if rng is None else rng
    out = np.empty((0, 3))
    while len(out) < m:
        x = rng.uniform(-1.0, 1.0, size=(2 * (m - len(out)) + 8, 3))
        r = np.linalg.norm(x, axis=1)
        keep = (r <= 1.0) & (r > 1e-6)
        out = np.vstack([out, x[keep] / r[keep, None]])
    return out[:m]


def tangent_basis(p):
    """Two unit rows ``(e1, e2)`` spanning the tangent plane at each row of ``p``, with ``e1 x e2 = p``."""
    p = np.atleast_2d(p)
    helper = np.where(np.abs(p[:, [0]]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    e1 = np.cross(helper, p)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(p, e1)
    return e1, e2

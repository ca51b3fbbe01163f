"""Brute-force reference counts, written independently of stickmaps.maps.

They assume a generic direction (no ties), which is what the tests feed them.
"""
import numpy as np


def _basis(v):
    v = v / np.linalg.norm(v)
    h = np.array([1.0, 0, 0]) if abs(v[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = np.cross(h, v)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(v, e1)


def bridge(X, v):
    h = X @ v
    n = len(h)
    return sum((h[i] > h[i - 1]) == (h[i] > h[(i + 1) % n]) for i in range(n))


def inflection(X, v):
    """Edges whose two neighbouring edges end on opposite sides of its projected line."""
    e1, e2 = _basis(v)
    P = np.column_stack([X @ e1, X @ e2])
    n = len(P)
    count = 0
    for i in range(n):
        a, b = P[i - 1], P[i]  # edge X_{i-1} -> X_i
        d = b - a

        def side(p):
            return np.sign(d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]))

        count += side(P[i - 2]) * side(P[(i + 1) % n]) < 0
    return count


def _tantrix(X):
    E = X - np.roll(X, 1, axis=0)
    return E / np.linalg.norm(E, axis=1, keepdims=True)


def _slerp(a, b, t):
    w = np.arccos(np.clip(a @ b, -1, 1))
    t = np.asarray(t, float)[:, None]
    return (np.sin((1 - t) * w) * a + np.sin(t * w) * b) / np.sin(w)


def tantrix_bridge(X, v, per_arc=20000):
    T = _tantrix(X)
    t = np.linspace(0, 1, per_arc, endpoint=False)
    h = np.concatenate([_slerp(T[i], T[(i + 1) % len(T)], t) for i in range(len(T))]) @ v
    d = np.sign(np.roll(h, -1) - h)
    return int(np.sum(d != np.roll(d, -1)))


def tantrix_inflection(X, v, step=1e-6):
    """Sign changes of the turning of the projected tantrix, corners included."""
    e1, e2 = _basis(v)
    T = _tantrix(X)
    n = len(T)

    def turn(pts):
        q = np.column_stack([pts @ e1, pts @ e2])
        u, w = q[1] - q[0], q[2] - q[1]
        return np.sign(u[0] * w[1] - u[1] * w[0])

    signs = []
    for i in range(n):
        a, b, c = T[i - 1], T[i], T[(i + 1) % n]
        corner = np.vstack([_slerp(a, b, [1 - step]), b, _slerp(b, c, [step])])
        middle = _slerp(b, c, [0.5 - 1e-3, 0.5, 0.5 + 1e-3])
        signs += [turn(corner), turn(middle)]
    s = np.array(signs)
    return int(np.sum(s != np.roll(s, -1)))

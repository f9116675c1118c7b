"""Independent reference implementations used as test oracles.

Nothing here imports the package's numerical code; each routine re-derives
its result from first principles with plain Python loops.
"""
import itertools
import math


def pinhole_backproject(u, v, depth_mm, fx, fy, cx, cy):
    z = depth_mm / 1000.0
    return ((u - cx) / fx * z, (v - cy) / fy * z, z)


def disk_scan(data, u, v, radius):
    """Exhaustive scan of the whole image, filtered by the disk predicate."""
    h, w = len(data), len(data[0])
    best = 0
    for y in range(h):
        for x in range(w):
            if (x - u) ** 2 + (y - v) ** 2 <= radius * radius:
                d = int(data[y][x])
                if d and (best == 0 or d < best):
                    best = d
    return best


def disk_count(radius):
    return sum(
        1
        for dx in range(-radius - 1, radius + 2)
        for dy in range(-radius - 1, radius + 2)
        if dx * dx + dy * dy <= radius * radius
    )


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def hamilton(p, q):
    w1, x1, y1, z1 = p
    w2, x2, y2, z2 = q
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


def quat_rotate(q, v):
    """q * (0, v) * conj(q)."""
    conj = (q[0], -q[1], -q[2], -q[3])
    r = hamilton(hamilton(q, (0.0, *v)), conj)
    return r[1:]


def wrap(a):
    a = math.fmod(a + math.pi, 2 * math.pi)
    if a <= 0:
        a += 2 * math.pi
    return a - math.pi


class ScalarKalman:
    """Constant-velocity heading filter written out element by element."""

    def __init__(self, theta, q, r, p00=0.5, p11=1.0):
        self.th, self.om = theta, 0.0
        self.p00, self.p01, self.p11 = p00, 0.0, p11
        self.q, self.r = q, r

    def predict(self, dt):
        if dt == 0:
            return
        q = self.q
        self.th = wrap(self.th + self.om * dt)
        p00 = self.p00 + 2 * dt * self.p01 + dt * dt * self.p11 + q * dt**3 / 3
        p01 = self.p01 + dt * self.p11 + q * dt**2 / 2
        p11 = self.p11 + q * dt
        self.p00, self.p01, self.p11 = p00, p01, p11

    def update(self, z):
        s = self.p00 + self.r
        k0, k1 = self.p00 / s, self.p01 / s
        y = wrap(z - self.th)
        self.th = wrap(self.th + k0 * y)
        self.om = self.om + k1 * y
        p00 = (1 - k0) * self.p00
        p01 = (1 - k0) * self.p01
        p11 = self.p11 - k1 * self.p01
        self.p00, self.p01, self.p11 = p00, p01, p11


def greedy_assign(tracks_xy, skels_xy, gate):
    """Repeatedly take the closest free (track, skeleton) pair within the gate."""
    free_t, free_s = set(range(len(tracks_xy))), set(range(len(skels_xy)))
    pairs = []
    while True:
        best = None
        for ti in sorted(free_t):
            for si in sorted(free_s):
                d = math.dist(tracks_xy[ti], skels_xy[si])
                if d <= gate and (best is None or d < best[0]):
                    best = (d, ti, si)
        if best is None:
            return sorted(pairs)
        pairs.append((best[1], best[2]))
        free_t.discard(best[1])
        free_s.discard(best[2])


def optimal_assign_cost(tracks_xy, skels_xy):
    """Minimum total distance over all full matchings (square case)."""
    n = len(tracks_xy)
    return min(
        sum(math.dist(tracks_xy[i], skels_xy[p[i]]) for i in range(n))
        for p in itertools.permutations(range(n))
    )


def disk_scan_all(data, centers, radius):
    """Vectorised exhaustive scan: every center against every image pixel."""
    import numpy as np

    h, w = data.shape
    ys, xs = np.mgrid[0:h, 0:w]
    cu, cv = centers[:, 0:1], centers[:, 1:2]
    inside = (xs.ravel()[None, :] - cu) ** 2 + (ys.ravel()[None, :] - cv) ** 2 <= radius * radius
    flat = data.ravel().astype(np.int64)
    vals = np.where(inside & (flat > 0)[None, :], flat[None, :], np.iinfo(np.int64).max)
    best = vals.min(axis=1)
    best[best == np.iinfo(np.int64).max] = 0
    return best

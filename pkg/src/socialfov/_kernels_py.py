"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=16)
def _disk_offsets(radius):
    r = np.arange(-radius, radius + 1)
    dy, dx = np.meshgrid(r, r, indexing="ij")
    return dx * dx + dy * dy <= radius * radius


def disk_min(data, u, v, radius):
    h, w = data.shape
    y0, y1 = max(v - radius, 0), min(v + radius, h - 1)
    x0, x1 = max(u - radius, 0), min(u + radius, w - 1)
    if y0 > y1 or x0 > x1:
        return 0
    window = data[y0:y1 + 1, x0:x1 + 1]
    mask = _disk_offsets(radius)[
        y0 - v + radius:y1 - v + radius + 1, x0 - u + radius:x1 - u + radius + 1
    ]
    vals = window[mask & (window != 0)]
    return int(vals.min()) if vals.size else 0


def disk_min_many(data, us, vs, radius):
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    return np.array(
        [disk_min(data, int(u), int(v), radius) for u, v in zip(us, vs)], dtype=np.int64
    )


def render_disks(out, us, vs, depths, radius):
    h, w = out.shape
    for cu, cv, d in zip(np.asarray(us, float), np.asarray(vs, float), np.asarray(depths)):
        d = int(d)
        if d == 0:
            continue
        x0 = max(int(cu - radius) - 1, 0)
        x1 = min(int(cu + radius) + 1, w - 1)
        y0 = max(int(cv - radius) - 1, 0)
        y1 = min(int(cv + radius) + 1, h - 1)
        if x0 > x1 or y0 > y1:
            continue
        ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
        inside = (xs - cu) ** 2 + (ys - cv) ** 2 <= radius * radius
        patch = out[y0:y1 + 1, x0:x1 + 1]
        take = inside & ((patch == 0) | (patch > d))
        patch[take] = d

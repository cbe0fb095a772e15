"""Map rows of group coordinates to int64 keys for vectorised lookups."""
from __future__ import annotations

import numpy as np

from .group import GroupSpec

_INT64_LIMIT = 1 << 63


def row_keys(group: GroupSpec, *arrays: np.ndarray) -> list[np.ndarray]:
    """Consistent injective keys for the rows of every array in ``arrays``.

    Rows are packed in mixed radix when the joint coordinate box fits in 63
    bits (always the case for {0,1}^n and small cyclic groups); otherwise rows
    are ranked through ``np.unique``.
    """
    arrays = [np.asarray(a, dtype=np.int64).reshape(-1, group.dim) for a in arrays]
    nonempty = [a for a in arrays if len(a)]
    if not nonempty:
        return [np.zeros(0, dtype=np.int64) for _ in arrays]
    f = group.free_rank
    lo = np.zeros(group.dim, dtype=np.int64)
    radix = [0] * group.dim
    for j in range(f):
        col_lo = min(int(a[:, j].min()) for a in nonempty)
        col_hi = max(int(a[:, j].max()) for a in nonempty)
        lo[j] = col_lo
        radix[j] = col_hi - col_lo + 1
    for j, m in enumerate(group.moduli):
        radix[f + j] = m

    total = 1
    strides = []
    for r in radix:
        strides.append(total)
        total *= r
    if total < _INT64_LIMIT:
        s = np.asarray(strides, dtype=np.int64)
        return [((a - lo) * s).sum(axis=1) if len(a) else np.zeros(0, np.int64) for a in arrays]

    _, inverse = np.unique(np.concatenate(nonempty), axis=0, return_inverse=True)
    inverse = inverse.reshape(-1).astype(np.int64)
    out, start = [], 0
    for a in arrays:
        out.append(inverse[start:start + len(a)])
        start += len(a)
    return out

"""Input validation shared by the estimator API and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .group import ElementSet, GroupSpec, free_group, parse_group

__all__ = ["check_group", "check_elements", "parse_elements", "read_element_file"]


def check_group(group, n_features: int) -> GroupSpec:
    """Resolve ``None`` (free group), a descriptor string or a GroupSpec against ``n_features``."""
    if group is None:
        group = free_group(n_features)
    elif isinstance(group, str):
        group = parse_group(group)
    elif not isinstance(group, GroupSpec):
        raise TypeError(f"group must be None, str or GroupSpec, got {type(group).__name__}")
    if group.dim != n_features:
        raise ValueError(f"group {group.describe()} has dimension {group.dim}, "
                         f"elements have {n_features} coordinates")
    return group


def check_elements(X, group=None, dedupe: bool = True, allow_empty: bool = True):
    """Validate an integer array of elements (one per row).

    Returns ``(elements, first_rows)`` where ``first_rows`` are the row indices
    of ``X`` kept after dropping repeats (rows equal after canonical reduction).
    """
    X = np.asarray(X)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.size == 0:
        if not allow_empty:
            raise ValueError("no elements given")
        g = group if isinstance(group, GroupSpec) else check_group(group, max(X.shape[-1], 1))
        return ElementSet(g, ()), np.zeros(0, dtype=np.intp)
    X = check_array(X, dtype=None, ensure_2d=True)
    if X.dtype.kind == "f":
        if not np.all(np.isfinite(X)) or not np.all(X == np.round(X)):
            raise ValueError("elements must have integer coordinates")
        X = X.astype(np.int64)
    elif X.dtype.kind not in "iu":
        raise ValueError(f"elements must be integer arrays, got dtype {X.dtype}")
    g = check_group(group, X.shape[1])
    seen: dict[tuple, int] = {}
    for i, row in enumerate(X.tolist()):
        key = g.reduce(row)
        if key in seen and not dedupe:
            raise ValueError(f"duplicate element {key} at rows {seen[key]} and {i}")
        seen.setdefault(key, i)
    return ElementSet(g, tuple(seen)), np.fromiter(seen.values(), dtype=np.intp, count=len(seen))


def parse_elements(text: str) -> list[list[int]]:
    """Inline form ``"a,b;c,d"``: ``;`` separates elements, ``,`` coordinates."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append([int(v) for v in chunk.split(",")])
    return out


def read_element_file(path) -> list[list[int]]:
    """One element per line, comma-separated integers, ``#`` starts a comment."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                out.append([int(v) for v in line.split(",")])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed element {line!r}") from None
    return out

"""Integer lattices: kernels of covector systems and exact box point counts."""

from __future__ import annotations

import numpy as np

from .arith import _egcd

# Above this magnitude the vectorized inner loop could overflow int64, so the
# counter falls back to exact Python integers.
_SAFE = 1 << 62


def integer_kernel(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Basis of the lattice {x integer : r.x = 0 for every covector r}.

    Column reduction by a unimodular matrix, so the result spans *all*
    integer solutions (the kernel lattice is saturated by construction).
    """
    if not rows:
        raise ValueError("need at least one covector")
    n = len(rows[0])
    m = len(rows)
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_sub(k: int, k0: int, q: int) -> None:
        for t in range(m):
            a[t][k] -= q * a[t][k0]
        for t in range(n):
            u[t][k] -= q * u[t][k0]

    def col_swap(k: int, k0: int) -> None:
        for t in range(m):
            a[t][k], a[t][k0] = a[t][k0], a[t][k]
        for t in range(n):
            u[t][k], u[t][k0] = u[t][k0], u[t][k]

    col = 0
    for i in range(m):
        while True:
            nz = [k for k in range(col, n) if a[i][k]]
            if len(nz) <= 1:
                break
            k0 = min(nz, key=lambda k: abs(a[i][k]))
            for k in nz:
                if k != k0:
                    q = a[i][k] // a[i][k0]
                    if q:
                        col_sub(k, k0, q)
        nz = [k for k in range(col, n) if a[i][k]]
        if nz:
            col_swap(nz[0], col)
            col += 1
    return [tuple(u[t][k] for t in range(n)) for k in range(col, n)]


def echelon_lattice_basis(basis: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Canonical echelon basis of the lattice spanned by the given vectors.

    Each output vector has a distinct level (index of its last nonzero
    entry), the entry at the level is positive, and entries of the other
    basis vectors at that position are reduced modulo it.
    """
    if not basis:
        return []
    n = len(basis[0])
    by_level: dict[int, list[int]] = {}
    work = [list(v) for v in basis]
    while work:
        v = work.pop()
        while True:
            lev = -1
            for i in range(n - 1, -1, -1):
                if v[i]:
                    lev = i
                    break
            if lev < 0:
                break
            w = by_level.get(lev)
            if w is None:
                by_level[lev] = v
                break
            if v[lev] % w[lev] == 0:
                q = v[lev] // w[lev]
                v = [vi - q * wi for vi, wi in zip(v, w)]
                continue
            g, s, t = _egcd(w[lev], v[lev])
            new = [s * wi + t * vi for wi, vi in zip(w, v)]
            rem = [wi - (w[lev] // g) * ni for wi, ni in zip(w, new)]
            v = [vi - (v[lev] // g) * ni for vi, ni in zip(v, new)]
            by_level[lev] = new
            work.append(rem)
    levels = sorted(by_level)
    out = []
    for lev in levels:
        v = by_level[lev]
        if v[lev] < 0:
            v = [-x for x in v]
        out.append(v)
    # Reduce entries sitting above lower pivots for a canonical result.
    for i, lev in enumerate(levels):
        p = out[i][lev]
        for j in range(i + 1, len(out)):
            q = out[j][lev] // p
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return [tuple(v) for v in out]


def _ceildiv(a: int, b: int) -> int:
    return -((-a) // b)


def count_lattice_points_in_box(basis, lo: int, hi: int) -> int:
    """Number of lattice points with every coordinate in [lo, hi], exactly."""
    if lo > hi:
        return 0
    b = echelon_lattice_basis(list(basis))
    if not b:
        return 1 if lo <= 0 <= hi else 0
    n = len(b[0])
    levels = []
    for v in b:
        lev = max(i for i in range(n) if v[i])
        levels.append(lev)
    if levels != sorted(levels):
        raise AssertionError("echelon basis levels out of order")
    # Coordinates above the top level are identically zero on the lattice.
    if levels[-1] < n - 1 and not lo <= 0 <= hi:
        return 0
    k = len(b)
    owned = []
    prev = -1
    for c in range(k):
        owned.append(range(prev + 1, levels[c] + 1))
        prev = levels[c]

    def t_range(c: int, partial: list[int]):
        tlo, thi = None, None
        for i in owned[c]:
            a = b[c][i]
            base = partial[i]
            if a == 0:
                if not lo <= base <= hi:
                    return 1, 0
                continue
            if a > 0:
                l, h = _ceildiv(lo - base, a), (hi - base) // a
            else:
                l, h = _ceildiv(base - hi, -a), (base - lo) // (-a)
            tlo = l if tlo is None else max(tlo, l)
            thi = h if thi is None else min(thi, h)
        return tlo, thi

    def descend(c: int, partial: list[int]) -> int:
        tlo, thi = t_range(c, partial)
        if tlo is None or tlo > thi:
            return 0
        if c == 0:
            return thi - tlo + 1
        if c == 1:
            fast = _bottom_pair(partial, tlo, thi)
            if fast is not None:
                return fast
        total = 0
        vec = b[c]
        for t in range(tlo, thi + 1):
            total += descend(c - 1, [p + t * v for p, v in zip(partial, vec)])
        return total

    def _bottom_pair(partial, tlo, thi):
        # Vectorized count over (t_1, t_0): only safe within int64 range.
        tmax = max(abs(tlo), abs(thi))
        limit = max(
            abs(partial[i]) + abs(b[1][i]) * tmax for i in range(levels[1] + 1)
        )
        if limit >= _SAFE or (thi - tlo + 1) > 50_000_000:
            return None
        ts = np.arange(tlo, thi + 1, dtype=np.int64)
        count = None
        mask = np.ones(len(ts), dtype=bool)
        for i in owned[0]:
            a = b[0][i]
            base = partial[i] + b[1][i] * ts
            if a == 0:
                mask &= (base >= lo) & (base <= hi)
                continue
            if a > 0:
                l = -((base - lo) // a)
                h = (hi - base) // a
            else:
                l = -((hi - base) // (-a))
                h = (base - lo) // (-a)
            count = (l, h) if count is None else (
                np.maximum(count[0], l),
                np.minimum(count[1], h),
            )
        if count is None:
            per = np.ones(len(ts), dtype=np.int64)
        else:
            per = np.maximum(count[1] - count[0] + 1, 0)
        return int(per[mask].sum())

    if k == 1:
        tlo, thi = t_range(0, [0] * n)
        if tlo is None or tlo > thi:
            return 0
        return thi - tlo + 1
    return descend(k - 1, [0] * n)

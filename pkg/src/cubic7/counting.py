"""Exact representation counts R(N; P) by block-histogram convolution.

Each ternary block contributes a value histogram over the box; the count of
f = N is a convolution of the two histograms against the cube term.  All
arithmetic is exact: the int64 fast path is guarded by a priori bounds and
falls back to Python integers when those bounds fail.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import lattice
from .arith import icbrt_exact
from .errors import DomainError, ResourceLimitError
from .forms import CubicForm, box_interval, box_range

P_CAP = 512
_GRID_CAP = 68_000_000  # lattice points per block enumeration
_GRID_CAP_BIG = 2_000_000  # same, on the exact big-integer fallback path
_DENSE_CAP = 200_000_000  # dense convolution window width
_SLAB = 1 << 22  # grid entries processed per slab
_INT64_SAFE = 1 << 62


class BlockHistogram:
    """Multiset of one block's values over the box, value -> multiplicity."""

    __slots__ = ("vals", "cnts", "big")

    def __init__(self, vals=None, cnts=None, big=None):
        self.vals = vals  # sorted int64 array (fast path)
        self.cnts = cnts
        self.big = big  # dict fallback when int64 could overflow

    @property
    def is_big(self) -> bool:
        return self.big is not None

    def total(self) -> int:
        if self.big is not None:
            return sum(self.big.values())
        return int(self.cnts.sum())

    def max_count(self) -> int:
        if self.big is not None:
            return max(self.big.values())
        return int(self.cnts.max())

    def count_of(self, v: int) -> int:
        if self.big is not None:
            return self.big.get(v, 0)
        i = int(np.searchsorted(self.vals, v))
        if i < len(self.vals) and int(self.vals[i]) == v:
            return int(self.cnts[i])
        return 0

    def items(self):
        if self.big is not None:
            return iter(self.big.items())
        return zip(self.vals.tolist(), self.cnts.tolist())

    def zero_count(self) -> int:
        """N_i: the number of triples where the block vanishes."""
        return self.count_of(0)

    def nonzero_items(self):
        """(n, count) pairs with the n = 0 mass left out, sorted by n."""
        return ((v, c) for v, c in sorted(self.items()) if v != 0)


def _merge_unique(v1, c1, v2, c2):
    v = np.concatenate([v1, v2])
    c = np.concatenate([c1, c2])
    order = np.argsort(v, kind="stable")
    v = v[order]
    c = c[order]
    starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
    return v[starts], np.add.reduceat(c, starts)


def _block_bounds(l, q, lo: int, hi: int) -> tuple[int, int]:
    m = max(abs(lo), abs(hi))
    linmax = sum(abs(c) for c in l) * m
    quadmax = sum(abs(c) for c in q) * m * m
    return linmax, quadmax


@functools.lru_cache(maxsize=16)
def value_histogram(l, q, box: str, P: int) -> BlockHistogram:
    """Histogram of L*Q over the box of radius P (exact multiplicities)."""
    if P < 1:
        raise DomainError("P must be at least 1")
    if P > P_CAP:
        raise ResourceLimitError(f"P={P} exceeds the enumeration cap {P_CAP}")
    lo, hi = box_interval(box, P)
    m = hi - lo + 1
    if m ** 3 > _GRID_CAP:
        raise ResourceLimitError(f"block grid {m}^3 exceeds the cap {_GRID_CAP}")
    linmax, quadmax = _block_bounds(l, q, lo, hi)
    if linmax * quadmax >= _INT64_SAFE:
        if m ** 3 > _GRID_CAP_BIG:
            raise ResourceLimitError(
                "coefficients too large for the int64 path at this P"
            )
        hist = Counter()
        a1, a2, a3 = l
        A1, A2, A3, B1, B2, B3 = q
        rng = range(lo, hi + 1)
        for x, y, z in itertools.product(rng, rng, rng):
            lin = a1 * x + a2 * y + a3 * z
            quad = (
                A1 * x * x + A2 * y * y + A3 * z * z
                + B1 * y * z + B2 * z * x + B3 * x * y
            )
            hist[lin * quad] += 1
        return BlockHistogram(big=dict(hist))
    r = np.arange(lo, hi + 1, dtype=np.int64)
    a1, a2, a3 = (int(c) for c in l)
    A1, A2, A3, B1, B2, B3 = (int(c) for c in q)
    slab = max(1, _SLAB // (m * m))
    vals = np.empty(0, dtype=np.int64)
    cnts = np.empty(0, dtype=np.int64)
    Y = r[None, :, None]
    Z = r[None, None, :]
    base = A2 * Y * Y + A3 * Z * Z + B1 * Y * Z
    liny = a2 * Y + a3 * Z
    for s in range(0, m, slab):
        X = r[s : s + slab][:, None, None]
        lin = a1 * X + liny
        quad = base + A1 * X * X + B2 * Z * X + B3 * X * Y
        u, c = np.unique((lin * quad).ravel(), return_counts=True)
        vals, cnts = _merge_unique(vals, cnts, u, c)
    return BlockHistogram(vals=vals, cnts=cnts)


def _dense(h: BlockHistogram):
    vmin = int(h.vals[0])
    width = int(h.vals[-1]) - vmin + 1
    if width > _DENSE_CAP:
        return None
    arr = np.zeros(width, dtype=np.int64)
    arr[h.vals - vmin] = h.cnts
    return vmin, arr


def _pair_count_dense(d1, d2, t: int) -> int:
    """Number of (v1, v2) with v1 + v2 = t, from dense count arrays."""
    o1, a1 = d1
    o2, a2 = d2
    lo = max(o1, t - (o2 + len(a2) - 1))
    hi = min(o1 + len(a1) - 1, t - o2)
    if lo > hi:
        return 0
    s1 = a1[lo - o1 : hi - o1 + 1]
    s2 = a2[t - hi - o2 : t - lo - o2 + 1][::-1]
    return int(np.dot(s1, s2))


def _pair_count_sparse(h1: BlockHistogram, h2: BlockHistogram, t: int) -> int:
    if h1.is_big or h2.is_big:
        small, other = (h1, h2) if h1.total() <= h2.total() else (h2, h1)
        return sum(c * other.count_of(t - v) for v, c in small.items())
    if t < int(h1.vals[0]) + int(h2.vals[0]) or t > int(h1.vals[-1]) + int(h2.vals[-1]):
        return 0
    w = t - h1.vals
    idx = np.searchsorted(h2.vals, w)
    idx[idx >= len(h2.vals)] = 0
    mask = h2.vals[idx] == w
    # Python-int accumulation: this path runs exactly when the int64 dot
    # bound could not be certified.
    c1 = h1.cnts[mask].tolist()
    c2 = h2.cnts[idx[mask]].tolist()
    return sum(a * b for a, b in zip(c1, c2))


def count_representations(form: CubicForm, N: int, P: int) -> int:
    """Exact number of box points with f(x) = N."""
    h1 = value_histogram(form.l1, form.q1, form.box, P)
    h2 = value_histogram(form.l2, form.q2, form.box, P)
    targets = [N - form.a7 * t ** 3 for t in box_range(form.box, P)]
    use_dense = not (h1.is_big or h2.is_big)
    if use_dense:
        # The dot accumulator is bounded by total1 * max_count2 which stays
        # under 2^62 whenever both grids respect the enumeration cap.
        if min(
            h1.total() * h2.max_count(), h2.total() * h1.max_count()
        ) >= _INT64_SAFE:
            use_dense = False
    if use_dense:
        d1 = _dense(h1)
        d2 = _dense(h2)
        use_dense = d1 is not None and d2 is not None
    if use_dense:
        return sum(_pair_count_dense(d1, d2, t) for t in targets)
    return sum(_pair_count_sparse(h1, h2, t) for t in targets)


def count_zeros(form: CubicForm, P: int) -> int:
    """R(0; P); defined for the symmetric box only."""
    if form.box != "sym":
        raise DomainError("zero counting is defined for the sym box")
    return count_representations(form, 0, P)


def lattice_space_count(space, box: str, P: int) -> int:
    """Exact number of box points on one linear space."""
    lo, hi = box_interval(box, P)
    return lattice.count_lattice_points_in_box(space.kernel_basis(), lo, hi)


def union_kernel_count(cov_sets, box: str, P: int) -> int:
    """Box points on a union of covector kernels, by inclusion-exclusion.

    Each subset intersection is the integer kernel of the stacked covectors,
    counted directly in the box; no point set is ever materialized.
    """
    lo, hi = box_interval(box, P)
    total = 0
    n = len(cov_sets)
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            rows = []
            for i in subset:
                rows.extend(cov_sets[i])
            basis = lattice.echelon_lattice_basis(lattice.integer_kernel(rows))
            cnt = lattice.count_lattice_points_in_box(basis, lo, hi)
            total += cnt if r % 2 == 1 else -cnt
    return total


def union_space_count(spaces, box: str, P: int) -> int:
    return union_kernel_count([sp.covectors for sp in spaces], box, P)


def chi(N: int, a7: int, box: str, P: int) -> int:
    """1 exactly when N = a7 * x^3 for some x in the box interval."""
    if a7 == 0 or N % a7 != 0:
        return 0
    x = icbrt_exact(N // a7)
    if x is None:
        return 0
    lo, hi = box_interval(box, P)
    return int(lo <= x <= hi)


@dataclass(frozen=True)
class MainTermReport:
    """Per-probe delta ratios and their fitted 1/P-extrapolated limits.

    delta1 = delta3 * delta4 holds exactly per probe (same N1, N2), and
    delta2 is defined as delta0 - delta1.
    """

    P_list: tuple[int, ...]
    rows: tuple[dict, ...]
    delta0: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float

    def to_dict(self) -> dict:
        return {
            "P_list": list(self.P_list),
            "rows": [dict(r) for r in self.rows],
            "delta0": self.delta0,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "delta3": self.delta3,
            "delta4": self.delta4,
        }


def delta_constants(form: CubicForm, P_list) -> MainTermReport:
    """Lattice main-term constants from exact counts at each probe P."""
    from . import fit
    from .forms import linear_spaces

    P_list = tuple(int(P) for P in P_list)
    if len(P_list) < 2 or any(b <= a for a, b in zip(P_list, P_list[1:])):
        raise DomainError("need at least two strictly increasing probe radii")
    spaces = linear_spaces(form)
    rows = []
    for P in P_list:
        n1 = value_histogram(form.l1, form.q1, form.box, P).count_of(0)
        n2 = value_histogram(form.l2, form.q2, form.box, P).count_of(0)
        union = union_space_count(spaces, form.box, P)
        r3 = n1 / P ** 2
        r4 = n2 / P ** 2
        r1 = n1 * n2 / P ** 4
        r0 = union / P ** 4
        rows.append({
            "P": P, "N1": n1, "N2": n2, "union": union,
            "delta3": r3, "delta4": r4, "delta1": r1,
            "delta0": r0, "delta2": r0 - r1,
        })
    d3, _ = fit.fit_offset_inverse(P_list, [r["delta3"] for r in rows])
    d4, _ = fit.fit_offset_inverse(P_list, [r["delta4"] for r in rows])
    d1, _ = fit.fit_offset_inverse(P_list, [r["delta1"] for r in rows])
    d0, _ = fit.fit_offset_inverse(P_list, [r["delta0"] for r in rows])
    return MainTermReport(P_list, tuple(rows), d0, d1, d0 - d1, d3, d4)

"""Complete exponential sums over residues and the singular series.

S_block(q, a) sums e(a * L*Q / q) over a full residue cube; the cube-term
sum runs over one residue line.  The normalized term

    S(q; N) = q^-7 * sum_{gcd(a,q)=1} S1 S2 S3 e(-aN/q)

is multiplicative in q, so partial series sums are assembled from prime
powers with a smallest-prime-factor sieve.  Everything here is single
threaded and summed with math.fsum, so results are bit-stable.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import content, primes_up_to
from .errors import DomainError, ResourceLimitError
from .forms import CubicForm

MOD_CAP = 4096
_SLAB = 1 << 22


@functools.lru_cache(maxsize=64)
def _phase_table(m: int):
    ang = np.arange(m, dtype=np.float64) * (2.0 * math.pi / m)
    return np.cos(ang), np.sin(ang)


@functools.lru_cache(maxsize=256)
def mod_histogram(l, q, m: int) -> np.ndarray:
    """Counts of L*Q mod m over the full residue cube (x, y, z mod m)."""
    if m < 1:
        raise DomainError("modulus must be positive")
    if m > MOD_CAP:
        raise ResourceLimitError(f"modulus {m} exceeds the cap {MOD_CAP}")
    a1, a2, a3 = (int(v) % m for v in l)
    A1, A2, A3, B1, B2, B3 = (int(v) % m for v in q)
    r = np.arange(m, dtype=np.int64)
    Y = r[None, :, None]
    Z = r[None, None, :]
    # Coefficients are reduced first, so every int64 product stays far
    # below overflow for m <= 4096.
    liny = (a2 * Y + a3 * Z) % m
    base = (A2 * Y * Y + A3 * Z * Z + B1 * Y * Z) % m
    counts = np.zeros(m, dtype=np.int64)
    slab = max(1, _SLAB // (m * m))
    for s in range(0, m, slab):
        X = r[s : s + slab][:, None, None]
        lin = (a1 * X + liny) % m
        quad = (base + A1 * X * X + B2 * Z * X + B3 * X * Y) % m
        counts += np.bincount(((lin * quad) % m).ravel(), minlength=m)
    return counts


def _gather(hist: np.ndarray, m: int, mult: int) -> complex:
    idx = (mult % m) * np.arange(m, dtype=np.int64) % m
    cos_t, sin_t = _phase_table(m)
    h = hist.astype(np.float64)
    re = math.fsum((h * cos_t[idx]).tolist())
    im = math.fsum((h * sin_t[idx]).tolist())
    return complex(re, im)


def block_sum_any(l, q, modulus: int, mult: int) -> complex:
    """Sum of e(mult * L*Q / modulus) over the full residue cube.

    The block content g is pulled out first: with c0 = gcd(g, modulus) the
    sum collapses to c0^3 copies of the primitive-block sum at modulus/c0.
    No coprimality is required of mult (inner reduced sums need that).
    """
    l = tuple(int(v) for v in l)
    q = tuple(int(v) for v in q)
    cl = content(l)
    cq = content(q)
    g = cl * cq
    c0 = math.gcd(g, modulus)
    mp = modulus // c0
    if mp == 1:
        return complex(modulus ** 3, 0.0)
    lp = tuple(v // cl for v in l)
    qp = tuple(v // cq for v in q)
    hist = mod_histogram(lp, qp, mp)
    mult2 = (mult * (g // c0)) % mp
    return (c0 ** 3) * _gather(hist, mp, mult2)


def s_block(l, q, modulus: int, a: int) -> complex:
    """S_i(q, a) for one block; a must be a unit mod q."""
    if math.gcd(a, modulus) != 1:
        raise DomainError("a must be coprime to the modulus")
    return block_sum_any(l, q, modulus, a)


@functools.lru_cache(maxsize=256)
def _cube_histogram(a7: int, m: int) -> np.ndarray:
    x = np.arange(m, dtype=np.int64)
    v = (a7 % m) * ((x * x % m) * x % m) % m
    return np.bincount(v, minlength=m)


def s_cube(a7: int, modulus: int, mult: int) -> complex:
    """Sum of e(mult * a7 * x^3 / modulus) over one residue line."""
    if modulus == 1:
        return complex(1.0, 0.0)
    if modulus > MOD_CAP:
        raise ResourceLimitError(f"modulus {modulus} exceeds the cap {MOD_CAP}")
    return _gather(_cube_histogram(a7, modulus), modulus, mult)


def s3(q: int, a: int, a7: int) -> complex:
    """S_3(q, a) for the cube term; a must be a unit mod q."""
    if q < 1:
        raise DomainError("modulus must be positive")
    if math.gcd(a, q) != 1:
        raise DomainError("a must be coprime to the modulus")
    return s_cube(a7, q, a)


@functools.lru_cache(maxsize=4096)
def _unit_products(a, q1, q2, q: int):
    """[(a_unit, S1*S2*S3 / q^7)] for one modulus, reused across all N."""
    l1, l2, a7 = a[0:3], a[3:6], a[6]
    scale = float(q) ** -7
    out = []
    for u in range(1, q + 1):
        if math.gcd(u, q) != 1:
            continue
        t = (
            block_sum_any(l1, q1, q, u)
            * block_sum_any(l2, q2, q, u)
            * s_cube(a7, q, u)
            * scale
        )
        out.append((u, t))
    return tuple(out)


def singular_term(form: CubicForm, q: int, N: int) -> float:
    """S(q; N): one normalized term of the singular series (real part)."""
    if q == 1:
        return 1.0
    cos_t, sin_t = _phase_table(q)
    nq = N % q
    re = []
    for u, t in _unit_products(form.a, form.q1, form.q2, q):
        k = (-u * nq) % q
        re.append(t.real * cos_t[k] - t.imag * sin_t[k])
    return math.fsum(re)


@dataclass(frozen=True)
class SeriesEstimate:
    """Truncated singular series with per-q terms and tail indicators."""

    value: float
    Q: int
    terms: tuple[float, ...]  # terms[q] = S(q; N); terms[0] unused
    tail_indicator: tuple[tuple[int, float], ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "Q": self.Q,
            "tail": [[q, t] for q, t in self.tail_indicator],
        }


def singular_series(form: CubicForm, N: int, Qmax: int) -> SeriesEstimate:
    """Partial singular series over q <= Qmax, with internal tail markers.

    Tail indicators report |series(Q') - series(Q'/2)| at Q' = Qmax/4,
    Qmax/2, Qmax, a direct view of how fast the partial sums settle.
    """
    terms = singular_series_terms(form, N, Qmax)
    prefix = [0.0]
    run = []
    for q in range(1, Qmax + 1):
        run.append(terms[q])
        prefix.append(math.fsum(run))
    tails = []
    for qp in (Qmax // 4, Qmax // 2, Qmax):
        if qp >= 2:
            tails.append((qp, abs(prefix[qp] - prefix[qp // 2])))
    return SeriesEstimate(prefix[Qmax], Qmax, tuple(terms), tuple(tails))


def singular_series_terms(form: CubicForm, N: int, Qmax: int) -> list[float]:
    """terms[q] = S(q; N), with terms[0] unused; multiplicative assembly."""
    if Qmax < 1:
        raise DomainError("Qmax must be at least 1")
    if Qmax > MOD_CAP:
        raise ResourceLimitError(f"Qmax {Qmax} exceeds the cap {MOD_CAP}")
    terms = [0.0] * (Qmax + 1)
    terms[1] = 1.0
    spf = _smallest_prime_factors(Qmax)
    for q in range(2, Qmax + 1):
        p = spf[q]
        pk = p
        m = q // p
        while m % p == 0:
            pk *= p
            m //= p
        if m == 1:
            terms[q] = singular_term(form, q, N)
        else:
            terms[q] = terms[m] * terms[pk]
    return terms


@functools.lru_cache(maxsize=8)
def _smallest_prime_factors(n: int) -> tuple:
    spf = list(range(n + 1))
    i = 2
    while i * i <= n:
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    return tuple(spf)


def prime_power_profile(form: CubicForm, N: int, Qmax: int) -> list[dict]:
    """Per-prime view: the S(p^k; N) terms actually entering the series."""
    terms = singular_series_terms(form, N, Qmax)
    out = []
    for p in primes_up_to(Qmax):
        row = []
        pk = p
        while pk <= Qmax:
            row.append(terms[pk])
            pk *= p
        out.append({"p": p, "terms": row})
    return out


def series_tail_profile(form: CubicForm, N: int, q_points) -> list[tuple[int, float]]:
    """[(Q, |series(2Q) - series(Q)|)] for the requested checkpoints."""
    qmax = 2 * max(q_points)
    terms = singular_series_terms(form, N, qmax)
    prefix = [0.0] * (qmax + 1)
    run = []
    for q in range(1, qmax + 1):
        run.append(terms[q])
        prefix[q] = math.fsum(run)
    return [(Q, abs(prefix[2 * Q] - prefix[Q])) for Q in q_points]

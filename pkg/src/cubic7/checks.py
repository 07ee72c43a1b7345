"""Self-contained invariant suite behind the `verify` command.

Every check runs at desk scale (a few seconds at most) and returns a
CheckResult instead of raising: a failed invariant is a result, not an
error.  Exceptions inside a check are captured the same way.
"""

from __future__ import annotations

import dataclasses
import json
import math
import random
from dataclasses import dataclass

import numpy as np

from .counting import (
    count_representations,
    union_space_count,
    value_histogram,
)
from .density import density_ladder, slab_volume
from .errors import DegenerateBlockError, InvalidFormError
from .expsums import s_block, series_tail_profile, singular_series
from .forms import (
    CubicForm,
    adjoint_matrix,
    block_invariants,
    block_value,
    box_range,
    form_from_dict,
    form_to_dict,
    linear_spaces,
    transform_block,
)
from .local import block_local_case, local_report
from .audits import (
    divisor_slice_count,
    power_congruence_count,
    special_surface_count,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _rand_block(rng: random.Random, bound: int = 6):
    l = tuple(rng.randint(-bound, bound) for _ in range(3))
    q = tuple(rng.randint(-bound, bound) for _ in range(6))
    return l, q


def _check_rejects_invalid(form: CubicForm) -> CheckResult:
    """Structured errors for a7 = 0 and for a degenerate block."""
    try:
        CubicForm((1, 0, 0, 1, 0, 0, 0), form.q1, form.q2, "sym")
        return CheckResult("rejects-invalid-input", False, "a7 = 0 accepted")
    except InvalidFormError:
        pass
    # L = x1, Q = x1*x2 has Delta = 0 and vanishing primed data: degenerate.
    try:
        transform_block((1, 0, 0), (0, 0, 0, 0, 0, 1))
        return CheckResult("rejects-invalid-input", False,
                           "degenerate block transformed")
    except DegenerateBlockError as exc:
        return CheckResult("rejects-invalid-input", True,
                           f"a7=0 and degenerate block both rejected "
                           f"(block index {exc.block_index})")


def _check_discriminant_identity(form: CubicForm) -> CheckResult:
    rng = random.Random(11)
    worst = 0
    for _ in range(200):
        l, q = _rand_block(rng)
        if all(c == 0 for c in l):
            continue
        try:
            inv = block_invariants(l, q)
        except DegenerateBlockError:
            continue
        Ap, Bp, Cp, _, _ = inv.primed
        piv = l[inv.order[0]]
        lhs = Bp * Bp - 4 * Ap * Cp
        rhs = piv * piv * inv.delta
        if lhs != rhs:
            return CheckResult("discriminant-identity", False,
                               f"B'^2-4A'C'={lhs} vs a^2*Delta={rhs}")
        worst = max(worst, abs(lhs))
    return CheckResult("discriminant-identity", True,
                       "200 random blocks, exact equality")


def _check_adjoint_adjugate(form: CubicForm) -> CheckResult:
    rng = random.Random(13)
    for _ in range(100):
        _, q = _rand_block(rng)
        A1, A2, A3, B1, B2, B3 = q
        g = [[2 * A1, B3, B2],
             [B3, 2 * A2, B1],
             [B2, B1, 2 * A3]]

        def minor(i, j):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            return (g[r[0]][c[0]] * g[r[1]][c[1]]
                    - g[r[0]][c[1]] * g[r[1]][c[0]])

        adj = [[(-1) ** (i + j) * minor(j, i) for j in range(3)]
               for i in range(3)]
        M = adjoint_matrix(q)
        for i in range(3):
            for j in range(3):
                if M[i][j] != -adj[i][j]:
                    return CheckResult(
                        "adjoint-vs-adjugate", False,
                        f"entry ({i},{j}): {M[i][j]} vs {-adj[i][j]}")
    return CheckResult("adjoint-vs-adjugate", True,
                       "matches negated adjugate of the Gram matrix, "
                       "100 random blocks")


def _check_normal_form(form: CubicForm) -> CheckResult:
    rng = random.Random(17)
    done = 0
    branches = set()
    while done < 60:
        l, q = _rand_block(rng)
        if all(c == 0 for c in l):
            continue
        try:
            nf = transform_block(l, q)
        except DegenerateBlockError:
            continue
        if nf.scale == 0:
            return CheckResult("normal-form-identity", False, "zero scale")
        branches.add(nf.branch)
        done += 1
    # transform_block self-checks the polynomial identity on a grid.
    return CheckResult("normal-form-identity", True,
                       f"60 random blocks, branches seen: {sorted(branches)}")


def _check_spaces(form: CubicForm) -> CheckResult:
    spaces = linear_spaces(form)
    rng = random.Random(19)
    for sp in spaces:
        basis = sp.kernel_basis()
        if len(basis) != 4:
            return CheckResult("spaces-vanish", False,
                               f"space {sp.tag}: rank {len(basis)} != 4")
        for _ in range(25):
            c = [rng.randint(-4, 4) for _ in range(4)]
            x = tuple(sum(c[i] * basis[i][k] for i in range(4))
                      for k in range(7))
            if form.value(x) != 0:
                return CheckResult("spaces-vanish", False,
                                   f"space {sp.tag}: f(x) != 0 at {x}")
    return CheckResult("spaces-vanish", True,
                       f"{len(spaces)} spaces, rank 4, f vanishes on each")


def _check_histogram(form: CubicForm) -> CheckResult:
    P = 6
    m = len(box_range(form.box, P))
    for l, q in form.blocks():
        h = value_histogram(l, q, form.box, P)
        if h.total() != m ** 3:
            return CheckResult("histogram-mass", False,
                               f"mass {h.total()} != {m ** 3}")
        if form.box == "sym":
            for v, c in h.items():
                if h.count_of(-v) != c:
                    return CheckResult(
                        "histogram-mass", False,
                        f"parity broken at value {v}: {c} vs {h.count_of(-v)}")
    return CheckResult("histogram-mass", True,
                       f"block mass = {m}^3 and sym parity hold at P = {P}")


def _enumerate_counts(form: CubicForm, P: int) -> dict:
    pts = np.array(box_range(form.box, P), dtype=np.int64)
    grids = np.meshgrid(*([pts] * 7), indexing="ij")
    X = [g.reshape(-1) for g in grids]
    a = form.a
    L1 = a[0] * X[0] + a[1] * X[1] + a[2] * X[2]
    L2 = a[3] * X[3] + a[4] * X[4] + a[5] * X[5]

    def quad(q, x, y, z):
        A1, A2, A3, B1, B2, B3 = q
        return (A1 * x * x + A2 * y * y + A3 * z * z
                + B1 * y * z + B2 * x * z + B3 * x * y)

    vals = (L1 * quad(form.q1, X[0], X[1], X[2])
            + L2 * quad(form.q2, X[3], X[4], X[5])
            + a[6] * X[6] ** 3)
    uniq, cnt = np.unique(vals, return_counts=True)
    return {int(v): int(c) for v, c in zip(uniq, cnt)}


def _check_convolution(form: CubicForm) -> CheckResult:
    P = 2
    table = _enumerate_counts(form, P)
    for N in range(-6, 7):
        got = count_representations(form, N, P)
        want = table.get(N, 0)
        if got != want:
            return CheckResult("convolution-vs-enumeration", False,
                               f"N={N}: {got} vs {want}")
    return CheckResult("convolution-vs-enumeration", True,
                       "P = 2, N in [-6, 6], exact agreement")


def _check_union_membership(form: CubicForm) -> CheckResult:
    if form.box != "sym":
        base = dataclasses.replace(form, box="sym")
    else:
        base = form
    P = 2
    spaces = linear_spaces(base)
    got = union_space_count(spaces, "sym", P)
    pts = np.arange(-P, P + 1, dtype=np.int64)
    grids = np.meshgrid(*([pts] * 7), indexing="ij")
    X = np.stack([g.reshape(-1) for g in grids])
    on_union = np.zeros(X.shape[1], dtype=bool)
    for sp in spaces:
        on_sp = np.ones(X.shape[1], dtype=bool)
        for cov in sp.covectors:
            on_sp &= (np.tensordot(np.array(cov, dtype=np.int64), X, 1) == 0)
        on_union |= on_sp
    want = int(on_union.sum())
    if got != want:
        return CheckResult("union-count-vs-membership", False,
                           f"{got} vs brute {want}")
    return CheckResult("union-count-vs-membership", True,
                       f"P = 2 membership scan agrees: {want} points")


def _naive_block_sum(l, q, modulus: int, a: int) -> complex:
    tot = 0.0 + 0.0j
    w = 2.0 * math.pi / modulus
    for x in range(modulus):
        for y in range(modulus):
            for z in range(modulus):
                v = block_value(l, q, x, y, z)
                ang = w * ((a * v) % modulus)
                tot += complex(math.cos(ang), math.sin(ang))
    return tot


def _check_block_sum_naive(form: CubicForm) -> CheckResult:
    worst = 0.0
    for modulus in (2, 3, 4, 5, 7, 9):
        for l, q in form.blocks():
            for a in range(1, modulus):
                if math.gcd(a, modulus) != 1:
                    continue
                got = s_block(l, q, modulus, a)
                want = _naive_block_sum(l, q, modulus, a)
                worst = max(worst, abs(got - want) / modulus ** 3)
    if worst > 1e-10:
        return CheckResult("block-sum-vs-naive", False,
                           f"scaled error {worst:.2e}")
    return CheckResult("block-sum-vs-naive", True,
                       f"moduli up to 9, scaled error {worst:.2e}")


def _check_prime_law(form: CubicForm) -> CheckResult:
    checked = []
    for l, q in form.blocks():
        inv = block_invariants(l, q)
        for p in (3, 5, 7):
            if inv.frakD % p == 0:
                continue
            for a in range(1, p):
                val = s_block(l, q, p, a)
                if abs(val - p * p) > 1e-6 * p * p:
                    return CheckResult("block-sum-prime-law", False,
                                       f"p={p}, a={a}: {val} != p^2")
            checked.append(p)
    if not checked:
        return CheckResult("block-sum-prime-law", True,
                           "no odd prime coprime to the block invariants "
                           "in range; nothing to test")
    return CheckResult("block-sum-prime-law", True,
                       f"S(p, a) = p^2 for p in {sorted(set(checked))}")


def _check_multiplicativity(form: CubicForm) -> CheckResult:
    from .expsums import singular_term
    worst = 0.0
    pairs = [(3, 4), (4, 5), (3, 5), (5, 8), (7, 9)]
    for N in (0, 1, 2):
        for q1, q2 in pairs:
            lhs = singular_term(form, q1 * q2, N)
            rhs = singular_term(form, q1, N) * singular_term(form, q2, N)
            worst = max(worst, abs(lhs - rhs))
    if worst > 1e-8:
        return CheckResult("singular-term-multiplicative", False,
                           f"max |S(q1 q2) - S(q1) S(q2)| = {worst:.2e}")
    return CheckResult("singular-term-multiplicative", True,
                       f"coprime pairs, max deviation {worst:.2e}")


def _check_series_tail(form: CubicForm) -> CheckResult:
    prof = series_tail_profile(form, 0, (25, 50, 100))
    qs = [p[0] for p in prof]
    tails = [max(p[1], 1e-15) for p in prof]
    slope = np.polyfit(np.log(qs), np.log(tails), 1)[0]
    if not (slope <= -0.2 or tails[-1] < 1e-12):
        return CheckResult("series-tail-decay", False,
                           f"fitted decay {slope:.3f} > -0.2, tails {tails}")
    return CheckResult("series-tail-decay", True,
                       f"fitted tail decay {slope:.3f}")


def _random_unimodular(rng: random.Random):
    while True:
        U = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        d = (U[0][0] * (U[1][1] * U[2][2] - U[1][2] * U[2][1])
             - U[0][1] * (U[1][0] * U[2][2] - U[1][2] * U[2][0])
             + U[0][2] * (U[1][0] * U[2][1] - U[1][1] * U[2][0]))
        if d in (1, -1):
            return U


def _apply_unimodular(l, q, U):
    # x -> U x: L(Ux) and Q(Ux), coefficients pulled out exactly.
    lU = tuple(sum(l[i] * U[i][j] for i in range(3)) for j in range(3))
    A1, A2, A3, B1, B2, B3 = q

    def qval(x, y, z):
        return (A1 * x * x + A2 * y * y + A3 * z * z
                + B1 * y * z + B2 * z * x + B3 * x * y)

    cols = [tuple(U[i][j] for i in range(3)) for j in range(3)]
    AU = tuple(qval(*cols[j]) for j in range(3))

    def bil(u, v):
        return (2 * A1 * u[0] * v[0] + 2 * A2 * u[1] * v[1]
                + 2 * A3 * u[2] * v[2]
                + B1 * (u[1] * v[2] + u[2] * v[1])
                + B2 * (u[0] * v[2] + u[2] * v[0])
                + B3 * (u[0] * v[1] + u[1] * v[0]))

    BU = (bil(cols[1], cols[2]), bil(cols[0], cols[2]), bil(cols[0], cols[1]))
    return lU, (*AU, *BU)


def _check_gamma_invariance(form: CubicForm) -> CheckResult:
    rng = random.Random(23)
    # Known representatives of the two special residue classes.
    cases = [
        (2, (1, 0, 0), (0, 1, 4, 4, 0, 1)),   # class of x^2 y + x y^2
        (3, (1, 0, 0), (2, 0, 1, 0, 0, 6)),   # class of x^3 + 2 x y^2
    ]
    for p, l, q in cases:
        base = block_local_case(l, q, p)
        for _ in range(20):
            U = _random_unimodular(rng)
            lU, qU = _apply_unimodular(l, q, U)
            got = block_local_case(lU, qU, p)
            if (got.case, got.gamma, got.gamma_prime) != (
                    base.case, base.gamma, base.gamma_prime):
                return CheckResult(
                    "local-case-unimodular-invariance", False,
                    f"p={p}: case {base.case} -> {got.case} under {U}")
    return CheckResult("local-case-unimodular-invariance", True,
                       "cases ii and iii stable under 20 random unimodular "
                       "changes each")


def _check_gamma_assembly(form: CubicForm) -> CheckResult:
    from .local import local_data
    data = local_data(form)
    for row in data.primes:
        g1 = [b.gamma for b in row.blocks]
        g1p = [b.gamma_prime for b in row.blocks]
        j = row.j
        gp = min(g1p[0] + j[0], g1p[1] + j[1])
        bump = 2 * gp + (1 if row.prime == 3 else -1)
        g = max(0, min(g1[0] + row.nu0, g1[1] + row.nu0, bump))
        if (row.gamma, row.gamma_prime) != (g, gp):
            return CheckResult("gamma-assembly", False,
                               f"p={row.prime}: ({row.gamma},{row.gamma_prime})"
                               f" != ({g},{gp})")
    return CheckResult("gamma-assembly", True,
                       f"{len(data.primes)} primes recombine consistently "
                       f"(modulus {data.modulus})")


def _check_solvable_series(form: CubicForm) -> CheckResult:
    rep = local_report(form, 1)
    if rep["verdict"] != "solvable-everywhere":
        return CheckResult("solvable-series-floor", True,
                           "N = 1 not solvable everywhere; floor not claimed")
    val = singular_series(form, 1, 120).value
    if val < 0.05:
        return CheckResult("solvable-series-floor", False,
                           f"S(1, 120) = {val:.4f} < 0.05 despite solvability")
    return CheckResult("solvable-series-floor", True,
                       f"S(1, 120) = {val:.4f} >= 0.05")


def _check_integral_exact(form: CubicForm) -> CheckResult:
    # With a slab wide enough to contain every sampled value the estimate
    # collapses to vol / (2 eps) exactly, with zero standard error.
    probe = density_ladder(form, 0.0, 1.0, 10_000, seed=5)
    span = max(abs(probe.f_min), abs(probe.f_max), 1.0) * 1.25
    est = slab_volume(form, 0.0, span, 10_000, seed=5)
    vol = 128.0 if form.box == "sym" else 1.0
    want = vol / (2.0 * span)
    if est.stderr != 0.0 or abs(est.value - want) > 1e-12 * want:
        return CheckResult("integral-full-slab", False,
                           f"value {est.value} vs {want}, stderr {est.stderr}")
    return CheckResult("integral-full-slab", True,
                       "slab covering all samples gives vol/(2 eps) exactly")


def _check_density_determinism(form: CubicForm) -> CheckResult:
    a = density_ladder(form, 1.0, 0.5, 20_000, seed=9, threads=1)
    b = density_ladder(form, 1.0, 0.5, 20_000, seed=9, threads=2)
    ja = json.dumps(a.to_dict(), sort_keys=True)
    jb = json.dumps(b.to_dict(), sort_keys=True)
    if ja != jb:
        return CheckResult("density-thread-determinism", False,
                           "1-thread and 2-thread runs differ")
    return CheckResult("density-thread-determinism", True,
                       "byte-identical across thread counts")


def _check_power_partition(form: CubicForm) -> CheckResult:
    for k, q in ((2, 8), (2, 12), (3, 30)):
        tot = sum(power_congruence_count(k, q, m) for m in range(q))
        if tot != q:
            return CheckResult("power-count-partition", False,
                               f"k={k}, q={q}: sum {tot} != q")
    return CheckResult("power-count-partition", True,
                       "residue counts partition Z/q for sample (k, q)")


def _check_surface_flip(form: CubicForm) -> CheckResult:
    for A in (1, 2):
        for N in (0, 1, 5, 9):
            for P in (3, 6):
                a = special_surface_count(A, N, P)
                b = special_surface_count(A, -N, P)
                if a != b:
                    return CheckResult("surface-flip-symmetry", False,
                                       f"A={A}, N={N}, P={P}: {a} vs {b}")
    return CheckResult("surface-flip-symmetry", True,
                       "count invariant under N -> -N (sign flip bijection)")


def _check_divisor_identity(form: CubicForm) -> CheckResult:
    l, q = (1, 0, 0), (0, 0, 1, 0, 0, 1)  # x (x y + z^2)
    P = 8
    h = value_histogram(l, q, "sym", P)
    for n in (1, 2, 3, 4, 6, 8, -5, -12):
        direct = h.count_of(n)
        acc = 0
        for x in range(1, P + 1):
            if n % x == 0:
                acc += divisor_slice_count(n, x, P)
                acc += divisor_slice_count(n, -x, P)
        if acc != direct:
            return CheckResult("divisor-slice-identity", False,
                               f"n={n}: sliced {acc} vs counted {direct}")
    return CheckResult("divisor-slice-identity", True,
                       "c(n) equals the divisor-sliced count at P = 8")


def _check_roundtrip(form: CubicForm) -> CheckResult:
    d = form_to_dict(form)
    back = form_from_dict(json.loads(json.dumps(d)))
    if back != form:
        return CheckResult("form-json-roundtrip", False, "roundtrip changed form")
    return CheckResult("form-json-roundtrip", True,
                       "form survives a JSON round trip")


_CHECKS = (
    _check_rejects_invalid,
    _check_discriminant_identity,
    _check_adjoint_adjugate,
    _check_normal_form,
    _check_spaces,
    _check_histogram,
    _check_convolution,
    _check_union_membership,
    _check_block_sum_naive,
    _check_prime_law,
    _check_multiplicativity,
    _check_series_tail,
    _check_gamma_invariance,
    _check_gamma_assembly,
    _check_solvable_series,
    _check_integral_exact,
    _check_density_determinism,
    _check_power_partition,
    _check_surface_flip,
    _check_divisor_identity,
    _check_roundtrip,
)


def verify(form: CubicForm) -> list[CheckResult]:
    """Run every desk-scale invariant check; failures are results."""
    out = []
    for fn in _CHECKS:
        try:
            out.append(fn(form))
        except Exception as exc:  # a crashed check is a failed check
            name = fn.__name__.removeprefix("_check_").replace("_", "-")
            out.append(CheckResult(name, False,
                                   f"{type(exc).__name__}: {exc}"))
    return out

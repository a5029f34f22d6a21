"""Grid runner for every closed-form identity, checked against exact oracles."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import linalg, matrices, specials, spectrum, stationary
from .words import RateSystem, word_index, words_of_length

SKIN_DEEP_X = (Fraction(1, 3), Fraction(1), Fraction(3))

CHECK_NAMES = (
    "stationarity",
    "kernel_match",
    "normalization",
    "suffix_marginal",
    "block_product",
    "partition_function",
    "last_k_correlation",
    "block_structure",
    "kirchhoff_b_equality",
    "spectrum",
    "charpoly_recursion",
    "block_charpoly",
    "kn_inverse",
    "bernoulli_product",
    "bernoulli_uncorrelated",
    "skin_deep_measure",
    "uniform_density",
    "two_point",
    "length_independence",
    "shift_invariance",
    "endpoint_alpha",
    "alpha_closed_form",
)


@dataclass
class CheckResult:
    check: str
    n: int
    L: int
    point: str
    passed: bool
    detail: str = ""


def degenerate_rates(n: int, L: int) -> RateSystem:
    """All rates 1: every nonzero eigenvalue collapses onto -n."""
    return RateSystem(n, L, {(a, k): Fraction(1) for a in range(1, n + 1) for k in range(1, L + 1)})


def partially_degenerate_rates(n: int, L: int) -> RateSystem:
    """Symmetric depth-one rates and letter-independent deeper rates."""
    return RateSystem(n, L, {(a, k): Fraction(1) if k == 1 else Fraction(k + 1, 2) for a in range(1, n + 1) for k in range(1, L + 1)})


def rate_checks(R: RateSystem, label: str, cap: int) -> list[CheckResult]:
    n, L = R.n, R.L
    out: list[CheckResult] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        out.append(CheckResult(name, n, L, label, bool(ok), detail))

    mu = stationary.stationary_vector(R)
    vec = list(mu.values())
    M = matrices.transition_matrix(R)
    G = matrices.kirchhoff(M)
    Delta = matrices.delta_matrix(R)

    record("stationarity", M.matvec(vec) == Delta.matvec(vec))
    record("kernel_match", linalg.null_space_vector(G) == vec)
    record("normalization", sum(vec) == 1)
    if L >= 2:
        ok = all(
            sum(mu[(a,) + u] for a in R.letters()) == stationary.mu_bar(u, R)
            for u in words_of_length(n, L - 1)
        )
        record("suffix_marginal", ok)
    record("block_product", all(stationary.block_product(w, R) == p for w, p in mu.items()))

    pf = stationary.partition_function(R)
    record(
        "partition_function",
        pf.matches,
        f"formula={pf.formula} short_range={pf.formula_short_range} lcm={pf.denominator_lcm}",
    )

    ok = True
    for k in range(1, L + 1):
        for suffix in words_of_length(n, k):
            query = [(L - k + 1 + i, a) for i, a in enumerate(suffix)]
            ok &= stationary.correlation(query, R, mu) == stationary.last_k_correlation(suffix, R)
    record("last_k_correlation", ok)

    dec = matrices.block_decomposition(R)
    record("block_structure", dec.assemble_transition() == M and dec.assemble_kirchhoff() == G)
    if L >= 2:
        lower = R.truncate(L - 1)
        M_lower = matrices.transition_matrix(lower)
        B = dec.B_sum
        diff = B - M_lower
        expected = {}
        for a in R.letters():
            i = word_index((a,) * (L - 1), n)
            d = R.x(a, L) - R.x(a, L - 1)
            if d:
                expected[(i, i)] = d
        ok = diff.entries == expected and matrices.kirchhoff(B) == matrices.kirchhoff(M_lower)
        ok &= B == matrices.b_matrix_direct(R)
        record("kirchhoff_b_equality", ok)

    if n**L <= cap:
        rep = spectrum.spectrum_verify(R, cap=cap)
        record("spectrum", rep.matches, f"degree {rep.degree_check[0]} vs {rep.degree_check[1]}")
        if rep.recursion is not None:
            record("charpoly_recursion", rep.recursion)
    return out


def bernoulli_checks(n: int, L: int, rng: random.Random, label: str) -> list[CheckResult]:
    spec = specials.BernoulliSpec(tuple(Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n)), L)
    R = specials.bernoulli_rates(spec)
    mu = stationary.stationary_vector(R)
    product = all(p == specials.bernoulli_measure(w, spec) for w, p in mu.items())
    uncorrelated = True
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            for a in R.letters():
                for b in R.letters():
                    joint = stationary.correlation([(i, a), (j, b)], R, mu)
                    single = stationary.correlation([(i, a)], R, mu) * stationary.correlation([(j, b)], R, mu)
                    uncorrelated &= joint == single
    return [
        CheckResult("bernoulli_product", n, L, label, product),
        CheckResult("bernoulli_uncorrelated", n, L, label, uncorrelated),
    ]


def skin_deep_checks(n: int, L: int, x: Fraction) -> list[CheckResult]:
    label = f"skin-deep x={x}"
    R = specials.skin_deep_rates(specials.SkinDeepSpec(x, n, L))
    mu = stationary.stationary_vector(R)
    out = []

    def record(name, ok, detail=""):
        out.append(CheckResult(name, n, L, label, bool(ok), detail))

    record("skin_deep_measure", all(specials.skin_deep_mu_bar(w, x, n) == p for w, p in mu.items()))
    record(
        "uniform_density",
        all(stationary.correlation([(i, a)], R, mu) == Fraction(1, n) for i in range(1, L + 1) for a in R.letters()),
    )
    two_point = length_ok = shift_ok = endpoint_ok = True
    R_short = specials.skin_deep_rates(specials.SkinDeepSpec(x, n, L - 1)) if L >= 3 else None
    shorter = stationary.stationary_vector(R_short) if R_short is not None else None
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            for a in R.letters():
                for b in R.letters():
                    value = stationary.correlation([(i, a), (j, b)], R, mu)
                    two_point &= value == specials.two_point(n, x, i, j, a == b)
                    if shorter is not None and j <= L - 1:
                        length_ok &= value == stationary.correlation([(i, a), (j, b)], R_short, shorter)
                    if j < L:
                        shift_ok &= value == stationary.correlation([(i + 1, a), (j + 1, b)], R, mu)
    if L >= 2:
        for a in R.letters():
            for b in R.letters():
                endpoint_ok &= stationary.correlation([(1, a), (L, b)], R, mu) == specials.endpoint_correlation(n, x, L, a, b)
    record("two_point", two_point)
    if L >= 3:
        record("length_independence", length_ok)
    if L >= 2:
        record("shift_invariance", shift_ok)
        record("endpoint_alpha", endpoint_ok)
    return out


def algebra_checks(n: int, rng: random.Random) -> list[CheckResult]:
    out = []
    ok = True
    for k in range(1, 7):
        power = specials.transfer_matrix_power(n, k)
        for diagonal in (True, False):
            closed = specials.alpha_poly(n, k, diagonal)
            entry = power[0][0] if diagonal else power[0][1]
            ok &= closed == entry == specials.alpha_by_enumeration(n, k, 1, 1 if diagonal else 2)
    out.append(CheckResult("alpha_closed_form", n, 0, "k<=6", ok))

    ok = True
    for _ in range(5):
        m, k = rng.randint(1, 3), rng.randint(1, 3)
        P = [[[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k)] for _ in range(k)] for _ in range(m)]
        Q = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k)] for _ in range(k)]
        ok &= linalg.blockm_charpoly_check(P, Q)
    out.append(CheckResult("block_charpoly", n, 0, "random", ok))

    ok = True
    for size in range(1, 7):
        s = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if s + size * t == 0:
            t += 1
        ok &= linalg.matmul(linalg.kn_inverse(s, t, size), linalg.kn_matrix(s, t, size)) == linalg.identity(size)
    out.append(CheckResult("kn_inverse", n, 0, "random", ok))
    return out


def _grid_task(args) -> list[CheckResult]:
    kind, n, L, seed, extra, cap = args
    rng = random.Random(f"{seed}:{kind}:{n}:{L}:{extra}")
    if kind == "random":
        return rate_checks(RateSystem.random(n, L, rng), f"random#{extra}", cap)
    if kind == "degenerate":
        return rate_checks(degenerate_rates(n, L), "degenerate", cap)
    if kind == "partial":
        return rate_checks(partially_degenerate_rates(n, L), "coincident", cap)
    if kind == "bernoulli":
        return bernoulli_checks(n, L, rng, "bernoulli")
    if kind == "skin":
        return skin_deep_checks(n, L, extra)
    if kind == "algebra":
        return algebra_checks(n, rng)
    raise ValueError(kind)


def run_grid(
    max_n: int = 3,
    max_L: int = 4,
    points: int = 3,
    seed: int = 0,
    cap: int = spectrum.DEFAULT_ORACLE_CAP,
    degenerate: bool = True,
    skin_max_L: int | None = None,
    jobs: int = 1,
) -> list[CheckResult]:
    if max_n < 2 or max_L < 1 or points < 1:
        raise ValueError("grid needs max_n >= 2, max_L >= 1, points >= 1")
    if max_n**max_L > cap:
        raise spectrum.OracleCapError(f"grid corner n^L = {max_n ** max_L} exceeds cap {cap}")
    skin_max_L = max_L if skin_max_L is None else skin_max_L
    tasks = []
    for n in range(2, max_n + 1):
        tasks.append(("algebra", n, 0, seed, 0, cap))
        for L in range(1, max_L + 1):
            tasks += [("random", n, L, seed, p, cap) for p in range(points)]
            if degenerate:
                tasks += [("degenerate", n, L, seed, 0, cap), ("partial", n, L, seed, 0, cap)]
            tasks.append(("bernoulli", n, L, seed, 0, cap))
        for L in range(1, skin_max_L + 1):
            tasks += [("skin", n, L, seed, x, cap) for x in SKIN_DEEP_X]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_grid_task, tasks))
    else:
        batches = [_grid_task(t) for t in tasks]
    return [r for batch in batches for r in batch]


def summarize(results: list[CheckResult]) -> dict:
    by_check: dict[str, list[int]] = {}
    for r in results:
        counts = by_check.setdefault(r.check, [0, 0])
        counts[0 if r.passed else 1] += 1
    return {
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
        "summary": {name: {"pass": p, "fail": f} for name, (p, f) in sorted(by_check.items())},
    }

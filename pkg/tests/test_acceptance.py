"""Acceptance checks, one per shipped claim, each printing a PASS/FAIL line.

These run the real pipeline at figure scale; a few take minutes.  Every
check states its tolerance in the printed line so the output file reads as
a self-contained report.
"""

import io
import itertools
import math
import time

import numpy as np

from cacheic.allocators import exhaustive_search, low_complexity, top_popularity, top_rate
from cacheic.config import write_rows_csv
from cacheic.dispatch import CostEvaluator, Mode, expected_cost, select_strategy_ca
from cacheic.hk import HkGranularity, decoupled_floor, solve_hk
from cacheic.mimo import cost_mimo_bc
from cacheic.model import (CacheAllocation, ChannelState, Demand, FileCatalog,
                           Strategy, order_by_gain, snr_for_rate, to_db)
from cacheic.scenario import FadingConfig, ScenarioConfig, monte_carlo_q, static_channel, sweep
from cacheic.solvers import cost_broadcast, cost_gic, cost_gin, cost_miso

from oracles import (hk_ladder_min, oracle_broadcast, oracle_gic, oracle_gin,
                     oracle_miso)

TABLE1 = FileCatalog(rates=(1.2, 1.0, 0.5, 0.4, 0.2),
                     popularity=(0.45, 0.20, 0.15, 0.15, 0.05))
TABLE1_INV = FileCatalog(rates=(1.2, 1.0, 0.5, 0.4, 0.2),
                         popularity=(0.05, 0.15, 0.15, 0.20, 0.45))
TABLE2 = FileCatalog.normalized(
    rates=(1.20, 0.20, 1.40, 0.80, 1.80, 1.00, 1.60, 0.60, 2.00, 0.40),
    popularity=(0.5911, 0.1697, 0.0818, 0.0487, 0.0326,
                0.0235, 0.0178, 0.0140, 0.0113, 0.0094))
GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line, flush=True)
    assert ok, line


def _rand_channel(rng) -> ChannelState:
    g = np.exp(rng.uniform(np.log(0.01), np.log(2.0), size=4))
    return ChannelState(a11=g[0], a12=g[1], a21=g[2], a22=g[3],
                        a10=0.01, a20=0.01)


def _crossed(c: float) -> ChannelState:
    return ChannelState(a11=1.0, a12=c, a21=c, a22=1.0, a10=0.01, a20=0.01)


def test_criterion_01_solver_oracle_equivalence():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = {"gic": 0.0, "gin": 0.0, "bc": 0.0, "miso": 0.0}
    mismatches = 0
    for _ in range(100):
        ch = _rand_channel(rng)
        R1, R2 = rng.uniform(0.1, 1.5, size=2)

        got = cost_gic(R1, ch).total_power
        want = oracle_gic(R1, ch)
        worst["gic"] = max(worst["gic"], abs(got - want) / want)

        lc = cost_gin(R1, R2, ch)
        ref = oracle_gin(R1, R2, ch)
        if lc.feasible != (ref is not None):
            mismatches += 1
        elif lc.feasible:
            worst["gin"] = max(worst["gin"],
                               abs(lc.total_power - ref[0]) / ref[0])

        rp, ap, rm, am = order_by_gain(R1, ch.a11, R2, ch.a22)
        got = cost_broadcast(rp, rm, ap, am).total_power
        want = oracle_broadcast(rp, rm, ap, am)
        worst["bc"] = max(worst["bc"], abs(got - want) / want)

        got = cost_miso(R1, ch.a11 + ch.a12, R2, 0.01).total_power
        want = oracle_miso(R1, ch.a11 + ch.a12, R2, 0.01)
        worst["miso"] = max(worst["miso"], abs(got - want) / want)
    dt = time.perf_counter() - t0
    ok = all(v <= 0.01 for v in worst.values()) and mismatches == 0 and dt < 60
    _report(1, ok,
            "solver vs oracle on 100 instances, worst rel err "
            + " ".join(f"{k}={v:.2e}" for k, v in worst.items())
            + f", feasibility mismatches={mismatches} (tol 1%), {dt:.1f}s (limit 60s)")


def test_criterion_02_hk_sandwich():
    rng = np.random.default_rng(2)
    g = HkGranularity(dP_max=0.25, dP_min=0.25, dLam_max=0.25, dLam_min=0.25)
    checked = 0
    violations = 0
    t0 = time.perf_counter()
    while checked < 1000:
        ch = _rand_channel(rng)
        R1, R2 = rng.uniform(0.1, 1.5, size=2)
        gin = cost_gin(R1, R2, ch)
        if not gin.feasible:
            continue
        checked += 1
        res = solve_hk(R1, R2, ch, g)
        lo = decoupled_floor(R1, R2, ch)
        if not (lo * (1 - 1e-9) <= res.total_power
                <= gin.total_power * (1 + 1e-12)):
            violations += 1
    dt = time.perf_counter() - t0
    _report(2, violations == 0,
            f"rate-split cost between decoupled floor and interference-as-noise "
            f"on {checked} feasible instances, violations={violations}, {dt:.1f}s")


def test_criterion_03_split_search_efficiency():
    ch = _crossed(0.3)
    floor = decoupled_floor(0.8, 0.8, ch)
    dmin = 1e-3 * floor
    res = solve_hk(0.8, 0.8, ch)
    t0 = time.perf_counter()
    ladder, ladder_evals = hk_ladder_min(0.8, 0.8, ch, dmin)
    dt = time.perf_counter() - t0
    gap = abs(res.total_power - ladder)
    ratio = ladder_evals / max(res.evaluations, 1)
    ok = gap <= dmin * (1 + 1e-9) and ratio >= 10.0
    _report(3, ok,
            f"benchmark a12=a21=0.3 R=0.8: search {res.total_power:.6f} vs "
            f"full ladder {ladder:.6f}, gap {gap:.2e} (tol {dmin:.2e}); "
            f"evaluations {res.evaluations:,} vs {ladder_evals:,} "
            f"= {ratio:.0f}x fewer (bar 10x); ladder took {dt:.0f}s")


def test_criterion_04_mimo_duality():
    rng = np.random.default_rng(4)
    worst_tr = 0.0
    for _ in range(200):
        ch = _rand_channel(rng)
        R1, R2 = rng.uniform(0.1, 1.5, size=2)
        rep = cost_mimo_bc(R1, R2, ch)
        worst_tr = max(worst_tr, abs(rep.q1 + rep.q2 - rep.sum_power))
    dec = ChannelState(a11=0.7, a12=0.0, a21=0.0, a22=1.9, a10=0.01, a20=0.01)
    rep = cost_mimo_bc(0.9, 1.1, dec)
    floor = snr_for_rate(0.9) / 0.7 + snr_for_rate(1.1) / 1.9
    dec_err = abs(rep.sum_power - floor) / floor
    ok = worst_tr < 1e-9 and dec_err < 0.01
    _report(4, ok,
            f"trace identity worst |q1+q2-total|={worst_tr:.2e} over 200 "
            f"instances (tol 1e-9); decoupled cost off floor by "
            f"{dec_err:.2e} (tol 1%)")


def test_criterion_05_direct_popularity_sweep_shape():
    t0 = time.perf_counter()
    sc = ScenarioConfig(catalog=TABLE1, M=2, modes=(Mode.NCA, Mode.CA),
                        allocators=("exhaustive",),
                        fading=FadingConfig(sigma=0.0), grid=GRID)
    rows = sweep(sc)
    dt = time.perf_counter() - t0
    nca = {r.mean_c: r for r in rows if r.mode is Mode.NCA}
    ca = {r.mean_c: r for r in rows if r.mode is Mode.CA}
    jump = nca[0.4].q_db - nca[0.2].q_db
    tail = [nca[c].q_db for c in GRID if c >= 0.4]
    flat = max(tail) - min(tail)
    split_ok = all(
        ca[c].allocation.files(1).isdisjoint(ca[c].allocation.files(2))
        and {0, 1} <= (ca[c].allocation.files(1) | ca[c].allocation.files(2))
        for c in GRID if c >= 0.2)
    # the fixed most-popular-files allocation for reference: once every cached
    # rate pair is alpha-infeasible its curve cannot depend on the coupling
    pop = CacheAllocation.from_sets({0, 1}, {0, 1}, 5, 2)
    pop_db = [to_db(expected_cost(Mode.NCA, pop, TABLE1, _crossed(c)).q_value)
              for c in GRID]
    pop_jump = pop_db[2] - pop_db[1]
    pop_flat = max(pop_db[2:]) - min(pop_db[2:])
    ok = 3.0 <= jump <= 5.0 and flat < 0.5 and split_ok and dt < 600
    _report(5, ok,
            f"non-cooperative optimum jumps {jump:.3f} dB from coupling 0.2 "
            f"to 0.4 (want 4+-1) and varies {flat:.3f} dB beyond (want <0.5); "
            f"fixed f1,f2-both-caches curve jumps {pop_jump:.3f} dB and "
            f"varies {pop_flat:.3f} dB; "
            f"cooperative optimum split with f1,f2 in union: {split_ok}; "
            f"{dt:.0f}s (limit 600s)")


def test_criterion_06_inverse_popularity_keeps_top_rate_file():
    t0 = time.perf_counter()
    results = []
    for c in GRID[1:]:
        ev = CostEvaluator(_crossed(c))
        cost = lambda a: expected_cost(Mode.CA, a, TABLE1_INV, ev.ch,
                                       evaluator=ev).q_value
        best = exhaustive_search(TABLE1_INV, 2, cost)
        with_f1 = 0 in (best.allocation.files(1) | best.allocation.files(2))
        no_f1 = math.inf
        for s1 in itertools.combinations(range(1, 5), 2):
            for s2 in itertools.combinations(range(1, 5), 2):
                if s1 > s2:
                    continue
                q = cost(CacheAllocation.from_sets(s1, s2, 5, 2))
                no_f1 = min(no_f1, q)
        gap = to_db(no_f1) - to_db(best.q_value)
        results.append((c, with_f1, gap))
    dt = time.perf_counter() - t0
    ok = all(w and g >= 2.0 for _, w, g in results)
    _report(6, ok,
            "highest-rate file always cached and dropping it costs "
            + ", ".join(f"{g:.2f}dB@c={c:g}" for c, _, g in results)
            + f" (want >=2.0 dB each); {dt:.0f}s")


def test_criterion_07_low_complexity_between_optimal_and_benchmarks():
    t0 = time.perf_counter()
    lines = []
    ok = True
    al = low_complexity(TABLE2, 2)
    ap = top_popularity(TABLE2, 2)
    ar = top_rate(TABLE2, 2)
    for c in GRID:
        ev = CostEvaluator(_crossed(c))
        cost = lambda a: expected_cost(Mode.CA, a, TABLE2, ev.ch,
                                       evaluator=ev).q_value
        q_exh = exhaustive_search(TABLE2, 2, cost).q_value
        q_low = cost(al)
        q_pop = cost(ap)
        q_rate = cost(ar)
        point_ok = (q_exh <= q_low * (1 + 1e-9)
                    and q_low <= min(q_pop, q_rate) * (1 + 1e-9))
        ok = ok and point_ok
        lines.append(f"c={c:g}: exh={to_db(q_exh):.2f} low={to_db(q_low):.2f} "
                     f"pop={to_db(q_pop):.2f} rate={to_db(q_rate):.2f}dB "
                     f"{'ok' if point_ok else 'VIOLATED'}")
    dt = time.perf_counter() - t0
    # any split allocation is infinite at zero coupling: its cross-cached
    # demand pairs ride links with zero gain, so only c=0 can break the chain
    _report(7, ok,
            "ordering optimal <= greedy <= benchmarks at every grid point; "
            + "; ".join(lines) + f"; {dt:.0f}s")


def test_criterion_08_mbs_usage_curves():
    ca_alloc = CacheAllocation.from_sets({0, 2}, {1, 3}, 5, 2)
    nca_alloc = CacheAllocation.from_sets({0, 1}, {0, 1}, 5, 2)
    ca_usage = []
    nca_usage = []
    for c in GRID:
        ch = _crossed(c)
        ca_usage.append(expected_cost(Mode.CA, ca_alloc, TABLE1, ch).mbs_usage_prob)
        nca_usage.append(expected_cost(Mode.NCA, nca_alloc, TABLE1, ch).mbs_usage_prob)
    ca_ok = all(abs(u - 0.0975) <= 1e-9 for u in ca_usage)
    mono = all(a <= b + 1e-12 for a, b in zip(nca_usage, nca_usage[1:]))
    ok = ca_ok and mono and nca_usage[-1] >= 0.95
    _report(8, ok,
            f"cooperative MBS usage {ca_usage[0]:.4f} constant over coupling "
            f"(want 0.0975 +- 1e-9): {ca_ok}; non-cooperative usage "
            f"{nca_usage[0]:.4f}->{nca_usage[-1]:.4f} non-decreasing={mono}, "
            f"end >=0.95")


def test_criterion_09_dispatch_partition():
    def expect(w, x, y, z):
        n = w + x + y + z
        if n == 4:
            return Strategy.MIMO
        if n == 3:
            return Strategy.GIC
        if n == 2:
            if (w and x) or (y and z):
                return Strategy.MISO
            if (w and y) or (x and z):
                return Strategy.BC_SBS
            return Strategy.GIWC
        if n == 1:
            return Strategy.ORTH
        return Strategy.BC_MBS

    hits = 0
    for w, x, y, z in itertools.product((0, 1), repeat=4):
        alloc = CacheAllocation((w, y), (x, z), M=2)
        assert select_strategy_ca(alloc, Demand(0, 1)) is expect(w, x, y, z)
        hits += 1
    same = {(1, 1): Strategy.GIC, (1, 0): Strategy.MC_SBS,
            (0, 1): Strategy.MC_SBS, (0, 0): Strategy.MC_MBS}
    for (b1, b2), strategy in same.items():
        alloc = CacheAllocation((b1, 0), (b2, 0), M=2)
        assert select_strategy_ca(alloc, Demand(0, 0)) is strategy
        hits += 1
    _report(9, hits == 20,
            f"one strategy per placement pattern, all {hits} cases "
            "(16 different-file + 4 same-file) match the fixed routing")


def test_criterion_10_deterministic_csv():
    sc = ScenarioConfig(catalog=TABLE1, M=2, modes=(Mode.NCA,),
                        allocators=("lowc", "pop"),
                        fading=FadingConfig(sigma=0.5), grid=(0.2, 0.6),
                        n_samples=32, seed=123)
    bufs = []
    for _ in range(2):
        buf = io.StringIO()
        write_rows_csv(sweep(sc), buf)
        bufs.append(buf.getvalue())
    ok = bufs[0] == bufs[1] and len(bufs[0].splitlines()) == 1 + 2 * 2
    _report(10, ok,
            "two Monte-Carlo sweep runs with the same config and seed give "
            f"byte-identical CSV ({len(bufs[0])} bytes)")


def test_criterion_11_fading_properties():
    alloc = CacheAllocation.from_sets({0, 1}, {0, 1}, 5, 2)
    faded = FadingConfig(sigma=0.6, mean_c=0.2)
    static = FadingConfig(sigma=0.0, mean_c=0.2)
    q_fad = monte_carlo_q(Mode.NCA, alloc, TABLE1, faded, n_samples=300, seed=6)
    q_sta = monte_carlo_q(Mode.NCA, alloc, TABLE1, static)
    margin_db = to_db(q_fad.q_value) - to_db(q_sta.q_value)
    exact = (monte_carlo_q(Mode.CA, alloc, TABLE1, static, n_samples=100, seed=1)
             == expected_cost(Mode.CA, alloc, TABLE1, static_channel(static)))
    ok = margin_db >= 0.0 and exact
    _report(11, ok,
            f"shadowing raises expected power by {margin_db:.2f} dB over the "
            f"static channel at matched means (want >=0); sigma=0 sampling "
            f"equals the static evaluation exactly: {exact}")

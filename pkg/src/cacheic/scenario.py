"""Static and fading scenario engines behind the interference sweeps.

Shadowed links draw lognormal gains with the location parameter shifted by
-sigma^2/2 so the linear mean stays on target.  Cross links take their mean
from the coupling sweep value times the opposing direct link's mean, which
makes the standard-form coefficients c12, c21 equal the sweep value exactly
in the static (sigma = 0) case.  Monte-Carlo estimates use one substream per
sample index, so results are independent of execution order and thread
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .allocators import exhaustive_search, low_complexity, top_popularity, top_rate
from .dispatch import (CostEvaluator, ExpectedCost, Mode, SolverConfig,
                       expected_cost)
from .model import CacheAllocation, ChannelState, FileCatalog, Strategy, to_db
from .solvers import cost_gin

_LINKS = frozenset({"sbs-user", "mbs-user"})


@dataclass(frozen=True)
class FadingConfig:
    """Link-gain distribution for one interference level."""

    mean_a11: float = 1.0
    mean_a22: float = 1.0
    mean_a10: float = 0.01
    mean_a20: float = 0.01
    sigma: float = 0.5
    mean_c: float = 0.0
    faded_links: frozenset[str] = field(default_factory=lambda: frozenset({"sbs-user"}))

    def __post_init__(self):
        for name in ("mean_a11", "mean_a22", "mean_a10", "mean_a20"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0.0 <= self.mean_c <= 1.0:
            raise ValueError("mean_c must lie in [0, 1]")
        bad = set(self.faded_links) - _LINKS
        if bad:
            raise ValueError(f"unknown faded links {sorted(bad)}")
        object.__setattr__(self, "faded_links", frozenset(self.faded_links))


@dataclass(frozen=True)
class MaxPowerPolicy:
    """Per-SBS transmit power cap with the outage budget it was sized for."""

    enabled: bool
    p_max: float
    outage_target: float = 1e-5
    calibration_instance: tuple | None = None
    alpha_infeasible_rate: float = 0.0

    def __post_init__(self):
        if self.enabled and not self.p_max > 0:
            raise ValueError("p_max must be positive when the cap is enabled")


@dataclass(frozen=True)
class SweepRow:
    mean_c: float
    mode: Mode
    allocator: str
    allocation: CacheAllocation
    q_linear: float
    q_db: float
    mbs_usage_prob: float
    outage_fallback_rate: float
    n_samples: int
    seed: int


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one sweep needs; rows come out in deterministic order."""

    catalog: FileCatalog
    M: int
    modes: tuple[Mode, ...] = (Mode.CA, Mode.NCA)
    allocators: tuple[str, ...] = ("exhaustive",)
    explicit: tuple[tuple[str, CacheAllocation], ...] = ()
    fading: FadingConfig = FadingConfig()
    grid: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    n_samples: int = 10_000
    policy: MaxPowerPolicy | None = None
    solver: SolverConfig = SolverConfig()
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        known = {"exhaustive", "lowc", "pop", "rate"}
        bad = set(self.allocators) - known
        if bad:
            raise ValueError(f"unknown allocators {sorted(bad)}; pick from {sorted(known)}")
        if any(not 0.0 <= c <= 1.0 for c in self.grid):
            raise ValueError("grid values must lie in [0, 1]")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


def _draw(stream: np.random.Generator, mean: float, sigma: float, faded: bool) -> float:
    if mean == 0.0:
        return 0.0
    if not faded or sigma == 0.0:
        return mean
    return float(stream.lognormal(math.log(mean) - 0.5 * sigma * sigma, sigma))


def sample_channel(cfg: FadingConfig, stream: np.random.Generator) -> ChannelState:
    """One channel realization; links drawn in a fixed order."""
    sbs = "sbs-user" in cfg.faded_links
    mbs = "mbs-user" in cfg.faded_links
    a11 = _draw(stream, cfg.mean_a11, cfg.sigma, sbs)
    a22 = _draw(stream, cfg.mean_a22, cfg.sigma, sbs)
    a12 = _draw(stream, cfg.mean_c * cfg.mean_a22, cfg.sigma, sbs)
    a21 = _draw(stream, cfg.mean_c * cfg.mean_a11, cfg.sigma, sbs)
    a10 = _draw(stream, cfg.mean_a10, cfg.sigma, mbs)
    a20 = _draw(stream, cfg.mean_a20, cfg.sigma, mbs)
    return ChannelState(a11=a11, a12=a12, a21=a21, a22=a22, a10=a10, a20=a20)


def static_channel(cfg: FadingConfig) -> ChannelState:
    """The mean channel (what sigma = 0 sampling produces)."""
    return ChannelState(a11=cfg.mean_a11, a12=cfg.mean_c * cfg.mean_a22,
                        a21=cfg.mean_c * cfg.mean_a11, a22=cfg.mean_a22,
                        a10=cfg.mean_a10, a20=cfg.mean_a20)


def _sample_rng(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def calibrate_pmax(cfg: FadingConfig, catalog: FileCatalog,
                   outage_target: float = 1e-5, n_samples: int = 1_000_000,
                   seed: int = 0) -> MaxPowerPolicy:
    """Size the per-SBS cap so interference-as-noise at the heaviest rates
    exceeds it with probability outage_target, at coupling 0.4.

    Draws where no finite power works (alpha <= 0) count as exceedances.  If
    that mass alone already exceeds the target, no finite cap meets it; the
    cap is then the conditional quantile over the feasible draws and the
    alpha-infeasibility rate is recorded on the policy.
    """
    if not 0.0 < outage_target < 1.0:
        raise ValueError("outage_target must lie in (0, 1)")
    rate = catalog.max_rate
    cal = replace(cfg, mean_c=0.4)
    stream = _sample_rng(seed, ())
    stats = np.empty(n_samples)
    for k in range(n_samples):
        ch = sample_channel(cal, stream)
        lc = cost_gin(rate, rate, ch)
        stats[k] = max(lc.p_tx1, lc.p_tx2) if lc.feasible else math.inf
    stats.sort()
    idx = max(0, math.ceil((1.0 - outage_target) * n_samples) - 1)
    alpha_rate = float(np.isinf(stats).sum()) / n_samples
    if math.isinf(stats[idx]):
        finite = stats[np.isfinite(stats)]
        if finite.size == 0:
            raise ValueError("no feasible draw at the calibration point; cap undefined")
        fidx = max(0, math.ceil((1.0 - outage_target) * finite.size) - 1)
        p_max = float(finite[fidx])
    else:
        p_max = float(stats[idx])
    return MaxPowerPolicy(enabled=True, p_max=p_max, outage_target=outage_target,
                          calibration_instance=((rate, rate), 0.4),
                          alpha_infeasible_rate=alpha_rate)


def monte_carlo_q(mode: Mode, alloc: CacheAllocation, catalog: FileCatalog,
                  cfg: FadingConfig, policy: MaxPowerPolicy | None = None,
                  n_samples: int = 10_000, seed: int = 0,
                  solver_cfg: SolverConfig | None = None, threads: int = 1,
                  stream_key: tuple[int, ...] = ()) -> ExpectedCost:
    """Expected cost averaged over channel realizations.

    Sample k draws from substream (stream_key, k), and the reduction is an
    ordered compensated sum, so any thread count gives identical bits.  With
    sigma = 0 (or nothing faded) this is a single static evaluation.
    """
    p_max = policy.p_max if policy is not None and policy.enabled else None
    if cfg.sigma == 0.0 or not cfg.faded_links:
        return expected_cost(mode, alloc, catalog, static_channel(cfg),
                             solver_cfg, p_max=p_max)

    def one(k: int) -> ExpectedCost:
        ch = sample_channel(cfg, _sample_rng(seed, stream_key + (k,)))
        return expected_cost(mode, alloc, catalog, ch, solver_cfg, p_max=p_max)

    if threads <= 1:
        results = [one(k) for k in range(n_samples)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(n_samples)))
    inv = 1.0 / n_samples
    probs = {s: inv * math.fsum(r.strategy_probs.get(s, 0.0) for r in results)
             for s in Strategy
             if any(s in r.strategy_probs for r in results)}
    return ExpectedCost(q_value=inv * math.fsum(r.q_value for r in results),
                        mbs_usage_prob=inv * math.fsum(r.mbs_usage_prob for r in results),
                        strategy_probs=probs,
                        fallback_prob=inv * math.fsum(r.fallback_prob for r in results))


_NAMED_ALLOCATORS = {"lowc": low_complexity, "pop": top_popularity, "rate": top_rate}


def sweep(sc: ScenarioConfig) -> list[SweepRow]:
    """Evaluate every requested allocation source on every grid point."""
    rows: list[SweepRow] = []
    p_max = sc.policy.p_max if sc.policy is not None and sc.policy.enabled else None
    for p_idx, mean_c in enumerate(sc.grid):
        cfg = replace(sc.fading, mean_c=mean_c)
        static = cfg.sigma == 0.0 or not cfg.faded_links
        if static:
            ev = CostEvaluator(static_channel(cfg), sc.solver)
            n_eff = 1
        else:
            n_eff = sc.n_samples

        def q_of(mode: Mode, alloc: CacheAllocation) -> ExpectedCost:
            if static:
                return expected_cost(mode, alloc, sc.catalog, ev.ch, sc.solver,
                                     p_max=p_max, evaluator=ev)
            return monte_carlo_q(mode, alloc, sc.catalog, cfg, sc.policy,
                                 sc.n_samples, sc.seed, sc.solver, sc.threads,
                                 stream_key=(p_idx,))

        for mode in sc.modes:
            sources: list[tuple[str, CacheAllocation]] = list(sc.explicit)
            for name in sc.allocators:
                if name == "exhaustive":
                    res = exhaustive_search(sc.catalog, sc.M,
                                            lambda a: q_of(mode, a).q_value)
                    sources.append((name, res.allocation))
                else:
                    sources.append((name, _NAMED_ALLOCATORS[name](sc.catalog, sc.M)))
            for label, alloc in sources:
                ec = q_of(mode, alloc)
                q_db = to_db(ec.q_value) if ec.q_value > 0 else float("-inf")
                rows.append(SweepRow(mean_c=mean_c, mode=mode, allocator=label,
                                     allocation=alloc, q_linear=ec.q_value,
                                     q_db=q_db, mbs_usage_prob=ec.mbs_usage_prob,
                                     outage_fallback_rate=ec.fallback_prob,
                                     n_samples=n_eff, seed=sc.seed))
    return rows

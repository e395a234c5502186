"""Strategy selection and expected-cost evaluation for a cache allocation.

Given who cached what and which files the two users ask for, exactly one
transmission strategy applies.  In the cooperative mode any transmitter may
serve any user, so the choice depends on all four placement bits of the
demanded pair; in the non-cooperative mode SBS_n only ever serves user n and
everything else is delegated to the MBS.  The three-bit placement pattern
routes to the common-message solver at the doubly-cached file's rate; that
mapping is taken as given by the cost structure rather than re-derived.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field

from .hk import HkGranularity, cost_hk
from .mimo import mimo_link_cost
from .model import (CacheAllocation, ChannelState, Demand, FileCatalog,
                    LinkCost, Strategy, order_by_gain)
from .solvers import (cost_broadcast, cost_gic, cost_gin, cost_miso,
                      cost_multicast, cost_orthogonal, gin_alpha)


class Mode(enum.Enum):
    CA = "CA"
    NCA = "NCA"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SolverConfig:
    """Knobs forwarded to the iterative solvers."""

    hk: HkGranularity | None = None
    mimo_eps: float | None = None


@dataclass(frozen=True)
class ExpectedCost:
    """Expected power over the demand distribution for one allocation."""

    q_value: float
    mbs_usage_prob: float
    strategy_probs: dict[Strategy, float] = field(compare=False)
    fallback_prob: float = 0.0


def select_strategy_ca(alloc: CacheAllocation, d: Demand) -> Strategy:
    """Cooperative-mode strategy for a demand pair; a 16-way placement partition."""
    i, j = d.i, d.j
    if i == j:
        b1, b2 = alloc.has(i, 1), alloc.has(i, 2)
        if b1 and b2:
            return Strategy.GIC
        if b1 or b2:
            return Strategy.MC_SBS
        return Strategy.MC_MBS
    w, x = alloc.has(i, 1), alloc.has(i, 2)
    y, z = alloc.has(j, 1), alloc.has(j, 2)
    n = w + x + y + z
    if n == 4:
        return Strategy.MIMO
    if n == 3:
        return Strategy.GIC
    if n == 2:
        if w and x:
            return Strategy.MISO
        if y and z:
            return Strategy.MISO
        if (w and y) or (x and z):
            return Strategy.BC_SBS
        return Strategy.GIWC
    if n == 1:
        return Strategy.ORTH
    return Strategy.BC_MBS


def select_strategy_nc(alloc: CacheAllocation, d: Demand, ch: ChannelState,
                       catalog: FileCatalog) -> Strategy:
    """Non-cooperative strategy: own-cache hits only, MBS otherwise."""
    i, j = d.i, d.j
    own1, own2 = alloc.has(i, 1), alloc.has(j, 2)
    if own1 and own2:
        if gin_alpha(catalog.rates[i], catalog.rates[j], ch) > 0.0:
            return Strategy.GIN
        return Strategy.MC_MBS if i == j else Strategy.BC_MBS
    if own1 or own2:
        return Strategy.ORTH
    return Strategy.MC_MBS if i == j else Strategy.BC_MBS


# Descriptors are small hashable tuples naming a solver call; they key the
# per-channel memo and keep routing separate from execution.

def _describe_ca(alloc: CacheAllocation, d: Demand, catalog: FileCatalog) -> tuple:
    i, j = d.i, d.j
    Ri, Rj = catalog.rates[i], catalog.rates[j]
    s = select_strategy_ca(alloc, d)
    if s is Strategy.GIC:
        if i == j or (alloc.has(i, 1) and alloc.has(i, 2)):
            return ("gic", Ri)
        return ("gic", Rj)
    if s is Strategy.MC_SBS:
        return ("mc_sbs", 1 if alloc.has(i, 1) else 2, Ri)
    if s is Strategy.MC_MBS:
        return ("mc_mbs", Ri)
    if s is Strategy.MIMO:
        return ("mimo", Ri, Rj)
    if s is Strategy.MISO:
        if alloc.has(i, 1) and alloc.has(i, 2):
            return ("miso", 1, Ri, Rj)
        return ("miso", 2, Rj, Ri)
    if s is Strategy.BC_SBS:
        return ("bc_sbs", 1 if alloc.has(i, 1) else 2, Ri, Rj)
    if s is Strategy.GIWC:
        crossed = alloc.has(i, 2)   # f_i at SBS2, f_j at SBS1
        return ("hk", Ri, Rj, crossed)
    if s is Strategy.ORTH:
        if alloc.has(i, 1):
            return ("orth", 1, 1, Ri, Rj)
        if alloc.has(i, 2):
            return ("orth", 2, 1, Ri, Rj)
        if alloc.has(j, 1):
            return ("orth", 1, 2, Rj, Ri)
        return ("orth", 2, 2, Rj, Ri)
    return ("bc_mbs", Ri, Rj)


def _describe_nc(alloc: CacheAllocation, d: Demand, catalog: FileCatalog,
                 ch: ChannelState) -> tuple:
    i, j = d.i, d.j
    Ri, Rj = catalog.rates[i], catalog.rates[j]
    s = select_strategy_nc(alloc, d, ch, catalog)
    if s is Strategy.GIN:
        return ("gin", Ri, Rj)
    if s is Strategy.ORTH:
        if alloc.has(i, 1):
            return ("orth", 1, 1, Ri, Rj)
        return ("orth", 2, 2, Rj, Ri)
    if s is Strategy.MC_MBS:
        return ("mc_mbs", Ri)
    return ("bc_mbs", Ri, Rj)


def _describe(mode: Mode, alloc, d, catalog, ch) -> tuple:
    if mode is Mode.CA:
        return _describe_ca(alloc, d, catalog)
    return _describe_nc(alloc, d, catalog, ch)


def _execute(desc: tuple, ch: ChannelState, cfg: SolverConfig) -> LinkCost:
    kind = desc[0]
    if kind == "mc_mbs":
        return cost_multicast(desc[1], ch.a_minus_mbs, node="mbs")
    if kind == "mc_sbs":
        _, n, R = desc
        if ch.a_minus_sbs(n) <= 0.0:    # far user unreachable (zero coupling)
            return LinkCost.infeasible(Strategy.MC_SBS)
        return cost_multicast(R, ch.a_minus_sbs(n), node=f"sbs{n}")
    if kind == "gic":
        return cost_gic(desc[1], ch)
    if kind == "bc_mbs":
        _, Ri, Rj = desc
        rp, ap, rm, am = order_by_gain(Ri, ch.a10, Rj, ch.a20)
        return cost_broadcast(rp, rm, ap, am, node="mbs")
    if kind == "bc_sbs":
        _, n, Ri, Rj = desc
        rp, ap, rm, am = order_by_gain(Ri, ch.user_gain(1, n), Rj, ch.user_gain(2, n))
        if am <= 0.0:
            return LinkCost.infeasible(Strategy.BC_SBS)
        return cost_broadcast(rp, rm, ap, am, node=f"sbs{n}")
    if kind == "orth":
        _, sbs, user, R_sbs, R_mbs = desc
        if ch.user_gain(user, sbs) <= 0.0:
            # the MBS leg still carries the uncached file; only the SBS leg dies
            return LinkCost.infeasible(Strategy.ORTH, mbs_used=True)
        return cost_orthogonal(R_sbs, ch.user_gain(user, sbs),
                               R_mbs, ch.mbs_gain(3 - user), sbs=sbs)
    if kind == "miso":
        _, user, R_coop, R_mbs = desc
        g1, g2 = ch.user_gain(user, 1), ch.user_gain(user, 2)
        return cost_miso(R_coop, g1 + g2, R_mbs, ch.mbs_gain(3 - user),
                         a_parts=(g1, g2))
    if kind == "gin":
        return cost_gin(desc[1], desc[2], ch)
    if kind == "hk":
        _, Ri, Rj, crossed = desc
        if crossed:
            if ch.a12 <= 0.0 or ch.a21 <= 0.0:  # serving links are the cross ones
                return LinkCost.infeasible(Strategy.GIWC)
            c = cost_hk(Ri, Rj, ch.swap_sbs(), cfg.hk)
            return LinkCost.of(Strategy.GIWC, p_tx1=c.p_tx2, p_tx2=c.p_tx1)
        return cost_hk(Ri, Rj, ch, cfg.hk)
    if kind == "mimo":
        return mimo_link_cost(desc[1], desc[2], ch, cfg.mimo_eps)
    raise AssertionError(f"unroutable descriptor {desc!r}")


def _fallback_ca(alloc: CacheAllocation, d: Demand, catalog: FileCatalog) -> list[tuple]:
    """Every strategy executable at this placement, cheapest-first not assumed."""
    i, j = d.i, d.j
    Ri, Rj = catalog.rates[i], catalog.rates[j]
    if i == j:
        out = []
        if alloc.has(i, 1) and alloc.has(i, 2):
            out.append(("gic", Ri))
        if alloc.has(i, 1):
            out.append(("mc_sbs", 1, Ri))
        if alloc.has(i, 2):
            out.append(("mc_sbs", 2, Ri))
        out.append(("mc_mbs", Ri))
        return out
    w, x = alloc.has(i, 1), alloc.has(i, 2)
    y, z = alloc.has(j, 1), alloc.has(j, 2)
    out = []
    if w and x and y and z:
        out.append(("mimo", Ri, Rj))
    if w and x and (y or z):
        out.append(("gic", Ri))
    if y and z and (w or x):
        out.append(("gic", Rj))
    if w and x:
        out.append(("miso", 1, Ri, Rj))
    if y and z:
        out.append(("miso", 2, Rj, Ri))
    if w and y:
        out.append(("bc_sbs", 1, Ri, Rj))
    if x and z:
        out.append(("bc_sbs", 2, Ri, Rj))
    if w and z:
        out.append(("hk", Ri, Rj, False))
    if x and y:
        out.append(("hk", Ri, Rj, True))
    if w:
        out.append(("orth", 1, 1, Ri, Rj))
    if x:
        out.append(("orth", 2, 1, Ri, Rj))
    if y:
        out.append(("orth", 1, 2, Rj, Ri))
    if z:
        out.append(("orth", 2, 2, Rj, Ri))
    out.append(("bc_mbs", Ri, Rj))
    return out


class CostEvaluator:
    """Routes and solves requests against one fixed channel state.

    Solver results are memoized per call descriptor; every solver is pure, so
    this only trims repeated work inside a sweep point.  The cache never
    outlives its ChannelState.
    """

    def __init__(self, ch: ChannelState, cfg: SolverConfig | None = None):
        self.ch = ch
        self.cfg = cfg or SolverConfig()
        self._memo: dict[tuple, LinkCost] = {}

    def _cost(self, desc: tuple) -> LinkCost:
        hit = self._memo.get(desc)
        if hit is None:
            hit = _execute(desc, self.ch, self.cfg)
            self._memo[desc] = hit
        return hit

    def request_cost(self, mode: Mode, alloc: CacheAllocation, d: Demand,
                     catalog: FileCatalog) -> LinkCost:
        return self._cost(_describe(mode, alloc, d, catalog, self.ch))

    def request_cost_capped(self, mode: Mode, alloc: CacheAllocation, d: Demand,
                            catalog: FileCatalog, p_max: float) -> tuple[LinkCost, bool]:
        """Cost under a per-SBS power cap; True when the cap forced a fallback.

        The MBS is never capped.  Non-cooperative fallback delegates to the
        MBS outright; cooperative fallback re-dispatches over everything the
        placement supports and keeps the cheapest cap-respecting option.
        """
        primary = self._cost(_describe(mode, alloc, d, catalog, self.ch))
        if primary.feasible and primary.max_sbs_power <= p_max:
            return primary, False
        if mode is Mode.NCA:
            if d.i == d.j:
                return self._cost(("mc_mbs", catalog.rates[d.i])), True
            return self._cost(("bc_mbs", catalog.rates[d.i], catalog.rates[d.j])), True
        best = None
        for desc in _fallback_ca(alloc, d, catalog):
            c = self._cost(desc)
            if not c.feasible or c.max_sbs_power > p_max:
                continue
            if best is None or c.total_power < best.total_power:
                best = c
        return best, True


def request_cost(mode: Mode, alloc: CacheAllocation, d: Demand,
                 catalog: FileCatalog, ch: ChannelState,
                 cfg: SolverConfig | None = None) -> LinkCost:
    """Minimum power to serve one demand pair in the given mode."""
    d.validate(catalog.n_files)
    return _execute(_describe(mode, alloc, d, catalog, ch), ch, cfg or SolverConfig())


def expected_cost(mode: Mode, alloc: CacheAllocation, catalog: FileCatalog,
                  ch: ChannelState, cfg: SolverConfig | None = None,
                  p_max: float | None = None,
                  evaluator: CostEvaluator | None = None) -> ExpectedCost:
    """Average power over the demand distribution (q_i q_j weights).

    Accumulation uses compensated summation in a fixed demand order, so the
    result does not depend on how callers might parallelize.  Passing a
    shared evaluator reuses solved strategies across allocations on the same
    channel.
    """
    if alloc.n_files != catalog.n_files:
        raise ValueError("allocation and catalog disagree on library size")
    ev = evaluator if evaluator is not None else CostEvaluator(ch, cfg)
    if ev.ch != ch:
        raise ValueError("evaluator was built for a different channel state")
    q = catalog.popularity
    terms: list[float] = []
    mbs_mass: list[float] = []
    fall_mass: list[float] = []
    strat_mass: dict[Strategy, list[float]] = defaultdict(list)
    for i in range(catalog.n_files):
        for j in range(catalog.n_files):
            weight = q[i] * q[j]
            d = Demand(i, j)
            if p_max is None:
                lc = ev.request_cost(mode, alloc, d, catalog)
                fell = False
            else:
                lc, fell = ev.request_cost_capped(mode, alloc, d, catalog, p_max)
            terms.append(weight * lc.total_power)
            if lc.mbs_used:
                mbs_mass.append(weight)
            if fell:
                fall_mass.append(weight)
            strat_mass[lc.strategy].append(weight)
    probs = {s: math.fsum(strat_mass[s]) for s in Strategy if s in strat_mass}
    return ExpectedCost(q_value=math.fsum(terms),
                        mbs_usage_prob=math.fsum(mbs_mass),
                        strategy_probs=probs,
                        fallback_prob=math.fsum(fall_mass))

"""Rate-splitting region and minimum sum-power search for the coupled pair.

When each SBS holds only the file its own user wants, the downlink is a
two-transmitter Gaussian interference channel.  Han-Kobayashi style rate
splitting sends each message as a private part (decoded only by the intended
user) plus a common part (decoded by both users, then cancelled).  For fixed
standard-form powers and split fractions the achievable region is the set of
rate pairs meeting five closed-form bounds; `solve_hk` searches splits on a
coarse-to-fine ladder and the total power by bracketing, returning the
cheapest point found.

Two structural variants of the region are selectable for comparison with
formulations that differ in these spots (defaults use the symmetric forms):
`sigma2_self_conditioned` replaces user 2's common-rate cap by its
self-conditioned reading, which is identically zero; `rho20_uses_sigma1`
subtracts user 1's common-rate cap instead of user 2's in the final term of
the 2*R_j + R_i bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChannelState, LinkCost, Strategy, snr_for_rate, to_standard_form
from .solvers import cost_gin

_LN2 = math.log(2.0)


def _cap(x):
    return 0.5 * np.log1p(x) / _LN2


@dataclass(frozen=True)
class HkPoint:
    """Standard-form transmit powers and private-power fractions."""

    P1: float
    P2: float
    lam1: float
    lam2: float

    def __post_init__(self):
        if not (self.P1 >= 0 and self.P2 >= 0 and math.isfinite(self.P1) and math.isfinite(self.P2)):
            raise ValueError("powers must be finite and non-negative")
        if not (0 <= self.lam1 <= 1 and 0 <= self.lam2 <= 1):
            raise ValueError("split fractions must lie in [0, 1]")


def _reciprocal_den(x: float, name: str) -> int:
    d = round(1.0 / x)
    if x <= 0 or x >= 1 or d < 2 or abs(1.0 / x - d) > 1e-9:
        raise ValueError(f"{name} must be 1/k for an integer k >= 2")
    return d


@dataclass(frozen=True)
class HkGranularity:
    """Search resolutions for `solve_hk`.

    dPtot_max / dPtot_min are absolute sum-power steps; None means derived
    from the instance (max(c_gin, 2*floor)/8 and 1e-3*floor).  The split
    fractions must halve from max down to min so grids nest.
    """

    dPtot_max: float | None = None
    dPtot_min: float | None = None
    dP_max: float = 0.25
    dP_min: float = 1.0 / 64
    dLam_max: float = 0.25
    dLam_min: float = 1.0 / 64

    def __post_init__(self):
        for lo, hi, name in (
            (self.dP_min, self.dP_max, "dP"),
            (self.dLam_min, self.dLam_max, "dLam"),
        ):
            d_hi = _reciprocal_den(hi, f"{name}_max")
            d_lo = _reciprocal_den(lo, f"{name}_min")
            if d_lo < d_hi:
                raise ValueError(f"{name}_min must not exceed {name}_max")
            ratio = d_lo // d_hi
            if d_hi * ratio != d_lo or ratio & (ratio - 1):
                raise ValueError(f"{name} grid must halve from {name}_max to {name}_min")
        for v, name in ((self.dPtot_max, "dPtot_max"), (self.dPtot_min, "dPtot_min")):
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive")
        if self.dPtot_max is not None and self.dPtot_min is not None and self.dPtot_min > self.dPtot_max:
            raise ValueError("dPtot_min must not exceed dPtot_max")


def region_rates(P1, P2, lam1, lam2, c12, c21, *,
                 sigma2_self_conditioned=False, rho20_uses_sigma1=False):
    """Five rate bounds (rho1, rho2, rho12, rho10, rho20) for split points.

    Inputs are standard-form total powers and private fractions; array
    arguments broadcast.  A pair (R_1, R_2) is achievable at a point iff
    R_1 <= rho1, R_2 <= rho2, R_1+R_2 <= rho12, 2R_1+R_2 <= rho10 and
    R_1+2R_2 <= rho20.
    """
    P1 = np.asarray(P1, dtype=float)
    P2 = np.asarray(P2, dtype=float)
    lam1 = np.asarray(lam1, dtype=float)
    lam2 = np.asarray(lam2, dtype=float)
    l1b = 1.0 - lam1
    l2b = 1.0 - lam2
    den1 = 1.0 + lam1 * P1 + c12 * lam2 * P2
    den2 = 1.0 + lam2 * P2 + c21 * lam1 * P1

    u1 = _cap(lam1 * P1 / (1.0 + c12 * lam2 * P2))   # private 1 at rx 1, commons removed
    u2 = _cap(lam2 * P2 / (1.0 + c21 * lam1 * P1))
    b1 = _cap(l1b * P1 / den1)                       # common 1 at rx 1 given common 2
    b2 = _cap(l2b * P2 / den2)
    d1 = _cap(c12 * l2b * P2 / den1)                 # common 2 at rx 1 given common 1
    d2 = _cap(c21 * l1b * P1 / den2)
    e1 = _cap((l1b * P1 + c12 * l2b * P2) / den1)    # both commons jointly at rx 1
    e2 = _cap((l2b * P2 + c21 * l1b * P1) / den2)
    f1 = _cap(l1b * P1 / (1.0 + lam1 * P1 + c12 * P2))   # common 1 at rx 1, nothing known
    f2 = _cap(l2b * P2 / (1.0 + lam2 * P2 + c21 * P1))
    g1 = _cap(c12 * l2b * P2 / (1.0 + c12 * lam2 * P2))  # common 2 at rx 1 after own signal
    g2 = _cap(c21 * l1b * P1 / (1.0 + c21 * lam1 * P1))

    relu = lambda x: np.maximum(0.0, x)
    sig1 = np.minimum(b1, g2)
    sig2 = np.zeros(np.broadcast(b2, g1).shape) if sigma2_self_conditioned else np.minimum(b2, g1)
    sig12 = np.minimum(np.minimum(e1, e2), np.minimum(b1 + b2, d1 + d2))

    rho1 = sig1 + u1
    rho2 = sig2 + u2
    rho12 = sig12 + u1 + u2
    rho10 = (2.0 * sig1 + 2.0 * u1 + u2 - relu(sig1 - d2)
             + np.minimum(np.minimum(b2, f2 + relu(d2 - sig1)), np.minimum(d1, e1 - sig1)))
    sig20 = sig1 if rho20_uses_sigma1 else sig2
    rho20 = (2.0 * sig2 + 2.0 * u2 + u1 - relu(sig2 - d1)
             + np.minimum(np.minimum(b1, f1 + relu(d1 - sig2)), np.minimum(d2, e2 - sig20)))
    return rho1, rho2, rho12, rho10, rho20


def hk_achievable(R_i, R_j, pt: HkPoint, c12, c21, *,
                  sigma2_self_conditioned=False, rho20_uses_sigma1=False) -> bool:
    """True iff the rate pair is inside the region at the given split point."""
    rho1, rho2, rho12, rho10, rho20 = region_rates(
        pt.P1, pt.P2, pt.lam1, pt.lam2, c12, c21,
        sigma2_self_conditioned=sigma2_self_conditioned,
        rho20_uses_sigma1=rho20_uses_sigma1)
    return bool((R_i <= rho1) and (R_j <= rho2) and (R_i + R_j <= rho12)
                and (2 * R_i + R_j <= rho10) and (R_i + 2 * R_j <= rho20))


# Rung ladder: halve the power-split step down to its floor first, then the
# rate-split step.  Points representable on an earlier rung are excluded.
_rung_cache: dict = {}


def _rung_points(g: HkGranularity):
    dp0, dp1 = round(1 / g.dP_max), round(1 / g.dP_min)
    dl0, dl1 = round(1 / g.dLam_max), round(1 / g.dLam_min)
    key = (dp0, dp1, dl0, dl1)
    if key in _rung_cache:
        return _rung_cache[key]
    schedule = []
    d = dp0
    while d <= dp1:
        schedule.append((d, dl0))
        d *= 2
    d = dl0 * 2
    while d <= dl1:
        schedule.append((dp1, d))
        d *= 2
    rungs = []
    seen: list = []
    for dp, dl in schedule:
        # lam grids include both endpoints: 0 is full common (needed under
        # strong coupling), 1 is full private (the interference-as-noise point)
        K, L1, L2 = np.meshgrid(np.arange(1, dp), np.arange(0, dl + 1),
                                np.arange(0, dl + 1), indexing="ij")
        K, L1, L2 = K.ravel(), L1.ravel(), L2.ravel()
        drop = np.zeros(K.shape, dtype=bool)
        for dp_prev, dl_prev in seen:
            rp, rl = dp // dp_prev, dl // dl_prev
            drop |= (K % rp == 0) & (L1 % rl == 0) & (L2 % rl == 0)
        keep = ~drop
        rungs.append((K[keep] / dp, L1[keep] / dl, L2[keep] / dl))
        seen.append((dp, dl))
    _rung_cache[key] = rungs
    return rungs


def _scan(Ptot, rungs, a11, a22, R_i, R_j, c12, c21, sig2sc, r20s1):
    """First feasible split point at sum power Ptot, with evaluation count.

    Rung points are visited in (split, lam1, lam2) lexicographic order; a
    feasible rung is charged only up to its first feasible point.
    """
    evals = 0
    for s, l1, l2 in rungs:
        P1 = a11 * s * Ptot
        P2 = a22 * (1.0 - s) * Ptot
        rho1, rho2, rho12, rho10, rho20 = region_rates(
            P1, P2, l1, l2, c12, c21,
            sigma2_self_conditioned=sig2sc, rho20_uses_sigma1=r20s1)
        ok = ((R_i <= rho1) & (R_j <= rho2) & (R_i + R_j <= rho12)
              & (2 * R_i + R_j <= rho10) & (R_i + 2 * R_j <= rho20))
        if ok.any():
            idx = int(np.argmax(ok))
            evals += idx + 1
            return HkPoint(float(P1[idx]), float(P2[idx]), float(l1[idx]), float(l2[idx])), evals
        evals += ok.size
    return None, evals


@dataclass(frozen=True)
class HkSolveResult:
    total_power: float          # physical watts, both transmitters
    p_tx1: float
    p_tx2: float
    point: HkPoint              # standard-form point backing the result
    evaluations: int            # region evaluations charged across all probes
    probes: int                 # sum-power levels scanned
    seed_used: bool             # result is the interference-as-noise seed


def decoupled_floor(R_i: float, R_j: float, ch: ChannelState) -> float:
    """Sum power of two interference-free direct links; a hard lower bound."""
    return snr_for_rate(R_i) / ch.a11 + snr_for_rate(R_j) / ch.a22


def solve_hk(R_i: float, R_j: float, ch: ChannelState,
             g: HkGranularity | None = None, *,
             sigma2_self_conditioned=False, rho20_uses_sigma1=False) -> HkSolveResult:
    """Minimum sum power at which (R_i, R_j) is achievable by rate splitting.

    The interference-as-noise point (lam1=lam2=1 at its exact powers) lies on
    the region boundary, so when that scheme is feasible its cost seeds the
    incumbent with no grid work.  The total power is then bracketed between
    the decoupled floor and the incumbent and bisected to dPtot_min, scanning
    the split ladder at each probe; when interference-as-noise is infeasible
    the bracket comes from doubling 2*floor until some split works.
    """
    if R_i < 0 or R_j < 0:
        raise ValueError("rates must be non-negative")
    if R_i == 0 and R_j == 0:
        return HkSolveResult(0.0, 0.0, 0.0, HkPoint(0.0, 0.0, 1.0, 1.0), 0, 0, True)
    g = g or HkGranularity()
    c12, c21 = to_standard_form(ch)
    a11, a22 = ch.a11, ch.a22
    floor = decoupled_floor(R_i, R_j, ch)
    rungs = _rung_points(g)
    args = (rungs, a11, a22, R_i, R_j, c12, c21, sigma2_self_conditioned, rho20_uses_sigma1)

    evals = 0
    probes = 0
    gin = cost_gin(R_i, R_j, ch)
    if gin.feasible:
        hi = gin.total_power
        best = (gin.p_tx1, gin.p_tx2,
                HkPoint(a11 * gin.p_tx1, a22 * gin.p_tx2, 1.0, 1.0), True)
        lo = floor * (1.0 - 1e-12)
    else:
        lo = floor
        Ptot = 2.0 * floor
        while True:
            probes += 1
            pt, n = _scan(Ptot, *args)
            evals += n
            if pt is not None:
                hi = Ptot
                best = (pt.P1 / a11, pt.P2 / a22, pt, False)
                break
            lo = Ptot
            Ptot *= 2.0
            if Ptot > max(floor, 1.0) * 1e12:
                raise RuntimeError("no achievable split found; region evaluation is broken")

    base = gin.total_power if gin.feasible else hi
    dmax = g.dPtot_max if g.dPtot_max is not None else max(base, 2.0 * floor) / 8.0
    dmin = g.dPtot_min if g.dPtot_min is not None else 1e-3 * floor

    first = gin.feasible
    while hi - lo > dmin:
        if first and hi - dmax > lo:
            probe = hi - dmax   # one coarse step off the seed, then bisect
        else:
            probe = 0.5 * (lo + hi)
        first = False
        probes += 1
        pt, n = _scan(probe, *args)
        evals += n
        if pt is not None:
            hi = probe
            best = (pt.P1 / a11, pt.P2 / a22, pt, False)
        else:
            lo = probe

    p1, p2, point, seeded = best
    return HkSolveResult(hi, p1, p2, point, evals, probes, seeded)


def cost_hk(R_i: float, R_j: float, ch: ChannelState,
            g: HkGranularity | None = None) -> LinkCost:
    """LinkCost view of `solve_hk` (both SBSs transmit, MBS idle)."""
    res = solve_hk(R_i, R_j, ch, g)
    return LinkCost.of(Strategy.GIWC, p_tx1=res.p_tx1, p_tx2=res.p_tx2)

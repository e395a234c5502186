"""Independent reference implementations used to cross-check the solvers.

Everything here is written from the constraint definitions, not from the
package's closed forms: grid scans with zooming refinement for the
continuous problems, a scalar re-derivation of the rate-region formulas,
and a bottom-up full-grid ladder for the split-search comparison.  Slow on
purpose; correctness over speed.
"""

from __future__ import annotations

import math

import numpy as np

from cacheic.model import ChannelState, snr_for_rate


def oracle_gin(R_i: float, R_j: float, ch: ChannelState,
               rounds: int = 8, pts: int = 2001):
    """Interference-as-noise minimum total power by 1-D scan over P_j.

    For each P_j, the cheapest P_i is pinned by user i's SINR constraint;
    user j's constraint is then checked.  Returns (total, P_i, P_j) or None
    when no scanned power satisfies both constraints.
    """
    s_i, s_j = snr_for_rate(R_i), snr_for_rate(R_j)
    if s_i == 0 and s_j == 0:
        return 0.0, 0.0, 0.0
    hi = 1.0
    best = None
    for _ in range(60):     # grow the box until something is feasible
        pj = np.linspace(0.0, hi, pts)
        pi = s_i * (1.0 + ch.a12 * pj) / ch.a11
        ok = ch.a22 * pj >= s_j * (1.0 + ch.a21 * pi)
        if ok.any():
            tot = pi + pj
            tot[~ok] = np.inf
            k = int(tot.argmin())
            best = (float(tot[k]), float(pi[k]), float(pj[k]))
            center = pj[k]
            width = hi / (pts - 1)
            break
        hi *= 4.0
        if hi > 1e14:
            return None
    for _ in range(rounds):
        lo = max(0.0, center - 2 * width)
        pj = np.linspace(lo, center + 2 * width, pts)
        pi = s_i * (1.0 + ch.a12 * pj) / ch.a11
        ok = ch.a22 * pj >= s_j * (1.0 + ch.a21 * pi)
        if ok.any():
            tot = pi + pj
            tot[~ok] = np.inf
            k = int(tot.argmin())
            if tot[k] < best[0]:
                best = (float(tot[k]), float(pi[k]), float(pj[k]))
                center = pj[k]
        width = 4 * width / (pts - 1)
    return best


def oracle_broadcast(R_plus: float, R_minus: float, a_plus: float,
                     a_minus: float, rounds: int = 8, pts: int = 2001):
    """Two-user superposition minimum by scan over the strong user's power."""
    s_p, s_m = snr_for_rate(R_plus), snr_for_rate(R_minus)
    if s_p == 0 and s_m == 0:
        return 0.0
    p_lo = s_p / a_plus
    width = max(p_lo, s_m / a_minus, 1.0)
    center = p_lo + width / 2
    best = math.inf
    for _ in range(rounds):
        pp = np.linspace(max(p_lo, center - width), center + width, pts)
        pm = s_m * (1.0 + a_minus * pp) / a_minus if s_m > 0 else np.zeros_like(pp)
        tot = pp + pm
        k = int(tot.argmin())
        if tot[k] < best:
            best = float(tot[k])
            center = float(pp[k])
        width = 4 * width / (pts - 1)
    return best


def oracle_miso(R_coop: float, a_sum: float, R_mbs: float, a_mbs: float):
    return snr_for_rate(R_coop) / a_sum + snr_for_rate(R_mbs) / a_mbs


def oracle_gic(R: float, ch: ChannelState, rounds: int = 8, pts: int = 601):
    """Coherent same-file transmission: 2-D zooming grid over amplitudes.

    Standard-form amplitudes (u, v) must give each receiver a combined
    amplitude whose square clears the SNR target; the objective is the
    physical power u^2/a11 + v^2/a22.
    """
    s = snr_for_rate(R)
    if s == 0:
        return 0.0
    c12, c21 = ch.c12, ch.c21
    rs = math.sqrt(s)
    corners = [rs]
    if c12 > 0:
        corners.append(rs / math.sqrt(c12))
    if c21 > 0:
        corners.append(rs / math.sqrt(c21))
    hi = 1.001 * max(corners)
    ug, vg = np.meshgrid(np.linspace(0, hi, pts), np.linspace(0, hi, pts),
                         indexing="ij")
    best = math.inf
    cu = cv = None
    width = hi / (pts - 1)
    for r in range(rounds):
        if r > 0:
            u_axis = np.linspace(max(0.0, cu - 2 * width), cu + 2 * width, pts)
            v_axis = np.linspace(max(0.0, cv - 2 * width), cv + 2 * width, pts)
            ug, vg = np.meshgrid(u_axis, v_axis, indexing="ij")
            width = 4 * width / (pts - 1)
        ok = ((ug + math.sqrt(c12) * vg) ** 2 >= s * (1 - 1e-12)) \
            & ((math.sqrt(c21) * ug + vg) ** 2 >= s * (1 - 1e-12))
        cost = ug * ug / ch.a11 + vg * vg / ch.a22
        cost[~ok] = np.inf
        k = np.unravel_index(cost.argmin(), cost.shape)
        if cost[k] < best:
            best = float(cost[k])
            cu, cv = float(ug[k]), float(vg[k])
    return best


def oracle_mimo_bc(R_i: float, R_j: float, ch: ChannelState,
                   pts: int = 361, rounds: int = 7):
    """Joint-transmission minimum: direct search over rank-1 beam angles.

    For each encoding order the pre-cancelled (second-encoded) user is
    interference-free, so given both beam directions the powers follow in
    closed form; the oracle scans both angles.  Rank-1 covariances per user
    are sufficient for two single-antenna receivers.
    """
    h = {1: np.array([math.sqrt(ch.a11), math.sqrt(ch.a12)]),
         2: np.array([math.sqrt(ch.a21), math.sqrt(ch.a22)])}
    s = {1: snr_for_rate(R_i), 2: snr_for_rate(R_j)}
    if s[1] == 0 and s[2] == 0:
        return 0.0

    def order_total(first: int, second: int) -> float:
        hf, hs = h[first], h[second]
        sf, ss = s[first], s[second]
        if ss == 0:
            A = float(hf @ hf)
            return sf / A
        th_f = np.linspace(0.0, math.pi, pts, endpoint=False)
        th_s = np.linspace(0.0, math.pi, pts, endpoint=False)
        best = math.inf
        cf = cs = None
        wf = ws = math.pi / pts
        for r in range(rounds):
            if r > 0:
                th_f = np.linspace(cf - 2 * wf, cf + 2 * wf, pts)
                th_s = np.linspace(cs - 2 * ws, cs + 2 * ws, pts)
                wf = 4 * wf / (pts - 1)
                ws = 4 * ws / (pts - 1)
            vf = np.stack([np.cos(th_f), np.sin(th_f)])
            vs = np.stack([np.cos(th_s), np.sin(th_s)])
            g_ss = (hs @ vs) ** 2
            g_fs = (hf @ vs) ** 2
            g_ff = (hf @ vf) ** 2
            with np.errstate(divide="ignore", invalid="ignore"):
                p_s = ss / g_ss
                tot = (p_s[None, :]
                       + sf * (1.0 + p_s[None, :] * g_fs[None, :])
                       / g_ff[:, None])
            tot[~np.isfinite(tot)] = np.inf
            k = np.unravel_index(tot.argmin(), tot.shape)
            if tot[k] < best:
                best = float(tot[k])
                cf, cs = float(th_f[k[0]]), float(th_s[k[1]])
        return best

    return min(order_total(1, 2), order_total(2, 1))


def hk_rates_scalar(P1: float, P2: float, l1: float, l2: float,
                    c12: float, c21: float,
                    sigma2_self_conditioned: bool = False,
                    rho20_uses_sigma1: bool = False):
    """Plain-float re-derivation of the five rate bounds at one point."""
    def C(x):
        return 0.5 * math.log2(1.0 + x)

    lb1, lb2 = 1.0 - l1, 1.0 - l2
    den1 = 1.0 + l1 * P1 + c12 * l2 * P2
    den2 = 1.0 + l2 * P2 + c21 * l1 * P1
    u1 = C(l1 * P1 / (1.0 + c12 * l2 * P2))
    u2 = C(l2 * P2 / (1.0 + c21 * l1 * P1))
    b1 = C(lb1 * P1 / den1)
    b2 = C(lb2 * P2 / den2)
    d1 = C(c12 * lb2 * P2 / den1)
    d2 = C(c21 * lb1 * P1 / den2)
    e1 = C((lb1 * P1 + c12 * lb2 * P2) / den1)
    e2 = C((lb2 * P2 + c21 * lb1 * P1) / den2)
    f1 = C(lb1 * P1 / (1.0 + l1 * P1 + c12 * P2))
    f2 = C(lb2 * P2 / (1.0 + l2 * P2 + c21 * P1))
    g1 = C(c12 * lb2 * P2 / (1.0 + c12 * l2 * P2))
    g2 = C(c21 * lb1 * P1 / (1.0 + c21 * l1 * P1))
    sig1 = min(b1, g2)
    sig2 = 0.0 if sigma2_self_conditioned else min(b2, g1)
    sig12 = min(e1, e2, b1 + b2, d1 + d2)
    rho1 = sig1 + u1
    rho2 = sig2 + u2
    rho12 = sig12 + u1 + u2
    rho10 = (2 * sig1 + 2 * u1 + u2 - max(0.0, sig1 - d2)
             + min(b2, f2 + max(0.0, d2 - sig1), d1, e1 - sig1))
    s20 = sig1 if rho20_uses_sigma1 else sig2
    rho20 = (2 * sig2 + 2 * u2 + u1 - max(0.0, sig2 - d1)
             + min(b1, f1 + max(0.0, d1 - sig2), d2, e2 - s20))
    return rho1, rho2, rho12, rho10, rho20


def hk_ladder_min(R_i: float, R_j: float, ch: ChannelState, step: float,
                  n_splits: int = 64, n_lam: int = 64):
    """Bottom-up exhaustive ladder: walk total power up in fixed steps,
    testing the full finest split grid at every level; first achievable
    level wins.  Returns (total, evaluations).

    Levels below the single-user floor cannot work (each direct link alone
    already needs its point-to-point power), so the walk starts there.
    """
    from cacheic.hk import region_rates

    s_i, s_j = snr_for_rate(R_i), snr_for_rate(R_j)
    floor = s_i / ch.a11 + s_j / ch.a22
    c12, c21 = ch.c12, ch.c21
    fr = np.arange(1, n_splits) / n_splits
    lam = np.arange(0, n_lam + 1) / n_lam
    f_g, l1_g, l2_g = np.meshgrid(fr, lam, lam, indexing="ij")
    f_g, l1_g, l2_g = f_g.ravel(), l1_g.ravel(), l2_g.ravel()
    evals = 0
    k = max(1, math.ceil(floor / step))
    while True:
        ptot = k * step
        p1 = ptot * f_g * ch.a11          # standard-form powers
        p2 = ptot * (1.0 - f_g) * ch.a22
        r1, r2, r12, r10, r20 = region_rates(p1, p2, l1_g, l2_g, c12, c21)
        ok = ((R_i <= r1) & (R_j <= r2) & (R_i + R_j <= r12)
              & (2 * R_i + R_j <= r10) & (R_i + 2 * R_j <= r20))
        evals += f_g.size
        if ok.any():
            return ptot, evals
        k += 1
        if ptot > 1e9 * max(floor, 1.0):
            raise RuntimeError("ladder ran away; instance looks unserveable")


def brute_expected(request_cost_fn, catalog, reverse: bool = True):
    """Independent demand-grid accumulation (plain sum, opposite order)."""
    n = catalog.n_files
    pairs = [(i, j) for i in range(n) for j in range(n)]
    if reverse:
        pairs = pairs[::-1]
    q_total = 0.0
    mbs_mass = 0.0
    for i, j in pairs:
        wt = catalog.popularity[i] * catalog.popularity[j]
        lc = request_cost_fn(i, j)
        q_total += wt * lc.total_power
        if lc.mbs_used:
            mbs_mass += wt
    return q_total, mbs_mass

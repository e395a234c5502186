"""Joint transmission when both SBSs cache both requested files.

With full availability the two SBSs act as a single two-antenna transmitter
and dirty paper coding serves both users at once.  Minimum sum power comes
from broadcast-to-multiple-access duality: for each encoding order the dual
problem is solved in closed form (the cleanly decoded user's rate constraint
is tight, and the remaining power is strictly increasing in that user's
power, so no interior search is needed), and the cheaper order wins.  Per-SBS
powers for reporting come from a beamforming reconstruction on the broadcast
side, rescaled so they sum exactly to the dual total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChannelState, LinkCost, Strategy, snr_for_rate


@dataclass(frozen=True)
class MimoSolveReport:
    """Dual-problem solution summary.

    q1/q2 are the dual covariance traces per user; their sum equals
    sum_power exactly (the duality trace identity).  order lists users in
    encoding position, first-encoded first.
    """

    sum_power: float
    q1: float
    q2: float
    order: tuple[int, int]
    iterations: int
    converged: bool


def _rows(ch: ChannelState):
    h1 = np.array([math.sqrt(ch.a11), math.sqrt(ch.a12)])
    h2 = np.array([math.sqrt(ch.a21), math.sqrt(ch.a22)])
    return h1, h2


def _dual_order(s_f: float, s_k: float, h_f: np.ndarray, h_k: np.ndarray):
    """Dual powers when user f is decoded under user k's interference."""
    A = float(h_f @ h_f)
    B = float(h_k @ h_k)
    G = A * B - float(h_f @ h_k) ** 2   # Gram determinant, >= 0
    q_k = s_k / B
    q_f = s_f * (1.0 + s_k) / (A + q_k * G)
    return q_f, q_k


def _resolve_eps(ch: ChannelState, eps: float | None) -> float:
    # zero cross gains are fine (decoupled limit); bound eps by the links
    # that actually carry signal
    gmin = min(g for g in (ch.a11, ch.a12, ch.a21, ch.a22) if g > 0)
    if eps is None:
        return 1e-3 * gmin
    if not (0 < eps < gmin):
        raise ValueError("eps must be positive and well below the smallest gain")
    return eps


def cost_mimo_bc(R_i: float, R_j: float, ch: ChannelState,
                 eps: float | None = None) -> MimoSolveReport:
    """Minimum sum power serving user 1 at R_i and user 2 at R_j jointly.

    eps is the virtual-antenna regularizer of the augmented formulation; it
    shifts the optimum only at O(eps^2), so it is validated but not applied.
    The closed form is exact at zero cross gains (parallel channels).
    """
    if R_i < 0 or R_j < 0:
        raise ValueError("rates must be non-negative")
    _resolve_eps(ch, eps)
    s1, s2 = snr_for_rate(R_i), snr_for_rate(R_j)
    h1, h2 = _rows(ch)
    q1_a, q2_a = _dual_order(s1, s2, h1, h2)    # user 1 encoded first
    q2_b, q1_b = _dual_order(s2, s1, h2, h1)    # user 2 encoded first
    tot_a = q1_a + q2_a
    tot_b = q1_b + q2_b
    if tot_b < tot_a:
        return MimoSolveReport(tot_b, q1_b, q2_b, (2, 1), 1, True)
    return MimoSolveReport(tot_a, q1_a, q2_a, (1, 2), 1, True)


def _beam_split(s_f: float, s_k: float, h_f: np.ndarray, h_k: np.ndarray):
    """Broadcast-side beamforming powers for encoding order (f, k).

    The last-encoded user k is immune to f's beam, so f uses matched
    filtering; k's beam direction trades its own gain against the
    interference it causes f, searched over the half circle.
    """
    A = float(h_f @ h_f)
    v_f = h_f / math.sqrt(A)
    if s_k == 0:
        return s_f / A, 0.0, v_f, v_f

    def total(theta):
        v = np.array([math.cos(theta), math.sin(theta)])
        gk = float(h_k @ v) ** 2
        if gk < 1e-300:
            return math.inf, 0.0, 0.0, v
        p_k = s_k / gk
        p_f = s_f * (1.0 + p_k * float(h_f @ v) ** 2) / A
        return p_f + p_k, p_f, p_k, v

    thetas = np.linspace(0.0, math.pi, 181, endpoint=False)
    best = min(range(181), key=lambda t: total(thetas[t])[0])
    lo = thetas[best] - math.pi / 181
    hi = thetas[best] + math.pi / 181
    for _ in range(60):     # golden-section polish
        m1 = hi - (hi - lo) * 0.6180339887498949
        m2 = lo + (hi - lo) * 0.6180339887498949
        if total(m1)[0] <= total(m2)[0]:
            hi = m2
        else:
            lo = m1
    _, p_f, p_k, v_k = total(0.5 * (lo + hi))
    return p_f, p_k, v_f, v_k


def mimo_link_cost(R_i: float, R_j: float, ch: ChannelState,
                   eps: float | None = None) -> LinkCost:
    """LinkCost view of the joint solver with a per-SBS power breakdown."""
    rep = cost_mimo_bc(R_i, R_j, ch, eps)
    h1, h2 = _rows(ch)
    s1, s2 = snr_for_rate(R_i), snr_for_rate(R_j)
    if rep.order == (2, 1):
        p_f, p_k, v_f, v_k = _beam_split(s2, s1, h2, h1)
    else:
        p_f, p_k, v_f, v_k = _beam_split(s1, s2, h1, h2)
    per_sbs = p_f * v_f ** 2 + p_k * v_k ** 2
    raw = float(per_sbs.sum())
    scale = rep.sum_power / raw if raw > 0 else 0.0
    return LinkCost.of(Strategy.MIMO,
                       p_tx1=float(per_sbs[0]) * scale,
                       p_tx2=float(per_sbs[1]) * scale)

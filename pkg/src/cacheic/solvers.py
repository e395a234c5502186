"""Closed-form minimum-power solvers for the single-shot transmission schemes.

Covers multicast, superposition broadcast, orthogonal split, cooperative MISO,
interference-as-noise (GIN), and the common-information interference channel
(GIc, solved via its KKT candidate set). The rate-splitting region search and
the MIMO broadcast solver live in hk.py and mimo.py.
"""

from __future__ import annotations

import math

from .model import ChannelState, LinkCost, Strategy, snr_for_rate

_NODE_STRATEGY = {
    "mbs": (Strategy.MC_MBS, Strategy.BC_MBS),
    "sbs1": (Strategy.MC_SBS, Strategy.BC_SBS),
    "sbs2": (Strategy.MC_SBS, Strategy.BC_SBS),
}


def _single_node_cost(strategy: Strategy, node: str, power: float) -> LinkCost:
    if node == "mbs":
        return LinkCost.of(strategy, p_mbs=power, mbs_used=True)
    if node == "sbs1":
        return LinkCost.of(strategy, p_tx1=power)
    if node == "sbs2":
        return LinkCost.of(strategy, p_tx2=power)
    raise ValueError(f"unknown node {node!r}")


def cost_multicast(R: float, a_minus: float, node: str = "mbs") -> LinkCost:
    """One transmitter sends one file to both users at the worst-user gain."""
    if a_minus <= 0:
        raise ValueError("a_minus must be > 0")
    power = snr_for_rate(R) / a_minus
    return _single_node_cost(_NODE_STRATEGY[node][0], node, power)


def cost_broadcast(R_plus: float, R_minus: float, a_plus: float, a_minus: float,
                   node: str = "mbs") -> LinkCost:
    """Superposition coding to two users from one transmitter.

    Inputs must already be ordered by gain (a_plus >= a_minus). The strong
    user cancels the weak user's layer, the weak user treats the strong
    layer as noise:
        P_+ = (2^(2R+) - 1)/a_+
        P_- = (2^(2R-) - 1) (1 + a_- P_+)/a_-
    """
    if a_plus < a_minus:
        raise ValueError("inputs must be ordered by gain (use order_by_gain)")
    p_plus = snr_for_rate(R_plus) / a_plus
    s_minus = snr_for_rate(R_minus)
    p_minus = 0.0 if s_minus == 0.0 else s_minus * (1.0 + a_minus * p_plus) / a_minus
    return _single_node_cost(_NODE_STRATEGY[node][1], node, p_plus + p_minus)


def cost_orthogonal(R_sbs: float, a_sbs: float, R_mbs: float, a_mbs: float,
                    sbs: int = 1) -> LinkCost:
    """One user served by an SBS, the other by the MBS, on orthogonal resources."""
    p_sbs = snr_for_rate(R_sbs) / a_sbs
    p_mbs = snr_for_rate(R_mbs) / a_mbs
    kwargs = {"p_tx1": p_sbs} if sbs == 1 else {"p_tx2": p_sbs}
    return LinkCost.of(Strategy.ORTH, p_mbs=p_mbs, mbs_used=True, **kwargs)


def cost_miso(R_coop: float, a_sum: float, R_mbs: float, a_mbs: float,
              a_parts: tuple[float, float] | None = None) -> LinkCost:
    """Both SBSs beamform one file to one user; the MBS serves the other.

    Matched combining adds the power gains, so the cooperative part needs
    (2^(2R)-1)/a_sum. When the two individual gains are given, the per-SBS
    share follows the matched-filter weights (proportional to each gain);
    otherwise the split is reported as equal halves.
    """
    p_coop = snr_for_rate(R_coop) / a_sum
    p_mbs = snr_for_rate(R_mbs) / a_mbs
    if a_parts is None:
        p1 = p2 = p_coop / 2.0
    else:
        g1, g2 = a_parts
        p1 = p_coop * g1 / (g1 + g2)
        p2 = p_coop * g2 / (g1 + g2)
    return LinkCost.of(Strategy.MISO, p_tx1=p1, p_tx2=p2, p_mbs=p_mbs, mbs_used=True)


def gin_alpha(R_i: float, R_j: float, ch: ChannelState) -> float:
    """Feasibility discriminant of the interference-as-noise scheme."""
    return ch.a22 + (ch.a21 * ch.a12 / ch.a11) * snr_for_rate(R_j) * (1.0 - 2.0 ** (2.0 * R_i))


def cost_gin(R_i: float, R_j: float, ch: ChannelState) -> LinkCost:
    """Each SBS serves its own user, treating the other's signal as noise.

    Feasible iff alpha > 0; otherwise there are no finite powers meeting both
    SINR targets and the caller falls back to the MBS.
    """
    alpha = gin_alpha(R_i, R_j, ch)
    if alpha <= 0.0:
        return LinkCost.infeasible(Strategy.GIN)
    s_i = snr_for_rate(R_i)
    s_j = snr_for_rate(R_j)
    p_j = s_j * ((ch.a21 / ch.a11) * s_i + 1.0) / alpha
    p_i = s_i * (ch.a12 * p_j + 1.0) / ch.a11
    return LinkCost.of(Strategy.GIN, p_tx1=p_i, p_tx2=p_j)


def _gic_candidates(K: float, a11: float, a22: float,
                    c12: float, c21: float) -> list[tuple[float, float]]:
    """Stationary points and corner points of the common-message problem.

    In amplitude coordinates r_n = sqrt(P~_n) the problem is a convex QP:
        min r1^2/a11 + r2^2/a22
        s.t. r1 + sqrt(c12) r2 >= K,  sqrt(c21) r1 + r2 >= K,  r >= 0
    so the optimum is among: both constraints active, one active, or an axis
    corner.
    """
    s12 = math.sqrt(c12)
    s21 = math.sqrt(c21)
    out: list[tuple[float, float]] = []

    # both multipliers active: 2x2 linear system in (lam1, lam2)
    m11 = a11 + a22 * c12
    m12 = a11 * s21 + a22 * s12
    m22 = a22 + a11 * c21
    det = m11 * m22 - m12 * m12
    if abs(det) > 1e-14 * max(m11 * m22, m12 * m12, 1.0):
        lam1 = (2.0 * K * m22 - 2.0 * K * m12) / det
        lam2 = (2.0 * K * m11 - 2.0 * K * m12) / det
        if lam1 >= 0.0 and lam2 >= 0.0:
            out.append((0.25 * a11 ** 2 * (lam1 + lam2 * s21) ** 2,
                        0.25 * a22 ** 2 * (lam1 * s12 + lam2) ** 2))

    # only the first constraint active
    lam1 = 2.0 * K / m11
    out.append((0.25 * a11 ** 2 * lam1 ** 2,
                0.25 * a22 ** 2 * lam1 ** 2 * c12))

    # only the second constraint active
    lam2 = 2.0 * K / m22
    out.append((0.25 * a11 ** 2 * lam2 ** 2 * c21,
                0.25 * a22 ** 2 * lam2 ** 2))

    # axis corners (all power on one transmitter)
    K2 = K * K
    if c12 > 0.0:
        out.append((0.0, max(K2, K2 / c12)))
    if c21 > 0.0:
        out.append((max(K2, K2 / c21), 0.0))
    return out


def cost_gic(R: float, ch: ChannelState) -> LinkCost:
    """Both SBSs carry the same file to both users, amplitudes adding coherently."""
    if R == 0.0:
        return LinkCost.of(Strategy.GIC)
    K = math.sqrt(snr_for_rate(R))
    c12, c21 = ch.c12, ch.c21
    tol = 1e-9 * K
    best = None
    for p1s, p2s in _gic_candidates(K, ch.a11, ch.a22, c12, c21):
        r1 = math.sqrt(p1s)
        r2 = math.sqrt(p2s)
        if r1 + math.sqrt(c12) * r2 < K - tol:
            continue
        if math.sqrt(c21) * r1 + r2 < K - tol:
            continue
        phys = p1s / ch.a11 + p2s / ch.a22
        if best is None or phys < best[0]:
            best = (phys, p1s, p2s)
    if best is None:
        raise ValueError("no feasible common-message point (needs a coupled channel)")
    _, p1s, p2s = best
    return LinkCost.of(Strategy.GIC, p_tx1=p1s / ch.a11, p_tx2=p2s / ch.a22)

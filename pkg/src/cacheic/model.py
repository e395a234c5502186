"""Domain types for the two-cell cached interference network.

Two small base stations (SBS1, SBS2) with per-file caches serve users u1, u2;
a macro base station (MBS) holds the whole library. Gains a_nm are linear,
noise-normalized power gains from transmitter m to user n (m = 0 is the MBS).
All powers are linear watts on the same normalization; dB only appears at the
reporting boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


def capacity(x: float) -> float:
    """Gaussian capacity C(x) = 0.5*log2(1+x) per complex dimension."""
    return 0.5 * math.log2(1.0 + x)


def snr_for_rate(rate: float) -> float:
    """Inverse of capacity: the SNR needed to carry `rate`, 2^(2R) - 1."""
    return 2.0 ** (2.0 * rate) - 1.0


def to_db(p: float) -> float:
    return 10.0 * math.log10(p)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class FileCatalog:
    """Library of N files with per-file rate requirement and request probability."""

    rates: tuple[float, ...]
    popularity: tuple[float, ...]

    def __post_init__(self):
        if len(self.rates) != len(self.popularity):
            raise ValueError("rates and popularity must have equal length")
        if len(self.rates) < 1:
            raise ValueError("catalog needs at least one file")
        if any(r < 0 or not math.isfinite(r) for r in self.rates):
            raise ValueError("rates must be finite and >= 0")
        if any(q < 0 or q > 1 for q in self.popularity):
            raise ValueError("popularities must lie in [0, 1]")
        if abs(math.fsum(self.popularity) - 1.0) > 1e-9:
            raise ValueError("popularities must sum to 1 (use .normalized())")

    @property
    def n_files(self) -> int:
        return len(self.rates)

    @staticmethod
    def normalized(rates: tuple[float, ...], popularity: tuple[float, ...]) -> "FileCatalog":
        """Build a catalog rescaling popularities to sum exactly to 1."""
        total = math.fsum(popularity)
        if total <= 0:
            raise ValueError("popularities must have positive sum")
        return FileCatalog(tuple(rates), tuple(q / total for q in popularity))

    @property
    def max_rate(self) -> float:
        return max(self.rates)


@dataclass(frozen=True)
class ChannelState:
    """The six link gains of one network realization.

    Direct and MBS gains must be strictly positive; the cross gains a12, a21
    may be exactly zero (decoupled cells, the low end of interference sweeps).
    """

    a11: float
    a12: float
    a21: float
    a22: float
    a10: float
    a20: float

    def __post_init__(self):
        for name in ("a11", "a22", "a10", "a20"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 1e-12):
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        for name in ("a12", "a21"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def c12(self) -> float:
        return self.a12 / self.a22

    @property
    def c21(self) -> float:
        return self.a21 / self.a11

    # worst-user gains a_{-m} per transmitter, for multicast-style costs
    @property
    def a_minus_mbs(self) -> float:
        return min(self.a10, self.a20)

    @property
    def a_plus_mbs(self) -> float:
        return max(self.a10, self.a20)

    def a_minus_sbs(self, n: int) -> float:
        if n == 1:
            return min(self.a11, self.a21)
        if n == 2:
            return min(self.a12, self.a22)
        raise ValueError("SBS index must be 1 or 2")

    def user_gain(self, user: int, sbs: int) -> float:
        """Gain from SBS `sbs` to user `user` (both 1-based)."""
        return {(1, 1): self.a11, (1, 2): self.a12,
                (2, 1): self.a21, (2, 2): self.a22}[(user, sbs)]

    def mbs_gain(self, user: int) -> float:
        return self.a10 if user == 1 else self.a20

    def swap_sbs(self) -> "ChannelState":
        """Relabel the transmitters (SBS1 <-> SBS2), keeping users fixed."""
        return ChannelState(a11=self.a12, a12=self.a11,
                            a21=self.a22, a22=self.a21,
                            a10=self.a10, a20=self.a20)

    def swap_users(self) -> "ChannelState":
        """Relabel the users (u1 <-> u2), keeping transmitters fixed."""
        return ChannelState(a11=self.a21, a12=self.a22,
                            a21=self.a11, a22=self.a12,
                            a10=self.a20, a20=self.a10)


def to_standard_form(ch: ChannelState) -> tuple[float, float]:
    """Cross gains of the standard-form interference channel.

    Standard-form powers convert back to physical ones via P(1) = P~(1)/a11,
    P(2) = P~(2)/a22.
    """
    return ch.c12, ch.c21


def order_by_gain(rA: float, aA: float, rB: float, aB: float) -> tuple[float, float, float, float]:
    """Sort two (rate, gain) pairs as (R_plus, a_plus, R_minus, a_minus).

    Rates travel with their user's gain; an exact gain tie keeps the first
    pair as "+".
    """
    if aA >= aB:
        return rA, aA, rB, aB
    return rB, aB, rA, aA


@dataclass(frozen=True)
class CacheAllocation:
    """Binary placement vectors x1, x2 over the library, each with at most M ones."""

    x1: tuple[int, ...]
    x2: tuple[int, ...]
    M: int

    def __post_init__(self):
        if len(self.x1) != len(self.x2):
            raise ValueError("placement vectors must have equal length")
        for x in (self.x1, self.x2):
            if any(b not in (0, 1) for b in x):
                raise ValueError("placement entries must be 0 or 1")
            if sum(x) > self.M:
                raise ValueError(f"cache holds {sum(x)} files, capacity is {self.M}")

    @staticmethod
    def from_sets(files1, files2, n_files: int, M: int) -> "CacheAllocation":
        f1, f2 = set(files1), set(files2)
        for f in f1 | f2:
            if not 0 <= f < n_files:
                raise ValueError(f"file index {f} outside 0..{n_files - 1}")
        x1 = tuple(1 if i in f1 else 0 for i in range(n_files))
        x2 = tuple(1 if i in f2 else 0 for i in range(n_files))
        return CacheAllocation(x1, x2, M)

    @property
    def n_files(self) -> int:
        return len(self.x1)

    def files(self, n: int) -> frozenset[int]:
        x = self.x1 if n == 1 else self.x2
        return frozenset(i for i, b in enumerate(x) if b)

    def has(self, file_index: int, sbs: int) -> bool:
        return bool((self.x1 if sbs == 1 else self.x2)[file_index])

    def swapped(self) -> "CacheAllocation":
        return CacheAllocation(self.x2, self.x1, self.M)


@dataclass(frozen=True)
class Demand:
    """File indices requested by u1 and u2 (0-based)."""

    i: int
    j: int

    def validate(self, n_files: int) -> None:
        if not (0 <= self.i < n_files and 0 <= self.j < n_files):
            raise ValueError(f"demand ({self.i}, {self.j}) outside library of {n_files}")


class Strategy(enum.Enum):
    GIC = "GIc"
    GIN = "GIN"
    MC_MBS = "MC_MBS"
    MC_SBS = "MC_SBS"
    BC_MBS = "BC_MBS"
    BC_SBS = "BC_SBS"
    MIMO = "MIMO"
    ORTH = "ORTH"
    MISO = "MISO"
    GIWC = "GIwc"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LinkCost:
    """Minimum power for one request, with the per-transmitter breakdown."""

    strategy: Strategy
    total_power: float
    p_tx1: float
    p_tx2: float
    p_mbs: float
    mbs_used: bool
    feasible: bool = True

    @staticmethod
    def of(strategy: Strategy, p_tx1: float = 0.0, p_tx2: float = 0.0,
           p_mbs: float = 0.0, mbs_used: bool = False) -> "LinkCost":
        return LinkCost(strategy, p_tx1 + p_tx2 + p_mbs,
                        p_tx1, p_tx2, p_mbs, mbs_used, feasible=True)

    @staticmethod
    def infeasible(strategy: Strategy, mbs_used: bool = False) -> "LinkCost":
        return LinkCost(strategy, math.inf, 0.0, 0.0, 0.0, mbs_used, feasible=False)

    @property
    def max_sbs_power(self) -> float:
        return max(self.p_tx1, self.p_tx2)

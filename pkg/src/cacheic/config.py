"""Run configuration files, result serialization, and run manifests.

Configs are INI or JSON (picked by extension) with the same section and key
names.  Catalog entries are ``f1 = rate, popularity`` rows numbered from 1.
CSV output is fixed-format so identical configs and seeds reproduce files
byte for byte; dB values are rounded to six decimals at serialization only.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO, Any

from .dispatch import Mode, SolverConfig
from .hk import HkGranularity
from .model import CacheAllocation, FileCatalog
from .scenario import FadingConfig, MaxPowerPolicy, ScenarioConfig, SweepRow

CSV_HEADER = ("mean_c,mode,allocator,alloc_sbs1,alloc_sbs2,q_linear,q_db,"
              "mbs_usage_prob,outage_rate,n_samples,seed")


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    outage_target: float
    sha256: str
    path: str


@dataclass
class RunManifest:
    command: str
    config_path: str
    config_sha256: str
    seed: int
    version: str
    wall_time_s: float
    outputs: list[str]


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "on"}:
        return True
    if text in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    as_float = float(str(value))
    if as_float != int(as_float):
        raise ValueError(f"not an integer: {value!r}")
    return int(as_float)


def _as_floats(value: Any) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        return tuple(float(p) for p in parts)
    return tuple(float(v) for v in value)


def _as_strs(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        return tuple(p.strip() for p in value.split(",") if p.strip())
    return tuple(str(v) for v in value)


def _read_sections(path: Path) -> dict[str, dict[str, Any]]:
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
        if not isinstance(data, dict):
            raise ValueError("top-level JSON config must be an object")
        # match configparser, which lowercases option names
        return {str(k).lower(): {str(kk).lower(): vv for kk, vv in v.items()}
                for k, v in data.items()}
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read_string(path.read_text())
    return {name.lower(): dict(parser.items(name)) for name in parser.sections()}


def _parse_catalog(section: dict[str, Any]) -> FileCatalog:
    entries: dict[int, tuple[float, float]] = {}
    for key, value in section.items():
        if key == "normalize":
            continue
        if not (key.startswith("f") and key[1:].isdigit()):
            raise ValueError(f"unexpected catalog key {key!r}; use f1, f2, ...")
        pair = _as_floats(value)
        if len(pair) != 2:
            raise ValueError(f"catalog entry {key} needs 'rate, popularity'")
        entries[int(key[1:])] = (pair[0], pair[1])
    if not entries:
        raise ValueError("catalog section has no files")
    if sorted(entries) != list(range(1, len(entries) + 1)):
        raise ValueError("catalog files must be numbered f1..fN without gaps")
    rates = tuple(entries[k][0] for k in sorted(entries))
    pops = tuple(entries[k][1] for k in sorted(entries))
    if _as_bool(section.get("normalize", False)):
        return FileCatalog.normalized(rates, pops)
    return FileCatalog(rates=rates, popularity=pops)


def _parse_files(label: str, n_files: int) -> frozenset[int]:
    files = set()
    for part in str(label).split("|"):
        part = part.strip()
        if not part:
            continue
        idx = int(part)
        if not 1 <= idx <= n_files:
            raise ValueError(f"file id {idx} outside 1..{n_files}")
        files.add(idx - 1)
    return frozenset(files)


def files_label(files: frozenset[int]) -> str:
    """1-based '1|3' form of a cache content set."""
    return "|".join(str(k + 1) for k in sorted(files))


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    sec = _read_sections(path)
    if "catalog" not in sec:
        raise ValueError("config needs a [catalog] section")
    catalog = _parse_catalog(sec["catalog"])

    ch = sec.get("channel", {})
    fading = FadingConfig(
        mean_a11=float(ch.get("mean_a11", 1.0)),
        mean_a22=float(ch.get("mean_a22", 1.0)),
        mean_a10=float(ch.get("mean_a10", 0.01)),
        mean_a20=float(ch.get("mean_a20", 0.01)),
        sigma=float(ch.get("sigma", 0.5)),
        faded_links=frozenset(_as_strs(ch.get("faded_links", "sbs-user"))),
    )

    cache = sec.get("cache", {})
    M = _as_int(cache.get("m", 2))
    explicit: tuple[tuple[str, CacheAllocation], ...] = ()
    if "alloc_sbs1" in cache or "alloc_sbs2" in cache:
        if not ("alloc_sbs1" in cache and "alloc_sbs2" in cache):
            raise ValueError("fixed placement needs both alloc_sbs1 and alloc_sbs2")
        alloc = CacheAllocation.from_sets(
            _parse_files(cache["alloc_sbs1"], catalog.n_files),
            _parse_files(cache["alloc_sbs2"], catalog.n_files),
            catalog.n_files, M)
        explicit = (("fixed", alloc),)

    sw = sec.get("sweep", {})
    grid = _as_floats(sw.get("grid", (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)))
    modes = tuple(Mode[m.upper()] for m in _as_strs(sw.get("modes", "ca, nca")))
    allocators = _as_strs(sw.get("allocators", "exhaustive"))
    n_samples = _as_int(sw.get("n_samples", 10_000))

    power = sec.get("power", {})
    outage_target = float(power.get("outage_target", 1e-5))
    policy = None
    if _as_bool(power.get("enabled", False)):
        if "p_max" not in power:
            raise ValueError("power cap enabled but p_max missing; calibrate first")
        policy = MaxPowerPolicy(enabled=True, p_max=float(power["p_max"]),
                                outage_target=outage_target)

    hk = sec.get("hk", {})
    grain = None
    if hk:
        kwargs: dict[str, float] = {}
        names = {"dptot_max": "dPtot_max", "dptot_min": "dPtot_min",
                 "dp_max": "dP_max", "dp_min": "dP_min",
                 "dlam_max": "dLam_max", "dlam_min": "dLam_min"}
        for key, value in hk.items():
            if key not in names:
                raise ValueError(f"unknown [hk] key {key!r}")
            kwargs[names[key]] = float(value)
        grain = HkGranularity(**kwargs)

    solver_sec = sec.get("solver", {})
    eps = solver_sec.get("mimo_eps")
    solver = SolverConfig(hk=grain, mimo_eps=float(eps) if eps is not None else None)

    run = sec.get("run", {})
    scenario = ScenarioConfig(
        catalog=catalog, M=M, modes=modes, allocators=allocators,
        explicit=explicit, fading=fading, grid=grid, n_samples=n_samples,
        policy=policy, solver=solver,
        seed=_as_int(run.get("seed", 0)), threads=_as_int(run.get("threads", 1)))
    return RunConfig(scenario=scenario, outage_target=outage_target,
                     sha256=digest, path=str(path))


def row_to_dict(row: SweepRow) -> dict[str, Any]:
    """Row as plain values; dB rounded to 6 decimals here and nowhere else."""
    return {
        "mean_c": row.mean_c,
        "mode": str(row.mode),
        "allocator": row.allocator,
        "alloc_sbs1": files_label(row.allocation.files(1)),
        "alloc_sbs2": files_label(row.allocation.files(2)),
        "q_linear": row.q_linear,
        "q_db": round(row.q_db, 6),
        "mbs_usage_prob": row.mbs_usage_prob,
        "outage_rate": row.outage_fallback_rate,
        "n_samples": row.n_samples,
        "seed": row.seed,
    }


def write_rows_csv(rows: list[SweepRow], fh: IO[str]) -> None:
    fh.write(CSV_HEADER + "\n")
    for row in rows:
        d = row_to_dict(row)
        fh.write(",".join([
            format(d["mean_c"], ".10g"),
            d["mode"],
            d["allocator"],
            d["alloc_sbs1"],
            d["alloc_sbs2"],
            format(d["q_linear"], ".10g"),
            f"{d['q_db']:.6f}",
            format(d["mbs_usage_prob"], ".10g"),
            format(d["outage_rate"], ".10g"),
            str(d["n_samples"]),
            str(d["seed"]),
        ]) + "\n")


def write_rows_json(rows: list[SweepRow], fh: IO[str]) -> None:
    json.dump([row_to_dict(r) for r in rows], fh, indent=2)
    fh.write("\n")


def write_manifest(manifest: RunManifest, out_path: str | Path) -> Path:
    target = Path(f"{out_path}.manifest.json")
    target.write_text(json.dumps(asdict(manifest), indent=2) + "\n")
    return target


class RunTimer:
    """Wall-clock scope for manifests."""

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.wall_time_s = time.perf_counter() - self._t0
        return False

"""Seeded experiment harness: random cubes, growth and energy trials,
conjecture probes, and append-only campaign logs.

Every trial is a pure function of (spec, parameters); randomness enters
only through random_cube(seed).  Records serialize to JSON lines with
exact integers as decimal strings, and a campaign keyed on (name,
spec-hash, seed) can be re-run on top of an existing log without
recomputing or duplicating anything.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
import csv
import random

from .cube import (
    ADDITIVE,
    DEFAULT_ENUM_CAP,
    MULTIPLICATIVE,
    CubeSpec,
    FiniteSet,
    enumerate_cube,
    is_proper,
)
from .energy import energy_pair
from .floors import clears_floor
from .numeric import INTEGERS, PRIME_FIELD, AmbientRing, CapExceededError
from .setops import DEFAULT_PAIR_CAP, DIFF, PROD, RATIO, SUM, pairwise_set, pairwise_size

TARGET_OPS = {"QQ": PROD, "Q/Q": RATIO, "Q+Q": SUM, "Q-Q": DIFF}

# Default generator distributions, chosen so that random cubes are proper
# with overwhelming probability while all arithmetic stays far below the
# magnitude cap.
DEFAULT_DISTRIBUTIONS = {
    (INTEGERS, ADDITIVE): "uniform(1..1099511627776)",  # 40-bit
    (INTEGERS, MULTIPLICATIVE): "uniform(2..65536)",  # 16-bit
}

_DIST_RE = re.compile(r"^(powers)\((\d+)\)$|^(uniform)\((-?\d+)\.\.(-?\d+)\)$")


def parse_distribution(text: str):
    m = _DIST_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse distribution {text!r}")
    if m.group(1):
        base = int(m.group(2))
        if base < 2:
            raise ValueError("powers base must be at least 2")
        return ("powers", base)
    lo, hi = int(m.group(4)), int(m.group(5))
    if lo > hi:
        raise ValueError("empty uniform range")
    return ("uniform", lo, hi)


def default_distribution(ring: AmbientRing, mode: str) -> str:
    if ring.kind == PRIME_FIELD:
        return f"uniform(1..{ring.modulus - 1})"
    return DEFAULT_DISTRIBUTIONS[(INTEGERS, mode)]


def random_cube(
    ring: AmbientRing,
    d: int,
    digits,
    mode: str,
    distribution: str | None = None,
    seed: int = 0,
) -> CubeSpec:
    """Deterministic cube draw: a0 first (additive mode), then generators."""
    if isinstance(digits, int):
        digits = tuple(range(digits + 1))
    if distribution is None:
        distribution = default_distribution(ring, mode)
    parsed = parse_distribution(distribution)
    rng = random.Random(seed)

    def draw() -> int:
        if parsed[0] == "uniform":
            value = rng.randint(parsed[1], parsed[2])
            while ring.kind == PRIME_FIELD and value % ring.modulus == 0:
                value = rng.randint(parsed[1], parsed[2])
            return value
        raise AssertionError

    if parsed[0] == "powers":
        base = parsed[1]
        gens = tuple(base**j for j in range(d))
        a0 = 0 if mode == ADDITIVE else 1
    else:
        a0 = draw() if mode == ADDITIVE else 1
        gens = tuple(draw() for _ in range(d))
    return CubeSpec(ring=ring, a0=a0, generators=gens, digits=digits, mode=mode)


def random_proper_cube(
    ring: AmbientRing,
    d: int,
    digits,
    mode: str,
    distribution: str | None = None,
    seed: int = 0,
    max_tries: int = 50,
    *,
    cap: int = DEFAULT_ENUM_CAP,
) -> CubeSpec:
    """Redraw deterministically (seed, seed + step, ...) until proper."""
    for t in range(max_tries):
        spec = random_cube(ring, d, digits, mode, distribution, seed + t * 1000003)
        if is_proper(spec, cap=cap):
            return spec
    raise RuntimeError(f"no proper cube found after {max_tries} draws")


@dataclass
class ExperimentRecord:
    name: str
    spec: dict
    seed: int
    measured: dict
    bounds: dict
    exponents: dict
    flag: str
    wall_ms: float
    timestamp: str

    @property
    def key(self) -> str:
        return record_key(self.name, self.spec, self.seed)

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "spec": self.spec,
                "seed": self.seed,
                "measured": {k: str(v) for k, v in self.measured.items()},
                "bounds": self.bounds,
                "exponents": self.exponents,
                "flag": self.flag,
                "wall_ms": self.wall_ms,
                "timestamp": self.timestamp,
                "key": self.key,
            }
        )

    @classmethod
    def from_json_line(cls, line: str) -> "ExperimentRecord":
        data = json.loads(line)
        return cls(
            name=data["name"],
            spec=data["spec"],
            seed=int(data["seed"]),
            measured={k: int(v) for k, v in data["measured"].items()},
            bounds=data["bounds"],
            exponents=data["exponents"],
            flag=data["flag"],
            wall_ms=data["wall_ms"],
            timestamp=data["timestamp"],
        )

    def comparable(self) -> dict:
        """Everything except wall-clock fields, for determinism checks."""
        data = json.loads(self.to_json_line())
        data.pop("wall_ms")
        data.pop("timestamp")
        return data


def record_key(name: str, spec: dict, seed: int) -> str:
    blob = json.dumps({"name": name, "seed": seed, "spec": spec}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def growth_trial(
    spec: CubeSpec,
    targets: tuple[str, ...] | None = None,
    seed: int = 0,
    floors: dict[str, Fraction] | None = None,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    pair_cap: int = DEFAULT_PAIR_CAP,
) -> ExperimentRecord:
    """Measure |Q op Q| for the requested targets and log the theorem-shape
    bound values next to them.  All bounds are report-only; when exact
    rational floors are supplied the record is flagged pass/fail by the
    integer comparison measured^den >= |Q|^num."""
    if targets is None:
        targets = ("QQ", "Q/Q") if spec.mode == ADDITIVE else ("Q+Q", "Q-Q")
    start = time.perf_counter()
    q_set = enumerate_cube(spec, cap=enum_cap)
    q = len(q_set)
    measured: dict = {"|Q|": q}
    bounds: dict = {}
    exponents: dict = {}
    flag = "report"
    if q < 2:
        flag = "degenerate"
    else:
        for t in targets:
            size = pairwise_size(TARGET_OPS[t], q_set, q_set, cap=pair_cap)
            measured[t] = size
            exponents[t] = math.log(size) / math.log(q)
        _growth_bounds(spec, q, targets, bounds)
        if floors:
            ok = all(
                clears_floor(measured[t], q, floors[t]) for t in targets if t in floors
            )
            flag = "pass" if ok else "fail"
            for t, fl in floors.items():
                if t in targets:
                    bounds[f"{t}_floor"] = fl.numerator / fl.denominator
    return ExperimentRecord(
        name=f"growth_{spec.mode}",
        spec={"cube": spec.to_json_dict(), "targets": list(targets)},
        seed=seed,
        measured=measured,
        bounds=bounds,
        exponents=exponents,
        flag=flag,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        timestamp=_now(),
    )


def _growth_bounds(spec: CubeSpec, q: int, targets, bounds: dict) -> None:
    ring = spec.ring
    interval = spec.has_interval_digits
    if spec.mode == ADDITIVE:
        if ring.kind == INTEGERS:
            if interval:
                bounds["QQ_shape"] = q ** (100 / 79)
                bounds["Q/Q_shape"] = q ** (14 / 11)
            else:
                bounds["QD_shape"] = q ** (26 / 25)
        else:
            p = ring.modulus
            if interval:
                bounds["fp_branch"] = min(q ** (6 / 5), math.sqrt(q * p))
                if q <= p ** (36 / 67):
                    bounds["fp_second"] = q ** (11 / 9)
            else:
                bounds["QD_shape"] = min(q ** (26 / 25), q**0.4 * math.sqrt(p))
    else:
        if ring.kind == INTEGERS:
            bounds["Q+Q_shape"] = q ** (100 / 79)
            bounds["Q-Q_shape"] = q ** (14 / 11)
        else:
            p = ring.modulus
            bounds["fp_branch"] = min(q ** (31 / 30), math.sqrt(q * p))


def energy_bound_trial(
    spec: CubeSpec,
    seed: int = 0,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    pair_cap: int = DEFAULT_PAIR_CAP,
) -> ExperimentRecord:
    """Opposite-operation pair energy of a cube: E^x of an additive cube,
    E^+ of a multiplicative one, with the theorem-shape ceilings (constant
    1) recorded for the reader."""
    start = time.perf_counter()
    q_set = enumerate_cube(spec, cap=enum_cap)
    q = len(q_set)
    measured: dict = {"|Q|": q}
    bounds: dict = {}
    exponents: dict = {}
    flag = "report"
    if q < 2:
        flag = "degenerate"
    else:
        other = MULTIPLICATIVE if spec.mode == ADDITIVE else ADDITIVE
        value = energy_pair(other, q_set, cap=pair_cap).value
        key = "E_times" if other == MULTIPLICATIVE else "E_plus"
        measured[key] = value
        exponents[key] = math.log(value) / math.log(q)
        exponents["deficiency"] = 3.0 - exponents[key]
        if spec.mode == ADDITIVE and spec.has_interval_digits:
            h = spec.height
            shape = math.log(2 * h + 1, h + 1)
            if spec.ring.kind == INTEGERS:
                bounds["E_times_shape"] = q ** (1.5 + shape)
            else:
                p = spec.ring.modulus
                bounds["main_term"] = q ** (3 + shape) / p
                bounds["branch_a"] = q ** (2 + 2 * shape / 3)
                bounds["branch_b"] = q ** (1 + 1.5 * shape)
                bounds["E_times_shape"] = bounds["main_term"] + min(
                    bounds["branch_a"], bounds["branch_b"]
                )
        elif spec.mode == MULTIPLICATIVE and spec.ring.kind == PRIME_FIELD:
            p = spec.ring.modulus
            bounds["small_side_limit"] = p ** (13 / 23)
    return ExperimentRecord(
        name=f"energy_{spec.mode}",
        spec={"cube": spec.to_json_dict()},
        seed=seed,
        measured=measured,
        bounds=bounds,
        exponents=exponents,
        flag=flag,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        timestamp=_now(),
    )


def conjecture_probe(
    Q: FiniteSet,
    m: int,
    n_max: int,
    seed: int = 0,
    *,
    pair_cap: int = DEFAULT_PAIR_CAP,
) -> ExperimentRecord:
    """Smallest n <= n_max with |Q^n| >= |Q|^m, walking Q, Q^2, Q^3, ...

    A cap overflow mid-trajectory keeps the prefix and flags the record.
    """
    if m < 1 or n_max < 1:
        raise ValueError("m and n_max must be at least 1")
    start = time.perf_counter()
    size_q = len(Q)
    target = size_q**m
    measured: dict = {"|Q|": size_q, "target": target}
    flag = "not_reached"
    found = None
    acc = Q
    n = 1
    measured["|Q^1|"] = size_q
    if size_q >= target:
        found = 1
    else:
        while n < n_max:
            n += 1
            try:
                acc = pairwise_set(PROD, acc, Q, cap=pair_cap)
            except CapExceededError:
                n -= 1
                flag = "cap_exceeded"
                break
            measured[f"|Q^{n}|"] = len(acc)
            if len(acc) >= target:
                found = n
                break
    if found is not None:
        measured["n"] = found
        flag = "pass"
    return ExperimentRecord(
        name="conjecture_probe",
        spec={"set_size": size_q, "m": m, "n_max": n_max},
        seed=seed,
        measured=measured,
        bounds={},
        exponents={},
        flag=flag,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        timestamp=_now(),
    )


# --- campaigns ---------------------------------------------------------

_GROWTH_KINDS = {"growth_additive": ADDITIVE, "growth_multiplicative": MULTIPLICATIVE}
_ENERGY_KINDS = {"energy_additive": ADDITIVE, "energy_multiplicative": MULTIPLICATIVE}


def _campaign_rings(config: dict) -> list[dict]:
    rings: list[dict] = []
    if config.get("includeIntegers", True):
        rings.append({"kind": INTEGERS})
    for p in config.get("pList", []):
        rings.append({"kind": PRIME_FIELD, "p": int(p)})
    return rings


def expand_campaign(config: dict) -> list[dict]:
    """The full deterministic task list for a campaign config."""
    d_lo, d_hi = config.get("dRange", [2, 6])
    h_lo, h_hi = config.get("hRange", [1, 1])
    seeds = config.get("seeds", [0])
    tasks: list[dict] = []
    for name in config.get("experiments", []):
        if name in _GROWTH_KINDS or name in _ENERGY_KINDS:
            mode = _GROWTH_KINDS.get(name) or _ENERGY_KINDS[name]
            for ring_desc in _campaign_rings(config):
                for d in range(d_lo, d_hi + 1):
                    for h in range(h_lo, h_hi + 1):
                        if mode == MULTIPLICATIVE and h != 1:
                            continue
                        for seed in seeds:
                            tasks.append(
                                {
                                    "kind": name,
                                    "ring": ring_desc,
                                    "d": d,
                                    "h": h,
                                    "seed": seed,
                                    "distribution": config.get("genDistribution"),
                                    "caps": config.get("caps", {}),
                                    "proper": bool(config.get("properOnly", False)),
                                }
                            )
        elif name == "conjecture_probe":
            params = config.get("conjecture", {})
            for ring_desc in _campaign_rings(config):
                for d in range(d_lo, d_hi + 1):
                    for seed in seeds:
                        tasks.append(
                            {
                                "kind": name,
                                "ring": ring_desc,
                                "d": d,
                                "h": 1,
                                "seed": seed,
                                "distribution": config.get("genDistribution"),
                                "caps": config.get("caps", {}),
                                "m": int(params.get("m", 2)),
                                "nMax": int(params.get("nMax", 12)),
                                "proper": bool(config.get("properOnly", False)),
                            }
                        )
        else:
            raise ValueError(f"unknown experiment {name!r}")
    return tasks


def _task_spec(task: dict) -> CubeSpec:
    ring = AmbientRing.from_json_dict(task["ring"])
    mode = ADDITIVE if task["kind"].endswith("additive") or task["kind"] == "conjecture_probe" else MULTIPLICATIVE
    maker = random_proper_cube if task.get("proper") else random_cube
    return maker(ring, task["d"], task["h"], mode, task.get("distribution"), task["seed"])


def run_task(task: dict) -> ExperimentRecord:
    spec = _task_spec(task)
    caps = task.get("caps", {})
    enum_cap = int(caps.get("enum", DEFAULT_ENUM_CAP))
    pair_cap = int(caps.get("pair", DEFAULT_PAIR_CAP))
    kind = task["kind"]
    if kind in _GROWTH_KINDS:
        return growth_trial(spec, seed=task["seed"], enum_cap=enum_cap, pair_cap=pair_cap)
    if kind in _ENERGY_KINDS:
        return energy_bound_trial(spec, seed=task["seed"], enum_cap=enum_cap, pair_cap=pair_cap)
    if kind == "conjecture_probe":
        q_set = enumerate_cube(spec, cap=enum_cap)
        record = conjecture_probe(q_set, task["m"], task["nMax"], seed=task["seed"], pair_cap=pair_cap)
        record.spec = {"cube": spec.to_json_dict(), "m": task["m"], "n_max": task["nMax"]}
        return record
    raise ValueError(f"unknown task kind {kind!r}")


def load_log(log_path) -> list[ExperimentRecord]:
    path = Path(log_path)
    if not path.exists():
        return []
    records = []
    for line in path.read_text().splitlines():
        if line.strip():
            records.append(ExperimentRecord.from_json_line(line))
    return records


def _task_key(task: dict) -> str:
    spec = _task_spec(task)
    kind = task["kind"]
    if kind in _GROWTH_KINDS:
        mode = _GROWTH_KINDS[kind]
        targets = ("QQ", "Q/Q") if mode == ADDITIVE else ("Q+Q", "Q-Q")
        spec_dict = {"cube": spec.to_json_dict(), "targets": list(targets)}
        name = f"growth_{mode}"
    elif kind in _ENERGY_KINDS:
        spec_dict = {"cube": spec.to_json_dict()}
        name = f"energy_{_ENERGY_KINDS[kind]}"
    else:
        spec_dict = {"cube": spec.to_json_dict(), "m": task["m"], "n_max": task["nMax"]}
        name = "conjecture_probe"
    return record_key(name, spec_dict, task["seed"])


def run_campaign(config: dict, log_path, jobs: int = 1) -> list[ExperimentRecord]:
    """Run all tasks not yet present in the log; append and return them."""
    tasks = expand_campaign(config)
    done = {r.key for r in load_log(log_path)}
    todo = [t for t in tasks if _task_key(t) not in done]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_task, todo))
    else:
        records = [run_task(t) for t in todo]
    path = Path(log_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        for record in records:
            fh.write(record.to_json_line() + "\n")
    return records


def export_growth_csv(log_path, csv_path, target: str = "QQ") -> int:
    """Write (|Q|, |target|, exponent) rows for growth records; returns the
    row count."""
    records = load_log(log_path)
    rows = 0
    with Path(csv_path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q_size", f"size_{target}", "exponent"])
        for record in records:
            if target in record.measured and "|Q|" in record.measured:
                writer.writerow(
                    [
                        record.measured["|Q|"],
                        record.measured[target],
                        record.exponents.get(target, ""),
                    ]
                )
                rows += 1
    return rows

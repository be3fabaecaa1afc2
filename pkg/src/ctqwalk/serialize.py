"""Byte-deterministic artifact formats: CSV tables, JSON manifests, digests.

Floats are written as their shortest round-trip decimal (Python repr), so a
parsed file re-serializes byte-identically and every value survives exactly.
Manifests are canonical JSON (sorted keys, compact separators) and carry
sha256 digests of every emitted data file.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

from .errors import VerificationError
from .experiments import SweepResult
from .observables import TimeSeries

_UNITS = {
    "xi": "xi[-]",
    "theta": "theta[rad]",
    "theta_minus": "theta_minus[rad]",
    "theta_plus": "theta_plus[rad]",
    "omega": "omega[gamma]",
    "sigma0": "sigma0[sites]",
    "sigma_ratio": "sigma_ratio[-]",
    "p_defect": "p0[-]",
    "trapped": "trapped[-]",
    "mean_pos": "mean[sites]",
    "alpha": "alpha[sites*gamma]",
    "leakage_max": "leakage_max[-]",
}


def format_float(x) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def write_rows(path, header: list[str], rows) -> None:
    """UTF-8 CSV with LF endings; floats via format_float, anything else via str."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float) else str(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def table_for(result: TimeSeries | SweepResult) -> tuple[list[str], list[list[float]]]:
    """Header with unit annotations plus rows in time or row-major grid order."""
    if isinstance(result, TimeSeries):
        header = ["t[1/gamma]", "sigma[sites]", "mean[sites]", "p0[-]", "trapped[-]", "leakage[-]"]
        rows = [
            [float(result.times[i]), float(result.sigma[i]), float(result.mean_pos[i]),
             float(result.p_defect[i]), float(result.trapped[i]), float(result.leakage[i])]
            for i in range(len(result.times))
        ]
        return header, rows
    if isinstance(result, SweepResult):
        if not result.records:
            raise ValueError("empty sweep result")
        param_names = list(result.records[0]["params"].keys())
        value_names = ["sigma_ratio", "p_defect", "trapped", "mean_pos", "alpha", "leakage_max"]
        header = [_UNITS.get(n, f"{n}[-]") for n in param_names + value_names]
        rows = [
            [float(r["params"][n]) for n in param_names] + [float(r[n]) for n in value_names]
            for r in result.records
        ]
        return header, rows
    raise TypeError(f"cannot tabulate {type(result).__name__}")


def write_table(result: TimeSeries | SweepResult, path) -> None:
    header, rows = table_for(result)
    write_rows(path, header, rows)


def read_table(path) -> tuple[list[str], list[list[float]]]:
    """Parse a CSV written by write_rows back into header plus float rows."""
    with open(path, encoding="utf-8", newline="\n") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise ValueError(f"{path}: empty table")
    header = lines[0].split(",")
    rows = [[float(tok) for tok in line.split(",")] for line in lines[1:]]
    return header, rows


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Provenance record for one artifact-producing run."""

    version: str
    command: str
    config: dict
    derived: dict = field(default_factory=dict)
    digests: dict = field(default_factory=dict)
    wall_clock: float = 0.0


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def write_manifest(manifest: RunManifest, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(asdict(manifest)))


def read_manifest(path) -> RunManifest:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return RunManifest(**data)


def verify_manifest(path) -> list[str]:
    """Re-digest every file named in the manifest; return mismatch messages."""
    import os

    manifest = read_manifest(path)
    base = os.path.dirname(os.path.abspath(path))
    problems = []
    for name, expected in sorted(manifest.digests.items()):
        target = os.path.join(base, name)
        if not os.path.exists(target):
            problems.append(f"{name}: missing")
            continue
        actual = sha256_file(target)
        if actual != expected:
            problems.append(f"{name}: digest mismatch ({actual} != {expected})")
    return problems


def check_manifest(path) -> None:
    problems = verify_manifest(path)
    if problems:
        raise VerificationError("; ".join(problems))

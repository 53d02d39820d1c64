"""Solution files, run manifests and GeoJSON export."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .network import SewerNetwork, UpstreamIndex
from .objectives import ObjectiveVector, PlacementPlan, assign_entry_sets, entry_set_sizes

SOLUTION_COLUMNS = ["plan_id", "coverage", "search_cost", "sensors"]


@dataclass
class SolutionRecord:
    plan_id: int
    coverage: int
    search_cost: float
    sensors: list[str]

    @property
    def objectives(self) -> ObjectiveVector:
        return ObjectiveVector(self.coverage, self.search_cost)


def records_from_solutions(solutions, net: SewerNetwork) -> list[SolutionRecord]:
    return [
        SolutionRecord(k, int(obj.coverage), float(obj.search_cost), [net.label(s) for s in plan])
        for k, (plan, obj) in enumerate(solutions)
    ]


def solutions_csv_text(records: list[SolutionRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SOLUTION_COLUMNS)
    for r in records:
        w.writerow([r.plan_id, r.coverage, f"{r.search_cost:.6g}", ";".join(r.sensors)])
    return buf.getvalue()


def write_solutions(path, records: list[SolutionRecord]) -> tuple[Path, Path]:
    """Write ``<path>`` (CSV, 6 significant digits) and a lossless JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(solutions_csv_text(records), encoding="utf-8")
    sidecar = path.with_suffix(".json")
    payload = [
        {"plan_id": r.plan_id, "coverage": r.coverage, "search_cost": r.search_cost, "sensors": r.sensors}
        for r in records
    ]
    sidecar.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    return path, sidecar


def read_solutions(path) -> list[SolutionRecord]:
    """Read a solutions file, preferring the full-precision JSON sidecar."""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    if path.suffix == ".json" or sidecar.exists():
        src = path if path.suffix == ".json" else sidecar
        return [SolutionRecord(int(d["plan_id"]), int(d["coverage"]), float(d["search_cost"]), list(d["sensors"]))
                for d in json.loads(src.read_text(encoding="utf-8"))]
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            sensors = [s for s in row["sensors"].split(";") if s]
            records.append(SolutionRecord(int(row["plan_id"]), int(row["coverage"]), float(row["search_cost"]), sensors))
    return records


def dataset_digest(network_dir) -> str:
    h = hashlib.sha256()
    for name in ("nodes.csv", "edges.csv"):
        h.update(name.encode())
        h.update((Path(network_dir) / name).read_bytes())
    return h.hexdigest()


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def entry_set_geojson(plan: PlacementPlan, idx: UpstreamIndex) -> dict:
    """FeatureCollection of manholes (with owning sensor) and pipes.

    Coordinates are written as stored; no CRS is attached.
    """
    net = idx.network
    if net.coords is None:
        raise ValueError("network has no coordinates")
    owner = assign_entry_sets(plan, idx)
    m = entry_set_sizes(plan, idx)
    features = []
    for i in range(net.n):
        props = {
            "id": net.label(i),
            "sensor": i in m,
            "entry_set": net.label(owner[i]) if i in owner else None,
        }
        if i in m:
            props["m"] = m[i]
        x, y = net.coords[i]
        features.append({"type": "Feature", "geometry": {"type": "Point", "coordinates": [float(x), float(y)]},
                         "properties": props})
    for a, b in net.edges.tolist():
        coords = [[float(v) for v in net.coords[a]], [float(v) for v in net.coords[b]]]
        features.append({"type": "Feature", "geometry": {"type": "LineString", "coordinates": coords},
                         "properties": {"from": net.label(a), "to": net.label(b),
                                        "entry_set": net.label(owner[a]) if a in owner else None}})
    return {"type": "FeatureCollection", "features": features}

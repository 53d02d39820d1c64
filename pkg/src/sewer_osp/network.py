"""Sewer network model: parsing, validation and upstream indexing.

A sewer network is a forest of in-trees. Every edge ``(u, v)`` means water
flows from manhole ``u`` directly into manhole ``v``; flows merge but never
split, so each node has at most one downstream neighbour.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np


class NetworkFormatError(ValueError):
    """Raised when node/edge tables cannot be parsed."""


class InvalidNetworkError(ValueError):
    """Raised when a network violates the in-tree model."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.to_text())


@dataclass
class SewerNetwork:
    """Directed sewer network with dense integer node ids.

    Attributes:
        n: number of manholes.
        edges: ``(m, 2)`` int array of ``(upstream, downstream)`` pairs.
        labels: external id for each node, indexed by node id.
        coords: optional ``(n, 2)`` float array of planar coordinates.
    """

    n: int
    edges: np.ndarray
    labels: list[str] = field(default_factory=list)
    coords: np.ndarray | None = None

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if not self.labels:
            self.labels = [str(i) for i in range(self.n)]
        if len(self.labels) != self.n:
            raise ValueError("labels must have one entry per node")
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def from_labels(cls, node_labels: Iterable[str], edges: Iterable[tuple[str, str]]):
        """Build a network from label lists, mostly for tests and small fixtures."""
        labels = list(node_labels)
        ids = {lab: i for i, lab in enumerate(labels)}
        if len(ids) != len(labels):
            raise NetworkFormatError("duplicate node label")
        try:
            pairs = [(ids[a], ids[b]) for a, b in edges]
        except KeyError as exc:
            raise NetworkFormatError(f"unknown node {exc.args[0]!r}") from None
        return cls(n=len(labels), edges=np.array(pairs, dtype=np.int64).reshape(-1, 2), labels=labels)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def node_id(self, label: str) -> int:
        try:
            return self._label_to_id[label]
        except KeyError:
            raise KeyError(f"unknown node {label!r}") from None

    def label(self, node: int) -> str:
        return self.labels[node]

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.n) if self.num_edges else np.zeros(self.n, np.int64)

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n) if self.num_edges else np.zeros(self.n, np.int64)


# --------------------------------------------------------------------------
# parsing


def _read_rows(source, what: str) -> tuple[list[str], list[tuple[int, list[str]]]]:
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text(encoding="utf-8-sig")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    reader = csv.reader(io.StringIO(text))
    header = None
    rows = []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        row = [c.strip() for c in row]
        if header is None:
            header = [c.lower() for c in row]
            continue
        rows.append((lineno, row))
    if header is None:
        raise NetworkFormatError(f"{what}: missing header")
    return header, rows


def parse_network(nodes_source, edges_source) -> SewerNetwork:
    """Parse node and edge CSV tables into a :class:`SewerNetwork`.

    ``nodes_source`` has header ``id[,x,y]``; ``edges_source`` has header
    ``from,to`` in flow direction. Each source may be a path, a file object or
    the CSV text itself.
    """
    header, rows = _read_rows(nodes_source, "nodes")
    if header[0] != "id":
        raise NetworkFormatError("nodes: header must start with 'id'")
    has_xy = len(header) >= 3 and header[1] == "x" and header[2] == "y"
    labels: list[str] = []
    seen: dict[str, int] = {}
    xy = []
    for lineno, row in rows:
        if len(row) != len(header):
            raise NetworkFormatError(f"nodes line {lineno}: expected {len(header)} fields, got {len(row)}")
        lab = row[0]
        if not lab:
            raise NetworkFormatError(f"nodes line {lineno}: empty id")
        if lab in seen:
            raise NetworkFormatError(f"nodes line {lineno}: duplicate label {lab!r}")
        seen[lab] = len(labels)
        labels.append(lab)
        if has_xy:
            try:
                xy.append((float(row[1]), float(row[2])))
            except ValueError:
                raise NetworkFormatError(f"nodes line {lineno}: malformed coordinates") from None

    header, rows = _read_rows(edges_source, "edges")
    if header[:2] != ["from", "to"]:
        raise NetworkFormatError("edges: header must be 'from,to'")
    pairs = []
    for lineno, row in rows:
        if len(row) != len(header):
            raise NetworkFormatError(f"edges line {lineno}: expected {len(header)} fields, got {len(row)}")
        a, b = row[0], row[1]
        for lab in (a, b):
            if lab not in seen:
                raise NetworkFormatError(f"edges line {lineno}: unknown node {lab!r}")
        pairs.append((seen[a], seen[b]))

    coords = np.array(xy, dtype=float).reshape(-1, 2) if has_xy else None
    return SewerNetwork(n=len(labels), edges=np.array(pairs, dtype=np.int64).reshape(-1, 2), labels=labels, coords=coords)


def load_network_dir(path) -> SewerNetwork:
    """Load ``nodes.csv`` and ``edges.csv`` from a directory."""
    path = Path(path)
    return parse_network(path / "nodes.csv", path / "edges.csv")


def write_network_dir(net: SewerNetwork, path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    with open(path / "nodes.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if net.coords is not None:
            w.writerow(["id", "x", "y"])
            for lab, (x, y) in zip(net.labels, net.coords):
                w.writerow([lab, repr(float(x)), repr(float(y))])
        else:
            w.writerow(["id"])
            for lab in net.labels:
                w.writerow([lab])
    with open(path / "edges.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["from", "to"])
        for a, b in net.edges:
            w.writerow([net.labels[a], net.labels[b]])


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        if self.ok:
            return "network valid"
        return "\n".join(v["message"] for v in self.violations)

    def to_json(self) -> str:
        return json.dumps({"valid": self.ok, "violations": self.violations}, indent=2)


def _topological_order(n: int, edges: np.ndarray) -> list[int]:
    indeg = np.bincount(edges[:, 1], minlength=n) if len(edges) else np.zeros(n, np.int64)
    indeg = indeg.tolist()
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges.tolist():
        succ[a].append(b)
    queue = deque(i for i in range(n) if indeg[i] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return order


def validate_network(net: SewerNetwork) -> ValidationReport:
    """Check the in-tree model; every violation is listed, nothing is raised."""
    report = ValidationReport()
    lab = net.labels
    pairs = [tuple(e) for e in net.edges.tolist()]
    for a, b in pairs:
        if a == b:
            report.violations.append(
                {"kind": "self_loop", "nodes": [lab[a]], "message": f"self-loop at {lab[a]}"})
    for (a, b), count in Counter(pairs).items():
        if count > 1:
            report.violations.append(
                {"kind": "duplicate_edge", "nodes": [lab[a], lab[b]],
                 "message": f"duplicate edge {lab[a]}->{lab[b]} ({count} times)"})
    outdeg = net.out_degrees()
    for i in np.flatnonzero(outdeg > 1).tolist():
        report.violations.append(
            {"kind": "out_degree", "nodes": [lab[i]],
             "message": f"out-degree {int(outdeg[i])} at {lab[i]}"})
    order = _topological_order(net.n, net.edges)
    if len(order) < net.n:
        placed = np.zeros(net.n, bool)
        placed[order] = True
        stuck = [lab[i] for i in np.flatnonzero(~placed).tolist()]
        report.violations.append(
            {"kind": "cycle", "nodes": stuck,
             "message": f"cycle through {len(stuck)} node(s): {', '.join(stuck[:10])}"})
    return report


# --------------------------------------------------------------------------
# upstream index


@dataclass(frozen=True)
class UpstreamIndex:
    """Ancestor sets of every node of a validated in-tree forest.

    ``up_set[i, j]`` is true iff ``j`` is strictly upstream of ``i``.
    ``up_size[i]`` counts ``i`` plus its ancestors. ``topo`` lists nodes
    upstream-first and ``topo_pos`` is its inverse. ``downstream[i]`` is the
    next node along the flow, ``-1`` at an outfall.
    """

    network: SewerNetwork
    up_set: np.ndarray
    up_size: np.ndarray
    topo: np.ndarray
    topo_pos: np.ndarray
    downstream: np.ndarray

    @property
    def n(self) -> int:
        return self.network.n

    def closure(self, i: int) -> np.ndarray:
        """Boolean mask of ``i`` and everything upstream of it."""
        row = self.up_set[i].copy()
        row[i] = True
        return row

    def check_node(self, i) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexError(f"node id {i} out of range [0, {self.n})")
        return i


def build_upstream_index(net: SewerNetwork) -> UpstreamIndex:
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(report)
    n = net.n
    order = _topological_order(n, net.edges)
    downstream = np.full(n, -1, dtype=np.int64)
    if net.num_edges:
        downstream[net.edges[:, 0]] = net.edges[:, 1]
    up = np.zeros((n, n), dtype=bool)
    # upstream-first sweep: a node's ancestors are final before it is pushed
    for u in order:
        v = downstream[u]
        if v >= 0:
            up[v] |= up[u]
            up[v, u] = True
    topo = np.array(order, dtype=np.int64)
    topo_pos = np.empty(n, dtype=np.int64)
    topo_pos[topo] = np.arange(n)
    up.setflags(write=False)
    return UpstreamIndex(
        network=net,
        up_set=up,
        up_size=up.sum(axis=1).astype(np.int64) + 1,
        topo=topo,
        topo_pos=topo_pos,
        downstream=downstream,
    )


def is_upstream(idx: UpstreamIndex, j: int, i: int) -> bool:
    """True iff manhole ``j`` drains (possibly indirectly) into manhole ``i``."""
    j, i = idx.check_node(j), idx.check_node(i)
    return bool(idx.up_set[i, j])

"""Topology cleaning and sheet merging.

Both operations are idempotent: running either twice in a row leaves
the second report with all-zero counts.  Problems never raise; they
become rejections or notes on the report.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from ..errors import WarehouseError
from ..geo.points import delta_longitude
from .model import (
    CleanReport,
    Feature,
    FeatureId,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    MERGE_KEY_ATTR,
    Ring,
    Vertex,
    Warehouse,
    feature_id_key,
    normalize_winding,
    ring_is_ccw,
    unwrap_ring,
)

SNAP_TOL_DEG = 1e-6


def _vertex_dist(a: Vertex, b: Vertex) -> float:
    return math.hypot(delta_longitude(b[0], a[0]), b[1] - a[1])


def _dedup(seq: Sequence[Vertex]) -> tuple[list[Vertex], int]:
    """Drop exact consecutive duplicates, keeping the first of each run."""
    out: list[Vertex] = []
    removed = 0
    for v in seq:
        if out and v == out[-1]:
            removed += 1
        else:
            out.append(v)
    return out, removed


class _SnapGrid:
    """Hash grid over [0,360) x lat for near-neighbour lookup.

    Cell edge equals the tolerance, so any pair within tolerance lands
    in the same or an adjacent cell.  Longitude cells wrap.
    """

    def __init__(self, tol: float) -> None:
        self.tol = tol
        self.n_lon = max(1, int(math.ceil(360.0 / tol)))
        self.cells: dict[tuple[int, int], list[Vertex]] = defaultdict(list)

    def _cell(self, v: Vertex) -> tuple[int, int]:
        return (int(v[0] // self.tol) % self.n_lon, int(math.floor(v[1] / self.tol)))

    def add(self, v: Vertex) -> None:
        self.cells[self._cell(v)].append(v)

    def near(self, v: Vertex) -> Iterable[Vertex]:
        ci, cj = self._cell(v)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                bucket = self.cells.get(((ci + di) % self.n_lon, cj + dj))
                if bucket:
                    for other in bucket:
                        if other != v and _vertex_dist(v, other) <= self.tol:
                            yield other


class _Clusters:
    """Union-find over exact vertex positions."""

    def __init__(self) -> None:
        self.parent: dict[Vertex, Vertex] = {}

    def add(self, v: Vertex) -> None:
        self.parent.setdefault(v, v)

    def find(self, v: Vertex) -> Vertex:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: Vertex, b: Vertex) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


_ANCHOR_RANK = (0,)


def _owner_rank(fid: FeatureId, order: int) -> tuple:
    return (1,) + feature_id_key(fid) + (order,)


def _build_snap_map(
    features: Sequence[Feature],
    anchors: Iterable[Vertex],
    tol: float,
) -> dict[Vertex, Vertex]:
    """Map every position to its cluster's canonical position.

    Canonical is the anchor position if the cluster has one, else the
    position owned by the lowest feature id.  Only clusters spanning
    more than one feature (or touching an anchor) produce moves, so a
    lone feature's internal near-duplicates stay put.
    """
    owner: dict[Vertex, tuple] = {}
    owner_fids: dict[Vertex, set] = defaultdict(set)
    order = 0
    for v in anchors:
        if v not in owner or _ANCHOR_RANK < owner[v]:
            owner[v] = _ANCHOR_RANK
        owner_fids[v].add(None)
    for f in features:
        for v in f.geometry.vertices():
            rank = _owner_rank(f.id, order)
            order += 1
            if v not in owner or rank < owner[v]:
                owner[v] = rank
            owner_fids[v].add(f.id)

    grid = _SnapGrid(tol)
    clusters = _Clusters()
    for v in owner:
        clusters.add(v)
        grid.add(v)
    for v in owner:
        for other in grid.near(v):
            clusters.union(v, other)

    best: dict[Vertex, Vertex] = {}
    members: dict[Vertex, set] = defaultdict(set)
    for v in owner:
        root = clusters.find(v)
        if root not in best or owner[v] < owner[best[root]]:
            best[root] = v
        members[root].update(owner_fids[v])

    snap: dict[Vertex, Vertex] = {}
    for v in owner:
        root = clusters.find(v)
        if len(members[root]) > 1:
            snap[v] = best[root]
        else:
            snap[v] = v
    return snap


def _clean_sequence(
    seq: Sequence[Vertex], report: CleanReport
) -> list[Vertex]:
    out, removed = _dedup(seq)
    report.duplicates_removed += removed
    return out


def _close_ring(ring: Ring, tol: float, report: CleanReport) -> Ring | None:
    """Returns the closed ring, or None when it cannot be closed."""
    if len(ring) < 3:
        return None
    if ring[0] == ring[-1]:
        closed = ring
    elif _vertex_dist(ring[0], ring[-1]) <= tol:
        closed = ring[:-1] + [ring[0]]
        report.rings_closed += 1
    else:
        return None
    if len(closed) < 4:
        return None
    return closed


def _apply_snap(
    geom: Geometry, snap: dict[Vertex, Vertex], report: CleanReport
) -> Geometry:
    moved = 0

    def move(x: float, y: float) -> Vertex:
        nonlocal moved
        v = (x, y)
        target = snap.get(v, v)
        if target != v:
            moved += 1
        return target

    out = geom.map_vertices(move)
    report.vertices_snapped += moved
    return out


def clean_topology(
    w: Warehouse,
    layer: str,
    snap_tol: float = SNAP_TOL_DEG,
    *,
    related_layers: Sequence[str] = (),
) -> CleanReport:
    """Dedup vertices, close or reject rings, snap near-coincident
    vertices across features to one canonical position.

    ``related_layers`` names other layers whose vertices act as fixed
    snap targets, pulling this layer onto them for shared boundaries.
    """
    if not math.isfinite(snap_tol) or snap_tol < 0:
        raise WarehouseError(f"snap tolerance must be finite and >= 0, got {snap_tol!r}")
    spec = w.layer(layer)
    if spec.raster:
        raise WarehouseError(f"layer {layer!r} is a raster layer")
    report = CleanReport()

    kept: list[Feature] = []
    for f in w.features[layer]:
        geom = f.geometry
        if geom.kind == KIND_POINT:
            kept.append(f)
            continue
        if geom.kind == KIND_POLYLINE:
            line = _clean_sequence(geom.coordinates, report)
            if len(line) < 2:
                report.reject(f.id, "polyline degenerate after duplicate removal")
                continue
            kept.append(Feature(f.id, Geometry(KIND_POLYLINE, line), f.attributes))
            continue
        # Polygon or MultiPolygon: every ring must survive or the
        # whole feature is rejected; no partial stores.
        parts = geom.coordinates if geom.kind == KIND_MULTIPOLYGON else [geom.coordinates]
        scratch = CleanReport()
        new_parts: list[list[Ring]] = []
        bad_reason: str | None = None
        for part in parts:
            new_rings: list[Ring] = []
            for ring in part:
                cleaned = _clean_sequence(ring, scratch)
                closed = _close_ring(cleaned, snap_tol, scratch)
                if closed is None:
                    bad_reason = "ring not closed within tolerance or degenerate"
                    break
                new_rings.append(closed)
            if bad_reason:
                break
            new_parts.append(new_rings)
        if bad_reason:
            report.reject(f.id, bad_reason)
            continue
        report.duplicates_removed += scratch.duplicates_removed
        report.rings_closed += scratch.rings_closed
        out = new_parts if geom.kind == KIND_MULTIPOLYGON else new_parts[0]
        kept.append(Feature(f.id, Geometry(geom.kind, out), f.attributes))

    if snap_tol > 0:
        anchors: list[Vertex] = []
        for name in related_layers:
            for f in w.layer_features(name):
                anchors.extend(f.geometry.vertices())
        snap = _build_snap_map(kept, anchors, snap_tol)
        snapped: list[Feature] = []
        for f in kept:
            geom = _apply_snap(f.geometry, snap, report)
            # Snapping can collapse neighbours onto one position.
            if geom.kind == KIND_POLYLINE:
                line = _clean_sequence(geom.coordinates, report)
                if len(line) < 2:
                    report.reject(f.id, "polyline collapsed by snapping")
                    continue
                geom = Geometry(KIND_POLYLINE, line)
            elif geom.kind in (KIND_POLYGON, KIND_MULTIPOLYGON):
                parts = geom.coordinates if geom.kind == KIND_MULTIPOLYGON else [geom.coordinates]
                ok = True
                new_parts = []
                for part in parts:
                    rings = []
                    for ring in part:
                        cleaned = _clean_sequence(ring, report)
                        if cleaned[0] != cleaned[-1] or len(cleaned) < 4:
                            ok = False
                            break
                        rings.append(cleaned)
                    if not ok:
                        break
                    new_parts.append(rings)
                if not ok:
                    report.reject(f.id, "ring collapsed by snapping")
                    continue
                geom = Geometry(geom.kind, new_parts if geom.kind == KIND_MULTIPOLYGON else new_parts[0])
            snapped.append(Feature(f.id, geom, f.attributes))
        kept = snapped

    for f in kept:
        normalize_winding(f.geometry, geographic=True)
    w.features[layer] = kept
    if report.changed():
        w.note(f"cleaned {layer}: {report.summary()}")
    return report


def _merge_groups(features: Sequence[Feature]) -> tuple[dict[object, list[Feature]], list[Feature]]:
    groups: dict[object, list[Feature]] = {}
    loose: list[Feature] = []
    for f in features:
        key = f.attributes.get(MERGE_KEY_ATTR)
        if key is None:
            loose.append(f)
        else:
            groups.setdefault(key, []).append(f)
    return groups, loose


def _merge_attributes(members: Sequence[Feature], report: CleanReport) -> dict:
    """First-sheet-wins by ascending feature id; conflicts noted."""
    ordered = sorted(members, key=lambda f: feature_id_key(f.id))
    out: dict = {}
    for f in ordered:
        for k, v in f.attributes.items():
            if k == MERGE_KEY_ATTR:
                continue
            if k not in out:
                out[k] = v
            elif out[k] != v:
                report.notes.append(
                    f"attribute {k!r} conflict while merging feature {f.id}: kept {out[k]!r}"
                )
    out[MERGE_KEY_ATTR] = ordered[0].attributes.get(MERGE_KEY_ATTR)
    return out


def _endpoint_map(tol: float, endpoints: list[Vertex]) -> dict[Vertex, Vertex]:
    """Canonicalize endpoints within tol of each other (first one wins)."""
    grid = _SnapGrid(tol) if tol > 0 else None
    canon: dict[Vertex, Vertex] = {}
    for v in endpoints:
        if v in canon:
            continue
        target = v
        if grid is not None:
            for other in grid.near(v):
                target = canon[other]
                break
            grid.add(v)
        canon[v] = target
    return canon


def _merge_polylines(
    members: list[Feature], tol: float, report: CleanReport
) -> list[Feature] | None:
    """Chain polylines end-to-end.  None means the group is ambiguous."""
    ends: list[Vertex] = []
    for f in members:
        ends.append(f.geometry.coordinates[0])
        ends.append(f.geometry.coordinates[-1])
    canon = _endpoint_map(tol, ends)

    node_edges: dict[Vertex, list[tuple[int, bool]]] = defaultdict(list)
    for idx, f in enumerate(members):
        a = canon[f.geometry.coordinates[0]]
        b = canon[f.geometry.coordinates[-1]]
        node_edges[a].append((idx, True))
        node_edges[b].append((idx, False))
    if any(len(v) > 2 for v in node_edges.values()):
        return None

    used = [False] * len(members)
    order = sorted(range(len(members)), key=lambda i: feature_id_key(members[i].id))
    merged_features: list[Feature] = []
    for start in order:
        if used[start]:
            continue
        # Walk back to a free end first so the chain starts there.
        idx, forward = start, True
        seen = {start}
        while True:
            node = canon[
                members[idx].geometry.coordinates[0 if forward else -1]
            ]
            prev = [e for e in node_edges[node] if e[0] != idx]
            if not prev or prev[0][0] in seen:
                break
            idx = prev[0][0]
            seen.add(idx)
            forward = not prev[0][1]
        # Now walk forward collecting the chain.
        chain: list[tuple[int, bool]] = []
        while True:
            chain.append((idx, forward))
            used[idx] = True
            node = canon[
                members[idx].geometry.coordinates[-1 if forward else 0]
            ]
            nxt = [e for e in node_edges[node] if not used[e[0]]]
            if not nxt:
                break
            idx = nxt[0][0]
            forward = nxt[0][1]

        parts = [members[i] for i, _ in chain]
        if len(parts) == 1:
            merged_features.append(parts[0])
            continue
        coords: list[Vertex] = []
        for i, fwd in chain:
            seg = list(members[i].geometry.coordinates)
            if not fwd:
                seg.reverse()
            seg[0] = canon[seg[0]]
            seg[-1] = canon[seg[-1]]
            if coords and seg[0] == coords[-1]:
                seg = seg[1:]
            coords.extend(seg)
        fid = min((p.id for p in parts), key=feature_id_key)
        report.features_merged += len(parts) - 1
        attrs = _merge_attributes(parts, report)
        merged_features.append(Feature(fid, Geometry(KIND_POLYLINE, coords), attrs))
    return merged_features


def _feature_rings(f: Feature) -> list[Ring]:
    return list(f.geometry.rings())


def _directed_edges(ring: Ring) -> list[tuple[Vertex, Vertex]]:
    pts = ring[:-1] if ring[0] == ring[-1] else list(ring)
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def _walk_loops(edges: set[tuple[Vertex, Vertex]]) -> list[Ring] | None:
    """Assemble directed edges into closed loops; None when ambiguous."""
    succ: dict[Vertex, list[Vertex]] = defaultdict(list)
    for a, b in edges:
        succ[a].append(b)
    if any(len(v) != 1 for v in succ.values()):
        return None
    indeg: dict[Vertex, int] = defaultdict(int)
    for _, b in edges:
        indeg[b] += 1
    if any(indeg[a] != 1 for a in succ):
        return None

    loops: list[Ring] = []
    remaining = dict((a, bs[0]) for a, bs in succ.items())
    while remaining:
        start = next(iter(remaining))
        loop = [start]
        cur = remaining.pop(start)
        while cur != start:
            loop.append(cur)
            cur = remaining.pop(cur)
        loop.append(start)
        loops.append(loop)
    return loops


def _point_in_ring(pt: Vertex, ring: Ring) -> bool:
    """Even-odd test after unwrapping, so seam-straddling rings work."""
    base = ring[0][0]
    pts = unwrap_ring(ring)
    x = base + delta_longitude(pt[0], base)
    y = pt[1]
    inside = False
    for i in range(len(pts) - 1):
        x1, y1 = pts[i]
        x2, y2 = pts[i + 1]
        if (y1 > y) != (y2 > y):
            t = (y - y1) / (y2 - y1)
            if x < x1 + t * (x2 - x1):
                inside = not inside
    return inside


def _merge_polygon_component(
    members: list[Feature], report: CleanReport
) -> Feature | None:
    """Dissolve polygons that share seam edges.  None when the seams do
    not cancel cleanly (T-junctions, point contacts)."""
    all_edges: dict[tuple[Vertex, Vertex], int] = defaultdict(int)
    for f in members:
        for ring in _feature_rings(f):
            for e in _directed_edges(ring):
                all_edges[e] += 1
    surviving: set[tuple[Vertex, Vertex]] = set()
    for e, n in all_edges.items():
        rev = (e[1], e[0])
        if n != 1 or all_edges.get(rev, 0) != 0:
            if n > 1:
                return None
            continue
        surviving.add(e)
    if not surviving:
        return None
    loops = _walk_loops(surviving)
    if loops is None:
        return None

    outers: list[Ring] = []
    holes: list[Ring] = []
    for loop in loops:
        (outers if ring_is_ccw(loop, geographic=True) else holes).append(loop)
    if not outers:
        return None
    parts: list[list[Ring]] = [[o] for o in outers]
    for hole in holes:
        placed = False
        for part in parts:
            if _point_in_ring(hole[0], part[0]):
                part.append(hole)
                placed = True
                break
        if not placed:
            return None

    kind = members[0].geometry.kind
    if len(parts) == 1 and kind == KIND_POLYGON:
        geom = Geometry(KIND_POLYGON, parts[0])
    elif kind == KIND_MULTIPOLYGON:
        geom = Geometry(KIND_MULTIPOLYGON, parts)
    elif len(parts) > 1:
        return None
    else:
        geom = Geometry(kind, parts[0])
    fid = min((f.id for f in members), key=feature_id_key)
    attrs = _merge_attributes(members, report)
    report.features_merged += len(members) - 1
    return Feature(fid, geom, attrs)


def _polygon_components(
    members: list[Feature], tol: float
) -> tuple[list[list[int]], list[Feature]]:
    """Group members by shared (reversed) seam edges after snapping
    seam vertices within tol.

    Returns member-index components plus the snapped copies the
    dissolve should run on; singletons keep their originals.
    """
    verts: list[Vertex] = []
    for f in members:
        verts.extend(f.geometry.vertices())
    canon = _endpoint_map(tol, verts)
    snapped = [
        Feature(f.id, f.geometry.map_vertices(lambda x, y: canon[(x, y)]), f.attributes)
        for f in members
    ]

    edge_owner: dict[tuple[Vertex, Vertex], int] = {}
    parent = list(range(len(snapped)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for idx, f in enumerate(snapped):
        for ring in _feature_rings(f):
            for a, b in _directed_edges(ring):
                other = edge_owner.get((b, a))
                if other is not None and other != idx:
                    union(idx, other)
                edge_owner[(a, b)] = idx

    comps: dict[int, list[int]] = defaultdict(list)
    for idx in range(len(snapped)):
        comps[find(idx)].append(idx)
    return list(comps.values()), snapped


def merge_sheets(
    w: Warehouse, layer: str, seam_tol: float = SNAP_TOL_DEG
) -> CleanReport:
    """Join features split across source sheets.

    Only features carrying the same ``sheet_merge_key`` attribute are
    candidates.  Polylines chain end-to-end; polygons dissolve along
    seam edges whose vertex sequences match.  The merged feature keeps
    the lowest constituent id.
    """
    if not math.isfinite(seam_tol) or seam_tol < 0:
        raise WarehouseError(f"seam tolerance must be finite and >= 0, got {seam_tol!r}")
    spec = w.layer(layer)
    report = CleanReport()
    if spec.geometry_kind == KIND_POINT:
        return report

    features = w.features[layer]
    groups, loose = _merge_groups(features)
    out: list[Feature] = list(loose)
    for key in sorted(groups, key=lambda k: (str(type(k).__name__), str(k))):
        members = groups[key]
        if len(members) < 2:
            out.extend(members)
            continue
        if spec.geometry_kind == KIND_POLYLINE:
            merged = _merge_polylines(members, seam_tol, report)
            if merged is None:
                report.notes.append(
                    f"merge key {key!r}: ambiguous junction, left unmerged"
                )
                out.extend(members)
            else:
                if len(merged) == len(members):
                    report.notes.append(
                        f"merge key {key!r}: no endpoints within tolerance"
                    )
                out.extend(merged)
            continue
        # Polygon kinds: dissolve each edge-connected component.
        comps, snapped = _polygon_components(members, seam_tol)
        for comp in comps:
            if len(comp) < 2:
                out.extend(members[i] for i in comp)
                continue
            merged = _merge_polygon_component([snapped[i] for i in comp], report)
            if merged is None:
                report.notes.append(
                    f"merge key {key!r}: seams do not match, left unmerged"
                )
                out.extend(members[i] for i in comp)
            else:
                normalize_winding(merged.geometry, geographic=True)
                out.append(merged)
        if all(len(comp) < 2 for comp in comps):
            report.notes.append(
                f"merge key {key!r}: no shared seams among {len(members)} features"
            )

    out.sort(key=lambda f: feature_id_key(f.id))
    w.features[layer] = out
    if report.changed():
        w.note(f"merged sheets in {layer}: {report.summary()}")
    return report

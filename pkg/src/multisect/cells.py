"""Cell complexes cut out of a triangulation by a vertex partition.

Fix a labeling of the vertex classes and a subset S of the labels.  The
faces whose vertices touch exactly the labels in S carry a polytopal
cell each: the product, over the labels, of a simplex on that label's
vertices.  A face with every label multiplicity at most 2 carries a
cube.  Facets of a cell are obtained by deleting one vertex from a
label of multiplicity at least 2, which stays inside the same subset.

The complex over the full label set is the central object; the ones
over proper subsets are what the surrounding regions collapse onto, so
their collapsed dimension bounds spine dimensions.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .triangulation import Triangulation, TriangulationError
from .unionfind import UnionFind
from . import gf2


def _labels_of(partition_or_labels) -> Tuple[int, ...]:
    labels = getattr(partition_or_labels, "labels", partition_or_labels)
    return tuple(labels)


def class_label_multisets(T: Triangulation, partition_or_labels) -> List[Tuple[int, ...]]:
    """Sorted label multiset of every face class; index = class id."""
    labels = _labels_of(T and partition_or_labels)
    fp = T.face_poset
    if len(labels) != fp.dim_start[1]:
        raise TriangulationError(
            "expected %d vertex labels, got %d" % (fp.dim_start[1], len(labels))
        )
    out: List[Tuple[int, ...]] = []
    for cid in range(fp.n_classes):
        f, corners = fp.canonical(cid)
        out.append(tuple(sorted(labels[fp.class_of(f, (c,))] for c in corners)))
    return out


@dataclass(eq=False)
class CellComplex:
    """Cells indexed 0..len(cells)-1 in ambient class order (dimension ascending)."""

    triangulation: Triangulation
    labels: Tuple[int, ...]
    subset: Tuple[int, ...]
    cells: Tuple[int, ...]                     # ambient face-class ids
    dims: Tuple[int, ...]                      # cell dimension (product of simplices)
    multisets: Tuple[Tuple[int, ...], ...]     # sorted vertex labels per cell
    children: Tuple[Tuple[int, ...], ...]      # codim-1 face indexes, with repetition
    _parent_counts: Optional[Tuple[int, ...]] = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return max(self.dims) if self.dims else -1

    @property
    def all_cubes(self) -> bool:
        return all(m.count(l) <= 2 for m in self.multisets for l in self.subset)

    def counts(self) -> Tuple[int, ...]:
        d = self.dimension
        out = [0] * (d + 1)
        for x in self.dims:
            out[x] += 1
        return tuple(out)

    def euler(self) -> int:
        return sum(1 if d % 2 == 0 else -1 for d in self.dims)

    def connected(self) -> bool:
        if not self.cells:
            return False
        uf = UnionFind(len(self.cells))
        for i, ch in enumerate(self.children):
            for c in ch:
                uf.union(i, c)
        return uf.n_sets == 1

    def parent_counts(self) -> Tuple[int, ...]:
        if self._parent_counts is None:
            counts = [0] * len(self.cells)
            for ch in self.children:
                for c in ch:
                    counts[c] += 1
            self._parent_counts = tuple(counts)
        return self._parent_counts

    def closed(self) -> bool:
        """Every codimension-1 cell bounds exactly two top cells; no stray cells."""
        if not self.cells:
            return False
        D = self.dimension
        pc = self.parent_counts()
        for i, d in enumerate(self.dims):
            if d == D - 1 and pc[i] != 2:
                return False
            if d < D and pc[i] == 0:
                return False
        return True

    def top_count(self) -> int:
        D = self.dimension
        return sum(1 for d in self.dims if d == D)

    def boundary_ranks(self) -> Tuple[int, ...]:
        """Rank over GF(2) of the boundary map from dimension d, for d = 1..D."""
        D = self.dimension
        ranks = []
        index_in_dim: Dict[int, int] = {}
        by_dim: List[List[int]] = [[] for _ in range(D + 1)]
        for i, d in enumerate(self.dims):
            index_in_dim[i] = len(by_dim[d])
            by_dim[d].append(i)
        for d in range(1, D + 1):
            cols = []
            for i in by_dim[d]:
                v = 0
                for c in self.children[i]:
                    v ^= 1 << index_in_dim[c]
                cols.append(v)
            ranks.append(gf2.rank(cols))
        return tuple(ranks)

    def betti(self) -> Tuple[int, ...]:
        D = self.dimension
        if D < 0:
            return ()
        counts = self.counts()
        ranks = (0,) + self.boundary_ranks() + (0,)
        return tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(D + 1))

    def orientable(self) -> Optional[bool]:
        """Coherent top-cell orientations; None when cells are not all cubes."""
        if not self.all_cubes:
            return None
        D = self.dimension
        if D <= 0:
            return True
        fp = self.triangulation.face_poset
        maps_cache: Dict[int, Dict[int, Dict[int, int]]] = {}

        def inc_maps(cid: int) -> Dict[int, Dict[int, int]]:
            if cid not in maps_cache:
                maps_cache[cid] = fp.incarnation_maps(cid)
            return maps_cache[cid]

        # per codim-1 cell: list of (top cell, transfer sign)
        incidences: Dict[int, List[Tuple[int, int]]] = {}
        for i, d in enumerate(self.dims):
            if d != D:
                continue
            f, corners = fp.canonical(self.cells[i])
            by_label: Dict[int, List[int]] = {}
            for c in corners:
                by_label.setdefault(self.labels[fp.class_of(f, (c,))], []).append(c)
            dirs = sorted(l for l, cs in by_label.items() if len(cs) == 2)
            for t, l in enumerate(dirs):
                lo, hi = sorted(by_label[l])
                for deleted, side in ((lo, 1), (hi, 0)):
                    rest = tuple(c for c in corners if c != deleted)
                    gcid = fp.class_of(f, rest)
                    g = self._index(gcid)
                    enc = f * fp.M + sum(1 << c for c in rest)
                    phi = inc_maps(gcid)[enc]
                    flips = 1
                    for l2 in dirs:
                        if l2 == l:
                            continue
                        a, b = sorted(by_label[l2])
                        if phi[a] > phi[b]:
                            flips = -flips
                    sign = flips * (1 if (t + side) % 2 == 0 else -1)
                    incidences.setdefault(g, []).append((i, sign))
        eps: Dict[int, int] = {}
        pending = []
        for g, inc in incidences.items():
            if len(inc) != 2:
                return False
            pending.append(inc)
        adj: Dict[int, List[Tuple[int, int]]] = {}
        for (a, sa), (b, sb) in pending:
            rel = -sa * sb  # eps_b = rel * eps_a
            adj.setdefault(a, []).append((b, rel))
            adj.setdefault(b, []).append((a, rel))
        for i, d in enumerate(self.dims):
            if d != D or i in eps:
                continue
            eps[i] = 1
            stack = [i]
            while stack:
                x = stack.pop()
                for y, rel in adj.get(x, ()):
                    want = rel * eps[x]
                    if y in eps:
                        if eps[y] != want:
                            return False
                    else:
                        eps[y] = want
                        stack.append(y)
        return True

    def _index(self, cid: int) -> int:
        i = self._cell_index.get(cid)
        if i is None:
            raise TriangulationError("face class %d is not a cell of this complex" % cid)
        return i

    @property
    def _cell_index(self) -> Dict[int, int]:
        idx = getattr(self, "_idx_cache", None)
        if idx is None:
            idx = {cid: i for i, cid in enumerate(self.cells)}
            object.__setattr__(self, "_idx_cache", idx)
        return idx

    def summary(self) -> dict:
        out = {
            "dimension": self.dimension,
            "counts": self.counts(),
            "euler": self.euler(),
            "connected": self.connected(),
            "closed": self.closed(),
            "all_cubes": self.all_cubes,
            "top_cells": self.top_count() if self.cells else 0,
        }
        out["orientable"] = self.orientable() if out["closed"] else None
        return out


def extract(
    T: Triangulation,
    partition_or_labels,
    subset: Sequence[int],
    multisets: Optional[List[Tuple[int, ...]]] = None,
) -> CellComplex:
    """The cell complex over the faces whose labels touch exactly `subset`."""
    labels = _labels_of(partition_or_labels)
    S = tuple(sorted(set(subset)))
    if not S:
        raise TriangulationError("subset of partition classes must be non-empty")
    fp = T.face_poset
    if multisets is None:
        multisets = class_label_multisets(T, labels)
    Sset = set(S)
    cells = [cid for cid in range(fp.n_classes) if set(multisets[cid]) == Sset]
    index = {cid: i for i, cid in enumerate(cells)}
    dims = []
    mults = []
    children: List[Tuple[int, ...]] = []
    for cid in cells:
        f, corners = fp.canonical(cid)
        ms = multisets[cid]
        dims.append(len(corners) - len(S))
        mults.append(ms)
        ch = []
        for c in corners:
            lab = labels[fp.class_of(f, (c,))]
            if ms.count(lab) >= 2:
                rest = tuple(x for x in corners if x != c)
                ch.append(index[fp.class_of(f, rest)])
        children.append(tuple(ch))
    return CellComplex(
        triangulation=T,
        labels=labels,
        subset=S,
        cells=tuple(cells),
        dims=tuple(dims),
        multisets=tuple(mults),
        children=tuple(children),
    )


@dataclass(frozen=True)
class CollapseResult:
    pairs_removed: int
    spine_cells: Tuple[int, ...]   # surviving cell indexes
    raw_dim: int
    spine_dim: int
    spine_counts: Tuple[int, ...]
    spine_euler: int


def collapse(X: CellComplex) -> CollapseResult:
    """Greedy free-face collapse; removes (face, unique parent) pairs until stuck.

    Deterministic: among free faces, the one with the highest-dimensional
    parent, then lowest index, goes first.
    """
    ncells = len(X.cells)
    parent_inc: List[List[int]] = [[] for _ in range(ncells)]  # parent indexes, with repetition
    for i, ch in enumerate(X.children):
        for c in ch:
            parent_inc[c].append(i)
    pcount = [len(p) for p in parent_inc]
    alive = [True] * ncells
    heap: List[Tuple[int, int]] = []

    def push(i: int) -> None:
        if pcount[i] == 1:
            p = next((q for q in parent_inc[i] if alive[q]), None)
            if p is not None:
                heapq.heappush(heap, (-X.dims[p], i))

    for i in range(ncells):
        if pcount[i] == 1:
            push(i)
    removed = 0
    while heap:
        _, i = heapq.heappop(heap)
        if not alive[i] or pcount[i] != 1:
            continue
        p = next((q for q in parent_inc[i] if alive[q]), None)
        if p is None:
            continue
        alive[i] = alive[p] = False
        removed += 1
        for c in X.children[p]:
            if alive[c]:
                pcount[c] -= 1
                if pcount[c] == 1:
                    push(c)
        # the removed face stops being a parent of its own children
        for c in X.children[i]:
            if alive[c]:
                pcount[c] -= sum(1 for q in parent_inc[c] if q == i)
                parent_inc[c] = [q for q in parent_inc[c] if q != i]
                if pcount[c] == 1:
                    push(c)
        # drop the dead parent from its other faces' parent lists
        for c in set(X.children[p]):
            if alive[c]:
                parent_inc[c] = [q for q in parent_inc[c] if q != p]
    spine = tuple(i for i in range(ncells) if alive[i])
    sdims = [X.dims[i] for i in spine]
    sdim = max(sdims) if sdims else -1
    counts = [0] * (sdim + 1)
    for d in sdims:
        counts[d] += 1
    euler = sum(1 if d % 2 == 0 else -1 for d in sdims)
    return CollapseResult(
        pairs_removed=removed,
        spine_cells=spine,
        raw_dim=X.dimension,
        spine_dim=sdim,
        spine_counts=tuple(counts),
        spine_euler=euler,
    )


@dataclass(eq=False)
class LinkComplex:
    """Link of a vertex of a cube complex: h-simplices are corners of (h+1)-cubes."""

    vertex_cell: int
    vertex_ids: Tuple[Tuple[int, int], ...]   # (edge cell index, canonical end corner)
    cells_by_dim: Tuple[Tuple[Tuple[int, ...], ...], ...]  # from dim 1 up; vertex index tuples
    simplicial: bool
    simplicial_reason: Optional[str]
    triangulation: Optional[Triangulation]

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_ids)

    def flag(self) -> Tuple[bool, Optional[str]]:
        """Every clique of the 1-skeleton spans a simplex of the link."""
        if not self.simplicial:
            return False, self.simplicial_reason
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        have = [set() for _ in range(len(self.cells_by_dim) + 2)]
        for h, cells in enumerate(self.cells_by_dim, start=1):
            for cell in cells:
                have[h].add(tuple(sorted(cell)))
        for a, b in have[1] if len(have) > 1 else ():
            g.add_edge(a, b)
        for clique in nx.enumerate_all_cliques(g):
            if len(clique) < 3:
                continue
            h = len(clique) - 1
            if h >= len(have) or tuple(sorted(clique)) not in have[h]:
                return False, "clique of size %d spans no simplex" % len(clique)
        return True, None


def vertex_links(X: CellComplex) -> Dict[int, LinkComplex]:
    """Links of all 0-cells, keyed by cell index.

    Requires an all-cube complex.  The link triangulation is assembled
    whenever every ridge corner at the vertex is shared by exactly two
    top corners; otherwise that field is None and the face lists still
    describe the link.
    """
    if not X.all_cubes:
        raise TriangulationError("vertex links need a cube complex (some label has multiplicity > 2)")
    fp = X.triangulation.face_poset
    maps_cache: Dict[int, Dict[int, Dict[int, int]]] = {}

    def inc_map(cid: int, enc: int) -> Dict[int, int]:
        if cid not in maps_cache:
            maps_cache[cid] = fp.incarnation_maps(cid)
        return maps_cache[cid][enc]

    D = X.dimension
    # per 0-cell: list of (cube dim, cube index, link cell as end tuple, corner data)
    buckets: Dict[int, List[Tuple[int, int, Tuple[Tuple[int, int], ...], object]]] = {
        i: [] for i, d in enumerate(X.dims) if d == 0
    }
    for i, d in enumerate(X.dims):
        if d < 1:
            continue
        f, corners = fp.canonical(X.cells[i])
        by_label: Dict[int, List[int]] = {}
        for c in corners:
            by_label.setdefault(X.labels[fp.class_of(f, (c,))], []).append(c)
        dirs = sorted(l for l, cs in by_label.items() if len(cs) == 2)
        fixed = tuple(cs[0] for cs in by_label.values() if len(cs) == 1)
        for choice in product(*(sorted(by_label[l]) for l in dirs)):
            corner_face = tuple(sorted(fixed + choice))
            v = X._index(fp.class_of(f, corner_face))
            ends = []
            for t, l in enumerate(dirs):
                keep = set(corner_face) | set(by_label[l])
                edge_corners = tuple(sorted(keep))
                ecid = fp.class_of(f, edge_corners)
                enc = f * fp.M + sum(1 << c for c in edge_corners)
                end = inc_map(ecid, enc)[choice[t]]
                ends.append((X._index(ecid), end))
            buckets[v].append((d, i, tuple(ends), (f, by_label, dirs, choice, corner_face)))

    out: Dict[int, LinkComplex] = {}
    for v, inc in buckets.items():
        vertex_ids = sorted({e for _, _, ends, _ in inc for e in ends})
        vindex = {e: j for j, e in enumerate(vertex_ids)}
        cells_by_dim: List[List[Tuple[int, ...]]] = [[] for _ in range(max(D - 1, 0))]
        for d, _, ends, _ in inc:
            if d >= 2:
                cells_by_dim[d - 2].append(tuple(vindex[e] for e in ends))
        simplicial = True
        reason = None
        for h, cells in enumerate(cells_by_dim, start=1):
            seen = set()
            for cell in cells:
                if len(set(cell)) != len(cell):
                    simplicial, reason = False, "a link %d-simplex has a repeated vertex" % h
                    break
                key = tuple(sorted(cell))
                if key in seen:
                    simplicial, reason = False, "two link %d-simplices share their vertex set" % h
                    break
                seen.add(key)
            if not simplicial:
                break
        tri = _link_triangulation(X, fp, inc_map, v, inc, vindex) if D >= 1 else None
        out[v] = LinkComplex(
            vertex_cell=v,
            vertex_ids=tuple(vertex_ids),
            cells_by_dim=tuple(tuple(c) for c in cells_by_dim),
            simplicial=simplicial,
            simplicial_reason=reason,
            triangulation=tri,
        )
    return out


def _link_triangulation(X, fp, inc_map, v, inc, vindex) -> Optional[Triangulation]:
    D = X.dimension
    tops = [rec for rec in inc if rec[0] == D]
    if not tops or D < 2:
        # dimension-1 links are vertex pairs with no gluing structure
        return None
    ridge_key_to = {}
    for fi, (_, i, ends, data) in enumerate(tops):
        f, by_label, dirs, choice, corner_face = data
        for slot, l in enumerate(dirs):
            keep = tuple(sorted(set(corner_face) | set().union(*(set(by_label[l2]) for l2 in dirs if l2 != l))))
            gcid = fp.class_of(f, keep)
            enc = f * fp.M + sum(1 << c for c in keep)
            phi = inc_map(gcid, enc)
            corner_id = tuple(sorted(phi[c] for c in corner_face))
            ridge_key_to.setdefault((gcid, corner_id), []).append((fi, slot))
    m = len(tops)
    L = D
    glu: List[List[Optional[Tuple[int, Tuple[int, ...]]]]] = [[None] * L for _ in range(m)]
    for key, hits in ridge_key_to.items():
        if len(hits) != 2:
            return None
        (f1, s1), (f2, s2) = hits
        dirs1 = tops[f1][3][2]
        dirs2 = tops[f2][3][2]
        pos2 = {l: p for p, l in enumerate(dirs2)}
        bij1 = [0] * L
        for p, l in enumerate(dirs1):
            bij1[p] = s2 if p == s1 else pos2[l]
        glu[f1][s1] = (f2, tuple(bij1))
        pos1 = {l: p for p, l in enumerate(dirs1)}
        bij2 = [0] * L
        for p, l in enumerate(dirs2):
            bij2[p] = s1 if p == s2 else pos1[l]
        glu[f2][s2] = (f1, tuple(bij2))
    if any(x is None for row in glu for x in row):
        return None
    try:
        return Triangulation(D - 1, glu)  # type: ignore[arg-type]
    except TriangulationError:
        return None


@dataclass(eq=False)
class NpcReport:
    ok: bool
    all_cubes: bool
    link_count: int
    failures: Tuple[Tuple[int, str], ...]
    degrees: Tuple[int, ...]   # link vertex count per 0-cell, cell-index order

    def __bool__(self) -> bool:
        return self.ok


def npc_check(X: CellComplex) -> NpcReport:
    """Non-positive curvature test: every vertex link simplicial and flag."""
    if not X.all_cubes:
        return NpcReport(False, False, 0, ((-1, "cells are not all cubes"),), ())
    links = vertex_links(X)
    failures = []
    degrees = []
    for v in sorted(links):
        lk = links[v]
        degrees.append(lk.vertex_count)
        if not lk.simplicial:
            failures.append((v, lk.simplicial_reason or "link is not simplicial"))
            continue
        ok, why = lk.flag()
        if not ok:
            failures.append((v, why or "link is not flag"))
    return NpcReport(
        ok=not failures,
        all_cubes=True,
        link_count=len(links),
        failures=tuple(failures),
        degrees=tuple(degrees),
    )


def cell_summary(C: CellComplex) -> dict:
    """Summary fields of one complex; closedness only meaningful for the full subset."""
    return C.summary()


def vertex_link(C: CellComplex, v) -> LinkComplex:
    """Link of one 0-cell; `v` is a cell index or a canonical face key."""
    fp = C.triangulation.face_poset
    if isinstance(v, str):
        i = C._index(fp.class_of_key(v))
    else:
        i = int(v)
    if not (0 <= i < len(C.cells)) or C.dims[i] != 0:
        raise TriangulationError("cell %r is not a vertex of this complex" % (v,))
    return vertex_links(C)[i]


def graph_genus(C: CellComplex) -> int:
    """Rank of the first homology of a connected graph complex."""
    if C.dimension > 1:
        raise TriangulationError("genus is defined for graphs; this complex has dimension %d" % C.dimension)
    if not C.connected():
        raise TriangulationError("genus is defined for connected graphs")
    counts = C.counts()
    v = counts[0] if counts else 0
    e = counts[1] if len(counts) > 1 else 0
    return e - v + 1

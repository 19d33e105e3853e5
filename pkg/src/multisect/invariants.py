"""Derived invariants of a partitioned triangulation.

Genera of the region graphs, the central complex summary, the Euler
identity in dimension four, edge-path fundamental group presentations,
and the homology-level surjectivity checks for the inclusion of the
central complex into the ambient manifold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import cells as cells_mod
from . import gf2
from .partition import ValidationReport, VertexPartition, validate
from .triangulation import Triangulation, TriangulationError


@dataclass(eq=False)
class MultisectionReport:
    n: int
    k: int
    ambient_euler: int
    genera: Tuple[int, ...]
    spine_dims: Tuple[Tuple[Tuple[int, ...], int], ...]   # (subset, collapsed dim)
    central_summary: dict
    central_betti: Tuple[int, ...]
    central_genus: Optional[int]       # surface genus / crosscap number when n-k == 2
    npc_ok: Optional[bool]
    euler_identity: Optional[bool]     # the dimension-4 identity, when applicable
    supports_multisection: bool
    supports_generalized: bool
    validation: ValidationReport = field(repr=False)


def multisection_report(T: Triangulation, P: VertexPartition, with_npc: bool = True) -> MultisectionReport:
    """Validate the partition and summarise the induced decomposition."""
    rep = validate(T, P)
    n, k = rep.n, rep.k
    central = cells_mod.extract(T, P, tuple(range(k + 1)))
    summ = central.summary()
    betti = central.betti()
    genus = None
    if summ["dimension"] == 2 and summ["closed"] and summ["connected"]:
        if summ["orientable"]:
            genus = (2 - summ["euler"]) // 2
        else:
            genus = 2 - summ["euler"]
    npc_ok = None
    if with_npc and central.all_cubes and central.cells:
        npc_ok = cells_mod.npc_check(central).ok
    ambient_euler = T.summary(with_betti=False).euler
    genera = rep.genera()
    identity = None
    if n == 4 and genus is not None:
        identity = ambient_euler == 2 + genus - sum(genera)
    return MultisectionReport(
        n=n,
        k=k,
        ambient_euler=ambient_euler,
        genera=genera,
        spine_dims=tuple((r.subset, r.spine_dim) for r in rep.subsets),
        central_summary=summ,
        central_betti=betti,
        central_genus=genus,
        npc_ok=npc_ok,
        euler_identity=identity,
        supports_multisection=rep.supports_multisection,
        supports_generalized=rep.supports_generalized,
        validation=rep,
    )


@dataclass(frozen=True)
class TrisectionVerdict:
    ok: bool
    ambient_euler: int
    central_genus: int
    genera: Tuple[int, ...]
    gk: Optional[Tuple[int, int]]   # (g, k) when all region genera agree

    def __bool__(self) -> bool:
        return self.ok


def euler_trisection_check(R: MultisectionReport) -> TrisectionVerdict:
    """The four-dimensional identity chi(M) = 2 + g(central) - sum of genera."""
    if R.n != 4:
        raise TriangulationError("the trisection Euler identity needs dimension 4, got %d" % R.n)
    if R.central_genus is None:
        raise TriangulationError("central complex is not a closed connected surface")
    ok = R.ambient_euler == 2 + R.central_genus - sum(R.genera)
    gk = None
    if len(set(R.genera)) == 1:
        gk = (R.central_genus, R.genera[0])
    return TrisectionVerdict(
        ok=ok,
        ambient_euler=R.ambient_euler,
        central_genus=R.central_genus,
        genera=R.genera,
        gk=gk,
    )


@dataclass(eq=False)
class GroupPresentation:
    """Generators 0..g-1; relator letters are +-(index+1)."""

    generators: int
    relators: Tuple[Tuple[int, ...], ...]
    provenance: str

    def abelian_rank_gf2(self) -> int:
        vecs = []
        for word in self.relators:
            v = 0
            for letter in word:
                v ^= 1 << (abs(letter) - 1)
            vecs.append(v)
        return self.generators - gf2.rank(vecs)


def free_reduce(word) -> Tuple[int, ...]:
    out: List[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _edge_ends(X: cells_mod.CellComplex):
    """Per edge cell: (tail vertex, head vertex) by canonical corner order."""
    fp = X.triangulation.face_poset
    ends = {}
    for i, d in enumerate(X.dims):
        if d != 1:
            continue
        f, corners = fp.canonical(X.cells[i])
        by_label: Dict[int, List[int]] = {}
        for c in corners:
            by_label.setdefault(X.labels[fp.class_of(f, (c,))], []).append(c)
        a, b = sorted(next(cs for cs in by_label.values() if len(cs) == 2))
        va = X._index(fp.class_of(f, tuple(x for x in corners if x != b)))
        vb = X._index(fp.class_of(f, tuple(x for x in corners if x != a)))
        ends[i] = (va, vb, a, b)
    return ends


def _spanning_tree(X: cells_mod.CellComplex, ends):
    """Breadth-first tree from the least vertex cell; edge indexes ascending."""
    adj: Dict[int, List[Tuple[int, int, int]]] = {}
    for e, (va, vb, _, _) in sorted(ends.items()):
        adj.setdefault(va, []).append((e, vb, 1))
        adj.setdefault(vb, []).append((e, va, -1))
    vertices = sorted(i for i, d in enumerate(X.dims) if d == 0)
    if not vertices:
        raise TriangulationError("complex has no vertices")
    root = vertices[0]
    parent: Dict[int, Optional[Tuple[int, int]]] = {root: None}  # vertex -> (edge, dir into vertex)
    order = [root]
    head = 0
    tree_edges = set()
    while head < len(order):
        v = order[head]
        head += 1
        for e, w, dr in adj.get(v, ()):
            if w not in parent:
                parent[w] = (e, dr)
                tree_edges.add(e)
                order.append(w)
    if len(parent) != len(vertices):
        raise TriangulationError("complex is disconnected")
    return root, parent, tree_edges


def _square_boundary(X: cells_mod.CellComplex, ends, i: int):
    """The 4-cycle of a square cell as (edge, direction) steps."""
    fp = X.triangulation.face_poset
    f, corners = fp.canonical(X.cells[i])
    by_label: Dict[int, List[int]] = {}
    for c in corners:
        by_label.setdefault(X.labels[fp.class_of(f, (c,))], []).append(c)
    dirs = sorted(l for l, cs in by_label.items() if len(cs) == 2)
    (a1, b1), (a2, b2) = (tuple(sorted(by_label[l])) for l in dirs)
    fixed = tuple(cs[0] for cs in by_label.values() if len(cs) == 1)
    path = []
    corner_cycle = [(a1, a2), (b1, a2), (b1, b2), (a1, b2), (a1, a2)]
    maps_cache: Dict[int, Dict[int, Dict[int, int]]] = {}
    for (u1, u2), (w1, w2) in zip(corner_cycle, corner_cycle[1:]):
        veer = 0 if u1 != w1 else 1  # which coordinate moves
        keep = set(fixed) | set(by_label[dirs[veer]]) | {u2 if veer == 0 else u1}
        edge_corners = tuple(sorted(keep))
        ecid = fp.class_of(f, edge_corners)
        if ecid not in maps_cache:
            maps_cache[ecid] = fp.incarnation_maps(ecid)
        phi = maps_cache[ecid][f * fp.M + sum(1 << c for c in edge_corners)]
        start = phi[u1 if veer == 0 else u2]
        stop = phi[w1 if veer == 0 else w2]
        e = X._index(ecid)
        _, _, ca, cb = ends[e]
        path.append((e, 1 if (start, stop) == (ca, cb) else -1))
    return path


def pi1_presentation(C: cells_mod.CellComplex, provenance: str = "") -> GroupPresentation:
    """Edge-path presentation from the 2-skeleton of a cube complex.

    Generators are the edges outside a breadth-first spanning tree;
    every square contributes the boundary word of its 4-cycle, freely
    reduced.
    """
    if not C.all_cubes:
        raise TriangulationError("presentations are computed for cube complexes only")
    if C.dimension < 1:
        raise TriangulationError("complex has no edges")
    ends = _edge_ends(C)
    root, parent, tree_edges = _spanning_tree(C, ends)
    gen_index = {}
    for e in sorted(ends):
        if e not in tree_edges:
            gen_index[e] = len(gen_index)
    relators = []
    for i, d in enumerate(C.dims):
        if d != 2:
            continue
        word = []
        for e, dr in _square_boundary(C, ends, i):
            if e in gen_index:
                word.append(dr * (gen_index[e] + 1))
        relators.append(free_reduce(word))
    return GroupPresentation(
        generators=len(gen_index),
        relators=tuple(relators),
        provenance=provenance or "subset=%s root=%d" % (",".join(map(str, C.subset)), root),
    )


@dataclass(eq=False)
class InclusionReport:
    label: int
    target_rank: int
    generator_words: Tuple[Tuple[int, ...], ...]
    relators_die: bool
    abelian_image_rank: int
    surjective: bool

    def __bool__(self) -> bool:
        return self.relators_die and self.surjective


def _class_vertex(X: cells_mod.CellComplex, fp, cell: int, label: int) -> int:
    f, corners = fp.canonical(X.cells[cell])
    for c in corners:
        v = fp.class_of(f, (c,))
        if X.labels[v] == label:
            return v
    raise TriangulationError("cell %d has no vertex of class %d" % (cell, label))


def inclusion_epimorphism(T: Triangulation, P: VertexPartition, label: int) -> InclusionReport:
    """Push the central complex's loops into one region graph.

    Central vertices map to their class-`label` ambient vertex; a
    central edge maps to the monochromatic edge between its doubled
    vertices when the doubled class is `label`, else to a constant
    path.  Every relator of the central complex must die in the free
    group of the graph, and the abelianized images must span it.
    """
    k = P.k
    if not 0 <= label <= k:
        raise TriangulationError("class label %d out of range 0..%d" % (label, k))
    fp = T.face_poset
    central = cells_mod.extract(T, P, tuple(range(k + 1)))
    graph = cells_mod.extract(T, P, (label,))
    if graph.dimension > 1:
        raise TriangulationError("region %d is not a graph (contains higher cells)" % label)
    if not central.connected() or not graph.connected():
        raise TriangulationError("central complex and region graph must be connected")

    c_ends = _edge_ends(central)
    c_root, c_parent, c_tree = _spanning_tree(central, c_ends)
    g_ends = _edge_ends(graph)
    g_root, g_parent, g_tree = _spanning_tree(graph, g_ends)
    g_gen = {}
    for e in sorted(g_ends):
        if e not in g_tree:
            g_gen[e] = len(g_gen)

    # ambient vertex class of each graph vertex cell (identity on singleton faces)
    graph_vertex_of: Dict[int, int] = {}
    for i, d in enumerate(graph.dims):
        if d == 0:
            graph_vertex_of[graph.cells[i]] = i

    def edge_image(e: int, dr: int) -> List[int]:
        f, corners = fp.canonical(central.cells[e])
        doubled = None
        pair = None
        counts: Dict[int, List[int]] = {}
        for c in corners:
            v = fp.class_of(f, (c,))
            counts.setdefault(central.labels[v], []).append(c)
        for l, cs in counts.items():
            if len(cs) == 2:
                doubled, pair = l, cs
        if doubled != label:
            return []
        a, b = sorted(pair)
        ecid = fp.class_of(f, (a, b))
        gi = graph._index(ecid)
        # orient along the central edge's canonical direction, then apply dr
        va, vb, ca, cb = c_ends[e]
        tail = _class_vertex(central, fp, va, label)
        head = _class_vertex(central, fp, vb, label)
        gva, gvb, _, _ = g_ends[gi]
        tail_cell = graph_vertex_of[tail]
        sign = 1 if tail_cell == gva else -1
        if graph_vertex_of[head] not in (gva, gvb) or tail_cell not in (gva, gvb):
            raise TriangulationError("inclusion image of an edge misses its endpoints")
        out = [sign * dr * (g_gen[gi] + 1)] if gi in g_gen else []
        return out

    # generator words: tree path to tail, the edge, tree path back
    def tree_path(v: int) -> List[Tuple[int, int]]:
        path = []
        while c_parent[v] is not None:
            e, dr = c_parent[v]  # type: ignore[misc]
            path.append((e, dr))
            va, vb, _, _ = c_ends[e]
            v = va if dr == 1 else vb
        path.reverse()
        return path

    words = []
    c_gens = [e for e in sorted(c_ends) if e not in c_tree]
    for e in c_gens:
        va, vb, _, _ = c_ends[e]
        cycle = tree_path(va) + [(e, 1)] + [(x, -d) for x, d in reversed(tree_path(vb))]
        word: List[int] = []
        for ee, dd in cycle:
            word.extend(edge_image(ee, dd))
        words.append(free_reduce(word))

    relators_die = True
    for i, d in enumerate(central.dims):
        if d != 2:
            continue
        word = []
        for ee, dd in _square_boundary(central, c_ends, i):
            word.extend(edge_image(ee, dd))
        if free_reduce(word):
            relators_die = False
            break

    vecs = []
    for w in words:
        v = 0
        for letter in w:
            v ^= 1 << (abs(letter) - 1)
        vecs.append(v)
    rank = gf2.rank(vecs)
    target = len(g_gen)
    return InclusionReport(
        label=label,
        target_rank=target,
        generator_words=tuple(words),
        relators_die=relators_die,
        abelian_image_rank=rank,
        surjective=rank == target,
    )


def h1_onto_check(T: Triangulation, P: VertexPartition, cls: int = 0) -> bool:
    """Surjectivity of first GF(2) homology under the central inclusion.

    The cellular approximation sends a central edge with doubled class
    `cls` to the ambient monochromatic edge on its doubled pair, and
    every other central edge to a constant path.
    """
    fp = T.face_poset
    k = P.k
    central = cells_mod.extract(T, P, tuple(range(k + 1)))
    edge_ids = list(fp.class_ids_of_dim(1))
    edge_pos = {cid: j for j, cid in enumerate(edge_ids)}

    # cycle space of the central 1-skeleton
    c_edges = [i for i, d in enumerate(central.dims) if d == 1]
    c_vpos = {i: j for j, i in enumerate(i for i, d in enumerate(central.dims) if d == 0)}
    cols = []
    images = []
    for i in c_edges:
        f, corners = fp.canonical(central.cells[i])
        counts: Dict[int, List[int]] = {}
        for c in corners:
            counts.setdefault(central.labels[fp.class_of(f, (c,))], []).append(c)
        doubled, pair = next((l, cs) for l, cs in counts.items() if len(cs) == 2)
        v = 0
        for c in pair:
            rest = tuple(x for x in corners if x != c)
            v ^= 1 << c_vpos[central._index(fp.class_of(f, rest))]
        cols.append(v)
        if doubled == cls:
            images.append(1 << edge_pos[fp.class_of(f, tuple(sorted(pair)))])
        else:
            images.append(0)
    cycle_masks = gf2.kernel_basis(cols)

    boundaries = []
    for cid in fp.class_ids_of_dim(2):
        v = 0
        for ch in fp.children(cid):
            v ^= 1 << edge_pos[ch]
        boundaries.append(v)
    base = gf2.Basis()
    for v in boundaries:
        base.add(v)
    r2 = base.rank
    b1 = len(edge_ids) - gf2.rank(cols_ambient_d1(T, fp)) - r2
    extra = 0
    for mask in cycle_masks:
        img = 0
        mm = mask
        while mm:
            low = mm & -mm
            img ^= images[low.bit_length() - 1]
            mm ^= low
        if base.add(img):
            extra += 1
    return extra == b1


def cols_ambient_d1(T: Triangulation, fp) -> List[int]:
    """Boundary columns of the ambient 1-skeleton (vertex bits per edge)."""
    v_start = fp.dim_start[0]
    cols = []
    for cid in fp.class_ids_of_dim(1):
        v = 0
        for ch in fp.children(cid):
            v ^= 1 << (ch - v_start)
        cols.append(v)
    return cols

"""Vertex partitions and the checks that make them multisection-grade.

A partition assigns each vertex class a label in {0..k}.  Validation
rebuilds, for every nonempty subset of labels, the cell complex the
corresponding region collapses onto, and measures its dimension after
collapsing.  The verdicts are proved directly on the complexes rather
than inferred from the construction that produced the partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import cells as cells_mod
from .perms import compose, identity, invert
from .triangulation import Triangulation, TriangulationError
from .unionfind import UnionFind

SCHEMES = ("odd-bary", "even-bary", "even-npc", "pairs", "explicit")


@dataclass(frozen=True)
class VertexPartition:
    """Labels for the vertex classes of a triangulation, classes 0..k."""

    k: int
    labels: Tuple[int, ...]
    scheme: str = "explicit"

    def __post_init__(self):
        if self.k < 0:
            raise TriangulationError("partition needs k >= 0")
        for v, l in enumerate(self.labels):
            if not isinstance(l, int) or not 0 <= l <= self.k:
                raise TriangulationError(
                    "vertex class %d has label %r, outside 0..%d" % (v, l, self.k)
                )

    def counts(self) -> Tuple[int, ...]:
        out = [0] * (self.k + 1)
        for l in self.labels:
            out[l] += 1
        return tuple(out)


def coordinate_labels(T: Triangulation) -> Tuple[int, ...]:
    """Per-vertex-class corner label, read off the builder's metadata."""
    rows = T.extras.get("corner_labels")
    if rows is None:
        raise TriangulationError("this triangulation carries no corner labels")
    fp = T.face_poset
    nv = fp.dim_start[1]
    out: List[Optional[int]] = [None] * nv
    for f, row in enumerate(rows):
        for c, lab in enumerate(row):
            v = fp.class_of(f, (c,))
            if lab is None:
                continue
            if out[v] is None:
                out[v] = lab
            elif out[v] != lab:
                raise TriangulationError("vertex class %s has conflicting corner labels" % fp.key(v))
    for v, lab in enumerate(out):
        if lab is None:
            raise TriangulationError("vertex class %s has no corner label" % fp.key(v))
    return tuple(out)  # type: ignore[return-value]


def scheme_partition(
    T: Triangulation,
    scheme: str,
    *,
    carriers=None,
    sides: Optional[Dict[int, int]] = None,
    blocks: Optional[Sequence[Sequence[int]]] = None,
    labels=None,
    k: Optional[int] = None,
) -> VertexPartition:
    """Build a partition by one of the named rules.

    odd-bary / even-bary label each barycentre by half its carrier
    dimension.  even-npc expects carriers of a second subdivision plus a
    0/1 side for each top-dimensional carrier.  pairs groups a
    coordinate labeling into blocks.  explicit takes the labels as-is.
    """
    n = T.dimension
    fp = T.face_poset
    nv = fp.dim_start[1]
    if scheme not in SCHEMES:
        raise TriangulationError("unknown partition scheme %r (have %s)" % (scheme, ", ".join(SCHEMES)))

    if scheme in ("odd-bary", "even-bary"):
        if carriers is None:
            raise TriangulationError("%s needs carrier labels of the subdivision" % scheme)
        if scheme == "odd-bary" and n % 2 == 0:
            raise TriangulationError("odd-bary needs odd dimension, got %d" % n)
        if scheme == "even-bary" and n % 2 == 1:
            raise TriangulationError("even-bary needs even dimension, got %d" % n)
        dims = tuple(carriers.dims)
        if len(dims) != nv:
            raise TriangulationError("carrier labels cover %d vertex classes, expected %d" % (len(dims), nv))
        return VertexPartition(k=n // 2, labels=tuple(d // 2 for d in dims), scheme=scheme)

    if scheme == "even-npc":
        if carriers is None or sides is None:
            raise TriangulationError("even-npc needs carrier labels and top-carrier sides")
        if n % 2 == 1:
            raise TriangulationError("even-npc needs even dimension, got %d" % n)
        dims = tuple(carriers.dims)
        if len(dims) != nv:
            raise TriangulationError("carrier labels cover %d vertex classes, expected %d" % (len(dims), nv))
        kk = n // 2
        out = []
        for v, d in enumerate(dims):
            if d == n:
                s = sides.get(v)
                if s not in (0, 1):
                    raise TriangulationError("vertex class %s has a top carrier but no 0/1 side" % fp.key(v))
                out.append(s)
            elif d <= 1:
                out.append(d)
            else:
                out.append(d // 2 + 1)
        return VertexPartition(k=kk, labels=tuple(out), scheme=scheme)

    if scheme == "pairs":
        if blocks is None:
            raise TriangulationError("pairs needs blocks over the coordinate labels")
        coord = tuple(labels) if labels is not None else coordinate_labels(T)
        if len(coord) != nv:
            raise TriangulationError("coordinate labels cover %d vertex classes, expected %d" % (len(coord), nv))
        block_of: Dict[int, int] = {}
        for b, members in enumerate(blocks):
            for x in members:
                if x in block_of:
                    raise TriangulationError("coordinate label %d sits in two blocks" % x)
                block_of[x] = b
        try:
            lab = tuple(block_of[x] for x in coord)
        except KeyError as e:
            raise TriangulationError("coordinate label %s is in no block" % e) from None
        return VertexPartition(k=len(blocks) - 1, labels=lab, scheme="pairs")

    # explicit
    if labels is None:
        raise TriangulationError("explicit scheme needs labels")
    if isinstance(labels, dict):
        lab = tuple(labels[v] for v in range(nv))
    else:
        lab = tuple(labels)
    if len(lab) != nv:
        raise TriangulationError("labels cover %d vertex classes, expected %d" % (len(lab), nv))
    kk = max(lab) if k is None else k
    return VertexPartition(k=kk, labels=lab, scheme="explicit")


@dataclass(eq=False)
class ClassGraph:
    label: int
    vertices: int
    edges: int
    connected: bool
    genus: int          # 1 - euler characteristic of the spanned subcomplex


@dataclass(eq=False)
class SubsetReport:
    subset: Tuple[int, ...]
    nonempty: bool
    connected: bool
    closed: bool
    euler: int
    cell_counts: Tuple[int, ...]
    raw_dim: int
    spine_dim: int
    required_dim: Optional[int]       # Definition 1.1 bound; None for the full subset
    generalized_dim: Optional[int]    # codimension-2 bound; None for the full subset
    all_cubes: bool


@dataclass(eq=False)
class ValidationReport:
    n: int
    k: int
    profile_ok: bool
    profiles: Tuple[Tuple[int, ...], ...]
    class_graphs: Tuple[ClassGraph, ...]
    subsets: Tuple[SubsetReport, ...]
    central: SubsetReport
    supports_multisection: bool
    supports_generalized: bool
    diagnostics: Tuple[str, ...]

    def genera(self) -> Tuple[int, ...]:
        return tuple(g.genus for g in self.class_graphs)

    def subset_report(self, subset) -> SubsetReport:
        want = tuple(sorted(subset))
        for rep in self.subsets:
            if rep.subset == want:
                return rep
        if want == self.central.subset:
            return self.central
        raise KeyError(subset)


def validate(T: Triangulation, P: VertexPartition) -> ValidationReport:
    """Check the partition against the multisection conditions.

    Failures never raise; they land in the report and its diagnostics.
    """
    n = T.dimension
    k = P.k
    fp = T.face_poset
    nv = fp.dim_start[1]
    if len(P.labels) != nv:
        raise TriangulationError("partition labels cover %d vertex classes, expected %d" % (len(P.labels), nv))
    if k > 15:
        raise TriangulationError("subset enumeration over k=%d classes is not supported (k <= 15)" % k)
    labels = P.labels
    diagnostics: List[str] = []

    profiles = []
    for f in range(T.facet_count):
        row = [0] * (k + 1)
        for c in range(n + 1):
            row[labels[fp.class_of(f, (c,))]] += 1
        profiles.append(tuple(row))
    if n % 2 == 1:
        profile_ok = all(all(x == 2 for x in row) for row in profiles)
        if not profile_ok:
            diagnostics.append("some facet lacks the two-vertices-per-class profile")
    else:
        profile_ok = all(sorted(row) == [1] + [2] * k for row in profiles)
        if not profile_ok:
            diagnostics.append("some facet lacks the one-singleton profile")

    multisets = cells_mod.class_label_multisets(T, labels)

    # monochromatic-edge graphs, one per label
    uf = UnionFind(nv)
    edge_count = [0] * (k + 1)
    chi = [0] * (k + 1)
    for cid in range(fp.n_classes):
        ms = multisets[cid]
        if len(set(ms)) != 1:
            continue
        l = ms[0]
        d = len(ms) - 1
        chi[l] += 1 if d % 2 == 0 else -1
        if d == 1:
            edge_count[l] += 1
            f, corners = fp.canonical(cid)
            a = fp.class_of(f, (corners[0],))
            b = fp.class_of(f, (corners[1],))
            uf.union(a, b)
    vertex_count = [0] * (k + 1)
    rep: List[Optional[int]] = [None] * (k + 1)
    graph_connected = [True] * (k + 1)
    for v, l in enumerate(labels):
        vertex_count[l] += 1
        r = uf.find(v)
        if rep[l] is None:
            rep[l] = r
        elif rep[l] != r:
            graph_connected[l] = False
    class_graphs = []
    for l in range(k + 1):
        if vertex_count[l] == 0:
            graph_connected[l] = False
            diagnostics.append("class %d has no vertices" % l)
        class_graphs.append(
            ClassGraph(
                label=l,
                vertices=vertex_count[l],
                edges=edge_count[l],
                connected=graph_connected[l],
                genus=1 - chi[l],
            )
        )
        if not graph_connected[l] and vertex_count[l] > 0:
            diagnostics.append("class graph %d disconnected" % l)

    subset_reports: List[SubsetReport] = []
    central_report: Optional[SubsetReport] = None
    ok_mult = profile_ok and all(graph_connected)
    ok_gen = True
    full = tuple(range(k + 1))
    for r in range(1, k + 2):
        for S in combinations(full, r):
            X = cells_mod.extract(T, labels, S, multisets)
            res = cells_mod.collapse(X)
            proper = r <= k
            req = None
            gen = None
            if proper:
                req = r - 1 if (n == 2 * k and r == k) else r
                gen = n - r - 1
            rep_s = SubsetReport(
                subset=S,
                nonempty=bool(X.cells),
                connected=X.connected(),
                closed=X.closed(),
                euler=X.euler(),
                cell_counts=X.counts(),
                raw_dim=X.dimension,
                spine_dim=res.spine_dim,
                required_dim=req,
                generalized_dim=gen,
                all_cubes=X.all_cubes,
            )
            if proper:
                subset_reports.append(rep_s)
                if not rep_s.nonempty or not rep_s.connected:
                    ok_mult = False
                    diagnostics.append("subset %s complex is empty or disconnected" % (S,))
                if rep_s.spine_dim > req:
                    ok_mult = False
                    diagnostics.append(
                        "subset %s collapses to dimension %d, above the bound %d" % (S, rep_s.spine_dim, req)
                    )
                if not rep_s.nonempty or rep_s.spine_dim > gen:
                    ok_gen = False
                    diagnostics.append(
                        "subset %s misses the codimension-2 spine bound %d" % (S, gen)
                    )
            else:
                central_report = rep_s
                if not rep_s.nonempty:
                    ok_mult = False
                    ok_gen = False
                    diagnostics.append("central complex is empty")
                else:
                    if not rep_s.connected or not rep_s.closed:
                        ok_mult = False
                        diagnostics.append("central complex is not a closed connected complex")
                    if rep_s.raw_dim != n - k:
                        ok_mult = False
                        diagnostics.append(
                            "central complex has dimension %d, expected %d" % (rep_s.raw_dim, n - k)
                        )
    assert central_report is not None
    return ValidationReport(
        n=n,
        k=k,
        profile_ok=profile_ok,
        profiles=tuple(profiles),
        class_graphs=tuple(class_graphs),
        subsets=tuple(subset_reports),
        central=central_report,
        supports_multisection=ok_mult,
        supports_generalized=ok_gen,
        diagnostics=tuple(diagnostics),
    )


@dataclass(eq=False)
class SymRep:
    base: int
    trivial: bool
    corner_labels: Optional[Tuple[Tuple[int, ...], ...]]
    generators: Tuple[Tuple[int, ...], ...]
    orbits: Tuple[Tuple[int, ...], ...]


def _check_even_connected(T: Triangulation) -> None:
    fp = T.face_poset
    n = T.dimension
    if n >= 2:
        for cid in fp.class_ids_of_dim(n - 2):
            if fp.cls_count[cid] % 2 != 0:
                raise TriangulationError(
                    "symmetric representation undefined: face %s has odd degree %d"
                    % (fp.key(cid), fp.cls_count[cid])
                )
    if not T.summary(with_betti=False).connected:
        raise TriangulationError("symmetric representation needs a connected triangulation")


def _propagate_tree(T: Triangulation):
    """Breadth-first labelings: corner -> symbol, plus the non-tree edges."""
    m = T.facet_count
    L = T.dimension + 1
    lab: List[Optional[Tuple[int, ...]]] = [None] * m
    lab[0] = identity(L)
    order = [0]
    tree_cross: List[Tuple[int, int]] = []
    head = 0
    while head < len(order):
        f = order[head]
        head += 1
        for i in range(L):
            t, pi = T.gluings[f][i]
            if lab[t] is None:
                lab[t] = compose(lab[f], invert(pi))
                order.append(t)
            else:
                tree_cross.append((f, i))
    return lab, tree_cross


def symmetric_representation(T: Triangulation) -> SymRep:
    """Reflection monodromy of corner labelings.

    Labels {0..n} spread from a base facet by reflecting across ridges.
    Trivial when every closed reflection path brings the labeling back
    unchanged; then the global labeling is returned.  Otherwise the
    mismatch permutations generate the monodromy.
    """
    _check_even_connected(T)
    L = T.dimension + 1
    lab, cross = _propagate_tree(T)
    gens: List[Tuple[int, ...]] = []
    seen = set()
    ident = identity(L)
    for f, i in cross:
        t, pi = T.gluings[f][i]
        prop = compose(lab[f], invert(pi))
        # permutation of the label alphabet sending the stored labeling to the propagated one
        g = compose(prop, invert(lab[t]))
        if g != ident and g not in seen:
            seen.add(g)
            gens.append(g)
    uf = UnionFind(L)
    for g in gens:
        for x in range(L):
            uf.union(x, g[x])
    orbit_map: Dict[int, List[int]] = {}
    for x in range(L):
        orbit_map.setdefault(uf.find(x), []).append(x)
    orbits = tuple(tuple(v) for _, v in sorted(orbit_map.items(), key=lambda kv: kv[1][0]))
    trivial = not gens
    return SymRep(
        base=0,
        trivial=trivial,
        corner_labels=tuple(lab) if trivial else None,  # type: ignore[arg-type]
        generators=tuple(gens),
        orbits=orbits,
    )


def labeling_cover(T: Triangulation) -> Triangulation:
    """Smallest cover on which the reflection labeling is global.

    Facets are the (facet, labeling) pairs reachable from the base; the
    covering degree is the number of labelings over the base facet.
    """
    _check_even_connected(T)
    L = T.dimension + 1
    start = (0, identity(L))
    index: Dict[Tuple[int, Tuple[int, ...]], int] = {start: 0}
    order = [start]
    head = 0
    while head < len(order):
        f, labf = order[head]
        head += 1
        for i in range(L):
            t, pi = T.gluings[f][i]
            nxt = (t, compose(labf, invert(pi)))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
    glu = []
    for f, labf in order:
        row = []
        for i in range(L):
            t, pi = T.gluings[f][i]
            row.append((index[(t, compose(labf, invert(pi)))], pi))
        glu.append(row)
    extras = {"cover_sheets": tuple(order), "cover_degree": len(order) // T.facet_count}
    return Triangulation(T.dimension, glu, extras=extras)


@dataclass(eq=False)
class TwistedReport:
    admissible: bool
    blocks: Tuple[Tuple[int, ...], ...]
    block_action: Tuple[Tuple[int, ...], ...]   # per generator, image block of each block
    union_connected: bool
    reason: Optional[str]

    def __bool__(self) -> bool:
        return self.admissible


def twisted_admissible(T: Triangulation, P: VertexPartition, R: SymRep) -> TwistedReport:
    """Whether the monodromy permutes the alphabet blocks of P.

    P partitions the corner label alphabet {0..n} (what a global
    labeling would carry), not the vertex classes.  Admissible when
    every generator maps each block onto a block; the union graph joins
    vertex classes along edges whose two corner labels share a block.
    """
    fp = T.face_poset
    L = T.dimension + 1
    if len(P.labels) != L:
        raise TriangulationError(
            "partition has %d labels, the corner alphabet needs %d" % (len(P.labels), L)
        )
    blocks_map: Dict[int, List[int]] = {}
    for x in range(L):
        blocks_map.setdefault(P.labels[x], []).append(x)
    order = sorted(blocks_map)
    blocks = tuple(tuple(blocks_map[b]) for b in order)
    posn = {b: i for i, b in enumerate(order)}

    action: List[Tuple[int, ...]] = []
    admissible = True
    reason = None
    for g in R.generators:
        row = []
        for bi, members in enumerate(blocks):
            images = {P.labels[g[x]] for x in members}
            if len(images) != 1 or len(blocks[posn[next(iter(images))]]) != len(members):
                admissible = False
                reason = "generator image of block %d straddles blocks" % bi
                row.append(-1)
            else:
                row.append(posn[images.pop()])
        action.append(tuple(row))

    lab, _ = _propagate_tree(T)
    uf = UnionFind(fp.dim_start[1])
    for f in range(T.facet_count):
        for a in range(L):
            for b in range(a + 1, L):
                if P.labels[lab[f][a]] == P.labels[lab[f][b]]:
                    uf.union(fp.class_of(f, (a,)), fp.class_of(f, (b,)))
    roots = {uf.find(v) for v in range(fp.dim_start[1])}
    return TwistedReport(
        admissible=admissible,
        blocks=blocks,
        block_action=tuple(action),
        union_connected=len(roots) == 1,
        reason=reason,
    )

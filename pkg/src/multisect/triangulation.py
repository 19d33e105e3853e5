"""Generalized triangulations given by facet-gluing tables.

A triangulation of dimension n is a finite set of abstract n-simplices
(facets) together with a fixed-point-free pairing of their codimension-1
faces.  The gluing at slot i of facet f records a target facet t and a
corner bijection pi with pi(i) equal to the corner of t opposite the
glued face.  Self-gluings of one facet across two distinct faces are
allowed, so quotient spaces such as the doubled simplex or lens-type
identifications are in scope; a face is never glued to itself.

Faces of every dimension are identified by propagating the gluings over
corner subsets, which is done once with a union-find over (facet, subset)
pairs.  All derived orderings use the canonical incarnation of a face
class: the lexicographically least (facet, sorted corner tuple) pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import gf2
from .perms import compose, identity, invert, is_perm, sign
from .unionfind import UnionFind

Gluing = Tuple[int, Tuple[int, ...]]


class TriangulationError(ValueError):
    """Malformed gluing data or an unmet structural precondition."""


def face_key(facet: int, corners: Sequence[int]) -> str:
    """Render a face as `f:c1.c2...` using its corner list."""
    return "%d:%s" % (facet, ".".join(str(c) for c in corners))


def parse_face_key(text: str) -> Tuple[int, Tuple[int, ...]]:
    try:
        f_part, c_part = text.split(":")
        corners = tuple(int(c) for c in c_part.split("."))
        return int(f_part), corners
    except Exception:
        raise TriangulationError("malformed face key %r, expected f:c1.c2..." % (text,)) from None


@dataclass(frozen=True)
class TriSummary:
    """Global invariants of a triangulation."""

    dimension: int
    facet_count: int
    face_counts: Tuple[int, ...]
    euler: int
    connected: bool
    pseudo_manifold: bool
    orientable: bool
    orientation: Optional[Tuple[int, ...]]
    even: bool
    betti: Optional[Tuple[int, ...]]


@dataclass(frozen=True)
class DualGraph:
    """Facet adjacency graph; one edge per gluing pair, loops kept."""

    n_nodes: int
    edges: Tuple[Tuple[int, int], ...]
    connected: bool
    bipartition: Optional[Tuple[int, ...]]


class FacePoset:
    """Face classes of a triangulation, grouped and ordered canonically.

    Classes carry their dimension, incarnation count and canonical
    incarnation.  Class ids are assigned by (dimension, canonical key)
    so that identical inputs always produce identical numbering.
    """

    def __init__(self, tri: "Triangulation"):
        self.tri = tri
        n = tri.dimension
        L = n + 1
        M = 1 << L
        m = tri.facet_count
        self.L = L
        self.M = M
        glu = tri.gluings

        uf = UnionFind(m * M)
        union = uf.union
        for f in range(m):
            base_f = f * M
            for i in range(L):
                t, pi = glu[f][i]
                if (f, i) > (t, pi[i]):
                    continue
                base_t = t * M
                img = [0] * M
                pibit = [1 << pi[j] for j in range(L)]
                for mask in range(1, M):
                    low = mask & -mask
                    img[mask] = img[mask ^ low] | pibit[low.bit_length() - 1]
                bit_i = 1 << i
                for mask in range(1, M):
                    if mask & bit_i:
                        continue
                    union(base_f + mask, base_t + img[mask])

        corners_of = [tuple(c for c in range(L) if mask >> c & 1) for mask in range(M)]
        self._corners_of = corners_of
        find = uf.find
        root_info: Dict[int, List[int]] = {}
        for f in range(m):
            base = f * M
            for mask in range(1, M):
                r = find(base + mask)
                info = root_info.get(r)
                if info is None:
                    root_info[r] = [f, mask, 1]
                else:
                    info[2] += 1
                    if f == info[0] and corners_of[mask] < corners_of[info[1]]:
                        info[1] = mask

        entries = sorted(
            root_info.items(),
            key=lambda kv: (len(corners_of[kv[1][1]]), kv[1][0], corners_of[kv[1][1]]),
        )
        self.cls_canon: List[int] = []
        self.cls_dim: List[int] = []
        self.cls_count: List[int] = []
        self._root2cls: Dict[int, int] = {}
        dim_start = [0] * (n + 2)
        prev_dim = -1
        for cid, (root, (cf, cmask, count)) in enumerate(entries):
            d = len(corners_of[cmask]) - 1
            while prev_dim < d:
                prev_dim += 1
                dim_start[prev_dim] = cid
            self.cls_canon.append(cf * M + cmask)
            self.cls_dim.append(d)
            self.cls_count.append(count)
            self._root2cls[root] = cid
        while prev_dim < n + 1:
            prev_dim += 1
            dim_start[prev_dim] = len(entries)
        self.dim_start = dim_start
        self._uf = uf

    @property
    def n_classes(self) -> int:
        return len(self.cls_canon)

    def counts(self) -> Tuple[int, ...]:
        ds = self.dim_start
        return tuple(ds[d + 1] - ds[d] for d in range(self.tri.dimension + 1))

    def class_ids_of_dim(self, d: int) -> range:
        return range(self.dim_start[d], self.dim_start[d + 1])

    def class_of_enc(self, enc: int) -> int:
        return self._root2cls[self._uf.find(enc)]

    def class_of(self, facet: int, corners: Iterable[int]) -> int:
        mask = 0
        for c in corners:
            mask |= 1 << c
        return self.class_of_enc(facet * self.M + mask)

    def canonical(self, cid: int) -> Tuple[int, Tuple[int, ...]]:
        f, mask = divmod(self.cls_canon[cid], self.M)
        return f, self._corners_of[mask]

    def key(self, cid: int) -> str:
        f, corners = self.canonical(cid)
        return face_key(f, corners)

    def class_of_key(self, text: str) -> int:
        f, corners = parse_face_key(text)
        if not (0 <= f < self.tri.facet_count):
            raise TriangulationError("face key %r: facet out of range" % (text,))
        if not corners or any(not 0 <= c <= self.tri.dimension for c in corners):
            raise TriangulationError("face key %r: corner out of range" % (text,))
        if len(set(corners)) != len(corners):
            raise TriangulationError("face key %r: repeated corner" % (text,))
        return self.class_of(f, corners)

    def children(self, cid: int) -> Tuple[int, ...]:
        """Boundary face classes, one per deleted corner, repeats kept."""
        enc = self.cls_canon[cid]
        f, mask = divmod(enc, self.M)
        corners = self._corners_of[mask]
        if len(corners) == 1:
            return ()
        base = f * self.M
        out = []
        for c in corners:
            out.append(self.class_of_enc(base + (mask ^ (1 << c))))
        return tuple(out)

    def incarnations(self, cid: int) -> List[int]:
        """All (facet, subset) incarnations of the class, as encoded ints.

        Enumerated by a breadth-first walk through the gluings from the
        canonical incarnation, so the order is reproducible.
        """
        glu = self.tri.gluings
        L, M = self.L, self.M
        start = self.cls_canon[cid]
        seen = {start}
        queue = deque([start])
        out = []
        while queue:
            enc = queue.popleft()
            out.append(enc)
            f, mask = divmod(enc, M)
            for i in range(L):
                if mask >> i & 1:
                    continue
                t, pi = glu[f][i]
                img = 0
                rem = mask
                while rem:
                    low = rem & -rem
                    img |= 1 << pi[low.bit_length() - 1]
                    rem ^= low
                enc2 = t * M + img
                if enc2 not in seen:
                    seen.add(enc2)
                    queue.append(enc2)
        return out

    def incarnation_maps(self, cid: int) -> Dict[int, Dict[int, int]]:
        """Corner identification of every incarnation with the canonical one.

        Returns enc -> {corner of that incarnation: canonical corner}.
        """
        glu = self.tri.gluings
        L, M = self.L, self.M
        start = self.cls_canon[cid]
        f0, mask0 = divmod(start, M)
        maps: Dict[int, Dict[int, int]] = {start: {c: c for c in self._corners_of[mask0]}}
        queue = deque([start])
        while queue:
            enc = queue.popleft()
            phi = maps[enc]
            f, mask = divmod(enc, M)
            for i in range(L):
                if mask >> i & 1:
                    continue
                t, pi = glu[f][i]
                img = 0
                rem = mask
                while rem:
                    low = rem & -rem
                    img |= 1 << pi[low.bit_length() - 1]
                    rem ^= low
                enc2 = t * M + img
                if enc2 not in maps:
                    maps[enc2] = {pi[c]: v for c, v in phi.items()}
                    queue.append(enc2)
        return maps


class Triangulation:
    """A closed generalized triangulation.

    Args:
        dimension: n >= 1.
        gluings: per facet, per slot i, a pair (target facet, corner
            bijection) describing how the face opposite corner i is glued.
        vertex_ids: optional per-facet corner vertex identifiers; present
            for complexes built from vertex tuples.
        extras: free-form metadata (coordinate corner labels, deck
            pairings).  Never consulted by structural operations.
    """

    def __init__(
        self,
        dimension: int,
        gluings: Sequence[Sequence[Gluing]],
        vertex_ids: Optional[Sequence[Sequence[int]]] = None,
        extras: Optional[dict] = None,
    ):
        if dimension < 1:
            raise TriangulationError("dimension must be at least 1, got %d" % dimension)
        self.dimension = dimension
        L = dimension + 1
        glu: List[Tuple[Gluing, ...]] = []
        m = len(gluings)
        if m == 0:
            raise TriangulationError("a triangulation needs at least one facet")
        for f, row in enumerate(gluings):
            if len(row) != L:
                raise TriangulationError("facet %d has %d slots, expected %d" % (f, len(row), L))
            new_row = []
            for i, (t, pi) in enumerate(row):
                pi = tuple(pi)
                if not 0 <= t < m:
                    raise TriangulationError("facet %d slot %d: target %d out of range" % (f, i, t))
                if len(pi) != L or not is_perm(pi):
                    raise TriangulationError("facet %d slot %d: corner map %r is not a bijection" % (f, i, pi))
                if t == f and pi[i] == i:
                    raise TriangulationError("facet %d slot %d glued to itself" % (f, i))
                new_row.append((t, pi))
            glu.append(tuple(new_row))
        self.gluings: Tuple[Tuple[Gluing, ...], ...] = tuple(glu)
        for f in range(m):
            for i in range(L):
                t, pi = self.gluings[f][i]
                back_t, back_pi = self.gluings[t][pi[i]]
                if back_t != f or back_pi != invert(pi):
                    raise TriangulationError(
                        "gluing involution broken between facet %d slot %d and facet %d slot %d"
                        % (f, i, t, pi[i])
                    )
        if vertex_ids is not None:
            vertex_ids = tuple(tuple(v) for v in vertex_ids)
            if len(vertex_ids) != m or any(len(v) != L for v in vertex_ids):
                raise TriangulationError("vertex id table shape does not match facets")
        self.vertex_ids = vertex_ids
        self.extras = dict(extras) if extras else {}

    # -- construction ---------------------------------------------------

    @classmethod
    def from_vertex_facets(
        cls,
        dimension: int,
        facets: Sequence[Sequence[int]],
        extras: Optional[dict] = None,
    ) -> "Triangulation":
        """Build a triangulation from per-facet vertex tuples.

        Gluings are inferred by matching codimension-1 vertex sets; every
        such set must occur in exactly two facet slots.
        """
        L = dimension + 1
        vid: List[Tuple[int, ...]] = []
        for f, vs in enumerate(facets):
            vs = tuple(vs)
            if len(vs) != L:
                raise TriangulationError("facet %d has %d vertices, expected %d" % (f, len(vs), L))
            if len(set(vs)) != L:
                raise TriangulationError("facet %d repeats a vertex id" % f)
            vid.append(vs)
        ridge_slots: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
        for f, vs in enumerate(vid):
            for i in range(L):
                key = tuple(sorted(vs[:i] + vs[i + 1 :]))
                ridge_slots.setdefault(key, []).append((f, i))
        gluings: List[List[Optional[Gluing]]] = [[None] * L for _ in vid]
        for key, slots in sorted(ridge_slots.items()):
            if len(slots) != 2:
                raise TriangulationError(
                    "codimension-1 face %s lies in %d facet slots, expected 2" % (key, len(slots))
                )
            (f, i), (t, j) = slots
            pos_t = {v: c for c, v in enumerate(vid[t])}
            pos_f = {v: c for c, v in enumerate(vid[f])}
            pi = [0] * L
            for c, v in enumerate(vid[f]):
                pi[c] = j if c == i else pos_t[v]
            sigma = [0] * L
            for c, v in enumerate(vid[t]):
                sigma[c] = i if c == j else pos_f[v]
            gluings[f][i] = (t, tuple(pi))
            gluings[t][j] = (f, tuple(sigma))
        return cls(dimension, gluings, vertex_ids=vid, extras=extras)

    # -- basic data -----------------------------------------------------

    @property
    def facet_count(self) -> int:
        return len(self.gluings)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Triangulation)
            and self.dimension == other.dimension
            and self.gluings == other.gluings
            and self.vertex_ids == other.vertex_ids
        )

    def __repr__(self) -> str:
        return "Triangulation(dim=%d, facets=%d)" % (self.dimension, self.facet_count)

    @cached_property
    def face_poset(self) -> FacePoset:
        return FacePoset(self)

    @cached_property
    def _gluing_signs(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sign(pi) for (_, pi) in row) for row in self.gluings)

    # -- invariants -----------------------------------------------------

    def _facet_components(self) -> UnionFind:
        uf = UnionFind(self.facet_count)
        for f, row in enumerate(self.gluings):
            for t, _ in row:
                uf.union(f, t)
        return uf

    def _orientation(self) -> Optional[Tuple[int, ...]]:
        """Cross a gluing with corner map pi: signs satisfy eps_t = -sign(pi) * eps_f."""
        m = self.facet_count
        signs = self._gluing_signs
        eps = [0] * m
        for start in range(m):
            if eps[start]:
                continue
            eps[start] = 1
            stack = [start]
            while stack:
                f = stack.pop()
                for i, (t, _) in enumerate(self.gluings[f]):
                    want = -eps[f] * signs[f][i]
                    if eps[t] == 0:
                        eps[t] = want
                        stack.append(t)
                    elif eps[t] != want:
                        return None
        return tuple(eps)

    def boundary_ranks(self) -> Tuple[int, ...]:
        """GF(2) ranks of the face boundary maps, index d for C_d -> C_{d-1}."""
        fp = self.face_poset
        n = self.dimension
        ranks = [0] * (n + 2)
        for d in range(1, n + 1):
            start = fp.dim_start[d - 1]
            cols = []
            for cid in fp.class_ids_of_dim(d):
                col = 0
                for child in fp.children(cid):
                    col ^= 1 << (child - start)
                cols.append(col)
            ranks[d] = gf2.rank(cols)
        return tuple(ranks)

    def summary(self, with_betti: bool = True) -> TriSummary:
        """Face census plus connectivity, orientability, parity and homology."""
        fp = self.face_poset
        n = self.dimension
        counts = fp.counts()
        euler = sum(c if d % 2 == 0 else -c for d, c in enumerate(counts))
        connected = self._facet_components().n_sets == 1
        pseudo = all(fp.cls_count[cid] == 2 for cid in fp.class_ids_of_dim(n - 1))
        even = True
        if n >= 2:
            even = all(fp.cls_count[cid] % 2 == 0 for cid in fp.class_ids_of_dim(n - 2))
        orientation = self._orientation()
        betti = None
        if with_betti:
            ranks = self.boundary_ranks()
            betti = tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(n + 1))
        return TriSummary(
            dimension=n,
            facet_count=self.facet_count,
            face_counts=counts,
            euler=euler,
            connected=connected,
            pseudo_manifold=pseudo,
            orientable=orientation is not None,
            orientation=orientation,
            even=even,
            betti=betti,
        )

    def dual_graph(self) -> DualGraph:
        """Facet adjacency with parallel edges and loops, plus a 2-coloring if one exists."""
        m = self.facet_count
        edges = []
        has_loop = False
        for f, row in enumerate(self.gluings):
            for i, (t, pi) in enumerate(row):
                if (f, i) > (t, pi[i]):
                    continue
                if f == t:
                    has_loop = True
                edges.append((f, t) if f <= t else (t, f))
        edges.sort()
        uf = UnionFind(m)
        for u, v in edges:
            uf.union(u, v)
        connected = uf.n_sets == 1
        bipartition: Optional[Tuple[int, ...]] = None
        if not has_loop:
            color = [-1] * m
            ok = True
            adj: List[List[int]] = [[] for _ in range(m)]
            for u, v in edges:
                adj[u].append(v)
                adj[v].append(u)
            for start in range(m):
                if color[start] != -1:
                    continue
                color[start] = 0
                queue = deque([start])
                while queue and ok:
                    u = queue.popleft()
                    for v in adj[u]:
                        if color[v] == -1:
                            color[v] = 1 - color[u]
                            queue.append(v)
                        elif color[v] == color[u]:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                bipartition = tuple(color)
        return DualGraph(n_nodes=m, edges=tuple(edges), connected=connected, bipartition=bipartition)

    # -- links ----------------------------------------------------------

    def link(self, face) -> Tuple["Triangulation", List[Tuple[int, Tuple[int, ...]]]]:
        """Link of a face class as a triangulation of dimension n - d - 1.

        Args:
            face: a face key string, a (facet, corners) pair, or a class id.

        Returns:
            The link triangulation together with the list of star
            incarnations (facet, corner tuple), aligned with its facets.
        """
        fp = self.face_poset
        if isinstance(face, str):
            cid = fp.class_of_key(face)
        elif isinstance(face, int):
            cid = face
        else:
            f, corners = face
            cid = fp.class_of(f, corners)
        d = fp.cls_dim[cid]
        if d >= self.dimension:
            raise TriangulationError("link of a top-dimensional face is empty")
        L, M = fp.L, fp.M
        encs = fp.incarnations(cid)
        index = {enc: i for i, enc in enumerate(encs)}
        star = []
        link_glu = []
        corners_of = fp._corners_of
        for enc in encs:
            f, mask = divmod(enc, M)
            star.append((f, corners_of[mask]))
        for enc in encs:
            f, mask = divmod(enc, M)
            rest = [c for c in range(L) if not mask >> c & 1]
            pos = {c: p for p, c in enumerate(rest)}
            row = []
            for j in rest:
                t, pi = self.gluings[f][j]
                img = 0
                rem = mask
                while rem:
                    low = rem & -rem
                    img |= 1 << pi[low.bit_length() - 1]
                    rem ^= low
                target = index[t * M + img]
                rest_t = [c for c in range(L) if not img >> c & 1]
                pos_t = {c: p for p, c in enumerate(rest_t)}
                row.append((target, tuple(pos_t[pi[c]] for c in rest)))
            link_glu.append(row)
        return Triangulation(self.dimension - d - 1, link_glu), star

    # -- covers ---------------------------------------------------------

    def orientation_double_cover(self) -> "Triangulation":
        """Two sheets per facet, glued so the result carries an orientation.

        Facet f appears as f (positive sheet) and f + m (negative sheet);
        the deck involution swaps them and is recorded in extras.
        """
        m = self.facet_count
        signs = self._gluing_signs
        glu = []
        for s in (1, -1):
            for f in range(m):
                row = []
                for i, (t, pi) in enumerate(self.gluings[f]):
                    s_t = -s * signs[f][i]
                    row.append((t if s_t == 1 else t + m, pi))
                glu.append(row)
        deck = tuple(list(range(m, 2 * m)) + list(range(m)))
        return Triangulation(self.dimension, glu, extras={"deck_involution": deck})

    # -- isomorphism ----------------------------------------------------

    def _component_rep(self, f0: int, rho0: Tuple[int, ...]) -> Tuple:
        L = self.dimension + 1
        index = {f0: 0}
        order = [f0]
        relab = {f0: rho0}
        table = []
        qi = 0
        while qi < len(order):
            f = order[qi]
            rho = relab[f]
            rho_inv = invert(rho)
            row = []
            for s in range(L):
                i = rho_inv[s]
                t, pi = self.gluings[f][i]
                rho_t = compose(rho, invert(pi))
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                    relab[t] = rho_t
                new_pi = compose(relab[t], compose(pi, rho_inv))
                row.append((index[t],) + new_pi)
            table.append(tuple(row))
            qi += 1
        return tuple(table)

    def canonical_form(self, max_work: int = 5_000_000) -> Tuple:
        """Labelling-independent normal form, minimised over all start flags.

        Intended for small inputs (zoo members, links); the work bound
        guards against accidental use on big complexes.
        """
        m = self.facet_count
        L = self.dimension + 1
        n_perms = 1
        for q in range(2, L + 1):
            n_perms *= q
        comps: Dict[int, List[int]] = {}
        uf = self._facet_components()
        for f in range(m):
            comps.setdefault(uf.find(f), []).append(f)
        work = sum(len(c) * n_perms * len(c) * L for c in comps.values())
        if work > max_work:
            raise TriangulationError(
                "canonical form would need about %d steps, above the %d limit" % (work, max_work)
            )
        reps = []
        for facets in comps.values():
            best = None
            for f0 in facets:
                for rho0 in permutations(range(L)):
                    rep = self._component_rep(f0, rho0)
                    if best is None or rep < best:
                        best = rep
            reps.append(best)
        reps.sort()
        return tuple(reps)

    def isomorphic_to(self, other: "Triangulation") -> bool:
        if self.dimension != other.dimension or self.facet_count != other.facet_count:
            return False
        return self.canonical_form() == other.canonical_form()

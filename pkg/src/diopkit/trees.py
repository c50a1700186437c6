"""Directed trees with multi-output vertices, and their planar variants.

A tree here has m root legs labeled ('r', 1..m) at the bottom, n leaf
legs labeled ('l', 1..n) at the top, and internal vertices whose
output/input arities avoid (1,0) and (1,1).  Every edge is directed; an
internal edge ('e', id) leaves its upper vertex (listed among that
vertex's outputs) and enters its lower vertex (listed among the inputs).

Because all legs carry distinct labels these trees are rigid, so a
canonical form is obtained from a deterministic traversal: start at the
vertex holding root 1, explore the remaining flags of each vertex in
order of the smallest leg reachable behind them, number the internal
edges in discovery order, and list the vertices in visit order.  That
visit order also serves as the orientation order of the determinant line
used by the cobar differential.
"""

from __future__ import annotations

from itertools import combinations

from .cyclic import IN, OUT, CyclicClass, cuts_sets, flag_key, valid_arity

ROOT = "r"
LEAF = "l"
EDGE = "e"


def is_leg(flag):
    return flag[0] in (ROOT, LEAF)


def _leg_sort_key(flag):
    kind, k = flag
    return (0 if kind == ROOT else 1, k)


def canonical_order(verts):
    """Canonical vertex order and edge renaming for a raw vertex list.

    verts is a list of (outs, ins) tuples of flags; edge ids may be any
    hashable values.  Returns (order, edge_map) where order is the list of
    vertex indices in canonical (traversal) order and edge_map maps old
    edge ids to 0, 1, 2, ... in discovery order.
    """
    out_owner = {}
    in_owner = {}
    for idx, (outs, ins) in enumerate(verts):
        for f in outs:
            out_owner[f] = idx
        for f in ins:
            in_owner[f] = idx

    def neighbor(idx, flag):
        if flag[0] != EDGE:
            return None
        a, b = out_owner[flag], in_owner[flag]
        return b if a == idx else a

    min_leg = {}

    def reach(idx, flag):
        # smallest leg key in the component behind `flag`, seen from vertex idx
        if (idx, flag) in min_leg:
            return min_leg[idx, flag]
        if flag[0] != EDGE:
            res = _leg_sort_key(flag)
        else:
            other = neighbor(idx, flag)
            res = min(reach(other, f)
                      for f in verts[other][0] + verts[other][1] if f != flag)
        min_leg[idx, flag] = res
        return res

    start = out_owner[(ROOT, 1)]
    order = []
    edge_map = {}
    visited = set()

    def visit(idx, entry):
        visited.add(idx)
        order.append(idx)
        outs, ins = verts[idx]
        rest = [f for f in outs + ins if f != entry]
        rest.sort(key=lambda f: reach(idx, f))
        for f in rest:
            if f[0] == EDGE:
                if f not in edge_map:
                    edge_map[f] = len(edge_map)
                other = neighbor(idx, f)
                if other not in visited:
                    visit(other, f)

    visit(start, None)
    assert len(order) == len(verts), "tree is not connected"
    return order, edge_map


def _rename_flag(flag, edge_map):
    return (EDGE, edge_map[flag]) if flag[0] == EDGE else flag


class Tree:
    """An abstract (m, n)-tree in canonical form."""

    __slots__ = ("verts", "m", "n")

    def __init__(self, verts):
        order, edge_map = canonical_order(list(verts))
        canon = []
        for idx in order:
            outs, ins = verts[idx]
            outs = tuple(sorted((_rename_flag(f, edge_map) for f in outs), key=flag_key_tree))
            ins = tuple(sorted((_rename_flag(f, edge_map) for f in ins), key=flag_key_tree))
            if not valid_arity(len(outs), len(ins)):
                raise ValueError("vertex arity (%d, %d) not allowed" % (len(outs), len(ins)))
            canon.append((outs, ins))
        object.__setattr__(self, "verts", tuple(canon))
        m = sum(1 for outs, _ in canon for f in outs if f[0] == ROOT)
        n = sum(1 for _, ins in canon for f in ins if f[0] == LEAF)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    def __eq__(self, other):
        return isinstance(other, Tree) and self.verts == other.verts

    def __hash__(self):
        return hash(self.verts)

    def __repr__(self):
        return "Tree(%r)" % (self.verts,)

    @property
    def num_vertices(self):
        return len(self.verts)

    def vertex_arities(self):
        return [(len(o), len(i)) for o, i in self.verts]

    def weight_identity_holds(self):
        total = sum(len(i) + 2 * len(o) - 3 for o, i in self.verts)
        return total == self.n + 2 * self.m - 3

    def internal_edges(self):
        """List of (edge_id, upper_vertex, lower_vertex)."""
        up, low = {}, {}
        for idx, (outs, ins) in enumerate(self.verts):
            for f in outs:
                if f[0] == EDGE:
                    up[f[1]] = idx
            for f in ins:
                if f[0] == EDGE:
                    low[f[1]] = idx
        return [(e, up[e], low[e]) for e in sorted(up)]

    def is_maximally_expanded(self):
        return all(a in ((1, 2), (2, 0)) for a in self.vertex_arities())


def flag_key_tree(flag):
    kind, k = flag
    rank = {ROOT: 0, LEAF: 1, EDGE: 2}[kind]
    return (rank, k)


def corolla(m, n):
    if not valid_arity(m, n):
        raise ValueError("arity (%d, %d) is not allowed" % (m, n))
    outs = tuple((ROOT, k) for k in range(1, m + 1))
    ins = tuple((LEAF, k) for k in range(1, n + 1))
    return Tree([(outs, ins)])


def vertex_splits(outs, ins):
    """All partitions of a vertex's flags into an allowed upper/lower pair.

    Yields (up_outs, up_ins, low_outs, low_ins) without the connecting
    edge: the upper vertex additionally sends one edge down into the
    lower one.
    """
    m, n = len(outs), len(ins)
    for ko in range(0, m + 1):
        for up_outs in combinations(outs, ko):
            m2, m1 = ko + 1, m - ko
            for ki in range(0, n + 1):
                n2 = ki
                n1 = n - ki + 1
                if not (valid_arity(m1, n1) and valid_arity(m2, n2)):
                    continue
                for up_ins in combinations(ins, ki):
                    low_outs = tuple(f for f in outs if f not in up_outs)
                    low_ins = tuple(f for f in ins if f not in up_ins)
                    yield up_outs, up_ins, low_outs, low_ins


def split_vertex(tree, vidx, up_outs, up_ins):
    """Split one vertex into an upper part (given flags) and the rest.

    The upper vertex keeps up_outs/up_ins and gains the new edge as an
    output; the lower vertex keeps the remaining flags and gains the edge
    as an input.  Raises ValueError if either part has a forbidden arity.
    """
    outs, ins = tree.verts[vidx]
    up_outs, up_ins = tuple(up_outs), tuple(up_ins)
    assert all(f in outs for f in up_outs) and all(f in ins for f in up_ins)
    low_outs = tuple(f for f in outs if f not in up_outs)
    low_ins = tuple(f for f in ins if f not in up_ins)
    if not (valid_arity(len(up_outs) + 1, len(up_ins))
            and valid_arity(len(low_outs), len(low_ins) + 1)):
        raise ValueError("split produces a forbidden vertex arity")
    edge = (EDGE, ("new", vidx))
    verts = []
    for idx, (o, i) in enumerate(tree.verts):
        if idx == vidx:
            verts.append((up_outs + (edge,), up_ins))
            verts.append((low_outs, low_ins + (edge,)))
        else:
            verts.append((o, i))
    return Tree(verts)


def collapse_edge(tree, edge_id):
    """Collapse one internal edge, merging its endpoints."""
    up = low = None
    for e, u, w in tree.internal_edges():
        if e == edge_id:
            up, low = u, w
    assert up is not None, "no such edge"
    eflag = (EDGE, edge_id)
    verts = []
    merged_outs = tuple(f for f in tree.verts[up][0] + tree.verts[low][0] if f != eflag)
    merged_ins = tuple(f for f in tree.verts[up][1] + tree.verts[low][1] if f != eflag)
    for idx, (o, i) in enumerate(tree.verts):
        if idx == up:
            verts.append((merged_outs, merged_ins))
        elif idx == low:
            continue
        else:
            verts.append((o, i))
    return Tree(verts)


def enumerate_tree0(m, n, vertex_filter=None):
    """Representatives of all (m, n)-trees, optionally restricted to given
    internal vertex arities.

    Generated by repeatedly splitting vertices starting from the corolla;
    every tree arises this way because collapsing any internal edge is a
    legal inverse step.
    """
    if not valid_arity(m, n):
        raise ValueError("arity (%d, %d) is not allowed" % (m, n))
    seed = corolla(m, n)
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for t in frontier:
            for vidx, (outs, ins) in enumerate(t.verts):
                for up_outs, up_ins, _, _ in vertex_splits(outs, ins):
                    t2 = split_vertex(t, vidx, up_outs, up_ins)
                    if t2 not in seen:
                        seen.add(t2)
                        nxt.append(t2)
        frontier = nxt
    trees = sorted(seen, key=lambda t: (t.num_vertices, t.verts))
    if vertex_filter is not None:
        allowed = set(vertex_filter)
        trees = [t for t in trees if all(a in allowed for a in t.vertex_arities())]
    return trees


class PlanarTree:
    """A tree with a cyclic flag order at every vertex, in canonical form.

    The per-vertex cyclic orders are stored as set-labeled CyclicClass
    values; vertices follow the canonical order of the underlying abstract
    tree.
    """

    __slots__ = ("verts", "m", "n")

    def __init__(self, vertex_words):
        raw = []
        for w in vertex_words:
            outs = tuple(l for k, l in w.flags if k == OUT)
            ins = tuple(l for k, l in w.flags if k == IN)
            raw.append((outs, ins))
        order, edge_map = canonical_order(raw)
        canon = []
        for idx in order:
            w = vertex_words[idx]
            flags = tuple((k, _rename_flag(l, edge_map)) for k, l in w.flags)
            canon.append(CyclicClass(flags))
        object.__setattr__(self, "verts", tuple(canon))
        m = sum(1 for w in canon for k, l in w.flags if k == OUT and l[0] == ROOT)
        n = sum(1 for w in canon for k, l in w.flags if k == IN and l[0] == LEAF)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("PlanarTree is immutable")

    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self.verts == other.verts

    def __hash__(self):
        return hash(self.verts)

    def __repr__(self):
        return "PlanarTree(%r)" % [w.encode() for w in self.verts]

    @property
    def num_vertices(self):
        return len(self.verts)

    def dimension(self):
        """Cell dimension in the complex of planar trees on a fixed boundary."""
        return (self.n + 2 * self.m - 3) - self.num_vertices

    def boundary(self):
        """Legs in boundary order, starting at root 1, as (kind, label) pairs
        with kind from the cyclic alphabet (outputs for roots, inputs for leaves)."""
        at = {}
        for vi, w in enumerate(self.verts):
            for f in w.flags:
                at[f] = vi
        start = (OUT, (ROOT, 1))
        legs = []
        v, f = at[start], start
        while True:
            word = self.verts[v].flags
            g = word[(word.index(f) + 1) % len(word)]
            if g[1][0] == EDGE:
                # continue the walk on the far side of the edge
                other = (IN if g[0] == OUT else OUT, g[1])
                v, f = at[other], other
            else:
                if g == start:
                    break
                legs.append(g)
                f = g
        return [start] + legs

    def abstract(self):
        raw = []
        for w in self.verts:
            outs = tuple(l for k, l in w.flags if k == OUT)
            ins = tuple(l for k, l in w.flags if k == IN)
            raw.append((outs, ins))
        return Tree(raw)


def planar_corolla(cls):
    """The one-vertex planar tree whose boundary is the given numeric class."""
    flags = []
    for k, l in cls.flags:
        flags.append((k, (ROOT, l) if k == OUT else (LEAF, l)))
    return PlanarTree([CyclicClass(flags)])


def planar_expansions(p):
    """All planar trees obtained by one legal vertex split (edge expansion)."""
    out = []
    for vi, w in enumerate(p.verts):
        fresh = (EDGE, ("x", vi))
        for lower, upper in cuts_sets(w, fresh):
            words = list(p.verts)
            words[vi : vi + 1] = [lower, upper]
            out.append(PlanarTree(words))
    return out

"""The cobar dual complex of a finite dioperad model.

A basis element is a tree whose vertices carry dual basis elements of the
input dioperad, together with the orientation of the determinant line
given by the canonical vertex order.  The differential splits one vertex
into two along a new edge, dual to composition; its matrix entries carry
three signs: the local dual/shift sign (-1)^(degree of the upper factor),
the Koszul prefix for reaching the vertex inside the ordered tensor
product of per-vertex factors (each factor is shifted, so has degree
1 - (degree of the decoration)), and the reordering sign that moves the
freshly inserted upper-then-lower pair into the canonical vertex order of
the new tree.  The convention is certified by the squared-differential
check and by the homology computations downstream.

Everything is graded twice: by vertex degree (#vertices - (n + 2m - 3),
raised by the splitting differential) and by internal degree (raised by
the dual of the input differential, nonzero only in the double cobar).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as _iproduct

from . import cyclic, symm, trees
from .cyclic import IN, OUT, CyclicClass
from .dioperads import (ClassDioperad, FiniteDioperad, omega_compose_sign,
                        omega_degree, vadd)
from .exact import rank_of_rows
from .trees import EDGE, LEAF, ROOT, Tree


class InternalConsistencyError(Exception):
    """A broken structural invariant (nonzero squared differential,
    class-crossing splitting term, inconsistent sign propagation)."""


# ---------------------------------------------------------------------------
# decorated trees over a finite dioperad


def _sorted_flags(outs, ins):
    return (tuple(sorted(outs, key=trees.flag_key_tree)),
            tuple(sorted(ins, key=trees.flag_key_tree)))


def class_to_key(word):
    """Set-labeled vertex class -> numeric basis key of the class model."""
    outs = sorted((l for k, l in word.flags if k == OUT), key=trees.flag_key_tree)
    ins = sorted((l for k, l in word.flags if k == IN), key=trees.flag_key_tree)
    omap = {f: t + 1 for t, f in enumerate(outs)}
    imap = {f: t + 1 for t, f in enumerate(ins)}
    return word.relabel(out_map=omap, in_map=imap)


def key_to_class(key, outs, ins):
    """Numeric class key -> set-labeled class on the vertex's sorted flags."""
    outs, ins = _sorted_flags(outs, ins)
    return key.relabel(out_map={t + 1: f for t, f in enumerate(outs)},
                       in_map={t + 1: f for t, f in enumerate(ins)})


class DecoratedTrees:
    """Decorated-tree workspace over one finite dioperad model."""

    def __init__(self, provider):
        self.P = provider

    def psi_degree(self, arity, key):
        return 1 - self.P.degree(arity, key)

    def element_degree(self, x):
        tree, decs = x
        total = omega_degree(tree.m, tree.n)
        for (o, i), k in zip(tree.verts, decs):
            total += 1 - self.P.degree((len(o), len(i)), k)
        return total

    def rebuild(self, raw_verts, raw_keys, raw_orders):
        """Canonicalize a raw decorated tree; returns (sign, (tree, keys)).

        raw_orders[t] gives the (out_flags, in_flags) order that raw_keys[t]
        currently refers to; decorations are converted to the canonical
        sorted order of the rebuilt tree through the provider action.
        """
        tree = Tree(raw_verts)
        order, edge_map = trees.canonical_order(list(raw_verts))
        sign = 1
        new_keys = [None] * len(order)
        for new_pos, old_idx in enumerate(order):
            arity = (len(raw_verts[old_idx][0]), len(raw_verts[old_idx][1]))
            ref_outs = [trees._rename_flag(f, edge_map) for f in raw_orders[old_idx][0]]
            ref_ins = [trees._rename_flag(f, edge_map) for f in raw_orders[old_idx][1]]
            tgt_outs, tgt_ins = tree.verts[new_pos]
            key = raw_keys[old_idx]
            if tuple(ref_outs) != tgt_outs or tuple(ref_ins) != tgt_ins:
                pi = _conversion_perm(ref_outs, tgt_outs)
                sigma = symm.inverse(_conversion_perm(ref_ins, tgt_ins))
                s, key = self.P.act(arity, pi, sigma, key)
                if s == 0:
                    return 0, None
                sign *= s
            new_keys[new_pos] = key
        psi = []
        for old_idx in range(len(raw_verts)):
            arity = (len(raw_verts[old_idx][0]), len(raw_verts[old_idx][1]))
            psi.append(1 - self.P.degree(arity, raw_keys[old_idx]))
        sign *= symm.reorder_sign(list(range(len(order))), order, lambda t: psi[t])
        return sign, (tree, tuple(new_keys))

    # -- vertex splitting -------------------------------------------------

    def split_terms(self, x, vertex):
        """All differential terms produced by splitting one vertex.

        Yields (coefficient, (tree, keys)) including every sign except the
        Koszul prefix for the position of the vertex, which the caller adds.
        """
        tree, decs = x
        outs, ins = tree.verts[vertex]
        arity = (len(outs), len(ins))
        key = decs[vertex]
        if isinstance(self.P, ClassDioperad):
            splits = self._class_splits(outs, ins, key)
        else:
            splits = self._generic_splits(outs, ins, key)
        out = []
        for up_flags, low_flags, key_up, key_low, up_order, low_order, coeff in splits:
            local = coeff * (-1) ** self.P.degree(
                (len(up_flags[0]), len(up_flags[1])), key_up)
            raw_verts, raw_keys, raw_orders = [], [], []
            psi_tags = []
            for idx, (o, i) in enumerate(tree.verts):
                if idx == vertex:
                    raw_verts.append(up_flags)
                    raw_keys.append(key_up)
                    raw_orders.append(up_order)
                    raw_verts.append(low_flags)
                    raw_keys.append(key_low)
                    raw_orders.append(low_order)
                else:
                    raw_verts.append((o, i))
                    raw_keys.append(decs[idx])
                    raw_orders.append((list(o), list(i)))
            s, y = self.rebuild(raw_verts, raw_keys, raw_orders)
            if s:
                out.append((local * s, y))
        return out

    def _class_splits(self, outs, ins, key):
        """Splits of a class-model decoration, through cyclic-word cuts."""
        word = key_to_class(key, outs, ins)
        edge = (EDGE, ("split",))
        res = []
        for lower, upper in cyclic.cuts_sets(word, edge):
            up_outs = tuple(l for k, l in upper.flags if k == OUT)
            up_ins = tuple(l for k, l in upper.flags if k == IN)
            low_outs = tuple(l for k, l in lower.flags if k == OUT)
            low_ins = tuple(l for k, l in lower.flags if k == IN)
            key_up = class_to_key(upper)
            key_low = class_to_key(lower)
            up_order = (sorted(up_outs, key=trees.flag_key_tree),
                        sorted(up_ins, key=trees.flag_key_tree))
            low_order = (sorted(low_outs, key=trees.flag_key_tree),
                         sorted(low_ins, key=trees.flag_key_tree))
            res.append(((tuple(up_order[0]), tuple(up_order[1])),
                        (tuple(low_order[0]), tuple(low_order[1])),
                        key_up, key_low, up_order, low_order, Fraction(1)))
        return res

    def _generic_splits(self, outs, ins, key):
        """Splits of a generic decoration, by transposing composition."""
        outs_sorted, ins_sorted = _sorted_flags(outs, ins)
        m, n = len(outs_sorted), len(ins_sorted)
        res = []
        for u_out in _subsets(range(1, m + 1)):
            for u_in in _subsets(range(1, n + 1)):
                m2, n2 = len(u_out) + 1, len(u_in)
                m1, n1 = m - len(u_out), n - len(u_in) + 1
                if not (cyclic.valid_arity(m1, n1) and cyclic.valid_arity(m2, n2)):
                    continue
                table = _split_table(self.P, m, n, u_out, u_in)
                if key not in table:
                    continue
                edge = (EDGE, ("split",))
                l_out = [p for p in range(1, m + 1) if p not in u_out]
                l_in = [p for p in range(1, n + 1) if p not in u_in]
                up_out_flags = [outs_sorted[p - 1] for p in u_out]
                up_in_flags = [ins_sorted[p - 1] for p in u_in]
                low_out_flags = [outs_sorted[p - 1] for p in l_out]
                low_in_flags = [ins_sorted[p - 1] for p in l_in]
                # assumed orders follow the labeling conventions of the table:
                # upper outputs are (edge, kept flags), lower inputs are
                # (kept flags, edge)
                up_order = ([edge] + up_out_flags, list(up_in_flags))
                low_order = (list(low_out_flags), list(low_in_flags) + [edge])
                for key_low, key_up, coeff in table[key]:
                    res.append(((tuple(up_order[0]), tuple(up_order[1])),
                                (tuple(low_order[0]), tuple(low_order[1])),
                                key_up, key_low, up_order, low_order, coeff))
        return res


def _subsets(iterable):
    items = list(iterable)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _conversion_perm(ref, target):
    """pi with pi(t) = position in target of the t-th element of ref."""
    pos = {f: k + 1 for k, f in enumerate(target)}
    return tuple(pos[f] for f in ref)


def _split_table(P, m, n, u_out, u_in):
    """key -> list of (key_low, key_up, coeff): the coefficient of key in the
    aligned composition of the two factors, for one flag partition."""
    tables = getattr(P, "_split_tables", None)
    if tables is None:
        tables = {}
        P._split_tables = tables
    tid = (m, n, u_out, u_in)
    if tid in tables:
        return tables[tid]
    m2, n2 = len(u_out) + 1, len(u_in)
    m1, n1 = m - len(u_out), n - len(u_in) + 1
    l_out = [p for p in range(1, m + 1) if p not in u_out]
    l_in = [p for p in range(1, n + 1) if p not in u_in]
    # alignment of the composite's labels with the vertex's own labels
    pi = [0] * m
    for t in range(1, m1 + 1):
        pi[t - 1] = l_out[t - 1]
    for s in range(2, m2 + 1):
        pi[s + m1 - 2] = u_out[s - 2]
    sigma_inv = [0] * n
    for t in range(1, n1):
        sigma_inv[t - 1] = l_in[t - 1]
    for s in range(1, n2 + 1):
        sigma_inv[s + n1 - 2] = u_in[s - 1]
    pi = tuple(pi)
    sigma = symm.inverse(tuple(sigma_inv))
    table = {}
    for key_low in P.basis(m1, n1):
        for key_up in P.basis(m2, n2):
            for c, k in P.compose((m1, n1), key_low, n1, 1, (m2, n2), key_up):
                s, k2 = P.act((m, n), pi, sigma, k)
                if s:
                    table.setdefault(k2, []).append((key_low, key_up, c * s))
    tables[tid] = table
    return table


# ---------------------------------------------------------------------------
# the cobar complex of one biarity


class CobarComplex:
    """Basis, gradings and differential of the cobar dual at one biarity."""

    def __init__(self, provider, m, n, basis=None):
        self.P = provider
        self.m, self.n = m, n
        self.work = DecoratedTrees(provider)
        if basis is None:
            basis = self._full_basis()
        self.basis = list(basis)
        self.index = {x: p for p, x in enumerate(self.basis)}
        self._diff_cache = {}

    def _full_basis(self):
        out = []
        for t in trees.enumerate_tree0(self.m, self.n):
            spaces = [self.P.basis(len(o), len(i)) for o, i in t.verts]
            for decs in _iproduct(*spaces):
                out.append((t, tuple(decs)))
        return out

    # -- gradings ----------------------------------------------------------

    def vertex_degree(self, x):
        return x[0].num_vertices - (self.n + 2 * self.m - 3)

    def total_degree(self, x):
        return self.work.element_degree(x)

    # -- differential -------------------------------------------------------

    def differential(self, x):
        """Full differential (splitting part plus dualized input part)."""
        if x in self._diff_cache:
            return self._diff_cache[x]
        tree, decs = x
        acc = {}
        prefix = 0
        for vertex in range(tree.num_vertices):
            arity = (len(tree.verts[vertex][0]), len(tree.verts[vertex][1]))
            pref_sign = (-1) ** prefix
            for coeff, y in self.work.split_terms(x, vertex):
                vadd(acc, y, Fraction(coeff) * pref_sign)
            for coeff, y in self._internal_terms(x, vertex):
                vadd(acc, y, Fraction(coeff) * pref_sign)
            prefix += 1 - self.P.degree(arity, decs[vertex])
        terms = sorted(acc.items(), key=lambda kv: self._sort_key(kv[0]))
        self._diff_cache[x] = terms
        return terms

    def _sort_key(self, x):
        tree, decs = x
        return (tree.num_vertices, tree.verts, tuple(repr(k) for k in decs))

    def _internal_terms(self, x, vertex):
        rev = _reverse_differential(self.P)
        if rev is None:
            return []
        tree, decs = x
        outs, ins = tree.verts[vertex]
        arity = (len(outs), len(ins))
        b = decs[vertex]
        out = []
        for coeff, c in rev(arity, b):
            decs2 = list(decs)
            decs2[vertex] = c
            sgn = (-1) ** self.P.degree(arity, b)
            out.append((coeff * sgn, (tree, tuple(decs2))))
        return out

    # -- matrices and homology ----------------------------------------------

    def graded_basis(self, grading="vertex"):
        key = self.vertex_degree if grading == "vertex" else self.total_degree
        table = {}
        for x in self.basis:
            table.setdefault(key(x), []).append(x)
        return table

    def matrices(self, grading="vertex"):
        """Differential matrices per degree: rows indexed by degree g+1 basis,
        columns by degree g basis."""
        key = self.vertex_degree if grading == "vertex" else self.total_degree
        table = self.graded_basis(grading)
        pos = {}
        for g, xs in table.items():
            for p, x in enumerate(xs):
                pos[x] = (g, p)
        mats = {}
        for g, xs in sorted(table.items()):
            rows = {}
            for p, x in enumerate(xs):
                for coeff, y in self.differential(x):
                    if y not in pos:
                        raise InternalConsistencyError(
                            "differential leaves the complex")
                    gy, py = pos[y]
                    if gy != g + 1:
                        raise InternalConsistencyError(
                            "differential is not homogeneous of degree one")
                    rows.setdefault(py, {})[p] = coeff
            mats[g] = rows
        return table, mats

    def check_d_squared(self, grading="vertex"):
        for x in self.basis:
            acc = {}
            for c1, y in self.differential(x):
                for c2, z in self.differential(y):
                    vadd(acc, z, c1 * c2)
            if acc:
                raise InternalConsistencyError("squared differential is nonzero")
        return True

    def betti(self, grading="vertex"):
        """Exact homology dimensions per degree."""
        table, mats = self.matrices(grading)
        ranks = {}
        for g, rows in mats.items():
            ranks[g] = rank_of_rows(list(rows.values()))
        betti = {}
        for g, xs in table.items():
            betti[g] = len(xs) - ranks.get(g, 0) - ranks.get(g - 1, 0)
        return betti

    def dims(self, grading="vertex"):
        return {g: len(xs) for g, xs in self.graded_basis(grading).items()}

    # -- class structure (class-model provider only) -------------------------

    def global_class(self, x):
        tree, decs = x
        words = [key_to_class(k, o, i) for (o, i), k in zip(tree.verts, decs)]
        planar = trees.PlanarTree(words)
        flags = []
        for k, l in planar.boundary():
            flags.append((OUT, l[1]) if l[0] == ROOT else (IN, l[1]))
        return CyclicClass(flags)

    def class_decompose(self):
        """Partition of the basis by boundary class; verifies the
        differential never crosses classes."""
        blocks = {}
        for x in self.basis:
            blocks.setdefault(self.global_class(x), []).append(x)
        for cls, xs in blocks.items():
            allowed = set(xs)
            for x in xs:
                for _, y in self.differential(x):
                    if y not in allowed:
                        raise InternalConsistencyError(
                            "differential term crosses boundary classes")
        out = {}
        for cls, xs in sorted(blocks.items(), key=lambda kv: kv[0].encode()):
            sub = CobarComplex(self.P, self.m, self.n, basis=xs)
            sub._diff_cache = self._diff_cache
            out[cls] = sub
        return out


def _reverse_differential(P):
    """arity, key -> list of (coeff, source) with the dualization sign folded
    in by the caller; None when the input differential vanishes."""
    if not getattr(P, "has_differential", False):
        return None
    cache = getattr(P, "_reverse_diff_cache", None)
    if cache is None:
        cache = {}
        P._reverse_diff_cache = cache

    def rev(arity, key):
        if arity not in cache:
            table = {}
            for c in P.basis(*arity):
                for coeff, b in P.differential(arity, c):
                    table.setdefault(b, []).append((coeff, c))
            cache[arity] = table
        return cache[arity].get(key, [])

    return rev


def build_cobar(provider, m, n, basis=None):
    return CobarComplex(provider, m, n, basis=basis)


def class_basis(provider, cls):
    """Basis of one class subcomplex, from the planar cells of its word.

    Each planar tree with the class's boundary becomes a decorated tree;
    the boundary read-off is asserted to reproduce the class.
    """
    assert isinstance(provider, ClassDioperad)
    cells = planar_cells(cls)
    out = []
    cell_of = {}
    for p in cells:
        tree = p.abstract()
        decs = tuple(class_to_key(w) for w in p.verts)
        x = (tree, decs)
        out.append(x)
        cell_of[x] = p
    return out, cell_of


@lru_cache(maxsize=None)
def planar_cells(cls):
    """All planar trees whose boundary class is the given one (the cells of
    the corresponding subdivision complex), by repeated edge expansion."""
    seed = trees.planar_corolla(cls)
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for p in frontier:
            for q in trees.planar_expansions(p):
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen, key=lambda p: (p.num_vertices,
                                       tuple(w.encode() for w in p.verts)))


def class_subcomplex(provider, cls):
    """The subcomplex of the cobar dual supported on one boundary class."""
    basis, cell_of = class_basis(provider, cls)
    cx = CobarComplex(provider, cls.m, cls.n, basis=basis)
    for x in basis:
        got = cx.global_class(x)
        if got != cls:
            raise InternalConsistencyError("cell read-off leaves the class")
    cx.cell_of = cell_of
    return cx


# ---------------------------------------------------------------------------
# the cobar dual as a dioperad (input to the double cobar)


class CobarDioperad(FiniteDioperad):
    """The cobar dual of a finite model, as a finite model itself.

    Carries the composition (tree grafting twisted by the sign dioperad),
    the bimodule action, and the splitting differential.
    """

    has_differential = True

    def __init__(self, provider):
        self.P = provider
        self.work = DecoratedTrees(provider)
        self._basis_cache = {}
        self._cx_cache = {}

    def _cx(self, m, n):
        if (m, n) not in self._cx_cache:
            self._cx_cache[m, n] = CobarComplex(self.P, m, n)
        return self._cx_cache[m, n]

    def basis(self, m, n):
        return list(self._cx(m, n).basis)

    def degree(self, arity, key):
        return self.work.element_degree(key)

    def cp_degree(self, key):
        # degree of the untwisted part (no omega factor)
        tree, decs = key
        return self.work.element_degree(key) - omega_degree(tree.m, tree.n)

    def differential(self, arity, key):
        return self._cx(*arity).differential(key)

    def act(self, arity, pi, sigma, key):
        tree, decs = key
        sinv = symm.inverse(sigma)

        def rename(f):
            if f[0] == ROOT:
                return (ROOT, pi[f[1] - 1])
            if f[0] == LEAF:
                return (LEAF, sinv[f[1] - 1])
            return f

        raw_verts = [(tuple(rename(f) for f in o), tuple(rename(f) for f in i))
                     for o, i in tree.verts]
        raw_orders = [([rename(f) for f in o], [rename(f) for f in i])
                      for o, i in tree.verts]
        s, key2 = self.work.rebuild(raw_verts, list(decs), raw_orders)
        return (s * symm.sign(sigma), key2)

    def compose(self, a1, k1, i, j, a2, k2):
        (m1, n1), (m2, n2) = a1, a2
        t1, d1 = k1
        t2, d2 = k2

        def rename1(f):
            if f[0] == ROOT:
                return (ROOT, f[1] + j - 1)
            if f[0] == LEAF:
                if f[1] == i:
                    return (EDGE, ("graft",))
                return (LEAF, f[1] if f[1] < i else f[1] + n2 - 1)
            return (EDGE, (1, f[1]))

        def rename2(f):
            if f[0] == ROOT:
                if f[1] == j:
                    return (EDGE, ("graft",))
                return (ROOT, f[1] if f[1] < j else f[1] + m1 - 1)
            if f[0] == LEAF:
                return (LEAF, f[1] + i - 1)
            return (EDGE, (2, f[1]))

        raw_verts, raw_keys, raw_orders = [], [], []
        for (o, iflags), dk in zip(t1.verts, d1):
            o2 = tuple(rename1(f) for f in o)
            i2 = tuple(rename1(f) for f in iflags)
            raw_verts.append((o2, i2))
            raw_keys.append(dk)
            raw_orders.append((list(o2), list(i2)))
        for (o, iflags), dk in zip(t2.verts, d2):
            o2 = tuple(rename2(f) for f in o)
            i2 = tuple(rename2(f) for f in iflags)
            raw_verts.append((o2, i2))
            raw_keys.append(dk)
            raw_orders.append((list(o2), list(i2)))
        s, key = self.work.rebuild(raw_verts, raw_keys, raw_orders)
        if s == 0:
            return []
        # tensor rule with the sign dioperad factor on the left of each part
        sign = s * omega_compose_sign(m1, n1, i, m2, n2, j)
        sign *= (-1) ** (omega_degree(m1, n1) * self.cp_degree(k2))
        return [(Fraction(sign), key)]


def double_cobar(provider, m, n):
    """Cobar of the cobar dual; small biarities only."""
    if (m, n) not in ((1, 2), (2, 0), (2, 1), (1, 3)):
        raise ValueError("double cobar is restricted to the smallest biarities")
    return CobarComplex(CobarDioperad(provider), m, n)


# ---------------------------------------------------------------------------
# Koszulity reports


def necklace(cls):
    """Rotation-invariant pattern of a class (grouping key for isomorphic
    subcomplexes)."""
    w = cls.word()
    return min(tuple(w[k:] + w[:k]) for k in range(len(w)))


def koszul_report(provider, bound, dual_dims=None, per_class=False):
    """PASS/FAIL data per biarity: homology of the cobar dual concentrated in
    vertex degree zero with the dimension of the quadratic dual.

    For the class model the complex decomposes by boundary classes and
    classes sharing a necklace give isomorphic blocks (they differ by a
    relabeling); one block per necklace is computed and multiplied out
    unless per_class is set.
    """
    report = {}
    for mm in range(1, bound // 2 + 1):
        for nn in range(0, bound - 2 * mm + 1):
            if not cyclic.valid_arity(mm, nn):
                continue
            expected = dual_dims(mm, nn) if dual_dims else None
            report[(mm, nn)] = koszul_single(provider, mm, nn, expected,
                                             per_class=per_class)
    return report


def koszul_single(provider, m, n, expected_dim=None, per_class=False):
    if isinstance(provider, ClassDioperad):
        classes = provider.basis(m, n)
        groups = {}
        for cls in classes:
            groups.setdefault(necklace(cls), []).append(cls)
        betti = {}
        for neck, members in sorted(groups.items()):
            reps = members if per_class else [members[0]]
            rep_betti = None
            for rep in reps:
                cx = class_subcomplex(provider, rep)
                b = cx.betti("vertex")
                if rep_betti is None:
                    rep_betti = b
                elif b != rep_betti:
                    raise InternalConsistencyError(
                        "same-word subcomplexes disagree")
            for g, v in rep_betti.items():
                if v:
                    betti[g] = betti.get(g, 0) + v * len(members)
        dims = None
    else:
        cx = build_cobar(provider, m, n)
        cx.check_d_squared()
        betti = {g: v for g, v in cx.betti("vertex").items() if v}
        dims = cx.dims("vertex")
    concentrated = all(g == 0 for g, v in betti.items() if v)
    h0 = betti.get(0, 0)
    res = {
        "arity": (m, n),
        "betti_by_vertex_degree": dict(sorted(betti.items())),
        "h0": h0,
        "concentrated_in_degree_zero": concentrated,
    }
    if dims is not None:
        res["dims_by_vertex_degree"] = dict(sorted(dims.items()))
    if expected_dim is not None:
        res["expected_h0"] = expected_dim
        res["pass"] = concentrated and h0 == expected_dim
    return res

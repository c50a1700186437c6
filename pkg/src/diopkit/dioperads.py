"""Quadratic dioperads: presentations, free dioperads, quotients, duals.

A presentation has generators in biarities (1,2) and (2,0) and relations
in the two-vertex components (1,3) and (2,1) of the free dioperad.  Free
basis elements are trees whose vertices carry generator choices relative
to the canonical local flag order; reordering graded decorations follows
the usual sign rule, with the vertex sequence fixed by the canonical
traversal order of the tree.

The module also provides the one-dimensional sign dioperads and a small
protocol (FiniteDioperad) shared by the concrete models that feed the
cobar construction: the cyclic-class model of the associative-algebra-
with-co-inner-product dioperad, and the generic elimination model that
works for any presentation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product as _iproduct

from . import cyclic, symm, trees
from .cyclic import IN, OUT, CyclicClass
from .exact import SparseMatrix, rank_of_rows, rref_rows
from .trees import EDGE, LEAF, ROOT, Tree

# ---------------------------------------------------------------------------
# linear-combination helpers (dict key -> Fraction, zero entries removed)

def vadd(acc, key, coeff):
    c = acc.get(key, 0) + coeff
    if c:
        acc[key] = c
    else:
        acc.pop(key, None)


def vcombine(acc, other, scale=1):
    for k, c in other.items():
        vadd(acc, k, c * scale)


# ---------------------------------------------------------------------------
# generator spaces and presentations


class GeneratorSpace:
    """Basis, degrees and the transposition action of one generator arity.

    swap maps a basis index to (sign, index): the image of the basis
    element under the nontrivial element of S_2 acting on inputs (for the
    (1,2) space) or outputs (for the (2,0) space).
    """

    def __init__(self, arity, names, degrees, swap):
        self.arity = tuple(arity)
        self.names = list(names)
        self.degrees = list(degrees)
        self.swap = [tuple(s) for s in swap]
        assert len(self.names) == len(self.degrees) == len(self.swap)
        for a, (s, b) in enumerate(self.swap):
            assert s in (1, -1)
            s2, c = self.swap[b]
            assert c == a and s * s2 == 1, "swap action must be an involution"
            assert self.degrees[a] == self.degrees[b]

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)


class Presentation:
    """Generators at (1,2) and (2,0) plus quadratic relation generators."""

    def __init__(self, name, binary, pairing, relation_seeds):
        self.name = name
        self.binary = binary
        self.pairing = pairing
        assert binary.arity == (1, 2) and pairing.arity == (2, 0)
        # seeds are vectors over free keys at (1,3) or (2,1); the stored
        # relation list is closed under the bimodule actions
        self.relations = {(1, 3): [], (2, 1): []}
        for vec in relation_seeds:
            arity = _vector_arity(vec)
            for closed in _orbit_closure(self, arity, vec):
                self.relations[arity].append(closed)

    def generator_space(self, arity):
        if arity == (1, 2):
            return self.binary
        if arity == (2, 0):
            return self.pairing
        raise KeyError(arity)

    def relation_rank(self, arity):
        idx = FreeIndex(self, *arity)
        rows = [idx.as_row(vec) for vec in self.relations[arity]]
        return rank_of_rows(rows)


def _vector_arity(vec):
    key = next(iter(vec))
    tree = key[0]
    return (tree.m, tree.n)


def _orbit_closure(pres, arity, vec):
    m, n = arity
    out = []
    for pi in symm.all_permutations(m):
        for sigma in symm.all_permutations(n):
            acc = {}
            for key, coeff in vec.items():
                s, key2 = free_act(pres, pi, sigma, key)
                vadd(acc, key2, coeff * s)
            out.append(acc)
    return out


# ---------------------------------------------------------------------------
# free dioperad on a presentation's generators
#
# A free basis key is (tree, decorations) where decorations[t] is the
# generator index at the t-th vertex of the canonical vertex order, taken
# relative to the canonical (sorted) local flag order of that vertex.


def _local_key(flag):
    return trees.flag_key_tree(flag)


def _decoration_degree(pres, tree, decs):
    total = 0
    for (outs, ins), di in zip(tree.verts, decs):
        total += pres.generator_space((len(outs), len(ins))).degrees[di]
    return total


def free_basis(pres, m, n):
    """All decorated maximally expanded trees at the given arity."""
    out = []
    for t in trees.enumerate_tree0(m, n, vertex_filter={(1, 2), (2, 0)}):
        dims = [pres.generator_space((len(o), len(i))).dim for o, i in t.verts]
        for decs in _iproduct(*[range(d) for d in dims]):
            out.append((t, tuple(decs)))
    return out


def free_degree(pres, key):
    tree, decs = key
    return _decoration_degree(pres, tree, decs)


def _rebuild(pres, raw_verts, raw_decs, raw_orders, raw_degs):
    """Canonicalize a raw decorated tree, converting decorations to the new
    canonical local orders and collecting all reordering signs.

    raw_verts: list of (outs, ins); raw_decs: generator indices; raw_orders:
    the flag tuples (outs, ins) each decoration currently refers to;
    raw_degs: decoration degrees.  Returns (sign, (tree, decorations)).
    """
    tree = Tree(raw_verts)
    order, edge_map = trees.canonical_order(list(raw_verts))
    sign = 1
    new_decs = [None] * len(order)
    for new_pos, old_idx in enumerate(order):
        space = pres.generator_space(
            (len(raw_verts[old_idx][0]), len(raw_verts[old_idx][1])))
        di = raw_decs[old_idx]
        ref_outs, ref_ins = raw_orders[old_idx]
        ref_outs = [trees._rename_flag(f, edge_map) for f in ref_outs]
        ref_ins = [trees._rename_flag(f, edge_map) for f in ref_ins]
        if space.arity == (1, 2):
            if list(tree.verts[new_pos][1]) != ref_ins:
                s, di = space.swap[di]
                sign *= s
        else:
            if list(tree.verts[new_pos][0]) != ref_outs:
                s, di = space.swap[di]
                sign *= s
        new_decs[new_pos] = di
    # Koszul sign for re-sequencing the decorations to the canonical order
    sign *= symm.reorder_sign(list(range(len(order))), order,
                              lambda t: raw_degs[t])
    return sign, (tree, tuple(new_decs))


def _as_raw(key):
    tree, decs = key
    raw_verts = [(o, i) for o, i in tree.verts]
    raw_orders = [(list(o), list(i)) for o, i in tree.verts]
    return raw_verts, list(decs), raw_orders


def free_act(pres, pi, sigma, key):
    """Apply (pi, sigma) to a free basis element; returns (sign, key)."""
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
    degs = [pres.generator_space((len(o), len(i))).degrees[d]
            for (o, i), d in zip(tree.verts, decs)]
    return _rebuild(pres, raw_verts, list(decs), raw_orders, degs)


def free_compose(pres, key1, i, j, key2):
    """Graft key2's j-th root into key1's i-th leaf; returns (sign, key).

    Roots of the first factor shift up by j-1; roots of the second factor
    above j shift up by m1-1; leaves of the first factor above i shift up
    by n2-1; leaves of the second factor shift up by i-1.  The vertex
    sequence is first factor then second factor, then reordered to the
    canonical order of the grafted tree.
    """
    t1, d1 = key1
    t2, d2 = key2
    m1, n1 = t1.m, t1.n
    m2, n2 = t2.m, t2.n
    assert 1 <= i <= n1 and 1 <= j <= m2

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

    raw_verts = []
    raw_orders = []
    raw_decs = []
    raw_degs = []
    for (o, iflags), d in zip(t1.verts, d1):
        o2 = tuple(rename1(f) for f in o)
        i2 = tuple(rename1(f) for f in iflags)
        raw_verts.append((o2, i2))
        raw_orders.append((list(o2), list(i2)))
        raw_decs.append(d)
        raw_degs.append(pres.generator_space((len(o), len(iflags))).degrees[d])
    for (o, iflags), d in zip(t2.verts, d2):
        o2 = tuple(rename2(f) for f in o)
        i2 = tuple(rename2(f) for f in iflags)
        raw_verts.append((o2, i2))
        raw_orders.append((list(o2), list(i2)))
        raw_decs.append(d)
        raw_degs.append(pres.generator_space((len(o), len(iflags))).degrees[d])
    return _rebuild(pres, raw_verts, raw_decs, raw_orders, raw_degs)


def compose_vectors(pres, vec1, i, j, vec2):
    acc = {}
    for k1, c1 in vec1.items():
        for k2, c2 in vec2.items():
            s, k = free_compose(pres, k1, i, j, k2)
            vadd(acc, k, c1 * c2 * s)
    return acc


def generator_key(pres, arity, index):
    """The corolla decorated by one generator."""
    t = trees.corolla(*arity)
    return (t, (index,))


# ---------------------------------------------------------------------------
# quotient by the quadratic ideal


class FreeIndex:
    """Indexing of the free basis at one arity."""

    def __init__(self, pres, m, n):
        self.pres = pres
        self.arity = (m, n)
        self.basis = free_basis(pres, m, n)
        self.index = {k: p for p, k in enumerate(self.basis)}

    def as_row(self, vec):
        return {self.index[k]: Fraction(c) for k, c in vec.items()}


class QuotientSpace:
    """dim, basis and reduction map of one component of a quadratic quotient."""

    def __init__(self, pres, m, n):
        self.pres = pres
        self.arity = (m, n)
        self.free = FreeIndex(pres, m, n)
        rows = [self.free.as_row(v) for v in ideal_vectors(pres, m, n)]
        pivots, reduced = rref_rows(rows)
        self.pivot_col = {col: rid for col, rid in pivots}
        self.reduced = reduced
        pivot_cols = set(self.pivot_col)
        self.basis = [k for p, k in enumerate(self.free.basis) if p not in pivot_cols]
        self.basis_pos = {k: p for p, k in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def reduce_key(self, key):
        """Image of a free basis element, as a dict over quotient basis keys."""
        p = self.free.index[key]
        if p not in self.pivot_col:
            return {key: Fraction(1)}
        row = self.reduced[self.pivot_col[p]]
        out = {}
        for c, coeff in row.items():
            if c == p:
                continue
            k = self.free.basis[c]
            assert k in self.basis_pos, "reduced row touches another pivot"
            vadd(out, k, -coeff)
        return out

    def reduce_vector(self, vec):
        out = {}
        for key, coeff in vec.items():
            vcombine(out, self.reduce_key(key), coeff)
        return out


def ideal_vectors(pres, m, n):
    """Spanning vectors of the quadratic ideal component at (m, n).

    Every tree with exactly one relation-arity vertex, all other vertices
    generator-decorated, with every relation vector plugged into the fat
    vertex through the canonical flag order.
    """
    fat_arities = ((1, 3), (2, 1))
    thin = {(1, 2), (2, 0)}
    out = []
    for t in trees.enumerate_tree0(m, n, vertex_filter=thin | set(fat_arities)):
        fats = [idx for idx, a in enumerate(t.vertex_arities()) if a in fat_arities]
        if len(fats) != 1:
            continue
        w = fats[0]
        fat_arity = t.vertex_arities()[w]
        if not pres.relations[fat_arity]:
            continue
        dims = []
        for idx, (o, i) in enumerate(t.verts):
            dims.append(1 if idx == w else pres.generator_space((len(o), len(i))).dim)
        for decs in _iproduct(*[range(d) for d in dims]):
            for rel in pres.relations[fat_arity]:
                acc = {}
                for rkey, rcoeff in rel.items():
                    s, key = _plug(pres, t, w, decs, rkey)
                    vadd(acc, key, rcoeff * s)
                if acc:
                    out.append(acc)
    return out


def _plug(pres, host, w, decs, rkey):
    """Substitute a two-vertex decorated tree for the fat vertex w of host."""
    rtree, rdecs = rkey
    outs_w, ins_w = host.verts[w]
    # the relation tree's numbered legs attach to w's flags in sorted order
    root_to = {k + 1: f for k, f in enumerate(outs_w)}
    leaf_to = {k + 1: f for k, f in enumerate(ins_w)}

    def rename(f):
        if f[0] == ROOT:
            return root_to[f[1]]
        if f[0] == LEAF:
            return leaf_to[f[1]]
        return (EDGE, ("plug", f[1]))

    raw_verts = []
    raw_orders = []
    raw_decs = []
    raw_degs = []
    for idx, (o, i) in enumerate(host.verts):
        if idx == w:
            for (ro, ri), rd in zip(rtree.verts, rdecs):
                o2 = tuple(rename(f) for f in ro)
                i2 = tuple(rename(f) for f in ri)
                raw_verts.append((o2, i2))
                raw_orders.append((list(o2), list(i2)))
                raw_decs.append(rd)
                raw_degs.append(pres.generator_space((len(ro), len(ri))).degrees[rd])
        else:
            raw_verts.append((o, i))
            raw_orders.append((list(o), list(i)))
            raw_decs.append(decs[idx])
            raw_degs.append(pres.generator_space((len(o), len(i))).degrees[decs[idx]])
    return _rebuild(pres, raw_verts, raw_decs, raw_orders, raw_degs)


# ---------------------------------------------------------------------------
# the concrete presentations


def v_presentation(d=0):
    """Associative product plus a symmetric invariant co-inner product of
    degree d."""
    return _mu_nu_presentation("V", d, nu_swap_sign=1)


def w_presentation(d=0):
    """Same generators with an antisymmetric co-inner product."""
    return _mu_nu_presentation("W", d, nu_swap_sign=-1)


def _mu_nu_presentation(name, d, nu_swap_sign):
    binary = GeneratorSpace((1, 2), ["mu", "mubar"], [0, 0], [(1, 1), (1, 0)])
    pairing = GeneratorSpace((2, 0), ["nu"], [d], [(nu_swap_sign, 0)])
    pres = Presentation.__new__(Presentation)
    pres.name = name
    pres.binary = binary
    pres.pairing = pairing
    pres.relations = {(1, 3): [], (2, 1): []}
    mu = generator_key(pres, (1, 2), 0)
    nu = generator_key(pres, (2, 0), 0)
    assoc = {}
    s, k = free_compose(pres, mu, 1, 1, mu)
    vadd(assoc, k, Fraction(s))
    s, k = free_compose(pres, mu, 2, 1, mu)
    vadd(assoc, k, Fraction(-s))
    invar = {}
    s, k = free_compose(pres, mu, 1, 2, nu)
    vadd(invar, k, Fraction(s))
    s, k = free_compose(pres, mu, 2, 1, nu)
    vadd(invar, k, Fraction(-s))
    for vec in (assoc, invar):
        arity = _vector_arity(vec)
        for closed in _orbit_closure(pres, arity, vec):
            pres.relations[arity].append(closed)
    return pres


# ---------------------------------------------------------------------------
# sign dioperads and the dioperad protocol


class FiniteDioperad:
    """Protocol for the finite models fed to the cobar construction.

    Implementations provide basis(m, n) -> list of keys, degree(arity, key),
    compose(a1, k1, i, j, a2, k2) -> list of (coeff, key), act(a, pi, sigma,
    key) -> (sign, key), and differential(a, key) -> list of (coeff, key).
    """

    def basis(self, m, n):
        raise NotImplementedError

    def degree(self, arity, key):
        raise NotImplementedError

    def compose(self, a1, k1, i, j, a2, k2):
        raise NotImplementedError

    def act(self, arity, pi, sigma, key):
        raise NotImplementedError

    def differential(self, arity, key):
        return []

    def dim(self, m, n):
        return len(self.basis(m, n))


class SignDioperad(FiniteDioperad):
    """The one-dimensional dioperads built from input and output signs.

    variant is one of "theta", "theta_inv", "gamma", "gamma_inv", "sigma",
    "omega"; each space is one-dimensional with basis key 0.
    """

    _DATA = {
        "theta": (lambda m, n: n - 1, True, False),
        "theta_inv": (lambda m, n: 1 - n, True, False),
        "gamma": (lambda m, n: m - 1, False, True),
        "gamma_inv": (lambda m, n: 1 - m, False, True),
    }

    def __init__(self, variant):
        self.variant = variant
        if variant in self._DATA:
            self.factors = [variant]
        elif variant == "sigma":
            self.factors = ["theta", "gamma_inv"]
        elif variant == "omega":
            self.factors = ["theta_inv", "gamma_inv", "gamma_inv"]
        else:
            raise ValueError(variant)

    def factor_degree(self, name, m, n):
        return self._DATA[name][0](m, n)

    def basis(self, m, n):
        return [0]

    def degree(self, arity, key):
        m, n = arity
        return sum(self.factor_degree(f, m, n) for f in self.factors)

    def act(self, arity, pi, sigma, key):
        s = 1
        for f in self.factors:
            _, use_sigma, use_pi = self._DATA[f]
            if use_sigma:
                s *= symm.sign(sigma)
            if use_pi:
                s *= symm.sign(pi)
        return (s, 0)

    def compose(self, a1, k1, i, j, a2, k2):
        (m1, n1), (m2, n2) = a1, a2
        sign = 1
        # tensor-factor composition with the interchange signs between factors
        for pos, f in enumerate(self.factors):
            if f in ("theta", "theta_inv"):
                sign *= (-1) ** ((i - 1) * (n2 - 1))
            else:
                sign *= (-1) ** ((j - 1) * (m1 - 1))
            # Koszul: the remaining factors of the first element move past
            # this factor of the second element
            tail = sum(self.factor_degree(g, m1, n1) for g in self.factors[pos + 1:])
            sign *= (-1) ** (tail * self.factor_degree(f, m2, n2))
        return [(Fraction(sign), 0)]


def omega_degree(m, n):
    return 3 - n - 2 * m


def omega_compose_sign(m1, n1, i, m2, n2, j):
    """Closed form of the composition sign of the twisting dioperad."""
    return (-1) ** ((i - 1) * (n2 - 1) + (m1 - 1) * (m2 - 1))


class ClassDioperad(FiniteDioperad):
    """The dioperad of cyclic classes: quotient model of the associative
    algebra with symmetric co-inner product of even degree d.

    Basis keys are canonical CyclicClass values; composition glues cyclic
    orders with coefficient one and the bimodule action relabels.  For odd
    d the coefficient-one model violates the interchange axiom (moving two
    odd pairing generators past each other costs a sign) and the honest
    quotient degenerates; use GammaDioperad over the presentation instead.
    """

    def __init__(self, d=0):
        if d % 2:
            raise ValueError("the coefficient-one class model needs even degree")
        self.d = d
        self._cache = {}

    def basis(self, m, n):
        if (m, n) not in self._cache:
            self._cache[m, n] = cyclic.enumerate_classes(m, n)
        return self._cache[m, n]

    def degree(self, arity, key):
        m, _ = arity
        return self.d * (m - 1)

    def compose(self, a1, k1, i, j, a2, k2):
        return [(Fraction(1), cyclic.glue(k1, i, k2, j))]

    def act(self, arity, pi, sigma, key):
        return (1, key.act(pi, sigma))

    def splits(self, arity, key, edge):
        """Set-labeled vertex splittings: cuts of the class."""
        return [(lower, upper, Fraction(1))
                for lower, upper in cyclic.cuts_sets(key, edge)]


class GammaDioperad(FiniteDioperad):
    """The quotient dioperad in its class basis, with honest coefficients.

    Keys are the surviving classes (those whose generating operation is
    nonzero in the quotient); composition and action are transported from
    the elimination model through the class identification, so the
    coefficients are the correct signs for any degree of the pairing
    generator.  On the symmetric presentation with even degree this agrees
    with the coefficient-one class model.
    """

    def __init__(self, pres):
        self.pres = pres
        self._spaces = {}

    def _space(self, m, n):
        if (m, n) not in self._spaces:
            q = QuotientSpace(self.pres, m, n)
            g = GammaCalculus(self.pres, q)
            to_rep = {}
            order = []
            for rep in q.basis:
                coeff, cls = g.normal_form_key(rep)
                assert cls not in to_rep
                # gamma_cls = (1/coeff) * rep in the quotient
                to_rep[cls] = (Fraction(1) / coeff, rep)
                order.append(cls)
            self._spaces[m, n] = (q, g, to_rep, sorted(order, key=lambda c: c.encode()))
        return self._spaces[m, n]

    def basis(self, m, n):
        return list(self._space(m, n)[3])

    def degree(self, arity, key):
        m, _ = arity
        return self.pres.pairing.degrees[0] * (m - 1)

    def compose(self, a1, k1, i, j, a2, k2):
        q1, g1, to1, _ = self._space(*a1)
        q2, g2, to2, _ = self._space(*a2)
        c1, rep1 = to1[k1]
        c2, rep2 = to2[k2]
        s, key = free_compose(self.pres, rep1, i, j, rep2)
        m, n = a1[0] + a2[0] - 1, a1[1] + a2[1] - 1
        qt, gt, tot, _ = self._space(m, n)
        red = qt.reduce_key(key)
        if not red:
            return []
        (rep3, c3), = red.items()
        coeff3, cls3 = gt.normal_form_key(rep3)
        total = c1 * c2 * s * c3 * coeff3
        assert cls3 == cyclic.glue(k1, i, k2, j), "composite leaves its class"
        return [(total, cls3)]

    def act(self, arity, pi, sigma, key):
        q, g, to, _ = self._space(*arity)
        c, rep = to[key]
        s, key2 = free_act(self.pres, pi, sigma, rep)
        red = q.reduce_key(key2)
        if not red:
            return (0, None)
        (rep2, c2), = red.items()
        coeff2, cls2 = g.normal_form_key(rep2)
        total = c * s * c2 * coeff2
        assert total in (1, -1)
        assert cls2 == key.act(pi, sigma), "action leaves the class pattern"
        return (int(total), cls2)


class FreeDioperadModel(FiniteDioperad):
    """The free dioperad on a presentation's generators (no relations)."""

    def __init__(self, pres):
        self.pres = pres

    def basis(self, m, n):
        return free_basis(self.pres, m, n)

    def degree(self, arity, key):
        return free_degree(self.pres, key)

    def compose(self, a1, k1, i, j, a2, k2):
        s, key = free_compose(self.pres, k1, i, j, k2)
        return [(Fraction(s), key)]

    def act(self, arity, pi, sigma, key):
        return free_act(self.pres, pi, sigma, key)


class EliminationDioperad(FiniteDioperad):
    """Any quadratic presentation, with basis from the quotient elimination."""

    def __init__(self, pres, max_weight=None):
        self.pres = pres
        self._spaces = {}

    def space(self, m, n):
        if (m, n) not in self._spaces:
            self._spaces[m, n] = QuotientSpace(self.pres, m, n)
        return self._spaces[m, n]

    def basis(self, m, n):
        return list(self.space(m, n).basis)

    def degree(self, arity, key):
        return free_degree(self.pres, key)

    def compose(self, a1, k1, i, j, a2, k2):
        s, key = free_compose(self.pres, k1, i, j, k2)
        target = self.space(a1[0] + a2[0] - 1, a1[1] + a2[1] - 1)
        return [(c * s, k) for k, c in target.reduce_key(key).items()]

    def act(self, arity, pi, sigma, key):
        s, key2 = free_act(self.pres, pi, sigma, key)
        red = self.space(*arity).reduce_key(key2)
        assert len(red) <= 1, "bimodule action is not monomial on this basis"
        if not red:
            return (0, None)
        (k, c), = red.items()
        assert c in (1, -1), "bimodule action is not a signed permutation"
        return (int(c) * s, k)


# ---------------------------------------------------------------------------
# gamma normal forms: identification of the elimination basis with classes


def planar_of_free_key(pres, key):
    """The planar tree of a mu/nu decorated tree (binary generator index 0
    reads its sorted inputs in order, index 1 swapped; the pairing vertex
    is symmetric)."""
    tree, decs = key
    words = []
    for (outs, ins), di in zip(tree.verts, decs):
        if (len(outs), len(ins)) == (1, 2):
            a, b = ins
            seq = (a, b) if di == 0 else (b, a)
            words.append(CyclicClass(((OUT, outs[0]), (IN, seq[0]), (IN, seq[1]))))
        else:
            words.append(CyclicClass(((OUT, outs[0]), (OUT, outs[1]))))
    return trees.PlanarTree(words)


def read_off_key(pres, key):
    """The cyclic class of a decorated tree, by the clockwise boundary walk."""
    return read_off(planar_of_free_key(pres, key))


def read_off(planar):
    """Boundary class of a planar tree whose legs are numbered roots/leaves."""
    flags = []
    for k, l in planar.boundary():
        flags.append((OUT, l[1]) if l[0] == ROOT else (IN, l[1]))
    return CyclicClass(flags)


def gamma_free_element(pres, cls):
    """The decorated tree representing the generating operation of a class.

    For the canonically labeled class of a word this is the iterated
    product composed with co-inner products at the output slots; a general
    class is the canonical one acted on by its labeling pair.
    """
    gamma, pi, sigma = cls.gamma_form()
    word = gamma.word()
    L = len(word)
    mu = generator_key(pres, (1, 2), 0)
    nu = generator_key(pres, (2, 0), 0)
    m = sum(1 for k in word if k == OUT)
    n = L - m
    sign = 1
    if (m, n) == (1, 2):
        key = mu
    elif (m, n) == (2, 0):
        key = nu
    else:
        # left-iterated product with n+m-1 inputs
        chain = mu
        for _ in range(n + m - 3):
            s, chain = free_compose(pres, chain, 1, 1, mu)
            sign *= s
        key = chain
        out_positions = [p for p, k in enumerate(word) if k == OUT]
        for t, p in enumerate(out_positions[1:], start=2):
            s, key = free_compose(pres, key, p - (t - 2), 1, nu)
            sign *= s
    s, key = free_act(pres, pi, sigma, key)
    return sign * s, key


class GammaCalculus:
    """Identification between a quotient basis and the class basis.

    For the symmetric presentation every free monomial reduces to a signed
    multiple of the generating operation of its boundary class; this object
    computes that normal form and certifies the two bases biject.
    """

    def __init__(self, pres, quotient_space):
        self.pres = pres
        self.space = quotient_space
        self._gamma_red = {}

    def _gamma_reduction(self, cls):
        if cls not in self._gamma_red:
            s, key = gamma_free_element(self.pres, cls)
            red = self.space.reduce_vector({key: Fraction(s)})
            self._gamma_red[cls] = red
        return self._gamma_red[cls]

    def normal_form_key(self, key):
        """(coeff, class) with image(key) = coeff * gamma_class in the quotient."""
        cls = read_off_key(self.pres, key)
        red_key = self.space.reduce_key(key)
        red_gamma = self._gamma_reduction(cls)
        assert len(red_key) == 1 and len(red_gamma) == 1, \
            "normal form is not monomial"
        (k1, c1), = red_key.items()
        (k2, c2), = red_gamma.items()
        assert k1 == k2, "free element does not reduce onto its class generator"
        return c1 / c2, cls

    def normal_form(self, vec):
        out = {}
        for key, coeff in vec.items():
            c, cls = self.normal_form_key(key)
            vadd(out, cls, c * coeff)
        return out


# ---------------------------------------------------------------------------
# quadratic dual


def dual_generator_space(space, omega_sign_from_inputs):
    """Shifted dual of a generator space twisted by the sign dioperad.

    The twist contributes sgn on the input side only, so the (1,2) space
    picks up an extra minus sign under the transposition and the (2,0)
    space does not.
    """
    names = [nm + "!" for nm in space.names]
    degrees = [-g for g in space.degrees]
    swap = [None] * space.dim
    for b in range(space.dim):
        s, bp = space.swap[b]
        # dual of a signed permutation action: a* . sigma = s . b* where
        # b . sigma^{-1} = s . a; the swap is an involution so reuse it
        swap[bp] = (s * (-1 if omega_sign_from_inputs else 1), b)
    return GeneratorSpace(space.arity, names, degrees, swap)


def pairing_signs(pres, dual, arity):
    """Diagonal signs of the equivariant duality pairing at one arity.

    The two free components share their decorated-tree bases index-wise and
    the pairing is diagonal; equivariance forces the relative signs within
    each action orbit (the absolute sign per orbit is the orientation
    freedom of the determinant line and is fixed to +1 on the orbit's
    first basis element).  Inconsistent constraints would mean the action
    conventions of the two presentations do not match and raise.
    """
    m, n = arity
    idx = FreeIndex(pres, m, n)
    signs = {}
    gens = _generator_pairs(m, n)[1:]
    for seed in idx.basis:
        if seed in signs:
            continue
        signs[seed] = 1
        stack = [seed]
        while stack:
            k = stack.pop()
            for pi, sigma in gens:
                s, k2 = free_act(pres, pi, sigma, k)
                sd, k2d = free_act(dual, pi, sigma, k)
                assert k2d == k2, "primal and dual actions shuffle differently"
                val = signs[k] * s * sd
                if k2 in signs:
                    if signs[k2] != val:
                        raise ArithmeticError(
                            "no equivariant diagonal pairing exists")
                else:
                    signs[k2] = val
                    stack.append(k2)
    return signs


def quadratic_dual(pres, name=None):
    """The presentation on shifted twisted dual generators whose relations
    are the orthogonal complement of the input relations."""
    dual_binary = dual_generator_space(pres.binary, omega_sign_from_inputs=True)
    dual_pairing = dual_generator_space(pres.pairing, omega_sign_from_inputs=False)
    dual = Presentation.__new__(Presentation)
    dual.name = name or (pres.name + "!")
    dual.binary = dual_binary
    dual.pairing = dual_pairing
    dual.relations = {(1, 3): [], (2, 1): []}
    seeds = []
    for arity in ((1, 3), (2, 1)):
        idx = FreeIndex(pres, *arity)
        signs = pairing_signs(pres, dual, arity)
        rows = []
        for rel in pres.relations[arity]:
            row = {}
            for key, coeff in rel.items():
                row[idx.index[key]] = Fraction(coeff) * signs[key]
            rows.append(row)
        mat = SparseMatrix.from_rows(rows, cols=len(idx.basis))
        for vec in mat.kernel_basis():
            rel = {}
            for col, coeff in enumerate(vec):
                if coeff:
                    rel[idx.basis[col]] = coeff
            if rel:
                seeds.append(rel)
    # the kernel of an equivariant pairing is a submodule, so closing under
    # the actions only adds redundant spanning vectors; it is verified not
    # to grow the span
    pre_rank = {}
    for arity in ((1, 3), (2, 1)):
        idx = FreeIndex(dual, *arity)
        rows = [idx.as_row(v) for v in seeds if _vector_arity(v) == arity]
        pre_rank[arity] = rank_of_rows(rows)
    for vec in seeds:
        arity = _vector_arity(vec)
        for closed in _orbit_closure(dual, arity, vec):
            dual.relations[arity].append(closed)
    for arity in ((1, 3), (2, 1)):
        assert dual.relation_rank(arity) == pre_rank[arity], \
            "orthogonal complement is not action stable"
    return dual


def presentations_isomorphic(p1, p2, binary_map=None, pairing_map=None):
    """Generator dimensions, degrees and relation spaces agree under a signed
    index map from p1's generators to p2's (identity by default).

    binary_map / pairing_map list (sign, target_index) per source index.
    """
    for a in ((1, 2), (2, 0)):
        s1, s2 = p1.generator_space(a), p2.generator_space(a)
        if s1.dim != s2.dim or s1.degrees != s2.degrees:
            return False
    binary_map = binary_map or [(1, t) for t in range(p1.binary.dim)]
    pairing_map = pairing_map or [(1, t) for t in range(p1.pairing.dim)]

    def transport(key, coeff):
        tree, decs = key
        new = []
        for (o, i), dd in zip(tree.verts, decs):
            themap = binary_map if (len(o), len(i)) == (1, 2) else pairing_map
            s, d2 = themap[dd]
            coeff = coeff * s
            new.append(d2)
        return (tree, tuple(new)), coeff

    for arity in ((1, 3), (2, 1)):
        idx2 = FreeIndex(p2, *arity)
        rows1 = []
        for rel in p1.relations[arity]:
            row = {}
            for k, c in rel.items():
                k2, c2 = transport(k, c)
                row[idx2.index[k2]] = row.get(idx2.index[k2], 0) + c2
            rows1.append({c: v for c, v in row.items() if v})
        rows2 = [idx2.as_row(rel) for rel in p2.relations[arity]]
        r1 = rank_of_rows(rows1)
        r2 = rank_of_rows(rows2)
        if r1 != r2 or rank_of_rows(rows1 + rows2) != r1:
            return False
    return True


# ---------------------------------------------------------------------------
# the dioperad axioms, checked pointwise on a finite model


def _act_vec(P, arity, pi, sigma, vec):
    out = {}
    for k, c in vec.items():
        s, k2 = P.act(arity, pi, sigma, k)
        if s:
            vadd(out, k2, c * s)
    return out


def _compose_vec(P, a1, v1, i, j, a2, v2):
    out = {}
    for k1, c1 in v1.items():
        for k2, c2 in v2.items():
            for c, k in P.compose(a1, k1, i, j, a2, k2):
                vadd(out, k, c1 * c2 * c)
    return out


def check_axioms(P, triples, deep=False):
    """Verify the three dioperad axioms on every basis triple of the given
    arity triples (sequential compositions, parallel compositions, and
    equivariance).  Raises AssertionError with a description on failure.

    With deep=False the action axiom is checked on transposition generators
    only; deep=True runs all permutation pairs.
    """
    for a1, a2, a3 in triples:
        _check_axiom_a(P, a1, a2, a3)
        _check_axiom_b(P, a1, a2, a3)
    arities = sorted({a for t in triples for a in t})
    for a1 in arities:
        for a2 in arities:
            _check_axiom_c(P, a1, a2, deep=deep)
    return True


def _elements(P, arity):
    return [({k: Fraction(1)}, P.degree(arity, k)) for k in P.basis(*arity)]


def _check_axiom_a(P, a1, a2, a3):
    (m1, n1), (m2, n2), (m3, n3) = a1, a2, a3
    if n1 == 0 or n1 + n2 - 1 == 0:
        return
    mid = (m1 + m2 - 1, n1 + n2 - 1)
    for x, _dx in _elements(P, a1):
        for y, dy in _elements(P, a2):
            for z, dz in _elements(P, a3):
                for k in range(1, n1 + 1):
                    for l in range(1, m2 + 1):
                        xy = _compose_vec(P, a1, x, k, l, a2, y)
                        for i in range(1, n1 + n2):
                            for j in range(1, m3 + 1):
                                lhs = _compose_vec(P, mid, xy, i, j, a3, z)
                                rhs = _axiom_a_rhs(P, a1, a2, a3, x, y, z,
                                                   dy, dz, i, j, k, l)
                                assert lhs == rhs, (
                                    "axiom (a) fails at %r" %
                                    [(a1, a2, a3), (i, j, k, l)])


def _axiom_a_rhs(P, a1, a2, a3, x, y, z, dy, dz, i, j, k, l):
    (m1, n1), (m2, n2), (m3, n3) = a1, a2, a3
    m = m1 + m2 + m3 - 2
    n = n1 + n2 + n3 - 2
    if k <= i <= k + n2 - 1:
        inner = _compose_vec(P, a2, y, i - k + 1, j, a3, z)
        return _compose_vec(P, a1, x, k, j + l - 1,
                            (m2 + m3 - 1, n2 + n3 - 1), inner)
    sigma = symm.block_permutation((2, 1, 3, 5, 4),
                                   [l - 1, j - 1, m1, m3 - j, m2 - l])
    tau_sign = Fraction((-1) ** (dy * dz))
    xz_arity = (m1 + m3 - 1, n1 + n3 - 1)
    if i <= k - 1:
        xz = _compose_vec(P, a1, x, i, j, a3, z)
        out = _compose_vec(P, xz_arity, xz, k + n3 - 1, l, a2, y)
    else:
        assert i >= k + n2
        xz = _compose_vec(P, a1, x, i - n2 + 1, j, a3, z)
        out = _compose_vec(P, xz_arity, xz, k, l, a2, y)
    out = {kk: c * tau_sign for kk, c in out.items()}
    return _act_vec(P, (m, n), sigma, symm.identity(n), out)


def _check_axiom_b(P, a1, a2, a3):
    (m1, n1), (m2, n2), (m3, n3) = a1, a2, a3
    if n1 == 0 or n2 == 0:
        return
    mid = (m2 + m3 - 1, n2 + n3 - 1)
    for x, dx in _elements(P, a1):
        for y, dy in _elements(P, a2):
            for z, _dz in _elements(P, a3):
                for k in range(1, n2 + 1):
                    for l in range(1, m3 + 1):
                        yz = _compose_vec(P, a2, y, k, l, a3, z)
                        for i in range(1, n1 + 1):
                            for j in range(1, m2 + m3):
                                lhs = _compose_vec(P, a1, x, i, j, mid, yz)
                                rhs = _axiom_b_rhs(P, a1, a2, a3, x, y, z,
                                                   dx, dy, i, j, k, l)
                                assert lhs == rhs, (
                                    "axiom (b) fails at %r" %
                                    [(a1, a2, a3), (i, j, k, l)])


def _axiom_b_rhs(P, a1, a2, a3, x, y, z, dx, dy, i, j, k, l):
    (m1, n1), (m2, n2), (m3, n3) = a1, a2, a3
    m = m1 + m2 + m3 - 2
    n = n1 + n2 + n3 - 2
    if l <= j <= l + m2 - 1:
        xy = _compose_vec(P, a1, x, i, j - l + 1, a2, y)
        return _compose_vec(P, (m1 + m2 - 1, n1 + n2 - 1), xy,
                            k + i - 1, l, a3, z)
    if n3 > 0:
        sigma = symm.block_permutation((2, 1, 3, 5, 4),
                                       [i - 1, k - 1, n3, n2 - k, n1 - i])
    else:
        sigma = symm.block_permutation((2, 1, 4, 3),
                                       [i - 1, k - 1, n2 - k, n1 - i])
    tau_sign = Fraction((-1) ** (dx * dy))
    if j <= l - 1:
        xz = _compose_vec(P, a1, x, i, j, a3, z)
        out = _compose_vec(P, a2, y, k, l + m1 - 1,
                           (m1 + m3 - 1, n1 + n3 - 1), xz)
    else:
        assert j >= l + m2
        xz = _compose_vec(P, a1, x, i, j - m2 + 1, a3, z)
        out = _compose_vec(P, a2, y, k, l,
                           (m1 + m3 - 1, n1 + n3 - 1), xz)
    out = {kk: c * tau_sign for kk, c in out.items()}
    return _act_vec(P, (m, n), symm.identity(m), sigma, out)


def _check_axiom_c(P, a1, a2, deep=False):
    (m1, n1), (m2, n2) = a1, a2
    if n1 == 0:
        return
    m, n = m1 + m2 - 1, n1 + n2 - 1
    if not cyclic.valid_arity(m, n):
        return
    if deep:
        pairs1 = [(pi, sig) for pi in symm.all_permutations(m1)
                  for sig in symm.all_permutations(n1)]
        pairs2 = [(pi, sig) for pi in symm.all_permutations(m2)
                  for sig in symm.all_permutations(n2)]
    else:
        pairs1 = _generator_pairs(m1, n1)
        pairs2 = _generator_pairs(m2, n2)
    for x, _ in _elements(P, a1):
        for y, _ in _elements(P, a2):
            for pi1, s1 in pairs1:
                for pi2, s2 in pairs2:
                    xa = _act_vec(P, a1, pi1, s1, x)
                    ya = _act_vec(P, a2, pi2, s2, y)
                    for i in range(1, n1 + 1):
                        for j in range(1, m2 + 1):
                            lhs = _compose_vec(P, a1, xa, i, j, a2, ya)
                            jj = symm.inverse(pi2)[j - 1]
                            inner = _compose_vec(P, a1, x, s1[i - 1], jj, a2, y)
                            pi = symm.partial_compose(pi2, jj, pi1)
                            sig = symm.partial_compose(s1, i, s2)
                            rhs = _act_vec(P, (m, n), pi, sig, inner)
                            assert lhs == rhs, (
                                "axiom (c) fails at %r" %
                                [(a1, a2), (i, j), (pi1, s1, pi2, s2)])


def _generator_pairs(m, n):
    out = [(symm.identity(m), symm.identity(n))]
    for t in range(m - 1):
        pi = list(range(1, m + 1))
        pi[t], pi[t + 1] = pi[t + 1], pi[t]
        out.append((tuple(pi), symm.identity(n)))
    for t in range(n - 1):
        s = list(range(1, n + 1))
        s[t], s[t + 1] = s[t + 1], s[t]
        out.append((symm.identity(m), tuple(s)))
    return out


def dims_table(provider, bound):
    """dim P(m, n) for every allowed arity with n + m <= bound."""
    table = {}
    for total in range(2, bound + 1):
        for m in range(1, total + 1):
            n = total - m
            if not cyclic.valid_arity(m, n):
                continue
            table[(m, n)] = provider.dim(m, n)
    return table


# ---------------------------------------------------------------------------
# presentation files


def presentation_to_dict(pres):
    def space_dict(space):
        return {"basis": space.names, "degrees": space.degrees,
                "swap": [[s, space.names[b]] for s, b in space.swap]}

    def key_expr(key):
        tree, decs = key
        # serialize as nested compositions; only one- and two-vertex trees
        # occur in relations
        if tree.num_vertices == 1:
            (o, i), = tree.verts
            return pres.generator_space((len(o), len(i))).names[decs[0]]
        raise ValueError("only corolla keys serialize directly")

    data = {
        "name": pres.name,
        "generators": {"binary": space_dict(pres.binary),
                       "pairing": space_dict(pres.pairing)},
        "relations": [],
    }
    for arity in ((1, 3), (2, 1)):
        for rel in pres.relations[arity]:
            terms = []
            for (tree, decs), coeff in rel.items():
                terms.append({"coeff": str(coeff),
                              "tree": _encode_tree(pres, tree, decs)})
            data["relations"].append({"arity": list(arity), "terms": terms})
    return data


def _encode_tree(pres, tree, decs):
    return {
        "verts": [
            {"outs": [list(f) for f in o], "ins": [list(f) for f in i],
             "gen": pres.generator_space((len(o), len(i))).names[d]}
            for (o, i), d in zip(tree.verts, decs)
        ]
    }


def _decode_tree(pres, data):
    raw = []
    decs = []
    for v in data["verts"]:
        outs = tuple(tuple(f) for f in v["outs"])
        ins = tuple(tuple(f) for f in v["ins"])
        raw.append((outs, ins))
        decs.append(pres.generator_space((len(outs), len(ins))).index(v["gen"]))
    tree = Tree(raw)
    assert tuple(raw) == tree.verts, "serialized tree must be canonical"
    return (tree, tuple(decs))


def save_presentation(pres, path):
    with open(path, "w") as fh:
        json.dump(presentation_to_dict(pres), fh, indent=1, sort_keys=True)


def load_presentation(path_or_dict):
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            data = json.load(fh)

    def space_from(d, arity):
        names = d["basis"]
        swap = [(s, names.index(nm)) for s, nm in d["swap"]]
        return GeneratorSpace(arity, names, d["degrees"], swap)

    pres = Presentation.__new__(Presentation)
    pres.name = data["name"]
    pres.binary = space_from(data["generators"]["binary"], (1, 2))
    pres.pairing = space_from(data["generators"]["pairing"], (2, 0))
    pres.relations = {(1, 3): [], (2, 1): []}
    seeds = []
    for rel in data["relations"]:
        vec = {}
        for term in rel["terms"]:
            key = _decode_tree(pres, term["tree"])
            vadd(vec, key, Fraction(term["coeff"]))
        seeds.append(vec)
    for vec in seeds:
        arity = _vector_arity(vec)
        for closed in _orbit_closure(pres, arity, vec):
            pres.relations[arity].append(closed)
    return pres

"""Cyclic words of outputs and inputs, their classes, and the glue/cut calculus.

A class is a cyclic arrangement of flags around a circle; a flag is a pair
(kind, label) with kind "o" (output) or "i" (input).  Labels are either
the integers 1..m / 1..n (numeric classes, the basis of the quadratic
quotient) or arbitrary distinct ids such as tree edges (set-labeled
classes, used to decorate vertices).  Classes are stored in a canonical
rotation so equality is plain structural equality.

Composition glues two circles along an edge by cutting both open and
concatenating the arcs; cutting is the reverse.  For numeric classes the
labels of a composite are fixed by the order-preserving relabelling maps
of the underlying dioperad composition, and `cuts` inverts exactly those.
"""

from __future__ import annotations

from . import symm

OUT = "o"
IN = "i"

_KIND_RANK = {OUT: 0, IN: 1}


def _label_key(label):
    # ints before tuples before strings; comparable within each group
    if isinstance(label, int):
        return (0, label)
    if isinstance(label, tuple):
        return (1, tuple(_label_key(x) for x in label))
    return (2, str(label))


def flag_key(flag):
    kind, label = flag
    return (_KIND_RANK[kind], _label_key(label))


class CyclicClass:
    """A cyclic arrangement of output/input flags, in canonical rotation."""

    __slots__ = ("flags",)

    def __init__(self, flags):
        flags = tuple(flags)
        if not flags:
            raise ValueError("empty cyclic word")
        keys = [flag_key(f) for f in flags]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate flags in cyclic word")
        best = min(range(len(flags)), key=lambda r: keys[r:] + keys[:r])
        object.__setattr__(self, "flags", flags[best:] + flags[:best])

    def __setattr__(self, name, value):
        raise AttributeError("CyclicClass is immutable")

    def __eq__(self, other):
        return isinstance(other, CyclicClass) and self.flags == other.flags

    def __hash__(self):
        return hash(self.flags)

    def __len__(self):
        return len(self.flags)

    def __repr__(self):
        return "CyclicClass(%s)" % (self.encode(),)

    @property
    def m(self):
        return sum(1 for k, _ in self.flags if k == OUT)

    @property
    def n(self):
        return sum(1 for k, _ in self.flags if k == IN)

    @property
    def arity(self):
        return (self.m, self.n)

    def word(self):
        """The underlying {o,i} pattern of the canonical rotation."""
        return tuple(k for k, _ in self.flags)

    def out_labels(self):
        return [l for k, l in self.flags if k == OUT]

    def in_labels(self):
        return [l for k, l in self.flags if k == IN]

    def position(self, flag):
        return self.flags.index(flag)

    def rotated(self, start):
        """The raw flag tuple starting at the given position."""
        return self.flags[start:] + self.flags[:start]

    def relabel(self, out_map=None, in_map=None):
        out_map = out_map or {}
        in_map = in_map or {}
        flags = []
        for k, l in self.flags:
            if k == OUT:
                flags.append((OUT, out_map.get(l, l)))
            else:
                flags.append((IN, in_map.get(l, l)))
        return CyclicClass(flags)

    def act(self, pi, sigma):
        """Apply (pi, sigma): output label t -> pi(t), input label l -> sigma^-1(l)."""
        sinv = symm.inverse(sigma)
        return self.relabel(out_map={t: pi[t - 1] for t in range(1, len(pi) + 1)},
                            in_map={l: sinv[l - 1] for l in range(1, len(sigma) + 1)})

    def encode(self):
        """Stable textual form: flags in canonical position order, e.g. "o1 i1 o2"."""
        return " ".join("%s%s" % (k, l) for k, l in self.flags)

    def is_numeric(self):
        outs = sorted(self.out_labels())
        ins = sorted(self.in_labels())
        return outs == list(range(1, len(outs) + 1)) and ins == list(range(1, len(ins) + 1))

    def gamma_form(self):
        """Write a numeric class as (pi, sigma) acting on the canonically labeled
        class of the same word; returns (gamma_class, pi, sigma)."""
        assert self.is_numeric()
        out_seq = self.out_labels()
        in_seq = self.in_labels()
        gamma = canonical_class_of_word(self.word())
        # at each position, gamma's label u corresponds to our label t
        pi = [0] * len(out_seq)
        for u, t in enumerate(out_seq, start=1):
            pi[u - 1] = t
        sigma = [0] * len(in_seq)
        for u, t in enumerate(in_seq, start=1):
            sigma[t - 1] = u
        return gamma, tuple(pi), tuple(sigma)


def parse_class(text):
    """Inverse of CyclicClass.encode for numeric labels."""
    flags = []
    for tok in text.split():
        kind, label = tok[0], tok[1:]
        if kind not in (OUT, IN):
            raise ValueError("bad flag %r" % tok)
        flags.append((kind, int(label)))
    return CyclicClass(flags)


def canonical_class_of_word(word):
    """The class of the given {o,i} pattern with labels increasing along positions.

    The pattern must start with an output; this is the labeling carried by
    the generating operations built from iterated products and co-inner
    products.
    """
    assert word[0] == OUT
    flags = []
    o = i = 0
    for k in word:
        if k == OUT:
            o += 1
            flags.append((OUT, o))
        else:
            i += 1
            flags.append((IN, i))
    return CyclicClass(flags)


def valid_arity(m, n):
    return m >= 1 and n >= 0 and (m, n) not in ((1, 0), (1, 1))


def enumerate_classes(m, n):
    """All numeric classes with m outputs and n inputs, canonically rotated."""
    if not valid_arity(m, n):
        raise ValueError("arity (%d, %d) is not allowed" % (m, n))
    L = m + n
    from itertools import combinations, permutations
    out = []
    # anchor output 1 at position 0; distribute the rest freely
    for opos in combinations(range(1, L), m - 1):
        opos = (0,) + opos
        ipos = [p for p in range(L) if p not in opos]
        for operm in permutations(range(2, m + 1)):
            for iperm in permutations(range(1, n + 1)):
                flags = [None] * L
                flags[0] = (OUT, 1)
                for p, lab in zip(opos[1:], operm):
                    flags[p] = (OUT, lab)
                for p, lab in zip(ipos, iperm):
                    flags[p] = (IN, lab)
                out.append(CyclicClass(flags))
    assert len(set(out)) == len(out)
    return out


def glue(rho, y, rho2, x):
    """Compose rho at input label y with rho2 at output label x (numeric labels).

    Returns the composite class with the order-preserving relabelling:
    outputs of rho shift up by x-1; outputs of rho2 above x shift up by
    m1-1; inputs of rho above y shift up by n2-1; inputs of rho2 shift up
    by y-1.
    """
    m1, n1 = rho.arity
    m2, n2 = rho2.arity
    m, n = m1 + m2 - 1, n1 + n2 - 1
    if not valid_arity(m, n):
        raise ValueError("composite arity (%d, %d) is not allowed" % (m, n))
    p = rho.position((IN, y))
    q = rho2.position((OUT, x))
    arc_a = rho.rotated((p + 1) % len(rho))[:-1]
    arc_b = rho2.rotated(q)[1:]
    flags = []
    for k, l in arc_a:
        if k == OUT:
            flags.append((OUT, l + x - 1))
        else:
            flags.append((IN, l if l < y else l + n2 - 1))
    for k, l in arc_b:
        if k == OUT:
            flags.append((OUT, l if l < x else l + m1 - 1))
        else:
            flags.append((IN, l + y - 1))
    return CyclicClass(flags)


def glue_sets(rho, y_flag, rho2, x_flag):
    """Set-labeled composition: drop the matched input/output flags and
    concatenate the two cut-open arcs."""
    p = rho.position(y_flag)
    q = rho2.position(x_flag)
    arc_a = rho.rotated((p + 1) % len(rho))[:-1]
    arc_b = rho2.rotated(q)[1:]
    return CyclicClass(arc_a + arc_b)


def _arc_split(flags, start, length):
    L = len(flags)
    arc_b = tuple(flags[(start + t) % L] for t in range(length))
    arc_a = tuple(flags[(start + length + t) % L] for t in range(L - length))
    return arc_a, arc_b


def cuts_sets(rho, edge):
    """All ways to break the class into two set-labeled classes joined along
    a new edge flag; one record per split, arities restricted to the
    allowed set.  Returns (lower, upper) pairs: lower carries (i, edge),
    upper carries (o, edge)."""
    L = len(rho)
    out = []
    for start in range(L):
        for length in range(1, L):
            arc_a, arc_b = _arc_split(rho.flags, start, length)
            m1 = sum(1 for k, _ in arc_a if k == OUT)
            n1 = sum(1 for k, _ in arc_a if k == IN) + 1
            m2 = sum(1 for k, _ in arc_b if k == OUT) + 1
            n2 = sum(1 for k, _ in arc_b if k == IN)
            if not (valid_arity(m1, n1) and valid_arity(m2, n2)):
                continue
            lower = CyclicClass(arc_a + ((IN, edge),))
            upper = CyclicClass(((OUT, edge),) + arc_b)
            out.append((lower, upper))
    return out


def cuts(rho):
    """All pairs (rho1, i, rho2, j) of numeric classes with glue(rho1, i, rho2, j) == rho.

    A split of the circle into arcs A (lower factor) and B (upper factor)
    admits numeric labels exactly when A's output labels and B's input
    labels form contiguous runs; when the upper factor has no inputs the
    new input of the lower factor is put in the last slot.
    """
    L = len(rho)
    records = []
    seen = set()
    for start in range(L):
        for length in range(1, L):
            arc_a, arc_b = _arc_split(rho.flags, start, length)
            a_outs = sorted(l for k, l in arc_a if k == OUT)
            a_ins = sorted(l for k, l in arc_a if k == IN)
            b_outs = sorted(l for k, l in arc_b if k == OUT)
            b_ins = sorted(l for k, l in arc_b if k == IN)
            m1, n1 = len(a_outs), len(a_ins) + 1
            m2, n2 = len(b_outs) + 1, len(b_ins)
            if not (valid_arity(m1, n1) and valid_arity(m2, n2)):
                continue
            if a_outs and a_outs != list(range(a_outs[0], a_outs[0] + m1)):
                continue
            if not a_outs:
                continue
            j = a_outs[0]
            if b_ins:
                if b_ins != list(range(b_ins[0], b_ins[0] + n2)):
                    continue
                i = b_ins[0]
            else:
                i = n1
            flags1 = []
            for k, l in arc_a:
                if k == OUT:
                    flags1.append((OUT, l - j + 1))
                else:
                    flags1.append((IN, l if l < i else l - n2 + 1))
            flags1.append((IN, i))
            rho1 = CyclicClass(flags1)
            flags2 = [(OUT, j)]
            for k, l in arc_b:
                if k == OUT:
                    flags2.append((OUT, l if l < j else l - m1 + 1))
                else:
                    flags2.append((IN, l - i + 1))
            rho2 = CyclicClass(flags2)
            rec = (rho1, i, rho2, j)
            if rec not in seen:
                seen.add(rec)
                records.append(rec)
    return records


def find_action(src, dst):
    """A pair (pi, sigma) with src.act(pi, sigma) == dst, or None.

    Both classes must be numeric of the same arity; any representative of
    the (possibly nontrivial) coset is returned.
    """
    if src.arity != dst.arity or src.word() != dst.word():
        # the canonical rotations of equal words coincide only up to
        # label placement; scan all rotations of src against dst
        pass
    m, n = dst.arity
    L = len(dst)
    dflags = dst.flags
    for start in range(L):
        rot = src.rotated(start)
        if tuple(k for k, _ in rot) != tuple(k for k, _ in dflags):
            continue
        pi = [0] * m
        sigma_inv = [0] * n
        for (k, l_src), (_, l_dst) in zip(rot, dflags):
            if k == OUT:
                pi[l_src - 1] = l_dst
            else:
                sigma_inv[l_src - 1] = l_dst
        pi = tuple(pi)
        sigma = symm.inverse(tuple(sigma_inv))
        if src.act(pi, sigma) == dst:
            return pi, sigma
    return None


def boundary_decompositions(rho):
    """One-edge decompositions of a numeric class, in the normal form used by
    the homotopy-algebra boundary condition.

    Each record is (g1, i, g2, j, pi, sigma) where g1, g2 are canonically
    labeled classes and glue(g1, i, g2, j).act(pi, sigma) == rho.
    """
    records = []
    for start in range(len(rho)):
        for length in range(1, len(rho)):
            arc_a, arc_b = _arc_split(rho.flags, start, length)
            m1 = sum(1 for k, _ in arc_a if k == OUT)
            n1 = sum(1 for k, _ in arc_a if k == IN) + 1
            m2 = sum(1 for k, _ in arc_b if k == OUT) + 1
            n2 = sum(1 for k, _ in arc_b if k == IN)
            if not (valid_arity(m1, n1) and valid_arity(m2, n2)):
                continue
            edge = ("edge",)
            lower = CyclicClass(arc_a + ((IN, edge),))
            upper = CyclicClass(((OUT, edge),) + arc_b)
            g1, i = _gamma_label_setclass(lower, (IN, edge))
            g2, j = _gamma_label_setclass(upper, (OUT, edge))
            glued = glue(g1, i, g2, j)
            act = find_action(glued, rho)
            assert act is not None, "decomposition does not recompose"
            pi, sigma = act
            records.append((g1, i, g2, j, pi, sigma))
    return records


def _gamma_label_setclass(cls, edge_flag):
    """Relabel a set-labeled class positionally (outputs 1..m and inputs 1..n
    in canonical position order); returns the numeric class and the numeric
    label of the given flag."""
    flags = []
    o = i = 0
    edge_num = None
    for k, l in cls.flags:
        if k == OUT:
            o += 1
            num = o
        else:
            i += 1
            num = i
        if (k, l) == edge_flag:
            edge_num = num
        flags.append((k, num))
    assert edge_num is not None
    out = CyclicClass(flags)
    assert out.flags == tuple(flags), "positional labeling must already be canonical"
    return out, edge_num

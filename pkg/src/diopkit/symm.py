"""Symmetric groups, block permutations, and partial composition.

Permutations are stored one-indexed as tuples of images: p[k-1] is the
image of k.  The empty tuple is the unique element of S_0, whose sign is
+1.  Partial composition sigma1 o_i sigma2 follows the block-permutation
recipe for n2 >= 1 and the delete-and-relabel recipe for n2 = 0, and
satisfies sgn(s1 o_i s2) = sgn(s1) sgn(s2) (-1)^((i - s1(i))(n2 - 1)).
"""

from __future__ import annotations

from itertools import permutations as _all_perms


def identity(n):
    return tuple(range(1, n + 1))


def is_permutation(p):
    return sorted(p) == list(range(1, len(p) + 1))


def compose(p, q):
    """(p o q)(k) = p(q(k)); p and q must have equal length."""
    assert len(p) == len(q)
    return tuple(p[q[k] - 1] for k in range(len(p)))


def inverse(p):
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v - 1] = k + 1
    return tuple(inv)


def sign(p):
    """Sign of a permutation; +1 for the empty permutation in S_0."""
    seen = [False] * len(p)
    sgn = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = p[k] - 1
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def all_permutations(n):
    return [tuple(p) for p in _all_perms(range(1, n + 1))]


def block_permutation(sigma, block_sizes):
    """The permutation of sum(block_sizes) letters moving whole blocks as sigma.

    Block t (of size block_sizes[t-1]) lands in slot sigma(t); letters
    inside a block keep their relative order.
    """
    n = len(sigma)
    if len(block_sizes) != n:
        raise ValueError("need one block size per letter of sigma")
    if any(s < 0 for s in block_sizes):
        raise ValueError("block sizes must be nonnegative")
    src_offset = [0] * n
    for t in range(1, n):
        src_offset[t] = src_offset[t - 1] + block_sizes[t - 1]
    inv = inverse(sigma)
    # offset of output slot s is the total size of blocks in earlier slots
    dst_offset = [0] * n
    run = 0
    for s in range(n):
        dst_offset[s] = run
        run += block_sizes[inv[s] - 1]
    images = [0] * sum(block_sizes)
    for t in range(n):
        for r in range(block_sizes[t]):
            images[src_offset[t] + r] = dst_offset[sigma[t] - 1] + r + 1
    return tuple(images)


def partial_compose(sigma1, i, sigma2):
    """sigma1 o_i sigma2 in S_(n1+n2-1); sigma2 may be empty (S_0)."""
    n1, n2 = len(sigma1), len(sigma2)
    if n1 < 1 or not 1 <= i <= n1:
        raise ValueError("composition slot out of range")
    if n2 == 0:
        # delete slot i, relabel: rhobar_{sigma1(i)} . sigma1 . rho_i
        j = sigma1[i - 1]
        images = []
        for k in range(1, n1):
            kk = k if k < i else k + 1
            v = sigma1[kk - 1]
            images.append(v if v < j else v - 1)
        return tuple(images)
    sizes = [1] * n1
    sizes[i - 1] = n2
    outer = block_permutation(sigma1, sizes)
    inner = list(range(1, n1 + n2))
    for k in range(n2):
        inner[i - 1 + k] = i - 1 + sigma2[k]
    return compose(outer, tuple(inner))


def reorder_sign(current, target, degree):
    """Koszul sign for reordering graded symbols from current to target order.

    current and target are sequences of distinct hashable ids, equal as
    sets; degree maps each id to its integer degree.  The sign is the
    parity of odd-odd crossings.
    """
    pos = {x: k for k, x in enumerate(target)}
    perm = [pos[x] for x in current]
    odd = [degree(x) % 2 for x in current]
    sgn = 1
    # count inversions among odd-degree symbols only
    for a in range(len(perm)):
        if not odd[a]:
            continue
        for b in range(a + 1, len(perm)):
            if odd[b] and perm[a] > perm[b]:
                sgn = -sgn
    return sgn

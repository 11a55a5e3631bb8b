"""Finite posets, monotone maps, layerings, and canonical forms.

Labels are strings.  A FinPoset stores the full reflexive-transitive
closure of its order, so equality and restriction are set operations.
Pullbacks of convex maps are realized as literal subset restrictions;
this is what makes the simplicial identities in decomp hold on the nose.
"""

import hashlib
import json
from dataclasses import dataclass
from itertools import product

from . import _kernel
from .simplex import UlDeltaMap, is_convex_ul

#: canonical forms are certified (by the exhaustive tests) up to this size
MAX_CANONICAL_SIZE = 10


class PosetError(ValueError):
    pass


class FinPoset:
    """An immutable finite poset: sorted label tuple plus closed relation."""

    __slots__ = ("elements", "leq", "_idx", "_hash", "_key")

    def __init__(self, elements, leq):
        elements = tuple(sorted(elements))
        if len(set(elements)) != len(elements):
            raise PosetError("duplicate labels")
        idx = {e: i for i, e in enumerate(elements)}
        rel = set()
        for a, b in leq:
            if a not in idx or b not in idx:
                raise PosetError("relation mentions unknown label %r" % ((a, b),))
            rel.add((a, b))
        for e in elements:
            rel.add((e, e))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c in elements:
                    if (b, c) in rel and (a, c) not in rel:
                        rel.add((a, c))
                        changed = True
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise PosetError("cycle through %r and %r" % (a, b))
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "leq", frozenset(rel))
        object.__setattr__(self, "_idx", idx)
        object.__setattr__(self, "_hash", hash((elements, frozenset(rel))))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, *a):
        raise AttributeError("FinPoset is immutable")

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, FinPoset) and self.elements == other.elements \
            and self.leq == other.leq

    def __hash__(self):
        return self._hash

    def __repr__(self):
        strict = sorted((a, b) for a, b in self.leq if a != b)
        return "FinPoset(%s, %s)" % (list(self.elements), strict)

    def le(self, a, b):
        return (a, b) in self.leq

    def index(self, label):
        return self._idx[label]

    def matrix(self):
        """The order as a 0/1 matrix over the sorted element order."""
        els = self.elements
        return tuple(tuple(1 if (a, b) in self.leq else 0 for b in els) for a in els)

    def is_discrete(self):
        return all(a == b for a, b in self.leq)

    def to_json(self):
        strict = sorted((a, b) for a, b in self.leq if a != b)
        return {"elements": list(self.elements), "leq": [list(p) for p in strict]}


def make_poset(elements, pairs):
    """Build a FinPoset from cover or order pairs (closure is computed)."""
    return FinPoset(elements, pairs)


def poset_from_json(data):
    if not isinstance(data, dict) or "elements" not in data:
        raise PosetError("poset JSON needs an 'elements' list")
    return FinPoset(data["elements"], [tuple(p) for p in data.get("leq", [])])


EMPTY_POSET = FinPoset((), ())


@dataclass(frozen=True)
class PosetMap:
    """A monotone map between finite posets."""

    domain: FinPoset
    codomain: FinPoset
    assignment: tuple  # pairs (label, image-label), sorted

    def __post_init__(self):
        amap = dict(self.assignment)
        if set(amap) != set(self.domain.elements):
            raise PosetError("assignment must cover the domain")
        for v in amap.values():
            if v not in self.codomain._idx:
                raise PosetError("image label %r not in codomain" % (v,))
        for a, b in self.domain.leq:
            if not self.codomain.le(amap[a], amap[b]):
                raise PosetError("map is not monotone at (%r, %r)" % (a, b))

    @staticmethod
    def make(domain, codomain, mapping):
        return PosetMap(domain, codomain, tuple(sorted(mapping.items())))

    def __call__(self, label):
        return dict(self.assignment)[label]


# ---------------------------------------------------------------------------
# subsets

def _check_subset(P, K):
    K = frozenset(K)
    for x in K:
        if x not in P._idx:
            raise PosetError("unknown label %r" % (x,))
    return K


def convexity_violation(P, K):
    """A triple (a, x, b) with a <= x <= b, a and b in K but x not, or None."""
    K = _check_subset(P, K)
    for a in K:
        for b in K:
            if not P.le(a, b):
                continue
            for x in P.elements:
                if x not in K and P.le(a, x) and P.le(x, b):
                    return (a, x, b)
    return None


def is_convex_subset(P, K):
    return convexity_violation(P, K) is None


def is_lower_set(P, K):
    K = _check_subset(P, K)
    return all(x in K for b in K for x in P.elements if P.le(x, b))


def is_upper_set(P, K):
    K = _check_subset(P, K)
    return all(x in K for a in K for x in P.elements if P.le(a, x))


def restrict(P, K):
    """The full induced subposet on K."""
    K = _check_subset(P, K)
    return FinPoset(K, [(a, b) for a, b in P.leq if a in K and b in K])


def disjoint_union(P, Q):
    """Coproduct poset; labels are namespaced with 'L.'/'R.' tags."""
    els = ["L." + x for x in P.elements] + ["R." + x for x in Q.elements]
    rel = [("L." + a, "L." + b) for a, b in P.leq] \
        + [("R." + a, "R." + b) for a, b in Q.leq]
    return FinPoset(els, rel)


# ---------------------------------------------------------------------------
# layerings

class Layering:
    """A monotone map from a carrier poset to underline-n, stored as the
    tuple of levels over the carrier's sorted element order."""

    __slots__ = ("poset", "n", "levels", "_hash")

    def __init__(self, poset, n, level):
        if isinstance(level, dict):
            levels = tuple(level[e] for e in poset.elements)
        else:
            levels = tuple(level)
        if len(levels) != len(poset):
            raise PosetError("level must cover the carrier")
        if any(not 1 <= v <= n for v in levels):
            raise PosetError("levels must lie in 1..n")
        for a, b in poset.leq:
            if levels[poset.index(a)] > levels[poset.index(b)]:
                raise PosetError("layering is not monotone at (%r, %r)" % (a, b))
        object.__setattr__(self, "poset", poset)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "_hash", hash((poset, n, levels)))

    def __setattr__(self, *a):
        raise AttributeError("Layering is immutable")

    def __eq__(self, other):
        return isinstance(other, Layering) and self.poset == other.poset \
            and self.n == other.n and self.levels == other.levels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Layering(%r, n=%d, %s)" % (list(self.poset.elements), self.n, list(self.levels))

    def level(self, label):
        return self.levels[self.poset.index(label)]

    def layer(self, i):
        """The set of labels in layer i."""
        return frozenset(e for e, v in zip(self.poset.elements, self.levels) if v == i)

    def layers(self):
        return [self.layer(i) for i in range(1, self.n + 1)]

    def has_empty_layer(self):
        present = set(self.levels)
        return any(i not in present for i in range(1, self.n + 1))

    def to_json(self):
        data = self.poset.to_json()
        data["level"] = {e: v for e, v in zip(self.poset.elements, self.levels)}
        data["n"] = self.n
        return data


def enumerate_layerings(P, n):
    """All monotone maps P -> underline-n with their fibre decompositions."""
    if n < 0:
        raise PosetError("n must be >= 0")
    if len(P) == 0:
        return [Layering(P, n, ())]
    if n == 0:
        return []
    out = []
    for levels in product(range(1, n + 1), repeat=len(P)):
        ok = True
        for a, b in P.leq:
            if levels[P.index(a)] > levels[P.index(b)]:
                ok = False
                break
        if ok:
            out.append(Layering(P, n, levels))
    return out


def push_layering(L, g):
    """Postcompose with g: underline-n -> underline-m (generic operators)."""
    if not isinstance(g, UlDeltaMap) or g.source != L.n:
        raise PosetError("arity mismatch: layering has %d layers" % L.n)
    return Layering(L.poset, g.target, tuple(g.values[v - 1] for v in L.levels))


def pull_layering(L, i):
    """Restrict along a convex i: underline-k >-> underline-n (free operators).

    The carrier becomes the literal subset of labels whose level lies in
    the image of i, with levels renumbered through i."""
    if not isinstance(i, UlDeltaMap) or i.target != L.n:
        raise PosetError("arity mismatch: layering has %d layers" % L.n)
    if not is_convex_ul(i):
        raise PosetError("pull_layering needs a convex map")
    a = (i.values[0] - 1) if i.source else 0
    keep = [e for e, v in zip(L.poset.elements, L.levels) if a + 1 <= v <= a + i.source]
    sub = restrict(L.poset, keep)
    return Layering(sub, i.source, tuple(L.levels[L.poset.index(e)] - a for e in sub.elements))


# ---------------------------------------------------------------------------
# isomorphism and canonical forms (kernel-backed)

def _check_size(P):
    if len(P) > MAX_CANONICAL_SIZE:
        raise PosetError("poset size %d exceeds certified bound %d"
                         % (len(P), MAX_CANONICAL_SIZE))


def isomorphisms(P, Q, colors_p=None, colors_q=None, extra_p=(), extra_q=()):
    """All order isomorphisms P -> Q as label dicts; optional vertex colors
    and extra relation matrices refine the notion of isomorphism."""
    _check_size(P)
    _check_size(Q)
    cp = tuple(colors_p) if colors_p is not None else (0,) * len(P)
    cq = tuple(colors_q) if colors_q is not None else (0,) * len(Q)
    perms = _kernel.isomorphisms(cp, (P.matrix(),) + tuple(extra_p),
                                 cq, (Q.matrix(),) + tuple(extra_q))
    return [{P.elements[i]: Q.elements[m[i]] for i in range(len(P))} for m in perms]


def automorphism_count(P):
    _check_size(P)
    _, count, _, _ = _kernel.canonical_form(len(P), (0,) * len(P), (P.matrix(),))
    return count


def digest_key(tag, payload):
    """A stable hex key with a tag prefix, for canonical forms."""
    blob = repr(payload).encode()
    return tag + ":" + hashlib.sha256(blob).hexdigest()[:24]


def canonical_key(P):
    """Equal keys iff isomorphic posets (within the certified size range)."""
    if P._key is not None:
        return P._key
    _check_size(P)
    _, _, colors, rels = _kernel.canonical_form(len(P), (0,) * len(P), (P.matrix(),))
    key = digest_key("poset", (len(P), colors, rels))
    object.__setattr__(P, "_key", key)
    return key


def all_posets_on(labels):
    """All partial orders on a fixed label set (brute force; tiny sizes)."""
    labels = tuple(sorted(labels))
    n = len(labels)
    strict_pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n) if i != j]
    out = []
    for mask in range(1 << len(strict_pairs)):
        rel = [strict_pairs[t] for t in range(len(strict_pairs)) if mask >> t & 1]
        relset = set(rel)
        # antisymmetry and transitivity checked directly; skip closures
        if any((b, a) in relset for a, b in rel):
            continue
        ok = True
        for a, b in rel:
            for c, d in rel:
                if b == c and (a, d) not in relset:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(FinPoset(labels, rel))
    return out

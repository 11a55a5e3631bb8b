"""Truncated simplicial groupoids of layered structures, and the checkers.

build() assembles the levels X_0..X_N for a species: X_k is the groupoid
of structures (within bounds) with a k-layering of the carrier.  Carriers
are posets on subsets of a fixed label universe and the free (outer-type)
face maps restrict to literal subsets, so all simplicial identities hold
on the nose and the free maps are iso-fibrations; homotopy-pullback
verdicts on the strict squares are then meaningful.

The checkers cover: strict simplicial identities, the decomposition-space
axiom (one homotopy-pullback verdict per identity-extension square within
corner bounds), the Segal condition, CULF-ness of simplicial maps,
completeness/finiteness/discreteness/length, decalage against fat nerves,
and the CULF monoidal structure.
"""

from dataclasses import dataclass, field
from itertools import combinations

from . import _kernel
from .groupoid import (FinGroupoid, GroupoidFunctor, GroupoidSquare, Mor,
                       ProductGroupoid, compose_functors, fibre, functors_equal,
                       is_discrete, is_equivalence, is_homotopy_pullback,
                       is_mono_up_to_equiv)
from .poset import (FinPoset, Layering, all_posets_on, digest_key,
                    enumerate_layerings, restrict)
from .simplex import (DeltaMap, UlDeltaMap, enumerate_iesq_within_corners,
                      free_to_convex, generic_free_factorize, is_convex_ul,
                      joyal_dual)
from .species import Structure, get_species

DEFAULT_LEVEL_CAP = 200_000


class BuildSizeError(RuntimeError):
    pass


def universe_labels(n):
    return tuple("e%02d" % i for i in range(n))


@dataclass(frozen=True)
class LayeredStructure:
    """A structure plus an n-layering, stored over the carrier's sorted
    element order.  Empty layers are allowed; n is part of the data."""

    structure: Structure
    n: int
    levels: tuple

    def carrier(self):
        return self.structure.carrier

    def layering(self):
        return Layering(self.structure.carrier, self.n, self.levels)

    def has_empty_layer(self):
        present = set(self.levels)
        return any(i not in present for i in range(1, self.n + 1))

    def key(self):
        size = len(self.structure.carrier)
        _, _, colors, rels = _kernel.canonical_form(size, self.levels,
                                                    self.structure.rels())
        return digest_key(self.structure.species.tag + ".lay",
                          (self.n, size, colors, rels))

    def __repr__(self):
        return "Layered(%r, n=%d, levels=%s)" % (self.structure, self.n,
                                                 list(self.levels))


class LevelGroupoid(FinGroupoid):
    """One level X_k: layered structures with all layer-preserving
    structure isomorphisms.  Morphism data is a position map between the
    sorted carriers."""

    def __init__(self, objects, k):
        self.k = k
        self._objs = list(objects)
        self._keys = {}

    def objects(self):
        return self._objs

    def invariant(self, x):
        key = self._keys.get(x)
        if key is None:
            key = x.key()
            self._keys[x] = key
        return key

    def hom(self, x, y):
        if x.n != y.n:
            return []
        perms = _kernel.isomorphisms(x.levels, x.structure.rels(),
                                     y.levels, y.structure.rels())
        return [Mor(x, y, p) for p in perms]

    def identity(self, x):
        return Mor(x, x, tuple(range(len(x.levels))))

    def compose(self, g, f):
        if f.dst != g.src:
            raise ValueError("morphisms not composable")
        return Mor(f.src, g.dst, tuple(g.data[i] for i in f.data))

    def invert(self, f):
        inv = [0] * len(f.data)
        for i, j in enumerate(f.data):
            inv[j] = i
        return Mor(f.dst, f.src, tuple(inv))


def _memoized_functor(dom, cod, obj_fn, mor_data_fn, name):
    cache = {}

    def omap(x):
        y = cache.get(x)
        if y is None:
            y = obj_fn(x)
            cache[x] = y
        return y

    def mmap(m):
        return Mor(omap(m.src), omap(m.dst), mor_data_fn(m))

    return GroupoidFunctor(dom, cod, omap, mmap, name)


class Truncation:
    """A truncated simplicial groupoid: levels X_0..X_N plus the face and
    degeneracy functors, all strict."""

    def __init__(self, species, N, levels, size_bound, dec_bound, universe):
        self.species = species
        self.N = N
        self.levels = levels
        self.size_bound = size_bound
        self.dec_bound = dec_bound
        self.universe = universe
        self._ops = {}

    # -- operator builders --------------------------------------------------

    def generic_op(self, f):
        """f_! for f: underline-m -> underline-k (postcompose the layering)."""
        key = ("gen", f.source, f.target, f.values)
        if key in self._ops:
            return self._ops[key]
        dom, cod = self.levels[f.source], self.levels[f.target]

        def obj(x):
            return LayeredStructure(x.structure, f.target,
                                    tuple(f.values[v - 1] for v in x.levels))

        F = _memoized_functor(dom, cod, obj, lambda m: m.data,
                              "gen[%s:%d->%d]" % (list(f.values), f.source, f.target))
        self._ops[key] = F
        return F

    def free_op(self, i):
        """i^* for convex i: underline-k >-> underline-m (restrict to the
        layers in the image of i, relabelling through i)."""
        if not is_convex_ul(i):
            raise ValueError("free operators need a convex map")
        key = ("free", i.source, i.target, i.values)
        if key in self._ops:
            return self._ops[key]
        dom, cod = self.levels[i.target], self.levels[i.source]
        a = (i.values[0] - 1) if i.source else 0
        k = i.source

        def kept(x):
            return [p for p, lv in enumerate(x.levels) if a + 1 <= lv <= a + k]

        def obj(x):
            pos = kept(x)
            els = [x.structure.carrier.elements[p] for p in pos]
            sub = restrict_structure_cached(x.structure, tuple(els))
            return LayeredStructure(sub, k, tuple(x.levels[p] - a for p in pos))

        def mor_data(m):
            src_pos = kept(m.src)
            dst_pos = kept(m.dst)
            dst_index = {p: q for q, p in enumerate(dst_pos)}
            return tuple(dst_index[m.data[p]] for p in src_pos)

        F = _memoized_functor(dom, cod, obj, mor_data,
                              "free[%s:%d>->%d]" % (list(i.values), i.source, i.target))
        self._ops[key] = F
        return F

    def delta_op(self, dmap):
        """X(dmap) for any dmap: [m] -> [n] in Delta, via the unique
        generic-free factorization."""
        gen, fr = generic_free_factorize(dmap)
        F = self.free_op(free_to_convex(fr))
        if gen.source == gen.target and gen.values == tuple(range(gen.source + 1)):
            return F
        G = self.generic_op(joyal_dual(gen))
        return compose_functors(G, F, "X(%s)" % (list(dmap.values),))

    def face(self, n, i):
        """d_i: X_n -> X_{n-1}."""
        if not (0 <= i <= n <= self.N and n >= 1):
            raise ValueError("face out of range")
        return self.delta_op(DeltaMap.d(i, n - 1))

    def degeneracy(self, n, i):
        """s_i: X_n -> X_{n+1}."""
        if not (0 <= i <= n and n + 1 <= self.N):
            raise ValueError("degeneracy out of range")
        return self.delta_op(DeltaMap.s(i, n))

    def level_sizes(self):
        return [len(L.objects()) for L in self.levels]


_RESTRICT_CACHE = {}


def restrict_structure_cached(structure, els):
    key = (structure, els)
    out = _RESTRICT_CACHE.get(key)
    if out is None:
        sub = restrict(structure.carrier, els)
        dec = structure.species.restrict_dec(structure.carrier, structure.dec, els)
        out = Structure(structure.species, sub, dec)
        _RESTRICT_CACHE[key] = out
    return out


def build(species, N, size_bound, dec_bound=None, level_cap=DEFAULT_LEVEL_CAP):
    """Assemble the truncation X_0..X_N for a species within bounds."""
    if isinstance(species, str):
        species = get_species(species)
    if N < 0 or size_bound < 0:
        raise ValueError("bounds must be non-negative")
    universe = universe_labels(size_bound)
    carriers = []
    for r in range(size_bound + 1):
        for subset in combinations(universe, r):
            if species.ordinary:
                carriers.append(FinPoset(subset, []))
            else:
                carriers.extend(all_posets_on(subset))
    structures = []
    for carrier in carriers:
        for dec in species.decorations(carrier, dec_bound):
            structures.append(Structure(species, carrier, dec))

    estimate = sum((n ** len(s.carrier) if len(s.carrier) else 1)
                   for s in structures for n in range(N + 1))
    if estimate > level_cap:
        raise BuildSizeError("estimated %d level objects exceeds cap %d"
                             % (estimate, level_cap))

    levels = []
    for k in range(N + 1):
        objs = []
        for s in structures:
            for lay in enumerate_layerings(s.carrier, k):
                objs.append(LayeredStructure(s, k, lay.levels))
        levels.append(LevelGroupoid(objs, k))
    return Truncation(species, N, levels, size_bound, dec_bound, universe)


# ---------------------------------------------------------------------------
# reports

@dataclass
class AxiomReport:
    name: str
    entries: list = field(default_factory=list)

    def add(self, square, verdict, witness=None):
        self.entries.append({"square": square, "verdict": verdict,
                             "witness": witness})

    @property
    def failures(self):
        return [e for e in self.entries if e["verdict"] == "fail"]

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "entries": self.entries}

    def __repr__(self):
        return "AxiomReport(%s: %d entries, %s)" % (
            self.name, len(self.entries), "ok" if self.ok else "FAIL")


# ---------------------------------------------------------------------------
# simplicial identities

def check_simplicial_identities(T):
    """All identities d_i d_j, s_i s_j, d_i s_j strictly, on objects and on
    generating morphisms, at every level of the truncation.  The outer-face
    families (both indices at the boundary) are instances of these."""
    report = AxiomReport("simplicial-identities")
    N = T.N

    def eq(name, F, G):
        report.add(name, "pass" if functors_equal(F, G) else "fail")

    for n in range(2, N + 1):
        for j in range(1, n + 1):
            for i in range(j):
                # d_i d_j = d_{j-1} d_i : X_n -> X_{n-2}
                lhs = compose_functors(T.face(n - 1, i), T.face(n, j))
                rhs = compose_functors(T.face(n - 1, j - 1), T.face(n, i))
                eq("d%d.d%d=d%d.d%d@X%d" % (i, j, j - 1, i, n), lhs, rhs)
    for n in range(0, N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                # s_i s_j = s_{j+1} s_i : X_n -> X_{n+2}
                lhs = compose_functors(T.degeneracy(n + 1, i), T.degeneracy(n, j))
                rhs = compose_functors(T.degeneracy(n + 1, j + 1), T.degeneracy(n, i))
                eq("s%d.s%d=s%d.s%d@X%d" % (i, j, j + 1, i, n), lhs, rhs)
    for n in range(0, N):
        for j in range(n + 1):
            for i in range(n + 2):
                # d_i s_j : X_n -> X_n
                lhs = compose_functors(T.face(n + 1, i), T.degeneracy(n, j))
                if i == j or i == j + 1:
                    ident = GroupoidFunctor(T.levels[n], T.levels[n],
                                            lambda x: x, lambda m: m, "id")
                    eq("d%d.s%d=id@X%d" % (i, j, n), lhs, ident)
                elif i < j:
                    rhs = compose_functors(T.degeneracy(n - 1, j - 1), T.face(n, i))
                    eq("d%d.s%d=s%d.d%d@X%d" % (i, j, j - 1, i, n), lhs, rhs)
                else:
                    rhs = compose_functors(T.degeneracy(n - 1, j), T.face(n, i - 1))
                    eq("d%d.s%d=s%d.d%d@X%d" % (i, j, j, i - 1, n), lhs, rhs)
    return report


# ---------------------------------------------------------------------------
# the decomposition-space axiom

def _iesq_square(T, sq):
    """The groupoid square a truncation assigns to an iesq square."""
    apex = T.levels[sq.a + sq.n + sq.b]
    top = T.free_op(sq.j)          # X_{a+n+b} -> X_n
    left = T.generic_op(sq.g)      # X_{a+n+b} -> X_{a+k+b}
    bottom = T.free_op(sq.i)       # X_{a+k+b} -> X_k
    right = T.generic_op(sq.f)     # X_n -> X_k
    name = "iesq(a=%d,b=%d,f=%s:%d->%d)" % (sq.a, sq.b, list(sq.f.values),
                                            sq.n, sq.k)
    return GroupoidSquare(apex, top, left, bottom, right, name)


def check_decomposition(T, corner_bound=None, include_trivial=True):
    """One homotopy-pullback verdict per generic-free pushout square with
    corners within the bound.  Squares reaching beyond the truncation are
    reported as skipped, never as passed."""
    report = AxiomReport("decomposition-space")
    bound = corner_bound if corner_bound is not None else T.N
    for sq, po in enumerate_iesq_within_corners(bound, include_trivial=include_trivial):
        if max(sq.corners()) > T.N:
            report.add(repr(sq), "skipped", "corner beyond truncation")
            continue
        gsq = _iesq_square(T, sq)
        ok, witness = is_homotopy_pullback(gsq)
        report.add(gsq.name, "pass" if ok else "fail", witness)
    return report


def check_segal(T):
    """The Segal squares (d_0 against d_top) at every level; failures carry
    the equivalence witness."""
    report = AxiomReport("segal")
    for n in range(1, T.N):
        square = GroupoidSquare(
            T.levels[n + 1],
            T.face(n + 1, 0),      # top: X_{n+1} -> X_n
            T.face(n + 1, n + 1),  # left
            T.face(n, 0),          # bottom: X_n -> X_{n-1}
            T.face(n, n),          # right
            "segal@X%d" % (n + 1),
        )
        ok, witness = is_homotopy_pullback(square)
        report.add(square.name, "pass" if ok else "fail", witness)
    return report


# ---------------------------------------------------------------------------
# simplicial maps and CULF

@dataclass
class SimplicialMap:
    """A levelwise functor commuting strictly with faces and degeneracies."""

    dom: Truncation
    cod: Truncation
    maps: list
    name: str = ""

    def validate(self):
        N = min(self.dom.N, self.cod.N)
        for n in range(1, N + 1):
            for i in range(n + 1):
                lhs = compose_functors(self.maps[n - 1], self.dom.face(n, i))
                rhs = compose_functors(self.cod.face(n, i), self.maps[n])
                if not functors_equal(lhs, rhs):
                    raise ValueError("map does not commute with d_%d at level %d" % (i, n))
        for n in range(N):
            for i in range(n + 1):
                lhs = compose_functors(self.maps[n + 1], self.dom.degeneracy(n, i))
                rhs = compose_functors(self.cod.degeneracy(n, i), self.maps[n])
                if not functors_equal(lhs, rhs):
                    raise ValueError("map does not commute with s_%d at level %d" % (i, n))
        return True


def projection_to_base(T, base):
    """The CULF projection forgetting the decoration: ds R -> ds C (or
    ds I for ordinary species), levelwise over a matching build."""
    maps = []
    base_species = base.species
    for k in range(min(T.N, base.N) + 1):
        dom, cod = T.levels[k], base.levels[k]

        def obj(x, _sp=base_species):
            return LayeredStructure(Structure(_sp, x.structure.carrier, ()),
                                    x.n, x.levels)

        maps.append(_memoized_functor(dom, cod, obj, lambda m: m.data,
                                      "proj@X%d" % k))
    return SimplicialMap(T, base, maps, "proj:%s->%s" % (T.species.tag,
                                                         base_species.tag))


def _generic_operators(T):
    """The generic operator generators within the truncation: inner faces
    and all degeneracies (every generic map is a composite of these)."""
    ops = []
    for n in range(2, T.N + 1):
        for i in range(1, n):
            ops.append(("d%d@X%d" % (i, n), n, n - 1, lambda S, n=n, i=i: S.face(n, i)))
    for n in range(0, T.N):
        for i in range(n + 1):
            ops.append(("s%d@X%d" % (i, n), n, n + 1,
                        lambda S, n=n, i=i: S.degeneracy(n, i)))
    return ops


def check_culf(F):
    """Cartesianness of a simplicial map on every generic operator within
    the truncation (verified on the generating operators; pullback squares
    paste along composites)."""
    report = AxiomReport("culf")
    F.validate()
    for name, n, m, op in _generic_operators(F.dom):
        square = GroupoidSquare(
            F.dom.levels[n],
            op(F.dom),       # top: X'_n -> X'_m
            F.maps[n],       # left: X'_n -> X_n
            op(F.cod),       # bottom: X_n -> X_m
            F.maps[m],       # right: X'_m -> X_m
            "culf:%s" % name,
        )
        ok, witness = is_homotopy_pullback(square)
        report.add(square.name, "pass" if ok else "fail", witness)
    return report


# ---------------------------------------------------------------------------
# finiteness suite

def check_finiteness(T):
    """Completeness (s_0 mono), local finiteness and discreteness of the
    s_0- and d_1-fibres, and locally finite length by pigeonhole: above
    n = carrier size every fibre element over X_1 is degenerate."""
    report = AxiomReport("finiteness")
    s0 = T.degeneracy(0, 0)
    ok, witness = is_mono_up_to_equiv(s0)
    report.add("completeness:s0-mono", "pass" if ok else "fail", witness)

    X1 = T.levels[1]
    lf_ok = all(len(cls.aut) >= 1 for cls in X1.classes())
    ld_witness = None
    # fibres of s_0 and d_1 over each X_1 class representative
    fibre_sizes = []
    for cls in X1.classes():
        fb = fibre(s0, cls.rep)
        fibre_sizes.append(len(fb.classes()))
        if not is_discrete(fb):
            ld_witness = {"map": "s0", "over": str(cls.rep)}
    if T.N >= 2:
        d1 = T.face(2, 1)
        for cls in X1.classes():
            fb = fibre(d1, cls.rep)
            fibre_sizes.append(len(fb.classes()))
            if not is_discrete(fb):
                ld_witness = {"map": "d1", "over": str(cls.rep)}
    report.add("locally-finite", "pass" if lf_ok else "fail",
               {"fibre_class_counts": fibre_sizes})
    report.add("locally-discrete", "pass" if ld_witness is None else "fail",
               ld_witness)

    length_witness = None
    for n in range(1, T.N + 1):
        longmap = T.generic_op(UlDeltaMap(n, 1, (1,) * n))
        for cls in X1.classes():
            size = len(cls.rep.structure.carrier)
            if n <= size:
                continue
            fb = fibre(longmap, cls.rep)
            for fcls in fb.classes():
                layered = fcls.rep[0]
                if not layered.has_empty_layer():
                    length_witness = {"over": str(cls.rep), "n": n,
                                      "nondegenerate": str(layered)}
    report.add("locally-finite-length",
               "pass" if length_witness is None else "fail", length_witness)
    return report


# ---------------------------------------------------------------------------
# decalage

class DecTruncation(Truncation):
    """A view of a truncation with the bottom (or top) faces/degeneracies
    deleted and everything shifted one level down."""

    def __init__(self, base, side):
        self.base = base
        self.side = side
        super().__init__(base.species, base.N - 1, base.levels[1:],
                         base.size_bound, base.dec_bound, base.universe)

    def face(self, n, i):
        if self.side == "bot":
            return self.base.face(n + 1, i + 1)
        return self.base.face(n + 1, i)

    def degeneracy(self, n, i):
        if self.side == "bot":
            return self.base.degeneracy(n + 1, i + 1)
        return self.base.degeneracy(n + 1, i)

    def generic_op(self, f):
        raise NotImplementedError("decalage exposes faces and degeneracies")

    free_op = generic_op
    delta_op = generic_op


def dec_bot(T):
    """Lower decalage plus its dec map (the deleted d_0's)."""
    D = DecTruncation(T, "bot")
    maps = [T.face(k + 1, 0) for k in range(T.N)]
    return D, SimplicialMap(D, T, maps, "dec_bot")


def dec_top(T):
    """Upper decalage plus its dec map (the deleted d_top's)."""
    D = DecTruncation(T, "top")
    maps = [T.face(k + 1, k + 1) for k in range(T.N)]
    return D, SimplicialMap(D, T, maps, "dec_top")


# ---------------------------------------------------------------------------
# fat nerves of structure inclusions

@dataclass(frozen=True)
class ChainObject:
    """A structure with a nested chain of subsets of its carrier (the
    cumulative picture of a chain of structure inclusions)."""

    structure: Structure
    subsets: tuple   # tuple of sorted label tuples

    def colors(self):
        els = self.structure.carrier.elements
        cols = []
        for e in els:
            c = 0
            for t, K in enumerate(self.subsets):
                if e in K:
                    c |= 1 << t
            cols.append(c)
        return tuple(cols)

    def key(self):
        size = len(self.structure.carrier)
        _, _, colors, rels = _kernel.canonical_form(size, self.colors(),
                                                    self.structure.rels())
        return digest_key(self.structure.species.tag + ".chain",
                          (len(self.subsets), size, colors, rels))

    def __repr__(self):
        return "Chain(%r, %s)" % (self.structure, [list(K) for K in self.subsets])


class ChainGroupoid(FinGroupoid):
    """One fat-nerve level: morphisms are structure isomorphisms carrying
    each chain subset onto the corresponding one."""

    def __init__(self, objects, k):
        self.k = k
        self._objs = list(objects)
        self._keys = {}

    def objects(self):
        return self._objs

    def invariant(self, x):
        key = self._keys.get(x)
        if key is None:
            key = x.key()
            self._keys[x] = key
        return key

    def hom(self, x, y):
        if len(x.subsets) != len(y.subsets):
            return []
        perms = _kernel.isomorphisms(x.colors(), x.structure.rels(),
                                     y.colors(), y.structure.rels())
        return [Mor(x, y, p) for p in perms]

    def identity(self, x):
        return Mor(x, x, tuple(range(len(x.structure.carrier))))

    def compose(self, g, f):
        return Mor(f.src, g.dst, tuple(g.data[i] for i in f.data))

    def invert(self, f):
        inv = [0] * len(f.data)
        for i, j in enumerate(f.data):
            inv[j] = i
        return Mor(f.dst, f.src, tuple(inv))


def _subset_predicate(variant):
    from .poset import is_lower_set, is_upper_set
    if variant == "lower":
        return is_lower_set
    if variant == "upper":
        return is_upper_set
    if variant == "all-injections":
        return lambda P, K: True
    raise ValueError("variant must be lower, upper or all-injections")


class FatNerve:
    """Fat nerve of the category of structures and lower-set (upper-set,
    or arbitrary-subset) structure inclusions, as a truncation-like object.

    lower / all-injections: level k is (X, K_1 <= ... <= K_k) for the chain
    X|K_1 -> ... -> X|K_k -> X.  upper: level k is (X, V_1 >= ... >= V_k)
    for the op-oriented chain X, X|V_1, ..., X|V_k."""

    def __init__(self, species, N, size_bound, dec_bound, variant,
                 universe=None):
        if isinstance(species, str):
            species = get_species(species)
        self.species = species
        self.N = N
        self.variant = variant
        self.size_bound = size_bound
        self.dec_bound = dec_bound
        pred = _subset_predicate(variant)
        universe = universe or universe_labels(size_bound)
        carriers = []
        for r in range(size_bound + 1):
            for subset in combinations(universe, r):
                if species.ordinary:
                    carriers.append(FinPoset(subset, []))
                else:
                    carriers.extend(all_posets_on(subset))
        structures = [Structure(species, c, d) for c in carriers
                      for d in species.decorations(c, dec_bound)]
        good = {}
        for s in structures:
            P = s.carrier
            subs = []
            n = len(P.elements)
            for mask in range(1 << n):
                K = tuple(P.elements[i] for i in range(n) if mask >> i & 1)
                if pred(P, K):
                    subs.append(K)
            good[s] = sorted(subs, key=lambda K: (len(K), K))
        self.levels = []
        for k in range(N + 1):
            objs = []
            for s in structures:
                for chain in self._chains(good[s], k):
                    objs.append(ChainObject(s, chain))
            self.levels.append(ChainGroupoid(objs, k))

    def _chains(self, subs, k):
        if k == 0:
            return [()]
        increasing = self.variant in ("lower", "all-injections")
        out = []

        def extend(chain):
            if len(chain) == k:
                out.append(tuple(chain))
                return
            for K in subs:
                if not chain:
                    extend(chain + [K])
                else:
                    prev = set(chain[-1])
                    Kset = set(K)
                    if increasing and prev <= Kset:
                        extend(chain + [K])
                    elif not increasing and Kset <= prev:
                        extend(chain + [K])

        extend([])
        return out

    # fat-nerve faces: d_i drops the i-th chain object, composing through;
    # degeneracies repeat it.
    def face(self, n, i):
        if not (1 <= n <= self.N and 0 <= i <= n):
            raise ValueError("face out of range")
        dom, cod = self.levels[n], self.levels[n - 1]
        increasing = self.variant in ("lower", "all-injections")

        def obj(x):
            subs = x.subsets
            if increasing:
                if i < n:
                    return ChainObject(x.structure, subs[:i] + subs[i + 1:])
                # drop the full structure at the top: restrict to K_n
                K = subs[-1]
                sub = restrict_structure_cached(x.structure, K)
                return ChainObject(sub, subs[:-1])
            if i == 0:
                V = subs[0]
                sub = restrict_structure_cached(x.structure, V)
                return ChainObject(sub, subs[1:])
            return ChainObject(x.structure, subs[:i - 1] + subs[i:])

        def mor_data(m):
            x, y = m.src, m.dst
            fx, fy = obj(x), obj(y)
            if len(fx.structure.carrier) == len(x.structure.carrier):
                return m.data
            src_els = x.structure.carrier.elements
            dst_els = y.structure.carrier.elements
            keep_src = [p for p, e in enumerate(src_els)
                        if e in fx.structure.carrier._idx]
            dst_index = {p: q for q, p in enumerate(
                [p for p, e in enumerate(dst_els) if e in fy.structure.carrier._idx])}
            return tuple(dst_index[m.data[p]] for p in keep_src)

        cache = {}

        def omap(x):
            y = cache.get(x)
            if y is None:
                y = obj(x)
                cache[x] = y
            return y

        return GroupoidFunctor(dom, cod, omap,
                               lambda m: Mor(omap(m.src), omap(m.dst), mor_data(m)),
                               "fat-d%d@X%d" % (i, n))

    def degeneracy(self, n, i):
        if not (0 <= i <= n and n + 1 <= self.N):
            raise ValueError("degeneracy out of range")
        dom, cod = self.levels[n], self.levels[n + 1]
        increasing = self.variant in ("lower", "all-injections")

        def obj(x):
            subs = x.subsets
            full = tuple(x.structure.carrier.elements)
            if increasing:
                if i < n:
                    return ChainObject(x.structure,
                                       subs[:i + 1] + (subs[i],) + subs[i + 1:])
                return ChainObject(x.structure, subs + (full,))
            if i == 0:
                return ChainObject(x.structure, (full,) + subs)
            return ChainObject(x.structure, subs[:i] + (subs[i - 1],) + subs[i:])

        cache = {}

        def omap(x):
            y = cache.get(x)
            if y is None:
                y = obj(x)
                cache[x] = y
            return y

        return GroupoidFunctor(dom, cod, omap,
                               lambda m: Mor(omap(m.src), omap(m.dst), m.data),
                               "fat-s%d@X%d" % (i, n))


def fat_nerve_lower(species, N, size_bound, dec_bound=None, variant="lower"):
    """The fat nerve of structure inclusions (see FatNerve)."""
    return FatNerve(species, N, size_bound, dec_bound, variant)


def _dec_comparison(D, fat, k, side):
    """The canonical functor Dec(ds R)_k -> fat-nerve level k sending a
    (k+1)-layering to its chain of cumulative lower (upper) subsets."""
    dom, cod = D.levels[k], fat.levels[k]

    def obj(x):
        els = x.structure.carrier.elements
        if side == "bot":
            subs = tuple(
                tuple(e for e, lv in zip(els, x.levels) if lv <= t)
                for t in range(1, k + 1))
        else:
            subs = tuple(
                tuple(e for e, lv in zip(els, x.levels) if lv >= t)
                for t in range(2, k + 2))
        return ChainObject(x.structure, subs)

    cache = {}

    def omap(x):
        y = cache.get(x)
        if y is None:
            y = obj(x)
            cache[x] = y
        return y

    return GroupoidFunctor(dom, cod, omap,
                           lambda m: Mor(omap(m.src), omap(m.dst), m.data),
                           "dec-cmp@%d" % k)


def check_decalage_formulas(species, N, size_bound, dec_bound=None,
                            levels=None):
    """Levelwise equivalences Dec_bot(ds R) ~ N R^lower and
    Dec_top(ds R) ~ N (R^upper)^op (for ordinary species the lower side is
    compared against all substructure inclusions, i.e. N R), including
    compatibility of the comparison with faces and degeneracies."""
    if isinstance(species, str):
        species = get_species(species)
    T = build(species, N, size_bound, dec_bound)
    levels = levels if levels is not None else N - 1
    report = AxiomReport("decalage-formulas")
    bot_variant = "all-injections" if species.ordinary else "lower"
    for side, variant in (("bot", bot_variant), ("top", "upper")):
        D, _decmap = (dec_bot(T) if side == "bot" else dec_top(T))
        fat = FatNerve(species, levels, size_bound, dec_bound, variant)
        comparisons = {}
        for k in range(levels + 1):
            cmp_k = _dec_comparison(D, fat, k, side)
            comparisons[k] = cmp_k
            ok, witness = is_equivalence(cmp_k)
            report.add("dec_%s~N(%s)@level%d" % (side, variant, k),
                       "pass" if ok else "fail", witness)
        for k in range(1, levels + 1):
            for i in range(k + 1):
                lhs = compose_functors(comparisons[k - 1], D.face(k, i))
                rhs = compose_functors(fat.face(k, i), comparisons[k])
                ok = functors_equal(lhs, rhs)
                report.add("dec_%s-cmp-d%d@X%d" % (side, i, k),
                           "pass" if ok else "fail")
        for k in range(levels):
            for i in range(k + 1):
                lhs = compose_functors(comparisons[k + 1], D.degeneracy(k, i))
                rhs = compose_functors(fat.degeneracy(k, i), comparisons[k])
                ok = functors_equal(lhs, rhs)
                report.add("dec_%s-cmp-s%d@X%d" % (side, i, k),
                           "pass" if ok else "fail")
    return report


# ---------------------------------------------------------------------------
# monoidal structure

def product_functor(F, G):
    dom = ProductGroupoid(F.dom, G.dom)
    cod = ProductGroupoid(F.cod, G.cod)
    return GroupoidFunctor(
        dom, cod,
        lambda x: (F.obj(x[0]), G.obj(x[1])),
        lambda m: Mor((F.obj(m.src[0]), G.obj(m.src[1])),
                      (F.obj(m.dst[0]), G.obj(m.dst[1])),
                      (F.mor(m.data[0]), G.mor(m.data[1]))),
        "%sx%s" % (F.name, G.name))


def monoidal_map(T, big=None):
    """The levelwise disjoint union T_k x T_k -> T2_k into a doubled build,
    plus the CULF check against the unique generic map to level 1."""
    if not T.species.monoidal:
        raise ValueError("species %s is not monoidal" % T.species.tag)
    if big is None:
        dec2 = None if T.dec_bound is None else 2 * T.dec_bound
        big = build(T.species, T.N, 2 * T.size_bound, dec2)
    sp = T.species
    labels = universe_labels(2 * T.size_bound)

    def tensor_obj(pair):
        x, y = pair
        ex = x.structure.carrier.elements
        ey = y.structure.carrier.elements
        relabel_x = {e: labels[i] for i, e in enumerate(ex)}
        relabel_y = {e: labels[len(ex) + i] for i, e in enumerate(ey)}
        rel = [(relabel_x[a], relabel_x[b]) for a, b in x.structure.carrier.leq] + \
              [(relabel_y[a], relabel_y[b]) for a, b in y.structure.carrier.leq]
        carrier = FinPoset(list(relabel_x.values()) + list(relabel_y.values()), rel)
        dec = sp.merge_decs(
            sp.transport_dec(x.structure.carrier, x.structure.dec, relabel_x),
            sp.transport_dec(y.structure.carrier, y.structure.dec, relabel_y))
        return LayeredStructure(Structure(sp, carrier, dec), x.n,
                                x.levels + y.levels)

    def tensor_mor(m):
        (x, y), (x2, y2) = m.src, m.dst
        nx = len(x.levels)
        data = tuple(m.data[0].data) + tuple(nx + q for q in m.data[1].data)
        return Mor(tensor_obj(m.src), tensor_obj(m.dst), data)

    maps = []
    for k in range(T.N + 1):
        dom = ProductGroupoid(T.levels[k], T.levels[k])
        maps.append(GroupoidFunctor(dom, big.levels[k], tensor_obj, tensor_mor,
                                    "tensor@X%d" % k))

    report = AxiomReport("monoidal-culf")
    for k in range(T.N + 1):
        to_one = UlDeltaMap(k, 1, (1,) * k)
        Fk = T.generic_op(to_one)
        left = GroupoidFunctor(
            maps[k].dom, maps[1].dom,
            lambda x, _F=Fk: (_F.obj(x[0]), _F.obj(x[1])),
            lambda m, _F=Fk: Mor((_F.obj(m.src[0]), _F.obj(m.src[1])),
                                 (_F.obj(m.dst[0]), _F.obj(m.dst[1])),
                                 (_F.mor(m.data[0]), _F.mor(m.data[1]))),
            "gxg@X%d" % k)
        square = GroupoidSquare(
            maps[k].dom,
            maps[k],                     # top
            left,                        # left: relayer both factors to 1
            maps[1],                     # bottom
            big.generic_op(to_one),      # right
            "monoidal-culf@X%d" % k,
        )
        ok, witness = is_homotopy_pullback(square)
        report.add(square.name, "pass" if ok else "fail", witness)
    return maps, report, big

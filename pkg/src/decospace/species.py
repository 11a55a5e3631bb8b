"""Structures on posets: the directed restriction-species interface.

A species assigns to each finite poset a finite set of decorations, in a
way compatible with restriction along convex subsets and transport along
isomorphisms.  Ordinary species (sets, graphs) are supported on discrete
carriers, where every subset is convex, so they restrict along arbitrary
subsets.

Decorations are stored in label-explicit normal form (sorted tuples), so
transporting along an isomorphism and comparing for equality decides
whether the isomorphism is a structure isomorphism.  Every built-in also
encodes its decoration as integer relation matrices, which lets the
kernel enumerate structure isomorphisms directly.
"""

from itertools import combinations_with_replacement

from . import _kernel
from .groupoid import FinGroupoid, Mor
from .poset import (EMPTY_POSET, FinPoset, PosetError, all_posets_on,
                    convexity_violation, digest_key, disjoint_union,
                    poset_from_json, restrict)


class SpeciesError(ValueError):
    pass


class SpeciesDef:
    """Interface contract for species; built-ins subclass this."""

    tag = "?"
    ordinary = False      # supported on discrete carriers; any subset restricts
    monoidal = True

    def decorations(self, carrier, bound=None):
        """All decorations on the carrier (within the bound, if the species
        needs one to stay finite)."""
        raise NotImplementedError

    def validate(self, carrier, dec):
        if dec not in self.decorations(carrier, bound=self._validation_bound(dec)):
            raise SpeciesError("invalid %s decoration on %r" % (self.tag, carrier))

    def _validation_bound(self, dec):
        return None

    def restrict_dec(self, carrier, dec, K):
        raise NotImplementedError

    def transport_dec(self, carrier, dec, iso):
        """Push the decoration along a label dict; result lives on the image."""
        raise NotImplementedError

    def extra_rels(self, carrier, dec):
        """Decoration as integer matrices over carrier.elements order."""
        return ()

    def merge_decs(self, dec1, dec2):
        """Union of two decorations on disjoint label sets (monoidal)."""
        raise NotImplementedError


class PosetsSpecies(SpeciesDef):
    """The terminal directed species: a unique decoration on every poset."""

    tag = "poset"

    def decorations(self, carrier, bound=None):
        return [()]

    def restrict_dec(self, carrier, dec, K):
        return ()

    def transport_dec(self, carrier, dec, iso):
        return ()

    def merge_decs(self, dec1, dec2):
        return ()


class PropertySpecies(SpeciesDef):
    """A convex-closed class of posets: decoration exists iff the property
    holds; the property must be inherited by convex subposets."""

    def holds(self, carrier):
        raise NotImplementedError

    def decorations(self, carrier, bound=None):
        return [()] if self.holds(carrier) else []

    def restrict_dec(self, carrier, dec, K):
        return ()

    def transport_dec(self, carrier, dec, iso):
        return ()

    def merge_decs(self, dec1, dec2):
        return ()


class ForestsSpecies(PropertySpecies):
    """Rooted forests as posets: every principal up-set is a chain, so
    roots are the maximal elements and trees grow from leaves up."""

    tag = "forest"

    def holds(self, carrier):
        for x in carrier.elements:
            up = [y for y in carrier.elements if carrier.le(x, y)]
            for a in up:
                for b in up:
                    if not (carrier.le(a, b) or carrier.le(b, a)):
                        return False
        return True


class LinearOrdersSpecies(PropertySpecies):

    tag = "linear"

    def holds(self, carrier):
        for a in carrier.elements:
            for b in carrier.elements:
                if not (carrier.le(a, b) or carrier.le(b, a)):
                    return False
        return True


class SetsSpecies(PropertySpecies):
    """Finite sets, embedded as the discrete-posets property species."""

    tag = "set"
    ordinary = True

    def holds(self, carrier):
        return carrier.is_discrete()


class GraphsSpecies(SpeciesDef):
    """Multigraphs with loops on a discrete carrier; a decoration is a
    multiset of unordered vertex pairs.  Enumeration takes an edge-count
    bound, since there are infinitely many multigraphs on a carrier."""

    tag = "graph"
    ordinary = True

    def decorations(self, carrier, bound=None):
        if not carrier.is_discrete():
            return []
        if bound is None:
            raise SpeciesError("graph enumeration needs an edge bound")
        els = carrier.elements
        positions = [(a, b) for i, a in enumerate(els) for b in els[i:]]
        out = []
        for m in range(bound + 1):
            out.extend(tuple(sorted(c))
                       for c in combinations_with_replacement(positions, m))
        return out

    def _validation_bound(self, dec):
        return len(dec)

    def restrict_dec(self, carrier, dec, K):
        K = frozenset(K)
        return tuple(e for e in dec if e[0] in K and e[1] in K)

    def transport_dec(self, carrier, dec, iso):
        return tuple(sorted(tuple(sorted((iso[a], iso[b]))) for a, b in dec))

    def extra_rels(self, carrier, dec):
        els = carrier.elements
        idx = {e: i for i, e in enumerate(els)}
        n = len(els)
        m = [[0] * n for _ in range(n)]
        for a, b in dec:
            m[idx[a]][idx[b]] += 1
            if a != b:
                m[idx[b]][idx[a]] += 1
        return (tuple(tuple(r) for r in m),)

    def merge_decs(self, dec1, dec2):
        return tuple(sorted(dec1 + dec2))


class DoublePosetsSpecies(SpeciesDef):
    """A second, unconstrained partial order on the carrier elements;
    stored as the sorted strict pairs of its closure."""

    tag = "double"

    def decorations(self, carrier, bound=None):
        out = []
        for Q in all_posets_on(carrier.elements):
            out.append(tuple(sorted((a, b) for a, b in Q.leq if a != b)))
        return sorted(out)

    def restrict_dec(self, carrier, dec, K):
        K = frozenset(K)
        return tuple(p for p in dec if p[0] in K and p[1] in K)

    def transport_dec(self, carrier, dec, iso):
        return tuple(sorted((iso[a], iso[b]) for a, b in dec))

    def extra_rels(self, carrier, dec):
        els = carrier.elements
        idx = {e: i for i, e in enumerate(els)}
        n = len(els)
        m = [[0] * n for _ in range(n)]
        for a, b in dec:
            m[idx[a]][idx[b]] = 1
        return (tuple(tuple(r) for r in m),)

    def merge_decs(self, dec1, dec2):
        return tuple(sorted(dec1 + dec2))


class AcyclicDigraphsSpecies(SpeciesDef):
    """Simple directed edge sets whose reachability order equals the
    carrier order; restriction to a convex subset keeps the inner edges."""

    tag = "dag"

    def decorations(self, carrier, bound=None):
        strict = [(a, b) for a, b in carrier.leq if a != b]
        strict.sort()
        target = frozenset(strict)
        out = []
        for mask in range(1 << len(strict)):
            edges = tuple(strict[i] for i in range(len(strict)) if mask >> i & 1)
            if self._reachability(carrier.elements, edges) == target:
                out.append(edges)
        return sorted(out)

    @staticmethod
    def _reachability(elements, edges):
        succ = {e: set() for e in elements}
        for a, b in edges:
            succ[a].add(b)
        reach = set()
        for a in elements:
            stack = list(succ[a])
            seen = set()
            while stack:
                b = stack.pop()
                if b in seen:
                    continue
                seen.add(b)
                reach.add((a, b))
                stack.extend(succ[b])
        return frozenset(reach)

    def restrict_dec(self, carrier, dec, K):
        K = frozenset(K)
        return tuple(e for e in dec if e[0] in K and e[1] in K)

    def transport_dec(self, carrier, dec, iso):
        return tuple(sorted((iso[a], iso[b]) for a, b in dec))

    def extra_rels(self, carrier, dec):
        els = carrier.elements
        idx = {e: i for i, e in enumerate(els)}
        n = len(els)
        m = [[0] * n for _ in range(n)]
        for a, b in dec:
            m[idx[a]][idx[b]] = 1
        return (tuple(tuple(r) for r in m),)

    def merge_decs(self, dec1, dec2):
        return tuple(sorted(dec1 + dec2))


class EmbeddedOrdinary(SpeciesDef):
    """An ordinary species regarded as a directed one: structures live on
    discrete posets only; restriction is the ordinary restriction."""

    def __init__(self, base):
        if not base.ordinary:
            raise SpeciesError("embed_ordinary needs an ordinary species")
        self.base = base
        self.tag = base.tag
        self.ordinary = True
        self.monoidal = base.monoidal

    def decorations(self, carrier, bound=None):
        if not carrier.is_discrete():
            return []
        return self.base.decorations(carrier, bound)

    def restrict_dec(self, carrier, dec, K):
        return self.base.restrict_dec(carrier, dec, K)

    def transport_dec(self, carrier, dec, iso):
        return self.base.transport_dec(carrier, dec, iso)

    def extra_rels(self, carrier, dec):
        return self.base.extra_rels(carrier, dec)

    def merge_decs(self, dec1, dec2):
        return self.base.merge_decs(dec1, dec2)


def sets():
    return SetsSpecies()


def graphs():
    return GraphsSpecies()


def posets():
    return PosetsSpecies()


def forests():
    return ForestsSpecies()


def linear_orders():
    return LinearOrdersSpecies()


def double_posets():
    return DoublePosetsSpecies()


def acyclic_digraphs():
    return AcyclicDigraphsSpecies()


def embed_ordinary(S):
    return EmbeddedOrdinary(S)


SPECIES_FACTORIES = {
    "set": sets, "sets": sets,
    "graph": graphs, "graphs": graphs,
    "poset": posets, "posets": posets,
    "forest": forests, "forests": forests,
    "linear": linear_orders, "linear_orders": linear_orders,
    "double": double_posets, "double_posets": double_posets,
    "dag": acyclic_digraphs, "acyclic_digraphs": acyclic_digraphs,
}


def get_species(name):
    try:
        return SPECIES_FACTORIES[name]()
    except KeyError:
        raise SpeciesError("unknown species %r (known: %s)"
                           % (name, ", ".join(sorted(set(SPECIES_FACTORIES)))))


# ---------------------------------------------------------------------------
# structures

class Structure:
    """A decorated carrier poset, with an iso-class key."""

    __slots__ = ("species", "carrier", "dec", "_hash", "_key")

    def __init__(self, species, carrier, dec):
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "dec", dec)
        object.__setattr__(self, "_hash", hash((species.tag, carrier, dec)))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, *a):
        raise AttributeError("Structure is immutable")

    def __eq__(self, other):
        return isinstance(other, Structure) and self.species.tag == other.species.tag \
            and self.carrier == other.carrier and self.dec == other.dec

    def __hash__(self):
        return self._hash

    def __repr__(self):
        strict = sorted((a, b) for a, b in self.carrier.leq if a != b)
        rel = "".join(" %s<%s" % p for p in strict) or " discrete"
        return "Structure(%s on %s%s: %r)" % (self.species.tag,
                                              list(self.carrier.elements), rel,
                                              self.dec)

    def __len__(self):
        return len(self.carrier)

    def rels(self):
        return (self.carrier.matrix(),) + tuple(
            self.species.extra_rels(self.carrier, self.dec))

    @property
    def key(self):
        """Canonical iso-class key, stable under transport."""
        if self._key is None:
            n = len(self.carrier)
            _, _, colors, rels = _kernel.canonical_form(n, (0,) * n, self.rels())
            object.__setattr__(self, "_key",
                               digest_key(self.species.tag, (n, colors, rels)))
        return self._key


def restrict_structure(X, K):
    """X restricted to K; for a directed species K must be convex, and the
    exact convexity violation is reported otherwise."""
    if not X.species.ordinary:
        viol = convexity_violation(X.carrier, K)
        if viol is not None:
            a, x, b = viol
            raise SpeciesError(
                "restriction set is not convex: %r <= %r <= %r with %r missing"
                % (a, x, b, x))
    else:
        for x in K:
            if x not in X.carrier._idx:
                raise SpeciesError("unknown label %r" % (x,))
    sub = restrict(X.carrier, K)
    return Structure(X.species, sub, X.species.restrict_dec(X.carrier, X.dec, K))


def transport_structure(X, iso, target_carrier):
    """Push X along a poset isomorphism given as a label dict."""
    return Structure(X.species, target_carrier,
                     X.species.transport_dec(X.carrier, X.dec, iso))


def product_structure(X, Y):
    """Disjoint union of structures (monoidal species only)."""
    sp = X.species
    if sp.tag != Y.species.tag:
        raise SpeciesError("cannot multiply structures of different species")
    if not sp.monoidal:
        raise SpeciesError("species %s is not monoidal" % sp.tag)
    carrier = disjoint_union(X.carrier, Y.carrier)
    dec1 = sp.transport_dec(X.carrier, X.dec, {e: "L." + e for e in X.carrier.elements})
    dec2 = sp.transport_dec(Y.carrier, Y.dec, {e: "R." + e for e in Y.carrier.elements})
    return Structure(sp, carrier, sp.merge_decs(dec1, dec2))


def structure_isomorphisms(X, Y):
    """All isomorphisms X -> Y as label dicts (carrier isos moving the
    decoration correctly; the kernel sees the decoration as relations)."""
    if X.species.tag != Y.species.tag:
        return []
    na, nb = len(X.carrier), len(Y.carrier)
    perms = _kernel.isomorphisms((0,) * na, X.rels(), (0,) * nb, Y.rels())
    els_a, els_b = X.carrier.elements, Y.carrier.elements
    return [{els_a[i]: els_b[m[i]] for i in range(na)} for m in perms]


class StructuresOnCarrier(FinGroupoid):
    """The groupoid R[P]: decorations on a fixed carrier, morphisms all
    structure isomorphisms over carrier automorphisms."""

    def __init__(self, species, carrier, bound=None):
        self.species = species
        self.carrier = carrier
        self._objs = [Structure(species, carrier, d)
                      for d in species.decorations(carrier, bound)]

    def objects(self):
        return self._objs

    def invariant(self, X):
        return X.key

    def hom(self, X, Y):
        perms = _kernel.isomorphisms((0,) * len(X), X.rels(), (0,) * len(Y), Y.rels())
        return [Mor(X, Y, p) for p in perms]

    def identity(self, X):
        return Mor(X, X, tuple(range(len(X))))

    def compose(self, g, f):
        return Mor(f.src, g.dst, tuple(g.data[i] for i in f.data))

    def invert(self, f):
        inv = [0] * len(f.data)
        for i, j in enumerate(f.data):
            inv[j] = i
        return Mor(f.dst, f.src, tuple(inv))


def enumerate_structures(species, carrier, bound=None):
    """The groupoid of structures on a carrier (decoration bound applies
    to species with infinitely many decorations, like graphs)."""
    return StructuresOnCarrier(species, carrier, bound)


# ---------------------------------------------------------------------------
# JSON structure formats

def load_structure(species, data):
    """Parse a structure from its species' JSON format."""
    tag = species.tag
    if tag == "set":
        carrier = FinPoset(data["elements"], [])
        return Structure(species, carrier, ())
    if tag == "graph":
        carrier = FinPoset(data["vertices"], [])
        edges = tuple(sorted(tuple(sorted((a, b))) for a, b in data.get("edges", [])))
        for a, b in edges:
            if a not in carrier._idx or b not in carrier._idx:
                raise SpeciesError("edge endpoint %r is not a vertex" % ((a, b),))
        return Structure(species, carrier, edges)
    if tag in ("poset", "linear"):
        carrier = poset_from_json(data)
        if tag == "linear" and not species.holds(carrier):
            raise SpeciesError("poset is not a linear order")
        return Structure(species, carrier, ())
    if tag == "forest":
        nodes = data["nodes"]
        parent = data.get("parent", {})
        pairs = []
        for child, par in parent.items():
            if par is not None:
                pairs.append((child, par))  # roots are maximal
        try:
            carrier = FinPoset(nodes, pairs)
        except PosetError as exc:
            raise SpeciesError("parent map is cyclic: %s" % exc)
        if not species.holds(carrier):
            raise SpeciesError("parent map does not describe a forest")
        return Structure(species, carrier, ())
    if tag == "double":
        carrier = poset_from_json(data)
        second = FinPoset(data["elements"], [tuple(p) for p in data.get("leq2", [])])
        dec = tuple(sorted((a, b) for a, b in second.leq if a != b))
        return Structure(species, carrier, dec)
    if tag == "dag":
        vertices = data["vertices"]
        edges = tuple(sorted((a, b) for a, b in data.get("edges", [])))
        try:
            # the carrier order is the reachability closure of the edges
            carrier = FinPoset(vertices, edges)
        except PosetError as exc:
            raise SpeciesError("directed graph is not acyclic: %s" % exc)
        return Structure(species, carrier, edges)
    raise SpeciesError("no JSON loader for species %r" % tag)

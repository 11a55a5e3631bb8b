"""Incidence coalgebras and bialgebras at homotopy cardinality.

The free module over the rationals on iso-class keys of structures, with
comultiplication summing over 2-layerings of the carrier (all splittings
for species on discrete carriers, admissible cuts for directed ones),
counit supported on empty carriers, product by disjoint union, and the
antipode of the connected graded case.  All arithmetic is exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .decomp import AxiomReport, build
from .groupoid import fibre
from .poset import FinPoset, all_posets_on, enumerate_layerings
from .species import (SpeciesError, Structure, get_species, product_structure,
                      restrict_structure)


def _coeff_str(c):
    return "%d/%d" % (c.numerator, c.denominator)


@dataclass
class ModuleElement:
    """A finite rational linear combination of iso-class keys."""

    terms: dict = field(default_factory=dict)

    @staticmethod
    def of(key, coeff=1):
        return ModuleElement({key: Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return ModuleElement({k: c for k, c in out.items() if c})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return ModuleElement({k: v * c for k, v in self.terms.items() if v * c})

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.terms == other.terms

    def to_json(self):
        return {"terms": [{"key": k, "coeff": _coeff_str(c)}
                          for k, c in sorted(self.terms.items())]}

    def __repr__(self):
        return "ModuleElement(%s)" % (self.to_json()["terms"],)


@dataclass
class TensorElement:
    """A finite rational linear combination of ordered key pairs."""

    terms: dict = field(default_factory=dict)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return TensorElement({k: c for k, c in out.items() if c})

    def scale(self, c):
        c = Fraction(c)
        return TensorElement({k: v * c for k, v in self.terms.items() if v * c})

    def swap(self):
        return TensorElement({(r, l): c for (l, r), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def to_json(self):
        return {"terms": [{"left": l, "right": r, "coeff": _coeff_str(c)}
                          for (l, r), c in sorted(self.terms.items())]}

    def __repr__(self):
        return "TensorElement(%s)" % (self.to_json()["terms"],)


class NotConnectedError(SpeciesError):
    """Raised when the antipode recursion is used on a species with more
    than one empty-carrier iso-class."""


class IncidenceCoalgebra:
    """The coalgebra (bialgebra, Hopf algebra when connected) of a species,
    together with a registry resolving keys to representative structures."""

    def __init__(self, species, dec_bound=None):
        if isinstance(species, str):
            species = get_species(species)
        self.species = species
        self.dec_bound = dec_bound
        self._reps = {}
        self._antipode = {}

    # -- registry -----------------------------------------------------------

    def register(self, X):
        key = X.key
        if key not in self._reps:
            self._reps[key] = X
        return key

    def rep(self, key):
        try:
            return self._reps[key]
        except KeyError:
            raise SpeciesError("key %r does not resolve to a known structure" % key)

    def grade(self, key):
        return len(self.rep(key).carrier)

    def basis(self, size_bound):
        """One representative per iso-class up to the size bound, ordered by
        (grade, key)."""
        seen = {}
        for s in range(size_bound + 1):
            labels = ["l%d" % i for i in range(s)]
            if self.species.ordinary:
                carriers = [FinPoset(labels, [])]
            else:
                carriers = all_posets_on(labels)
            for carrier in carriers:
                for dec in self.species.decorations(carrier, self.dec_bound):
                    X = Structure(self.species, carrier, dec)
                    if X.key not in seen:
                        seen[X.key] = X
                        self.register(X)
        return [seen[k] for k in sorted(seen, key=lambda k: (len(seen[k].carrier), k))]

    def unit_structure(self):
        empty = FinPoset((), ())
        decs = self.species.decorations(empty, self.dec_bound)
        if len(decs) != 1:
            raise NotConnectedError(
                "species %s is not connected: %d empty structures"
                % (self.species.tag, len(decs)))
        return Structure(self.species, empty, decs[0])

    def unit(self):
        return ModuleElement.of(self.register(self.unit_structure()))

    # -- structure maps -----------------------------------------------------

    def coproduct(self, X):
        """Sum over 2-layerings of the carrier of (lower part) x (upper
        part); on discrete carriers these are all ordered splittings."""
        out = {}
        for lay in enumerate_layerings(X.carrier, 2):
            left = restrict_structure(X, lay.layer(1))
            right = restrict_structure(X, lay.layer(2))
            pair = (self.register(left), self.register(right))
            out[pair] = out.get(pair, Fraction(0)) + 1
        return TensorElement(out)

    def coproduct_key(self, key):
        return self.coproduct(self.rep(key))

    def counit(self, x):
        """1 on empty-carrier classes, 0 elsewhere, extended linearly."""
        if isinstance(x, Structure):
            return Fraction(1) if len(x.carrier) == 0 else Fraction(0)
        total = Fraction(0)
        for key, c in x.terms.items():
            if self.grade(key) == 0:
                total += c
        return total

    def product(self, x, y):
        """Bilinear extension of disjoint union of representatives."""
        if not self.species.monoidal:
            raise SpeciesError("species %s is not monoidal" % self.species.tag)
        out = ModuleElement()
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                prod = product_structure(self.rep(k1), self.rep(k2))
                out = out + ModuleElement.of(self.register(prod), c1 * c2)
        return out

    def tensor_product(self, t1, t2):
        out = TensorElement()
        for (a, b), c1 in t1.terms.items():
            for (c, d), c2 in t2.terms.items():
                left = self.product(ModuleElement.of(a), ModuleElement.of(c))
                right = self.product(ModuleElement.of(b), ModuleElement.of(d))
                for ka, ca in left.terms.items():
                    for kb, cb in right.terms.items():
                        pair = (ka, kb)
                        out.terms[pair] = out.terms.get(pair, Fraction(0)) \
                            + c1 * c2 * ca * cb
        return TensorElement({k: c for k, c in out.terms.items() if c})

    def antipode_key(self, key):
        """The convolution inverse of the identity, by the connected graded
        recursion: S(x) = -x - sum S(x') x'' over the reduced coproduct."""
        if key in self._antipode:
            return self._antipode[key]
        self.unit_structure()  # raises for non-connected species
        if self.grade(key) == 0:
            out = ModuleElement.of(key)  # the unit, by connectedness
        else:
            out = ModuleElement.of(key, -1)
            for (l, r), c in self.coproduct_key(key).terms.items():
                if self.grade(l) == 0 or self.grade(r) == 0:
                    continue  # reduced coproduct drops x(x)1 and 1(x)x
                out = out - self.product(self.antipode_key(l).scale(c),
                                         ModuleElement.of(r))
        self._antipode[key] = out
        return out

    def antipode(self, x):
        if isinstance(x, Structure):
            x = ModuleElement.of(self.register(x))
        out = ModuleElement()
        for key, c in x.terms.items():
            out = out + self.antipode_key(key).scale(c)
        return out

    def convolution_check(self, key):
        """m(S (x) id) Delta == unit . counit on the basis element."""
        acc = ModuleElement()
        for (l, r), c in self.coproduct_key(key).terms.items():
            acc = acc + self.product(self.antipode_key(l),
                                     ModuleElement.of(r)).scale(c)
        expected = self.unit().scale(1) if self.grade(key) == 0 else ModuleElement()
        return acc == expected


# ---------------------------------------------------------------------------
# free functions (the coalgebra object is plumbing; these are the API)

def coproduct(species, X, coalgebra=None):
    C = coalgebra or IncidenceCoalgebra(species)
    return C.coproduct(X)


def counit(X):
    if isinstance(X, Structure):
        return Fraction(1) if len(X.carrier) == 0 else Fraction(0)
    raise TypeError("for linear combinations use IncidenceCoalgebra.counit")


def product(species, x, y, coalgebra=None):
    C = coalgebra or IncidenceCoalgebra(species)
    return C.product(x, y)


def antipode(species, X, coalgebra=None):
    C = coalgebra or IncidenceCoalgebra(species)
    return C.antipode(X)


# ---------------------------------------------------------------------------
# law checks

def _tensor_apply_left(C, t):
    """(Delta (x) id) of a tensor element, keyed by triples."""
    out = {}
    for (l, r), c in t.terms.items():
        for (a, b), c2 in C.coproduct_key(l).terms.items():
            out[(a, b, r)] = out.get((a, b, r), Fraction(0)) + c * c2
    return {k: v for k, v in out.items() if v}


def _tensor_apply_right(C, t):
    out = {}
    for (l, r), c in t.terms.items():
        for (a, b), c2 in C.coproduct_key(r).terms.items():
            out[(l, a, b)] = out.get((l, a, b), Fraction(0)) + c * c2
    return {k: v for k, v in out.items() if v}


def check_coassociativity(species, size_bound, dec_bound=None):
    C = IncidenceCoalgebra(species, dec_bound)
    report = AxiomReport("coassociativity")
    for X in C.basis(size_bound):
        t = C.coproduct(X)
        ok = _tensor_apply_left(C, t) == _tensor_apply_right(C, t)
        report.add("coassoc:%s" % X.key, "pass" if ok else "fail",
                   None if ok else str(X))
    return report


def check_counit(species, size_bound, dec_bound=None):
    C = IncidenceCoalgebra(species, dec_bound)
    report = AxiomReport("counit")
    for X in C.basis(size_bound):
        t = C.coproduct(X)
        left = ModuleElement()
        right = ModuleElement()
        for (l, r), c in t.terms.items():
            if C.grade(l) == 0:
                left = left + ModuleElement.of(r, c)
            if C.grade(r) == 0:
                right = right + ModuleElement.of(l, c)
        me = ModuleElement.of(X.key)
        ok = left == me and right == me
        report.add("counit:%s" % X.key, "pass" if ok else "fail",
                   None if ok else str(X))
    return report


def check_bialgebra(species, size_bound, dec_bound=None):
    """Delta(x . y) == Delta(x) . Delta(y), on basis pairs whose product
    stays within the size bound."""
    C = IncidenceCoalgebra(species, dec_bound)
    report = AxiomReport("bialgebra")
    basis = C.basis(size_bound)
    for X in basis:
        for Y in basis:
            if len(X.carrier) + len(Y.carrier) > size_bound:
                continue
            XY = product_structure(X, Y)
            C.register(XY)
            lhs = C.coproduct(XY)
            rhs = C.tensor_product(C.coproduct(X), C.coproduct(Y))
            ok = lhs == rhs
            report.add("bialgebra:%s*%s" % (X.key, Y.key),
                       "pass" if ok else "fail",
                       None if ok else {"x": str(X), "y": str(Y)})
    return report


def check_cocommutativity(species, size_bound, dec_bound=None):
    C = IncidenceCoalgebra(species, dec_bound)
    report = AxiomReport("cocommutativity")
    for X in C.basis(size_bound):
        t = C.coproduct(X)
        ok = t == t.swap()
        report.add("cocomm:%s" % X.key, "pass" if ok else "fail",
                   None if ok else str(X))
    return report


def check_antipode(species, size_bound, dec_bound=None):
    C = IncidenceCoalgebra(species, dec_bound)
    report = AxiomReport("antipode-convolution")
    for X in C.basis(size_bound):
        ok = C.convolution_check(X.key)
        report.add("convolution:%s" % X.key, "pass" if ok else "fail",
                   None if ok else str(X))
    return report


def cardinality_coproduct_consistency(species, size_bound, dec_bound=None):
    """The groupoid route (d_1 homotopy fibre pushed along (d_2, d_0),
    coefficients by homotopy cardinality) against the combinatorial
    layering sum, term by term, exactly."""
    if isinstance(species, str):
        species = get_species(species)
    C = IncidenceCoalgebra(species, dec_bound)
    T = build(species, 2, size_bound, dec_bound)
    X1 = T.levels[1]
    d1 = T.face(2, 1)
    d2 = T.face(2, 2)
    d0 = T.face(2, 0)
    report = AxiomReport("cardinality-coproduct")
    for cls in X1.classes():
        x = cls.rep
        F = fibre(d1, x)
        coeffs = {}
        for fcls in F.classes():
            layered = fcls.rep[0]
            left = d2.obj(layered).structure
            right = d0.obj(layered).structure
            pair = (C.register(left), C.register(right))
            coeffs[pair] = coeffs.get(pair, Fraction(0)) \
                + Fraction(1, len(fcls.aut))
        groupoid_route = TensorElement(coeffs)
        combinatorial = C.coproduct(x.structure)
        ok = groupoid_route == combinatorial
        report.add("cardinality:%s" % x.structure.key, "pass" if ok else "fail",
                   None if ok else {"groupoid": groupoid_route.to_json(),
                                    "combinatorial": combinatorial.to_json()})
    return report

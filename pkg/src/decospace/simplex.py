"""Map algebra for the two simplex categories.

DeltaMap: monotone maps [m] -> [n] between topologist's ordinals
[n] = {0,...,n}.  UlDeltaMap: monotone maps between algebraist's ordinals
underline-n = {1,...,n}, the empty ordinal included.

The bridge between the two is what everything downstream runs on:

* generic maps of Delta (endpoint-preserving) correspond contravariantly
  to arbitrary maps of underline-Delta (`joyal_dual`);
* free maps of Delta (distance-preserving) correspond to convex maps of
  underline-Delta (`free_to_convex`), for sources [k] with k >= 1;
* identity-extension squares in underline-Delta correspond to
  generic-free pushouts in Delta (`enumerate_iesq`).

Maps are stored as explicit value sequences; the generator constructors
(d, s, ul_d, ul_s) are provided for readability.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement


@dataclass(frozen=True)
class DeltaMap:
    """A monotone map [source] -> [target]; values[i] is the image of i."""

    source: int
    target: int
    values: tuple

    def __post_init__(self):
        if self.source < 0 or self.target < 0:
            raise ValueError("ordinals must be non-negative")
        if len(self.values) != self.source + 1:
            raise ValueError("values must list all of 0..source")
        if any(v < 0 or v > self.target for v in self.values):
            raise ValueError("values out of range")
        if any(self.values[i] > self.values[i + 1] for i in range(self.source)):
            raise ValueError("values not weakly increasing")

    def __call__(self, i):
        return self.values[i]

    def __repr__(self):
        return "DeltaMap([%d]->[%d], %s)" % (self.source, self.target, list(self.values))

    @staticmethod
    def identity(n):
        return DeltaMap(n, n, tuple(range(n + 1)))

    @staticmethod
    def d(k, n):
        """Coface d^k: [n] -> [n+1], skipping k in [n+1]."""
        if not 0 <= k <= n + 1:
            raise ValueError("coface index out of range")
        return DeltaMap(n, n + 1, tuple(i if i < k else i + 1 for i in range(n + 1)))

    @staticmethod
    def s(k, n):
        """Codegeneracy s^k: [n+1] -> [n], repeating k in [n]."""
        if not 0 <= k <= n:
            raise ValueError("codegeneracy index out of range")
        return DeltaMap(n + 1, n, tuple(i if i <= k else i - 1 for i in range(n + 2)))


def compose_delta(g, f):
    """g after f in Delta."""
    if f.target != g.source:
        raise ValueError("maps not composable")
    return DeltaMap(f.source, g.target, tuple(g.values[v] for v in f.values))


@dataclass(frozen=True)
class UlDeltaMap:
    """A monotone map underline-source -> underline-target; values[i-1] is
    the image of i.  The empty ordinal underline-0 is allowed (and is
    initial); the only map with target underline-0 is the identity."""

    source: int
    target: int
    values: tuple

    def __post_init__(self):
        if self.source < 0 or self.target < 0:
            raise ValueError("ordinals must be non-negative")
        if len(self.values) != self.source:
            raise ValueError("values must list all of 1..source")
        if any(v < 1 or v > self.target for v in self.values):
            raise ValueError("values out of range")
        if any(self.values[i] > self.values[i + 1] for i in range(self.source - 1)):
            raise ValueError("values not weakly increasing")
        if self.target == 0 and self.source != 0:
            raise ValueError("underline-0 only receives the identity")

    def __call__(self, x):
        return self.values[x - 1]

    def __repr__(self):
        return "UlDeltaMap(%d->%d, %s)" % (self.source, self.target, list(self.values))

    @staticmethod
    def identity(n):
        return UlDeltaMap(n, n, tuple(range(1, n + 1)))

    @staticmethod
    def ul_d(k, n):
        """ul_d^k: underline-n -> underline-(n+1), skipping k+1 (0 <= k <= n)."""
        if not 0 <= k <= n:
            raise ValueError("index out of range")
        return UlDeltaMap(n, n + 1, tuple(x if x <= k else x + 1 for x in range(1, n + 1)))

    @staticmethod
    def ul_s(k, n):
        """ul_s^k: underline-(n+1) -> underline-n, repeating k+1 (0 <= k <= n-1)."""
        if not 0 <= k <= n - 1:
            raise ValueError("index out of range")
        return UlDeltaMap(n + 1, n, tuple(x if x <= k + 1 else x - 1 for x in range(1, n + 2)))

    @staticmethod
    def convex(a, n, b):
        """The canonical inclusion underline-n >-> underline-(a+n+b) at offset a."""
        return UlDeltaMap(n, a + n + b, tuple(a + x for x in range(1, n + 1)))


def compose_ul(g, f):
    """g after f in underline-Delta."""
    if f.target != g.source:
        raise ValueError("maps not composable")
    return UlDeltaMap(f.source, g.target, tuple(g.values[v - 1] for v in f.values))


def all_ul_maps(n, k):
    """All monotone maps underline-n -> underline-k."""
    if k == 0:
        return [UlDeltaMap(0, 0, ())] if n == 0 else []
    return [UlDeltaMap(n, k, vals)
            for vals in combinations_with_replacement(range(1, k + 1), n)]


def all_delta_maps(m, n):
    """All monotone maps [m] -> [n]."""
    return [DeltaMap(m, n, vals)
            for vals in combinations_with_replacement(range(n + 1), m + 1)]


# ---------------------------------------------------------------------------
# generic / free structure

def is_generic(m):
    """Endpoint-preserving: m(0) = 0 and m(source) = target."""
    return m.values[0] == 0 and m.values[-1] == m.target


def is_free(m):
    """Distance-preserving: m(i+1) = m(i) + 1 throughout."""
    return all(m.values[i + 1] == m.values[i] + 1 for i in range(m.source))


def generic_free_factorize(m):
    """The unique factorization m = free . generic."""
    lo, hi = m.values[0], m.values[-1]
    generic = DeltaMap(m.source, hi - lo, tuple(v - lo for v in m.values))
    free = DeltaMap(hi - lo, m.target, tuple(range(lo, hi + 1)))
    return generic, free


def joyal_dual(g):
    """The map underline-target -> underline-source corresponding to a
    generic g: [source] -> [target]; contravariant in g."""
    if not is_generic(g):
        raise ValueError("joyal_dual requires a generic map")
    vals = []
    i = 1
    for j in range(1, g.target + 1):
        while g.values[i] < j:
            i += 1
        vals.append(i)
    return UlDeltaMap(g.target, g.source, tuple(vals))


def joyal_dual_inv(phi):
    """The generic map [target] -> [source] corresponding to
    phi: underline-source -> underline-target... inverse to joyal_dual."""
    n, m = phi.source, phi.target
    vals = [0]
    for i in range(1, m + 1):
        vals.append(sum(1 for v in phi.values if v <= i))
    return DeltaMap(m, n, tuple(vals))


def is_convex_ul(m):
    """Distance-preserving in underline-Delta: the canonical inclusion
    underline-n >-> underline-a + underline-n + underline-b."""
    return all(m.values[i + 1] == m.values[i] + 1 for i in range(m.source - 1))


def convex_offsets(m):
    """(a, b) with m the inclusion at offset a; for source 0 take a = b' split
    (0, target)."""
    if not is_convex_ul(m):
        raise ValueError("not a convex map")
    if m.source == 0:
        return 0, m.target
    a = m.values[0] - 1
    return a, m.target - m.source - a


def free_to_convex(f):
    """The convex map underline-k >-> underline-n corresponding to a free
    f: [k] -> [n]; for k = 0 returns the unique map underline-0 -> underline-n."""
    if not is_free(f):
        raise ValueError("free_to_convex requires a free map")
    if f.source == 0:
        return UlDeltaMap(0, f.target, ())
    return UlDeltaMap.convex(f.values[0], f.source, f.target - f.source - f.values[0])


def convex_to_free(j):
    """Inverse of free_to_convex, for source >= 1."""
    if not is_convex_ul(j):
        raise ValueError("not a convex map")
    if j.source == 0:
        raise ValueError("underline-0 does not determine a free map")
    a = j.values[0] - 1
    return DeltaMap(j.source, j.target, tuple(range(a, a + j.source + 1)))


def pullback_convex_ul(f, i):
    """Pull a convex map i back along f (shared target).

    Returns (apex, j, f0) with j: underline-apex >-> source(f) convex,
    f0: underline-apex -> source(i), and f . j = i . f0, the strict fibre
    construction over the image interval of i."""
    if f.target != i.target:
        raise ValueError("maps must share a target")
    if not is_convex_ul(i):
        raise ValueError("second map must be convex")
    if i.source == 0:
        j = UlDeltaMap(0, f.source, ())
        return 0, j, UlDeltaMap(0, 0, ())
    a = i.values[0] - 1
    members = [x for x in range(1, f.source + 1) if a + 1 <= f.values[x - 1] <= a + i.source]
    apex = len(members)
    if apex == 0:
        return 0, UlDeltaMap(0, f.source, ()), UlDeltaMap(0, i.source, ())
    lo = members[0]
    j = UlDeltaMap.convex(lo - 1, apex, f.source - apex - (lo - 1))
    f0 = UlDeltaMap(apex, i.source, tuple(f.values[x - 1] - a for x in members))
    return apex, j, f0


# ---------------------------------------------------------------------------
# identity-extension squares

@dataclass(frozen=True)
class IesqSquare:
    """The square

        underline-(a+n+b)  <--j--  underline-n
              | g                       | f
        underline-(a+k+b)  <--i--  underline-k

    with g = id_a + f + id_b and i, j the convex inclusions at offset a."""

    a: int
    b: int
    f: UlDeltaMap

    @property
    def n(self):
        return self.f.source

    @property
    def k(self):
        return self.f.target

    @property
    def j(self):
        return UlDeltaMap.convex(self.a, self.n, self.b)

    @property
    def i(self):
        return UlDeltaMap.convex(self.a, self.k, self.b)

    @property
    def g(self):
        a, b, f, k = self.a, self.b, self.f, self.k
        vals = tuple(range(1, a + 1)) \
            + tuple(a + f.values[x] for x in range(self.n)) \
            + tuple(a + k + z for z in range(1, b + 1))
        return UlDeltaMap(a + self.n + b, a + k + b, vals)

    def corners(self):
        return (self.a + self.n + self.b, self.n, self.a + self.k + self.b, self.k)

    def __repr__(self):
        return "IesqSquare(a=%d, b=%d, f=%d->%d %s)" % (
            self.a, self.b, self.n, self.k, list(self.f.values))


def is_iesq(g, f, j, i):
    """Decide whether the commuting square (g, f, j, i) has the
    identity-extension shape; rejects non-commuting input."""
    if j.target != g.source or i.target != g.target:
        raise ValueError("square arms do not line up")
    if f.source != j.source or f.target != i.source:
        raise ValueError("square arms do not line up")
    if not (is_convex_ul(i) and is_convex_ul(j)):
        return False
    if compose_ul(g, j).values != compose_ul(i, f).values:
        raise ValueError("square does not commute")
    # offsets must agree; for empty sources the offset is read off g instead
    n, k = f.source, f.target
    if g.source - n != g.target - k:
        return False
    if n > 0:
        a = j.values[0] - 1
    elif k > 0:
        a = i.values[0] - 1
    else:
        # both sources empty: g must be an identity, any split works
        return g.values == tuple(range(1, g.source + 1))
    b = g.source - n - a
    if b < 0:
        return False
    if n > 0 and (j.values[0] - 1, j.target - n - (j.values[0] - 1)) != (a, b):
        return False
    if k > 0 and (i.values[0] - 1, i.target - k - (i.values[0] - 1)) != (a, b):
        return False
    return g.values == IesqSquare(a, b, f).g.values


@dataclass(frozen=True)
class GenericFreePushout:
    """The generic-free pushout in Delta corresponding to an iesq square:

        [n]  --free_j-->  [n']
         ^                  ^
         | generic_f        | generic_g
        [k]  --free_i-->  [k']

    with free_j . generic_f = generic_g . free_i."""

    generic_f: DeltaMap   # [k] -> [n]
    free_i: DeltaMap      # [k] -> [k']
    generic_g: DeltaMap   # [k'] -> [n']
    free_j: DeltaMap      # [n] -> [n']

    def corners(self):
        return (self.generic_f.source, self.generic_f.target,
                self.free_i.target, self.free_j.target)


def iesq_to_pushout(sq):
    """The generic-free pushout in Delta matching an iesq square; free maps
    out of [0] are pinned by commutativity (value = offset a)."""
    generic_f = joyal_dual_inv(sq.f)
    generic_g = joyal_dual_inv(sq.g)
    a, b = sq.a, sq.b
    free_i = DeltaMap(sq.k, a + sq.k + b, tuple(range(a, a + sq.k + 1)))
    free_j = DeltaMap(sq.n, a + sq.n + b, tuple(range(a, a + sq.n + 1)))
    assert compose_delta(free_j, generic_f).values == compose_delta(generic_g, free_i).values
    return GenericFreePushout(generic_f, free_i, generic_g, free_j)


def enumerate_iesq(max_a, max_b, max_n, max_k, include_trivial=True):
    """All iesq squares with a <= max_a, b <= max_b, and f among the maps
    underline-n -> underline-k for n <= max_n, k <= max_k.  Each square is
    paired with its generic-free pushout in Delta."""
    out = []
    for a in range(max_a + 1):
        for b in range(max_b + 1):
            if a == 0 and b == 0 and not include_trivial:
                continue
            for n in range(max_n + 1):
                for k in range(max_k + 1):
                    for f in all_ul_maps(n, k):
                        sq = IesqSquare(a, b, f)
                        out.append((sq, iesq_to_pushout(sq)))
    return out


def enumerate_iesq_within_corners(bound, include_trivial=True):
    """All iesq squares whose four Delta-pushout corners are <= bound."""
    out = []
    for a in range(bound + 1):
        for b in range(bound - a + 1):
            if a == 0 and b == 0 and not include_trivial:
                continue
            rest = bound - a - b
            for n in range(rest + 1):
                for k in range(rest + 1):
                    for f in all_ul_maps(n, k):
                        sq = IesqSquare(a, b, f)
                        out.append((sq, iesq_to_pushout(sq)))
    return out

"""Pure-Python kernel for colored relational structures.

A structure is (n, colors, rels): n vertices, a color per vertex, and a
tuple of n-by-n integer matrices (partial orders, edge multiplicities,
second orders, ...).  The two primitives here are the inner loop of the
whole package: canonical forms (for iso-class keys) and isomorphism
enumeration (for groupoid hom-sets).

A compiled twin of this module lives in _speedups.pyx; _kernel selects
one of the two at import time.  Keep the semantics of both in sync.
"""

IMPLEMENTATION = "python"


def _segment(v, placed, colors, rels):
    # All code entries contributed by placing vertex v after `placed`.
    seg = [colors[v]]
    for m in rels:
        row = m[v]
        for u in placed:
            seg.append(row[u])
        seg.append(row[v])
        for u in placed:
            seg.append(m[u][v])
    return tuple(seg)


def canonical_form(n, colors, rels):
    """Canonicalize a colored relational structure.

    Returns (placement, aut_count, canon_colors, canon_rels) where
    placement[pos] is the original vertex put at position pos, the
    canonical encoding is the lexicographically least one over all
    placements, and aut_count is the number of placements achieving it
    (= the automorphism group order).
    """
    if n == 0:
        return (), 1, (), tuple(() for _ in rels)

    best = None          # list of per-position segments
    best_perm = None
    count = 0

    def dfs(depth, placed, used, tight, current):
        nonlocal best, best_perm, count
        if depth == n:
            if tight and best is not None:
                count += 1
            else:
                best = list(current)
                best_perm = tuple(placed)
                count = 1
            return
        candidates = []
        for v in range(n):
            if not used[v]:
                candidates.append((_segment(v, placed, colors, rels), v))
        candidates.sort()
        for seg, v in candidates:
            new_tight = tight
            if tight and best is not None:
                b = best[depth]
                if seg > b:
                    break  # candidates sorted: the rest are worse
                if seg < b:
                    new_tight = False
            used[v] = True
            placed.append(v)
            current.append(seg)
            dfs(depth + 1, placed, used, new_tight, current)
            current.pop()
            placed.pop()
            used[v] = False

    dfs(0, [], [False] * n, True, [])

    canon_colors = tuple(colors[v] for v in best_perm)
    canon_rels = tuple(
        tuple(tuple(m[best_perm[i]][best_perm[j]] for j in range(n)) for i in range(n))
        for m in rels
    )
    return best_perm, count, canon_colors, canon_rels


def _profile(n, colors, rels):
    # Per-vertex invariant used to prune the isomorphism search.
    prof = []
    for v in range(n):
        item = [colors[v]]
        for m in rels:
            item.append(m[v][v])
            item.append(tuple(sorted(zip(m[v], colors))))
            item.append(tuple(sorted((m[u][v], colors[u]) for u in range(n))))
        prof.append(tuple(item))
    return prof


def isomorphisms(colors_a, rels_a, colors_b, rels_b):
    """All bijections m with colors_b[m[i]] == colors_a[i] and
    rels_b[r][m[i]][m[j]] == rels_a[r][i][j] for every relation r."""
    n = len(colors_a)
    if n != len(colors_b):
        return []
    if n == 0:
        return [()]
    prof_a = _profile(n, colors_a, rels_a)
    prof_b = _profile(n, colors_b, rels_b)
    if sorted(prof_a) != sorted(prof_b):
        return []
    candidates = [[j for j in range(n) if prof_b[j] == prof_a[i]] for i in range(n)]

    result = []
    mapping = [-1] * n
    used = [False] * n

    def dfs(i):
        if i == n:
            result.append(tuple(mapping))
            return
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for r in range(len(rels_a)):
                ma, mb = rels_a[r], rels_b[r]
                mai, mbj = ma[i], mb[j]
                for k in range(i):
                    mk = mapping[k]
                    if mai[k] != mbj[mk] or ma[k][i] != mb[mk][j]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                mapping[i] = j
                used[j] = True
                dfs(i + 1)
                used[j] = False
                mapping[i] = -1

    dfs(0)
    return result

# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel: canonical forms and isomorphism enumeration.

Semantics must match _kernel_py exactly; tests/test_kernel.py compares
the two on random structures.  Matrices are flattened to C int arrays so
the inner loops run on C integers.
"""

from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython"


cdef tuple _seg_of(int v, int depth, int n, int nrels, long *col, long *mat,
                   int *placed):
    cdef int u, r, base
    s = [col[v]]
    for r in range(nrels):
        base = (r * n + v) * n
        for u in range(depth):
            s.append(mat[base + placed[u]])
        s.append(mat[base + v])
        for u in range(depth):
            s.append(mat[(r * n + placed[u]) * n + v])
    return tuple(s)


cdef void _canon_dfs(int depth, bint tight, int n, int nrels, long *col,
                     long *mat, int *placed, bint *used, list current,
                     dict best):
    cdef int v
    cdef bint new_tight
    if depth == n:
        if tight and best["code"] is not None:
            best["count"] += 1
        else:
            best["code"] = list(current)
            best["perm"] = tuple([placed[v] for v in range(n)])
            best["count"] = 1
        return
    cands = []
    for v in range(n):
        if not used[v]:
            cands.append((_seg_of(v, depth, n, nrels, col, mat, placed), v))
    cands.sort()
    for seg, vv in cands:
        v = vv
        new_tight = tight
        if tight and best["code"] is not None:
            b = best["code"][depth]
            if seg > b:
                break
            if seg < b:
                new_tight = 0
        used[v] = 1
        placed[depth] = v
        current.append(seg)
        _canon_dfs(depth + 1, new_tight, n, nrels, col, mat, placed, used,
                   current, best)
        current.pop()
        used[v] = 0


def canonical_form(int n, colors, rels):
    """See _kernel_py.canonical_form."""
    if n == 0:
        return (), 1, (), tuple(() for _ in rels)

    cdef int nrels = len(rels)
    cdef int i, j, r
    cdef long *col = <long *> malloc(n * sizeof(long))
    cdef long *mat = <long *> malloc(max(1, nrels * n * n) * sizeof(long))
    for i in range(n):
        col[i] = colors[i]
    for r in range(nrels):
        m = rels[r]
        for i in range(n):
            row = m[i]
            for j in range(n):
                mat[(r * n + i) * n + j] = row[j]

    cdef int *placed = <int *> malloc(n * sizeof(int))
    cdef bint *used = <bint *> malloc(n * sizeof(bint))
    for i in range(n):
        used[i] = 0

    best = {"code": None, "perm": None, "count": 0}
    _canon_dfs(0, 1, n, nrels, col, mat, placed, used, [], best)

    perm = best["perm"]
    canon_colors = tuple([col[perm[i]] for i in range(n)])
    canon_rels = tuple(
        tuple(
            tuple([mat[(r * n + perm[i]) * n + perm[j]] for j in range(n)])
            for i in range(n)
        )
        for r in range(nrels)
    )
    count = best["count"]
    free(col)
    free(mat)
    free(placed)
    free(used)
    return perm, count, canon_colors, canon_rels


cdef void _iso_dfs(int i, int n, int nrels, long *amat, long *bmat,
                   list candidates, int *mapping, bint *used, list result):
    cdef int j, k, r
    cdef bint ok
    if i == n:
        result.append(tuple([mapping[k] for k in range(n)]))
        return
    for jj in candidates[i]:
        j = jj
        if used[j]:
            continue
        ok = 1
        for r in range(nrels):
            for k in range(i):
                if amat[(r * n + i) * n + k] != bmat[(r * n + j) * n + mapping[k]]:
                    ok = 0
                    break
                if amat[(r * n + k) * n + i] != bmat[(r * n + mapping[k]) * n + j]:
                    ok = 0
                    break
            if not ok:
                break
        if ok:
            mapping[i] = j
            used[j] = 1
            _iso_dfs(i + 1, n, nrels, amat, bmat, candidates, mapping, used,
                     result)
            used[j] = 0
            mapping[i] = -1


def isomorphisms(colors_a, rels_a, colors_b, rels_b):
    """See _kernel_py.isomorphisms."""
    cdef int n = len(colors_a)
    if n != len(colors_b):
        return []
    if n == 0:
        return [()]
    cdef int nrels = len(rels_a)
    cdef int i, j, r

    prof_a = _profile(n, colors_a, rels_a)
    prof_b = _profile(n, colors_b, rels_b)
    if sorted(prof_a) != sorted(prof_b):
        return []
    candidates = [[j for j in range(n) if prof_b[j] == prof_a[i]]
                  for i in range(n)]

    cdef long *amat = <long *> malloc(max(1, nrels * n * n) * sizeof(long))
    cdef long *bmat = <long *> malloc(max(1, nrels * n * n) * sizeof(long))
    for r in range(nrels):
        ma, mb = rels_a[r], rels_b[r]
        for i in range(n):
            rowa, rowb = ma[i], mb[i]
            for j in range(n):
                amat[(r * n + i) * n + j] = rowa[j]
                bmat[(r * n + i) * n + j] = rowb[j]

    cdef int *mapping = <int *> malloc(n * sizeof(int))
    cdef bint *used = <bint *> malloc(n * sizeof(bint))
    for i in range(n):
        used[i] = 0
        mapping[i] = -1

    result = []
    _iso_dfs(0, n, nrels, amat, bmat, candidates, mapping, used, result)
    free(amat)
    free(bmat)
    free(mapping)
    free(used)
    return result


def _profile(int n, colors, rels):
    cdef int v, u
    prof = []
    for v in range(n):
        item = [colors[v]]
        for m in rels:
            item.append(m[v][v])
            item.append(tuple(sorted(zip(m[v], colors))))
            item.append(tuple(sorted([(m[u][v], colors[u]) for u in range(n)])))
        prof.append(tuple(item))
    return prof

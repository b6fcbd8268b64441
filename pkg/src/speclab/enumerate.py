"""Connected graphs up to isomorphism by canonical augmentation.

Level m+1 is built from level m by attaching a new highest-index vertex
to every nonempty subset of an existing representative, then keeping a
child only when the new vertex sits in the child's canonical deletion
orbit.  That orbit is selected isomorphism-invariantly among the
vertices whose removal keeps the graph connected: smallest refinement
color first, then orbit identity, then smallest canonical code of the
deleted graph, and for the rare pseudo-similar tie the orbit holding the
vertex placed earliest by the canonical labeling.  A child accepted from
one parent representative can then never be accepted from another, and
within one parent only subsets related by a parent automorphism can
collide, so parents with trivial automorphism group need no sibling
bookkeeping at all; the others deduplicate accepted children by
canonical code.

Refinement colors are assigned by sorted signature, so two isomorphic
graphs get identical color vectors up to the isomorphism; color order
refines degree order, which justifies the degree shortcuts.
"""

from __future__ import annotations

from typing import Iterator

from .errors import SizeLimitExceeded
from .graph import (
    CANONICAL_MAX_VERTICES,
    Graph,
    canonical_code,
    canonical_perm,
    iter_bits,
    reachable_mask,
)

_CACHE_MAX = 8
_LEVEL_CACHE: dict[int, list[tuple[int, ...]]] = {1: [(0,)]}


def _wl(rows, n):
    """Stable refinement colors, identical across isomorphic graphs."""
    colors = [rows[v].bit_count() for v in range(n)]
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in iter_bits(rows[v]))))
            for v in range(n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _has_automorphism(rows, n, colors, src, dst):
    """Is there an automorphism taking src to dst?"""
    if colors[src] != colors[dst]:
        return False
    if src == dst:
        return True
    perm = [-1] * n
    used = [False] * n
    perm[src] = dst
    used[dst] = True
    rest = sorted((v for v in range(n) if v != src), key=lambda v: (colors[v], v))
    mapped = [src]

    def bt(i):
        if i == len(rest):
            return True
        w = rest[i]
        rw = rows[w]
        for x in range(n):
            if used[x] or colors[x] != colors[w]:
                continue
            ok = True
            for p in mapped:
                if (rw >> p) & 1 != (rows[x] >> perm[p]) & 1:
                    ok = False
                    break
            if not ok:
                continue
            perm[w] = x
            used[x] = True
            mapped.append(w)
            if bt(i + 1):
                return True
            mapped.pop()
            used[x] = False
            perm[w] = -1
        return False

    return bt(0)


def _components_minus(rows, n, w):
    rem = ((1 << n) - 1) & ~(1 << w)
    comps = []
    todo = rem
    while todo:
        v = (todo & -todo).bit_length() - 1
        comp = reachable_mask(rows, 1 << v, rem)
        comps.append(comp)
        todo &= ~comp
    return comps


def _is_rigid(rows, n, colors):
    """True when the only automorphism is the identity."""
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    for members in by_color.values():
        for i in range(1, len(members)):
            if _has_automorphism(rows, n, colors, members[0], members[i]):
                return False
    return True


def _accept(child, n, w_set):
    """Does the new vertex (index n-1) lie in the canonical deletion orbit?"""
    vnew = n - 1
    colors = _wl(child, n)
    cmin = min(colors[w] for w in w_set)
    if colors[vnew] != cmin:
        return False
    w1 = [w for w in w_set if colors[w] == cmin]
    if len(w1) == 1:
        return True
    root = {w: w for w in w1}

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for i in range(len(w1)):
        for j in range(i + 1, len(w1)):
            a, b = find(w1[i]), find(w1[j])
            if a != b and _has_automorphism(child, n, colors, w1[i], w1[j]):
                root[b] = a
    orbits: dict[int, list[int]] = {}
    for w in w1:
        orbits.setdefault(find(w), []).append(w)
    if len(orbits) == 1:
        return True
    g = Graph(child)
    codes = {r: canonical_code(g.delete_vertex(min(ws))) for r, ws in orbits.items()}
    best = min(codes.values())
    mine = find(vnew)
    if codes[mine] != best:
        return False
    tied = [r for r, c in codes.items() if c == best]
    if len(tied) == 1:
        return True
    # pseudo-similar orbits: break the tie by canonical position
    perm = canonical_perm(g)
    pool = [w for r in tied for w in orbits[r]]
    d = min(pool, key=lambda w: perm[w])
    return find(d) == mine


def _children(parent: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    m = len(parent)
    n = m + 1
    bit_new = 1 << m
    comps_per_w = [_components_minus(parent, m, w) for w in range(m)]
    pdeg = [parent[w].bit_count() for w in range(m)]
    rigid = _is_rigid(parent, m, _wl(parent, m))
    seen: set[bytes] = set()
    for subset in range(1, 1 << m):
        child = list(parent)
        for i in iter_bits(subset):
            child[i] |= bit_new
        child.append(subset)
        child = tuple(child)
        w_set = [
            w
            for w in range(m)
            if all(c & subset & ~(1 << w) for c in comps_per_w[w])
        ]
        deg_new = subset.bit_count()
        low = min(pdeg[w] + ((subset >> w) & 1) for w in w_set)
        if deg_new > low:
            continue
        w_set.append(m)
        if deg_new < low:
            accepted = True  # strictly smallest degree is strictly smallest color
        else:
            accepted = _accept(child, n, w_set)
        if not accepted:
            continue
        if not rigid:
            code = canonical_code(Graph(child))
            if code in seen:
                continue
            seen.add(code)
        yield child


def _iter_level(m: int):
    if m in _LEVEL_CACHE:
        return iter(_LEVEL_CACHE[m])
    if m <= _CACHE_MAX:
        level = [c for p in _iter_level(m - 1) for c in _children(p)]
        _LEVEL_CACHE[m] = level
        return iter(level)
    return (c for p in _iter_level(m - 1) for c in _children(p))


def enumerate_connected(n: int) -> Iterator[Graph]:
    """All connected graphs on n vertices, one per isomorphism class."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > CANONICAL_MAX_VERTICES:
        raise SizeLimitExceeded(
            f"enumeration limited to {CANONICAL_MAX_VERTICES} vertices, got {n}"
        )
    return (Graph(rows) for rows in _iter_level(n))


def enumerate_connected_slice(n: int, part: int, parts: int) -> Iterator[Graph]:
    """Slice `part` of `parts` of enumerate_connected(n), split by final
    augmentation branch (children of every parts-th (n-1)-vertex parent).

    The slices are disjoint and their union over part = 0..parts-1 is
    exactly enumerate_connected(n); slicing never changes which graphs
    appear, only which worker produces them.
    """
    if parts < 1 or not 0 <= part < parts:
        raise ValueError("need 0 <= part < parts")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > CANONICAL_MAX_VERTICES:
        raise SizeLimitExceeded(
            f"enumeration limited to {CANONICAL_MAX_VERTICES} vertices, got {n}"
        )
    if n == 1:
        if part == 0:
            yield Graph((0,))
        return
    parents = list(_iter_level(n - 1))
    for p in parents[part::parts]:
        for rows in _children(p):
            yield Graph(rows)

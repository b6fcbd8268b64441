"""Maximum cardinality matching in general graphs (blossom contraction).

Greedy initialization followed by alternating-tree BFS from each free
vertex; odd cycles are contracted by rebasing vertices onto the blossom
stem.  stop_at lets callers exit once the matching is provably large
enough, which is what the witness searches use.
"""

from __future__ import annotations

from collections import deque

from .graph import Graph, iter_bits


def max_matching(g: Graph, stop_at: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Return (size, match) where match[v] is v's partner or -1.

    With stop_at the search ends as soon as the matching reaches that
    many edges, so the result is only guaranteed maximum when its size
    is below stop_at.
    """
    n = g.n
    match = [-1] * n
    for u in range(n):
        if match[u] == -1:
            for v in iter_bits(g.rows[u]):
                if match[v] == -1:
                    match[u] = v
                    match[v] = u
                    break

    p = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def try_augment(root: int) -> bool:
        for i in range(n):
            p[i] = -1
            base[i] = i
        used = [False] * n
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in iter_bits(g.rows[v]):
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    curbase = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, curbase, to, blossom)
                    mark_path(to, curbase, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        # flip the alternating path back to the root
                        u2 = to
                        while u2 != -1:
                            pv = p[u2]
                            ppv = match[pv]
                            match[u2] = pv
                            match[pv] = u2
                            u2 = ppv
                        return True
                    used[match[to]] = True
                    q.append(match[to])
        return False

    size = sum(1 for v in match if v != -1) // 2
    for u in range(n):
        if stop_at is not None and size >= stop_at:
            break
        if match[u] == -1 and try_augment(u):
            size += 1
    return size, tuple(match)

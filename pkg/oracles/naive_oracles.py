"""Independent brute-force oracles for the golden values frozen in tests.

These deliberately avoid the package's optimised paths: sieves are found by
filtering *all* subsets with a directly-quantified closure test, natural
transformations by filtering the full function-space product, components by
breadth-first search instead of union-find, and points of Omega by counting
subpresheaves of the terminal object (the classifier property), which never
looks at Omega at all.

Run ``python3 oracles/run_all.py`` to print every golden value used by the
test suite.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))



def sieves_by_filter(cat, c):
    """All sieves at c by subset filtering (quantifier written directly)."""
    arrows = [m for m in range(cat.morphism_count) if cat.cod(m) == c]
    out = []
    for r in range(len(arrows) + 1):
        for combo in itertools.combinations(arrows, r):
            s = set(combo)
            ok = True
            for f in s:
                for g in range(cat.morphism_count):
                    if cat.cod(g) == cat.dom(f) and cat.table[f][g] not in s:
                        ok = False
            if ok:
                out.append(frozenset(s))
    return out


def omega_stage_sizes(cat):
    return tuple(len(sieves_by_filter(cat, c))
                 for c in range(cat.object_count))


def subpresheaves_of_terminal(cat):
    """Count subpresheaves of 1; classifier property makes this |Hom(1,Omega)|."""
    count = 0
    for mask in range(1 << cat.object_count):
        chosen = {c for c in range(cat.object_count) if mask >> c & 1}
        closed = all(cat.dom(m) in chosen
                     for m in range(cat.morphism_count)
                     if cat.cod(m) in chosen)
        if closed:
            count += 1
    return count


def nat_transformations_by_filter(X, Y, limit=2_000_000):
    """All natural maps X -> Y by filtering the full function space."""
    cat = X.base
    spaces = []
    for c in range(cat.object_count):
        funcs = list(itertools.product(range(Y.stages[c]),
                                       repeat=X.stages[c]))
        spaces.append(funcs)
    total = 1
    for s in spaces:
        total *= len(s)
    if total > limit:
        raise RuntimeError(f"function space too large: {total}")
    out = []
    for combo in itertools.product(*spaces):
        natural = True
        for m in range(cat.morphism_count):
            a, b = cat.dom(m), cat.cod(m)
            for x in range(X.stages[b]):
                if combo[a][X.actions[m][x]] != \
                        Y.actions[m][combo[b][x]]:
                    natural = False
                    break
            if not natural:
                break
        if natural:
            out.append(combo)
    return out


def components_by_bfs(X):
    """Connected components of the category of elements, by BFS."""
    cat = X.base
    nodes = [(c, x) for c in range(cat.object_count)
             for x in range(X.stages[c])]
    adj = {node: set() for node in nodes}
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        for x in range(X.stages[b]):
            u, v = (b, x), (a, X.actions[m][x])
            adj[u].add(v)
            adj[v].add(u)
    seen = set()
    count = 0
    for node in nodes:
        if node in seen:
            continue
        count += 1
        frontier = [node]
        seen.add(node)
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
    return count


def exponential_stage_by_filter(topos, X, Y, c, limit=2_000_000):
    """Stage c of Y^X by filtering all slot assignments (tiny cases only)."""
    cat = topos.cat
    slots = []
    for u in range(cat.morphism_count):
        if cat.cod(u) != c:
            continue
        for x in range(X.stages[cat.dom(u)]):
            slots.append((u, x))
    total = 1
    for (u, _x) in slots:
        total *= Y.stages[cat.dom(u)]
    if total > limit:
        raise RuntimeError(f"slot space too large: {total}")
    out = []
    for vec in itertools.product(*[range(Y.stages[cat.dom(u)])
                                   for (u, _x) in slots]):
        val = dict(zip(slots, vec))
        natural = True
        for i, (u, x) in enumerate(slots):
            d = cat.dom(u)
            for m in range(cat.morphism_count):
                if cat.cod(m) != d:
                    continue
                u2 = cat.table[u][m]
                if val[(u2, X.actions[m][x])] != \
                        Y.actions[m][vec[i]]:
                    natural = False
                    break
            if not natural:
                break
        if natural:
            out.append(vec)
    return out

"""Backtracking enumerator for table-valued constraint problems.

Everything countable in this package (natural transformations, exponential
stages, matching families, global elements) reduces to the same shape:
finitely many variables with finite integer domains and *functional* binary
constraints "assigning v to variable s forces table[v] on variable d".
Constraints are propagated eagerly (unit propagation over the rule graph),
which is exactly arc-consistency for functional constraints, so the search
never explores a branch whose failure is already implied.

Solutions are emitted in a deterministic order: depth-first over variables
in index order, candidate values ascending.  Every assignment attempt
counts against the caller's budget; running out raises BudgetExceeded with
the caller's context attached, never a truncated answer.
"""

from __future__ import annotations

from .errors import BudgetExceeded


class Budget:
    """Mutable expansion counter shared across one logical operation."""

    __slots__ = ("left", "context")

    def __init__(self, limit, context=None):
        self.left = limit
        self.context = context or {}

    def spend(self, n=1):
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded(
                f"enumeration budget exhausted ({self.context})",
                context=self.context)


class Problem:
    """A functional-constraint table problem.

    rules[s] is a list of (value_table, d): assigning v to s forces
    value_table[v] on d.  Rules may be cyclic; propagation handles that.
    """

    __slots__ = ("domains", "rules", "pinned", "_order")

    def __init__(self, domains):
        self.domains = list(domains)
        self.rules = [[] for _ in domains]
        self.pinned = []
        self._order = None

    def add_rule(self, src, table, dst):
        self.rules[src].append((table, dst))
        self._order = None

    def pin(self, var, value):
        self.pinned.append((var, value))

    def search_order(self):
        """Deterministic maximum-cardinality variable order.

        Starts from the highest-fanout variable and repeatedly appends the
        variable most connected (by rules, in either direction) to those
        already placed, so every assignment is checked against the
        neighbours it constrains instead of failing deep in the tree.
        """
        if self._order is not None:
            return self._order
        n = len(self.domains)
        adj = [set() for _ in range(n)]
        for s in range(n):
            for _tab, d in self.rules[s]:
                if d != s:
                    adj[s].add(d)
                    adj[d].add(s)
        placed = [False] * n
        score = [0] * n
        order = []
        for _ in range(n):
            best = -1
            for v in range(n):
                if placed[v]:
                    continue
                if best < 0 or (score[v], len(self.rules[v]), -v) > \
                        (score[best], len(self.rules[best]), -best):
                    best = v
            placed[best] = True
            order.append(best)
            for w in adj[best]:
                if not placed[w]:
                    score[w] += 1
        self._order = order
        return self._order


def solve(problem, budget, *, max_solutions=None, on_solution=None,
          pins=None):
    """Enumerate assignments; returns list unless ``on_solution`` streams.

    ``max_solutions`` stops the search after that many solutions (used for
    first-solution satisfiability probes and for hom-set caps: the caller
    distinguishes "hit the cap" by asking for cap+1).  ``pins`` overrides
    ``problem.pinned`` so one immutable problem can serve many probes.
    """
    n = len(problem.domains)
    assign = [-1] * n
    trail = []
    rules = problem.rules
    pinned = problem.pinned if pins is None else pins

    def propagate(var, val):
        stack = [(var, val)]
        while stack:
            u, v = stack.pop()
            cur = assign[u]
            if cur == v:
                continue
            if cur != -1:
                return False
            budget.spend()
            assign[u] = v
            trail.append(u)
            for table, dst in rules[u]:
                stack.append((dst, table[v]))
        return True

    def undo(mark):
        while len(trail) > mark:
            assign[trail.pop()] = -1

    results = [] if on_solution is None else None
    emit = on_solution if on_solution is not None else results.append
    count = 0

    mark0 = len(trail)
    for var, val in pinned:
        if val >= problem.domains[var] or not propagate(var, val):
            undo(mark0)
            return results if results is not None else 0

    # iterative DFS over unassigned variables, most-constraining first
    order = problem.search_order()

    def next_free(start):
        i = start
        while i < n and assign[order[i]] != -1:
            i += 1
        return i

    stack = []  # (position in order, next_value_to_try, trail_mark)
    pos = next_free(0)
    if pos == n:
        emit(tuple(assign))
        undo(mark0)
        return results if results is not None else 1
    stack.append([pos, 0, len(trail)])

    while stack:
        frame = stack[-1]
        pos, nxt, mark = frame
        v = order[pos]
        undo(mark)
        if nxt >= problem.domains[v]:
            stack.pop()
            continue
        frame[1] += 1
        if not propagate(v, nxt):
            undo(mark)
            continue
        free = next_free(pos + 1)
        if free == n:
            emit(tuple(assign))
            count += 1
            if max_solutions is not None and count >= max_solutions:
                break
            undo(mark)
            continue
        stack.append([free, 0, len(trail)])

    undo(mark0)
    return results if results is not None else count

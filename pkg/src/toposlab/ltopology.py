"""Lawvere-Tierney topologies: closure, density, quotients, sheafification.

A topology is stored as one index map on sieves per site object.  The
modality axioms are checked semantically: j fixes the maximal sieve, is
idempotent, preserves binary meets, and is natural as a map Omega -> Omega.

R_j(X) is realised as the j-closure of the diagonal in X x X; Q_j(X) is the
pointwise quotient with the induced action.  Sheafification translates j to
the Grothendieck coverage "S covers c iff j(S) is maximal" and applies the
plus construction twice; since j preserves meets the covering sieves at c
are closed under intersection and have a minimum, so matching families are
indexed by the minimal cover, which keeps the construction small and its
element order canonical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .enumeration import Budget, Problem, solve
from .errors import BudgetExceeded, InternalCheckFailure, ShapeMismatch
from .presheaf import Presheaf, PresheafMap, Subobject, Topos
from .utils import UnionFind


@dataclass(frozen=True)
class LTTopology:
    tables: tuple   # per object: tuple mapping sieve index -> sieve index
    label: str = ""

    def as_map(self, topos):
        om = topos.omega().presheaf
        return PresheafMap(om, om, self.tables, label=self.label)


def validate_topology(topos: Topos, j: LTTopology):
    """Violations of the three modality axioms plus naturality."""
    om = topos.omega()
    out = []
    jm = j.as_map(topos)
    if jm.validate():
        out.append(("naturality", jm.validate()[:3]))
    for c in range(topos.cat.object_count):
        tab = j.tables[c]
        top = om.top_index(c)
        if tab[top] != top:
            out.append(("top-fixed", c))
        sieves = om.sieves[c]
        index = om.index[c]
        for i, s in enumerate(sieves):
            if not s <= sieves[tab[i]]:
                out.append(("inflationary", (c, i)))
            if tab[tab[i]] != tab[i]:
                out.append(("idempotent", (c, i)))
        for i, s in enumerate(sieves):
            for k, s2 in enumerate(sieves):
                meet = index[s & s2]
                if tab[meet] != index[sieves[tab[i]] & sieves[tab[k]]]:
                    out.append(("meet-preserving", (c, i, k)))
    return out


def identity_topology(topos: Topos):
    om = topos.omega()
    return LTTopology(tuple(tuple(range(len(s))) for s in om.sieves),
                      label="identity")


def double_negation(topos: Topos):
    """j = neg∘neg from the Heyting negation of Omega."""
    om = topos.omega()
    nn = om.neg @ om.neg
    j = LTTopology(nn.components, label="neg-neg")
    bad = validate_topology(topos, j)
    if bad:
        raise InternalCheckFailure(f"double negation fails axioms: {bad[:3]}")
    return j


def enumerate_topologies(topos: Topos):
    """Exhaustive list of Lawvere-Tierney topologies on the site.

    Brute force per stage (axioms prune candidates) then a global
    naturality filter; deterministic order by the stage tables.
    """
    om = topos.omega()
    cat = topos.cat
    per_stage = []
    for c in range(cat.object_count):
        sieves = om.sieves[c]
        index = om.index[c]
        n = len(sieves)
        top = om.top_index(c)
        budget = n ** n
        if budget > 200_000:
            raise BudgetExceeded("topology enumeration beyond desk scale",
                                 context={"stage": c, "candidates": budget})
        good = []
        for tab in itertools.product(range(n), repeat=n):
            if tab[top] != top:
                continue
            if any(not sieves[i] <= sieves[tab[i]] for i in range(n)):
                continue
            if any(tab[tab[i]] != tab[i] for i in range(n)):
                continue
            ok = True
            for i in range(n):
                for k in range(i, n):
                    meet = index[sieves[i] & sieves[k]]
                    if tab[meet] != index[sieves[tab[i]] & sieves[tab[k]]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                good.append(tab)
        per_stage.append(good)
    out = []
    for combo in itertools.product(*per_stage):
        j = LTTopology(tuple(combo))
        if not j.as_map(topos).validate():
            out.append(j)
    for i, j in enumerate(out):
        object.__setattr__(j, "label", f"j{i}")
    return out


# ----- closure, density, separatedness --------------------------------------


def closure(topos: Topos, sub: Subobject, j: LTTopology) -> Subobject:
    """j-closure: classified by j∘char(sub)."""
    chi = topos.char(sub)
    jm = j.as_map(topos)
    return topos.sub_of_char(jm @ chi)


def is_dense(topos, sub, j):
    full = Subobject(sub.of, tuple(tuple(range(s)) for s in sub.of.stages))
    return closure(topos, sub, j).selected == full.selected


def is_closed(topos, sub, j):
    return closure(topos, sub, j).selected == sub.selected


def is_separated(topos, X, j):
    """X separated iff its diagonal is j-closed in X x X."""
    diag = topos.diagonal(X)
    return closure(topos, diag, j).selected == diag.selected


def dense_mono(topos, m, j):
    """Is the mono m dense? (image must be j-dense in the codomain)."""
    if not topos.is_mono(m):
        return False
    selected = tuple(tuple(sorted(set(m.components[c])))
                     for c in range(topos.cat.object_count))
    return is_dense(topos, Subobject(m.cod, selected), j)


# ----- the modality quotient Q_j ---------------------------------------------


def mod_relation(topos: Topos, X, j: LTTopology) -> Subobject:
    """R_j(X): the j-closure of the diagonal, verified an equivalence."""
    R = closure(topos, topos.diagonal(X), j)
    prod = topos.product(X, X)
    for c in range(topos.cat.object_count):
        sel = set(R.selected[c])
        n = X.stages[c]
        pairs = {prod.split_index(c, p) for p in sel}
        for x in range(n):
            if (x, x) not in pairs:
                raise InternalCheckFailure("R_j not reflexive")
        for (x, y) in pairs:
            if (y, x) not in pairs:
                raise InternalCheckFailure("R_j not symmetric")
        for (x, y) in pairs:
            for (y2, z) in pairs:
                if y2 == y and (x, z) not in pairs:
                    raise InternalCheckFailure("R_j not transitive")
    return R


@dataclass(frozen=True)
class QuotientResult:
    relation: Subobject
    presheaf: Presheaf
    q: PresheafMap


def quotient(topos: Topos, X, j: LTTopology) -> QuotientResult:
    """Q_j(X) with its projection; the action must descend (bug trap)."""
    R = mod_relation(topos, X, j)
    prod = topos.product(X, X)
    cat = topos.cat
    labels = []
    for c in range(cat.object_count):
        uf = UnionFind(X.stages[c])
        for p in R.selected[c]:
            x, y = prod.split_index(c, p)
            uf.union(x, y)
        labels.append(uf.canonical_labels())
    stages = tuple((max(lab) + 1) if lab else 0 for lab in labels)
    actions = []
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        row = [None] * stages[b]
        for x in range(X.stages[b]):
            k = labels[b][x]
            v = labels[a][X.actions[m][x]]
            if row[k] is None:
                row[k] = v
            elif row[k] != v:
                raise InternalCheckFailure("Q_j action does not descend")
        actions.append(tuple(row))
    Q = Presheaf(cat, stages, tuple(actions), label=f"Q({X.label})")
    q = PresheafMap(X, Q, tuple(tuple(lab) for lab in labels))
    return QuotientResult(R, Q, q)


def quotient_universal(topos: Topos, X, j, f):
    """Unique mediator through q, or (None, witness pair breaking it).

    Uniqueness is verified by exhausting all maps Q -> Y that satisfy the
    factorisation, not just constructing one.
    """
    qres = quotient(topos, X, j)
    prod = topos.product(X, X)
    for c in range(topos.cat.object_count):
        for p in qres.relation.selected[c]:
            x, y = prod.split_index(c, p)
            if f.components[c][x] != f.components[c][y]:
                return None, {"stage": c, "pair": (x, y)}
    comps = []
    for c in range(topos.cat.object_count):
        row = [None] * qres.presheaf.stages[c]
        for x in range(X.stages[c]):
            row[qres.q.components[c][x]] = f.components[c][x]
        comps.append(tuple(row))
    mediator = PresheafMap(qres.presheaf, f.cod, tuple(comps))
    if mediator.validate():
        raise InternalCheckFailure("mediator is not natural")
    # uniqueness: exhaustive mediator search at desk scale; past the cap it
    # follows from q being pointwise surjective (checked), which makes two
    # factorisations agree elementwise
    try:
        matches = [m for m in topos.hom_set(qres.presheaf, f.cod,
                                            cap=20_000)
                   if (m @ qres.q).same_table(f)]
        if len(matches) != 1:
            raise InternalCheckFailure(
                f"mediator not unique: {len(matches)} candidates")
    except BudgetExceeded:
        if not qres.q.is_pointwise_surjective():
            raise InternalCheckFailure("quotient map is not epi")
    return mediator, None


# ----- sheafification ---------------------------------------------------------


@dataclass(frozen=True)
class Coverage:
    covers: tuple       # per object: tuple of covering sieve indices
    minimal: tuple      # per object: the minimal covering sieve (frozenset)


def coverage_of(topos: Topos, j: LTTopology) -> Coverage:
    """S covers c iff j(S) is the maximal sieve."""
    om = topos.omega()
    covers = []
    minimal = []
    for c in range(topos.cat.object_count):
        top = om.top_index(c)
        idxs = tuple(i for i in range(len(om.sieves[c]))
                     if j.tables[c][i] == top)
        covers.append(idxs)
        m = frozenset(topos.cat.into(c))
        for i in idxs:
            m = m & om.sieves[c][i]
        minimal.append(m)
    cov = Coverage(tuple(covers), tuple(minimal))
    om_index = om.index
    for c, m in enumerate(cov.minimal):
        if om_index[c][m] not in cov.covers[c]:
            raise InternalCheckFailure(
                "covering sieves not closed under intersection")
    return cov


def topology_of_coverage(topos: Topos, cov: Coverage) -> LTTopology:
    """The round-trip j(S) = {f : f*(S) covers}, for coverage tests."""
    om = topos.omega()
    cat = topos.cat
    tables = []
    for c in range(cat.object_count):
        covers_c = {om.sieves[c][i] for i in cov.covers[c]}
        row = []
        for S in om.sieves[c]:
            members = frozenset(
                u for u in cat.into(c)
                if frozenset(g for g in cat.into(cat.dom(u))
                             if cat.table[u][g] in S)
                in {om.sieves[cat.dom(u)][i]
                    for i in cov.covers[cat.dom(u)]})
            row.append(om.index[c][members])
        tables.append(tuple(row))
    return LTTopology(tuple(tables))


def matching_families(topos: Topos, F, sieve_members, c, *, budget):
    """All matching families for a sieve at c, in enumerator order."""
    cat = topos.cat
    members = sorted(sieve_members)
    pos = {g: i for i, g in enumerate(members)}
    problem = Problem([F.stages[cat.dom(g)] for g in members])
    for g in members:
        d = cat.dom(g)
        for m in cat.into(d):
            gm = cat.table[g][m]
            problem.add_rule(pos[g], F.actions[m], pos[gm])
    return members, solve(problem, budget)


def plus_construction(topos: Topos, F, cov: Coverage):
    """F+ indexed by matching families on each minimal covering sieve."""
    cat = topos.cat
    members = []
    families = []
    for c in range(cat.object_count):
        budget = Budget(topos.config.budget,
                        context={"op": "plus", "stage": c})
        mem, fams = matching_families(topos, F, cov.minimal[c], c,
                                      budget=budget)
        members.append(mem)
        families.append(tuple(fams))
    index = [{fam: i for i, fam in enumerate(fams)} for fams in families]
    stages = tuple(len(f) for f in families)
    actions = []
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        row = []
        for fam in families[b]:
            new = tuple(fam[members[b].index(cat.table[m][g])]
                        for g in members[a])
            row.append(index[a][new])
        actions.append(tuple(row))
    Fp = Presheaf(cat, stages, tuple(actions), label=f"{F.label}+")
    unit_comps = []
    for c in range(cat.object_count):
        row = []
        for x in range(F.stages[c]):
            fam = tuple(F.actions[g][x] for g in members[c])
            row.append(index[c][fam])
        unit_comps.append(tuple(row))
    unit = PresheafMap(F, Fp, tuple(unit_comps))
    return Fp, unit


def is_sheaf(topos: Topos, F, cov: Coverage):
    """Restriction to every covering sieve is bijective at every object."""
    cat = topos.cat
    om = topos.omega()
    for c in range(cat.object_count):
        for i in cov.covers[c]:
            budget = Budget(topos.config.budget,
                            context={"op": "sheaf-check", "stage": c})
            members, fams = matching_families(
                topos, F, om.sieves[c][i], c, budget=budget)
            images = set()
            for x in range(F.stages[c]):
                fam = tuple(F.actions[g][x] for g in members)
                images.add(fam)
            if len(images) != F.stages[c] or set(fams) != images:
                return False
    return True


@dataclass(frozen=True)
class SheafifyResult:
    presheaf: Presheaf
    unit: PresheafMap   # l: X -> LX
    coverage: Coverage


def sheafify(topos: Topos, X, j: LTTopology) -> SheafifyResult:
    """L(X) by the plus construction applied twice, with the unit."""
    key = ("sheafify", X.digest,
           tuple(j.tables))

    def build():
        cov = coverage_of(topos, j)
        F1, u1 = plus_construction(topos, X, cov)
        F2, u2 = plus_construction(topos, F1, cov)
        if not is_sheaf(topos, F2, cov):
            raise InternalCheckFailure("plus-plus did not produce a sheaf")
        LX = F2.relabel(f"L({X.label})")
        unit = PresheafMap(X, LX, (u2 @ u1).components)
        return SheafifyResult(LX, unit, cov)
    return topos._memo(key, build)


def homotopy_lift(topos: Topos, K, h, f, X, j: LTTopology):
    """Unique h': K x LX -> LX with h'∘(1 x l_X) = f∘h.

    ``h``: K x X -> Y (an explicit homotopy), ``f``: Y -> LX.  Enumerates
    all candidates satisfying the pinned square and asserts uniqueness.
    """
    sh = sheafify(topos, X, j)
    LX = sh.presheaf
    lx = sh.unit
    cat = topos.cat
    fh = f @ h
    prod_kx = topos.product(K, X)
    if h.dom.digest != prod_kx.presheaf.digest:
        raise ShapeMismatch("h must have domain K x X from this topos")
    prod_klx = topos.product(K, LX)
    problem, offs = topos.hom_problem(prod_klx.presheaf, LX)
    for c in range(cat.object_count):
        for k in range(K.stages[c]):
            for x in range(X.stages[c]):
                src = prod_klx.pair_index(c, k, lx.components[c][x])
                val = fh.components[c][prod_kx.pair_index(c, k, x)]
                problem.pin(offs[c] + src, val)
    budget = Budget(topos.config.budget, context={"op": "homotopy-lift"})
    rows = solve(problem, budget, max_solutions=None)
    if len(rows) == 0:
        return None, {"reason": "no extension exists"}
    if len(rows) > 1:
        return None, {"reason": f"extension not unique: {len(rows)}"}
    comps = tuple(
        tuple(rows[0][offs[c]:offs[c] + prod_klx.presheaf.stages[c]])
        for c in range(cat.object_count))
    return PresheafMap(prod_klx.presheaf, LX, comps), None

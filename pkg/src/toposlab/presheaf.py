"""Finite presheaves on a site, their maps, (co)limits, Omega and exponentials.

Stage elements are always the naturals 0..n-1 in a canonical order so that
every construction is reproducible bit for bit:

* product:      (x, y) at index  x * |Y(c)| + y
* coproduct:    X's elements first, then Y's
* equalizer / pullback / subobject inclusions: increasing (pair) order
* coequalizer:  classes numbered by their smallest member
* omega:        sieves at c sorted by their membership bitmask (so the
                empty sieve is first and the maximal sieve is last)
* exponential:  natural transformations in the enumerator's deterministic
                order (variables are (u, x) pairs sorted by morphism index
                then element, values tried ascending)

Structural digests use the byte serialisation implemented in ``digest``:
stage sizes followed by action tables in index order, hashed with sha256.

All values are immutable after construction; the per-topos construction
cache is the only shared mutable state and is guarded by a lock, so values
may be shared freely across threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from functools import cached_property

from .config import Config, DEFAULT
from .enumeration import Budget, Problem, solve
from .errors import (BudgetExceeded, HomSetTooLarge, InternalCheckFailure,
                     PreconditionError, ShapeMismatch)
from .fincat import FinCategory
from .utils import UnionFind, digest_bytes, ints_blob


@dataclass(frozen=True)
class Presheaf:
    base: FinCategory
    stages: tuple
    actions: tuple  # actions[m]: tuple of length stages[cod m] into stages[dom m]
    label: str = ""

    @cached_property
    def digest(self):
        parts = [self.base.digest.encode("ascii"), ints_blob(self.stages)]
        for row in self.actions:
            parts.append(ints_blob(row))
        return digest_bytes(b"psh|" + b"|".join(parts))

    @property
    def is_initial(self):
        return all(s == 0 for s in self.stages)

    def validate(self):
        """Violated functoriality axioms, empty iff a presheaf."""
        out = []
        cat = self.base
        for m, row in enumerate(self.actions):
            if len(row) != self.stages[cat.cod(m)]:
                out.append(("action-arity", m))
                continue
            if any(not 0 <= v < self.stages[cat.dom(m)] for v in row):
                out.append(("action-range", m))
        for o in range(cat.object_count):
            i = cat.identity_of[o]
            if self.actions[i] != tuple(range(self.stages[o])):
                out.append(("identity-action", i))
        for g in range(cat.morphism_count):
            for f in range(cat.morphism_count):
                if not cat.composable(g, f):
                    continue
                gf = cat.table[g][f]
                row_g, row_f, row_gf = (self.actions[g], self.actions[f],
                                        self.actions[gf])
                for x in range(self.stages[cat.cod(g)]):
                    if row_gf[x] != row_f[row_g[x]]:
                        out.append(("contravariance", (g, f, x)))
                        break
        return out

    def relabel(self, label):
        return replace(self, label=label)


@dataclass(frozen=True)
class PresheafMap:
    dom: Presheaf
    cod: Presheaf
    components: tuple  # per object: tuple stages_dom(c) -> stages_cod(c)
    label: str = ""

    @cached_property
    def digest(self):
        parts = [self.dom.digest.encode("ascii"),
                 self.cod.digest.encode("ascii")]
        for row in self.components:
            parts.append(ints_blob(row))
        return digest_bytes(b"map|" + b"|".join(parts))

    def validate(self):
        """Naturality squares that fail, as (morphism, element) witnesses."""
        out = []
        cat = self.dom.base
        for m in range(cat.morphism_count):
            a, b = cat.dom(m), cat.cod(m)
            act_x, act_y = self.dom.actions[m], self.cod.actions[m]
            comp_a, comp_b = self.components[a], self.components[b]
            for x in range(self.dom.stages[b]):
                if comp_a[act_x[x]] != act_y[comp_b[x]]:
                    out.append((m, x))
        return out

    def __matmul__(self, other):
        """Composition self∘other."""
        if other.cod.digest != self.dom.digest:
            raise ShapeMismatch("maps are not composable")
        comps = tuple(
            tuple(srow[v] for v in orow)
            for srow, orow in zip(self.components, other.components))
        return PresheafMap(other.dom, self.cod, comps)

    def same_table(self, other):
        """Bit-exact equality of component tables and endpoints."""
        return (self.dom.digest == other.dom.digest
                and self.cod.digest == other.cod.digest
                and self.components == other.components)

    def is_pointwise_injective(self):
        return all(len(set(row)) == len(row) for row in self.components)

    def is_pointwise_surjective(self):
        return all(len(set(row)) == n
                   for row, n in zip(self.components, self.cod.stages))

    def relabel(self, label):
        return replace(self, label=label)


def identity_map(X):
    return PresheafMap(X, X, tuple(tuple(range(s)) for s in X.stages))


@dataclass(frozen=True)
class Subobject:
    of: Presheaf
    selected: tuple  # per object: strictly increasing tuple of element indices

    def validate(self):
        cat = self.of.base
        out = []
        sel = [frozenset(s) for s in self.selected]
        for m in range(cat.morphism_count):
            a, b = cat.dom(m), cat.cod(m)
            for x in self.selected[b]:
                if self.of.actions[m][x] not in sel[a]:
                    out.append((m, x))
        return out

    def contains(self, other):
        return all(set(o) <= set(s)
                   for s, o in zip(self.selected, other.selected))

    def equals(self, other):
        return self.of.digest == other.of.digest and \
            self.selected == other.selected

    @property
    def total(self):
        return sum(len(s) for s in self.selected)


@dataclass(frozen=True)
class Product:
    presheaf: Presheaf
    left: Presheaf
    right: Presheaf
    proj1: PresheafMap
    proj2: PresheafMap

    def pair_index(self, c, x, y):
        return x * self.right.stages[c] + y

    def split_index(self, c, p):
        w = self.right.stages[c]
        return divmod(p, w)


@dataclass(frozen=True)
class Coproduct:
    presheaf: Presheaf
    left: Presheaf
    right: Presheaf
    inj1: PresheafMap
    inj2: PresheafMap


@dataclass(frozen=True)
class Equalizer:
    presheaf: Presheaf
    include: PresheafMap
    members: tuple  # per object: tuple of included element indices


@dataclass(frozen=True)
class Coequalizer:
    presheaf: Presheaf
    project: PresheafMap


@dataclass(frozen=True)
class Pullback:
    presheaf: Presheaf
    proj1: PresheafMap
    proj2: PresheafMap
    pairs: tuple  # per object: tuple of (x, y)


@dataclass(frozen=True)
class StageLayout:
    """Slot layout of one exponential stage: variables are (u, x) pairs."""
    object: int
    arrows: tuple          # morphisms u with cod(u) == object, index order
    offsets: dict          # u -> first slot index
    n_slots: int
    domains: tuple         # per slot: |Y(dom u)|
    slot_of: tuple         # per slot: (u, x)


@dataclass(frozen=True)
class Exponential:
    """Y^X with its element tables; ``presheaf`` has canonical indices."""
    presheaf: Presheaf
    exponent: Presheaf     # X
    base_obj: Presheaf     # Y
    layouts: tuple         # StageLayout per object
    elements: tuple        # per object: tuple of value vectors
    index: tuple           # per object: dict vector -> element index
    ev: PresheafMap        # product(E, X) -> Y

    def value(self, c, element, u, x):
        return self.elements[c][element][self.layouts[c].offsets[u] + x]


@dataclass(frozen=True)
class OmegaStructure:
    presheaf: Presheaf
    sieves: tuple          # per object: tuple of frozensets, bitmask order
    index: tuple           # per object: dict frozenset -> index
    top: PresheafMap
    bot: PresheafMap
    meet: PresheafMap      # on product(omega, omega)
    neg: PresheafMap
    product: Product       # omega x omega used by meet

    def top_index(self, c):
        return len(self.sieves[c]) - 1


class Topos:
    """Workbench handle for presheaves on one site.

    Owns the construction cache (keyed by operation + operand digests) and
    the configuration.  All methods are pure given the cache; the lock makes
    the cache safe under concurrent use.
    """

    def __init__(self, cat: FinCategory, config: Config = DEFAULT):
        if not isinstance(cat, FinCategory):
            raise PreconditionError("Topos needs a FinCategory site")
        self.cat = cat
        self.config = config
        self._cache = {}
        self._lock = threading.RLock()

    def _memo(self, key, build):
        """Memoise a construction; budget failures are cached too, so a
        construction known to exceed its budget is not retried."""
        with self._lock:
            if key in self._cache:
                value = self._cache[key]
                if isinstance(value, BudgetExceeded):
                    raise value
                return value
        try:
            value = build()
        except BudgetExceeded as exc:
            with self._lock:
                self._cache.setdefault(key, exc)
            raise
        with self._lock:
            return self._cache.setdefault(key, value)

    # ----- basic objects -------------------------------------------------

    def terminal(self):
        def build():
            stages = tuple(1 for _ in range(self.cat.object_count))
            actions = tuple((0,) for _ in range(self.cat.morphism_count))
            return Presheaf(self.cat, stages, actions, label="1")
        return self._memo(("terminal",), build)

    def initial(self):
        def build():
            stages = tuple(0 for _ in range(self.cat.object_count))
            actions = tuple(() for _ in range(self.cat.morphism_count))
            return Presheaf(self.cat, stages, actions, label="0")
        return self._memo(("initial",), build)

    def yoneda(self, c):
        """Representable presheaf d -> hom(d, c), action by precomposition."""
        if not 0 <= c < self.cat.object_count:
            raise PreconditionError(f"no object {c}")

        def build():
            cat = self.cat
            homs = [cat.hom(d, c) for d in range(cat.object_count)]
            pos = [{u: i for i, u in enumerate(h)} for h in homs]
            stages = tuple(len(h) for h in homs)
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                actions.append(tuple(pos[a][cat.table[u][m]]
                                     for u in homs[b]))
            return Presheaf(self.cat, stages, tuple(actions),
                            label=f"y({self.cat.object_names[c]})")
        return self._memo(("yoneda", c), build)

    def bang(self, X):
        """The unique map X -> 1."""
        one = self.terminal()
        return PresheafMap(X, one, tuple((0,) * s for s in X.stages))

    def from_initial(self, X):
        return PresheafMap(self.initial(), X, tuple(() for _ in X.stages))

    # ----- finite limits and colimits ------------------------------------

    def product(self, X, Y):
        def build():
            self._same_base(X, Y)
            cat = self.cat
            stages = tuple(x * y for x, y in zip(X.stages, Y.stages))
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                wa = Y.stages[a]
                row = []
                for p in range(stages[b]):
                    x, y = divmod(p, Y.stages[b])
                    row.append(X.actions[m][x] * wa + Y.actions[m][y])
                actions.append(tuple(row))
            P = Presheaf(cat, stages, tuple(actions),
                         label=f"({X.label}x{Y.label})")
            proj1 = PresheafMap(P, X, tuple(
                tuple(p // Y.stages[c] for p in range(stages[c]))
                for c in range(cat.object_count)))
            proj2 = PresheafMap(P, Y, tuple(
                tuple(p % Y.stages[c] for p in range(stages[c]))
                for c in range(cat.object_count)))
            return Product(P, X, Y, proj1, proj2)
        result = self._memo(("prod", X.digest, Y.digest), build)
        with self._lock:
            self._cache.setdefault(
                ("factors-prod", result.presheaf.digest), (X, Y))
        return result

    def pair(self, f, g):
        """<f, g>: Z -> X x Y for parallel f: Z->X, g: Z->Y."""
        if f.dom.digest != g.dom.digest:
            raise ShapeMismatch("pairing needs a common domain")
        prod = self.product(f.cod, g.cod)
        comps = tuple(
            tuple(prod.pair_index(c, fx, gx)
                  for fx, gx in zip(f.components[c], g.components[c]))
            for c in range(self.cat.object_count))
        return PresheafMap(f.dom, prod.presheaf, comps)

    def coproduct(self, X, Y):
        def build():
            self._same_base(X, Y)
            cat = self.cat
            stages = tuple(x + y for x, y in zip(X.stages, Y.stages))
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                row = [X.actions[m][x] for x in range(X.stages[b])]
                row += [X.stages[a] + Y.actions[m][y]
                        for y in range(Y.stages[b])]
                actions.append(tuple(row))
            S = Presheaf(cat, stages, tuple(actions),
                         label=f"({X.label}+{Y.label})")
            inj1 = PresheafMap(X, S, tuple(
                tuple(range(X.stages[c]))
                for c in range(cat.object_count)))
            inj2 = PresheafMap(Y, S, tuple(
                tuple(X.stages[c] + y for y in range(Y.stages[c]))
                for c in range(cat.object_count)))
            return Coproduct(S, X, Y, inj1, inj2)
        result = self._memo(("coprod", X.digest, Y.digest), build)
        with self._lock:
            self._cache.setdefault(
                ("factors-coprod", result.presheaf.digest), (X, Y))
        return result

    def copair(self, f, g):
        """[f, g]: X + Y -> Z for f: X->Z, g: Y->Z."""
        if f.cod.digest != g.cod.digest:
            raise ShapeMismatch("copairing needs a common codomain")
        cop = self.coproduct(f.dom, g.dom)
        comps = tuple(f.components[c] + g.components[c]
                      for c in range(self.cat.object_count))
        return PresheafMap(cop.presheaf, f.cod, comps)

    def equalizer(self, f, g):
        self._parallel(f, g)

        def build():
            cat = self.cat
            members = tuple(
                tuple(x for x in range(f.dom.stages[c])
                      if f.components[c][x] == g.components[c][x])
                for c in range(cat.object_count))
            return self._sub_as_presheaf_result(
                Subobject(f.dom, members), label="eq")
        return self._memo(("eq", f.digest, g.digest), build)

    def coequalizer(self, f, g):
        self._parallel(f, g)

        def build():
            cat = self.cat
            Y = f.cod
            ufs = []
            for c in range(cat.object_count):
                uf = UnionFind(Y.stages[c])
                for x in range(f.dom.stages[c]):
                    uf.union(f.components[c][x], g.components[c][x])
                ufs.append(uf)
            labels = [uf.canonical_labels() for uf in ufs]
            stages = tuple(max(lab) + 1 if lab else 0 for lab in labels)
            reps = []
            for c, lab in enumerate(labels):
                rep = [None] * stages[c]
                for x, k in enumerate(lab):
                    if rep[k] is None:
                        rep[k] = x
                reps.append(rep)
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                row = []
                for k in range(stages[b]):
                    row.append(labels[a][Y.actions[m][reps[b][k]]])
                # the action must not depend on the representative
                for x in range(Y.stages[b]):
                    if labels[a][Y.actions[m][x]] != row[labels[b][x]]:
                        raise InternalCheckFailure(
                            "coequalizer action does not descend")
                actions.append(tuple(row))
            Q = Presheaf(cat, stages, tuple(actions), label="coeq")
            q = PresheafMap(Y, Q, tuple(tuple(lab) for lab in labels))
            return Coequalizer(Q, q)
        return self._memo(("coeq", f.digest, g.digest), build)

    def pullback(self, f, g):
        if f.cod.digest != g.cod.digest:
            raise ShapeMismatch("pullback needs a cospan")

        def build():
            cat = self.cat
            X, Y = f.dom, g.dom
            pairs, pos = [], []
            for c in range(cat.object_count):
                ps = [(x, y) for x in range(X.stages[c])
                      for y in range(Y.stages[c])
                      if f.components[c][x] == g.components[c][y]]
                pairs.append(tuple(ps))
                pos.append({p: i for i, p in enumerate(ps)})
            stages = tuple(len(p) for p in pairs)
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                row = [pos[a][(X.actions[m][x], Y.actions[m][y])]
                       for (x, y) in pairs[b]]
                actions.append(tuple(row))
            P = Presheaf(cat, stages, tuple(actions), label="pb")
            proj1 = PresheafMap(P, X, tuple(
                tuple(x for x, _ in pairs[c])
                for c in range(cat.object_count)))
            proj2 = PresheafMap(P, Y, tuple(
                tuple(y for _, y in pairs[c])
                for c in range(cat.object_count)))
            return Pullback(P, proj1, proj2, tuple(pairs))
        return self._memo(("pb", f.digest, g.digest), build)

    # ----- subobjects -----------------------------------------------------

    def _sub_as_presheaf_result(self, sub, label="sub"):
        cat = self.cat
        pos = [{x: i for i, x in enumerate(sel)} for sel in sub.selected]
        stages = tuple(len(sel) for sel in sub.selected)
        actions = []
        for m in range(cat.morphism_count):
            a, b = cat.dom(m), cat.cod(m)
            actions.append(tuple(pos[a][sub.of.actions[m][x]]
                                 for x in sub.selected[b]))
        S = Presheaf(cat, stages, tuple(actions), label=label)
        include = PresheafMap(S, sub.of, tuple(
            tuple(sel) for sel in sub.selected))
        return Equalizer(S, include, tuple(tuple(s) for s in sub.selected))

    def sub_presheaf(self, sub, label="sub"):
        """Materialise a Subobject as (presheaf, inclusion)."""
        bad = sub.validate()
        if bad:
            raise PreconditionError(f"not action-closed: {bad[:3]}")
        res = self._sub_as_presheaf_result(sub, label=label)
        return res.presheaf, res.include

    def image_factorization(self, f):
        """(e, m) with f = m∘e, e pointwise surjective, m pointwise mono."""
        cat = self.cat
        selected = tuple(tuple(sorted(set(f.components[c])))
                         for c in range(cat.object_count))
        sub = Subobject(f.cod, selected)
        im, include = self.sub_presheaf(sub, label="im")
        pos = [{x: i for i, x in enumerate(sel)} for sel in selected]
        e = PresheafMap(f.dom, im, tuple(
            tuple(pos[c][v] for v in f.components[c])
            for c in range(cat.object_count)))
        return e, include

    def diagonal(self, X):
        """The diagonal as a Subobject of X x X."""
        prod = self.product(X, X)
        selected = tuple(
            tuple(sorted(prod.pair_index(c, x, x)
                         for x in range(X.stages[c])))
            for c in range(self.cat.object_count))
        return Subobject(prod.presheaf, selected)

    def complement_closed(self, sub):
        """Is the pointwise complement of ``sub`` action-closed?"""
        comp = tuple(
            tuple(x for x in range(sub.of.stages[c])
                  if x not in set(sub.selected[c]))
            for c in range(self.cat.object_count))
        return not Subobject(sub.of, comp).validate()

    def subobjects(self, X, *, cap=100_000):
        """All subobjects of X, deterministically ordered.

        Elements are scanned stage-major; a subset is kept when closed
        under the actions.  Exposed for desk-scale lattice scans (DSO).
        """
        cat = self.cat
        elems = [(c, x) for c in range(cat.object_count)
                 for x in range(X.stages[c])]
        n = len(elems)
        if n > 20:
            raise BudgetExceeded("subobject scan beyond desk scale",
                                 context={"elements": n})
        out = []
        for mask in range(1 << n):
            sel = [[] for _ in range(cat.object_count)]
            for i, (c, x) in enumerate(elems):
                if mask >> i & 1:
                    sel[c].append(x)
            sub = Subobject(X, tuple(tuple(s) for s in sel))
            if not sub.validate():
                out.append(sub)
                if len(out) > cap:
                    raise BudgetExceeded("subobject cap exceeded")
        return out

    # ----- hom-sets and global elements ----------------------------------

    def hom_problem(self, X, Y):
        """Variables (c, x) stage-major; functional naturality rules."""
        cat = self.cat
        offs = []
        total = 0
        for c in range(cat.object_count):
            offs.append(total)
            total += X.stages[c]
        domains = []
        for c in range(cat.object_count):
            domains.extend([Y.stages[c]] * X.stages[c])
        problem = Problem(domains)
        for m in range(cat.morphism_count):
            if cat.is_identity(m):
                continue
            a, b = cat.dom(m), cat.cod(m)
            tab = Y.actions[m]
            for x in range(X.stages[b]):
                problem.add_rule(offs[b] + x, tab, offs[a] + X.actions[m][x])
        return problem, tuple(offs)

    def hom_rows(self, X, Y, *, cap=None):
        """All natural transformations X -> Y as flat stage-major rows.

        Hom-sets into a constructed product split along the pairing
        bijection, and hom-sets out of a constructed coproduct along the
        copairing bijection (the universal properties, verified in the
        test suite); everything else is enumerated directly.
        """
        self._same_base(X, Y)
        cap = cap if cap is not None else self.config.hom_cap

        def build():
            with self._lock:
                prod_factors = self._cache.get(("factors-prod", Y.digest))
                coprod_factors = self._cache.get(("factors-coprod",
                                                  X.digest))
            # degenerate decompositions (a factor structurally equal to
            # the whole, e.g. 1 x 1 = 1) would recurse forever
            if prod_factors is not None and \
                    all(F.digest != Y.digest for F in prod_factors):
                return self._hom_rows_into_product(X, Y, prod_factors, cap)
            if coprod_factors is not None and \
                    all(F.digest != X.digest for F in coprod_factors):
                return self._hom_rows_from_coproduct(X, Y, coprod_factors,
                                                     cap)
            problem, offs = self.hom_problem(X, Y)
            per_solution = max(64, 4 * len(problem.domains))
            budget = Budget(self.config.budget + cap * per_solution,
                            context={"op": "hom", "dom": X.label,
                                     "cod": Y.label})
            rows = solve(problem, budget, max_solutions=cap + 1)
            if len(rows) > cap:
                raise HomSetTooLarge(
                    f"hom-set {X.label} -> {Y.label} larger than {cap}",
                    context={"dom": X.label, "cod": Y.label, "cap": cap})
            return tuple(rows), offs
        return self._memo(("hom", X.digest, Y.digest, cap), build)

    def _hom_rows_into_product(self, X, Y, factors, cap):
        A, B = factors
        rows_a, offs = self.hom_rows(X, A, cap=cap)
        rows_b, _ = self.hom_rows(X, B, cap=cap)
        if len(rows_a) * len(rows_b) > cap:
            raise HomSetTooLarge(
                f"hom-set {X.label} -> {Y.label} larger than {cap}",
                context={"dom": X.label, "cod": Y.label, "cap": cap})
        cat = self.cat
        mult = []
        for c in range(cat.object_count):
            mult.extend([B.stages[c]] * X.stages[c])
        rows = tuple(
            tuple(ra[i] * mult[i] + rb[i] for i in range(len(mult)))
            for ra in rows_a for rb in rows_b)
        return rows, offs

    def _hom_rows_from_coproduct(self, X, Y, factors, cap):
        A, B = factors
        rows_a, offs_a = self.hom_rows(A, Y, cap=cap)
        rows_b, offs_b = self.hom_rows(B, Y, cap=cap)
        if len(rows_a) * len(rows_b) > cap:
            raise HomSetTooLarge(
                f"hom-set {X.label} -> {Y.label} larger than {cap}",
                context={"dom": X.label, "cod": Y.label, "cap": cap})
        cat = self.cat
        offs = []
        total = 0
        for c in range(cat.object_count):
            offs.append(total)
            total += X.stages[c]
        rows = []
        for ra in rows_a:
            for rb in rows_b:
                row = []
                for c in range(cat.object_count):
                    row.extend(ra[offs_a[c]:offs_a[c] + A.stages[c]])
                    row.extend(rb[offs_b[c]:offs_b[c] + B.stages[c]])
                rows.append(tuple(row))
        return tuple(rows), tuple(offs)

    def row_to_map(self, X, Y, row, offs):
        comps = tuple(
            tuple(row[offs[c]:offs[c] + X.stages[c]])
            for c in range(self.cat.object_count))
        return PresheafMap(X, Y, comps)

    def map_to_row(self, f):
        row = []
        for comp in f.components:
            row.extend(comp)
        return tuple(row)

    def hom_set(self, X, Y, *, cap=None):
        rows, offs = self.hom_rows(X, Y, cap=cap)
        return [self.row_to_map(X, Y, row, offs) for row in rows]

    def global_elements(self, X):
        """All maps 1 -> X, deterministically ordered."""
        return self.hom_set(self.terminal(), X)

    def element_point(self, X, c, x):
        """The global element through stage element x at object c, if any.

        Scans global elements; returns the first whose value at c is x.
        """
        for pt in self.global_elements(X):
            if pt.components[c][0] == x:
                return pt
        return None

    # ----- exponentials ----------------------------------------------------

    def stage_layout(self, X, Y, c):
        cat = self.cat
        arrows = tuple(m for m in range(cat.morphism_count)
                       if cat.cod(m) == c)
        offsets = {}
        domains = []
        slot_of = []
        for u in arrows:
            offsets[u] = len(domains)
            d = cat.dom(u)
            domains.extend([Y.stages[d]] * X.stages[d])
            slot_of.extend((u, x) for x in range(X.stages[d]))
        return StageLayout(c, arrows, offsets, len(domains),
                           tuple(domains), tuple(slot_of))

    def stage_problem(self, X, Y, layout):
        """Naturality rules for one exponential stage."""
        cat = self.cat
        problem = Problem(layout.domains)
        for u in layout.arrows:
            d = cat.dom(u)
            for m in cat.into(d):
                if cat.is_identity(m):
                    continue
                u2 = cat.table[u][m]
                tab = Y.actions[m]
                for x in range(X.stages[d]):
                    problem.add_rule(
                        layout.offsets[u] + x, tab,
                        layout.offsets[u2] + X.actions[m][x])
        return problem

    def exponential(self, X, Y, *, budget_limit=None):
        """Y^X with evaluation; stage enumeration is budget-guarded.

        ``budget_limit`` lowers the expansion budget for speculative
        construction (memoised separately so it cannot shadow a full
        attempt).
        """
        self._same_base(X, Y)
        limit = self.config.budget if budget_limit is None \
            else min(budget_limit, self.config.budget)
        key = ("exp", X.digest, Y.digest) if budget_limit is None \
            else ("exp", X.digest, Y.digest, limit)

        def build():
            if budget_limit is not None:
                # a full-budget outcome settles the question either way
                with self._lock:
                    full = self._cache.get(("exp", X.digest, Y.digest))
                if isinstance(full, BudgetExceeded):
                    raise full
                if full is not None:
                    return full
            cat = self.cat
            layouts = tuple(self.stage_layout(X, Y, c)
                            for c in range(cat.object_count))
            elements = []
            for c in range(cat.object_count):
                problem = self.stage_problem(X, Y, layouts[c])
                budget = Budget(
                    limit,
                    context={"op": "exponential", "base": Y.label,
                             "exponent": X.label,
                             "stage": cat.object_names[c]})
                elements.append(tuple(solve(problem, budget)))
            index = tuple({vec: i for i, vec in enumerate(elems)}
                          for elems in elements)
            stages = tuple(len(e) for e in elements)
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                la, lb = layouts[a], layouts[b]
                row = []
                for vec in elements[b]:
                    new = [0] * la.n_slots
                    for u in la.arrows:
                        mu = cat.table[m][u]
                        ou, onew = lb.offsets[mu], la.offsets[u]
                        for x in range(X.stages[cat.dom(u)]):
                            new[onew + x] = vec[ou + x]
                    row.append(index[a][tuple(new)])
                actions.append(tuple(row))
            E = Presheaf(cat, stages, tuple(actions),
                         label=f"({Y.label}^{X.label})")
            prod = self.product(E, X)
            ev_comps = []
            for c in range(cat.object_count):
                ide = cat.identity_of[c]
                off = layouts[c].offsets[ide]
                row = []
                for p in range(prod.presheaf.stages[c]):
                    w, x = prod.split_index(c, p)
                    row.append(elements[c][w][off + x])
                ev_comps.append(tuple(row))
            ev = PresheafMap(prod.presheaf, Y, tuple(ev_comps))
            return Exponential(E, X, Y, layouts, tuple(elements), index, ev)
        value = self._memo(key, build)
        if budget_limit is not None:
            # success under a smaller budget is a success under the full one
            with self._lock:
                self._cache.setdefault(("exp", X.digest, Y.digest), value)
        return value

    def transpose(self, f, A, X, Y):
        """A -> Y^X from f: A x X -> Y (the cached product's indexing)."""
        prod = self.product(A, X)
        if f.dom.digest != prod.presheaf.digest or \
                f.cod.digest != Y.digest:
            raise ShapeMismatch("transpose expects f: A x X -> Y")
        exp = self.exponential(X, Y)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            lay = exp.layouts[c]
            row = []
            for a in range(A.stages[c]):
                vec = [0] * lay.n_slots
                for i, (u, x) in enumerate(lay.slot_of):
                    d = cat.dom(u)
                    p = prod.pair_index(d, A.actions[u][a], x)
                    vec[i] = f.components[d][p]
                row.append(exp.index[c][tuple(vec)])
            comps.append(tuple(row))
        return PresheafMap(A, exp.presheaf, tuple(comps))

    def untranspose(self, g, A, X, Y):
        """A x X -> Y from g: A -> Y^X."""
        exp = self.exponential(X, Y)
        if g.cod.digest != exp.presheaf.digest:
            raise ShapeMismatch("untranspose expects g: A -> Y^X")
        prod = self.product(A, X)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            ide = cat.identity_of[c]
            off = exp.layouts[c].offsets[ide]
            row = []
            for p in range(prod.presheaf.stages[c]):
                a, x = prod.split_index(c, p)
                row.append(exp.elements[c][g.components[c][a]][off + x])
            comps.append(tuple(row))
        return PresheafMap(prod.presheaf, Y, tuple(comps))

    def name_of(self, f):
        """'f': 1 -> Y^X, the point of the exponential selecting f."""
        X, Y = f.dom, f.cod
        exp = self.exponential(X, Y)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            lay = exp.layouts[c]
            vec = tuple(f.components[cat.dom(u)][x] for (u, x) in lay.slot_of)
            comps.append((exp.index[c][vec],))
        return PresheafMap(self.terminal(), exp.presheaf, tuple(comps))

    def element_of_name(self, exp, f, c):
        """Index in exp stage c of the element named by f (arrow X -> Y)."""
        cat = self.cat
        lay = exp.layouts[c]
        vec = tuple(f.components[cat.dom(u)][x] for (u, x) in lay.slot_of)
        return exp.index[c][vec]

    def sigma(self, X, A):
        """sigma_X^A: X -> X^A, transpose of the projection X x A -> X."""
        prod = self.product(X, A)
        return self.transpose(prod.proj1, X, A, X)

    def ev_at(self, t, X):
        """ev^t_X: X^T -> X for a point t: 1 -> T."""
        T = t.cod
        exp = self.exponential(T, X)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            ide = cat.identity_of[c]
            off = exp.layouts[c].offsets[ide]
            tc = t.components[c][0]
            comps.append(tuple(exp.elements[c][w][off + tc]
                               for w in range(exp.presheaf.stages[c])))
        return PresheafMap(exp.presheaf, X, tuple(comps))

    def internal_composition(self, X, Y, Z):
        """c: Z^Y x Y^X -> Z^X."""
        zy = self.exponential(Y, Z)
        yx = self.exponential(X, Y)
        zx = self.exponential(X, Z)
        prod = self.product(zy.presheaf, yx.presheaf)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            lays = zx.layouts[c]
            row = []
            for p in range(prod.presheaf.stages[c]):
                w1, w2 = prod.split_index(c, p)
                vec = []
                for (u, x) in lays.slot_of:
                    y = yx.value(c, w2, u, x)
                    vec.append(zy.value(c, w1, u, y))
                row.append(zx.index[c][tuple(vec)])
            comps.append(tuple(row))
        return PresheafMap(prod.presheaf, zx.presheaf, tuple(comps))

    def exp_map_base(self, r, X):
        """r^X: A^X -> B^X for r: A -> B (postcomposition)."""
        ea = self.exponential(X, r.dom)
        eb = self.exponential(X, r.cod)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            row = []
            for vec in ea.elements[c]:
                new = tuple(r.components[cat.dom(u)][vec[i]]
                            for i, (u, _x) in enumerate(ea.layouts[c].slot_of))
                row.append(eb.index[c][new])
            comps.append(tuple(row))
        return PresheafMap(ea.presheaf, eb.presheaf, tuple(comps))

    def exp_map_exponent(self, Y, phi):
        """Y^phi: Y^A -> Y^B for phi: B -> A (precomposition)."""
        ea = self.exponential(phi.cod, Y)
        eb = self.exponential(phi.dom, Y)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            la, lb = ea.layouts[c], eb.layouts[c]
            row = []
            for vec in ea.elements[c]:
                new = tuple(
                    vec[la.offsets[u] + phi.components[cat.dom(u)][b]]
                    for (u, b) in lb.slot_of)
                row.append(eb.index[c][new])
            comps.append(tuple(row))
        return PresheafMap(ea.presheaf, eb.presheaf, tuple(comps))

    def distributivity_iso(self, X, Y, Z):
        """alpha: Z^(X+Y) -> Z^X x Z^Y and its inverse-checking data."""
        cop = self.coproduct(X, Y)
        eall = self.exponential(cop.presheaf, Z)
        ex = self.exponential(X, Z)
        ey = self.exponential(Y, Z)
        prod = self.product(ex.presheaf, ey.presheaf)
        cat = self.cat
        comps = []
        for c in range(cat.object_count):
            row = []
            for vec in eall.elements[c]:
                vx = tuple(vec[eall.layouts[c].offsets[u] + x]
                           for (u, x) in ex.layouts[c].slot_of)
                vy = tuple(
                    vec[eall.layouts[c].offsets[u]
                        + X.stages[cat.dom(u)] + y]
                    for (u, y) in ey.layouts[c].slot_of)
                row.append(prod.pair_index(
                    c, ex.index[c][vx], ey.index[c][vy]))
            comps.append(tuple(row))
        return PresheafMap(eall.presheaf, prod.presheaf, tuple(comps))

    # ----- subobject classifier -------------------------------------------

    def sieves_at(self, c):
        cat = self.cat
        arrows = cat.into(c)
        if len(arrows) > 16:
            raise BudgetExceeded("sieve enumeration beyond desk scale",
                                 context={"object": c})
        out = []
        for mask in range(1 << len(arrows)):
            members = frozenset(arrows[i] for i in range(len(arrows))
                                if mask >> i & 1)
            closed = all(
                cat.table[f][g] in members
                for f in members
                for g in range(cat.morphism_count)
                if cat.cod(g) == cat.dom(f))
            if closed:
                out.append((mask, members))
        out.sort()
        return tuple(members for _, members in out)

    def omega(self):
        def build():
            cat = self.cat
            sieves = tuple(self.sieves_at(c)
                           for c in range(cat.object_count))
            index = tuple({s: i for i, s in enumerate(stage)}
                          for stage in sieves)
            stages = tuple(len(s) for s in sieves)
            actions = []
            for m in range(cat.morphism_count):
                a, b = cat.dom(m), cat.cod(m)
                row = []
                for S in sieves[b]:
                    pulled = frozenset(
                        g for g in cat.into(a) if cat.table[m][g] in S)
                    row.append(index[a][pulled])
                actions.append(tuple(row))
            Om = Presheaf(cat, stages, tuple(actions), label="Omega")
            one = self.terminal()
            top = PresheafMap(one, Om, tuple(
                (index[c][frozenset(cat.into(c))],)
                for c in range(cat.object_count)))
            bot = PresheafMap(one, Om, tuple(
                (index[c][frozenset()],) for c in range(cat.object_count)))
            prod = self.product(Om, Om)
            meet_comps = []
            for c in range(cat.object_count):
                row = []
                for p in range(prod.presheaf.stages[c]):
                    i, j = prod.split_index(c, p)
                    row.append(index[c][sieves[c][i] & sieves[c][j]])
                meet_comps.append(tuple(row))
            meet = PresheafMap(prod.presheaf, Om, tuple(meet_comps))
            neg_comps = []
            for c in range(cat.object_count):
                row = []
                for S in sieves[c]:
                    members = frozenset(
                        u for u in cat.into(c)
                        if not any(cat.table[u][g] in S
                                   for g in cat.into(cat.dom(u))))
                    row.append(index[c][members])
                neg_comps.append(tuple(row))
            neg = PresheafMap(Om, Om, tuple(neg_comps))
            return OmegaStructure(Om, sieves, index, top, bot, meet, neg,
                                  prod)
        return self._memo(("omega",), build)

    def char(self, sub):
        """Classifying map X -> Omega of an action-closed subobject."""
        bad = sub.validate()
        if bad:
            raise PreconditionError(f"not a subobject: {bad[:3]}")
        om = self.omega()
        cat = self.cat
        sel = [frozenset(s) for s in sub.selected]
        comps = []
        for c in range(cat.object_count):
            row = []
            for x in range(sub.of.stages[c]):
                members = frozenset(
                    u for u in cat.into(c)
                    if sub.of.actions[u][x] in sel[cat.dom(u)])
                row.append(om.index[c][members])
            comps.append(tuple(row))
        return PresheafMap(sub.of, om.presheaf, tuple(comps))

    def sub_of_char(self, chi):
        """Pullback of top along chi: X -> Omega, as a Subobject."""
        om = self.omega()
        if chi.cod.digest != om.presheaf.digest:
            raise ShapeMismatch("character must land in Omega")
        selected = tuple(
            tuple(x for x in range(chi.dom.stages[c])
                  if chi.components[c][x] == om.top_index(c))
            for c in range(self.cat.object_count))
        return Subobject(chi.dom, selected)

    # ----- predicates -------------------------------------------------------

    def is_mono(self, f):
        return f.is_pointwise_injective()

    def is_epi(self, f):
        return f.is_pointwise_surjective()

    def is_iso(self, f):
        return f.is_pointwise_injective() and f.is_pointwise_surjective()

    def inverse(self, f):
        if not self.is_iso(f):
            raise PreconditionError("map is not an isomorphism")
        comps = []
        for c, row in enumerate(f.components):
            inv = [0] * f.cod.stages[c]
            for x, v in enumerate(row):
                inv[v] = x
            comps.append(tuple(inv))
        return PresheafMap(f.cod, f.dom, tuple(comps))

    # ----- helpers ---------------------------------------------------------

    def _same_base(self, X, Y):
        if X.base.digest != self.cat.digest or \
                Y.base.digest != self.cat.digest:
            raise ShapeMismatch("presheaves live on a different site")

    def _parallel(self, f, g):
        if f.dom.digest != g.dom.digest or f.cod.digest != g.cod.digest:
            raise ShapeMismatch("maps are not parallel")

    def constant_map(self, X, point):
        """point∘!: X -> Y for a point 1 -> Y."""
        return point @ self.bang(X)

"""Postulate checkers (NS, WDQO, DSO), contractibility, and classification.

Universally quantified postulates are certified site-globally when a sound
global criterion exists (NS via the terminal-with-points site test);
everything else is verified family-relative, and every report names the
family it was checked on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (BudgetExceeded, CertificationError,
                     InternalCheckFailure, PreconditionError)
from .fincat import every_object_has_point, terminal_object
from .homotopy import HomotopyTheory, homotopic, name_partition
from .pieces import CheckResult, pi0, points_subobject, theta
from .presheaf import PresheafMap, Subobject, Topos, identity_map
from . import ltopology


# ----- decidability and connectedness ---------------------------------------


def is_decidable(X):
    """All restriction actions injective; witness names a merged pair.

    Cross-checked against the closure of the diagonal complement, which is
    the subobject formulation of the same property.
    """
    witness = None
    for m, row in enumerate(X.actions):
        seen = {}
        for x, v in enumerate(row):
            if v in seen:
                witness = {"morphism": m, "pair": (seen[v], x)}
                break
            seen[v] = x
        if witness:
            break
    return witness is None, witness


def decidable_cross_check(topos: Topos, X):
    """Diagonal complement closed under the action iff all actions mono."""
    prod = topos.product(X, X)
    comp = tuple(
        tuple(p for p in range(prod.presheaf.stages[c])
              if prod.split_index(c, p)[0] != prod.split_index(c, p)[1])
        for c in range(topos.cat.object_count))
    closed = not Subobject(prod.presheaf, comp).validate()
    flag, _ = is_decidable(X)
    if closed != flag:
        raise InternalCheckFailure(
            "decidability routes disagree; presheaf semantics broken")
    return flag


def is_connected(topos: Topos, X):
    return pi0(topos, X).components == 1


# ----- postulates -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    postulate: str
    passed: bool
    route: str
    checks: tuple
    family: tuple

    def failures(self):
        return [c for c in self.checks if not c.passed]


def check_NS(topos: Topos, family):
    """Nullstellensatz: site criterion plus family-level evidence."""
    cat = topos.cat
    t = terminal_object(cat)
    site_ok = False
    site_witness = None
    if t is not None:
        ok, wit = every_object_has_point(cat)
        site_ok = ok
        site_witness = {"terminal": cat.object_names[t],
                        "points": {cat.object_names[c]: w
                                   for c, w in wit.items()}}
    checks = [CheckResult("site-criterion", site_ok, site_witness)]
    refuted = False
    for name, X in family:
        if X.is_initial:
            checks.append(CheckResult(f"points({name})", True,
                                      {"skipped": "initial"}))
            continue
        has = bool(topos.global_elements(X))
        checks.append(CheckResult(f"points({name})", has))
        if not has:
            refuted = True
    if site_ok and refuted:
        raise InternalCheckFailure(
            "site criterion passed but a family object has no points")
    return Certificate("NS", site_ok and not refuted,
                       "site" if site_ok else "family",
                       tuple(checks), tuple(n for n, _ in family))


def check_WDQO(topos: Topos, family):
    """Pieces quotient is decidable, classifies maps to 2, and is minimal.

    Minimality is witnessed by a separating family: for each pair of
    distinct components there is a 2-valued map distinguishing them, so no
    decidable quotient with fewer components can factor all of Hom(X, 2).
    """
    one = topos.terminal()
    two = topos.coproduct(one, one).presheaf
    checks = []
    for name, X in family:
        res = pi0(topos, X)
        dec_flag, _ = is_decidable(res.presheaf)
        checks.append(CheckResult(f"pieces_decidable({name})", dec_flag))
        homs = topos.hom_set(X, two)
        expected = 2 ** res.components
        factored = set()
        ok = len(homs) == expected
        for h in homs:
            vec = [None] * res.components
            good = True
            for c in range(topos.cat.object_count):
                for x in range(X.stages[c]):
                    k = res.assignment[c][x]
                    if vec[k] is None:
                        vec[k] = h.components[c][x]
                    elif vec[k] != h.components[c][x]:
                        good = False
            if not good:
                ok = False
                break
            factored.add(tuple(vec))
        ok = ok and len(factored) == len(homs)
        checks.append(CheckResult(
            f"two_valued_maps_factor({name})", ok,
            None if ok else {"homs": len(homs), "expected": expected}))
        separating = True
        for k1, k2 in itertools.combinations(range(res.components), 2):
            indicator = PresheafMap(res.presheaf, two, tuple(
                tuple(1 if k == k1 else 0 for k in range(res.components))
                for _ in range(topos.cat.object_count)))
            if indicator.validate():
                separating = False
        checks.append(CheckResult(f"minimality_witness({name})", separating))
    passed = all(c.passed for c in checks)
    return Certificate("WDQO", passed, "family", tuple(checks),
                       tuple(n for n, _ in family))


def check_DSO(topos: Topos, family):
    """Points part is the unique maximum decidable subobject with all points.

    Exhaustive subobject scan at desk scale.
    """
    checks = []
    for name, X in family:
        pts_sub = points_subobject(topos, X)
        P, _incl = topos.sub_presheaf(pts_sub, label="pts")
        dec_flag, _ = is_decidable(P)
        try:
            subs = topos.subobjects(X)
        except BudgetExceeded:
            checks.append(CheckResult(f"dso({name})", True,
                                      {"skipped": "beyond desk scale"}))
            continue
        maximal = True
        witness = None
        for sub in subs:
            if not sub.contains(pts_sub):
                continue
            SP, _ = topos.sub_presheaf(sub)
            flag, _w = is_decidable(SP)
            if flag and not pts_sub.contains(sub):
                maximal = False
                witness = {"object": name, "larger": sub.selected}
                break
        ok = dec_flag and maximal
        checks.append(CheckResult(f"dso({name})", ok, witness))
    passed = all(c.passed for c in checks)
    return Certificate("DSO", passed, "family", tuple(checks),
                       tuple(n for n, _ in family))


# ----- explicit homotopies -----------------------------------------------------


@dataclass(frozen=True)
class ExplicitHomotopy:
    A: object               # connected bipointed presheaf
    a: PresheafMap          # 1 -> A
    b: PresheafMap          # 1 -> A
    h: PresheafMap          # A x X -> Y
    connected: bool

    def verify_triangles(self, topos, f, g):
        X = f.dom
        la = topos.pair(self.a @ topos.bang(X), identity_map(X))
        lb = topos.pair(self.b @ topos.bang(X), identity_map(X))
        return (self.h @ la).same_table(f) and \
            (self.h @ lb).same_table(g)


def explicit_homotopy_search(th: HomotopyTheory, f, g, *, certs=None):
    """The pullback-component construction; None when f !~ g.

    Requires the pieces theory on an NS+WDQO certified topos.
    """
    _require_pieces(th, certs, ("NS", "WDQO"))
    topos = th.topos
    if not homotopic(th, f, g):
        return None
    X, Y = f.dom, f.cod
    exp = topos.exponential(X, Y)
    res = pi0(topos, exp.presheaf)
    k0 = res.assignment[0][topos.element_of_name(exp, f, 0)]
    selected = tuple(
        tuple(w for w in range(exp.presheaf.stages[c])
              if res.assignment[c][w] == k0)
        for c in range(topos.cat.object_count))
    sub = Subobject(exp.presheaf, selected)
    K, incl = topos.sub_presheaf(sub, label="K")
    if pi0(topos, K).components != 1:
        raise InternalCheckFailure("component K is not connected")
    pos = [ {w: i for i, w in enumerate(sel)} for sel in selected ]
    one = topos.terminal()
    a = PresheafMap(one, K, tuple(
        (pos[c][topos.element_of_name(exp, f, c)],)
        for c in range(topos.cat.object_count)))
    b = PresheafMap(one, K, tuple(
        (pos[c][topos.element_of_name(exp, g, c)],)
        for c in range(topos.cat.object_count)))
    prod_kx = topos.product(K, X)
    jx = topos.pair(incl @ prod_kx.proj1, prod_kx.proj2)
    h = exp.ev @ jx
    eh = ExplicitHomotopy(K, a, b, h, True)
    if not eh.verify_triangles(topos, f, g):
        raise InternalCheckFailure("constructed homotopy fails its triangles")
    return eh


def verify_explicit_implies_homotopic(th, eh: ExplicitHomotopy, f, g):
    """Re-verify the certificate and confirm f ~ g plus the name identities."""
    topos = th.topos
    if pi0(topos, eh.A).components != 1:
        return False
    if not eh.verify_triangles(topos, f, g):
        return False
    X, Y = f.dom, f.cod
    hhat = topos.transpose(eh.h, eh.A, X, Y)
    if not (hhat @ eh.a).same_table(topos.name_of(f)):
        return False
    if not (hhat @ eh.b).same_table(topos.name_of(g)):
        return False
    return homotopic(th, f, g)


# ----- contractibility ----------------------------------------------------------


def _require_pieces(th, certs, needed):
    if th.kind != "pieces":
        raise PreconditionError("operation needs the pieces theory")
    if not th.certified:
        raise CertificationError("pieces theory certificate failed")
    certs = certs or {}
    for key in needed:
        cert = certs.get(key)
        if cert is None or not cert.passed:
            raise CertificationError(f"{key} certificate required")


def _pi0_sigma_bijective(topos, X, A):
    """Is Pi0(sigma_X): Pi0(X) -> Pi0(X^A) an isomorphism?"""
    resx = pi0(topos, X)
    try:
        exp = topos.exponential(A, X)
        sig = topos.sigma(X, A)
        rese = pi0(topos, exp.presheaf)
        image = []
        for k in range(resx.components):
            rep = _component_rep(topos, X, resx, k)
            c, x = rep
            image.append(rese.assignment[c][sig.components[c][x]])
        return len(set(image)) == resx.components and \
            set(image) == set(range(rese.components))
    except BudgetExceeded:
        part = name_partition(topos, A, X)
        cat = topos.cat
        t = terminal_object(cat)
        if t is None:
            raise
        image = []
        for k in range(resx.components):
            c, x = _component_rep(topos, X, resx, k)
            # restrict the representative into the terminal stage along a
            # point p: t -> c (X(p): X(c) -> X(t); any point stays in the
            # component), then spread it to a global point along the
            # unique morphisms d -> t
            p = cat.hom(t, c)[0]
            elt = X.actions[p][x]
            pt_comps = tuple(
                (X.actions[cat.hom(d, t)[0]][elt],)
                for d in range(cat.object_count))
            pt = PresheafMap(topos.terminal(), X, pt_comps)
            if pt.validate():
                raise InternalCheckFailure(
                    "terminal-stage element did not extend to a point")
            const = topos.constant_map(A, pt)
            image.append(part.class_of_map(topos, const))
        return len(set(image)) == resx.components and \
            set(image) == set(range(part.n_classes))


def _component_rep(topos, X, res, k):
    for c in range(topos.cat.object_count):
        for x in range(X.stages[c]):
            if res.assignment[c][x] == k:
                return c, x
    raise InternalCheckFailure("empty component")


def is_contractible(th: HomotopyTheory, A, family, *, certs=None):
    """All four routes; they must agree or the instance is a falsification.

    (1) some point a has a! ~ 1_A; (2) Pi0(sigma_X) iso for family X;
    (3) A^X connected for family X; (4) A pointed and A^A connected.
    Routes (2) and (3) are family-relative by construction.
    """
    _require_pieces(th, certs, ("NS", "WDQO", "DSO"))
    topos = th.topos
    points = topos.global_elements(A)
    part_aa = name_partition(topos, A, A)
    ident = identity_map(A)

    route1 = False
    for pt in points:
        const = topos.constant_map(A, pt)
        if part_aa.class_of_map(topos, const) == \
                part_aa.class_of_map(topos, ident):
            route1 = True
            break

    route2 = all(_pi0_sigma_bijective(topos, X, A) for _n, X in family)

    route3 = True
    for _n, X in family:
        part = name_partition(topos, X, A)
        if part.total_components != 1:
            route3 = False
            break

    route4 = bool(points) and part_aa.total_components == 1

    routes = {"point-homotopy": route1, "sigma-iso": route2,
              "exponentials-connected": route3,
              "self-exponential": route4}
    if len(set(routes.values())) != 1:
        raise InternalCheckFailure(
            f"contractibility routes disagree on {A.label}: {routes}")
    return route1, routes


# ----- classification -----------------------------------------------------------


@dataclass(frozen=True)
class CohesionReport:
    flags: dict
    witnesses: dict
    family: tuple
    certificates: dict


def _bipointed_connected_search(topos, family, extra=()):
    """Find a connected object with two distinct points, or None.

    Search space: the family, the subobjects of Omega, and the components
    of small family exponentials (where the proof object of the
    sufficient-cohesion lemma lives).
    """
    candidates = list(family) + list(extra)
    om = topos.omega()
    try:
        for i, sub in enumerate(topos.subobjects(om.presheaf)):
            P, _ = topos.sub_presheaf(sub, label=f"sub{i}(Omega)")
            candidates.append((f"sub{i}(Omega)", P))
    except BudgetExceeded:
        pass
    small = [(n, X) for n, X in family if 0 < max(X.stages, default=0) <= 5]
    for (nx, X), (ny, Y) in itertools.product(small, repeat=2):
        try:
            exp = topos.exponential(X, Y, budget_limit=50_000)
        except BudgetExceeded:
            continue
        res = pi0(topos, exp.presheaf)
        for k in range(min(res.components, 8)):
            selected = tuple(
                tuple(w for w in range(exp.presheaf.stages[c])
                      if res.assignment[c][w] == k)
                for c in range(topos.cat.object_count))
            P, _ = topos.sub_presheaf(Subobject(exp.presheaf, selected))
            candidates.append((f"comp{k}({ny}^{nx})", P))
    for name, X in candidates:
        if X.is_initial:
            continue
        pts = topos.global_elements(X)
        distinct = [(p, q) for p, q in itertools.combinations(pts, 2)
                    if not p.same_table(q)]
        if distinct and pi0(topos, X).components == 1:
            return name
    return None


def classify(topos: Topos, family, th=None):
    """Quality type vs sufficient cohesion, with the dichotomy enforced."""
    from .homotopy import make_theory
    ns = check_NS(topos, family)
    wdqo = check_WDQO(topos, family)
    dso = check_DSO(topos, family)
    certs = {"NS": ns, "WDQO": wdqo, "DSO": dso}
    one = topos.terminal()
    zero = topos.initial()
    degenerate = one.stages == zero.stages
    if th is None:
        th = make_theory("pieces", topos, family)

    qt = True
    qt_witness = None
    for name, X in family:
        th_x, res = theta(topos, X)
        pts = len(th_x)
        inj = len(set(th_x)) == pts
        surj = set(th_x) == set(range(res.components))
        if not (inj and surj):
            qt = False
            qt_witness = {"object": name, "points": pts,
                          "pieces": res.components}
            break

    om = topos.omega()
    flags = {"degenerate": degenerate, "NS": ns.passed,
             "WDQO": wdqo.passed, "DSO": dso.passed,
             "quality_type": qt}
    witnesses = {"quality_type": qt_witness}
    sc = None
    if ns.passed and wdqo.passed and dso.passed and not degenerate \
            and th.certified:
        contractible, routes = is_contractible(th, om.presheaf, family,
                                               certs=certs)
        omega_connected = is_connected(topos, om.presheaf)
        bipointed = _bipointed_connected_search(topos, family)
        detectors = {"omega_contractible": contractible,
                     "omega_connected": omega_connected,
                     "bipointed_connected": bipointed is not None}
        if len(set(detectors.values())) != 1:
            raise InternalCheckFailure(
                f"sufficient-cohesion detectors disagree: {detectors}")
        sc = contractible
        witnesses["sufficient_cohesion"] = {"detectors": detectors,
                                            "bipointed": bipointed,
                                            "routes": routes}
        if sc and qt:
            raise InternalCheckFailure(
                "dichotomy violated: both quality type and sufficiently "
                "cohesive")
    flags["sufficiently_cohesive"] = sc
    return CohesionReport(flags, witnesses, tuple(n for n, _ in family),
                          certs)


def sheaf_connectedness_check(topos: Topos, family, sufficiently_cohesive,
                              *, certs=None):
    """Every nonempty neg-neg sheaf connected iff sufficient cohesion.

    Forward: L(X) of every family member is 0 or connected exactly when SC
    holds.  Converse instance: L(2) is connected and bipointed when SC.
    """
    j = ltopology.double_negation(topos)
    checks = []
    for name, X in family:
        sh = ltopology.sheafify(topos, X, j)
        if sh.presheaf.is_initial:
            checks.append(CheckResult(f"L({name})-empty", True))
            continue
        connected = is_connected(topos, sh.presheaf)
        ok = connected == sufficiently_cohesive or connected
        # a disconnected sheaf refutes SC; a connected one is consistent
        # with either flag only when the sheaf is forced (e.g. L(X)=1)
        if sufficiently_cohesive:
            ok = connected
        checks.append(CheckResult(
            f"L({name})-connected-iff-SC", ok,
            None if ok else {"object": name, "connected": connected}))
    one = topos.terminal()
    two = topos.coproduct(one, one).presheaf
    sh2 = ltopology.sheafify(topos, two, j)
    l2_connected = is_connected(topos, sh2.presheaf)
    l2_points = len(topos.global_elements(sh2.presheaf))
    converse_ok = (l2_connected and l2_points == 2) == \
        bool(sufficiently_cohesive)
    checks.append(CheckResult("L(2)-bipointed-connected-iff-SC",
                              converse_ok,
                              {"connected": l2_connected,
                               "points": l2_points}))
    return checks


# ----- no motion ------------------------------------------------------------------


def no_motion(topos: Topos, T, zero, A, *, certs=None):
    """ev^0: A^T -> A is a stagewise bijection; preconditions reported."""
    problems = []
    if pi0(topos, T).components != 1:
        problems.append("T is not connected")
    if zero.cod.digest != T.digest:
        problems.append("0 is not a point of T")
    flag, wit = is_decidable(A)
    if not flag:
        problems.append(f"A is not decidable: {wit}")
    certs = certs or {}
    for key in ("NS", "WDQO"):
        cert = certs.get(key)
        if cert is None or not cert.passed:
            problems.append(f"{key} certificate missing or failed")
    if problems:
        raise PreconditionError("; ".join(problems))
    ev0 = topos.ev_at(zero, A)
    return topos.is_iso(ev0), {
        "exponential_stages": ev0.dom.stages, "base_stages": A.stages}


# ----- monoids with zero -------------------------------------------------------------


def monoid_zero_check(topos: Topos, th, M, mult, unit, zero, *, certs=None):
    """Monoid-with-zero axioms, then connected iff contractible.

    On the connected side the multiplication itself is the explicit
    homotopy from the identity to the constant at zero.
    """
    prod = topos.product(M, M)
    if mult.dom.digest != prod.presheaf.digest or \
            mult.cod.digest != M.digest:
        raise PreconditionError("mult must be M x M -> M on this topos")
    violations = []
    for c in range(topos.cat.object_count):
        n = M.stages[c]
        mu = mult.components[c]

        def at(x, y, c=c):
            return mu[prod.pair_index(c, x, y)]
        e = unit.components[c][0] if n else None
        z = zero.components[c][0] if n else None
        for x in range(n):
            if at(e, x) != x or at(x, e) != x:
                violations.append(("unit", c, x))
            if at(z, x) != z or at(x, z) != z:
                violations.append(("absorption", c, x))
            for y in range(n):
                for w in range(n):
                    if at(at(x, y), w) != at(x, at(y, w)):
                        violations.append(("associativity", c, (x, y, w)))
    if violations:
        return {"axioms": False, "violations": violations[:5]}
    connected = is_connected(topos, M)
    contractible, routes = is_contractible(
        th, M, [(M.label or "M", M)], certs=certs)
    report = {"axioms": True, "connected": connected,
              "contractible": contractible, "routes": routes,
              "consistent": connected == contractible}
    if connected:
        eh = ExplicitHomotopy(M, unit, zero, mult, True)
        ident = identity_map(M)
        zc = topos.constant_map(M, zero)
        report["homotopy_is_mult"] = eh.verify_triangles(topos, ident, zc)
    return report


def build_R(topos: Topos, th, T, zero, *, certs=None):
    """Pullback of ev^0 along 0 with its internal monoid, plus the report."""
    expT = topos.exponential(T, T)
    ev0 = topos.ev_at(zero, T)
    selected = tuple(
        tuple(w for w in range(expT.presheaf.stages[c])
              if ev0.components[c][w] == zero.components[c][0])
        for c in range(topos.cat.object_count))
    sub = Subobject(expT.presheaf, selected)
    R, incl = topos.sub_presheaf(sub, label="R")
    pos = [ {w: i for i, w in enumerate(sel)} for sel in selected ]
    comp_map = topos.internal_composition(T, T, T)
    prod_ee = topos.product(expT.presheaf, expT.presheaf)
    prod_rr = topos.product(R, R)
    mult_comps = []
    for c in range(topos.cat.object_count):
        row = []
        for p in range(prod_rr.presheaf.stages[c]):
            r1, r2 = prod_rr.split_index(c, p)
            w = comp_map.components[c][prod_ee.pair_index(
                c, incl.components[c][r1], incl.components[c][r2])]
            if w not in pos[c]:
                raise InternalCheckFailure(
                    "internal composition leaves the pullback R")
            row.append(pos[c][w])
        mult_comps.append(tuple(row))
    mult = PresheafMap(prod_rr.presheaf, R, tuple(mult_comps))
    name_id = topos.name_of(identity_map(T))
    name_zero = topos.name_of(topos.constant_map(T, zero))
    unit = PresheafMap(topos.terminal(), R, tuple(
        (pos[c][name_id.components[c][0]],)
        for c in range(topos.cat.object_count)))
    zelt = PresheafMap(topos.terminal(), R, tuple(
        (pos[c][name_zero.components[c][0]],)
        for c in range(topos.cat.object_count)))
    report = monoid_zero_check(topos, th, R, mult, unit, zelt, certs=certs)
    j = ltopology.double_negation(topos)
    zero_sub = Subobject(T, tuple(
        tuple({zero.components[c][0]}) for c in range(topos.cat.object_count)))
    dense = ltopology.is_dense(topos, zero_sub, j)
    report["zero_dense"] = dense
    if dense and report.get("connected"):
        tt_connected = pi0(topos, expT.presheaf).components == 1
        t_contractible, _ = is_contractible(
            th, T, [(T.label or "T", T)], certs=certs)
        report["dense_corollary"] = {
            "TT_connected": tt_connected,
            "T_contractible": t_contractible,
            "holds": tt_connected and t_contractible}
    return R, mult, report

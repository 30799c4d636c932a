import itertools
import random

import pytest

from toposlab import (double_negation, enumerate_topologies,
                      identity_map, pi0, points_subobject, quotient,
                      quotient_universal, sheafify, validate_topology)
from toposlab import ltopology as lt


@pytest.fixture(scope="module")
def nn(delta1):
    return double_negation(delta1)


def test_enumerate_on_sets(sets):
    tops = enumerate_topologies(sets)
    # identity and the everything-dense operator, nothing else
    assert len(tops) == 2
    for j in tops:
        assert validate_topology(sets, j) == []


def test_enumerate_on_delta1(delta1, nn):
    tops = enumerate_topologies(delta1)
    assert len(tops) == 3  # identity, neg-neg, dense
    tables = {j.tables for j in tops}
    assert lt.identity_topology(delta1).tables in tables
    assert nn.tables in tables
    for j in tops:
        assert validate_topology(delta1, j) == []


def test_double_negation_in_sets_is_identity(sets):
    assert double_negation(sets).tables == \
        lt.identity_topology(sets).tables


def test_double_negation_collapse_on_delta1(delta1, nn):
    # on the 5-sieve stage, only the union of the two endpoint sieves is
    # collapsed to the maximal sieve; the single-endpoint sieves are
    # already regular
    assert nn.tables[0] == (0, 1)
    assert nn.tables[1] == (0, 1, 2, 4, 4)


def test_coverage_roundtrip(delta1):
    for j in enumerate_topologies(delta1):
        cov = lt.coverage_of(delta1, j)
        assert lt.topology_of_coverage(delta1, cov).tables == j.tables


def test_closure_properties_random_subobjects(delta1, gfx, nn):
    rng = random.Random(3)
    X = gfx["Omega"]
    subs = delta1.subobjects(X)
    sample = rng.sample(subs, min(30, len(subs)))
    full = tuple(tuple(range(s)) for s in X.stages)
    for sub in sample:
        cl = lt.closure(delta1, sub, nn)
        assert all(set(a) <= set(b)
                   for a, b in zip(sub.selected, cl.selected))
        assert lt.closure(delta1, cl, nn).selected == cl.selected
    for s1, s2 in itertools.combinations(sample, 2):
        if all(set(a) <= set(b) for a, b in zip(s1.selected, s2.selected)):
            c1 = lt.closure(delta1, s1, nn)
            c2 = lt.closure(delta1, s2, nn)
            assert all(set(a) <= set(b)
                       for a, b in zip(c1.selected, c2.selected))


def test_gamma_dense_for_omega(delta1, gfx, nn):
    sub = points_subobject(delta1, gfx["Omega"])
    assert lt.is_dense(delta1, sub, nn)


def test_two_is_separated(delta1, gfx, nn):
    assert lt.is_separated(delta1, gfx["two"], nn)
    assert lt.is_separated(delta1, gfx["I"], nn)
    assert not lt.is_separated(delta1, gfx["Omega"], nn)


def test_identity_topology_quotient_is_iso(delta1, gfx):
    idj = lt.identity_topology(delta1)
    for X in (gfx["I"], gfx["Omega"], gfx["two"]):
        q = quotient(delta1, X, idj)
        assert delta1.is_iso(q.q)


def test_negneg_quotient_of_interval(delta1, gfx, nn):
    q = quotient(delta1, gfx["I"], nn)
    # I is separated, so its separated reflection is itself
    assert q.presheaf.stages == (2, 3)
    assert delta1.is_iso(q.q)
    qom = quotient(delta1, gfx["Omega"], nn)
    assert qom.presheaf.stages == (2, 4)
    assert not delta1.is_iso(qom.q)


def test_quotient_is_separated(delta1, gfx, nn):
    for X in (gfx["I"], gfx["Omega"], gfx["IxI"]):
        q = quotient(delta1, X, nn)
        assert lt.is_separated(delta1, q.presheaf, nn)
        assert q.q.is_pointwise_surjective()


def test_quotient_preserves_products(delta1, gfx, nn):
    for X, Y in itertools.combinations(
            (gfx["one"], gfx["two"], gfx["I"], gfx["Omega"]), 2):
        prod = delta1.product(X, Y)
        qp = quotient(delta1, prod.presheaf, nn)
        qx = quotient(delta1, X, nn)
        qy = quotient(delta1, Y, nn)
        ma, _ = quotient_universal(delta1, prod.presheaf, nn,
                                   qx.q @ prod.proj1)
        mb, _ = quotient_universal(delta1, prod.presheaf, nn,
                                   qy.q @ prod.proj2)
        assert delta1.is_iso(delta1.pair(ma, mb))


def test_quotient_universal_property(delta1, gfx, nn):
    X = gfx["I"]
    q = quotient(delta1, X, nn)
    med, wit = quotient_universal(delta1, X, nn, q.q)
    assert med is not None and wit is None
    assert med.same_table(identity_map(q.presheaf))


def test_quotient_universal_rejects_with_witness(delta1, gfx):
    dense = [j for j in enumerate_topologies(delta1)
             if all(v == len(delta1.omega().sieves[c]) - 1
                    for c, tab in enumerate(j.tables) for v in tab)]
    assert dense
    j = dense[0]
    # under the everything-dense topology all elements are identified, so
    # any non-constant map must be rejected with a witnessing pair
    X = gfx["two"]
    maps = delta1.hom_set(X, X)
    nonconst = [f for f in maps if len(set(f.components[0])) > 1]
    med, wit = quotient_universal(delta1, X, j, nonconst[0])
    assert med is None
    assert "pair" in wit


def test_sheafify_identity_topology(delta1, gfx):
    idj = lt.identity_topology(delta1)
    sh = sheafify(delta1, gfx["I"], idj)
    assert delta1.is_iso(sh.unit)


def test_sheafify_two(delta1, gfx, nn):
    sh = sheafify(delta1, gfx["two"], nn)
    assert sh.presheaf.stages == (2, 4)  # the codiscrete graph on 2 points
    assert pi0(delta1, sh.presheaf).components == 1
    assert len(delta1.global_elements(sh.presheaf)) == 2
    assert lt.dense_mono(delta1, sh.unit, nn)


def test_sheafify_idempotent(delta1, gfx, nn):
    for X in gfx.values():
        sh = sheafify(delta1, X, nn)
        again = sheafify(delta1, sh.presheaf, nn)
        assert delta1.is_iso(again.unit)


def test_sheaf_check(delta1, gfx, nn):
    cov = lt.coverage_of(delta1, nn)
    sh = sheafify(delta1, gfx["Omega"], nn)
    assert lt.is_sheaf(delta1, sh.presheaf, cov)
    assert not lt.is_sheaf(delta1, gfx["Omega"], cov)


def test_homotopy_lift_unique(delta1, gfx, nn, gfx_family):
    from toposlab import check_NS, check_DSO, check_WDQO, make_theory
    from toposlab.cohesion import explicit_homotopy_search
    certs = {"NS": check_NS(delta1, gfx_family),
             "WDQO": check_WDQO(delta1, gfx_family),
             "DSO": check_DSO(delta1, gfx_family)}
    th = make_theory("pieces", delta1, gfx_family)
    I = gfx["I"]
    ident = identity_map(I)
    const = delta1.constant_map(I, delta1.global_elements(I)[0])
    eh = explicit_homotopy_search(th, ident, const, certs=certs)
    sh = sheafify(delta1, I, nn)
    hp, err = lt.homotopy_lift(delta1, eh.A, eh.h, sh.unit, I, nn)
    assert hp is not None and err is None
    prod_kx = delta1.product(eh.A, I)
    one_x_l = delta1.pair(prod_kx.proj1, sh.unit @ prod_kx.proj2)
    assert (hp @ one_x_l).same_table(sh.unit @ eh.h)


def test_homotopy_lift_degenerate_point(delta1, gfx, nn):
    one, I = gfx["one"], gfx["I"]
    sh = sheafify(delta1, I, nn)
    prod = delta1.product(one, I)
    h = identity_map(I) @ prod.proj2
    hp, err = lt.homotopy_lift(delta1, one, h, sh.unit, I, nn)
    assert hp is not None and err is None


def test_mod_relation_is_equivalence(delta1, gfx, nn):
    # the bug trap: closure of the diagonal must be an equivalence relation
    for X in (gfx["I"], gfx["Omega"], gfx["two"]):
        lt.mod_relation(delta1, X, nn)


def test_separated_iff_quotient_injective(delta1, gfx, nn):
    for X in gfx.values():
        q = quotient(delta1, X, nn)
        assert lt.is_separated(delta1, X, nn) == \
            q.q.is_pointwise_injective()


def test_quotients_separated_for_every_topology_on_every_builtin():
    # open question resolved as a test: Q_j lands in j-separated objects
    # for every enumerated topology on every builtin site
    from toposlab import Topos, builtin
    for site in ("one", "delta1", "two_discrete", "parallel_pair"):
        topos = Topos(builtin(site))
        one = topos.terminal()
        objects = [one, topos.coproduct(one, one).presheaf,
                   topos.omega().presheaf]
        if site in ("delta1", "parallel_pair"):
            objects.append(topos.yoneda(1))
        for j in enumerate_topologies(topos):
            for X in objects:
                q = quotient(topos, X, j)
                assert lt.is_separated(topos, q.presheaf, j), \
                    (site, j.label, X.label)

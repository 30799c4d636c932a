import itertools

import pytest

import naive_oracles as oracle
from toposlab import (certify_pieces_adjunction, codiscrete, discrete,
                      pi0, pi0_arrow, points, theta)
from toposlab.errors import PreconditionError
from toposlab.pieces import epic_image_connected, is_discrete_presheaf


def test_pi0_interval(delta1, gfx):
    assert pi0(delta1, gfx["I"]).components == 1


def test_pi0_two_is_discrete(delta1, gfx):
    res = pi0(delta1, gfx["two"])
    assert res.components == 2
    assert delta1.is_iso(res.p)


def test_pi0_omega_connected(delta1, gfx):
    # the sieve generated by one endpoint inclusion is an edge linking the
    # top and bottom loops
    assert pi0(delta1, gfx["Omega"]).components == 1


def test_pi0_matches_bfs_oracle(delta1, gfx):
    for X in gfx.values():
        assert pi0(delta1, X).components == oracle.components_by_bfs(X)


def test_pi0_assignment_orbit_constant(delta1, gfx):
    X = gfx["Omega"]
    res = pi0(delta1, X)
    cat = delta1.cat
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        for x in range(X.stages[b]):
            assert res.assignment[a][X.actions[m][x]] == \
                res.assignment[b][x]


def test_every_component_inhabited(delta1, gfx):
    for X in gfx.values():
        res = pi0(delta1, X)
        seen = set()
        for row in res.assignment:
            seen.update(row)
        assert seen == set(range(res.components))


def test_p_is_natural(delta1, gfx):
    X, Y = gfx["I"], gfx["Omega"]
    rx, ry = pi0(delta1, X), pi0(delta1, Y)
    for r in delta1.hom_set(X, Y):
        assert (ry.p @ r).same_table(pi0_arrow(delta1, rx, ry, r) @ rx.p)


def test_pi0_of_discrete(delta1):
    D = discrete(delta1, 3)
    res = pi0(delta1, D)
    assert res.components == 3
    assert delta1.is_iso(res.p)
    assert is_discrete_presheaf(D)


def test_points_of_omega(delta1, gfx):
    pts, gamma = points(delta1, gfx["Omega"])
    # two-valued topos: exactly top and bottom (oracle: Sub(1) count)
    assert len(pts) == oracle.subpresheaves_of_terminal(delta1.cat) == 2
    assert delta1.is_mono(gamma)


def test_points_of_initial(delta1, gfx):
    pts, _ = points(delta1, gfx["zero"])
    assert pts == []


def test_codiscrete(delta1):
    cod2 = codiscrete(delta1, 2)
    assert cod2.stages == (2, 4)
    assert cod2.validate() == []
    assert codiscrete(delta1, 1).stages == (1, 1)


def test_codiscrete_right_adjoint_to_points(delta1, gfx):
    # Hom(X, codisc(S)) has |S|^{points X} elements
    for S in (1, 2):
        cod = codiscrete(delta1, S)
        for X in (gfx["I"], gfx["two"], gfx["Omega"]):
            pts = delta1.global_elements(X)
            assert len(delta1.hom_set(X, cod)) == S ** len(pts)


def test_codiscrete_refuses_pointless_sites(irreflexive):
    with pytest.raises(PreconditionError):
        codiscrete(irreflexive, 2)


def test_theta(delta1, gfx):
    th2, _ = theta(delta1, gfx["two"])
    assert sorted(th2) == [0, 1]
    thom, res = theta(delta1, gfx["Omega"])
    assert res.components == 1
    assert thom == (0, 0)  # two points, one piece: not injective
    thi, _ = theta(delta1, gfx["I"])
    assert thi == (0, 0)


def test_pieces_adjunction_certificate(delta1, gfx_family):
    cert = certify_pieces_adjunction(delta1, gfx_family)
    assert cert.passed, cert.failures()
    # counit tables recorded for the discrete members
    names = [n for n, _ in cert.counit_tables]
    assert "two" in names


def test_pieces_adjunction_in_sets(sets):
    one = sets.terminal()
    fam = [("zero", sets.initial()), ("one", one),
           ("two", sets.coproduct(one, one).presheaf)]
    assert certify_pieces_adjunction(sets, fam).passed


def test_pieces_adjunction_irreflexive_still_passes(irreflexive):
    # the left adjoint exists on irreflexive graphs; what fails there is
    # product preservation, which this certificate does not claim
    I = irreflexive.yoneda(1).relabel("I")
    fam = [("one", irreflexive.terminal()), ("I", I)]
    assert certify_pieces_adjunction(irreflexive, fam).passed


def test_product_comparison_bijective_on_reflexive(delta1, gfx_family):
    for (nx, X), (ny, Y) in itertools.combinations(gfx_family, 2):
        prod = delta1.product(X, Y)
        rp = pi0(delta1, prod.presheaf)
        rx, ry = pi0(delta1, X), pi0(delta1, Y)
        cmp1 = pi0_arrow(delta1, rp, rx, prod.proj1)
        cmp2 = pi0_arrow(delta1, rp, ry, prod.proj2)
        assert delta1.is_iso(delta1.pair(cmp1, cmp2)), (nx, ny)


def test_product_comparison_fails_on_irreflexive(irreflexive):
    I = irreflexive.yoneda(1)
    prod = irreflexive.product(I, I)
    assert pi0(irreflexive, I).components == 1
    assert pi0(irreflexive, prod.presheaf).components == 3


def test_point_surjectivity_on_delta1(delta1, gfx_family):
    for name, X in gfx_family:
        res = pi0(delta1, X)
        hit = {(res.p @ pt).components[0][0]
               for pt in delta1.global_elements(X)}
        assert hit == set(range(res.components)), name


def test_epic_images_of_connected_are_connected(delta1, gfx):
    om = gfx["Omega"]
    res = pi0(delta1, om)
    assert epic_image_connected(delta1, res.p)
    for e in delta1.hom_set(gfx["I"], gfx["I"]):
        if delta1.is_epi(e):
            assert epic_image_connected(delta1, e)


def test_wdqo_style_bijection(delta1, gfx, gfx_family):
    two = gfx["two"]
    for name, X in gfx_family:
        res = pi0(delta1, X)
        assert len(delta1.hom_set(X, two)) == 2 ** res.components, name

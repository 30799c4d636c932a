import pytest

from toposlab import fincat
from toposlab.errors import PreconditionError, PresentationOverflow


def test_builtins_are_categories():
    for name in fincat.BUILTIN_NAMES:
        cat = fincat.builtin(name)
        assert fincat.validate_category(cat) == []


def test_delta1_shape():
    cat = fincat.builtin("delta1")
    assert cat.object_count == 2
    assert cat.morphism_count == 7
    # generators plus the two composite constants
    assert set(cat.morphism_names) == {
        "id[0]", "id[1]", "d0", "d1", "s", "d0.s", "d1.s"}
    s = cat.morphism_index("s")
    d0 = cat.morphism_index("d0")
    d1 = cat.morphism_index("d1")
    assert cat.table[s][d0] == cat.identity_of[0]
    assert cat.table[s][d1] == cat.identity_of[0]


def test_one_is_trivial():
    cat = fincat.builtin("one")
    assert cat.object_count == 1
    assert cat.morphism_count == 1


def test_two_discrete():
    cat = fincat.builtin("two_discrete")
    assert cat.morphism_count == 2
    assert fincat.terminal_object(cat) is None


def test_terminal_of_delta1():
    cat = fincat.builtin("delta1")
    assert fincat.terminal_object(cat) == 0
    # hom([1],[0]) is exactly {s}
    assert cat.hom(1, 0) == (cat.morphism_index("s"),)


def test_every_object_has_point_delta1():
    cat = fincat.builtin("delta1")
    ok, witnesses = fincat.every_object_has_point(cat)
    assert ok
    assert witnesses[0] == cat.identity_of[0]
    assert witnesses[1] in cat.hom(0, 1)


def test_points_need_terminal():
    cat = fincat.builtin("parallel_pair")
    with pytest.raises(PreconditionError):
        fincat.every_object_has_point(cat)


def test_point_missing_detected():
    # delta1 extended with a fresh object nothing maps into
    cat = fincat.from_presentation(
        ["[0]", "[1]", "w"],
        [("d0", "[0]", "[1]"), ("d1", "[0]", "[1]"), ("s", "[1]", "[0]"),
         ("c", "w", "[0]")],
        [(("s", "d0"), ()), (("s", "d1"), ())])
    assert fincat.validate_category(cat) == []
    ok, witnesses = fincat.every_object_has_point(cat)
    assert not ok
    assert witnesses[cat.object_index("w")] is None


def test_mutated_table_reports_identity_violation():
    cat = fincat.builtin("delta1")
    s = cat.morphism_index("s")
    d0 = cat.morphism_index("d0")
    table = [list(row) for row in cat.table]
    table[s][d0] = s  # rebind s∘d0 away from the identity
    broken = fincat.FinCategory(
        cat.object_count, cat.morphisms, cat.identity_of,
        tuple(tuple(r) for r in table), cat.object_names,
        cat.morphism_names)
    bad = fincat.validate_category(broken)
    assert bad
    assert any(v.axiom in ("composite-endpoints", "associativity",
                           "left-identity", "right-identity") for v in bad)


def test_opposite_involution():
    for name in fincat.BUILTIN_NAMES:
        cat = fincat.builtin(name)
        op = fincat.opposite(cat)
        assert fincat.validate_category(op) == []
        opop = fincat.opposite(op)
        assert opop.morphisms == cat.morphisms
        assert opop.table == cat.table


def test_covariant_criterion_via_opposite():
    # the covariant site criterion (initial object + copoints) is read off
    # by running the terminal-and-points check on the opposite category
    cat = fincat.builtin("delta1")
    op = fincat.opposite(cat)
    assert fincat.terminal_object(op) is None  # delta1^op has no terminal
    assert fincat.terminal_object(fincat.opposite(op)) == 0
    ok, _ = fincat.every_object_has_point(fincat.opposite(op))
    assert ok


def test_presentation_overflow():
    # a free idempotent-free loop never closes
    with pytest.raises(PresentationOverflow):
        fincat.from_presentation(["a"], [("f", "a", "a")], bound=8)


def test_functor_validation():
    cat = fincat.builtin("delta1")
    ident = fincat.FinFunctor(cat, cat,
                              tuple(range(cat.object_count)),
                              tuple(range(cat.morphism_count)))
    assert ident.validate() == []
    swapped = fincat.FinFunctor(
        cat, cat, tuple(range(cat.object_count)),
        tuple([1, 0] + list(range(2, cat.morphism_count))))
    assert swapped.validate()

from pathlib import Path

import pytest

from toposlab import parse, pi0
from toposlab.errors import DocumentError

CORPUS = Path(__file__).resolve().parent.parent / "docs" / "corpus"


def test_builtin_import():
    ws = parse("site C = builtin delta1\n")
    assert "C" in ws.sites
    assert ws.sites["C"].morphism_count == 7


def test_standard_document():
    ws = parse((CORPUS / "delta1.topos").read_text())
    assert ws.family == ["zero", "one", "two", "I", "Omega", "IxI"]
    assert ws.presheaf("Omega").stages == (2, 5)
    assert ws.presheaf("IxI").stages == (4, 9)
    assert ws.theory_kind == "pieces"
    assert ws.primary_site() == "C"


def test_explicit_site_document():
    ws = parse((CORPUS / "explicit_site.topos").read_text())
    assert ws.sites["D"].morphism_count == 7
    J = ws.presheaf("J")
    assert J.stages == (2, 3)
    assert "left" in ws.maps and "right" in ws.maps
    # J is the walking edge: connected
    assert pi0(ws.primary_topos(), J).components == 1


def test_named_entity_count():
    ws = parse((CORPUS / "explicit_site.topos").read_text())
    assert len(ws.presheaves) == 2
    assert len(ws.maps) == 2


def test_corpus_valid_documents():
    for doc in sorted(CORPUS.glob("*.topos")):
        parse(doc.read_text())


def test_corpus_invalid_documents():
    for doc in sorted(CORPUS.glob("*.bad")):
        with pytest.raises(DocumentError):
            parse(doc.read_text())


def test_non_natural_map_error_is_positioned():
    text = (CORPUS / "non_natural.bad").read_text()
    with pytest.raises(DocumentError) as err:
        parse(text)
    assert "naturality" in str(err.value)
    assert err.value.line > 0


def test_unknown_builtin():
    with pytest.raises(DocumentError):
        parse("site C = builtin banana\n")


def test_duplicate_name():
    with pytest.raises(DocumentError):
        parse("site C = builtin one\nlet X = terminal(C)\n"
              "let X = terminal(C)\n")


def test_unparseable_line_positions():
    with pytest.raises(DocumentError) as err:
        parse("site C = builtin one\nwibble\n")
    assert err.value.line == 2


def test_derived_composite_actions():
    # give only generator actions; composites are derived
    text = """
site C = builtin delta1
presheaf X on C
  stage [0] = 1
  stage [1] = 2
  action d0 = 0 0
  action d1 = 0 0
  action s = 0
end
"""
    ws = parse(text)
    assert ws.presheaf("X").validate() == []


def test_conflicting_action_rejected():
    text = """
site C = builtin delta1
presheaf X on C
  stage [0] = 2
  stage [1] = 2
  action d0 = 0 1
  action d1 = 1 0
  action s = 0 1
end
"""
    # d1 breaks contravariance against s (s.d1 must be the identity)
    with pytest.raises(DocumentError):
        parse(text)


def test_family_references_checked():
    with pytest.raises(DocumentError):
        parse("site C = builtin one\nfamily ghost\n")

"""Parser for workspace documents (``.topos`` files).

The grammar is line oriented; blocks are closed by ``end`` and ``#`` starts
a comment.  Everything is validated at load time: category axioms when a
site block closes, functoriality when a presheaf block closes, naturality
when a map block closes.  Errors carry 1-based line numbers; semantic
errors name the entity and the axiom that failed.

    site C = builtin delta1
    site D = category
      object V
      object E
      arrow s : V -> E
      arrow t : V -> E
      relation s . d0 = id [0]        # words compose right-to-left
    end
    presheaf X on C
      stage [0] = 2
      stage [1] = 3
      action d0 = 0 0 1               # one value per element of stage(cod)
      action d1 = 0 1 1
      action s  = 0 2
    end
    map f : X -> Y
      at [0] = 1 0
      at [1] = 0 0 1
    end
    let I = yoneda(C, [1])
    let Two = coproduct(One, One)
    family One, Two, I
    theory pieces

Constructors: terminal(S), initial(S), omega(S), yoneda(S, obj),
discrete(S, n), codiscrete(S, n), product(X, Y), coproduct(X, Y),
exponential(X, Y), pi0(X).  Actions may be given for generators only;
composite actions are derived and cross-checked.
"""

from __future__ import annotations

import re

from .config import DEFAULT
from .errors import DocumentError, PreconditionError, PresentationOverflow
from .fincat import from_presentation, builtin, validate_category
from .presheaf import Presheaf, PresheafMap
from . import pieces
from .workspace import Workspace

_LET = re.compile(r"^let\s+(\w+)\s*=\s*(\w+)\((.*)\)\s*$")
_SITE_BUILTIN = re.compile(r"^site\s+(\w+)\s*=\s*builtin\s+(\w+)\s*$")
_SITE_BLOCK = re.compile(r"^site\s+(\w+)\s*=\s*category\s*$")
_PRESHEAF = re.compile(r"^presheaf\s+(\w+)\s+on\s+(\w+)\s*$")
_MAP = re.compile(r"^map\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*$")
_OBJECT = re.compile(r"^object\s+(\S+)\s*$")
_ARROW = re.compile(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")
_RELATION = re.compile(r"^relation\s+(.+?)\s*=\s*(.+?)\s*$")
_STAGE = re.compile(r"^stage\s+(\S+)\s*=\s*(\d+)\s*$")
_ACTION = re.compile(r"^action\s+(\S+)\s*=\s*(.*)$")
_AT = re.compile(r"^at\s+(\S+)\s*=\s*(.*)$")
_FAMILY = re.compile(r"^family\s+(.+)$")
_THEORY = re.compile(r"^theory\s+(\S+)\s*$")


def _word(text, line):
    text = text.strip()
    if text.startswith("id"):
        return ()
    if not text:
        raise DocumentError(line, "empty word")
    return tuple(part.strip() for part in text.split("."))


def _ints(text, line):
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise DocumentError(line, f"expected integers, got {text!r}")


def parse(text, config=DEFAULT):
    """Parse and validate a workspace document."""
    ws = Workspace(config=config, source=text)
    lines = text.splitlines()
    i = 0
    n = len(lines)

    def strip(raw):
        return raw.split("#", 1)[0].strip()

    while i < n:
        line_no = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        m = _SITE_BUILTIN.match(line)
        if m:
            name, b = m.groups()
            try:
                ws.add_site(name, builtin(b))
            except (PreconditionError, DocumentError) as exc:
                raise DocumentError(line_no, str(exc))
            continue
        m = _SITE_BLOCK.match(line)
        if m:
            i = _parse_site_block(ws, m.group(1), lines, i, strip)
            continue
        m = _PRESHEAF.match(line)
        if m:
            i = _parse_presheaf_block(ws, m.group(1), m.group(2), lines, i,
                                      strip, line_no)
            continue
        m = _MAP.match(line)
        if m:
            i = _parse_map_block(ws, m.group(1), m.group(2), m.group(3),
                                 lines, i, strip, line_no)
            continue
        m = _LET.match(line)
        if m:
            _eval_let(ws, *m.groups(), line_no)
            continue
        m = _FAMILY.match(line)
        if m:
            names = [p.strip() for p in m.group(1).split(",") if p.strip()]
            for nm in names:
                if nm not in ws.presheaves:
                    raise DocumentError(line_no, f"unknown presheaf {nm!r}")
            ws.family = names
            continue
        m = _THEORY.match(line)
        if m:
            kind = m.group(1)
            if kind not in ("identity", "bang", "pieces") and \
                    not kind.startswith("topology:"):
                raise DocumentError(line_no, f"unknown theory {kind!r}")
            ws.theory_kind = kind
            continue
        raise DocumentError(line_no, f"cannot parse {line!r}")
    return ws


def _parse_site_block(ws, name, lines, i, strip):
    objects, generators, relations = [], [], []
    start = i
    while i < len(lines):
        line_no = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            try:
                cat = from_presentation(objects, generators, relations,
                                        bound=ws.config.closure_bound,
                                        name=name)
            except (PreconditionError, PresentationOverflow) as exc:
                raise DocumentError(line_no, f"site {name}: {exc}")
            bad = validate_category(cat)
            if bad:
                raise DocumentError(
                    line_no, f"site {name} violates {bad[0].axiom} "
                    f"at morphisms {bad[0].morphisms}")
            ws.add_site(name, cat)
            return i
        m = _OBJECT.match(line)
        if m:
            objects.append(m.group(1))
            continue
        m = _ARROW.match(line)
        if m:
            generators.append(m.groups())
            continue
        m = _RELATION.match(line)
        if m:
            relations.append((_word(m.group(1), line_no),
                              _word(m.group(2), line_no)))
            continue
        raise DocumentError(line_no, f"cannot parse site line {line!r}")
    raise DocumentError(start, f"site {name}: missing 'end'")


def _parse_presheaf_block(ws, name, site_name, lines, i, strip, head_line):
    if site_name not in ws.sites:
        raise DocumentError(head_line, f"unknown site {site_name!r}")
    cat = ws.sites[site_name]
    stages = [None] * cat.object_count
    given = {}
    start = i
    while i < len(lines):
        line_no = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            if any(s is None for s in stages):
                missing = cat.object_names[stages.index(None)]
                raise DocumentError(line_no,
                                    f"presheaf {name}: no stage {missing}")
            actions = _complete_actions(cat, stages, given, name, line_no)
            X = Presheaf(cat, tuple(stages), actions, label=name)
            bad = X.validate()
            if bad:
                raise DocumentError(
                    line_no,
                    f"presheaf {name} violates {bad[0][0]} ({bad[0][1]})")
            ws.add_presheaf(name, site_name, X)
            return i
        m = _STAGE.match(line)
        if m:
            try:
                c = cat.object_index(m.group(1))
            except PreconditionError as exc:
                raise DocumentError(line_no, str(exc))
            stages[c] = int(m.group(2))
            continue
        m = _ACTION.match(line)
        if m:
            try:
                mor = cat.morphism_index(m.group(1))
            except PreconditionError as exc:
                raise DocumentError(line_no, str(exc))
            given[mor] = (_ints(m.group(2), line_no), line_no)
            continue
        raise DocumentError(line_no, f"cannot parse presheaf line {line!r}")
    raise DocumentError(start, f"presheaf {name}: missing 'end'")


def _complete_actions(cat, stages, given, name, line_no):
    """Fill identity and composite actions from generator actions."""
    actions = [None] * cat.morphism_count
    for o in range(cat.object_count):
        actions[cat.identity_of[o]] = tuple(range(stages[o]))
    for mor, (vals, ln) in given.items():
        if len(vals) != stages[cat.cod(mor)]:
            raise DocumentError(
                ln, f"action {cat.morphism_names[mor]}: expected "
                f"{stages[cat.cod(mor)]} values")
        if any(not 0 <= v < stages[cat.dom(mor)] for v in vals):
            raise DocumentError(
                ln, f"action {cat.morphism_names[mor]}: value out of range")
        if actions[mor] is not None and tuple(vals) != actions[mor]:
            raise DocumentError(
                ln, f"action {cat.morphism_names[mor]} conflicts")
        actions[mor] = tuple(vals)
    changed = True
    while changed:
        changed = False
        for g in range(cat.morphism_count):
            for f in range(cat.morphism_count):
                if not cat.composable(g, f):
                    continue
                gf = cat.table[g][f]
                if actions[gf] is None and actions[g] is not None \
                        and actions[f] is not None:
                    actions[gf] = tuple(actions[f][actions[g][x]]
                                        for x in range(stages[cat.cod(g)]))
                    changed = True
    for mor, act in enumerate(actions):
        if act is None:
            raise DocumentError(
                line_no, f"presheaf {name}: no action for "
                f"{cat.morphism_names[mor]} and it is not derivable")
    return tuple(actions)


def _parse_map_block(ws, name, dom_name, cod_name, lines, i, strip,
                     head_line):
    if name in ws.maps:
        raise DocumentError(head_line, f"map {name!r} already defined")
    X = ws.presheaf(dom_name) if dom_name in ws.presheaves else None
    Y = ws.presheaf(cod_name) if cod_name in ws.presheaves else None
    if X is None or Y is None:
        missing = dom_name if X is None else cod_name
        raise DocumentError(head_line, f"unknown presheaf {missing!r}")
    cat = X.base
    comps = [None] * cat.object_count
    start = i
    while i < len(lines):
        line_no = i + 1
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            if any(c is None for c in comps):
                missing = cat.object_names[comps.index(None)]
                raise DocumentError(line_no, f"map {name}: no row {missing}")
            f = PresheafMap(X, Y, tuple(comps), label=name)
            bad = f.validate()
            if bad:
                mor, x = bad[0]
                raise DocumentError(
                    line_no, f"map {name}: naturality fails at morphism "
                    f"{cat.morphism_names[mor]}, element {x}")
            ws.maps[name] = f
            return i
        m = _AT.match(line)
        if m:
            try:
                c = cat.object_index(m.group(1))
            except PreconditionError as exc:
                raise DocumentError(line_no, str(exc))
            vals = _ints(m.group(2), line_no)
            if len(vals) != X.stages[c]:
                raise DocumentError(
                    line_no, f"map {name} at {m.group(1)}: expected "
                    f"{X.stages[c]} values")
            if any(not 0 <= v < Y.stages[c] for v in vals):
                raise DocumentError(
                    line_no, f"map {name} at {m.group(1)}: out of range")
            comps[c] = tuple(vals)
            continue
        raise DocumentError(line_no, f"cannot parse map line {line!r}")
    raise DocumentError(start, f"map {name}: missing 'end'")


def _eval_let(ws, name, ctor, args_text, line_no):
    args = [a.strip() for a in args_text.split(",") if a.strip()]

    def site_arg(k=0):
        if len(args) <= k or args[k] not in ws.sites:
            raise DocumentError(line_no, f"{ctor} needs a site argument")
        return args[k]

    def presheaf_arg(k):
        if len(args) <= k or args[k] not in ws.presheaves:
            raise DocumentError(
                line_no, f"{ctor}: unknown presheaf "
                f"{args[k] if len(args) > k else '?'}")
        return args[k]

    try:
        if ctor == "terminal":
            s = site_arg()
            ws.add_presheaf(name, s, ws.topos_of(s).terminal())
        elif ctor == "initial":
            s = site_arg()
            ws.add_presheaf(name, s, ws.topos_of(s).initial())
        elif ctor == "omega":
            s = site_arg()
            ws.add_presheaf(name, s, ws.topos_of(s).omega().presheaf)
        elif ctor == "yoneda":
            s = site_arg()
            c = ws.sites[s].object_index(args[1])
            ws.add_presheaf(name, s, ws.topos_of(s).yoneda(c))
        elif ctor in ("discrete", "codiscrete"):
            s = site_arg()
            size = int(args[1])
            fn = pieces.discrete if ctor == "discrete" else pieces.codiscrete
            ws.add_presheaf(name, s, fn(ws.topos_of(s), size))
        elif ctor in ("product", "coproduct", "exponential"):
            a, b = presheaf_arg(0), presheaf_arg(1)
            s = ws.site_of_presheaf(a)
            if ws.site_of_presheaf(b) != s:
                raise DocumentError(line_no, "operands on different sites")
            topos = ws.topos_of(s)
            X, Y = ws.presheaf(a), ws.presheaf(b)
            if ctor == "product":
                ws.add_presheaf(name, s, topos.product(X, Y).presheaf)
            elif ctor == "coproduct":
                ws.add_presheaf(name, s, topos.coproduct(X, Y).presheaf)
            else:
                ws.add_presheaf(name, s,
                                topos.exponential(X, Y).presheaf)
        elif ctor == "pi0":
            a = presheaf_arg(0)
            s = ws.site_of_presheaf(a)
            ws.add_presheaf(
                name, s, pieces.pi0(ws.topos_of(s), ws.presheaf(a)).presheaf)
        else:
            raise DocumentError(line_no, f"unknown constructor {ctor!r}")
    except DocumentError:
        raise
    except (PreconditionError, ValueError, IndexError) as exc:
        raise DocumentError(line_no, f"{ctor}: {exc}")

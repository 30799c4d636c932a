"""The cohesion string over finite sets: pieces, discrete, points, codiscrete.

Pieces are computed as connected components of the category of elements:
union-find over the disjoint union of all stages, merging x with every
restriction action(f)(x).  Component numbering is by smallest contained
element in stage-major order, so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .fincat import every_object_has_point, terminal_object
from .presheaf import Presheaf, PresheafMap, Subobject, Topos
from .utils import UnionFind


@dataclass(frozen=True)
class PiecesResult:
    components: int
    assignment: tuple       # per object: element -> component index
    presheaf: Presheaf      # discrete presheaf on the component set
    p: PresheafMap          # X -> discrete(components)


def discrete(topos: Topos, size, label=None):
    """Constant presheaf with identity actions."""
    cat = topos.cat
    stages = tuple(size for _ in range(cat.object_count))
    actions = tuple(tuple(range(size)) for _ in range(cat.morphism_count))
    return Presheaf(cat, stages, actions,
                    label=label or f"disc({size})")


def pi0(topos: Topos, X) -> PiecesResult:
    """Connected components with the canonical map p: X -> disc(pi0 X)."""
    cat = topos.cat
    offs = []
    total = 0
    for c in range(cat.object_count):
        offs.append(total)
        total += X.stages[c]
    uf = UnionFind(total)
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        row = X.actions[m]
        for x in range(X.stages[b]):
            uf.union(offs[b] + x, offs[a] + row[x])
    labels = uf.canonical_labels()
    k = (max(labels) + 1) if labels else 0
    assignment = tuple(
        tuple(labels[offs[c] + x] for x in range(X.stages[c]))
        for c in range(cat.object_count))
    D = discrete(topos, k, label=f"pi0({X.label})")
    p = PresheafMap(X, D, assignment)
    return PiecesResult(k, assignment, D, p)


def pi0_arrow(topos: Topos, px: PiecesResult, py: PiecesResult, r):
    """pi0(r): disc(pi0 X) -> disc(pi0 Y) induced by r: X -> Y."""
    cat = topos.cat
    out = [None] * px.components
    for c in range(cat.object_count):
        for x in range(r.dom.stages[c]):
            kx = px.assignment[c][x]
            ky = py.assignment[c][r.components[c][x]]
            if out[kx] is None:
                out[kx] = ky
            elif out[kx] != ky:
                raise PreconditionError(
                    "map does not descend to components; not natural?")
    comp = tuple(v if v is not None else 0 for v in out)
    comps = tuple(comp for _ in range(cat.object_count))
    return PresheafMap(px.presheaf, py.presheaf, comps)


def points(topos: Topos, X):
    """(global point list, gamma: disc(n) -> X), the points subobject."""
    pts = topos.global_elements(X)
    D = discrete(topos, len(pts), label=f"pts({X.label})")
    comps = tuple(
        tuple(pt.components[c][0] for pt in pts)
        for c in range(topos.cat.object_count))
    gamma = PresheafMap(D, X, comps)
    return pts, gamma


def points_subobject(topos: Topos, X) -> Subobject:
    """Image of gamma: the elements hit by some global point."""
    pts = topos.global_elements(X)
    selected = tuple(
        tuple(sorted({pt.components[c][0] for pt in pts}))
        for c in range(topos.cat.object_count))
    return Subobject(X, selected)


def codiscrete(topos: Topos, size):
    """Right adjoint to points, built pointwise from site points.

    Stage at c is the set of functions points(y(c)) -> S.  Requires the
    site to pass the terminal-with-all-points criteria; refuses otherwise.
    """
    cat = topos.cat
    t = terminal_object(cat)
    if t is None:
        raise PreconditionError("site has no terminal object")
    ok, _ = every_object_has_point(cat)
    if not ok:
        raise PreconditionError("some site object has no point")
    pt_lists = [cat.hom(t, c) for c in range(cat.object_count)]
    stages = tuple(size ** len(pt_lists[c])
                   for c in range(cat.object_count))

    def decode(c, h):
        # h encodes a function pt_lists[c] -> S, base-`size`, first point
        # in the lowest digit
        vals = []
        for _ in pt_lists[c]:
            vals.append(h % size)
            h //= size
        return vals

    def encode(c, vals):
        h = 0
        for v in reversed(vals):
            h = h * size + v
        return h

    actions = []
    for m in range(cat.morphism_count):
        a, b = cat.dom(m), cat.cod(m)
        row = []
        for h in range(stages[b]):
            vals = decode(b, h)
            new = [vals[pt_lists[b].index(cat.table[m][p])]
                   for p in pt_lists[a]]
            row.append(encode(a, new))
        actions.append(tuple(row))
    return Presheaf(cat, stages, tuple(actions), label=f"codisc({size})")


def theta(topos: Topos, X):
    """Points-to-pieces index function: point i -> its component."""
    pts = topos.global_elements(X)
    res = pi0(topos, X)
    if topos.cat.object_count == 0:
        return tuple(), res
    return tuple(res.assignment[0][pt.components[0][0]] for pt in pts), res


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: object = None


@dataclass(frozen=True)
class AdjunctionCertificate:
    checks: tuple
    unit_tables: tuple = ()
    counit_tables: tuple = ()

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def certify_pieces_adjunction(topos: Topos, family, sizes=(0, 1, 2, 3)):
    """Hom(X, disc(S)) is precomposition-with-p bijective to S^(pi0 X).

    ``family`` is a list of (name, presheaf).  Also records that p is an
    isomorphism on discrete members (the counit epsilon = p^-1).
    """
    checks = []
    counits = []
    for name, X in family:
        res = pi0(topos, X)
        for size in sizes:
            D = discrete(topos, size)
            homs = topos.hom_set(X, D)
            expected = size ** res.components
            seen = set()
            factor_ok = True
            for h in homs:
                # h must be constant on components; read off the factor
                vec = [None] * res.components
                for c in range(topos.cat.object_count):
                    for x in range(X.stages[c]):
                        k = res.assignment[c][x]
                        v = h.components[c][x]
                        if vec[k] is None:
                            vec[k] = v
                        elif vec[k] != v:
                            factor_ok = False
                seen.add(tuple(vec))
            ok = factor_ok and len(homs) == expected and \
                len(seen) == len(homs)
            checks.append(CheckResult(
                f"hom({name},disc{size})~functions",
                ok, None if ok else {"object": name, "size": size,
                                     "homs": len(homs),
                                     "expected": expected}))
        # counit on a discrete member: p is iso and epsilon = p^-1
        if is_discrete_presheaf(X):
            iso = topos.is_iso(res.p)
            checks.append(CheckResult(f"p_iso_on_discrete({name})", iso))
            if iso:
                counits.append((name,
                                topos.inverse(res.p).components))
    # naturality of the bijection in X over family arrows (capped)
    for name_x, X in family:
        for name_y, Y in family:
            try:
                arrows = topos.hom_set(X, Y, cap=64)
            except Exception:
                continue
            resx, resy = pi0(topos, X), pi0(topos, Y)
            for r in arrows[: 16]:
                try:
                    pi_r = pi0_arrow(topos, resx, resy, r)
                except PreconditionError as exc:
                    checks.append(CheckResult(
                        f"pi0_descends({name_x}->{name_y})", False,
                        str(exc)))
                    continue
                lhs = resy.p @ r
                rhs = pi_r @ resx.p
                if not lhs.same_table(rhs):
                    checks.append(CheckResult(
                        f"p_natural({name_x}->{name_y})", False))
                    break
            else:
                checks.append(CheckResult(
                    f"p_natural({name_x}->{name_y})", True))
    return AdjunctionCertificate(tuple(checks),
                                 counit_tables=tuple(counits))


def is_discrete_presheaf(X):
    """All stages equal and all actions identities."""
    if not X.stages:
        return True
    n = X.stages[0]
    return all(s == n for s in X.stages) and \
        all(row == tuple(range(n)) for row in X.actions)


def epic_image_connected(topos: Topos, e):
    """Observation check: e epi and dom connected imply cod connected."""
    if not topos.is_epi(e):
        raise PreconditionError("map is not epi")
    src = pi0(topos, e.dom)
    if src.components != 1:
        raise PreconditionError("domain is not connected")
    return pi0(topos, e.cod).components == 1

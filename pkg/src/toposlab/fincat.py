"""Finite categories used as sites for presheaf toposes.

A category is stored as dense index tables: a morphism list with (dom, cod)
pairs, an identity index per object and a full composition table.  Sites are
tiny, so every axiom is checked exhaustively (associativity is O(n^3)).

Variance convention, fixed once for the whole package: presheaves are
contravariant, and a *point* of a site object c is a morphism t -> c from
the terminal object t.  The covariant site criterion (initial object plus
copoints) is obtained by running the same checks on ``opposite(C)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import PreconditionError, PresentationOverflow
from .utils import digest_bytes, ints_blob


@dataclass(frozen=True)
class FinCategory:
    object_count: int
    morphisms: tuple  # (dom, cod) per morphism index
    identity_of: tuple  # object index -> morphism index
    table: tuple  # table[g][f] = index of g∘f, or -1 when cod(f) != dom(g)
    object_names: tuple = ()
    morphism_names: tuple = ()
    name: str = ""

    def __post_init__(self):
        if not self.object_names:
            object.__setattr__(
                self, "object_names",
                tuple(f"[{i}]" for i in range(self.object_count)))
        if not self.morphism_names:
            object.__setattr__(
                self, "morphism_names",
                tuple(f"m{i}" for i in range(len(self.morphisms))))

    @property
    def morphism_count(self):
        return len(self.morphisms)

    def dom(self, m):
        return self.morphisms[m][0]

    def cod(self, m):
        return self.morphisms[m][1]

    def composable(self, g, f):
        return self.cod(f) == self.dom(g)

    def compose(self, g, f):
        """Index of g∘f; raises when the pair is not composable."""
        h = self.table[g][f]
        if h < 0:
            raise PreconditionError(
                f"morphisms {g} and {f} are not composable")
        return h

    def hom(self, a, b):
        """Morphism indices a -> b, in index order."""
        return tuple(m for m, (d, c) in enumerate(self.morphisms)
                     if d == a and c == b)

    def into(self, c):
        """Morphism indices with codomain c, in index order."""
        return tuple(m for m, (_, cc) in enumerate(self.morphisms) if cc == c)

    def is_identity(self, m):
        return self.identity_of[self.dom(m)] == m

    @cached_property
    def digest(self):
        parts = [ints_blob([self.object_count]),
                 ints_blob(x for dc in self.morphisms for x in dc),
                 ints_blob(self.identity_of),
                 ints_blob(x for row in self.table for x in row)]
        return digest_bytes(b"cat|" + b"|".join(parts))

    def object_index(self, name):
        try:
            return self.object_names.index(name)
        except ValueError:
            raise PreconditionError(f"unknown object {name!r}") from None

    def morphism_index(self, name):
        try:
            return self.morphism_names.index(name)
        except ValueError:
            raise PreconditionError(f"unknown morphism {name!r}") from None


@dataclass(frozen=True)
class Violation:
    axiom: str
    morphisms: tuple
    detail: str


def validate_category(cat: FinCategory):
    """Every violated axiom with witnessing indices; empty iff a category."""
    out = []
    n = cat.morphism_count
    for o in range(cat.object_count):
        i = cat.identity_of[o]
        if cat.morphisms[i] != (o, o):
            out.append(Violation("identity-endpoints", (i,),
                                 f"identity of object {o} is not o->o"))
    for g in range(n):
        for f in range(n):
            h = cat.table[g][f]
            if cat.composable(g, f):
                if h < 0:
                    out.append(Violation("totality", (g, f),
                                         "composable pair has no composite"))
                elif cat.morphisms[h] != (cat.dom(f), cat.cod(g)):
                    out.append(Violation("composite-endpoints", (g, f, h),
                                         "dom/cod of composite is wrong"))
            elif h >= 0:
                out.append(Violation("partiality", (g, f),
                                     "non-composable pair has a composite"))
    for f in range(n):
        left = cat.table[cat.identity_of[cat.cod(f)]][f]
        right = cat.table[f][cat.identity_of[cat.dom(f)]]
        if left != f:
            out.append(Violation("left-identity", (f, left),
                                 "id∘f differs from f"))
        if right != f:
            out.append(Violation("right-identity", (f, right),
                                 "f∘id differs from f"))
    for h in range(n):
        for g in range(n):
            if not cat.composable(h, g):
                continue
            hg = cat.table[h][g]
            for f in range(n):
                if not cat.composable(g, f):
                    continue
                if cat.table[h][cat.table[g][f]] != cat.table[hg][f]:
                    out.append(Violation(
                        "associativity", (h, g, f),
                        "h∘(g∘f) differs from (h∘g)∘f"))
    return out


def terminal_object(cat: FinCategory):
    """The object with exactly one incoming morphism per object, or None.

    Uniqueness (up to nothing: on the nose, by exhaustive scan) is asserted.
    """
    found = None
    for t in range(cat.object_count):
        if all(len(cat.hom(c, t)) == 1 for c in range(cat.object_count)):
            if found is not None:
                raise PreconditionError(
                    "two distinct strict terminal objects; degenerate site")
            found = t
    return found


def every_object_has_point(cat: FinCategory):
    """(flag, witnesses): for each object a morphism from the terminal.

    Precondition: the site has a terminal object.
    """
    t = terminal_object(cat)
    if t is None:
        raise PreconditionError("site has no terminal object")
    witnesses = {}
    ok = True
    for c in range(cat.object_count):
        pts = cat.hom(t, c)
        witnesses[c] = pts[0] if pts else None
        if not pts:
            ok = False
    return ok, witnesses


def opposite(cat: FinCategory):
    """Swap dom/cod and transpose the composition table."""
    morphisms = tuple((c, d) for (d, c) in cat.morphisms)
    n = cat.morphism_count
    table = tuple(tuple(cat.table[f][g] for f in range(n)) for g in range(n))
    return FinCategory(cat.object_count, morphisms, cat.identity_of, table,
                       cat.object_names, cat.morphism_names,
                       name=f"{cat.name}_op" if cat.name else "")


def from_presentation(object_names, generators, relations=(), *,
                      bound=64, name=""):
    """Close a presentation (generators + word relations) under composition.

    ``generators`` is a list of (gen_name, dom_name, cod_name); ``relations``
    a list of word pairs, each word a tuple of generator names composed
    right-to-left (so ("s", "d0") denotes s∘d0) or () for an identity.
    Words are normalised by rewriting the longer side of each relation to
    the shorter one until a fixed point.  Fails loudly past ``bound``.
    """
    n_obj = len(object_names)
    obj_ix = {nm: i for i, nm in enumerate(object_names)}
    gen = {}
    for g, d, c in generators:
        gen[g] = (obj_ix[d], obj_ix[c])

    def word_endpoints(word, at=None):
        # right-to-left: word = (g_k, ..., g_1) means g_k ∘ ... ∘ g_1
        if not word:
            if at is None:
                raise PreconditionError("empty word needs an anchor object")
            return at, at
        d = gen[word[-1]][0]
        c = gen[word[0]][1]
        x = d
        for g in reversed(word):
            gd, gc = gen[g]
            if gd != x:
                raise PreconditionError(f"word {word} is not composable")
            x = gc
        return d, c

    rules = []
    for lhs, rhs in relations:
        lhs, rhs = tuple(lhs), tuple(rhs)
        if len(rhs) > len(lhs):
            lhs, rhs = rhs, lhs
        rules.append((lhs, rhs))

    def normalise(word):
        changed = True
        while changed:
            changed = False
            for lhs, rhs in rules:
                k = len(lhs)
                if k == 0:
                    continue
                for i in range(len(word) - k + 1):
                    if word[i:i + k] == lhs:
                        word = word[:i] + rhs + word[i + k:]
                        changed = True
                        break
                if changed:
                    break
        return word

    # keys: ("id", o) for identities, ("w", word) for nonempty normal words
    words = {}
    order = []

    def add(key, d, c):
        if key not in words:
            words[key] = (d, c)
            order.append(key)
            if len(order) > bound:
                raise PresentationOverflow(
                    f"presentation closure exceeded {bound} morphisms")

    for o in range(n_obj):
        add(("id", o), o, o)
    for g, (d, c) in gen.items():
        w = normalise((g,))
        add(("w", w) if w else ("id", d), d, c)

    def compose_keys(kg, kf):
        dg, cg = words[kg]
        df, cf = words[kf]
        if cf != dg:
            return None
        wg = kg[1] if kg[0] == "w" else ()
        wf = kf[1] if kf[0] == "w" else ()
        w = normalise(wg + wf)
        return (("w", w) if w else ("id", df)), df, cg

    changed = True
    while changed:
        changed = False
        snapshot = list(order)
        for kg in snapshot:
            for kf in snapshot:
                res = compose_keys(kg, kf)
                if res is None:
                    continue
                key, d, c = res
                if key not in words:
                    add(key, d, c)
                    changed = True

    # freeze order: identities by object, then creation order
    creation = {k: i for i, k in enumerate(order)}
    final = sorted(order, key=lambda k: (0, k[1]) if k[0] == "id"
                   else (1, creation[k]))
    index = {k: i for i, k in enumerate(final)}
    morphisms = tuple(words[k] for k in final)
    identity_of = tuple(index[("id", o)] for o in range(n_obj))
    table = []
    for kg in final:
        row = []
        for kf in final:
            res = compose_keys(kg, kf)
            if res is None:
                row.append(-1)
            else:
                key = res[0]
                if key not in index:
                    raise PresentationOverflow(
                        "closure left a composite outside the table")
                row.append(index[key])
        table.append(tuple(row))

    def label(k):
        if k[0] == "id":
            return f"id{object_names[k[1]]}"
        return ".".join(k[1])

    return FinCategory(n_obj, morphisms, identity_of, tuple(table),
                       tuple(object_names), tuple(label(k) for k in final),
                       name=name)


BUILTIN_NAMES = ("one", "delta1", "two_discrete", "parallel_pair")


def builtin(name):
    """Named sites: terminal; reflexive-graph; 2-discrete; parallel pair."""
    if name == "one":
        return from_presentation(["*"], [], name="one")
    if name == "delta1":
        return from_presentation(
            ["[0]", "[1]"],
            [("d0", "[0]", "[1]"), ("d1", "[0]", "[1]"), ("s", "[1]", "[0]")],
            [(("s", "d0"), ()), (("s", "d1"), ())],
            name="delta1")
    if name == "two_discrete":
        return from_presentation(["A", "B"], [], name="two_discrete")
    if name == "parallel_pair":
        return from_presentation(
            ["V", "E"], [("s", "V", "E"), ("t", "V", "E")],
            name="parallel_pair")
    raise PreconditionError(f"unknown builtin site {name!r}")


@dataclass(frozen=True)
class FinFunctor:
    """Functor between finite categories given by raw index tables."""
    source: FinCategory
    target: FinCategory
    object_map: tuple
    morphism_map: tuple

    def validate(self):
        out = []
        src, tgt = self.source, self.target
        for m in range(src.morphism_count):
            fm = self.morphism_map[m]
            if (tgt.dom(fm) != self.object_map[src.dom(m)]
                    or tgt.cod(fm) != self.object_map[src.cod(m)]):
                out.append(Violation("functor-endpoints", (m,),
                                     "image has wrong dom/cod"))
        for o in range(src.object_count):
            if self.morphism_map[src.identity_of[o]] != \
                    tgt.identity_of[self.object_map[o]]:
                out.append(Violation("functor-identity", (o,),
                                     "identity not preserved"))
        for g in range(src.morphism_count):
            for f in range(src.morphism_count):
                if src.composable(g, f):
                    lhs = self.morphism_map[src.table[g][f]]
                    rhs = tgt.table[self.morphism_map[g]][self.morphism_map[f]]
                    if lhs != rhs:
                        out.append(Violation("functor-composition", (g, f),
                                             "composition not preserved"))
        return out

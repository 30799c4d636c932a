"""Workspaces: named sites, presheaves and arrows plus run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import Config, DEFAULT
from .errors import DocumentError, PreconditionError
from .fincat import builtin
from .presheaf import Topos


@dataclass
class Workspace:
    config: Config = DEFAULT
    sites: dict = field(default_factory=dict)
    toposes: dict = field(default_factory=dict)
    presheaves: dict = field(default_factory=dict)   # name -> (site, Presheaf)
    maps: dict = field(default_factory=dict)         # name -> PresheafMap
    family: list = field(default_factory=list)
    theory_kind: str = "pieces"
    source: str = ""

    def add_site(self, name, cat):
        if name in self.sites:
            raise DocumentError(0, f"site {name!r} already defined")
        self.sites[name] = cat
        self.toposes[name] = Topos(cat, self.config)

    def topos_of(self, site_name):
        return self.toposes[site_name]

    def add_presheaf(self, name, site_name, X):
        if name in self.presheaves:
            raise DocumentError(0, f"presheaf {name!r} already defined")
        self.presheaves[name] = (site_name, X.relabel(name))

    def presheaf(self, name):
        try:
            return self.presheaves[name][1]
        except KeyError:
            raise PreconditionError(f"unknown presheaf {name!r}") from None

    def site_of_presheaf(self, name):
        return self.presheaves[name][0]

    def family_items(self):
        """(name, presheaf) pairs of the registered family."""
        names = self.family or list(self.presheaves)
        return [(n, self.presheaf(n)) for n in names]

    def primary_site(self):
        names = self.family or list(self.presheaves)
        sites = {self.site_of_presheaf(n) for n in names}
        if len(sites) != 1:
            raise PreconditionError(
                "family spans several sites; declare a family on one site")
        return next(iter(sites))

    def primary_topos(self):
        return self.toposes[self.primary_site()]


def standard_workspace(site_name, config=DEFAULT):
    """The canonical family used throughout the verification suites.

    delta1: {0, 1, 2, I, Omega, IxI}; other sites get the same shape with
    the interval replaced by a representable when one exists.
    """
    ws = Workspace(config=config)
    cat = builtin(site_name)
    ws.add_site("C", cat)
    topos = ws.topos_of("C")
    one = topos.terminal()
    zero = topos.initial()
    two = topos.coproduct(one, one).presheaf
    om = topos.omega().presheaf
    ws.add_presheaf("zero", "C", zero)
    ws.add_presheaf("one", "C", one)
    ws.add_presheaf("two", "C", two)
    if site_name == "delta1":
        I = topos.yoneda(1)
        ws.add_presheaf("I", "C", I)
        ws.add_presheaf("Omega", "C", om)
        ws.add_presheaf("IxI", "C",
                        topos.product(ws.presheaf("I"), ws.presheaf("I"))
                        .presheaf)
        ws.family = ["zero", "one", "two", "I", "Omega", "IxI"]
    elif site_name == "parallel_pair":
        I = topos.yoneda(1)
        ws.add_presheaf("I", "C", I)
        ws.family = ["one", "I"]
    else:
        # the representable over the one-object site is the terminal, so
        # the interval members of the standard family degenerate to 1
        I = topos.yoneda(0)
        ws.add_presheaf("I", "C", I)
        ws.add_presheaf("Omega", "C", om)
        ws.add_presheaf("IxI", "C", topos.product(I, I).presheaf)
        ws.family = ["zero", "one", "two", "I", "Omega", "IxI"]
    return ws

"""Print every oracle-derived golden value frozen into the test suite."""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import naive_oracles as oracle  # noqa: E402
from toposlab.fincat import builtin  # noqa: E402
from toposlab.presheaf import Topos  # noqa: E402


def main():
    for site in ("one", "delta1", "two_discrete", "parallel_pair"):
        cat = builtin(site)
        print(f"== site {site}")
        print("  omega stage sizes:", oracle.omega_stage_sizes(cat))
        print("  |Hom(1, Omega)| via Sub(1):",
              oracle.subpresheaves_of_terminal(cat))
        topos = Topos(cat)
        om_sizes = oracle.omega_stage_sizes(cat)
        if site == "delta1":
            topos = Topos(cat)
            I = topos.yoneda(1)
            one = topos.terminal()
            two = topos.coproduct(one, one).presheaf
            om = topos.omega().presheaf
            II = topos.product(I, I).presheaf
            print("  pi0(Omega) by BFS:", oracle.components_by_bfs(om))
            print("  pi0(I) by BFS:", oracle.components_by_bfs(I))
            print("  pi0(IxI) by BFS:", oracle.components_by_bfs(II))
            print("  |Hom(I,I)| by filter:",
                  len(oracle.nat_transformations_by_filter(I, I)))
            print("  |Hom(I,Omega)| by filter:",
                  len(oracle.nat_transformations_by_filter(I, om)))
            print("  |Hom(IxI,I)| by filter:",
                  len(oracle.nat_transformations_by_filter(II, I)))
            print("  2^2 stage [0] by filter:",
                  len(oracle.exponential_stage_by_filter(topos, two, two,
                                                         0)))
            print("  2^2 stage [1] by filter:",
                  len(oracle.exponential_stage_by_filter(topos, two, two,
                                                         1)))
        if site == "parallel_pair":
            I = topos.yoneda(1)
            II = topos.product(I, I).presheaf
            print("  irreflexive pi0(IxI) by BFS:",
                  oracle.components_by_bfs(II))


if __name__ == "__main__":
    main()

"""Run configuration: budgets, deterministic seed, exhaustiveness bounds.

Every report echoes the configuration it ran under so results are
reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class Config:
    #: cap on candidate expansions per enumerated stage (exponentials,
    #: matching families, hom-sets); exceeding it raises BudgetExceeded.
    budget: int = 1_000_000
    #: cap on the number of arrows materialised for one hom-set; partitions
    #: beyond this size are not feasible either way, so the cap doubles as
    #: a fast early abort for astronomically large hom-sets.
    hom_cap: int = 30_000
    #: cap on pairwise connectivity probes while partitioning a hom-set.
    pair_budget: int = 20_000_000
    #: hom-sets up to this size get exhaustive representative-independence
    #: checks; larger ones are sampled with the seed below.
    exhaustive_bound: int = 64
    #: sample size for checks downgraded from exhaustive to sampled.
    sample_size: int = 50
    #: seed for every sampled check.
    seed: int = 0
    #: bound for closing site presentations under composition.
    closure_bound: int = 64

    def as_dict(self):
        return asdict(self)


DEFAULT = Config()

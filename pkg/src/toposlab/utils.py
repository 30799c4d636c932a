"""Small shared helpers: union-find and stable digests."""

from __future__ import annotations

import hashlib


class UnionFind:
    """Array-based union-find with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def same(self, a, b):
        return self.find(a) == self.find(b)

    def canonical_labels(self):
        """Component index per element, numbered by smallest member.

        Deterministic: component 0 contains element 0's root class, the
        next unseen root gets the next index, scanning elements in order.
        """
        labels = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in labels:
                labels[r] = len(labels)
            out.append(labels[r])
        return out


def digest_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def ints_blob(values) -> bytes:
    """Stable byte serialisation of an int sequence."""
    return (",".join(str(v) for v in values)).encode("ascii")

"""Array-backed union-find with path halving and union by size."""

from __future__ import annotations


class UnionFind:
    """Disjoint sets over the integers 0..n-1."""

    __slots__ = ("parent", "size", "n_sets")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_sets = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b.  Returns True if they were distinct."""
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_sets -= 1
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

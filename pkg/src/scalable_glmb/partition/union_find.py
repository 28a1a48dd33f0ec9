"""Disjoint-set forest over integer ids."""


class UnionFind:
    """Union-find with path halving and union by size."""

    def __init__(self, size: int) -> None:
        self._parent = list(range(size))
        self._size = [1] * size

    def __len__(self) -> int:
        return len(self._parent)

    def find(self, i: int) -> int:
        parent = self._parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        root_i, root_j = self.find(i), self.find(j)
        if root_i == root_j:
            return
        if self._size[root_i] < self._size[root_j]:
            root_i, root_j = root_j, root_i
        self._parent[root_j] = root_i
        self._size[root_i] += self._size[root_j]

    def groups(self) -> list[list[int]]:
        """Members of every set, each sorted, ordered by smallest member."""
        members: dict[int, list[int]] = {}
        for i in range(len(self._parent)):
            members.setdefault(self.find(i), []).append(i)
        return sorted(members.values(), key=lambda group: group[0])

"""Exact maximum flow (Edmonds-Karp) over Fraction or float capacities."""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable
from numbers import Real


class FlowNetwork:
    """Directed network; ``capacity=None`` marks an uncapacitated edge."""

    def __init__(self) -> None:
        self._cap: dict[Hashable, dict[Hashable, Real | None]] = {}
        self.flow: dict[Hashable, dict[Hashable, Real]] = {}

    def add_node(self, node: Hashable) -> None:
        self._cap.setdefault(node, {})
        self.flow.setdefault(node, {})

    def add_edge(self, u: Hashable, v: Hashable, capacity: Real | None) -> None:
        self.add_node(u)
        self.add_node(v)
        if v not in self._cap[u]:
            self._cap[u][v] = capacity
        elif self._cap[u][v] is not None:
            self._cap[u][v] = None if capacity is None else self._cap[u][v] + capacity
        self._cap[v].setdefault(u, 0)
        self.flow[u].setdefault(v, 0)
        self.flow[v].setdefault(u, 0)

    def _residual(self, u: Hashable, v: Hashable) -> Real | None:
        cap = self._cap[u][v]
        if cap is None:
            return None
        return cap - self.flow[u][v]

    def max_flow(self, source: Hashable, sink: Hashable) -> Real:
        total = 0
        while True:
            parent = self._augmenting_path(source, sink)
            if parent is None:
                return total
            # bottleneck along the path
            delta = None
            v = sink
            while v != source:
                u = parent[v]
                r = self._residual(u, v)
                if r is not None and (delta is None or r < delta):
                    delta = r
                v = u
            if delta is None:
                raise ValueError("unbounded flow: an uncapacitated source-sink path exists")
            v = sink
            while v != source:
                u = parent[v]
                self.flow[u][v] += delta
                self.flow[v][u] -= delta
                v = u
            total += delta

    def _augmenting_path(self, source: Hashable, sink: Hashable) -> dict | None:
        parent = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self._cap[u]:
                if v in parent:
                    continue
                r = self._residual(u, v)
                if r is None or r > 0:
                    parent[v] = u
                    if v == sink:
                        return parent
                    queue.append(v)
        return None

    def reachable(self, source: Hashable) -> set:
        """Nodes reachable in the residual graph (the source side of a minimum cut)."""
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self._cap[u]:
                if v in seen:
                    continue
                r = self._residual(u, v)
                if r is None or r > 0:
                    seen.add(v)
                    queue.append(v)
        return seen

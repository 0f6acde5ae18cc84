"""Minimum cost flow with lower bounds on arcs.

Lower bounds are eliminated into node imbalances, negative-cost arcs are
saturated up front so the residual graph starts with non-negative costs, and
the imbalances are then routed from a super source to a super sink by
successive shortest paths (Dijkstra with node potentials).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .model import InfeasibleError, InvalidInputError

INF = math.inf
EPS = 1e-9


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    lower: float
    upper: float
    cost: float


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network with per-arc (lower, upper, cost).

    If ``demand`` is None the source-to-sink flow value is free (any
    non-negative amount) and the cheapest feasible flow is returned;
    otherwise exactly ``demand`` units must travel from ``source`` to
    ``sink``.
    """

    num_nodes: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    demand: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(a if isinstance(a, Arc) else Arc(*a) for a in self.arcs))

    def validate(self) -> None:
        for node in (self.source, self.sink):
            if not 0 <= node < self.num_nodes:
                raise InvalidInputError(f"node {node} out of range")
        for a in self.arcs:
            if not (0 <= a.tail < self.num_nodes and 0 <= a.head < self.num_nodes):
                raise InvalidInputError(f"arc {a} has node out of range")
            if a.lower < 0 or a.upper < a.lower:
                raise InvalidInputError(f"arc {a} has invalid bounds")
            if a.cost < 0 and math.isinf(a.upper):
                raise InvalidInputError(f"arc {a}: negative cost needs a finite upper bound")


class _Residual:
    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []
        self.cost: list[float] = []

    def add(self, u: int, v: int, cap: float, cost: float) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0.0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def push(self, e: int, amount: float) -> None:
        self.cap[e] -= amount
        self.cap[e ^ 1] += amount

    def min_cost_flow(self, s: int, t: int, required: float) -> float:
        """Route up to ``required`` units s->t cheaply; return the amount sent."""
        potential = [0.0] * self.n
        sent = 0.0
        while sent < required - EPS:
            dist = [INF] * self.n
            via = [-1] * self.n
            dist[s] = 0.0
            heap = [(0.0, s)]
            while heap:
                d, u = heapq.heappop(heap)
                if d > dist[u]:
                    continue
                for e in self.adj[u]:
                    if self.cap[e] <= EPS:
                        continue
                    v = self.to[e]
                    nd = d + self.cost[e] + potential[u] - potential[v]
                    if nd < dist[v] - 1e-12:
                        dist[v] = nd
                        via[v] = e
                        heapq.heappush(heap, (nd, v))
            if math.isinf(dist[t]):
                break
            # capping at dist[t] keeps every residual reduced cost non-negative
            cut = dist[t]
            for v in range(self.n):
                potential[v] += min(dist[v], cut)
            amount = required - sent
            v = t
            while v != s:
                e = via[v]
                amount = min(amount, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = via[v]
                self.push(e, amount)
                v = self.to[e ^ 1]
            sent += amount
        return sent


def min_cost_feasible_flow(net: FlowNetwork) -> tuple[list[float], float]:
    """Return ``(flow per arc, total cost)`` of a cheapest feasible flow.

    Raises InfeasibleError when no flow meets every lower bound.
    """
    net.validate()
    n = net.num_nodes
    super_s, super_t = n, n + 1
    res = _Residual(n + 2)
    excess = [0.0] * n
    edges = []
    for a in net.arcs:
        excess[a.head] += a.lower
        excess[a.tail] -= a.lower
        span = a.upper - a.lower
        e = res.add(a.tail, a.head, span, a.cost)
        if a.cost < 0 and span > 0:
            res.push(e, span)
            excess[a.head] += span
            excess[a.tail] -= span
        edges.append(e)

    if net.demand is None:
        res.add(net.sink, net.source, INF, 0.0)
    else:
        if net.demand < 0:
            raise InvalidInputError("demand must be non-negative")
        excess[net.source] += net.demand
        excess[net.sink] -= net.demand

    required = 0.0
    for v, x in enumerate(excess):
        if x > EPS:
            res.add(super_s, v, x, 0.0)
            required += x
        elif x < -EPS:
            res.add(v, super_t, -x, 0.0)

    sent = res.min_cost_flow(super_s, super_t, required)
    if sent < required - EPS:
        raise InfeasibleError("no feasible flow satisfies the arc lower bounds")

    flows = [a.lower + res.cap[e ^ 1] for a, e in zip(net.arcs, edges)]
    cost = sum(f * a.cost for f, a in zip(flows, net.arcs))
    return flows, cost

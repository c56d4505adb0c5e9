"""
Exact transportation simplex (u-v / MODI method).

Solves   min  sum_ij c_ij x_ij
         s.t. sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0
for balanced supplies and demands, in exact rational arithmetic when every
input is exact and in float64 otherwise.

Layout:
    - north_west_corner: initial basic feasible tree with m + n - 1 cells
    - potentials: dual u, v from the basis tree (u_0 = 0)
    - solve_transport: pivot until no reduced cost is negative (Bland's rule)
    - spanning_tree_vertices: every basic solution of the polytope, for the
      brute-force oracle
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.audit.arithmetic import Number
from src.config.constants import FLOAT_TOL, SIMPLEX_MAX_PIVOTS
from src.models.errors import OptimalityCertificateError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class TransportSolution:
    """Index-level solution: flows on basic cells plus dual potentials."""

    flows: Dict[Edge, Number]
    cost: Number
    u: List[Number]
    v: List[Number]
    pivots: int


# ==========================================================================
# Basis construction
# ==========================================================================

def north_west_corner(supply: Sequence[Number], demand: Sequence[Number]) -> Dict[Edge, Number]:
    """
    Initial basic feasible solution. Always returns exactly m + n - 1 cells
    (degenerate zero cells included) so the basis is a spanning tree.
    """
    m, n = len(supply), len(demand)
    a = list(supply)
    b = list(demand)
    i = j = 0
    basis: Dict[Edge, Number] = {}
    for _ in range(m + n - 1):
        x = min(a[i], b[j])
        basis[(i, j)] = x
        a[i] -= x
        b[j] -= x
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif a[i] == 0:
            i += 1
        else:
            j += 1
    return basis


def _tree_adjacency(basis: Sequence[Edge]) -> Dict[Tuple[str, int], List[Tuple[Tuple[str, int], Edge]]]:
    adjacency: Dict[Tuple[str, int], List[Tuple[Tuple[str, int], Edge]]] = {}
    for i, j in basis:
        adjacency.setdefault(("r", i), []).append((("c", j), (i, j)))
        adjacency.setdefault(("c", j), []).append((("r", i), (i, j)))
    return adjacency


def potentials(
    basis: Sequence[Edge],
    cost: Sequence[Sequence[Number]],
    m: int,
    n: int,
    zero: Number,
) -> Tuple[List[Number], List[Number]]:
    """Solve u_i + v_j = c_ij on the basis tree with u_0 = 0."""
    adjacency = _tree_adjacency(basis)
    u: List[Optional[Number]] = [None] * m
    v: List[Optional[Number]] = [None] * n
    u[0] = zero
    queue = deque([("r", 0)])
    while queue:
        node = queue.popleft()
        for neighbour, (i, j) in adjacency.get(node, []):
            if neighbour[0] == "c" and v[j] is None:
                v[j] = cost[i][j] - u[i]  # type: ignore[operator]
                queue.append(neighbour)
            elif neighbour[0] == "r" and u[i] is None:
                u[i] = cost[i][j] - v[j]  # type: ignore[operator]
                queue.append(neighbour)
    if any(x is None for x in u) or any(x is None for x in v):
        raise OptimalityCertificateError(["basis is not a spanning tree"])
    return u, v  # type: ignore[return-value]


def _tree_path(basis: Sequence[Edge], row: int, col: int) -> List[Edge]:
    """Edges of the unique basis-tree path from row node `row` to column node `col`."""
    adjacency = _tree_adjacency(basis)
    start, goal = ("r", row), ("c", col)
    parent: Dict[Tuple[str, int], Tuple[Tuple[str, int], Edge]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for neighbour, edge in adjacency.get(node, []):
            if neighbour not in seen:
                seen.add(neighbour)
                parent[neighbour] = (node, edge)
                queue.append(neighbour)
    path: List[Edge] = []
    node = goal
    while node != start:
        node, edge = parent[node]
        path.append(edge)
    path.reverse()
    return path


# ==========================================================================
# Simplex
# ==========================================================================

def solve_transport(
    supply: Sequence[Number],
    demand: Sequence[Number],
    cost: Sequence[Sequence[Number]],
    exact: bool,
) -> TransportSolution:
    """
    Minimum-cost plan for strictly positive `supply` / `demand` with equal totals.

    Args:
        supply: a_i > 0.
        demand: b_j > 0.
        cost: m x n cost matrix.
        exact: True when every input is exact (no tolerance on reduced costs).

    Returns:
        TransportSolution whose flows cover the final basis.
    """
    m, n = len(supply), len(demand)
    zero: Number = supply[0] - supply[0]
    basis = north_west_corner(supply, demand)
    tol = 0 if exact else FLOAT_TOL

    pivots = 0
    while True:
        u, v = potentials(list(basis), cost, m, n, zero)

        entering: Optional[Edge] = None
        for i, j in itertools.product(range(m), range(n)):
            if (i, j) in basis:
                continue
            if cost[i][j] - u[i] - v[j] < -tol:
                entering = (i, j)
                break
        if entering is None:
            break

        pivots += 1
        if pivots > SIMPLEX_MAX_PIVOTS:
            raise OptimalityCertificateError([f"no optimum after {SIMPLEX_MAX_PIVOTS} pivots"])

        path = _tree_path(list(basis), *entering)
        minus = path[0::2]
        plus = path[1::2]
        theta = min(basis[e] for e in minus)
        leaving = min(e for e in minus if basis[e] == theta)

        for e in minus:
            basis[e] -= theta
        for e in plus:
            basis[e] += theta
        del basis[leaving]
        basis[entering] = theta
        logger.debug("pivot %d: enter %s leave %s theta=%s", pivots, entering, leaving, theta)

    total = sum((x * cost[i][j] for (i, j), x in basis.items()), zero)
    return TransportSolution(flows=dict(basis), cost=total, u=u, v=v, pivots=pivots)


# ==========================================================================
# Vertex enumeration (oracle)
# ==========================================================================

def _is_spanning_tree(edges: Sequence[Edge], m: int, n: int) -> bool:
    """m + n - 1 acyclic edges on m + n nodes form a spanning tree."""
    parent = list(range(m + n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(m + j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _peel(edges: Sequence[Edge], supply: Sequence[Number], demand: Sequence[Number]) -> Dict[Edge, Number]:
    """Unique flow on a spanning tree meeting the marginals (may be negative)."""
    rows = list(supply)
    cols = list(demand)
    remaining = set(edges)
    flows: Dict[Edge, Number] = {}
    while remaining:
        row_degree: Dict[int, int] = {}
        col_degree: Dict[int, int] = {}
        for i, j in remaining:
            row_degree[i] = row_degree.get(i, 0) + 1
            col_degree[j] = col_degree.get(j, 0) + 1
        leaf = next(e for e in sorted(remaining) if row_degree[e[0]] == 1 or col_degree[e[1]] == 1)
        i, j = leaf
        x = rows[i] if row_degree[i] == 1 else cols[j]
        flows[leaf] = x
        rows[i] -= x
        cols[j] -= x
        remaining.remove(leaf)
    return flows


def spanning_tree_vertices(
    supply: Sequence[Number],
    demand: Sequence[Number],
) -> Iterator[Dict[Edge, Number]]:
    """Every nonnegative basic solution, one per spanning tree of K_{m,n}."""
    m, n = len(supply), len(demand)
    cells = list(itertools.product(range(m), range(n)))
    for edges in itertools.combinations(cells, m + n - 1):
        if not _is_spanning_tree(edges, m, n):
            continue
        flows = _peel(edges, supply, demand)
        if all(x >= 0 for x in flows.values()):
            yield flows

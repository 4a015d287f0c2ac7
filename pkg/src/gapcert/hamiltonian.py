"""Assemble the 2-local Hamiltonian H = sum over edges of P_{x,y}.

One projector term per undirected edge, for both interaction classes.  (The
ordered-pair sum with a 1/2 prefactor is identical because every interaction
here is swap-symmetric; `per_edge_factor` exposes the doubled convention for
anyone who wants it, the default is 1.)

The operator is matrix-free: `apply` contracts the two-site projector into
the state tensor edge by edge in sorted edge order, so results do not depend
on scheduling.  A dense realization is available under the resource policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ResourceLimitError
from .graphs import Graph
from .interactions import Interaction


@dataclass(frozen=True)
class ResourcePolicy:
    dense_cap: int = 4096
    matrix_free_cap: int = 2**27


DEFAULT_POLICY = ResourcePolicy()


@dataclass(frozen=True)
class HamiltonianOperator:
    graph: Graph
    interaction: Interaction
    policy: ResourcePolicy = DEFAULT_POLICY
    per_edge_factor: float = 1.0

    @property
    def local_dimension(self) -> int:
        return self.interaction.local_dimension

    @cached_property
    def total_dimension(self) -> int:
        return self.local_dimension ** self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    @cached_property
    def _edge_order(self) -> list[tuple[int, int]]:
        return self.graph.sorted_edges()

    def norm_upper_bound(self) -> float:
        return self.per_edge_factor * self.edge_count

    def apply(self, state: np.ndarray) -> np.ndarray:
        """H @ state for a vector of length total_dimension."""
        state = np.asarray(state)
        if state.shape != (self.total_dimension,):
            raise ValueError(
                f"state has shape {state.shape}, expected ({self.total_dimension},)"
            )
        d = self.local_dimension
        n = self.graph.vertex_count
        tensor = state.reshape((d,) * n)
        out = np.zeros((d,) * n, dtype=state.dtype)
        for x, y in self._edge_order:
            order = [x, y] + [s for s in range(n) if s not in (x, y)]
            moved = tensor.transpose(order).reshape(d * d, -1)
            applied = self.interaction.apply_pairs(moved)
            applied = applied.reshape((d, d) + (d,) * (n - 2))
            out += applied.transpose(np.argsort(order))
        if self.per_edge_factor != 1.0:
            out *= self.per_edge_factor
        return out.reshape(-1)

    def dense(self) -> np.ndarray:
        dim = self.total_dimension
        if dim > self.policy.dense_cap:
            raise ResourceLimitError(
                f"dense realization of dimension {dim} exceeds cap "
                f"{self.policy.dense_cap}",
                dimension=dim,
            )
        d = self.local_dimension
        n = self.graph.vertex_count
        P = self.interaction.dense()
        H = np.zeros((dim, dim))
        rest = d ** (n - 2) if n >= 2 else 1
        for x, y in self._edge_order:
            block = np.kron(P, np.eye(rest))
            tens = block.reshape((d, d) + (d,) * (n - 2) + (d, d) + (d,) * (n - 2))
            # kron layout axes: [x-factor, y-factor, remaining sites in order];
            # site s of the result must read from kron axis order[s]
            order = [0] * n
            order[x], order[y] = 0, 1
            slot = 2
            for s in range(n):
                if s not in (x, y):
                    order[s] = slot
                    slot += 1
            perm = order + [o + n for o in order]
            H += tens.transpose(perm).reshape(dim, dim)
        if self.per_edge_factor != 1.0:
            H *= self.per_edge_factor
        return H


def assemble(graph: Graph, interaction: Interaction,
             policy: ResourcePolicy = DEFAULT_POLICY,
             per_edge_factor: float = 1.0) -> HamiltonianOperator:
    """Build H over the graph; fails fast when the state space exceeds policy."""
    dim = interaction.local_dimension ** graph.vertex_count
    if dim > policy.matrix_free_cap:
        raise ResourceLimitError(
            f"total dimension {dim} exceeds the matrix-free cap "
            f"{policy.matrix_free_cap}",
            dimension=dim,
        )
    return HamiltonianOperator(graph=graph, interaction=interaction,
                               policy=policy, per_edge_factor=per_edge_factor)


def qsat_condition(d: int, k: int) -> bool:
    """Frustration-freeness guarantee for the rank-1 class: d^2 >= e(2k - 1)."""
    return d * d >= math.e * (2 * k - 1)


def frustration_free_residual(H: HamiltonianOperator, candidate: np.ndarray) -> float:
    """||H c|| / ||c|| for a candidate ground state."""
    candidate = np.asarray(candidate)
    norm = np.linalg.norm(candidate)
    if norm == 0:
        raise ValueError("candidate vector must be nonzero")
    return float(np.linalg.norm(H.apply(candidate)) / norm)

"""Batched strength evaluation over many edge subsets of one framework.

Attribution needs the topic's strength under thousands of edge subsets of
the same framework. Rebuilding a framework per subset would dominate the
cost, so this kernel compiles one framework into index arrays and then
evaluates whole batches of subset masks with vectorised numpy sweeps. The
arithmetic mirrors `semantics` expression by expression so that a
single-row batch reproduces `evaluate` bit for bit (up to the libm `exp`
used by the restricted-Euler form).
"""

from __future__ import annotations

import numpy as np

from .model import Qbaf
from .semantics import (
    ConvergenceConfig,
    DEFAULT_CONFIG,
    Semantics,
    is_acyclic,
    topological_order,
)


class StrengthKernel:
    """Evaluates argument strengths for batches of edge-subset masks.

    A mask row is a boolean vector over the framework's canonical edge
    order; True keeps the edge. Rows are independent evaluations of the
    restricted framework.
    """

    def __init__(
        self,
        qbaf: Qbaf,
        semantics: Semantics,
        config: ConvergenceConfig | None = None,
    ) -> None:
        self.qbaf = qbaf
        self.semantics = Semantics(semantics)
        self.config = config or DEFAULT_CONFIG
        self.arguments = list(qbaf.arguments)
        self.edges = list(qbaf.edges)
        self._arg_index = {a: i for i, a in enumerate(self.arguments)}

        n = len(self.edges)
        self.source = np.array(
            [self._arg_index[e.source] for e in self.edges], dtype=np.intp
        )
        self.target = np.array(
            [self._arg_index[e.target] for e in self.edges], dtype=np.intp
        )
        self.is_support = np.array([e.is_support for e in self.edges], dtype=bool)
        self.tau = np.array([qbaf.base_scores[a] for a in self.arguments])

        # incoming edge indices per argument, ascending = canonical order
        self._incoming = [
            np.nonzero(self.target == i)[0] for i in range(len(self.arguments))
        ]
        self.acyclic = is_acyclic(qbaf)
        if self.acyclic:
            order = topological_order(qbaf)
            self._order = [self._arg_index[a] for a in order]
        else:
            self._order = list(range(len(self.arguments)))
        self.num_edges = n

    def argument_index(self, argument) -> int:
        return self._arg_index[argument]

    def _node_value(
        self, node: int, strengths: np.ndarray, masks: np.ndarray
    ) -> np.ndarray:
        inc = self._incoming[node]
        tau = self.tau[node]
        rows = strengths.shape[0]
        if inc.size == 0:
            return np.full(rows, tau)
        active = masks[:, inc]
        src = strengths[:, self.source[inc]]
        sup_cols = self.is_support[inc]
        if self.semantics is Semantics.DF_QUAD:
            att_factor = 1.0 - src * (active & ~sup_cols)
            sup_factor = 1.0 - src * (active & sup_cols)
            v_att = 1.0 - np.prod(att_factor, axis=1)
            v_sup = 1.0 - np.prod(sup_factor, axis=1)
            value = np.where(
                v_att >= v_sup,
                tau - tau * (v_att - v_sup),
                tau + (1.0 - tau) * (v_sup - v_att),
            )
        else:
            signed = np.where(sup_cols, 1.0, -1.0)
            energy = np.sum(src * active * signed, axis=1)
            if self.semantics is Semantics.QUADRATIC_ENERGY:
                h = energy * energy / (1.0 + energy * energy)
                value = np.where(energy <= 0, tau - tau * h, tau + (1.0 - tau) * h)
            else:
                value = 1.0 - (1.0 - tau * tau) / (1.0 + tau * np.exp(energy))
        # source-less under the mask: exactly the base score
        return np.where(active.any(axis=1), value, tau)

    def strengths(self, masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Strength matrix (rows x arguments) and per-row convergence flags."""
        masks = np.asarray(masks, dtype=bool)
        if masks.ndim != 2 or masks.shape[1] != self.num_edges:
            raise ValueError(
                f"masks must have shape (rows, {self.num_edges}), got {masks.shape}"
            )
        rows = masks.shape[0]
        strengths = np.tile(self.tau, (rows, 1))
        if self.acyclic:
            for node in self._order:
                strengths[:, node] = self._node_value(node, strengths, masks)
            return strengths, np.ones(rows, dtype=bool)

        residual = np.full(rows, np.inf)
        for _ in range(self.config.max_iterations):
            updated = np.empty_like(strengths)
            for node in self._order:
                updated[:, node] = self._node_value(node, strengths, masks)
            residual = np.abs(updated - strengths).max(axis=1)
            strengths = updated
            if residual.max() <= self.config.tolerance:
                break
        return strengths, residual <= self.config.tolerance

    def topic_strengths(
        self, masks: np.ndarray, topic
    ) -> tuple[np.ndarray, np.ndarray]:
        """Strength of one argument per mask row, plus convergence flags."""
        values, converged = self.strengths(masks)
        return values[:, self._arg_index[topic]], converged

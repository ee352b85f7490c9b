"""Encoding coefficients, power feasibility and the destination SNR functional."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .network import GainAssignment, LayeredNetwork, NetworkError, RelayDag

REL_TOL = 1e-12


def _dag(net) -> RelayDag:
    if isinstance(net, (RelayDag, LayeredNetwork)):
        return net.to_dag()
    raise NetworkError(f"expected a relay network, got {type(net).__name__}")


def _gain_map(net, gains) -> Mapping:
    if isinstance(gains, GainAssignment):
        ga = gains
    else:
        ga = GainAssignment(dict(gains))
    ga.check_covers(net)
    return ga.gains


def relay_ids(net):
    """Canonical relay order: layer order for layered nets, lexicographic otherwise."""
    return tuple(net.relays)


def rate_from_snr(snr):
    """Gaussian channel capacity ``0.5 log2(1 + snr)`` in bits per use."""
    s = np.asarray(snr, dtype=float)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise ValueError(f"snr must be >= 0, got {snr!r}")
    out = 0.5 * np.log2(1.0 + s)
    return float(out) if out.ndim == 0 else out


capacity = rate_from_snr


# ---------------------------------------------------------------------------
# Power feasibility
# ---------------------------------------------------------------------------

def received_power_bound(net, node):
    """``P_{R,k} = (sum_j h_{j,k} sqrt(P_j^Up))^2`` over the in-neighbours of ``node``."""
    dag = _dag(net)
    if node == dag.source:
        raise NetworkError("the source has no received power bound")
    if node not in dag.nodes:
        raise NetworkError(f"unknown node {node!r}")
    amp = sum(dag.gains[(j, node)] * math.sqrt(dag.cap(j)) for j in dag.predecessors(node))
    return amp * amp


@dataclass(frozen=True)
class PowerProfile:
    """Received-power bounds, their inverses and the Lemma-1 gain caps."""

    received: Mapping
    delta: Mapping
    beta_up: Mapping

    def beta_up_vector(self, ids):
        return np.array([self.beta_up[k] for k in ids])

    def received_vector(self, ids):
        return np.array([self.received[k] for k in ids])


def power_profile(net):
    """Compute ``P_R``, ``delta`` and ``beta^Up`` for every non-source node.

    The destination is included in ``received`` and ``delta`` (it enters the
    lower bound's ``delta_0``) but carries no gain cap.
    """
    dag = _dag(net)
    received, delta, beta_up = {}, {}, {}
    for k in dag.topological_order:
        if k == dag.source:
            continue
        pr = received_power_bound(dag, k)
        received[k] = pr
        delta[k] = 1.0 / pr if pr > 0 else math.inf
        if k != dag.destination:
            # P/((1+1/P_R) P_R) written without the reciprocal
            beta_up[k] = math.sqrt(dag.power_caps[k] / (pr + 1.0))
    return PowerProfile(received, delta, beta_up)


def max_gain_assignment(net):
    """Every relay at its Lemma-1 cap."""
    return GainAssignment(power_profile(net).beta_up)


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

def global_coefficient(net, gains, j, k):
    """Sum over all ``j -> k`` paths of the products of local coefficients ``beta h``.

    ``beta_S = 1``; ``f_{j,j} = 1`` by convention and unreachable pairs give 0.
    """
    dag = _dag(net)
    b = _gain_map(dag, gains)
    for n in (j, k):
        if n not in dag.nodes:
            raise NetworkError(f"unknown node {n!r}")
    if j == k:
        return 1.0
    order = dag.topological_order
    f = {j: 1.0}
    for u in order[order.index(j):]:
        fu = f.get(u)
        if fu is None or u == k:
            continue
        bu = 1.0 if u == dag.source else (0.0 if u == dag.destination else b[u])
        for v in dag.successors(u):
            f[v] = f.get(v, 0.0) + fu * bu * dag.gains[(u, v)]
    return f.get(k, 0.0)


def coefficients_to_destination(net, gains):
    """``f_{j,D}`` for every node ``j`` via a single reverse sweep (``f_{D,D} = 1``)."""
    dag = _dag(net)
    b = _gain_map(dag, gains)
    f = {}
    for u in reversed(dag.topological_order):
        if u == dag.destination:
            f[u] = 1.0
            continue
        acc = sum(dag.gains[(u, v)] * f[v] for v in dag.successors(u))
        f[u] = acc if u == dag.source else b[u] * acc
    return f


# ---------------------------------------------------------------------------
# SNR
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnrBreakdown:
    signal_power: float
    per_source_noise: Mapping
    dest_noise: float
    snr: float
    upper_layer_noise: float
    layer_noise: tuple | None = None

    @property
    def total_noise(self):
        return self.upper_layer_noise + self.dest_noise

    @property
    def rate(self):
        return rate_from_snr(self.snr)


def destination_snr(net, gains):
    """Destination SNR with the propagated-noise decomposition."""
    dag = _dag(net)
    f = coefficients_to_destination(dag, gains)
    signal = f[dag.source] ** 2 * dag.source_power
    noise = {j: f[j] ** 2 for j in dag.relays}
    upper = math.fsum(noise.values())
    layer_noise = None
    if isinstance(net, LayeredNetwork):
        layer_noise = tuple(math.fsum(noise[k] for k in layer) for layer in net.layers)
    snr = signal / (upper + 1.0)
    return SnrBreakdown(signal, noise, 1.0, snr, upper, layer_noise)


def achievable_rate(net, gains):
    return rate_from_snr(destination_snr(net, gains).snr)


def _check_layer(net, l0):
    if not isinstance(net, LayeredNetwork):
        raise NetworkError("a layered network is required")
    if not (isinstance(l0, (int, np.integer)) and 1 <= l0 <= net.L):
        raise NetworkError(f"l0 must be an integer in [1, {net.L}], got {l0!r}")


def ideal_layer_snr(net, gains, l0):
    """SNR when only the nodes of layer ``l0`` inject noise (``l0 = L``: destination only)."""
    _check_layer(net, l0)
    f = coefficients_to_destination(net, gains)
    signal = f[net.source] ** 2 * net.source_power
    den = math.fsum(f[k] ** 2 for k in net.layer_nodes(l0))
    if den == 0.0:
        return 0.0
    return signal / den


def separates(net, cut_nodes):
    """True if every source-destination path meets ``cut_nodes``."""
    dag = _dag(net)
    cut = set(cut_nodes)
    if dag.destination in cut:
        return True
    seen = {dag.source}
    todo = deque([dag.source])
    while todo:
        u = todo.popleft()
        for v in dag.successors(u):
            if v == dag.destination:
                return False
            if v not in cut and v not in seen:
                seen.add(v)
                todo.append(v)
    return True


def check_cut(net, cut_nodes):
    dag = _dag(net)
    cut = tuple(cut_nodes)
    if not cut:
        raise NetworkError("cut node set J is empty")
    if dag.source in cut:
        raise NetworkError("cut node set J contains the source")
    unknown = [j for j in cut if j not in dag.nodes]
    if unknown:
        raise NetworkError(f"cut node set J has unknown node(s) {', '.join(map(str, unknown))}")
    if not separates(dag, cut):
        raise NetworkError("cut node set J does not separate the source from the destination")
    return cut


def cut_snr(net, gains, cut_nodes):
    """Signal power over the noise propagated from the cut nodes ``J`` only."""
    dag = _dag(net)
    cut = check_cut(dag, cut_nodes)
    f = coefficients_to_destination(dag, gains)
    signal = f[dag.source] ** 2 * dag.source_power
    den = math.fsum(f[j] ** 2 for j in cut)
    if den == 0.0:
        # every path crosses J, so a silent J also kills the signal
        return 0.0
    return signal / den


def layer_cuts(net):
    """The ``L`` layer cuts of a layered network."""
    return [tuple(net.layer_nodes(l)) for l in range(1, net.L + 1)]


# ---------------------------------------------------------------------------
# Batched evaluation
# ---------------------------------------------------------------------------

class BatchEvaluator:
    """Vectorized destination SNR for many gain vectors at once.

    ``ids`` fixes the column order of the gain matrices passed to
    :meth:`snr`; it defaults to :func:`relay_ids`.
    """

    def __init__(self, net, ids=None):
        self.dag = _dag(net)
        self.ids = tuple(ids) if ids is not None else relay_ids(net)
        if sorted(self.ids) != sorted(self.dag.relays):
            raise NetworkError("ids must list every relay exactly once")
        self.col = {k: i for i, k in enumerate(self.ids)}
        self.order = tuple(reversed(self.dag.topological_order))
        self.succ = {u: tuple((v, self.dag.gains[(u, v)]) for v in self.dag.successors(u))
                     for u in self.dag.nodes}

    def coefficients(self, betas):
        """Return ``(f_S, F)`` with ``F[:, i] = f_{ids[i], D}``."""
        B = np.atleast_2d(np.asarray(betas, dtype=float))
        m = B.shape[0]
        dag = self.dag
        f = {}
        for u in self.order:
            if u == dag.destination:
                f[u] = np.ones(m)
                continue
            acc = np.zeros(m)
            for v, h in self.succ[u]:
                acc = acc + h * f[v]
            f[u] = acc if u == dag.source else B[:, self.col[u]] * acc
        F = np.column_stack([f[k] for k in self.ids]) if self.ids else np.zeros((m, 0))
        return f[dag.source], F

    def snr(self, betas, cut=None):
        """Destination SNR, or the cut SNR of ``cut`` if given."""
        fs, F = self.coefficients(betas)
        signal = fs ** 2 * self.dag.source_power
        if cut is None:
            return signal / ((F ** 2).sum(axis=1) + 1.0)
        den = np.zeros_like(signal)
        for j in cut:
            den = den + (1.0 if j == self.dag.destination else F[:, self.col[j]] ** 2)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(den > 0, signal / np.where(den > 0, den, 1.0), 0.0)
        return out

    def rate(self, betas, cut=None):
        return 0.5 * np.log2(1.0 + self.snr(betas, cut))

"""Two-hop AF schemes, the mixed multi-hop scheme, noise dominance and gap certificates."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import (coefficients_to_destination, destination_snr, power_profile,
                   rate_from_snr)
from .network import GainAssignment, LayeredNetwork, NetworkError

DOMINANCE_TOL = 1e-12


def _two_hop(net):
    if not isinstance(net, LayeredNetwork) or net.L != 2:
        raise NetworkError("a two-hop layered network (L = 2) is required")
    return net


def scheme_max_gain(net):
    """Scheme 1: every relay amplifies to its Lemma-1 cap."""
    _two_hop(net)
    return GainAssignment(power_profile(net).beta_up)


def scheme_pseudo_optimal(net):
    """Scheme 2: gains along ``sqrt(P_R,k) / h_kD`` scaled until one relay binds.

    Relays with no link to the destination get gain 0 and do not take part
    in the scale.
    """
    _two_hop(net)
    prof = power_profile(net)
    ids = net.layers[0]
    h1 = net.h_last
    pr = prof.received_vector(ids)
    bup = prof.beta_up_vector(ids)
    live = h1 > 0
    if not live.any():
        # no relay reaches D: nothing to scale, every gain is 0 and the rate is 0
        return GainAssignment({k: 0.0 for k in ids})
    c = np.min(bup[live] * h1[live] / np.sqrt(pr[live]))
    beta = np.zeros(len(ids))
    beta[live] = c * np.sqrt(pr[live]) / h1[live]
    # the binding relay sits exactly on its cap
    beta = np.minimum(beta, bup)
    return GainAssignment.from_vector(ids, beta)


def scheme_selection(net):
    """Scheme 3: only the relay with the largest single-path gain transmits."""
    _two_hop(net)
    prof = power_profile(net)
    ids = net.layers[0]
    score = (net.h0 * net.h_last * prof.beta_up_vector(ids)) ** 2
    best = max(score)
    k0 = min(k for k, s in zip(ids, score) if s == best)
    return GainAssignment({k: (prof.beta_up[k] if k == k0 else 0.0) for k in ids})


# ---------------------------------------------------------------------------
# Mixed multi-hop scheme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedScheme:
    """The mixed scheme for one ``l0`` together with its bookkeeping constants."""

    l0: int
    gains: GainAssignment
    delta0: float
    delta_prime: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    layer_power: float
    snr_low: float


def _layer_received(net, prof, l):
    if l == net.L:
        return prof.received[net.destination]
    return math.fsum(prof.received[k] for k in net.layer_nodes(l))


def _delta0(net, prof, l0):
    if l0 < net.L:
        layers = [l for l in range(1, net.L + 1) if l != l0]
    else:
        layers = list(range(1, net.L))
    vals = [prof.delta[k] for l in layers for k in net.layer_nodes(l)]
    return max(vals) if vals else 0.0


def _delta_prime(net, prof, l0):
    layers = [l for l in range(1, net.L + 1) if l < l0 or l >= l0 + 2]
    vals = [prof.received[k] for l in layers for k in net.layer_nodes(l)]
    return 1.0 / min(vals) if vals else 0.0


def mixed_multihop_scheme(net, l0):
    """Mixed scheme: reduced-cap gains below ``l0``, pseudo-optimal at ``l0``, caps above.

    Layers above ``l0`` take their Lemma-1 caps (the free constant of the
    construction). For ``l0 = L`` the destination plays the layer-``l0``
    role, so only the reduced-cap layers remain.
    """
    if not isinstance(net, LayeredNetwork):
        raise NetworkError("a layered network is required")
    if not (isinstance(l0, (int, np.integer)) and 1 <= l0 <= net.L):
        raise NetworkError(f"l0 must be an integer in [1, {net.L}], got {l0!r}")
    l0 = int(l0)
    L = net.L
    prof = power_profile(net)
    d0 = _delta0(net, prof, l0)
    beta = {}
    for l in range(1, L):
        for k in net.layer_nodes(l):
            if l < l0:
                beta[k] = math.sqrt(net.power_caps[k] / ((1.0 + d0) * prof.received[k]))
            else:
                beta[k] = prof.beta_up[k]
    X = _layer_received(net, prof, l0)
    if l0 < L:
        # downstream gain from each layer-l0 output to D
        f = coefficients_to_destination(net, beta)
        dag = net.to_dag()
        layer = net.layer_nodes(l0)
        g = {k: math.fsum(dag.gains[(k, v)] * f[v] for v in dag.successors(k)) for k in layer}
        dead = [k for k in layer if g[k] <= 0.0]
        if dead:
            raise NetworkError(f"degenerate downstream channel: node(s) {', '.join(dead)} cannot reach D")
        c1 = min(prof.beta_up[k] * g[k] / math.sqrt(prof.received[k]) for k in layer)
        for k in layer:
            beta[k] = min(c1 * math.sqrt(prof.received[k]) / g[k], prof.beta_up[k])
        f = coefficients_to_destination(net, beta)
        c2 = math.fsum(f[k] ** 2 for l in range(l0 + 1, L) for k in net.layer_nodes(l))
        c3 = 1.0 + (c2 + 1.0) / (c1 * c1 * X)
    else:
        f = coefficients_to_destination(net, beta)
        c1 = 1.0 / math.sqrt(X)
        c2 = 0.0
        c3 = 1.0
    c4 = math.fsum(f[k] ** 2 for l in range(1, l0) for k in net.layer_nodes(l)) + c2
    dp = _delta_prime(net, prof, l0)
    c5 = c3 * (1.0 + dp) ** (l0 - 1)
    r = (1.0 + d0) ** (l0 - 1)
    snr_low = (X / r) / ((1.0 - 1.0 / r) * X + c3)
    return MixedScheme(l0, GainAssignment(beta), d0, dp, c1, c2, c3, c4, c5, X, snr_low)


# ---------------------------------------------------------------------------
# Dominance and certificates
# ---------------------------------------------------------------------------

class Dominance(enum.Enum):
    UPPER = "UpperLayerDominant"
    LOWER = "LowerLayerDominant"
    NEITHER = "Neither"


@dataclass(frozen=True)
class DominanceClass:
    kind: Dominance
    w1: float
    w2: float


def upper_layer_noise(net, gains):
    """``h1^T B B h1`` for a two-hop scheme."""
    b = gains.vector(net.layers[0]) if isinstance(gains, GainAssignment) else np.asarray(gains)
    return float(np.sum((b * net.h_last) ** 2))


def classify_dominance(net):
    """Compare the upper-layer noise of schemes 1 and 2 against the unit destination noise."""
    _two_hop(net)
    w1 = upper_layer_noise(net, scheme_max_gain(net))
    w2 = upper_layer_noise(net, scheme_pseudo_optimal(net))
    if w1 < w2 * (1.0 - DOMINANCE_TOL):
        raise AssertionError(f"scheme 1 noise {w1} fell below scheme 2 noise {w2}")
    if w1 >= w2 >= 1.0:
        kind = Dominance.UPPER
    elif w2 <= w1 <= 1.0:
        kind = Dominance.LOWER
    else:
        kind = Dominance.NEITHER
    return DominanceClass(kind, w1, w2)


@dataclass(frozen=True)
class GapCertificate:
    scheme: str
    gains: GainAssignment
    rate: float
    bound_name: str
    bound: float
    gap: float
    epsilon: float
    dominance: DominanceClass
    rates: Mapping

    @property
    def holds(self):
        return self.rate >= self.bound - self.gap


def _epsilon(b1, b2):
    live = b2 > 0
    return float(np.max((b1[live] / b2[live]) ** 2))


def gap_certificate(net):
    """Pick the scheme the noise-dominance class calls for and state its guaranteed gap."""
    dom = classify_dominance(net)
    ids = net.layers[0]
    g1, g2 = scheme_max_gain(net), scheme_pseudo_optimal(net)
    s1, s2 = destination_snr(net, g1), destination_snr(net, g2)
    r1, r2 = rate_from_snr(s1.snr), rate_from_snr(s2.snr)
    prof = power_profile(net)
    r1_up = rate_from_snr(_layer_received(net, prof, 1))
    r2_up = rate_from_snr(s1.signal_power)
    eps = _epsilon(g1.vector(ids), g2.vector(ids))
    rates = {"scheme1": r1, "scheme2": r2, "R1_up": r1_up, "R2_up": r2_up}
    if dom.kind is Dominance.UPPER:
        return GapCertificate("pseudo", g2, r2, "R1_up", r1_up, 0.5, eps, dom, rates)
    if dom.kind is Dominance.LOWER:
        return GapCertificate("max", g1, r1, "R2_up", r2_up, 0.5, eps, dom, rates)
    name, g, r = ("max", g1, r1) if r1 >= r2 else ("pseudo", g2, r2)
    bound_name, bound = ("R1_up", r1_up) if r1_up <= r2_up else ("R2_up", r2_up)
    return GapCertificate(name, g, r, bound_name, bound, 0.5 * math.log2(1.0 + eps), eps, dom, rates)

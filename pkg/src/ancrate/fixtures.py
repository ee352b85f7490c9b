"""Example networks.

Most channel values of the worked examples only exist in figures, so every
fixture here is reconstructed ("inferred") rather than ground truth. The
two-hop examples are pinned by their quoted gains and bound formulas; the
multi-layer families reproduce only the qualitative behaviour; the MAC
fixtures are solved so the four stored schemes hit the quoted noise powers.
"""
from __future__ import annotations

import math

import numpy as np

from .network import TwoHopMac, layered, two_hop

# positive root of (a^2 + a)^2 = 2, where the two layer bounds of the diamond cross
DIAMOND_CROSSOVER = (-1.0 + math.sqrt(1.0 + 4.0 * math.sqrt(2.0))) / 2.0
# positive root of a^4 + a^2 = 4 for the swapped-hop example
SWAPPED_CROSSOVER = math.sqrt((-1.0 + math.sqrt(17.0)) / 2.0)


def diamond(a=2.0):
    """Two relays, unit first hop, second hop ``(a^2, a)``, unit powers (inferred)."""
    return two_hop(2, [1.0, 1.0], [a * a, a], 1.0, 1.0, name=f"diamond a={a}",
                   note="inferred two-hop example")


def swapped_diamond(a=2.0):
    """First hop ``(a^2, a)``, unit second hop, unit powers (inferred)."""
    return two_hop(2, [a * a, a], [1.0, 1.0], 1.0, 1.0, name=f"swapped diamond a={a}",
                   note="inferred two-hop example")


def power_scaling_family(scale):
    """Four-hop network, two nodes per layer; layer-1 caps stay fixed, the rest scale.

    Drives every node outside layer 2 into high SNR, so ``l0 = 2``.
    """
    mats = [np.array([[1.0], [0.8]]),
            np.array([[1.0, 0.5], [0.6, 1.0]]),
            np.array([[1.0, 0.7], [0.4, 1.0]]),
            np.array([[1.0, 0.9]])]
    caps = [1.0, 1.0, scale, scale, scale, scale]
    return layered([2, 2, 2], mats, caps, scale, name=f"power family s={scale}",
                   note="inferred four-hop family")


def width_scaling_family(n, big=1e6):
    """Four-hop network with ``n`` relays at layer 2 and finite powers on layers 1-2."""
    mats = [np.array([[1.0], [0.8]]),
            np.full((n, 2), 0.5),
            np.full((2, n), 1.0),
            np.array([[1.0, 0.9]])]
    caps = [2.0, 2.0] + [2.0] * n + [big, big]
    return layered([2, n, 2], mats, caps, big, name=f"width family n={n}",
                   note="inferred four-hop family")


def symmetric_mac(ratio, c, a=1.0, source_power=10.0, cap=1.0, name=""):
    """``h01 = (a, ratio a)``, ``h02 = (ratio a, a)``, ``h1 = (c, c)``, equal powers."""
    b = ratio * a
    return TwoHopMac(["r1", "r2"], [a, b], [b, a], [c, c], [source_power, source_power],
                     {"r1": cap, "r2": cap}, name=name, note="inferred two-hop MAC")


def solve_symmetric_mac(w_caps, w_edge, a=1.0, source_power=10.0, cap=1.0, name=""):
    """Symmetric MAC whose cap scheme has noise ``w_caps`` and whose edge schemes have ``w_edge``.

    In this family the sum-rate scheme coincides with the cap scheme, with
    ``w_caps = 2 c^2 beta^2`` and ``w_edge = c^2 beta^2 (1 + ratio^2)``.
    """
    ratio = math.sqrt(2.0 * w_edge / w_caps - 1.0)
    beta2 = cap / (1.0 + a * a * (1.0 + ratio * ratio) * source_power)
    c = math.sqrt(w_caps / (2.0 * beta2))
    return symmetric_mac(ratio, c, a, source_power, cap, name)


def mac_scenario(k):
    """Two-relay MAC examples: 1 general, 2 upper-layer dominant, 3 lower-layer dominant."""
    if k == 1:
        return TwoHopMac(["r1", "r2"], [1.0, 0.3], [0.4, 1.2], [1.5, 0.8], [4.0, 6.0],
                         {"r1": 1.0, "r2": 1.0}, name="mac scenario 1",
                         note="inferred two-hop MAC")
    if k == 2:
        return solve_symmetric_mac(6.33, 3.29, name="mac scenario 2")
    if k == 3:
        return solve_symmetric_mac(0.38, 0.20, name="mac scenario 3")
    raise ValueError("scenario must be 1, 2 or 3")

"""Random network generators for property tests and acceptance runs."""
from __future__ import annotations

import numpy as np

from .network import RelayDag, TwoHopMac, layered, two_hop

GAIN_RANGE = (0.2, 2.0)
CAP_RANGE = (0.5, 5.0)
SOURCE_RANGE = (0.5, 10.0)


def random_dag(rng, max_nodes=12, edge_prob=0.4, gain_range=GAIN_RANGE,
               cap_range=CAP_RANGE, source_range=SOURCE_RANGE):
    """Random valid relay DAG with at most ``max_nodes`` nodes (source and destination included)."""
    m = int(rng.integers(1, max_nodes - 1))
    relays = [f"r{i:02d}" for i in range(m)]
    order = ["S"] + relays + ["D"]
    edges = set()
    for i in range(1, len(order)):
        for j in range(i):
            if rng.random() < edge_prob:
                edges.add((order[j], order[i]))
    for i, r in enumerate(relays, start=1):
        if not any(e[1] == r for e in edges):
            edges.add((order[int(rng.integers(0, i))], r))
        if not any(e[0] == r for e in edges):
            edges.add((r, order[int(rng.integers(i + 1, len(order)))]))
    gains = {e: float(rng.uniform(*gain_range)) for e in sorted(edges)}
    caps = {r: float(rng.uniform(*cap_range)) for r in relays}
    return RelayDag("S", "D", relays, gains, caps, float(rng.uniform(*source_range)))


def random_layered(rng, sizes=None, max_layers=4, max_width=3, gain_range=GAIN_RANGE,
                   cap_range=CAP_RANGE, source_range=SOURCE_RANGE):
    """Random fully connected layered network."""
    if sizes is None:
        L = int(rng.integers(2, max_layers + 1))
        sizes = [int(rng.integers(1, max_width + 1)) for _ in range(L - 1)]
    dims = [1] + list(sizes) + [1]
    mats = [rng.uniform(*gain_range, (dims[i + 1], dims[i])) for i in range(len(dims) - 1)]
    caps = rng.uniform(*cap_range, sum(sizes))
    return layered(sizes, mats, caps, float(rng.uniform(*source_range)))


def random_two_hop(rng, n=None, max_relays=4, gain_range=(0.1, 3.0), cap_range=(0.2, 5.0),
                   source_range=(0.2, 20.0)):
    n = int(rng.integers(1, max_relays + 1)) if n is None else n
    return two_hop(n, rng.uniform(*gain_range, n), rng.uniform(*gain_range, n),
                   rng.uniform(*cap_range, n), float(rng.uniform(*source_range)))


def random_mac(rng, n=None, max_relays=5, gain_range=(0.1, 2.0), cap_range=(0.5, 5.0),
               source_range=(0.5, 10.0)):
    n = int(rng.integers(2, max_relays + 1)) if n is None else n
    ids = [f"r{i + 1}" for i in range(n)]
    return TwoHopMac(ids, rng.uniform(*gain_range, n), rng.uniform(*gain_range, n),
                     rng.uniform(*gain_range, n), rng.uniform(*source_range, 2),
                     dict(zip(ids, rng.uniform(*cap_range, n))))


def random_frame(rng, power_range=(0.1, 20.0), max_gap=np.pi / 2):
    """Random theta frame with ``0 <= alpha <= beta <= pi/2`` and ``beta - alpha <= max_gap``."""
    from .mac import ThetaFrame
    a = float(rng.uniform(0, np.pi / 2))
    b = float(rng.uniform(0, np.pi / 2))
    a, b = min(a, b), max(a, b)
    if b - a > max_gap:
        b = a + float(rng.uniform(0, max_gap))
    p1, p2 = rng.uniform(*power_range, 2)
    return ThetaFrame.from_angles(a, b, float(p1), float(p2))

"""Brute-force and Monte-Carlo validators, kept independent of the closed forms."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import BatchEvaluator, power_profile, relay_ids
from .network import GainAssignment, NetworkError, TwoHopMac

MIN_ACCEPTANCE_SAMPLES = 10_000


@dataclass(frozen=True)
class SimConfig:
    """Monte-Carlo settings. The generator is Philox keyed by ``rng_seed``."""

    sample_count: int = 100_000
    rng_seed: int = 0
    batch_size: int = 1 << 16

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")


class GaussianStream:
    """Standard normals from a counter-based Philox generator via Box-Muller."""

    def __init__(self, seed):
        self.bits = np.random.Generator(np.random.Philox(key=int(seed)))

    def normals(self, shape):
        size = int(np.prod(shape))
        m = (size + 1) // 2
        u = self.bits.random((2, m))
        r = np.sqrt(-2.0 * np.log1p(-u[0]))
        ang = 2.0 * np.pi * u[1]
        z = np.concatenate([r * np.cos(ang), r * np.sin(ang)])[:size]
        return z.reshape(shape)


def _batches(cfg):
    left = cfg.sample_count
    while left > 0:
        n = min(left, cfg.batch_size)
        yield n
        left -= n


@dataclass(frozen=True)
class SimResult:
    snr: float
    signal_power: float
    noise_power: float
    power: Mapping          # node -> empirical E[x_k^2]
    power_stderr: Mapping
    dest_power: float
    samples: int


def monte_carlo_sim(net, gains, cfg=SimConfig()):
    """Propagate Gaussian samples through the relays in topological order.

    Every node carries a source-driven and a noise-driven component, so the
    destination SNR is estimated as the ratio of their empirical powers.
    """
    dag = net.to_dag()
    g = gains.gains if isinstance(gains, GainAssignment) else dict(gains)
    missing = [k for k in dag.relays if k not in g]
    if missing:
        raise NetworkError(f"missing gain entry for relay(s) {', '.join(missing)}")
    order = dag.topological_order
    tx = [k for k in order if k not in (dag.source, dag.destination)]
    stream = GaussianStream(cfg.rng_seed)
    s1 = {k: 0.0 for k in tx}
    s2 = {k: 0.0 for k in tx}
    sig_acc = noise_acc = dest_acc = 0.0
    total = 0
    for n in _batches(cfg):
        z = stream.normals((len(order), n))
        sig, noi = {}, {}
        for i, k in enumerate(order):
            if k == dag.source:
                sig[k] = math.sqrt(dag.source_power) * z[i]
                noi[k] = np.zeros(n)
                continue
            ys = np.zeros(n)
            yn = z[i].copy()
            for j in dag.predecessors(k):
                h = dag.gains[(j, k)]
                ys += h * sig[j]
                yn += h * noi[j]
            if k == dag.destination:
                sig_acc += float(np.dot(ys, ys))
                noise_acc += float(np.dot(yn, yn))
                y = ys + yn
                dest_acc += float(np.dot(y, y))
                continue
            b = g[k]
            sig[k], noi[k] = b * ys, b * yn
            x2 = (sig[k] + noi[k]) ** 2
            s1[k] += float(x2.sum())
            s2[k] += float(np.dot(x2, x2))
        total += n
    power, err = {}, {}
    for k in tx:
        m = s1[k] / total
        var = max(s2[k] / total - m * m, 0.0)
        power[k] = m
        err[k] = math.sqrt(var / total)
    sp, npow = sig_acc / total, noise_acc / total
    return SimResult(sp / npow, sp, npow, power, err, dest_acc / total, total)


@dataclass(frozen=True)
class PowerCheck:
    node: str
    power: float
    stderr: float
    cap: float

    @property
    def ok(self):
        return self.power <= self.cap + 3.0 * self.stderr


def mc_power_check(net, gains=None, cfg=SimConfig()):
    """Empirical relay transmit powers against their caps (default gains: Lemma-1 caps)."""
    if gains is None:
        gains = GainAssignment(power_profile(net).beta_up)
    res = monte_carlo_sim(net, gains, cfg)
    dag = net.to_dag()
    return [PowerCheck(k, res.power[k], res.power_stderr[k], dag.power_caps[k]) for k in sorted(res.power)]


# ---------------------------------------------------------------------------
# Path enumeration
# ---------------------------------------------------------------------------

def enumerate_paths(net, j, k):
    dag = net.to_dag()
    out = []

    def walk(u, path):
        if u == k:
            out.append(tuple(path))
            return
        for v in dag.successors(u):
            walk(v, path + [v])

    walk(j, [j])
    return out


def path_coefficient(net, gains, j, k):
    """``f_{j,k}`` as an explicit sum of path products."""
    if j == k:
        return 1.0
    dag = net.to_dag()
    g = gains.gains if isinstance(gains, GainAssignment) else dict(gains)
    total = 0.0
    for path in enumerate_paths(net, j, k):
        prod = 1.0
        for u, v in zip(path, path[1:]):
            prod *= (1.0 if u == dag.source else g[u]) * dag.gains[(u, v)]
        total += prod
    return total


# ---------------------------------------------------------------------------
# Two-hop MAC
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MacSimResult:
    sum_information: float
    info1: float
    info2: float
    power: np.ndarray


def mac_mutual_information_mc(mac: TwoHopMac, B, cfg=SimConfig()):
    """Gaussian mutual informations of the scalar MAC seen at the destination, by simulation."""
    b = B.vector(mac.relays) if isinstance(B, GainAssignment) else np.asarray(B, dtype=float)
    h01, h02, h1 = (np.asarray(v)[:, None] for v in (mac.h01, mac.h02, mac.h1))
    p1, p2 = mac.source_powers
    stream = GaussianStream(cfg.rng_seed)
    acc = np.zeros(4)
    pw = np.zeros(mac.n)
    total = 0
    for n in _batches(cfg):
        z = stream.normals((3 + mac.n, n))
        x1, x2 = math.sqrt(p1) * z[0], math.sqrt(p2) * z[1]
        zr = z[3:]
        out = b[:, None] * (h01 * x1 + h02 * x2 + zr)
        pw += (out ** 2).sum(axis=1)
        c1 = float((h1[:, 0] * b) @ h01[:, 0])
        c2 = float((h1[:, 0] * b) @ h02[:, 0])
        noise = (h1 * b[:, None] * zr).sum(axis=0) + z[2]
        u1, u2 = c1 * x1, c2 * x2
        acc += [np.dot(u1, u1), np.dot(u2, u2), np.dot(u1 + u2, u1 + u2), np.dot(noise, noise)]
        total += n
    e1, e2, es, en = acc / total
    return MacSimResult(0.5 * math.log2(1 + es / en), 0.5 * math.log2(1 + e1 / en),
                        0.5 * math.log2(1 + e2 / en), pw / total)


# ---------------------------------------------------------------------------
# Grid search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridResult:
    gains: GainAssignment
    snr: float
    rate: float
    evaluations: int


def grid_search_best_gains(net, grid_points_per_dim=17, refine_rounds=3, shrink=0.25,
                           cut=None, max_relays=6, chunk=1 << 15):
    """Exhaustive grid over the Lemma-1 box followed by shrinking refinements.

    ``cut`` switches the objective to the cut SNR of that node set (for the
    ideal single-layer-noise problem). The incumbent is kept across rounds,
    so more rounds never return a worse value.
    """
    ids = relay_ids(net)
    n = len(ids)
    if n > max_relays:
        raise NetworkError(f"grid search budget exceeded: {n} relays > {max_relays}")
    if grid_points_per_dim < 2:
        raise ValueError("need at least 2 grid points per dimension")
    ev = BatchEvaluator(net, ids)
    bup = power_profile(net).beta_up_vector(ids)
    lo, hi = np.zeros(n), bup.copy()
    best_b, best_v = bup.copy(), float(ev.snr(bup[None, :], cut)[0])
    evals = 1
    for rnd in range(refine_rounds + 1):
        axes = [np.linspace(lo[i], hi[i], grid_points_per_dim) for i in range(n)]
        it = itertools.product(*axes)
        while True:
            block = np.array(list(itertools.islice(it, chunk)))
            if block.size == 0:
                break
            vals = ev.snr(block, cut)
            evals += len(block)
            j = int(np.argmax(vals))
            if vals[j] > best_v:
                best_v, best_b = float(vals[j]), block[j].copy()
        half = (hi - lo) * shrink / 2
        lo = np.maximum(0.0, best_b - half)
        hi = np.minimum(bup, best_b + half)
    return GridResult(GainAssignment.from_vector(ids, best_b), best_v,
                      0.5 * math.log2(1 + best_v), evals)


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

def hull_contains(region, point, tol=1e-12):
    """Whether ``point`` lies in the down-closed region bounded by the polyline."""
    x, y = float(point[0]), float(point[1])
    if x < -tol or y < -tol:
        return False
    if x > region.r1_max + tol:
        return False
    h = float(region.height(min(max(x, 0.0), region.r1_max)))
    return y <= h + tol

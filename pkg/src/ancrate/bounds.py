"""Upper and lower bounds on the AF rate of layered relay networks."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .core import (BatchEvaluator, achievable_rate, check_cut, layer_cuts,
                   power_profile, rate_from_snr, relay_ids)
from .network import GainAssignment, LayeredNetwork, NetworkError
from .schemes import _layer_received, mixed_multihop_scheme


# ---------------------------------------------------------------------------
# Closed-form upper bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UpperBoundReport:
    layer_power: tuple     # P_{R,l0}^T P_{R,l0} for l0 = 1..L
    layer_bounds: tuple    # R_{l0}^Up
    argmin: int            # 1-based layer index of the tightest bound
    r_up: float


def anc_upper_bound(net):
    """Minimum over layers of ``C(total received-power bound of the layer)``."""
    if not isinstance(net, LayeredNetwork):
        raise NetworkError("a layered network is required")
    prof = power_profile(net)
    power = tuple(_layer_received(net, prof, l) for l in range(1, net.L + 1))
    rates = tuple(rate_from_snr(p) for p in power)
    i = int(np.argmin(rates))
    return UpperBoundReport(power, rates, i + 1, rates[i])


# ---------------------------------------------------------------------------
# Numeric cut bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutBoundReport:
    """Numeric min-over-cuts of max-over-gains; not a certified global optimum."""

    r_up: float
    cut_rates: tuple
    cuts: tuple
    gains: tuple
    converged: bool
    domain: str
    numeric: bool = True


class _Param:
    """Map a box ``t in [0,1]^n`` onto gains in topological order.

    ``signal``: ``t_k`` is the fraction of node ``k``'s cap spent on the
    source signal, so ``beta_k = t_k sqrt(P_k) / a_k`` with ``a_k`` the
    received signal amplitude. This set contains every power-feasible
    scheme. ``lemma1``: ``beta_k = t_k beta_k^Up``.
    """

    def __init__(self, dag, ids, domain):
        self.dag = dag
        self.ids = ids
        self.domain = domain
        self.col = {k: i for i, k in enumerate(ids)}
        if domain == "lemma1":
            prof = power_profile(dag)
            self.bup = np.array([prof.beta_up[k] for k in ids])
        elif domain == "signal":
            self.order = [k for k in dag.topological_order if k in self.col]
            self.sqrt_cap = {k: math.sqrt(dag.power_caps[k]) for k in ids}
        else:
            raise ValueError(f"unknown domain {domain!r} (expected signal or lemma1)")

    def __call__(self, T):
        T = np.atleast_2d(T)
        if self.domain == "lemma1":
            return T * self.bup
        dag = self.dag
        out_amp = {dag.source: np.full(T.shape[0], math.sqrt(dag.source_power))}
        B = np.zeros_like(T)
        for k in self.order:
            a = np.zeros(T.shape[0])
            for j in dag.predecessors(k):
                a = a + dag.gains[(j, k)] * out_amp[j]
            i = self.col[k]
            x = T[:, i] * self.sqrt_cap[k]
            with np.errstate(divide="ignore", invalid="ignore"):
                B[:, i] = np.where(a > 0, x / np.where(a > 0, a, 1.0), 0.0)
            out_amp[k] = np.where(a > 0, x, 0.0)
        return B


def _coordinate_ascent(f, t0, tol, max_sweeps, grid=33):
    t = t0.copy()
    best = float(f(t[None, :])[0])
    n = len(t)
    for _ in range(max_sweeps):
        moved = 0.0
        start = best
        for i in range(n):
            cand = np.repeat(t[None, :], grid, axis=0)
            cand[:, i] = np.linspace(0.0, 1.0, grid)
            vals = f(cand)
            j = int(np.argmax(vals))
            lo, hi = max(0.0, (j - 1) / (grid - 1)), min(1.0, (j + 1) / (grid - 1))

            def neg(x, i=i):
                tt = t.copy()
                tt[i] = x
                return -float(f(tt[None, :])[0])

            res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                  options={"xatol": tol * 1e-2})
            options = [(vals[j], cand[j, i]), (-res.fun, res.x), (best, t[i])]
            v, x = max(options, key=lambda p: p[0])
            if v > best:
                moved = max(moved, abs(x - t[i]))
                t[i] = x
                best = v
        if moved < tol or best - start <= 1e-15 * max(1.0, abs(best)):
            return t, best, True
    return t, best, False


def general_cut_upper_bound(net, cuts=None, starts=8, tol=1e-8, max_sweeps=60,
                            domain="signal", seed=0):
    """``min over cuts J`` of ``max over gains`` of ``C(SNR_J)``, found numerically.

    ``cuts`` defaults to the layer cuts of a layered network (a DAG must
    supply its own). The inner maximization is a multi-start coordinate
    ascent and carries no global-optimality certificate; ``converged`` is
    False when the sweep budget ran out on any start.
    """
    dag = net.to_dag()
    if dag.relays and len(dag.relays) > 10:
        raise NetworkError("general_cut_upper_bound supports at most 10 relays")
    if cuts is None:
        if not isinstance(net, LayeredNetwork):
            raise NetworkError("cuts must be given for a general DAG")
        cuts = layer_cuts(net)
    cuts = [check_cut(dag, J) for J in cuts]
    if not cuts:
        raise NetworkError("no cuts given")
    ids = relay_ids(net)
    ev = BatchEvaluator(net, ids)
    par = _Param(dag, ids, domain)
    rng = np.random.default_rng(seed)
    rates, best_gains, ok = [], [], True
    for J in cuts:
        def obj(T, J=J):
            return ev.snr(par(T), cut=J)
        if not ids:
            snr = float(obj(np.zeros((1, 0)))[0])
            rates.append(rate_from_snr(snr))
            best_gains.append(GainAssignment({}))
            continue
        inits = [np.ones(len(ids))] + [rng.uniform(0.05, 1.0, len(ids)) for _ in range(starts - 1)]
        top, top_t = -1.0, None
        for t0 in inits:
            t, v, conv = _coordinate_ascent(obj, t0, tol, max_sweeps)
            ok &= conv
            if v > top:
                top, top_t = v, t
        rates.append(rate_from_snr(max(top, 0.0)))
        best_gains.append(GainAssignment.from_vector(ids, par(top_t)[0]))
    i = int(np.argmin(rates))
    return CutBoundReport(rates[i], tuple(rates), tuple(cuts), tuple(best_gains), ok, domain)


# ---------------------------------------------------------------------------
# Cut-set comparison
# ---------------------------------------------------------------------------

def water_filling(gains_sq, total_power, tol=1e-12):
    """Powers ``p_i = max(0, mu - 1/g_i)`` summing to ``total_power``.

    The water level ``mu`` is found by bisection until the allocated total is
    within ``tol`` of the budget.
    """
    g = np.asarray(gains_sq, dtype=float)
    p = np.zeros_like(g)
    live = g > 0
    if total_power <= 0 or not live.any():
        return p
    inv = 1.0 / g[live]
    lo, hi = inv.min(), inv.max() + total_power
    for _ in range(400):
        mu = 0.5 * (lo + hi)
        s = np.maximum(0.0, mu - inv).sum()
        if abs(s - total_power) <= tol:
            break
        if s > total_power:
            hi = mu
        else:
            lo = mu
    p[live] = np.maximum(0.0, mu - inv)
    return p


def mimo_cut_capacity(net, l0):
    """Capacity across the channel into layer ``l0`` under a sum-power relaxation."""
    if not isinstance(net, LayeredNetwork):
        raise NetworkError("a layered network is required")
    if not 1 <= l0 <= net.L:
        raise NetworkError(f"l0 must be in [1, {net.L}], got {l0!r}")
    H = net.matrix(l0 - 1)
    tx = net.layer_nodes(l0 - 1)
    total = net.source_power if l0 == 1 else sum(net.power_caps[k] for k in tx)
    s = np.linalg.svd(H, compute_uv=False)
    p = water_filling(s ** 2, total)
    return float(np.sum(0.5 * np.log2(1.0 + s ** 2 * p)))


# ---------------------------------------------------------------------------
# Lower bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBoundReport:
    l0: int
    delta0: float
    delta_prime: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    gains: GainAssignment
    r_low: float
    rate: float            # exact rate of the emitted gains
    r_up: float
    gap: float             # R^Up - R^Low

    @property
    def sandwich_ok(self):
        tol = 1e-12 * max(1.0, self.r_up)
        return self.r_low <= self.rate + tol and self.rate <= self.r_up + tol


def anc_lower_bound(net, l0):
    """Lower bound from the mixed scheme anchored at layer ``l0``."""
    m = mixed_multihop_scheme(net, l0)
    r_low = rate_from_snr(m.snr_low)
    rate = achievable_rate(net, m.gains)
    r_up = anc_upper_bound(net).r_up
    return LowerBoundReport(m.l0, m.delta0, m.delta_prime, m.c1, m.c2, m.c3, m.c4, m.c5,
                            m.gains, r_low, rate, r_up, r_up - r_low)


def best_lower_bound(net):
    """The outer maximum over ``l0``; ties go to the smallest layer index."""
    reports = [anc_lower_bound(net, l0) for l0 in range(1, net.L + 1)]
    return max(reports, key=lambda r: (r.r_low, -r.l0))


# ---------------------------------------------------------------------------
# Gap sweeps
# ---------------------------------------------------------------------------

SWEEP_HEADER = ("param", "R_up", "R_low", "delta", "delta0")


@dataclass(frozen=True)
class GapRow:
    param: float
    r_up: float
    r_low: float
    delta: float          # R^Up - R^Low
    delta0: float
    delta_prime: float
    rate: float
    l0: int = field(default=0)

    def csv_fields(self):
        return (self.param, self.r_up, self.r_low, self.delta, self.delta0)


def high_snr_gap_sweep(family: Callable[[float], LayeredNetwork], grid: Sequence[float], l0=None):
    """Tabulate ``R^Up``, ``R^Low`` and their gap over a parameterized family.

    ``l0=None`` takes the best lower bound over all layers at every point.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty parameter grid")
    rows = []
    for p in grid:
        net = family(p)
        rep = best_lower_bound(net) if l0 is None else anc_lower_bound(net, l0)
        rows.append(GapRow(float(p), rep.r_up, rep.r_low, rep.gap, rep.delta0,
                           rep.delta_prime, rep.rate, rep.l0))
    return rows


def format_float(x):
    return repr(float(x))


def write_sweep_csv(rows, fh=None):
    """Write gap rows as CSV; returns the text when ``fh`` is None."""
    own = fh is None
    buf = io.StringIO() if own else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([format_float(v) for v in r.csv_fields()])
    return buf.getvalue() if own else None

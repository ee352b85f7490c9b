"""Two-hop two-source MAC: rate sets, outer bounds, theta geometry and time-shared regions."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import brentq

from .network import GainAssignment, NetworkError

ACHIEVABLE = "achievable"
OUTER1 = "outer1"
OUTER2 = "outer2"
FAMILIES = (ACHIEVABLE, OUTER1, OUTER2)


def C(x):
    """Gaussian capacity in bits."""
    return 0.5 * np.log2(1.0 + np.asarray(x, dtype=float)) if np.ndim(x) else 0.5 * math.log2(1.0 + x)


# ---------------------------------------------------------------------------
# Rate sets
# ---------------------------------------------------------------------------

def mac_gain_caps(mac):
    """``beta_k^Up = sqrt(P_k / (1 + h_{1k}^2 P_1 + h_{2k}^2 P_2))``."""
    h01, h02 = np.asarray(mac.h01), np.asarray(mac.h02)
    p1, p2 = mac.source_powers
    return np.sqrt(mac.caps / (1.0 + h01 ** 2 * p1 + h02 ** 2 * p2))


@dataclass(frozen=True)
class MacRateSet:
    """Pentagon ``{R1 <= cap1, R2 <= cap2, R1 + R2 <= cap_sum}``."""

    cap1: float
    cap2: float
    cap_sum: float
    family: str = ACHIEVABLE
    tag: str = ""

    @property
    def superadditive_ok(self):
        tol = 1e-12 * max(1.0, self.cap_sum)
        return max(self.cap1, self.cap2) <= self.cap_sum + tol and self.cap_sum <= self.cap1 + self.cap2 + tol

    def vertices(self):
        """Upper-right boundary from the R2 axis to the R1 axis."""
        a, b, c = self.cap1, self.cap2, min(self.cap_sum, self.cap1 + self.cap2)
        pts = [(0.0, b), (max(0.0, min(a, c - b)), b), (a, max(0.0, min(b, c - a))), (a, 0.0)]
        out = []
        for p in pts:
            if not out or (abs(p[0] - out[-1][0]) > 0 or abs(p[1] - out[-1][1]) > 0):
                out.append(p)
        return out

    def contains(self, r1, r2, tol=1e-12):
        return (r1 >= -tol and r2 >= -tol and r1 <= self.cap1 + tol and r2 <= self.cap2 + tol
                and r1 + r2 <= self.cap_sum + tol)

    def dominated_by(self, other, tol=0.0):
        return (self.cap1 <= other.cap1 + tol and self.cap2 <= other.cap2 + tol
                and self.cap_sum <= other.cap_sum + tol)


def _beta_vector(mac, B):
    if isinstance(B, GainAssignment):
        return B.vector(mac.relays)
    if isinstance(B, Mapping):
        return np.array([B[k] for k in mac.relays], dtype=float)
    b = np.asarray(B, dtype=float)
    if b.ndim == 2:
        b = np.diag(b)
    if b.shape != (mac.n,):
        raise NetworkError(f"dimension mismatch: expected {mac.n} gains, got {b.shape}")
    return b


def _quad_forms(mac, B):
    x = _beta_vector(mac, B) * np.asarray(mac.h1)
    p1, p2 = mac.source_powers
    s1 = float(x @ np.asarray(mac.h01)) ** 2 * p1
    s2 = float(x @ np.asarray(mac.h02)) ** 2 * p2
    return s1, s2, s1 + s2, float(x @ x)


def upper_layer_noise(mac, B):
    """``E[w_D^2] = h1^T B B h1``."""
    return _quad_forms(mac, B)[3]


def mac_rate_set(mac, B, family=ACHIEVABLE, tag=""):
    """Three capacities of the scalar MAC induced by the diagonal scheme ``B``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    b = _beta_vector(mac, B)
    if np.any(b < 0):
        raise NetworkError("amplification gains must be nonnegative")
    s1, s2, ss, noise = _quad_forms(mac, b)
    if family == ACHIEVABLE:
        if np.any(b > mac_gain_caps(mac) * (1 + 1e-12)):
            raise NetworkError("scheme violates the relay power constraint")
        den = noise + 1.0
    elif family == OUTER1:
        if noise == 0.0:
            raise NetworkError("outer-1 rate set is undefined for B = 0")
        den = noise
    else:
        den = 1.0
    return MacRateSet(C(s1 / den), C(s2 / den), C(ss / den), family, tag)


def outer_bound_2(mac):
    """The noise-free rate set at the cap scheme, which covers every other outer-2 set."""
    return mac_rate_set(mac, mac_gain_caps(mac), OUTER2, tag="B*")


# ---------------------------------------------------------------------------
# Theta frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaFrame:
    """Orthonormal basis of span{h01, h02} with the channel angles and absorbed powers."""

    alpha: float
    beta: float
    p1: float
    p2: float
    u1: np.ndarray = field(default=None, repr=False, compare=False)
    u2: np.ndarray = field(default=None, repr=False, compare=False)
    n1: float = field(default=1.0, compare=False)   # ||h01||
    n2: float = field(default=1.0, compare=False)   # ||h02||

    @classmethod
    def from_angles(cls, alpha, beta, p1, p2):
        if not (0.0 <= alpha <= beta <= math.pi / 2):
            raise ValueError("need 0 <= alpha <= beta <= pi/2")
        return cls(float(alpha), float(beta), float(p1), float(p2),
                   np.array([1.0, 0.0]), np.array([0.0, 1.0]))

    def direction(self, theta):
        return math.cos(theta) * self.u1 + math.sin(theta) * self.u2

    def h01_unit(self):
        return self.direction(self.alpha)

    def h02_unit(self):
        return self.direction(self.beta)


def theta_frame(mac):
    """Gram-Schmidt frame with ``u1`` along ``h01`` (so ``alpha = 0``)."""
    h01, h02 = np.asarray(mac.h01), np.asarray(mac.h02)
    n1, n2 = float(np.linalg.norm(h01)), float(np.linalg.norm(h02))
    u1 = h01 / n1
    r = h02 - (h02 @ u1) * u1
    nr = float(np.linalg.norm(r))
    if nr <= 1e-12 * n2:
        raise NetworkError("h01 and h02 are parallel: the two sources collapse into one")
    u2 = r / nr
    cosb = float(np.clip(h02 @ u1 / n2, -1.0, 1.0))
    p1, p2 = mac.source_powers
    return ThetaFrame(0.0, math.acos(cosb), n1 * n1 * p1, n2 * n2 * p2, u1, u2, n1, n2)


def phi_eval(frame, theta):
    """``(phi1, phi2, phi)`` at ``theta``; vectorized over ``theta``."""
    t = np.asarray(theta, dtype=float)
    f1 = frame.p1 * np.cos(t - frame.alpha) ** 2
    f2 = frame.p2 * np.cos(t - frame.beta) ** 2
    if t.ndim == 0:
        return float(f1), float(f2), float(f1 + f2)
    return f1, f2, f1 + f2


def _dphi(frame, t):
    d1 = -frame.p1 * np.sin(2 * (t - frame.alpha))
    d2 = -frame.p2 * np.sin(2 * (t - frame.beta))
    return d1, d2, d1 + d2


def rate_set_theta(frame, theta):
    """Outer-1 rate set of the unit amplification direction at angle ``theta``."""
    f1, f2, f = phi_eval(frame, theta)
    return MacRateSet(C(f1), C(f2), C(f), OUTER1, tag=f"theta={theta!r}")


def theta_sufficient_interval(frame):
    return (frame.alpha, frame.beta)


def _wrap_half(theta):
    """Reduce to [-pi/2, pi/2); rate sets have period pi."""
    return (theta + math.pi / 2) % math.pi - math.pi / 2


def dominating_theta(frame, theta):
    """An angle in ``[alpha, beta]`` whose outer-1 rate set contains that of ``theta``.

    Follows the five-way case split over ``[-pi/2, pi/2]``.
    """
    a, b = frame.alpha, frame.beta
    t = _wrap_half(theta)
    hp = math.pi / 2
    if a <= t <= b:
        return t
    if t > b:
        return b
    if b - hp <= t < a:
        return a
    if a - hp <= t < b - hp:
        tp = 2 * b - math.pi - t     # reflect about beta - pi/2
        return a if tp <= a else min(tp, b)
    return b


def theta_sum_opt(frame):
    """Maximizer of ``phi`` on ``[alpha, beta]`` (two-branch arctan form)."""
    a, b = frame.alpha, frame.beta
    num = frame.p1 * math.sin(2 * a) + frame.p2 * math.sin(2 * b)
    den = frame.p1 * math.cos(2 * a) + frame.p2 * math.cos(2 * b)
    # num >= 0 on the frame, so the sign of den picks the branch
    if den > 0:
        t = 0.5 * math.atan(num / den)
    elif den < 0:
        t = 0.5 * (math.pi + math.atan(num / den))
    else:
        t = math.pi / 4
    return min(max(t, a), b)


def theta_individual(frame):
    """``(theta*(1), theta*(0)) = (alpha, beta)``."""
    return frame.alpha, frame.beta


def weighted_residual(frame, theta, mu):
    """Derivative in ``theta`` of the weighted sum at the relevant corner point."""
    f1, f2, f = phi_eval(frame, theta)
    d1, d2, d = _dphi(frame, theta)
    if mu < 0.5:
        return mu * d / (1 + f) + (1 - 2 * mu) * d2 / (1 + f2)
    return (2 * mu - 1) * d1 / (1 + f1) + (1 - mu) * d / (1 + f)


def theta_weighted(frame, mu, xtol=1e-12):
    """Maximizer ``theta*(mu)`` of ``mu R1 + (1 - mu) R2`` over the outer-1 boundary."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu!r}")
    if mu == 0.0:
        return frame.beta
    if mu == 1.0:
        return frame.alpha
    ts = theta_sum_opt(frame)
    if mu == 0.5:
        return ts
    lo, hi = (ts, frame.beta) if mu < 0.5 else (frame.alpha, ts)
    r_lo, r_hi = weighted_residual(frame, lo, mu), weighted_residual(frame, hi, mu)
    if r_lo == 0.0:
        return lo
    if r_hi == 0.0:
        return hi
    if np.sign(r_lo) == np.sign(r_hi):
        warnings.warn("no sign change in the theta bracket; returning the nearer endpoint")
        return lo if abs(r_lo) <= abs(r_hi) else hi
    return brentq(lambda t: weighted_residual(frame, t, mu), lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def gains_from_theta(mac, theta, frame=None):
    """Diagonal scheme whose amplification vector ``B h1`` points along ``theta``.

    Scaled so every relay respects its cap and at least one meets it.
    """
    h1 = np.asarray(mac.h1)
    if np.any(h1 == 0):
        raise NetworkError("h1 has a zero entry")
    frame = frame or theta_frame(mac)
    x = frame.direction(theta)
    x = np.where(np.abs(x) < 1e-15, 0.0, x)
    if np.all(x <= 0):
        x = -x
    if np.any(x < 0):
        raise NetworkError(f"direction theta={theta!r} mixes signs; no nonnegative gains realize it")
    if not np.any(x > 0):
        raise NetworkError("zero amplification direction")
    caps = mac_gain_caps(mac)
    ratio = x / h1
    live = ratio > 0
    c = float(np.min(caps[live] / ratio[live]))
    beta = np.minimum(c * ratio, caps)
    return GainAssignment.from_vector(mac.relays, beta)


def default_schemes(mac, frame=None):
    """The four stored schemes: B10 (sum), B11 (alpha), B12 (beta) and B2 (caps)."""
    frame = frame or theta_frame(mac)
    out = {}
    for name, t in (("B10", theta_sum_opt(frame)), ("B11", frame.alpha), ("B12", frame.beta)):
        try:
            out[name] = gains_from_theta(mac, t, frame)
        except NetworkError:
            out[name] = GainAssignment.from_vector(mac.relays, mac_gain_caps(mac))
    out["B2"] = GainAssignment.from_vector(mac.relays, mac_gain_caps(mac))
    return out


@dataclass(frozen=True)
class MacDominance:
    kind: str           # UpperLayerDominant, LowerLayerDominant or Neither
    noise: Mapping      # scheme name -> E[w_D^2]


def classify_mac_dominance(mac):
    w = {k: upper_layer_noise(mac, g) for k, g in default_schemes(mac).items()}
    w2 = w["B2"]
    others = [w[k] for k in ("B10", "B11", "B12")]
    if all(w2 >= v >= 1.0 for v in others):
        kind = "UpperLayerDominant"
    elif all(1.0 >= w2 >= v for v in others):
        kind = "LowerLayerDominant"
    else:
        kind = "Neither"
    return MacDominance(kind, w)


# ---------------------------------------------------------------------------
# Polylines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionPolyline:
    """Upper-right boundary of a down-closed rate region, ``R1`` ascending."""

    points: tuple
    label: str = ""

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("empty polyline")

    @property
    def array(self):
        return np.array(self.points)

    @property
    def r1_max(self):
        return max(p[0] for p in self.points)

    @property
    def r2_max(self):
        return max(p[1] for p in self.points)

    @property
    def sum_max(self):
        return max(p[0] + p[1] for p in self.points)

    def weighted_max(self, mu):
        a = self.array
        return float(np.max(mu * a[:, 0] + (1 - mu) * a[:, 1]))

    def profile(self):
        """``(xs, ys)`` with strictly increasing ``xs`` for interpolation."""
        xs, ys = [], []
        for x, y in self.points:
            if xs and x <= xs[-1]:
                ys[-1] = max(ys[-1], y)
                continue
            xs.append(x)
            ys.append(y)
        return np.array(xs), np.array(ys)

    def height(self, r1):
        """Largest ``R2`` on the boundary above ``r1`` (-inf beyond the region)."""
        xs, ys = self.profile()
        r1 = np.asarray(r1, dtype=float)
        out = np.interp(r1, xs, ys) if len(xs) > 1 else np.full_like(r1, ys[0])
        return np.where(r1 <= xs[-1] * (1 + 1e-15) + 1e-300, out, -np.inf)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def down_closed_hull(points, label=""):
    """Boundary of the convex, down-closed hull of ``points`` (all in the first quadrant)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = np.maximum(pts, 0.0)
    xmax, ymax = float(pts[:, 0].max()), float(pts[:, 1].max())
    cand = [(0.0, ymax), (xmax, 0.0)] + [tuple(p) for p in pts]
    cand = sorted(set(cand), key=lambda p: (p[0], -p[1]))
    hull = []
    for p in cand:
        if p[0] == 0.0 and p[1] < ymax:
            continue
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    # keep the nonincreasing part and close on the R1 axis
    out = [hull[0]]
    for p in hull[1:]:
        if p[0] > out[-1][0] or p[1] < out[-1][1]:
            out.append(p)
    if out[-1][1] != 0.0:
        out.append((out[-1][0], 0.0))
    return RegionPolyline(tuple(out), label)


def pentagon_polyline(rs, label=""):
    return RegionPolyline(tuple(rs.vertices()), label or rs.tag)


def corner_points(frame, theta, upper=True):
    """Upper-diagonal ``(C(phi) - C(phi2), C(phi2))`` or lower-diagonal ``(C(phi1), C(phi) - C(phi1))``."""
    f1, f2, f = phi_eval(frame, theta)
    if upper:
        return np.column_stack([C(f) - C(f2), C(f2)]) if np.ndim(theta) else (C(f) - C(f2), C(f2))
    return np.column_stack([C(f1), C(f) - C(f1)]) if np.ndim(theta) else (C(f1), C(f) - C(f1))


def outer_boundary_1(frame, resolution=2048):
    """Trace the first outer bound from the R2 axis to the R1 axis.

    Applies a down-closed convex hull when ``|alpha - beta| > pi/4``, where
    concavity of the traced arcs is not guaranteed.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    a, b = frame.alpha, frame.beta
    ts = theta_sum_opt(frame)
    up = corner_points(frame, np.linspace(b, ts, resolution), upper=True)
    lo = corner_points(frame, np.linspace(ts, a, resolution), upper=False)
    f1a = phi_eval(frame, a)[0]
    f2b = phi_eval(frame, b)[1]
    pts = [(0.0, C(f2b))] + [tuple(p) for p in up] + [tuple(p) for p in lo] + [(C(f1a), 0.0)]
    if abs(b - a) > math.pi / 4:
        return down_closed_hull(pts, "outer1")
    clean = [pts[0]]
    for p in pts[1:]:
        if p != clean[-1]:
            clean.append(p)
    return RegionPolyline(tuple(clean), "outer1")


def concavity_diagnostics(frame, theta):
    """``(g1, g2, g3, g4, d2y/dx2)`` for the upper-diagonal corner arc in nats."""
    if abs(theta - frame.beta) < 1e-14:
        raise ValueError("the corner arc is singular at theta = beta")
    f1, f2, f = phi_eval(frame, theta)
    d1, d2, d = _dphi(frame, theta)
    dd2 = -2 * frame.p2 * math.cos(2 * (theta - frame.beta))
    dd = -2 * frame.p1 * math.cos(2 * (theta - frame.alpha)) + dd2
    g1 = d * (1 + f2) / ((1 + f) * d2) - 1
    g2 = d * (1 + f2) - d2 * (1 + f)
    g3 = dd * d2 - d * dd2
    g4 = d * d2
    y2 = (-(g3 * (1 + f) * (1 + f2) - g2 * g4) / g2
          * 2 * (1 + f) * (1 + f2) / (((1 + f) * d2) ** 2 * g1 ** 2))
    return g1, g2, g3, g4, y2


def corner_arc_nats(frame, theta):
    """Upper-diagonal corner in natural-log units, as used by the concavity analysis."""
    f1, f2, f = phi_eval(frame, theta)
    return 0.5 * np.log1p(f) - 0.5 * np.log1p(f2), 0.5 * np.log1p(f2)


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

def dynamic_inner_region(mac, schemes=None):
    """Time-shared hull of the achievable pentagons of the stored schemes."""
    if schemes is None:
        schemes = default_schemes(mac)
    if isinstance(schemes, Mapping):
        items = list(schemes.items())
    else:
        items = [(f"S{i}", g) for i, g in enumerate(schemes)]
    if not items:
        raise ValueError("empty scheme list")
    pts = []
    for name, g in items:
        pts.extend(mac_rate_set(mac, g, ACHIEVABLE, tag=name).vertices())
    return down_closed_hull(pts, "inner")


def region_gaps(inner, outer):
    """Outer minus inner for the maximum R1, maximum R2 and maximum sum rate."""
    return (outer.r1_max - inner.r1_max, outer.r2_max - inner.r2_max, outer.sum_max - inner.sum_max)


def polyline_intersection(p, q, label=""):
    """Boundary of the intersection of two down-closed convex regions."""
    xs = np.union1d(p.profile()[0], q.profile()[0])
    xcap = min(p.r1_max, q.r1_max)
    xs = xs[xs <= xcap]
    xs = np.union1d(xs, [0.0, xcap])
    fp, fq = p.height(xs), q.height(xs)
    d = fp - fq
    extra = []
    for i in range(len(xs) - 1):
        if d[i] * d[i + 1] < 0:
            t = d[i] / (d[i] - d[i + 1])
            extra.append(xs[i] + t * (xs[i + 1] - xs[i]))
    xs = np.union1d(xs, extra)
    ys = np.maximum(np.minimum(p.height(xs), q.height(xs)), 0.0)
    pts = list(zip(xs, ys))
    if pts[-1][1] > 0:
        pts.append((xs[-1], 0.0))
    return RegionPolyline(tuple(pts), label)


def outer_bound_intersection(mac, resolution=2048):
    """Intersection of the first (hulled when needed) and second outer bounds."""
    o1 = outer_boundary_1(theta_frame(mac), resolution)
    o2 = pentagon_polyline(outer_bound_2(mac), "outer2")
    return polyline_intersection(o1, o2, "outer")

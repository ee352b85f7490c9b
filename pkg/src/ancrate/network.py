"""Relay network descriptions: general DAGs, layered networks and the two-hop MAC.

All noise variances are 1 and are therefore not part of any description.
Node ids are opaque strings; wherever an ordering is needed (vectors,
matrices, tie-breaking) it is lexicographic unless a layered description
fixes the order explicitly.
"""
from __future__ import annotations

import ast
import heapq
import json
import math
import operator
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence, Union

import numpy as np

SOURCE = "source"
RELAY = "relay"
DESTINATION = "destination"


class NetworkError(ValueError):
    """A network description violates one of the model invariants."""


class DisconnectedError(NetworkError):
    """No source-destination path exists."""


class NetworkSyntaxError(NetworkError):
    """The network spec file could not be decoded."""

    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"syntax error{where}: {msg}")


def _positive(value, what):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise NetworkError(f"non-positive channel gain {value!r} on {what}"
                           if what.startswith("edge") else
                           f"non-positive value {value!r} for {what}")
    return value


def _nonneg(value, what):
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise NetworkError(f"negative or non-finite value {value!r} for {what}")
    return value


# ---------------------------------------------------------------------------
# General DAG
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelayDag:
    """Single source/destination relay network on a directed acyclic graph.

    ``gains`` maps an ordered pair ``(j, k)`` to the positive channel
    amplitude ``h_{j,k}``. ``power_caps`` holds ``P_k^Up`` for every relay;
    the source transmits with ``source_power``.
    """

    source: str
    destination: str
    relays: tuple
    gains: Mapping
    power_caps: Mapping
    source_power: float
    name: str = field(default="", compare=False)
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "relays", tuple(sorted(self.relays)))
        object.__setattr__(self, "gains", {tuple(e): float(h) for e, h in self.gains.items()})
        object.__setattr__(self, "power_caps", {k: float(v) for k, v in self.power_caps.items()})
        object.__setattr__(self, "source_power", float(self.source_power))
        self._validate()

    def _validate(self):
        ids = [self.source, self.destination, *self.relays]
        if len(set(ids)) != len(ids):
            raise NetworkError("node ids must be unique")
        if self.source == self.destination:
            raise NetworkError("source and destination must differ")
        _nonneg(self.source_power, "source power")
        known = set(ids)
        for (j, k), h in self.gains.items():
            if j not in known or k not in known:
                raise NetworkError(f"edge ({j}, {k}) references an unknown node")
            if j == k:
                raise NetworkError(f"self-loop on node {j}")
            _positive(h, f"edge ({j}, {k})")
            if k == self.source:
                raise NetworkError(f"source {self.source} has an in-edge from {j}")
            if j == self.destination:
                raise NetworkError(f"destination {self.destination} has an out-edge to {k}")
        missing = [r for r in self.relays if r not in self.power_caps]
        if missing:
            raise NetworkError(f"missing power cap for relay(s) {', '.join(missing)}")
        extra = [k for k in self.power_caps if k not in self.relays]
        if extra:
            raise NetworkError(f"power cap given for non-relay node(s) {', '.join(extra)}")
        for r in self.relays:
            _positive(self.power_caps[r], f"power cap of {r}")
        self.topological_order  # raises on cycles
        fwd = self._reach(self.source, self.successors)
        back = self._reach(self.destination, self.predecessors)
        if self.destination not in fwd:
            raise DisconnectedError("destination is not reachable from the source")
        for r in self.relays:
            if r not in fwd or r not in back:
                raise NetworkError(f"relay {r} does not lie on any source-destination path")

    @staticmethod
    def _reach(start, nbrs):
        seen = {start}
        todo = deque([start])
        while todo:
            u = todo.popleft()
            for v in nbrs(u):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen

    @cached_property
    def _succ(self):
        out = {n: [] for n in self.nodes}
        for j, k in self.gains:
            out[j].append(k)
        return {n: tuple(sorted(v)) for n, v in out.items()}

    @cached_property
    def _pred(self):
        inn = {n: [] for n in self.nodes}
        for j, k in self.gains:
            inn[k].append(j)
        return {n: tuple(sorted(v)) for n, v in inn.items()}

    @property
    def nodes(self):
        return tuple(sorted((self.source, self.destination, *self.relays)))

    def successors(self, node):
        return self._succ[node]

    def predecessors(self, node):
        return self._pred[node]

    def role(self, node):
        if node == self.source:
            return SOURCE
        if node == self.destination:
            return DESTINATION
        if node in self.power_caps:
            return RELAY
        raise NetworkError(f"unknown node {node!r}")

    def cap(self, node):
        """Transmit power bound; the source's bound is its power P_S."""
        if node == self.source:
            return self.source_power
        if node == self.destination:
            raise NetworkError("the destination does not transmit")
        return self.power_caps[node]

    @cached_property
    def topological_order(self):
        indeg = {n: len(self._pred[n]) for n in self.nodes}
        ready = [n for n, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self._succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != len(indeg):
            stuck = sorted(n for n, d in indeg.items() if d > 0)
            raise NetworkError(f"cycle found involving node(s) {', '.join(stuck)}")
        return tuple(order)

    def to_dag(self):
        return self


# ---------------------------------------------------------------------------
# Layered networks
# ---------------------------------------------------------------------------

def _as_matrix_tuple(m):
    arr = np.atleast_2d(np.asarray(m, dtype=float))
    return tuple(tuple(float(x) for x in row) for row in arr)


@dataclass(frozen=True)
class LayeredNetwork:
    """Layered relay network: edges only join consecutive layers.

    ``layers`` lists the relay ids of layers ``1 .. L-1``. ``matrices`` holds
    ``L`` channel matrices; ``matrices[l]`` has shape ``(n_{l+1}, n_l)`` with
    ``n_0 = n_L = 1``, so ``matrices[0]`` is the broadcast column ``h_0`` and
    ``matrices[-1]`` the MAC row ``h_{L-1}^T``. Zero entries mark absent edges.
    """

    layers: tuple
    matrices: tuple
    source_power: float
    power_caps: Mapping
    source: str = "S"
    destination: str = "D"
    name: str = field(default="", compare=False)
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(l) for l in self.layers))
        object.__setattr__(self, "matrices", tuple(_as_matrix_tuple(m) for m in self.matrices))
        object.__setattr__(self, "power_caps", {k: float(v) for k, v in self.power_caps.items()})
        object.__setattr__(self, "source_power", float(self.source_power))
        self._validate()

    def _validate(self):
        L = len(self.matrices)
        if L < 1:
            raise NetworkError("a layered network needs at least one hop")
        if len(self.layers) != L - 1:
            raise NetworkError(f"dimension mismatch: {len(self.layers)} relay layers "
                               f"but {L} channel matrices (expected {len(self.layers) + 1})")
        sizes = [1] + [len(l) for l in self.layers] + [1]
        for i, layer in enumerate(self.layers, start=1):
            if not layer:
                raise NetworkError(f"layer {i} is empty")
        for l, m in enumerate(self.matrices):
            rows, cols = len(m), len(m[0]) if m else 0
            if (rows, cols) != (sizes[l + 1], sizes[l]):
                raise NetworkError(
                    f"dimension mismatch: channel matrix {l} is {rows}x{cols}, "
                    f"expected {sizes[l + 1]}x{sizes[l]}")
            for row in m:
                for h in row:
                    _nonneg(h, f"channel gain in matrix {l}")
        # the DAG view checks path membership, caps and id uniqueness
        self.to_dag()

    @property
    def L(self):
        return len(self.matrices)

    @property
    def layer_sizes(self):
        return tuple(len(l) for l in self.layers)

    @property
    def relays(self):
        return tuple(r for layer in self.layers for r in layer)

    def matrix(self, l):
        """Channel matrix from layer ``l`` to layer ``l+1`` as an array."""
        return np.array(self.matrices[l], dtype=float)

    @property
    def h0(self):
        return self.matrix(0)[:, 0]

    @property
    def h_last(self):
        return self.matrix(self.L - 1)[0, :]

    def layer_nodes(self, l):
        """Node ids at layer ``l`` (0 = source, L = destination)."""
        if l == 0:
            return (self.source,)
        if l == self.L:
            return (self.destination,)
        return self.layers[l - 1]

    def layer_of(self, node):
        for l in range(self.L + 1):
            if node in self.layer_nodes(l):
                return l
        raise NetworkError(f"unknown node {node!r}")

    @cached_property
    def _dag(self):
        gains = {}
        for l, m in enumerate(self.matrices):
            tx, rx = self.layer_nodes(l), self.layer_nodes(l + 1)
            for i, k in enumerate(rx):
                for j, src in enumerate(tx):
                    if m[i][j] > 0.0:
                        gains[(src, k)] = m[i][j]
        return RelayDag(self.source, self.destination, self.relays, gains,
                        self.power_caps, self.source_power, self.name, self.note)

    def to_dag(self):
        return self._dag


# ---------------------------------------------------------------------------
# Two-hop MAC
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoHopMac:
    """Two sources, one layer of ``n`` relays, one destination."""

    relays: tuple
    h01: tuple
    h02: tuple
    h1: tuple
    source_powers: tuple
    power_caps: Mapping
    name: str = field(default="", compare=False)
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "relays", tuple(self.relays))
        for attr in ("h01", "h02", "h1", "source_powers"):
            object.__setattr__(self, attr, tuple(float(x) for x in getattr(self, attr)))
        object.__setattr__(self, "power_caps", {k: float(v) for k, v in self.power_caps.items()})
        n = len(self.relays)
        if n < 1:
            raise NetworkError("a two-hop MAC needs at least one relay")
        if len(set(self.relays)) != n:
            raise NetworkError("relay ids must be unique")
        for attr in ("h01", "h02", "h1"):
            vec = getattr(self, attr)
            if len(vec) != n:
                raise NetworkError(f"dimension mismatch: {attr} has length {len(vec)}, expected {n}")
            for r, h in zip(self.relays, vec):
                _positive(h, f"edge {attr}[{r}]")
        if len(self.source_powers) != 2:
            raise NetworkError("a two-hop MAC needs exactly two source powers")
        for p in self.source_powers:
            _nonneg(p, "source power")
        if set(self.power_caps) != set(self.relays):
            raise NetworkError("power caps must be given for exactly the relays")
        for r in self.relays:
            _positive(self.power_caps[r], f"power cap of {r}")

    @property
    def n(self):
        return len(self.relays)

    @property
    def caps(self):
        return np.array([self.power_caps[r] for r in self.relays])

    @property
    def H0(self):
        return np.column_stack([self.h01, self.h02])

    @property
    def A(self):
        """``H0 diag(P_S1, P_S2) H0^T``."""
        H0 = self.H0
        return H0 @ np.diag(self.source_powers) @ H0.T


Network = Union[RelayDag, LayeredNetwork, TwoHopMac]


# ---------------------------------------------------------------------------
# Gain assignments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GainAssignment:
    """One amplification gain per relay (an AF scheme)."""

    gains: Mapping

    def __post_init__(self):
        clean = {}
        for k, b in self.gains.items():
            b = float(b)
            if not math.isfinite(b) or b < 0.0:
                raise NetworkError(f"amplification gain of {k} must be finite and >= 0, got {b!r}")
            clean[k] = b
        object.__setattr__(self, "gains", clean)

    def __getitem__(self, node):
        return self.gains[node]

    def __len__(self):
        return len(self.gains)

    def __iter__(self):
        return iter(sorted(self.gains))

    def check_covers(self, net):
        relays = set(net.relays)
        missing = sorted(relays - set(self.gains))
        if missing:
            raise NetworkError(f"missing gain entry for relay(s) {', '.join(missing)}")
        extra = sorted(set(self.gains) - relays)
        if extra:
            raise NetworkError(f"gain given for unknown relay(s) {', '.join(extra)}")

    def vector(self, ids):
        return np.array([self.gains[k] for k in ids], dtype=float)

    def layer_diag(self, net, l):
        """``B_l = diag(beta over layer l)`` in the layer's node order."""
        return np.diag(self.vector(net.layer_nodes(l)))

    @classmethod
    def from_vector(cls, ids, values):
        return cls(dict(zip(ids, (float(v) for v in values))))


# ---------------------------------------------------------------------------
# Spec files
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt, "exp": math.exp, "log": math.log}


def eval_expression(text, params):
    """Evaluate an arithmetic template expression such as ``"a**2 + 1"``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise NetworkError(f"unknown template parameter {node.id!r}")
            return float(params[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise NetworkError(f"unsupported template expression {text!r}")

    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise NetworkError(f"bad template expression {text!r}: {exc.msg}") from None
    return ev(tree)


class _Reader:
    def __init__(self, params):
        self.params = params

    def num(self, value, what):
        if isinstance(value, bool):
            raise NetworkError(f"{what} must be a number")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            if self.params is None:
                raise NetworkError(f"{what} is a template expression {value!r} but no parameters were given")
            return eval_expression(value, self.params)
        raise NetworkError(f"{what} must be a number")

    def vec(self, value, what):
        if not isinstance(value, list):
            raise NetworkError(f"{what} must be an array")
        return [self.num(v, f"{what}[{i}]") for i, v in enumerate(value)]

    def mat(self, value, what):
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            raise NetworkError(f"{what} must be an array of arrays")
        return [self.vec(r, f"{what}[{i}]") for i, r in enumerate(value)]

    def caps(self, value):
        if not isinstance(value, dict):
            raise NetworkError("power_caps must be an object mapping relay id to power")
        return {str(k): self.num(v, f"power_caps[{k}]") for k, v in value.items()}


def _check_keys(doc, allowed, required, where):
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise NetworkError(f"unknown field(s) in {where}: {', '.join(unknown)}")
    missing = sorted(k for k in required if k not in doc)
    if missing:
        raise NetworkError(f"missing field(s) in {where}: {', '.join(missing)}")


_COMMON = ("type", "name", "note")


def parse_network(text, params=None):
    """Parse a JSON network spec into a validated network object.

    ``params`` supplies values for string-valued template expressions
    (used by parameter sweeps); without it every number must be literal.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise NetworkError("top level of a network spec must be an object")
    kind = doc.get("type")
    rd = _Reader(params)
    meta = {"name": str(doc.get("name", "")), "note": str(doc.get("note", ""))}
    if kind == "dag":
        _check_keys(doc, _COMMON + ("nodes", "gains", "power_caps", "source_power"),
                    ("nodes", "gains", "power_caps", "source_power"), "dag spec")
        nodes = doc["nodes"]
        if not isinstance(nodes, dict):
            raise NetworkError("nodes must map node id to role")
        roles = {}
        for nid, role in nodes.items():
            if role not in (SOURCE, RELAY, DESTINATION):
                raise NetworkError(f"node {nid} has unknown role {role!r}")
            roles.setdefault(role, []).append(str(nid))
        if len(roles.get(SOURCE, [])) != 1 or len(roles.get(DESTINATION, [])) != 1:
            raise NetworkError("exactly one source and one destination are required")
        gains = {}
        if not isinstance(doc["gains"], list):
            raise NetworkError("gains must be an array of [from, to, h] triples")
        for i, item in enumerate(doc["gains"]):
            if not (isinstance(item, list) and len(item) == 3):
                raise NetworkError(f"gains[{i}] must be a [from, to, h] triple")
            j, k, h = item
            if (str(j), str(k)) in gains:
                raise NetworkError(f"duplicate edge ({j}, {k})")
            h = rd.num(h, f"gains[{i}]")
            if h <= 0:
                raise NetworkError(f"non-positive channel gain {h!r} on edge ({j}, {k})")
            gains[(str(j), str(k))] = h
        return RelayDag(roles[SOURCE][0], roles[DESTINATION][0], roles.get(RELAY, []), gains,
                        rd.caps(doc["power_caps"]), rd.num(doc["source_power"], "source_power"), **meta)
    if kind == "layered":
        _check_keys(doc, _COMMON + ("layers", "gains", "power_caps", "source_power"),
                    ("layers", "gains", "power_caps", "source_power"), "layered spec")
        layers = doc["layers"]
        if not isinstance(layers, list) or not all(isinstance(l, list) for l in layers):
            raise NetworkError("layers must be an array of arrays of relay ids")
        layers = [[str(x) for x in l] for l in layers]
        g = doc["gains"]
        if not isinstance(g, dict):
            raise NetworkError("gains of a layered spec must be an object")
        if not layers:
            _check_keys(g, ("direct",), ("direct",), "layered gains")
            mats = [[[rd.num(g["direct"], "gains.direct")]]]
        else:
            _check_keys(g, ("h0", "H", "h_last"), ("h0", "h_last"), "layered gains")
            inner = g.get("H", [])
            if not isinstance(inner, list):
                raise NetworkError("gains.H must be an array of matrices")
            h0 = rd.vec(g["h0"], "gains.h0")
            mats = [[[x] for x in h0]]
            mats += [rd.mat(m, f"gains.H[{i}]") for i, m in enumerate(inner)]
            mats.append([rd.vec(g["h_last"], "gains.h_last")])
        _check_ragged(mats)
        return LayeredNetwork(layers, mats, rd.num(doc["source_power"], "source_power"),
                              rd.caps(doc["power_caps"]), **meta)
    if kind == "mac2":
        _check_keys(doc, _COMMON + ("nodes", "gains", "power_caps", "source_powers"),
                    ("nodes", "gains", "power_caps", "source_powers"), "mac2 spec")
        g = doc["gains"]
        if not isinstance(g, dict):
            raise NetworkError("gains of a mac2 spec must be an object")
        _check_keys(g, ("h01", "h02", "h1"), ("h01", "h02", "h1"), "mac2 gains")
        if not isinstance(doc["nodes"], list):
            raise NetworkError("nodes of a mac2 spec must be an array of relay ids")
        return TwoHopMac([str(x) for x in doc["nodes"]], rd.vec(g["h01"], "gains.h01"),
                         rd.vec(g["h02"], "gains.h02"), rd.vec(g["h1"], "gains.h1"),
                         rd.vec(doc["source_powers"], "source_powers"), rd.caps(doc["power_caps"]), **meta)
    raise NetworkError(f"unknown network type {kind!r} (expected dag, layered or mac2)")


def _check_ragged(mats):
    for i, m in enumerate(mats):
        widths = {len(r) for r in m}
        if len(widths) > 1:
            raise NetworkError(f"dimension mismatch: channel matrix {i} has ragged rows")


def render_network(net):
    """Serialize ``net`` to the JSON spec format (inverse of :func:`parse_network`)."""
    doc = {}
    if isinstance(net, RelayDag):
        doc["type"] = "dag"
        nodes = {net.source: SOURCE}
        nodes.update({r: RELAY for r in net.relays})
        nodes[net.destination] = DESTINATION
        doc["nodes"] = nodes
        doc["gains"] = [[j, k, h] for (j, k), h in sorted(net.gains.items())]
        doc["power_caps"] = dict(sorted(net.power_caps.items()))
        doc["source_power"] = net.source_power
    elif isinstance(net, LayeredNetwork):
        if net.source != "S" or net.destination != "D":
            raise NetworkError("layered spec files use the fixed ids S and D")
        doc["type"] = "layered"
        doc["layers"] = [list(l) for l in net.layers]
        if net.L == 1:
            doc["gains"] = {"direct": net.matrices[0][0][0]}
        else:
            doc["gains"] = {"h0": [row[0] for row in net.matrices[0]],
                            "H": [[list(r) for r in m] for m in net.matrices[1:-1]],
                            "h_last": list(net.matrices[-1][0])}
        doc["power_caps"] = dict(net.power_caps)
        doc["source_power"] = net.source_power
    elif isinstance(net, TwoHopMac):
        doc["type"] = "mac2"
        doc["nodes"] = list(net.relays)
        doc["gains"] = {"h01": list(net.h01), "h02": list(net.h02), "h1": list(net.h1)}
        doc["power_caps"] = dict(net.power_caps)
        doc["source_powers"] = list(net.source_powers)
    else:
        raise TypeError(f"cannot render {type(net).__name__}")
    if net.name:
        doc["name"] = net.name
    if net.note:
        doc["note"] = net.note
    return json.dumps(doc, indent=2) + "\n"


def load_network(path, params=None):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), params)


# ---------------------------------------------------------------------------
# Layering
# ---------------------------------------------------------------------------

def as_layered(net):
    """Relabel a DAG into layers; fails if some node sits at two depths."""
    if isinstance(net, LayeredNetwork):
        return net
    if not isinstance(net, RelayDag):
        raise NetworkError(f"cannot layer a {type(net).__name__}")
    depth = {net.source: 0}
    for u in net.topological_order:
        if u not in depth:
            continue
        for v in net.successors(u):
            d = depth[u] + 1
            if v in depth and depth[v] != d:
                raise NetworkError(f"not layered: node {v} is reached at depths {depth[v]} and {d}")
            depth[v] = d
    L = depth[net.destination]
    for r in net.relays:
        if not 1 <= depth[r] < L:
            raise NetworkError(f"not layered: relay {r} at depth {depth[r]} is not between "
                               f"the source and the destination (depth {L})")
    layers = [sorted(r for r in net.relays if depth[r] == l) for l in range(1, L)]
    if any(not layer for layer in layers):
        raise NetworkError("not layered: empty intermediate layer")
    tiers = [[net.source]] + layers + [[net.destination]]
    mats = []
    for l in range(L):
        m = np.zeros((len(tiers[l + 1]), len(tiers[l])))
        for i, k in enumerate(tiers[l + 1]):
            for j, src in enumerate(tiers[l]):
                m[i, j] = net.gains.get((src, k), 0.0)
        mats.append(m)
    out = LayeredNetwork(layers, mats, net.source_power, net.power_caps,
                         source="S", destination="D", name=net.name, note=net.note) \
        if (net.source, net.destination) == ("S", "D") else \
        LayeredNetwork(layers, mats, net.source_power, net.power_caps,
                       source=net.source, destination=net.destination, name=net.name, note=net.note)
    return out


def two_hop(n_or_ids, h_source, h_dest, caps, source_power=1.0, name="", note=""):
    """Convenience constructor for a two-hop parallel network."""
    ids = [f"r{i + 1}" for i in range(n_or_ids)] if isinstance(n_or_ids, int) else list(n_or_ids)
    caps = np.broadcast_to(np.asarray(caps, dtype=float), (len(ids),))
    return LayeredNetwork([ids], [np.asarray(h_source, float).reshape(-1, 1),
                                  np.asarray(h_dest, float).reshape(1, -1)],
                          source_power, dict(zip(ids, caps)), name=name, note=note)


def layered(layer_sizes: Sequence[int], matrices, caps, source_power=1.0, name="", note=""):
    """Build a layered network with generated ids ``r<layer>_<index>``."""
    layers = [[f"r{l + 1}_{i + 1}" for i in range(n)] for l, n in enumerate(layer_sizes)]
    ids = [r for layer in layers for r in layer]
    if isinstance(caps, Mapping):
        capmap = dict(caps)
    else:
        capmap = dict(zip(ids, np.broadcast_to(np.asarray(caps, float), (len(ids),))))
    return LayeredNetwork(layers, matrices, source_power, capmap, name=name, note=note)

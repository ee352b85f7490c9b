"""Command-line front end: bounds, rates, certificates, sweeps, MAC regions and oracles."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys

import numpy as np

from . import __version__
from .bounds import (SWEEP_HEADER, anc_lower_bound, anc_upper_bound, format_float,
                     general_cut_upper_bound, high_snr_gap_sweep)
from .core import achievable_rate, destination_snr, rate_from_snr
from .mac import (classify_mac_dominance, default_schemes, dynamic_inner_region,
                  outer_bound_2, outer_bound_intersection, outer_boundary_1,
                  pentagon_polyline, region_gaps, theta_frame, theta_sum_opt)
from .network import (DisconnectedError, GainAssignment, LayeredNetwork, NetworkError, TwoHopMac,
                      as_layered, parse_network)
from .oracle import SimConfig, grid_search_best_gains, monte_carlo_sim
from .schemes import (classify_dominance, gap_certificate, mixed_multihop_scheme,
                      scheme_max_gain, scheme_pseudo_optimal, scheme_selection)

MAC_SCHEMES = ("B10", "B11", "B12", "B2")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def render_table(header, rows, fmt):
    rows = [[_cell(v) for v in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(h)), *(len(r[i]) for r in rows)) if rows else len(str(h))
              for i, h in enumerate(header)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_pairs(pairs, fmt):
    return render_table(("quantity", "value"), pairs, fmt)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def _read(path):
    with open(path, "rb") as fh:
        data = fh.read()
    digest = hashlib.sha256(data).hexdigest()
    print(f"ancrate {__version__} input {path} sha256={digest}", file=sys.stderr)
    return data.decode("utf-8")


def _load(path, params=None):
    return parse_network(_read(path), params)


def _layered(net):
    if isinstance(net, TwoHopMac):
        raise NetworkError("a relay network is required, got a two-hop MAC")
    return as_layered(net)


def _range(text):
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    return lo, hi, steps


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _scheme_gains(net, spec, gains_path):
    if spec == "file":
        if not gains_path:
            raise UsageError("--scheme file requires --gains PATH")
        doc = json.loads(_read(gains_path))
        if not isinstance(doc, dict):
            raise NetworkError("a gains file must map relay id to gain")
        g = GainAssignment(doc)
        g.check_covers(net.to_dag())
        return g
    if spec.startswith("mixed:"):
        try:
            l0 = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad layer in {spec!r}") from None
        return mixed_multihop_scheme(_layered(net), l0).gains
    table = {"max": scheme_max_gain, "pseudo": scheme_pseudo_optimal, "select": scheme_selection}
    if spec not in table:
        raise UsageError(f"unknown scheme {spec!r} (expected max, pseudo, select, mixed:l0 or file)")
    return table[spec](_layered(net))


def _gain_pairs(g):
    return [(f"beta[{k}]", g[k]) for k in g]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_bounds(args):
    net = _layered(_load(args.net))
    up = anc_upper_bound(net)
    rows = []
    for l in range(1, net.L + 1):
        rows.append((l, up.layer_power[l - 1], up.layer_bounds[l - 1],
                     anc_lower_bound(net, l).r_low))
    low = max(r[3] for r in rows)
    rows.append(("min", "", up.r_up, low))
    text = render_table(("layer", "layer_power", "R_up", "R_low"), rows, args.format)
    extra = [("argmin", up.argmin)]
    if args.numeric:
        rep = general_cut_upper_bound(net, seed=args.seed)
        extra += [("numeric_R_up", rep.r_up), ("numeric_converged", rep.converged)]
    return text + ("\n" + render_pairs(extra, args.format) if args.format == "text" else
                   "".join(f"# {k}={_cell(v)}\n" for k, v in extra))


def cmd_rate(args):
    net = _load(args.net)
    g = _scheme_gains(net, args.scheme, args.gains)
    s = destination_snr(net, g)
    pairs = [("scheme", args.scheme), ("snr", s.snr), ("rate", s.rate)] + _gain_pairs(g)
    return render_pairs(pairs, args.format)


def cmd_scheme(args):
    net = _load(args.net)
    g = _scheme_gains(net, args.scheme, args.gains)
    s = destination_snr(net, g)
    pairs = [("scheme", args.scheme)] + _gain_pairs(g)
    pairs += [("signal_power", s.signal_power), ("upper_layer_noise", s.upper_layer_noise),
              ("dest_noise", s.dest_noise), ("snr", s.snr), ("rate", s.rate)]
    pairs += [(f"noise[{k}]", v) for k, v in s.per_source_noise.items()]
    lay = _layered(net)
    if lay.L == 2:
        pairs += _certificate_pairs(lay)
    return render_pairs(pairs, args.format)


def _certificate_pairs(net):
    c = gap_certificate(net)
    return [("dominance", c.dominance.kind.value), ("w_scheme1", c.dominance.w1),
            ("w_scheme2", c.dominance.w2), ("certified_scheme", c.scheme),
            ("certified_rate", c.rate), ("bound_name", c.bound_name), ("bound", c.bound),
            ("gap", c.gap), ("epsilon", c.epsilon), ("holds", c.holds)]


def cmd_certify(args):
    net = _layered(_load(args.net))
    if net.L != 2:
        raise NetworkError("certify needs a two-hop network (L = 2)")
    classify_dominance(net)
    return render_pairs(_certificate_pairs(net), args.format)


def _sweep_rows(text, param, grid, kind, l0):
    def family(v):
        return _layered(parse_network(text, {param: float(v)}))

    if kind == "bounds":
        rows = high_snr_gap_sweep(family, grid, l0)
        return SWEEP_HEADER, [r.csv_fields() for r in rows]
    rows = []
    for v in grid:
        try:
            net = family(v)
        except DisconnectedError:
            # no source-destination path at this point: every rate is 0
            rows.append((float(v), 0.0, 0.0, 0.0, 0.0))
            continue
        if net.L != 2:
            raise NetworkError("--kind schemes needs a two-hop network (L = 2)")
        rates = [achievable_rate(net, f(net)) for f in
                 (scheme_max_gain, scheme_pseudo_optimal, scheme_selection)]
        rows.append((float(v), *rates, anc_upper_bound(net).r_up))
    return (param, "scheme1", "scheme2", "scheme3", "R_up"), rows


def cmd_sweep(args):
    text = _read(args.net)
    lo, hi, steps = args.range
    grid = np.linspace(lo, hi, steps)
    header, rows = _sweep_rows(text, args.param, grid, args.kind, args.l0)
    if args.plot:
        from .plotting import plot_table
        plot_table(header, rows, args.plot, title=f"sweep over {args.param}")
    return render_table(header, rows, args.format)


def cmd_mac_region(args):
    mac = _load(args.net)
    if not isinstance(mac, TwoHopMac):
        raise NetworkError("mac-region needs a mac2 network")
    names = [s.strip() for s in args.schemes.split(",") if s.strip()]
    bad = [s for s in names if s not in MAC_SCHEMES]
    if bad or not names:
        raise UsageError(f"--schemes takes a comma list from {', '.join(MAC_SCHEMES)}")
    frame = theta_frame(mac)
    allg = default_schemes(mac, frame)
    chosen = {k: allg[k] for k in names}
    inner = dynamic_inner_region(mac, chosen)
    o1 = outer_boundary_1(frame, args.resolution)
    o2 = pentagon_polyline(outer_bound_2(mac), "outer2")
    outer = outer_bound_intersection(mac, args.resolution)
    polys = (inner, o1, o2, outer)
    rows = [(p.label, x, y) for p in polys for x, y in p.points]
    gaps = region_gaps(inner, outer)
    dom = classify_mac_dominance(mac)
    summary = {
        "alpha": float(frame.alpha), "beta": float(frame.beta),
        "theta_sum": float(theta_sum_opt(frame)),
        "dominance": dom.kind, "noise": {k: float(v) for k, v in dom.noise.items()},
        "gaps": {"R1": gaps[0], "R2": gaps[1], "sum": gaps[2]},
        "schemes": {k: dict(g.gains) for k, g in chosen.items()},
        "resolution": args.resolution,
    }
    block = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    target = args.summary or (args.out + ".json" if args.out else None)
    if target:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(block)
    else:
        sys.stderr.write(block)
    if args.plot:
        from .plotting import plot_regions
        plot_regions(polys, args.plot, title=mac.name)
    return render_table(("curve", "R1", "R2"), rows, args.format)


def cmd_oracle(args):
    net = _load(args.net)
    res = grid_search_best_gains(net, args.grid, args.rounds)
    sim = monte_carlo_sim(net, res.gains, SimConfig(args.samples, args.seed))
    pairs = [("grid_snr", res.snr), ("grid_rate", res.rate),
             ("closed_form_snr", destination_snr(net, res.gains).snr),
             ("mc_snr", sim.snr), ("mc_rate", rate_from_snr(sim.snr)),
             ("evaluations", res.evaluations)]
    if isinstance(net, LayeredNetwork) or _is_layered(net):
        pairs.append(("R_up", anc_upper_bound(_layered(net)).r_up))
    pairs += _gain_pairs(res.gains)
    return render_pairs(pairs, args.format)


def _is_layered(net):
    try:
        as_layered(net)
    except NetworkError:
        return False
    return True


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the CSV/text output here instead of stdout")
    common.add_argument("--seed", type=_seed, default=0, help="RNG seed (unsigned 64-bit)")
    common.add_argument("--format", choices=("csv", "text"), default="csv")

    p = argparse.ArgumentParser(prog="ancrate", description=__doc__)
    p.add_argument("--version", action="version", version=f"ancrate {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bounds", parents=[common], help="per-layer upper bounds and lower bounds")
    s.add_argument("net")
    s.add_argument("--numeric", action="store_true", help="also run the numeric cut bound")
    s.set_defaults(func=cmd_bounds)

    for name, func, hlp in (("rate", cmd_rate, "rate of one scheme"),
                            ("scheme", cmd_scheme, "gains, SNR breakdown and certificate")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("net")
        s.add_argument("--scheme", default="max", help="max, pseudo, select, mixed:l0 or file")
        s.add_argument("--gains", help="JSON gains file for --scheme file")
        s.set_defaults(func=func)

    s = sub.add_parser("certify", parents=[common], help="two-hop noise dominance and gap certificate")
    s.add_argument("net")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", parents=[common], help="sweep a template parameter")
    s.add_argument("net")
    s.add_argument("--param", required=True)
    s.add_argument("--range", type=_range, required=True, help="lo:hi:steps")
    s.add_argument("--kind", choices=("schemes", "bounds"), default="schemes")
    s.add_argument("--l0", type=int, help="anchor layer for --kind bounds (default: best)")
    s.add_argument("--plot", help="also render a PNG figure here")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("mac-region", parents=[common], help="two-hop MAC inner and outer regions")
    s.add_argument("net")
    s.add_argument("--schemes", default=",".join(MAC_SCHEMES))
    s.add_argument("--resolution", type=int, default=2048)
    s.add_argument("--summary", help="JSON summary path (default: <out>.json, else stderr)")
    s.add_argument("--plot", help="also render a PNG figure here")
    s.set_defaults(func=cmd_mac_region)

    s = sub.add_parser("oracle", parents=[common], help="grid search and Monte-Carlo check")
    s.add_argument("net")
    s.add_argument("--grid", type=int, default=17, help="grid points per dimension")
    s.add_argument("--rounds", type=int, default=3, help="refinement rounds")
    s.add_argument("--samples", type=int, default=100_000)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _emit(args.func(args), args.out)
    except UsageError as exc:
        print(f"ancrate: usage error: {exc}", file=sys.stderr)
        return 2
    except (NetworkError, ValueError, OSError) as exc:
        print(f"ancrate: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

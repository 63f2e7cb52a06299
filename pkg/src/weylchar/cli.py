"""Command-line front end: deterministic, machine-readable runs.

Every successful run emits a single document (JSON by default) embedding
the resolved configuration, so a run can be reproduced from its own
output.  Exit codes: 0 success, 2 parse/configuration, 3 capacity,
4 domain.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import asymptotics, charcalc, spectral
from .errors import ConfigError, WeylcharError
from .rootsys import RootSystem, build_root_system, weyl_order
from .torus import TorusPoint, exact_point, float_point
from .weylgroup import generate_weyl_group

_PI_ENTRY = re.compile(r"^([+-]?)(\d+)?(?:/(\d+))?\*?pi(?:/(\d+))?$")


def parse_group(text: str) -> list[RootSystem]:
    """Parse "A2" or a product like "A1xA1" into root-system factors."""
    parts = text.replace("X", "x").split("x")
    try:
        return [build_root_system(p.strip()) for p in parts if p.strip()]
    except WeylcharError:
        raise
    except Exception as exc:
        raise ConfigError(f"cannot parse group {text!r}: {exc}") from exc


def parse_point_entry(text: str):
    """One coordinate: exact Fraction (units of pi) or float radians."""
    text = text.strip().lower()
    m = _PI_ENTRY.match(text)
    if m:
        sign, num, den1, den2 = m.groups()
        if den1 and den2:
            raise ConfigError(f"malformed pi entry {text!r}")
        val = Fraction(int(num) if num else 1, int(den1 or den2 or 1))
        return -val if sign == "-" else val
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse torus coordinate {text!r}") from None


def parse_point(text: str, ambient_dim: int) -> TorusPoint:
    """Colon-separated coordinates; any decimal makes the point floating."""
    entries = [parse_point_entry(e) for e in text.split(":") if e.strip()]
    if ambient_dim == 2 and len(entries) == 1:
        # SU(2) convenience: a single theta is the point dual to it
        theta = entries[0]
        entries = [theta / 2, -theta / 2] if isinstance(theta, Fraction) else [
            theta / 2.0,
            -theta / 2.0,
        ]
    if len(entries) != ambient_dim:
        raise ConfigError(
            f"point has {len(entries)} coordinates; ambient space needs {ambient_dim}"
        )
    if all(isinstance(e, Fraction) for e in entries):
        return exact_point(entries)
    return float_point([float(e) if not isinstance(e, Fraction) else math.pi * float(e)
                        for e in entries])


def parse_weight(text: str, factors: list[RootSystem], basis: str):
    """Fundamental coordinates (comma list per total rank) or ambient rationals."""
    entries = [e.strip() for e in text.split(",") if e.strip()]
    total_rank = sum(rs.rank for rs in factors)
    total_dim = sum(rs.ambient_dim for rs in factors)
    if basis == "auto":
        basis = "ambient" if (len(entries) == total_dim != total_rank
                              or any("/" in e for e in entries)) else "fundamental"
    out = []
    if basis == "fundamental":
        if len(entries) != total_rank:
            raise ConfigError(
                f"expected {total_rank} fundamental coordinates, got {len(entries)}"
            )
        pos = 0
        for rs in factors:
            coeffs = [Fraction(e) for e in entries[pos: pos + rs.rank]]
            pos += rs.rank
            out.append(rs.weight_from_fundamental(coeffs))
    elif basis == "ambient":
        if len(entries) != total_dim:
            raise ConfigError(
                f"expected {total_dim} ambient coordinates, got {len(entries)}"
            )
        pos = 0
        for rs in factors:
            out.append(tuple(Fraction(e) for e in entries[pos: pos + rs.ambient_dim]))
            pos += rs.ambient_dim
    else:
        raise ConfigError(f"unknown weight basis {basis!r}")
    return out


@dataclass
class RunConfig:
    """Fully resolved, reproducible description of one CLI run."""

    subcommand: str
    group: str
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"subcommand": self.subcommand, "group": self.group, **self.options}


def _fmt_fraction_vec(v):
    return [str(Fraction(x)) for x in v]


def _point_str(h: TorusPoint) -> dict:
    if h.exact:
        return {"exact": True, "coords_pi": [str(c) for c in h.coords]}
    return {"exact": False, "coords_radians": list(h.coords)}


# ---------------------------------------------------------------------------
# Subcommand implementations: each returns (result_dict, csv_rows)
# ---------------------------------------------------------------------------


def _run_roots(cfg: RunConfig, factors):
    if len(factors) != 1:
        raise ConfigError("roots takes a single simple group")
    doc = factors[0].to_json_dict()
    rows = [["kind", "index", "coords"]]
    for i, r in enumerate(doc["simple_roots"]):
        rows.append(["simple", i, " ".join(r)])
    for i, r in enumerate(doc["positive_roots"]):
        rows.append(["positive", i, " ".join(r)])
    return doc, rows


def _run_weyl(cfg: RunConfig, factors):
    if len(factors) != 1:
        raise ConfigError("weyl takes a single simple group")
    rs = factors[0]
    order = weyl_order(rs.spec)
    result = {"order": order, "rank": rs.rank, "generators": rs.rank}
    if cfg.options.get("enumerate"):
        group = generate_weyl_group(rs, cfg.options.get("cap_weyl"))
        result["enumerated"] = group.order
    rows = [["order", "rank"], [order, rs.rank]]
    return result, rows


def _run_dim(cfg: RunConfig, factors, weights):
    total = 1
    per = []
    for rs, lam in zip(factors, weights):
        d = charcalc.dim_irrep(rs, lam)
        per.append(d)
        total *= d
    result = {"dim": total, "factor_dims": per,
              "weights_ambient": [_fmt_fraction_vec(w) for w in weights]}
    rows = [["dim"], [total]]
    return result, rows


def _run_char(cfg: RunConfig, factors, weights, points):
    value = 1 + 0j
    condition = 0.0
    total_dim = 1
    deg_count = 0
    for rs, lam, h in zip(factors, weights, points):
        cv = charcalc.character(rs, lam, h)
        d = charcalc.dim_irrep(rs, lam)
        split = rs.degenerate_split(h if h.exact else charcalc.snap_to_exact(rs, h)
                                    if charcalc.is_near_singular(rs, h) else h)
        deg_count += len(split.deg)
        condition = abs(value) * cv.condition + abs(cv.value) * condition
        value *= cv.value
        total_dim *= d
    result = {
        "value": {"re": value.real, "im": value.imag},
        "dim": total_dim,
        "degenerate_roots": deg_count,
        "condition": condition,
        "normalized_abs": abs(value) / total_dim,
    }
    rows = [["re", "im", "dim", "degenerate_roots", "condition"],
            [value.real, value.imag, total_dim, deg_count, condition]]
    return result, rows


def _run_sweep(cfg: RunConfig, factors, weights, points):
    ks = cfg.options["schedule"]
    if cfg.options.get("counterexample"):
        carrier = cfg.options.get("carrier", 0)
        rep = asymptotics.nonsimple_counterexample(
            factors, carrier, points[carrier], max(ks),
            grow_all=cfg.options.get("grow_all", False),
        )
    else:
        if len(factors) != 1:
            raise ConfigError("plain sweeps take a single simple group")
        path = asymptotics.WeightPath.ray(factors[0], weights[0], ks)
        rep = asymptotics.normalized_char_sweep(factors[0], path, points[0])
    entries = [
        {"k": k, "dim": d, "ratio_abs": r,
         "bound": (rep.bound_constant / asymptotics.weight_inf_norm(lam)
                   if rep.bound_constant else None)}
        for k, lam, d, r in rep.entries
    ]
    result = {
        "entries": entries,
        "fitted_slope": rep.fitted_slope,
        "bound_constant": rep.bound_constant,
        "identity_stratum": rep.identity_stratum,
    }
    if cfg.options.get("plot_data"):
        result["plot_data"] = [
            [math.log(e["k"]), math.log(e["ratio_abs"])]
            for e in entries if e["k"] and e["ratio_abs"] > 0
        ]
    rows = [["k", "dim", "ratio_abs", "bound"]]
    for e in entries:
        rows.append([e["k"], e["dim"], e["ratio_abs"], e["bound"]])
    return result, rows


def _run_certificate(cfg: RunConfig, factors, weights, points):
    if len(factors) != 1:
        raise ConfigError("certificates are defined for a single simple group")
    rs = factors[0]
    split = rs.degenerate_split(points[0])
    cert = asymptotics.divergence_certificate(rs, split, weights[0])
    result = {
        "root": _fmt_fraction_vec(cert.root),
        "growth": str(cert.growth),
        "base_pairing": str(cert.base_pairing),
        "construction": cert.construction,
        "chain": list(cert.chain),
        "degenerate_roots": len(split.deg),
    }
    rows = [["construction", "root", "growth"],
            [cert.construction, " ".join(result["root"]), result["growth"]]]
    return result, rows


def _run_spectral(cfg: RunConfig, factors, weights):
    if len(factors) != 1:
        raise ConfigError("spectral takes a single simple group")
    rs = factors[0]
    gens_src = cfg.options.get("gens", "catalog")
    if gens_src == "catalog":
        gens = spectral.catalog_su2_free_pair()
        if rs.spec.name != "A1":
            raise ConfigError("the shipped catalog pair lives in SU(2); pass --gens")
    else:
        gens = spectral.load_generator_set(gens_src)
        if gens.dim != rs.ambient_dim:
            raise ConfigError(
                f"generators act on C^{gens.dim} but {rs.spec.name} needs "
                f"C^{rs.ambient_dim}"
            )
    est = spectral.spectrum_estimate(
        rs, weights[0], gens, cfg.options["moments"],
        n_samples=cfg.options.get("sample"), seed=cfg.options.get("seed"),
    )
    rows = [["m", "moment", "km", "abs_diff"]]
    moments = []
    for m, v, err in est.moments:
        km = float(spectral.km_moment(gens.size, m))
        moments.append({"m": m, "moment": v, "stderr": err, "km": km,
                        "abs_diff": abs(v - km)})
        rows.append([m, v, km, abs(v - km)])
    dopt = spectral.delta_opt(gens.size)
    nest = spectral.norm_estimate(est)
    result = {
        "moments": moments,
        "s": gens.size,
        "free": gens.free,
        "delta_opt": dopt,
        "norm_estimate": nest,
    }
    if not gens.symmetric:
        result["warning"] = (
            "generator set is not symmetric: the Kesten-McKay comparison "
            "columns are informational only"
        )
    rows.append(["delta_opt", dopt, "", ""])
    rows.append(["norm_estimate", nest, "", ""])
    return result, rows


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def run(cfg: RunConfig) -> dict:
    """Execute a resolved configuration and return the output document."""
    factors = parse_group(cfg.group)
    weights = points = None
    if "weight" in cfg.options and cfg.options["weight"] is not None:
        weights = parse_weight(cfg.options["weight"], factors,
                               cfg.options.get("weight_basis", "auto"))
    if "point" in cfg.options and cfg.options["point"] is not None:
        texts = cfg.options["point"].split(";")
        if len(texts) == 1 and len(factors) > 1:
            raise ConfigError("product groups need one point per factor, ';'-separated")
        points = [parse_point(t, rs.ambient_dim) for t, rs in zip(texts, factors)]
        if len(points) != len(factors):
            raise ConfigError("need one torus point per group factor")

    sub = cfg.subcommand
    if sub == "roots":
        result, rows = _run_roots(cfg, factors)
    elif sub == "weyl":
        result, rows = _run_weyl(cfg, factors)
    elif sub == "dim":
        result, rows = _run_dim(cfg, factors, weights)
    elif sub == "char":
        result, rows = _run_char(cfg, factors, weights, points)
    elif sub == "sweep":
        if weights is None:
            weights = [rs.weyl_vector for rs in factors]
        result, rows = _run_sweep(cfg, factors, weights, points)
    elif sub == "certificate":
        result, rows = _run_certificate(cfg, factors, weights, points)
    elif sub == "spectral":
        result, rows = _run_spectral(cfg, factors, weights)
    else:  # pragma: no cover
        raise ConfigError(f"unknown subcommand {sub!r}")
    return {"config": cfg.to_dict(), "result": result, "_csv_rows": rows}


def render(doc: dict, fmt: str) -> str:
    rows = doc.pop("_csv_rows", None)
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows:
            writer.writerow(row)
        return buf.getvalue()
    if fmt == "table":
        widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
        lines = [
            "  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip()
            for row in rows
        ]
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="weylchar",
        description="Exact Weyl characters, decay sweeps, and spectral moments.",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, weight=False, point=False):
        sp.add_argument("--group", required=True,
                        help="e.g. A2, G2, or a product like A1xA1")
        sp.add_argument("--format", default="json", choices=("json", "csv", "table"))
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1,
                        help="worker hint; never changes output bytes")
        sp.add_argument("--cap-weyl", type=int, default=None,
                        help="override the Weyl-group order cap")
        if weight:
            sp.add_argument("--weight", default=None,
                            help="fundamental coords '1,1' or ambient rationals")
            sp.add_argument("--weight-basis", default="auto",
                            choices=("auto", "fundamental", "ambient"))
        if point:
            sp.add_argument("--point", default=None,
                            help="colon-separated coords: 'pi/5:pi/5:-2pi/5' or decimals")

    common(sub.add_parser("roots", help="root system data as canonical JSON"))
    sp = sub.add_parser("weyl", help="Weyl group order diagnostics")
    common(sp)
    sp.add_argument("--enumerate", action="store_true")
    sp = sub.add_parser("dim", help="irreducible dimension")
    common(sp, weight=True)
    sp = sub.add_parser("char", help="character value at a torus point")
    common(sp, weight=True, point=True)
    sp = sub.add_parser("sweep", help="normalized character decay sweep")
    common(sp, weight=True, point=True)
    sp.add_argument("--kmax", type=int, default=20)
    sp.add_argument("--schedule", default=None,
                    help="explicit comma list of k values (default 1..kmax)")
    sp.add_argument("--counterexample", action="store_true",
                    help="product-group harness: trivial rep on the carrier")
    sp.add_argument("--carrier", type=int, default=0)
    sp.add_argument("--grow-all", action="store_true")
    sp.add_argument("--plot-data", action="store_true")
    sp = sub.add_parser("certificate", help="divergence certificate for a stratum")
    common(sp, weight=True, point=True)
    sp = sub.add_parser("spectral", help="averaging-operator moments vs Kesten-McKay")
    common(sp, weight=True)
    sp.add_argument("--l", type=str, default=None,
                    help="SU(2) spin; shorthand for --weight 2l")
    sp.add_argument("--gens", default="catalog",
                    help="generator JSON path, or 'catalog' for the free pair")
    sp.add_argument("--moments", type=int, default=6)
    sp.add_argument("--sample", type=int, default=None,
                    help="Monte Carlo sample count for moments beyond the cap")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    # --threads is an execution hint, deliberately absent from the resolved
    # config: documents must be byte-identical across thread counts.
    opts = {}
    for key in ("format", "seed", "cap_weyl", "weight", "weight_basis",
                "point", "kmax", "schedule", "counterexample", "carrier",
                "grow_all", "plot_data", "enumerate", "l", "gens", "moments",
                "sample"):
        if hasattr(args, key) and getattr(args, key) is not None:
            opts[key] = getattr(args, key)
    cfg = RunConfig(args.subcommand, args.group, opts)
    if cfg.subcommand == "sweep":
        if opts.get("schedule"):
            cfg.options["schedule"] = [int(k) for k in str(opts["schedule"]).split(",")]
        else:
            cfg.options["schedule"] = list(range(1, opts.get("kmax", 20) + 1))
    if cfg.subcommand == "spectral":
        if opts.get("l") is not None:
            two_l = Fraction(str(opts["l"])) * 2
            if two_l.denominator != 1:
                raise ConfigError("--l must be a half-integer")
            cfg.options["weight"] = str(int(two_l))
        if opts.get("sample") is not None and opts.get("seed") is None:
            raise ConfigError("sampling requires --seed for reproducibility")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        doc = run(cfg)
        sys.stdout.write(render(doc, cfg.options.get("format", "json")))
        return 0
    except WeylcharError as exc:
        err = {
            "error": {
                "code": type(exc).__name__,
                "message": str(exc),
                "field": getattr(exc, "field", None),
            }
        }
        sys.stdout.write(json.dumps(err, sort_keys=True, indent=2) + "\n")
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

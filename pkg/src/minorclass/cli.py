"""Command-line front door.

Subcommands: enumerate, census, constants, sample, stats, pendant,
families-check, verify.  Exit codes: 0 success, 2 configuration error,
3 resource cap exceeded, 4 verification failure.

Every command is a deterministic function of its configuration and seed;
floating-point output uses 12 significant digits, exact values print as
integers or fractions.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from fractions import Fraction

from .errors import EmptySliceError, ResourceCapError
from .families import family_from_spec
from .graphs import Graph, RootedGraph, Weighting, graph_from_text, pendant_appearances, \
    overlapping_pendant_appearances


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, Fraction)):
        return str(x)
    return f"{x:.12g}"


def parse_number(s: str):
    """Parse an int, a fraction like 1/2, or a float."""
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        pass
    if "/" in s:
        return Fraction(s)
    return float(s)


@dataclasses.dataclass
class ExperimentConfig:
    """Flat bag of experiment options; JSON round-trips exactly."""

    family: str = "forests"
    lam: str = "1"
    nu: str = "1"
    lambda0: str | None = None
    lambda1: str | None = None
    n: int | None = None
    n_max: int = 6
    cap: int = 7
    census_n_max: int = 6
    rho: str | None = None
    gamma: str | None = None
    method: str = "exact"
    draws: int = 1000
    steps: int | None = None
    burn_in: int = 100000
    thin: int = 10
    seed: int = 0
    threads: int = 1
    minor_budget: int = 10_000_000
    out: str | None = None

    def render(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(data) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        return cls(**data)

    def weighting(self) -> Weighting:
        if self.lambda0 is not None or self.lambda1 is not None:
            if self.lambda0 is None or self.lambda1 is None:
                raise ValueError("lambda0 and lambda1 must be given together")
            return Weighting.extended(parse_number(self.lambda0), parse_number(self.lambda1),
                                      parse_number(self.nu))
        return Weighting(parse_number(self.lam), parse_number(self.nu))


def _merge_config(args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = ExperimentConfig.parse(fh.read())
    else:
        cfg = ExperimentConfig()
    for f in dataclasses.fields(ExperimentConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            setattr(cfg, f.name, val)
    return cfg


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# -- subcommands ----------------------------------------------------------------


def cmd_enumerate(cfg: ExperimentConfig) -> int:
    from .enumeration import compute_weight_table, forest_table

    fam = family_from_spec(cfg.family)
    w = cfg.weighting()
    if cfg.n_max > cfg.cap and fam.predicate is not None and fam.name in ("forests", "trees"):
        table = forest_table(w, cfg.n_max)
    else:
        table = compute_weight_table(fam, w, cfg.n_max, cap=cfg.cap, threads=cfg.threads,
                                     verbose=True)
    ratios = table.ratios("a")
    growth = table.growth_estimates("a")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "a_n", "c_n", "b_n", "r_n", "growth_estimate"])
    for n in range(table.n_max + 1):
        r = ratios[n]
        writer.writerow([
            n, _fmt(table.a[n]), _fmt(table.c[n]), _fmt(table.b[n]),
            _fmt(float(r)) if r is not None else "",
            _fmt(growth[n]) if growth[n] is not None else "",
        ])
    _write_text(cfg.out, buf.getvalue())
    return 0


def cmd_census(cfg: ExperimentConfig) -> int:
    from .enumeration import build_census

    fam = family_from_spec(cfg.family)
    census = build_census(fam, cfg.census_n_max, cap=max(cfg.cap, cfg.census_n_max))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["code", "v", "e", "kappa", "aut"])
    for en in census.entries:
        writer.writerow([en.code.hex, en.v, en.e, en.kappa, en.aut])
    _write_text(cfg.out, buf.getvalue())
    return 0


def cmd_constants(cfg: ExperimentConfig) -> int:
    from .asymptotics import constants_from_gamma, forest_limit_pack, planar_constants
    from .enumeration import build_census, compute_weight_table

    w = cfg.weighting()
    if cfg.family == "planar-preset":
        consts = planar_constants()
        out = consts.to_dict()
        out["tolerances"] = {"beta": 1e-4, "alpha": 1e-5, "core_conn": 1e-5}
        _write_text(cfg.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
        return 0
    fam = family_from_spec(cfg.family)
    census = None
    if cfg.census_n_max > 0:
        census = build_census(fam, cfg.census_n_max, cap=max(cfg.cap, cfg.census_n_max))
    if cfg.gamma is not None:
        gamma = float(parse_number(cfg.gamma))
        estimate_note = "gamma supplied"
    else:
        table = compute_weight_table(fam, w, cfg.n_max, cap=cfg.cap, threads=cfg.threads)
        ratios = table.ratios("a")
        last = ratios[table.n_max]
        if last is None:
            raise ValueError("cannot estimate gamma: vanishing counts")
        gamma = 1.0 / float(last)
        estimate_note = f"gamma estimated from the ratio at n={table.n_max}"
    consts = constants_from_gamma(gamma, w, census=census)
    out = consts.to_dict()
    out["note"] = estimate_note
    if fam.name in ("forests", "trees"):
        pack = forest_limit_pack(w)
        out["forest_closed_forms"] = {
            "conn_limit": pack.conn_limit,
            "frag_mean_limit": pack.frag_mean_limit,
            "kappa_mean_limit": pack.kappa_mean_limit,
        }
    _write_text(cfg.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def _graph_to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]})


def graph_from_json(line: str) -> Graph:
    data = json.loads(line)
    return Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]])


def cmd_sample(cfg: ExperimentConfig) -> int:
    from .enumeration import build_census
    from .sampling import boltzmann_config, boltzmann_poisson_sample, exact_sample, \
        mcmc_sample, random_tree_sample

    w = cfg.weighting()
    n = cfg.n if cfg.n is not None else 6
    if cfg.method == "tree":
        samples = random_tree_sample(n, cfg.seed, cfg.draws)
    elif cfg.method == "exact":
        fam = family_from_spec(cfg.family)
        samples = exact_sample(fam, w, n, cfg.seed, cfg.draws, cap=cfg.cap)
    elif cfg.method == "mcmc":
        fam = family_from_spec(cfg.family)
        draws = cfg.draws
        if cfg.steps is not None:
            # a total step budget implies the draw count at the given thinning
            draws = max(0, (cfg.steps - cfg.burn_in) // cfg.thin)
        samples = mcmc_sample(fam, w, n, draws, burn_in=cfg.burn_in,
                              thin=cfg.thin, seed=cfg.seed)
    elif cfg.method == "boltzmann":
        fam = family_from_spec(cfg.family)
        census = build_census(fam, cfg.census_n_max, cap=max(cfg.cap, cfg.census_n_max))
        if cfg.rho is not None:
            rho = float(parse_number(cfg.rho))
        elif fam.name in ("forests", "trees"):
            rho = 1.0 / (math.e * float(w.lambda0))
        else:
            raise ValueError("boltzmann sampling needs --rho for this family")
        bc = boltzmann_config(census, rho, w)
        samples = boltzmann_poisson_sample(bc, cfg.seed, cfg.draws)
    else:
        raise ValueError(f"unknown sampling method {cfg.method!r}")
    lines = "\n".join(_graph_to_json(g) for g in samples)
    _write_text(cfg.out, lines + "\n")
    return 0


def cmd_stats(cfg: ExperimentConfig, infile: str) -> int:
    from .sampling import collect_stats

    with open(infile) as fh:
        samples = [graph_from_json(line) for line in fh if line.strip()]
    stats = collect_stats(samples)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["statistic", "key", "value"])
    writer.writerow(["draws", "", stats.draws])
    writer.writerow(["conn_freq", "", _fmt(stats.conn_freq)])
    writer.writerow(["core_frac_mean", "", _fmt(stats.core_frac_mean)])
    for k in sorted(stats.kappa_hist):
        writer.writerow(["kappa_hist", k, stats.kappa_hist[k]])
    for k in sorted(stats.frag_hist):
        writer.writerow(["frag_hist", k, stats.frag_hist[k]])
    for code in sorted(stats.comp_counts):
        hist = stats.comp_count_histogram(code)
        for k in sorted(hist):
            writer.writerow(["comp_count", f"{code}:{k}", hist[k]])
    _write_text(cfg.out, buf.getvalue())
    return 0


def cmd_pendant(cfg: ExperimentConfig, graph_path: str, h_path: str, root: int) -> int:
    from .asymptotics import pendant_limit

    with open(graph_path) as fh:
        g = graph_from_text(fh.read())
    with open(h_path) as fh:
        h = RootedGraph(graph_from_text(fh.read()), root)
    out = {
        "f_H": pendant_appearances(g, h),
        "f_H_overlapping": overlapping_pendant_appearances(g, h),
        "density": pendant_appearances(g, h) / g.n if g.n else None,
    }
    if cfg.gamma is not None:
        out["limit_density"] = pendant_limit(h, float(parse_number(cfg.gamma)), cfg.weighting())
    _write_text(cfg.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_families_check(cfg: ExperimentConfig, k_max: int) -> int:
    from .families import dichotomy_scan, verify_bridge_addable, verify_decomposable, \
        verify_trimmable

    fam = family_from_spec(cfg.family)
    fam.minor_budget = cfg.minor_budget
    n_max = cfg.n_max
    reports = {
        "bridge_addable": verify_bridge_addable(fam, n_max),
        "decomposable": verify_decomposable(fam, n_max),
        "trimmable": verify_trimmable(fam, n_max),
    }
    out = {"family": fam.name, "n_max": n_max}
    for key, rep in reports.items():
        out[key] = {
            "holds": rep.holds,
            "counterexample": repr(rep.counterexample) if rep.counterexample else None,
            "details": rep.details,
        }
    scan = dichotomy_scan(fam, min(n_max, 4), k_max)
    out["dichotomy"] = [
        {"graph": repr(en.rep), "class": en.classification, "k": en.limited_k}
        for en in scan
    ]
    declared = {
        "bridge_addable": fam.flags.bridge_addable,
        "decomposable": fam.flags.decomposable,
        "addable": fam.flags.addable,
        "trimmable": fam.flags.trimmable,
    }
    out["declared_flags"] = declared
    _write_text(cfg.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify(cfg: ExperimentConfig, suites: list[str]) -> int:
    from .acceptance import run_criteria

    results = run_criteria(suites if suites else None)
    lines = []
    for r in results:
        brief = ", ".join(
            f"{k}={_fmt(v) if isinstance(v, (int, float)) else v}"
            for k, v in list(r.measured.items())[:3]
        )
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.key}  [{brief}]")
    report = {"results": [r.to_dict() for r in results],
              "passed": all(r.passed for r in results)}
    if cfg.out:
        _write_text(cfg.out, json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if report["passed"] else 4


# -- argument wiring -------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file with ExperimentConfig fields")
    p.add_argument("--threads", type=int, help="worker threads for enumeration sweeps")
    p.add_argument("--seed", type=int, help="64-bit RNG seed")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minorclass",
                                 description="weighted random graphs from minor-closed classes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exact weighted counts a_n, c_n, b_n as CSV")
    p.add_argument("--family")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--nu")
    p.add_argument("--lambda0")
    p.add_argument("--lambda1")
    p.add_argument("--nmax", dest="n_max", type=int)
    p.add_argument("--cap", type=int)
    _add_common(p)

    p = sub.add_parser("census", help="unlabelled connected-member census as CSV")
    p.add_argument("--family")
    p.add_argument("--nmax", dest="census_n_max", type=int)
    p.add_argument("--cap", type=int)
    _add_common(p)

    p = sub.add_parser("constants", help="asymptotic constants as JSON")
    p.add_argument("--family")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--nu")
    p.add_argument("--gamma")
    p.add_argument("--nmax", dest="n_max", type=int)
    p.add_argument("--census-nmax", dest="census_n_max", type=int)
    p.add_argument("--cap", type=int)
    _add_common(p)

    p = sub.add_parser("sample", help="draw graphs; one JSON graph per output line")
    p.add_argument("--family")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--nu")
    p.add_argument("--n", type=int)
    p.add_argument("--method", choices=["exact", "boltzmann", "mcmc", "tree"])
    p.add_argument("--draws", type=int)
    p.add_argument("--steps", type=int, help="total mcmc steps (overrides --draws)")
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--thin", type=int)
    p.add_argument("--rho")
    p.add_argument("--census-nmax", dest="census_n_max", type=int)
    p.add_argument("--cap", type=int)
    _add_common(p)

    p = sub.add_parser("stats", help="histograms of a JSONL sample file as CSV")
    p.add_argument("--in", dest="infile", required=True)
    _add_common(p)

    p = sub.add_parser("pendant", help="pendant appearance counts of H in G")
    p.add_argument("--graph", required=True)
    p.add_argument("--h", dest="h_graph", required=True)
    p.add_argument("--root", type=int, default=1)
    p.add_argument("--gamma")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--nu")
    _add_common(p)

    p = sub.add_parser("families-check", help="bounded-scale closure-property verification")
    p.add_argument("--family")
    p.add_argument("--nmax", dest="n_max", type=int)
    p.add_argument("--kmax", dest="k_max", type=int, default=4)
    p.add_argument("--minor-budget", dest="minor_budget", type=int)
    _add_common(p)

    p = sub.add_parser("verify", help="run acceptance criteria (default: all)")
    p.add_argument("suites", nargs="*", help="criterion names, or empty for all")
    _add_common(p)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.command == "enumerate":
            return cmd_enumerate(cfg)
        if args.command == "census":
            return cmd_census(cfg)
        if args.command == "constants":
            return cmd_constants(cfg)
        if args.command == "sample":
            return cmd_sample(cfg)
        if args.command == "stats":
            return cmd_stats(cfg, args.infile)
        if args.command == "pendant":
            return cmd_pendant(cfg, args.graph, args.h_graph, args.root)
        if args.command == "families-check":
            return cmd_families_check(cfg, args.k_max)
        if args.command == "verify":
            return cmd_verify(cfg, args.suites)
        raise ValueError(f"unknown command {args.command!r}")
    except ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, EmptySliceError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

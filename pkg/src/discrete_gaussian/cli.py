"""Command-line tabulation of kernels, samples, local limits, zeta values, trig sums and tori.

Exit status: 0 on success, 2 for domain errors, 3 for resource errors and 64
for malformed flags.  Output is CSV (header always present) or JSON; numbers
carry full round-trip precision and every row repeats the parameters that
produced it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, ResourceError
from .graphs import kernel_graph_row, load_graph
from .heat import TreeParams, WalkParams, kernel_circle, kernel_pq, kernel_tree, kernel_Z
from .prob import Pmf, llt_discrepancy, load_pmf, sample_Y
from .tori import asymptotic_remainder, log_det_prime
from .trig import TrigSumSpec, generating_coeffs, trig_sum_direct
from .zeta import evaluate_zeta

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64

SUBCOMMANDS = ("kernel", "sample", "llt", "zeta", "trigsum", "torus")
MAX_SAMPLES = 10**7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    output_format: str = "csv"
    output_path: str | None = None


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a..b' with integers, got {text!r}")
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(v.replace(" ", "")) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64)")
    return v


def _pmf_arg(text: str) -> str:
    kind = text.split(":", 1)[0]
    if kind not in ("uniform", "table", "file") or ":" not in text:
        raise argparse.ArgumentTypeError(
            f"expected uniform:a,b,..., table:k=p,... or file:PATH, got {text!r}")
    return text


def _build_pmf(text: str) -> Pmf:
    kind, body = text.split(":", 1)
    if kind == "uniform":
        return Pmf.uniform(int(v) for v in body.split(","))
    if kind == "table":
        table = {}
        for item in body.split(","):
            k, _, p = item.partition("=")
            table[int(k)] = float(p)
        return Pmf.from_dict(table)
    return load_pmf(body)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--seed", type=_seed, help="unsigned 64-bit seed")

    parser = _Parser(prog="discrete-gaussian", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", parents=[common], help="heat kernel values")
    p.add_argument("--domain", choices=("Z", "pq", "circle", "tree", "graph"), default="Z")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x-range", type=_int_range,
                   help="a..b (default 0..0; every vertex for graph)")
    p.add_argument("--p", type=float, help="right-step weight (pq)")
    p.add_argument("--q-w", type=float, help="left-step weight (pq)")
    p.add_argument("--n", type=int, help="circle length")
    p.add_argument("--side", choices=("spectral", "images"), default="spectral")
    p.add_argument("--q", type=int, help="tree branching number (degree q+1)")
    p.add_argument("--graph", metavar="PATH", help="edge-list file")
    p.add_argument("--origin", type=int, default=0)

    p = sub.add_parser("sample", parents=[common], help="exact draws of the walk law")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q-w", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("llt", parents=[common], help="local limit discrepancies")
    p.add_argument("--pmf", type=_pmf_arg, required=True,
                   help="uniform:-1,0,1 | table:-1=0.2,0=0.5,1=0.3 | file:PATH")
    p.add_argument("--n", type=_int_list, required=True)

    p = sub.add_parser("zeta", parents=[common], help="spectral zeta values")
    p.add_argument("--s", type=_complex_list, required=True)
    p.add_argument("--tree-q", type=int, default=1, help="1 is the integer line")

    p = sub.add_parser("trigsum", parents=[common], help="twisted trigonometric sums")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--method", choices=("generating", "direct"), default="generating")

    p = sub.add_parser("torus", parents=[common], help="torus log-determinants")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=_int_list, required=True)
    return parser


def _attach_negative_values(argv):
    # "--x-range -10..10" or "--s -1,-2": argparse would take the value for a flag
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(_attach_negative_values(list(argv)))
    params = {k: v for k, v in vars(args).items()
              if k not in ("subcommand", "seed", "format", "out")}
    config = RunConfig(args.subcommand, params, args.seed, args.format, args.out)
    if config.subcommand == "sample" and config.seed is None:
        raise UsageError("argument --seed: required for sample")
    return config


def _kernel_rows(pr):
    lo, hi = pr["x_range"] or (0, 0)
    t = pr["t"]
    domain = pr["domain"]
    echo = {"domain": domain, "t": t}
    if domain == "Z":
        return [{**echo, "x": x, "value": kernel_Z(t, x)} for x in range(lo, hi + 1)]
    if domain == "pq":
        if pr["p"] is None or pr["q_w"] is None:
            raise UsageError("argument --p/--q-w: required for --domain pq")
        w = WalkParams(pr["p"], pr["q_w"], t)
        echo.update(p=w.p, q_w=w.q_w)
        return [{**echo, "x": x, "value": kernel_pq(w, x)} for x in range(lo, hi + 1)]
    if domain == "circle":
        if pr["n"] is None:
            raise UsageError("argument --n: required for --domain circle")
        echo.update(n=pr["n"], side=pr["side"])
        return [{**echo, "x": x, "value": kernel_circle(pr["n"], t, x, side=pr["side"])}
                for x in range(lo, hi + 1)]
    if domain == "tree":
        if pr["q"] is None:
            raise UsageError("argument --q: required for --domain tree")
        if lo < 0:
            raise DomainError("tree distances must be non-negative")
        tp = TreeParams(pr["q"], t)
        echo.update(q=tp.q)
        return [{**echo, "r": r, "value": kernel_tree(tp, r)} for r in range(lo, hi + 1)]
    if pr["graph"] is None:
        raise UsageError("argument --graph: required for --domain graph")
    g = load_graph(pr["graph"])
    if not (0 <= pr["origin"] < g.vertex_count):
        raise DomainError(f"origin {pr['origin']} is not a vertex")
    row = kernel_graph_row(g, pr["origin"], t)
    echo.update(graph=pr["graph"], origin=pr["origin"])
    if pr["x_range"] is None:
        lo, hi = 0, g.vertex_count - 1
    if lo < 0 or hi >= g.vertex_count:
        raise DomainError(f"vertex range {lo}..{hi} outside 0..{g.vertex_count - 1}")
    return [{**echo, "vertex": v, "value": float(row[v])} for v in range(lo, hi + 1)]


def _sample_rows(pr, seed):
    if not 1 <= pr["count"] <= MAX_SAMPLES:
        if pr["count"] > MAX_SAMPLES:
            raise ResourceError(f"count exceeds {MAX_SAMPLES}")
        raise DomainError("count must be positive")
    w = WalkParams(pr["p"], pr["q_w"], pr["t"])
    draws = sample_Y(w, np.random.default_rng(seed), size=pr["count"])
    echo = {"p": w.p, "q_w": w.q_w, "t": w.t, "seed": seed}
    return [{**echo, "index": i, "value": int(v)} for i, v in enumerate(draws)]


def _llt_rows(pr):
    base = _build_pmf(pr["pmf"])
    rows = []
    for n in pr["n"]:
        rep = llt_discrepancy(base, n)
        rows.append({"pmf": pr["pmf"], "n": rep.n,
                     "sup_discrepancy_discrete": rep.sup_discrepancy_discrete,
                     "sup_discrepancy_continuous": rep.sup_discrepancy_continuous,
                     "argmax_m": rep.argmax_m})
    return rows


def _zeta_rows(pr):
    rows = []
    for s in pr["s"]:
        pt = evaluate_zeta(s, pr["tree_q"])
        rows.append({"tree_q": pr["tree_q"], "s_re": s.real, "s_im": s.imag,
                     "value_re": pt.value.real, "value_im": pt.value.imag,
                     "method": pt.method.value})
    return rows


def _trigsum_rows(pr):
    m, r, beta, count = pr["m"], pr["r"], pr["beta"], pr["count"]
    if pr["method"] == "generating":
        values = generating_coeffs(m, r, beta, count)
    else:
        if count < 1:
            raise DomainError("count must be positive")
        values = [trig_sum_direct(TrigSumSpec(m, r, beta, n)) for n in range(1, count + 1)]
    return [{"m": m, "r": r, "beta": beta, "method": pr["method"], "n": k + 1,
             "value_re": v.real, "value_im": v.imag} for k, v in enumerate(values)]


def _torus_rows(pr):
    d = pr["d"]
    rows = []
    for n in pr["n"]:
        rows.append({"d": d, "n": n, "log_det": log_det_prime((n,) * d),
                     "remainder": asymptotic_remainder(d, n)})
    return rows


def compute_rows(config: RunConfig) -> list[dict]:
    pr = config.params
    if config.subcommand == "kernel":
        return _kernel_rows(pr)
    if config.subcommand == "sample":
        return _sample_rows(pr, config.seed)
    if config.subcommand == "llt":
        return _llt_rows(pr)
    if config.subcommand == "zeta":
        return _zeta_rows(pr)
    if config.subcommand == "trigsum":
        return _trigsum_rows(pr)
    return _torus_rows(pr)


def _cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render(config: RunConfig, rows: list[dict]) -> str:
    if config.output_format == "json":
        meta = {"subcommand": config.subcommand, "seed": config.seed,
                "params": {k: list(v) if isinstance(v, tuple) else v
                           for k, v in config.params.items()},
                "version": __version__}
        return json.dumps({"meta": meta, "rows": rows}, default=_json_default, indent=1) + "\n"
    buf = io.StringIO()
    header = list(rows[0]) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[k]) for k in header])
    return buf.getvalue()


def _json_default(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def run(config: RunConfig) -> str:
    """Compute and render the table for ``config``."""
    return render(config, compute_rows(config))


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        text = run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if config.output_path:
        Path(config.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK

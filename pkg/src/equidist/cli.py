"""``equidist`` command line: one subcommand per family of operations.

Every JSON artifact carries a ``config`` object with the resolved run
configuration, so a result can be regenerated from its own header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import analysis, discrepancy, experiments, gcdsums, sequences

COMMANDS = ("gen", "disc", "weyl", "bound", "analyze", "gcdsum", "search", "experiment", "help")
GEN_KINDS = ("kronecker", "dilated", "geometric", "power", "digits", "champernowne", "copeland-erdos")
EXPERIMENT_KINDS = ("clt", "lil-sum", "lil-disc", "baker", "fukuyama")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    points: str | None = None
    function: str | None = None
    set: list[int] | None = None
    kind: str | None = None
    x: str | None = None
    N: int | None = None
    H: int | None = None
    J: int | None = None
    M: int | None = None
    alpha: float | None = None
    eps: float | None = None
    theta: int | None = None
    base: int | None = None
    seed: int = 0
    Ns: list[int] | None = None
    a: str | None = None
    b: str | None = None
    exponent: float = 1.5
    iterations: int = 200
    restarts: int = 4
    max_element: int | None = None
    paths: int = 1
    exact: bool = False
    format: str = "json"
    out: str | None = None
    workers: int = 1

    def header(self) -> dict:
        d = asdict(self)
        # never affect the numbers
        for k in ("out", "workers", "format"):
            d.pop(k)
        d["version"] = __version__
        return {k: v for k, v in d.items() if v is not None}


def validate(cfg: RunConfig) -> list[str]:
    """Every precondition violation of ``cfg``, not just the first."""
    errs = []
    if cfg.command not in COMMANDS:
        errs.append(f"unknown command {cfg.command!r}")
    if cfg.alpha is not None and not 0.5 <= cfg.alpha <= 1:
        errs.append("alpha must lie in [1/2,1]")
    if cfg.eps is not None and cfg.eps <= 0:
        errs.append("eps must be positive")
    if cfg.theta is not None and cfg.theta < 2:
        errs.append("theta must be at least 2")
    if cfg.base is not None and cfg.base < 2:
        errs.append("base must be at least 2")
    for name in ("N", "H", "J", "M", "iterations", "restarts", "paths"):
        v = getattr(cfg, name)
        if v is not None and v < 1:
            errs.append(f"{name} must be a positive integer")
    if cfg.set is not None:
        if not cfg.set:
            errs.append("set must not be empty")
        elif min(cfg.set) < 1:
            errs.append("set elements must be positive integers")
        elif len(set(cfg.set)) != len(cfg.set):
            errs.append("set elements must be distinct")
    if cfg.Ns is not None:
        if any(b <= a for a, b in zip(cfg.Ns, cfg.Ns[1:])):
            errs.append("Ns must be strictly increasing")
        lil = cfg.command == "experiment" and cfg.kind in ("lil-sum", "lil-disc", "fukuyama", "baker")
        if lil and cfg.Ns and min(cfg.Ns) < 16:
            errs.append("N ≥ 16 required")
    if cfg.format not in ("json", "csv"):
        errs.append("format must be json or csv")
    if cfg.workers < 1:
        errs.append("workers must be positive")
    need = {
        "disc": ["points"],
        "weyl": ["points", "H"],
        "bound": ["points", "H"],
        "gcdsum": ["set"],
        "search": ["N"],
        "gen": ["kind", "N"],
        "experiment": ["kind"],
    }.get(cfg.command, [])
    for name in need:
        if getattr(cfg, name) is None:
            errs.append(f"--{name} is required for {cfg.command}")
    if cfg.command == "search" and cfg.N is not None and cfg.N < 2:
        errs.append("search needs N >= 2")
    if cfg.command == "gen" and cfg.kind is not None and cfg.kind not in GEN_KINDS:
        errs.append(f"gen kind must be one of {', '.join(GEN_KINDS)}")
    if cfg.command == "experiment" and cfg.kind is not None and cfg.kind not in EXPERIMENT_KINDS:
        errs.append(f"experiment kind must be one of {', '.join(EXPERIMENT_KINDS)}")
    if cfg.exponent not in (0.5, 1.5):
        errs.append("exponent must be 0.5 or 1.5")
    return errs


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--workers", type=int, metavar="K")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(
        prog="equidist",
        description="Discrepancy, Weyl sums, GCD sums and lacunary-series experiments.",
    )
    p.add_argument("--version", action="version", version=f"equidist {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    g = add("gen", "generate a point set or digit stream")
    g.add_argument("--kind", required=True, choices=GEN_KINDS)
    g.add_argument("--x", help="p/q, decimal, or sqrt(n)@bits")
    g.add_argument("--N", type=int, required=True)
    g.add_argument("--theta", type=int)
    g.add_argument("--base", type=int)
    g.add_argument("--set", type=_int_list, help="dilation terms for --kind dilated")

    d = add("disc", "star and extreme discrepancy of a point file")
    d.add_argument("--points", required=True)
    d.add_argument("--exact", action="store_true", help="use rationals from a p/q point file")

    w = add("weyl", "Weyl sums for h = 1..H")
    w.add_argument("--points", required=True)
    w.add_argument("--H", type=int, required=True)

    b = add("bound", "Erdos-Turan bound (and Koksma with --function)")
    b.add_argument("--points", required=True)
    b.add_argument("--H", type=int, required=True)
    b.add_argument("--function")

    a = add("analyze", "mean, variation, Fourier data and L2 norms of a BV function")
    a.add_argument("--function", help="JSON piece list")
    a.add_argument("--kind", choices=("sawtooth", "indicator"))
    a.add_argument("--a")
    a.add_argument("--b")
    a.add_argument("--J", type=int, default=8)
    a.add_argument("--set", type=_int_list, help="dilations for the maximal L2 norm")
    a.add_argument("--N", type=int)

    s = add("gcdsum", "GCD sum of an integer set")
    s.add_argument("--set", type=_int_list, required=True)
    s.add_argument("--alpha", type=float, default=1.0)

    r = add("search", "local search for sets with a large GCD sum")
    r.add_argument("--N", type=int, required=True)
    r.add_argument("--alpha", type=float, default=1.0)
    r.add_argument("--iterations", type=int, default=200)
    r.add_argument("--restarts", type=int, default=4)
    r.add_argument("--max-element", dest="max_element", type=int)

    e = add("experiment", "limit-theorem experiments")
    e.add_argument("--kind", required=True, choices=EXPERIMENT_KINDS)
    e.add_argument("--theta", type=int, default=2)
    e.add_argument("--Ns", type=_int_list)
    e.add_argument("--N", type=int)
    e.add_argument("--M", type=int)
    e.add_argument("--eps", type=float)
    e.add_argument("--x")
    e.add_argument("--exponent", type=float, default=1.5)
    e.add_argument("--paths", type=int, default=1)

    sub.add_parser("help", help="show this message")
    return p


def _read_points(path: str) -> sequences.PointSet:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return sequences.PointSet.from_json(text)
    return sequences.PointSet.from_csv(text)


def _read_function(cfg: RunConfig) -> analysis.PeriodicBVFunction:
    if cfg.function:
        return analysis.PeriodicBVFunction.from_json(Path(cfg.function).read_text())
    if cfg.kind == "indicator":
        return analysis.centered_indicator(Fraction(cfg.a or 0), Fraction(cfg.b or "1/2"))
    return analysis.sawtooth()


def _num(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


def _run(cfg: RunConfig) -> dict:
    c = cfg.command
    if c == "gen":
        return _gen(cfg)
    if c == "disc":
        P = _read_points(cfg.points)
        return discrepancy.discrepancies(P, exact=cfg.exact).to_dict()
    if c == "weyl":
        P = _read_points(cfg.points)
        sums = [discrepancy.weyl_sum(P, h).value for h in range(1, cfg.H + 1)]
        return {"h": list(range(1, cfg.H + 1)), "re": [z.real for z in sums],
                "im": [z.imag for z in sums], "abs": [abs(z) for z in sums]}
    if c == "bound":
        P = _read_points(cfg.points)
        out = {"N": len(P), "H": cfg.H, "star": discrepancy.star_discrepancy(P),
               "erdos_turan": discrepancy.erdos_turan_bound(P, cfg.H)}
        if cfg.function:
            lhs, rhs = discrepancy.koksma_bound(_read_function(cfg), P)
            out.update(koksma_lhs=lhs, koksma_rhs=rhs)
        return out
    if c == "analyze":
        f = _read_function(cfg)
        a, b = analysis.fourier_coefficients(f, cfg.J)
        out = {"mean": _num(f.mean()), "variation": _num(f.variation()),
               "j": list(range(1, cfg.J + 1)), "a": a.tolist(), "b": b.tolist()}
        if cfg.set:
            N = cfg.N or len(cfg.set)
            D = sorted(cfg.set)
            out["l2_maximal"] = analysis.l2_maximal_norm(f, D, [1] * len(D), N)
        return out
    if c == "gcdsum":
        v = gcdsums.gcd_sum_alpha(gcdsums.IntegerSet.of(cfg.set), cfg.alpha)
        if v.exact is not None:
            return {"value": str(v.exact), "exact": True}
        return {"value": v.value, "exact": False}
    if c == "search":
        alpha = 1.0 if cfg.alpha is None else cfg.alpha
        sc = gcdsums.SearchConfig(seed=cfg.seed, iterations=cfg.iterations, restarts=cfg.restarts,
                                  max_element=cfg.max_element, workers=cfg.workers)
        res = gcdsums.extremal_search(cfg.N, alpha, sc)
        v = res.value
        return {"set": [str(e) for e in res.best.elements],
                "value": str(v.exact) if v.exact is not None else v.value,
                "exact": v.exact is not None}
    if c == "experiment":
        return _experiment(cfg)
    raise UsageError(f"unknown command {c!r}")


def _gen(cfg: RunConfig) -> dict:
    k = cfg.kind
    x = sequences.parse_real(cfg.x) if cfg.x else None
    if k in ("kronecker", "dilated", "geometric", "power", "digits") and x is None:
        raise UsageError(f"--x is required for gen --kind {k}")
    if k == "kronecker":
        obj = sequences.kronecker_sequence(x, cfg.N)
    elif k == "dilated":
        if not cfg.set:
            raise UsageError("--set is required for gen --kind dilated")
        obj = sequences.dilated_sequence(sequences.DilationSequence(tuple(cfg.set)), x, cfg.N)
    elif k == "geometric":
        obj = sequences.dilated_sequence(sequences.geometric_dilation(cfg.theta or 2, cfg.N), x, cfg.N)
    elif k == "power":
        obj = sequences.power_sequence(x, cfg.N)
    elif k == "digits":
        obj = sequences.digits_of(x, cfg.base or 10, cfg.N)
    elif k == "champernowne":
        obj = sequences.champernowne(cfg.base or 10, cfg.N)
    else:
        obj = sequences.copeland_erdos(cfg.base or 10, cfg.N)
    return {"_object": obj}


def _experiment(cfg: RunConfig) -> dict:
    rng = experiments.RngSpec(cfg.seed)
    k = cfg.kind
    if k == "fukuyama":
        out = {"theta": cfg.theta, "constant": experiments.fukuyama_constant(cfg.theta)}
        if cfg.Ns:
            reps = experiments.fukuyama_band(cfg.theta, cfg.Ns, rng, cfg.paths)
            out["Ns"] = cfg.Ns
            out["band_min"] = [min(r.normalized[i] for r in reps) for i in range(len(cfg.Ns))]
            out["band_max"] = [max(r.normalized[i] for r in reps) for i in range(len(cfg.Ns))]
        return out
    if k == "clt":
        N = cfg.N or 1024
        D = sequences.geometric_dilation(cfg.theta, N)
        res = experiments.clt_experiment(D, N, cfg.M or 2000, rng)
        return {"N": N, "M": res.cdf.M, "ks": res.ks, "lacunary": res.lacunary,
                "ratio": res.ratio}
    Ns = cfg.Ns or [2 ** j for j in range(4, 13)]
    D = sequences.geometric_dilation(cfg.theta, max(Ns))
    if cfg.x:
        x = sequences.parse_real(cfg.x)
    else:
        x = experiments.sample_digits(rng, cfg.theta, max(Ns) + 128)
    if k == "lil-sum":
        rep = experiments.lil_sum_trajectory(D, x, Ns, seed=cfg.seed)
    elif k == "lil-disc":
        rep = experiments.lil_discrepancy_trajectory(D, x, Ns, seed=cfg.seed)
    else:
        rep = experiments.baker_ratio(D, x, Ns, cfg.eps or 0.1, cfg.exponent, seed=cfg.seed)
    return rep.to_dict()


def _csv(payload: dict) -> str:
    """Header row of JSON keys; list columns become rows, scalars repeat on each row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(payload)
    lists = [len(v) for v in payload.values() if isinstance(v, list)]
    rows = max(lists) if lists else 1
    w.writerow(keys)
    for i in range(rows):
        w.writerow([_cell(payload[k][i] if isinstance(payload[k], list) else payload[k]) for k in keys])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def render(cfg: RunConfig, payload: dict) -> str:
    obj = payload.get("_object")
    if obj is not None:
        if cfg.format == "csv":
            return obj.to_csv()
        body = json.loads(obj.to_json())
        body["config"] = cfg.header()
        return json.dumps(body, sort_keys=True) + "\n"
    if cfg.format == "csv":
        return _csv(payload)
    return json.dumps({**payload, "config": cfg.header()}, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    env = os.environ.get("EQUIDIST_WORKERS")
    if env:
        kw["workers"] = int(env)
    elif "workers" not in kw:
        kw["workers"] = os.cpu_count() or 1
    return RunConfig(**kw)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.command in (None, "help"):
        parser.print_help()
        return 0
    try:
        cfg = _config_from_args(ns)
    except ValueError as exc:
        print(f"equidist: error: {exc}", file=sys.stderr)
        return 2
    errs = validate(cfg)
    if errs:
        for e in errs:
            print(f"equidist: error: {e}", file=sys.stderr)
        return 2
    try:
        text = render(cfg, _run(cfg))
        _emit(text, cfg.out)
    except UsageError as exc:
        print(f"equidist: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, OSError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}, "config": cfg.header()}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    return 0


def entry() -> None:
    sys.exit(main())

"""Command-line front end for divsmooth."""

import argparse
import csv
import io
import json
import math
import os
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.bounds import BOUND_NAMES, evaluate, kappa, mu_H, nu_H
from src.config import SCHEMA, logger, _
from src.divergences.registry import make_divergence
from src.divergences.renyi import renyi_entropy
from src.divergences.smoothed import smoothed_renyi, smoothed_renyi_sub
from src.errors import DivSmoothError, DomainError, InputError, InvalidReference
from src.prob_core import ProbVec, ratio_order, sort_desc
from src.smoothing import (
    clip_gamma,
    clip_gamma_relative,
    dmax_cutoffs,
    flattest,
    gamma_min,
    relative_flattest,
    steepest,
)
from src.utils.helpers import encode, format_csv_number, parse_number, parse_vector, to_base
from src.verify import families
from src.verify.suites import VERIFY_TARGETS, run_target
from src.verify.sweep import SweepConfig, sweep_bounds

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2

# largest family vector written out in full
MAX_EMIT_DIM = 10 ** 6

CLIP_MODES = ("flattest", "steepest", "gamma")
DIVERGENCE_KINDS = ("renyi", "kl", "dmax", "dmin", "hypothesis_testing", "dmax_cutoffs")
FAMILY_NAMES = ("thm3", "thm4", "steepest_uniform", "thm1_infinite", "unbounded", "three_block",
                "app_e", "representative_min", "representative_max")

DEFAULTS: Dict[str, Any] = {
    "q": "uniform",
    "log_base": "2",
    "mode": "flattest",
    "method": "fast",
    "sub": False,
    "seed": 0,
    "max_denominator": 10 ** 4,
}
NUMERIC_KEYS = ("eps", "alpha", "beta", "gamma", "a", "b", "c", "t", "s", "q_mass", "oracle_tol")
INTEGER_KEYS = ("dim", "seed", "instances", "threads", "search_grid", "k", "m", "ell", "max_denominator")
# options that never enter the input echo
TRANSPORT_KEYS = ("command", "input", "output", "format", "out_dir")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as InputError instead of exiting."""

    def __init__(self, *args, **kwargs):
        # --p must never be read as a prefix of another option
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise InputError(message)


def _integer(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"expected an integer, got '{raw}'")


def _add_common(sp: argparse.ArgumentParser, vectors: bool = True, orders: bool = True):
    if vectors:
        sp.add_argument("--p", type=str, default=None, help="Vector literal, e.g. 0.6,0.3,0.1 or uniform")
        sp.add_argument("--q", type=str, default=None, help="Reference vector literal (default: uniform)")
    sp.add_argument("--dim", type=_integer, default=None, help="Dimension for the uniform/e1 keywords")
    sp.add_argument("--eps", type=parse_number, default=None, help="Smoothing radius")
    if orders:
        sp.add_argument("--alpha", type=parse_number, default=None, help="Rényi order alpha (inf allowed)")
        sp.add_argument("--beta", type=parse_number, default=None, help="Rényi order beta (inf allowed)")
    sp.add_argument("--input", type=str, default=None, help="JSON input file or a previously emitted document")
    sp.add_argument("--output", type=str, default=None, help="Write the document here instead of stdout")
    sp.add_argument("--format", type=str, default="json", choices=["json", "csv"], help="Output format")
    sp.add_argument("--log-base", dest="log_base", type=str, default=None, choices=["2", "e"],
                    help="Unit of divergence values (default: 2)")


def _add_sweep_options(sp: argparse.ArgumentParser):
    sp.add_argument("--seed", type=_integer, default=None, help="Seed of the random instances")
    sp.add_argument("--instances", type=_integer, default=None, help="Number of random instances")
    sp.add_argument("--threads", type=_integer, default=None, help="Worker threads (default: DIVSMOOTH_THREADS)")
    sp.add_argument("--search-grid", dest="search_grid", type=_integer, default=None,
                    help="Grid size of the three-block searches (0 skips them)")


def build_parser() -> CliParser:
    parser = CliParser(prog="divsmooth",
                       description="divsmooth - smoothed classical divergences and their optimal bounds")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    sp = sub.add_parser("clip", help="Extremal members of the eps-ball")
    _add_common(sp, orders=False)
    sp.add_argument("--mode", type=str, default=None, choices=CLIP_MODES)
    sp.add_argument("--gamma", type=parse_number, default=None, help="Target mass for --mode gamma")
    sp.add_argument("--max-denominator", dest="max_denominator", type=_integer, default=None,
                    help="Denominator cap of the rational reference approximation")

    sp = sub.add_parser("divergence", help="Evaluate an unsmoothed divergence")
    _add_common(sp)
    sp.add_argument("--kind", type=str, required=True, choices=DIVERGENCE_KINDS)

    sp = sub.add_parser("smooth", help="Evaluate a smoothed Rényi divergence")
    _add_common(sp)
    sp.add_argument("--sub", action="store_const", const=True, default=None,
                    help="Smooth over subnormalized vectors (uniform reference)")
    sp.add_argument("--method", type=str, default=None, choices=["fast", "generic"])

    sp = sub.add_parser("bound", help="Evaluate a bound function")
    sp.add_argument("bound", type=str, choices=BOUND_NAMES)
    _add_common(sp, vectors=False)

    sp = sub.add_parser("verify", help="Run a verification target")
    sp.add_argument("target", type=str, choices=list(VERIFY_TARGETS) + ["all"])
    _add_sweep_options(sp)
    sp.add_argument("--oracle-tol", dest="oracle_tol", type=parse_number, default=None)
    sp.add_argument("--output", type=str, default=None)
    sp.add_argument("--format", type=str, default="json", choices=["json", "csv"])
    sp.add_argument("--input", type=str, default=None)

    sp = sub.add_parser("sweep", help="Validity and achievability sweep")
    sp.add_argument("--config", type=str, default=None, help="JSON file mirroring SweepConfig")
    _add_sweep_options(sp)
    sp.add_argument("--out-dir", dest="out_dir", type=str, default=None,
                    help="Write report.csv and summary.json into this directory")
    sp.add_argument("--output", type=str, default=None)
    sp.add_argument("--format", type=str, default="json", choices=["json", "csv"])
    sp.add_argument("--input", type=str, default=None)

    sp = sub.add_parser("family", help="Emit an extremal family vector")
    sp.add_argument("family", type=str, choices=FAMILY_NAMES)
    _add_common(sp)
    for name in ("k", "m", "ell"):
        sp.add_argument(f"--{name}", type=_integer, default=None)
    for name in ("a", "b", "c", "t", "s"):
        sp.add_argument(f"--{name}", type=parse_number, default=None)
    sp.add_argument("--q-mass", dest="q_mass", type=parse_number, default=None)
    return parser


def _load_input(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e.msg}")
    if not isinstance(doc, dict):
        raise InputError(f"{path} must hold a JSON object")
    if isinstance(doc.get("input"), dict):
        return doc["input"]
    return doc


def resolve_options(args: argparse.Namespace) -> Dict[str, Any]:
    """Merge flags over the --input file over the defaults, rejecting unknown keys."""
    given = {k: v for k, v in vars(args).items() if k not in TRANSPORT_KEYS}
    from_file = _load_input(args.input) if args.input else {}
    unknown = set(from_file) - set(given) - {"schema", "command"}
    if unknown:
        raise InputError(f"unknown input keys: {sorted(unknown)}")
    merged = {}
    for key, value in given.items():
        if value is None:
            value = from_file.get(key, DEFAULTS.get(key))
        if value is not None and key in NUMERIC_KEYS:
            value = parse_number(value)
        if value is not None and key in INTEGER_KEYS:
            value = _integer(str(value))
        merged[key] = value
    return merged


def _require(opts: Dict[str, Any], *keys: str):
    missing = [k for k in keys if opts.get(k) is None]
    if missing:
        raise InputError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _vectors(opts: Dict[str, Any]) -> Tuple[ProbVec, ProbVec]:
    _require(opts, "p")
    p = parse_vector(opts["p"], opts.get("dim"))
    q = parse_vector(opts["q"], opts.get("dim") or p.dim)
    if q.dim != p.dim:
        raise InputError(f"--p has dimension {p.dim} but --q has dimension {q.dim}")
    opts["p"], opts["q"] = p.tolist(), q.tolist()
    return p, q


def _is_uniform(q: ProbVec) -> bool:
    return bool(np.all(q.entries == q.entries[0]))


def _unsort(values: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    out = np.empty(len(values))
    out[list(perm)] = values
    return out


def cmd_clip(opts: Dict[str, Any]) -> Dict[str, Any]:
    p, q = _vectors(opts)
    _require(opts, "eps")
    eps, mode = opts["eps"], opts["mode"]
    if mode == "steepest":
        if not _is_uniform(q):
            raise InvalidReference("steepest approximations use the uniform reference")
        ps, _perm = sort_desc(p)
        return {"steepest": steepest(ps, eps).tolist()}
    if mode == "gamma":
        gamma = opts.get("gamma")
        if gamma is None:
            gamma = opts["gamma"] = 1.0 - eps
        if _is_uniform(q):
            ps, perm = sort_desc(p)
            clipped, params = clip_gamma(ps, eps, gamma)
            entries = _unsort(clipped.entries, perm)
            gp = gamma_min(ps, eps)
        else:
            clipped, params = clip_gamma_relative(p, q, eps, gamma, opts["max_denominator"])
            entries, gp = clipped.entries, None
        return {"clipped": entries, "mass": float(entries.sum()), "a": params.a, "b_gamma": params.b_gamma,
                "k": params.k, "m": params.m, "gamma": params.gamma, "gamma_min": gp}
    if _is_uniform(q):
        ps, perm = sort_desc(p)
        clipped, params = flattest(ps, eps)
        return {"clipped": _unsort(clipped.entries, perm), "a": params.a, "b": params.b,
                "k": params.k, "m": params.m}
    clipped = relative_flattest(p, q, eps)
    a, b = dmax_cutoffs(ratio_order(p, q), eps)
    return {"clipped": clipped.entries, "a": a, "b": b}


def cmd_divergence(opts: Dict[str, Any]) -> Dict[str, Any]:
    p, q = _vectors(opts)
    kind, base = opts["kind"], opts["log_base"]
    if kind == "dmax_cutoffs":
        _require(opts, "eps")
        a, b = dmax_cutoffs(ratio_order(p, q), opts["eps"])
        value = math.log2(a) if a > 0 else -math.inf
        return {"a": a, "b": b, "value": to_base(value, base)}
    div = make_divergence(kind, opts.get("alpha"), opts.get("eps"))
    return {"divergence": div.get_name(), "value": to_base(div(p, q), base)}


def cmd_smooth(opts: Dict[str, Any]) -> Dict[str, Any]:
    p, q = _vectors(opts)
    _require(opts, "eps", "alpha")
    eps, alpha, base = opts["eps"], opts["alpha"], opts["log_base"]
    if opts["sub"]:
        if not _is_uniform(q):
            raise InvalidReference("subnormalized smoothing uses the uniform reference")
        value = smoothed_renyi_sub(p, eps, alpha, method=opts["method"])
        return {"value": to_base(value, base)}
    return {"clipped": relative_flattest(p, q, eps).entries,
            "value": to_base(smoothed_renyi(p, q, eps, alpha), base)}


def cmd_bound(opts: Dict[str, Any]) -> Dict[str, Any]:
    _require(opts, "eps", "alpha")
    result = evaluate(opts["bound"], opts["eps"], opts["alpha"], opts.get("beta"))
    return {"value": to_base(result.value, opts["log_base"]), "branch": result.branch.value}


def _family_vector(out: Dict[str, Any], vector: Callable[[], ProbVec], d: int):
    if d > MAX_EMIT_DIM:
        logger.info(_("Family dimension {} exceeds {}; vector left out").format(d, MAX_EMIT_DIM))
        return
    out["vector"] = vector().entries


def cmd_family(opts: Dict[str, Any]) -> Dict[str, Any]:
    name, base = opts["family"], opts["log_base"]
    out: Dict[str, Any] = {"family": name}
    if name in ("representative_min", "representative_max"):
        p, _q = _vectors(opts)
        _require(opts, "eps")
        build = families.representative_min if name == "representative_min" else families.representative_max
        out["vector"] = build(p, opts["eps"]).entries
        return out
    _require(opts, "dim")
    d, eps, alpha = opts["dim"], opts.get("eps"), opts.get("alpha")
    if name == "thm3":
        _require(opts, "eps")
        _family_vector(out, lambda: families.family_thm3(d, eps), d)
        if alpha is not None:
            out["gap"] = to_base(families.family_thm3_gap(d, eps, alpha), base)
            out["target"] = to_base(mu_H(eps, alpha).value, base)
    elif name == "thm4":
        _require(opts, "eps", "alpha")
        _family_vector(out, lambda: families.family_thm4(d, eps, alpha), d)
        out["gap"] = to_base(families.family_thm4_gap(d, eps, alpha), base)
        out["target"] = to_base(nu_H(eps, alpha).value, base)
    elif name == "steepest_uniform":
        _require(opts, "eps")
        _family_vector(out, lambda: families.family_steepest_uniform(d, eps), d)
        if alpha is not None:
            out["gap"] = to_base(families.family_kappa_gap(d, eps, alpha), base)
            out["target"] = to_base(kappa(eps, alpha).value, base)
    elif name == "thm1_infinite":
        _require(opts, "eps", "alpha", "beta", "q_mass")
        out["gap"] = to_base(families.family_thm1_infinite_gap(d, eps, alpha, opts["beta"], opts["q_mass"]), base)
    elif name == "unbounded":
        _require(opts, "alpha", "beta")
        vec = families.family_unbounded(d, alpha, opts["beta"])
        out["vector"] = vec.entries
        out["gap"] = to_base(renyi_entropy(vec, opts["beta"]) - renyi_entropy(vec, alpha), base)
    elif name == "three_block":
        _require(opts, "eps", "k", "m", "a", "b", "c")
        vec = families.family_three_block(d, eps, opts["k"], opts["m"], opts["a"], opts["b"], opts["c"])
        out["vector"] = vec.entries
        out["clipped"] = flattest(vec, eps)[0].entries
    elif name == "app_e":
        _require(opts, "eps", "t", "s", "ell")
        out["vector"] = families.family_app_e(d, opts["t"], opts["s"], opts["ell"], eps).entries
    return out


def cmd_verify(opts: Dict[str, Any]) -> Dict[str, Any]:
    cfg = SweepConfig(seed=opts["seed"],
                      **{k: opts[k] for k in ("oracle_tol", "search_grid", "threads") if opts.get(k) is not None})
    result = run_target(opts["target"], opts.get("instances"), cfg)
    return {"target": opts["target"], "result": result, "passed": result["passed"]}


def _sweep_config(opts: Dict[str, Any]) -> SweepConfig:
    raw = opts.get("config")
    if isinstance(raw, str):
        raw = _load_input(raw)
        raw = raw.get("config", raw)
    values = dict(raw or {})
    for key in ("seed", "instances", "threads", "search_grid"):
        if opts.get(key) is not None:
            values[key] = opts[key]
    cfg = SweepConfig.from_dict(values)
    opts.update({"config": cfg.to_dict(), "seed": cfg.seed, "instances": cfg.instances,
                 "threads": cfg.threads, "search_grid": cfg.search_grid})
    return cfg


def _csv_text(rows: List[List[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _flat_rows(result: Dict[str, Any]) -> List[List[str]]:
    rows = []
    for key, value in encode(result).items():
        cells = value if isinstance(value, list) else [value]
        rows.append([key] + ["" if v is None else (format_csv_number(v) if isinstance(v, float) else
                                                  (v.upper() if v in ("inf", "-inf") else str(v)))
                             for v in cells])
    return rows


def _dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(encode(doc), ensure_ascii=False) + "\n"


def _emit(text: str, output: Optional[str]):
    if output is None:
        print(text, end="")
        return
    try:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise InputError(f"cannot write {output}: {e.strerror}")
    logger.info(_("Wrote {}").format(output))


def _document(command: str, opts: Dict[str, Any], result: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema": SCHEMA, "command": command, "input": opts, **result}


HANDLERS: Dict[str, Callable[[Dict[str, Any]], Dict[str, Any]]] = {
    "clip": cmd_clip,
    "divergence": cmd_divergence,
    "smooth": cmd_smooth,
    "bound": cmd_bound,
    "family": cmd_family,
    "verify": cmd_verify,
}


def _run_sweep(args: argparse.Namespace, opts: Dict[str, Any]) -> int:
    cfg = _sweep_config(opts)
    report = sweep_bounds(cfg)
    summary = report.summary()
    if args.out_dir:
        try:
            os.makedirs(args.out_dir, exist_ok=True)
        except OSError as e:
            raise InputError(f"cannot create {args.out_dir}: {e.strerror}")
        _emit(_csv_text(report.to_csv_rows()), os.path.join(args.out_dir, "report.csv"))
        _emit(_dumps(_document("sweep", opts, {"summary": summary})), os.path.join(args.out_dir, "summary.json"))
        _emit(_dumps(_document("sweep", opts, {"summary": summary})), args.output)
    elif args.format == "csv":
        _emit(_csv_text(report.to_csv_rows()), args.output)
    else:
        _emit(_dumps(_document("sweep", opts, report.to_dict())), args.output)
    return EXIT_OK if summary["passed"] else EXIT_DOMAIN


def _error_document(e: Exception) -> str:
    return json.dumps({"schema": SCHEMA, "error": f"{type(e).__name__}: {e}"}, ensure_ascii=False) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one subcommand and emit its document.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        0 on success, 1 on input errors, 2 on domain errors or failed checks
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        opts = resolve_options(args)
        if args.command == "sweep":
            return _run_sweep(args, opts)
        result = HANDLERS[args.command](opts)
        doc = _document(args.command, opts, result)
        if args.format == "csv":
            _emit(_csv_text(_flat_rows(result)), args.output)
        else:
            _emit(_dumps(doc), args.output)
        if result.get("passed") is False:
            logger.warning(_("Verification target {} failed").format(opts.get("target")))
            return EXIT_DOMAIN
        return EXIT_OK
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except InputError as e:
        print(_error_document(e), end="")
        return EXIT_INPUT
    except DomainError as e:
        print(_error_document(e), end="")
        return EXIT_DOMAIN
    except DivSmoothError as e:
        print(_error_document(e), end="")
        return EXIT_INPUT
    except Exception as e:
        logger.error(_("Unexpected error in {}: {}").format(argv, e))
        print(_error_document(e), end="")
        return EXIT_INPUT

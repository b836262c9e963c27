"""Command-line front end.

Every subcommand prints one JSON report (sorted keys, seed always echoed)
or a short text summary.  Exit status: 0 when the checked property holds,
1 when it is refuted, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .algebra import CATALOG, make_algebra, parse_kind
from .errors import ConelabError, InvalidKind, ParseError

SCHEMA = "conelab.report/1"
DEFAULT_SEED = 0
DEFAULT_TOL = 1e-8


@dataclass
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    samples: int = 100
    tol: float = DEFAULT_TOL
    fmt: str = "json"
    options: dict = field(default_factory=dict)


def _clean(obj):
    """Make a report JSON-safe and deterministic."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def _check(name: str, passed: bool, **data) -> dict:
    return {"name": name, "passed": bool(passed), **data}


def _error_check(name: str, err: ConelabError) -> dict:
    return _check(name, False, error=type(err).__name__, message=str(err), witness=err.witness)


# --- subcommands -----------------------------------------------------------


def _run_spectral(cfg: RunConfig) -> list[dict]:
    from .spectral import decompose_coords

    alg = make_algebra(cfg.options["algebra"])
    rng = np.random.default_rng(cfg.seed)
    if cfg.options.get("element") is not None:
        x = np.asarray(_load_json_arg(cfg.options["element"]), dtype=float)
        if x.shape != (alg.dim,):
            raise ParseError(f"element needs {alg.dim} coordinates, got {x.shape}")
        s, atoms, split = decompose_coords(alg, x, rng)
        res = float(np.max(np.abs(s @ atoms - x)))
        return [_check("decomposition", res < cfg.tol, eigenvalues=s, atoms=atoms, split=split, residual=res)]
    from .sampling import random_coords

    rec = orth = 0.0
    sizes = set()
    for _ in range(cfg.samples):
        x = random_coords(alg, rng)
        s, atoms, _ = decompose_coords(alg, x, rng)
        rec = max(rec, float(np.max(np.abs(s @ atoms - x))))
        g = atoms @ alg.gram @ atoms.T
        orth = max(orth, float(np.max(np.abs(g - np.eye(len(atoms))))))
        sizes.add(len(atoms))
    return [
        _check("reconstruction", rec < cfg.tol, max_residual=rec),
        _check("frame_orthonormality", orth < cfg.tol, max_residual=orth),
        _check("frame_size", sizes == {alg.rank}, sizes=sorted(sizes), rank=alg.rank),
    ]


def _run_logic(cfg: RunConfig) -> list[dict]:
    from .logic import frame_rigidity_check, orthogonality_check, orthomodularity_check

    alg = make_algebra(cfg.options["algebra"])
    rng = np.random.default_rng(cfg.seed)
    check = cfg.options["check"]
    if check == "orthogonality":
        r = orthogonality_check(alg, cfg.samples, rng, cfg.tol)
        return [_check("orthogonality_agreement", r["disagreements"] == 0, **r)]
    if check == "frames":
        r = frame_rigidity_check(alg, cfg.samples, rng)
        return [_check("frame_rigidity", r["all_size_m"] and r["max_unit_residual"] < cfg.tol, **r)]
    r = orthomodularity_check(alg, cfg.samples, rng, cfg.tol)
    return [_check("orthomodularity", r["failures"] == 0, **r)]


def _run_transition(cfg: RunConfig) -> list[dict]:
    from .logic import make_frame
    from .transition import transition_defect_scan, transition_table

    alg = make_algebra(cfg.options["algebra"])
    out = []
    if cfg.options.get("frames") is not None:
        data = _load_json_arg(cfg.options["frames"])
        try:
            rows = make_frame(alg, data["rows"])
            cols = make_frame(alg, data["cols"])
        except (KeyError, TypeError) as err:
            raise ParseError(f"frames need 'rows' and 'cols' lists: {err}") from err
        table = transition_table(rows, cols)
        in_range = bool(np.all(table.matrix >= -1e-12) and np.all(table.matrix <= 1 + 1e-12))
        ok = in_range
        if cols.size == alg.rank:
            ok = ok and bool(np.max(np.abs(table.row_sums - 1.0)) < 1e-9)
        out.append(_check("transition_table", ok, **table.to_dict()))
    if cfg.options.get("defect_scan"):
        rng = np.random.default_rng(cfg.seed)
        r = transition_defect_scan(alg, int(cfg.options["defect_scan"]), rng)
        out.append(_check("symmetry_defect", r["max_defect"] < 1e-9, **r))
    if not out:
        raise ParseError("transition needs --frames and/or --defect-scan")
    return out


def _run_symmetry(cfg: RunConfig) -> list[dict]:
    from .symmetry import LEVELS, symmetry_report

    alg = make_algebra(cfg.options["algebra"])
    level = cfg.options["level"]
    levels = LEVELS if level == "all" else (level,)
    rng = np.random.default_rng(cfg.seed)
    verdicts = symmetry_report(alg, cfg.samples, rng, levels)
    out = []
    for v in verdicts:
        d = v.to_dict()
        d["symbol"] = "✓" if v.holds else "✗"
        out.append(_check(f"{v.level}_symmetry", v.holds, **d))
    return out


def _run_theorem2(cfg: RunConfig) -> list[dict]:
    from .symmetry import make_invariant_form, self_duality_check, theorem2_form

    alg = make_algebra(cfg.options["algebra"])
    rng = np.random.default_rng(cfg.seed)
    form = make_invariant_form(alg, cfg.options["beta"], cfg.options.get("gamma", 0.0))
    res = theorem2_form(form, cfg.samples, rng)
    eps_ok = abs(res.epsilon - cfg.options["beta"]) < 1e-9 if not cfg.options.get("gamma") else True
    out = [
        _check("epsilon", eps_ok, epsilon=res.epsilon, beta=cfg.options["beta"]),
        _check("rescaled_form_contract", res.passed, **res.diagnostics),
    ]
    sd = self_duality_check(res.result, cfg.samples, rng)
    out.append(_check("self_duality", True, **sd.to_dict()))
    return out


def _run_starstar(cfg: RunConfig) -> list[dict]:
    from .convex import load_polytope, star_star_check

    P = load_polytope(cfg.options["polytope"])
    rep = star_star_check(P, cfg.samples, np.random.default_rng(cfg.seed))
    d = rep.to_dict()
    d["verdict"] = "(**) holds" if rep.passes else "(**) fails"
    return [_check("star_star", rep.passes, **d)]


def _run_distinguish(cfg: RunConfig) -> list[dict]:
    from .convex import load_polytope, perfectly_distinguishable

    P = load_polytope(cfg.options["polytope"])
    pairs = []
    for i in range(P.n_vertices):
        for j in range(i + 1, P.n_vertices):
            r = perfectly_distinguishable(P, i, j)
            pairs.append({"pair": [i, j], "distinguishable": r.distinguishable, "witness": r.witness.to_dict() if r.witness else None})
    return [_check("distinguishability", True, polytope=P.name, pairs=pairs, notion="LP distinguishability")]


def _run_polysym(cfg: RunConfig) -> list[dict]:
    from .convex import load_polytope, polytope_automorphisms, polytope_bit_symmetry

    P = load_polytope(cfg.options["polytope"])
    v = polytope_bit_symmetry(P)
    d = v.to_dict()
    d["group_order"] = len(polytope_automorphisms(P))
    return [_check("polytope_bit_symmetry", v.holds, polytope=P.name, **d)]


def _run_catalog(cfg: RunConfig) -> list[dict]:
    from .convex import BUILTIN_POLYTOPES

    algs = []
    for spec in CATALOG:
        kind = parse_kind(spec)
        algs.append({"spec": spec, "dim": kind.dim, "rank": kind.rank})
    return [_check("catalog", True, algebras=algs, polytopes=list(BUILTIN_POLYTOPES))]


RUNNERS = {
    "spectral": _run_spectral,
    "logic": _run_logic,
    "transition": _run_transition,
    "symmetry": _run_symmetry,
    "theorem2": _run_theorem2,
    "starstar": _run_starstar,
    "distinguish": _run_distinguish,
    "polysym": _run_polysym,
    "catalog": _run_catalog,
}


def _load_json_arg(value: str):
    path = Path(value)
    try:
        text = path.read_text() if path.exists() else value
        return json.loads(text)
    except (OSError, ValueError) as err:
        raise ParseError(f"cannot parse JSON argument: {err}") from err


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute a configuration; returns the report and the exit status."""
    if cfg.samples < 1:
        raise ParseError("samples must be >= 1")
    if not cfg.tol > 0:
        raise ParseError("tolerance must be positive")
    try:
        checks = RUNNERS[cfg.command](cfg)
    except (ParseError, InvalidKind):
        raise
    except ConelabError as err:
        checks = [_error_check(cfg.command, err)]
    passed = all(c["passed"] for c in checks)
    report = {"schema": SCHEMA, "config": asdict(cfg), "checks": checks, "passed": passed}
    return _clean(report), 0 if passed else 1


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    lines = [f"{report['config']['command']} (seed {report['config']['seed']})"]
    for c in report["checks"]:
        mark = c.get("symbol") or ("PASS" if c["passed"] else "FAIL")
        extra = c.get("verdict") or c.get("message") or ""
        lines.append(f"  {mark} {c['name']} {extra}".rstrip())
    lines.append("passed" if report["passed"] else "refuted")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conelab", description="Jordan-algebra state space checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=100):
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
        p.add_argument("--output", help="write the report to this file instead of stdout")

    p = sub.add_parser("spectral", help="spectral decomposition soundness")
    p.add_argument("--algebra", required=True)
    p.add_argument("--element", help="JSON coordinate list (or file) to decompose")
    common(p)
    p = sub.add_parser("logic", help="orthogonality, frame and lattice checks")
    p.add_argument("--algebra", required=True)
    p.add_argument("--check", choices=("orthogonality", "frames", "orthomodularity"), default="orthogonality")
    common(p)
    p = sub.add_parser("transition", help="transition tables and symmetry defect")
    p.add_argument("--algebra", required=True)
    p.add_argument("--frames", help='JSON {"rows": [...], "cols": [...]} (inline or file)')
    p.add_argument("--defect-scan", type=int, dest="defect_scan")
    common(p)
    p = sub.add_parser("symmetry", help="weak/exchange/bit/strong symmetry verdicts")
    p.add_argument("--algebra", required=True)
    p.add_argument("--level", choices=("weak", "exchange", "bit", "strong", "all"), default="all")
    common(p)
    p = sub.add_parser("theorem2", help="epsilon and the rescaled self-dual form")
    p.add_argument("--algebra", required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0, help="cross-factor term for direct sums")
    common(p)
    p = sub.add_parser("starstar", help="property (**) on a polytope")
    p.add_argument("--polytope", required=True)
    common(p, samples=64)
    p = sub.add_parser("distinguish", help="perfectly distinguishable vertex pairs")
    p.add_argument("--polytope", required=True)
    common(p)
    p = sub.add_parser("polysym", help="bit symmetry of a polytope")
    p.add_argument("--polytope", required=True)
    common(p)
    p = sub.add_parser("catalog", help="list built-in algebras and polytopes")
    common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "samples", "seed", "tol", "fmt", "output"}
    options = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if "algebra" in options:
        options["algebra"] = str(parse_kind(options["algebra"]))
    return RunConfig(args.command, args.seed, args.samples, args.tol, args.fmt, options)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except (ParseError, InvalidKind) as err:
        print(f"conelab: {err}", file=sys.stderr)
        return 2
    text = render(report, cfg.fmt)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``toric-orbits VERB [--input FILE | JSON] [--json]``.

Every verb builds a JSON-ready dict first; the plain-text rendering is
derived from it.  ``analyze`` exits 0/1/2 for closed / boundary / not a
manifold, 3 on input or module errors and 70 when the two classifier
routes disagree.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from typing import Callable, Optional

from . import sweep
from .orbit_classifier import (CertificateError, Kind, RouteDisagreement, classify,
                               independence_complex)
from .complexes import pseudomanifold_status, reduced_homology
from .faces import PosetIsomorphismError, face_poset, poset_json, product_structure_check
from .leontief_lp import DegenerateSystemError, bridge_report, lp_report, parse_system
from .weights import WeightSystemError, parse_weights

EXIT_CODES = {Kind.CLOSED_MANIFOLD: 0, Kind.MANIFOLD_WITH_BOUNDARY: 1, Kind.NOT_MANIFOLD: 2}
EXIT_ERROR = 3
EXIT_DISAGREEMENT = 70

log = logging.getLogger("toric_orbits")


class CommandError(Exception):
    def __init__(self, module: str, message: str, raw: str = ""):
        self.module, self.message, self.raw = module, message, raw
        super().__init__(f"{module}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _read_input(args) -> str:
    if args.source is not None:
        if args.source.lstrip().startswith(("{", "[")):
            return args.source
        args.input = args.source
    if args.input and args.input != "-":
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


def _weights(raw: str):
    try:
        return parse_weights(raw)
    except (WeightSystemError, ValueError) as exc:
        raise CommandError("rep_model", str(exc), raw) from exc


def cmd_analyze(raw: str) -> tuple:
    ws = _weights(raw)
    verdict = classify(ws)
    out = verdict.to_dict()
    out["input"] = ws.to_dict()
    return out, EXIT_CODES[verdict.kind]


def cmd_decompose(raw: str) -> tuple:
    verdict = classify(_weights(raw))
    if verdict.leontief is None:
        return {"kind": verdict.kind.value, "witness": verdict.witness.to_dict()}, 0
    out = verdict.leontief.to_dict()
    out["kind"] = verdict.kind.value
    return out, 0


def cmd_faces(raw: str) -> tuple:
    ws = _weights(raw)
    verdict = classify(ws)
    out = json.loads(poset_json(ws, verdict.leontief))
    out["size"] = len(out["elements"])
    return out, 0


def cmd_homology(raw: str) -> tuple:
    ws = _weights(raw)
    K = independence_complex(ws)
    groups = reduced_homology(K)
    status, ridge = pseudomanifold_status(K) if ws.r else (None, None)
    return {
        "facets": [list(f) for f in K.facets],
        "pseudomanifold": status.value if status else None,
        "reduced_homology": [{"degree": h.degree, "free_rank": h.free_rank, "torsion": list(h.torsion)}
                             for h in groups],
    }, 0


def _system(raw: str):
    try:
        return parse_system(raw)
    except (WeightSystemError, ValueError) as exc:
        raise CommandError("leontief_lp", str(exc), raw) from exc


def cmd_lp(raw: str) -> tuple:
    return lp_report(_system(raw)), 0


def cmd_bridge(raw: str) -> tuple:
    return bridge_report(_system(raw)), 0


def run_selfcheck(budget: float, seed: int = 0) -> dict:
    """Random suites first, each capped at a tenth of `budget`; the exhaustive sweep gets the rest."""
    start = time.perf_counter()
    deadline = start + budget

    def slice_end() -> float:
        return min(deadline, time.perf_counter() + budget / 10)

    suites = {}
    rnd = sweep.random_route_checks(10_000, seed=seed, deadline=slice_end())
    suites["random_routes"] = {**rnd.to_dict(), "ok": rnd.ok}

    rng = random.Random(seed)
    suites["snf_contract"] = _bounded(1000, slice_end(),
                                      lambda: sweep.snf_contract_violation(sweep.random_int_matrix(rng)))

    def invariance():
        a, _, b = sweep.transformed_pair(rng)
        return None if sweep.invariants(a) == sweep.invariants(b) else a.to_json()

    suites["unimodular_invariance"] = _bounded(1000, slice_end(), invariance)

    def wedge():
        ws = sweep.random_weight_system(rng, 4, 7)
        return sweep.wedge_violation(ws, classify(ws).kind)

    suites["wedge_homology"] = _bounded(1000, slice_end(), wedge)

    exhaustive = sweep.exhaustive_sweep(deadline=deadline)
    suites["exhaustive_routes"] = {**exhaustive.to_dict(), "ok": exhaustive.ok}

    coverage = sum(s["coverage"] for s in suites.values()) / len(suites)
    return {
        "budget": budget,
        "coverage": round(coverage, 6),
        "complete": all(s["complete"] for s in suites.values()),
        "ok": all(s["ok"] for s in suites.values()),
        "suites": suites,
    }


def _bounded(count: int, deadline: float, trial: Callable[[], Optional[str]]) -> dict:
    done, failures = 0, []
    for _ in range(count):
        if time.perf_counter() > deadline:
            break
        try:
            bad = trial()
        except Exception as exc:
            bad = f"{type(exc).__name__}: {exc}"
        if bad:
            failures.append(bad)
        done += 1
    return {"checked": done, "coverage": round(done / count, 6), "complete": done == count,
            "failures": failures[:10], "ok": not failures}


VERBS = {
    "analyze": cmd_analyze,
    "decompose": cmd_decompose,
    "faces": cmd_faces,
    "homology": cmd_homology,
    "lp": cmd_lp,
    "bridge": cmd_bridge,
}


def render_text(verb: str, out: dict) -> str:
    if verb == "analyze":
        lines = [out["model"], f"kind: {out['kind']}", f"model_dim: {out['model_dim']}"]
        if out["leontief"]:
            lt = out["leontief"]
            lines.append(f"leontief type: d={lt['d']} blocks={lt['blocks']} l={lt['l']}")
        if out["witness"]:
            w = out["witness"]
            lines.append(f"witness: ridge {w['ridge']} lies in {w['facet_count']} facets; "
                         f"flat {w['flat']}")
        return "\n".join(lines)
    if verb == "homology":
        lines = [f"pseudomanifold: {out['pseudomanifold']}"]
        for h in out["reduced_homology"]:
            parts = [f"Z^{h['free_rank']}"] if h["free_rank"] else []
            parts += [f"Z/{t}" for t in h["torsion"]]
            lines.append(f"H~_{h['degree']}: {' + '.join(parts) or '0'}")
        return "\n".join(lines)
    if verb == "selfcheck":
        lines = [f"selfcheck {'ok' if out['ok'] else 'FAILED'}: coverage {out['coverage']:.6f}"]
        for name, s in out["suites"].items():
            lines.append(f"  {name}: {'ok' if s['ok'] else 'FAILED'} coverage {s['coverage']:.6f}")
        return "\n".join(lines)
    return "\n".join(f"{key}: {_dump(value)}" for key, value in sorted(out.items()))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-orbits",
                                     description="Classify orbit spaces of torus representations.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in list(VERBS) + ["selfcheck"]:
        p = sub.add_parser(verb)
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.add_argument("--verbose", action="store_true", help="debug logging on stderr")
        if verb == "selfcheck":
            p.add_argument("--budget", type=float, default=60.0, help="time budget in seconds")
            p.add_argument("--seed", type=int, default=0)
        else:
            p.add_argument("source", nargs="?", help="input file or inline JSON")
            p.add_argument("--input", help="input file (default: stdin)")
    return parser


def _configure_logging(verbose: bool) -> None:
    for h in [h for h in log.handlers if getattr(h, "cli_owned", False)]:
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.cli_owned = True
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _emit(text: str, stream) -> None:
    stream.write(text + "\n")
    stream.flush()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.verb == "selfcheck":
        out = run_selfcheck(args.budget, args.seed)
        _emit(_dump(out) if args.json else render_text("selfcheck", out), sys.stdout)
        return 0 if out["ok"] else 1

    raw = ""
    try:
        raw = _read_input(args)
        out, code = VERBS[args.verb](raw)
    except RouteDisagreement as exc:
        dump = {"error": "route disagreement", "detail": str(exc), "input": exc.ws.to_dict(),
                "structural": exc.structural.to_dict(), "pseudomanifold": exc.pseudo.to_dict()}
        _emit("internal error: please report this bug with the dump below", sys.stderr)
        _emit(_dump(dump), sys.stderr)
        return EXIT_DISAGREEMENT
    except CommandError as exc:
        return _error(args, exc.module, exc.message, exc.raw)
    except (CertificateError, PosetIsomorphismError) as exc:
        return _error(args, "orbit_classifier", str(exc), raw)
    except DegenerateSystemError as exc:
        return _error(args, "leontief_lp", str(exc), raw)
    except OSError as exc:
        return _error(args, "cli", str(exc), raw)
    except (ValueError, ArithmeticError) as exc:
        return _error(args, args.verb, str(exc), raw)
    _emit(_dump(out) if args.json else render_text(args.verb, out), sys.stdout)
    return code


def _error(args, module: str, message: str, raw: str) -> int:
    echo = raw.strip()
    if args.json:
        _emit(_dump({"error": message, "module": module, "input": echo}), sys.stderr)
    else:
        _emit(f"error [{module}]: {message}", sys.stderr)
        if echo:
            _emit(f"input: {echo}", sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

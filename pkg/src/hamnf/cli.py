"""
Command-line front end.

    nf normalform|hopf|verify|dynamics --spec FILE [--hopf] [--param NAME=VAL]
       [--format json|text]

``--spec`` takes a path or the name of a bundled fixture (``henon_heiles``,
``elastic_pendulum``).  Exit codes: 0 ok, 2 parse error, 3 precondition
failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .dynamics import compare_nf, integrate, IntegratorConfig, trajectories_csv
from .errors import IntegrationError, ParseError, PreconditionError
from .hopf import nf_to_hopf
from .normalform import lie_transform_residual, normal_form_condition, second_order_nf
from .parse import ProblemSpec, parse_rational, parse_spec
from .serialize import hopf_report_to_json, poly_to_json, result_from_json, result_to_json

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4

FIXTURES = ("henon_heiles", "elastic_pendulum")
DEFAULT_EPS = (0.04, 0.02, 0.01)


class VerificationFailed(Exception):
    def __init__(self, document):
        super().__init__("verification failed")
        self.document = document


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("hamnf") / "fixtures" / f"{name}.json"))


def load_spec(arg: str) -> ProblemSpec:
    path = Path(arg)
    if not path.exists() and arg in FIXTURES:
        path = fixture_path(arg)
    if not path.exists():
        raise ParseError(f"problem file not found: {arg}")
    return parse_spec(path)


def _problem_json(spec: ProblemSpec) -> dict:
    return {"name": spec.name, "n": spec.n, "modes": list(spec.modes),
            "omega0": str(spec.omega0), "H1": spec.H1, "H2": spec.H2}


def _verification(ph, res) -> dict:
    resid = lie_transform_residual(ph, res)
    cond = normal_form_condition(res, ph.freq)
    doc = {
        "lie_transform_residual": {f"order{k}": poly_to_json(resid[k]) for k in range(3)},
        "residual_zero": resid.is_zero(),
        "normal_form_condition": {f"order{k}": v for k, v in sorted(cond.passed.items())},
    }
    doc["ok"] = doc["residual_zero"] and cond.ok
    return doc


def run(spec: ProblemSpec, subcommand: str, hopf: bool = False, params: dict | None = None,
        result_doc: dict | None = None, dynamics_opts: dict | None = None) -> dict:
    """Execute a subcommand and return the output document.

    Raises :class:`VerificationFailed` from ``verify`` when a check fails.
    """
    ph = spec.to_perturbed()
    params = {**spec.params, **(params or {})}
    doc = {"problem": _problem_json(spec), "command": subcommand}
    if subcommand in ("normalform", "hopf", "verify"):
        res = result_from_json(result_doc, ph.n) if result_doc else second_order_nf(ph)
        if subcommand == "normalform":
            doc.update(result_to_json(res))
        if subcommand == "hopf" or (subcommand == "normalform" and (hopf or spec.hopf)):
            if subcommand == "hopf":
                doc.update(result_to_json(res))
            doc["hopf"] = hopf_report_to_json(nf_to_hopf(res), params)
            doc["hopf_params"] = {k: str(v) for k, v in sorted(params.items())}
        if subcommand == "verify" or (subcommand == "normalform" and spec.verify):
            doc["verification"] = _verification(ph, res)
            if subcommand == "verify" and not doc["verification"]["ok"]:
                raise VerificationFailed(doc)
        return doc
    if subcommand == "dynamics":
        opts = {**spec.dynamics, **(dynamics_opts or {})}
        eps = [float(e) for e in opts.get("eps", DEFAULT_EPS)]
        x0 = [float(v) for v in opts.get("x0", [0.3, 0.2, 0.1, 0.4][:2 * ph.n] if ph.n == 2
                                          else [0.3] * (2 * ph.n))]
        res = second_order_nf(ph)
        report = compare_nf(ph, res, eps, x0, T=float(opts.get("T", 1.0)),
                            h=float(opts.get("h", 1e-2)), order=int(opts.get("order", 2)),
                            transform=str(opts.get("transform", "lie")))
        doc["comparison"] = report.to_dict()
        doc["comparison_text"] = report.to_text()
        return doc
    raise ValueError(f"unknown subcommand {subcommand!r}")


def render_text(doc: dict) -> str:
    lines = [f"# {doc['command']}: {doc['problem'].get('name') or 'problem'}"]
    if "normal_form" in doc:
        lines.append("normal form  (c0 + eps*c1 + eps^2/2*c2):")
        for k in range(3):
            lines.append(f"  c{k} = {doc['normal_form'][f'order{k}']['text']}")
        lines.append(f"  G0 = {doc['generators']['G0']['text']}")
        lines.append(f"  G1 = {doc['generators']['G1']['text']}")
    if "hopf" in doc:
        lines.append("Hopf form (coefficient of eps^k):")
        for key, entry in doc["hopf"].items():
            lines.append(f"  {key}: {entry['family']}")
            if entry["params"]:
                chosen = ", ".join(f"{p}={doc['hopf_params'].get(p, '0')}" for p in entry["params"])
                lines.append(f"  {key} at {chosen} -> {entry['selected']}")
    if "verification" in doc:
        v = doc["verification"]
        lines.append(f"verification: {'PASS' if v['ok'] else 'FAIL'}")
        lines.append(f"  Lie-transform residual zero: {v['residual_zero']}")
        for k, ok in v["normal_form_condition"].items():
            lines.append(f"  {{H0, nf}} = 0 at {k}: {ok}")
    if "comparison_text" in doc:
        lines.append(doc["comparison_text"])
    return "\n".join(lines) + "\n"


def _emit(doc: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        stream.write(render_text(doc))


def _error(kind: str, exc: Exception, code: int) -> int:
    err = {"type": kind, "message": str(exc)}
    for attr in ("line", "column", "step"):
        if getattr(exc, attr, None) is not None:
            err[attr] = getattr(exc, attr)
    witness = getattr(exc, "witness", None)
    if witness is not None:
        err["witness"] = str(witness)
    sys.stderr.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nf", description=(
        "Second-order normal forms of perturbed resonant oscillators."))
    ap.add_argument("command", choices=("normalform", "hopf", "verify", "dynamics"))
    ap.add_argument("--spec", required=True,
                    help="problem file (JSON or key = value) or a bundled fixture name")
    ap.add_argument("--hopf", action="store_true", help="also rewrite in Hopf variables")
    ap.add_argument("--param", action="append", default=[], metavar="NAME=VAL",
                    help="value for a Hopf family parameter (default 0)")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--result", help="verify: check this normalform JSON instead of recomputing")
    ap.add_argument("--eps", help="dynamics: comma-separated eps values")
    ap.add_argument("--T", type=float, help="dynamics: horizon is T/eps")
    ap.add_argument("--order", type=int, choices=(1, 2), help="dynamics: truncation order")
    ap.add_argument("--transform", choices=("lie", "none"),
                    help="dynamics: read normal-form invariants through Phi_eps or not")
    ap.add_argument("--csv", help="dynamics: write the true trajectory at the first eps here")
    ap.add_argument("-o", "--output", help="write the document here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        params = {}
        for item in args.param:
            if "=" not in item:
                raise ParseError(f"--param expects NAME=VAL, got {item!r}")
            k, v = item.split("=", 1)
            params[k.strip()] = parse_rational(v)
        result_doc = None
        if args.result:
            result_doc = json.loads(Path(args.result).read_text())
        dyn = {}
        if args.eps:
            dyn["eps"] = [float(e) for e in args.eps.split(",")]
        for key in ("T", "order", "transform"):
            if getattr(args, key) is not None:
                dyn[key] = getattr(args, key)
        doc = run(spec, args.command, hopf=args.hopf, params=params, result_doc=result_doc,
                  dynamics_opts=dyn)
        if args.command == "dynamics" and args.csv:
            ph = spec.to_perturbed()
            comp = doc["comparison"]
            e = comp["eps"][0]
            steps = int(round(comp["horizon"] / e / comp["h"]))
            H = ph.hamiltonian(Fraction(e).limit_denominator(10 ** 12))
            xs = integrate(H, comp["x0"], IntegratorConfig(h=comp["h"], steps=steps))
            import numpy as np
            Path(args.csv).write_text(trajectories_csv(np.arange(len(xs)) * comp["h"], xs, ph.n))
    except (ParseError, json.JSONDecodeError) as exc:
        return _error("parse", exc, EXIT_PARSE)
    except PreconditionError as exc:
        return _error("precondition", exc, EXIT_PRECONDITION)
    except KeyError as exc:
        return _error("precondition", PreconditionError(f"missing value {exc}"),
                      EXIT_PRECONDITION)
    except IntegrationError as exc:
        return _error("integration", exc, EXIT_PRECONDITION)
    except VerificationFailed as exc:
        out = open(args.output, "w") if args.output else sys.stdout
        _emit(exc.document, args.format, out)
        return _error("verification", exc, EXIT_VERIFY)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        _emit(doc, args.format, out)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

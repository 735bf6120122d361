"""Command-line entry point: ``omltopo check|rn|balls|topology|geom``."""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import hilbert, topology
from .io import LatticeFormatError, load_source, to_dot, write_atomic
from .lattice import FiniteOml, LatticeError, NotALattice, NotAnOrtholattice, NotAPoset, NotOrthomodular, SizeLimit, validate

EXIT_OK = 0
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_INVALID = 5
EXIT_HYPOTHESIS = 6
EXIT_CERTIFICATE = 7
EXIT_SIZE = 8

# carrier caps: the general family works on L^{#2}, which has (n-1)^2 + 1 elements
GENERAL_MAX_ELEMENTS = 64
ATOM_MAX_ELEMENTS = 128

_STAGES = [
    (NotAPoset, "poset"),
    (NotALattice, "lattice"),
    (NotAnOrtholattice, "ortholattice"),
    (NotOrthomodular, "orthomodular"),
]


class CliFailure(Exception):
    def __init__(self, code: int, reason: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.reason = reason
        self.extra = extra


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(args, text: str):
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _load(args) -> FiniteOml:
    src = load_source(args.source)
    lat = src if isinstance(src, FiniteOml) else validate(src)
    return lat


def _check_cap(lat: FiniteOml, family: str, args):
    cap = GENERAL_MAX_ELEMENTS if family == "general" else ATOM_MAX_ELEMENTS
    if args.cap is not None:
        if args.cap > cap:
            raise CliFailure(EXIT_SIZE, "size_limit", f"--cap {args.cap} exceeds the maximum {cap}")
        cap = args.cap
    if lat.n > cap:
        raise CliFailure(EXIT_SIZE, "size_limit", f"{lat.n} elements exceed the {family}-family cap {cap}")


def cmd_check(args) -> int:
    src = load_source(args.source)
    verdict = {"source": args.source, "poset": False, "lattice": False, "ortholattice": False,
               "orthomodular": False, "atomic": None, "atom_projection": None}
    try:
        lat = src if isinstance(src, FiniteOml) else validate(src)
    except LatticeError as exc:
        for cls, stage in _STAGES:
            if isinstance(exc, cls):
                break
            verdict[stage] = True
        verdict["failed"] = stage
        verdict["witness"] = list(exc.pair)
        verdict["message"] = str(exc)
        _emit(args, _dump(verdict))
        return EXIT_INVALID
    if args.format == "dot":
        _emit(args, to_dot(lat))
        return EXIT_OK
    verdict.update(poset=True, lattice=True, ortholattice=True, orthomodular=True,
                   atomic=lat.is_atomic(), atom_projection=lat.has_atom_projection(),
                   elements=lat.n, atoms=[lat.names[a] for a in lat.atoms])
    _emit(args, _dump(verdict))
    return EXIT_OK


def cmd_rn(args) -> int:
    lat = _load(args)
    family = args.family or "general"
    _check_cap(lat, family, args)
    if family == "general":
        prof = topology.r_general_profile(lat, max_steps=args.max_n)
    else:
        prof = topology.r_at_profile(lat, max_steps=args.max_n)
    out = {
        "kind": prof.kind,
        "elements": list(lat.names),
        "stabilization": prof.stabilization,
        "relations": [{"n": k, "pairs": topology.relation_pairs(lat, prof, k)}
                      for k in range(prof.stabilization + 1)],
    }
    _emit(args, _dump(out))
    return EXIT_OK


def _element(lat: FiniteOml, name: str) -> int:
    try:
        return lat.index(name)
    except KeyError as exc:
        raise CliFailure(EXIT_PARSE, "unknown_element", str(exc)) from None


def cmd_balls(args) -> int:
    lat = _load(args)
    family = args.family or "general"
    _check_cap(lat, family, args)
    eng = topology.engine(lat)
    stab = eng.stabilization(family)
    if args.element:
        centers = [_element(lat, args.element)]
    else:
        centers = list(lat.atoms if family == "at" else range(lat.n))
    if args.n is not None:
        radii = [args.n]
    else:
        radii = list(range((args.max_n if args.max_n is not None else stab + 1) + 1))
    balls = {lat.names[a]: {str(k): sorted(lat.names[b] for b in eng.ball(family, a, k)) for k in radii}
             for a in centers}
    _emit(args, _dump({"kind": family, "stabilization": stab, "balls": balls}))
    return EXIT_OK


def cmd_topology(args) -> int:
    lat = _load(args)
    family = args.family or "general"
    _check_cap(lat, family, args)
    queries = {}
    for q in args.open or []:
        queries[q] = [_element(lat, name) for name in q.split(",") if name]
    report = topology.topology_report(lat, family, max_n=args.max_n, queries=queries)
    _emit(args, report.to_json() + "\n")
    return EXIT_OK


def _lemma_rows(count: int, tol: float):
    thetas = np.linspace(0.05, math.pi / 2 - 0.05, count)
    rows = []
    for th in thetas:
        _, _, cert = hilbert.lemma_extrema(float(th), tol=tol)
        rows.append((float(th), cert.closed_form_min, cert.grid_min, cert.refined_min, cert.abs_err))
    return rows


def cmd_geom(args) -> int:
    if args.geom_command == "lemma":
        tol = args.tol if args.tol is not None else hilbert.GRID_TOL
        try:
            rows = _lemma_rows(args.thetas, tol)
        except hilbert.CertificateFailure as exc:
            raise CliFailure(EXIT_CERTIFICATE, "certificate_failure", str(exc)) from None
        header = ("theta", "closed_form_min", "grid_min", "refined_min", "abs_err")
        if args.format == "json":
            _emit(args, _dump([dict(zip(header, r)) for r in rows]))
        else:
            buf = _io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([[repr(x) for x in r] for r in rows])
            _emit(args, buf.getvalue())
        return EXIT_OK
    if args.geom_command == "ladder":
        ladder = hilbert.ThetaLadder.build(args.n)
        ok = ladder.verify()
        out = {"n": args.n, "verified": ok, "theta_0": ladder.angles[0],
               "last_cosine": str(ladder.cosines[-1]), "last_theta": ladder.angles[-1]}
        _emit(args, _dump(out))
        if not ok:
            raise CliFailure(EXIT_CERTIFICATE, "certificate_failure", "ladder recursion disagrees with closed form")
        return EXIT_OK
    # chain
    tol = args.tol if args.tol is not None else 1e-7
    rng = np.random.default_rng(args.seed)
    traces = []
    worst = 0.0
    for _ in range(args.trials):
        a, b = hilbert.random_pair_at_least(rng, hilbert.theta(args.n))
        ch = hilbert.chain_witness(a, b, args.n)
        worst = max(worst, ch.final_gap, *ch.residuals)
        traces.append(hilbert.chain_trace(ch))
    out = {"n": args.n, "trials": args.trials, "seed": args.seed, "tolerance": tol,
           "max_residual": worst, "passed": worst < tol, "traces": traces}
    _emit(args, _dump(out))
    if worst >= tol:
        raise CliFailure(EXIT_CERTIFICATE, "certificate_failure", f"residual {worst} >= {tol}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "dot"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-n", type=int, default=None, help="largest relation step / ball index emitted")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--cap", type=int, default=None, help="lower the element cap for this run")

    parser = argparse.ArgumentParser(prog="omltopo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a lattice and test its hypotheses")
    p.add_argument("source", help="lattice JSON path or generator spec such as gen:mo:2")
    p.set_defaults(func=cmd_check)

    for name, func, helptext in (("rn", cmd_rn, "relation chain R_0, R_1, ..."),
                                 ("balls", cmd_balls, "neighbourhood balls"),
                                 ("topology", cmd_topology, "full topology report")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source")
        p.add_argument("--family", choices=topology.FAMILIES if name != "rn" else ("at", "general"))
        if name == "balls":
            p.add_argument("--element", default=None)
            p.add_argument("--n", type=int, default=None)
        if name == "topology":
            p.add_argument("--open", action="append", metavar="A,B,...",
                           help="report openness of this comma-separated subset (repeatable)")
        p.set_defaults(func=func)

    g = sub.add_parser("geom", help="numerical certificates on ℝ³")
    gsub = g.add_subparsers(dest="geom_command", required=True)
    gl = gsub.add_parser("lemma", parents=[common])
    gl.add_argument("--thetas", type=int, default=50)
    gd = gsub.add_parser("ladder", parents=[common])
    gd.add_argument("--n", type=int, default=1000)
    gc = gsub.add_parser("chain", parents=[common])
    gc.add_argument("--n", type=int, default=3)
    gc.add_argument("--trials", type=int, default=100)
    g.set_defaults(func=cmd_geom)
    return parser


def _fail(code: int, reason: str, message: str, **extra) -> int:
    sys.stderr.write(json.dumps({"error": reason, "message": message, **extra}, sort_keys=True) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        return _fail(exc.code, exc.reason, str(exc), **exc.extra)
    except OSError as exc:
        return _fail(EXIT_IO, "io_error", str(exc))
    except LatticeFormatError as exc:
        return _fail(EXIT_PARSE, "parse_error", str(exc))
    except LatticeError as exc:
        return _fail(EXIT_INVALID, type(exc).__name__, str(exc), witness=list(exc.pair))
    except SizeLimit as exc:
        return _fail(EXIT_SIZE, "size_limit", str(exc))
    except (topology.NotAtomic, topology.NoAtomProjection, topology.NotAnAtom,
            hilbert.PreconditionError, hilbert.DegenerateInput) as exc:
        return _fail(EXIT_HYPOTHESIS, type(exc).__name__, str(exc))
    except hilbert.CertificateFailure as exc:
        return _fail(EXIT_CERTIFICATE, "certificate_failure", str(exc))


if __name__ == "__main__":
    sys.exit(main())

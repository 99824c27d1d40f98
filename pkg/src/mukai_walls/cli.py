"""Command-line front end.

Exit status: 0 success, 1 negative finding (no wall, invalid certificate,
line misses the wall, unresolved classification), 2 domain or parse error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from . import io as mio
from .classes import Rank2Lattice, enumerate_square_classes, spherical_sequences
from .errors import DomainError, MukaiError, ParseError, UnresolvedError
from .lattice import MukaiVector, NSLattice, mukai_pairing
from .reduction import run_reduction
from .svg import render_walls_svg
from .wallcross import UNCLASSIFIED, classify_wall_kind, wall_lattice_basis
from .walls import (
    LEFT,
    RIGHT,
    VERTICAL,
    Wall,
    certify_no_walls,
    enumerate_candidate_walls,
    hilbert_vector,
    line_meets_wall,
)

__all__ = ["main", "build_parser", "load_config"]

OK, NEGATIVE, DOMAIN = 0, 1, 2

DEFAULTS = {"bounds": (20, 200), "certify_bounds": (500, 10**6), "k_final": 2}


def load_config(path: str | Path) -> dict:
    """``key = value`` lines; recognised keys: bounds, certify_bounds, k_final."""
    parser = configparser.ConfigParser()
    parser.read_string("[default]\n" + Path(path).read_text(encoding="utf-8"))
    section = parser["default"]
    out: dict = {}
    for key in ("bounds", "certify_bounds"):
        if key in section:
            out[key] = _bounds(section[key])
    if "k_final" in section:
        out["k_final"] = section.getint("k_final")
    unknown = set(section) - {"bounds", "certify_bounds", "k_final"}
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}", "")
    return out


def _bounds(text: str) -> tuple[int, int]:
    try:
        c, s = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("bounds must look like C,S") from exc
    return c, s


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected two integers A,B") from exc
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem file (JSON)")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--config", help="key=value file with defaults for bounds, certify_bounds, k_final")
    common.add_argument("--bounds", type=_bounds, help="search bounds C,S (c_max, s_max)")

    p = argparse.ArgumentParser(
        prog="mukai-walls",
        description="Exact Mukai-lattice arithmetic, wall geometry and reduction traces. "
        "Exit status: 0 success, 1 negative finding, 2 domain or parse error. "
        "MUKAI_WALLS_THREADS caps the worker threads used for wall enumeration.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("pair", parents=[common], help="Mukai pairing of 'vector' and 'other'")
    sub.add_parser("square", parents=[common], help="square of 'vector'")
    sp = sub.add_parser("spherical-classes", parents=[common],
                        help="square -2 classes of a rank-2 lattice and its reflection sequences")
    sp.add_argument("--bound", type=int, default=10, help="box size for the scan")
    sp.add_argument("--count", type=int, default=5, help="terms per reflection branch")

    for name, helptext in (("walls", "candidate walls of (1,0,1-n) as JSON"),
                           ("plot-walls", "candidate walls of (1,0,1-n) as SVG")):
        w = sub.add_parser(name, parents=[common], help=helptext)
        w.add_argument("--d", type=int, required=True, help="H^2 = 2d")
        w.add_argument("--n", type=int, required=True)
        w.add_argument("--quadrant", choices=[LEFT, RIGHT], default=LEFT)
        w.add_argument("--no-line-filter", action="store_true",
                       help="keep candidates crossing a quantized line beta=-1/k")
        if name == "walls":
            w.add_argument("--svg", help="also write an SVG picture here")

    cl = sub.add_parser("check-line", parents=[common], help="does the wall of (0,cH,s) meet beta=-1/k")
    cl.add_argument("--n", type=int, required=True)
    cl.add_argument("--k", type=int, required=True)
    cl.add_argument("--u", type=_pair, required=True, metavar="C,S", help="destabilizer (0, cH, s)")

    sub.add_parser("classify-wall", parents=[common],
                   help="wall lattice at 'stab' and numerical wall type of 'vector' "
                   "(or type of 'pair' in a 2x2 Gram lattice)")

    r = sub.add_parser("reduce", parents=[common], help="reduction trace to (1,0,1-n)")
    r.add_argument("--k", type=int, help="k_final for the last deformation (default 2)")

    c = sub.add_parser("certify", parents=[common], help="no-wall certificate for d=k^2(n-1)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--exhaustive", action="store_true", help="classify every candidate separately")
    return p


def _problem(args) -> mio.ProblemFile:
    if not args.input:
        raise DomainError("this command needs --input")
    return mio.parse_problem(Path(args.input).read_bytes())


def _need(value, name: str):
    if value is None:
        raise DomainError(f"problem file needs '{name}'")
    return value


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _setting(args, cfg: dict, key: str, problem_value=None):
    flag = {"bounds": args.bounds, "certify_bounds": args.bounds,
            "k_final": getattr(args, "k", None)}.get(key)
    for value in (flag, problem_value, cfg.get(key)):
        if value is not None:
            return value
    return DEFAULTS[key]


def _wall_list(args, cfg) -> tuple[list[Wall], dict]:
    bounds = _setting(args, cfg, "bounds")
    walls = enumerate_candidate_walls(args.d, args.n, args.quadrant, bounds,
                                      line_filter=not args.no_line_filter)
    lat = NSLattice.rank_one(args.d)
    hc = Wall(VERTICAL, MukaiVector(0, (0,), 1, lat), hilbert_vector(args.d, args.n), beta=0)
    doc = {
        "d": args.d,
        "n": args.n,
        "quadrant": args.quadrant,
        "bounds": list(bounds),
        "walls": [mio.wall_to_json(w) for w in walls],
        "vertical": mio.wall_to_json(hc),
    }
    return walls + [hc], doc


def _run(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    cmd = args.command

    if cmd in ("pair", "square"):
        prob = _problem(args)
        v = _need(prob.vector, "vector")
        if cmd == "square":
            _emit(args, mio.dumps({"square": v.square}) + "\n")
        else:
            _emit(args, mio.dumps({"pairing": mukai_pairing(v, _need(prob.other, "other"))}) + "\n")
        return OK

    if cmd == "spherical-classes":
        prob = _problem(args)
        L = Rank2Lattice(prob.lattice.gram)
        doc = {"classes": [list(p) for p in enumerate_square_classes(L, -2, args.bound)]}
        if L.gram[0][0] == L.gram[1][1] == -2 and L.gram[0][1] >= 2:
            upper, lower = spherical_sequences(L, args.count)
            doc["upper"] = [list(p) for p in upper.entries]
            doc["lower"] = [list(p) for p in lower.entries]
        _emit(args, mio.dumps(doc) + "\n")
        return OK if doc["classes"] else NEGATIVE

    if cmd in ("walls", "plot-walls"):
        walls, doc = _wall_list(args, cfg)
        if cmd == "plot-walls":
            _emit(args, render_walls_svg(walls))
            return OK
        if args.svg:
            Path(args.svg).write_text(render_walls_svg(walls), encoding="utf-8")
        _emit(args, mio.dumps(doc) + "\n")
        return OK if doc["walls"] else NEGATIVE

    if cmd == "check-line":
        c, s = args.u
        lat = NSLattice.rank_one(args.k * args.k * (args.n - 1))
        meets = line_meets_wall(args.n, args.k, MukaiVector(0, (c,), s, lat))
        _emit(args, mio.dumps({"meets": meets, "d": lat.degree}) + "\n")
        return OK if meets else NEGATIVE

    if cmd == "classify-wall":
        prob = _problem(args)
        try:
            if prob.pair is not None:
                H = Rank2Lattice(prob.lattice.gram)
                kind = classify_wall_kind(H, prob.pair)
                doc = {"kind": mio.wall_kind_to_json(kind)}
            else:
                v = _need(prob.vector, "vector")
                H = wall_lattice_basis(_need(prob.stab, "stab"), v)
                kind = classify_wall_kind(H, v)
                doc = {
                    "lattice": {"gram": [list(r) for r in H.gram],
                                "basis": [mio.vector_to_json(b) for b in H.basis],
                                "classification": H.classification},
                    "kind": mio.wall_kind_to_json(kind),
                }
        except UnresolvedError as exc:
            _emit(args, mio.dumps({"unresolved": str(exc), "bound": exc.bound}) + "\n")
            return NEGATIVE
        _emit(args, mio.dumps(doc) + "\n")
        return NEGATIVE if kind.tag == UNCLASSIFIED else OK

    if cmd == "reduce":
        prob = _problem(args)
        k = _setting(args, cfg, "k_final", prob.k_final)
        bounds = _setting(args, cfg, "certify_bounds", prob.bounds)
        trace = run_reduction(prob.lattice, _need(prob.vector, "vector"), k, bounds)
        _emit(args, mio.emit_trace_json(trace) + "\n")
        return OK if trace.ok else NEGATIVE

    if cmd == "certify":
        bounds = _setting(args, cfg, "certify_bounds")
        cert = certify_no_walls(args.n, args.k, bounds, exhaustive=args.exhaustive)
        _emit(args, mio.dumps(mio.certificate_to_json(cert)) + "\n")
        return OK if cert.valid else NEGATIVE

    raise DomainError(f"unknown command {cmd}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ParseError as exc:
        print(f"parse error at {exc.pointer or '/'}: {exc.reason}", file=sys.stderr)
        return DOMAIN
    except (MukaiError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

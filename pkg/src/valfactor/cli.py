"""Command line interface.

::

    valfactor factor -i problem.json [-o cert.json] [--trace] [--cap K]
    valfactor verify -i cert.json
    valfactor monomialize -i poly.json
    valfactor perron --weights w.json --steps H

Exit codes: 0 success or accepted certificate, 1 rejected certificate or an
algorithmic diagnostic (iteration cap, broken internal invariant), 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional

from . import jsonio
from .errors import AlgorithmError, CapExceeded
from .factor import verify_zigzag, zigzag_factor
from .jsonio import Problem, ProblemError, parse_problem
from .perron import DEFAULT_CAP, perron_accumulate
from .uniformize import monomialize

EXIT_OK, EXIT_REJECT, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("valfactor")


def run(problem: Problem, cap: int = DEFAULT_CAP):
    """Dispatch a parsed problem; returns ``(exit_code, output_document)``."""
    p = problem.payload
    try:
        if problem.kind == "factor":
            cert = zigzag_factor(p["map"], p["weights"], cap=cap)
            log.info("factor: %d upper nodes, %d moves", len(cert.arrows),
                     sum(len(a.left) + len(a.right) for a in cert.arrows))
            return EXIT_OK, jsonio.encode_cert(cert)
        if problem.kind == "monomialize":
            mf = monomialize(p["poly"], p["weights"], cap=cap)
            log.info("monomialize: %d Perron steps", mf.transform.h)
            return EXIT_OK, jsonio.encode_monomial_form(mf)
        if problem.kind == "perron":
            pm, _ = perron_accumulate(p["weights"], p["steps"])
            return EXIT_OK, jsonio.encode_perron(pm)
        report = verify_zigzag(p["cert"])
        log.info("verify: %s", "accept" if report else f"reject ({report.reason})")
        return (EXIT_OK if report else EXIT_REJECT), report.as_dict()
    except (CapExceeded, AlgorithmError) as exc:
        return EXIT_REJECT, {"error": f"{exc.__class__.__name__}: {exc}"}
    except ValueError as exc:
        return EXIT_INPUT, {"error": str(exc)}


def execute(kind: str, data, steps: Optional[int] = None, cap: int = DEFAULT_CAP):
    """Parse raw input bytes and run; returns ``(exit_code, output_document)``."""
    try:
        problem = parse_problem(data, kind, steps)
    except ProblemError as exc:
        return EXIT_INPUT, {"error": str(exc)}
    return run(problem, cap)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valfactor", description=__doc__.split("::")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--trace", action="store_true", help="human-readable trace on stderr")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="iteration cap for all searches")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")

    p = sub.add_parser("factor", help="zigzag factorization certificate of a monomial map")
    p.add_argument("-i", "--input", required=True)
    common(p)
    p = sub.add_parser("verify", help="check a zigzag certificate")
    p.add_argument("-i", "--input", required=True)
    common(p)
    p = sub.add_parser("monomialize", help="Perron transform making a polynomial a monomial times a unit")
    p.add_argument("-i", "--input", required=True)
    common(p)
    p = sub.add_parser("perron", help="accumulated Perron matrix of a weight vector")
    p.add_argument("--weights", required=True)
    p.add_argument("--steps", type=int, required=True)
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    if args.trace and not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        log.addHandler(handler)
        log.setLevel(logging.DEBUG)
    if args.cap < 1:
        print("error: --cap must be positive", file=sys.stderr)
        return EXIT_INPUT

    source = args.weights if args.command == "perron" else args.input
    try:
        data = _read(source)
    except OSError as exc:
        print(f"error: cannot read {source}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    steps = args.steps if args.command == "perron" else None
    code, doc = execute(args.command, data, steps, args.cap)
    text = jsonio.dumps(doc)
    if "error" in doc:
        print(f"error: {doc['error']}", file=sys.stderr)
    if args.output and "error" not in doc:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

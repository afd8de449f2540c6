"""Command-line interface.

One executable with subcommands, machine-readable JSON on stdout, diagnostics
on stderr.  Exit codes: 0 success, 1 input or validation error, 2 numerical
failure (including verification thresholds being exceeded).  Identical
arguments and input files produce byte-identical stdout and output files;
every --seed defaults to 0, never to entropy.
"""

from __future__ import annotations

import argparse
import json
import sys

from .canonical import (
    find_local_unitaries,
    qubit_alt_decomposition,
    qutrit_alt_decomposition,
)
from .errors import (
    BadParams,
    BadShape,
    DimensionMismatch,
    EntinvError,
    Infeasible,
    InvariantMismatch,
    KInconsistent,
    NotNormalized,
    NumericalFailure,
    OutOfRange,
)
from .explorer import (
    boundary_curves,
    emit_region_plot,
    sample_invariant_region,
    verify_d4_conjecture,
    write_region_csv,
)
from .extremal import ExtremalBounds, p_form_bounds_for_p1, schmidt_bounds_for_K, verify_range_equality
from .invariants import compute_invariants
from .schmidt import schmidt_decompose
from .states import (
    complex_matrix_to_lists,
    random_haar_state,
    read_state_file,
    state_to_json,
)

APPENDIX_THRESHOLD = 1e-8

_INPUT_ERRORS = (
    BadShape,
    NotNormalized,
    BadParams,
    OutOfRange,
    DimensionMismatch,
    InvariantMismatch,
    OSError,
)
_NUMERICAL_ERRORS = (NumericalFailure, KInconsistent, Infeasible)


def _emit(obj, pretty: bool) -> None:
    print(json.dumps(obj, indent=2 if pretty else None))


def _cmd_invariants(args) -> int:
    state = read_state_file(args.state)
    inv = compute_invariants(state)
    out = {"I": [float(v) for v in inv.I]}
    if state.d == 3:
        out["I1_prime"] = inv.I1_prime
        out["I2_prime"] = inv.I2_prime
        out["K"] = inv.K
    _emit(out, args.pretty)
    return 0


def _cmd_schmidt(args) -> int:
    state = read_state_file(args.state)
    dec = schmidt_decompose(state)
    out = {"kappa": [float(v) for v in dec.kappa.kappa]}
    if args.emit_unitaries:
        out["U_A"] = complex_matrix_to_lists(dec.U_A.entries)
        out["U_B"] = complex_matrix_to_lists(dec.U_B.entries)
    _emit(out, args.pretty)
    return 0


def _cmd_decompose(args) -> int:
    state = read_state_file(args.state)
    if state.d == 2:
        dec = qubit_alt_decomposition(state)
    elif state.d == 3:
        dec = qutrit_alt_decomposition(state)
    else:
        raise DimensionMismatch(
            f"canonical decomposition supports d in {{2, 3}}, got d={state.d}"
        )
    lu = find_local_unitaries(state, dec.canonical_state)
    out = {
        "p": [float(v) for v in dec.p],
        "theta": dec.theta,
        "residual": lu.residual,
    }
    if args.emit_unitaries:
        out["U_A"] = complex_matrix_to_lists(lu.U_A.entries)
        out["U_B"] = complex_matrix_to_lists(lu.U_B.entries)
        out["gamma"] = lu.gamma
    _emit(out, args.pretty)
    return 0


def _cmd_lu_find(args) -> int:
    source = read_state_file(args.source)
    target = read_state_file(args.target)
    lu = find_local_unitaries(source, target)
    out = {"gamma": lu.gamma, "residual": lu.residual}
    if args.emit_unitaries:
        out["U_A"] = complex_matrix_to_lists(lu.U_A.entries)
        out["U_B"] = complex_matrix_to_lists(lu.U_B.entries)
    _emit(out, args.pretty)
    return 0


def _bounds_dict(bounds: ExtremalBounds) -> dict:
    out = {
        "K": bounds.K,
        "p1": bounds.p1,
        "phi1": bounds.phi1,
        "phi2": bounds.phi2,
        "phi3": bounds.phi3,
        "t_minus": bounds.t_minus,
        "t_plus": bounds.t_plus,
        "I1_min": bounds.I1_min,
        "I1_max": bounds.I1_max,
    }
    if bounds.p3_argmin is not None:
        out["p3_argmin"] = bounds.p3_argmin
        out["p3_argmax"] = bounds.p3_argmax
    return out


def _cmd_bounds(args) -> int:
    if args.K is not None:
        bounds = schmidt_bounds_for_K(args.K)
    else:
        bounds = p_form_bounds_for_p1(args.p1)
    _emit(_bounds_dict(bounds), args.pretty)
    return 0


def _cmd_verify_appendix(args) -> int:
    report = verify_range_equality(args.grid)
    ok = (
        report.max_dev_min <= APPENDIX_THRESHOLD
        and report.max_dev_max <= APPENDIX_THRESHOLD
    )
    _emit(
        {
            "grid_size": int(report.p1_grid.size),
            "max_dev_min": report.max_dev_min,
            "max_dev_max": report.max_dev_max,
            "threshold": APPENDIX_THRESHOLD,
            "pass": ok,
        },
        args.pretty,
    )
    return 0 if ok else 2


def _cmd_region(args) -> int:
    count = write_region_csv(sample_invariant_region(args.samples, args.seed), args.out)
    svg = None
    if args.svg:
        emit_region_plot(args.out, boundary_curves(512), args.svg)
        svg = args.svg
    _emit({"samples": count, "csv": args.out, "svg": svg}, args.pretty)
    return 0


def _cmd_verify_d4(args) -> int:
    report = verify_d4_conjecture(args.samples, args.seed, args.tol)
    _emit(report.to_dict(), args.pretty)
    return 0 if not report.failures else 2


def _cmd_random(args) -> int:
    state = random_haar_state(args.d, args.seed)
    print(state_to_json(state, pretty=args.pretty))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entinv",
        description=(
            "Local-unitary entanglement invariants and canonical "
            "decompositions of bipartite pure states."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", help="indent JSON output")
        p.set_defaults(func=func)
        return p

    p = add("invariants", _cmd_invariants, "print invariants of a state JSON file")
    p.add_argument("state", help="path to a state JSON file")

    p = add("schmidt", _cmd_schmidt, "Schmidt coefficients (and unitaries) of a state")
    p.add_argument("state", help="path to a state JSON file")
    p.add_argument(
        "--emit-unitaries", action="store_true", help="include U_A and U_B in output"
    )

    p = add("decompose", _cmd_decompose, "canonical triangular decomposition (d=2,3)")
    p.add_argument("state", help="path to a state JSON file")
    p.add_argument(
        "--emit-unitaries",
        action="store_true",
        help="include the mapping unitaries and global phase",
    )

    p = add("lu-find", _cmd_lu_find, "local-unitary map between two states")
    p.add_argument("source", help="path to the source state JSON file")
    p.add_argument("target", help="path to the target state JSON file")
    p.add_argument(
        "--emit-unitaries", action="store_true", help="include U_A and U_B in output"
    )

    p = add("bounds", _cmd_bounds, "extremal I_1 bounds at fixed K or fixed p1")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--K", type=float, help="fixed K in [0, 1/27]")
    group.add_argument("--p1", type=float, help="fixed leading weight in [0, 1]")

    p = add(
        "verify-appendix",
        _cmd_verify_appendix,
        "verify equality of the two closed-form bound pairs on a p1 grid",
    )
    p.add_argument("--grid", type=int, default=1001, help="grid size (default 1001)")

    p = add("region", _cmd_region, "sample the qutrit invariant region to CSV")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", default=None, help="optional SVG scatter plot path")

    p = add(
        "verify-d4",
        _cmd_verify_d4,
        "verify canonical-ansatz coverage of random d=4 Schmidt spectra",
    )
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("random", _cmd_random, "print a seeded Haar-random state as JSON")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)

    return parser


def run(argv) -> int:
    """Dispatch a CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the input-error code.
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EntinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line front end.

Exit codes: 0 success/verified, 1 verification or classicality failure,
2 DSL parse error, 3 configuration or kernel error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .algebra import EXACT, FLOAT, DEFAULT_TOL, KernelError, UMatrix, phase_distance
from .circuit import (
    AUTO,
    NotClassical,
    ParseError,
    compile_circuit,
    count_gates,
    merge_adjacent,
    parse_dsl,
    serialize_dsl,
    truth_table,
)
from .constructions import canonical_fredkin_circuit, fredkin_from_table, m_circuit, m_matrix, toffoli_matrix
from .gates import basis_bits

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3


class ConfigError(Exception):
    """Bad flags, unreadable input or unsupported target (exit 3)."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _load_circuit(path: str):
    text = _read(path)
    try:
        return parse_dsl(text)
    except ParseError as exc:
        exc.path = path
        raise


def _kernel(args) -> str:
    if getattr(args, "exact", False):
        return EXACT
    if getattr(args, "float", False):
        return FLOAT
    return AUTO


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_lambda(text: str) -> float:
    try:
        lam = float(text)
    except ValueError:
        raise ConfigError(f"bad lambda {text!r}") from None
    if not math.isfinite(lam):
        raise ConfigError("lambda must be finite")
    return lam


def resolve_target(spec: str) -> UMatrix:
    """fredkin | toffoli | m:<lambda> | file:<matrix.json>"""
    if spec == "fredkin":
        return fredkin_from_table()
    if spec == "toffoli":
        return toffoli_matrix()
    if spec.startswith("m:"):
        return m_matrix(parse_lambda(spec[2:]))
    if spec.startswith("file:"):
        try:
            m = UMatrix.from_json(json.loads(_read(spec[5:])))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad matrix file {spec[5:]}: {exc}") from None
        if m.dim != 8:
            raise ConfigError(f"target matrix must be 8x8, got {m.dim}x{m.dim}")
        return m
    raise ConfigError(f"unknown target {spec!r}; expected fredkin, toffoli, m:<lambda> or file:<path>")


# subcommands ---------------------------------------------------------------------------


def cmd_compile(args) -> int:
    c = _load_circuit(args.file)
    m = compile_circuit(c, _kernel(args))
    if args.json or not args.text:
        _emit(_dump(m.to_json()), args.output)
    else:
        _emit(m.pretty() + "\n", args.output)
    return EXIT_OK


def _first_mismatch(got: UMatrix, want: UMatrix, tol: float):
    a, b = got.to_numpy(), want.to_numpy()
    for i in range(8):
        for j in range(8):
            exact = got.is_exact and want.is_exact
            if (got[i, j] != want[i, j]) if exact else abs(a[i, j] - b[i, j]) > tol:
                return i, j, complex(a[i, j]), complex(b[i, j])
    return None


def cmd_verify(args) -> int:
    kernel = _kernel(args)
    if kernel == EXACT and args.tol is not None and args.tol != 0:
        raise ConfigError("--exact compares structurally; --tol must be omitted or 0")
    if args.tol is not None and args.tol < 0:
        raise ConfigError("--tol must be non-negative")
    target = resolve_target(args.target)
    c = _load_circuit(args.file)
    if kernel == EXACT and not target.is_exact:
        raise ConfigError(f"target {args.target!r} is not exact; drop --exact to compare with a tolerance")
    got = compile_circuit(c, kernel)
    tol = DEFAULT_TOL if args.tol is None else args.tol
    max_err = got.max_abs_diff(target)
    report = {"target": args.target, "kernel": got.kernel, "up_to_phase": args.up_to_phase}
    if args.up_to_phase:
        d = phase_distance(got, target)
        ok = d <= tol
        report.update(phase_distance=d, tol=tol)
    elif got.is_exact and target.is_exact:
        ok = got == target
        report.update(comparison="exact")
    else:
        ok = max_err <= tol
        report.update(comparison="max_abs", tol=tol)
    report.update(passed=ok, max_abs_error=max_err)
    if not ok and not args.up_to_phase:
        i, j, g, w = _first_mismatch(got, target, tol)
        report["first_mismatch"] = {"row": i, "col": j, "got": [g.real, g.imag], "want": [w.real, w.imag]}
    if args.json:
        sys.stdout.write(_dump(report))
    else:
        status = "VERIFIED" if ok else "MISMATCH"
        print(f"{status}: {args.file} vs {args.target} (max abs error {max_err:.3g})")
        if "phase_distance" in report:
            print(f"phase distance {report['phase_distance']:.3g} (tol {tol:g})")
        if "first_mismatch" in report:
            mm = report["first_mismatch"]
            print(f"first mismatching entry: row {mm['row']}, col {mm['col']}: got {g:.6g}, want {w:.6g}")
    return EXIT_OK if ok else EXIT_FAIL


def _bits(i: int) -> str:
    return "   ".join(str(b) for b in basis_bits(i))


def cmd_truth_table(args) -> int:
    c = _load_circuit(args.file)
    try:
        table = truth_table(compile_circuit(c, _kernel(args)))
    except NotClassical as exc:
        print(f"not a classical gate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        rows = [
            {"input": list(inp), "output": list(out), "phase": [complex(p).real, complex(p).imag]}
            for inp, out, p in table.rows()
        ]
        sys.stdout.write(_dump({"rows": rows, "unit_phases": table.unit_phases}))
        return EXIT_OK
    show_phase = not table.unit_phases
    header = "a_i b_i c_i | a_o b_o c_o"
    print(header + (" | phase" if show_phase else ""))
    print("-" * (len(header) + (8 if show_phase else 0)))
    for j, i in enumerate(table.mapping):
        line = f" {_bits(j)}  |  {_bits(i)}"
        if show_phase:
            line += f"  | {table.phases[j]}"
        print(line)
    return EXIT_OK


def cmd_count(args) -> int:
    c = _load_circuit(args.file)
    if args.merge:
        c = merge_adjacent(c)
    one, two = count_gates(c)
    if args.json:
        sys.stdout.write(_dump({"one_body": one, "two_body": two, "merged": args.merge}))
    else:
        print(f"1-body: {one}, 2-body: {two}")
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.name == "canonical":
        c = canonical_fredkin_circuit()
        head = "# Fredkin gate from nine gates, execution order:\n# adder, V/U commutator block, -i phase, subtracter\n"
    elif args.name.startswith("m:"):
        lam = parse_lambda(args.name[2:])
        c = m_circuit(lam)
        head = f"# commutator block realising I6 (+) (cos L + i sin L sigma_1), L = {lam!r}\n"
    else:
        raise ConfigError(f"unknown demo {args.name!r}; expected canonical or m:<lambda>")
    _emit(head + serialize_dsl(c), args.output)
    return EXIT_OK


def cmd_search(args) -> int:
    from .synth import SynthProblem, optimize, parse_slots

    target = resolve_target(args.target)
    try:
        slots = parse_slots(args.slots)
        problem = SynthProblem(target, slots, args.restarts, args.iters, args.seed, args.target)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    result = optimize(problem, backend=args.backend)
    text = result.to_json()
    _emit(text, args.output)
    if args.output:
        print(f"best_distance {result.best_distance:.3e} over {args.restarts} restarts; report written to {args.output}")
    return EXIT_OK


# parser ---------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _kernel_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact Q(i, sqrt2) arithmetic")
    g.add_argument("--float", action="store_true", help="double-precision complex arithmetic")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fredkin-lab", description="Verify and synthesise small quantum gate circuits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compile", help="compile a circuit file to its 8x8 matrix (JSON)")
    p.add_argument("file")
    _kernel_flags(p)
    p.add_argument("--json", action="store_true", help="JSON matrix output (the default)")
    p.add_argument("--text", action="store_true", help="human-readable matrix instead of JSON")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="compare a compiled circuit against a target")
    p.add_argument("file")
    p.add_argument("--target", required=True, help="fredkin | toffoli | m:<lambda> | file:<matrix.json>")
    _kernel_flags(p)
    p.add_argument("--tol", type=float, default=None, help=f"tolerance (default {DEFAULT_TOL:g})")
    p.add_argument("--up-to-phase", action="store_true", help="ignore a global phase")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("truth-table", help="print the classical truth table of a circuit")
    p.add_argument("file")
    _kernel_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_truth_table)

    p = sub.add_parser("count", help="count one- and two-body gates")
    p.add_argument("file")
    p.add_argument("--merge", action="store_true", help="merge adjacent gates first")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("demo", help="emit a demo circuit in the DSL")
    p.add_argument("name", help="canonical | m:<lambda>")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("search", help="numerical search for a controlled-gate decomposition")
    p.add_argument("--target", required=True, help="fredkin | toffoli | m:<lambda> | file:<matrix.json>")
    p.add_argument("--slots", default="bc,ac,bc,ac", help="comma-separated ctrl/target pairs (default bc,ac,bc,ac)")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend (default: numba unless FREDKIN_LAB_DISABLE_NUMBA is set)")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true", help="JSON report (always on; accepted for symmetry)")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        where = getattr(exc, "path", "<input>")
        print(f"{where}:{exc.line}:{exc.column}: error: {exc.message}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, KernelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

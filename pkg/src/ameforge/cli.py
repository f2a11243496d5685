"""Command-line entry point.

Exit codes: 0 when the checked property holds, 1 when it does not, 2 on
usage or input errors.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from contextlib import redirect_stderr
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import catalog as cat
from .circuit import build_ame43_circuit, describe, simulate_circuit, zero_state
from .codes import (
    Code,
    code_to_state,
    drop_letter,
    existence_bound,
    greedy_mds_search,
    is_mds,
    rs_code,
    shorten_code,
    singleton_bound,
)
from .designs import mols, sudoku_digit_to_permutation, verify_symmetric_sudoku
from .errors import AmeError
from .fileio import (
    code_from_text,
    code_to_text,
    dump_json,
    grid_from_text,
    grid_to_text,
    load_object,
    matrix_to_json,
    parse_json,
    state_to_json,
)
from .multiunitary import IndexedMatrix, is_complex_hadamard, is_k_unitary, state_from_matrix
from .search import AnnealConfig, average_page_entropy, minimize_potential, page_prediction
from .state import DEFAULT_TOL, PureState, support
from .uniformity import entanglement_potential, is_k_uniform

TOLERANCE_ENV = "AMEFORGE_TOLERANCE"


@dataclass
class CommandOutcome:
    exit_code: int
    text: str
    report: Any = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


class _UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--tolerance", type=float, default=None, help="numerical tolerance")
    p.add_argument("--jobs", type=int, default=1, help="worker count for parallel loops")
    p.add_argument("--out", type=Path, default=None, help="write the produced object here")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="ameforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="k-uniformity of a state file")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("verify-matrix", parents=[common], help="multi-unitarity of a matrix file")
    p.add_argument("file", nargs="?", default="-")

    p = sub.add_parser("catalog", parents=[common], help="list or emit catalog objects")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")

    p = sub.add_parser("construct", parents=[common], help="build a state, matrix or code")
    p.add_argument("kind", choices=["phi", "displacement", "rs", "from-code"])
    p.add_argument("arg")

    p = sub.add_parser("search-mds", parents=[common], help="greedy lexicographic code search")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)

    p = sub.add_parser("code", parents=[common], help="inspect or transform a code file")
    p.add_argument("action", choices=["verify", "shorten", "drop"])
    p.add_argument("file")
    p.add_argument("position", nargs="?", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=None)

    p = sub.add_parser("mols", parents=[common], help="field MOLS of a prime-power order")
    p.add_argument("d", type=int)

    p = sub.add_parser("sudoku", parents=[common], help="symmetric sudoku checks")
    p.add_argument("action", choices=["verify", "extract"])
    p.add_argument("file")
    p.add_argument("digit", nargs="?", type=int)

    p = sub.add_parser("anneal", parents=[common], help="minimize the entanglement potential")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    defaults = AnnealConfig()
    p.add_argument("--temperature", type=float, default=defaults.temperature)
    p.add_argument("--cooling", type=float, default=defaults.cooling)
    p.add_argument("--sweeps", type=int, default=defaults.sweeps)
    p.add_argument("--moves", type=int, default=defaults.moves)
    p.add_argument("--restarts", type=int, default=defaults.restarts)
    p.add_argument("--move-scale", type=float, default=defaults.move_scale)

    p = sub.add_parser("page-entropy", parents=[common], help="Haar half-chain entropy")
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, default=500)

    p = sub.add_parser("circuit", parents=[common], help="the four-qutrit preparation circuit")
    p.add_argument("name", choices=["ame43"])
    p.add_argument("--simulate", action="store_true")
    return parser


def _tolerance(args) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get(TOLERANCE_ENV)
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise AmeError(f"{TOLERANCE_ENV}={env!r} is not a number") from exc
    return DEFAULT_TOL


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise AmeError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise AmeError(f"cannot write {path}: {exc.strerror}") from exc


def _emit_object(obj, args) -> str:
    text = dump_json(state_to_json(obj) if isinstance(obj, PureState) else matrix_to_json(obj))
    if args.out:
        _write(args.out, text)
        return f"wrote {args.out}\n"
    return text


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def _verify(args, stdin) -> CommandOutcome:
    tol = _tolerance(args)
    obj = load_object(_read(args.file, stdin))
    state = state_from_matrix(obj, tol) if isinstance(obj, IndexedMatrix) else obj
    k = args.k if args.k is not None else state.num_parties // 2
    rep = is_k_uniform(state, k, tol=tol, jobs=args.jobs)
    report = rep.as_dict() | {"num_parties": state.num_parties, "local_dim": state.local_dim}
    text = (
        f"parties {state.num_parties}, local dimension {state.local_dim}\n"
        f"k tested: {rep.k}\n"
        f"verdict: {'uniform' if rep.is_uniform else 'not uniform'}\n"
        f"worst partition: {list(rep.worst_partition)}\n"
        f"max deviation: {_fmt(rep.max_deviation)}\n"
    )
    return CommandOutcome(0 if rep.is_uniform else 1, text, report)


def _verify_matrix(args, stdin) -> CommandOutcome:
    tol = _tolerance(args)
    obj = load_object(_read(args.file, stdin))
    if not isinstance(obj, IndexedMatrix):
        raise AmeError("expected a matrix file")
    rep = is_k_unitary(obj, tol=tol, jobs=args.jobs)
    report = rep.as_dict() | {"complex_hadamard": is_complex_hadamard(obj, tol)}
    lines = [
        f"order {obj.order} (d={obj.local_dim}, k={obj.half_order})",
        f"reorderings checked: {rep.checked_reorderings}",
        f"verdict: {'k-unitary' if rep.is_k_unitary else 'not k-unitary'}",
        f"max deviation: {_fmt(rep.max_deviation)}",
        f"complex Hadamard: {report['complex_hadamard']}",
    ]
    lines += [f"  fails on rows {list(s)}: {_fmt(v)}" for s, v in rep.failures]
    return CommandOutcome(0 if rep.is_k_unitary else 1, "\n".join(lines) + "\n", report)


def _catalog(args, stdin) -> CommandOutcome:
    if args.action == "list":
        entries = [cat.catalog_state(n) for n in cat.CATALOG_NAMES]
        report = [{"name": e.name, "kind": e.kind, "description": e.description} for e in entries]
        text = "".join(f"{e.name:16s} {e.kind:6s} {e.description}\n" for e in entries)
        return CommandOutcome(0, text, report)
    if not args.name:
        raise AmeError("catalog emit needs a NAME")
    entry = cat.catalog_state(args.name)
    text = _emit_object(entry.obj, args)
    return CommandOutcome(0, text, None)


def _construct(args, stdin) -> CommandOutcome:
    if args.kind == "from-code":
        code = code_from_text(_read(args.arg, stdin))
        return CommandOutcome(0, _emit_object(code_to_state(code), args))
    try:
        d = int(args.arg)
    except ValueError as exc:
        raise AmeError(f"expected an integer dimension, got {args.arg!r}") from exc
    if args.kind == "phi":
        return CommandOutcome(0, _emit_object(cat.phi_state(d), args))
    if args.kind == "displacement":
        return CommandOutcome(0, _emit_object(cat.displacement_block_matrix(d), args))
    code = rs_code(d)
    text = code_to_text(code)
    if args.out:
        _write(args.out, text)
        text = f"wrote {args.out}\n"
    return CommandOutcome(0, text, {"words": code.strings()})


def _code_report(code: Code) -> dict:
    dist = code.min_distance
    return {
        "length": code.length,
        "alphabet": code.alphabet,
        "words": len(code),
        "min_distance": dist,
        "singleton_bound": singleton_bound(code.length, code.alphabet, dist),
        "mds": is_mds(code),
    }


def _code(args, stdin) -> CommandOutcome:
    code = code_from_text(_read(args.file, stdin), args.alphabet)
    if args.action == "verify":
        rep = _code_report(code)
        text = "".join(f"{k}: {v}\n" for k, v in rep.items())
        return CommandOutcome(0 if rep["mds"] else 1, text, rep)
    new = shorten_code(code) if args.action == "shorten" else drop_letter(code, args.position)
    text = code_to_text(new)
    if args.out:
        _write(args.out, text)
        text = f"wrote {args.out}\n"
    return CommandOutcome(0, text, _code_report(new) | {"code": new.strings()})


def _search_mds(args, stdin) -> CommandOutcome:
    res = greedy_mds_search(args.n, args.d)
    bound = existence_bound(args.n, args.d)
    report = {
        "n": args.n,
        "d": args.d,
        "success": res.success,
        "verdict": res.verdict,
        "kept": len(res.code),
        "target": res.target_size,
        "distance_threshold": res.threshold,
        "existence_bound_holds": bound,
        "words": res.code.strings(),
    }
    text = code_to_text(res.code)
    if args.out:
        _write(args.out, text)
        text = f"wrote {args.out}\n"
    note = (
        "existence bound holds" if bound
        else "existence bound violated: no minimal-support AME state exists"
    )
    text += f"# {res.verdict}: kept {len(res.code)} of {res.target_size} words; {note}\n"
    return CommandOutcome(0 if res.success else 1, text, report)


def _mols(args, stdin) -> CommandOutcome:
    squares = mols(args.d)
    text = "\n".join(grid_to_text(s) for s in squares)
    return CommandOutcome(0, text, {"order": args.d, "squares": [s.tolist() for s in squares]})


def _sudoku(args, stdin) -> CommandOutcome:
    grid = grid_from_text(_read(args.file, stdin))
    if args.action == "verify":
        results = verify_symmetric_sudoku(grid)
        report = {
            r.name: {"passed": r.passed, "first_violation": r.first_violation} for r in results
        }
        text = "".join(
            f"{r.name:15s} {'pass' if r.passed else 'FAIL at ' + str(r.first_violation)}\n"
            for r in results
        )
        return CommandOutcome(0 if all(r.passed for r in results) else 1, text, report)
    if args.digit is None:
        raise AmeError("sudoku extract needs a digit")
    m = sudoku_digit_to_permutation(grid, args.digit)
    rep = is_k_unitary(m, tol=_tolerance(args))
    perm = m.as_perm()
    report = {"digit": args.digit, "perm": list(perm), "two_unitary": rep.is_k_unitary}
    text = f"Perm{tuple(perm)}\n2-unitary: {rep.is_k_unitary}\n"
    if args.out:
        _write(args.out, dump_json(matrix_to_json(m)))
        text += f"wrote {args.out}\n"
    return CommandOutcome(0 if rep.is_k_unitary else 1, text, report)


def _anneal(args, stdin) -> CommandOutcome:
    config = AnnealConfig(
        seed=args.seed,
        temperature=args.temperature,
        cooling=args.cooling,
        sweeps=args.sweeps,
        moves=args.moves,
        restarts=args.restarts,
        move_scale=args.move_scale,
    )
    res = minimize_potential(args.n, args.d, config, jobs=args.jobs)
    floor = float(args.d) ** -(args.n // 2)
    report = {
        "n": args.n,
        "d": args.d,
        "seed": res.seed,
        "best_value": res.best_value,
        "floor": floor,
        "best_restart": res.best_restart,
        "restart_values": res.restart_values,
    }
    text = (
        f"best potential {res.best_value:.6f} (floor {floor:.6f}) "
        f"from restart {res.best_restart} of {config.restarts}\n"
    )
    if args.out:
        _write(args.out, dump_json(state_to_json(res.best_state)))
        text += f"wrote {args.out}\n"
    return CommandOutcome(0, text, report)


def _page_entropy(args, stdin) -> CommandOutcome:
    mean, err = average_page_entropy(args.n, args.samples, np.random.default_rng(args.seed))
    pred = page_prediction(args.n)
    report = {"n": args.n, "samples": args.samples, "mean": mean, "stderr": err, "prediction": pred}
    text = f"mean {mean:.5f} +- {err:.5f}; prediction {pred:.5f}; difference {mean - pred:+.5f}\n"
    return CommandOutcome(0, text, report)


def _circuit(args, stdin) -> CommandOutcome:
    gates = build_ame43_circuit()
    text = "".join(line + "\n" for line in describe(gates))
    report: dict[str, Any] = {"gates": describe(gates)}
    code = 0
    if args.simulate:
        out = simulate_circuit(gates, zero_state(4, 3))
        fid = out.fidelity(cat.omega_43())
        ok = abs(fid - 1.0) <= max(_tolerance(args), 1e-12)
        report |= {"fidelity": fid, "support": support(out), "potential": entanglement_potential(out)}
        text += f"fidelity with the target state: {fid:.15f}\n"
        code = 0 if ok else 1
        if args.out:
            _write(args.out, dump_json(state_to_json(out)))
            text += f"wrote {args.out}\n"
    return CommandOutcome(code, text, report)


_HANDLERS = {
    "verify": _verify,
    "verify-matrix": _verify_matrix,
    "catalog": _catalog,
    "construct": _construct,
    "search-mds": _search_mds,
    "code": _code,
    "mols": _mols,
    "sudoku": _sudoku,
    "anneal": _anneal,
    "page-entropy": _page_entropy,
    "circuit": _circuit,
}


def dispatch(argv: Sequence[str], stdin=None) -> CommandOutcome:
    stdin = stdin if stdin is not None else sys.stdin
    parser = build_parser()
    try:
        with redirect_stderr(io.StringIO()):
            args = parser.parse_args(list(argv))
    except _UsageError as exc:
        return CommandOutcome(2, str(exc))
    except SystemExit as exc:  # --help
        return CommandOutcome(0 if not exc.code else 2, parser.format_help())
    try:
        out = _HANDLERS[args.command](args, stdin)
    except (AmeError, ValueError, KeyError, TypeError) as exc:
        return CommandOutcome(2, f"error: {exc}\n")
    if args.json and out.report is not None:
        out.text = json.dumps(out.report, indent=1, default=_json_default) + "\n"
    return out


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def main(argv: Sequence[str] | None = None) -> int:
    out = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if out.exit_code != 2 else sys.stderr
    stream.write(out.text)
    return out.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

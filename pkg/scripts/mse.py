#!/usr/bin/env python3
"""
Batch front-end for the MSEvalue solver, witnesses and oracles.

All inputs and outputs are JSON (see src/hilbert/io.py for the array format);
results go to stdout or --out, logs to stderr.

Usage:
    python scripts/mse.py solve    --operator L.json --partition "1:2:3" [--mode inf]
    python scripts/mse.py spectrum --operator L.json --partition "1:2"
    python scripts/mse.py witness  --operator L.json --partition "1:2:3" [--lower]
    python scripts/mse.py evaluate --witness W.json --state rho.json
    python scripts/mse.py scan     --operator L.json --partition "1:2:3" \
                                   --state-family werner --psi psi.json --p-grid 0:1:101
    python scripts/mse.py oracle   --operator L.json --partition "1:2:3" [--grid]

Exit codes: 0 ok, 1 eigensolver failure, 2 invalid input, 3 no converged start.
"""

import sys
import json
import logging
import argparse
from pathlib import Path
from typing import Optional, Sequence

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.config import ORACLE_CONFIG  # noqa: E402
from src.errors import EigenDecompositionFailure, MSEError, NoConvergedSolution  # noqa: E402
from src.hilbert.io import dumps, load_density, load_operator, load_pure_state, read_json  # noqa: E402
from src.oracle.brute_force import brute_force_extremum  # noqa: E402
from src.oracle.grid import grid_qubit_extremum  # noqa: E402
from src.partitions.partition import parse_partition  # noqa: E402
from src.solver.config import MODES, SolverConfig, load_solver_config  # noqa: E402
from src.solver.multistart import mse_spectrum, multistart  # noqa: E402
from src.witness.sweep import parse_p_grid, scan_to_json_lines, werner_scan  # noqa: E402
from src.witness.witness import (  # noqa: E402
    Witness,
    build_lower_witness,
    build_witness,
    witness_expectation,
)

logger = logging.getLogger("mse")

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    cfg = load_solver_config(args.config) if args.config else SolverConfig()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.starts is not None:
        changes["n_starts"] = args.starts
    if getattr(args, "mode", None):
        changes["mode"] = args.mode
    return cfg.replace(**changes) if changes else cfg


def _operator_and_partition(args: argparse.Namespace):
    op = load_operator(args.operator)
    return op, parse_partition(args.partition, op.space.n)


def cmd_solve(args: argparse.Namespace) -> str:
    op, partition = _operator_and_partition(args)
    result = multistart(op, partition, _solver_config(args))
    payload = {"partition": partition.to_text(), **result.to_dict()}
    return dumps(payload) + "\n"


def cmd_spectrum(args: argparse.Namespace) -> str:
    op, partition = _operator_and_partition(args)
    spectrum = mse_spectrum(op, partition, _solver_config(args))
    payload = {"partition": partition.to_text(), **spectrum.to_dict()}
    return dumps(payload) + "\n"


def cmd_witness(args: argparse.Namespace) -> str:
    op, partition = _operator_and_partition(args)
    build = build_lower_witness if args.lower else build_witness
    return dumps(build(op, partition, _solver_config(args)).to_dict()) + "\n"


def cmd_evaluate(args: argparse.Namespace) -> str:
    witness = Witness.from_dict(read_json(args.witness))
    rho = load_density(args.state)
    return dumps(witness_expectation(witness, rho).to_dict()) + "\n"


def cmd_scan(args: argparse.Namespace) -> str:
    op, partition = _operator_and_partition(args)
    psi = load_pure_state(args.psi)
    p_values = parse_p_grid(args.p_grid)
    build = build_lower_witness if args.lower else build_witness
    witness = build(op, partition, _solver_config(args))
    return scan_to_json_lines(werner_scan(witness, psi, p_values))


def cmd_oracle(args: argparse.Namespace) -> str:
    op, partition = _operator_and_partition(args)
    mode = args.mode or "sup"
    if args.grid:
        value = grid_qubit_extremum(op, partition, mode=mode, grid_steps=args.grid_steps)
        method = "grid"
    else:
        seed = args.seed if args.seed is not None else _solver_config(args).seed
        value = brute_force_extremum(
            op, partition, mode=mode, n_samples=args.samples, n_polish=args.polish, seed=seed
        )
        method = "brute_force"
    payload = {"partition": partition.to_text(), "mode": mode, "method": method, "value": value}
    return dumps(payload) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Solver config JSON file")
    common.add_argument("--seed", type=int, default=None, help="Override the solver seed")
    common.add_argument("--starts", type=int, default=None, help="Override the number of starts")
    common.add_argument("--out", default=None, help="Write the result here instead of stdout")
    common.add_argument("--verbose", action="store_true", help="DEBUG logging")

    parser = argparse.ArgumentParser(description="Multipartite separability eigenvalue toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_operator(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--operator", required=True, help="Hermitian operator JSON file")
        p.add_argument("--partition", required=True, help='1-based blocks, e.g. "1,2:3"')
        return p

    p = with_operator("solve", "MSEvalues and the f bound")
    p.add_argument("--mode", choices=MODES, default=None)
    p.set_defaults(func=cmd_solve)

    p = with_operator("spectrum", "MSEvalues from extremal and branch-following starts")
    p.set_defaults(func=cmd_spectrum)

    p = with_operator("witness", "Witness bundle W = f_sup * 1 - L")
    p.add_argument("--lower", action="store_true", help="Build W = L - f_inf * 1 instead")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("evaluate", parents=[common], help="tr(rho W) for a stored witness")
    p.add_argument("--witness", required=True, help="Witness bundle JSON file")
    p.add_argument("--state", required=True, help="State vector or density matrix JSON file")
    p.set_defaults(func=cmd_evaluate)

    p = with_operator("scan", "Noisy-state sweep against the witness of L")
    p.add_argument("--state-family", choices=["werner"], default="werner")
    p.add_argument("--psi", required=True, help="Pure state JSON file")
    p.add_argument("--p-grid", required=True, help="a:b:steps")
    p.add_argument("--lower", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = with_operator("oracle", "Brute-force or grid extremum over product states")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--grid", action="store_true", help="Bloch-angle grid (qubits, singletons)")
    p.add_argument("--grid-steps", type=int, default=ORACLE_CONFIG["grid_steps"])
    p.add_argument("--samples", type=int, default=ORACLE_CONFIG["n_samples"])
    p.add_argument("--polish", type=int, default=ORACLE_CONFIG["n_polish"])
    p.set_defaults(func=cmd_oracle)

    return parser


def _fail(exc: Exception, code: int) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        text = args.func(args)
    except NoConvergedSolution as exc:
        return _fail(exc, EXIT_NOT_CONVERGED)
    except EigenDecompositionFailure as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except (MSEError, ValueError, KeyError, TypeError) as exc:
        return _fail(exc, EXIT_INVALID)

    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s  %(name)s  %(levelname)s  %(message)s",
    )
    main()

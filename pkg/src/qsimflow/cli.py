"""Command-line entry point: ``qsimflow run --config spec.json [...]``.

Exit status: 0 success (validation accepted or absent), 2 validation
rejected, 1 any error (diagnostics on stderr).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import load_config, run
from .errors import QsimflowError
from .evaluator import EvaluatorConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsimflow",
        description="Configuration-driven hybrid quantum simulation runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="execute a JSON run config")
    run_parser.add_argument("--config", required=True, help="path to the JSON run spec")
    run_parser.add_argument("--out", help="CSV output path (overrides config)")
    run_parser.add_argument("--seed", type=int, help="evaluator seed (overrides config)")
    run_parser.add_argument(
        "--shots", type=int, help="shot count; 0 selects analytic mode (overrides config)"
    )
    run_parser.add_argument("--backend", help="backend name (overrides config)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = load_config(args.config)
        if args.shots is not None:
            if args.shots < 0:
                raise QsimflowError("--shots must be >= 0")
            seed = args.seed if args.seed is not None else spec.evaluator.seed
            spec = replace(spec, evaluator=EvaluatorConfig.from_shots(args.shots, seed))
        elif args.seed is not None:
            spec = replace(spec, evaluator=spec.evaluator.with_seed(args.seed))
        if args.backend is not None:
            spec = replace(spec, backend_name=args.backend)
        if args.out is not None:
            spec = replace(spec, output=args.out)
        return run(spec)
    except QsimflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
Hessian Quotient Lab - Main Entry Point
Runs the identity-verification suites, single Dirichlet solves, Liouville
probes and interior-estimate batches from declarative JSON configs
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

from config import Config
from models.errors import ConfigError, HQLError, SolverError
from models.grid import Grid, QuadraticForm
from models.problem import PDEOperator, ProblemSpec
from models.reports import INTERIOR_CSV_COLUMNS
from models.run_config import InteriorConfig, LiouvilleConfig, SolveConfig, VerifyConfig
from experiments.analysis import interior_estimate_experiment, liouville_probe
from experiments.boundary import get_family
from experiments.verification import run_verification
from numerics.pde import newton_solve
from utils.io import write_csv, write_gridfunction, write_gridfunction_csv, write_json
from utils.logger import setup_logger
from utils.plotting import plot_family_scatter, plot_residual_history

logger = setup_logger("hql")

TEMPLATES_DIR = Path(__file__).resolve().parent / "templates"

REPORT_FILES = {
    'verify': 'verify_summary.json',
    'solve': 'solve_report.json',
    'liouville': 'liouville_report.json',
    'interior': 'interior_summary.json',
}


class HessianLab:
    """Runs one command against an output directory"""

    def __init__(self, out_dir: str):
        self.out_dir = Path(out_dir)

    def path(self, name: str) -> str:
        return str(self.out_dir / name)

    def banner(self, title: str) -> None:
        logger.info("=" * 60)
        logger.info(title)
        logger.info("=" * 60)

    def write_error(self, command: str, error: HQLError) -> str:
        """Error JSON in place of the report the command would have written"""
        data = {
            'command': command,
            'error': type(error).__name__,
            'message': str(error),
            'exit_code': error.exit_code,
        }
        if isinstance(error, SolverError) and error.report is not None:
            data['report'] = error.report.to_dict()
        return write_json(self.path(REPORT_FILES[command]), data)

    def verify(self, config: VerifyConfig) -> int:
        self.banner("VERIFY: symmetric-function, duality and transform identities")
        results = run_verification(config)
        failed = [r for r in results if not r.passed]
        summary = {
            'config': config.to_dict(),
            'all_passed': not failed,
            'properties': [r.to_dict() for r in results],
        }
        write_json(self.path(REPORT_FILES['verify']), summary)

        self.banner("SUMMARY")
        logger.info(f"Properties checked: {len(results)}")
        logger.info(f"Properties failed: {len(failed)}")
        for r in failed:
            logger.warning(f"✗ {r.name} n={r.dimension}: worst {r.worst_violation:.3e} > {r.tolerance:g}")
        return Config.EXIT_OK if not failed else Config.EXIT_CHECK_FAILED

    def build_problem(self, config: SolveConfig) -> ProblemSpec:
        grid = Grid.centered(config.dimension, config.nodes, config.half_width)
        operator = PDEOperator(config.operator)
        if 'family' in config.boundary:
            family = get_family(config.boundary['family'])
            # families are normalized to σ₂/σ₁ = rhs; σ₂ problems take them as given data
            quotient = operator is PDEOperator.QUOTIENT21 and config.rhs > 0
            boundary = family.boundary(grid, config.rhs if quotient else 1.0)
        else:
            boundary = QuadraticForm.from_dict(config.boundary['quadratic'])
        return ProblemSpec(grid=grid, operator=operator, rhs=config.rhs, boundary=boundary,
                           continuation_steps=config.continuation_steps)

    def solve(self, config: SolveConfig) -> int:
        self.banner(f"SOLVE: {config.operator} = {config.rhs:g}, n={config.dimension}, m={config.nodes}")
        spec = self.build_problem(config)
        u, report = newton_solve(spec)

        write_gridfunction(self.path('solution.txt'), u)
        write_gridfunction_csv(self.path('solution.csv'), u)
        write_json(self.path(REPORT_FILES['solve']),
                   {'config': config.to_dict(), 'problem': spec.to_dict(), 'report': report.to_dict()})
        plot_residual_history(report.residual_history, self.path('residual_history.svg'),
                              title=f"{config.operator}, n={config.dimension}, m={config.nodes}")

        self.banner("SUMMARY")
        logger.info(f"Newton iterations: {report.iterations} ({report.stage_iterations} per stage)")
        logger.info(f"Final residual: {report.final_residual:.3e}")
        logger.info(f"Admissibility margin: {report.admissibility_margin:.3e}")
        return Config.EXIT_OK

    def liouville(self, config: LiouvilleConfig) -> int:
        self.banner("LIOUVILLE: quadratic-boundary solves and quadratic fits")
        reports = liouville_probe(config)
        flagged = [r for r in reports if not r.within(config.residual_tolerance)]
        write_json(self.path(REPORT_FILES['liouville']), {
            'config': config.to_dict(),
            'residual_tolerance': config.residual_tolerance,
            'all_within_tolerance': not flagged,
            'flagged': [f"{r.boundary_id}:n{r.n}:m{r.m}" for r in flagged],
            'reports': [r.to_dict() for r in reports],
        })

        self.banner("SUMMARY")
        logger.info(f"Probes: {len(reports)}")
        logger.info(f"Flagged (residual or spread above {config.residual_tolerance:g}): {len(flagged)}")
        return Config.EXIT_OK

    def interior(self, config: InteriorConfig) -> int:
        self.banner("INTERIOR: Hessian at the center against the Lipschitz norm")
        report = interior_estimate_experiment(config)

        write_csv(self.path('interior.csv'), INTERIOR_CSV_COLUMNS, (r.csv_row() for r in report.records))
        summary = report.summary()
        summary['config'] = config.to_dict()
        write_json(self.path(REPORT_FILES['interior']), summary)

        series: Dict[str, List] = {}
        for r in report.records:
            if not r.failed:
                series.setdefault(f"{r.boundary_id} (n={r.n})", []).append((r.lip_norm, r.hess0_max))
        plot_family_scatter(series, self.path('interior.svg'), xlabel="Lipschitz norm estimate",
                            ylabel="|D2u(0)| (max entry)", title="Interior estimate runs")

        self.banner("SUMMARY")
        logger.info(f"Runs: {len(report.records)}")
        logger.info(f"Failed runs: {report.failed_runs}")
        logger.info(f"Estimate-stress runs: {report.stressed_runs}")
        logger.info(f"Drift violations: {report.drift_violations()}")
        return Config.EXIT_OK


def cmd_verify(config: VerifyConfig) -> int:
    return HessianLab(config.out_dir).verify(config)


def cmd_solve(config: SolveConfig) -> int:
    return HessianLab(config.out_dir).solve(config)


def cmd_liouville(config: LiouvilleConfig) -> int:
    return HessianLab(config.out_dir).liouville(config)


def cmd_interior(config: InteriorConfig) -> int:
    return HessianLab(config.out_dir).interior(config)


COMMANDS = {
    'verify': (VerifyConfig, cmd_verify),
    'solve': (SolveConfig, cmd_solve),
    'liouville': (LiouvilleConfig, cmd_liouville),
    'interior': (InteriorConfig, cmd_interior),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hql",
        description="Hessian Quotient Lab - numerical checks for sigma_2/sigma_1 Hessian equations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Exit codes: 0 success, 1 failed checks or interrupted, 2 usage/config, "
               "3 domain/precondition, 4 solver failure",
    )

    parser.add_argument(
        'command',
        choices=sorted(COMMANDS),
        help='What to run'
    )

    parser.add_argument(
        '--config',
        type=str,
        default=None,
        help='Path to a JSON run config (default: templates/<command>.json)'
    )

    parser.add_argument(
        '--out',
        type=str,
        required=True,
        help='Output directory'
    )

    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Seed overriding the config seed and HQL_SEED'
    )

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code"""
    args = build_parser().parse_args(argv)

    # Validate configuration
    try:
        Config.validate()
    except ValueError as e:
        logger.error(f"Configuration error: {str(e)}")
        logger.error("Please check your .env file and the HQL_* environment variables.")
        return Config.EXIT_USAGE

    config_cls, handler = COMMANDS[args.command]
    config_path = args.config or str(TEMPLATES_DIR / f"{args.command}.json")
    try:
        config = config_cls.from_file(config_path, command=args.command, seed=args.seed, out_dir=args.out)
    except ConfigError as e:
        logger.error(f"✗ {e}")
        return e.exit_code

    logger.info(f"Command: {args.command}, config: {config_path}, seed: {config.seed}")
    try:
        return handler(config)
    except HQLError as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        HessianLab(config.out_dir).write_error(args.command, e)
        return e.exit_code
    except KeyboardInterrupt:
        logger.info("\nInterrupted by user")
        return 1


def main():
    """Main entry point with CLI"""
    sys.exit(run())


if __name__ == "__main__":
    main()

#!/usr/bin/env python3

import os
import sys
import argparse
import logging
import textwrap
from datetime import datetime
from typing import List, Optional

from .config.config_loader import ConfigLoader, EXPERIMENT_KINDS
from .cli.display import create_display
from .harness.plan import ExperimentPlan
from .harness.runner import run_experiment
from .harness.writers import FORMATS, write_reports
from .utils.hash_ledger import ReportHashLedger

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

KIND_HELP = {
    'spectrum': 'Eigenvalue multiset of the Bell operator',
    'lr-bound': 'Exhaustive local-realistic maximum against n-1',
    'selftest': 'Estimate <O> from single-term measurements',
    'parity': 'Parity protocol success against the Parity bounds',
    'veto': 'Logical OR (veto) output rate',
    'notify': 'Receiver notification hit rate',
    'authenticate': 'Receiver authentication abort rate',
    'collision': 'Collision detection output distribution',
    'aeg': 'Anonymous entanglement generation against its success bound',
    'teleport': 'Teleport a qubit over an anonymously generated pair',
    'guess': 'Sender-identification attack against the guessing bound',
    'bounds-sweep': 'Closed-form bounds over an (n, S, epsilon) grid',
}


def setup_logging(debug: bool = False, log_dir: Optional[str] = None, quiet: bool = False,
                  file_prefix: str = 'ghz_anon'):
    """Setup logging configuration"""
    handlers: List[logging.Handler] = []

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d')
        handlers.append(logging.FileHandler(os.path.join(log_dir, f'{file_prefix}_{timestamp}.log')))

    stream = logging.StreamHandler(sys.stderr)
    stream.setLevel(logging.WARNING if quiet else logging.DEBUG)
    handlers.append(stream)

    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


def build_parser() -> argparse.ArgumentParser:
    """Command line parser with one subcommand per experiment kind"""
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('network and noise')
    group.add_argument('--n', type=int, help='Number of agents (odd, >= 3)')
    group.add_argument('--S', type=int, help='Security parameter')
    noise = group.add_mutually_exclusive_group()
    noise.add_argument('--epsilon', type=float, help='Bell deficit of the resource')
    noise.add_argument('--delta', type=float, help='Fidelity deficit of the resource')
    group.add_argument('--junk', type=str, help='Junk state: minus, lattice-top or eigen:<value>')

    group = common.add_argument_group('protocol')
    group.add_argument('--inputs', type=str, help='Input bits, e.g. 100')
    group.add_argument('--withhold', type=int, help='Agent withholding its parity outcome')
    group.add_argument('--wish', type=str, help='Wish bits for collision detection')
    group.add_argument('--sender', type=int, help='Sender agent')
    group.add_argument('--receiver', type=int, help='Receiver agent')
    group.add_argument('--tamper', type=str, metavar='AGENT:ROUND', help='Flip replayed inputs')
    group.add_argument('--auth-tolerance', type=int, dest='auth_tolerance',
                       help='Authentication mismatches tolerated')
    group.add_argument('--verification-tolerance', type=float, dest='verification_tolerance',
                       help='Fraction of failed verification rounds tolerated')
    group.add_argument('--max-reps', type=int, dest='max_repetitions', help='Repetition cap for aeg and teleport')
    group.add_argument('--session', action='store_true', default=None,
                       help='Run notification and authentication before aeg')
    group.add_argument('--payload', type=str,
                       help='Teleported state: 0, 1, +, -, +i or -i (use --payload=-i for signed labels)')
    group.add_argument('--k', type=int, help='Honest-agent count for guess')
    group.add_argument('--honest', type=str, help='Honest agents for guess, e.g. 1,3')
    group.add_argument('--rounds', type=int, help='Self-test rounds')
    group.add_argument('--threshold', type=float, help='Self-test acceptance threshold')
    group.add_argument('--test-fraction', type=float, dest='test_fraction',
                       help='Fraction of a copy pool spent on the self-test')
    group.add_argument('--n-values', type=str, dest='n_values', help='bounds-sweep n grid, e.g. 3,5')
    group.add_argument('--S-values', type=str, dest='S_values', help='bounds-sweep S grid')
    group.add_argument('--epsilon-values', type=str, dest='epsilon_values', help='bounds-sweep epsilon grid')

    group = common.add_argument_group('run')
    group.add_argument('--trials', type=int, help='Monte Carlo trials')
    group.add_argument('--seed', type=int, help='Root seed (default from config, 0)')
    group.add_argument('--workers', type=int, default=1, help='Worker processes for trials')
    group.add_argument('--out', type=str, help='Report file (stdout when omitted)')
    group.add_argument('--format', type=str, choices=FORMATS, help='Report format')
    group.add_argument('--transcript', type=str, help='Write the first trial transcript (JSONL)')
    group.add_argument('--timing', action='store_true', help='Include wall_time_ms in reports')
    group.add_argument('--hash-ledger', type=str, nargs='?', const='', dest='hash_ledger',
                       help='Record report digests and flag drift (optional ledger path)')
    group.add_argument('--clear-ledger', action='store_true', dest='clear_ledger',
                       help='Forget every recorded digest before this run')
    group.add_argument('--config', type=str, help='Configuration file')
    group.add_argument('--quiet', action='store_true', help='No progress display')
    group.add_argument('--debug', action='store_true', help='Enable debug logging')

    parser = argparse.ArgumentParser(
        prog='ghz-anon',
        description='Anonymous communication on GHZ resources: experiments and bound checks',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=textwrap.dedent('''
            Examples:
              %(prog)s spectrum --n 5
                Eigenvalues of the Bell operator for five agents

              %(prog)s parity --n 3 --inputs 100 --trials 1000 --seed 7
                Parity success on an ideal resource

              %(prog)s aeg --n 5 --S 3 --epsilon 0.5 --trials 100000 --seed 1
                Entanglement generation against its closed-form bound

              %(prog)s teleport --n 5 --S 3 --payload=-i --epsilon 0.2 --trials 2000
                Teleportation fidelity over the generated pair

              %(prog)s guess --n 5 --k 2 --epsilon 0.04
                Best sender-identification attack against 1/k + sqrt(eps)

            Exit codes:
              0    every report passes
              1    bound violation (or report drift with --hash-ledger)
              2    usage error
        '''))

    subparsers = parser.add_subparsers(dest='kind', metavar='EXPERIMENT')
    subparsers.required = True
    for kind in EXPERIMENT_KINDS:
        subparsers.add_parser(kind, parents=[common], help=KIND_HELP[kind], description=KIND_HELP[kind])
    return parser


def build_plan(args: argparse.Namespace, config_loader: ConfigLoader) -> ExperimentPlan:
    """Experiment plan from parsed arguments over the configured defaults"""
    overrides = {
        name: getattr(args, name, None)
        for name in ('n', 'S', 'epsilon', 'delta', 'junk', 'inputs', 'withhold', 'wish', 'sender',
                     'receiver', 'tamper', 'auth_tolerance', 'verification_tolerance', 'max_repetitions',
                     'session', 'payload', 'k', 'honest', 'rounds', 'threshold', 'test_fraction', 'trials',
                     'n_values', 'S_values', 'epsilon_values')
    }
    return ExperimentPlan.build(
        args.kind,
        overrides,
        config_loader=config_loader,
        seed=args.seed,
        output_path=args.out,
        transcript_path=args.transcript,
        workers=args.workers,
    )


def usage_error(parser: argparse.ArgumentParser, message: str) -> int:
    parser.print_usage(sys.stderr)
    print(f"{parser.prog}: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Run one experiment from the command line

    Returns:
        0 when every report passes, 1 on a bound violation or report drift,
        2 on usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config_loader = ConfigLoader(args.config)
    except (FileNotFoundError, ValueError) as e:
        return usage_error(parser, str(e))

    log_config = config_loader.get_logging_config()
    setup_logging(args.debug, log_config.get('directory'), args.quiet,
                  log_config.get('file_prefix', 'ghz_anon'))
    logger = logging.getLogger(__name__)
    logger.debug(f"Starting experiment with args: {args}")

    report_config = config_loader.get_report_config()
    fmt = args.format or report_config.get('format', 'json')
    timing = args.timing or bool(report_config.get('timing', False))

    try:
        plan = build_plan(args, config_loader)
    except ValueError as e:
        return usage_error(parser, str(e))

    with create_display(quiet=args.quiet) as display:
        try:
            reports = run_experiment(plan, display)
        except ValueError as e:
            display.error(f"Invalid experiment: {str(e)}")
            return usage_error(parser, str(e))
        except KeyboardInterrupt:
            print("\nProcess interrupted by user", file=sys.stderr)
            return EXIT_VIOLATION
        except Exception as e:
            logger.exception("Fatal error")
            display.error(f"Fatal error: {str(e)}")
            return EXIT_VIOLATION

        display.update('write', 'working')
        text = write_reports(reports, plan.output_path, fmt, timing)
        if not plan.output_path:
            sys.stdout.write(text)
            sys.stdout.flush()
        display.update('write', 'done', details=plan.output_path or 'stdout')

        drift = False
        if args.hash_ledger is not None or args.clear_ledger:
            ledger = ReportHashLedger(args.hash_ledger or report_config.get('hash_ledger', '.ghz_anon_hashes.json'),
                                      quiet=args.quiet)
            if args.clear_ledger:
                ledger.clear_cache()
        if args.hash_ledger is not None:
            # digests never include timing
            payload = write_reports(reports, None, fmt, timing=False).encode('utf-8')
            match = ledger.check(plan.key(), payload)
            if match is None:
                ledger.record(plan.key(), payload)
            elif not match:
                drift = True
                display.warning(f"Report for {plan.key()} differs from the recorded digest")

        for report in reports:
            display.show_report(report.to_dict(timing))

        passed = all(report.passed for report in reports)
        if passed and not drift:
            display.success(f"{plan.kind}: all {len(reports)} report(s) pass")
            return EXIT_PASS

        display.warning(f"{plan.kind}: bound violation" if not passed else f"{plan.kind}: report drift")
        return EXIT_VIOLATION


def main():
    """Console script entry point"""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

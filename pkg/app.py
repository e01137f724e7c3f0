"""Scheme Gauge - command line front end"""

import argparse
import logging
import sys

import config
from analyzers.max2sat import parse_dimacs
from analyzers.pipeline import (EtaGaugeAnalyzer, GammaGaugeAnalyzer, Max2SatAnalyzer, batch_rows, resolve_graph,
                                resolve_second)
from utils.errors import InputError, SchemeGaugeError
from utils.export import (csv_header, generate_markdown_report, save_report, summary_line, to_csv_row, to_json,
                          to_jsonl_row)

logger = logging.getLogger('scheme_gauge')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    common.add_argument('--output', help='write the report to this file instead of stdout')

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument('--format', choices=['json', 'markdown'], default='json')
    single.add_argument('--round', type=int, default=0, metavar='N', help='hyperplane rounding trials')
    single.add_argument('--seed', type=int, default=config.DEFAULT_SEED, metavar='S')
    single.add_argument('--force', action='store_true', help='run oracles beyond their size gates')
    single.add_argument('--timing', action='store_true', help='add wall-clock stage timings')

    parser = argparse.ArgumentParser(
        prog='scheme-gauge',
        description='Semidefinite bounds and their gauge duals for graphs in association schemes')
    commands = parser.add_subparsers(dest='command', required=True)

    analyze = commands.add_parser('analyze', parents=[common, single], help='eta and eta-dual for one graph')
    analyze.add_argument('--graph', required=True, help='graph6 string, file, or name such as paley(9)')
    analyze.add_argument('--oracle', action='store_true', help='add max-cut and fractional cut-cover oracles')

    gamma = commands.add_parser('gamma', parents=[common, single], help='gamma and gamma-dual for a graph pair')
    gamma.add_argument('--graph', required=True)
    gamma.add_argument('--second', required=True, help='complement, dist2, or a graph source')
    gamma.add_argument('--oracle', action='store_true', help='add the quadratic program oracle')

    max2sat = commands.add_parser('max2sat', parents=[common, single], help='bounds for a DIMACS 2-CNF file')
    max2sat.add_argument('cnf')

    batch = commands.add_parser('batch', parents=[common], help='one row per graph6 line')
    batch.add_argument('path')
    batch.add_argument('--format', choices=['csv', 'jsonl'], default='csv')
    batch.add_argument('--threads', type=int, default=config.THREADS)
    return parser


def _render(report, fmt):
    if fmt == 'markdown' and config.FEATURES['markdown_export']:
        return generate_markdown_report(report)
    return to_json(report)


def _read_text(path):
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except OSError as exc:
        raise InputError('io_error', path=path, reason=exc.strerror or exc)


def cmd_analyze(args):
    graph = resolve_graph(args.graph)
    analyzer = EtaGaugeAnalyzer(graph, source=args.graph, oracle=args.oracle, rounding_trials=args.round,
                                seed=args.seed, force=args.force, timing=args.timing)
    return _render(analyzer.analyze(), args.format)


def cmd_gamma(args):
    graph = resolve_graph(args.graph)
    second = resolve_second(args.second, graph)
    analyzer = GammaGaugeAnalyzer(graph, second, source=args.graph, second_source=args.second,
                                  oracle=args.oracle, rounding_trials=args.round, seed=args.seed,
                                  force=args.force, timing=args.timing)
    return _render(analyzer.analyze(), args.format)


def cmd_max2sat(args):
    instance = parse_dimacs(_read_text(args.cnf))
    analyzer = Max2SatAnalyzer(instance, source=args.cnf, rounding_trials=args.round, seed=args.seed,
                               force=args.force, timing=args.timing)
    return _render(analyzer.analyze(), args.format)


def cmd_batch(args):
    lines = _read_text(args.path).splitlines()
    rows, counts = batch_rows(lines, threads=max(1, args.threads))
    if args.format == 'jsonl':
        body = ''.join(to_jsonl_row(row) for row in rows)
    else:
        body = (csv_header() if rows else '') + ''.join(to_csv_row(row) for row in rows)
    logger.info('batch: %d rows, %s', len(rows), counts)
    return body + summary_line(counts, args.format)


COMMANDS = {
    'analyze': cmd_analyze,
    'gamma': cmd_gamma,
    'max2sat': cmd_max2sat,
    'batch': cmd_batch,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
                        format=config.LOG_FORMAT, stream=sys.stderr)
    try:
        output = COMMANDS[args.command](args)
    except SchemeGaugeError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return exc.exit_code
    except Exception:
        logger.exception('internal error')
        return 1

    if args.output:
        save_report(output, args.output)
    else:
        sys.stdout.write(output)
    return 0


if __name__ == '__main__':
    sys.exit(main())

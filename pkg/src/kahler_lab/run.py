import sys
import time
import inspect
import argparse
import logging

from kahler_lab import tolerance
from kahler_lab.support.support import LoggingDecorator, timeit
from kahler_lab.factory import FACTORY
from kahler_lab.factory import FactoryKeyError
from kahler_lab.tensor.tensor import TensorError
from kahler_lab.ambient.ambient import AmbientError
from kahler_lab.submanifold.submanifold import SubmanifoldError, ConsistencyError, \
    gauss_intrinsic
from kahler_lab.classify.classify import ClassifyError
from kahler_lab.generate.generate import GenerateError
from kahler_lab.scenario.scenario import ScenarioError, load as load_scenario, save
from kahler_lab.report.report import ReportDocument, FORMATS
from kahler_lab.selftest.selftest import run_suites

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INTERNAL = 2
EXIT_REJECTED = 3

REJECTIONS = (ScenarioError, AmbientError, TensorError, GenerateError)
GENERATOR_ARGS = ('n', 'k', 'mu', 'c', 'jh', 'a', 'b', 'eigenvalues', 'seed',
                  'ambient', 'frame', 'traceless', 'commuting', 'fixture')


def _mode(x):
    return x.replace('-', '_')


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors are input rejections"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_REJECTED, f'{self.prog}: error: {message}\n')


def parse_arguments(argv=None):
    parser = ArgumentParser(prog='kahler_lab')
    parser.add_argument('-l', '--log_path', help='log file path, standard error if not set',
                        default=None)
    parser.add_argument('-v', '--log_level', default='WARNING',
                        choices=['CRITICAL', 'FATAL', 'ERROR', 'WARNING',
                                 'WARN', 'INFO', 'DEBUG', 'NOTSET'])
    sub = parser.add_subparsers(dest='command', required=True)
    # Self-test
    p = sub.add_parser('selftest', help='run built-in identity suites')
    p.add_argument('--filter', help='run suites whose names contain this text',
                   default=None)
    p.add_argument('--sabotage-sign', dest='sabotage_sign', action='store_true',
                   help='flip the sign of the last term of the product curvature')
    # Classify
    p = sub.add_parser('classify', help='classify a scenario file')
    p.add_argument('input_path', help='scenario path (.yml, .yaml, .json) or "-"')
    p.add_argument('--mode', type=_mode, default=None,
                   choices=FACTORY.keys('mode'),
                   help='classification mode, by ambient kind if not set')
    p.add_argument('--format', dest='output_format', default='text', choices=FORMATS)
    for name in tolerance.NAMES:
        p.add_argument(f'--tol-{name}', dest=f'tol_{name}', type=float, default=None,
                       help=f'{name} tolerance')
    # Generate
    p = sub.add_parser('generate', help='write a scenario file')
    p.add_argument('kind', choices=FACTORY.keys('generate'))
    p.add_argument('-o', '--output_path', default='-',
                   help='output path (.yml, .yaml, .json), standard output if not set')
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--mu', type=float, default=None)
    p.add_argument('--c', type=float, default=None)
    p.add_argument('--jh', type=float, nargs='+', default=None,
                   help='g(JH, e_1) or all components for conformal_fixture')
    p.add_argument('--a', type=float, default=None)
    p.add_argument('--b', type=float, default=None)
    p.add_argument('--eigenvalues', type=float, nargs='+', default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--ambient', choices=['flat', 'product'], default=None)
    p.add_argument('--frame', choices=['canonical', 'unitary'], default=None)
    p.add_argument('--traceless', action='store_true', default=None)
    p.add_argument('--commuting', action='store_true', default=None)
    p.add_argument('--fixture', action='store_true', default=None)
    args = vars(parser.parse_args(argv))
    return args


def _report_error(e):
    logging.error(f'{type(e).__name__}: {e}')
    print(f'error: {e}', file=sys.stderr)


@timeit
def cmd_selftest(args):
    results = run_suites(args.get('filter'), args.get('sabotage_sign', False))
    for r in results:
        status = 'PASS' if r.passed else 'FAIL'
        defects = ', '.join(f'{k}={v:.3e}' for k, v in r.defects.items())
        print(f'{status:<6}{r.name:<28}{r.cases:>5}  {defects}')
        for failure in r.failures[:10]:
            print(f'      {failure}')
    if not results:
        print(f'No suites match {args.get("filter")!r}')
    passed = all(r.passed for r in results)
    print(f'{sum(r.passed for r in results)}/{len(results)} suites passed')
    return EXIT_OK if passed else EXIT_FAILURE


@timeit
def cmd_classify(args):
    start = time.perf_counter()
    overrides = {x: args.get(f'tol_{x}') for x in tolerance.NAMES}
    try:
        scenario = load_scenario(args['input_path'])
        tol = scenario.merged_tolerances(tolerance.DEFAULT).update(**overrides)
        point = scenario.build(tol)
    except REJECTIONS + (SubmanifoldError, ValueError) as e:
        _report_error(e)
        return EXIT_REJECTED
    mode = args.get('mode') or scenario.resolved_mode
    logging.info(f'Mode: {mode}, tolerances: {tol}')
    try:
        geom = gauss_intrinsic(point, tol)
        verdict = FACTORY(f'mode.{mode}')(point, geom, tol)
    except ClassifyError as e:
        _report_error(e)
        return EXIT_REJECTED
    report = ReportDocument({'name': scenario.name, 'hash': scenario.hash()}, mode,
                            tol.to_dict(), verdict.to_dict(), scenario.expected,
                            time.perf_counter() - start)
    sys.stdout.write(report.render(args.get('output_format', 'text')))
    return EXIT_OK


@timeit
def cmd_generate(args):
    generator = FACTORY.str2obj[f'generate.{args["kind"]}']
    accepted = inspect.signature(generator).parameters
    kwargs = {k: args[k] for k in GENERATOR_ARGS if args.get(k) is not None}
    if 'jh' in kwargs and args['kind'] != 'conformal_fixture':
        if len(kwargs['jh']) != 1:
            _report_error(GenerateError('Expected a single --jh value'))
            return EXIT_REJECTED
        kwargs['jh'] = kwargs['jh'][0]
    unknown = [k for k in kwargs if k not in accepted]
    if unknown:
        _report_error(GenerateError(f'Generator {args["kind"]!r} does not take {unknown}'))
        return EXIT_REJECTED
    try:
        scenario = generator(**kwargs)
    except REJECTIONS + (SubmanifoldError, TypeError, ValueError) as e:
        _report_error(e)
        return EXIT_REJECTED
    save(scenario, args['output_path'])
    return EXIT_OK


commands = {
    'selftest': cmd_selftest,
    'classify': cmd_classify,
    'generate': cmd_generate,
}


def run(args):
    logging.info(f'args: {args}')
    try:
        return commands[args['command']](args)
    except (ConsistencyError, FactoryKeyError) as e:
        _report_error(e)
        return EXIT_INTERNAL
    except Exception as e:
        logging.exception(e)
        print(f'internal error: {type(e).__name__}: {e}', file=sys.stderr)
        return EXIT_INTERNAL


def main(argv=None):
    args = parse_arguments(argv)

    @LoggingDecorator(filename=args['log_path'], level=args['log_level'])
    def pipeline(args):
        return run(args)

    return pipeline(args)


if __name__ == '__main__':
    sys.exit(main())

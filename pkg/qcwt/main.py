import argparse
import collections
import csv
import logging
import math
import multiprocessing
import os
import os.path
import sys
from configparser import ConfigParser

try:
    from importlib.metadata import PackageNotFoundError, version
except ImportError:  # Python < 3.8
    from importlib_metadata import PackageNotFoundError, version

from qcwt import corpus, quaternion, verify
from qcwt.cqwt import (METHODS, WAVELET_NAME_BYTES, cqwt, cqwt_inverse, export_csv, read_qcw,
                       write_qcw)
from qcwt.errors import AdmissibilityError, ConfigError, QcwtError
from qcwt.qft import qft_forward, qft_inverse, read_spectrum, write_spectrum
from qcwt.signal import Grid2D, SimGrid, read_qsf, write_qsf
from qcwt.wavelet import admissibility_report, default_probes, file_wavelet, get_wavelet

try:
    __version__ = version('qcwt')
except PackageNotFoundError:
    __version__ = '0.1.dev0'

logger = logging.getLogger('qcwt')


class Filter(object):
    """Only log messages that are non-empty."""

    def filter(self, record):
        return len(record.msg)


class LevelFormatter(logging.Formatter):
    """Formatter with a format per level"""
    def __init__(self, fmt=None, datefmt=None, level_formats=None):
        super(LevelFormatter, self).__init__(fmt, datefmt)
        if level_formats is None:
            level_formats = {}
        self._level_formats = level_formats
        self._default_format = fmt

    def format(self, record):
        self._style._fmt = self._level_formats.get(record.levelno, self._default_format)
        return super(LevelFormatter, self).format(record)


def setup_logging(verbose, quiet):

    verbosity = 2
    if verbose is not None:
        verbosity += verbose
    if quiet is not None:
        verbosity -= quiet

    verbosity = max((0, min(4, verbosity)))
    level = 50-(10*verbosity)

    # The levels are:
    # 50: Fatal errors only. -qq
    # 40: The final summary of a run, and errors. -q
    # 30: Normal level. What is being done, and warnings such as a fast
    #     path that is not applicable.
    # 20: Verbose level. Timings, chosen methods, per-check values. -v
    # 10: Debug level. Per slab and per probe values. -vv
    handler = logging.StreamHandler()
    handler.addFilter(Filter())
    formats = {10: 'debug: %(message)s', 50: 'qcwt: %(message)s'}
    handler.setFormatter(LevelFormatter('%(message)s',
                                        level_formats=formats))
    for old in list(logger.handlers):
        logger.removeHandler(old)
    logger.setLevel(level)
    logger.addHandler(handler)


RunConfig = collections.namedtuple(
    'RunConfig', 'n extent scales smin smax angles stride wavelet method seed report corpus '
                 'max_processes tolerances')

DEFAULTS = collections.OrderedDict([
    ('n', '256'),
    ('extent', '8'),
    ('scales', '32'),
    ('smin', '0.25'),
    ('smax', '16'),
    ('angles', '8'),
    ('stride', '4'),
    ('wavelet', 'log'),
    ('method', 'auto'),
    ('seed', '0'),
    ('report', 'text'),
    ('corpus', 'default'),
])

# Command line flags that are config variables in the [qcwt] section.
CONFIG_FLAGS = list(DEFAULTS)


def _option(config, option, convert, valid, requirement):
    if config.has_option('qcwt', option):
        raw = config.get('qcwt', option)
    else:
        raw = DEFAULTS[option]
    try:
        value = convert(raw)
    except ValueError:
        raise ConfigError('qcwt:%s=%s is not valid, it must be %s' % (option, raw, requirement))
    if not valid(value):
        raise ConfigError('qcwt:%s=%s is not valid, it must be %s' % (option, raw, requirement))
    return value


def _positive(value):
    return value > 0 and math.isfinite(value)


def _wavelet_name(value):
    if len(value.encode('utf-8')) > WAVELET_NAME_BYTES:
        return False
    return value in ('log', 'dgauss') or value.startswith('file:')


def read_run_config(config):
    """Validate the [qcwt] and [tolerances] sections into a RunConfig."""
    values = {
        'n': _option(config, 'n', int, lambda v: v >= 2, 'an integer of at least 2'),
        'extent': _option(config, 'extent', float, _positive, 'a positive number'),
        'scales': _option(config, 'scales', int, _positive, 'a positive integer'),
        'smin': _option(config, 'smin', float, _positive, 'a positive number'),
        'smax': _option(config, 'smax', float, _positive, 'a positive number'),
        'angles': _option(config, 'angles', int, _positive, 'a positive integer'),
        'stride': _option(config, 'stride', int, _positive, 'a positive integer'),
        'wavelet': _option(config, 'wavelet', str, _wavelet_name,
                           'log, dgauss or file:<path> of at most %s bytes' % WAVELET_NAME_BYTES),
        'method': _option(config, 'method', str, lambda v: v in METHODS, ', '.join(METHODS)),
        'seed': _option(config, 'seed', int, lambda v: v >= 0, 'a non-negative integer'),
        'report': _option(config, 'report', str, lambda v: v in verify.REPORTS,
                          ' or '.join(sorted(verify.REPORTS))),
        'corpus': _option(config, 'corpus', str, lambda v: v in verify.CORPORA,
                          ' or '.join(sorted(verify.CORPORA))),
    }
    if values['smin'] >= values['smax']:
        raise ConfigError('qcwt:smin must be smaller than qcwt:smax, got %s and %s'
                          % (values['smin'], values['smax']))
    if values['n'] // values['stride'] < 2:
        raise ConfigError('qcwt:stride=%s leaves fewer than 2 translations per axis'
                          % values['stride'])

    max_processes = None
    if config.has_option('qcwt', 'max-processes'):
        raw = config.get('qcwt', 'max-processes')
        try:
            max_processes = int(raw)
        except ValueError:
            max_processes = 0
        if max_processes < 1:
            raise ConfigError('qcwt:max-processes=%s is not a positive integer' % raw)

    tolerances = collections.OrderedDict(verify.DEFAULT_TOLERANCES)
    if config.has_section('tolerances'):
        for name, raw in config.items('tolerances'):
            if name not in tolerances:
                raise ConfigError('Unknown tolerance %s, use one of %s'
                                  % (name, ', '.join(tolerances)))
            try:
                value = float(raw)
            except ValueError:
                value = -1.0
            if not (value >= 0 and math.isfinite(value)):
                raise ConfigError('Tolerance %s=%s is not a non-negative number' % (name, raw))
            tolerances[name] = value
    return RunConfig(max_processes=max_processes, tolerances=tolerances, **values)


def get_processes(run_config, tasks):
    cpus = min(multiprocessing.cpu_count(), tasks)
    if 'QCWT_THREADS' in os.environ:
        try:
            threads = int(os.environ['QCWT_THREADS'])
        except ValueError:
            threads = 0
        if threads < 1:
            raise ConfigError('QCWT_THREADS=%s is not a positive integer'
                              % os.environ['QCWT_THREADS'])
        cpus = min(cpus, threads)
    if run_config.max_processes:
        cpus = min(cpus, run_config.max_processes)
    return max(cpus, 1)


def reference_grid(run_config):
    return Grid2D.centered(run_config.n, run_config.extent)


def load_wavelet(name, grid, run_config):
    """An admitted wavelet. Closed forms live on the reference grid, files on `grid`."""
    if not name.startswith('file:'):
        grid = reference_grid(run_config)
    w = get_wavelet(name, grid)
    report = admissibility_report(w, tolerance=run_config.tolerances['admissibility'])
    return w.with_admissibility(report)


def _point(text):
    try:
        x, y = (float(part) for part in text.split(','))
    except ValueError:
        raise ConfigError('%s is not a point, it should be "x,y"' % text)
    return (x, y)


def _quaternion(text):
    try:
        return quaternion.Quaternion.from_string(text)
    except ValueError:
        raise ConfigError('%s is not a quaternion, write it like "1+0.5e2-e3"' % text)


# Each kind of generated signal and the flags that apply to it.
GEN_PARAMETERS = {
    'gaussian': {'width': float, 'center': _point, 'value': _quaternion},
    'anisotropic-gaussian': {'sigma1': float, 'sigma2': float, 'angle': float,
                             'value': _quaternion},
    'random-bandlimited': {'blobs': int},
    'impulse': {'at': _point, 'value': _quaternion},
}


def cmd_gen(args, run_config):
    allowed = GEN_PARAMETERS[args.kind]
    params = {}
    for name in ('width', 'center', 'sigma1', 'sigma2', 'angle', 'blobs', 'at', 'value'):
        raw = getattr(args, name)
        if raw is None:
            continue
        if name not in allowed:
            raise ConfigError('--%s does not apply to %s signals' % (name, args.kind))
        params[name] = allowed[name](raw)
    if args.kind == 'random-bandlimited':
        params['seed'] = run_config.seed
    signal = corpus.generate(args.kind, reference_grid(run_config), **params)
    out = args.out or '%s.qsf' % args.kind
    write_qsf(out, signal.signal)
    logger.log(40, 'Wrote %s signal to %s' % (signal.name, out))
    return 0


def cmd_qft(args, run_config):
    if args.direction == 'fwd':
        write_spectrum(args.output, qft_forward(read_qsf(args.input)))
    else:
        write_qsf(args.output, qft_inverse(read_spectrum(args.input)))
    logger.log(40, 'Wrote %s' % args.output)
    return 0


def cmd_cqwt(args, run_config):
    if args.action == 'analyze':
        f = read_qsf(args.input)
        w = load_wavelet(run_config.wavelet, f.grid, run_config)
        sim = SimGrid.log_uniform(run_config.smin, run_config.smax, run_config.scales,
                                  run_config.angles, f.grid.sublattice(run_config.stride))
        scalogram = cqwt(f, w, sim, method=run_config.method)
        write_qcw(args.output, scalogram)
        logger.log(40, 'Wrote %r to %s, scale window energy deficit %.4g'
                   % (scalogram, args.output, scalogram.energy_deficit))
        return 0

    scalogram = read_qcw(args.input)
    name = args.synth_wavelet or scalogram.wavelet
    w = load_wavelet(name, scalogram.source_grid, run_config)
    reference = read_qsf(args.reference) if args.reference else None
    reconstruction = cqwt_inverse(scalogram, w, reference=reference)
    write_qsf(args.output, reconstruction.signal)
    if reconstruction.error is not None:
        logger.log(40, 'Wrote %s, relative error %.4g' % (args.output, reconstruction.error))
    else:
        logger.log(40, 'Wrote %s' % args.output)
    return 0


ADMISSIBILITY_COLUMNS = ['xi1', 'xi2', 'c_phi', 'spread', 'commutes_with_e2']


def write_admissibility_text(name, report, outfile):
    outfile.write('wavelet %s\n' % name)
    outfile.write('c_phi %r\n' % report.c_phi)
    outfile.write('spread %r\n' % report.spread)
    outfile.write('commutes_with_e2 %s\n' % report.commutes_with_e2)
    for probe, value in zip(report.probes, report.values):
        outfile.write('probe %r %r %r\n' % (float(probe[0]), float(probe[1]), float(value)))


def write_admissibility_csv(name, report, outfile):
    """One row per probe direction; spread and commutation repeat on every row."""
    writer = csv.writer(outfile)
    writer.writerow(ADMISSIBILITY_COLUMNS)
    for probe, value in zip(report.probes, report.values):
        writer.writerow([repr(float(probe[0])), repr(float(probe[1])), repr(float(value)),
                         repr(float(report.spread)), report.commutes_with_e2])


ADMISSIBILITY_REPORTS = {'csv': write_admissibility_csv, 'text': write_admissibility_text}


def cmd_wavelet(args, run_config):
    name = run_config.wavelet
    if name.startswith('file:'):
        w = file_wavelet(name[5:])
    else:
        w = get_wavelet(name, reference_grid(run_config))
    probes = default_probes(args.probes) if args.probes else None
    try:
        report = admissibility_report(w, probes,
                                      tolerance=run_config.tolerances['admissibility'])
    except AdmissibilityError as e:
        logger.log(40, 'ERROR: %s is not admissible: %s' % (w.name, e))
        return 1
    ADMISSIBILITY_REPORTS[run_config.report](w.name, report, args.stdout)
    logger.log(20, '%s: C_phi %.6g, spread %.3g' % (w.name, report.c_phi, report.spread))
    return 0


def cmd_verify(args, run_config):
    selection = []
    for suite in args.suite or ['all']:
        selection.extend(s.strip() for s in suite.split(',') if s.strip())
    suites = verify.suite_names(selection)
    settings = verify.Settings(run_config.n, run_config.extent, run_config.scales,
                               run_config.smin, run_config.smax, run_config.angles,
                               run_config.stride, run_config.seed, run_config.corpus,
                               run_config.tolerances)
    tasks = sum(len(verify.SUITES[suite]) for suite in suites)
    processes = get_processes(run_config, tasks)
    results = verify.run_suites(suites, settings, processes)

    writer = verify.REPORTS[run_config.report]
    if args.out:
        with open(args.out, 'wt', newline='') as outfile:
            writer(results, outfile)
    else:
        writer(results, args.stdout)

    failed = [result for result in results if not result.passed]
    for result in failed:
        logger.log(40, 'FAILED: %s/%s margin %.6g (tolerance %g)'
                   % (result.suite, result.name, result.margin, result.tolerance))
    logger.log(40, '%s checks in %s, %s failed' % (len(results), ', '.join(suites), len(failed)))
    return 1 if failed else 0


def cmd_export(args, run_config):
    scalogram = read_qcw(args.input)
    if args.out:
        with open(args.out, 'wt', newline='') as outfile:
            rows = export_csv(scalogram, outfile, args.a_index, args.theta_index)
    else:
        rows = export_csv(scalogram, args.stdout, args.a_index, args.theta_index)
    logger.log(30, 'Exported %s rows' % rows)
    return 0


COMMANDS = {
    'gen': cmd_gen,
    'qft': cmd_qft,
    'cqwt': cmd_cqwt,
    'wavelet': cmd_wavelet,
    'verify': cmd_verify,
    'export': cmd_export,
}


def add_configvar(parser):
    # Must come after the positionals of the command.
    parser.add_argument(
        'configvar',
        action='store',
        type=str,
        nargs='*',
        metavar='<configvar>',
        help='Override a config variable by "section:variable=value" '
             'Example: "qcwt:scales=64"')


def make_parser():
    parser = argparse.ArgumentParser(
        description='Quaternion Fourier and continuous quaternion wavelet transforms.',
        add_help=False
    )

    parser.add_argument(
        '-h',
        '--help',
        action='help',
        help='Show this help message and exit.')

    parser.add_argument(
        '--version',
        action='version',
        version=__version__,
        help='Show the version and exit.')

    parser.add_argument(
        '-c',
        '--config',
        action='store',
        default='qcwt.cfg',
        metavar='<filename>',
        type=str,
        help='The config file to use. Defaults to "qcwt.cfg".')

    parser.add_argument(
        '-v',
        '--verbose',
        action='count',
        help='Increases the output, -vv increases it even more.')

    parser.add_argument(
        '-q',
        '--quiet',
        action='count',
        help='Reduces output to only the run summary, -qq removes also that.')

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument('--n', metavar='<samples>', help='Samples per axis.')
    grid.add_argument('--extent', metavar='<extent>', help='The grid covers [-extent, extent).')

    transform = argparse.ArgumentParser(add_help=False)
    transform.add_argument('--scales', metavar='<count>', help='Number of scales.')
    transform.add_argument('--smin', metavar='<scale>', help='Smallest scale.')
    transform.add_argument('--smax', metavar='<scale>', help='Largest scale.')
    transform.add_argument('--angles', metavar='<count>', help='Number of angles.')
    transform.add_argument('--stride', metavar='<stride>',
                           help='Translation lattice stride in signal samples.')
    transform.add_argument('--method', metavar='<method>', help=', '.join(METHODS))

    commands = parser.add_subparsers(dest='command', metavar='<command>')
    commands.required = True

    gen = commands.add_parser('gen', parents=[grid], help='Generate a test signal.')
    gen.add_argument('kind', choices=sorted(GEN_PARAMETERS))
    add_configvar(gen)
    gen.add_argument('--seed', metavar='<seed>', help='Seed of random-bandlimited.')
    gen.add_argument('--width', help='Gaussian width.')
    gen.add_argument('--center', metavar='<x,y>', help='Gaussian center.')
    gen.add_argument('--sigma1', help='Anisotropic Gaussian width along its axis.')
    gen.add_argument('--sigma2', help='Anisotropic Gaussian width across its axis.')
    gen.add_argument('--angle', help='Anisotropic Gaussian axis angle.')
    gen.add_argument('--blobs', help='Number of random Gaussian blobs.')
    gen.add_argument('--at', metavar='<x,y>', help='Impulse position, a grid point.')
    gen.add_argument('--value', metavar='<quaternion>', help='Signal value, like "1+e3".')
    gen.add_argument('--out', metavar='<filename>', help='Output QSF file.')

    qft = commands.add_parser('qft', help='Forward or inverse QFT.')
    qft.add_argument('direction', choices=['fwd', 'inv'])
    qft.add_argument('input')
    qft.add_argument('output')
    add_configvar(qft)

    transform_parser = commands.add_parser('cqwt', parents=[grid, transform],
                                           help='Analyze a signal or synthesize one.')
    transform_parser.add_argument('action', choices=['analyze', 'synth'])
    transform_parser.add_argument('input')
    transform_parser.add_argument('output')
    add_configvar(transform_parser)
    transform_parser.add_argument('--wavelet', metavar='<wavelet>',
                                  help='log, dgauss or file:<path>.')
    transform_parser.add_argument('--reference', metavar='<filename>',
                                  help='Report the synthesis error against this QSF signal.')

    wavelet = commands.add_parser('wavelet', parents=[grid],
                                  help='Wavelet admissibility report.')
    wavelet.add_argument('action', choices=['admissibility'])
    add_configvar(wavelet)
    wavelet.add_argument('--wavelet', metavar='<wavelet>', help='log, dgauss or file:<path>.')
    wavelet.add_argument('--probes', type=int, metavar='<count>',
                         help='Number of probe directions.')
    wavelet.add_argument('--report', metavar='<format>', help='csv or text.')

    verify_parser = commands.add_parser('verify', parents=[grid, transform],
                                        help='Run verification suites.')
    add_configvar(verify_parser)
    verify_parser.add_argument('--suite', action='append', metavar='<suite>',
                               help='%s or all; may be repeated.' % ', '.join(verify.SUITES))
    verify_parser.add_argument('--corpus', metavar='<corpus>',
                               help=' or '.join(sorted(verify.CORPORA)))
    verify_parser.add_argument('--report', metavar='<format>', help='csv or text.')
    verify_parser.add_argument('--seed', metavar='<seed>', help='Seed of the random corpus.')
    verify_parser.add_argument('--tolerance', action='append', metavar='<name=value>',
                               help='Override a named tolerance; may be repeated.')
    verify_parser.add_argument('--out', metavar='<filename>', help='Report file.')

    export = commands.add_parser('export', help='Export a scalogram as CSV.')
    export.add_argument('input')
    add_configvar(export)
    export.add_argument('--a-index', type=int, metavar='<index>', help='Only this scale.')
    export.add_argument('--theta-index', type=int, metavar='<index>', help='Only this angle.')
    export.add_argument('--out', metavar='<filename>', help='CSV file.')

    return parser


def fold_flags(args):
    """Turn command flags into config overrides, so they win over config files."""
    overrides = list(args.configvar)
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is None or (name == 'wavelet' and args.command == 'cqwt' and
                             args.action == 'synth'):
            continue
        overrides.append('qcwt:%s=%s' % (name, value))
    for tolerance in getattr(args, 'tolerance', None) or []:
        if '=' not in tolerance:
            raise ValueError('%s is not a valid tolerance. It should be "name=value"' % tolerance)
        overrides.append('tolerances:' + tolerance)
    args.synth_wavelet = getattr(args, 'wavelet', None) if args.command == 'cqwt' else None
    return overrides


def main():
    parser = make_parser()
    args = parser.parse_args()

    setup_logging(args.verbose, args.quiet)
    args.stdout = sys.stdout

    try:
        overrides = fold_flags(args)
        return run(args, args.config, overrides)
    except (ValueError, OSError) as e:
        logger.log(50, str(e))
        return 2
    except QcwtError as e:
        logger.log(50, str(e))
        return 1


def load_config(config_file, overrides):
    # Parse the config files
    if 'HOME' in os.environ:
        home = os.environ['HOME']
    else:
        home = '~'

    # User settings
    settings_file = os.path.join(home, '.config', 'qcwt.cfg')

    config = ConfigParser()
    config.read([settings_file, config_file, 'setup.cfg'])

    for override in overrides:
        if ':' not in override or '=' not in override:
            raise ValueError('%s is not a valid config variable. '
                             'It should be "section:variable=value"' % override)
        section, rest = override.split(':', 1)
        option, value = rest.split('=', 1)
        section = section.strip()
        if not config.has_section(section):
            config.add_section(section)
        config.set(section, option.strip(), value.strip())
    return config


def run(args, config_file, overrides):
    run_config = read_run_config(load_config(config_file, overrides))
    logger.log(20, 'Running %s with %s' % (args.command, run_config._replace(tolerances=None)))
    return COMMANDS[args.command](args, run_config)


if __name__ == '__main__':
    sys.exit(main())

"""
Command line entry point:

    .. code:: bash

        numline extract corpus.jsonl
        numline tokenize --scheme scientific numbers.tsv
        numline bins fit --n 21 numbers.tsv --out bins.json
        numline bins assign --spec bins.json numbers.tsv
        numline corpus --seed 7 --out corpus.jsonl
        numline train --head dexp --corpus corpus.jsonl --out model.json
        numline eval --pred preds.tsv --truth truths.tsv
        numline experiment --config experiment.json --out report.json
        numline analyze mantissa numbers.tsv --svg mantissa.svg
        numline analyze benford numbers.tsv
        numline probe --activations a.csv --labels l.txt --target 3 --k 50

`--config` names a JSON file for the command's configuration form, and
`--set key=value` (dotted keys for nested forms) and `--seed` shadow it.
Every command writing `--out` also writes `<out>.manifest.json`.
"""
import argparse
import datetime
import io
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import (
    __version__, Error, InvalidInput, LengthMismatch, FieldError, SourceError,
    DefaultSource, UnionSource, analysis, binning, metrics, notation, numparse,
)
from . import config as configs
from .source import JsonSource

__all__ = [
    'UsageError',
    'main',
    'dispatch',
]

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_IO = 0, 2, 3

INVALID_SURFACES = ('', 'na', 'nan', 'invalid')

SCHEMES = {
    'digits': (notation.Kind.DIGITS, {}),
    'subword': (notation.Kind.DECIMAL, {}),
    'scientific': (notation.Kind.SCIENTIFIC, {}),
    'numbert': (notation.Kind.NUMBERT, {}),
    'numbert-x': (notation.Kind.NUMBERT, {'exp_separator': 'x'}),
}

DEFAULT_PAD = {
    notation.Kind.DIGITS: 17,
    notation.Kind.DECIMAL: 8,
    notation.Kind.SCIENTIFIC: 8,
    notation.Kind.NUMBERT: 8,
}


class UsageError(Error):
    pass


# io

def atomic_write(path, text):
    """
    Writes `text` to a temporary sibling of `path` and renames it over
    `path`, so a failed run never leaves a partial file behind.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix='.' + os.path.basename(path), dir=directory)
    try:
        with io.open(fd, 'w', encoding='utf-8', newline='\n') as fo:
            fo.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + '\n'


def _number(text):
    text = text.strip().replace(',', '')
    if text.isdigit():
        return int(text)
    return float(text)


def read_numbers(path, allow_invalid=False):
    """
    Reads a numbers TSV: the last column is the value, an optional first
    column the id (the line number otherwise). A non-numeric first line is a
    header.

    :return: list of (id, value)
    """
    rows = []
    with io.open(path, 'r', encoding='utf-8') as fo:
        for line_no, line in enumerate(fo, 1):
            line = line.rstrip('\n')
            if not line.strip():
                continue
            cols = line.split('\t')
            key = cols[0] if len(cols) > 1 else str(line_no)
            surface = cols[-1].strip()
            if allow_invalid and surface.lower() in INVALID_SURFACES:
                rows.append((key, notation.INVALID))
                continue
            try:
                rows.append((key, _number(surface)))
            except ValueError:
                if line_no == 1:
                    continue
                raise InvalidInput('{0}:{1} - {2!r} is not a number'.format(path, line_no, surface))
    return rows


def _flag_value(text):
    # JSON literals so lists and nested values can be set, e.g. heads=["dexp"]
    try:
        return json.loads(text)
    except ValueError:
        return text


def _nest(flags):
    nested = {}
    for key, value in flags.items():
        parts = key.split('.')
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise UsageError('--set {0} conflicts with another key'.format(key))
        node[parts[-1]] = value
    return nested


def load_config(form_type, args):
    """
    Maps `form_type` from `--set`/`--seed` flags layered over the
    `--config` file.
    """
    flags = {}
    for item in args.set or []:
        key, sep, value = item.partition('=')
        if not sep or not key:
            raise UsageError('--set expects key=value, got {0!r}'.format(item))
        flags[key.strip()] = _flag_value(value)
    if args.seed is not None:
        flags['seed'] = args.seed
    srcs = [DefaultSource(_nest(flags), location='flags')]
    if args.config:
        srcs.append(JsonSource.from_file(args.config))
    return form_type(UnionSource(srcs))


class Run(object):
    """
    Output side of one command: the primary output (file or stdout) and its
    manifest.
    """

    def __init__(self, args, argv):
        self.args = args
        self.argv = argv
        self.config = {}
        self.inputs = []

    @property
    def command(self):
        names = [self.args.command]
        for attr in ('bins_command', 'analyze_command'):
            if getattr(self.args, attr, None):
                names.append(getattr(self.args, attr))
        return ' '.join(names)

    def emit(self, text, path=None):
        path = path or self.args.out
        if not path:
            sys.stdout.write(text)
            return
        atomic_write(path, text)
        logger.info('wrote path=%s bytes=%d', path, len(text.encode('utf-8')))

    def finish(self):
        if not self.args.out:
            return
        run = configs.RunConfig({
            'command': self.command,
            'seed': self.config.get('seed', self.args.seed or 0),
            'out': self.args.out,
            'inputs': self.inputs + ([self.args.config] if self.args.config else []),
            'params': dict(self.config),
        })
        manifest = dict(
            run,
            argv=self.argv,
            version=__version__,
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
        atomic_write(self.args.out + '.manifest.json', _dumps(manifest))


# commands

def cmd_extract(args, run):
    run.inputs.append(args.file)
    lines = ['line_no\tstart\tend\tsurface\tvalue\texponent\tmantissa\tstatus']
    with io.open(args.file, 'r', encoding='utf-8') as fo:
        for line_no, line in enumerate(fo, 1):
            if not line.strip():
                continue
            try:
                text = json.loads(line)['text']
            except (ValueError, KeyError, TypeError):
                raise InvalidInput('{0}:{1} - expected a JSON object with "text"'.format(
                    args.file, line_no,
                ))
            for span in numparse.extract(text):
                parsed = span.parsed
                lines.append('\t'.join(str(x) for x in (
                    line_no, span.byte_start, span.byte_end, span.surface,
                    '' if span.value is None else repr(span.value),
                    '' if parsed is None else parsed.exponent,
                    '' if parsed is None else repr(parsed.mantissa),
                    span.status.value,
                )))
    run.emit('\n'.join(lines) + '\n')


def cmd_tokenize(args, run):
    run.inputs.append(args.file)
    kind, options = SCHEMES[args.scheme]
    scheme = notation.NotationScheme(
        kind, args.pad or DEFAULT_PAD[kind], include_exponent=not args.no_exponent, **options
    )
    run.config = {'scheme': args.scheme, 'pad_len': scheme.pad_len}
    lines = []
    for key, value in read_numbers(args.file):
        lines.append('{0}\t{1}'.format(key, ' '.join(notation.render(value, scheme).tokens)))
    run.emit('\n'.join(lines) + '\n')


def cmd_bins_fit(args, run):
    run.inputs.append(args.file)
    values = [value for _, value in read_numbers(args.file)]
    bins = binning.fit_freq_bins(values, args.n)
    run.config = {'n_bins': args.n}
    run.emit(_dumps(bins.to_json()))


def cmd_bins_assign(args, run):
    run.inputs.append(args.file)
    if args.spec:
        run.inputs.append(args.spec)
        with io.open(args.spec, 'r', encoding='utf-8') as fo:
            bins = binning.from_json(json.load(fo))
    elif args.decade:
        bins = binning.DecadeBins(binning.Rule(args.decade))
    else:
        bins = binning.FreqBins.from_edges(binning.FINANCE_EDGES)
    run.config = bins.to_json()
    lines = ['id\tvalue\tbin\trepresentative']
    for key, value in read_numbers(args.file):
        k = bins.bin_of(value)
        lines.append('{0}\t{1}\t{2}\t{3!r}'.format(key, value, k, bins.representative(k)))
    run.emit('\n'.join(lines) + '\n')


def cmd_corpus(args, run):
    from .harness import gen_corpus, write_examples

    spec = load_config(configs.CorpusSpec, args)
    run.config = spec
    corpus = gen_corpus(spec)
    out = io.StringIO()
    for split in ('train', 'dev', 'test', 'transfer'):
        write_examples(out, corpus.split(split), split=split)
    run.emit(out.getvalue())


def _read_corpus(path):
    from .harness import Corpus, read_examples

    with io.open(path, 'r', encoding='utf-8') as fo:
        lines = fo.readlines()
    splits = {s: read_examples(lines, split=s) for s in ('train', 'dev', 'test', 'transfer')}
    if not splits['train'] or not splits['dev']:
        raise InvalidInput('{0} - needs train and dev examples'.format(path))
    return Corpus(**splits)


def cmd_train(args, run):
    from .harness import train

    config = load_config(configs.TrainConfig, args)
    run.config = dict(config, head=args.head)
    run.inputs.append(args.corpus)
    corpus = _read_corpus(args.corpus)
    model = train(args.head, config, corpus)
    run.emit(json.dumps(model.to_json(), sort_keys=True) + '\n')


def cmd_eval(args, run):
    run.inputs.extend([args.pred, args.truth])
    preds = read_numbers(args.pred, allow_invalid=True)
    truths = read_numbers(args.truth)
    if len(preds) != len(truths):
        raise LengthMismatch(len(preds), len(truths))
    by_id = dict(preds)
    if len(by_id) != len(preds) or set(by_id) != set(k for k, _ in truths):
        raise InvalidInput('prediction and truth ids differ')
    run.config = {'z': args.z, 'bootstrap_k': args.bootstrap_k, 'bootstrap_frac': args.bootstrap_frac}
    report = metrics.evaluate(
        [by_id[k] for k, _ in truths], [v for _, v in truths],
        z=args.z, k=args.bootstrap_k, frac=args.bootstrap_frac,
        rng=np.random.default_rng(args.seed or 0),
    )
    run.emit(_dumps(report.to_json()))


def cmd_experiment(args, run):
    from .harness import run_experiment

    config = load_config(configs.ExperimentConfig, args)
    run.config = config
    result = run_experiment(config)
    run.emit(_dumps(result.to_json()))
    table = args.table
    if table is None and args.out:
        table = os.path.join(os.path.dirname(os.path.abspath(args.out)), 'table.tsv')
    if table:
        atomic_write(table, result.table())
    else:
        sys.stdout.write(result.table())


def cmd_analyze_mantissa(args, run):
    run.inputs.append(args.file)
    values = [value for _, value in read_numbers(args.file)]
    hist = analysis.mantissa_histogram(values, args.bins)
    run.config = {'n_bins': args.bins}
    run.emit(hist.to_csv())
    if args.svg:
        analysis.plot_mantissas([hist], args.svg)


def cmd_analyze_benford(args, run):
    run.inputs.append(args.file)
    report = analysis.benford_deviation([value for _, value in read_numbers(args.file)])
    run.emit(_dumps(report.to_json()))


def cmd_probe(args, run):
    run.inputs.extend([args.activations, args.labels])
    probe = analysis.neuron_pr(
        analysis.load_activations(args.activations), analysis.load_labels(args.labels),
        args.target, args.k,
    )
    run.config = {'target': args.target, 'k': args.k}
    run.emit(_dumps(probe.to_json(top=args.top)))


# parser

def parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='global random seed')
    common.add_argument('--out', default=None, help='output path (default stdout)')
    common.add_argument('--config', default=None, help='JSON configuration file')
    common.add_argument(
        '--set', action='append', metavar='KEY=VALUE', help='override a configuration key',
    )
    common.add_argument('-v', '--verbose', action='count', default=0)

    root = argparse.ArgumentParser(prog='numline', description=__doc__.split('\n')[1])
    root.add_argument('--version', action='version', version=__version__)
    commands = root.add_subparsers(dest='command', metavar='command')
    commands.required = True

    p = commands.add_parser('extract', parents=[common], help='numeric literals of a corpus')
    p.add_argument('file')
    p.set_defaults(func=cmd_extract)

    p = commands.add_parser('tokenize', parents=[common], help='render numbers as tokens')
    p.add_argument('--scheme', choices=sorted(SCHEMES), default='digits')
    p.add_argument('--pad', type=int, default=None)
    p.add_argument('--no-exponent', action='store_true', help='numbert-x without exponent')
    p.add_argument('file')
    p.set_defaults(func=cmd_tokenize)

    bins = commands.add_parser('bins', help='number line vocabularies')
    bins_commands = bins.add_subparsers(dest='bins_command', metavar='command')
    bins_commands.required = True
    p = bins_commands.add_parser('fit', parents=[common], help='fit equal-frequency bins')
    p.add_argument('--n', type=int, default=21)
    p.add_argument('file')
    p.set_defaults(func=cmd_bins_fit)
    p = bins_commands.add_parser('assign', parents=[common], help='assign numbers to bins')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--spec', default=None, help='bins JSON from "bins fit"')
    group.add_argument('--decade', choices=['am', 'gm'], default=None)
    p.add_argument('file')
    p.set_defaults(func=cmd_bins_assign)

    p = commands.add_parser('corpus', parents=[common], help='generate a synthetic corpus')
    p.set_defaults(func=cmd_corpus)

    p = commands.add_parser('train', parents=[common], help='train one decoder head')
    p.add_argument('--head', choices=configs.HEAD_KINDS, required=True)
    p.add_argument('--corpus', required=True)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser('eval', parents=[common], help='score predictions')
    p.add_argument('--pred', required=True)
    p.add_argument('--truth', required=True)
    p.add_argument('--z', type=float, default=metrics.Z_99)
    p.add_argument('--bootstrap-k', type=int, default=10)
    p.add_argument('--bootstrap-frac', type=float, default=0.75)
    p.set_defaults(func=cmd_eval)

    p = commands.add_parser('experiment', parents=[common], help='compare all heads')
    p.add_argument('--table', default=None, help='TSV table path (default next to --out)')
    p.set_defaults(func=cmd_experiment)

    analyze = commands.add_parser('analyze', help='corpus statistics')
    analyze_commands = analyze.add_subparsers(dest='analyze_command', metavar='command')
    analyze_commands.required = True
    p = analyze_commands.add_parser('mantissa', parents=[common], help='mantissa histogram')
    p.add_argument('--bins', type=int, default=18)
    p.add_argument('--svg', default=None)
    p.add_argument('file')
    p.set_defaults(func=cmd_analyze_mantissa)
    p = analyze_commands.add_parser('benford', parents=[common], help='leading digit check')
    p.add_argument('file')
    p.set_defaults(func=cmd_analyze_benford)

    p = commands.add_parser('probe', parents=[common], help='neuron trigger probe')
    p.add_argument('--activations', required=True)
    p.add_argument('--labels', required=True)
    p.add_argument('--target', type=int, required=True)
    p.add_argument('--k', type=int, default=50)
    p.add_argument('--top', type=int, default=None)
    p.set_defaults(func=cmd_probe)

    return root


def dispatch(argv):
    """
    Runs one command.

    :return: exit status, 0 on success, 2 on usage, configuration or domain
        errors and 3 on I/O errors.
    """
    args = parser().parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format='%(asctime)s %(levelname)s %(name)s %(message)s',
        stream=sys.stderr,
    )
    run = Run(args, list(argv))
    try:
        args.func(args, run)
        run.finish()
    except (Error, FieldError, SourceError, UnicodeDecodeError) as ex:
        sys.stderr.write('error: {0}: {1}\n'.format(type(ex).__name__, ex))
        return EXIT_ERROR
    except OSError as ex:
        sys.stderr.write('error: {0}: {1}\n'.format(type(ex).__name__, ex))
        return EXIT_IO
    return EXIT_OK


def main(argv=None):
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == '__main__':
    main()

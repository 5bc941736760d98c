"""Batch command-line front end.

Subcommands: synth, mfdfa, dwt, coherence, report. Any positional input
starting with a generator prefix (white:, fgn:, fbm:, cascade:) is
synthesized in memory; anything else is read as a signal CSV. Data goes to
files in --out-dir (written atomically) and, for report, a human-readable
table on standard output; diagnostics only ever go to standard error.

Exit codes: 0 on success, 1-125 = number of failed inputs, 126 = usage
error (bad flags, bad config file).
"""
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np
from click.core import ParameterSource

from . import dwt as dwt_mod
from . import io as io_mod
from . import mfdfa as mfdfa_mod
from .coherence import wavelet_coherence
from ._serialize import atomic_write_text, dumps_json, format_float, rows_to_csv
from .errors import EmptyGroup, FractalSigError, ParseError
from .synth import GENERATOR_PREFIXES, generate, parse_generator_spec

FORMATS = ("json", "csv", "both")


def _read_config_file(path):
    """Parse a key=value config file (one pair per line, '#' comments)."""
    config = {}
    try:
        with open(path, "r") as fh:
            lines = fh.read().split("\n")
    except OSError as exc:
        raise click.UsageError(f"cannot read config file {path}: {exc.strerror}")
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise click.UsageError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        name = key.strip().replace("-", "_")
        if name == "format":
            name = "fmt"
        config[name] = value.strip()
    return config


def _known_config_keys():
    keys = set()
    for command in cli.commands.values():
        for param in command.params:
            keys.add(param.name)
    for param in cli.params:
        if param.name not in ("config",):
            keys.add(param.name)
    return keys


def _apply_config(ctx, group=False):
    """Overlay config-file values onto defaulted parameters.

    Explicit flags always win; config fills in only where the parameter
    still holds its built-in default.
    """
    values = dict(ctx.params)
    config = (ctx.obj or {}).get("config") or {}
    params = {p.name: p for p in (cli.params if group else ctx.command.params)}
    for key, raw in config.items():
        param = params.get(key)
        if param is None:
            continue
        if ctx.get_parameter_source(param.name) == ParameterSource.DEFAULT:
            values[param.name] = param.type.convert(raw, param, ctx)
    return values


@click.group()
@click.option("--out-dir", default=".", show_default=True,
              help="Directory for output files (created if missing).")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1),
              help="Process independent inputs with this many threads.")
@click.option("--seed-override", default=None, type=int,
              help="Replace the seed of every generator spec.")
@click.option("--format", "fmt", default="both", show_default=True,
              type=click.Choice(FORMATS),
              help="Which machine-readable outputs to write.")
@click.option("--config", default=None, type=click.Path(),
              help="key=value file supplying defaults (flags still win).")
@click.pass_context
def cli(ctx, out_dir, jobs, seed_override, fmt, config):
    """Fractal signal analysis: generators, MFDFA, DWT, wavelet coherence."""
    ctx.obj = {}
    if config is not None:
        parsed = _read_config_file(config)
        unknown = set(parsed) - _known_config_keys()
        if unknown:
            raise click.UsageError(
                f"unknown config key(s): {', '.join(sorted(unknown))}")
        ctx.obj["config"] = parsed
        values = _apply_config(ctx, group=True)
        out_dir = values["out_dir"]
        jobs = values["jobs"]
        seed_override = values["seed_override"]
        fmt = values["fmt"]
    ctx.obj.update(out_dir=out_dir, jobs=jobs,
                   seed_override=seed_override, fmt=fmt)


def _diag(context, exc):
    click.echo(f"fractalsig: error: {context}: {type(exc).__name__}: {exc}", err=True)


def _out_path(ctx, name):
    out_dir = ctx.obj["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _load_input(token, seed_override):
    """Resolve a positional input to (signal, stem)."""
    if token.startswith(GENERATOR_PREFIXES):
        spec = parse_generator_spec(token)
        if seed_override is not None:
            spec.seed = seed_override
        return generate(spec), spec.label()
    stem = os.path.splitext(os.path.basename(token))[0]
    return io_mod.load_signal_csv(token), stem


def _run_inputs(ctx, items, worker):
    """Apply worker to each item, counting failures; order is preserved.

    worker raises FractalSigError for per-input problems; any result is
    passed through. Returns (results, failures) with None for failed slots.
    """
    jobs = ctx.obj["jobs"]

    def safe(item):
        try:
            return worker(item), None
        except FractalSigError as exc:
            return None, exc

    if jobs <= 1 or len(items) <= 1:
        outcomes = [safe(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(safe, items))
    results = []
    failures = 0
    for item, (result, exc) in zip(items, outcomes):
        if exc is not None:
            label = item if isinstance(item, str) else str(item)
            _diag(label, exc)
            failures += 1
        results.append(result)
    return results, failures


@cli.command()
@click.argument("spec")
@click.argument("out", required=False, default=None)
@click.pass_context
def synth(ctx, spec, out):
    """Write the signal described by SPEC (e.g. "fgn:H=0.7,n=16,seed=42") as CSV."""
    _apply_config(ctx)
    try:
        parsed = parse_generator_spec(spec)
        if ctx.obj["seed_override"] is not None:
            parsed.seed = ctx.obj["seed_override"]
        signal = generate(parsed)
    except FractalSigError as exc:
        _diag(spec, exc)
        return 1
    name = out if out is not None else parsed.label() + ".csv"
    path = name if os.path.isabs(name) else _out_path(ctx, name)
    io_mod.save_signal_csv(signal, path)
    return 0


def _mfdfa_options(fn):
    options = [
        click.option("--detrend-order", default=1, show_default=True,
                     type=click.IntRange(0, 3), help="Polynomial degree removed per segment."),
        click.option("--delta", default=0.02, show_default=True, type=float,
                     help="Dead band around H=0.5 for the classification."),
        click.option("--q-min", default=-5.0, show_default=True, type=float),
        click.option("--q-max", default=5.0, show_default=True, type=float),
        click.option("--q-step", default=0.25, show_default=True, type=float),
        click.option("--s-min", default=16, show_default=True, type=int),
        click.option("--s-max", default=0, show_default=True, type=int,
                     help="Largest scale; 0 means N/4."),
        click.option("--s-count", default=20, show_default=True, type=int),
        click.option("--fit-lo", default=0, show_default=True, type=int,
                     help="Lower fit bound; 0 means the smallest scale."),
        click.option("--fit-hi", default=0, show_default=True, type=int,
                     help="Upper fit bound; 0 means the largest scale."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _build_config(values, n):
    """Turn CLI values into an MfdfaConfig for a length-n signal."""
    q_min, q_max, q_step = values["q_min"], values["q_max"], values["q_step"]
    if q_step <= 0 or q_max <= q_min:
        raise click.UsageError("need q-max > q-min and q-step > 0")
    count = int(round((q_max - q_min) / q_step)) + 1
    q_grid = np.linspace(q_min, q_max, count)
    s_min = values["s_min"]
    s_max = values["s_max"] if values["s_max"] > 0 else max(s_min + 1, n // 4)
    s_count = values["s_count"]
    if s_count < 4 or s_max <= s_min:
        raise click.UsageError("need s-max > s-min and s-count >= 4")
    s_grid = np.unique(np.round(np.geomspace(s_min, s_max, s_count)).astype(np.int64))
    fit_lo = values["fit_lo"] if values["fit_lo"] > 0 else int(s_grid[0])
    fit_hi = values["fit_hi"] if values["fit_hi"] > 0 else int(s_grid[-1])
    return mfdfa_mod.MfdfaConfig(q_grid=q_grid, s_grid=s_grid,
                                 m=values["detrend_order"],
                                 fit_range=(fit_lo, fit_hi),
                                 dead_band=values["delta"])


@cli.command()
@click.argument("inputs", nargs=-1, required=True)
@_mfdfa_options
@click.pass_context
def mfdfa(ctx, inputs, **_):
    """Multifractal spectrum (JSON) and fluctuation table (CSV) per input."""
    values = _apply_config(ctx)
    fmt = ctx.obj["fmt"]

    def worker(token):
        signal, stem = _load_input(token, ctx.obj["seed_override"])
        config = _build_config(values, len(signal))
        spectrum, table = mfdfa_mod.analyze_full(signal, config)
        if fmt in ("json", "both"):
            atomic_write_text(_out_path(ctx, stem + ".mfdfa.json"),
                              dumps_json(spectrum.to_dict()))
        if fmt in ("csv", "both"):
            atomic_write_text(_out_path(ctx, stem + ".fq.csv"),
                              rows_to_csv(table.long_rows(), header="q,s,F,excluded"))
        return stem

    _, failures = _run_inputs(ctx, list(inputs), worker)
    return failures


@cli.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option("--order", default=4, show_default=True, type=click.IntRange(1, 10),
              help="Daubechies order (vanishing moments).")
@click.option("--levels", default=5, show_default=True, type=click.IntRange(min=1))
@click.option("--boundary", default="periodic", show_default=True,
              type=click.Choice(dwt_mod.BOUNDARY_MODES))
@click.option("--band", default=0, show_default=True, type=int,
              help="Detail level for the fluctuation trace; 0 means --levels.")
@click.pass_context
def dwt(ctx, inputs, **_):
    """Multilevel DWT: decomposition JSON plus one band's fluctuation trace CSV."""
    values = _apply_config(ctx)
    fmt = ctx.obj["fmt"]
    band = values["band"] if values["band"] > 0 else values["levels"]
    if band > values["levels"]:
        raise click.UsageError(f"band {band} exceeds levels {values['levels']}")

    def worker(token):
        signal, stem = _load_input(token, ctx.obj["seed_override"])
        filt = dwt_mod.daubechies_filters(values["order"])
        decomp = dwt_mod.dwt_multilevel(signal, filt, values["levels"],
                                        boundary_mode=values["boundary"])
        if fmt in ("json", "both"):
            atomic_write_text(_out_path(ctx, stem + ".dwt.json"),
                              dumps_json(decomp.to_dict()))
        if fmt in ("csv", "both"):
            trace = dwt_mod.reconstruct_band(decomp, filt, band)
            lines = "\n".join(format_float(v) for v in trace) + "\n"
            atomic_write_text(_out_path(ctx, f"{stem}.band{band}.csv"), lines)
        return stem

    _, failures = _run_inputs(ctx, list(inputs), worker)
    return failures


@cli.command()
@click.argument("x_input")
@click.argument("y_input")
@click.option("--wavelet-order", default=2, show_default=True,
              type=click.IntRange(1, 8), help="Complex Gaussian derivative order.")
@click.option("--smooth-time", default=0.6, show_default=True, type=float,
              help="Time window width as a fraction of scale.")
@click.option("--smooth-scales", default=3, show_default=True, type=int,
              help="Adjacent scales averaged (odd).")
@click.pass_context
def coherence(ctx, x_input, y_input, **_):
    """Wavelet coherence and phase of two signals (long-format CSV and JSON)."""
    values = _apply_config(ctx)
    fmt = ctx.obj["fmt"]

    def worker(_):
        x, x_stem = _load_input(x_input, ctx.obj["seed_override"])
        y, y_stem = _load_input(y_input, ctx.obj["seed_override"])
        result = wavelet_coherence(x, y, wavelet_order=values["wavelet_order"],
                                   time_window_factor=values["smooth_time"],
                                   scale_window=values["smooth_scales"])
        stem = f"{x_stem}__{y_stem}"
        if fmt in ("json", "both"):
            atomic_write_text(_out_path(ctx, stem + ".coherence.json"),
                              dumps_json(result.to_dict()))
        if fmt in ("csv", "both"):
            atomic_write_text(_out_path(ctx, stem + ".coherence.csv"),
                              rows_to_csv(result.long_rows(),
                                          header="scale,position,coherence,phase"))
        return stem

    _, failures = _run_inputs(ctx, [f"{x_input} / {y_input}"], worker)
    return failures


def _resolve_groups(tokens):
    """Expand group arguments into [(label, [input, ...]), ...] in stable order.

    A directory contributes one group (its sorted *.csv files) under its own
    name; any other path is a manifest of "label<TAB>path-or-spec" lines.
    """
    order = []
    members = {}

    def add(label, item):
        if label not in members:
            members[label] = []
            order.append(label)
        members[label].append(item)

    for token in tokens:
        if os.path.isdir(token):
            files = sorted(fn for fn in os.listdir(token) if fn.endswith(".csv"))
            label = os.path.basename(os.path.normpath(token))
            if not files:
                raise EmptyGroup(f"directory {token} contains no .csv files")
            for fn in files:
                add(label, os.path.join(token, fn))
        else:
            try:
                with open(token, "r") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ParseError(f"cannot read group manifest {token}: {exc.strerror}")
            found = False
            for lineno, line in enumerate(text.split("\n"), start=1):
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                label, sep, item = line.partition("\t")
                if not sep or not label.strip() or not item.strip():
                    raise ParseError(
                        f"{token}:{lineno}: expected 'label<TAB>input', got {line!r}")
                add(label.strip(), item.strip())
                found = True
            if not found:
                raise EmptyGroup(f"manifest {token} lists no inputs")
    return [(label, members[label]) for label in order]


@cli.command()
@click.argument("groups", nargs=-1, required=True)
@_mfdfa_options
@click.pass_context
def report(ctx, groups, **_):
    """Group summary table: mean and std of H and of the spectrum width.

    GROUPS are directories of signal CSVs or manifest files with
    "label<TAB>path-or-spec" lines.
    """
    values = _apply_config(ctx)
    fmt = ctx.obj["fmt"]
    try:
        resolved = _resolve_groups(list(groups))
    except FractalSigError as exc:
        _diag("groups", exc)
        return 1

    flat = [(label, item) for label, items in resolved for item in items]

    def worker(pair):
        _, token = pair
        signal, _ = _load_input(token, ctx.obj["seed_override"])
        config = _build_config(values, len(signal))
        spectrum = mfdfa_mod.analyze(signal, config)
        return spectrum.hurst, spectrum.width

    results, failures = _run_inputs(ctx, flat, worker)

    rows = []
    for label, items in resolved:
        pairs = [r for (lab, _), r in zip(flat, results) if lab == label and r is not None]
        if not pairs:
            _diag(label, EmptyGroup("no input in this group succeeded"))
            failures += 1
            continue
        hursts = np.array([p[0] for p in pairs])
        widths = np.array([p[1] for p in pairs])
        std_h = float(hursts.std(ddof=1)) if len(pairs) > 1 else 0.0
        std_w = float(widths.std(ddof=1)) if len(pairs) > 1 else 0.0
        rows.append({
            "label": label, "count": len(pairs),
            "H": hursts, "width": widths,
            "mean_H": float(hursts.mean()), "std_H": std_h,
            "mean_width": float(widths.mean()), "std_width": std_w,
        })

    if rows:
        if fmt in ("json", "both"):
            atomic_write_text(_out_path(ctx, "report.json"),
                              dumps_json({"groups": rows}))
        if fmt in ("csv", "both"):
            csv_rows = [(r["label"], r["count"], r["mean_H"], r["std_H"],
                         r["mean_width"], r["std_width"]) for r in rows]
            atomic_write_text(_out_path(ctx, "report.csv"),
                              rows_to_csv(csv_rows,
                                          header="group,count,mean_H,std_H,mean_width,std_width"))
        width = max(len(r["label"]) for r in rows)
        click.echo(f"{'group':<{width}}  {'n':>3}  {'H (mean ± std)':<19}  "
                   "width (mean ± std)")
        for r in rows:
            click.echo(f"{r['label']:<{width}}  {r['count']:>3}  "
                       f"{r['mean_H']:.4f} ± {r['std_H']:.4f}    "
                       f"{r['mean_width']:.4f} ± {r['std_width']:.4f}")
    return failures


def main(argv=None):
    """Console entry point; returns the process exit code."""
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 126
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 126
    except click.exceptions.Abort:
        return 130
    except FractalSigError as exc:
        _diag("fatal", exc)
        return 1
    if result is None:
        return 0
    return min(int(result), 125)


if __name__ == "__main__":
    sys.exit(main())

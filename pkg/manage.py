"""
Saturation Toolkit command line
Search, verification, Cayley scans and the graph atlas
"""

import logging
import sys

import click

from config import get_config
from models import Graph, GraphError
from services.atlas_service import AtlasError, export, get_entry, list_entries, verify_all
from services.background_tasks import run_jobs
from services.cayley_service import (CayleyError, cayley_complement, check_cayley_primitive,
                                     family_instance, family_table, predicted_unique_clique, scan_generator_sets,
                                     scan_table)
from services.clique_service import completion_count
from services.graph6_service import Graph6FormatError, graph6_decode, graph6_encode
from services.saturation_service import saturation_verdict
from services.search_service import (SearchConfig, SearchError, SearchJob, read_job_file,
                                     split_jobs, write_job_file, write_output_file)
from services.validation import (ValidationError, parse_family_kind, parse_generators,
                                 validate_cayley_spec, validate_range, validate_search_order)

logger = logging.getLogger(__name__)


def _configure_logging(level: str):
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format=_settings().LOG_FORMAT, stream=sys.stderr, force=True)


def _settings():
    ctx = click.get_current_context(silent=True)
    if ctx is not None and ctx.obj is not None:
        return ctx.obj
    return get_config()


def _bad(e: Exception, param: str = None):
    raise click.BadParameter(str(e), param_hint=param)


@click.group()
@click.option('--config', 'config_name', default=None, help='Configuration name (development, production, testing)')
@click.option('--verbose', is_flag=True, help='Log at DEBUG level')
@click.pass_context
def cli(ctx, config_name, verbose):
    """Uniquely K_r-saturated graph toolkit."""
    try:
        ctx.obj = get_config(config_name)
    except KeyError as e:
        raise click.BadParameter(str(e), param_hint='--config')
    _configure_logging('DEBUG' if verbose else ctx.obj.LOG_LEVEL)


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Number of vertices')
@click.option('--r', 'r', type=int, required=True, help='Clique parameter')
@click.option('--all', 'all_graphs', is_flag=True, help='Keep graphs with dominating vertices')
@click.option('--primitive-only', is_flag=True, help='Only r-primitive graphs (default)')
@click.option('--jobs', 'workers', type=int, default=None, help='Worker processes')
@click.option('--checkpoint', type=click.Path(dir_okay=False), default=None, help='Append-only checkpoint file')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write results here instead of stdout')
@click.option('--emit-jobs', type=click.Path(dir_okay=False), default=None, help='Write the job split and stop')
@click.option('--depth', type=int, default=None, help='Split depth for --emit-jobs and parallel runs')
@click.option('--job-file', type=click.Path(exists=True, dir_okay=False), default=None, help='Run only these jobs')
@click.option('--verbose', is_flag=True, help='Log at DEBUG level')
@click.pass_obj
def search(settings, n, r, all_graphs, primitive_only, workers, checkpoint, out, emit_jobs, depth,
           job_file, verbose):
    """Enumerate uniquely K_r-saturated graphs on n vertices."""
    if verbose:
        _configure_logging('DEBUG')
    if all_graphs and primitive_only:
        raise click.UsageError("--all and --primitive-only are mutually exclusive")
    try:
        validate_search_order(n, r, settings.MAX_SEARCH_ORDER)
    except ValidationError as e:
        _bad(e, '--n/--r')
    workers = settings.SEARCH_WORKERS if workers is None else workers
    if workers < 1:
        _bad(ValueError(f"--jobs must be at least 1, got {workers}"), '--jobs')
    depth = settings.SPLIT_DEPTH if depth is None else depth
    if depth < 0:
        _bad(ValueError(f"--depth must be non-negative, got {depth}"), '--depth')

    cfg = SearchConfig(n, r, primitive_only=not all_graphs, max_depth_for_split=depth)

    if emit_jobs:
        jobs = split_jobs(cfg, depth)
        write_job_file(emit_jobs, jobs)
        click.echo(f"Wrote {len(jobs)} jobs to {emit_jobs}", err=True)
        return

    try:
        if job_file:
            jobs = read_job_file(job_file)
        elif workers > 1 or checkpoint:
            jobs = split_jobs(cfg, depth)
        else:
            jobs = [SearchJob()]
        results, stats = run_jobs(cfg, jobs, workers=workers, checkpoint=checkpoint,
                                  fsync=settings.CHECKPOINT_FSYNC)
    except KeyboardInterrupt:
        click.echo("Interrupted; completed jobs are kept in the checkpoint", err=True)
        sys.exit(130)
    except SearchError as e:
        logger.error(f"Search failed: {e}")
        raise click.ClickException(str(e))

    if out:
        write_output_file(out, results)
    else:
        for form in sorted(results):
            click.echo(form)
    click.echo(stats.summary(), err=True)


@cli.command()
@click.option('--r', 'r', type=int, required=True, help='Clique parameter')
@click.option('--graph6', 'graph6_texts', multiple=True, help='graph6 string (repeatable); default reads stdin')
@click.option('--adjacency', 'adjacency_files', multiple=True, type=click.File('r'),
              help='Adjacency-matrix text file: n, then n rows of 0/1 (repeatable)')
@click.option('--primitive', is_flag=True, help='Also reject dominating vertices')
def verify(r, graph6_texts, adjacency_files, primitive):
    """Print YES or NO with a reason for each input graph."""
    if r < 2:
        _bad(ValueError(f"r must be at least 2, got {r}"), '--r')
    graphs = []
    try:
        for handle in adjacency_files:
            graphs.append(Graph.from_adjacency_text(handle.read()))
    except GraphError as e:
        _bad(e, '--adjacency')
    if graph6_texts or not adjacency_files:
        texts = list(graph6_texts) or [line for line in click.get_text_stream('stdin') if line.strip()]
        try:
            graphs.extend(graph6_decode(text) for text in texts)
        except Graph6FormatError as e:
            _bad(e, '--graph6')
    for graph in graphs:
        try:
            verdict = saturation_verdict(graph, r, primitive=primitive)
        except GraphError as e:
            _bad(e, '--r')
        click.echo(verdict.line())


@cli.group()
def cayley():
    """Circulant Cayley complements."""


@cayley.command('check')
@click.option('--n', 'n', type=int, required=True, help='Modulus')
@click.option('--gens', required=True, help='Comma-separated generators, e.g. 1,4')
def cayley_check(n, gens):
    """Print r when the complement is r-primitive, else 'not primitive'."""
    try:
        spec = validate_cayley_spec(n, parse_generators(gens))
    except ValidationError as e:
        _bad(e, '--gens')
    r = check_cayley_primitive(spec)
    click.echo(str(r) if r is not None else 'not primitive')


@cayley.command('scan')
@click.option('--g', 'g', type=int, required=True, help='Number of generators')
@click.option('--max-gen', type=int, required=True, help='Largest generator')
@click.option('--n-from', type=int, required=True, help='Smallest modulus')
@click.option('--n-to', type=int, required=True, help='Largest modulus')
@click.option('--gens', default=None, help='Scan only this generator set')
@click.option('--jobs', 'workers', type=int, default=None, help='Worker processes')
@click.pass_obj
def cayley_scan(settings, g, max_gen, n_from, n_to, gens, workers):
    """Print TSV rows g, S, r, n for every r-primitive complement found."""
    try:
        n_range = validate_range(n_from, n_to, 'modulus range')
        only = [parse_generators(gens)] if gens else None
        if g < 1 or max_gen < g:
            raise ValidationError(f"Need 1 <= g <= max-gen, got g = {g}, max-gen = {max_gen}")
    except ValidationError as e:
        _bad(e)
    workers = settings.CAYLEY_SCAN_WORKERS if workers is None else workers
    hits = scan_generator_sets(g, max_gen, n_range, only=only, workers=workers,
                               state_limit=settings.CAYLEY_WINDOW_STATE_LIMIT)
    table = scan_table(hits)
    for row in table.itertuples(index=False):
        click.echo(f"{row.g}\t{row.S}\t{row.r}\t{row.n}")


@cayley.command('family')
@click.option('--kind', required=True, help='two or three')
@click.option('--t', 't', type=int, required=True, help='Family parameter, at least 2')
@click.option('--emit-clique', is_flag=True, help='Print and verify the predicted unique clique')
@click.option('--table', 'table_to', type=int, default=None, help='Print family rows for t = 2..T instead')
def cayley_family(kind, t, emit_clique, table_to):
    """Print n, r and S of a family member."""
    try:
        family = parse_family_kind(kind)
        if table_to is not None:
            for row in family_table(family, range(2, table_to + 1)).itertuples(index=False):
                click.echo(f"{row.t}\t{row.S}\t{row.r}\t{row.n}")
            return
        inst = family_instance(family, t)
    except (ValidationError, CayleyError) as e:
        _bad(e)
    click.echo(f"n={inst.n} r={inst.r} S={inst.spec.generator_text()}")
    if emit_clique:
        try:
            clique = predicted_unique_clique(inst)
        except CayleyError as e:
            raise click.ClickException(str(e))
        count = completion_count(cayley_complement(inst.spec).adj, 0, 1, inst.r, cap=2)
        status = 'verified-unique' if count == 1 else f"not unique ({'>=2' if count >= 2 else '0'})"
        click.echo(f"clique {','.join(map(str, clique.members()))} {status}")


@cli.group()
def atlas():
    """Named uniquely saturated graphs."""


@atlas.command('list')
def atlas_list():
    for entry in list_entries():
        click.echo(f"{entry.name}\t{entry.expected_n}\t{entry.expected_r}")


@atlas.command('build')
@click.option('--name', required=True, help='Entry name, e.g. G10, Paley13, EHM(4,5)')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write graph6 here instead of stdout')
def atlas_build(name, out):
    """Print or write the graph6 of one entry."""
    try:
        entry = get_entry(name)
    except AtlasError as e:
        _bad(e, '--name')
    text = graph6_encode(entry.build())
    if out:
        with open(out, 'w', encoding='ascii') as f:
            f.write(text + '\n')
        click.echo(f"Wrote {entry.name} to {out}", err=True)
    else:
        click.echo(text)


@atlas.command('verify-all')
def atlas_verify_all():
    """Verify every entry; exit 1 if any fails."""
    report = verify_all()
    for verdict in report.verdicts:
        click.echo(verdict.line())
    click.echo(report.summary(), err=True)
    if not report.passed:
        sys.exit(1)


@atlas.command('export')
@click.option('--dir', 'directory', type=click.Path(file_okay=False), required=True, help='Output directory')
def atlas_export(directory):
    """Write <name>.g6 files and manifest.tsv."""
    paths = export(directory)
    click.echo(f"Wrote {len(paths)} files to {directory}", err=True)


if __name__ == '__main__':
    cli()

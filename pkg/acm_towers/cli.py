"""Console script for acm-towers"""

import json
import logging
import typing

import attrs
import cattrs
import click
import logzero
from logzero import logger
import yaml

from acm_towers import _version, formats, selftest, settings
from acm_towers.errors import InputError, InvariantViolation
from acm_towers.gentower import (
    check_generalized_tower_set,
    find_gts_decomposition,
    generalized_tower_scheme_ideal,
    is_generalized_towerizable,
    is_towerizable,
)
from acm_towers.hilbert_burch import (
    families_from_matrix,
    ideal_of_matrix,
    mu_table,
    orient_and_sort,
    standard_form_from_ideal,
    u_sets,
    verify_characterization,
)
from acm_towers.monomial import (
    h_vector_and_degree,
    height_and_equidimensional,
    ideal_from_support,
    minimal_primes,
)
from acm_towers.resolution import betti_numbers, describe_acm, taylor_pd_oracle
from acm_towers.tower import (
    DegreeTable,
    LeftSegment,
    h_vector_of_segment,
    is_tower_set,
    scale_segment,
    sigma_hash,
    star_configuration,
    tower_h_vector,
)

#: Exit code for a negative result.
EXIT_FALSE = 1
#: Exit code for input errors.
EXIT_INPUT_ERROR = 2
#: Exit code for failed invariants.
EXIT_INVARIANT_VIOLATION = 3


@attrs.frozen
class Outcome:
    """Result of one command before rendering"""

    #: JSON payload
    result: typing.Any
    #: Whether the answer is positive (exit code 0) or negative (exit code 1)
    ok: bool = True
    #: Tabular rendering for ``--format tsv``
    tsv: typing.Optional[str] = None


def _read_input(path_input: str) -> bytes:
    logger.debug("Reading input from %s", path_input)
    with open(path_input, "rb") as inputf:
        return inputf.read()


def _emit(text: str, path_out: typing.Optional[str]):
    if path_out:
        with open(path_out, "wt") as outputf:
            print(text, file=outputf)
    else:
        click.echo(text)


def _dispatch(
    ctx: click.Context,
    command: str,
    input_data: bytes,
    action: typing.Callable[[bytes], Outcome],
    path_out: typing.Optional[str] = None,
    compact: bool = False,
    output_format: str = "json",
):
    """Run ``action`` on the input, write the report and set the exit code"""
    try:
        outcome = action(input_data)
    except InvariantViolation as e:
        logger.error("invariant violated: %s", e)
        ctx.exit(EXIT_INVARIANT_VIOLATION)
        return
    except (InputError, OSError, cattrs.BaseValidationError, json.JSONDecodeError) as e:
        logger.error("invalid input: %s", e)
        ctx.exit(EXIT_INPUT_ERROR)
        return
    if output_format == "tsv" and outcome.tsv is not None:
        _emit(outcome.tsv, path_out)
    else:
        report = formats.make_report(command, input_data, outcome.result)
        _emit(formats.render_report(report, compact), path_out)
    if not outcome.ok:
        ctx.exit(EXIT_FALSE)


def _run_on_file(
    ctx: click.Context,
    command: str,
    path_input: str,
    action: typing.Callable[[bytes], Outcome],
    path_out: typing.Optional[str],
    compact: bool,
    output_format: str = "json",
):
    try:
        input_data = _read_input(path_input)
    except OSError as e:
        logger.error("cannot read %s: %s", path_input, e)
        ctx.exit(EXIT_INPUT_ERROR)
        return
    _dispatch(ctx, command, input_data, action, path_out, compact, output_format)


def output_options(tabular: bool = False):
    """Options shared by all commands that write a report"""

    def decorator(func):
        func = click.option(
            "--compact/--pretty", default=False, help="compact or indented JSON; default: pretty"
        )(func)
        func = click.option(
            "--path-out", type=str, help="path to output file; default: standard output"
        )(func)
        if tabular:
            func = click.option(
                "--format",
                "output_format",
                type=click.Choice(["json", "tsv"]),
                default="json",
                help="output format; default: json",
            )(func)
        return func

    return decorator


def _load_degrees(path_degrees: typing.Optional[str]) -> typing.Optional[DegreeTable]:
    if not path_degrees:
        return None
    logger.info("Loading degree table from %s...", path_degrees)
    with open(path_degrees, "rt") as inputf:
        record = formats.load_record(inputf.read(), formats.DegreeTableRecord)
    logger.info("... done loading degree table")
    return record.to_domain()


@click.group()
@click.version_option(_version.__version__)
@click.option("--verbose/--no-verbose", default=False)
@click.pass_context
def cli(ctx: click.Context, verbose: bool):
    """Main entry point for CLI via click."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    if verbose:
        logzero.loglevel(logging.DEBUG)
    else:
        logzero.loglevel(logging.INFO)


@cli.group("tower")
def cli_tower():
    """tower sets"""


@cli_tower.command("check")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_tower_check(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """check whether a point set is a tower set"""

    def action(data: bytes) -> Outcome:
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        result = is_tower_set(points)
        return Outcome(result={"tower": result}, ok=result)

    _run_on_file(ctx, "tower check", path_input, action, path_out, compact)


@cli_tower.command("hash")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_tower_hash(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """compute the left segment T# of a tower set"""

    def action(data: bytes) -> Outcome:
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        return Outcome(result=formats.SegmentRecord.from_domain(sigma_hash(points)))

    _run_on_file(ctx, "tower hash", path_input, action, path_out, compact)


@cli_tower.command("hf")
@click.argument("path_input", type=str)
@click.option("--path-degrees", type=str, help="JSON degree table; default: all degrees 1")
@output_options(tabular=True)
@click.pass_context
def cli_tower_hf(
    ctx: click.Context,
    path_input: str,
    path_degrees: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
    output_format: str,
):
    """h-vector of a tower scheme with the given form degrees"""

    def action(data: bytes) -> Outcome:
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        degrees = _load_degrees(path_degrees) or DegreeTable.ones(sigma_hash(points).size)
        h = tower_h_vector(points, degrees)
        return Outcome(
            result={"h_vector": list(h), "degree": sum(h)}, tsv=formats.h_vector_tsv(h)
        )

    _run_on_file(ctx, "tower hf", path_input, action, path_out, compact, output_format)


@cli.group("segment")
def cli_segment():
    """left segments"""


@cli_segment.command("hvec")
@click.argument("path_input", type=str)
@output_options(tabular=True)
@click.pass_context
def cli_segment_hvec(
    ctx: click.Context,
    path_input: str,
    path_out: typing.Optional[str],
    compact: bool,
    output_format: str,
):
    """level counts of a left segment"""

    def action(data: bytes) -> Outcome:
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        h = h_vector_of_segment(LeftSegment.from_points(points))
        return Outcome(result={"h_vector": list(h)}, tsv=formats.h_vector_tsv(h))

    _run_on_file(ctx, "segment hvec", path_input, action, path_out, compact, output_format)


@cli_segment.command("scale")
@click.argument("path_input", type=str)
@click.option("--path-degrees", type=str, help="JSON degree table", required=True)
@output_options()
@click.pass_context
def cli_segment_scale(
    ctx: click.Context,
    path_input: str,
    path_degrees: str,
    path_out: typing.Optional[str],
    compact: bool,
):
    """scale a left segment by a degree table"""

    def action(data: bytes) -> Outcome:
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        degrees = _load_degrees(path_degrees)
        assert degrees is not None
        return Outcome(result=formats.SegmentRecord.from_domain(scale_segment(points, degrees)))

    _run_on_file(ctx, "segment scale", path_input, action, path_out, compact)


@cli.group("star")
def cli_star():
    """star configurations"""


@cli_star.command("gen")
@click.option("--s", "s", type=int, help="number of forms", required=True)
@click.option("--c", "c", type=int, help="codimension", required=True)
@output_options()
@click.pass_context
def cli_star_gen(ctx: click.Context, s: int, c: int, path_out: typing.Optional[str], compact: bool):
    """generate the point set of a star configuration"""

    def action(_data: bytes) -> Outcome:
        points = star_configuration(s, c)
        return Outcome(
            result={
                "points": cattrs.unstructure(formats.PointSetRecord.from_domain(points)),
                "tower": is_tower_set(points),
            }
        )

    params = json.dumps({"c": c, "s": s}, sort_keys=True).encode("utf-8")
    _dispatch(ctx, "star gen", params, action, path_out, compact)


@cli.group("ideal")
def cli_ideal():
    """squarefree monomial ideals"""


@cli_ideal.command("build")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_ideal_build(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """build the ideal of a prime support"""

    def action(data: bytes) -> Outcome:
        support = formats.load_record(data, formats.SupportRecord).to_domain()
        return Outcome(result=formats.IdealRecord.from_domain(ideal_from_support(support)))

    _run_on_file(ctx, "ideal build", path_input, action, path_out, compact)


@cli_ideal.command("primes")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_ideal_primes(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """minimal primes of a squarefree ideal"""

    def action(data: bytes) -> Outcome:
        ideal = formats.load_record(data, formats.IdealRecord).to_domain()
        height, equidimensional = height_and_equidimensional(ideal)
        return Outcome(
            result={
                "n": ideal.n,
                "primes": [sorted(p) for p in minimal_primes(ideal)],
                "height": height,
                "equidimensional": equidimensional,
            }
        )

    _run_on_file(ctx, "ideal primes", path_input, action, path_out, compact)


@cli_ideal.command("acm")
@click.argument("path_input", type=str)
@click.option(
    "--threads", type=int, help="number of worker processes", default=settings.DEFAULT_THREADS
)
@click.option(
    "--taylor-check/--no-taylor-check",
    default=False,
    help="cross-check the projective dimension with the Taylor complex",
)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@output_options(tabular=True)
@click.pass_context
def cli_ideal_acm(
    ctx: click.Context,
    path_input: str,
    threads: int,
    taylor_check: bool,
    path_caps: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
    output_format: str,
):
    """Betti numbers and aCM test"""

    def action(data: bytes) -> Outcome:
        ideal = formats.load_record(data, formats.IdealRecord).to_domain()
        table = betti_numbers(ideal, threads)
        summary = describe_acm(ideal, threads)
        if taylor_check:
            caps = settings.load_search_caps(path_caps)
            taylor_pd = taylor_pd_oracle(ideal, caps.taylor_generators)
            if taylor_pd != table.pd:
                raise InvariantViolation(f"Taylor pd {taylor_pd} != Hochster pd {table.pd}")
            summary["taylor_pd"] = taylor_pd
        summary["betti"] = cattrs.unstructure(formats.BettiRecord.from_domain(table))
        return Outcome(result=summary, ok=summary["acm"], tsv=formats.betti_tsv(table))

    _run_on_file(ctx, "ideal acm", path_input, action, path_out, compact, output_format)


@cli_ideal.command("hvec")
@click.argument("path_input", type=str)
@click.option("--c", "c", type=int, help="codimension; default: height of the ideal")
@output_options(tabular=True)
@click.pass_context
def cli_ideal_hvec(
    ctx: click.Context,
    path_input: str,
    c: typing.Optional[int],
    path_out: typing.Optional[str],
    compact: bool,
    output_format: str,
):
    """h-vector and degree from the Hilbert series"""

    def action(data: bytes) -> Outcome:
        ideal = formats.load_record(data, formats.IdealRecord).to_domain()
        codim = height_and_equidimensional(ideal)[0] if c is None else c
        h, degree = h_vector_and_degree(ideal, codim)
        return Outcome(
            result={"c": codim, "h_vector": list(h), "degree": degree},
            tsv=formats.h_vector_tsv(h),
        )

    _run_on_file(ctx, "ideal hvec", path_input, action, path_out, compact, output_format)


@cli.group("gts")
def cli_gts():
    """generalized tower sets"""


@cli_gts.command("check")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_gts_check(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """check a decomposition S = T ∪ S0"""

    def action(data: bytes) -> Outcome:
        decomposition = formats.load_record(data, formats.GtsRecord).to_domain()
        check = check_generalized_tower_set(decomposition)
        return Outcome(result={"ok": check.ok, "reason": check.reason}, ok=check.ok)

    _run_on_file(ctx, "gts check", path_input, action, path_out, compact)


@cli_gts.command("find")
@click.argument("path_input", type=str)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@output_options()
@click.pass_context
def cli_gts_find(
    ctx: click.Context,
    path_input: str,
    path_caps: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
):
    """search a decomposition of a point set into tower and residual part"""

    def action(data: bytes) -> Outcome:
        caps = settings.load_search_caps(path_caps)
        points = formats.load_record(data, formats.PointSetRecord).to_domain()
        decomposition = find_gts_decomposition(points, caps.gts_points)
        record = formats.GtsRecord.from_domain(decomposition) if decomposition else None
        return Outcome(
            result={"decomposition": cattrs.unstructure(record)}, ok=decomposition is not None
        )

    _run_on_file(ctx, "gts find", path_input, action, path_out, compact)


def _towerizability_action(search, scope: typing.Optional[str], path_caps: typing.Optional[str]):
    def action(data: bytes) -> Outcome:
        caps = settings.load_search_caps(path_caps)
        support = formats.load_record(data, formats.SupportRecord).to_domain()
        if scope:
            found, witness = search(support, scope=scope, caps=caps)
        else:
            found, witness = search(support, caps=caps)
        record = formats.WitnessRecord.from_domain(witness) if witness else None
        return Outcome(
            result={
                "towerizable": found,
                "message": "towerizable" if found else "not towerizable",
                "witness": cattrs.unstructure(record),
            },
            ok=found,
        )

    return action


@cli.command("towerizable")
@click.argument("path_input", type=str)
@click.option(
    "--scope",
    type=click.Choice(["symbols", "columns"]),
    help="symbols permuted by τ; default: symbols",
)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@output_options()
@click.pass_context
def cli_towerizable(
    ctx: click.Context,
    path_input: str,
    scope: typing.Optional[str],
    path_caps: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
):
    """search an orientation and relabeling into a tower set"""
    action = _towerizability_action(is_towerizable, scope, path_caps)
    _run_on_file(ctx, "towerizable", path_input, action, path_out, compact)


@cli.command("gen-towerizable")
@click.argument("path_input", type=str)
@click.option(
    "--scope",
    type=click.Choice(["symbols", "columns"]),
    help="symbols permuted by τ; default: columns",
)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@output_options()
@click.pass_context
def cli_gen_towerizable(
    ctx: click.Context,
    path_input: str,
    scope: typing.Optional[str],
    path_caps: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
):
    """search an orientation and relabeling into a generalized tower set"""
    action = _towerizability_action(is_generalized_towerizable, scope, path_caps)
    _run_on_file(ctx, "gen-towerizable", path_input, action, path_out, compact)


@cli.group("hb")
def cli_hb():
    """Hilbert-Burch matrices of standard form"""


@cli_hb.command("standard-form")
@click.argument("path_input", type=str)
@click.option(
    "--threads", type=int, help="number of worker processes", default=settings.DEFAULT_THREADS
)
@output_options()
@click.pass_context
def cli_hb_standard_form(
    ctx: click.Context,
    path_input: str,
    threads: int,
    path_out: typing.Optional[str],
    compact: bool,
):
    """extract a standard form matrix from an aCM ideal"""

    def action(data: bytes) -> Outcome:
        ideal = formats.load_record(data, formats.IdealRecord).to_domain()
        matrix = standard_form_from_ideal(ideal, threads=threads)
        return Outcome(result=formats.MatrixRecord.from_domain(matrix))

    _run_on_file(ctx, "hb standard-form", path_input, action, path_out, compact)


@cli_hb.command("towerize")
@click.argument("path_input", type=str)
@output_options()
@click.pass_context
def cli_hb_towerize(
    ctx: click.Context, path_input: str, path_out: typing.Optional[str], compact: bool
):
    """turn a standard form matrix into a generalized tower scheme"""

    def action(data: bytes) -> Outcome:
        matrix = formats.load_record(data, formats.MatrixRecord).to_domain()
        orientation = orient_and_sort(matrix)
        f1, f2 = families_from_matrix(matrix, orientation.tau_map)
        ideal = ideal_of_matrix(matrix)
        rebuilt = generalized_tower_scheme_ideal(orientation.decomposition, f1, f2)
        if rebuilt != ideal:
            raise InvariantViolation(f"generalized tower scheme {rebuilt} differs from {ideal}")
        return Outcome(
            result={
                "u_sets": formats.u_sets_to_json(u_sets(matrix)),
                "mu": formats.mu_table_to_json(mu_table(matrix)),
                "orientation": formats.orientation_to_json(orientation),
                "families": {
                    "f1": [formats.monomial_to_json(f) for f in f1],
                    "f2": [formats.monomial_to_json(f) for f in f2],
                },
                "ideal": cattrs.unstructure(formats.IdealRecord.from_domain(ideal)),
            }
        )

    _run_on_file(ctx, "hb towerize", path_input, action, path_out, compact)


@cli.group("verify")
def cli_verify():
    """end-to-end verification"""


@cli_verify.command("characterization")
@click.argument("path_input", type=str)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@click.option(
    "--threads", type=int, help="number of worker processes", default=settings.DEFAULT_THREADS
)
@output_options()
@click.pass_context
def cli_verify_characterization(
    ctx: click.Context,
    path_input: str,
    path_caps: typing.Optional[str],
    threads: int,
    path_out: typing.Optional[str],
    compact: bool,
):
    """check that an ideal is aCM exactly when it defines a generalized tower scheme"""

    def action(data: bytes) -> Outcome:
        caps = settings.load_search_caps(path_caps)
        ideal = formats.load_record(data, formats.IdealRecord).to_domain()
        report = verify_characterization(ideal, caps, threads)
        verified = report.acm or report.generalized_towerizable is False
        return Outcome(result=formats.characterization_to_json(report), ok=verified)

    _run_on_file(ctx, "verify characterization", path_input, action, path_out, compact)


@cli.command("selftest")
@click.option("--seed", type=int, help="seed for random number generator")
@click.option("--cases-scale", type=float, help="factor on the number of cases", default=1.0)
@click.option(
    "--threads", type=int, help="number of worker processes", default=settings.DEFAULT_THREADS
)
@click.option(
    "--suite",
    "suites",
    type=click.Choice(list(selftest.SUITES)),
    multiple=True,
    help="suite to run, may be repeated; default: all",
)
@click.option("--path-caps", type=str, help="optional JSON file with search caps")
@output_options()
@click.pass_context
def cli_selftest(
    ctx: click.Context,
    seed: typing.Optional[int],
    cases_scale: float,
    threads: int,
    suites: typing.Tuple[str, ...],
    path_caps: typing.Optional[str],
    path_out: typing.Optional[str],
    compact: bool,
):
    """run the property suites on random instances"""
    seed = settings.DEFAULT_SEED if seed is None else seed
    params = json.dumps(
        {"seed": seed, "scale": cases_scale, "suites": list(suites), "caps": path_caps},
        sort_keys=True,
    ).encode("utf-8")

    def action(_data: bytes) -> Outcome:
        caps = settings.load_search_caps(path_caps)
        results = selftest.run(seed, cases_scale, threads, suites, caps)
        failed = [r.name for r in results if not r.ok]
        if failed:
            logger.error("suites with failures: %s", ", ".join(failed))
        ctx.obj["selftest_failed"] = bool(failed)
        return Outcome(result={"suites": cattrs.unstructure(results), "failed": failed})

    ctx.ensure_object(dict)
    _dispatch(ctx, "selftest", params, action, path_out, compact)
    if ctx.obj.get("selftest_failed"):
        ctx.exit(EXIT_INVARIANT_VIOLATION)


@cli.group("utils")
def cli_utils():
    """utilities"""


@cli_utils.command("dump-schemas")
@click.argument("path_out", type=str)
def cli_dump_schemas(path_out: str):
    """Dump JSON schema description as YAML"""
    with open(path_out, "wt") as f:
        yaml.dump(formats.schema_description(), f)

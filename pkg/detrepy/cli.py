import functools
import json
import logging
import sys
from typing import Optional

import click

from .errors import DetrepError

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2

FIELD_ENV = "DETREPY_FIELD"

logger = logging.getLogger(__name__)


def _guarded(func):
    """Map library errors to exit code 2 with ``Error: <message>`` on stderr."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (DetrepError, ValueError) as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_ERROR)

    return wrapper


def _settings(ctx: click.Context):
    from .config import Settings

    obj = ctx.find_root().obj
    return obj if isinstance(obj, Settings) else Settings()


def _field(ctx: click.Context, name: Optional[str]):
    from .exactfield import resolve_field

    return resolve_field(name or _settings(ctx).field)[0]


def _read(arg: str) -> str:
    from .utils import resolve_input

    return resolve_input(arg)


def _minors_or_poly(text: str, field_id):
    """Minor vector from a literal list/object, or from a polynomial's coefficients."""
    from .detrep import poly_to_minors
    from .mpoly import parse_poly
    from .report import parse_minor_vector

    if text.lstrip().startswith(("[", "{")):
        a = parse_minor_vector(text, field_id)
    else:
        f = parse_poly(text, field_id)
        top = f.coeff((1,) * f.nvars)
        if top.is_zero():
            raise ValueError("coefficient of x1*...*xn vanishes")
        a = poly_to_minors(f.scale(top.inverse()))
    return a if a.is_normalized() else a.normalized()


def _emit(payload, fmt: str, text: str) -> None:
    from pydantic import BaseModel

    from .report import to_json

    if fmt == "json":
        click.echo(to_json(payload) if isinstance(payload, BaseModel) else json.dumps(payload, indent=2))
    else:
        click.echo(text)


def _emit_certificate(cert, fmt: str) -> int:
    from .report import from_certificate

    model = from_certificate(cert)
    lines = [cert.describe()] + [f"  {note}" for note in cert.notes]
    _emit(model, fmt, "\n".join(lines))
    return EXIT_OK if cert.ok else EXIT_REFUTED


def _emit_membership(result, fmt: str) -> int:
    from .detrep import DetRep
    from .report import from_detrep
    from .utils import format_matrix

    if isinstance(result, DetRep):
        rows = ["[" + ", ".join(row) + "]" for row in format_matrix(result.A)]
        _emit(from_detrep(result), fmt, "\n".join(rows))
        return EXIT_OK
    return _emit_certificate(result, fmt)


field_option = click.option(
    "--field", "field_name", envvar=FIELD_ENV, default=None,
    help="Field: Q, Qi, F2, F4, Fp:<p> or Fp2:<p> (default from config or DETREPY_FIELD)",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="json", show_default=True,
    help="Output format",
)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML/JSON settings")
@click.option("--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG (logged to stderr)")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], verbose: int):
    """detrepy command-line interface."""
    from .config import load_settings

    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        ctx.obj = load_settings(config_path)
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_ERROR)


@main.command("minors")
@click.argument("matrix")
@field_option
@format_option
@click.pass_context
@_guarded
def minors_cmd(ctx: click.Context, matrix: str, field_name: Optional[str], fmt: str):
    """Principal minors of MATRIX, keyed by subset bitmask."""
    from .detrep import principal_minors
    from .exactfield import format_value
    from .utils import parse_matrix, subset_label

    A = parse_matrix(_read(matrix), _field(ctx, field_name))
    a = principal_minors(A)
    payload = {str(m): format_value(v) for m, v in enumerate(a.values)}
    text = "\n".join(f"{subset_label(m)}: {v}" for m, v in enumerate(payload.values()))
    _emit(payload, fmt, text)


@main.command("charpoly")
@click.argument("matrix")
@field_option
@click.pass_context
@_guarded
def charpoly_cmd(ctx: click.Context, matrix: str, field_name: Optional[str]):
    """det(diag(x) + MATRIX)."""
    from .detrep import charpoly
    from .mpoly import format_poly
    from .utils import parse_matrix

    A = parse_matrix(_read(matrix), _field(ctx, field_name))
    click.echo(format_poly(charpoly(A)))


@main.command("delta")
@click.argument("poly")
@click.option("-i", "i", type=int, required=True, help="First index (1-based)")
@click.option("-j", "j", type=int, required=True, help="Second index (1-based)")
@field_option
@click.pass_context
@_guarded
def delta_cmd(ctx: click.Context, poly: str, i: int, j: int, field_name: Optional[str]):
    """Rayleigh difference Delta_ij of POLY."""
    from .mpoly import format_poly, parse_poly
    from .rayleigh import delta

    f = parse_poly(_read(poly), _field(ctx, field_name))
    if not (1 <= i <= f.nvars and 1 <= j <= f.nvars):
        raise ValueError(f"indices must lie in 1..{f.nvars}")
    click.echo(format_poly(delta(f, i - 1, j - 1)))


@main.command("factor-hermitian")
@click.argument("poly")
@field_option
@format_option
@click.option("--bound", type=int, default=None, help="Variables searched exhaustively in characteristic 2")
@click.pass_context
@_guarded
def factor_hermitian_cmd(ctx: click.Context, poly: str, field_name: Optional[str], fmt: str, bound: Optional[int]):
    """Certify POLY = g * conj(g), or refute it."""
    from .mpoly import parse_poly
    from .squares import certify_hermitian_square

    settings = _settings(ctx)
    f = parse_poly(_read(poly), _field(ctx, field_name))
    cert = certify_hermitian_square(f, support_limit=bound or settings.exhaustive_support_limit)
    sys.exit(_emit_certificate(cert, fmt))


def _membership(ctx, text: str, field_name, hermitian: bool, seed, bound):
    from .detrep import is_in_image_general, is_in_image_hermitian

    settings = _settings(ctx).merged(seed=seed, search_bound=bound)
    a = _minors_or_poly(text, _field(ctx, field_name))
    if hermitian:
        return is_in_image_hermitian(
            a, seed=settings.seed, retry_budget=settings.retry_budget, sl2_bound=settings.sl2_bound
        )
    return is_in_image_general(a, search_bound=settings.search_bound)


@main.command("detrep")
@click.argument("source")
@click.option("--hermitian", is_flag=True, help="Require a Hermitian representation")
@field_option
@format_option
@click.option("--seed", type=int, default=None, help="Seed for group element sampling")
@click.option("--bound", type=int, default=None, help="Largest n for the general search")
@click.pass_context
@_guarded
def detrep_cmd(ctx, source: str, hermitian: bool, field_name, fmt: str, seed, bound):
    """Matrix A with det(diag(x) + A) equal to SOURCE (polynomial or minor vector)."""
    result = _membership(ctx, _read(source), field_name, hermitian, seed, bound)
    sys.exit(_emit_membership(result, fmt))


@main.command("check-image")
@click.argument("source")
@click.option("--hermitian", is_flag=True, help="Decide the Hermitian image")
@field_option
@format_option
@click.option("--seed", type=int, default=None, help="Seed for group element sampling")
@click.option("--bound", type=int, default=None, help="Largest n for the general search")
@click.pass_context
@_guarded
def check_image_cmd(ctx, source: str, hermitian: bool, field_name, fmt: str, seed, bound):
    """Exit 0 with a witness if SOURCE is a principal minor vector, 1 with a certificate otherwise."""
    result = _membership(ctx, _read(source), field_name, hermitian, seed, bound)
    sys.exit(_emit_membership(result, fmt))


@main.command("hyperdet")
@click.argument("minors")
@field_option
@click.pass_context
@_guarded
def hyperdet_cmd(ctx, minors: str, field_name):
    """Cayley hyperdeterminant of a minor vector with n = 3."""
    from .exactfield import format_value
    from .report import parse_minor_vector
    from .squares import hyperdet

    a = parse_minor_vector(_read(minors), _field(ctx, field_name))
    click.echo(format_value(hyperdet(a)))


@main.command("certify")
@click.argument("minors")
@field_option
@format_option
@click.option("--samples", type=int, default=None, help="Number of sampled group elements")
@click.option("--seed", type=int, default=None, help="Sampling seed")
@click.option("--mode", type=click.Choice(["exact", "real"]), default="exact", show_default=True)
@click.pass_context
@_guarded
def certify_cmd(ctx, minors: str, field_name, fmt: str, samples, seed, mode: str):
    """Necessary conditions for the Hermitian image."""
    from .detrep import necessary_conditions_hermitian
    from .report import from_conditions

    settings = _settings(ctx).merged(samples=samples, seed=seed)
    field_id = _field(ctx, field_name)
    a = _minors_or_poly(_read(minors), field_id)
    result = necessary_conditions_hermitian(
        a,
        seed=settings.seed,
        samples=settings.samples,
        mode=mode,
        points=range(settings.certificate_points),
        sl2_bound=settings.sl2_bound,
    )
    model = from_conditions(result, a.n, field_id, settings.seed, settings.samples)
    lines = [f"{'ok  ' if c.passed else 'FAIL'} {c.name} = {c.value}" + (f" under {c.gamma}" if c.gamma else "")
             for c in result.conditions]
    lines.append("passed" if result.passed else f"{len(result.failures)} conditions failed")
    _emit(model, fmt, "\n".join(lines))
    sys.exit(EXIT_OK if result.passed else EXIT_REFUTED)


@main.command("act")
@click.argument("group_element")
@click.argument("target")
@field_option
@format_option
@click.pass_context
@_guarded
def act_cmd(ctx, group_element: str, target: str, field_name, fmt: str):
    """Apply GROUP_ELEMENT to a polynomial or a matrix."""
    from .action import act_on_matrix, act_on_poly, parse_group_element
    from .exactfield import format_value
    from .mpoly import format_poly, parse_poly
    from .utils import format_matrix, parse_matrix

    field_id = _field(ctx, field_name)
    text = _read(target)
    if text.lstrip().startswith("["):
        A = parse_matrix(text, field_id)
        g = parse_group_element(_read(group_element), field_id, len(A))
        beta, B = act_on_matrix(g, A)
        entries = format_matrix(B)
        payload = {"beta": format_value(beta), "entries": entries}
        _emit(payload, fmt, f"beta = {payload['beta']}\n" + "\n".join("[" + ", ".join(r) + "]" for r in entries))
        return
    f = parse_poly(text, field_id)
    g = parse_group_element(_read(group_element), field_id, f.nvars)
    moved = format_poly(act_on_poly(g, f))
    _emit({"polynomial": moved}, fmt, moved)


@main.command("counterexample")
@click.option("--n", "n", type=int, required=True, help="Family parameter (2n+1 variables)")
@format_option
@click.option("--bound", type=int, default=None, help="Largest n accepted")
@click.pass_context
@_guarded
def counterexample_cmd(ctx, n: int, fmt: str, bound):
    """Verify that f_{2n+1} is outside the image while its specializations are inside."""
    from .counterexamples import family, verify_family
    from .report import FamilyReportBuilder

    settings = _settings(ctx).merged(family_bound=bound)
    verification = verify_family(n, family_bound=settings.family_bound)
    report = FamilyReportBuilder(n).set_instance(family(n)).set_verification(verification).build()
    lines = [
        f"f_{report.nvars} = {report.polynomial}",
        "Delta_12 cycle: " + " * ".join(f"({p})" for p in report.cycle),
        f"refuted: {report.refutation.condition if report.refutation else 'no'}",
        f"specializations: {sum(s.ok for s in report.specializations)}/{len(report.specializations)} verified",
    ]
    _emit(report, fmt, "\n".join(lines))
    if report.passed:
        click.secho("✓ family verified", fg="green", err=True)
    sys.exit(EXIT_OK if report.passed else EXIT_REFUTED)


@main.command("pencil")
@click.argument("poly")
@field_option
@format_option
@click.option("--seed", type=int, default=None, help="Seed for group element sampling")
@click.pass_context
@_guarded
def pencil_cmd(ctx, poly: str, field_name, fmt: str, seed):
    """Hermitian W and v with POLY / lambda = det(diag(x) + W + x_{n+1} v v*)."""
    from .detrep import HermitianPencil, hermitian_pencil_rep
    from .exactfield import format_value
    from .mpoly import parse_poly
    from .utils import format_matrix

    settings = _settings(ctx).merged(seed=seed)
    f = parse_poly(_read(poly), _field(ctx, field_name))
    result = hermitian_pencil_rep(
        f, seed=settings.seed, retry_budget=settings.retry_budget, sl2_bound=settings.sl2_bound
    )
    if not isinstance(result, HermitianPencil):
        sys.exit(_emit_certificate(result, fmt))
    payload = {
        "lambda": format_value(result.lam),
        "W": format_matrix(result.W),
        "v": [format_value(x) for x in result.v],
    }
    text = f"lambda = {payload['lambda']}\nW = {payload['W']}\nv = {payload['v']}"
    _emit(payload, fmt, text)


@main.command("config")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write the effective settings as YAML")
@click.pass_context
def config_cmd(ctx, out_path: Optional[str]):
    """Show the effective settings."""
    settings = _settings(ctx)
    if out_path:
        settings.to_yaml(out_path)
        click.echo(f"Wrote {out_path}")
    else:
        click.echo(json.dumps(settings.model_dump(), indent=2))


if __name__ == "__main__":
    main()

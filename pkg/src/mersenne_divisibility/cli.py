"""
Command-line interface for mersenne-divisibility.

Subcommands check single instances (with certificates), sweep parameter grids
comparing the criterion against the oracles, and expose the witness, valuation,
order, polynomial, quotient and factorization tools.

Exit codes: 0 ok, 1 usage or precondition error, 2 sweep mismatch,
3 internal disagreement or failed self-check, 4 guard, budget or unfactored
cofactor.
"""

import json
import logging
import sys
import time
from contextlib import closing
from pathlib import Path
from typing import Any, Callable, NoReturn, Optional, Tuple

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from . import __version__
from .config import GUARD_POLICIES, OUTPUT_FORMATS, ConfigManager, Configuration
from .exceptions import (
    BudgetExceededError,
    GuardExceededError,
    InvalidInstanceError,
    MersenneError,
    PreconditionError,
    UnfactoredCofactorError,
)
from .mersenne import (
    certificate_verify,
    divides_criterion,
    eval_mersenne,
    explain,
    quotient,
    quotient_via_lcm,
)
from .models import DivInstance, SweepRecord, SweepSummary
from .number_theory import (
    Factorizer,
    ceil_log2,
    cofactor_residues,
    create_default_factorizer,
    ensure_bits,
    factorize,
    multiplicative_order,
    valuation_imbalance,
    zsigmondy_witness,
)
from .polyring import eq1_congruence_check, mersenne_quotient, poly_criterion
from .reporter import create_default_reporter, show_summary
from .sweep import SweepConfig, run_sweep


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_DISAGREEMENT = 3
EXIT_RESOURCE = 4

# Human-facing messages and the summary go to stderr; stdout carries results only.
console = Console(stderr=True)

logger = logging.getLogger(__name__)


class MersenneGroup(click.Group):
    """Click group that reports usage errors with exit code 1."""

    def main(self, *args: Any, **kwargs: Any) -> Any:  # type: ignore[override]
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def _exit_code(error: Exception) -> int:
    if isinstance(error, (GuardExceededError, BudgetExceededError, UnfactoredCofactorError)):
        return EXIT_RESOURCE
    if isinstance(error, (InvalidInstanceError, PreconditionError, ValidationError, OSError)):
        return EXIT_USAGE
    return EXIT_DISAGREEMENT


def _fail(ctx: click.Context, error: Exception) -> NoReturn:
    """Print ``error`` and exit with its code."""
    console.print(f"[bold red]Error:[/bold red] {escape(str(error))}", highlight=False)
    if ctx.obj.get('verbose') and not isinstance(error, MersenneError):
        console.print_exception()
    sys.exit(_exit_code(error))


def _disagree(message: str) -> NoReturn:
    console.print(f"[bold red]Disagreement:[/bold red] {escape(message)}", highlight=False)
    sys.exit(EXIT_DISAGREEMENT)


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _setup(ctx: click.Context, **overrides: Any) -> Tuple[Configuration, Factorizer]:
    """Overlay command flags on the loaded configuration and build the factorizer."""
    config_manager: ConfigManager = ctx.obj['config_manager']
    config_manager.update_from_args(overrides)
    configuration = config_manager.get_config()
    factorizer = create_default_factorizer(configuration.factor, configuration.guard.max_bits)
    return configuration, factorizer


def guard_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the --max-bits and --seed options shared by the arithmetic commands."""
    func = click.option(
        "--seed",
        type=click.IntRange(min=0),
        default=None,
        help="Seed of the randomized factorization (default 0)",
    )(func)
    func = click.option(
        "--max-bits",
        type=click.IntRange(min=1),
        default=None,
        help="Bit-size guard for big-integer evaluation (default 1000000)",
    )(func)
    return func


@click.group(cls=MersenneGroup)
@click.version_option(version=__version__, prog_name="mersenne-div")
@click.option(
    "--config",
    "-c",
    type=click.Path(exists=True, path_type=Path),
    help="Configuration file path",
)
@click.option(
    "--verbose",
    "-v",
    is_flag=True,
    help="Enable verbose output",
)
@click.option(
    "--quiet",
    "-q",
    is_flag=True,
    help="Suppress output except results and errors",
)
@click.pass_context
def main(ctx: click.Context, config: Optional[Path], verbose: bool, quiet: bool) -> None:
    """Divisibility of generalized Mersenne numbers M_d(a^m) by M_d(a^k)."""
    log_level = logging.WARNING
    if verbose:
        log_level = logging.DEBUG
    elif quiet:
        log_level = logging.ERROR

    logging.basicConfig(
        level=log_level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
        force=True,
    )

    # Certificates and quotients may have hundreds of thousands of digits.
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)

    config_manager = ConfigManager(config)
    configuration = config_manager.load_config()

    ctx.ensure_object(dict)
    ctx.obj['config'] = configuration
    ctx.obj['config_manager'] = config_manager
    ctx.obj['verbose'] = verbose
    ctx.obj['quiet'] = quiet


@main.command()
@click.argument("a", type=int)
@click.argument("m", type=int)
@click.argument("k", type=int)
@click.argument("d", type=int)
@click.option(
    "--with-certificate",
    is_flag=True,
    help="Also print the certificate as JSON with its verification result",
)
@guard_options
@click.pass_context
def check(
    ctx: click.Context,
    a: int,
    m: int,
    k: int,
    d: int,
    with_certificate: bool,
    max_bits: Optional[int],
    seed: Optional[int],
) -> None:
    """Decide whether M_d(a^k) divides M_d(a^m), with evidence."""
    try:
        configuration, factorizer = _setup(ctx, max_bits=max_bits, seed=seed)
        limit = configuration.guard.max_bits

        inst = DivInstance(a, m, k, d)
        criterion = divides_criterion(m, k, d)
        oracle = quotient(inst, limit) is not None
        if criterion != oracle:
            _disagree(f"criterion={_bool(criterion)} oracle={_bool(oracle)} for {inst.as_tuple()}")

        cert = explain(inst, limit, factorizer)
        verified = certificate_verify(cert, inst, limit, factorizer)
        if not verified or cert.divides != oracle:
            _disagree(f"certificate {cert.describe()} failed verification for {inst.as_tuple()}")

        click.echo(f"divides: {_bool(oracle)}, {cert.describe()}")
        click.echo(f"criterion: {_bool(criterion)}, oracle: {_bool(oracle)}")
        if with_certificate:
            click.echo(f"certificate: {json.dumps(cert.to_dict())}")
            click.echo(f"verified: {_bool(verified)}")

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.option("--a-range", nargs=2, type=int, default=None, help="Inclusive bounds for a")
@click.option("--m-range", nargs=2, type=int, default=None, help="Inclusive bounds for m")
@click.option("--k-range", nargs=2, type=int, default=None, help="Inclusive bounds for k")
@click.option("--d-range", nargs=2, type=int, default=None, help="Inclusive bounds for d")
@click.option(
    "--include-poly/--no-include-poly",
    default=None,
    help="Also compare the polynomial-ring verdict",
)
@click.option(
    "--jobs",
    "-j",
    type=click.IntRange(min=1),
    default=None,
    help="Worker processes (default 1)",
)
@click.option(
    "--format",
    "-f",
    type=click.Choice(OUTPUT_FORMATS),
    default=None,
    help="Record format (default table)",
)
@click.option(
    "--timing/--no-timing",
    default=None,
    help="Record per-point elapsed microseconds (default off)",
)
@click.option(
    "--on-guard",
    type=click.Choice(GUARD_POLICIES),
    default=None,
    help="Skip oversized points or fail with exit code 4 (default skip)",
)
@click.option("--max-degree", type=click.IntRange(min=1), default=None, help="Polynomial degree budget")
@guard_options
@click.pass_context
def sweep(
    ctx: click.Context,
    a_range: Optional[Tuple[int, int]],
    m_range: Optional[Tuple[int, int]],
    k_range: Optional[Tuple[int, int]],
    d_range: Optional[Tuple[int, int]],
    include_poly: Optional[bool],
    jobs: Optional[int],
    format: Optional[str],
    timing: Optional[bool],
    on_guard: Optional[str],
    max_degree: Optional[int],
    max_bits: Optional[int],
    seed: Optional[int],
) -> None:
    """Compare criterion and oracles over a parameter grid."""
    quiet: bool = ctx.obj['quiet']

    try:
        configuration, _ = _setup(
            ctx,
            # click passes an empty tuple for unset nargs=2 options
            a_range=a_range or None,
            m_range=m_range or None,
            k_range=k_range or None,
            d_range=d_range or None,
            include_poly=include_poly,
            jobs=jobs,
            format=format,
            timing=timing,
            on_guard=on_guard,
            max_degree=max_degree,
            max_bits=max_bits,
            seed=seed,
        )
        sweep_config = SweepConfig.from_configuration(configuration)
    except ValidationError as e:
        _fail(ctx, e)

    reporter = create_default_reporter(sweep_config.format, sys.stdout)
    summary = SweepSummary()
    mismatch: Optional[SweepRecord] = None
    started = time.perf_counter()

    try:
        reporter.begin()
        with closing(run_sweep(sweep_config)) as partitions:
            for partition in partitions:
                summary.skipped += len(partition.skipped)
                for record in partition.records:
                    summary.add_record(record)
                    # Inconsistent records are reported on stderr only.
                    if not record.is_consistent():
                        mismatch = record
                        break
                    reporter.write(record)
                if mismatch is not None:
                    break
        reporter.end()
    except (GuardExceededError, BudgetExceededError) as e:
        sys.stdout.flush()
        _fail(ctx, e)

    summary.duration = time.perf_counter() - started
    sys.stdout.flush()
    if not quiet:
        show_summary(summary, console)

    if mismatch is not None:
        console.print(
            f"[bold red]Mismatch:[/bold red] (a, m, k, d) = "
            f"({mismatch.a}, {mismatch.m}, {mismatch.k}, {mismatch.d}) "
            f"criterion={_bool(mismatch.criterion)} oracle={_bool(mismatch.oracle)} "
            f"poly={'-' if mismatch.poly is None else _bool(mismatch.poly)}",
            highlight=False,
        )
        sys.exit(EXIT_MISMATCH)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("a", type=int)
@click.argument("n", type=int)
@guard_options
@click.pass_context
def witness(ctx: click.Context, a: int, n: int, max_bits: Optional[int], seed: Optional[int]) -> None:
    """Primitive prime divisor of a^n - 1, or the exception ruling it out."""
    try:
        configuration, factorizer = _setup(ctx, max_bits=max_bits, seed=seed)
        result = zsigmondy_witness(a, n, factorizer, configuration.guard.max_bits)
        if result.prime is not None:
            order = multiplicative_order(a, result.prime, multiple=n, factorizer=factorizer)
            if order != n:
                _disagree(f"order of {a} mod {result.prime} is {order}, expected {n}")
        click.echo(result.describe())

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.argument("b", type=int)
@click.argument("n", type=int)
@click.argument("d", type=int)
@click.option(
    "--imbalance",
    "mode",
    flag_value="imbalance",
    default=True,
    help="Valuation imbalance for gcd(n, d) > 1 (default)",
)
@click.option(
    "--cofactor",
    "mode",
    flag_value="cofactor",
    help="Cofactor residues modulo (b^g - 1)/(b - 1), g = gcd(n, d)",
)
@guard_options
@click.pass_context
def valuation(
    ctx: click.Context,
    b: int,
    n: int,
    d: int,
    mode: str,
    max_bits: Optional[int],
    seed: Optional[int],
) -> None:
    """Valuation imbalance or cofactor residues for (b, n, d)."""
    try:
        configuration, factorizer = _setup(ctx, max_bits=max_bits, seed=seed)
        limit = configuration.guard.max_bits

        if mode == "cofactor":
            cofactor = cofactor_residues(b, n, d, limit)
            if not cofactor.congruences_hold():
                _disagree(f"cofactor congruences fail: {cofactor.describe()}")
            click.echo(cofactor.describe())
            return

        report = valuation_imbalance(b, n, d, factorizer, limit)
        if (report.predicted_nu_num, report.predicted_nu_den) != (report.nu_num, report.nu_den):
            _disagree(
                f"lifting-the-exponent values num={report.predicted_nu_num} "
                f"den={report.predicted_nu_den} differ from {report.describe()}"
            )
        if not report.is_imbalanced:
            _disagree(f"no imbalance: {report.describe()}")
        click.echo(report.describe())

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.argument("a", type=int)
@click.argument("k", type=int)
@click.argument("d", type=int)
@guard_options
@click.pass_context
def order(ctx: click.Context, a: int, k: int, d: int, max_bits: Optional[int], seed: Optional[int]) -> None:
    """Multiplicative order of a modulo M_d(a^k); it must equal kd."""
    try:
        configuration, factorizer = _setup(ctx, max_bits=max_bits, seed=seed)
        if a < 2 or k < 1:
            raise InvalidInstanceError(f"need a >= 2 and k >= 1, got a={a}, k={k}")
        ensure_bits(k * d * ceil_log2(a), configuration.guard.max_bits, what=f"M_{d}({a}^{k})")
        modulus = eval_mersenne(a ** k, d, configuration.guard.max_bits)
        expected = k * d
        found = multiplicative_order(a, modulus, multiple=expected, factorizer=factorizer)
        status = "OK" if found == expected else "VIOLATED"
        click.echo(f"ord={found} expected={expected} {status}")
        if found != expected:
            sys.exit(EXIT_DISAGREEMENT)

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.argument("m", type=int)
@click.argument("k", type=int)
@click.argument("d", type=int)
@click.option("--max-degree", type=click.IntRange(min=1), default=None, help="Polynomial degree budget")
@click.pass_context
def poly(ctx: click.Context, m: int, k: int, d: int, max_degree: Optional[int]) -> None:
    """Divisibility of M_d(x^m) by M_d(x^k) in Z[x]."""
    try:
        configuration, _ = _setup(ctx, max_degree=max_degree)
        criterion = poly_criterion(m, k, d)
        q = mersenne_quotient(m, k, d, configuration.guard.max_degree)
        if criterion != (q is not None):
            outcome = "succeeded" if q is not None else "failed"
            _disagree(f"criterion={_bool(criterion)} but exact division {outcome}")

        click.echo(f"divides; quotient = {q}" if q is not None else "does not divide")

        if m % k == 0:
            n = m // k
            lhs, rhs = eq1_congruence_check(n, d)
            click.echo(f"residues mod M_{d}(x) for n={n}: {lhs} | {rhs}")
            if lhs != rhs:
                _disagree(f"residues differ for n={n}, d={d}")

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command(name="quotient")
@click.argument("a", type=int)
@click.argument("m", type=int)
@click.argument("k", type=int)
@click.argument("d", type=int)
@guard_options
@click.pass_context
def quotient_command(
    ctx: click.Context,
    a: int,
    m: int,
    k: int,
    d: int,
    max_bits: Optional[int],
    seed: Optional[int],
) -> None:
    """Print M_d(a^m) / M_d(a^k), or the remainder when it is not exact."""
    try:
        configuration, _ = _setup(ctx, max_bits=max_bits, seed=seed)
        limit = configuration.guard.max_bits
        inst = DivInstance(a, m, k, d)
        inst.check_guard(limit)

        numerator = eval_mersenne(a ** m, d, limit)
        denominator = eval_mersenne(a ** k, d, limit)
        q, r = divmod(numerator, denominator)
        if r:
            click.echo(f"remainder={r} mod {denominator}")
            return

        click.echo(f"Q={q}")
        if divides_criterion(m, k, d):
            reduced = inst.reduce()
            via_lcm = quotient_via_lcm(reduced.b, reduced.n, reduced.d, limit)
            if via_lcm != q:
                _disagree(f"lcm form gives {via_lcm}, direct division gives {q}")
            click.echo("lcm form: agrees")

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.argument("n", type=int)
@guard_options
@click.pass_context
def factor(ctx: click.Context, n: int, max_bits: Optional[int], seed: Optional[int]) -> None:
    """Prime factorization of N."""
    try:
        _, factorizer = _setup(ctx, max_bits=max_bits, seed=seed)
        click.echo(str(factorize(n, factorizer)))

    except (MersenneError, ArithmeticError) as e:
        _fail(ctx, e)


@main.command()
@click.option(
    "--path",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    help="Directory for the configuration file",
)
@click.option(
    "--format",
    type=click.Choice(["json", "toml"]),
    default="json",
    help="Configuration file format",
)
@click.pass_context
def init(ctx: click.Context, path: Path, format: str) -> None:
    """Initialize configuration file."""
    config_manager: ConfigManager = ctx.obj['config_manager']
    quiet: bool = ctx.obj['quiet']
    target = path / f"mersenne-div.config.{format}"

    try:
        config_manager.create_default_config(target)
    except OSError as e:
        _fail(ctx, e)

    if not quiet:
        console.print(f"[green]Configuration file created:[/green] {escape(str(target))}", highlight=False)


if __name__ == "__main__":
    main()

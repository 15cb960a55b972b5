"""
Command-line interface: construct, verify, sweep and export.

Exit codes: 0 success, 1 I/O or malformed input, 2 infeasible parameters
(the failing certificate is named on stderr), 3 a failed verification entry.
Logs go to stderr; stdout carries command output only.
"""

import json
import sys
from typing import Dict, List, Optional, Tuple

import click
import jsonschema
import pydantic

from src.models.geometry import MetricProfile
from src.models.reports import VerificationReport, utc_now
from src.utils.config import DEFAULT_TOLERANCES, get_global_config
from src.utils.errors import GrayforgeError, InfeasibleParametersError
from src.utils.logging_util import log_check, setup_logging

from src.functions.chart_oracle import (
    check_engine_agreement,
    check_gray_tensorial,
    check_killing_tensor,
    check_trace,
)
from src.functions.curvature_oracle import check_einstein, check_gray_1d, ricci_eigenvalues
from src.functions.einstein_family import einstein_profile, einstein_spec
from src.functions.family_params import derive_params
from src.functions.gray_solver import find_asymmetric_pairs
from src.functions.kahler_family import kahler_profile, kahler_spec
from src.functions.ode_profile import check_boundary, check_parity, gray_profile
from src.functions.product_family import product_profile, product_spec
from src.pipeline import sweeps
from src.pipeline.profile_io import (
    export_csv,
    profile_params,
    read_profile,
    write_profile,
    write_report,
    write_sweep,
)


logger = setup_logging("grayforge-cli")

EXIT_OK, EXIT_IO, EXIT_INFEASIBLE, EXIT_FAILED = 0, 1, 2, 3

FAMILIES = ["gray-symmetric", "gray-asymmetric", "einstein", "kahler", "product"]
CHECKS = ["boundary", "parity", "gray-1d", "einstein", "gray-tensorial", "killing", "engine-agreement", "trace"]
MALFORMED = (OSError, json.JSONDecodeError, pydantic.ValidationError, jsonschema.ValidationError)


def _fail(code: int, message: str) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _require(value, name: str, family: str):
    if value is None:
        raise click.UsageError(f"--{name} is required for the {family} family")
    return value


def _construct(family: str, genus, k, x, y, branch, s, D, alpha, grid_points) -> MetricProfile:
    if family == "gray-symmetric":
        params = derive_params(_require(genus, "genus", family), _require(k, "k", family), A=-1)
        return gray_profile(params, _require(x, "x", family), grid_points=grid_points)

    if family == "gray-asymmetric":
        params = derive_params(_require(genus, "genus", family), _require(k, "k", family), A=branch)
        x = _require(x, "x", family)
        if y is None:
            pairs = find_asymmetric_pairs(x, params.s, params.eps, branch=branch, limit=1)
            if not pairs:
                raise InfeasibleParametersError(f"No asymmetric partner y for x={x}", certificate="asymmetric-pair")
            y = pairs[0].y
        return gray_profile(params, x, y, grid_points=grid_points)

    if family == "einstein":
        spec = einstein_spec(_require(genus, "genus", family), _require(k, "k", family))
        return einstein_profile(spec, grid_points=grid_points)

    if family == "kahler":
        params = None
        if s is None:
            params = derive_params(_require(genus, "genus", family), _require(k, "k", family), A=0)
            s = params.s
        return kahler_profile(kahler_spec(s, D), params=params, grid_points=grid_points)

    return product_profile(product_spec(_require(alpha, "alpha", family)), genus=genus or 2,
                           grid_points=grid_points)


@click.group()
@click.version_option(package_name="grayforge")
def cli():
    """Construct and verify neutral cohomogeneity-one metrics on ruled surfaces."""


@cli.command()
@click.argument("family", type=click.Choice(FAMILIES))
@click.option("--genus", type=int, help="Genus of the base curve")
@click.option("--k", "k", type=int, help="Chern number of the circle bundle")
@click.option("--x", "x", type=float, help="Upper boundary value")
@click.option("--y", "y", type=float, help="Lower boundary value (asymmetric Gray)")
@click.option("--branch", type=click.Choice(["-1", "1"]), default="-1", show_default=True,
              help="Branch A of the asymmetric Gray family")
@click.option("--s", "s", type=float, help="Twist (Kahler family, instead of --genus/--k)")
@click.option("--D", "D", type=float, default=2.0, show_default=True, help="Kahler coefficient D")
@click.option("--alpha", type=float, help="Endpoint ratio x / y (product family)")
@click.option("--grid-points", type=int, help="Profile samples (default from GRAYFORGE_GRID_POINTS)")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Profile JSON to write")
def construct(family, genus, k, x, y, branch, s, D, alpha, grid_points, out):
    """Build a profile of FAMILY and write it as JSON."""
    try:
        profile = _construct(family, genus, k, x, y, int(branch), s, D, alpha, grid_points)
    except InfeasibleParametersError as e:
        _fail(EXIT_INFEASIBLE, f"infeasible ({e.certificate}): {e}")
    except GrayforgeError as e:
        _fail(EXIT_INFEASIBLE, f"infeasible ({type(e).__name__}): {e}")
    except MALFORMED as e:
        _fail(EXIT_IO, f"invalid input: {e}")

    metadata = dict(profile.metadata)
    metadata["tolerances"] = get_global_config().tolerances()
    try:
        write_profile(profile.model_copy(update={"metadata": metadata}), out)
    except OSError as e:
        _fail(EXIT_IO, f"cannot write {out}: {e}")
    click.echo(json.dumps({"family": family, "a": profile.a, "samples": len(profile.t_grid), "out": out}))


def _parse_tolerances(pairs: Tuple[str, ...]) -> Dict[str, float]:
    overrides = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"expected name=value, got '{pair}'", param_hint="--tolerance")
        try:
            overrides[name.strip()] = float(value)
        except ValueError:
            raise click.BadParameter(f"'{value}' is not a number", param_hint="--tolerance")
    return overrides


def _default_checks(profile: MetricProfile) -> List[str]:
    checks = ["boundary", "parity", "gray-1d"]
    if profile.family_tag == "einstein":
        checks.append("einstein")
    return checks


def run_checks(profile: MetricProfile, checks: List[str], tolerances: Dict[str, float],
               sample_size: int = 10, seed: int = 0) -> VerificationReport:
    """Run the named checks and merge their reports."""
    params = profile_params(profile)
    field = ricci_eigenvalues(profile) if {"gray-1d", "einstein"} & set(checks) else None
    runners = {
        "boundary": lambda: check_boundary(profile, tolerances),
        "parity": lambda: check_parity(profile, tolerances),
        "gray-1d": lambda: check_gray_1d(field, profile, tolerances),
        "einstein": lambda: check_einstein(field, tolerances),
        "gray-tensorial": lambda: check_gray_tensorial(profile, params, tolerances=tolerances,
                                                       sample_size=sample_size, seed=seed),
        "killing": lambda: check_killing_tensor(profile, params, tolerances=tolerances,
                                                sample_size=min(sample_size, 4), seed=seed),
        "engine-agreement": lambda: check_engine_agreement(profile, params, sample_size=sample_size,
                                                           seed=seed, tolerances=tolerances),
        "trace": lambda: check_trace(profile, params, sample_size=sample_size, seed=seed,
                                     tolerances=tolerances),
    }

    reports = []
    for name in checks:
        report = runners[name]()
        log_check(logger, report, family=profile.family_tag)
        reports.append(report)
    return VerificationReport.merge("verify", reports, family=profile.family_tag, checks=checks,
                                    tolerances=tolerances, checked_at=utc_now())


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--checks", help=f"Comma list of: {', '.join(CHECKS)}")
@click.option("--tolerance", "tolerance", multiple=True,
              help=f"name=value override; names: {', '.join(DEFAULT_TOLERANCES)}")
@click.option("--sample-size", type=int, default=10, show_default=True, help="Chart sample points")
@click.option("--seed", type=int, default=0, show_default=True, help="Chart sample seed")
@click.option("--out", type=click.Path(dir_okay=False), help="Report JSON (stdout when omitted)")
def verify(path, checks, tolerance, sample_size, seed, out):
    """Verify the profile at PATH; exit 3 when any check fails."""
    try:
        profile = read_profile(path)
    except MALFORMED as e:
        _fail(EXIT_IO, f"cannot read {path}: {e}")

    selected = [c.strip() for c in checks.split(",") if c.strip()] if checks else _default_checks(profile)
    unknown = sorted(set(selected) - set(CHECKS))
    if unknown:
        raise click.BadParameter(f"unknown checks: {', '.join(unknown)}", param_hint="--checks")

    try:
        tolerances = get_global_config().tolerances(_parse_tolerances(tolerance))
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--tolerance")

    try:
        report = run_checks(profile, selected, tolerances, sample_size, seed)
    except GrayforgeError as e:
        _fail(EXIT_FAILED, f"check aborted ({type(e).__name__}): {e}")

    if out:
        write_report(report, out)
    else:
        click.echo(report.model_dump_json(indent=2))
    if not report.passed:
        worst = report.worst
        _fail(EXIT_FAILED, f"verification failed: {worst.name} = {worst.value:.3e} (tolerance {worst.tolerance:.1e})")


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> List[int]:
    values = []
    for part in text.split(","):
        first, sep, last = part.partition("..")
        values.extend(range(int(first), int(last) + 1) if sep else [int(part)])
    return values


@cli.command()
@click.argument("kind", type=click.Choice(sorted(sweeps.SWEEPS)))
@click.option("--genus", "genera", default="2..6", show_default=True, help="Genus list, e.g. 2..6 or 2,3,5")
@click.option("--s", "s_values", default="0.5,1,1.5,2,3", show_default=True, help="Comma list of twists")
@click.option("--eps", type=click.Choice(["-1", "0", "1"]), default="-1", show_default=True)
@click.option("--D", "d_values", default="0.5,1,2", show_default=True, help="Comma list of Kahler D values")
@click.option("--alpha", "alphas", default="1.5,2,3,5", show_default=True, help="Comma list of alpha values")
@click.option("--lower", type=float, default=2.0, show_default=True, help="Eta bracket lower end")
@click.option("--upper", type=float, default=2.1, show_default=True, help="Eta bracket upper end")
@click.option("--tol", type=float, default=1e-5, show_default=True, help="Eta bracket width")
@click.option("--workers", type=int, help="Thread pool size (default MAX_WORKERS)")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV (.csv) or JSON output; stdout JSON when omitted")
def sweep(kind, genera, s_values, eps, d_values, alphas, lower, upper, tol, workers, out):
    """Run a parameter sweep of KIND."""
    try:
        if kind == "eta":
            result = sweeps.eta_sweep(lower, upper, tol)
        elif kind == "eps-s":
            result = sweeps.eps_s_curve(_floats(s_values), int(eps), max_workers=workers)
        elif kind == "kahler-window":
            result = sweeps.kahler_window(_floats(s_values), _floats(d_values), max_workers=workers)
        elif kind == "product-constants":
            result = sweeps.product_constants(_floats(alphas), max_workers=workers)
        else:
            result = sweeps.SWEEPS[kind](_ints(genera), max_workers=workers)
    except ValueError as e:
        # GrayforgeError is a ValueError too; both mean the sweep could not run
        _fail(EXIT_INFEASIBLE if isinstance(e, GrayforgeError) else EXIT_IO, f"sweep failed: {e}")

    if out:
        try:
            write_sweep(result, out)
        except OSError as e:
            _fail(EXIT_IO, f"cannot write {out}: {e}")
    else:
        click.echo(result.model_dump_json(indent=2))


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="CSV to write")
def export(path, out):
    """Write t, f, g, h and the Ricci eigenvalues of the profile at PATH as CSV."""
    try:
        export_csv(read_profile(path), out)
    except MALFORMED as e:
        _fail(EXIT_IO, f"export failed: {e}")
    click.echo(out)


def main(argv: Optional[List[str]] = None) -> None:
    cli.main(args=argv, prog_name="grayforge")


if __name__ == "__main__":
    main()

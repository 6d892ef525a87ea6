import json
import logging
from fractions import Fraction

import click

from config import (
    FIGURE_VLINE,
    SCAN_COUNT,
    SCAN_EXCHANGE_ROUNDS,
    SCAN_MAX_SPEED,
    SCAN_N,
    SCAN_SEED,
    SCAN_THREADS,
)
from models.bound import BoundResult, BoundStatus
from models.equality_case import EqualityKind
from models.speed_vector import SpeedVector
from repository import scan_repository
from services import bounds_service, equality_service, exact_service, figure_service, scan_service
from services.trigpoly_service import quotient_kernel_sign_report
from utils.exceptions import LonelyRunnerError, SolverError
from utils.logger import logger, set_level
from utils.validators import parse_speed_list

EXIT_INPUT = 2
EXIT_SOLVER = 3


def _fail(message, code=EXIT_INPUT):
    click.echo(f"error: {message}", err=True)
    raise click.exceptions.Exit(code)


def _speed_vector(raw):
    try:
        return SpeedVector(tuple(parse_speed_list(raw)))
    except ValueError as e:
        _fail(str(e))


def _wants_json(ctx, local_flag=False):
    return local_flag or bool(ctx.obj and ctx.obj.get("json"))


def _emit_json(payload):
    click.echo(json.dumps(payload, indent=2, default=str))


@click.group(name="lonely-runner")
@click.option("--json", "as_json", is_flag=True, help="Print machine-readable JSON.")
@click.option("--quiet", is_flag=True, help="Only log warnings and errors.")
@click.option("--verbose", is_flag=True, help="Log debug detail (LP sizes, exchange rounds).")
@click.pass_context
def cli(ctx, as_json, quiet, verbose):
    """Exact gaps of loneliness and certified Fourier bounds for them."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json
    if quiet:
        set_level(logging.WARNING)
    elif verbose:
        set_level(logging.DEBUG)


@cli.command()
@click.option("--v", "speeds", required=True, help="Speeds, e.g. 1,3,4")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def gap(ctx, speeds, as_json):
    """Exact gap(v), its earliest maximizer and every maximizer."""
    v = _speed_vector(speeds)
    try:
        result = exact_service.gap(v)
    except OverflowError as e:
        _fail(str(e))
    if _wants_json(ctx, as_json):
        payload = result.to_dict()
        payload["speeds"] = list(v.speeds)
        payload["n"] = v.n
        payload["tight"] = result.gap == Fraction(1, v.n)
        _emit_json(payload)
        return
    click.echo(f"gap = {result.gap} at t = {result.t_min}")
    click.echo(f"maximizers: {', '.join(str(t) for t in result.maximizers)}")
    click.echo(f"q = {result.q}")


def _print_bound(v, result: BoundResult):
    name = {"upper": "lambda_plus", "lower": "lambda_minus", "lower-q": "lambda_minus_q"}[result.spec.kind.value]
    q_part = f", q={result.q}" if result.q is not None else ""
    click.echo(f"{name}{v}{q_part}  D={result.degree} N={result.samples}")
    click.echo(f"  status:          {result.status.value}")
    click.echo(f"  lp value:        {result.lp_value:.12g}")
    click.echo(f"  certified value: {result.certified_value:.12g}")
    click.echo(f"  repair shift:    {result.repair_shift:.3e}")
    click.echo(f"  exchange rounds: {result.exchange_rounds} (+{result.extra_points} points)")
    if result.assumes_v_q:
        click.echo(f"  valid as a lower bound only if v is in V_{result.q}")


@cli.command()
@click.argument("kind", type=click.Choice(["upper", "lower", "lower-q"]))
@click.option("--v", "speeds", required=True, help="Speeds, e.g. 1,2,3")
@click.option("--q", type=int, default=None, help="Denominator for lower-q (default: from the exact gap).")
@click.option("--degree", type=int, default=None, help="Polynomial degree D (default 2*max(v)).")
@click.option("--samples", type=int, default=None, help="Sample count N (default 8*D+1).")
@click.option("--no-certify", is_flag=True, help="Report the raw LP optimum without repair.")
@click.option("--json", "as_json", is_flag=True)
@click.option("--dump-poly", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the polynomial coefficients c_0..c_D as JSON.")
@click.pass_context
def bound(ctx, kind, speeds, q, degree, samples, no_certify, as_json, dump_poly):
    """Solve and certify one of the three bound programs."""
    v = _speed_vector(speeds)
    certify = not no_certify
    in_v_q = None
    try:
        if kind == "upper":
            result = bounds_service.lambda_plus(v, degree, samples, certify)
        elif kind == "lower":
            result = bounds_service.lambda_minus(v, degree, samples, certify)
        else:
            exact = exact_service.gap(v)
            q = exact.q if q is None else q
            in_v_q = exact_service.in_v_q(v, q, exact)
            if not in_v_q:
                logger.warning("%s is not in V_%d; lambda_minus_q is not a lower bound for it", v, q)
            result = bounds_service.lambda_minus_q(v, q, degree, samples, certify)
    except SolverError as e:
        _fail(f"solver failure: {e}", EXIT_SOLVER)
    except (LonelyRunnerError, ValueError, OverflowError) as e:
        _fail(str(e))

    if dump_poly and result.polynomial is not None:
        with open(dump_poly, "w", encoding="utf-8") as fh:
            json.dump({
                "kind": kind,
                "speeds": list(v.speeds),
                "q": result.q,
                "status": result.status.value,
                "coefficients": result.polynomial.to_list(),
            }, fh, indent=2)
            fh.write("\n")

    if _wants_json(ctx, as_json):
        payload = result.to_dict()
        if in_v_q is not None:
            payload["in_v_q"] = in_v_q
        _emit_json(payload)
    else:
        _print_bound(v, result)

    if result.status in (BoundStatus.INFEASIBLE, BoundStatus.UNBOUNDED):
        _fail(
            f"LP is {result.status.value} at D={result.degree}, N={result.samples}; "
            "try a larger --degree and/or --samples",
            EXIT_SOLVER,
        )


@cli.command()
@click.option("--v", "speeds", required=True, help="Speeds, e.g. 1,2,3,5")
@click.option("--q", type=int, default=None, help="Denominator for the lower-q case (default: from the exact gap).")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def equality(ctx, speeds, q, as_json):
    """Closed-form equality cases for v, with slackness and hat-chain checks."""
    v = _speed_vector(speeds)
    try:
        exact = exact_service.gap(v)
        q = exact.q if q is None else q
        upper, lower = equality_service.case_for(v, q)
    except (LonelyRunnerError, ValueError, OverflowError) as e:
        _fail(str(e))

    slackness = chain = None
    if upper.matched:
        slackness = equality_service.slackness_check(upper.polynomial, v, exact)
        chain = equality_service.hat_inequality_chain(upper.polynomial, v, exact)

    sign_report = None
    base = lower.inner if lower.kind is EqualityKind.GCD_REDUCE else lower
    if base is not None and base.kind is EqualityKind.QUOTIENT_KERNEL and base.a > 1:
        sign_report = quotient_kernel_sign_report(base.a, base.m)

    if _wants_json(ctx, as_json):
        _emit_json({
            "speeds": list(v.speeds),
            "gap": str(exact.gap),
            "t_min": str(exact.t_min),
            "q": q,
            "upper": upper.to_dict(),
            "lower_q": lower.to_dict(),
            "slackness": slackness.to_dict() if slackness else None,
            "chain": list(chain) if chain else None,
            "quotient_kernel_max": sign_report.sample_max if sign_report else None,
        })
        return

    click.echo(f"gap = {exact.gap} at t = {exact.t_min} (q = {exact.q})")
    click.echo(f"upper: {upper.describe()}" + (f", predicted gap {upper.predicted_gap}" if upper.matched else ""))
    if slackness is not None:
        verdict = "holds" if slackness.holds else "fails"
        click.echo(f"  slackness: support {slackness.support_defect:.2e}, orbit {slackness.orbit_defect:.2e} -> {verdict}")
        click.echo(f"  chain: lhs={chain.lhs:.12g} mid={chain.mid:.12g} rhs={chain.rhs:.12g}")
    click.echo(f"lower-q (q={q}): {lower.describe()}" + (f", predicted gap {lower.predicted_gap}" if lower.matched else ""))
    if sign_report is not None:
        click.echo(
            f"  quotient kernel max on [1/{q}, 1/2] = {sign_report.sample_max:.6g} at x = {sign_report.argmax:.6g}"
            + ("" if sign_report.nonpositive else " (sign condition fails)")
        )


@cli.command()
@click.option("--n", "n", type=int, default=SCAN_N, show_default=True, help="Runner count; vectors have n-1 speeds.")
@click.option("--max-speed", type=int, default=SCAN_MAX_SPEED, show_default=True)
@click.option("--count", type=int, default=SCAN_COUNT, show_default=True)
@click.option("--seed", type=int, default=SCAN_SEED, show_default=True)
@click.option("--out", "out_path", default="scan.csv", show_default=True, help="CSV, or JSON when it ends in .json")
@click.option("--exhaustive", is_flag=True, help="Enumerate every vector instead of sampling.")
@click.option("--degree", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--threads", type=int, default=SCAN_THREADS, show_default=True)
@click.option("--exchange-rounds", type=int, default=SCAN_EXCHANGE_ROUNDS, show_default=True,
              help="Point-exchange rounds per bound program.")
@click.pass_context
def scan(ctx, n, max_speed, count, seed, out_path, exhaustive, degree, samples, threads, exchange_rounds):
    """Exact gap and the three bounds for a batch of vectors."""
    if threads < 1:
        _fail("--threads must be positive")
    if exchange_rounds < 0:
        _fail("--exchange-rounds must be non-negative")
    try:
        vectors = scan_service.generate_vectors(n, max_speed, count, seed, exhaustive)
    except ValueError as e:
        _fail(str(e))
    rows = scan_service.run_scan(vectors, degree, samples, threads, exchange_rounds)
    scan_repository.write_rows(out_path, rows)
    summary = scan_service.summarize(rows)
    summary["out"] = out_path
    if _wants_json(ctx):
        _emit_json(summary)
        return
    click.echo(f"{summary['rows']} rows written to {out_path}")
    for series, tally in summary["statuses"].items():
        click.echo(f"  {series}: " + ", ".join(f"{k}={c}" for k, c in sorted(tally.items())))
    click.echo(f"  sandwich violations: {len(summary['sandwich_violations'])}")
    click.echo(f"  monotonicity violations: {len(summary['monotonicity_violations'])}")


@cli.command()
@click.option("--input", "input_path", required=True, help="Scan CSV (or JSON).")
@click.option("--out", "out_path", required=True, help="SVG file to write.")
@click.option("--vline", type=float, default=FIGURE_VLINE, show_default=True)
@click.pass_context
def figure(ctx, input_path, out_path, vline):
    """Scatter of certified bounds against the exact gap."""
    try:
        records = scan_repository.read_rows(input_path)
    except LonelyRunnerError as e:
        _fail(str(e))
    counts = figure_service.write_figure(out_path, records, vline)
    if _wants_json(ctx):
        _emit_json({"out": out_path, "markers": counts})
        return
    click.echo(f"wrote {out_path}: " + ", ".join(f"{k}={c}" for k, c in counts.items()))


@cli.command()
@click.option("--max-speed", type=int, default=12, show_default=True)
@click.option("--max-len", type=int, default=4, show_default=True)
@click.option("--degree", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.pass_context
def probe(ctx, max_speed, max_len, degree, samples):
    """Compare the closed-form detector with the certified upper bound on all small vectors."""
    try:
        report = equality_service.probe_equality_cases(max_speed, max_len, degree=degree, samples=samples)
    except (LonelyRunnerError, ValueError) as e:
        _fail(str(e))
    if _wants_json(ctx):
        _emit_json(report.to_dict())
        return
    click.echo(
        f"checked {report.checked} vectors: {report.tight} tight, {report.flagged} with a closed-form case"
    )
    click.echo(f"  tight without a case: {', '.join(str(v) for v in report.exceptions) or 'none'}")
    click.echo(f"  case without a tight bound: {', '.join(str(v) for v in report.unconfirmed) or 'none'}")
    if report.uncertified:
        click.echo(f"  not certified: {', '.join(str(v) for v in report.uncertified)}")


if __name__ == "__main__":
    cli()

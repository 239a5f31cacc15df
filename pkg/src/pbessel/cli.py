"""Command-line front end.

Subcommands: `eval` (grids to CSV + SVG), `compare` (cross-method
deltas), `verify` (identity residual suites), `asy` (decay-slope fits),
`lattice` (count/area/discrepancy reports), `hardy` (truncated
oscillatory sums vs the counted discrepancy).

Exit codes: 0 all requested checks pass, 1 numerical failure or flagged
rows, 2 usage error.  CSV output is UTF-8, comma-separated, LF line
endings, floats at 17 significant digits so identical configs produce
byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from .special import (
    BudgetExceededError,
    DomainError,
    PExponent,
    UnsupportedRepresentationError,
    ValueWithError,
    classical_bessel_j,
)
from .series import pbessel_series
from .integrals import pbessel_axis, pbessel_poisson, pbessel_thm13, pbessel_thm13_order0
from .router import is_axis_angle, method_router
from .fractional import (
    EKParams,
    ek_integral,
    eta_for_integral,
    verify_fractional_ode,
    verify_order_lower,
    verify_theorem12,
)
from .asymptotics import fit_decay_slope
from .lattice import (
    count_lattice_points,
    hardy_partial_sum_general,
    hardy_partial_sum_p2,
)

CSV_COLUMNS = [
    "p_num", "p_den", "omega", "phi", "r_re", "r_im",
    "value_re", "value_im", "err", "method",
]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_r_range(text: str) -> list[float]:
    """'start:stop:step' inclusive grid, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise click.UsageError(f"--r expects 'value' or 'start:stop:step', got {text!r}")
    start, stop, step = (float(t) for t in parts)
    if step <= 0 or stop < start:
        raise click.UsageError(f"bad range {text!r}")
    n = int(round((stop - start) / step))
    return [start + i * step for i in range(n + 1)]


def _collect_ps(qs: Sequence[int], ps: Sequence[str]) -> list[PExponent]:
    out = [PExponent.from_q(q) for q in qs]
    for text in ps:
        try:
            out.append(PExponent.from_rational(text))
        except (DomainError, ValueError) as exc:
            raise click.UsageError(str(exc))
    if not out:
        raise click.UsageError("specify at least one exponent via --q or --p")
    return out


def _apply_config(path: Optional[str], mapping: dict) -> dict:
    """Fill unset (falsy) values from a JSON config; explicit flags win."""
    if not path:
        return mapping
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    for key, val in cfg.items():
        if key in mapping and not mapping[key]:
            mapping[key] = tuple(val) if isinstance(val, list) else val
    return mapping


def _write_rows(output: str, rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        with open(output, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=1)
            fh.write("\n")
        return
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _render_svg(path: Path, curves: dict, xlabel: str, ylabel: str,
                logscale: bool = False) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, lw=1.0, label=label)
    if logscale:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    if len(curves) <= 12:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _evaluate(p: PExponent, omega: float, phi: float, r: float, method: str,
              tol: float) -> ValueWithError:
    if method == "auto":
        return method_router(p, omega, phi, r, tol=tol)
    if method == "series":
        return pbessel_series(p, omega, phi, r, tol=tol)
    if method == "thm13":
        if omega == 0.0:
            return pbessel_thm13_order0(p, phi, r)
        return pbessel_thm13(p, omega, phi, r)
    if method == "poisson":
        return pbessel_poisson(p, omega, phi, complex(r, 0.0))
    if method == "axis":
        if not is_axis_angle(phi):
            raise click.UsageError(f"--method axis requires an axis angle, got phi={phi}")
        return pbessel_axis(p, omega, r)
    raise click.UsageError(f"unknown method {method!r}")


@click.group()
def main() -> None:
    """Numerics for generalized Bessel functions on p-circle domains."""


def _common_grid_options(f):
    f = click.option("--q", "qs", multiple=True, type=int,
                     help="exponent as the integer q = 2/p (repeatable)")(f)
    f = click.option("--p", "ps", multiple=True, type=str,
                     help="exponent as a rational, e.g. 2/3 (repeatable)")(f)
    f = click.option("--omega", "omegas", multiple=True, type=float)(f)
    f = click.option("--phi", "phis", multiple=True, type=float)(f)
    f = click.option("--r", "r_range", type=str, default="")(f)
    f = click.option("--tol", type=float, default=1e-9, show_default=True)(f)
    f = click.option("--config", "config_path", type=click.Path(exists=True))(f)
    return f


@main.command("eval")
@_common_grid_options
@click.option("--method", type=click.Choice(["auto", "series", "thm13", "poisson", "axis"]),
              default="auto", show_default=True)
@click.option("--output", type=click.Path(), default="pbessel_eval.csv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
def eval_cmd(qs, ps, omegas, phis, r_range, tol, config_path, method, output, fmt):
    """Evaluate the function on a (p, omega, phi, r) grid."""
    opts = _apply_config(config_path, {
        "qs": qs, "ps": ps, "omegas": omegas, "phis": phis,
        "r_range": r_range, "method": method, "tol": tol, "output": output,
    })
    p_list = _collect_ps(opts["qs"], opts["ps"])
    omegas = opts["omegas"] or (0.0,)
    phis = opts["phis"] or (0.0,)
    if not opts["r_range"]:
        raise click.UsageError("--r is required")
    rs = _parse_r_range(str(opts["r_range"]))
    method = opts["method"]
    tol = float(opts["tol"])
    if method == "poisson" and not all(p.q_odd for p in p_list):
        raise click.UsageError("--method poisson requires odd q for every exponent")
    rows = []
    any_flagged = False
    for p in p_list:
        for omega in omegas:
            for phi in phis:
                for r in rs:
                    try:
                        v = _evaluate(p, omega, phi, r, method, tol)
                    except (DomainError, UnsupportedRepresentationError) as exc:
                        raise click.UsageError(str(exc))
                    val = complex(v.value)
                    any_flagged = any_flagged or v.flagged
                    rows.append({
                        "p_num": p.p_frac.numerator,
                        "p_den": p.p_frac.denominator,
                        "omega": _fmt(omega),
                        "phi": _fmt(phi),
                        "r_re": _fmt(r),
                        "r_im": _fmt(0.0),
                        "value_re": _fmt(val.real),
                        "value_im": _fmt(val.imag),
                        "err": _fmt(v.err_estimate),
                        "method": v.method.value,
                    })
    out = str(opts["output"])
    _write_rows(out, rows, fmt)
    if len(rs) > 1:
        curves = {}
        for p in p_list:
            for omega in omegas:
                for phi in phis:
                    key = f"p={p}, w={omega:g}, phi={phi:.4g}"
                    sel = [row for row in rows
                           if (row["p_num"], row["p_den"]) == (p.p_frac.numerator, p.p_frac.denominator)
                           and row["omega"] == _fmt(omega) and row["phi"] == _fmt(phi)]
                    curves[key] = ([float(s["r_re"]) for s in sel],
                                   [float(s["value_re"]) for s in sel])
        _render_svg(Path(out).with_suffix(".svg"), curves, "r", "value")
    click.echo(f"wrote {len(rows)} rows to {out}")
    if any_flagged:
        click.echo("some rows are flagged: requested tolerance not certified", err=True)
        sys.exit(1)


@main.command("compare")
@_common_grid_options
def compare_cmd(qs, ps, omegas, phis, r_range, tol, config_path):
    """Cross-check the series against the integral representations."""
    opts = _apply_config(config_path, {
        "qs": qs, "ps": ps, "omegas": omegas, "phis": phis,
        "r_range": r_range, "tol": tol,
    })
    p_list = _collect_ps(opts["qs"], opts["ps"])
    omegas = opts["omegas"] or (0.0,)
    phis = opts["phis"] or (0.0,)
    if not opts["r_range"]:
        raise click.UsageError("--r is required")
    rs = _parse_r_range(str(opts["r_range"]))
    tol = float(opts["tol"])
    worst = 0.0
    bad = []
    for p in p_list:
        for omega in omegas:
            for phi in phis:
                for r in rs:
                    vals = {"series": pbessel_series(p, omega, phi, r).value}
                    if r > 0:
                        if omega > 0:
                            vals["thm13"] = pbessel_thm13(p, omega, phi, r).value
                        else:
                            vals["thm13"] = pbessel_thm13_order0(p, phi, r).value
                        if p.q_odd:
                            vals["poisson"] = pbessel_poisson(
                                p, omega, phi, complex(r, 0.0)).value.real
                    delta = max(vals.values()) - min(vals.values())
                    worst = max(worst, delta)
                    if delta > tol:
                        bad.append((str(p), omega, phi, r, delta))
                    click.echo(
                        f"p={p} omega={omega:g} phi={phi:.6g} r={r:g} "
                        + " ".join(f"{k}={_fmt(v)}" for k, v in vals.items())
                        + f" delta={delta:.3e}"
                    )
    click.echo(f"worst pairwise delta: {worst:.3e} (tol {tol:g})")
    if bad:
        click.echo(f"{len(bad)} grid points exceed tolerance", err=True)
        sys.exit(1)


_SUITES = ["theorem12", "order-shift", "order-lower", "ode", "reduction"]


@main.command("verify")
@click.option("--suite", type=click.Choice(_SUITES), required=True)
@click.option("--q", "qs", multiple=True, type=int)
@click.option("--p", "ps", multiple=True, type=str)
@click.option("--tol", type=float, default=0.0,
              help="override the suite's default tolerance")
def verify_cmd(suite, qs, ps, tol):
    """Run an identity residual suite; exit 0 iff every residual passes."""
    p_list = _collect_ps(qs, ps) if (qs or ps) else [PExponent(1), PExponent(2), PExponent(3)]
    failures = 0
    checks = 0

    def report(label: str, residual: float, limit: float) -> None:
        nonlocal failures, checks
        checks += 1
        ok = residual <= limit
        failures += 0 if ok else 1
        click.echo(f"{'PASS' if ok else 'FAIL'} {label} residual={residual:.3e} limit={limit:g}")

    if suite == "theorem12":
        limit = tol or 1e-6
        for p in p_list:
            for omega in (0.0, 1.0):
                for g in (0.25, 0.5, 0.75):
                    for r in (1.0, 3.0, 7.0):
                        res = verify_theorem12(p, omega, g, math.pi / 4.0, r)
                        report(f"thm12 p={p} w={omega:g} g={g:g} r={r:g}", res, limit)
    elif suite == "order-shift":
        limit = tol or 1e-7
        for p in p_list:
            for omega in (0.0, 1.0):
                for g in (0.5, 1.0, 1.5):
                    for r in (1.0, 3.0, 7.0):
                        params = EKParams(g, eta_for_integral(p, omega), p)
                        left = ek_integral(
                            lambda s: pbessel_series(p, omega, 0.6, s).value,
                            params, r, f_power=omega).real
                        right = (p.p / r) ** g * pbessel_series(p, omega + g, 0.6, r).value
                        res = abs(left - right) / max(1.0, abs(right))
                        report(f"order-shift p={p} w={omega:g} g={g:g} r={r:g}", res, limit)
    elif suite == "order-lower":
        limit = tol or 1e-7
        for p in p_list:
            for omega in (0.0, 1.0):
                for r in (2.0, 4.0):
                    res = verify_order_lower(p, omega, math.pi / 3.0, r)
                    report(f"order-lower p={p} w={omega:g} r={r:g}", res, limit)
    elif suite == "ode":
        scale_frac = tol or 1e-4
        for p in p_list:
            for omega, phi, r in ((1.0, math.pi / 4.0, 2.0), (2.0, 0.3, 3.0)):
                res, scale = verify_fractional_ode(p, omega, phi, r)
                report(f"ode p={p} w={omega:g} r={r:g}", res, scale_frac * scale)
    elif suite == "reduction":
        limit = tol or 1e-10
        p2 = PExponent(1)
        worst = 0.0
        for omega in (0.0, 1.0, 2.0):
            for r in [0.25 * i for i in range(1, 121)]:
                worst = max(worst, abs(
                    pbessel_series(p2, omega, math.pi / 4.0, r).value
                    - classical_bessel_j(omega, r)))
        report("p=2 classical reduction (max over grid)", worst, limit)
    click.echo(f"{checks - failures}/{checks} checks passed")
    if failures:
        sys.exit(1)


@main.command("asy")
@click.option("--q", "qs", multiple=True, type=int)
@click.option("--p", "ps", multiple=True, type=str)
@click.option("--omega", type=float, default=0.0, show_default=True)
@click.option("--phi", type=float, default=math.pi / 2.0, show_default=True)
@click.option("--r", "r_range", type=str, default="20:500:2", show_default=True)
@click.option("--output", type=click.Path(), default="pbessel_asy.csv", show_default=True)
def asy_cmd(qs, ps, omega, phi, r_range, output):
    """Sample large-radius decay and fit the envelope slope."""
    p_list = _collect_ps(qs, ps)
    rs = _parse_r_range(r_range)
    rows = []
    for p in p_list:
        samples = []
        for r in rs:
            if is_axis_angle(phi):
                v = pbessel_axis(p, omega, r)
            elif omega == 0.0:
                v = pbessel_thm13_order0(p, phi, r)
            else:
                v = pbessel_thm13(p, omega, phi, r)
            samples.append((r, v.value))
        fit = fit_decay_slope(samples)
        rows.append({
            "p_num": p.p_frac.numerator,
            "p_den": p.p_frac.denominator,
            "omega": _fmt(omega),
            "phi": _fmt(phi),
            "slope": _fmt(fit.slope),
            "intercept": _fmt(fit.intercept),
            "r_lo": _fmt(fit.r_window[0]),
            "r_hi": _fmt(fit.r_window[1]),
            "n_samples": fit.n_samples,
            "residual_rms": _fmt(fit.residual_rms),
        })
        click.echo(f"p={p} omega={omega:g} phi={phi:.6g} slope={fit.slope:+.4f} "
                   f"rms={fit.residual_rms:.3f}")
        curves = {f"p={p}": ([s[0] for s in samples], [abs(s[1]) + 1e-300 for s in samples])}
        _render_svg(Path(output).with_suffix(f".p{p.q}.svg"), curves, "r", "|value|",
                    logscale=True)
    _write_rows(output, rows, "csv")
    click.echo(f"wrote {len(rows)} fits to {output}")


@main.command("lattice")
@click.option("--q", "qs", multiple=True, type=int)
@click.option("--p", "ps", multiple=True, type=str)
@click.option("--r", "r_values", multiple=True, type=float, required=True)
@click.option("--output", type=click.Path(), default="", help="optional CSV path")
def lattice_cmd(qs, ps, r_values, output):
    """Lattice point count, area term, and discrepancy per radius."""
    p_list = _collect_ps(qs, ps)
    rows = []
    for p in p_list:
        for r in r_values:
            try:
                rep = count_lattice_points(p, r)
            except BudgetExceededError as exc:
                raise click.ClickException(str(exc))
            rows.append({
                "p_num": p.p_frac.numerator,
                "p_den": p.p_frac.denominator,
                "r": _fmt(r),
                "count": rep.count,
                "area_term": _fmt(rep.area_term),
                "discrepancy": _fmt(rep.discrepancy),
                "n_boundary": len(rep.boundary_points),
            })
            click.echo(f"p={p} r={r:g} count={rep.count} area={rep.area_term:.12g} "
                       f"discrepancy={rep.discrepancy:.12g} boundary={len(rep.boundary_points)}")
    if output:
        _write_rows(output, rows, "csv")


@main.command("hardy")
@click.option("--q", "q_val", type=int, default=None)
@click.option("--p", "p_val", type=str, default=None)
@click.option("--r", type=float, required=True)
@click.option("--terms", "terms", type=float, required=True,
              help="K (p=2 classical sum) or S (general sum) truncation")
def hardy_cmd(q_val, p_val, r, terms):
    """Truncated oscillatory identity vs the counted discrepancy."""
    p_list = _collect_ps((q_val,) if q_val else (), (p_val,) if p_val else ())
    p = p_list[0]
    try:
        if p.q == 1:
            partial = hardy_partial_sum_p2(r, int(terms))
        else:
            partial = hardy_partial_sum_general(p, r, terms)
        counted = count_lattice_points(p, r).discrepancy
    except (DomainError, BudgetExceededError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"p={p} r={r:g} partial_sum={_fmt(partial)} counted={_fmt(counted)} "
               f"deviation={abs(partial - counted):.6e}")


if __name__ == "__main__":
    main()

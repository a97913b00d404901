"""Command-line surface.

Every command takes --json for a machine-readable payload; errors are
rendered as {error_kind, message, context} with exit status 2 for domain
errors, 3 for unsupported configurations and 4 for internal inconsistencies
(a failed integrality assertion is a reportable bug).
"""

from __future__ import annotations

import json
import math
import re
import sys
from fractions import Fraction

import click

from . import __name__ as _pkg  # noqa: F401  (keeps the package import explicit)
from .arith import decompose_discriminant, factorize
from .bqf import class_number_imag, class_number_real, pell_unit
from .cache import ResultCache
from .cm import conductor, order_lattice
from .counts import (
    make_context,
    pi_one_surface,
    pi_profile,
    pi_total,
    pi_zero,
    polarizable,
    principal_existence,
)
from .errors import QmpolarError
from .fields import make_field
from .quat import discriminant_of, global_index, hilbert_symbol, make_pure

_FIELD_RE = re.compile(r"^Q(?:\(sqrt\s*(\d+)\))?$")


def _parse_field(spec: str):
    m = _FIELD_RE.match(spec.replace(" ", ""))
    if not m:
        raise click.BadParameter(f"field spec {spec!r}; use Q or Q(sqrtM)")
    return make_field(int(m.group(1)) if m.group(1) else None)


def _emit(payload: dict, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(text)


def _run(fn, as_json: bool):
    try:
        fn()
    except QmpolarError as exc:
        payload = {
            "error_kind": type(exc).__name__,
            "message": str(exc),
            "context": {},
        }
        if as_json:
            click.echo(json.dumps(payload, sort_keys=True))
        else:
            click.echo(f"error ({type(exc).__name__}): {exc}", err=True)
        sys.exit(exc.exit_status)


@click.group()
def cli():
    """Counting principal line bundles and polarizations on abelian varieties
    with quaternionic multiplication, from exact class-number arithmetic."""


@cli.command("pi0")
@click.option("--field", "field_spec", default="Q", show_default=True)
@click.option("--disc", type=int, required=True, help="totally positive generator of the discriminant ideal")
@click.option("--level", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_pi0(field_spec, disc, level, as_json):
    """Number of isomorphism classes of principal polarizations."""

    def run():
        base = _parse_field(field_spec)
        ctx = make_context(base, disc, level=level)
        value = pi_zero(ctx)
        breakdown = []
        d = ctx.disc_generator
        from .fields import tp_units_mod_squares

        for u in tp_units_mod_squares(base):
            ext = conductor(base, u * d)
            for order in order_lattice(ext):
                breakdown.append(
                    {
                        "unit_branch": str(u),
                        "conductor_norm": order.conductor_divisor_norm,
                        "h_S": order.h_S,
                        "e_S_plus": order.e_S_plus,
                    }
                )
        payload = {"pi0": value, "field": repr(base), "disc": disc, "orders": breakdown}
        lines = [f"pi0 = {value}"]
        for row in breakdown:
            lines.append(
                "  branch u={unit_branch}: conductor norm {conductor_norm}, "
                "h(S) = {h_S}, e+ = {e_S_plus}".format(**row)
            )
        _emit(payload, as_json, "\n".join(lines))

    _run(run, as_json)


@cli.command("pitotal")
@click.option("--field", "field_spec", default="Q", show_default=True)
@click.option("--disc", type=int, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_pitotal(field_spec, disc, as_json):
    """Total number of isomorphism classes of principal line bundles."""

    def run():
        base = _parse_field(field_spec)
        value = pi_total(make_context(base, disc))
        _emit({"pi_total": value, "field": repr(base), "disc": disc}, as_json, f"pi_total = {value}")

    _run(run, as_json)


@cli.command("profile")
@click.option("--field", "field_spec", default="Q", show_default=True)
@click.option("--disc", type=int, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_profile(field_spec, disc, as_json):
    """Index profile (pi_0, ..., pi_2n)."""

    def run():
        base = _parse_field(field_spec)
        prof = pi_profile(make_context(base, disc))
        payload = {
            "pi_by_index": list(prof.pi_by_index),
            "pi_total": prof.pi_total,
            "principal_exists": prof.principal_exists,
            "polarizable": prof.polarizable,
            "complete": prof.complete,
        }
        text = (
            f"profile = {prof.pi_by_index}, total = {prof.pi_total}"
            if prof.complete
            else f"profile not fully determined; total = {prof.pi_total}"
        )
        _emit(payload, as_json, text)

    _run(run, as_json)


@cli.command("polarizable")
@click.option("--field", "field_spec", default="Q", show_default=True)
@click.option("--disc", type=int, required=True)
@click.option("--level", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_polarizable(field_spec, disc, level, as_json):
    """Principal polarizability of the configuration."""

    def run():
        base = _parse_field(field_spec)
        ctx = make_context(base, disc, level=level)
        exists = principal_existence(ctx)
        can = polarizable(ctx)
        payload = {"principal_exists": exists, "polarizable": can}
        _emit(payload, as_json, f"principal line bundle: {exists}; principally polarizable: {can}")

    _run(run, as_json)


@cli.command("classnum")
@click.option("--disc", type=int, required=True, help="discriminant (negative or positive)")
@click.option("--json", "as_json", is_flag=True)
def cmd_classnum(disc, as_json):
    """Class number of the quadratic order of the given discriminant."""

    def run():
        dec = decompose_discriminant(disc)
        if disc < 0:
            h = class_number_imag(disc)
            payload = {
                "disc": disc,
                "h": h,
                "fundamental": dec.fundamental_part,
                "conductor": dec.conductor,
                "method": "definite-enumeration",
            }
            _emit(payload, as_json, f"h({disc}) = {h}")
        else:
            wide, narrow = class_number_real(disc)
            unit = pell_unit(disc)
            payload = {
                "disc": disc,
                "h": wide,
                "h_narrow": narrow,
                "pell": [unit.x, unit.y, unit.norm_sign],
                "fundamental": dec.fundamental_part,
                "conductor": dec.conductor,
                "method": "indefinite-cycles",
            }
            _emit(
                payload,
                as_json,
                f"h({disc}) = {wide} (narrow {narrow}); fundamental unit "
                f"({unit.x} + {unit.y}*sqrt({disc}))/2, norm {unit.norm_sign}",
            )

    _run(run, as_json)


@cli.command("hilbert")
@click.option("-a", type=int, required=True)
@click.option("-b", type=int, required=True)
@click.option("-p", "place", default="infinity", show_default=True, help="prime or 'infinity'")
@click.option("--json", "as_json", is_flag=True)
def cmd_hilbert(a, b, place, as_json):
    """Local Hilbert symbol (a,b)_p over Q, and the global discriminant."""

    def run():
        sym = hilbert_symbol(a, b, place)
        alg = discriminant_of(a, b)
        payload = {
            "symbol": sym,
            "place": place,
            "disc": alg.disc,
            "ramified": list(alg.ramified_finite),
            "totally_indefinite": alg.totally_indefinite,
        }
        _emit(
            payload,
            as_json,
            f"({a},{b})_{place} = {sym}; disc = {alg.disc}; "
            f"ramified at {list(alg.ramified_finite)}; indefinite = {alg.totally_indefinite}",
        )

    _run(run, as_json)


@cli.command("index")
@click.option("-a", type=int, required=True)
@click.option("-b", type=int, required=True)
@click.option("--mu", required=True, help="coefficients x,y,z of mu = x i + y j + z ij")
@click.option("--tau", default="+", show_default=True, help="signs of Im(tau), e.g. '+' or '+,-'")
@click.option("--json", "as_json", is_flag=True)
def cmd_index(a, b, mu, tau, as_json):
    """Index of the line bundle attached to a pure quaternion."""

    def run():
        alg = discriminant_of(a, b)
        coeffs = [Fraction(part) for part in mu.split(",")]
        if len(coeffs) != 3:
            raise click.BadParameter("--mu needs three comma-separated rationals")
        signs = tuple(1 if s.strip() in ("+", "+1", "1") else -1 for s in tau.split(","))
        quat = make_pure(alg, *coeffs)
        idx = global_index(quat, signs)
        payload = {"index": idx, "delta": str(quat.delta), "disc": alg.disc}
        _emit(payload, as_json, f"index = {idx} (delta = {quat.delta})")

    _run(run, as_json)


def _first_primes(n: int) -> list[int]:
    out = []
    p = 2
    while len(out) < n:
        if all(p % q for q in out):
            out.append(p)
        p += 1
    return out


def _scan_rows(base, d_values: list[int], cache: ResultCache):
    rows = []
    for d in d_values:
        key = (0 if base.m is None else base.m, d)
        try:
            value, ms = cache.get_or_compute(
                "pi0", key, lambda d=d: (pi_zero(make_context(base, d)),)
            )
        except QmpolarError as exc:
            rows.append({"D": d, "skipped": type(exc).__name__})
            continue
        p0 = value[0]
        norm_disc = d if base.is_rational else abs(d) ** base.degree * base.disc
        ratio = 0.0 if p0 <= 1 else math.log(p0) / math.log(math.sqrt(norm_disc))
        rows.append(
            {"D": d, "pi0": p0, "norm_disc": norm_disc, "ratio": ratio, "seconds": ms / 1000.0}
        )
    return rows


@cli.command("scan")
@click.option("--field", "field_spec", default="Q", show_default=True)
@click.option("--kmax", type=int, default=None, help="scan D_k = product of the first 2k primes, k = 1..kmax")
@click.option("--dlist", default=None, help="explicit comma-separated discriminants")
@click.option("--plot-data", "plot_path", default=None, help="write a gnuplot-compatible data file")
@click.option("--json", "as_json", is_flag=True)
def cmd_scan(field_spec, kmax, dlist, plot_path, as_json):
    """Batch scan: growth of pi0 against the discriminant."""

    def run():
        base = _parse_field(field_spec)
        if (kmax is None) == (dlist is None):
            raise click.BadParameter("give exactly one of --kmax or --dlist")
        if kmax is not None:
            if not base.is_rational:
                raise click.BadParameter("the product-of-primes generator rule applies to field Q")
            d_values = []
            for k in range(1, kmax + 1):
                primes = _first_primes(2 * k)
                d = 1
                for p in primes:
                    d *= p
                d_values.append(d)
        else:
            d_values = [int(x) for x in dlist.split(",")]
        cache = ResultCache()
        rows = _scan_rows(base, d_values, cache)
        lines = ["D,pi0,norm_disc,ratio,seconds"]
        for row in rows:
            if "skipped" in row:
                lines.append(f"{row['D']},skipped,{row['skipped']},,")
            else:
                lines.append(
                    f"{row['D']},{row['pi0']},{row['norm_disc']},{row['ratio']:.6f},{row['seconds']:.3f}"
                )
        csv = "\n".join(lines)
        if plot_path:
            with open(plot_path, "w") as fh:
                fh.write("# D pi0 ratio\n")
                for row in rows:
                    if "skipped" not in row:
                        fh.write(f"{row['D']} {row['pi0']} {row['ratio']:.6f}\n")
        if as_json:
            click.echo(json.dumps({"rows": rows}, sort_keys=True))
        else:
            click.echo(csv)

    _run(run, as_json)


def main():
    cli()


if __name__ == "__main__":
    main()

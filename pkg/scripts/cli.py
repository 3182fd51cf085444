"""
Command-line front end for the identity verifier.

Usage:
    python scripts/cli.py verify thm73-a --p 1 --order 12
    python scripts/cli.py genus 2 3 3
    python scripts/cli.py belyi zeta_23
    python scripts/cli.py table table-2 --p 2 --q 3 --k 5
    python scripts/cli.py list

Exit codes: 0 pass, 1 verification failure or inconsistent transcription,
2 constraint or branch error, 3 unknown id or usage error.
"""

import functools
import json
import os
import sys

# Add parent directory to path so we can import core and integrations
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import click
from pydantic import ValidationError

from core.algebra import BranchError, ConstraintError, TranscriptionError, UnknownIdentityError
from core.schemas import CliConfig
from core.validators import format_report
from integrations.belyi_catalog import belyi_catalog, expected_profile, verify_belyi
from integrations.identity_registry import list_identities, verify
from integrations.schwarz_geometry import classify_low_genus, genus, genus_table, render_rows, table_rows

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONSTRAINT = 2
EXIT_USAGE = 3


class VerifierGroup(click.Group):
    """Group that returns the subcommand's exit code and maps usage errors to 3."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            result = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_FAIL)
        sys.exit(result if isinstance(result, int) else EXIT_PASS)


def domain_errors(fn):
    """Translate domain exceptions into exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UnknownIdentityError as e:
            click.echo(f"ERROR: {e.args[0] if e.args else e}", err=True)
            return EXIT_USAGE
        except (ConstraintError, BranchError) as e:
            click.echo(f"ERROR: {e}", err=True)
            return EXIT_CONSTRAINT
        except TranscriptionError as e:
            click.echo(f"ERROR: {e}", err=True)
            return EXIT_FAIL

    return wrapper


def _resolve_id(ident: str, part) -> str:
    if part is None:
        return ident
    for suffix in ("-i", "-ii"):
        if ident.endswith(suffix):
            if suffix != f"-{part}":
                raise click.UsageError(f"--part {part} contradicts {ident}")
            return ident
    return f"{ident}-{part}"


@click.group(cls=VerifierGroup)
def cli():
    """Exact verification of algebraic hypergeometric identities."""


@cli.command("verify")
@click.argument("ident")
@click.option("--order", type=int, default=None, help="Truncation order N.")
@click.option("--mode", type=click.Choice(["parametric", "sampled"]), default="parametric")
@click.option("--a", "a_value", default=None, help="Rational value for a, e.g. 1/7.")
@click.option("--c", "c_value", default=None, help="Rational value for c.")
@click.option("--A", "A_value", default=None, help="Rational value for A (transform identities).")
@click.option("--B", "B_value", default=None, help="Rational value for B.")
@click.option("--C", "C_value", default=None, help="Rational value for C.")
@click.option("--p", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--l", "ell", type=int, default=None, help="Kernel index l.")
@click.option("--kappa", type=int, default=None, help="Residue class kappa.")
@click.option("--j", type=int, default=None, help="Root index j.")
@click.option("--n", type=int, default=None)
@click.option("--part", type=click.Choice(["i", "ii"]), default=None)
@click.option("--samples", type=int, default=None, help="Sample count in sampled mode.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--json", "json_path", default=None, help="Also write the report to PATH.")
@click.option("--seed", type=int, default=None)
@click.option("--no-cache", is_flag=True, default=False)
@domain_errors
def cmd_verify(ident, order, mode, a_value, c_value, A_value, B_value, C_value, p, q, ell,
               kappa, j, n, part, samples, fmt, json_path, seed, no_cache):
    """Verify identity IDENT through the truncation order."""
    ident = _resolve_id(ident, part)
    raw = {
        "a": a_value, "c": c_value, "A": A_value, "B": B_value, "C": C_value,
        "p": p, "q": q, "l": ell, "kappa": kappa, "j": j, "n": n,
    }
    try:
        config = CliConfig(
            order=order, mode=mode, fmt=fmt, json_path=json_path, seed=seed,
            samples=samples, use_cache=not no_cache,
            params={k: str(v) for k, v in raw.items() if v is not None},
        )
    except ValidationError as e:
        raise click.UsageError(str(e))

    report = verify(
        ident, config.params, mode=config.mode, order=config.order, samples=config.samples,
        seed=config.seed, use_cache=config.use_cache,
    )
    payload = report.to_json_dict()
    if config.fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(format_report(report))
    if config.json_path:
        with open(config.json_path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
    return EXIT_PASS if report.passed else EXIT_FAIL


@cli.command("genus")
@click.argument("p", type=int, required=False)
@click.argument("q", type=int, required=False)
@click.argument("k", type=int, required=False)
@click.option("--table", "table_bound", type=int, default=None,
              help="Print every (p, q, k) with p + q up to BOUND.")
@click.option("--classify", "classify_bound", type=int, default=None,
              help="List the genus 0 and genus 1 curves with k >= 3 up to BOUND.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@domain_errors
def cmd_genus(p, q, k, table_bound, classify_bound, fmt):
    """Genus of the Schwarz curve C^(k)_{p,q}."""
    if classify_bound is not None:
        found = classify_low_genus(classify_bound)
        if fmt == "json":
            click.echo(json.dumps({str(g): [list(t) for t in found[g]] for g in found}))
        else:
            for g in (0, 1):
                click.echo(f"genus {g}: " + ", ".join(str(t) for t in found[g]))
        return EXIT_PASS
    if table_bound is not None:
        rows = [{"p": r.p, "q": r.q, "k": r.k, "genus": r.genus} for r in genus_table(table_bound)]
        click.echo(render_rows(rows, fmt))
        return EXIT_PASS
    if None in (p, q, k):
        raise click.UsageError("genus needs P Q K, --table BOUND or --classify BOUND")
    report = genus(p, q, k)
    if fmt == "json":
        click.echo(report.model_dump_json())
    else:
        click.echo(f"genus({p},{q},{k}) = {report.genus}")
        click.echo(f"  profile over 0: {report.profile.compact()['zero']}")
        click.echo(f"  profile over 1: {report.profile.compact()['one']}")
        click.echo(f"  profile over oo: {report.profile.compact()['infinity']}")
    return EXIT_PASS


@cli.command("belyi")
@click.argument("map_id")
@click.option("--p", type=int, default=None)
@click.option("--q", type=int, default=None)
@domain_errors
def cmd_belyi(map_id, p, q):
    """Print a catalog map and certify its ramification."""
    rmap = belyi_catalog(map_id, p, q)
    report = verify_belyi(rmap, expected_profile(map_id, p, q))
    click.echo(f"{rmap.map_id}: {rmap.var} -> {rmap.as_expr()}")
    click.echo(f"  degree {report.degree}")
    click.echo(f"  ramified only over 0, 1, oo: {report.critical_values_ok}")
    for name, fibre in report.profile.compact().items():
        click.echo(f"  over {name}: {fibre}")
    verdict = "PASS" if report.passed else "FAIL"
    if report.genus is None:
        click.echo(f"  not a Belyi map: {verdict}")
    else:
        click.echo(f"  genus {report.genus}: {verdict}")
    return EXIT_PASS if report.passed else EXIT_FAIL


@cli.command("table")
@click.argument("name")
@click.option("--p", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--bound", type=int, default=8)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@domain_errors
def cmd_table(name, p, q, k, bound, fmt):
    """Emit table-2, genus or classification as text or JSON."""
    click.echo(render_rows(table_rows(name, p, q, k, bound), fmt))
    return EXIT_PASS


@cli.command("list")
def cmd_list():
    """All registry ids with their source labels."""
    for case in list_identities():
        free = ",".join(case.free) or "-"
        click.echo(f"{case.id:18s} {case.variable:5s} free={free:6s} {case.source}")
    return EXIT_PASS


if __name__ == "__main__":
    cli()

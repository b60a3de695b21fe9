"""Command-line front end: ``gsclosure <command> [options]``.

Exit status is 2 for invalid options or arguments, 1 when a verification
fails and 0 otherwise.  Output depends only on the options: elements are
listed in canonical order and no timestamps are written.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from . import __version__
from .errors import TowerError
from .finite_field import check_norm_trace_identity, format_poly, make_field, trace_norm, eval_wgh
from .identities import SUITES, checklist
from .points import count_split_points, degree_via_fiber
from .ramification import (
    LOCI,
    base_points,
    closed_form_different,
    different_from_paths,
    formula_row,
    ram_path,
)
from .tower import closure_tower, gs_tower

CSV_SCHEMA = 1
FORMULAS = {
    "different_exponent_over_zero": "2*(p^(n-3) - 1)",
    "different_exponent_elsewhere": "2*(p^(n-1) - 1)",
    "deg_D": "2*(1 - p^(3-n))*deg",
    "deg_L": "2*(p - p^(2-n))*deg",
    "genus": "(p - p^(3-n) - p^(2-n))*deg + 1",
    "ratio_numerator": "(p^2 - p)*deg",
}

FORMAT = click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default=None,
                      help="Output encoding.")


def _manifest(command: str, flags: dict, p: int) -> dict:
    ctx = make_field(p, 2)
    return {
        "tool": "gsclosure",
        "version": __version__,
        "command": command,
        "flags": flags,
        "p": p,
        "modulus": format_poly(ctx.modulus, "T"),
        "csv_schema": CSV_SCHEMA,
        "formulas": FORMULAS,
    }


def _emit_json(obj):
    click.echo(json.dumps(obj, indent=2, sort_keys=False))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (str(v).lower() if isinstance(v, bool) else v) for v in r])
    return buf.getvalue()


def _table(header, rows) -> str:
    """Markdown table."""
    cells = [[str(h) for h in header]] + [
        ["" if v is None else (str(v).lower() if isinstance(v, bool) else str(v)) for v in r]
        for r in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    line = lambda row: "| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |"
    out = [line(cells[0]), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(r) for r in cells[1:]]
    return "\n".join(out) + "\n"


def _emit_rows(fmt, header, rows, payload):
    if fmt == "json":
        _emit_json(payload)
    elif fmt == "csv":
        click.echo(_csv(header, rows), nl=False)
    else:
        click.echo(_table(header, rows), nl=False)


def _fail_usage(msg: str):
    raise click.UsageError(msg)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except TowerError as exc:
            # library-level argument problems are reported like bad flags
            click.echo(f"Error: {exc}", err=True)
            ctx.exit(2)


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="gsclosure")
def main():
    """Recursive Artin-Schreier tower over GF(p^2) and its Galois closure."""


@main.command("field-info")
@click.option("--p", "p", type=int, required=True)
@FORMAT
def field_info(p, fmt):
    """Field tables, the trace-zero set and the norm/trace census."""
    fmt = fmt or "json"
    ctx = make_field(p, 2)
    kminus = set(ctx.kminus_codes())
    rows = []
    for x in ctx.elements():
        tr, nm = trace_norm(x)
        g = None if x.code in kminus else str(eval_wgh(x, "g"))
        rows.append([str(x), str(tr), str(nm), x.code in kminus, g])
    header = ["element", "trace", "norm", "in_Kminus", "g"]
    rep = check_norm_trace_identity(ctx)
    payload = {
        "manifest": _manifest("field-info", {"p": p}, p),
        "q": ctx.q,
        "modulus": format_poly(ctx.modulus, "T"),
        "Kminus": [ctx.fmt(c) for c in ctx.kminus_codes()],
        "elements": [dict(zip(header, r)) for r in rows],
        "norm_trace_census": rep.to_json(),
    }
    _emit_rows(fmt, header, rows, payload)
    if not rep.passed:
        sys.exit(1)


def _spec(p, n, tower, model, beta):
    if tower == "gs":
        return gs_tower(p, n)
    return closure_tower(p, n, beta, model)


TOWER_OPTIONS = [
    click.option("--p", "p", type=int, required=True),
    click.option("--n", "n", type=int, required=True),
    click.option("--tower", type=click.Choice(["gs", "closure"]), default="gs", show_default=True),
    click.option("--model", type=click.Choice(["full", "reduced"]), default="full", show_default=True),
    click.option("--beta", default=None, help="Nonzero trace-zero element, e.g. t or 2t."),
]


def _tower_options(f):
    for opt in reversed(TOWER_OPTIONS):
        f = opt(f)
    return f


def _tower_flags(p, n, tower, model, spec):
    return {"p": p, "n": n, "tower": tower, "model": model if tower == "closure" else None,
            "beta": None if spec.beta is None else str(spec.beta)}


@main.command()
@_tower_options
@click.option("--parallel", is_flag=True, help="Enumerate fibers in worker processes.")
@FORMAT
def count(p, n, tower, model, beta, parallel, fmt):
    """Completely split points over every base outside K_-."""
    fmt = fmt or "csv"
    spec = _spec(p, n, tower, model, beta)
    census = count_split_points(spec, parallel=parallel)
    header = ["base", "fiber_size", "split", "values_outside_Kminus"]
    rows = [[f.row()[h] for h in header] for f in census.fibers]
    flags = _tower_flags(p, n, tower, model, spec)
    payload = {
        "manifest": _manifest("count", flags, p),
        "summary": census.summary(),
        "fibers": [dict(zip(header, r)) for r in rows],
    }
    _emit_rows(fmt, header, rows, payload)


@main.command()
@_tower_options
@FORMAT
def degree(p, n, tower, model, beta, fmt):
    """Degree over the base line from a completely split fiber."""
    fmt = fmt or "json"
    spec = _spec(p, n, tower, model, beta)
    deg = degree_via_fiber(spec)
    kind, value = next(iter(deg.items()))
    header = ["kind", "value"]
    rows = [[kind, value]]
    payload = {"manifest": _manifest("degree", _tower_flags(p, n, tower, model, spec), p), "degree": deg}
    _emit_rows(fmt, header, rows, payload)


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--kmax", type=click.IntRange(1, 6), default=3, show_default=True,
              help="Deepest shift relation checked.")
@click.option("--suite", type=click.Choice(("all",) + SUITES), multiple=True, default=("all",),
              show_default=True)
@click.option("--beta", default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@FORMAT
def verify(p, kmax, suite, beta, seed, fmt):
    """Run identity checks; exit 1 if any entry fails."""
    fmt = fmt or "json"
    reports = checklist(p, kmax, suite, seed, beta)
    header = ["statement_id", "instances", "passed"]
    rows = [[r.statement_id, r.instances, r.passed] for r in reports]
    flags = {"p": p, "kmax": kmax, "suite": list(suite), "beta": beta, "seed": seed}
    payload = {
        "manifest": _manifest("verify", flags, p),
        "all_passed": all(reports),
        "checklist": [r.to_json() for r in reports],
    }
    _emit_rows(fmt, header, rows, payload)
    if not all(reports):
        sys.exit(1)


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--deg", "deg_value", type=int, default=None, help="Evaluate at this cover degree.")
@FORMAT
def genus(p, n, deg_value, fmt):
    """Different degrees, genus coefficient and ratio at one level (n > 4)."""
    fmt = fmt or "table"
    if n <= 4:
        _fail_usage("the genus formula requires n > 4")
    row = formula_row(p, n, deg_value)
    _emit_formula_rows(fmt, [row], _manifest("genus", {"p": p, "n": n, "deg": deg_value}, p))


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--nmax", type=int, required=True)
@click.option("--deg-floor", is_flag=True, help="Also evaluate at the smallest degree p^(n-1).")
@FORMAT
def ratio(p, nmax, deg_floor, fmt):
    """N/g lower bound for n = 5..nmax."""
    fmt = fmt or "table"
    if nmax < 5:
        _fail_usage("the ratio table starts at n = 5; use --nmax >= 5")
    rows = [formula_row(p, n, p ** (n - 1) if deg_floor else None) for n in range(5, nmax + 1)]
    manifest = _manifest("ratio", {"p": p, "nmax": nmax, "deg_floor": deg_floor}, p)
    _emit_formula_rows(fmt, rows, manifest, extra={"limit_n_to_infinity": str(p - 1)})


FORMULA_COLUMNS = ["n", "deg_D/deg", "deg_L/deg", "genus_coefficient", "ratio_limit", "deg", "ratio_at_deg"]


def _emit_formula_rows(fmt, rows, manifest, extra=None):
    table = [[r.get(c) for c in FORMULA_COLUMNS] for r in rows]
    payload = {"manifest": manifest, "rows": rows, **(extra or {})}
    _emit_rows(fmt, FORMULA_COLUMNS, table, payload)


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@FORMAT
def different(p, n, fmt):
    """Different exponents by transitivity versus the closed forms."""
    fmt = fmt or "table"
    if n < 4:
        _fail_usage("the different is tabulated for n >= 4")
    header = ["locus", "base_points", "ramification_index", "exponent_by_steps",
              "exponent_closed_form", "deg_coefficient"]
    rows = []
    for locus in LOCI:
        path = ram_path(p, n, locus)
        rows.append([locus, base_points(p, locus), path.ramification_index, path.different,
                     closed_form_different(p, n, locus), str(different_from_paths(p, n, locus).a)])
    payload = {
        "manifest": _manifest("different", {"p": p, "n": n}, p),
        "rows": [dict(zip(header, r)) for r in rows],
        "consistent": all(r[3] == r[4] for r in rows),
    }
    _emit_rows(fmt, header, rows, payload)
    if not payload["consistent"]:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()

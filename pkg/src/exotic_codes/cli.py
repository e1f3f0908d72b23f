"""Command-line entry point: ``exotic-codes``."""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click

from .codefile import CodeFile, MalformedCodeFile, code_file_from_spin, display
from .cyclo import NumericConfig
from .forge import (
    EXCEPTIONAL_N,
    EvenN,
    NoIrrepAvailable,
    build_family,
    character_by_label,
    default_scan_pairs,
    gamma_scan,
    spin_kl_check,
)
from .groups import (
    classify_hierarchy,
    coset_decomposition,
    group_by_label,
    irreducible_characters,
    two_t,
)
from .qubit import (
    ENUMERATOR_MAX_N,
    ORACLE_MAX_N,
    certify_transversal_group,
    pauli_kl_oracle,
    symmetrized_kl_check,
    weight_enumerators,
)
from .spin import irrep_multiplicity, schur_weyl_multiplicity, tensor_multiplicity

CHECKS = ("kl-spin", "kl-oracle", "kl-sym", "enumerators", "transversal")


class CheckFailed(click.ClickException):
    exit_code = 1


class Infeasible(click.ClickException):
    exit_code = 2


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _parse_selector(text):
    if text is None:
        return None
    try:
        return [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"selector must be comma-separated rationals: {exc}") from None


def _group(label: str):
    try:
        return group_by_label(label)
    except KeyError as exc:
        raise click.BadParameter(str(exc), param_hint="--group") from None


def _emit_rows(rows: list[dict], fmt: str, columns: list[str]) -> str:
    if fmt == "json":
        return _dump(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns))
    return "\n".join(line.rstrip() for line in lines)


FORMAT = click.option("--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True)


@click.group()
@click.option(
    "--precision", type=click.Choice(["f64", "hp"]), envvar="EXOTIC_CODES_PRECISION", default="f64",
    show_default=True, help="Numeric shadow precision (exact arithmetic is unaffected).",
)
@click.option("--tolerance", type=float, default=None, help="Override the comparison tolerance.")
@click.pass_context
def main(ctx, precision, tolerance):
    """Construct and certify the 2I family of ((n,2,3)) codes."""
    ctx.obj = NumericConfig(precision, tolerance)


# --------------------------------------------------------------------------
# construct


@main.command()
@click.option("--n", "n", type=int, required=True, help="Number of qubits (odd).")
@click.option("--selector", default=None, help="Comma-separated rationals, one per copy of the irrep.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the code file here.")
@click.option("--mode", type=click.Choice(["auto", "exact", "numeric"]), default="auto", show_default=True)
@click.pass_obj
def construct(config, n, selector, out_path, mode):
    """Build the ((n,2,3)) code and print its codewords."""
    try:
        code = build_family(n, _parse_selector(selector), mode, config)
    except NoIrrepAvailable as exc:
        raise Infeasible(f"{exc}\nexceptional n: {', '.join(map(str, EXCEPTIONAL_N))}") from None
    except EvenN as exc:
        raise Infeasible(str(exc)) from None
    cf = code_file_from_spin(code)
    if out_path:
        cf.write(out_path)
    click.echo(display(cf))


# --------------------------------------------------------------------------
# verify


def _kl_summary(report) -> dict:
    d = report.to_dict()
    errors = d.pop("errors")
    d["n_errors"] = len(errors)
    d["failures"] = [e for e in errors if not e["passed"]]
    return d


def _enumerator_summary(en, claimed: int) -> dict:
    def fmt(x):
        return str(x) if isinstance(x, Fraction) else repr(float(x))

    return {
        "A": [fmt(a) for a in en.A],
        "B": [fmt(b) for b in en.B],
        "distance": en.distance,
        "passed": en.distance >= claimed,
    }


def run_checks(cf: CodeFile, checks, config: NumericConfig, force_large: bool = False) -> dict:
    """Run the selected certifications on a code file; returns the report dict."""
    q = cf.to_qubit_code(config)
    results: dict[str, dict] = {"normalization": {"passed": cf.check_normalization()}}
    for name in checks:
        if name == "kl-spin":
            results[name] = _kl_summary(spin_kl_check(cf.to_spin_code(config), d=cf.distance))
        elif name == "kl-oracle":
            if cf.n > ORACLE_MAX_N:
                results[name] = {"passed": True, "skipped": f"n > {ORACLE_MAX_N}"}
            else:
                results[name] = _kl_summary(pauli_kl_oracle(q, cf.distance - 1))
        elif name == "kl-sym":
            results[name] = _kl_summary(symmetrized_kl_check(q, cf.distance - 1))
        elif name == "enumerators":
            if cf.n > ENUMERATOR_MAX_N and not force_large:
                results[name] = {"passed": True, "skipped": f"n > {ENUMERATOR_MAX_N}; pass --force-large"}
            else:
                results[name] = _enumerator_summary(weight_enumerators(q, force_large), cf.distance)
        elif name == "transversal":
            G = group_by_label(cf.group)
            rep = certify_transversal_group(q, G, character_by_label(G, cf.irrep))
            failing = [e for e in rep.entries if not (e["preserved"] and e["trace_ok"])]
            pairings: dict[str, int] = {}
            for e in rep.entries:
                pairings[e["pairing"]] = pairings.get(e["pairing"], 0) + 1
            results[name] = {
                "passed": rep.passed, "group": rep.group, "character": rep.character,
                "n_elements": len(rep.entries), "pairings": pairings, "failures": failing,
            }
        else:
            raise click.BadParameter(f"unknown check {name!r}", param_hint="--checks")
    return {
        "n": cf.n,
        "group": cf.group,
        "irrep": cf.irrep,
        "selector": cf.selector,
        "exact": q.exact,
        "checks": results,
        "passed": all(r["passed"] for r in results.values()),
    }


def _verify(config, code_path, checks, force_large):
    names = [c.strip() for c in checks.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise click.BadParameter(f"unknown checks {bad}; choose from {', '.join(CHECKS)}", param_hint="--checks")
    try:
        cf = CodeFile.read(code_path)
    except MalformedCodeFile as exc:
        raise Infeasible(str(exc)) from None
    report = run_checks(cf, names, config, force_large)
    click.echo(_dump(report))
    if not report["passed"]:
        raise CheckFailed("one or more checks failed")


@main.command()
@click.argument("code_path", type=click.Path())
@click.option("--checks", default=",".join(CHECKS), show_default=True)
@click.option("--force-large", is_flag=True, help="Allow enumerators beyond n = 9.")
@click.pass_obj
def verify(config, code_path, checks, force_large):
    """Certify a code file; exit 0 iff every selected check passes."""
    _verify(config, code_path, checks, force_large)


@main.command(name="enumerate")
@click.argument("code_path", type=click.Path())
@click.option("--force-large", is_flag=True)
@click.pass_obj
def enumerate_cmd(config, code_path, force_large):
    """Weight enumerators only (same as verify --checks enumerators)."""
    _verify(config, code_path, "enumerators", force_large)


# --------------------------------------------------------------------------
# branch


def branching(n: int, label: str) -> dict:
    """Decomposition of the n-qubit space into irreps of the group, sector by sector."""
    G = _group(label)
    irreps = irreducible_characters(G)
    sectors = []
    totals = {ch.label: 0 for ch in irreps}
    for two_j in range(n, -1, -2):
        copies = schur_weyl_multiplicity(n, Fraction(two_j, 2))
        parts = {}
        for ch in irreps:
            m = irrep_multiplicity(G, ch, Fraction(two_j, 2))
            if m:
                parts[ch.label] = m
                totals[ch.label] += m * copies
        sectors.append({"j": str(Fraction(two_j, 2)), "copies": copies, "irreps": parts})
    for ch in irreps:
        if tensor_multiplicity(G, ch, n) != totals[ch.label]:
            raise AssertionError(f"branching totals disagree for {ch.label}")
    out = {"n": n, "group": G.name, "sectors": sectors, "totals": {k: v for k, v in totals.items() if v}}
    if G.name == "2I":
        out["mu_pi2bar"] = sectors[0]["irreps"].get("pi2bar", 0)
    return out


def _sector_text(parts: dict) -> str:
    return " + ".join(lab if m == 1 else f"{m} {lab}" for lab, m in parts.items()) or "-"


@main.command()
@click.option("--n", "n", type=int, default=None, help="Number of qubits.")
@click.option("--j", "j", default=None, help="Single spin sector, e.g. 7/2.")
@click.option("--group", "label", default="2I", show_default=True)
@click.option("--sweep", is_flag=True, help="mu(pi2bar) for odd n up to --n (default 99).")
@FORMAT
def branch(n, j, label, sweep, fmt):
    """Irrep multiplicities per spin sector."""
    G = _group(label)
    if sweep:
        chi = character_by_label(G, "pi2bar" if G.name.startswith("2I") else "pi2")
        rows = [{"n": m, "mu": irrep_multiplicity(G, chi, Fraction(m, 2))} for m in range(1, (n or 99) + 1, 2)]
        click.echo(_emit_rows(rows, fmt, ["n", "mu"]))
        return
    if j is not None:
        jj = Fraction(j)
        if jj < 0 or (2 * jj).denominator != 1:
            raise click.BadParameter("j must be a nonnegative half-integer", param_hint="--j")
        rows = [
            {"j": str(jj), "irrep": ch.label, "multiplicity": irrep_multiplicity(G, ch, jj)}
            for ch in irreducible_characters(G)
        ]
        rows = [r for r in rows if r["multiplicity"]]
        click.echo(_emit_rows(rows, fmt, ["j", "irrep", "multiplicity"]))
        return
    if n is None or n < 1:
        raise click.BadParameter("give --n (positive), --j, or --sweep")
    data = branching(n, label)
    if fmt == "json":
        click.echo(_dump(data))
        return
    rows = [{"j": s["j"], "copies": s["copies"], "decomposition": _sector_text(s["irreps"])} for s in data["sectors"]]
    text = _emit_rows(rows, fmt, ["j", "copies", "decomposition"])
    if fmt == "table":
        text += "\ntotal: " + _sector_text(data["totals"])
        if "mu_pi2bar" in data:
            text += f"\nmu(pi2bar, j={n}/2) = {data['mu_pi2bar']}"
    click.echo(text)


# --------------------------------------------------------------------------
# scan-gamma


@main.command(name="scan-gamma")
@click.option("--bdn-max", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@FORMAT
def scan_gamma(bdn_max, jobs, fmt):
    """Which (group, character) pairs make Gamma~ vanish identically."""
    rows = gamma_scan(default_scan_pairs(bdn_max), jobs=jobs)
    out = [{"group": r.group, "character": r.character, "identically_zero": str(r.zero).lower()} for r in rows]
    if fmt == "json":
        click.echo(_dump([r.to_dict() for r in rows]))
    else:
        click.echo(_emit_rows(out, fmt, ["group", "character", "identically_zero"]))
    zeros = [(r.group, r.character) for r in rows if r.zero]
    if zeros != [("2I", "pi2bar")]:
        raise CheckFailed(f"zero rows: {zeros}")


# --------------------------------------------------------------------------
# classify


def _scalar_text(x) -> str:
    return str(x.to_fraction()) if x.is_rational() else str(x.poly).replace("x", "z")


def classification(label: str) -> dict:
    G = _group(label)
    coset = None
    if G.name.startswith("2I"):
        H = two_t(G.field)
        reps = coset_decomposition(G, H)
        h_set = {G.index[h] for h in H.elements}
        inv = G.inverse_index
        coset = [next(c for c, r in enumerate(reps) if int(G.table[inv[r], k]) in h_set) for k in range(G.order)]
    rows, counts = [], {"clifford": 0, "exotic": 0, "indeterminate": 0}
    class_of = G.class_of
    for k, g in enumerate(G.elements):
        kind = classify_hierarchy(g)
        counts[kind] += 1
        rows.append({
            "index": k,
            "class": int(class_of[k]),
            "order": G.element_order(k),
            "classification": kind,
            "coset": "" if coset is None else coset[k],
            "entries": " ; ".join(_scalar_text(x) for x in g.entries),
        })
    return {"group": G.name, "order": G.order, "counts": counts, "elements": rows}


@main.command()
@click.option("--group", "label", default="2I", show_default=True)
@FORMAT
def classify(label, fmt):
    """Clifford / exotic / indeterminate status of every group element."""
    data = classification(label)
    if fmt == "json":
        click.echo(_dump(data))
        return
    cols = ["index", "class", "order", "classification", "coset", "entries"]
    text = _emit_rows(data["elements"], fmt, cols)
    if fmt == "table":
        c = data["counts"]
        text += f"\n{data['group']}: {c['clifford']} clifford / {c['exotic']} exotic / {c['indeterminate']} indeterminate"
    click.echo(text)


def run():  # pragma: no cover
    try:
        main(standalone_mode=True)
    except Exception as exc:  # internal failure
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    run()

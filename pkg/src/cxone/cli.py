"""Command-line interface: ``cxone <command> <input.json> [options]``.

Exit codes: 0 success, 1 invalid document or request, 2 divisor not proper,
3 Nash or terminal set requested over the projective line, 4 incomplete
enumeration under ``--strict``.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Callable

import click

from .documents import (
    DocumentError,
    dumps,
    jsonable,
    parse_input,
    parse_valuation,
    valuation_to_json,
    witness_to_json,
)
from .hyperorder import leq_hyper, leq_pointwise_P1, leq_pointwise_sound
from .pdivisor import DivisorError, DivisorialFan, HypPoint, PolyDivisor
from .resolve import ResolutionError, certify_non_essential, exceptional_classification
from .valsets import (
    TrinomialData,
    ValuationSet,
    minimal_valuations,
    nash_set,
    terminal_set,
    trinomial_nash_criterion,
)

EXIT_OK, EXIT_INVALID, EXIT_NOT_PROPER, EXIT_GENUS_ZERO, EXIT_INCOMPLETE = range(5)


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --- shared options -------------------------------------------------------


def _global_options(f: Callable) -> Callable:
    f = click.option("--bound", type=click.IntRange(min=0), default=None,
                     help="Level bound for enumerations (default: certified bound).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default=None,
                     help="Output format (default: text).")(f)
    f = click.option("--strict", is_flag=True, default=None,
                     help="Exit with status 4 when an enumeration is incomplete.")(f)
    return f


def _settings(ctx: click.Context, bound: int | None, fmt: str | None, strict: bool | None) -> dict:
    base = ctx.find_root().obj or {}
    return {
        "bound": bound if bound is not None else base.get("bound"),
        "fmt": fmt or base.get("fmt") or "text",
        "strict": bool(strict or base.get("strict")),
    }


def _load(path: Path) -> PolyDivisor | DivisorialFan:
    obj = parse_input(path.read_bytes())
    members = obj.divisors if isinstance(obj, DivisorialFan) else [obj]
    for d in members:
        prop = d.is_proper()
        if prop.kind == "NotProper":
            raise CliFailure(EXIT_NOT_PROPER, f"not proper: {prop.reason}")
        if prop.kind == "ProperModuloPrincipal":
            click.echo(f"note: {prop.reason}", err=True)
    return obj


def _single(obj: PolyDivisor | DivisorialFan, command: str) -> PolyDivisor:
    if isinstance(obj, DivisorialFan):
        raise CliFailure(EXIT_INVALID, f"{command} needs a single p-divisor, not a divisorial fan")
    return obj


def _genus_zero_guard(d: PolyDivisor, what: str) -> None:
    if d.locus == "complete" and d.curve.genus == 0:
        raise CliFailure(EXIT_GENUS_ZERO, f"{what} over the projective line is not supported; try `minimal`")


def _valuation(text: str, obj: PolyDivisor | DivisorialFan) -> HypPoint:
    return parse_valuation(text, obj.curve, obj.rank)


def _emit(payload: dict, fmt: str, render: Callable[[dict], list[str]]) -> None:
    if fmt == "json":
        click.echo(dumps(payload), nl=False)
    else:
        click.echo("\n".join(render(payload)))


def _strict_check(settings: dict, complete: bool) -> None:
    if settings["strict"] and not complete:
        raise CliFailure(EXIT_INCOMPLETE, "enumeration incomplete under the given bound")


# --- text rendering -------------------------------------------------------


def valuation_text(doc: dict) -> str:
    page = "•" if doc["page"] is None else doc["page"]
    return f"[{page},({','.join(str(x) for x in doc['a'])}),{doc['b']}]"


def _set_payload(vs: ValuationSet) -> dict:
    return {
        "kind": vs.kind,
        "complete": vs.complete,
        "note": vs.note,
        "elements": [valuation_to_json(nu) for nu in vs.elements],
    }


def _set_lines(p: dict) -> list[str]:
    status = "complete" if p["complete"] else "incomplete"
    head = f"{p['kind']} ({status}, {len(p['elements'])} elements)"
    lines = [head + (f": {p['note']}" if p["note"] else "")]
    lines += [f"  {valuation_text(e)}" for e in p["elements"]]
    return lines


def _render_minimal(p: dict) -> list[str]:
    return _set_lines(p["confirmed"]) + _set_lines(p["candidates"])


def _render_singular(p: dict) -> list[str]:
    return [f"{valuation_text(p['valuation'])} singular: {str(p['singular']).lower()}"]


def _render_order(p: dict) -> list[str]:
    rel = {True: "true", False: "false"}.get(p["verdict"], p["verdict"])
    lines = [f"{valuation_text(p['lhs'])} <=_{p['relation']} {valuation_text(p['rhs'])}: {rel}"]
    if p["certificate"] is not None:
        lines.append(f"certificate: {dumps(p['certificate']).strip()}")
    return lines


def _render_trinomial(p: dict) -> list[str]:
    verb = "holds" if p["holds"] else "fails"
    value = str(p["value"]).replace("-", "−")
    return [
        f"{verb}: u − d₁ − d₂ − d₃ = {value}",
        f"u = {p['u']}, d = {p['d']}, d₁ = {p['d1']}, d₂ = {p['d2']}, d₃ = {p['d3']}",
    ]


def _render_witness(p: dict) -> list[str]:
    lines = [
        f"resolution avoiding {valuation_text(p['valuation'])}: {p['classification']}",
        f"pages: {', '.join(p['witness']['pages'])}",
    ]
    if p["witness"]["extra_point"] is not None:
        lines.append(f"extra curve point: {p['witness']['extra_point']}")
    for y, t in sorted(p["witness"]["traces"].items()):
        centers = " ".join("(" + ",".join(map(str, c)) + ")" for c in t["centers"])
        lines.append(f"trace on {y} [{t['branch']}]: {centers or 'none'}")
    for y, f in sorted(p["witness"]["page_fans"].items()):
        lines.append(f"page {y}: {len(f['maximal_cones'])} maximal cones")
        for cone in f["maximal_cones"]:
            lines.append("  <" + " ".join("(" + ",".join(map(str, r)) + ")" for r in cone) + ">")
    lines.append(f"divisorial fan: {len(p['witness']['fan']['divisors'])} p-divisors")
    return lines


# --- commands -------------------------------------------------------------

INPUT = click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@_global_options
@click.pass_context
def cli(ctx: click.Context, bound: int | None, fmt: str | None, strict: bool | None) -> None:
    """Valuations on complexity-one T-varieties given by p-divisors."""
    ctx.obj = {"bound": bound, "fmt": fmt, "strict": strict}


@cli.command()
@INPUT
@_global_options
@click.pass_context
def nash(ctx, input_path, bound, fmt, strict):
    """Nash valuations (equal to the essential ones)."""
    s = _settings(ctx, bound, fmt, strict)
    d = _single(_load(input_path), "nash")
    _genus_zero_guard(d, "the Nash set")
    vs = nash_set(d, s["bound"])
    _emit(_set_payload(vs), s["fmt"], _set_lines)
    _strict_check(s, vs.complete)


@cli.command()
@INPUT
@_global_options
@click.pass_context
def terminal(ctx, input_path, bound, fmt, strict):
    """Terminal valuations, read off compact Newton boundaries."""
    s = _settings(ctx, bound, fmt, strict)
    d = _single(_load(input_path), "terminal")
    _genus_zero_guard(d, "the terminal set")
    vs = terminal_set(d)
    _emit(_set_payload(vs), s["fmt"], _set_lines)
    _strict_check(s, vs.complete)


@cli.command()
@INPUT
@_global_options
@click.pass_context
def minimal(ctx, input_path, bound, fmt, strict):
    """Minimal singular valuations for the pointwise order."""
    s = _settings(ctx, bound, fmt, strict)
    d = _single(_load(input_path), "minimal")
    confirmed, candidates = minimal_valuations(d, s["bound"])
    payload = {"confirmed": _set_payload(confirmed), "candidates": _set_payload(candidates)}
    _emit(payload, s["fmt"], _render_minimal)
    _strict_check(s, confirmed.complete)


@cli.command()
@INPUT
@click.option("--valuation", "valuation", required=True, help="Valuation such as '[y0,(1,0),1]'.")
@_global_options
@click.pass_context
def singular(ctx, input_path, valuation, bound, fmt, strict):
    """Whether the center of a valuation is singular."""
    s = _settings(ctx, bound, fmt, strict)
    obj = _load(input_path)
    nu = _valuation(valuation, obj)
    members = obj.divisors if isinstance(obj, DivisorialFan) else [obj]
    owners = [m for m in members if m.hyp_contains(nu)]
    if not owners:
        raise CliFailure(EXIT_INVALID, f"{nu} is not in the hypercone")
    payload = {"valuation": valuation_to_json(nu), "singular": owners[0].singular_center(nu)}
    _emit(payload, s["fmt"], _render_singular)


@cli.command()
@INPUT
@click.option("--rel", type=click.Choice(["hyper", "pointwise"]), required=True)
@click.option("--lhs", required=True, help="Smaller valuation.")
@click.option("--rhs", required=True, help="Larger valuation.")
@_global_options
@click.pass_context
def order(ctx, input_path, rel, lhs, rhs, bound, fmt, strict):
    """Compare two valuations; prints the verdict and its certificate."""
    s = _settings(ctx, bound, fmt, strict)
    obj = _load(input_path)
    nu, nu2 = _valuation(lhs, obj), _valuation(rhs, obj)
    if rel == "hyper":
        verdict = leq_hyper(nu, nu2, obj)
    else:
        d = _single(obj, "order --rel pointwise")
        exact = d.locus == "complete" and d.curve.genus == 0
        verdict = leq_pointwise_P1(nu, nu2, d) if exact else leq_pointwise_sound(nu, nu2, d)
    payload = {
        "relation": rel,
        "lhs": valuation_to_json(nu),
        "rhs": valuation_to_json(nu2),
        "verdict": verdict.relation,
        "certificate": jsonable(verdict.certificate),
    }
    _emit(payload, s["fmt"], _render_order)


@cli.command()
@INPUT
@click.option("--avoid", required=True, help="Non-minimal singular valuation to keep non-exceptional.")
@_global_options
@click.pass_context
def resolve(ctx, input_path, avoid, bound, fmt, strict):
    """Resolution on which a given valuation is not exceptional."""
    s = _settings(ctx, bound, fmt, strict)
    d = _single(_load(input_path), "resolve")
    nu = _valuation(avoid, d)
    w = certify_non_essential(nu, d)
    payload = {
        "valuation": valuation_to_json(nu),
        "classification": exceptional_classification(nu, w).label,
        "witness": witness_to_json(w),
    }
    _emit(payload, s["fmt"], _render_witness)


def _blocks(text: str) -> TrinomialData:
    try:
        parts = [tuple(int(x) for x in block.split(",")) for block in text.split(";")]
        return TrinomialData(tuple(parts))  # type: ignore[arg-type]
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, f"bad --blocks {text!r}: {exc}") from exc


@cli.command()
@click.option("--blocks", required=True, help='Exponent blocks, e.g. "1,1;2;5".')
@_global_options
@click.pass_context
def trinomial(ctx, blocks, bound, fmt, strict):
    """Nash criterion for a trinomial hypersurface."""
    s = _settings(ctx, bound, fmt, strict)
    data = _blocks(blocks)
    v = trinomial_nash_criterion(data)
    payload: dict[str, Any] = {
        "blocks": [list(b) for b in data.blocks],
        "holds": v.holds,
        "value": v.value,
        "u": v.u,
        "d": v.d,
        "d1": v.d1,
        "d2": v.d2,
        "d3": v.d3,
    }
    _emit(payload, s["fmt"], _render_trinomial)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="cxone", standalone_mode=False)
    except CliFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.code
    except DocumentError as exc:
        for v in exc.violations:
            click.echo(f"schema error: {v}", err=True)
        return EXIT_INVALID
    except (DivisorError, ResolutionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except click.Abort:
        return EXIT_INVALID
    return EXIT_OK


def entry() -> None:
    sys.exit(main())

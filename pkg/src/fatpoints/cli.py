"""Command-line harness.

Three subcommands cover the whole workflow: ``compute`` emits numerical
character tables for a configuration, ``verify`` sweeps containment
claims over an exponent window, and ``goldens`` re-runs a pinned corpus
and byte-compares the reports (timing fields excluded) against the
checked-in files.

Exit codes: 0 success; 1 golden mismatch; 2 invalid run specification;
3 resource limit (some requested results were skipped); 4 internal
inconsistency (a theorem-status claim failed, an implication between
claims was violated, or two computation routes disagreed).
"""

from __future__ import annotations

import json
import re
import sys
import time
from typing import Optional, Sequence

import click

from . import __version__
from .containment import (
    DEFAULT_CELL_SECONDS,
    DEFAULT_WINDOW,
    Verdict,
    Window,
    claim_status,
    implication_checks,
    modular_screen,
    ordered_params,
    run_claims,
)
from .errors import InvalidParams, ResourceLimit
from .invariants import hilbert_profile
from .polyring import Polynomial
from .schemes import config_from_json, load_config, named_config

__all__ = ["main"]

EXIT_OK = 0
EXIT_GOLDEN_MISMATCH = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_INCONSISTENT = 4

TSV_COLUMNS = ("claim_id", "N", "n", "r", "m", "t",
               "holds", "method", "witness_degree", "elapsed_ms")
CHARACTER_TSV_COLUMNS = ("m", "alpha", "tau", "sigma", "reg", "beta",
                         "fat_degree")

_TIMING_KEYS = ("elapsed_ms", "wall_ms")


# -- run specification parsing ----------------------------------------------------


def _parse_range(text: Optional[str], flag: str) -> Optional[tuple[int, ...]]:
    """Parse "a..b" or a single "k" into an inclusive integer tuple."""
    if text is None:
        return None
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InvalidParams(f"{flag} expects 'a..b' or 'k', got {text!r}")
    if lo < 1 or hi < lo:
        raise InvalidParams(f"{flag} range {text!r} must satisfy 1 <= a <= b")
    return tuple(range(lo, hi + 1))


def _make_window(r: Optional[str], m: Optional[str], t: Optional[str]) -> Window:
    return Window(
        r=_parse_range(r, "--r") or DEFAULT_WINDOW.r,
        m=_parse_range(m, "--m") or DEFAULT_WINDOW.m,
        t=_parse_range(t, "--t") or DEFAULT_WINDOW.t,
    )


_NAMED_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*$")


def _parse_named(text: str, seed: Optional[int]):
    """Resolve "star(4,2)"-style names into a configuration."""
    match = _NAMED_RE.match(text)
    if not match:
        raise InvalidParams(f"cannot parse configuration name {text!r}")
    name = match.group(1)
    args = []
    if match.group(2):
        try:
            args = [int(a) for a in match.group(2).split(",")]
        except ValueError:
            raise InvalidParams(f"non-integer argument in {text!r}")
    params: dict = {}
    if name == "star":
        if args:
            params["s"] = args[0]
        if len(args) > 1:
            params["N"] = args[1]
    elif name in ("conic", "collinear"):
        if not args:
            raise InvalidParams(f"{name} needs a point count, e.g. {name}(5)")
        params["n"] = args[0]
    elif name == "generic":
        if not args:
            raise InvalidParams("generic needs a point count, e.g. generic(9)")
        params["n"] = args[0]
        params["seed"] = args[1] if len(args) > 1 else (seed or 0)
    elif args:
        raise InvalidParams(f"{name} takes no arguments")
    return named_config(name, **params)


def _resolve_config(config_path: Optional[str], named: Optional[str],
                    seed: Optional[int]):
    if (config_path is None) == (named is None):
        raise InvalidParams("give exactly one of --config or --named")
    if named is not None:
        return _parse_named(named, seed)
    try:
        return load_config(config_path)
    except FileNotFoundError:
        raise InvalidParams(f"configuration file not found: {config_path}")
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"configuration file is not valid JSON: {exc}")


def _parse_claims(text: Optional[str]) -> Optional[list[str]]:
    if text is None or text.strip().lower() == "all":
        return None
    ids = [part.strip() for part in text.split(",") if part.strip()]
    if not ids:
        raise InvalidParams("--claims given but empty")
    return ids


# -- report assembly ---------------------------------------------------------------


def _witness_json(verdict: Verdict) -> Optional[dict]:
    if verdict.witness is None:
        return None
    if isinstance(verdict.witness, Polynomial):
        return {"degree": verdict.witness.degree, "text": str(verdict.witness)}
    return {"degree": int(verdict.witness), "text": None}


def _verdict_json(verdict: Verdict) -> dict:
    return {
        "claim_id": verdict.claim_id,
        "status": claim_status(verdict.claim_id),
        "params": ordered_params(verdict.params),
        "holds": verdict.holds,
        "method": verdict.method,
        "witness": _witness_json(verdict),
        "generic_sampled": verdict.generic_sampled,
        "elapsed_ms": verdict.elapsed_ms,
        "note": verdict.note,
    }


def _character_entries(config, m_values: Sequence[int],
                       cell_seconds: Optional[float],
                       degree_cap: Optional[int]) -> tuple[list[dict], bool]:
    """Character tables for each scale; returns (entries, hit_resource_limit)."""
    from .ideals import Budget

    entries = []
    limited = False
    for m in m_values:
        caps = {"degree_cap": degree_cap} if degree_cap is not None else {}
        budget = Budget(
            deadline=(time.monotonic() + cell_seconds) if cell_seconds else None,
            **caps,
        )
        try:
            prof = hilbert_profile(config, m, budget)
        except ResourceLimit as exc:
            if exc.kind == "internal":
                raise
            entries.append({"m": m, "note": f"resource limit: {exc}"})
            limited = True
            continue
        entries.append({
            "m": m,
            "alpha": prof.alpha,
            "tau": prof.tau,
            "sigma": prof.sigma,
            "reg": prof.reg,
            "beta": prof.beta,
            "fat_degree": prof.fat_degree,
            "hf": {str(t): prof.hf[t] for t in sorted(prof.hf)},
        })
    return entries, limited


def _totals(verdicts: Sequence[Verdict], n_characters: int, t0: float) -> dict:
    return {
        "cells": len(verdicts),
        "true": sum(1 for v in verdicts if v.holds is True),
        "false": sum(1 for v in verdicts if v.holds is False),
        "skipped": sum(1 for v in verdicts if v.holds is None),
        "characters": n_characters,
        "wall_ms": int((time.monotonic() - t0) * 1000),
    }


def _report(config, characters: list[dict], verdicts: Sequence[Verdict],
            implications: list[dict], t0: float) -> dict:
    from .schemes import config_to_json

    config_json = config_to_json(config)
    return {
        "version": __version__,
        "field": config_json["field"],
        "config": config_json,
        "characters": characters,
        "verdicts": [_verdict_json(v) for v in verdicts],
        "implications": implications,
        "totals": _totals(verdicts, len(characters), t0),
    }


def _canonical_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _strip_timing(node):
    """A deep copy of the report with timing fields removed."""
    if isinstance(node, dict):
        return {k: _strip_timing(v) for k, v in node.items()
                if k not in _TIMING_KEYS}
    if isinstance(node, list):
        return [_strip_timing(v) for v in node]
    return node


def _tsv_cell(value) -> str:
    if value is None:
        return ""
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _verdicts_tsv(verdicts: Sequence[Verdict]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for v in verdicts:
        row = {
            "claim_id": v.claim_id,
            "N": v.params.get("N"),
            "n": v.params.get("n"),
            "r": v.params.get("r"),
            "m": v.params.get("m"),
            "t": v.params.get("t"),
            "holds": v.holds,
            "method": v.method,
            "witness_degree": v.witness_degree(),
            "elapsed_ms": v.elapsed_ms,
        }
        lines.append("\t".join(_tsv_cell(row[c]) for c in TSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _characters_tsv(characters: Sequence[dict]) -> str:
    lines = ["\t".join(CHARACTER_TSV_COLUMNS)]
    for entry in characters:
        lines.append("\t".join(
            _tsv_cell(entry.get(c)) for c in CHARACTER_TSV_COLUMNS
        ))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


# -- commands ---------------------------------------------------------------------


def _config_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(),
                      help="Path to a JSON configuration.")(fn)
    fn = click.option("--named", help='Named configuration, e.g. "star(4,2)".')(fn)
    fn = click.option("--seed", type=int, default=None,
                      help="Seed for sampled configurations.")(fn)
    return fn


def _budget_options(fn):
    fn = click.option("--budget-degree", type=int, default=None,
                      help="Degree cap per cell.")(fn)
    fn = click.option("--budget-pairs", type=int, default=None,
                      help="S-pair cap per cell.")(fn)
    fn = click.option("--timeout-cell", type=float, default=DEFAULT_CELL_SECONDS,
                      show_default=True, help="Seconds allowed per cell "
                      "(0 disables the deadline).")(fn)
    return fn


def _output_options(fn):
    fn = click.option("--out", type=click.Path(), default=None,
                      help="Write the report here instead of stdout.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "tsv"]),
                      default="json", show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="fatpoints")
def main():
    """Exact computations with ideals of fat points in projective space."""


@main.command("compute")
@_config_options
@click.option("--m", "m_range", default=None,
              help='Scales of the symbolic power, range "a..b".')
@_budget_options
@_output_options
def cmd_compute(config_path, named, seed, m_range, budget_degree, budget_pairs,
                timeout_cell, out, fmt):
    """Numerical characters (alpha, Hilbert function, tau, reg, beta)."""
    t0 = time.monotonic()
    try:
        config = _resolve_config(config_path, named, seed)
        m_values = _parse_range(m_range, "--m") or DEFAULT_WINDOW.m
        cell_seconds = timeout_cell if timeout_cell else None
        characters, limited = _character_entries(
            config, m_values, cell_seconds, budget_degree
        )
    except InvalidParams as exc:
        _fail(str(exc), EXIT_INVALID)
    except ResourceLimit as exc:
        _fail(str(exc), EXIT_INCONSISTENT if exc.kind == "internal"
              else EXIT_RESOURCE)
    report = _report(config, characters, [], [], t0)
    if fmt == "tsv":
        _emit(_characters_tsv(characters), out)
    else:
        _emit(_canonical_json(report), out)
    sys.exit(EXIT_RESOURCE if limited else EXIT_OK)


@main.command("verify")
@_config_options
@click.option("--claims", default=None,
              help='Comma-separated claim ids, or "all".')
@click.option("--r", "r_range", default=None, help='Ordinary exponents "a..b".')
@click.option("--m", "m_range", default=None, help='Symbolic scales "a..b".')
@click.option("--t", "t_range", default=None, help='Power exponents "a..b".')
@_budget_options
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads for independent cells.")
@_output_options
def cmd_verify(config_path, named, seed, claims, r_range, m_range, t_range,
               budget_degree, budget_pairs, timeout_cell, jobs, out, fmt):
    """Sweep containment and character claims over an exponent window.

    A falsified conjecture is a reported result, not a failure; a
    falsified theorem or a violated implication exits with code 4.
    """
    t0 = time.monotonic()
    try:
        config = _resolve_config(config_path, named, seed)
        claim_ids = _parse_claims(claims)
        window = _make_window(r_range, m_range, t_range)
        cell_seconds = timeout_cell if timeout_cell else None
        run_kwargs = dict(
            cell_seconds=cell_seconds,
            degree_cap=budget_degree,
            pair_cap=budget_pairs,
            jobs=jobs,
        )
        screen: list[Verdict] = []
        if config.sampled:
            screen = modular_screen(config, claim_ids, window, **run_kwargs)
        verdicts = run_claims(config, claim_ids, window, **run_kwargs)
        characters, limited = _character_entries(
            config, window.m, cell_seconds, budget_degree
        )
        implications = implication_checks(verdicts)
    except InvalidParams as exc:
        _fail(str(exc), EXIT_INVALID)
    except ResourceLimit as exc:
        _fail(str(exc), EXIT_INCONSISTENT if exc.kind == "internal"
              else EXIT_RESOURCE)
    merged = sorted(verdicts + screen, key=Verdict.sort_key)
    report = _report(config, characters, merged, implications, t0)
    if fmt == "tsv":
        _emit(_verdicts_tsv(merged), out)
    else:
        _emit(_canonical_json(report), out)
    failed_theorems = [
        v for v in verdicts
        if v.holds is False and claim_status(v.claim_id) == "theorem"
    ]
    violated = [c for c in implications if not c["ok"]]
    if failed_theorems or violated:
        for v in failed_theorems:
            click.echo(f"inconsistent: theorem {v.claim_id} fails at "
                       f"{ordered_params(v.params)}", err=True)
        for c in violated:
            click.echo(f"inconsistent: implication {c['rule']} violated at "
                       f"{c['antecedent']}", err=True)
        sys.exit(EXIT_INCONSISTENT)
    if limited or any(v.holds is None for v in merged):
        sys.exit(EXIT_RESOURCE)
    sys.exit(EXIT_OK)


# -- goldens ----------------------------------------------------------------------


def _golden_report(entry: dict, jobs: int) -> dict:
    """Re-run one manifest entry and return its report (timing included)."""
    t0 = time.monotonic()
    config = config_from_json(entry["config"])
    window = Window(
        r=tuple(entry["window"]["r"]),
        m=tuple(entry["window"]["m"]),
        t=tuple(entry["window"]["t"]),
    )
    cell_seconds = entry.get("cell_seconds", DEFAULT_CELL_SECONDS)
    claim_ids = entry.get("claims")
    if entry.get("command", "verify") == "compute":
        characters, _ = _character_entries(config, window.m, cell_seconds, None)
        return _report(config, characters, [], [], t0)
    run_kwargs = dict(cell_seconds=cell_seconds, jobs=jobs)
    screen: list[Verdict] = []
    if config.sampled:
        screen = modular_screen(config, claim_ids, window, **run_kwargs)
    verdicts = run_claims(config, claim_ids, window, **run_kwargs)
    characters, _ = _character_entries(config, window.m, cell_seconds, None)
    implications = implication_checks(verdicts)
    merged = sorted(verdicts + screen, key=Verdict.sort_key)
    return _report(config, characters, merged, implications, t0)


def _json_paths_diff(expected, actual, path="$", out=None, limit=25) -> list[str]:
    """Paths at which two JSON trees differ, with both values."""
    if out is None:
        out = []
    if len(out) >= limit:
        return out
    if type(expected) is not type(actual):
        out.append(f"{path}: expected {expected!r}, got {actual!r}")
        return out
    if isinstance(expected, dict):
        for key in expected.keys() | actual.keys():
            if key not in actual:
                out.append(f"{path}.{key}: missing from regenerated report")
            elif key not in expected:
                out.append(f"{path}.{key}: not in golden")
            else:
                _json_paths_diff(expected[key], actual[key],
                                 f"{path}.{key}", out, limit)
            if len(out) >= limit:
                return out
    elif isinstance(expected, list):
        if len(expected) != len(actual):
            out.append(f"{path}: length {len(expected)} != {len(actual)}")
        for i, (e, a) in enumerate(zip(expected, actual)):
            _json_paths_diff(e, a, f"{path}[{i}]", out, limit)
            if len(out) >= limit:
                return out
    elif expected != actual:
        out.append(f"{path}: expected {expected!r}, got {actual!r}")
    return out


@main.command("goldens")
@click.argument("directory", type=click.Path(), default="goldens")
@click.option("--write", is_flag=True,
              help="Regenerate the golden files instead of checking them.")
@click.option("--jobs", type=int, default=1, show_default=True)
def cmd_goldens(directory, write, jobs):
    """Re-run the pinned corpus and byte-compare reports, timing aside."""
    manifest_path = f"{directory}/manifest.json"
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        _fail(f"no manifest at {manifest_path}", EXIT_INVALID)
    except json.JSONDecodeError as exc:
        _fail(f"manifest is not valid JSON: {exc}", EXIT_INVALID)
    mismatches = 0
    for entry in manifest["entries"]:
        name = entry["name"]
        golden_path = f"{directory}/{name}.json"
        try:
            report = _golden_report(entry, jobs)
        except (InvalidParams, ResourceLimit) as exc:
            _fail(f"{name}: {exc}", EXIT_INVALID)
        canonical = _canonical_json(_strip_timing(report))
        if write:
            with open(golden_path, "w", encoding="utf-8") as fh:
                fh.write(canonical)
            click.echo(f"wrote {golden_path}")
            continue
        try:
            with open(golden_path, "r", encoding="utf-8") as fh:
                stored = fh.read()
        except FileNotFoundError:
            click.echo(f"FAIL {name}: missing golden {golden_path}")
            mismatches += 1
            continue
        if stored == canonical:
            click.echo(f"ok {name}")
            continue
        mismatches += 1
        click.echo(f"FAIL {name}: report differs from {golden_path}")
        for line in _json_paths_diff(json.loads(stored), json.loads(canonical)):
            click.echo(f"  {line}")
    if write:
        sys.exit(EXIT_OK)
    if mismatches:
        click.echo(f"{mismatches} golden(s) out of date")
        sys.exit(EXIT_GOLDEN_MISMATCH)
    click.echo("all goldens match")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()

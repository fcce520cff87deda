"""Command-line interface: emit volumes, run checks, manage the cache.

Commands: volume, super-volume, limit-check, verify, oracle-f, table.
Exit codes: 0 success, 1 a verification check failed, 2 usage error
(bad flags, unstable or otherwise invalid input).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import cache
from .kernels import Flavor
from .qseries import (
    DEFAULT_TREND_RS,
    PrecisionError,
    kernel_limit_trend,
    oracle_compare,
    verify_to_budget,
)
from .render import (
    canonical_json,
    parse_super_doc,
    parse_volume_doc,
    poly_latex,
    poly_text,
    series_latex,
    series_text,
    super_doc,
    volume_doc,
)
from .rings import rat_parse, rat_str
from .supervolumes import super_limit, super_volume
from .volumes import UnstableInputError, classical_limit, volume

_CLASSICAL = ("q", "wp")
_SUPER = ("qsuper", "wpsuper")

_TREND_POINTS = {
    Flavor.Q_CLASSICAL: ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)), (Fraction(2), Fraction(1))),
    Flavor.Q_SUPER: ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)), (Fraction(3), Fraction(2))),
}


class UsageError(Exception):
    """Bad input that argparse could not catch on its own."""


@dataclass(frozen=True)
class Config:
    """Resolved run options shared by the command handlers."""

    q_samples: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2))
    k_range: tuple[int, int] = (-4, 6)
    budget: Fraction = Fraction(1, 10**30)
    precision: int = 60
    cache_dir: Path | None = None
    fmt: str = "text"

    def __post_init__(self):
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        if self.precision < 30:
            raise UsageError("precision must be at least 30 digits")
        if self.k_range[0] > self.k_range[1]:
            raise UsageError("empty k range")
        for q in self.q_samples:
            if not (0 < q < 1):
                raise UsageError("each q must lie in (0, 1)")


def _parse_rat(text: str) -> Fraction:
    try:
        return rat_parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r} ({exc})")


def _parse_k_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        k = int(text)
        return k, k
    except ValueError:
        raise UsageError(f"bad k range {text!r}; expected an integer or a..b")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- cached document production ----------------------------------------------

def _volume_document(flavor: Flavor, g: int, n: int, cache_dir: Path | None):
    key = f"volume_{flavor.value}_g{g}_n{n}"
    if cache_dir is not None:
        payload = cache.load(cache_dir, key)
        if payload is not None:
            try:
                pf, pg, pn, poly = parse_volume_doc(payload)
                if (pf, pg, pn) == (flavor, g, n):
                    return payload, poly
            except (KeyError, ValueError, TypeError):
                pass
    poly = volume(flavor, g, n)
    payload = volume_doc(flavor, g, n, poly)
    if cache_dir is not None:
        cache.store(cache_dir, key, payload)
    return payload, poly


def _super_document(flavor: Flavor, g: int, n: int, m_max: int, cache_dir: Path | None):
    key = f"super_{flavor.value}_g{g}_n{n}_m{m_max}"
    if cache_dir is not None:
        payload = cache.load(cache_dir, key)
        if payload is not None:
            try:
                series = parse_super_doc(payload)
                if (series.flavor, series.g, series.n, series.m_max) == (flavor, g, n, m_max):
                    return payload, series
            except (KeyError, ValueError, TypeError):
                pass
    series = super_volume(flavor, g, n, m_max)
    payload = super_doc(series)
    if cache_dir is not None:
        cache.store(cache_dir, key, payload)
    return payload, series


# -- command handlers ----------------------------------------------------------

def _cmd_volume(args, cfg: Config) -> int:
    flavor = Flavor(args.flavor)
    try:
        payload, poly = _volume_document(flavor, args.g, args.n, cfg.cache_dir)
    except (UnstableInputError, ValueError) as exc:
        raise UsageError(str(exc))
    if cfg.fmt == "json":
        _emit(canonical_json(payload))
    elif cfg.fmt == "latex":
        _emit(poly_latex(poly))
    else:
        _emit(poly_text(poly))
    return 0


def _cmd_super_volume(args, cfg: Config) -> int:
    flavor = Flavor(args.flavor)
    try:
        payload, series = _super_document(flavor, args.g, args.n, args.m_max, cfg.cache_dir)
    except ValueError as exc:
        raise UsageError(str(exc))
    if cfg.fmt == "json":
        _emit(canonical_json(payload))
    elif cfg.fmt == "latex":
        _emit(series_latex(series))
    else:
        _emit(series_text(series))
    return 0


def _cmd_limit_check(args, cfg: Config) -> int:
    g, n = args.g, args.n
    try:
        if args.m_max is None:
            q_side = volume(Flavor.Q_CLASSICAL, g, n)
            wp_side = volume(Flavor.WP_CLASSICAL, g, n)
            lim = classical_limit(q_side)
            passed = lim == wp_side
            obj = {
                "mode": "classical",
                "g": g,
                "n": n,
                "passed": passed,
                "q_doc": volume_doc(Flavor.Q_CLASSICAL, g, n, q_side),
                "limit_doc": volume_doc(Flavor.WP_CLASSICAL, g, n, lim),
                "wp_doc": volume_doc(Flavor.WP_CLASSICAL, g, n, wp_side),
            }
            render = poly_latex if cfg.fmt == "latex" else poly_text
            lines = [
                f"q      g={g} n={n}: {render(q_side)}",
                f"limit  g={g} n={n}: {render(lim)}",
                f"wp     g={g} n={n}: {render(wp_side)}",
            ]
        else:
            q_side = super_volume(Flavor.Q_SUPER, g, n, args.m_max)
            wp_side = super_volume(Flavor.WP_SUPER, g, n, args.m_max)
            lim = super_limit(q_side)
            passed = lim == wp_side
            obj = {
                "mode": "super",
                "g": g,
                "n": n,
                "m_max": args.m_max,
                "passed": passed,
                "q_doc": super_doc(q_side),
                "limit_doc": super_doc(lim),
                "wp_doc": super_doc(wp_side),
            }
            render = series_latex if cfg.fmt == "latex" else series_text
            lines = [
                f"q      g={g} n={n}: {render(q_side)}",
                f"limit  g={g} n={n}: {render(lim)}",
                f"wp     g={g} n={n}: {render(wp_side)}",
            ]
    except (UnstableInputError, ValueError) as exc:
        raise UsageError(str(exc))
    if cfg.fmt == "json":
        _emit(canonical_json(obj))
    else:
        lines.append(f"limit-check g={g} n={n}: {'PASS' if passed else 'FAIL'}")
        _emit("\n".join(lines))
    return 0 if passed else 1


def _cmd_verify(args, cfg: Config) -> int:
    lo, hi = cfg.k_range
    identities = []
    all_passed = True
    for kind in ("even", "odd"):
        for q in cfg.q_samples:
            for k in range(lo, hi + 1):
                try:
                    report = verify_to_budget(kind, k, q, cfg.budget)
                except PrecisionError as exc:
                    raise UsageError(f"{kind} k={k} q={rat_str(q)}: {exc}")
                identities.append(report)
                all_passed = all_passed and report.passed
    trends = []
    for flavor, points in _TREND_POINTS.items():
        for x, y in points:
            rep = kernel_limit_trend(x, y, DEFAULT_TREND_RS, flavor, cfg.precision)
            trends.append(rep)
            all_passed = all_passed and rep.strictly_decreasing
    if cfg.fmt == "json":
        _emit(
            canonical_json(
                {
                    "identities": [r.to_json_obj() for r in identities],
                    "trend": [r.to_json_obj() for r in trends],
                    "all_passed": all_passed,
                }
            )
        )
    else:
        lines = []
        for r in identities:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{r.kind:<4} k={r.k:3d} q={rat_str(r.q)}: {status} (n_terms={r.n_terms})"
            )
        for r in trends:
            status = "PASS" if r.strictly_decreasing else "FAIL"
            lines.append(
                f"trend {r.flavor.value} x={rat_str(r.x)} y={rat_str(r.y)}: {status} "
                f"(smallest discrepancy {r.discrepancies[-1]})"
            )
        lines.append(f"verify: {'all passed' if all_passed else 'FAILURES PRESENT'}")
        _emit("\n".join(lines))
    return 0 if all_passed else 1


def _cmd_oracle_f(args, cfg: Config) -> int:
    flavor = Flavor(args.flavor)
    y = _parse_rat(args.y)
    r = _parse_rat(args.r)
    try:
        rep = oracle_compare(flavor, args.k, y, r, args.n_terms, args.zeta_terms)
    except ValueError as exc:
        raise UsageError(str(exc))
    if cfg.fmt == "json":
        _emit(canonical_json(rep.to_json_obj()))
    else:
        status = "PASS" if rep.passed else "FAIL"
        _emit(
            f"oracle-f {flavor.value} k={rep.k} y={rat_str(rep.y)} r={rat_str(rep.r)}: "
            f"{status} (discrepancy {float(rep.discrepancy):.3e} <= budget {float(rep.budget):.3e})"
        )
    return 0 if rep.passed else 1


def _classical_table_targets(max_level: int):
    for level in range(1, max_level + 1):
        g = 0
        while 2 * g - 2 <= level - 1:
            n = level + 2 - 2 * g
            if n >= 1 and not (g == 0 and n < 3):
                yield g, n
            g += 1


def _super_table_targets(max_level: int):
    for base in range(-1, max_level + 1):
        g = 0
        while 2 * g - 2 <= base:
            n = base + 2 - 2 * g
            if n >= 1:
                yield g, n, max_level - base
            g += 1


def _cmd_table(args, cfg: Config) -> int:
    if args.max_level < 1:
        raise UsageError("max-level must be at least 1")
    flavor = Flavor(args.flavor)
    docs = []
    lines = []
    if flavor.is_super:
        for g, n, m_max in _super_table_targets(args.max_level):
            payload, series = _super_document(flavor, g, n, m_max, cfg.cache_dir)
            if all(p.is_zero() for p in series.parts.values()):
                continue
            docs.append(payload)
            if cfg.fmt == "latex":
                lines.append(rf"\hat V_{{{g},{n}}} = {series_latex(series)}")
            else:
                lines.append(f"g={g} n={n} (m <= {m_max}): {series_text(series)}")
    else:
        for g, n in _classical_table_targets(args.max_level):
            payload, poly = _volume_document(flavor, g, n, cfg.cache_dir)
            docs.append(payload)
            if cfg.fmt == "latex":
                lines.append(rf"V_{{{g},{n}}} = {poly_latex(poly)}")
            else:
                lines.append(f"g={g} n={n}: {poly_text(poly)}")
    if cfg.fmt == "json":
        _emit(canonical_json(docs))
    else:
        _emit("\n".join(lines))
    return 0


# -- parser ---------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwp", description="q-deformed volume polynomials: computation and checks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "latex", "text"), default="text")
        p.add_argument("--cache-dir", default=None)

    p = sub.add_parser("volume", help="one volume polynomial")
    p.add_argument("--flavor", choices=_CLASSICAL, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_volume)

    p = sub.add_parser("super-volume", help="one super volume series")
    p.add_argument("--flavor", choices=_SUPER, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_super_volume)

    p = sub.add_parser("limit-check", help="compare a computed limit with its target")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-max", type=int, default=None, help="switch to the super engines")
    add_common(p)
    p.set_defaults(handler=_cmd_limit_check)

    p = sub.add_parser("verify", help="identity and kernel-trend verification")
    p.add_argument("--k", default="-4..6", help="integer or a..b range")
    p.add_argument("--q", action="append", default=None, help="repeatable; rationals in (0,1)")
    p.add_argument("--budget", default="1e-30")
    p.add_argument("--precision", type=int, default=60)
    add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("oracle-f", help="independent series oracle vs the built polynomial")
    p.add_argument("--flavor", choices=("q", "qsuper"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--n-terms", type=int, default=32)
    p.add_argument("--zeta-terms", type=int, default=96)
    add_common(p)
    p.set_defaults(handler=_cmd_oracle_f)

    p = sub.add_parser("table", help="every target up to a level bound")
    p.add_argument("--flavor", choices=_CLASSICAL + _SUPER, required=True)
    p.add_argument("--max-level", type=int, required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_table)

    return parser


def _merge_minus_values(argv: list[str]) -> list[str]:
    """Let flags accept values with a leading minus ("--k -4..6")."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--k", "--y") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(_merge_minus_values(argv))
    try:
        cfg = Config(
            q_samples=tuple(_parse_rat(s) for s in (args.q if getattr(args, "q", None) else ("1/4", "1/2"))),
            k_range=_parse_k_range(args.k) if hasattr(args, "k") and args.command == "verify" else (-4, 6),
            budget=_parse_rat(args.budget) if hasattr(args, "budget") else Fraction(1, 10**30),
            precision=getattr(args, "precision", 60),
            cache_dir=cache.resolve_cache_dir(getattr(args, "cache_dir", None)),
            fmt=args.format,
        )
        return args.handler(args, cfg)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Document wrappers plus JSON, plain-text, and LaTeX emission.

JSON documents carry terms in ascending lexicographic exponent order
(the byte-stable machine format); text and LaTeX print terms the way a
polynomial is usually displayed, highest total degree first with ties
broken lexicographically, which is still a deterministic ordering.
Zero parts of a series (in particular every odd part) are omitted from
all outputs; the m_max field lets a parser reconstruct them.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .kernels import Flavor
from .rings import GenFamily, RingElem, rat_str
from .supervolumes import SuperSeries
from .volumes import VolumePoly


def canonical_json(obj) -> str:
    """The one serialization used everywhere: keys sorted, stable bytes."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- document wrappers ---------------------------------------------------

def volume_doc(flavor: Flavor, g: int, n: int, poly: VolumePoly) -> dict:
    if poly.family is not flavor.family:
        raise ValueError("polynomial family does not match the flavor")
    return {"flavor": flavor.value, "g": g, "n": n, "terms": poly.terms_json()}


def parse_volume_doc(obj: dict) -> tuple[Flavor, int, int, VolumePoly]:
    flavor = Flavor(obj["flavor"])
    g, n = int(obj["g"]), int(obj["n"])
    poly = VolumePoly.from_terms_json(flavor.family, n, obj["terms"])
    return flavor, g, n, poly


def super_doc(series: SuperSeries) -> dict:
    parts = [
        {"m": m, "part": volume_doc(series.flavor, series.g, series.n, p)}
        for m, p in sorted(series.parts.items())
        if not p.is_zero()
    ]
    return {
        "flavor": series.flavor.value,
        "g": series.g,
        "n": series.n,
        "m_max": series.m_max,
        "parts": parts,
    }


def parse_super_doc(obj: dict) -> SuperSeries:
    flavor = Flavor(obj["flavor"])
    g, n, m_max = int(obj["g"]), int(obj["n"]), int(obj["m_max"])
    parts = {m: VolumePoly.zero(flavor.family, n) for m in range(m_max + 1)}
    for entry in obj["parts"]:
        m = int(entry["m"])
        pf, pg, pn, poly = parse_volume_doc(entry["part"])
        if pf is not flavor or pg != g or pn != n:
            raise ValueError("series part does not match its header")
        parts[m] = poly
    return SuperSeries(flavor, g, n, m_max, parts)


# -- shared display helpers ------------------------------------------------

def _display_terms(poly: VolumePoly) -> list:
    return sorted(poly.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _const_value(elem: RingElem) -> Fraction | None:
    """The rational value if elem is a constant, else None."""
    if not elem.terms:
        return Fraction(0)
    if len(elem.terms) == 1 and () in elem.terms:
        return elem.terms[()]
    return None


# -- plain text -------------------------------------------------------------

def poly_text(poly: VolumePoly) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for exps, coeff in _display_terms(poly):
        mono = "*".join(f"L{i + 1}^{2 * e}" for i, e in enumerate(exps) if e)
        if not mono:
            parts.append(coeff.text())
            continue
        c = _const_value(coeff)
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        elif len(coeff.terms) == 1:
            parts.append(f"{coeff.text()}*{mono}")
        else:
            parts.append(f"({coeff.text()})*{mono}")
    return _join_signed(parts)


def series_text(series: SuperSeries) -> str:
    chunks = []
    for m, p in sorted(series.parts.items()):
        if p.is_zero():
            continue
        body = poly_text(p)
        if m == 0:
            chunks.append(body)
        elif len(p.terms) > 1:
            chunks.append(f"s^{m}/{m}! * ({body})")
        else:
            chunks.append(f"s^{m}/{m}! * {body}")
    return _join_signed(chunks) if chunks else "0"


# -- LaTeX -------------------------------------------------------------------

def rational_latex(c: Fraction) -> str:
    sign = "-" if c < 0 else ""
    c = abs(c)
    if c.denominator == 1:
        return sign + str(c.numerator)
    return sign + rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def _gen_latex(family: GenFamily, k: int, e: int) -> str:
    if family is GenFamily.PI_SQ:
        return rf"\pi^{{{2 * e}}}"
    base = rf"\zeta_q({2 * k})" if family is GenFamily.Q_ZETA else rf"\zeta_q^{{\mathrm{{odd}}}}({2 * k})"
    return base + (rf"^{{{e}}}" if e > 1 else "")


def ring_latex(elem: RingElem) -> str:
    if not elem.terms:
        return "0"
    parts = []
    for mono, coeff in elem.sorted_terms():
        factors = [_gen_latex(elem.family, k, e) for k, e in mono]
        if not factors:
            parts.append(rational_latex(coeff))
        elif coeff == 1:
            parts.append(r"\,".join(factors))
        elif coeff == -1:
            parts.append("-" + r"\,".join(factors))
        else:
            parts.append(r"\,".join([rational_latex(coeff)] + factors))
    return _join_signed(parts)


def poly_latex(poly: VolumePoly) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for exps, coeff in _display_terms(poly):
        mono = r"\,".join(f"L_{{{i + 1}}}^{{{2 * e}}}" for i, e in enumerate(exps) if e)
        if not mono:
            body = ring_latex(coeff)
            parts.append(rf"\left({body}\right)" if len(coeff.terms) > 1 else body)
            continue
        c = _const_value(coeff)
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        elif len(coeff.terms) == 1:
            parts.append(ring_latex(coeff) + r"\," + mono)
        else:
            parts.append(rf"\left({ring_latex(coeff)}\right)" + mono)
    return _join_signed(parts)


def series_latex(series: SuperSeries) -> str:
    chunks = []
    for m, p in sorted(series.parts.items()):
        if p.is_zero():
            continue
        body = poly_latex(p)
        if m == 0:
            chunks.append(rf"\left({body}\right)" if len(p.terms) > 1 else body)
        else:
            chunks.append(rf"\frac{{s^{{{m}}}}}{{{m}!}}\left({body}\right)")
    return _join_signed(chunks) if chunks else "0"

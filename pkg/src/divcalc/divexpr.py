"""Divisor expressions: "6H-2G1-2G2", "3E+2E1", "-2K".

A tiny signed linear-combination grammar over identifiers. "K" always
resolves to the surface's canonical class; every other identifier must be
a basis label of the chosen model. The literal "0" is the zero class.
Whitespace is ignored everywhere, an optional "*" may separate the
coefficient from the label.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ExprSyntaxError, LabelError
from .lattice import DivClass, LatticeModel

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?([A-Za-z][A-Za-z0-9]*)")


@dataclass(frozen=True)
class DivExpr:
    source: str
    terms: tuple[tuple[int, str], ...]

    def coefficient_map(self):
        out = {}
        for c, lab in self.terms:
            out[lab] = out.get(lab, 0) + c
        return out


def parse_divexpr(s: str) -> DivExpr:
    if not s or not s.strip():
        raise ExprSyntaxError("empty divisor expression")
    text = s
    if text.strip() == "0":
        return DivExpr(s, ())
    pos = 0
    terms = []
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ExprSyntaxError(
                f"cannot parse divisor expression at position {pos}: "
                f"{text[pos:]!r}",
                position=pos,
            )
        sign, num, label = m.groups()
        if sign is None and not first:
            raise ExprSyntaxError(
                f"missing +/- before term at position {m.start(3)}",
                position=m.start(3),
            )
        coeff = int(num) if num is not None else 1
        if sign == "-":
            coeff = -coeff
        terms.append((coeff, label))
        pos = m.end()
        first = False
    if not terms:
        raise ExprSyntaxError("no terms in divisor expression")
    return DivExpr(s, tuple(terms))


def resolve(expr: DivExpr | str, surface_or_model) -> DivClass:
    """Turn an expression into coordinates against a surface's basis."""
    if isinstance(expr, str):
        expr = parse_divexpr(expr)
    model: LatticeModel = getattr(surface_or_model, "model", surface_or_model)
    coords = [0] * model.rank
    for coeff, label in expr.terms:
        if label == "K":
            for i, v in enumerate(model.canonical):
                coords[i] += coeff * v
            continue
        if label not in model.labels:
            raise LabelError(
                f"unknown label {label!r} on {model.name} "
                f"(has {', '.join(model.labels)} and K)"
            )
        coords[model.labels.index(label)] += coeff
    return model.klass(coords)


def render(klass_or_coords, model: LatticeModel | None = None) -> str:
    """Inverse of resolve for plain coordinates: coefficients against the
    basis labels, zero terms skipped, the zero class printed as "0"."""
    if isinstance(klass_or_coords, DivClass):
        coords = klass_or_coords.coords
        model = klass_or_coords.model
    else:
        coords = tuple(klass_or_coords)
        if model is None:
            raise LabelError("render needs a model for raw coordinates")
    parts = []
    for c, lab in zip(coords, model.labels):
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        parts.append(f"{sign}{'' if mag == 1 else mag}{lab}")
    return "".join(parts) if parts else "0"

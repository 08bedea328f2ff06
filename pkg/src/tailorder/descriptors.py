"""Serializable copula descriptors: JSON schema, shorthand grammar, builders.

A descriptor is a JSON object with a ``family`` tag and a ``params``
object; combinators nest child descriptors under ``left``/``right``/
``inner``/``outer``.  Tail dependence functions and diagonals enter as
named built-ins with parameters (arbitrary user code is not accepted over
the file interface).  The exact field names are documented in
``descriptor_schema.json`` at the repository root.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import core, families, taildep
from .core import Copula, CopulaError
from .families import DiagonalSection, Generator
from .taildep import SimplexTDF, TailDepFunction

__all__ = [
    "DescriptorError",
    "generator_from_spec",
    "diagonal_from_spec",
    "tdf_from_spec",
    "simplex_section_from_name",
    "tdf_from_name",
    "build_copula",
    "parse_shorthand",
    "load_descriptor",
    "descriptor_to_json",
    "descriptor_from_json",
    "analytic_tdf_of",
]


class DescriptorError(CopulaError, ValueError):
    """A descriptor is malformed or references an unknown family or fixture."""


def _require(cond: bool, message: str):
    if not cond:
        raise DescriptorError(message)


def _param(params: dict, key: str, kind=float):
    _require(key in params, f"missing parameter {key!r}")
    try:
        return kind(params[key])
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"parameter {key!r} must be a {kind.__name__}") from exc


def generator_from_spec(spec: dict) -> Generator:
    """Build a named Archimedean generator from {"name": ..., <params>}."""
    _require(isinstance(spec, dict), "generator spec must be an object")
    name = spec.get("name")
    try:
        if name == "clayton":
            return families.clayton_generator(_param(spec, "theta"))
        if name == "gumbel":
            return families.gumbel_generator(_param(spec, "theta"))
        if name == "joe":
            return families.joe_generator(_param(spec, "theta"))
        if name == "nonstrict-linear":
            return families.nonstrict_linear_generator()
    except core.DomainError as exc:
        raise DescriptorError(str(exc)) from exc
    raise DescriptorError(f"unknown generator {name!r}")


def diagonal_from_spec(spec: dict) -> DiagonalSection:
    """Build a named diagonal section from {"name": ..., <params>}."""
    _require(isinstance(spec, dict), "diagonal spec must be an object")
    name = spec.get("name")
    try:
        if name == "power":
            return families.power_diagonal(_param(spec, "p"))
    except core.DomainError as exc:
        raise DescriptorError(str(exc)) from exc
    raise DescriptorError(f"unknown diagonal {name!r}")


def simplex_section_from_name(name: str) -> SimplexTDF:
    """Named unit-simplex sections used by the lifted fixtures."""
    table = {
        "zero": SimplexTDF(lambda t: np.zeros_like(np.asarray(t, dtype=float)), name="zero"),
        "min": taildep.min_section(),
        "fig1-parabola": taildep.parabola_section(),
        "fig1-piecewise": taildep.capped_slope_section(),
    }
    if name not in table:
        raise DescriptorError(f"unknown simplex section {name!r}")
    return table[name]


def tdf_from_name(name: str, dimension: int = 2) -> TailDepFunction:
    """Resolve a tail dependence fixture name: zero, min, clayton:alpha, fig1-*."""
    if name == "zero":
        return taildep.zero_tdf(dimension)
    if name == "min":
        return taildep.min_tdf(dimension)
    if name.startswith("clayton:"):
        try:
            alpha = float(name.split(":", 1)[1])
        except ValueError as exc:
            raise DescriptorError(f"bad clayton tail dependence fixture {name!r}") from exc
        return taildep.archimedean_tdf(alpha, dimension)
    if name in ("fig1-parabola", "fig1-piecewise"):
        _require(dimension == 2, f"{name} is a bivariate fixture")
        return taildep.lift(simplex_section_from_name(name))
    raise DescriptorError(f"unknown tail dependence fixture {name!r}")


def tdf_from_spec(spec: dict, dimension: int = 2) -> TailDepFunction:
    """Build a tail dependence function from {"name": ..., <params>}."""
    _require(isinstance(spec, dict), "tail dependence spec must be an object")
    name = spec.get("name")
    _require(isinstance(name, str), "tail dependence spec needs a 'name'")
    if name == "clayton":
        return taildep.archimedean_tdf(_param(spec, "alpha"), dimension)
    return tdf_from_name(name, dimension)


def _child(desc: dict, key: str) -> Copula:
    _require(key in desc, f"{desc.get('family')} descriptor needs a {key!r} child")
    return build_copula(desc[key])


def build_copula(desc: dict) -> Copula:
    """Construct the copula described by a descriptor object."""
    _require(isinstance(desc, dict), "descriptor must be an object")
    family = desc.get("family")
    _require(isinstance(family, str), "descriptor needs a 'family' tag")
    params = desc.get("params", {})
    _require(isinstance(params, dict), "'params' must be an object")
    try:
        if family == "independence":
            return core.independence(int(params.get("d", 2)))
        if family == "comonotone":
            return core.comonotone(int(params.get("d", 2)))
        if family == "countermonotone":
            return core.countermonotone()
        if family == "archimedean":
            gen = generator_from_spec(params.get("generator", {}))
            return families.archimedean(gen, int(params.get("d", 2)))
        if family == "marshall_olkin":
            return families.marshall_olkin(_param(params, "alpha"))
        if family == "gaussian":
            return families.gaussian(_param(params, "rho"))
        if family == "extreme_value":
            return families.ev_copula(tdf_from_spec(params.get("tdf", {})))
        if family == "lower_extreme_value":
            return families.lower_ev_copula(tdf_from_spec(params.get("tdf", {})))
        if family == "fredricks_nelsen":
            return families.fredricks_nelsen(diagonal_from_spec(params.get("diagonal", {})))
        if family == "bertino":
            return families.bertino(diagonal_from_spec(params.get("diagonal", {})))
        if family == "semilinear":
            return families.semilinear(diagonal_from_spec(params.get("diagonal", {})))
        if family == "glue":
            return core.glue(
                _child(desc, "left"),
                _child(desc, "right"),
                _param(params, "axis", int),
                _param(params, "split"),
            )
        if family == "survival":
            return core.survival(_child(desc, "inner"))
        if family == "hierarchical":
            return families.hierarchical(_child(desc, "outer"), _child(desc, "inner"))
    except (core.DomainError, core.DimensionError) as exc:
        raise DescriptorError(f"invalid {family} descriptor: {exc}") from exc
    raise DescriptorError(f"unknown family {family!r}")


def analytic_tdf_of(c: Copula) -> TailDepFunction | None:
    """Closed-form tail dependence function of a descriptor-built copula, if known."""
    desc = c.descriptor
    family = desc.get("family")
    params = desc.get("params", {})
    d = c.dimension
    if family in ("independence", "gaussian"):
        # the Gaussian tail limit vanishes for |rho| < 1 but too slowly to verify
        if family == "gaussian" and abs(params.get("rho", 0.0)) >= 1.0:
            return None
        return taildep.zero_tdf(d)
    if family == "comonotone":
        return taildep.min_tdf(d)
    if family in ("countermonotone", "marshall_olkin"):
        return taildep.zero_tdf(d)
    if family == "archimedean":
        gen = params.get("generator", {})
        alpha = {"clayton": gen.get("theta"), "gumbel": 0.0, "joe": 0.0, "nonstrict-linear": 0.0}.get(
            gen.get("name")
        )
        if alpha is None:
            return None
        return taildep.archimedean_tdf(float(alpha), d)
    if family == "lower_extreme_value":
        return tdf_from_spec(params.get("tdf", {}))
    if family == "extreme_value":
        return None
    return None


_SHORTHAND_GENERATORS = ("clayton", "gumbel", "joe")


def parse_shorthand(text: str) -> dict:
    """Parse the compact ``family:param`` grammar into a descriptor.

    Examples: ``independence``, ``independence:3``, ``clayton:1``,
    ``gumbel:2``, ``nonstrict-linear``, ``marshall-olkin:0.5``,
    ``gaussian:0.5``, ``fn:1.5`` / ``bertino:2`` / ``semilinear:2``
    (power diagonals), ``ev:min``, ``lev:clayton:2``.
    """
    head, _, rest = text.strip().partition(":")
    try:
        if head in ("independence", "comonotone"):
            d = int(rest) if rest else 2
            return {"family": head, "params": {"d": d}}
        if head == "countermonotone":
            return {"family": "countermonotone", "params": {}}
        if head in _SHORTHAND_GENERATORS:
            _require(bool(rest), f"{head} shorthand needs a parameter, e.g. {head}:2")
            return {
                "family": "archimedean",
                "params": {"generator": {"name": head, "theta": float(rest)}, "d": 2},
            }
        if head == "nonstrict-linear":
            return {
                "family": "archimedean",
                "params": {"generator": {"name": "nonstrict-linear"}, "d": 2},
            }
        if head == "marshall-olkin":
            return {"family": "marshall_olkin", "params": {"alpha": float(rest)}}
        if head == "gaussian":
            return {"family": "gaussian", "params": {"rho": float(rest)}}
        if head in ("fn", "fredricks-nelsen", "bertino", "semilinear"):
            family = {"fn": "fredricks_nelsen", "fredricks-nelsen": "fredricks_nelsen",
                      "bertino": "bertino", "semilinear": "semilinear"}[head]
            return {"family": family, "params": {"diagonal": {"name": "power", "p": float(rest)}}}
        if head in ("ev", "lev"):
            _require(bool(rest), f"{head} shorthand needs a tail dependence fixture name")
            family = "extreme_value" if head == "ev" else "lower_extreme_value"
            if rest.startswith("clayton:"):
                spec = {"name": "clayton", "alpha": float(rest.split(":", 1)[1])}
            else:
                spec = {"name": rest}
            return {"family": family, "params": {"tdf": spec}}
    except ValueError as exc:
        raise DescriptorError(f"bad shorthand {text!r}: {exc}") from exc
    raise DescriptorError(f"unknown shorthand {text!r}")


def load_descriptor(source: str) -> dict:
    """Resolve a CLI argument: a JSON descriptor file path or a shorthand string."""
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        try:
            return descriptor_from_json(path.read_text())
        except OSError as exc:
            raise DescriptorError(f"cannot read descriptor file {source!r}: {exc}") from exc
    return parse_shorthand(source)


def descriptor_to_json(desc: dict, indent: int | None = None) -> str:
    return json.dumps(desc, indent=indent, sort_keys=True)


def descriptor_from_json(text: str) -> dict:
    try:
        desc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid descriptor JSON: {exc}") from exc
    _require(isinstance(desc, dict), "descriptor JSON must be an object")
    return desc

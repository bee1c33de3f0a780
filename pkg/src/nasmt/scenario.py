"""Scenario files: JSON schema, validation with field paths, and builtins."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Any, Dict, List, Optional, Tuple, Union

from .expr import ExpressionError, form_to_expr, parse_form_expr, parse_series_expr, series_to_expr
from .forms import InhomogeneousError, Poly, as_form
from .pl import as_domain, exact, fmt_q
from .position import SUBSET_CAP
from .projective import AnalyticMap, Hypersurface, MapError, SpaceSpec
from .series import ORDER_CAP, CertifiedSeries, TailBound, ValuationSpec, g_iterate, g_series

BUILTIN_SERIES = ("g", "gog")


class ScenarioError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


@dataclass(frozen=True)
class PolyCoord:
    coeffs: Tuple[Fraction, ...]


@dataclass(frozen=True)
class BuiltinCoord:
    name: str
    order: int
    a: Optional[Fraction] = None
    tail: Optional[Tuple[Fraction, Fraction]] = None


Coord = Union[PolyCoord, BuiltinCoord]


@dataclass(frozen=True)
class Options:
    t_domain: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(10))
    assumed_M: Optional[int] = None
    normalize_coeffs: bool = False
    subset_cap: int = SUBSET_CAP
    order_cap: int = ORDER_CAP


@dataclass(frozen=True)
class Scenario:
    valuation: ValuationSpec
    N: int
    coords: Tuple[Coord, ...]
    hypersurfaces: Tuple[Hypersurface, ...]
    X_ideal: Tuple[Poly, ...] = ()
    options: Options = field(default_factory=Options)
    name: str = ""

    @cached_property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.N, self.X_ideal)

    @cached_property
    def map(self) -> AnalyticMap:
        return AnalyticMap(tuple(self._series(c) for c in self.coords))

    def _series(self, c: Coord) -> CertifiedSeries:
        v = self.valuation
        if isinstance(c, PolyCoord):
            return CertifiedSeries.polynomial(c.coeffs, v)
        if c.order > self.options.order_cap:
            raise ScenarioError("map.coords", f"order {c.order} exceeds the cap {self.options.order_cap}")
        s = g_series(v, c.order, c.a) if c.name == "g" else g_iterate(v, c.order, c.a)
        if c.tail is not None:
            s = s.with_tail(TailBound.power(*c.tail))
        return s

    @property
    def assumptions(self) -> Tuple[str, ...]:
        out = []
        for i, c in enumerate(self.coords):
            if isinstance(c, BuiltinCoord) and c.tail is not None:
                out.append(f"declared tail bound for coordinate {i} ({c.name}): "
                           f"v(a_n) >= {fmt_q(c.tail[0])} * n^({fmt_q(c.tail[1])})")
        return tuple(out)

    # serialization
    def to_dict(self) -> Dict[str, Any]:
        val: Dict[str, Any] = {"kind": self.valuation.kind}
        if self.valuation.p is not None:
            val["p"] = self.valuation.p
        space: Dict[str, Any] = {"N": self.N}
        if self.X_ideal:
            space["X_ideal"] = [form_to_expr(g) for g in self.X_ideal]
        coords: List[Any] = []
        for c in self.coords:
            if isinstance(c, PolyCoord):
                coords.append(series_to_expr(c.coeffs))
            else:
                d: Dict[str, Any] = {"builtin": c.name, "order": c.order}
                if c.a is not None:
                    d["a"] = fmt_q(c.a)
                if c.tail is not None:
                    d["tail"] = {"coeff": fmt_q(c.tail[0]), "exponent": fmt_q(c.tail[1])}
                coords.append(d)
        o = self.options
        opts: Dict[str, Any] = {"t_domain": [fmt_q(x) for x in o.t_domain]}
        if o.assumed_M is not None:
            opts["assumed_M"] = o.assumed_M
        if o.normalize_coeffs:
            opts["normalize_coeffs"] = True
        caps = {}
        if o.subset_cap != SUBSET_CAP:
            caps["subsets"] = o.subset_cap
        if o.order_cap != ORDER_CAP:
            caps["order"] = o.order_cap
        if caps:
            opts["caps"] = caps
        out: Dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        out.update({
            "valuation": val,
            "space": space,
            "map": {"coords": coords},
            "hypersurfaces": [{"name": D.name, "form": form_to_expr(D.form)} for D in self.hypersurfaces],
            "options": opts,
        })
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# ---------------------------------------------------------------- parsing


def _get(d: Any, key: str, path: str, required: bool = True, default: Any = None):
    if not isinstance(d, dict):
        raise ScenarioError(path, "expected an object")
    if key not in d:
        if required:
            raise ScenarioError(f"{path}.{key}" if path else key, "missing field")
        return default
    return d[key]


def _rational(x: Any, path: str) -> Fraction:
    try:
        return exact(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ScenarioError(path, f"expected an exact rational (integer or \"num/den\"), got {x!r}") from None


def _int(x: Any, path: str, lo: int = 0) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < lo:
        raise ScenarioError(path, f"expected an integer >= {lo}, got {x!r}")
    return x


def _form(text: Any, nvars: int, path: str) -> Poly:
    if not isinstance(text, str):
        raise ScenarioError(path, "expected an expression string")
    try:
        return as_form(parse_form_expr(text, nvars))
    except InhomogeneousError as exc:
        raise ScenarioError(path, f"inhomogeneous form: {exc}") from None
    except ExpressionError as exc:
        raise ScenarioError(path, str(exc)) from None


def _valuation(d: Any) -> ValuationSpec:
    kind = _get(d, "kind", "valuation")
    if kind == "trivial":
        return ValuationSpec.trivial()
    if kind != "p-adic":
        raise ScenarioError("valuation.kind", f"expected \"p-adic\" or \"trivial\", got {kind!r}")
    p = _int(_get(d, "p", "valuation"), "valuation.p", 0)
    try:
        return ValuationSpec.padic(p)
    except ValueError:
        raise ScenarioError("valuation.p", f"p must be prime, got {p}") from None


def _coord(c: Any, path: str) -> Coord:
    if isinstance(c, str):
        try:
            return PolyCoord(tuple(parse_series_expr(c)))
        except ExpressionError as exc:
            raise ScenarioError(path, str(exc)) from None
    if not isinstance(c, dict):
        raise ScenarioError(path, "expected an expression string or a builtin object")
    name = _get(c, "builtin", path)
    if name not in BUILTIN_SERIES:
        raise ScenarioError(f"{path}.builtin", f"unknown builtin {name!r}; known: {', '.join(BUILTIN_SERIES)}")
    order = _int(_get(c, "order", path), f"{path}.order", 1)
    a = c.get("a")
    a = None if a is None else _rational(a, f"{path}.a")
    tail = c.get("tail")
    if tail is not None:
        tail = (
            _rational(_get(tail, "coeff", f"{path}.tail"), f"{path}.tail.coeff"),
            _rational(_get(tail, "exponent", f"{path}.tail"), f"{path}.tail.exponent"),
        )
    unknown = set(c) - {"builtin", "order", "a", "tail"}
    if unknown:
        raise ScenarioError(path, f"unknown keys {sorted(unknown)}")
    return BuiltinCoord(name, order, a, tail)


def _options(d: Any) -> Options:
    if d is None:
        return Options()
    dom = _get(d, "t_domain", "options", required=False)
    if dom is None:
        t_domain = Options().t_domain
    else:
        if not isinstance(dom, list) or len(dom) != 2:
            raise ScenarioError("options.t_domain", "expected [t_min, t_max]")
        try:
            t_domain = as_domain([_rational(x, f"options.t_domain[{i}]") for i, x in enumerate(dom)])
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError("options.t_domain", str(exc)) from None
    M = d.get("assumed_M")
    if M is not None:
        M = _int(M, "options.assumed_M", 1)
    norm = d.get("normalize_coeffs", False)
    if not isinstance(norm, bool):
        raise ScenarioError("options.normalize_coeffs", "expected true or false")
    caps = d.get("caps") or {}
    if not isinstance(caps, dict):
        raise ScenarioError("options.caps", "expected an object")
    subset_cap = _int(caps.get("subsets", SUBSET_CAP), "options.caps.subsets", 1)
    order_cap = _int(caps.get("order", ORDER_CAP), "options.caps.order", 1)
    return Options(tuple(t_domain), M, norm, subset_cap, order_cap)


def scenario_from_dict(d: Any, name: str = "") -> Scenario:
    if not isinstance(d, dict):
        raise ScenarioError("", "scenario must be a JSON object")
    unknown = set(d) - {"name", "valuation", "space", "map", "hypersurfaces", "options"}
    if unknown:
        raise ScenarioError("", f"unknown top-level keys {sorted(unknown)}")
    val = _valuation(_get(d, "valuation", ""))
    space = _get(d, "space", "")
    N = _int(_get(space, "N", "space"), "space.N", 1)
    X_ideal = tuple(
        _form(g, N + 1, f"space.X_ideal[{i}]") for i, g in enumerate(_get(space, "X_ideal", "space", False, []))
    )
    coords_raw = _get(_get(d, "map", ""), "coords", "map")
    if not isinstance(coords_raw, list) or len(coords_raw) != N + 1:
        raise ScenarioError("map.coords", f"expected a list of N+1 = {N + 1} coordinates")
    coords = tuple(_coord(c, f"map.coords[{i}]") for i, c in enumerate(coords_raw))
    if val.is_trivial and any(isinstance(c, BuiltinCoord) for c in coords):
        raise ScenarioError("map.coords", "builtin series need a p-adic valuation")
    hyps_raw = _get(d, "hypersurfaces", "")
    if not isinstance(hyps_raw, list) or not hyps_raw:
        raise ScenarioError("hypersurfaces", "expected a nonempty list")
    hyps = []
    for i, h in enumerate(hyps_raw):
        path = f"hypersurfaces[{i}]"
        nm = _get(h, "name", path)
        if not isinstance(nm, str):
            raise ScenarioError(f"{path}.name", "expected a string")
        hyps.append(Hypersurface(nm, _form(_get(h, "form", path), N + 1, f"{path}.form")))
    opts = _options(d.get("options"))
    sc = Scenario(val, N, coords, tuple(hyps), X_ideal, opts, d.get("name", name))
    try:
        sc.map
        sc.space
    except (MapError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError("map" if isinstance(exc, MapError) else "space", str(exc)) from None
    return sc


def parse_scenario(text: str, name: str = "") -> Scenario:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return scenario_from_dict(d, name)


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


BUILTINS = ("three_conics", "quang_sharp_transcendental", "trivial_valuation_remark", "tangent_line_M2")


def builtin_text(name: str) -> str:
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin scenario {name!r}; known: {', '.join(BUILTINS)}")
    return resources.files("nasmt").joinpath("scenarios", f"{name}.json").read_text(encoding="utf-8")


def builtin(name: str) -> Scenario:
    return parse_scenario(builtin_text(name), name)

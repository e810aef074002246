"""Command-line front end.

Domains use a small mini-language::

    disc:c=<re>+<im>i,r=<radius>      ball:n=<dim>        gauge:model-z1z2
    polydisc:r=<r1>,<r2>,...          ellipsoid:p=<p1>,<p2>,...
    product(<spec>;<spec>;...)

Points and vectors are comma-separated complex numbers (``0.5+0i,0-0.2i``), polynomials are
comma-separated ``<multi-index>:<coefficient>`` terms with dash-separated multi-indices
(``2-0:1+0i,1-1:0.5-1i``) or the word ``one``.  Values that start with a minus sign need the
``--flag=value`` form.

Exit codes: 0 success, 1 a verdict failed, 2 usage error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bergman, domains, green, metrics, probes, suite
from .domains import (
    NAMED_GAUGES,
    UNBOUNDED,
    Ball,
    BalancedGauge,
    Disc,
    DomainSpec,
    Ellipsoid,
    Polydisc,
    Product,
)
from .errors import DimensionError, DivergentError, OutsideDomainError, ParseError, UnsupportedError
from .green import EuclideanDisc, ProductOf, ScaledCopy
from .polynomials import HomogeneousPoly

log = logging.getLogger("scv")

MAX_DIM = 8
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_FULL = re.compile(rf"(?P<re>[+-]?{_NUM})(?:(?P<sign>[+-])(?P<im>{_NUM})i)?")
_COMPLEX_IMAG = re.compile(rf"(?P<im>[+-]?{_NUM})i")


# -- scalar parsing -----------------------------------------------------------------


def parse_complex(text: str, source: str | None = None, offset: int = 0) -> complex:
    """``<re>+<im>i`` with optional signs; a bare real or bare imaginary part is accepted."""
    t = text.strip()
    m = _COMPLEX_FULL.fullmatch(t)
    if m:
        im = float(m["im"]) if m["im"] else 0.0
        return complex(float(m["re"]), -im if m["sign"] == "-" else im)
    m = _COMPLEX_IMAG.fullmatch(t)
    if m:
        return complex(0.0, float(m["im"]))
    raise ParseError("malformed complex number", source if source is not None else text, offset)


def parse_real(text: str, source: str | None = None, offset: int = 0) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ParseError("malformed real number", source if source is not None else text, offset) from None
    if not math.isfinite(x):
        raise ParseError("real number must be finite", source if source is not None else text, offset)
    return x


def _split_positions(text: str, sep: str = ","):
    out, start = [], 0
    for i, ch in enumerate(text + sep):
        if ch == sep:
            out.append((text[start:i], start))
            start = i + 1
    return out


def parse_point(text: str) -> np.ndarray:
    """Comma-separated complex coordinates."""
    if not text.strip():
        raise ParseError("empty point", text, 0)
    return np.array([parse_complex(tok, text, pos) for tok, pos in _split_positions(text)], dtype=complex)


def parse_reals(text: str) -> list:
    if not text.strip():
        raise ParseError("empty list", text, 0)
    return [parse_real(tok, text, pos) for tok, pos in _split_positions(text)]


def parse_poly(text: str, n: int) -> HomogeneousPoly:
    """``one`` or comma-separated ``a1-a2-...:coefficient`` terms."""
    if text.strip().lower() == "one":
        return HomogeneousPoly.one(n)
    terms = {}
    for tok, pos in _split_positions(text):
        if ":" not in tok:
            raise ParseError("polynomial term needs 'multiindex:coefficient'", text, pos)
        idx, coeff = tok.split(":", 1)
        try:
            alpha = tuple(int(a) for a in idx.strip().split("-"))
        except ValueError:
            raise ParseError("malformed multi-index", text, pos) from None
        if len(alpha) != n or any(a < 0 for a in alpha):
            raise ParseError(f"multi-index must have {n} non-negative entries", text, pos)
        terms[alpha] = terms.get(alpha, 0) + parse_complex(coeff, text, pos + len(idx) + 1)
    try:
        return HomogeneousPoly(n, terms)
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from None


# -- domain mini-language -----------------------------------------------------------


class _DomainParser:
    """Recursive-descent parser over the whitespace-free text; positions refer to the input."""

    def __init__(self, text: str):
        self.text = text
        kept = [(i, c) for i, c in enumerate(text) if not c.isspace()]
        self.s = "".join(c for _, c in kept)
        self.where = [i for i, _ in kept] + [len(text)]

    def error(self, message: str, i: int):
        raise ParseError(message, self.text, self.where[min(i, len(self.s))])

    def parse(self) -> DomainSpec:
        if not self.s:
            self.error("empty domain spec", 0)
        dom, end = self.spec(0)
        if end != len(self.s):
            self.error("unexpected trailing input", end)
        if dom.dim > MAX_DIM:
            self.error(f"dimension {dom.dim} exceeds the maximum {MAX_DIM}", 0)
        return dom

    def spec(self, i: int):
        if self.s.startswith("product(", i):
            j = i + len("product(")
            parts = []
            while True:
                dom, j = self.spec(j)
                parts.append(dom)
                if j >= len(self.s):
                    self.error("unterminated product(", i)
                if self.s[j] == ")":
                    j += 1
                    break
                if self.s[j] != ";":
                    self.error("expected ';' or ')'", j)
                j += 1
            return Product(tuple(parts)), j
        colon = self.s.find(":", i)
        if colon < 0:
            self.error("expected '<variant>:<parameters>'", i)
        kind = self.s[i:colon]
        end = colon + 1
        while end < len(self.s) and self.s[end] not in ";)":
            end += 1
        return self.leaf(kind, i, colon + 1, end), end

    def params(self, start: int, end: int) -> dict:
        out, key = {}, None
        for tok, pos in _split_positions(self.s[start:end]):
            pos += start
            if "=" in tok:
                key, val = tok.split("=", 1)
                if key in out:
                    self.error(f"duplicate parameter {key!r}", pos)
                out[key] = [(val, pos + len(key) + 1)]
            elif key is None:
                self.error("expected '<key>=<value>'", pos)
            else:
                out[key].append((tok, pos))
        return out

    def positive(self, tok: str, pos: int, what: str) -> float:
        try:
            x = float(tok)
        except ValueError:
            self.error(f"malformed {what}", pos)
        if not (x > 0 and math.isfinite(x)):
            self.error(f"{what} must be positive and finite", pos)
        return x

    def leaf(self, kind: str, i: int, start: int, end: int) -> DomainSpec:
        if kind == "gauge":
            name = self.s[start:end]
            if name not in NAMED_GAUGES:
                self.error(f"unknown gauge {name!r}; known: {', '.join(sorted(NAMED_GAUGES))}", start)
            return NAMED_GAUGES[name]
        if kind not in ("disc", "ball", "polydisc", "ellipsoid"):
            self.error(f"unknown domain variant {kind!r}", i)
        p = self.params(start, end)
        allowed = {"disc": {"c", "r"}, "ball": {"n"}, "polydisc": {"r"}, "ellipsoid": {"p"}}[kind]
        for key, vals in p.items():
            if key not in allowed:
                self.error(f"unknown parameter {key!r} for {kind}", vals[0][1] - len(key) - 1)
        required = {"disc": "r", "ball": "n", "polydisc": "r", "ellipsoid": "p"}[kind]
        if required not in p:
            self.error(f"{kind} needs parameter {required!r}", start)
        if kind == "disc":
            if len(p["r"]) != 1 or len(p.get("c", [None])) != 1:
                self.error("disc takes one centre and one radius", start)
            c = 0j
            if "c" in p:
                tok, pos = p["c"][0]
                try:
                    c = parse_complex(tok)
                except ParseError:
                    self.error("malformed complex centre", pos)
            return Disc(c, self.positive(*p["r"][0], "radius"))
        if kind == "ball":
            if len(p["n"]) != 1:
                self.error("ball takes a single dimension", start)
            tok, pos = p["n"][0]
            if not tok.isdigit() or int(tok) < 1:
                self.error("ball dimension must be a positive integer", pos)
            if int(tok) > MAX_DIM:
                self.error(f"dimension {tok} exceeds the maximum {MAX_DIM}", pos)
            return Ball(int(tok))
        vals = p[required]
        if len(vals) > MAX_DIM:
            self.error(f"dimension {len(vals)} exceeds the maximum {MAX_DIM}", start)
        label = "radius" if kind == "polydisc" else "exponent"
        nums = tuple(self.positive(tok, pos, label) for tok, pos in vals)
        return Polydisc(nums) if kind == "polydisc" else Ellipsoid(nums)


def parse_domain(text: str) -> DomainSpec:
    """Parse the domain mini-language; whitespace is ignored."""
    return _DomainParser(text).parse()


def _real_repr(x: float) -> str:
    return repr(float(x))


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{_real_repr(z.real)}{sign}{_real_repr(abs(z.imag))}i"


def format_domain(domain: DomainSpec) -> str:
    """Canonical mini-language form; ``parse_domain(format_domain(d)) == d``."""
    if isinstance(domain, Disc):
        return f"disc:c={format_complex(domain.center)},r={_real_repr(domain.radius)}"
    if isinstance(domain, Ball):
        return f"ball:n={domain.n}"
    if isinstance(domain, Polydisc):
        return "polydisc:r=" + ",".join(_real_repr(r) for r in domain.radii)
    if isinstance(domain, Ellipsoid):
        return "ellipsoid:p=" + ",".join(_real_repr(p) for p in domain.p)
    if isinstance(domain, BalancedGauge) and NAMED_GAUGES.get(domain.name) == domain:
        return f"gauge:{domain.name}"
    if isinstance(domain, Product):
        return "product(" + ";".join(format_domain(f) for f in domain.factors) + ")"
    raise UnsupportedError(f"{domain!r} has no mini-language form")


def format_point(z) -> str:
    return ",".join(_cell(complex(c)) for c in np.atleast_1d(z))


def format_poly(H: HomogeneousPoly) -> str:
    if H.is_zero():
        return "zero"
    return ",".join("-".join(str(a) for a in alpha) + ":" + _cell(complex(c)) for alpha, c in H.terms)


def format_geometry(geom) -> str:
    if isinstance(geom, ScaledCopy):
        return f"scaled({_cell(geom.factor)};{format_domain(geom.base)})"
    if isinstance(geom, EuclideanDisc):
        return f"euclidean-disc(c={_cell(complex(geom.center))};r={_cell(geom.radius)})"
    return "product-of(" + ";".join(format_geometry(g) for g in geom.parts) + ")"


# -- output ------------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (complex, np.complexfloating)):
        z = complex(v)
        sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
        return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        x = float(v)
        return x if math.isfinite(x) else _cell(x)
    if v is None:
        return None
    return _cell(v)


@dataclass
class Table:
    command: str
    columns: list
    rows: list = field(default_factory=list)
    status: int = EXIT_OK

    def render(self, fmt: str) -> str:
        if fmt == "json":
            obj = {
                "command": self.command,
                "columns": self.columns,
                "rows": [{c: _json_value(v) for c, v in zip(self.columns, r)} for r in self.rows],
            }
            return json.dumps(obj, indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow([_cell(v) for v in r])
        return buf.getvalue()


def _report_table(command: str, rep: probes.ProbeReport, extra=()) -> Table:
    cols = ["probe", "descriptor", "relation", "lhs", "rhs", "margin", "tolerance", "ok",
            "verdict", "tolerance_policy", "mc_samples", "seed"]
    rows = [[rep.name, c.descriptor, c.relation, c.lhs, c.rhs, c.margin, c.tolerance, c.ok,
             rep.verdict, rep.tolerance_policy, rep.mc_samples, rep.seed] for c in rep.checks]
    status = EXIT_FAIL if rep.verdict == "fail" else EXIT_OK
    return Table(command, cols, rows, status)


# -- commands --------------------------------------------------------------------------


def _dom(args):
    return parse_domain(args.domain)


def _pt(args, name="point"):
    return parse_point(getattr(args, name))


def _poly(args, D):
    return parse_poly(args.poly, D.dim)


def cmd_gauge(args):
    D, z = _dom(args), _pt(args)
    inside = domains.contains(D, z)
    h = domains.gauge(D, z) if D.balanced else None
    return Table("gauge", ["domain", "point", "gauge", "contains", "seed"],
                 [[format_domain(D), format_point(z), h, inside, args.seed]])


def cmd_bbox(args):
    D = _dom(args)
    box = domains.bounding_box(D)
    cols = ["domain", "coordinate", "bounded", "lo", "hi", "seed"]
    if box == UNBOUNDED:
        return Table("bbox", cols, [[format_domain(D), "all", False, None, None, args.seed]])
    rows = []
    for j, (lo, hi) in enumerate(zip(box.lo, box.hi)):
        part = "Re" if j % 2 == 0 else "Im"
        rows.append([format_domain(D), f"{part} z{j // 2 + 1}", True, float(lo), float(hi), args.seed])
    return Table("bbox", cols, rows)


def cmd_green(args):
    D, pole, z = _dom(args), _pt(args, "pole"), _pt(args)
    value = green.green(D, pole, z)
    return Table("green", ["domain", "pole", "point", "value", "seed"],
                 [[format_domain(D), format_point(pole), format_point(z), value, args.seed]])


def _geometry(args, D, pole):
    fn = green.scaled_sublevel if args.scaled else green.sublevel_set
    return fn(D, pole, args.level)


def cmd_sublevel(args):
    D, pole = _dom(args), _pt(args, "pole")
    geom = _geometry(args, D, pole)
    try:
        as_dom = format_domain(green.as_domain(geom))
    except UnsupportedError:
        as_dom = None
    return Table("sublevel", ["domain", "pole", "level", "scaled", "geometry", "catalog_domain", "seed"],
                 [[format_domain(D), format_point(pole), args.level, args.scaled, format_geometry(geom), as_dom,
                   args.seed]])


def _kernel_row(res: bergman.KernelResult):
    return [res.degree_cap, res.method, res.value, res.tail_estimate, res.exact_flag, res.tag]


_KERNEL_COLS = ["degree_cap", "method", "value", "tail_estimate", "exact", "tag"]


def cmd_kernel(args):
    D, w = _dom(args), _pt(args)
    res = bergman.kernel(D, w, args.cap, args.method)
    return Table("kernel", ["domain", "point"] + _KERNEL_COLS + ["seed"],
                 [[format_domain(D), format_point(w)] + _kernel_row(res) + [args.seed]])


def cmd_kernel_h(args):
    D, w = _dom(args), _pt(args)
    H = _poly(args, D)
    res = bergman.kernel_H(D, w, H, args.cap, args.method)
    return Table("kernel-h", ["domain", "point", "poly"] + _KERNEL_COLS + ["seed"],
                 [[format_domain(D), format_point(w), format_poly(H)] + _kernel_row(res) + [args.seed]])


def cmd_kernel_h_balanced(args):
    D = _dom(args)
    H = _poly(args, D)
    value = bergman.kernel_H_balanced(D, H)
    return Table("kernel-h-balanced", ["domain", "poly", "value", "seed"],
                 [[format_domain(D), format_poly(H), value, args.seed]])


def cmd_kernel_k(args):
    D, w, X = _dom(args), _pt(args), _pt(args, "vector")
    res = bergman.kernel_k(D, w, X, args.k, args.cap, args.method)
    return Table("kernel-k", ["domain", "point", "vector", "k"] + _KERNEL_COLS + ["seed"],
                 [[format_domain(D), format_point(w), format_point(X), args.k] + _kernel_row(res) + [args.seed]])


def cmd_kernel_sublevel(args):
    D, pole, w = _dom(args), _pt(args, "pole"), _pt(args)
    geom = _geometry(args, D, pole)
    H = _poly(args, D)
    res = bergman.kernel_on_sublevel(geom, w, args.cap, H, args.method)
    return Table("kernel-sublevel", ["domain", "pole", "level", "scaled", "geometry", "point", "poly"]
                 + _KERNEL_COLS + ["seed"],
                 [[format_domain(D), format_point(pole), args.level, args.scaled, format_geometry(geom),
                   format_point(w), format_poly(H)] + _kernel_row(res) + [args.seed]])


def cmd_moment(args):
    D = _dom(args)
    alpha = tuple(int(a) for a in args.alpha.split("-"))
    value = bergman.moment(D, alpha)
    return Table("moment", ["domain", "alpha", "value", "seed"],
                 [[format_domain(D), "-".join(map(str, alpha)), value, args.seed]])


def cmd_metric(args):
    D, w, X = _dom(args), _pt(args), _pt(args, "vector")
    value = bergman.bergman_metric(D, w, X, args.cap, args.method)
    return Table("metric", ["domain", "point", "vector", "degree_cap", "method", "value", "seed"],
                 [[format_domain(D), format_point(w), format_point(X), args.cap, args.method, value, args.seed]])


def cmd_azukawa(args):
    D, w, X = _dom(args), _pt(args), _pt(args, "vector")
    value = metrics.azukawa(D, w, X)
    inside = metrics.indicatrix_contains(D, w, X)
    cols = ["domain", "point", "vector", "value", "in_indicatrix"]
    row = [format_domain(D), format_point(w), format_point(X), value, inside]
    if args.ladder:
        lad = metrics.azukawa_ladder(D, w, X)
        cols += ["ladder_value", "ladder_spread", "ladder_stable"]
        row += [lad.value, lad.spread, lad.stable]
    return Table("azukawa", cols + ["seed"], [row + [args.seed]])


def cmd_cr_lower(args):
    D, w, X = _dom(args), _pt(args), _pt(args, "vector")
    value = metrics.cr_lower(D, w, X, args.k)
    return Table("cr-lower", ["domain", "point", "vector", "k", "value", "seed"],
                 [[format_domain(D), format_point(w), format_point(X), args.k, value, args.seed]])


def cmd_indicatrix_vol(args):
    D, w = _dom(args), _pt(args)
    est = metrics.indicatrix_volume(D, w, args.mc_samples, args.seed)
    try:
        exact = metrics.indicatrix_volume_exact(D, w)
    except (UnsupportedError, DivergentError):
        exact = None
    return Table("indicatrix-vol", ["domain", "point", "mc_samples", "mean", "std_error", "hits",
                                    "unbounded", "exact", "seed"],
                 [[format_domain(D), format_point(w), args.mc_samples, est.mean, est.std_error, est.hits,
                   est.unbounded, exact, args.seed]])


def cmd_suita(args):
    D, w = _dom(args), _pt(args)
    sv = probes.suita_functional(D, w, args.mc_samples, args.seed, args.cap)
    status = EXIT_FAIL if sv.violation else EXIT_OK
    return Table("suita", ["domain", "point", "mc_samples", "f_value", "sigma", "ci_low", "ci_high", "kernel",
                           "kernel_tail", "volume", "volume_std_error", "status", "seed"],
                 [[format_domain(D), format_point(w), args.mc_samples, sv.f_value, sv.sigma, sv.ci_low,
                   sv.ci_high, sv.kernel_part.value, sv.kernel_part.tail_estimate, sv.volume_part.mean,
                   sv.volume_part.std_error, sv.status, args.seed]], status)


def cmd_scan_monotone(args):
    D, pole = _dom(args), _pt(args, "pole")
    rep = probes.monotonicity_scan(D, pole, _poly(args, D), parse_reals(args.grid), args.cap)
    return _report_table("scan-monotone", rep)


def cmd_probe_logconvex(args):
    D, pole = _dom(args), _pt(args, "pole")
    rep = probes.log_convexity_probe(D, pole, _poly(args, D), parse_reals(args.grid), args.cap)
    return _report_table("probe-logconvex", rep)


def cmd_probe_convexity(args):
    D = _dom(args)
    rep = probes.volume_convexity_probe(D, args.pairs, parse_reals(args.t_grid), args.mc_samples, args.seed)
    return _report_table("probe-convexity", rep)


def cmd_probe_psh(args):
    D = _dom(args)
    directions = None
    if args.direction:
        directions = [parse_point(d) for d in args.direction]
        want = D.dim if args.target == "vol" else 2 * D.dim
        if any(len(d) != want for d in directions):
            raise DimensionError(f"directions must have {want} coordinates")
    rep = probes.volume_psh_probe(D, args.lines, parse_reals(args.radii), args.mc_samples, args.seed,
                                  args.target, args.quad, directions)
    return _report_table("probe-psh", rep)


def cmd_boundary_scan(args):
    D = _dom(args)
    rep = probes.boundary_limit_scan(D, parse_point(args.direction), parse_reals(args.t_grid),
                                     args.mc_samples, args.seed)
    return _report_table("boundary-scan", rep)


def cmd_dimension(args):
    D = _dom(args)
    res = probes.dimension_probe(D, args.cap, parse_reals(args.grid))
    counts = ";".join(f"{k}={v}" for k, v in res.counts.items())
    return Table("dimension", ["domain", "degree_cap", "count", "classification", "total", "counts_equal",
                               "counts", "seed"],
                 [[format_domain(D), args.cap, res.count, res.classification, res.total, res.equal, counts,
                   args.seed]])


def cmd_suite(args):
    only = None
    if args.only:
        only = {int(x) for x in parse_reals(args.only)}
        if not only <= set(range(1, 13)):
            raise ParseError("criteria are numbered 1 to 12", args.only, 0)
    results = suite.run_suite(args.seed, only)
    rows = [[r.number, r.name, "pass" if r.passed else "fail", r.measured, r.tolerance, r.detail, args.seed]
            for r in results]
    status = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    return Table("suite", ["criterion", "name", "result", "measured", "tolerance", "detail", "seed"], rows, status)


# Library operations reachable from each subcommand (each operation from exactly one).
OPERATIONS = {
    "gauge": (domains.gauge, domains.contains),
    "bbox": (domains.bounding_box,),
    "green": (green.green,),
    "sublevel": (green.sublevel_set, green.scaled_sublevel),
    "azukawa": (metrics.azukawa, metrics.indicatrix_contains, metrics.azukawa_ladder),
    "cr-lower": (metrics.cr_lower,),
    "indicatrix-vol": (metrics.indicatrix_volume, metrics.indicatrix_volume_exact),
    "moment": (bergman.moment,),
    "kernel": (bergman.kernel,),
    "kernel-sublevel": (bergman.kernel_on_sublevel,),
    "kernel-h-balanced": (bergman.kernel_H_balanced,),
    "kernel-h": (bergman.kernel_H,),
    "kernel-k": (bergman.kernel_k,),
    "metric": (bergman.bergman_metric,),
    "suita": (probes.suita_functional,),
    "scan-monotone": (probes.monotonicity_scan,),
    "probe-logconvex": (probes.log_convexity_probe,),
    "probe-convexity": (probes.volume_convexity_probe,),
    "probe-psh": (probes.volume_psh_probe,),
    "boundary-scan": (probes.boundary_limit_scan,),
    "dimension": (probes.dimension_probe,),
    "suite": (suite.run_suite,),
}


# -- argument parsing ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _pos_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        x = float(text)  # accept 1e6 style sample counts
        if not x.is_integer():
            raise argparse.ArgumentTypeError("must be an integer") from None
        v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the table here instead of standard output")
    common.add_argument("--seed", type=_nonneg_int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="scv", description="Holomorphic invariants of model pseudoconvex domains.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, *flags):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        for flag in flags:
            flag(p)
        return p

    def domain(p):
        p.add_argument("--domain", required=True)

    def point(p):
        p.add_argument("--point", required=True)

    def pole(p):
        p.add_argument("--pole", required=True)

    def vector(p):
        p.add_argument("--vector", required=True)

    def poly(p):
        p.add_argument("--poly", default="one")

    def cap(p):
        p.add_argument("--cap", type=_nonneg_int, default=None)

    def method(p):
        p.add_argument("--method", choices=("auto", "exact", "series"), default="auto")

    def mc(default):
        def f(p):
            p.add_argument("--mc-samples", type=_pos_int if default else _nonneg_int, default=default)
        return f

    def level(p):
        p.add_argument("--level", type=float, required=True)
        p.add_argument("--scaled", action="store_true", help="use D_a instead of {G < a}")

    def grid(default):
        def f(p):
            p.add_argument("--grid", default=default)
        return f

    add("gauge", cmd_gauge, "Minkowski gauge and membership", domain, point)
    add("bbox", cmd_bbox, "coordinate bounding box", domain)
    add("green", cmd_green, "pluricomplex Green function", domain, pole, point)
    add("sublevel", cmd_sublevel, "geometry of {G < a} or D_a", domain, pole, level)
    az = add("azukawa", cmd_azukawa, "Azukawa metric and indicatrix membership", domain, point, vector)
    az.add_argument("--ladder", action="store_true", help="add the Green-function ladder cross-check")
    cr = add("cr-lower", cmd_cr_lower, "Caratheodory-Reiffen lower bound", domain, point, vector)
    cr.add_argument("--k", type=_pos_int, default=1)
    add("indicatrix-vol", cmd_indicatrix_vol, "indicatrix volume (Monte Carlo)", domain, point, mc(100_000))
    mo = add("moment", cmd_moment, "monomial moment", domain)
    mo.add_argument("--alpha", required=True, help="dash-separated multi-index, e.g. 1-0")
    add("kernel", cmd_kernel, "Bergman kernel on the diagonal", domain, point, cap, method)
    ks = add("kernel-sublevel", cmd_kernel_sublevel, "K^H on a sublevel geometry",
             domain, pole, level, point, poly, cap)
    ks.add_argument("--method", choices=("auto", "exact", "series"), default="auto")
    add("kernel-h-balanced", cmd_kernel_h_balanced, "closed-form K^H(0) on balanced Reinhardt domains",
        domain, poly)
    kh = add("kernel-h", cmd_kernel_h, "higher-order kernel K^H", domain, point, poly, cap)
    kh.add_argument("--method", choices=("auto", "exact", "series"), default="series")
    kk = add("kernel-k", cmd_kernel_k, "K^(k)(w; X)", domain, point, vector, cap)
    kk.add_argument("--k", type=_nonneg_int, required=True)
    kk.add_argument("--method", choices=("auto", "exact", "series"), default="series")
    add("metric", cmd_metric, "Bergman metric", domain, point, vector, cap, method)
    add("suita", cmd_suita, "Suita functional F_D(w)", domain, point, mc(100_000), cap)
    add("scan-monotone", cmd_scan_monotone, "a -> K^H_{D_a}(pole) monotonicity scan",
        domain, pole, poly, grid("-3,-2,-1,-0.25"), cap)
    add("probe-logconvex", cmd_probe_logconvex, "log-convexity evidence for a -> K^H_{D_a}(pole)",
        domain, pole, poly, grid("-3,-2,-1,-0.25"), cap)
    pc = add("probe-convexity", cmd_probe_convexity, "convexity of -log vol I_D", domain, mc(0))
    pc.add_argument("--pairs", type=_pos_int, default=50)
    pc.add_argument("--t-grid", default="0.25,0.5,0.75")
    pp = add("probe-psh", cmd_probe_psh, "plurisubharmonicity of -log vol I_D or log A_D", domain, mc(0))
    pp.add_argument("--lines", type=_pos_int, default=25)
    pp.add_argument("--radii", default="0.05,0.2")
    pp.add_argument("--target", choices=("vol", "azukawa"), default="vol")
    pp.add_argument("--quad", type=_pos_int, default=probes.QUAD_POINTS)
    pp.add_argument("--direction", action="append", help="complex direction; repeat for several lines")
    bs = add("boundary-scan", cmd_boundary_scan, "F_D along a ray toward the boundary", domain, mc(100_000))
    bs.add_argument("--direction", required=True)
    bs.add_argument("--t-grid", default="0.9,0.99,0.999")
    dm = add("dimension", cmd_dimension, "count L2-integrable monomials", domain, grid("-2,-1,-0.5"))
    dm.add_argument("--cap", type=_nonneg_int, required=True)
    su = add("suite", cmd_suite, "run the acceptance criteria")
    su.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def run(argv=None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"scv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        table = args.func(args)
    except (OutsideDomainError, UnsupportedError, DivergentError) as exc:
        print(f"scv: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParseError, DimensionError, ValueError) as exc:
        print(f"scv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = table.render(args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return table.status


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())

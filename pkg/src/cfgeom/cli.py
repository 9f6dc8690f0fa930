"""Command line front end: ``cfgeom <group> <command> [options]``.

Exit status is 0 on success, 2 when an input violates a precondition and 3
when a numerical procedure fails to reach its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import cf_core, curve_density, kepler_reconstruct, lattice_sail, polyline
from .cf_core import format_scalar, is_exact
from .errors import DomainError, NumericalError

CONFIG_ENV = "CFGEOM_CONFIG"
CONFIG_KEYS = {"mode", "tolerances", "output", "seed"}
DEFAULT_TOLERANCES = {
    "collinear": polyline.COLLINEAR_TOL,
    "closure": polyline.CLOSURE_TOL,
    "quad_rtol": curve_density.QUAD_RTOL,
    "switch_tol": 1e-6,
    "fd_eps": 1e-4,
}

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass
class Config:
    """Run settings; ``mode=None`` lets decimals switch to float arithmetic."""

    mode: str | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output: str = "csv"
    seed: int = 0

    def update(self, data: dict, source: str) -> None:
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise DomainError(f"{source}: unknown config keys {sorted(unknown)}")
        if "mode" in data:
            if data["mode"] not in ("exact", "float"):
                raise DomainError(f"{source}: mode must be 'exact' or 'float'")
            self.mode = data["mode"]
        if "output" in data:
            if data["output"] not in ("csv", "json"):
                raise DomainError(f"{source}: output must be 'csv' or 'json'")
            self.output = data["output"]
        if "seed" in data:
            if not isinstance(data["seed"], int) or isinstance(data["seed"], bool):
                raise DomainError(f"{source}: seed must be an integer")
            self.seed = data["seed"]
        for name, value in data.get("tolerances", {}).items():
            if name not in DEFAULT_TOLERANCES:
                raise DomainError(f"{source}: unknown tolerance {name!r}")
            value = float(value)
            if not value > 0:
                raise DomainError(f"{source}: tolerance {name} must be positive")
            self.tolerances[name] = value

    def tol(self, name: str) -> float:
        return self.tolerances[name]


def load_config(path: str | None) -> Config:
    cfg = Config()
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise DomainError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise DomainError(f"config {path} is not valid JSON: {exc.msg}") from None
        if not isinstance(data, dict):
            raise DomainError(f"config {path} must hold a JSON object")
        cfg.update(data, path)
    return cfg


# -- scalar handling ----------------------------------------------------------


def _scalars(text: str, cfg: Config) -> list:
    """Parse a comma separated list honouring the exact/float mode."""
    try:
        vals = cf_core.parse_seq(text)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    return _apply_mode(vals, cfg)


def _apply_mode(vals, cfg: Config) -> list:
    exact = all(is_exact(v) for v in vals)
    if cfg.mode == "exact" and not exact:
        raise DomainError("decimal input with --mode exact; write p/q or drop --mode exact")
    if cfg.mode == "float" or not exact:
        return [float(v) for v in vals]
    return vals


def _scalar(text: str, cfg: Config):
    vals = _scalars(text, cfg)
    if len(vals) != 1:
        raise DomainError(f"expected one scalar, got {text!r}")
    return vals[0]


def _point(text: str, cfg: Config):
    vals = _scalars(text, cfg)
    if len(vals) != 2:
        raise DomainError(f"expected a point x,y, got {text!r}")
    return tuple(vals)


def _matrix(text: str, cfg: Config):
    rows = [r for r in text.split(";") if r.strip()]
    if len(rows) != 2:
        raise DomainError("matrix must be given as 'm00,m01;m10,m11'")
    return [_point(r, cfg) for r in rows]


def _read_points(args, cfg: Config) -> list:
    if args.points:
        return [_point(p, cfg) for p in args.points.split(";") if p.strip()]
    if args.input:
        with open(args.input, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
            raise DomainError(f"{args.input}: expected a CSV with header x,y")
        return [_point(",".join(r), cfg) for r in rows[1:] if r]
    raise DomainError("give the vertices with --points or --input")


def _fmt(x) -> str:
    return format_scalar(x) if is_exact(x) else repr(float(x))


# -- output -------------------------------------------------------------------


class Emitter:
    def __init__(self, cfg: Config, out):
        self.cfg = cfg
        self.out = out

    @property
    def json(self) -> bool:
        return self.cfg.output == "json"

    def line(self, text: str) -> None:
        self.out.write(text + "\n")

    def obj(self, data) -> None:
        self.line(json.dumps(data, indent=2))

    def table(self, header: list[str], rows) -> None:
        if self.json:
            self.obj([dict(zip(header, r)) for r in rows])
            return
        w = csv.writer(self.out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- commands -----------------------------------------------------------------


def cmd_cf_eval(args, cfg, em):
    v = cf_core.eval_cf(_scalars(args.seq, cfg))
    if em.json:
        em.obj(v.to_json())
    else:
        em.line(str(v) if is_exact(v.p) and is_exact(v.q) else repr(v.value))


def cmd_cf_expand(args, cfg, em):
    x = _scalar(args.x, cfg)
    if is_exact(x):
        seq = cf_core.expand_rational(x, args.parity)
    else:
        seq = cf_core.expand_real(x, args.max_terms, args.stop_tol)
    out = cf_core.serialize_seq(seq)
    em.obj(out) if em.json else em.line(",".join(out))


def cmd_cf_continuants(args, cfg, em):
    pairs = cf_core.continuants(_scalars(args.seq, cfg))
    em.table(["k", "P", "Q"], [(k, _fmt(pq.p), _fmt(pq.q)) for k, pq in enumerate(pairs)])


def cmd_sail_compute(args, cfg, em):
    alpha = _scalar(args.alpha, cfg)
    res = lattice_sail.sail_of_real(alpha, args.max_den) if not is_exact(alpha) else lattice_sail.sail(alpha)
    if em.json:
        em.obj(res.to_json())
    elif args.lls:
        em.line(",".join(cf_core.serialize_seq(res.lls)))
    else:
        em.table(["x", "y"], res.vertices)


def _frame(args, cfg):
    return polyline.Frame(A0=_point(args.A0, cfg), v=_point(args.v, cfg), O=_point(args.O, cfg))


def _emit_poly(poly, em):
    if em.json:
        em.obj(poly.to_json())
    else:
        for row in poly.to_csv_rows():
            em.line(row)


def cmd_polyline_build(args, cfg, em):
    _emit_poly(polyline.build(_frame(args, cfg), _scalars(args.seq, cfg)), em)


def cmd_polyline_lls(args, cfg, em):
    poly = polyline.Polyline(_read_points(args, cfg), _point(args.O, cfg))
    seq = polyline.lls_of(poly, cfg.tol("collinear"))
    out = [_fmt(a) for a in seq]
    em.obj(out) if em.json else em.line(",".join(out))


def cmd_polyline_closed(args, cfg, em):
    closed = polyline.is_closed(_scalars(args.seq, cfg), cfg.tol("closure"))
    em.obj(closed) if em.json else em.line("true" if closed else "false")


def cmd_polyline_transform(args, cfg, em):
    poly = polyline.Polyline(_read_points(args, cfg), _point(args.O, cfg))
    _emit_poly(polyline.transform(poly, _matrix(args.matrix, cfg)), em)


def cmd_polyline_endpoint(args, cfg, em):
    pq = polyline.endpoint_pair(_scalars(args.seq, cfg))
    if em.json:
        em.obj({"P": _fmt(pq.p), "Q": _fmt(pq.q), "endpoint": [_fmt(pq.q), _fmt(pq.p)]})
    else:
        em.table(["P", "Q"], [(_fmt(pq.p), _fmt(pq.q))])


def _preset_params(args) -> dict:
    params = {}
    if args.a is not None:
        params["a"] = args.a
    b = args.spiral_b if args.preset == "log_spiral" and args.spiral_b is not None else args.b
    if b is not None:
        if args.preset == "line":
            raise DomainError("the line preset takes only --a")
        params["b"] = b
    return params


def _preset(args):
    return curve_density.preset(args.preset, **_preset_params(args))


def cmd_density_sample(args, cfg, em):
    p = _preset(args)
    lo, hi = p.curve.domain
    if args.n < 1:
        raise DomainError("--n must be positive")
    ts = [lo + (hi - lo) * i / args.n for i in range(args.n + (0 if args.periodic else 1))]
    rows = curve_density.sample(p.curve, p.O, ts)
    em.table(["t", "x", "y", "A", "B", "kappa"],
             [(s.t, s.x, s.y, s.A, s.B, s.kappa) for s in rows])


def cmd_density_discretize(args, cfg, em):
    p = _preset(args)
    c = curve_density.by_arclength(p.curve)
    areas, angles = curve_density.discretize(c, p.O, args.n)
    rows = []
    for v, a, b in areas.cells():
        mid = 0.5 * (a + b)
        bval = angles(mid)
        rows.append((a, b, float(v), "" if math.isnan(bval) else float(bval)))
    em.table(["s0", "s1", "A_hat", "B_hat"], rows)


def cmd_density_sector(args, cfg, em):
    p = _preset(args)
    lo, hi = p.curve.domain
    t0 = lo if args.t0 is None else args.t0
    t1 = hi if args.t1 is None else args.t1
    area = curve_density.sector_area(p.curve, p.O, t0, t1, cfg.tol("quad_rtol"))
    em.obj({"sector_area": area}) if em.json else em.line(repr(area))


def cmd_density_kepler_lambda(args, cfg, em):
    k = curve_density.kepler_lambda(args.a, args.b, args.T_e, args.a_e)
    row = {"lambda": k.lam, "length": k.length, "inverse_density_integral": k.inverse_density_integral,
           "period": k.period}
    em.obj(row) if em.json else em.table(list(row), [list(row.values())])


def _read_table(path: str):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "A"]:
        raise DomainError(f"{path}: expected a CSV with header t,A")
    try:
        data = [(float(r[0]), float(r[1])) for r in rows[1:] if r]
    except (ValueError, IndexError):
        raise DomainError(f"{path}: malformed row") from None
    return kepler_reconstruct.TableDensity([d[0] for d in data], [d[1] for d in data])


def cmd_reconstruct_run(args, cfg, em):
    tol = cfg.tol("switch_tol")
    if args.table:
        A = _read_table(args.table)
        if args.r0 is None:
            raise DomainError("--table needs the start radius --r0")
        span = A.span if args.span is None else args.span
        if span > A.span + 1e-12:
            raise DomainError(f"span {span} exceeds the table range {A.span}")
        start = kepler_reconstruct.PolarState(args.r0, args.phi0, args.branch)
        spec = kepler_reconstruct.ReconstructionSpec(A, start, span, args.step, tol)
    elif args.preset:
        spec = kepler_reconstruct.preset_problem(args.preset, _preset_params(args), args.span, args.step,
                                                 args.t_start, tol, args.reverse).spec
    else:
        raise DomainError("give a density with --preset or --table")
    rec = kepler_reconstruct.reconstruct(spec)
    em.table(["t", "x", "y", "r", "phi", "branch"], list(rec.rows()))


def cmd_reconstruct_roundtrip(args, cfg, em):
    rt = kepler_reconstruct.roundtrip_error(args.preset, _preset_params(args), args.span, args.step,
                                            args.t_start, cfg.tol("switch_tol"), args.reverse)
    row = {"error": rt.error, "steps": rt.steps, "evaluations": rt.evaluations,
           "events": len(rt.events), "start_param": rt.start_param}
    em.obj(row) if em.json else em.table(list(row), [list(row.values())])


# -- reproduction of the worked examples --------------------------------------


def _repro_checks(cfg: Config):
    """Yield ``(name, ok, detail)`` for every worked example."""
    F = Fraction
    PR = cf_core.ProjectiveRatio

    def check(name, fn):
        try:
            ok, detail = fn()
        except (ValueError, ArithmeticError, RuntimeError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        return name, ok, detail

    def figure_values():
        v1 = cf_core.eval_cf([2, -1, 3, -2, 1])
        v2 = cf_core.eval_cf([1, -2, 2, F(-1, 2), -4])
        return v1 == PR(0, 1) and v2 == PR(-1, 1), f"{v1}, {v2}"

    def triangle():
        seq = [2, -1, 3, -2, 1]
        poly = polyline.build(polyline.Frame.normalized(), seq)
        end = poly.vertices[-1]
        cond = polyline.triangle_conditions([F(a) for a in seq])
        ok = end == (1, 0) and polyline.is_closed(seq) and cond == (0, 1)
        return ok, f"A3={tuple(map(str, end))}, conditions={tuple(map(str, cond))}"

    def three_term_example():
        a, b, c = 1, 2, 2
        end = polyline.build(polyline.Frame.normalized(), [a, b, c]).vertices[-1]
        return end == (1 + b * c, a + c + a * b * c), f"A2={tuple(map(str, end))}"

    def sail_7_5():
        s = lattice_sail.sail(F(7, 5))
        ok = s.vertices == [(1, 0), (1, 1), (5, 7)] and s.lls == [1, 2, 2]
        return ok, f"vertices={s.vertices}, lls={[str(x) for x in s.lls]}"

    def sail_roundtrip():
        rng = random.Random(cfg.seed)
        bad = []
        for _ in range(20):
            q = rng.randint(1, 60)
            p = rng.randint(q, 20 * q - 1)
            alpha = F(p, q)
            lls = lattice_sail.sail(alpha).lls
            if cf_core.eval_cf(lls) != PR(alpha.numerator, alpha.denominator):
                bad.append(str(alpha))
        return not bad, f"seed {cfg.seed}, mismatches {bad}"

    def close(x, y, tol=1e-12):
        return abs(x - y) <= tol * max(1.0, abs(y))

    def line_preset():
        p = curve_density.preset("line", a=3.0)
        vals = [(float(p.areal(t)), float(p.angular(t))) for t in (-1.0, 0.0, 2.5)]
        return all(close(a, 3.0) and b == 0 for a, b in vals), f"(A, B)={vals}"

    def ellipse_center():
        a, b = 2.0, 1.0
        p = curve_density.preset("ellipse_center", a=a, b=b)
        A0, B0 = float(p.areal(0.0)), float(p.angular(0.0))
        ratios = [float(p.areal(t) / p.angular(t)) for t in (0.3, 1.1, 2.9)]
        ok = close(A0, a) and close(B0, 1 / (a * b * b)) and all(close(r, a * a * b * b) for r in ratios)
        return ok, f"A(0)={A0}, B(0)={B0}, A/B={ratios[0]}"

    def ellipse_focus():
        p = curve_density.preset("ellipse_focus", a=2.0, b=1.0)
        A0 = float(p.areal(0.0))
        return close(A0, 2 + math.sqrt(3)), f"A(0)={A0}"

    def spiral():
        b = 0.1
        p = curve_density.preset("log_spiral", a=1.0, b=b)
        vals = [float(p.areal(t) ** 3 * p.angular(t)) for t in (0.0, 1.0, 4.0)]
        circle = curve_density.preset("log_spiral", a=1.0, b=0.0)
        ok = all(close(v, 1 / (1 + b * b)) for v in vals)
        ok = ok and close(float(circle.areal(0.7)), 1.0) and close(float(circle.angular(0.7)), 1.0)
        return ok, f"A^3 B={vals[0]}"

    def density_identity():
        worst = 0.0
        for name, params in (("ellipse_center", {"a": 2.0, "b": 1.0}), ("ellipse_focus", {"a": 2.0, "b": 1.0}),
                             ("log_spiral", {"a": 1.0, "b": 0.1})):
            p = curve_density.preset(name, **params)
            for t in (0.2, 1.3, 2.6, 4.1):
                a = float(curve_density.areal_density(p.curve, p.O, t))
                worst = max(worst, abs(a * a * float(p.angular(t)) - float(curve_density.curvature(p.curve, t))))
        return worst <= 1e-8, f"max |A^2 B - kappa| = {worst:.2e}"

    yield check("figure values [2,-1,3,-2,1] = 0/1, [1,-2,2,-1/2,-4] = -1/1", figure_values)
    yield check("triangle closure of [2,-1,3,-2,1]", triangle)
    yield check("broken line [a,b,c] ends at (1+bc, a+c+abc)", three_term_example)
    yield check("sail of 7/5", sail_7_5)
    yield check("sail LLS evaluates back to alpha", sail_roundtrip)
    yield check("line preset A = a, B = 0", line_preset)
    yield check("ellipse about its center", ellipse_center)
    yield check("ellipse about a focus", ellipse_focus)
    yield check("logarithmic spiral A^3 B = 1/(1+b^2)", spiral)
    yield check("curvature identity A^2 B = kappa", density_identity)


def cmd_paper_repro(args, cfg, em):
    t0 = time.perf_counter()
    results = list(_repro_checks(cfg))
    if em.json:
        em.obj([{"check": n, "pass": ok, "detail": d} for n, ok, d in results])
    else:
        for name, ok, detail in results:
            em.line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        em.line(f"{sum(ok for _, ok, _ in results)}/{len(results)} passed in {time.perf_counter() - t0:.2f}s")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--config", default=argparse.SUPPRESS, help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--mode", choices=["exact", "float"], default=argparse.SUPPRESS)
    g.add_argument("--output", choices=["csv", "json"], default=argparse.SUPPRESS)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--tol", action="append", metavar="NAME=VALUE", default=argparse.SUPPRESS,
                   help=f"tolerance override, one of {', '.join(DEFAULT_TOLERANCES)}")
    g.add_argument("-o", "--out", default=argparse.SUPPRESS, help="write to this file instead of stdout")
    return p


def _preset_args(p, required=True):
    p.add_argument("--preset", choices=sorted(curve_density.PRESETS), required=required)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--spiral-b", type=float, help="growth rate of the log spiral (alias of --b)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cfgeom", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    cf = groups.add_parser("cf", help="continued fractions").add_subparsers(dest="command", required=True)
    p = leaf(cf, "eval", cmd_cf_eval, "value of a continued fraction")
    p.add_argument("--seq", required=True, help='elements, e.g. "2,-1,3,-1/2"')
    p = leaf(cf, "expand", cmd_cf_expand, "ordinary expansion of a number")
    p.add_argument("--x", required=True)
    p.add_argument("--parity", choices=["odd", "even"], default="odd")
    p.add_argument("--max-terms", type=int, default=20)
    p.add_argument("--stop-tol", type=float, default=1e-9, help="stop once the fractional part is below this")
    p = leaf(cf, "continuants", cmd_cf_continuants, "continuant pairs of every prefix")
    p.add_argument("--seq", required=True)

    sail = groups.add_parser("sail", help="sails of integer cones").add_subparsers(dest="command", required=True)
    p = leaf(sail, "compute", cmd_sail_compute, "sail of the cone C_alpha")
    p.add_argument("--alpha", required=True, help="p/q >= 1, or a decimal (uses a convergent)")
    p.add_argument("--max-den", type=int, default=1000)
    p.add_argument("--lls", action="store_true", help="print only the LLS-sequence")

    pl = groups.add_parser("polyline", help="broken lines").add_subparsers(dest="command", required=True)
    p = leaf(pl, "build", cmd_polyline_build, "broken line from an LLS-sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--A0", default="1,0")
    p.add_argument("--v", default="0,1")
    p.add_argument("--O", default="0,0")
    for name, fn, help_ in (("lls", cmd_polyline_lls, "LLS-sequence of a broken line"),
                            ("transform", cmd_polyline_transform, "image under a linear map")):
        p = leaf(pl, name, fn, help_)
        p.add_argument("--points", help='vertices "x,y;x,y;..."')
        p.add_argument("--input", help="CSV file with header x,y")
        p.add_argument("--O", default="0,0")
        if name == "transform":
            p.add_argument("--matrix", required=True, help='"m00,m01;m10,m11"')
    p = leaf(pl, "closed", cmd_polyline_closed, "does the broken line close up")
    p.add_argument("--seq", required=True)
    p = leaf(pl, "endpoint", cmd_polyline_endpoint, "continuant pair (P, Q); the end vertex is (Q, P)")
    p.add_argument("--seq", required=True)

    den = groups.add_parser("density", help="areal and angular densities").add_subparsers(dest="command",
                                                                                           required=True)
    p = leaf(den, "sample", cmd_density_sample, "CSV samples t,x,y,A,B,kappa")
    _preset_args(p)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--periodic", action="store_true", help="omit the duplicate end sample")
    p = leaf(den, "discretize", cmd_density_discretize, "normalized step densities of n chords")
    _preset_args(p)
    p.add_argument("--n", type=int, default=64)
    p = leaf(den, "sector", cmd_density_sector, "sector area swept between two parameters")
    _preset_args(p)
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p = leaf(den, "kepler-lambda", cmd_density_kepler_lambda, "speed factor for an elliptic orbit")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--T-e", dest="T_e", type=float, default=1.0)
    p.add_argument("--a-e", dest="a_e", type=float, default=1.0)

    rc = groups.add_parser("reconstruct", help="curves from areal density").add_subparsers(dest="command",
                                                                                           required=True)
    for name, fn, help_ in (("run", cmd_reconstruct_run, "integrate and print t,x,y,r,phi,branch"),
                            ("roundtrip", cmd_reconstruct_roundtrip, "reconstruct a preset and compare")):
        p = leaf(rc, name, fn, help_)
        _preset_args(p, required=(name == "roundtrip"))
        p.add_argument("--span", type=float)
        p.add_argument("--step", type=float, default=1e-4)
        p.add_argument("--t-start", type=float)
        p.add_argument("--reverse", action="store_true", help="traverse the arc backwards")
        if name == "run":
            p.add_argument("--table", help="CSV with header t,A (linearly interpolated)")
            p.add_argument("--r0", type=float)
            p.add_argument("--phi0", type=float, default=0.0)
            p.add_argument("--branch", type=int, choices=[1, -1], default=1)

    paper = groups.add_parser("paper", help="worked examples").add_subparsers(dest="command", required=True)
    leaf(paper, "repro", cmd_paper_repro, "check every worked example, print PASS/FAIL")
    return parser


def _config_for(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    flags = {k: getattr(args, k) for k in ("mode", "output", "seed") if hasattr(args, k)}
    tols = {}
    for item in getattr(args, "tol", None) or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            tols[name.strip()] = float(value)
        except ValueError:
            raise DomainError(f"--tol {name}: {value!r} is not a number") from None
    if tols:
        flags["tolerances"] = tols
    cfg.update(flags, "command line")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_for(args)
        buf = io.StringIO()
        status = args.func(args, cfg, Emitter(cfg, buf)) or EXIT_OK
    except DomainError as exc:
        print(f"cfgeom: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"cfgeom: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"cfgeom: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        try:
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        except BrokenPipeError:
            # downstream reader (e.g. head) closed early; not an error
            sys.stdout = None
    return status


if __name__ == "__main__":
    sys.exit(main())

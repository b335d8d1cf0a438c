"""Command-line front end.

Exit status: 0 all assertions pass, 1 an assertion failed, 2 bad input,
3 an infinite weight fiber or an exhausted search window.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import cache as cache_mod
from .bundle import BundleSpec, build, lift_object, verify_theorem
from .cech import WeightSelector
from .ext import OracleDisagreement, ext, gram
from .fan import FanError, SimplicialComplex, StackyPresentation, validate
from .fm import (
    NonIntegralSolution,
    WallCrossingScenario,
    WindowExhausted,
    base_twist_compatibility,
    check_crepant,
    check_pairing_preservation,
    pulls_back,
    sample_pairs,
    twist_window,
    KClass,
)
from .lattice import NonFinite
from .objects import ExceptionalObject, decode
from .sod import check_sod, line_bundle, spanning_detect, stratum_probes, window
from .space import Space

log = logging.getLogger("toricsod")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    def __init__(self, pointer, msg):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {msg}")


# ---- input ---------------------------------------------------------------


def _need(data, key, ptr, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise InputError(ptr, f"missing required key '{key}'")
    val = data[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"{ptr}/{key}", f"expected {getattr(kind, '__name__', kind)}")
    return val


def _int_matrix(rows, ptr, width=None):
    if not isinstance(rows, list):
        raise InputError(ptr, "expected a list of integer rows")
    for i, r in enumerate(rows):
        if not isinstance(r, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError(f"{ptr}/{i}", "expected a list of integers")
        if width is not None and len(r) != width:
            raise InputError(f"{ptr}/{i}", f"expected {width} entries, got {len(r)}")


def check_complex(data, ptr):
    n = _need(data, "n", ptr, int)
    if n < 0:
        raise InputError(f"{ptr}/n", "must be nonnegative")
    faces = _need(data, "max_faces", ptr, list)
    for i, f in enumerate(faces):
        if not isinstance(f, list) or not all(isinstance(x, int) for x in f):
            raise InputError(f"{ptr}/max_faces/{i}", "expected a list of integers")
        for j, x in enumerate(f):
            if not 1 <= x <= n:
                raise InputError(f"{ptr}/max_faces/{i}/{j}", f"index {x} outside 1..{n}")
    seen = [frozenset(f) for f in faces]
    for i, a in enumerate(seen):
        for j, b in enumerate(seen):
            if i != j and a <= b:
                raise InputError(f"{ptr}/max_faces/{i}", f"face {sorted(a)} is contained in face {sorted(b)} (/max_faces/{j})")
    cx = SimplicialComplex.from_json(data)
    bad = validate(cx)
    if bad:
        raise InputError(f"{ptr}/max_faces", bad)
    return cx


def check_presentation(data, ptr):
    cx = check_complex(data, ptr)
    _int_matrix(data.get("weights", []), f"{ptr}/weights", cx.n)
    for i, t in enumerate(data.get("torsion", [])):
        _int_matrix([_need(t, "row", f"{ptr}/torsion/{i}", list)], f"{ptr}/torsion/{i}/row", cx.n)
        if _need(t, "mod", f"{ptr}/torsion/{i}", int) < 2:
            raise InputError(f"{ptr}/torsion/{i}/mod", "modulus must be >= 2")
    return StackyPresentation.from_json(data)


def _kind(data):
    if "kind" in data:
        return data["kind"]
    if "rays_shared" in data:
        return "scenario"
    if "fiber" in data:
        return "bundle"
    return "space"


def parse_input(data):
    """Space, TotalSpace or WallCrossingScenario from a decoded JSON document."""
    if not isinstance(data, dict):
        raise InputError("", "expected a JSON object")
    kind = _kind(data)
    if kind == "space":
        cx = check_complex(_need(data, "complex", "", dict), "/complex")
        if "selector" in data:
            sel = data["selector"]
            _int_matrix(sel.get("free_rows", []), "/selector/free_rows", cx.n)
            try:
                selector = WeightSelector.from_json({"size": cx.n, **sel})
            except (ValueError, KeyError) as exc:
                raise InputError("/selector", str(exc)) from None
            return Space(data.get("name", "space"), cx, selector)
        return Space.equivariant(data.get("name", "space"), cx)
    if kind == "bundle":
        base = check_presentation(_need(data, "base", "", dict), "/base")
        fiber = check_complex(_need(data, "fiber", "", dict), "/fiber")
        _int_matrix(data.get("twist", []), "/twist", fiber.n)
        try:
            return build(BundleSpec.from_json(data))
        except FanError as exc:
            raise InputError("/twist", str(exc)) from None
    if kind == "scenario":
        N = _need(data, "N", "", int)
        _int_matrix(_need(data, "rays_shared", "", list), "/rays_shared")
        if len(data["rays_shared"]) != N:
            raise InputError("/rays_shared", f"expected {N} rays")
        for key in ("complex_minus", "complex_plus"):
            check_complex(_need(data, key, "", dict), f"/{key}")
        if "complex_tilde" in data:
            check_complex(data["complex_tilde"], "/complex_tilde")
        try:
            sc = WallCrossingScenario.from_json(data)
        except (ValueError, KeyError) as exc:
            raise InputError("", str(exc)) from None
        bad = sc.check()
        if bad:
            raise InputError("/complex_tilde", bad)
        return sc
    raise InputError("/kind", f"unknown kind '{kind}'")


def load_input(path):
    p = Path(path)
    if not p.exists():
        from importlib import resources

        shipped = resources.files("toricsod").joinpath("data", p.name if p.suffix else p.name + ".json")
        if shipped.is_file():
            return parse_input(json.loads(shipped.read_text(encoding="utf-8")))
        raise InputError("", f"no such file: {path}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError("", f"invalid JSON: {exc}") from None
    return parse_input(data)


def parse_window(text, n):
    """``lo..hi`` for every axis, or one comma-separated ``lo..hi`` per axis."""
    parts = text.split(",")
    out = []
    for part in parts:
        m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", part)
        if not m:
            raise InputError("--window", f"cannot parse '{part}', expected lo..hi")
        out.append((int(m.group(1)), int(m.group(2))))
    if len(out) == 1:
        out = out * n
    if len(out) != n:
        raise InputError("--window", f"{len(out)} ranges for {n} axes")
    return out


def parse_object(text, n, flag):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(flag, f"invalid JSON: {exc}") from None
    try:
        obj = ExceptionalObject.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(flag, f"expected {{\"I\": [...], \"p\": [...]}} or {{\"a\": [...]}} ({exc})") from None
    if obj.n != n:
        raise InputError(f"{flag}/p", f"expected {n} entries, got {obj.n}")
    return obj


# ---- reporting -----------------------------------------------------------


class Report:
    def __init__(self, fmt, header):
        self.fmt = fmt
        self.records = [{"kind": "header", "inputs": header}]
        self.lines = [f"# {k}: {v}" for k, v in header.items()]

    def add(self, kind, payload, text=None):
        self.records.append({"kind": kind, **payload})
        if text is not None:
            self.lines.append(text)

    def render(self) -> str:
        if self.fmt == "machine":
            return "".join(json.dumps(r, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n" for r in self.records)
        return "\n".join(self.lines) + "\n"


def _fmt_matrix(m):
    return "\n".join("  [" + " ".join(f"{x:>3}" for x in row) + "]" for row in m)


# ---- commands ------------------------------------------------------------


def _fiber_n(target):
    return target.n_fiber if hasattr(target, "n_fiber") else target.n


def cmd_validate(target, args, rep):
    rep.add("verdict", {"ok": True, "input": type(target).__name__}, f"ok: {type(target).__name__}")
    return True


def cmd_ext(target, args, rep):
    n = _fiber_n(target)
    A = parse_object(args.A, n, "--A")
    B = parse_object(args.B, n, "--B")
    twist = None
    if hasattr(target, "n_fiber"):
        A, B = lift_object(target, A), lift_object(target, B)
    if args.twist:
        twist = tuple(json.loads(args.twist))
        if len(twist) != target.n:
            raise InputError("--twist", f"expected {target.n} entries")
    t = ext(target, A, B, twist, check=args.oracle_fraction > 0)
    rep.add("ext", {"A": str(A), "B": str(B), "twist": list(twist) if twist else None, "table": t.to_json()},
            f"Ext({A}, {B}) = {t!r}")
    return True


def _labels(target, args):
    n = _fiber_n(target)
    return window(n, parse_window(args.window or "0..1", n))


def cmd_gram(target, args, rep):
    labels = _labels(target, args)
    objs = [decode(a) for a in labels if target.complex.is_face(decode(a).I)] if not hasattr(target, "n_fiber") else [
        lift_object(target, decode(a)) for a in labels if target.complex.is_face(lift_object(target, decode(a)).I)]
    g = gram(target, objs, oracle_fraction=args.oracle_fraction, seed=args.seed)
    for i, a in enumerate(g.objects):
        for j, b in enumerate(g.objects):
            rep.add("entry", {"A": str(a), "B": str(b), "table": g.tables[i][j].to_json()})
    rep.add("euler", {"objects": [str(o) for o in g.objects], "matrix": g.euler}, "Euler matrix:\n" + _fmt_matrix(g.euler))
    return True


def cmd_sod(target, args, rep):
    r = check_sod(target, _labels(target, args), oracle_fraction=args.oracle_fraction)
    rep.add("sod", r.to_json(), (
        f"objects: {len(r.labels)}  zero objects: {len(r.zero_objects)}\n"
        f"exceptional: {'all' if r.exceptional_ok else 'NOT all'}\n"
        f"vanishing: {r.asserted - len(r.vanishing_failures)}/{r.asserted} dominant pairs vanish\n"
        + "".join(f"  FAIL {f.a} > {f.b}: {f.table!r}\n" for f in r.vanishing_failures)
        + f"ties: {len(r.ties)} (informational)\n"
        f"unitriangular Euler matrix (necessary for fullness): {r.unitriangular()}"))
    return r.ok


def cmd_bundle(target, args, rep):
    if not hasattr(target, "n_fiber"):
        raise InputError("/kind", "bundle-check needs a bundle input")
    lo, hi = parse_window(args.base_window, 1)[0]
    r = verify_theorem(target, _labels(target, args), (lo, hi), oracle=args.oracle_fraction >= 1)
    rep.add("bundle", r.to_json(), (
        f"fiber objects: {len(r.labels)}  base twists: {len(r.base_twists)}\n"
        f"vanishing: {r.asserted - len(r.failures)}/{r.asserted}\n"
        + "".join(f"  FAIL {f['a']} > {f['b']} twist {f['base_twist']}: {f['ext']}\n" for f in r.failures[:20])
        + f"block tables match base: {r.blocks_checked - len(r.block_mismatches)}/{r.blocks_checked}\n"
        f"base Euler matrix of (O, O(1)):\n{_fmt_matrix(r.base_euler)}"))
    return r.ok


def cmd_span(target, args, rep):
    n = _fiber_n(target)
    box = parse_window(args.window or "-2..2", n)
    if hasattr(target, "n_fiber"):
        from .bundle import base_twists

        lo, hi = parse_window(args.base_window, 1)[0]
        family = [(lift_object(target, line_bundle(d)), tw) for d in window(n, box) for tw in base_twists(target, lo, hi)]
    else:
        family = [line_bundle(d) for d in window(n, box)]
    probes = stratum_probes(target, include_zero=True)
    r = spanning_detect(target, family, probes)
    rep.add("span", r.to_json(), "\n".join(
        [f"{p}: {'detected' if ok else 'NOT detected'}" for p, ok in r.detected.items()]
        + [f"{p}: zero object" for p in r.zero_probes]))
    return r.ok


def cmd_fm(target, args, rep):
    if not isinstance(target, WallCrossingScenario):
        raise InputError("/kind", "fm-check needs a scenario input")
    ok = True
    c = check_crepant(target)
    rep.add("crepant", c.to_json(), f"crepant: {c.ok}" + (f"  witness {c.witness}" if c.witness else ""))
    ok &= c.ok
    if not c.ok:
        return False
    lo, hi = parse_window(args.window or "-2..2", 1)[0]
    if target.nb:
        blo, bhi = parse_window(args.base_window, 1)[0]
        W = twist_window(target, lo, hi, blo, bhi)
        pairs = sample_pairs(target, args.samples, W, seed=args.seed)
    else:
        W = [d for d in twist_window(target, lo, hi) if pulls_back(target, d)]
        pairs = [(KClass.line(a), KClass.line(b)) for a in W for b in W]
    r = check_pairing_preservation(target, pairs)
    rep.add("pairing", r.to_json(), f"pairing preserved: {r.checked - len(r.failures)}/{r.checked}")
    ok &= r.ok
    if target.nb:
        for d in W[: args.samples]:
            if not pulls_back(target, d):
                continue
            comp = base_twist_compatibility(target, KClass.line(d))
            rep.add("base_twist", comp)
            ok &= comp["ok"]
        rep.lines.append("base-twist compatibility: " + ("ok" if ok else "FAILED"))
    return ok


def cmd_cache(args):
    c = cache_mod.TableCache(args.cache_dir)
    if args.action == "gc":
        removed = c.gc()
        print(f"removed {removed} entries")
    else:
        print(f"entries: {c.entries()}")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "ext": cmd_ext,
    "gram": cmd_gram,
    "sod-check": cmd_sod,
    "bundle-check": cmd_bundle,
    "span-check": cmd_span,
    "fm-check": cmd_fm,
}


def build_parser():
    p = argparse.ArgumentParser(prog="toricsod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", required=True, help="JSON file, or the name of a shipped example")
        s.add_argument("--window", help="lo..hi for every axis, or lo..hi,lo..hi,...")
        s.add_argument("--base-window", default="-2..2", help="base twist range for bundle inputs")
        s.add_argument("--oracle-fraction", type=float, default=0.0)
        s.add_argument("--cache-dir")
        s.add_argument("--report")
        s.add_argument("--format", choices=("table", "machine"), default="table")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=50)
        if name == "ext":
            s.add_argument("--A", required=True)
            s.add_argument("--B", required=True)
            s.add_argument("--twist")
    c = sub.add_parser("cache")
    c.add_argument("action", choices=("gc", "stats"))
    c.add_argument("--cache-dir", required=True)
    return p


def _normalize(argv):
    """Let window values start with a minus sign: ``--window -1..1``."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--window", "--base-window"):
            val = next(it, None)
            out.append(f"{tok}={val}" if val is not None else tok)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(_normalize(sys.argv[1:] if argv is None else list(argv)))
    if args.command == "cache":
        return cmd_cache(args)
    if not 0 <= args.oracle_fraction <= 1:
        print("error: --oracle-fraction must lie in [0, 1]", file=sys.stderr)
        return EXIT_INPUT
    cache = cache_mod.use(cache_mod.TableCache(args.cache_dir))
    header = {
        "command": args.command,
        "input": Path(args.input).name,
        "window": args.window,
        "base_window": args.base_window,
        "oracle_fraction": args.oracle_fraction,
        "seed": args.seed,
    }
    rep = Report(args.format, header)
    try:
        target = load_input(args.input)
        ok = COMMANDS[args.command](target, args, rep)
        status = EXIT_OK if ok else EXIT_FAIL
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleDisagreement as exc:
        rep.add("oracle_disagreement", {"A": str(exc.a), "B": str(exc.b), "formula": exc.formula.to_json(),
                                         "oracle": exc.oracle.to_json()}, f"ORACLE DISAGREEMENT: {exc}")
        status = EXIT_FAIL
    except NonFinite as exc:
        print(f"non-finite: {exc}", file=sys.stderr)
        rep.add("non_finite", {"ray": list(exc.ray), "context": exc.context})
        status = EXIT_RESOURCE
    except (WindowExhausted, NonIntegralSolution, MemoryError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        status = EXIT_RESOURCE
    out = rep.render()
    if args.report:
        Path(args.report).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    cache.write_manifest()
    print(f"cache: {cache.hits} hits, {cache.misses} misses, {cache.recomputed} recomputed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line frontend: generation, verification, graph analysis, recoding,
classification and rendering with bit-exact outputs.

Exit codes: 0 = success/proved, 1 = property refuted/FAIL, 2 = unknown or
inconclusive, 3 = usage error.  All randomness flows from --seed through
counter-based bit sources, so identical invocations give identical bytes;
the optional --manifest goes to stderr to keep stdout deterministic.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__, classify, generate, onedim, recode, render, verify, zoo
from .geometry import Point, Region, box, cube
from .patterns import Pattern, dumps_pattern, loads_pattern
from .sft import loads_tileset, lower_wang
from .zoo import named_spec

EXIT_PROVED = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class UsageError(ValueError):
    pass


def parse_point(text: str) -> Point:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}; expected comma-separated integers")


def parse_window(text: str, dimension: int = 2) -> Region:
    """2D windows are `WxH[@x,y]` (anchor = lower-left, default origin);
    1D windows are `a..b`."""
    if ".." in text:
        a, _, b = text.partition("..")
        try:
            lo, hi = int(a), int(b)
        except ValueError:
            raise UsageError(f"bad 1D window {text!r}")
        if hi < lo:
            raise UsageError(f"degenerate window {text!r}")
        return box((lo,), (hi,))
    size, _, anchor = text.partition("@")
    w, sep, h = size.partition("x")
    if not sep:
        raise UsageError(f"bad window {text!r}; expected WxH[@x,y] or a..b")
    try:
        width, height = int(w), int(h)
    except ValueError:
        raise UsageError(f"bad window {text!r}")
    if width < 1 or height < 1:
        raise UsageError(f"degenerate window {text!r}")
    x0, y0 = parse_point(anchor) if anchor else (0, 0)
    return box((x0, y0), (x0 + width - 1, y0 + height - 1))


def parse_alpha(text: str):
    """sqrt<N>-1, golden, or an exact rational p/q."""
    if text == "golden":
        s5 = generate.sqrt_interval(5)
        return generate.Interval((s5.lo - 1) / 2, (s5.hi - 1) / 2)
    if text.startswith("sqrt") and text.endswith("-1"):
        n = int(text[4:-2])
        s = generate.sqrt_interval(n)
        return generate.Interval(s.lo - 1, s.hi - 1)
    try:
        return Fraction(text)
    except ValueError:
        raise UsageError(f"bad alpha {text!r}; use sqrtN-1, golden, or p/q")


def _load_spec(args) -> "zoo.SftSpec":
    if getattr(args, "tiles", None):
        with open(args.tiles) as fh:
            return lower_wang(loads_tileset(fh.read()))
    try:
        return named_spec(args.spec)
    except KeyError as e:
        raise UsageError(str(e))


def _descriptor(kind: str, r: int, v: Point | None) -> generate.ConfigDescriptor:
    if kind == "triangle":
        return generate.TriangleRamification(r, v or (r + 2, 1))
    if kind == "domino":
        return generate.DominoRamification(r, v)
    if kind == "checkerboard":
        return generate.CheckerboardPhase(0)
    raise UsageError(f"unknown descriptor kind {kind!r}")


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_bytes(data: bytes, path: str | None):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _output_pattern(pattern: Pattern, spec, fmt: str, path: str | None, scale: int) -> int:
    if fmt == "pattern":
        _emit(dumps_pattern(pattern), path)
    elif fmt == "text":
        _emit(render.render_text(pattern, spec.alphabet.labels if spec else None), path)
    elif fmt == "pgm":
        _emit_bytes(render.render_pgm(pattern, scale), path)
    elif fmt == "ppm":
        if spec is None or spec.name not in ("wires", "corners", "dominoes"):
            raise UsageError("ppm output needs a Wang tileset spec")
        tiles = {
            "wires": zoo.wires_tileset(),
            "corners": zoo.corners_tileset(),
            "dominoes": zoo.domino_tileset(),
        }[spec.name]
        _emit_bytes(render.render_ppm_wang(pattern, tiles, scale), path)
    else:
        raise UsageError(f"unknown output format {fmt!r}")
    return EXIT_PROVED


# --- subcommand implementations -------------------------------------------------


def _cmd_gen(args) -> int:
    if args.generator == "wires":
        window = parse_window(args.window)
        pattern = generate.wires(generate.SeededBits(args.seed), window)
        return _output_pattern(pattern, zoo.wires_spec(), args.out, args.path, args.scale)
    if args.generator == "corners":
        window = parse_window(args.window)
        a = generate.SeededBits(args.seed, salt=1)
        b = generate.SeededBits(args.seed, salt=2)
        pattern = generate.corners(args.k, args.l, a, b, window)
        return _output_pattern(pattern, zoo.corners_spec(), args.out, args.path, args.scale)
    if args.generator == "descriptor":
        window = parse_window(args.window)
        desc = _descriptor(args.kind, args.r, parse_point(args.v) if args.v else None)
        pattern = generate.descriptor_eval(desc, window)
        spec = named_spec(desc.spec_name) if desc.spec_name else None
        return _output_pattern(pattern, spec, args.out, args.path, args.scale)
    if args.generator == "sturmian":
        window = parse_window(args.range, dimension=1)
        lo, hi = window.bounding_box()
        word = generate.sturmian(
            parse_alpha(args.alpha), Fraction(args.x), lo[0], hi[0], args.convention
        )
        _emit(" ".join(map(str, word)) + "\n", args.path)
        return EXIT_PROVED
    if args.generator == "separation":
        window = parse_window(args.range, dimension=1)
        lo, hi = window.bounding_box()
        prefix = [int(c) for c in args.prefix]
        word = generate.separation_map(prefix, lo[0], hi[0])
        _emit(" ".join(map(str, word)) + "\n", args.path)
        return EXIT_PROVED
    raise UsageError(f"unknown generator {args.generator!r}")


def _cmd_verify(args) -> int:
    spec = _load_spec(args)
    if args.kind == "validity":
        with open(args.pattern) as fh:
            pattern = loads_pattern(fh.read())
        cert = verify.certify_pattern(pattern, spec, args.max_n, args.period_bound)
        sys.stdout.write(verify.certificate_report(cert))
        if verify.is_positive(cert):
            return EXIT_PROVED
        if isinstance(cert, verify.InvalidWindow):
            return EXIT_REFUTED
        return EXIT_UNKNOWN
    if args.kind == "independence":
        f = parse_window(args.f)
        g = parse_window(args.g)
        verdict = verify.independent(f, g, spec, None, args.max_n, args.period_bound)
        sys.stdout.write(type(verdict).__name__ + "\n")
        if isinstance(verdict, verify.Independent):
            return EXIT_PROVED
        if isinstance(verdict, verify.Correlated):
            sys.stdout.write(verify.certificate_report(verdict.joint_refutation))
            return EXIT_REFUTED
        return EXIT_UNKNOWN
    if args.kind == "weakmix":
        candidates = [parse_point(c) for c in args.candidates.split(";")]
        offset = verify.weak_mixing_offset(spec, args.n, candidates, args.max_n, args.period_bound)
        if offset is None:
            sys.stdout.write("NotFound\n")
            return EXIT_UNKNOWN
        sys.stdout.write("p=" + ",".join(map(str, offset)) + "\n")
        return EXIT_PROVED
    if args.kind == "graft":
        desc = _descriptor(args.descriptor, args.r, parse_point(args.v) if args.v else None)
        with open(args.pattern) as fh:
            pattern = loads_pattern(fh.read())
        verdict = verify.can_graft(desc, pattern, parse_point(args.at), args.radius, spec)
        sys.stdout.write(type(verdict).__name__ + "\n")
        if isinstance(verdict, verify.Confirmed):
            return EXIT_PROVED
        if isinstance(verdict, verify.Refuted):
            return EXIT_REFUTED
        return EXIT_UNKNOWN
    if args.kind == "ramification":
        kind = {"triangles": "triangle", "dominoes": "domino", "checkerboard": "checkerboard"}.get(
            args.spec
        )
        if kind is None:
            raise UsageError("ramification verification knows triangles, dominoes, checkerboard")
        v = parse_point(args.v) if args.v else ((args.r + 2, 1) if kind == "triangle" else (args.r, args.r + 2))
        u = parse_point(args.u) if args.u else ((0, -1) if kind == "triangle" else (-1, 1))
        desc = _descriptor(kind, args.r, v)
        witness = verify.RamificationWitness(
            desc, args.r, u, v, Region.of([(0, 0)]), args.beta, args.K
        )
        report = verify.verify_ramification(witness, spec)
        sys.stdout.write(report.summary() + "\n")
        if report.passed:
            return EXIT_PROVED
        if any(isinstance(v_, verify.Confirmed) for _, v_ in report.verdicts) or not report.config_admissible:
            return EXIT_REFUTED
        return EXIT_UNKNOWN
    raise UsageError(f"unknown verify kind {args.kind!r}")


def _cmd_graph1d(args) -> int:
    with open(args.graph) as fh:
        graph = onedim.loads_graph(fh.read())
    if args.sub == "power":
        sys.stdout.write(onedim.dumps_graph(onedim.power_graph(graph, args.k)))
        return EXIT_PROVED
    if args.sub == "transitive":
        try:
            k = onedim.transitive_power(graph, args.cap)
        except onedim.NotFoundWithinCapError:
            sys.stdout.write("NotFoundWithinCap\n")
            return EXIT_UNKNOWN
        sys.stdout.write(f"k={k}\n")
        return EXIT_PROVED
    if args.sub == "condense":
        k = onedim.transitive_power(graph, args.cap)
        cond = onedim.condensation(onedim.power_graph(graph, k))
        sys.stdout.write(f"k={k}\n")
        for i, scc in enumerate(cond.sccs):
            sys.stdout.write(f"scc {i}: {' '.join(map(str, scc))}\n")
        sys.stdout.write(onedim.dumps_graph(cond.dag))
        return EXIT_PROVED
    if args.sub == "walk":
        k = args.k or onedim.transitive_power(graph)
        cond = onedim.condensation(onedim.power_graph(graph, k))
        window = parse_window(args.window, dimension=1)
        lo, hi = window.bounding_box()
        blocks = (lo[0] // k, hi[0] // k + 1)
        descriptors = onedim.enumerate_block_descriptors(cond.dag, blocks, args.max_blocks)
        if not descriptors:
            sys.stdout.write("EmptyLanguage\n")
            return EXIT_UNKNOWN
        descriptor = descriptors[args.descriptor % len(descriptors)]
        walk = onedim.generate_walk(
            graph,
            k,
            descriptor,
            lambda n: generate.hash_int(args.seed, n, salt=1),
            lambda n: generate.hash_int(args.seed, n, salt=2),
            (lo[0], hi[0]),
        )
        if walk is None:
            sys.stdout.write("EmptyLanguage\n")
            return EXIT_UNKNOWN
        sys.stdout.write(" ".join(map(str, walk)) + "\n")
        return EXIT_PROVED
    raise UsageError(f"unknown graph1d subcommand {args.sub!r}")


def _cmd_recode(args) -> int:
    if args.sub == "block":
        with open(args.pattern) as fh:
            pattern = loads_pattern(fh.read())
        a = recode.BlockVector(tuple(int(v) for v in args.a.split(",")))
        from .patterns import Alphabet

        alphabet = Alphabet.of_size(args.alphabet_size)
        sys.stdout.write(dumps_pattern(recode.higher_power_pattern(pattern, a, alphabet)))
        return EXIT_PROVED
    if args.sub == "intertwine":
        a = recode.BlockVector(tuple(int(v) for v in args.a.split(",")))
        parts = {}
        paths = args.parts.split(",")
        if len(paths) != a.volume():
            raise UsageError(f"need {a.volume()} parts for blocks {a.a}")
        for r, path in zip(a.rectangle(), paths):
            with open(path) as fh:
                parts[r] = loads_pattern(fh.read())
        window = parse_window(args.window, dimension=a.dimension)
        sys.stdout.write(dumps_pattern(recode.intertwine(parts, a, window)))
        return EXIT_PROVED
    if args.sub == "window":
        with open(args.table) as fh:
            fn = recode.loads_function(fh.read())
        cells = [recode._parse_cell(args.cell)] if args.cell else list(fn.outputs)
        for q in cells:
            w = recode.input_window(fn, q)
            cells_s = " ".join(",".join(map(str, p)) for p in w)
            sys.stdout.write(f"cell {','.join(map(str, q))}: window [{cells_s}] size {len(w)}\n")
        sys.stdout.write(f"narrowness radius {recode.narrowness_radius(fn)}\n")
        return EXIT_PROVED
    raise UsageError(f"unknown recode subcommand {args.sub!r}")


def _cmd_classify(args) -> int:
    if args.group == "auto":
        group = classify.auto_group()
    else:
        group = classify.SymmetryGroup.of(args.group.split("+") if args.group else ())
    reports = classify.classify_even(group, args.window_n, args.period_bound)
    sys.stdout.write(classify.format_census(reports, group, tsv=args.format == "tsv"))
    summary = classify.census_summary(reports)
    return EXIT_PROVED if summary.unknown == 0 else EXIT_UNKNOWN


def _cmd_render(args) -> int:
    with open(args.pattern) as fh:
        pattern = loads_pattern(fh.read())
    if args.tiles:
        with open(args.tiles) as fh:
            tiles = loads_tileset(fh.read())
        _emit_bytes(render.render_ppm_wang(pattern, tiles, args.scale), args.path)
    elif args.spec:
        spec = named_spec(args.spec)
        tiles = {
            "wires": zoo.wires_tileset(),
            "corners": zoo.corners_tileset(),
            "dominoes": zoo.domino_tileset(),
        }.get(spec.name)
        if tiles:
            _emit_bytes(render.render_ppm_wang(pattern, tiles, args.scale), args.path)
        else:
            _emit_bytes(render.render_pgm(pattern, args.scale), args.path)
    else:
        _emit_bytes(render.render_pgm(pattern, args.scale), args.path)
    return EXIT_PROVED


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subshifts", description=__doc__)
    p.add_argument("--manifest", action="store_true", help="emit a run manifest on stderr")
    p.add_argument("--version", action="version", version=f"subshifts {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate patterns and words")
    gsub = gen.add_subparsers(dest="generator", required=True)
    for name in ("wires", "corners", "descriptor"):
        g = gsub.add_parser(name)
        g.add_argument("--window", required=True, help="WxH[@x,y]")
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--out", default="text", choices=("text", "pattern", "pgm", "ppm"))
        g.add_argument("--path")
        g.add_argument("--scale", type=int, default=8)
        if name == "corners":
            g.add_argument("--k", type=int, default=0)
            g.add_argument("--l", type=int, default=0)
        if name == "descriptor":
            g.add_argument("--kind", required=True, choices=("triangle", "domino", "checkerboard"))
            g.add_argument("--r", type=int, default=2)
            g.add_argument("--v")
    st = gsub.add_parser("sturmian")
    st.add_argument("--alpha", required=True)
    st.add_argument("--x", default="0")
    st.add_argument("--range", required=True, help="a..b")
    st.add_argument("--convention", default="lower", choices=("lower", "upper"))
    st.add_argument("--path")
    sep = gsub.add_parser("separation")
    sep.add_argument("--prefix", required=True, help="bit string x0x1x2...")
    sep.add_argument("--range", required=True, help="a..b")
    sep.add_argument("--path")

    ver = sub.add_parser("verify", help="certify properties")
    ver.add_argument("kind", choices=("validity", "independence", "weakmix", "graft", "ramification"))
    ver.add_argument("--spec", default="")
    ver.add_argument("--tiles", help="tileset file instead of a named spec")
    ver.add_argument("--pattern", help="pattern file")
    ver.add_argument("--f", help="region window for independence")
    ver.add_argument("--g")
    ver.add_argument("--n", type=int, default=1)
    ver.add_argument("--candidates", default="0,1;0,2;0,3;0,4;0,5;0,6")
    ver.add_argument("--descriptor", choices=("triangle", "domino", "checkerboard"))
    ver.add_argument("--r", type=int, default=2)
    ver.add_argument("--v")
    ver.add_argument("--u")
    ver.add_argument("--at", default="0,0")
    ver.add_argument("--radius", type=int, default=1)
    ver.add_argument("--K", type=int, default=2)
    ver.add_argument("--beta", type=int, default=1)
    ver.add_argument("--max-n", type=int, default=4)
    ver.add_argument("--period-bound", type=int, default=6)

    g1 = sub.add_parser("graph1d", help="the 1D-SFT graph pipeline")
    g1.add_argument("sub", choices=("power", "transitive", "condense", "walk"))
    g1.add_argument("--graph", required=True)
    g1.add_argument("-k", "--k", type=int, default=0)
    g1.add_argument("--cap", type=int, default=None)
    g1.add_argument("--seed", type=int, default=0)
    g1.add_argument("--window", default="0..15")
    g1.add_argument("--descriptor", type=int, default=0)
    g1.add_argument("--max-blocks", type=int, default=3)

    rc = sub.add_parser("recode", help="higher-power and intertwining recodings")
    rc.add_argument("sub", choices=("block", "intertwine", "window"))
    rc.add_argument("--pattern")
    rc.add_argument("--alphabet-size", type=int, default=2)
    rc.add_argument("--a", default="2")
    rc.add_argument("--parts")
    rc.add_argument("--window", default="8x8")
    rc.add_argument("--table")
    rc.add_argument("--cell")

    cl = sub.add_parser("classify", help="the even-bicolor tileset census")
    cl.add_argument("--group", default="auto", help="'auto' or generator names joined with +")
    cl.add_argument("--auto-group", dest="group", action="store_const", const="auto")
    cl.add_argument("--window-n", type=int, default=6)
    cl.add_argument("--period-bound", type=int, default=6)
    cl.add_argument("--format", default="table", choices=("table", "tsv"))

    rd = sub.add_parser("render", help="render a pattern file to PGM/PPM")
    rd.add_argument("--pattern", required=True)
    rd.add_argument("--tiles")
    rd.add_argument("--spec")
    rd.add_argument("--scale", type=int, default=8)
    rd.add_argument("--path")

    return p


_DISPATCH = {
    "gen": _cmd_gen,
    "verify": _cmd_verify,
    "graph1d": _cmd_graph1d,
    "recode": _cmd_recode,
    "classify": _cmd_classify,
    "render": _cmd_render,
}


def run(args: argparse.Namespace) -> int:
    return _DISPATCH[args.command](args)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    started = time.time()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PROVED if e.code in (0, None) else EXIT_USAGE
    try:
        code = run(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.manifest:
        print(f"manifest: tool subshifts {__version__}", file=sys.stderr)
        print(f"manifest: argv {' '.join(argv)}", file=sys.stderr)
        print(f"manifest: seed {getattr(args, 'seed', None)}", file=sys.stderr)
        print(
            f"manifest: budgets max_n={getattr(args, 'max_n', None)} "
            f"period_bound={getattr(args, 'period_bound', None)}",
            file=sys.stderr,
        )
        print(f"manifest: wall_time {time.time() - started:.3f}s", file=sys.stderr)
        print(f"manifest: exit {code}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

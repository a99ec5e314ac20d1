"""Command-line front end.

Subcommands: decompose, barcode, kernel, spa-check, stats.  Exit codes
separate the failure families so fuzzing stays actionable: 2 for malformed
input text, 3 for well-formed but invalid input, 4 for internal invariant
violations, 1 for a failed spa-check comparison.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io as formats
from .barcode import PersistenceDiagram, diagram_from_pairs, diameter_witness, to_barcode
from .boundary import FilteredChainComplexInput
from .decomposition import count_emergent_and_apparent, decompose
from .errors import InternalInvariantError, ParseError, UsageError, ValidationError
from .field import PrimeField
from .kernel import decompose_kernel, kernel_boundary, kernel_generators
from .rips import build_rips, point_cloud_distances
from .spa import measured_row_iterations, predicted_row_iterations, spa_reduce

INPUT_FORMATS = ("distances-square", "distances-lower", "points", "filtration", "boundary")
EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 2, 3, 4


def _add_input_options(parser: argparse.ArgumentParser, many: bool = False) -> None:
    if many:
        parser.add_argument("inputs", nargs="+", help="input file(s)")
    else:
        parser.add_argument("input", help="input file")
    parser.add_argument("--format", default="distances-square", choices=INPUT_FORMATS)
    parser.add_argument(
        "--field", type=int, default=None,
        help="prime coefficient modulus (default 2; boundary files carry their own)",
    )
    parser.add_argument("--max-degree", type=int, default=2, help="top simplex dimension kept")
    parser.add_argument("--threshold", type=float, default=None, help="entrance-time cutoff")
    parser.add_argument(
        "--metric", default="l_inf", choices=("euclidean", "l_inf"), help="for points input"
    )
    parser.add_argument(
        "--order",
        default="entrance_then_degree",
        choices=("entrance_then_degree", "degree_then_entrance", "as_given"),
        help="generator total order",
    )
    parser.add_argument(
        "--strategy", default="entrance", choices=("entrance", "as-given"),
        help="row selection policy of the decomposition loop",
    )


def _load_complex(path: str, args) -> tuple[FilteredChainComplexInput, PrimeField]:
    text = Path(path).read_text()
    if args.format == "boundary":
        complex_input, field, _ = formats.parse_boundary_text(text)
        if args.field is not None and args.field != field.p:
            raise ValidationError(
                f"--field {args.field} conflicts with the file header field {field.p}"
            )
        return complex_input.sorted_by(args.order), field
    field = PrimeField(2 if args.field is None else args.field)
    if args.format == "filtration":
        complex_input = formats.parse_filtration(text).chain_complex()
    else:
        if args.format == "distances-square":
            distances = formats.parse_square_distances(text)
        elif args.format == "distances-lower":
            distances = formats.parse_lower_distances(text)
        else:
            distances = point_cloud_distances(formats.parse_points(text), args.metric)
        complex_input = build_rips(
            distances, args.max_degree, args.threshold
        ).chain_complex()
    return complex_input.sorted_by(args.order), field


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _decompose_one(path: str, args) -> str:
    complex_input, field = _load_complex(path, args)
    result = decompose(complex_input, field, strategy=args.strategy, trace=args.trace)
    text = formats.format_decomposition(result)
    if args.trace and result.trace is not None:
        lines = [text.rstrip("\n")] if text else []
        for event in result.trace.events:
            probe = event.probe
            lines.append(
                f"# split {probe.pair.row},{probe.pair.col} start={probe.start_row} "
                f"updates={probe.updates} exit={probe.exit_test} row_ops={len(event.row_ops)}"
            )
        text = "\n".join(lines) + "\n"
    return text


def _cmd_decompose(args) -> int:
    texts = _run_batch(args, _decompose_one)
    _deliver(args, texts, suffix=".spheres")
    return 0


def _cmd_barcode(args) -> int:
    complex_input, field = _load_complex(args.input, args)
    result = decompose(complex_input, field, strategy=args.strategy)
    diagram = to_barcode(result)
    _write(formats.format_diagram(diagram, args.include_zero_length), args.output)
    if args.plot:
        Path(args.plot).write_text(render_diagram_svg(diagram))
    return 0


def _cmd_kernel(args) -> int:
    domain = formats.parse_filtration(Path(args.domain).read_text())
    codomain = formats.parse_filtration(Path(args.codomain).read_text())
    maps = formats.parse_map_file(Path(args.map).read_text())
    field = PrimeField(args.field)
    generators = kernel_generators(domain, codomain, maps)
    boundary = kernel_boundary(domain, maps, generators)
    result = decompose(boundary.sorted_by(args.order), field, strategy=args.strategy)
    _write(formats.format_decomposition(result), args.output)
    return 0


def _cmd_spa_check(args) -> int:
    complex_input, field = _load_complex(args.input, args)
    spa_order = complex_input.sorted_by("entrance_then_degree")
    sphere_view = to_barcode(decompose(spa_order, field, strategy=args.strategy))
    pairs, _ = spa_reduce(spa_order, field, mode="plain")
    column_view = diagram_from_pairs(spa_order.labels, pairs)
    same_bars = sphere_view.multiset() == column_view.multiset()
    same_zero = sphere_view.zero_length == column_view.zero_length
    print(f"bars_match={str(same_bars).lower()}")
    print(f"zero_length_match={str(same_zero).lower()}")
    if same_bars and same_zero:
        print(f"bars={len(sphere_view.bars)} zero_length={sphere_view.zero_length_total()}")
        return 0
    for label, view in (("spheres", sphere_view), ("columns", column_view)):
        print(f"--- {label}")
        print(formats.format_diagram(view, include_zero_length=True), end="")
    return 1


def _cmd_stats(args) -> int:
    complex_input, field = _load_complex(args.input, args)
    spa_order = complex_input.sorted_by("entrance_then_degree")
    degree_order = complex_input.sorted_by("degree_then_entrance")
    traced = decompose(spa_order, field, trace=True)
    classes = count_emergent_and_apparent(traced)
    stats: dict[str, object] = {
        "generators": traced.generator_count,
        "finite_spheres": traced.finite_count(),
        "infinite_spheres": traced.infinite_count(),
        "apparent_pairs": classes.apparent,
        "emergent_facet_pairs": classes.emergent_facet,
        "emergent_cofacet_pairs": classes.emergent_cofacet,
        "row_iterations_plain": measured_row_iterations(degree_order, field, False),
        "row_iterations_compress": measured_row_iterations(degree_order, field, True),
    }
    for mode in ("plain", "clear", "compress"):
        _, reduction = spa_reduce(spa_order, field, mode=mode)
        stats[f"spa_{mode}_columns_processed"] = reduction.rows_processed
        stats[f"spa_{mode}_column_additions"] = reduction.column_additions
        stats[f"spa_{mode}_cleared"] = reduction.cleared
        stats[f"spa_{mode}_compressed"] = reduction.compressed
    full_rips = args.format in ("distances-square", "distances-lower", "points") and (
        args.threshold is None or args.threshold == math.inf
    )
    if full_rips:
        vertices = sum(1 for label in complex_input.labels if label.degree == 0)
        stats["predicted_rows_plain"] = predicted_row_iterations(
            vertices, args.max_degree, False
        )
        stats["predicted_rows_compress"] = predicted_row_iterations(
            vertices, args.max_degree, True
        )
    witness = diameter_witness(traced)
    if witness is not None:
        stats["diameter_witness"] = formats.format_time(witness)
    _write(formats.format_stats(stats), args.output)
    return 0


def _run_batch(args, worker) -> list[str]:
    paths = args.inputs
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_BatchWorker(worker, args), paths))
    return [worker(path, args) for path in paths]


class _BatchWorker:
    """Picklable wrapper so batch jobs can run in worker processes."""

    def __init__(self, worker, args):
        self.worker = worker
        self.args = args

    def __call__(self, path: str) -> str:
        return self.worker(path, self.args)


def _deliver(args, texts: list[str], suffix: str) -> None:
    if len(args.inputs) == 1:
        _write(texts[0], args.output)
        return
    if args.output is None:
        raise UsageError("multiple inputs need --output pointing at a directory")
    directory = Path(args.output)
    directory.mkdir(parents=True, exist_ok=True)
    for path, text in zip(args.inputs, texts):
        (directory / (Path(path).stem + suffix)).write_text(text)


def render_diagram_svg(diagram: PersistenceDiagram, size: int = 480) -> str:
    """Static persistence-diagram scatter.

    Finite bars are filled circles, never-dying classes ride a dashed top
    band, and zero-length classes sit on the diagonal as open diamonds so
    they stay distinguishable from real bars.
    """
    margin = 48
    finite_times = [t for bar in diagram.bars for t in (bar.birth, bar.death) if t < math.inf]
    finite_times += [time for (_, time) in diagram.zero_length]
    top = max(finite_times, default=1.0) or 1.0
    span = size - 2 * margin
    inf_line = margin * 0.5

    def x_of(t: float) -> float:
        return margin + span * (t / top)

    def y_of(t: float) -> float:
        return size - margin - span * (t / top) if t < math.inf else inf_line

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{margin}" '
        'stroke="#999" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{size - margin}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{margin}" y2="{margin}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{inf_line}" x2="{size - margin}" y2="{inf_line}" '
        'stroke="#555" stroke-width="1" stroke-dasharray="4 3"/>',
        f'<text x="{margin - 34}" y="{inf_line + 4}" font-size="12">inf</text>',
        f'<text x="{size - margin - 30}" y="{size - margin + 28}" font-size="12">birth</text>',
        f'<text x="{margin - 40}" y="{margin + 4}" font-size="12">death</text>',
    ]
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
    for bar in diagram.sorted_bars():
        color = palette[bar.dimension % len(palette)]
        parts.append(
            f'<circle cx="{x_of(bar.birth):.2f}" cy="{y_of(bar.death):.2f}" r="5" '
            f'fill="{color}" fill-opacity="0.8"><title>dim {bar.dimension}</title></circle>'
        )
    for (dimension, time), count in sorted(diagram.zero_length.items()):
        color = palette[dimension % len(palette)]
        x, y = x_of(time), y_of(time)
        parts.append(
            f'<path d="M {x:.2f} {y - 6:.2f} L {x + 6:.2f} {y:.2f} L {x:.2f} {y + 6:.2f} '
            f'L {x - 6:.2f} {y:.2f} Z" fill="none" stroke="{color}" stroke-width="1.6">'
            f"<title>dim {dimension}, x{count}</title></path>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaindec",
        description="Decompose filtered chain complexes into interval spheres",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="emit the interval-sphere list")
    _add_input_options(p_dec, many=True)
    p_dec.add_argument("--output", "-o", default=None)
    p_dec.add_argument("--trace", action="store_true", help="append split trace comments")
    p_dec.add_argument("--jobs", type=int, default=1, help="parallel workers for many inputs")
    p_dec.set_defaults(handler=_cmd_decompose)

    p_bar = sub.add_parser("barcode", help="emit the persistence diagram")
    _add_input_options(p_bar)
    p_bar.add_argument("--output", "-o", default=None)
    p_bar.add_argument("--include-zero-length", action="store_true")
    p_bar.add_argument("--plot", default=None, help="write a static SVG scatter here")
    p_bar.set_defaults(handler=_cmd_barcode)

    p_ker = sub.add_parser("kernel", help="decompose the filtered kernel of a simplicial map")
    p_ker.add_argument("domain", help="filtration file of the source complex")
    p_ker.add_argument("codomain", help="filtration file of the target complex")
    p_ker.add_argument("map", help="map file with vertex_map and section")
    p_ker.add_argument("--field", type=int, default=2)
    p_ker.add_argument(
        "--order",
        default="entrance_then_degree",
        choices=("entrance_then_degree", "degree_then_entrance", "as_given"),
    )
    p_ker.add_argument("--strategy", default="entrance", choices=("entrance", "as-given"))
    p_ker.add_argument("--output", "-o", default=None)
    p_ker.set_defaults(handler=_cmd_kernel)

    p_chk = sub.add_parser("spa-check", help="diff the two persistence pipelines")
    _add_input_options(p_chk)
    p_chk.set_defaults(handler=_cmd_spa_check)

    p_sta = sub.add_parser("stats", help="reduction workload and pair diagnostics")
    _add_input_options(p_sta)
    p_sta.add_argument("--output", "-o", default=None)
    p_sta.set_defaults(handler=_cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InternalInvariantError, UsageError) as err:
        print(f"internal error: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

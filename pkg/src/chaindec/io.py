"""Text formats: boundary matrices, filtrations, maps, distances, outputs.

Every writer here is deterministic (same input, same bytes) and every
format round-trips through its parser.  Lines starting with ``#`` are
comments everywhere.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from .barcode import Bar, PersistenceDiagram
from .boundary import FilteredChainComplexInput, GeneratorLabel
from .decomposition import Decomposition, IntervalSphere, SphereSummand
from .errors import ParseError, ValidationError
from .field import PrimeField
from .kernel import SimplicialMapWithSection
from .rips import FilteredSimplicialComplex, Simplex


def format_time(value: float) -> str:
    if value == math.inf:
        return "inf"
    if value == int(value):
        return str(int(value))
    return repr(value)


def parse_time(token: str, line: int | None = None) -> float:
    if token == "inf":
        return math.inf
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad time value {token!r}", line) from None


def _content_lines(text: str) -> list[tuple[int, str]]:
    """(1-based line number, stripped content) for non-comment, non-blank lines."""
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            out.append((number, stripped))
    return out


# -- boundary-matrix format --------------------------------------------------
#
#   field <p>
#   <id> <degree> <entrance> [<row_id>:<coeff> ...]     one record per generator


def write_boundary_text(
    complex_input: FilteredChainComplexInput,
    field: PrimeField,
    ids: Sequence[int] | None = None,
) -> str:
    ids = list(range(len(complex_input))) if ids is None else list(ids)
    lines = [f"field {field.p}"]
    for pos, label in enumerate(complex_input.labels):
        parts = [str(ids[pos]), str(label.degree), format_time(label.entrance)]
        for row, coeff in complex_input.columns[pos]:
            parts.append(f"{ids[row]}:{field.normalize(coeff)}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_boundary_text(text: str) -> tuple[FilteredChainComplexInput, PrimeField, list[int]]:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty boundary file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != "field":
        raise ParseError("expected header 'field <p>'", number)
    try:
        p = int(tokens[1])
    except ValueError:
        raise ParseError(f"bad field modulus {tokens[1]!r}", number) from None
    field = PrimeField(p)
    ids: list[int] = []
    labels: list[GeneratorLabel] = []
    raw_columns: list[list[tuple[int, int]]] = []
    for number, line in lines[1:]:
        tokens = line.split()
        if len(tokens) < 3:
            raise ParseError("record needs 'id degree entrance'", number)
        try:
            ids.append(int(tokens[0]))
            degree = int(tokens[1])
        except ValueError:
            raise ParseError(f"bad id or degree in {line!r}", number) from None
        entrance = parse_time(tokens[2], number)
        try:
            labels.append(GeneratorLabel(degree, entrance))
        except ValidationError as err:
            raise ParseError(str(err), number) from None
        column = []
        for token in tokens[3:]:
            if ":" not in token:
                raise ParseError(f"expected 'row_id:coeff', got {token!r}", number)
            row_token, coeff_token = token.split(":", 1)
            try:
                column.append((int(row_token), int(coeff_token)))
            except ValueError:
                raise ParseError(f"bad entry {token!r}", number) from None
        raw_columns.append(column)
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate generator ids")
    position = {gid: pos for pos, gid in enumerate(ids)}
    columns = []
    for column in raw_columns:
        resolved = []
        for row_id, coeff in column:
            if row_id not in position:
                raise ParseError(f"entry references unknown id {row_id}")
            resolved.append((position[row_id], coeff))
        columns.append(tuple(sorted(resolved)))
    return FilteredChainComplexInput(tuple(labels), tuple(columns)), field, ids


# -- distance and point inputs -----------------------------------------------


def _split_numbers(line: str, number: int) -> list[float]:
    tokens = line.replace(",", " ").split()
    values = []
    for token in tokens:
        try:
            values.append(float(token))
        except ValueError:
            raise ParseError(f"bad number {token!r}", number) from None
    return values


def parse_square_distances(text: str) -> np.ndarray:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty distance file")
    rows = [_split_numbers(line, number) for number, line in lines]
    n = len(rows)
    for (number, _), row in zip(lines, rows):
        if len(row) != n:
            raise ParseError(f"expected {n} entries, got {len(row)}", number)
    return np.array(rows, dtype=float)


def parse_lower_distances(text: str) -> np.ndarray:
    """Lower-triangular rows: row k lists the k distances to earlier points.

    The empty row of the first point may be omitted.
    """
    lines = _content_lines(text)
    rows = [(number, _split_numbers(line, number)) for number, line in lines]
    if rows and len(rows[0][1]) == 0:
        rows = rows[1:]
    if not rows:
        raise ParseError("empty distance file")
    n = len(rows) + 1
    dist = np.zeros((n, n))
    for k, (number, row) in enumerate(rows, start=1):
        if len(row) != k:
            raise ParseError(
                f"row {k} of a lower-triangular matrix needs {k} entries, got {len(row)}",
                number,
            )
        for i, value in enumerate(row):
            dist[k, i] = dist[i, k] = value
    return dist


def parse_points(text: str) -> np.ndarray:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty point file")
    rows = [_split_numbers(line, number) for number, line in lines]
    width = len(rows[0])
    for (number, _), row in zip(lines, rows):
        if len(row) != width or width == 0:
            raise ParseError("all points need the same positive number of coordinates", number)
    return np.array(rows, dtype=float)


# -- filtration format ---------------------------------------------------------
#
#   v0 v1 ... vk : entrance         one simplex per line, face closure required


def parse_filtration(text: str) -> FilteredSimplicialComplex:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty filtration file")
    simplices = []
    for number, line in lines:
        if ":" not in line:
            raise ParseError("expected 'v0 v1 ... vk : entrance'", number)
        left, right = line.rsplit(":", 1)
        try:
            vertices = tuple(sorted(int(tok) for tok in left.split()))
        except ValueError:
            raise ParseError(f"bad vertex list {left.strip()!r}", number) from None
        if not vertices:
            raise ParseError("a simplex needs at least one vertex", number)
        entrance = parse_time(right.strip(), number)
        try:
            simplices.append(Simplex(vertices, entrance))
        except ValidationError as err:
            raise ParseError(str(err), number) from None
    return FilteredSimplicialComplex(simplices)


def write_filtration(complex_: FilteredSimplicialComplex) -> str:
    lines = [
        " ".join(str(v) for v in s.vertices) + " : " + format_time(s.entrance)
        for s in complex_
    ]
    return "\n".join(lines) + "\n"


# -- map file -------------------------------------------------------------------
#
#   vertex_map
#   <k_vertex> -> <l_vertex>
#   section
#   <l_vertex> -> <k_vertex>


def parse_map_file(text: str) -> SimplicialMapWithSection:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty map file")
    sections: dict[str, dict[int, int]] = {"vertex_map": {}, "section": {}}
    current: str | None = None
    for number, line in lines:
        if line in sections:
            current = line
            continue
        if current is None:
            raise ParseError("expected a 'vertex_map' or 'section' heading first", number)
        if "->" not in line:
            raise ParseError("expected '<vertex> -> <vertex>'", number)
        left, right = line.split("->", 1)
        try:
            source, target = int(left.strip()), int(right.strip())
        except ValueError:
            raise ParseError(f"bad vertex pair {line!r}", number) from None
        if source in sections[current]:
            raise ParseError(f"vertex {source} mapped twice", number)
        sections[current][source] = target
    if not sections["vertex_map"]:
        raise ParseError("missing vertex_map section")
    if not sections["section"]:
        raise ParseError("missing section section")
    return SimplicialMapWithSection(sections["vertex_map"], sections["section"])


def write_map_file(maps: SimplicialMapWithSection) -> str:
    lines = ["vertex_map"]
    lines += [f"{k} -> {v}" for k, v in sorted(maps.vertex_map.items())]
    lines.append("section")
    lines += [f"{k} -> {v}" for k, v in sorted(maps.section.items())]
    return "\n".join(lines) + "\n"


# -- decomposition output ---------------------------------------------------------
#
#   dim birth death gen_i gen_j     ('inf' death and '-' gen_j for open summands)


def format_decomposition(decomposition: Decomposition) -> str:
    lines = []
    for summand in decomposition.summands:
        sphere = summand.sphere
        death_index = "-" if summand.death_index is None else str(summand.death_index)
        lines.append(
            f"{sphere.dimension} {format_time(sphere.birth)} {format_time(sphere.death)} "
            f"{summand.birth_index} {death_index}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


def parse_decomposition(text: str) -> list[SphereSummand]:
    summands = []
    for number, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) != 5:
            raise ParseError("expected 'dim birth death gen_i gen_j'", number)
        try:
            dimension = int(tokens[0])
            birth = parse_time(tokens[1], number)
            death = parse_time(tokens[2], number)
            birth_index = int(tokens[3])
            death_index = None if tokens[4] == "-" else int(tokens[4])
        except ValueError:
            raise ParseError(f"bad record {line!r}", number) from None
        summands.append(
            SphereSummand(IntervalSphere(dimension, birth, death), birth_index, death_index)
        )
    return summands


# -- barcode output -----------------------------------------------------------------
#
#   dim birth death                  bars, sorted; zero-length records carry a Z mark


def format_diagram(diagram: PersistenceDiagram, include_zero_length: bool = False) -> str:
    lines = [
        f"{bar.dimension} {format_time(bar.birth)} {format_time(bar.death)}"
        for bar in diagram.sorted_bars()
    ]
    if include_zero_length:
        for (dimension, time), count in sorted(diagram.zero_length.items()):
            record = f"{dimension} {format_time(time)} {format_time(time)} Z"
            lines.extend([record] * count)
    return "\n".join(lines) + ("\n" if lines else "")


def parse_diagram(text: str) -> PersistenceDiagram:
    bars = []
    zero: Counter = Counter()
    for number, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) not in (3, 4) or (len(tokens) == 4 and tokens[3] != "Z"):
            raise ParseError("expected 'dim birth death' or 'dim t t Z'", number)
        try:
            dimension = int(tokens[0])
        except ValueError:
            raise ParseError(f"bad dimension {tokens[0]!r}", number) from None
        birth = parse_time(tokens[1], number)
        death = parse_time(tokens[2], number)
        if len(tokens) == 4:
            if birth != death:
                raise ParseError("a Z record needs birth == death", number)
            zero[(dimension, birth)] += 1
        else:
            bars.append(Bar(dimension, birth, death))
    return PersistenceDiagram(tuple(bars), zero)


# -- stats output ---------------------------------------------------------------------


def format_stats(stats: dict[str, object]) -> str:
    return "\n".join(f"{key}={stats[key]}" for key in sorted(stats)) + "\n"


def parse_stats(text: str) -> dict[str, str]:
    out = {}
    for number, line in _content_lines(text):
        if "=" not in line:
            raise ParseError("expected 'key=value'", number)
        key, value = line.split("=", 1)
        out[key] = value
    return out

"""TSPLIB-format parsing, random instance generation, and file writing.

Supports symmetric TSP files with EDGE_WEIGHT_TYPE EXPLICIT (all five
packed matrix formats), EUC_2D, and GEO. Distances follow the TSPLIB
integer rounding conventions. 1-based vertex numbers shift down by one,
so vertex 1 of a file becomes the base vertex 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import Instance
from .validation import as_weight_matrix, weights_as_tuples

EDGE_WEIGHT_TYPES = ("EXPLICIT", "EUC_2D", "GEO")
EDGE_WEIGHT_FORMATS = (
    "FULL_MATRIX",
    "UPPER_ROW",
    "LOWER_ROW",
    "UPPER_DIAG_ROW",
    "LOWER_DIAG_ROW",
)
_SECTIONS = ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION", "EOF")


class TsplibParseError(ValueError):
    """Malformed or unsupported TSPLIB input."""


@dataclass(frozen=True)
class TsplibHeader:
    name: str
    type: str
    dimension: int
    edge_weight_type: str
    edge_weight_format: str | None = None

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        explicit = self.edge_weight_type == "EXPLICIT"
        if explicit != (self.edge_weight_format is not None):
            raise ValueError("edge_weight_format is required exactly for EXPLICIT weights")


def _nint(x: float) -> int:
    return int(x + 0.5)


def euc_2d(a: tuple[float, float], b: tuple[float, float]) -> int:
    """Rounded Euclidean distance."""
    return _nint(math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2))


_GEO_PI = 3.141592
_GEO_RRR = 6378.388


def _geo_radians(coord: float) -> float:
    deg = _nint(coord)
    minutes = coord - deg
    return _GEO_PI * (deg + 5.0 * minutes / 3.0) / 180.0


def geo(a: tuple[float, float], b: tuple[float, float]) -> int:
    """Geographical distance in kilometers from DD.MM latitude/longitude."""
    lat_a, lon_a = _geo_radians(a[0]), _geo_radians(a[1])
    lat_b, lon_b = _geo_radians(b[0]), _geo_radians(b[1])
    q1 = math.cos(lon_a - lon_b)
    q2 = math.cos(lat_a - lat_b)
    q3 = math.cos(lat_a + lat_b)
    return int(_GEO_RRR * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0)


def _explicit_entry_count(fmt: str, dim: int) -> int:
    if fmt == "FULL_MATRIX":
        return dim * dim
    if fmt in ("UPPER_ROW", "LOWER_ROW"):
        return dim * (dim - 1) // 2
    return dim * (dim + 1) // 2


def _expand_explicit(fmt: str, dim: int, values: list[int]) -> np.ndarray:
    W = np.zeros((dim, dim), dtype=np.int64)
    pos = 0
    if fmt == "FULL_MATRIX":
        W = np.array(values, dtype=np.int64).reshape(dim, dim)
    elif fmt == "UPPER_ROW":
        for i in range(dim - 1):
            for j in range(i + 1, dim):
                W[i, j] = W[j, i] = values[pos]
                pos += 1
    elif fmt == "LOWER_ROW":
        for i in range(1, dim):
            for j in range(i):
                W[i, j] = W[j, i] = values[pos]
                pos += 1
    elif fmt == "UPPER_DIAG_ROW":
        for i in range(dim):
            for j in range(i, dim):
                W[i, j] = W[j, i] = values[pos]
                pos += 1
    elif fmt == "LOWER_DIAG_ROW":
        for i in range(dim):
            for j in range(i + 1):
                W[i, j] = W[j, i] = values[pos]
                pos += 1
    np.fill_diagonal(W, 0)
    return W


def _parse_number(token: str, line_no: int):
    try:
        return float(token)
    except ValueError:
        raise TsplibParseError(f"expected a number at line {line_no}, got {token!r}") from None


def _parse_int(token: str, line_no: int) -> int:
    value = _parse_number(token, line_no)
    if value != int(value):
        raise TsplibParseError(f"expected an integer at line {line_no}, got {token!r}")
    return int(value)


def parse_tsplib(text: str) -> Instance:
    """Parse TSPLIB text into an Instance with a full symmetric matrix."""
    lines = text.splitlines()
    header: dict[str, str] = {}
    coords: dict[int, tuple[float, float]] = {}
    weights_values: list[int] | None = None

    def header_int(key: str) -> int:
        if key not in header:
            raise TsplibParseError(f"missing {key}")
        try:
            return int(header[key])
        except ValueError:
            raise TsplibParseError(f"{key} must be an integer, got {header[key]!r}") from None

    idx = 0
    total = len(lines)
    while idx < total:
        raw = lines[idx]
        line_no = idx + 1
        idx += 1
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped == "EOF":
            break
        if ":" in raw:
            key, _, value = raw.partition(":")
            header[key.strip().upper()] = value.strip()
            continue
        section = stripped.upper()
        if section not in _SECTIONS:
            raise TsplibParseError(f"unexpected line {line_no}: {stripped!r}")
        dim = header_int("DIMENSION")
        if section == "NODE_COORD_SECTION":
            while len(coords) < dim:
                if idx >= total:
                    raise TsplibParseError(
                        f"coordinate section truncated at line {total}: "
                        f"{len(coords)} of {dim} nodes read"
                    )
                parts = lines[idx].split()
                line_no = idx + 1
                idx += 1
                if not parts:
                    continue
                if parts == ["EOF"]:
                    raise TsplibParseError(
                        f"coordinate section truncated at line {line_no}: "
                        f"{len(coords)} of {dim} nodes read"
                    )
                if len(parts) != 3:
                    raise TsplibParseError(f"expected 'index x y' at line {line_no}")
                node = _parse_int(parts[0], line_no)
                if not 1 <= node <= dim:
                    raise TsplibParseError(f"node index {node} out of range at line {line_no}")
                coords[node - 1] = (
                    _parse_number(parts[1], line_no),
                    _parse_number(parts[2], line_no),
                )
        elif section == "EDGE_WEIGHT_SECTION":
            fmt = header.get("EDGE_WEIGHT_FORMAT")
            if fmt not in EDGE_WEIGHT_FORMATS:
                raise TsplibParseError(f"unsupported EDGE_WEIGHT_FORMAT: {fmt}")
            needed = _explicit_entry_count(fmt, dim)
            values: list[int] = []
            while len(values) < needed:
                if idx >= total:
                    raise TsplibParseError(
                        f"weight section truncated at line {total}: "
                        f"{len(values)} of {needed} entries read"
                    )
                line_no = idx + 1
                tokens = lines[idx].split()
                idx += 1
                if tokens == ["EOF"]:
                    raise TsplibParseError(
                        f"weight section truncated at line {line_no}: "
                        f"{len(values)} of {needed} entries read"
                    )
                for tok in tokens:
                    values.append(_parse_int(tok, line_no))
            if len(values) > needed:
                raise TsplibParseError(
                    f"unexpected trailing values in weight section at line {line_no}"
                )
            weights_values = values
        elif section == "DISPLAY_DATA_SECTION":
            consumed = 0
            while consumed < dim:
                if idx >= total:
                    raise TsplibParseError(f"display section truncated at line {total}")
                if lines[idx].strip():
                    consumed += 1
                idx += 1

    name = header.get("NAME", "unnamed")
    file_type = header.get("TYPE", "")
    if (file_type.split() or [""])[0] != "TSP":
        raise TsplibParseError(f"unsupported TYPE: {file_type!r} (expected TSP)")
    dim = header_int("DIMENSION")
    ew_type = header.get("EDGE_WEIGHT_TYPE", "")
    if ew_type not in EDGE_WEIGHT_TYPES:
        raise TsplibParseError(f"unsupported EDGE_WEIGHT_TYPE: {ew_type}")
    TsplibHeader(
        name=name,
        type="TSP",
        dimension=dim,
        edge_weight_type=ew_type,
        edge_weight_format=header.get("EDGE_WEIGHT_FORMAT") if ew_type == "EXPLICIT" else None,
    )

    if ew_type == "EXPLICIT":
        if weights_values is None:
            raise TsplibParseError("missing EDGE_WEIGHT_SECTION")
        W = _expand_explicit(header["EDGE_WEIGHT_FORMAT"], dim, weights_values)
    else:
        if len(coords) != dim:
            raise TsplibParseError(
                f"missing NODE_COORD_SECTION ({len(coords)} of {dim} nodes)"
            )
        pts = [coords[i] for i in range(dim)]
        dist = euc_2d if ew_type == "EUC_2D" else geo
        W = np.zeros((dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(i + 1, dim):
                W[i, j] = W[j, i] = dist(pts[i], pts[j])
    return Instance(name=name, n=dim, weights=weights_as_tuples(as_weight_matrix(W)))


def parse_tsplib_file(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tsplib(fh.read())


def random_points(num_vertices: int, seed: int, coord_bound: int = 1000) -> np.ndarray:
    """Uniform integer points in [0, coord_bound]^2, reproducible by seed."""
    if num_vertices < 2:
        raise ValueError("need at least 2 vertices")
    if coord_bound < 1:
        raise ValueError("coord_bound must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, coord_bound + 1, size=(num_vertices, 2))


def generate_random_instance(num_vertices: int, seed: int, coord_bound: int = 1000) -> Instance:
    """Random Euclidean instance with rounded integer distances."""
    pts = random_points(num_vertices, seed, coord_bound)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff.astype(np.float64) ** 2).sum(axis=2))
    W = np.floor(dist + 0.5).astype(np.int64)
    np.fill_diagonal(W, 0)
    return Instance(
        name=f"random-n{num_vertices}-s{seed}",
        n=num_vertices,
        weights=weights_as_tuples(as_weight_matrix(W)),
    )


def write_tsplib_euc2d(name: str, points) -> str:
    """Render integer points as a TSPLIB EUC_2D file."""
    points = np.asarray(points)
    lines = [
        f"NAME : {name}",
        "TYPE : TSP",
        "COMMENT : generated by capvrp",
        f"DIMENSION : {len(points)}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for i, (x, y) in enumerate(points, start=1):
        lines.append(f"{i} {int(x)} {int(y)}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"

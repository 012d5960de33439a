"""
Graph spec parsing, adjacency files and random regular graphs.

Supported specs::

    hypercube:<n>                 1 <= n <= 30
    torus:<n>^<d>                 n >= 2, d >= 1
    file:<path>                   adjacency file (see read_adjacency_file)
    random-regular:<N>,<d>,<seed> configuration model with full restarts
    union:<spec>+<spec>+...       parts may be written <count>*<spec>
"""

import logging
import re
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from src.core.config import get_settings
from src.core.exceptions import (
    AdjacencyFileError,
    GraphSpecError,
    InvariantBreachError,
    ResourceCapError,
)
from src.graphs.families import (
    DisjointUnionGraph,
    ExplicitGraph,
    Graph,
    HypercubeGraph,
    TorusGraph,
    check_neighbor_table,
)
from src.sampling.rng import mix64, trial_keys

logger = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).parent / "fixtures"
FIXTURE_NAMES = ("prism", "franklin", "truncated_tetrahedron")

MAX_HYPERCUBE_DIM = 30

_TORUS_RE = re.compile(r"^(\d+)\^(\d+)$")
_REPEAT_RE = re.compile(r"^(\d+)\*(.+)$")


def fixture_spec(name: str) -> str:
    """``file:`` spec of a bundled 12-vertex cubic fixture graph."""
    if name not in FIXTURE_NAMES:
        raise GraphSpecError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    return f"file:{FIXTURE_DIR / (name + '.adj')}"


def build_graph(spec: str) -> Graph:
    """
    Build a validated graph from its spec string.

    Args:
        spec: Graph spec, e.g. ``hypercube:10`` or ``union:4*torus:3^2``

    Returns:
        Immutable d-regular graph

    Raises:
        GraphSpecError: If the spec is malformed or the adjacency is invalid
        ResourceCapError: If the graph would exceed the vertex cap
    """
    spec = spec.strip()
    family, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise GraphSpecError(f"graph spec must look like <family>:<args>, got {spec!r}")

    if family == "hypercube":
        graph: Graph = _build_hypercube(arg, spec)
    elif family == "torus":
        graph = _build_torus(arg, spec)
    elif family == "file":
        graph = read_adjacency_file(_resolve_path(arg), spec=spec)
    elif family == "random-regular":
        graph = _build_random_regular(arg, spec)
    elif family == "union":
        graph = _build_union(arg, spec)
    else:
        raise GraphSpecError(f"unknown graph family {family!r} in {spec!r}")

    logger.debug(f"Built graph {spec}: N={graph.num_vertices}, d={graph.degree}")
    return graph


def _parse_int(text: str, what: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise GraphSpecError(f"{what} must be an integer in {spec!r}") from e


def _check_vertex_cap(num_vertices: int, spec: str) -> None:
    cap = get_settings().max_vertices
    if num_vertices > cap:
        raise ResourceCapError(f"{spec} has {num_vertices} vertices, cap is {cap}")


def _build_hypercube(arg: str, spec: str) -> HypercubeGraph:
    n = _parse_int(arg, "hypercube dimension", spec)
    if n > MAX_HYPERCUBE_DIM:
        raise ResourceCapError(f"hypercube dimension {n} exceeds {MAX_HYPERCUBE_DIM}")
    if n < 1:
        raise GraphSpecError(f"hypercube dimension must be >= 1, got {n}")
    _check_vertex_cap(2**n, spec)
    return HypercubeGraph(n, spec=spec)


def _build_torus(arg: str, spec: str) -> TorusGraph:
    match = _TORUS_RE.match(arg)
    if not match:
        raise GraphSpecError(f"torus spec must be torus:<n>^<d>, got {spec!r}")
    n, dims = int(match.group(1)), int(match.group(2))
    if n < 2 or dims < 1:
        raise GraphSpecError(f"torus needs n >= 2 and d >= 1, got {spec!r}")
    _check_vertex_cap(n**dims, spec)
    return TorusGraph(n, dims, spec=spec)


def _build_random_regular(arg: str, spec: str) -> ExplicitGraph:
    parts = arg.split(",")
    if len(parts) != 3:
        raise GraphSpecError(
            f"random-regular spec must be random-regular:<N>,<d>,<seed>, got {spec!r}"
        )
    num_vertices = _parse_int(parts[0], "N", spec)
    degree = _parse_int(parts[1], "d", spec)
    seed = _parse_int(parts[2], "seed", spec)
    _check_vertex_cap(num_vertices, spec)
    table = random_regular_table(num_vertices, degree, seed)
    return ExplicitGraph(table, spec)


def _build_union(arg: str, spec: str) -> DisjointUnionGraph:
    parts: List[Graph] = []
    for piece in arg.split("+"):
        piece = piece.strip()
        count = 1
        match = _REPEAT_RE.match(piece)
        if match:
            count = int(match.group(1))
            piece = match.group(2)
        if count < 1 or not piece:
            raise GraphSpecError(f"bad union part in {spec!r}")
        if piece.startswith("union:"):
            raise GraphSpecError("nested unions are not supported; flatten the parts")
        part = build_graph(piece)
        parts.extend([part] * count)
    _check_vertex_cap(sum(p.num_vertices for p in parts), spec)
    return DisjointUnionGraph(parts, spec=spec)


def _resolve_path(arg: str) -> Path:
    path = Path(arg)
    if not path.exists() and not path.is_absolute() and (FIXTURE_DIR / arg).exists():
        return FIXTURE_DIR / arg
    return path


# ============= Random Regular Graphs =============


def random_regular_table(num_vertices: int, degree: int, seed: int) -> np.ndarray:
    """
    Sample a simple d-regular graph with the configuration model.

    Stubs are paired after sorting them by mixer keys derived from
    (seed, attempt, stub); any loop or multi-edge restarts the whole pairing.

    Returns:
        (N, d) neighbour table, rows sorted ascending

    Raises:
        GraphSpecError: If N*d is odd or d >= N
        ResourceCapError: If no simple graph was found within the restart cap
    """
    if num_vertices < 1 or degree < 0:
        raise GraphSpecError(
            f"random-regular needs N >= 1 and d >= 0, got N={num_vertices}, d={degree}"
        )
    if (num_vertices * degree) % 2:
        raise GraphSpecError(f"N*d must be even, got N={num_vertices}, d={degree}")
    if degree >= num_vertices:
        raise GraphSpecError(f"degree {degree} impossible on {num_vertices} vertices")
    if degree == 0:
        return np.zeros((num_vertices, 0), dtype=np.int64)

    stubs = np.repeat(np.arange(num_vertices, dtype=np.int64), degree)
    stub_ids = np.arange(stubs.size, dtype=np.uint64)
    max_restarts = get_settings().max_regular_restarts

    for attempt in range(max_restarts + 1):
        key = trial_keys(seed, [attempt])[0]
        order = np.argsort(mix64(key ^ stub_ids), kind="stable")
        pairs = stubs[order].reshape(-1, 2)
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if np.any(lo == hi):
            continue
        codes = lo * num_vertices + hi
        if np.unique(codes).size != codes.size:
            continue
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        table = dst[order].reshape(num_vertices, degree)
        logger.debug(
            f"random-regular N={num_vertices} d={degree} accepted after {attempt} restarts"
        )
        return table

    raise ResourceCapError(
        f"no simple {degree}-regular graph on {num_vertices} vertices after {max_restarts} restarts"
    )


# ============= Adjacency Files =============


def read_adjacency_file(path: Union[str, Path], spec: str = "") -> ExplicitGraph:
    """
    Parse an adjacency file: ``N d`` on the first line, then one line of d
    space-separated 0-based neighbour indices per vertex.

    Raises:
        AdjacencyFileError: If the file is missing, malformed, non-regular,
            asymmetric or contains loops or duplicate neighbours
    """
    path = Path(path)
    spec = spec or f"file:{path}"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise AdjacencyFileError(f"cannot read adjacency file {path}: {e}") from e

    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise AdjacencyFileError(f"{path}: empty adjacency file")
    num_vertices, degree = _parse_header(lines[0], path)
    if len(lines) - 1 != num_vertices:
        raise AdjacencyFileError(
            f"{path}: expected {num_vertices} vertex lines, found {len(lines) - 1}"
        )

    rows = []
    for i, line in enumerate(lines[1:]):
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise AdjacencyFileError(f"{path}: non-integer entry on line {i + 2}") from e
        if len(row) != degree:
            raise AdjacencyFileError(
                f"{path}: vertex {i} has {len(row)} neighbours, expected {degree}"
            )
        rows.append(row)

    table = np.asarray(rows, dtype=np.int64).reshape(num_vertices, degree)
    try:
        check_neighbor_table(table, degree, spec)
    except InvariantBreachError as e:
        raise AdjacencyFileError(str(e)) from e
    return ExplicitGraph(table, spec)


def _parse_header(line: str, path: Path) -> Tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 2:
        raise AdjacencyFileError(f"{path}: header must be 'N d'")
    try:
        num_vertices, degree = int(tokens[0]), int(tokens[1])
    except ValueError as e:
        raise AdjacencyFileError(f"{path}: header must be two integers") from e
    if num_vertices < 1 or degree < 0:
        raise AdjacencyFileError(f"{path}: invalid header {line.strip()!r}")
    return num_vertices, degree


def write_adjacency_file(g: Graph, path: Union[str, Path]) -> Path:
    """Write ``g`` in adjacency-file format (UTF-8, LF line endings)."""
    path = Path(path)
    table = np.sort(g.neighbor_table(), axis=1)
    body = [f"{g.num_vertices} {g.degree}"]
    body.extend(" ".join(str(int(u)) for u in row) for row in table)
    path.write_text("\n".join(body) + "\n", encoding="utf-8", newline="\n")
    logger.info(f"Wrote adjacency of {g.spec} to {path}")
    return path

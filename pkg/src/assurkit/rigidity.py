"""Pinned rigidity matrix, generic rank, infinitesimal motions and the
block-triangular form induced by a decomposition.

Three scalar modes are supported: ``"prime"`` (exact arithmetic modulo a
random 62-bit prime, the default for rank decisions), ``"rational"`` (exact
``Fraction`` arithmetic, used for certificates and exact velocities) and
``"float"`` (numpy float64, used for engineering velocities).
"""

from __future__ import annotations

import csv
import io
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import DecompositionMismatch, MissingCoordinates
from .linalg import QQ, PrimeField
from .pinned_graph import PinnedGraph

log = logging.getLogger(__name__)

EXACT_RANGE = 2 ** 31
FLOAT_TOL = 1e-9
MODES = ("prime", "rational", "float")


@dataclass(frozen=True)
class Configuration:
    coords: Mapping[str, tuple]
    mode: str = "rational"
    modulus: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown scalar mode {self.mode!r}")
        if self.mode == "prime" and not self.modulus:
            raise ValueError("prime mode needs a modulus")
        object.__setattr__(self, "coords", {k: tuple(v) for k, v in self.coords.items()})

    @property
    def field(self):
        if self.mode == "prime":
            return PrimeField(self.modulus)
        if self.mode == "rational":
            return QQ
        return None

    @property
    def exact(self) -> bool:
        return self.mode != "float"

    def point(self, v: str):
        try:
            return self.coords[v]
        except KeyError:
            raise MissingCoordinates(f"no coordinates for {v}") from None

    def with_mode(self, mode: str, modulus: int | None = None) -> "Configuration":
        if mode == "float":
            coords = {k: tuple(float(x) for x in xs) for k, xs in self.coords.items()}
        else:
            coords = {k: tuple(Fraction(x) if isinstance(x, float) else x for x in xs)
                      for k, xs in self.coords.items()}
        return Configuration(coords, mode, modulus if mode == "prime" else None)

    def to_dict(self) -> dict:
        return {k: [_plain(x) for x in v] for k, v in sorted(self.coords.items())}


def _plain(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def check_configuration(graph: PinnedGraph, config: Configuration) -> None:
    missing = [v for v in graph.vertices if v not in config.coords]
    if missing:
        raise MissingCoordinates(f"no coordinates for {missing}")
    bad = [v for v in graph.vertices if len(config.coords[v]) != graph.dimension]
    if bad:
        raise MissingCoordinates(f"coordinates of {bad} do not have dimension {graph.dimension}")


def sample_generic_configuration(graph: PinnedGraph, seed: int = 0,
                                 mode: str = "prime") -> Configuration:
    """Independent uniform coordinates for every vertex, deterministic in ``seed``.

    Exact modes draw integers from ``[-2**31, 2**31]``; float mode draws from
    ``[-1, 1]``. Prime mode also draws its modulus from the same stream.
    """
    rng = random.Random(f"config:{seed}")
    d = graph.dimension
    coords = {}
    for v in graph.vertices:
        if mode == "float":
            coords[v] = tuple(rng.uniform(-1.0, 1.0) for _ in range(d))
        else:
            coords[v] = tuple(rng.randint(-EXACT_RANGE, EXACT_RANGE) for _ in range(d))
    modulus = linalg.random_prime(rng) if mode == "prime" else None
    return Configuration(coords, mode, modulus)


def resolve_configuration(graph: PinnedGraph, coords: Mapping | None, seed: int,
                          mode: str) -> Configuration:
    """Use given coordinates when present (all or nothing), else sample."""
    if coords is None:
        return sample_generic_configuration(graph, seed, mode)
    missing = [v for v in graph.vertices if v not in coords]
    if missing:
        raise MissingCoordinates(
            f"coordinates given for some vertices but not for {missing}; "
            "mixed given/sampled configurations are not supported")
    base = Configuration({v: coords[v] for v in graph.vertices}, "rational")
    modulus = None
    if mode == "prime":
        modulus = linalg.random_prime(random.Random(f"prime:{seed}"))
    cfg = base.with_mode(mode, modulus)
    check_configuration(graph, cfg)
    return cfg


# -- the matrix ------------------------------------------------------------

@dataclass
class RigidityMatrix:
    rows: list                      # list of row lists (exact) or a 2-D ndarray (float)
    row_labels: list[str]           # edge ids
    vertices: list[str]             # inner vertices, one column block each
    dimension: int
    config: Configuration
    blocks: list[int] = field(default_factory=list)   # optional diagonal block sizes (rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_labels), self.dimension * len(self.vertices))

    @property
    def field(self):
        return self.config.field

    @property
    def column_labels(self) -> list[str]:
        return [f"{v}.{k}" for v in self.vertices for k in range(self.dimension)]

    def column_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def as_array(self) -> np.ndarray:
        if isinstance(self.rows, np.ndarray):
            return self.rows
        if self.config.mode == "prime":
            f = self.field
            return np.array([[f.signed(x) for x in r] for r in self.rows], dtype=object)
        return np.array(self.rows, dtype=object)

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["edge"] + self.column_labels)
        arr = self.as_array()
        for label, row in zip(self.row_labels, arr):
            w.writerow([label] + [_plain(x) for x in row])
        return out.getvalue()


def _diff(field, a, b):
    if field is None:
        return [float(x) - float(y) for x, y in zip(a, b)]
    return [field.sub(field.coerce(x), field.coerce(y)) for x, y in zip(a, b)]


def build_matrix(graph: PinnedGraph, config: Configuration,
                 vertices: Sequence[str] | None = None,
                 edge_order: Sequence[str] | None = None) -> RigidityMatrix:
    """The ``|E| x d|I|`` pinned rigidity matrix.

    Rows follow the graph's edge order and column blocks follow sorted inner
    ids unless ``edge_order`` / ``vertices`` give explicit permutations.
    """
    check_configuration(graph, config)
    d = graph.dimension
    verts = list(vertices) if vertices is not None else graph.sorted_inner
    if set(verts) != graph.inner_set or len(verts) != len(graph.inner):
        raise DecompositionMismatch("column order must list every inner vertex once")
    edges = [graph.edge(eid) for eid in edge_order] if edge_order is not None else list(graph.edges)
    if edge_order is not None and sorted(edge_order) != sorted(e.id for e in graph.edges):
        raise DecompositionMismatch("row order must list every edge once")
    col = {v: i for i, v in enumerate(verts)}
    f = config.field
    zero = 0.0 if f is None else f.zero
    ncols = d * len(verts)
    rows = []
    for e in edges:
        row = [zero] * ncols
        pu, pv = config.point(e.u), config.point(e.v)
        if e.u in col:
            row[d * col[e.u]: d * col[e.u] + d] = _diff(f, pu, pv)
        if e.v in col:
            row[d * col[e.v]: d * col[e.v] + d] = _diff(f, pv, pu)
        rows.append(row)
    if f is None:
        rows = np.array(rows, dtype=float).reshape(len(edges), ncols)
    return RigidityMatrix(rows, [e.id for e in edges], verts, d, config)


def matrix_rank(m: RigidityMatrix, tol: float = FLOAT_TOL) -> int:
    if m.config.mode == "float":
        return linalg.float_rank(m.rows, tol)
    return linalg.rank(m.rows, m.field, m.shape[1])


def matrix_det(m: RigidityMatrix):
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    if m.config.mode == "float":
        return float(np.linalg.det(m.rows)) if m.shape[0] else 1.0
    return linalg.det(m.rows, m.field)


# -- generic rank ------------------------------------------------------------

def _trial_seed(seed: int, k: int) -> int:
    return seed * 1_000_003 + k


def rank_trials(graph: PinnedGraph, trials: int = 3, seed: int = 0) -> list[int]:
    """Exact prime-field rank at ``trials`` independent configurations."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ranks = [matrix_rank(build_matrix(graph, sample_generic_configuration(
        graph, _trial_seed(seed, k), "prime"))) for k in range(trials)]
    if len(set(ranks)) > 1:
        log.warning("rank differs across trials %s; drawing two more primes", ranks)
        ranks += [matrix_rank(build_matrix(graph, sample_generic_configuration(
            graph, _trial_seed(seed, trials + k), "prime"))) for k in range(2)]
    return ranks


def generic_rank(graph: PinnedGraph, trials: int = 3, seed: int = 0) -> int:
    """Largest rank seen over ``trials`` random exact configurations.

    Every value is certifiably achieved, so this is a lower bound on the
    generic rank that is exact with overwhelming probability.
    """
    return max(rank_trials(graph, trials, seed))


@dataclass(frozen=True)
class IsostaticCertificate:
    isostatic: bool
    rank: int
    full_rank: int
    edges: int
    config: Configuration | None = None
    determinant: object = None

    @property
    def deficit(self) -> int:
        return self.full_rank - self.rank

    def to_dict(self) -> dict:
        out = {
            "isostatic": self.isostatic,
            "generic_rank": self.rank,
            "full_rank": self.full_rank,
            "rank_deficit": self.deficit,
            "edges": self.edges,
        }
        if self.config is not None:
            out["witness_mode"] = self.config.mode
            if self.config.modulus:
                out["modulus"] = self.config.modulus
            out["determinant"] = _plain(self.determinant)
            out["witness_configuration"] = self.config.to_dict()
        return out


def is_pinned_isostatic(graph: PinnedGraph, seed: int = 0, trials: int = 3,
                        certificate_mode: str = "prime") -> IsostaticCertificate:
    """``|E| = d|I|`` and generic rank ``d|I|``, with a witnessing determinant.

    ``certificate_mode="rational"`` recomputes the witness determinant over
    the rationals (slower, an integer certificate).
    """
    full = graph.dimension * len(graph.inner)
    square = len(graph.edges) == full
    best, best_k = -1, 0
    for k in range(trials):
        r = matrix_rank(build_matrix(graph, sample_generic_configuration(
            graph, _trial_seed(seed, k), "prime")))
        if r > best:
            best, best_k = r, k
    if not square:
        return IsostaticCertificate(False, best, full, len(graph.edges))
    if best < full:
        return IsostaticCertificate(False, best, full, len(graph.edges))
    cfg = sample_generic_configuration(graph, _trial_seed(seed, best_k), "prime")
    if certificate_mode == "rational":
        cfg = cfg.with_mode("rational")
    det = matrix_det(build_matrix(graph, cfg))
    return IsostaticCertificate(True, best, full, len(graph.edges), cfg, det)


# -- motions ---------------------------------------------------------------

def _split(vec, vertices, d) -> dict[str, tuple]:
    return {v: tuple(vec[d * i: d * i + d]) for i, v in enumerate(vertices)}


def nullspace(graph: PinnedGraph, config: Configuration,
              tol: float = FLOAT_TOL) -> list[dict[str, tuple]]:
    """Kernel basis of the pinned rigidity matrix as per-vertex velocity maps."""
    m = build_matrix(graph, config)
    ncols = m.shape[1]
    verts, d = m.vertices, graph.dimension
    if config.mode == "float":
        basis = linalg.float_nullspace(m.rows.reshape(m.shape[0], ncols), ncols, tol)
        return [_split(list(basis[:, j]), verts, d) for j in range(basis.shape[1])]
    return [_split(vec, verts, d) for vec in linalg.nullspace(m.rows, m.field, ncols)]


def kernel_dimension(graph: PinnedGraph, config: Configuration, tol: float = FLOAT_TOL) -> int:
    m = build_matrix(graph, config)
    return m.shape[1] - matrix_rank(m, tol)


# -- block-triangular form -----------------------------------------------------

@dataclass
class BlockTriangularView:
    ok: bool
    matrix: RigidityMatrix
    row_blocks: list[list[str]]
    column_blocks: list[list[str]]
    problems: list[str]
    block_determinants: list = field(default_factory=list)
    determinant: object = None

    @property
    def block_count(self) -> int:
        return len(self.row_blocks)


def block_triangular_verify(graph: PinnedGraph, config: Configuration,
                            decomp) -> BlockTriangularView:
    """Permute rows and column blocks along ``decomp.linear_order`` and check
    that the matrix is lower block-triangular with square diagonal blocks.

    Rows of a component are its extended-component edges in graph order;
    columns are its inner vertices in sorted order. The row and column
    permutations are chosen independently.
    """
    comps = [decomp.components[i] for i in decomp.linear_order]
    seen_v = [v for c in comps for v in c.inner_vertices]
    seen_e = [eid for c in comps for eid in c.edges]
    if sorted(seen_v) != sorted(graph.inner) or sorted(seen_e) != sorted(e.id for e in graph.edges):
        raise DecompositionMismatch("decomposition does not partition this graph")
    pos = {e.id: i for i, e in enumerate(graph.edges)}
    row_blocks = [sorted(c.edges, key=pos.__getitem__) for c in comps]
    col_blocks = [sorted(c.inner_vertices) for c in comps]
    m = build_matrix(graph, config,
                     vertices=[v for b in col_blocks for v in b],
                     edge_order=[e for b in row_blocks for e in b])
    d = graph.dimension
    problems = []
    zero = (lambda x: x == 0) if config.exact else (lambda x: x == 0.0)
    r0 = 0
    starts = []
    c0 = 0
    for rb, cb in zip(row_blocks, col_blocks):
        starts.append((r0, c0, len(rb), d * len(cb)))
        r0 += len(rb)
        c0 += d * len(cb)
    rows = m.rows
    for bi, (rs, cs, nr, nc) in enumerate(starts):
        if nr != nc:
            problems.append(f"diagonal block {bi} is {nr}x{nc}, not square")
        right = cs + nc
        for r in range(rs, rs + nr):
            row = rows[r]
            if any(not zero(row[c]) for c in range(right, m.shape[1])):
                problems.append(f"row {m.row_labels[r]} has entries right of block {bi}")
    view = BlockTriangularView(not problems, m, row_blocks, col_blocks, problems)
    if not problems and m.shape[0] == m.shape[1]:
        f = config.field
        dets = []
        for rs, cs, nr, nc in starts:
            sub = [list(rows[r][cs: cs + nc]) for r in range(rs, rs + nr)]
            if f is None:
                dets.append(float(np.linalg.det(np.array(sub, dtype=float))) if nr else 1.0)
            else:
                dets.append(linalg.det(sub, f))
        view.block_determinants = dets
        view.determinant = matrix_det(m)
    m.blocks = [len(b) for b in row_blocks]
    return view


def block_determinant_product(view: BlockTriangularView, field):
    prod = field.one if field is not None else 1.0
    for x in view.block_determinants:
        prod = field.mul(prod, x) if field is not None else prod * x
    return prod


def point_block(graph: PinnedGraph, config: Configuration, v: str, edge_ids: Sequence[str]):
    """``len(edge_ids) x d`` rows ``p_v - p_w`` for edges tailed at ``v``."""
    f = config.field
    return [_diff(f, config.point(v), config.point(graph.edge(eid).other(v))) for eid in edge_ids]

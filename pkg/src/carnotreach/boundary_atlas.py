"""Boundary strata of the attainable section in (p, q, r) coordinates.

Generators for every named stratum: the six vertices, twelve
one-parameter edge families (cube edges from mixed singular+bang words,
facet diagonals from 3-switch words), six flat facet triangles from
products of two two-letter blocks, and six quadric patches from 4-switch
words.  Every stratum carries an explicit witness-word map, so each
sampled point is attained by construction.

The quadric patches, generated in full, overlap the interior of the
attainable body; `trim_and_mesh` keeps only samples certified as
boundary by an attainability prober (outside unattainable, inside
attainable) and assembles a triangle mesh exported as OBJ.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import attainability
from .words import InvariantViolation, PqrPoint, Word, canonicalize, pqr, word_to_dict

__all__ = [
    "FacePatch",
    "VertexWitness",
    "AtlasMesh",
    "vertices",
    "edge_families",
    "flat_triangles",
    "triangle_word",
    "quadric_patches",
    "quadric_crossing_residual",
    "make_prober",
    "trim_and_mesh",
    "write_obj",
    "strata_csv",
]

_THIRD = {frozenset({1, 2}): 3, frozenset({1, 3}): 2, frozenset({2, 3}): 1}

# facet of the cube swept when letter u always precedes letter v:
# (coordinate index into (p, q, r), facet value)
_FACET = {
    (1, 2): (0, 1.0),
    (2, 1): (0, 0.0),
    (2, 3): (1, 1.0),
    (3, 2): (1, 0.0),
    (3, 1): (2, 1.0),
    (1, 3): (2, 0.0),
}


@dataclass(frozen=True)
class FacePatch:
    """A parametrized stratum of the boundary atlas.

    `word_map` sends a parameter tuple inside `param_box` to a witness
    word; `equation`, when present, vanishes on the patch and is
    nonpositive on the body side; `outward` is the unit normal pointing
    away from the body.
    """

    kind: str  # vertex | cube-edge | diagonal-edge | flat-triangle | quadric
    id: str
    pattern: tuple[int, ...]
    param_box: tuple[tuple[float, float], ...]
    word_map: Callable[..., Word]
    equation: Callable[[np.ndarray], float] | None = None
    outward: Callable[[np.ndarray], np.ndarray] | None = None

    def word(self, *params) -> Word:
        return canonicalize(self.word_map(*params))

    def point(self, *params) -> PqrPoint:
        return pqr(self.word(*params))

    def sample_grid(self, resolution: int):
        """Yield (params, word, point) over a regular grid of the box."""
        if resolution < 2:
            raise InvariantViolation("resolution", f"resolution must be >= 2, got {resolution}")
        axes = [np.linspace(lo, hi, resolution) for lo, hi in self.param_box]
        for idx in np.ndindex(*(resolution,) * len(axes)):
            params = tuple(axes[d][i] for d, i in enumerate(idx))
            w = self.word(*params)
            yield params, w, pqr(w)


@dataclass(frozen=True)
class VertexWitness:
    label: str
    point: PqrPoint
    word: Word


def vertices() -> list[VertexWitness]:
    """The six vertices with their 3-arc permutation witness words."""
    table = {
        (1, 3, 2): "A1",
        (2, 1, 3): "B2",
        (3, 2, 1): "C1",
        (3, 1, 2): "A2",
        (2, 3, 1): "C2",
        (1, 2, 3): "D1",
    }
    out = []
    for pattern, label in table.items():
        w = Word.of((l, 1.0) for l in pattern)
        out.append(VertexWitness(label, pqr(w), w))
    return out


def _cube_edge_patch(i: int, j: int, after: bool) -> FacePatch:
    k = _THIRD[frozenset({i, j})]

    def word_map(s):
        block = [(i, s), (j, 1.0), (i, 1.0 - s)]
        arcs = block + [(k, 1.0)] if after else [(k, 1.0)] + block
        return Word.of(arcs)

    pos = "post" if after else "pre"
    return FacePatch(
        kind="cube-edge",
        id=f"cube-edge-{i}{j}-{pos}{k}",
        pattern=tuple(l for l, _ in word_map(0.5).arcs),
        param_box=((0.0, 1.0),),
        word_map=word_map,
    )


def _diagonal_patch(i: int, j: int) -> FacePatch:
    k = _THIRD[frozenset({i, j})]

    def word_map(a):
        return Word.of([(k, a), (i, 1.0), (j, 1.0), (k, 1.0 - a)])

    return FacePatch(
        kind="diagonal-edge",
        id=f"diagonal-{i}{j}",
        pattern=(k, i, j, k),
        param_box=((0.0, 1.0),),
        word_map=word_map,
    )


def edge_families() -> list[FacePatch]:
    """Twelve one-parameter families: six cube edges, six facet diagonals."""
    patches = []
    for i, j in ((1, 2), (1, 3), (2, 3)):
        patches.append(_cube_edge_patch(i, j, after=True))
        patches.append(_cube_edge_patch(i, j, after=False))
    for i, j in ((1, 2), (2, 1), (2, 3), (3, 2), (3, 1), (1, 3)):
        patches.append(_diagonal_patch(i, j))
    return patches


def triangle_word(u: int, w: int, v: int, a: float, b: float, c: float) -> Word:
    """Product of a {u, w} block and a {w, v} block; sweeps the facet
    triangle where u always precedes v."""
    if b + c > 1.0 + 1e-12:
        raise InvariantViolation("triangle-domain", f"need b + c <= 1, got b={b}, c={c}")
    return canonicalize(
        Word.of([(u, a), (w, b), (u, 1.0 - a), (w, c), (v, 1.0), (w, 1.0 - b - c)])
    )


def _flat_triangle_patch(u: int, w: int, v: int) -> FacePatch:
    axis, value = _FACET[(u, v)]
    sign = 1.0 if value == 1.0 else -1.0

    def word_map(a, b):
        # the c = 0 slice of triangle_word already covers the full facet triangle
        return triangle_word(u, w, v, a, b, 0.0)

    def equation(x):
        return sign * (x[axis] - value)

    def outward(x):
        n = np.zeros(3)
        n[axis] = sign
        return n

    return FacePatch(
        kind="flat-triangle",
        id=f"flat-{u}{w}{v}",
        pattern=(u, w, u, w, v, w),
        param_box=((0.0, 1.0), (0.0, 1.0)),
        word_map=word_map,
        equation=equation,
        outward=outward,
    )


def flat_triangles() -> list[FacePatch]:
    """Six facet triangles, one per cube facet, from two-block words."""
    perms = [(1, 2, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1), (2, 1, 3), (1, 3, 2)]
    return [_flat_triangle_patch(u, w, v) for u, w, v in perms]


_EVEN_QUADRICS = {
    (1, 2, 3, 1, 2): (
        lambda x: x[0] + x[1] * x[2] - 1.0,
        lambda x: np.array([1.0, x[2], x[1]]),
    ),
    (2, 3, 1, 2, 3): (
        lambda x: x[1] + x[2] * x[0] - 1.0,
        lambda x: np.array([x[2], 1.0, x[0]]),
    ),
    (3, 1, 2, 3, 1): (
        lambda x: x[2] + x[0] * x[1] - 1.0,
        lambda x: np.array([x[1], x[0], 1.0]),
    ),
}

_ODD_QUADRICS = {
    (2, 1, 3, 2, 1): (
        lambda x: (1.0 - x[0]) + (1.0 - x[1]) * (1.0 - x[2]) - 1.0,
        lambda x: np.array([-1.0, -(1.0 - x[2]), -(1.0 - x[1])]),
    ),
    (3, 2, 1, 3, 2): (
        lambda x: (1.0 - x[1]) + (1.0 - x[2]) * (1.0 - x[0]) - 1.0,
        lambda x: np.array([-(1.0 - x[2]), -1.0, -(1.0 - x[0])]),
    ),
    (1, 3, 2, 1, 3): (
        lambda x: (1.0 - x[2]) + (1.0 - x[0]) * (1.0 - x[1]) - 1.0,
        lambda x: np.array([-(1.0 - x[1]), -(1.0 - x[0]), -1.0]),
    ),
}


def _quadric_patch(pattern, equation, gradient) -> FacePatch:
    def word_map(a, b):
        l0, l1, l2, l3, l4 = pattern
        return Word.of([(l0, a), (l1, b), (l2, 1.0), (l3, 1.0 - a), (l4, 1.0 - b)])

    def outward(x):
        g = gradient(x)
        return g / np.linalg.norm(g)

    return FacePatch(
        kind="quadric",
        id="quadric-" + "".join(map(str, pattern)),
        pattern=tuple(pattern),
        param_box=((0.0, 1.0), (0.0, 1.0)),
        word_map=word_map,
        equation=equation,
        outward=outward,
    )


def quadric_patches() -> list[FacePatch]:
    """Six quadric patches from 4-switch patterns.

    Cyclic letter patterns give the surfaces p + qr = 1 (and cyclic
    images); the reversed-orientation patterns give
    (1-p) + (1-q)(1-r) = 1 and its cyclic images.  Every sampled witness
    satisfies its equation exactly.
    """
    out = []
    for pattern, (eq, grad) in {**_EVEN_QUADRICS, **_ODD_QUADRICS}.items():
        out.append(_quadric_patch(pattern, eq, grad))
    return out


def quadric_crossing_residual(x: np.ndarray) -> float:
    """Distance-like indicator of the mutual crossing curves of adjacent
    quadrics (two coordinates coincide there, e.g. p = r with p(1+q) = 1)."""
    return float(min(abs(x[0] - x[1]), abs(x[1] - x[2]), abs(x[2] - x[0])))


def make_prober(**fit_kwargs) -> Callable[[PqrPoint], bool]:
    """Attainability handle for trimming: point -> attained?"""

    def prober(point: PqrPoint) -> bool:
        return attainability.fit(point, **fit_kwargs).status == "attained"

    return prober


@dataclass
class SampleRecord:
    patch_id: str
    params: tuple[float, ...]
    point: tuple[float, float, float]
    boundary: bool
    crossing: float
    error: str | None = None


@dataclass
class AtlasMesh:
    """Triangle mesh of the boundary with per-sample provenance."""

    vertices: list[tuple[float, float, float]] = field(default_factory=list)
    groups: dict[str, list[tuple[int, int, int]]] = field(default_factory=dict)
    samples: list[SampleRecord] = field(default_factory=list)
    failures: list[SampleRecord] = field(default_factory=list)


def _probe_side(prober, x: np.ndarray) -> bool:
    if (x < -1e-12).any() or (x > 1.0 + 1e-12).any():
        return False  # the body lives inside the unit cube
    return prober(PqrPoint(*np.clip(x, 0.0, 1.0)))


def trim_and_mesh(
    resolution: int,
    prober: Callable[[PqrPoint], bool],
    eps: float = 1e-3,
    threads: int = 1,
) -> AtlasMesh:
    """Sample the surface patches, keep oracle-certified boundary samples,
    and triangulate them.

    A sample is boundary iff the point eps outward is unattainable and the
    point eps inward is attainable.  Prober failures are recorded, never
    dropped.  Probing parallelizes over samples; output ordering is
    deterministic (grid index order) regardless of thread count.
    """
    if resolution < 2:
        raise InvariantViolation("resolution", f"resolution must be >= 2, got {resolution}")
    mesh = AtlasMesh()
    vertex_index: dict[tuple[float, float, float], int] = {}

    def add_vertex(x: np.ndarray) -> int:
        key = tuple(round(float(v), 9) for v in x)
        if key not in vertex_index:
            vertex_index[key] = len(mesh.vertices)
            mesh.vertices.append(tuple(float(v) for v in x))
        return vertex_index[key]

    def probe_sample(task):
        x, n = task
        try:
            outside_free = not _probe_side(prober, x + eps * n)
            inside_full = _probe_side(prober, x - eps * n)
            return outside_free and inside_full, None
        except Exception as exc:
            return False, f"{type(exc).__name__}: {exc}"

    for patch in quadric_patches() + flat_triangles():
        grid = np.empty((resolution, resolution), dtype=object)
        kept = np.zeros((resolution, resolution), dtype=bool)
        axes = [np.linspace(lo, hi, resolution) for lo, hi in patch.param_box]
        cells = [(ia, ib) for ia in range(resolution) for ib in range(resolution)]
        tasks = []
        for ia, ib in cells:
            x = patch.point(axes[0][ia], axes[1][ib]).as_array()
            grid[ia, ib] = x
            tasks.append((x, patch.outward(x)))

        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(threads) as pool:
                outcomes = list(pool.map(probe_sample, tasks))
        else:
            outcomes = [probe_sample(t) for t in tasks]

        for (ia, ib), (boundary, error) in zip(cells, outcomes):
            x = grid[ia, ib]
            rec = SampleRecord(
                patch.id,
                (float(axes[0][ia]), float(axes[1][ib])),
                tuple(x),
                boundary,
                quadric_crossing_residual(x),
                error,
            )
            if error is not None:
                mesh.failures.append(rec)
            mesh.samples.append(rec)
            kept[ia, ib] = boundary

        faces: list[tuple[int, int, int]] = []
        for ia in range(resolution - 1):
            for ib in range(resolution - 1):
                corners = [(ia, ib), (ia + 1, ib), (ia + 1, ib + 1), (ia, ib + 1)]
                if not all(kept[c] for c in corners):
                    continue
                vids = [add_vertex(grid[c]) for c in corners]
                for tri in ((vids[0], vids[1], vids[2]), (vids[0], vids[2], vids[3])):
                    if len(set(tri)) < 3:
                        continue  # parametrization collapsed along a box edge
                    pts = [np.array(mesh.vertices[v]) for v in tri]
                    normal = np.cross(pts[1] - pts[0], pts[2] - pts[0])
                    center = (pts[0] + pts[1] + pts[2]) / 3.0
                    if np.dot(normal, patch.outward(center)) < 0:
                        tri = (tri[0], tri[2], tri[1])  # enforce outward orientation
                    faces.append(tri)
        if faces:
            mesh.groups[patch.id] = faces
    return mesh


def write_obj(mesh: AtlasMesh) -> str:
    buf = io.StringIO()
    for x, y, z in mesh.vertices:
        buf.write(f"v {x!r} {y!r} {z!r}\n")
    for group, faces in mesh.groups.items():
        buf.write(f"g {group}\n")
        for i, j, k in faces:
            buf.write(f"f {i + 1} {j + 1} {k + 1}\n")
    return buf.getvalue()


def strata_csv(resolution: int = 11) -> str:
    """CSV dump of all strata: label, parameters, p, q, r, witness word."""
    buf = io.StringIO()
    buf.write("label,params,p,q,r,witness\n")

    def row(label, params, point, word):
        params_str = ";".join(repr(float(v)) for v in params)
        witness = json.dumps(word_to_dict(word))
        buf.write(
            f'{label},{params_str},{point.p!r},{point.q!r},{point.r!r},"{witness.replace(chr(34), chr(34) * 2)}"\n'
        )

    for v in vertices():
        row(v.label, (), v.point, v.word)
    for patch in edge_families() + flat_triangles() + quadric_patches():
        for params, word, point in patch.sample_grid(resolution):
            row(patch.id, params, point, word)
    return buf.getvalue()

"""Validated convex polytopes with exact facet data.

A polytope is given by its vertices and, for ``dim >= 3``, the vertex index
lists of its facets.  Validation checks every listed facet against the
supporting-hyperplane condition and orients its normal outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from typing import Iterable, Sequence

from . import linalg
from .algebra import ExactScalar, LinearForm, as_fraction
from .errors import (
    DegenerateInput,
    FacetNotSupporting,
    FacetsRequired,
    NotFullDimensional,
    UnsupportedDimension,
)

Point = tuple[Fraction, ...]
Simplex = tuple[int, ...]


@dataclass(frozen=True)
class AffineSubspace:
    """Solutions of ``<x_k, t> = 1`` for every vertex ``k`` in ``defining_indices``."""

    point: Point
    directions: tuple[Point, ...]
    defining_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.directions)

    def at(self, params: Sequence[Fraction]) -> Point:
        out = list(self.point)
        for c, v in zip(params, self.directions):
            out = [a + c * b for a, b in zip(out, v)]
        return tuple(out)


@dataclass(frozen=True)
class Facet:
    id: int
    vertex_ids: tuple[int, ...]
    normal: Point  # outward, unnormalized
    norm_sq: Fraction
    volume: ExactScalar
    triangulation: tuple[Simplex, ...]

    @property
    def is_simplex(self) -> bool:
        return len(self.triangulation) == 1 and len(self.vertex_ids) == len(self.normal)

    @property
    def volume_over_norm(self) -> Fraction:
        """``V(F) / |N|``, always rational because every piece of F is parallel to N."""
        return (self.volume / ExactScalar.sqrt(self.norm_sq)).as_fraction()


class Polytope:
    """A validated full-dimensional convex polytope in R^d.

    Build instances with :func:`validate`.
    """

    def __init__(self, dim: int, vertices: tuple[Point, ...], facet_ids: tuple[tuple[int, ...], ...]):
        self.dim = dim
        self.vertices = vertices
        self._facet_ids = facet_ids
        self._subface_cache: dict[frozenset, list[frozenset]] = {}
        self.facets: tuple[Facet, ...] = ()

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def is_simplicial(self) -> bool:
        return all(f.is_simplex for f in self.facets)

    @cached_property
    def forms(self) -> tuple[LinearForm, ...]:
        return tuple(LinearForm.for_vertex(v) for v in self.vertices)

    @cached_property
    def volume(self) -> Fraction:
        return sum(
            (simplex_volume_full(self, s) for s in fan_triangulation(self)), Fraction(0)
        )

    def points(self, ids: Iterable[int]) -> list[Point]:
        return [self.vertices[i] for i in ids]

    def subfaces(self, face: frozenset) -> list[frozenset]:
        """Facets of a face (given as a vertex id set)."""
        cached = self._subface_cache.get(face)
        if cached is not None:
            return cached
        if len(face) == self.num_vertices:
            result = [frozenset(f) for f in self._facet_ids]
        else:
            k = linalg.affine_rank(self.points(sorted(face)))
            candidates = set()
            for f in self._facet_ids:
                inter = face & frozenset(f)
                if inter != face and len(inter) >= k and (
                    linalg.affine_rank(self.points(sorted(inter))) == k - 1
                ):
                    candidates.add(inter)
            result = [c for c in candidates if not any(c < o for o in candidates)]
            result.sort(key=sorted)
        self._subface_cache[face] = result
        return result

    def to_document(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [[_q(x) for x in v] for v in self.vertices],
            "facets": [list(f.vertex_ids) for f in self.facets],
        }

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, m={self.num_vertices}, facets={len(self.facets)})"


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def validate(
    dim: int,
    vertices: Sequence[Sequence],
    facets: Sequence[Sequence[int]] | None = None,
) -> Polytope:
    """Check raw vertex/facet data and build a :class:`Polytope`."""
    if dim < 1:
        raise DegenerateInput("dimension must be positive")
    pts = tuple(tuple(as_fraction(x) for x in v) for v in vertices)
    if any(len(p) != dim for p in pts):
        raise DegenerateInput("vertex with the wrong number of coordinates")
    if len(pts) < dim + 1:
        raise NotFullDimensional(f"need at least {dim + 1} vertices")
    if len(set(pts)) != len(pts):
        raise DegenerateInput("vertices are not pairwise distinct")
    if linalg.affine_rank(pts) != dim:
        raise NotFullDimensional("vertices do not span R^d")

    if facets is None:
        if dim != 2:
            raise FacetsRequired("facets required for dim >= 3" if dim > 2 else "facets required")
        facet_ids = _polygon_edges(pts)
    else:
        facet_ids = tuple(tuple(sorted(int(i) for i in f)) for f in facets)
        if len(set(facet_ids)) != len(facet_ids):
            raise DegenerateInput("duplicate facet")
        for f in facet_ids:
            if len(set(f)) != len(f) or any(not 0 <= i < len(pts) for i in f):
                raise DegenerateInput(f"bad vertex indices in facet {list(f)}")

    normals = [_supporting_normal(pts, f) for f in facet_ids]
    for v in range(len(pts)):
        incident = [n for f, n in zip(facet_ids, normals) if v in f]
        if len(incident) < dim or linalg.rank(incident) < dim:
            raise DegenerateInput(f"vertex {v} is not a vertex of the listed facets")

    poly = Polytope(dim, pts, facet_ids)
    built = []
    for fid, (ids, normal) in enumerate(zip(facet_ids, normals)):
        tri = tuple(fan_triangulation(poly, frozenset(ids)))
        volume = sum(
            (simplex_volume(poly.points(s)) for s in tri), ExactScalar.zero()
        )
        built.append(
            Facet(fid, ids, normal, linalg.dot(normal, normal), volume, tri)
        )
    poly.facets = tuple(built)

    closing = [Fraction(0)] * dim
    for f in poly.facets:
        w = f.volume_over_norm
        closing = [c + w * n for c, n in zip(closing, f.normal)]
    if any(closing):
        raise DegenerateInput("facet list does not close up (missing facets?)")
    return poly


def _supporting_normal(pts: Sequence[Point], ids: Sequence[int]) -> Point:
    dim = len(pts[0])
    face = [pts[i] for i in ids]
    if len(face) < dim or linalg.affine_rank(face) != dim - 1:
        raise FacetNotSupporting(f"facet {list(ids)} does not span a hyperplane")
    base = face[0]
    edges: list[Point] = []
    for p in face[1:]:
        e = linalg.sub(p, base)
        if linalg.rank(edges + [e]) > len(edges):
            edges.append(e)
        if len(edges) == dim - 1:
            break
    normal = linalg.cross(edges)
    level = linalg.dot(normal, base)
    sides = set()
    for i, p in enumerate(pts):
        if i in ids:
            continue
        side = linalg.dot(normal, p) - level
        if side == 0:
            raise FacetNotSupporting(f"vertex {i} lies on the hyperplane of facet {list(ids)}")
        sides.add(side > 0)
    if len(sides) > 1:
        raise FacetNotSupporting(f"facet {list(ids)} has vertices on both sides")
    if sides == {True}:
        normal = tuple(-x for x in normal)
    return normal


def _polygon_edges(pts: Sequence[Point]) -> tuple[tuple[int, ...], ...]:
    n = len(pts)
    cx = sum((p[0] for p in pts), Fraction(0)) / n
    cy = sum((p[1] for p in pts), Fraction(0)) / n
    rel = [(p[0] - cx, p[1] - cy) for p in pts]

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def compare(i, j):
        a, b = rel[i], rel[j]
        if half(a) != half(b):
            return half(a) - half(b)
        c = a[0] * b[1] - a[1] * b[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    order = sorted(range(n), key=cmp_to_key(compare))
    for k in range(n):
        a, b, c = (pts[order[(k + j) % n]] for j in range(3))
        turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if turn <= 0:
            raise DegenerateInput("vertices are not in strictly convex position")
    start = order.index(0)
    order = order[start:] + order[:start]
    return tuple(tuple(sorted((order[k], order[(k + 1) % n]))) for k in range(n))


def simplex_volume(points: Sequence[Point]) -> ExactScalar:
    """k-volume of a k-simplex in R^d: ``sqrt(det Gram) / k!``."""
    base = points[0]
    edges = [linalg.sub(p, base) for p in points[1:]]
    k = len(edges)
    if k == 0:
        return ExactScalar.rational(1)
    gram = [[linalg.dot(a, b) for b in edges] for a in edges]
    return ExactScalar.sqrt(linalg.det(gram)) / math.factorial(k)


def simplex_volume_full(P: Polytope, simplex: Sequence[int]) -> Fraction:
    pts = P.points(simplex)
    edges = [linalg.sub(p, pts[0]) for p in pts[1:]]
    return abs(linalg.det(edges)) / math.factorial(P.dim)


def facet_normal(P: Polytope, facet: int) -> tuple[Point, Fraction]:
    f = P.facets[facet]
    return f.normal, f.norm_sq


def facet_volume(P: Polytope, facet: int) -> ExactScalar:
    return P.facets[facet].volume


def _lex_least(P: Polytope, ids: Iterable[int]) -> int:
    return min(ids, key=lambda i: (P.vertices[i], i))


def fan_triangulation(
    P: Polytope, face: frozenset | Sequence[int] | None = None, apex: int | None = None
) -> list[Simplex]:
    """Placing triangulation of ``face`` (default: all of P).

    Cones from ``apex`` (default: the lexicographically least vertex) over
    the triangulations of the subfaces that miss it; subfaces recurse with
    their own least vertex.
    """
    ids = frozenset(range(P.num_vertices)) if face is None else frozenset(face)
    k = linalg.affine_rank(P.points(sorted(ids)))
    if len(ids) == k + 1:
        return [tuple(sorted(ids))]
    if apex is None:
        apex = _lex_least(P, ids)
    elif apex not in ids:
        raise ValueError(f"apex {apex} is not a vertex of the face")
    out = []
    for sub in P.subfaces(ids):
        if apex in sub:
            continue
        for tau in fan_triangulation(P, sub):
            out.append(tuple(sorted(tau + (apex,))))
    return out


def simplex_volume_ratios(P: Polytope, face: Sequence[int], simplices: Sequence[Simplex]) -> list[Fraction]:
    """``V(sigma)/V(face)`` for simplices triangulating ``face``.

    All simplices share one affine flat, so projecting onto a suitable
    coordinate subspace scales every volume by the same factor.
    """
    pts = P.points(sorted(face))
    k = linalg.affine_rank(pts)
    directions = [linalg.sub(p, pts[0]) for p in pts[1:]]
    _, pivots = linalg.rref(directions)
    coords = pivots[:k]
    sizes = []
    for s in simplices:
        sp = P.points(s)
        edges = [[linalg.sub(p, sp[0])[c] for c in coords] for p in sp[1:]]
        sizes.append(abs(linalg.det(edges)) if edges else Fraction(1))
    total = sum(sizes, Fraction(0))
    return [x / total for x in sizes]


def face_lattice(P: Polytope, face: frozenset | None = None) -> set[frozenset]:
    """Vertex sets of all nonempty faces of ``face`` (default P), itself included."""
    top = frozenset(range(P.num_vertices)) if face is None else frozenset(face)
    faces = {top}
    stack = [top]
    while stack:
        current = stack.pop()
        if len(current) == 1:
            continue
        for sub in P.subfaces(current):
            if sub not in faces:
                faces.add(sub)
                stack.append(sub)
    return faces


def minimal_nonfaces(P: Polytope, face: frozenset | None = None) -> list[tuple[int, ...]]:
    """Vertex subsets that are not faces but all of whose proper subsets are."""
    faces = face_lattice(P, face) | {frozenset()}
    ids = max(faces, key=len)
    found = set()
    for G in faces:
        for v in ids - G:
            tau = G | {v}
            if tau in faces or tau in found:
                continue
            if all(tau - {w} in faces for w in tau):
                found.add(tau)
    return sorted(tuple(sorted(t)) for t in found)


def nonface_subspaces(P: Polytope, facet: int | None = None) -> list[AffineSubspace]:
    """``L_tau`` for every minimal non-face ``tau`` of a facet (or of P itself).

    Larger non-faces contain a minimal one, so their subspaces add nothing
    to the arrangement.  Empty ``L_tau`` are left out.  Limited to
    ``dim P <= 3``, where the face lattice comes straight from the facet list.
    """
    if P.dim > 3:
        raise UnsupportedDimension("non-face enumeration needs dim P <= 3")
    face = None if facet is None else frozenset(P.facets[facet].vertex_ids)
    out = []
    for tau in minimal_nonfaces(P, face):
        solved = linalg.solve_affine(P.points(tau), [Fraction(1)] * len(tau))
        if solved is None:
            continue
        point, directions = solved
        out.append(AffineSubspace(point, tuple(directions), tau))
    return out

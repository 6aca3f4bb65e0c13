"""Adjoints, the surface adjoint and exact vanishing certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import ExactScalar, LinearForm, SparsePoly, product_of_forms
from .polytope import AffineSubspace, Polytope, Simplex, fan_triangulation, simplex_volume_ratios


def adjoint(
    P: Polytope,
    facet: int | None = None,
    triangulation: Sequence[Simplex] | None = None,
) -> SparsePoly:
    """Adjoint of P (``facet=None``) or of one of its facets.

    ``sum_sigma V(sigma)/V(Q) * prod_{k in Q, k not in sigma} L_k`` over a
    triangulation of Q; always in the ambient variables ``t1..td``.
    """
    d = P.dim
    if facet is None:
        face = tuple(range(P.num_vertices))
    else:
        face = P.facets[facet].vertex_ids
    if triangulation is None:
        triangulation = (
            P.facets[facet].triangulation if facet is not None else fan_triangulation(P)
        )
    if len(triangulation) == 1 and len(triangulation[0]) == len(face):
        return SparsePoly.constant(d)
    ratios = simplex_volume_ratios(P, face, triangulation)
    out = SparsePoly(d)
    for sigma, ratio in zip(triangulation, ratios):
        rest = [P.forms[k] for k in face if k not in sigma]
        out = out + product_of_forms(rest, d) * ratio
    return out


def gf_denominator(P: Polytope) -> list[LinearForm]:
    """The vertex forms ``L_k``; their product is the generating-function denominator."""
    return list(P.forms)


def expand_denominator(P: Polytope) -> SparsePoly:
    return product_of_forms(P.forms, P.dim)


@dataclass(frozen=True)
class SurfaceAdjoint:
    """Numerator of the surface-tensor generating function, split by facet.

    The coefficient of ``u_F^s`` is ``weights[F] * per_facet[F]``; the
    polynomial part is rational, the weight ``V(F)`` may carry a radical.
    """

    s: int
    per_facet: dict[int, SparsePoly]
    weights: dict[int, ExactScalar]
    facet_adjoints: dict[int, SparsePoly] = field(default_factory=dict)

    def degree(self) -> int:
        return max(p.total_degree for p in self.per_facet.values())

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "facets": [
                {
                    "facet": fid,
                    "weight": self.weights[fid].to_json(),
                    "adjoint": self.facet_adjoints[fid].to_json(),
                    "polynomial": self.per_facet[fid].to_json(),
                    "text": str(self.per_facet[fid]),
                }
                for fid in sorted(self.per_facet)
            ],
        }


def surface_adjoint(P: Polytope, s: int = 0) -> SurfaceAdjoint:
    per_facet, weights, adjoints = {}, {}, {}
    for f in P.facets:
        ad = adjoint(P, f.id)
        others = [P.forms[k] for k in range(P.num_vertices) if k not in f.vertex_ids]
        adjoints[f.id] = ad
        per_facet[f.id] = ad * product_of_forms(others, P.dim)
        weights[f.id] = f.volume
    return SurfaceAdjoint(s, per_facet, weights, adjoints)


@dataclass(frozen=True)
class VanishingCertificate:
    passed: bool
    degree: int
    subspace_dim: int
    values_per_direction: int
    points_checked: int
    is_proof: bool
    failing_point: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "degree": self.degree,
            "subspace_dim": self.subspace_dim,
            "values_per_direction": self.values_per_direction,
            "points_checked": self.points_checked,
            "proof": self.is_proof,
            "failing_point": None
            if self.failing_point is None
            else [str(x) for x in self.failing_point],
        }


def check_vanishing(
    p: SparsePoly | SurfaceAdjoint,
    S: AffineSubspace,
    samples: int | None = None,
    seed: int = 0,
) -> VanishingCertificate:
    """Exact evaluation of ``p`` on a grid inside ``S``.

    The grid takes ``samples`` distinct rational parameter values along each
    direction of S (default ``deg p + 1``).  A polynomial of degree D that
    vanishes on a grid with more than D values per axis vanishes
    identically on S, so the certificate is a proof whenever
    ``samples > deg p``.  A :class:`SurfaceAdjoint` passes only if every
    facet term does, since the ``u_F`` are independent symbols.
    """
    polys = list(p.per_facet.values()) if isinstance(p, SurfaceAdjoint) else [p]
    degree = max(q.total_degree for q in polys)
    count = samples if samples is not None else max(degree, 0) + 1
    rng = random.Random(seed)
    axis_values: list[list[Fraction]] = []
    for _ in S.directions:
        values: set[Fraction] = set()
        while len(values) < count:
            values.add(Fraction(rng.randint(-50, 50), rng.randint(1, 12)))
        axis_values.append(sorted(values))
    checked = 0
    for params in product(*axis_values):
        point = S.at(params)
        checked += 1
        for q in polys:
            if q(point) != 0:
                return VanishingCertificate(
                    False, degree, S.dim, count, checked, True, point
                )
    return VanishingCertificate(True, degree, S.dim, count, checked, S.dim == 0 or count > degree)

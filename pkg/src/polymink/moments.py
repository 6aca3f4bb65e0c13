"""Monomial moments of simplices via barycentric coordinates.

Writes ``x^alpha`` as a polynomial in the barycentric coordinates
``lambda_0..lambda_k`` of a k-simplex and integrates each monomial with

    mean of lambda^beta over the simplex = k! * prod(beta_i!) / (k + |beta|)!

No generating functions are involved, which is what makes this usable as an
independent check on them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import ExactScalar
from .errors import DegenerateSimplex
from .polytope import Point, simplex_volume


def _expand_barycentric(vertices: Sequence[Point], alpha: Sequence[int]) -> dict[tuple[int, ...], Fraction]:
    n = len(vertices)
    poly: dict[tuple[int, ...], Fraction] = {(0,) * n: Fraction(1)}
    for j, power in enumerate(alpha):
        for _ in range(power):
            nxt: dict[tuple[int, ...], Fraction] = {}
            for beta, c in poly.items():
                for k, v in enumerate(vertices):
                    if not v[j]:
                        continue
                    b = beta[:k] + (beta[k] + 1,) + beta[k + 1 :]
                    nxt[b] = nxt.get(b, 0) + c * v[j]
            poly = nxt
    return poly


def simplex_average(vertices: Sequence[Point], alpha: Sequence[int]) -> Fraction:
    """Mean value of ``x^alpha`` over the simplex (uniform measure)."""
    k = len(vertices) - 1
    if linalg.affine_rank(vertices) != k:
        raise DegenerateSimplex("simplex vertices are affinely dependent")
    total = Fraction(0)
    for beta, c in _expand_barycentric(vertices, alpha).items():
        num = math.factorial(k) * math.prod(math.factorial(b) for b in beta)
        total += c * Fraction(num, math.factorial(k + sum(beta)))
    return total


def simplex_moment(vertices: Sequence[Point], alpha: Sequence[int]) -> ExactScalar:
    """Exact ``integral of x^alpha`` over the simplex (its own k-volume measure)."""
    vertices = [tuple(Fraction(x) for x in v) for v in vertices]
    return simplex_volume(vertices) * simplex_average(vertices, alpha)

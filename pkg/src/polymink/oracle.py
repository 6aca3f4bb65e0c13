"""Independent reference computations.

Nothing here uses adjoints of facets or the closed-form coefficients: the
surface tensor is integrated directly over a triangulation of each facet,
and moments come from the full-dimensional moment generating function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .adjoint import adjoint
from .algebra import ExactScalar, SparsePoly, truncated_series
from .moments import simplex_average, simplex_moment
from .polytope import Polytope, fan_triangulation, simplex_volume, simplex_volume_full
from .tensor import BigradedTensor, multi_indices, multiplicities, surface_prefactor


def definitional_surface_tensor(P: Polytope, r: int, s: int) -> BigradedTensor:
    """``1/(r! s! omega_{1+s}) * sum_F (integral over F of x^r) u_F^s``."""
    return definitional_surface_tensors(P, r, [s])[0]


def definitional_surface_tensors(P: Polytope, r: int, s_values: Sequence[int]) -> list[BigradedTensor]:
    """Same as :func:`definitional_surface_tensor` for several s, sharing the facet integrals."""
    d = P.dim
    integrals: dict[int, dict] = {}
    for f in P.facets:
        pieces = [(simplex_volume(P.points(sigma)), P.points(sigma)) for sigma in f.triangulation]
        integrals[f.id] = {}
        for I in multi_indices(d, r):
            a = multiplicities(I, d)
            integrals[f.id][I] = sum(
                (vol * simplex_average(pts, a) for vol, pts in pieces), ExactScalar.zero()
            )
    out = []
    for s in s_values:
        prefactor = surface_prefactor(s) / math.factorial(r)
        scaled = {}
        for f in P.facets:
            inv_norm = ExactScalar.sqrt(f.norm_sq).inverse()
            scale = ExactScalar.rational(1)
            for _ in range(s):
                scale = scale * inv_norm
            scaled[f.id] = {I: v * scale for I, v in integrals[f.id].items()}
        entries = {}
        for I in multi_indices(d, r):
            for J in multi_indices(d, s):
                total = ExactScalar.zero()
                for f in P.facets:
                    u = math.prod((f.normal[j] for j in J), start=Fraction(1))
                    if u:
                        total = total + scaled[f.id][I] * u
                entries[(I, J)] = total * prefactor
        out.append(BigradedTensor(d, r, s, d - 1, entries, "definitional"))
    return out


@dataclass(frozen=True)
class MomentSeries:
    """Truncated moment generating function and what it encodes.

    ``moments[a]`` is the mean of ``x^a`` over P; ``tensors[r]`` is the
    volume tensor of x-rank r.
    """

    series: SparsePoly
    moments: dict[tuple[int, ...], Fraction]
    tensors: list[BigradedTensor]


def moment_series(P: Polytope, max_degree: int, triangulation: Sequence[Sequence[int]] | None = None) -> SparsePoly:
    """``(1/V(P)) sum_sigma V(sigma) / prod_{k in sigma} L_k`` up to ``max_degree``."""
    if triangulation is None:
        triangulation = fan_triangulation(P)
    total = SparsePoly(P.dim)
    one = SparsePoly.constant(P.dim)
    for sigma in triangulation:
        part = truncated_series(one, [P.forms[k] for k in sigma], max_degree)
        total = total + part * simplex_volume_full(P, sigma)
    return total * (1 / P.volume)


def moment_gf_series(P: Polytope, max_degree: int) -> MomentSeries:
    """Moments and volume tensors up to ``max_degree`` from the generating function.

    The degree-r part of the series is ``(r+d)!/d! * Phi_d^{r,0}(t) / V(P)``.
    """
    d = P.dim
    series = moment_series(P, max_degree)
    moments = {}
    for r in range(max_degree + 1):
        for I in multi_indices(d, r):
            a = multiplicities(I, d)
            moments[a] = (
                series.coefficient(a)
                * math.prod(math.factorial(e) for e in a)
                * Fraction(math.factorial(d), math.factorial(r + d))
            )
    tensors = []
    for r in range(max_degree + 1):
        entries = {}
        for I in multi_indices(d, r):
            a = multiplicities(I, d)
            entries[(I, ())] = ExactScalar.rational(
                P.volume * moments[a] / math.factorial(r)
            )
        tensors.append(BigradedTensor(d, r, 0, d, entries, "moment-gf"))
    return MomentSeries(series, moments, tensors)


@dataclass(frozen=True)
class TriangulationReport:
    apices: tuple[int, int]
    adjoint_equal: bool
    series_equal: bool
    series_matches_moments: bool

    @property
    def passed(self) -> bool:
        return self.adjoint_equal and self.series_equal and self.series_matches_moments


def triangulation_independence(
    P: Polytope, max_degree: int, apices: tuple[int, int] | None = None
) -> TriangulationReport:
    """Compare the adjoint and moment series under fans from two different apices.

    The series is also compared with barycentric moments summed over the
    first triangulation.
    """
    if apices is None:
        order = sorted(range(P.num_vertices), key=lambda k: P.vertices[k])
        apices = (order[0], order[-1])
    first = fan_triangulation(P, apex=apices[0])
    second = fan_triangulation(P, apex=apices[1])
    adjoint_equal = adjoint(P, triangulation=first) == adjoint(P, triangulation=second)
    s1 = moment_series(P, max_degree, first)
    s2 = moment_series(P, max_degree, second)
    matches = True
    d = P.dim
    pieces = [P.points(sigma) for sigma in first]
    for r in range(max_degree + 1):
        for I in multi_indices(d, r):
            a = multiplicities(I, d)
            integral = sum((simplex_moment(pts, a) for pts in pieces), ExactScalar.zero())
            mean = integral.as_fraction() / P.volume
            expected = mean * Fraction(math.factorial(r + d), math.factorial(d)) / math.prod(
                math.factorial(e) for e in a
            )
            if s1.coefficient(a) != expected:
                matches = False
    return TriangulationReport(apices, adjoint_equal, s1 == s2, matches)


__all__ = [
    "MomentSeries",
    "TriangulationReport",
    "definitional_surface_tensor",
    "definitional_surface_tensors",
    "moment_gf_series",
    "moment_series",
    "run_checks",
    "triangulation_independence",
]


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "status": "PASS" if ok else "FAIL", "detail": detail}


def _skip(name: str, detail: str) -> dict:
    return {"name": name, "status": "SKIP", "detail": detail}


def run_checks(P: Polytope, max_degree: int = 3, max_s: int = 2, seed: int = 0) -> list[dict]:
    """Cross-check every engine against the independent routes on one polytope."""
    from .adjoint import check_vanishing, surface_adjoint
    from .errors import MethodUnsupported, UnsupportedDimension
    from .polytope import nonface_subspaces
    from .tensor import (
        assemble_surface_tensor,
        derivative_parts,
        e_elem,
        facet_form_product,
        formula_parts,
        partial_at_zero,
        series_parts,
        volume_tensor,
    )

    checks = []
    d, m = P.dim, P.num_vertices

    try:
        series = series_parts(P, max_degree)
    except MethodUnsupported:
        series = None
    s_values = list(range(max_s + 1))
    for r in range(max_degree + 1):
        references = definitional_surface_tensors(P, r, s_values)
        engines, skipped = {}, []
        for method, build in (("formula", formula_parts), ("derivative", derivative_parts)):
            try:
                engines[method] = build(P, r)
            except MethodUnsupported:
                skipped.append(method)
        if series is None:
            skipped.append("series")
        else:
            engines["series"] = series[r]
        detail = f"skipped: {', '.join(skipped)}" if skipped else ""
        for s, reference in zip(s_values, references):
            agree = all(
                assemble_surface_tensor(P, r, s, parts, method) == reference
                for method, parts in engines.items()
            )
            checks.append(_check(f"surface_tensor r={r} s={s} methods agree", agree, detail))

    closing = [sum((f.volume_over_norm * f.normal[i] for f in P.facets), Fraction(0)) for i in range(d)]
    checks.append(_check("facet normals weighted by volume sum to zero", not any(closing)))

    gf = moment_gf_series(P, max_degree)
    checks.append(
        _check(
            "moment series matches volume tensors",
            all(gf.tensors[r] == volume_tensor(P, r) for r in range(max_degree + 1)),
        )
    )
    report = triangulation_independence(P, max_degree)
    checks.append(
        _check(
            "triangulation independence",
            report.passed,
            f"apices {report.apices[0]} and {report.apices[1]}",
        )
    )

    if P.is_simplicial:
        ok = True
        for f in P.facets:
            LF = facet_form_product(P, f.id)
            pts = P.points(f.vertex_ids)
            for k in range(1, d + 1):
                for I in multi_indices(d, k):
                    if partial_at_zero(LF, I) != (-1) ** k * e_elem(I, pts):
                        ok = False
        checks.append(_check("facet form derivatives equal signed elementary symmetric sums", ok))
    else:
        checks.append(_skip("facet form derivatives equal signed elementary symmetric sums", "not simplicial"))

    ad = adjoint(P)
    sa = surface_adjoint(P)
    checks.append(_check("adjoint is 1 at the origin", ad.constant_term() == 1))
    checks.append(
        _check(
            "adjoint degree bound",
            ad.total_degree <= m - d - 1,
            f"degree {ad.total_degree}, bound {m - d - 1}",
        )
    )
    checks.append(
        _check(
            "surface adjoint degree bound",
            sa.degree() <= m - d,
            f"degree {sa.degree()}, bound {m - d}",
        )
    )

    try:
        certs = [check_vanishing(ad, S, seed=seed) for S in nonface_subspaces(P)]
        for f in P.facets:
            certs += [check_vanishing(sa.per_facet[f.id], S, seed=seed) for S in nonface_subspaces(P, f.id)]
        checks.append(
            _check(
                "adjoints vanish on non-face subspaces",
                all(c.passed and c.is_proof for c in certs),
                f"{len(certs)} subspaces",
            )
        )
    except UnsupportedDimension as exc:
        checks.append(_skip("adjoints vanish on non-face subspaces", str(exc)))
    return checks

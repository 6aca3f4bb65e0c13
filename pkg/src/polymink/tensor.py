"""Minkowski volume and surface tensors of polytopes.

Tensor entries are the array components ``T(e_{i1},...,e_{ir}; e_{j1},...)``
stored once per sorted multi-index pair.  A symmetric tensor written as
``sum_a c_a e_1^{a_1} (x) ... (x) e_d^{a_d}`` has array entry ``c_a``
divided by the multinomial ``r!/prod(a!)``; every engine below returns
array entries.

Surface tensors reduce to per-facet rational parts.  For a facet F and a
sorted x-index tuple I, each engine computes

    X_F(I) = (1/r!) * (mean of x^I over F)

and the tensor is ``1/(s! omega_{1+s}) * sum_F V(F) X_F(I) u_F^J``.  The
engines differ only in how they obtain X_F:

* ``formula``     closed form via doubly indexed elementary symmetric functions
* ``derivative``  partial derivatives of ``1/L_F`` taken symbolically
* ``series``      Taylor coefficients of ``Ad_F / prod_{k in F} L_k``
* ``definitional`` barycentric integration over each facet (see ``oracle``)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Iterator, Mapping, Sequence

from .adjoint import adjoint
from .algebra import ExactScalar, SparsePoly, omega, product_of_forms, truncated_series
from .errors import MethodUnsupported, RankTooHigh
from .moments import simplex_moment
from .polytope import Polytope, fan_triangulation

METHODS = ("formula", "derivative", "series", "definitional")

Index = tuple[int, ...]
Key = tuple[Index, Index]


def multi_indices(d: int, r: int) -> list[Index]:
    """Sorted multi-indices of length r over ``0..d-1``."""
    return list(combinations_with_replacement(range(d), r))


def multiplicities(index: Sequence[int], d: int) -> tuple[int, ...]:
    a = [0] * d
    for i in index:
        a[i] += 1
    return tuple(a)


def multinomial(a: Sequence[int]) -> int:
    return math.factorial(sum(a)) // math.prod(math.factorial(x) for x in a)


def index_from_multiplicities(a: Sequence[int]) -> Index:
    return tuple(i for i, k in enumerate(a) for _ in range(k))


@dataclass(frozen=True, eq=False)
class BigradedTensor:
    """Symmetric-in-x, symmetric-in-u tensor of rank r+s with exact entries."""

    d: int
    r: int
    s: int
    j: int
    entries: dict[Key, ExactScalar]
    method: str = ""
    per_facet: dict[int, dict[Index, Fraction]] | None = field(default=None, repr=False)

    def __getitem__(self, key) -> ExactScalar:
        x, u = key
        return self.entries[(tuple(sorted(x)), tuple(sorted(u)))]

    def entry(self, x: Sequence[int] = (), u: Sequence[int] = ()) -> ExactScalar:
        return self[(x, u)]

    def keys(self) -> list[Key]:
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.entries.values())

    def array(self):
        """Nested lists indexed ``[x_1]...[x_r][u_1]...[u_s]`` (all components)."""
        rank = self.r + self.s

        def build(prefix: tuple[int, ...]):
            if len(prefix) == rank:
                return self[(prefix[: self.r], prefix[self.r :])]
            return [build(prefix + (i,)) for i in range(self.d)]

        return build(())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedTensor):
            return NotImplemented
        return (self.d, self.r, self.s, self.j, self.entries) == (
            other.d,
            other.r,
            other.s,
            other.j,
            other.entries,
        )

    def to_json(self, with_float: bool = False, polytope_hash: str | None = None) -> dict:
        rows = []
        for x, u in self.keys():
            value = self.entries[(x, u)]
            row = {"x_index": list(x), "u_index": list(u), "value": value.to_json()}
            if with_float:
                row["float"] = float(value)
            rows.append(row)
        doc = {"d": self.d, "j": self.j, "r": self.r, "s": self.s, "method": self.method, "entries": rows}
        if polytope_hash is not None:
            doc["polytope_hash"] = polytope_hash
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "BigradedTensor":
        entries = {
            (tuple(e["x_index"]), tuple(e["u_index"])): ExactScalar.from_json(e["value"])
            for e in doc["entries"]
        }
        d = doc.get("d")
        if d is None:
            d = 1 + max((i for key in entries for part in key for i in part), default=0)
        return cls(int(d), int(doc["r"]), int(doc["s"]), int(doc["j"]), entries, doc.get("method", ""))


def surface_prefactor(s: int) -> ExactScalar:
    """``1 / (s! omega_{1+s})``."""
    return (omega(1 + s) * math.factorial(s)).inverse()


def assemble_surface_tensor(
    P: Polytope, r: int, s: int, parts: Mapping[int, Mapping[Index, Fraction]], method: str
) -> BigradedTensor:
    """Combine per-facet rational parts X_F(I) with the weights ``V(F) u_F^s``.

    ``V(F) u_F^s = V(F) N^s / |N|^s``; the scalar ``V(F)/|N|^s`` is a
    single radical term, so coefficients are accumulated per radicand.
    """
    d = P.dim
    prefactor = surface_prefactor(s)
    weights = {}
    for f in P.facets:
        w = f.volume
        inv_norm = ExactScalar.sqrt(f.norm_sq).inverse()
        for _ in range(s):
            w = w * inv_norm
        weights[f.id] = w
    u_indices = multi_indices(d, s)
    entries: dict[Key, ExactScalar] = {}
    for I in multi_indices(d, r):
        for J in u_indices:
            acc: dict[int, Fraction] = {}
            for f in P.facets:
                coef = parts[f.id][I]
                if not coef:
                    continue
                for j in J:
                    coef *= f.normal[j]
                    if not coef:
                        break
                if not coef:
                    continue
                for k, c in weights[f.id].terms:
                    acc[k] = acc.get(k, Fraction(0)) + coef * c
            entries[(I, J)] = ExactScalar.from_terms(acc) * prefactor
    return BigradedTensor(d, r, s, d - 1, entries, method, {k: dict(v) for k, v in parts.items()})


# --- combinatorial helpers -------------------------------------------------


def e_elem(I: Sequence[int], points: Sequence[Sequence[Fraction]]) -> Fraction:
    """Doubly indexed elementary symmetric function ``e_k^I`` of the rows ``points``.

    Sum over injective maps ``t -> p(t)`` from positions of I to rows of
    ``sum_t points[p(t)][I[t]]``.
    """
    k, d = len(I), len(points)
    if k > d:
        raise RankTooHigh(f"|I| = {k} exceeds the number of points {d}")
    total = Fraction(0)
    for rows in permutations(range(d), k):
        term = Fraction(1)
        for row, i in zip(rows, I):
            term *= points[row][i]
            if not term:
                break
        total += term
    return total


def _set_partitions(n: int, k: int) -> Iterator[list[list[int]]]:
    """Partitions of ``0..n-1`` into exactly k nonempty blocks."""

    def rec(i: int, blocks: list[list[int]]):
        if n - i < k - len(blocks):
            return
        if i == n:
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([i])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def multiset_partitions(I: Sequence[int], k: int, max_part: int | None = None) -> list[list[Index]]:
    """Set partitions of the positions of I into k blocks, mapped to index tuples.

    Repeated indices give repeated partitions; that multiplicity is part of
    the closed-form coefficient.
    """
    out = []
    for blocks in _set_partitions(len(I), k):
        if max_part is not None and max(len(b) for b in blocks) > max_part:
            continue
        out.append([tuple(I[p] for p in b) for b in blocks])
    return out


def c_coefficient(I: Sequence[int], P: Polytope, s: int = 0) -> dict[int, Fraction]:
    """Per-facet bracket ``sum_k (-1)^(k+r) k! sum_partitions prod e^{I_j}(F)``.

    ``s`` does not enter the bracket; callers attach ``V(F) u_F^s``.
    """
    if not P.is_simplicial:
        raise MethodUnsupported("the closed form needs a simplicial polytope")
    r, d = len(I), P.dim
    out = {}
    for f in P.facets:
        pts = P.points(f.vertex_ids)
        cache: dict[Index, Fraction] = {}
        total = Fraction(0)
        for k in range(1, r + 1):
            inner = Fraction(0)
            for blocks in multiset_partitions(I, k, d):
                term = Fraction(1)
                for b in blocks:
                    if b not in cache:
                        cache[b] = e_elem(b, pts)
                    term *= cache[b]
                    if not term:
                        break
                inner += term
            total += (-1) ** (k + r) * math.factorial(k) * inner
        out[f.id] = total
    return out


# --- derivative extraction -------------------------------------------------


def facet_form_product(P: Polytope, facet: int) -> SparsePoly:
    """``L_F``: product of the vertex forms of the facet."""
    return product_of_forms([P.forms[k] for k in P.facets[facet].vertex_ids], P.dim)


def partial_at_zero(poly: SparsePoly, I: Sequence[int]) -> Fraction:
    for i in I:
        poly = poly.derivative(i)
        if poly.is_zero:
            return Fraction(0)
    return poly.constant_term()


def derivative_extraction(P: Polytope, I: Sequence[int], route: str = "symbolic") -> dict[int, Fraction]:
    """``d_I (1/L_F)`` at the origin for each facet.

    Uses ``sum_k (-1)^k k! L_F^(r-k)/L_F^(r+1) sum_partitions prod d_{I_j} L_F``
    with ``L_F(0) = 1``.  ``route`` picks how ``d_{I_j} L_F(0)`` is obtained:
    ``"symbolic"`` differentiates the expanded product, ``"elementary"``
    uses ``(-1)^|I_j| e^{I_j}(F)``.
    """
    return {fid: f(I) for fid, f in _facet_extractors(P, route).items()}


def _facet_extractors(P: Polytope, route: str):
    if not P.is_simplicial:
        raise MethodUnsupported("derivative extraction needs simplicial facets")
    if route not in ("symbolic", "elementary"):
        raise ValueError(f"unknown route {route!r}")
    return {f.id: _extractor(P, f.id, route) for f in P.facets}


def _extractor(P: Polytope, facet: int, route: str):
    d = P.dim
    if route == "symbolic":
        LF = facet_form_product(P, facet)
    else:
        pts = P.points(P.facets[facet].vertex_ids)
    cache: dict[Index, Fraction] = {}

    def dL(block: Index) -> Fraction:
        if block not in cache:
            if route == "symbolic":
                cache[block] = partial_at_zero(LF, block)
            elif len(block) > d:
                cache[block] = Fraction(0)
            else:
                cache[block] = (-1) ** len(block) * e_elem(block, pts)
        return cache[block]

    def extract(I: Sequence[int]) -> Fraction:
        total = Fraction(0) if I else Fraction(1)
        for k in range(1, len(I) + 1):
            inner = Fraction(0)
            for blocks in multiset_partitions(I, k):
                term = Fraction(1)
                for b in blocks:
                    term *= dL(b)
                    if not term:
                        break
                inner += term
            total += (-1) ** k * math.factorial(k) * inner
        return total

    return extract


# --- per-facet parts for each engine ----------------------------------------


def _grading(d: int, r: int) -> Fraction:
    """``(d-1)! / (r+d-1)!``."""
    return Fraction(math.factorial(d - 1), math.factorial(r + d - 1))


def formula_parts(P: Polytope, r: int) -> dict[int, dict[Index, Fraction]]:
    d = P.dim
    if not P.is_simplicial:
        raise MethodUnsupported("method 'formula' needs a simplicial polytope")
    scale = _grading(d, r) / math.factorial(r)
    parts: dict[int, dict[Index, Fraction]] = {f.id: {} for f in P.facets}
    for I in multi_indices(d, r):
        brackets = c_coefficient(I, P) if r else {f.id: Fraction(1) for f in P.facets}
        for fid, value in brackets.items():
            parts[fid][I] = scale * value
    return parts


def derivative_parts(P: Polytope, r: int) -> dict[int, dict[Index, Fraction]]:
    d = P.dim
    if not P.is_simplicial:
        raise MethodUnsupported("method 'derivative' needs a simplicial polytope")
    scale = _grading(d, r) / math.factorial(r)
    extractors = _facet_extractors(P, "symbolic")
    return {
        fid: {I: scale * extract(I) for I in multi_indices(d, r)}
        for fid, extract in extractors.items()
    }


def _check_series_supported(P: Polytope) -> None:
    if P.dim <= 3:
        return
    for f in P.facets:
        for ridge in P.subfaces(frozenset(f.vertex_ids)):
            if len(ridge) != P.dim - 1:
                raise MethodUnsupported("series method needs facets that are simplicial polytopes")


def series_parts(P: Polytope, max_r: int) -> dict[int, dict[int, dict[Index, Fraction]]]:
    """Parts for every ``r <= max_r`` from one expansion per facet: ``{r: {facet: {I: X}}}``."""
    _check_series_supported(P)
    d = P.dim
    out: dict[int, dict[int, dict[Index, Fraction]]] = {r: {} for r in range(max_r + 1)}
    for f in P.facets:
        forms = [P.forms[k] for k in f.vertex_ids]
        expansion = truncated_series(adjoint(P, f.id), forms, max_r)
        for r in range(max_r + 1):
            scale = _grading(d, r)
            out[r][f.id] = {
                I: scale * expansion.coefficient(multiplicities(I, d)) / multinomial(multiplicities(I, d))
                for I in multi_indices(d, r)
            }
    return out


def surface_tensor(P: Polytope, r: int, s: int, method: str = "formula") -> BigradedTensor:
    """The surface tensor of rank r+s (x-rank r, normal-rank s)."""
    if r < 0 or s < 0:
        raise ValueError("ranks must be nonnegative")
    if method == "formula":
        parts = formula_parts(P, r)
    elif method == "derivative":
        parts = derivative_parts(P, r)
    elif method == "series":
        parts = series_parts(P, r)[r]
    elif method == "definitional":
        from .oracle import definitional_surface_tensor

        return definitional_surface_tensor(P, r, s)
    else:
        raise MethodUnsupported(f"unknown method {method!r}")
    return assemble_surface_tensor(P, r, s, parts, method)


def gf_series_check(P: Polytope, s: int, max_r: int) -> list[BigradedTensor]:
    """Surface tensors for ``r = 0..max_r`` read off one truncated expansion."""
    all_parts = series_parts(P, max_r)
    return [assemble_surface_tensor(P, r, s, all_parts[r], "series") for r in range(max_r + 1)]


def volume_tensor(P: Polytope, r: int) -> BigradedTensor:
    """``(1/r!) * integral of x^r over P``, by barycentric moments over a fan triangulation."""
    d = P.dim
    simplices = [P.points(sigma) for sigma in fan_triangulation(P)]
    entries = {}
    for I in multi_indices(d, r):
        a = multiplicities(I, d)
        total = sum((simplex_moment(pts, a) for pts in simplices), ExactScalar.zero())
        entries[(I, ())] = total / math.factorial(r)
    return BigradedTensor(d, r, 0, d, entries, "barycentric")

"""Exit criteria.  Every comparison is exact equality."""

import io
import json
import time
from fractions import Fraction

from corpus import corpus, kite, octahedron, perturbed_cube, rectangle, shifted_square
from polymink.adjoint import adjoint, check_vanishing, surface_adjoint
from polymink.algebra import ExactScalar, SparsePoly
from polymink.cli import run
from polymink.oracle import moment_gf_series, run_checks
from polymink.polytope import AffineSubspace, nonface_subspaces
from polymink.tensor import METHODS, surface_tensor, volume_tensor

PI_INV = ExactScalar.pi_pow(-1)


def matrix(T):
    return [[T[((i, j), ())] for j in range(T.d)] for i in range(T.d)]


def test_unit_square_first_moment(tmp_path, criterion):
    with criterion(1, "unit square r=1 s=0 surface tensor is (1, 1) by all four methods"):
        path = tmp_path / "square.json"
        path.write_text(json.dumps({"dim": 2, "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
        for method in METHODS:
            out = io.StringIO()
            code = run(["surface-tensor", "--input", str(path), "--r", "1", "--s", "0", "--method", method], stdout=out)
            assert code == 0
            entries = json.loads(out.getvalue())["entries"]
            assert [e["x_index"] for e in entries] == [[0], [1]]
            assert [ExactScalar.from_json(e["value"]) for e in entries] == [1, 1], method


def test_octahedron(criterion):
    with criterion(2, "octahedron r=1 tensor is zero and r=2 tensor is I/3 by all methods"):
        P = octahedron()
        third = Fraction(1, 3)
        for method in METHODS:
            assert surface_tensor(P, 1, 0, method).is_zero(), method
            got = matrix(surface_tensor(P, 2, 0, method))
            assert got == [[third if i == j else 0 for j in range(3)] for i in range(3)], (method, [[str(x) for x in row] for row in got])


def test_rectangle_second_moment(criterion):
    with criterion(3, "rectangle a=2 b=3 r=2 tensor equals [[16/3, 11/4], [11/4, 27/2]]"):
        a, b = Fraction(2), Fraction(3)
        symbolic = [
            [a**3 / 6 + a**2 * b / 4, a**2 * b / 8 + a * b**2 / 8],
            [a**2 * b / 8 + a * b**2 / 8, a * b**2 / 4 + b**3 / 6],
        ]
        stated = [[Fraction(16, 3), Fraction(11, 4)], [Fraction(11, 4), Fraction(27, 2)]]
        for method in METHODS:
            got = matrix(surface_tensor(rectangle(a, b), 2, 0, method))
            assert got == symbolic, method
            assert got == stated, (method, [[str(x) for x in row] for row in got])


def test_rectangle_normal_series(criterion):
    with criterion(4, "rectangle a=2 b=3 r=0 tensors for s=0,1,2 are 5, 0, diag(2,3)/(8 pi)"):
        P = rectangle(2, 3)
        for method in METHODS:
            assert surface_tensor(P, 0, 0, method)[((), ())] == 5
            assert surface_tensor(P, 0, 1, method).is_zero()
            T = surface_tensor(P, 0, 2, method)
            got = [[T[((), tuple(sorted((i, j))))] for j in range(2)] for i in range(2)]
            expected = [[PI_INV * Fraction(2, 8), 0], [0, PI_INV * Fraction(3, 8)]]
            assert got == expected, (method, [[str(x) for x in row] for row in got])


def test_square_adjoint(criterion):
    with criterion(5, "square adjoint is 1 - 3 t1 - 2 t2 and vanishes at (1/5, 1/5) and (1, -1)"):
        P = shifted_square()
        ad = adjoint(P)
        assert ad == SparsePoly(2, {(0, 0): 1, (1, 0): -3, (0, 1): -2})
        points = {S.point for S in nonface_subspaces(P)}
        assert points == {(Fraction(1, 5), Fraction(1, 5)), (Fraction(1), Fraction(-1))}
        for point in points:
            cert = check_vanishing(ad, AffineSubspace(point, (), ()))
            assert cert.passed and cert.is_proof


def test_perturbed_cube_surface_adjoint(criterion):
    with criterion(6, "perturbed cube facet adjoints match and the surface adjoint vanishes on NF(F1)"):
        P = perturbed_cube()
        F = Fraction
        displayed = [
            {(1, 0, 0): -1, (0, 1, 0): F(1, 2), (0, 0, 1): F(-1, 2)},
            {(1, 0, 0): F(-1, 7), (0, 1, 0): F(-1, 7), (0, 0, 1): F(-11, 7)},
            {(1, 0, 0): F(1, 5), (0, 1, 0): F(7, 5), (0, 0, 1): F(-1, 5)},
            {(1, 0, 0): F(1, 2), (0, 1, 0): F(1, 2), (0, 0, 1): 1},
            {(1, 0, 0): 0, (0, 1, 0): -1, (0, 0, 1): -1},
            {(1, 0, 0): F(5, 4), (0, 1, 0): F(1, 2), (0, 0, 1): F(-1, 2)},
        ]
        sa = surface_adjoint(P)
        for f, linear in zip(P.facets, displayed):
            assert sa.facet_adjoints[f.id] == SparsePoly(3, {(0, 0, 0): 1, **linear})
            others = [P.forms[k].to_poly() for k in range(8) if k not in f.vertex_ids]
            product = SparsePoly.constant(3)
            for form in others:
                product = product * form
            assert sa.per_facet[f.id] == sa.facet_adjoints[f.id] * product
        assert sa.weights[0] == 6
        lines = nonface_subspaces(P, 0)
        # {t2 = -t3, t1 = 1 - t3} and {t2 = t3, t1 = 1}
        for S, (a, b, c) in zip(lines, [(-1, -1, 1), (0, 1, 1)]):
            assert S.defining_indices in ((0, 2), (1, 3))
            d, p = S.directions[0], S.point
            assert d[0] == a * d[2] and d[1] == b * d[2]
            assert p[0] == 1 + a * p[2] and p[1] == b * p[2]
            cert = check_vanishing(sa, S)
            assert cert.passed and cert.is_proof


def test_moment_fixtures(criterion):
    with criterion(7, "kite volume tensor (15, 14/3) and moments (5/2, 7/9) by both routes"):
        P = kite()
        T = volume_tensor(P, 1)
        assert [T[((i,), ())] for i in range(2)] == [15, Fraction(14, 3)]
        assert [T[((i,), ())].as_fraction() / P.volume for i in range(2)] == [Fraction(5, 2), Fraction(7, 9)]
        ms = moment_gf_series(P, 1)
        assert [ms.tensors[1][((i,), ())] for i in range(2)] == [15, Fraction(14, 3)]
        assert (ms.moments[(1, 0)], ms.moments[(0, 1)]) == (Fraction(5, 2), Fraction(7, 9))


def test_property_suite(criterion):
    with criterion(8, "randomized corpus of 50 simplicial polytopes passes every cross-check"):
        polytopes = corpus(size=50)
        assert {P.dim for P in polytopes} == {2, 3}
        assert all(P.is_simplicial for P in polytopes)
        worst = 0.0
        for P in polytopes:
            start = time.perf_counter()
            checks = run_checks(P, max_degree=4, max_s=3)
            worst = max(worst, time.perf_counter() - start)
            failed = [c for c in checks if c["status"] != "PASS"]
            assert not failed, (P.vertices, failed)
            names = {c["name"] for c in checks}
            assert {
                "facet normals weighted by volume sum to zero",
                "triangulation independence",
                "facet form derivatives equal signed elementary symmetric sums",
                "adjoint degree bound",
                "surface adjoint degree bound",
            } <= names
            assert sum(1 for n in names if n.startswith("surface_tensor")) == 5 * 4
        assert worst < 5.0

import json
import os

import pytest
from ruled_surfaces.elliptic import *
from ruled_surfaces.BundleModel import *
from ruled_surfaces.errors import EqualSections, FieldTooLarge, InvalidSection, NotDisjoint, NotGlobalSection

E = EllipticCurve(10, 0, 11)
x = CurveFunction.x_coordinate(E)
y = CurveFunction.y_coordinate(E)
z = CurvePoint(4, 4)
INF = BundleSection.infinity(E)


def one_elm():
    return elm_model(trivial_model(E), z, (1, 0), seed=3)


# sections of C x P1 given by functions have self-intersection 2 deg g
def test_trivial_self_intersection():
    m = trivial_model(E)
    for c in range(E.modulus):
        assert(self_intersection(m, BundleSection.constant(E, c)) == 0)
    assert(self_intersection(m, INF) == 0)
    assert(self_intersection(m, BundleSection.from_function(x)) == 4)
    assert(self_intersection(m, BundleSection.from_function(y)) == 6)
    assert(self_intersection(m, BundleSection.from_function(x * x + y)) == 8)


def test_intersections_on_trivial_model():
    m = trivial_model(E)
    zero, sx = BundleSection.constant(E, 0), BundleSection.from_function(x)
    assert(intersection_number(m, zero, sx) == 2)
    assert(local_intersection(m, zero, sx, CurvePoint(0, 0)) == 2)
    assert(local_intersection(m, zero, sx, CurvePoint(6, 1)) == 0)
    assert(intersection_number(m, zero, BundleSection.constant(E, 5)) == 0)
    with pytest.raises(EqualSections):
        intersection_number(m, zero, BundleSection.constant(E, 0))


def test_sections():
    assert(BundleSection(x * 2, CurveFunction.constant(E, 2)) == BundleSection.from_function(x))
    assert(INF.is_infinite and str(INF) == '[1:0]')
    assert(str(BundleSection.constant(E, 3)) == '[3:1]')
    with pytest.raises(InvalidSection):
        BundleSection(CurveFunction.zero(E), CurveFunction.zero(E))
    with pytest.raises(InvalidSection):
        normalize_projective((0, 11), 11)
    assert(normalize_projective((2, 4), 11) == (1, 2))
    assert(normalize_projective((0, 5), 11) == (0, 1))


# one elementary transformation at [1:0] makes the infinite section a (-1)-section
def test_elm_model():
    m = one_elm()
    assert(m.special_points == (z,))
    assert(m.elm_depth == 1)
    assert(m.inverse_base_point == (z, (0, 1)))
    assert(m.history[0].center == (1, 0))
    assert(det_divisor(m) == Divisor.point(z))
    assert(det_degree(m) == 1)
    assert(self_intersection(m, INF) == -1)
    assert(line_subbundle_divisor(m, INF).degree == 1)
    for c in (0, 1, 7):
        sigma = BundleSection.constant(E, c)
        assert(self_intersection(m, sigma) == 1)
        assert(fiber_point(m, sigma, z) == (0, 1))
        assert(intersection_number(m, INF, sigma) == 0)
    assert(fiber_point(m, INF, z) == (1, 0))
    assert(elm_model(trivial_model(E), z, (1, 0), seed=3).transitions == m.transitions)


def test_cocycle_formula_matches_local_reading():
    m = elm_model(elm_model(one_elm(), CurvePoint(8, 3), (1, 5), seed=1), CurvePoint(0, 0), (0, 1), seed=1)
    for g in (x, y, x + 3, x * x + y * 2, y / (x - 6)):
        sigma = BundleSection.from_function(g)
        assert(self_intersection(m, sigma) == det_degree(m) - 2 * line_subbundle_divisor(m, sigma).degree)


def test_refine_and_gauges():
    m = refine(one_elm(), [CurvePoint(6, 1), z])
    assert(m.special_points == (z, CurvePoint(6, 1)))
    assert(m.transition(CurvePoint(6, 1)) == TransitionMatrix.identity(E))
    A = TransitionMatrix.from_rows(E, ((2, 1), (1, 1)))
    gauge = GaugeTransformation(A)
    assert(gauge.check(m))
    moved = gauge.apply_to_model(m)
    sigma = BundleSection.from_function(x)
    assert(self_intersection(moved, gauge.apply_to_section(sigma)) == self_intersection(m, sigma))
    assert(self_intersection(moved, gauge.apply_to_section(INF)) == -1)
    assert(GaugeTransformation(A.inverse()).compose(gauge).chart0 == TransitionMatrix.identity(E))
    assert(GaugeTransformation.identity(E).is_identity())
    # a pole away from the special points is not a change of trivialization
    bad = GaugeTransformation(TransitionMatrix.from_rows(E, ((1, x / (x - 8)), (0, 1))))
    assert(not bad.check(m))


def test_normalizations():
    m = one_elm()
    sigma = BundleSection.from_function(x)
    normalized, gauge = normalize_section_to_infinity(m, sigma)
    assert(gauge.apply_to_section(sigma).is_infinite)
    assert(all(tau.is_upper_triangular for tau in normalized.transitions))
    assert(self_intersection(normalized, INF) == self_intersection(m, sigma))
    both, _ = normalize_two_sections(m, INF, BundleSection.constant(E, 0))
    assert(all(tau.is_diagonal for tau in both.transitions))
    with pytest.raises(NotDisjoint):
        normalize_two_sections(trivial_model(E), BundleSection.constant(E, 0), sigma)


# P(O(z1) + O(z2)) with the [1:0] and [0:1] sections of its two summands
def test_normalize_split_bundle():
    z2 = CurvePoint(8, 3)
    f1, _ = elm_function(E, z, avoid=(z, z2))
    f2, _ = elm_function(E, z2, avoid=(z, z2))
    m = BundleModel(E, (z, z2), (TransitionMatrix.diagonal(E, f1, 1), TransitionMatrix.diagonal(E, 1, f2)))
    zero = BundleSection.constant(E, 0)
    both, gauge = normalize_two_sections(m, INF, zero)
    assert(both.transitions == m.transitions and gauge.is_identity())
    both, _ = normalize_two_sections(m, zero, INF)
    assert(all(tau.is_diagonal for tau in both.transitions))
    assert(both.transitions == (TransitionMatrix.diagonal(E, 1, f1), TransitionMatrix.diagonal(E, f2, 1)))


# on D(1; s=z) the unipotent automorphisms come from constants
def test_f_gamma():
    m = one_elm()
    assert(gamma_divisor(m) == Divisor.point(z))
    assert(gamma_class(m) == DivisorClass(1, z))
    gauge = apply_f_gamma(m, CurveFunction.one(E))
    assert(gauge.check(m))
    assert(not moves_point(m, gauge, z, (0, 1)))
    assert(moves_point(m, gauge, CurvePoint(6, 1), (0, 1)))
    assert(not moves_point(m, gauge, CurvePoint(6, 1), (1, 0)))
    with pytest.raises(NotGlobalSection):
        apply_f_gamma(m, x)


# two elementary transformations along [1:0]: L = O(z1 + z2)
def test_f_gamma_after_two_elms():
    z2 = CurvePoint(8, 3)
    m = elm_model(one_elm(), z2, (1, 0), seed=3)
    assert(self_intersection(m, INF) == -2)
    assert(segre_search(m) == -2)
    D = gamma_divisor(m)
    assert(D == Divisor.point(z) + Divisor.point(z2))
    assert(m.inverse_base_point == (z2, (0, 1)))
    basis = riemann_roch_basis(E, D)
    assert(len(basis) == 2)
    polar = [g for g in basis if valuation(E, g, z2) == -1]
    assert(polar)
    for g in polar:
        gauge = apply_f_gamma(m, g)
        assert(gauge.check(m))
        assert(moves_point(m, gauge, *m.inverse_base_point))
    # vanishing over z2 as a section of L: the base point stays put
    gauge = apply_f_gamma(m, CurveFunction.one(E))
    assert(gauge.check(m))
    assert(not moves_point(m, gauge, *m.inverse_base_point))


def test_f_gamma_fixing_a_section():
    m = trivial_model(E)
    zero = BundleSection.constant(E, 0)
    gauge = apply_f_gamma(m, CurveFunction.one(E), sigma=zero)
    assert(gauge.check(m))
    assert(gauge.apply_to_section(zero).g.is_zero)
    moved = gauge.apply_to_section(INF)
    assert(moved.g.is_constant and moved.g.constant_value == 1)
    with pytest.raises(NotGlobalSection):
        apply_f_gamma(m, x, sigma=zero)
    lower = BundleModel(E, (z,), (TransitionMatrix.from_rows(E, ((1, 0), (x, 1))),))
    with pytest.raises(InvalidSection):
        apply_f_gamma(lower, CurveFunction.one(E))
    assert(apply_f_gamma(lower, CurveFunction.one(E), sigma=zero).check(lower))


def test_minimal_section_search():
    result = minimal_section_search(trivial_model(E))
    assert(result.segre == 0 and result.exact and result.count_exact)
    assert(len(result.minimal_sections) == E.modulus + 1)
    result = minimal_section_search(one_elm())
    assert(result.segre == -1 and result.exact and result.count_exact)
    assert(result.minimal_sections == (INF,))
    assert(segre_search(one_elm()) == -1)
    assert(section_lower_bound(trivial_model(E), 2) == 4)
    with pytest.raises(FieldTooLarge):
        minimal_section_search(one_elm(), budget=5)


def test_save_and_load(tmp_path):
    m = elm_model(one_elm(), CurvePoint(8, 3), (1, 5), seed=1)
    path = os.path.join(str(tmp_path), 'models', 'm.json')
    save_model(m, path)
    with open(path) as f:
        record = json.load(f)
    assert(record['curve'] == 'E/F11: y^2 = x^3 + 10*x + 0')
    again = load_model(path)
    assert(again.special_points == m.special_points)
    assert(again.transitions == m.transitions)
    assert(again.inverse_base_point == m.inverse_base_point)
    assert(model_to_record(again) == model_to_record(m))


if __name__ == '__main__':
    import tempfile
    test_trivial_self_intersection()
    test_intersections_on_trivial_model()
    test_sections()
    test_elm_model()
    test_cocycle_formula_matches_local_reading()
    test_refine_and_gauges()
    test_normalizations()
    test_normalize_split_bundle()
    test_f_gamma()
    test_f_gamma_after_two_elms()
    test_f_gamma_fixing_a_section()
    test_minimal_section_search()
    test_save_and_load(tempfile.mkdtemp())

import numpy as np
import pytest
from ruled_surfaces.elliptic import *
from ruled_surfaces.errors import NonRationalSupport, NotPrincipal, PointNotOnCurve, SingularCurve

# y^2 = x^3 - x over F11
E = EllipticCurve(10, 0, 11)
x = CurveFunction.x_coordinate(E)
y = CurveFunction.y_coordinate(E)


def pt(a, b):
    return CurvePoint(a, b)


def test_points():
    assert(len(E.points) == 12)
    assert(E.points[0] == INFINITY)
    assert(list(E.points[1:4]) == [pt(0, 0), pt(1, 0), pt(4, 4)])
    assert(E.contains(pt(8, 3)) and not E.contains(pt(2, 1)))
    assert(str(E) == 'E/F11: y^2 = x^3 + 10*x + 0')
    with pytest.raises(PointNotOnCurve):
        E.check(pt(2, 1))
    with pytest.raises(SingularCurve):
        EllipticCurve(0, 0, 11)


def test_group_law():
    P = pt(4, 4)
    assert(add_points(E, P, pt(4, 7)) == INFINITY)
    assert(negate_point(E, P) == pt(4, 7))
    # (4,4) has order 3
    assert(scalar_mul(E, 2, P) == pt(4, 7))
    assert(scalar_mul(E, 3, P) == INFINITY)
    assert(add_points(E, pt(0, 0), pt(1, 0)) == pt(10, 0))
    assert(subtract_points(E, P, P) == INFINITY)
    assert(scalar_mul(E, -1, P) == negate_point(E, P))
    for Q in E.points:
        assert(scalar_mul(E, 12, Q) == INFINITY)
        assert(add_points(E, Q, INFINITY) == Q)


def test_two_torsion():
    torsion = two_torsion(E)
    assert(torsion.complete and len(torsion) == 4)
    assert(pt(10, 0) in torsion)
    partial = two_torsion(EllipticCurve(1, 0, 11))
    assert(not partial.complete and len(partial) == 2)


def test_divisor_classes():
    D = Divisor.point(pt(4, 4)) + Divisor.point(pt(6, 1)) - Divisor.point(INFINITY, 2)
    assert(D.degree == 0)
    assert(class_of(E, D) == DivisorClass(0, add_points(E, pt(4, 4), pt(6, 1))))
    assert(is_principal(E, Divisor.point(pt(4, 4)) + Divisor.point(pt(4, 7)) - Divisor.point(INFINITY, 2)))
    assert(not is_principal(E, Divisor.point(pt(4, 4)) - Divisor.point(INFINITY)))
    assert((D - D).degree == 0 and len(D - D) == 0)
    assert(h0(E, DivisorClass(3, pt(6, 1))) == 3)
    assert(h0(E, DivisorClass(0, INFINITY)) == 1)
    assert(h0(E, DivisorClass(0, pt(6, 1))) == 0)
    assert(h1(E, DivisorClass(-2, INFINITY)) == 2)
    c = DivisorClass(2, pt(8, 3))
    assert(subtract_classes(E, add_classes(E, c, point_class(E, pt(0, 0))), point_class(E, pt(0, 0))) == c)


def test_function_arithmetic():
    assert(y * y == x ** 3 - x)
    assert((x + y) * (x - y) == x * x - y * y)
    assert((y / x) * x == y)
    assert(x.value_at(pt(6, 1)) == 6)


def test_divisors_of_functions():
    O = INFINITY
    assert(divisor_of(E, x) == Divisor({pt(0, 0): 2, O: -2}))
    assert(divisor_of(E, y) == Divisor({pt(0, 0): 1, pt(1, 0): 1, pt(10, 0): 1, O: -3}))
    assert(divisor_of(E, x - 4) == Divisor({pt(4, 4): 1, pt(4, 7): 1, O: -2}))
    assert(valuation(E, x, O) == -2)
    assert(valuation(E, y, pt(1, 0)) == 1)
    # zeros above x^2 + 1 are not rational, but its poles are
    f = (x * x + 1) / (x - 6)
    with pytest.raises(NonRationalSupport):
        divisor_of(E, f)
    assert(poles_of(E, f) == Divisor({pt(6, 1): -1, pt(6, 10): -1, O: -2}))


def test_function_with_divisor():
    rng = np.random.default_rng(0)
    for _ in range(20):
        P, Q = random_point(E, rng), random_point(E, rng)
        R = add_points(E, P, Q)
        D = Divisor.point(P) + Divisor.point(Q) - Divisor.point(R) - Divisor.point(INFINITY)
        f = function_with_divisor(E, D)
        assert(divisor_of(E, f) == D)
    with pytest.raises(NotPrincipal):
        function_with_divisor(E, Divisor.point(pt(4, 4)) - Divisor.point(INFINITY))


def test_automorphisms():
    assert(len(curve_automorphisms(E)) == 2)
    E13 = EllipticCurve(1, 0, 13)
    automorphisms = curve_automorphisms(E13)
    assert(len(automorphisms) == 4)
    for alpha in automorphisms:
        for P in E13.points:
            assert(E13.contains(alpha(P)))
    negation = [a for a in curve_automorphisms(E) if a.is_negation][0]
    assert(negation(pt(4, 4)) == pt(4, 7))


def test_riemann_roch_basis():
    for D in (Divisor.point(INFINITY, 3), Divisor.point(pt(6, 1), 2), Divisor.point(pt(4, 4)) + Divisor.point(pt(8, 3))):
        basis = riemann_roch_basis(E, D)
        assert(len(basis) == h0(E, class_of(E, D)))
        for f in basis:
            assert((divisor_of(E, f) + D).is_effective())
    assert(riemann_roch_basis(E, Divisor.point(pt(4, 4)) - Divisor.point(pt(4, 7))) == [])
    assert(riemann_roch_basis(E, Divisor.point(INFINITY, -1)) == [])


if __name__ == '__main__':
    test_points()
    test_group_law()
    test_two_torsion()
    test_divisor_classes()
    test_function_arithmetic()
    test_divisors_of_functions()
    test_function_with_divisor()
    test_automorphisms()
    test_riemann_roch_basis()

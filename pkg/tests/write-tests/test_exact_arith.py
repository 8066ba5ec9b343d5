import pytest
from ruled_surfaces.exact_arith import *
from ruled_surfaces.errors import DivisionByZero, IncompatibleField, ZeroFunction

P = 11


def poly(*coeffs):
    return UnivariatePolynomial(coeffs, P)


# moduli must be primes above 3
def test_check_modulus():
    assert(check_modulus(11) == 11)
    for bad in (2, 3, 9, 1, -7, True, 11.0):
        with pytest.raises(IncompatibleField):
            check_modulus(bad)


def test_field_elements():
    a, b = PrimeFieldElement(3, P), PrimeFieldElement(4, P)
    assert((a * b).value == 1)
    assert(a.inverse() == b)
    assert((a / b).value == 3 * 3 % P)
    assert((a - b).value == 10)
    assert((a ** -1) == b)
    assert(field_ops('add', a, b).value == 7)
    assert(field_ops('inv', a) == b)
    with pytest.raises(DivisionByZero):
        PrimeFieldElement(0, P).inverse()
    with pytest.raises(IncompatibleField):
        a + PrimeFieldElement(1, 13)


# x^3 - x splits completely over F11, x^3 + x keeps the irreducible factor x^2 + 1
def test_split_roots():
    roots, others = poly(1, 0, -1, 0).split_roots()
    assert(roots == [0, 1, 10] and others == [])
    roots, others = poly(1, 0, 1, 0).split_roots()
    assert(roots == [0])
    assert(others == [poly(1, 0, 1)])
    assert(poly(5).split_roots() == ([], []))


def test_polynomial_arithmetic():
    x = UnivariatePolynomial.x(P)
    f = (x - 2) ** 2 * (x + 1)
    assert(f.degree == 3)
    assert(f.multiplicity(2) == (2, x + 1))
    q, r = divmod(f, x - 2)
    assert(r.is_zero and q == (x - 2) * (x + 1))
    assert(poly_gcd((x - 1) * (x - 2), (x - 2) * (x - 3)) == x - 2)
    assert(f(2) == 0 and f(0) == 4)
    assert(f.squarefree_part() == ((x - 2) * (x + 1)).monic()[1])
    assert(UnivariatePolynomial((0, 0), P).is_zero)
    assert(str(poly(3, 0, 1)) == '3*x^2 + 1')
    with pytest.raises(ZeroFunction):
        UnivariatePolynomial((), P).multiplicity(0)


# rational functions are stored in lowest terms with a monic denominator
def test_rational_functions():
    x = UnivariatePolynomial.x(P)
    f = RationalFunction((x - 1) * (x - 2), 2 * (x - 1))
    assert(f.denominator == UnivariatePolynomial.constant(1, P))
    assert(f.numerator == (x - 2) * pow(2, -1, P))
    g = RationalFunction.from_poly(x) / RationalFunction.from_poly(x + 1)
    assert(g * (x + 1) == RationalFunction.x(P))
    assert(g.degree == 0 and g.leading_ratio == 1)
    assert(g(3) == 3 * pow(4, -1, P) % P)
    assert(order_at(RationalFunction(x ** 2, (x - 5) ** 3), 0) == 2)
    assert(order_at(RationalFunction(x ** 2, (x - 5) ** 3), 5) == -3)
    assert(order_at(x + 1, 3) == 0)
    with pytest.raises(DivisionByZero):
        g(10)
    with pytest.raises(DivisionByZero):
        RationalFunction(x, UnivariatePolynomial((), P))
    with pytest.raises(ZeroFunction):
        order_at(RationalFunction.constant(0, P), 1)


if __name__ == '__main__':
    test_check_modulus()
    test_field_elements()
    test_split_roots()
    test_polynomial_arithmetic()
    test_rational_functions()

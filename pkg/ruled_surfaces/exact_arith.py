import functools
from dataclasses import dataclass

from sympy import isprime
from sympy.polys import galoistools as gt
from sympy.polys.domains import ZZ

from .errors import DivisionByZero, IncompatibleField, ZeroFunction

__all__ = [
    'MINUS_INFINITY',
    'check_modulus',
    'PrimeFieldElement',
    'UnivariatePolynomial',
    'RationalFunction',
    'field_ops',
    'poly_gcd',
    'order_at',
]

# degree of the zero polynomial
MINUS_INFINITY = float('-inf')


@functools.lru_cache(maxsize=None, typed=True)
def check_modulus(p):
    """
    Validates a field modulus: p must be a prime greater than 3.
    """
    if isinstance(p, bool) or not isinstance(p, int) or p <= 3 or not isprime(p):
        raise IncompatibleField('modulus must be a prime greater than 3, got {!r}'.format(p))
    return p


def _residue(c, p):
    if isinstance(c, PrimeFieldElement):
        if c.modulus != p:
            raise IncompatibleField('cannot mix F_{} and F_{}'.format(c.modulus, p))
        return c.value
    return int(c) % p


@dataclass(frozen=True)
class PrimeFieldElement:
    """
    Element of the prime field F_p, fully reduced.
    """
    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, 'value', int(self.value) % self.modulus)

    def _other(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise IncompatibleField('cannot mix F_{} and F_{}'.format(self.modulus, other.modulus))
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.modulus)

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero('0 has no inverse in F_{}'.format(self.modulus))
        return PrimeFieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * PrimeFieldElement(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(pow(self.value, n, self.modulus), self.modulus)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)


def field_ops(op, a, b=None):
    """
    Field operations on PrimeFieldElement values.

    Parameters
    ----------
    op : str
        one of 'add', 'sub', 'mul', 'div', 'inv'
    a, b : PrimeFieldElement
        operands; b is ignored for 'inv'

    Returns
    -------
    PrimeFieldElement
    """
    if op == 'inv':
        return a.inverse()
    if not isinstance(b, PrimeFieldElement) or b.modulus != a.modulus:
        raise IncompatibleField('operands must live in the same prime field')
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ValueError('unknown field operation {!r}'.format(op))


def _dense(coeffs):
    return [ZZ(c) for c in coeffs]


def _ints(coeffs):
    return tuple(int(c) for c in coeffs)


@dataclass(frozen=True)
class UnivariatePolynomial:
    """
    Dense polynomial over F_p, highest coefficient first.

    The zero polynomial has no coefficients and degree MINUS_INFINITY.
    """
    coefficients: tuple
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        coeffs = gt.gf_from_int_poly([_residue(c, self.modulus) for c in self.coefficients], self.modulus)
        object.__setattr__(self, 'coefficients', _ints(coeffs))

    @classmethod
    def constant(cls, c, p):
        return cls((c,), p)

    @classmethod
    def x(cls, p):
        return cls((1, 0), p)

    @classmethod
    def linear(cls, x0, p):
        """x - x0"""
        return cls((1, -int(x0)), p)

    def _wrap(self, coeffs):
        return UnivariatePolynomial(_ints(coeffs), self.modulus)

    def _coerce(self, other):
        if isinstance(other, UnivariatePolynomial):
            if other.modulus != self.modulus:
                raise IncompatibleField('cannot mix F_{} and F_{}'.format(self.modulus, other.modulus))
            return other
        if isinstance(other, (int, PrimeFieldElement)):
            return UnivariatePolynomial.constant(_residue(other, self.modulus), self.modulus)
        return None

    @property
    def degree(self):
        if not self.coefficients:
            return MINUS_INFINITY
        return len(self.coefficients) - 1

    @property
    def is_zero(self):
        return not self.coefficients

    @property
    def is_constant(self):
        return len(self.coefficients) <= 1

    @property
    def leading_coefficient(self):
        return self.coefficients[0] if self.coefficients else 0

    def coefficient_elements(self):
        return tuple(PrimeFieldElement(c, self.modulus) for c in self.coefficients)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(gt.gf_add(_dense(self.coefficients), _dense(o.coefficients), self.modulus, ZZ))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(gt.gf_sub(_dense(self.coefficients), _dense(o.coefficients), self.modulus, ZZ))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(gt.gf_neg(_dense(self.coefficients), self.modulus, ZZ))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(gt.gf_mul(_dense(self.coefficients), _dense(o.coefficients), self.modulus, ZZ))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError('negative power of a polynomial')
        return self._wrap(gt.gf_pow(_dense(self.coefficients), n, self.modulus, ZZ))

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZero('polynomial division by zero')
        q, r = gt.gf_div(_dense(self.coefficients), _dense(o.coefficients), self.modulus, ZZ)
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x0):
        return int(gt.gf_eval(_dense(self.coefficients), _residue(x0, self.modulus), self.modulus, ZZ))

    def monic(self):
        lc, f = gt.gf_monic(_dense(self.coefficients), self.modulus, ZZ)
        return int(lc), self._wrap(f)

    def derivative(self):
        return self._wrap(gt.gf_diff(_dense(self.coefficients), self.modulus, ZZ))

    def divides(self, other):
        return (other % self).is_zero

    def multiplicity(self, x0):
        """
        Returns (k, q) with self = (x - x0)^k * q and q(x0) != 0.
        """
        if self.is_zero:
            raise ZeroFunction('the zero polynomial has no root multiplicity')
        factor = UnivariatePolynomial.linear(x0, self.modulus)
        k, q = 0, self
        while q(x0) == 0:
            q = q // factor
            k += 1
        return k, q

    def squarefree_part(self):
        if self.is_constant:
            return UnivariatePolynomial.constant(1, self.modulus)
        return self._wrap(gt.gf_sqf_part(_dense(self.coefficients), self.modulus, ZZ))

    def split_roots(self):
        """
        Returns the sorted rational roots and the list of non-linear irreducible factors.
        """
        sqf = self.squarefree_part()
        if sqf.is_constant:
            return [], []
        _, factors = gt.gf_factor_sqf(_dense(sqf.coefficients), self.modulus, ZZ)
        roots, others = [], []
        for factor in factors:
            factor = self._wrap(factor)
            if factor.degree == 1:
                roots.append((-factor.coefficients[1]) % self.modulus)
            else:
                others.append(factor)
        return sorted(roots), others

    def __str__(self):
        if self.is_zero:
            return '0'
        terms = []
        d = self.degree
        for i, c in enumerate(self.coefficients):
            e = d - i
            if c == 0:
                continue
            if e == 0:
                terms.append(str(c))
            elif e == 1:
                terms.append('x' if c == 1 else '{}*x'.format(c))
            else:
                terms.append('x^{}'.format(e) if c == 1 else '{}*x^{}'.format(c, e))
        return ' + '.join(terms)


def poly_gcd(f, g):
    """
    Monic gcd of two polynomials over the same field; gcd(0, 0) = 0.
    """
    if f.modulus != g.modulus:
        raise IncompatibleField('cannot mix F_{} and F_{}'.format(f.modulus, g.modulus))
    return f._wrap(gt.gf_gcd(_dense(f.coefficients), _dense(g.coefficients), f.modulus, ZZ))


@dataclass(frozen=True)
class RationalFunction:
    """
    Quotient of two polynomials over F_p in lowest terms with monic denominator.
    """
    numerator: UnivariatePolynomial
    denominator: UnivariatePolynomial

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if num.modulus != den.modulus:
            raise IncompatibleField('numerator and denominator live in different fields')
        if den.is_zero:
            raise DivisionByZero('rational function with zero denominator')
        if num.is_zero:
            den = UnivariatePolynomial.constant(1, den.modulus)
        else:
            g = poly_gcd(num, den)
            if not g.is_constant:
                num, den = num // g, den // g
            lc, den = den.monic()
            if lc != 1:
                num = num * pow(lc, -1, den.modulus)
        object.__setattr__(self, 'numerator', num)
        object.__setattr__(self, 'denominator', den)

    @classmethod
    def from_poly(cls, f):
        return cls(f, UnivariatePolynomial.constant(1, f.modulus))

    @classmethod
    def constant(cls, c, p):
        return cls.from_poly(UnivariatePolynomial.constant(c, p))

    @classmethod
    def x(cls, p):
        return cls.from_poly(UnivariatePolynomial.x(p))

    @property
    def modulus(self):
        return self.numerator.modulus

    @property
    def is_zero(self):
        return self.numerator.is_zero

    @property
    def is_constant(self):
        return self.numerator.is_constant and self.denominator.is_constant

    @property
    def is_polynomial(self):
        return self.denominator.is_constant

    @property
    def degree(self):
        """deg(numerator) - deg(denominator); MINUS_INFINITY for zero."""
        return self.numerator.degree - self.denominator.degree

    @property
    def leading_ratio(self):
        return self.numerator.leading_coefficient

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.modulus != self.modulus:
                raise IncompatibleField('cannot mix F_{} and F_{}'.format(self.modulus, other.modulus))
            return other
        if isinstance(other, UnivariatePolynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, PrimeFieldElement)):
            return RationalFunction.constant(_residue(other, self.modulus), self.modulus)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.denominator == o.denominator:
            return RationalFunction(self.numerator + o.numerator, self.denominator)
        return RationalFunction(self.numerator * o.denominator + o.numerator * self.denominator,
                                self.denominator * o.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero('the zero rational function has no inverse')
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.numerator ** n, self.denominator ** n)

    def __call__(self, x0):
        d = self.denominator(x0)
        if d == 0:
            raise DivisionByZero('pole at x = {}'.format(_residue(x0, self.modulus)))
        return self.numerator(x0) * pow(d, -1, self.modulus) % self.modulus

    def split_at(self, x0):
        """
        Returns (k, r) with self = (x - x0)^k * r and r regular and nonzero at x0.
        """
        if self.is_zero:
            raise ZeroFunction('the zero function has no order')
        kn, num = self.numerator.multiplicity(x0)
        kd, den = self.denominator.multiplicity(x0)
        return kn - kd, RationalFunction(num, den)

    def __str__(self):
        if self.denominator.is_constant:
            return str(self.numerator)
        return '({})/({})'.format(self.numerator, self.denominator)


def order_at(f, x0):
    """
    Multiplicity of (x - x0) in the numerator of f minus its multiplicity in the denominator.

    Parameters
    ----------
    f : RationalFunction or UnivariatePolynomial
        nonzero function of x
    x0 : PrimeFieldElement or int

    Returns
    -------
    order: int
    """
    if isinstance(f, UnivariatePolynomial):
        f = RationalFunction.from_poly(f)
    if f.is_zero:
        raise ZeroFunction('order_at of the zero function')
    if isinstance(x0, PrimeFieldElement) and x0.modulus != f.modulus:
        raise IncompatibleField('point and function live in different fields')
    return f.split_at(x0)[0]

import functools
from dataclasses import dataclass

from .errors import (NonRationalSupport, NotPrincipal, PointNotOnCurve, RuledSurfaceError,
                     SingularCurve, ZeroFunction, DivisionByZero)
from .exact_arith import RationalFunction, UnivariatePolynomial, check_modulus

__all__ = [
    'EllipticCurve',
    'CurvePoint',
    'INFINITY',
    'Divisor',
    'DivisorClass',
    'CurveFunction',
    'CurveAutomorphism',
    'TwoTorsionGroup',
    'add_points',
    'negate_point',
    'subtract_points',
    'scalar_mul',
    'two_torsion',
    'class_of',
    'point_class',
    'add_classes',
    'negate_class',
    'subtract_classes',
    'is_principal',
    'h0',
    'h1',
    'function_with_divisor',
    'divisor_of',
    'poles_of',
    'valuation',
    'leading_term',
    'leading_vector',
    'curve_automorphisms',
    'riemann_roch_basis',
    'random_point',
]


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class CurvePoint:
    """
    Rational point of an elliptic curve: the identity O (x = y = None) or an affine (x, y).

    Points sort with O first, then affine points by (x, y).
    """
    x: int = None
    y: int = None

    @property
    def is_infinity(self):
        return self.x is None

    @property
    def sort_key(self):
        if self.is_infinity:
            return (0, 0, 0)
        return (1, self.x, self.y)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        if self.is_infinity:
            return 'O'
        return '({},{})'.format(self.x, self.y)


INFINITY = CurvePoint()


@dataclass(frozen=True)
class EllipticCurve:
    """
    Short Weierstrass curve y^2 = x^3 + a*x + b over F_p, p > 3.
    """
    a: int
    b: int
    modulus: int

    def __post_init__(self):
        p = check_modulus(self.modulus)
        object.__setattr__(self, 'a', int(self.a) % p)
        object.__setattr__(self, 'b', int(self.b) % p)
        if (4 * self.a ** 3 + 27 * self.b ** 2) % p == 0:
            raise SingularCurve('y^2 = x^3 + {}*x + {} is singular over F_{}'.format(self.a, self.b, p))

    @functools.cached_property
    def cubic(self):
        return UnivariatePolynomial((1, 0, self.a, self.b), self.modulus)

    @functools.cached_property
    def square_roots(self):
        """dict residue -> sorted tuple of its square roots"""
        p = self.modulus
        roots = {}
        for y in range(p):
            roots.setdefault(y * y % p, []).append(y)
        return {k: tuple(sorted(v)) for k, v in roots.items()}

    @functools.cached_property
    def points(self):
        """All rational points in canonical order, O first."""
        pts = [INFINITY]
        for x in range(self.modulus):
            for y in self.square_roots.get(self.cubic(x), ()):
                pts.append(CurvePoint(x, y))
        return tuple(pts)

    def contains(self, P):
        if not isinstance(P, CurvePoint):
            return False
        if P.is_infinity:
            return True
        p = self.modulus
        if not (0 <= P.x < p and 0 <= P.y < p):
            return False
        return (P.y * P.y - self.cubic(P.x)) % p == 0

    def check(self, *points):
        for P in points:
            if not self.contains(P):
                raise PointNotOnCurve('{} is not a point of {}'.format(P, self))

    def __str__(self):
        return 'E/F{}: y^2 = x^3 + {}*x + {}'.format(self.modulus, self.a, self.b)


def add_points(E, P, Q):
    """
    Chord-tangent group law with O as identity.
    """
    E.check(P, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    p = E.modulus
    if P.x == Q.x and (P.y + Q.y) % p == 0:
        return INFINITY
    if P.x == Q.x:
        lam = (3 * P.x * P.x + E.a) * pow(2 * P.y, -1, p) % p
    else:
        lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
    x3 = (lam * lam - P.x - Q.x) % p
    y3 = (lam * (P.x - x3) - P.y) % p
    return CurvePoint(x3, y3)


def negate_point(E, P):
    E.check(P)
    if P.is_infinity:
        return P
    return CurvePoint(P.x, (-P.y) % E.modulus)


def subtract_points(E, P, Q):
    return add_points(E, P, negate_point(E, Q))


def scalar_mul(E, n, P):
    """[n]P by double and add; negative n negates."""
    E.check(P)
    if n < 0:
        return scalar_mul(E, -n, negate_point(E, P))
    result, addend = INFINITY, P
    while n:
        if n & 1:
            result = add_points(E, result, addend)
        addend = add_points(E, addend, addend)
        n >>= 1
    return result


def random_point(E, rng, exclude=()):
    choices = [P for P in E.points if P not in exclude]
    if not choices:
        raise NonRationalSupport('no rational point of {} avoids {}'.format(E, [str(P) for P in exclude]))
    return choices[int(rng.integers(len(choices)))]


@dataclass(frozen=True)
class TwoTorsionGroup:
    """
    Rational two-torsion points; complete is False when the cubic does not split over F_p.
    """
    points: tuple
    complete: bool

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, P):
        return P in self.points


def two_torsion(E):
    roots, others = E.cubic.split_roots()
    points = (INFINITY,) + tuple(CurvePoint(r, 0) for r in roots)
    return TwoTorsionGroup(points, complete=len(points) == 4 and not others)


class Divisor:
    """
    Finite formal sum of rational points with nonzero integer multiplicities,
    kept in canonical point order.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            collected = {}
            for P, n in terms:
                collected[P] = collected.get(P, 0) + n
            terms = collected
        self._terms = tuple((P, int(n)) for P, n in sorted(terms.items()) if n != 0)

    @classmethod
    def point(cls, P, n=1):
        return cls({P: n})

    def items(self):
        return self._terms

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def degree(self):
        return sum(n for _, n in self._terms)

    @property
    def support(self):
        return tuple(P for P, _ in self._terms)

    def multiplicity(self, P):
        for Q, n in self._terms:
            if Q == P:
                return n
        return 0

    def as_dict(self):
        return dict(self._terms)

    def is_effective(self):
        return all(n > 0 for _, n in self._terms)

    def positive_part(self):
        return Divisor({P: n for P, n in self._terms if n > 0})

    def negative_part(self):
        return Divisor({P: -n for P, n in self._terms if n < 0})

    def __add__(self, other):
        terms = self.as_dict()
        for P, n in other.items():
            terms[P] = terms.get(P, 0) + n
        return Divisor(terms)

    def __neg__(self):
        return Divisor({P: -n for P, n in self._terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return Divisor({P: k * n for P, n in self._terms})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return 'Divisor({})'.format(self)

    def __str__(self):
        if not self._terms:
            return '0'
        out = ''
        for i, (P, n) in enumerate(self._terms):
            sign = '-' if n < 0 else '+'
            term = str(P) if abs(n) == 1 else '{}*{}'.format(abs(n), P)
            if i == 0:
                out = term if n > 0 else '-' + term
            else:
                out += ' {} {}'.format(sign, term)
        return out


@dataclass(frozen=True)
class DivisorClass:
    """
    Linear-equivalence class on an elliptic curve in Abel-Jacobi form (degree, sum point).
    """
    degree: int
    point: CurvePoint

    @property
    def is_trivial(self):
        return self.degree == 0 and self.point.is_infinity

    def __str__(self):
        return '({}, {})'.format(self.degree, self.point)


def class_of(E, D):
    total = INFINITY
    for P, n in D.items():
        total = add_points(E, total, scalar_mul(E, n, P))
    return DivisorClass(D.degree, total)


def point_class(E, P):
    E.check(P)
    return DivisorClass(1, P)


def add_classes(E, c1, c2):
    return DivisorClass(c1.degree + c2.degree, add_points(E, c1.point, c2.point))


def negate_class(E, c):
    return DivisorClass(-c.degree, negate_point(E, c.point))


def subtract_classes(E, c1, c2):
    return add_classes(E, c1, negate_class(E, c2))


def is_principal(E, D):
    return class_of(E, D).is_trivial


def h0(E, c):
    """
    Dimension of the space of global sections of the line bundle of class c (genus 1).
    """
    if c.degree < 0:
        return 0
    if c.degree == 0:
        return 1 if c.point.is_infinity else 0
    return c.degree


def h1(E, c):
    return h0(E, negate_class(E, c))


@dataclass(frozen=True)
class CurveFunction:
    """
    Element a(x) + b(x)*y of the function field of E, with y^2 already reduced.
    """
    curve: EllipticCurve
    a: RationalFunction
    b: RationalFunction

    @classmethod
    def constant(cls, E, c):
        return cls(E, RationalFunction.constant(c, E.modulus), RationalFunction.constant(0, E.modulus))

    @classmethod
    def zero(cls, E):
        return cls.constant(E, 0)

    @classmethod
    def one(cls, E):
        return cls.constant(E, 1)

    @classmethod
    def x_coordinate(cls, E):
        return cls(E, RationalFunction.x(E.modulus), RationalFunction.constant(0, E.modulus))

    @classmethod
    def y_coordinate(cls, E):
        return cls(E, RationalFunction.constant(0, E.modulus), RationalFunction.constant(1, E.modulus))

    @classmethod
    def from_parts(cls, E, a, b=None):
        """Builds a + b*y from polynomials, rational functions or integers."""
        zero = RationalFunction.constant(0, E.modulus)
        return cls(E, zero + a, zero + (0 if b is None else b))

    @property
    def is_zero(self):
        return self.a.is_zero and self.b.is_zero

    @property
    def is_constant(self):
        return self.b.is_zero and self.a.is_constant

    @property
    def constant_value(self):
        if not self.is_constant:
            raise ValueError('{} is not constant'.format(self))
        return self.a.numerator.leading_coefficient if not self.a.is_zero else 0

    def _coerce(self, other):
        if isinstance(other, CurveFunction):
            if other.curve != self.curve:
                raise RuledSurfaceError('functions on different curves')
            return other
        if isinstance(other, (int, RationalFunction, UnivariatePolynomial)):
            return CurveFunction.from_parts(self.curve, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CurveFunction(self.curve, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(self.curve, -self.a, -self.b)

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
        F = self.curve.cubic
        if self.b.is_zero:
            return CurveFunction(self.curve, self.a * o.a, self.a * o.b)
        if o.b.is_zero:
            return CurveFunction(self.curve, self.a * o.a, self.b * o.a)
        a = self.a * o.a + self.b * o.b * F
        b = self.a * o.b + self.b * o.a
        return CurveFunction(self.curve, a, b)

    __rmul__ = __mul__

    def conjugate(self):
        """image under y -> -y"""
        return CurveFunction(self.curve, self.a, -self.b)

    def norm(self):
        """f * conjugate(f) = a^2 - b^2 F as a rational function of x"""
        return self.a * self.a - self.b * self.b * self.curve.cubic

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero('the zero function has no inverse')
        if self.b.is_zero:
            return CurveFunction(self.curve, self.a.inverse(), self.b)
        n = self.norm()
        return CurveFunction(self.curve, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.b.is_zero:
            if o.a.is_zero:
                raise DivisionByZero('division by the zero function')
            return CurveFunction(self.curve, self.a / o.a, self.b / o.a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CurveFunction.one(self.curve), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def value_at(self, P):
        """f(P) for f regular at P."""
        if self.is_zero:
            return 0
        v, lead = leading_term(self.curve, self, P)
        if v < 0:
            raise DivisionByZero('{} has a pole at {}'.format(self, P))
        return lead if v == 0 else 0

    def __str__(self):
        if self.b.is_zero:
            return str(self.a)
        if self.a.is_zero:
            return '({})*y'.format(self.b)
        return '({}) + ({})*y'.format(self.a, self.b)


def _check_function(E, f):
    if f.curve != E:
        raise RuledSurfaceError('function lives on {}, not {}'.format(f.curve, E))
    if f.is_zero:
        raise ZeroFunction('the zero function has no valuation')


def leading_term(E, f, P):
    """
    Valuation of f at P together with its leading coefficient in the uniformizer
    x - x(P) (generic affine points), y (affine two-torsion points) or x/y (at O).

    Returns
    -------
    (valuation, lead): tuple of int
    """
    _check_function(E, f)
    E.check(P)
    p = E.modulus
    a, b = f.a, f.b
    if P.is_infinity:
        candidates = []
        if not a.is_zero:
            candidates.append((-2 * a.degree, a.leading_ratio))
        if not b.is_zero:
            candidates.append((-2 * b.degree - 3, b.leading_ratio))
        return min(candidates)
    x0, y0 = P.x, P.y
    if y0 == 0:
        h = (E.cubic // UnivariatePolynomial.linear(x0, p))(x0)
        candidates = []
        if not a.is_zero:
            k, rest = a.split_at(x0)
            candidates.append((2 * k, rest(x0) * pow(h, -k, p) % p))
        if not b.is_zero:
            k, rest = b.split_at(x0)
            candidates.append((2 * k + 1, rest(x0) * pow(h, -k, p) % p))
        return min(candidates)
    ka, ra = a.split_at(x0) if not a.is_zero else (None, None)
    kb, rb = b.split_at(x0) if not b.is_zero else (None, None)
    r = min(k for k in (ka, kb) if k is not None)
    a0 = ra(x0) if ka == r else 0
    b0 = rb(x0) if kb == r else 0
    g = (a0 + b0 * y0) % p
    if g:
        return r, g
    # f/(x - x0)^r vanishes at P but not at -P; divide its norm by the conjugate value
    t = UnivariatePolynomial.linear(x0, p)
    shifted = CurveFunction(E, a / (RationalFunction.from_poly(t) ** r), b / (RationalFunction.from_poly(t) ** r))
    k, n = shifted.norm().split_at(x0)
    return r + k, n(x0) * pow((a0 - b0 * y0) % p, -1, p) % p


def valuation(E, f, P):
    return leading_term(E, f, P)[0]


def leading_vector(E, u, v, P):
    """
    Leading behaviour of the pair (u, v) at P.

    Returns
    -------
    (m, (cu, cv)): the minimum valuation and the projective point [cu:cv] the pair tends to
    """
    lu = leading_term(E, u, P) if not u.is_zero else None
    lv = leading_term(E, v, P) if not v.is_zero else None
    m = min(t[0] for t in (lu, lv) if t is not None)
    cu = lu[1] if lu is not None and lu[0] == m else 0
    cv = lv[1] if lv is not None and lv[0] == m else 0
    return m, (cu, cv)


def divisor_of(E, f):
    """
    Divisor of zeros and poles of f over all rational points including O.
    """
    _check_function(E, f)
    N = f.norm()
    Q = N.numerator * N.denominator * f.a.denominator * f.b.denominator
    roots, others = Q.split_roots()
    if others:
        raise NonRationalSupport('{} has zeros or poles above non-rational x: {}'.format(
            f, ', '.join(str(q) for q in others)))
    terms = {}
    for x0 in roots:
        ys = E.square_roots.get(E.cubic(x0))
        if not ys:
            raise NonRationalSupport('{} has zeros or poles above x = {}, which carries no rational point'.format(f, x0))
        for y0 in ys:
            P = CurvePoint(x0, y0)
            v = valuation(E, f, P)
            if v:
                terms[P] = v
    v = valuation(E, f, INFINITY)
    if v:
        terms[INFINITY] = v
    D = Divisor(terms)
    if D.degree != 0:
        raise RuledSurfaceError('divisor of {} has degree {}'.format(f, D.degree))
    return D


def poles_of(E, f):
    """
    Polar part of div(f), with negative multiplicities. Only the denominators are
    factored, so zeros of f may lie above irrational x.
    """
    _check_function(E, f)
    roots, others = (f.a.denominator * f.b.denominator).split_roots()
    if others:
        raise NonRationalSupport('{} has poles above non-rational x'.format(f))
    terms = {}
    for x0 in roots:
        ys = E.square_roots.get(E.cubic(x0))
        if not ys:
            raise NonRationalSupport('{} has poles above x = {}, which carries no rational point'.format(f, x0))
        for y0 in ys:
            P = CurvePoint(x0, y0)
            v = valuation(E, f, P)
            if v < 0:
                terms[P] = v
    v = valuation(E, f, INFINITY)
    if v < 0:
        terms[INFINITY] = v
    return Divisor(terms)


def _vertical(E, P):
    return CurveFunction.from_parts(E, UnivariatePolynomial.linear(P.x, E.modulus))


def _line_through(E, R, Q):
    """Chord (or tangent) through R and Q, R != -Q, as a CurveFunction."""
    p = E.modulus
    if R.x == Q.x:
        lam = (3 * R.x * R.x + E.a) * pow(2 * R.y, -1, p) % p
    else:
        lam = (Q.y - R.y) * pow(Q.x - R.x, -1, p) % p
    a = UnivariatePolynomial((-lam, lam * R.x - R.y), p)
    return CurveFunction.from_parts(E, a, 1)


def function_with_divisor(E, D):
    """
    Function whose divisor is the principal divisor D, by chord-tangent accumulation.

    Each unit of (Q) - (O) multiplies the running function by line/vertical; a unit of
    -(Q) + (O) is traded for (-Q) - (O) and a division by the vertical through Q.

    Parameters
    ----------
    E : EllipticCurve
    D : Divisor
        principal divisor supported on rational points

    Returns
    -------
    f: CurveFunction with divisor_of(E, f) == D
    """
    for P in D.support:
        E.check(P)
    if not is_principal(E, D):
        raise NotPrincipal('{} is not principal on {}'.format(D, E))
    f = CurveFunction.one(E)
    R = INFINITY

    def absorb(f, R, Q):
        if R.is_infinity:
            return f, Q
        S = add_points(E, R, Q)
        if S.is_infinity:
            return f * _vertical(E, R), INFINITY
        return f * _line_through(E, R, Q) / _vertical(E, S), S

    for P, n in D.items():
        if P.is_infinity:
            continue
        for _ in range(abs(n)):
            if n > 0:
                f, R = absorb(f, R, P)
            else:
                f, R = absorb(f, R, negate_point(E, P))
                f = f / _vertical(E, P)
    if not R.is_infinity:
        raise RuledSurfaceError('chord-tangent accumulation did not close up at O')
    return f


@dataclass(frozen=True)
class CurveAutomorphism:
    """
    Group automorphism (x, y) -> (u^2 x, u^3 y) of E fixing O.
    """
    curve: EllipticCurve
    u: int

    def __call__(self, P):
        if P.is_infinity:
            return P
        p = self.curve.modulus
        return CurvePoint(self.u * self.u * P.x % p, pow(self.u, 3, p) * P.y % p)

    @property
    def is_identity(self):
        return self.u == 1

    @property
    def is_negation(self):
        return self.u == self.curve.modulus - 1

    def __str__(self):
        if self.is_identity:
            return 'id'
        if self.is_negation:
            return '-1'
        return '[u={}]'.format(self.u)


def curve_automorphisms(E):
    """
    Automorphisms of (E, O) rational over F_p: u with u^4 a = a and u^6 b = b.
    """
    p = E.modulus
    units = [u for u in range(1, p)
             if (pow(u, 4, p) * E.a - E.a) % p == 0 and (pow(u, 6, p) * E.b - E.b) % p == 0]
    return [CurveAutomorphism(E, u) for u in units]


def _choose_flag_points(E, D):
    """
    Points A, B outside supp D such that every point C_k = s - kA - (d-k-1)B differs from A.
    """
    d = D.degree
    s = class_of(E, D).point
    support = set(D.support)
    for A in E.points:
        if A in support or scalar_mul(E, d, A) == s:
            continue
        for B in E.points:
            if B == A:
                continue
            ok = True
            for k in range(d - 1):
                C = subtract_points(E, subtract_points(E, s, scalar_mul(E, k, A)), scalar_mul(E, d - k - 1, B))
                if C == A:
                    ok = False
                    break
            if ok:
                return A, B
    raise NonRationalSupport('not enough rational points on {} to build a basis of L({})'.format(E, D))


def riemann_roch_basis(E, D):
    """
    Basis of L(D) = {f : div(f) + D >= 0}.

    For deg D = d >= 1 the k-th basis function has divisor k(A) + R_k - D with R_k effective
    and avoiding A, so the orders at A are 0, 1, ..., d-1 and the functions are independent.
    """
    d = D.degree
    if d < 0:
        return []
    if d == 0:
        if is_principal(E, D):
            return [function_with_divisor(E, -D)]
        return []
    A, B = _choose_flag_points(E, D)
    s = class_of(E, D).point
    basis = []
    for k in range(d):
        C = subtract_points(E, subtract_points(E, s, scalar_mul(E, k, A)), scalar_mul(E, d - k - 1, B))
        R = Divisor({B: d - k - 1}) + Divisor.point(C)
        basis.append(function_with_divisor(E, Divisor({A: k}) + R - D))
    return basis

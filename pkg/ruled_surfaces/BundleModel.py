import itertools
import json
import multiprocessing
import os
import sys
from dataclasses import dataclass

import numpy as np

from .elliptic import (INFINITY, CurveFunction, Divisor, add_points, class_of, divisor_of, poles_of,
                       function_with_divisor, leading_vector, riemann_roch_basis,
                       subtract_points, valuation)
from .errors import (EqualSections, FieldTooLarge, InvalidSection, NonRationalSupport, NotDisjoint,
                     NotGlobalSection, RuledSurfaceError)

__all__ = [
    'default_arguments',
    'TransitionMatrix',
    'BundleSection',
    'BundleModel',
    'GaugeTransformation',
    'ElmRecord',
    'SegreSearchResult',
    'trivial_model',
    'refine',
    'section_chart_coordinates',
    'fiber_point',
    'normalize_projective',
    'det_divisor',
    'det_degree',
    'det_class',
    'line_subbundle_divisor',
    'line_subbundle_class',
    'self_intersection',
    'intersection_number',
    'local_intersection',
    'normalize_section_to_infinity',
    'normalize_two_sections',
    'elm_function',
    'elm_model',
    'gamma_divisor',
    'gamma_class',
    'apply_f_gamma',
    'moves_point',
    'section_lower_bound',
    'minimal_section_search',
    'segre_search',
    'model_to_record',
    'model_from_record',
    'save_model',
    'load_model',
]

default_arguments = {
    'seed': 0,
    'steps': 10,
    'budget': 20000,
    'degree_bound': 3,
    'max_elm_depth': 3,
    'crosscheck_depth': 3,
    'scenarios': 200,
    'workers': max(multiprocessing.cpu_count() // 2, 1),
    'suppress_output': False,
}


def _as_function(E, value):
    if isinstance(value, CurveFunction):
        return value
    return CurveFunction.from_parts(E, value)


@dataclass(frozen=True)
class TransitionMatrix:
    """
    2x2 matrix of CurveFunction entries, row-major (a, b, c, d).
    """
    entries: tuple

    @classmethod
    def from_rows(cls, E, rows):
        (a, b), (c, d) = rows
        return cls(tuple(_as_function(E, e) for e in (a, b, c, d)))

    @classmethod
    def identity(cls, E):
        return cls.from_rows(E, ((1, 0), (0, 1)))

    @classmethod
    def swap(cls, E):
        return cls.from_rows(E, ((0, 1), (1, 0)))

    @classmethod
    def diagonal(cls, E, f, g):
        return cls.from_rows(E, ((f, 0), (0, g)))

    @property
    def curve(self):
        return self.entries[0].curve

    def rows(self):
        a, b, c, d = self.entries
        return ((a, b), (c, d))

    def __matmul__(self, other):
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return TransitionMatrix((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    def det(self):
        a, b, c, d = self.entries
        return a * d - b * c

    def adjugate(self):
        a, b, c, d = self.entries
        return TransitionMatrix((d, -b, -c, a))

    def inverse(self):
        det = self.det()
        return TransitionMatrix(tuple(e / det for e in self.adjugate().entries))

    def apply(self, u, v):
        a, b, c, d = self.entries
        return a * u + b * v, c * u + d * v

    @property
    def is_upper_triangular(self):
        return self.entries[2].is_zero

    @property
    def is_diagonal(self):
        return self.entries[1].is_zero and self.entries[2].is_zero

    def min_valuation(self, z):
        return min(valuation(self.curve, e, z) for e in self.entries if not e.is_zero)

    def is_local_isomorphism(self, z):
        """Projectively regular and invertible at z."""
        return valuation(self.curve, self.det(), z) == 2 * self.min_valuation(z)

    def __str__(self):
        a, b, c, d = self.entries
        return '[[{}, {}], [{}, {}]]'.format(a, b, c, d)


class BundleSection:
    """
    Section x -> [u(x):v(x)] of a model, written in chart 0 and kept up to a common factor.
    """

    __slots__ = ('u', 'v', '_g')

    def __init__(self, u, v):
        if u.is_zero and v.is_zero:
            raise InvalidSection('[0:0] is not a section')
        if u.curve != v.curve:
            raise InvalidSection('section coordinates live on different curves')
        self.u, self.v = u, v
        self._g = None if v.is_zero else u / v

    @classmethod
    def infinity(cls, E):
        return cls(CurveFunction.one(E), CurveFunction.zero(E))

    @classmethod
    def constant(cls, E, c):
        return cls(CurveFunction.constant(E, c), CurveFunction.one(E))

    @classmethod
    def from_function(cls, g):
        return cls(g, CurveFunction.one(g.curve))

    @property
    def curve(self):
        return self.u.curve

    @property
    def is_infinite(self):
        return self._g is None

    @property
    def g(self):
        """u/v, or None for the infinite section"""
        return self._g

    @property
    def canonical(self):
        E = self.curve
        if self._g is None:
            return CurveFunction.one(E), CurveFunction.zero(E)
        return self._g, CurveFunction.one(E)

    def __eq__(self, other):
        return isinstance(other, BundleSection) and self._g == other._g

    def __hash__(self):
        return hash(self._g)

    def __str__(self):
        if self._g is None:
            return '[1:0]'
        return '[{}:1]'.format(self._g)

    __repr__ = __str__


@dataclass(frozen=True)
class ElmRecord:
    z: object
    center: tuple


class BundleModel:
    """
    P1-bundle over an elliptic curve given by one big chart U0 = C minus the special points,
    trivial there, and a transition matrix tau_z for each special point z that maps chart-0
    coordinates to the coordinates of a small chart around z.

    Parameters
    ----------
    base : EllipticCurve
    special_points : sequence of CurvePoint
    transitions : sequence of TransitionMatrix, one per special point
    elm_depth : int
        number of elementary transformations applied to the trivial model, None if unknown
    history : tuple of ElmRecord
    inverse_base_point : (CurvePoint, (int, int)) or None
        base point of the inverse of the last elementary transformation, in the chart at z
    """

    def __init__(self, base, special_points=(), transitions=(), elm_depth=0, history=(), inverse_base_point=None):
        special_points = tuple(special_points)
        transitions = tuple(transitions)
        if len(special_points) != len(transitions):
            raise RuledSurfaceError('one transition matrix is needed per special point')
        if len(set(special_points)) != len(special_points):
            raise RuledSurfaceError('special points must be distinct')
        base.check(*special_points)
        for z, tau in zip(special_points, transitions):
            if tau.det().is_zero:
                raise RuledSurfaceError('transition at {} is not invertible'.format(z))
        self.base = base
        self.special_points = special_points
        self.transitions = transitions
        self.elm_depth = elm_depth
        self.history = tuple(history)
        self.inverse_base_point = inverse_base_point

    def transition(self, z):
        return self.transitions[self.special_points.index(z)]

    def replace(self, **changes):
        fields = dict(base=self.base, special_points=self.special_points, transitions=self.transitions,
                      elm_depth=self.elm_depth, history=self.history, inverse_base_point=self.inverse_base_point)
        fields.update(changes)
        return BundleModel(**fields)

    def __repr__(self):
        return 'BundleModel({}, special_points=[{}], elm_depth={})'.format(
            self.base, ', '.join(str(z) for z in self.special_points), self.elm_depth)


def trivial_model(E):
    """C x P1: no special points."""
    return BundleModel(E)


def refine(m, points):
    """Adds special points with identity transitions."""
    new = [P for P in dict.fromkeys(points) if P not in m.special_points]
    if not new:
        return m
    identity = TransitionMatrix.identity(m.base)
    return m.replace(special_points=m.special_points + tuple(new),
                     transitions=m.transitions + (identity,) * len(new))


def normalize_projective(point, p):
    u, v = (int(c) % p for c in point)
    if u == 0 and v == 0:
        raise InvalidSection('[0:0] is not a point of P1')
    if u:
        return (1, v * pow(u, -1, p) % p)
    return (0, 1)


def section_chart_coordinates(m, sigma, z):
    """Coordinates of sigma in the chart at z (chart 0 when z is not special)."""
    u, v = sigma.canonical
    if z in m.special_points:
        return m.transition(z).apply(u, v)
    return u, v


def fiber_point(m, sigma, z):
    """The point of sigma over z, as a normalized [u:v] in the chart at z."""
    u, v = section_chart_coordinates(m, sigma, z)
    _, point = leading_vector(m.base, u, v, z)
    return normalize_projective(point, m.base.modulus)


def _min_order(E, pair, z):
    return min(valuation(E, e, z) for e in pair if not e.is_zero)


def det_divisor(m):
    E = m.base
    return Divisor({z: valuation(E, tau.det(), z) for z, tau in zip(m.special_points, m.transitions)})


def det_degree(m):
    return det_divisor(m).degree


def det_class(m):
    return class_of(m.base, det_divisor(m))


def line_subbundle_divisor(m, sigma, pole_candidates=None):
    """
    Cocycle divisor of L(sigma): min order of the coordinates away from the special points,
    min order of the chart coordinates at each special point.
    """
    E = m.base
    terms = {}
    g = sigma.g
    if g is not None and not g.is_constant:
        if pole_candidates is None:
            poles = poles_of(E, g).items()
        else:
            poles = [(P, valuation(E, g, P)) for P in pole_candidates]
        for P, n in poles:
            if n < 0 and P not in m.special_points:
                terms[P] = n
    for z, tau in zip(m.special_points, m.transitions):
        terms[z] = terms.get(z, 0) + _min_order(E, tau.apply(*sigma.canonical), z)
    return Divisor(terms)


def line_subbundle_class(m, sigma):
    return class_of(m.base, line_subbundle_divisor(m, sigma))


def _self_intersection_fast(m, sigma, pole_candidates=None):
    return det_degree(m) - 2 * line_subbundle_divisor(m, sigma, pole_candidates).degree


class GaugeTransformation:
    """
    Change of trivializations: A0 on chart 0 and A_z on the chart at each special point.
    The transformed model has transitions A_z * tau_z * A0^-1.
    """

    def __init__(self, chart0, local=None):
        self.chart0 = chart0
        self.local = dict(local or {})

    @classmethod
    def identity(cls, E):
        return cls(TransitionMatrix.identity(E))

    def chart(self, z):
        if z in self.local:
            return self.local[z]
        return TransitionMatrix.identity(self.chart0.curve)

    def apply_to_model(self, m):
        inverse0 = self.chart0.inverse()
        transitions = tuple(self.chart(z) @ tau @ inverse0 for z, tau in zip(m.special_points, m.transitions))
        inverse_base_point = m.inverse_base_point
        if inverse_base_point is not None:
            z, point = inverse_base_point
            E = m.base
            image = self.chart(z).apply(CurveFunction.constant(E, point[0]), CurveFunction.constant(E, point[1]))
            inverse_base_point = (z, normalize_projective(leading_vector(E, image[0], image[1], z)[1], E.modulus))
        return m.replace(transitions=transitions, inverse_base_point=inverse_base_point)

    def apply_to_section(self, sigma):
        return BundleSection(*self.chart0.apply(*sigma.canonical))

    def compose(self, other):
        """self after other"""
        points = set(self.local) | set(other.local)
        return GaugeTransformation(self.chart0 @ other.chart0,
                                   {z: self.chart(z) @ other.chart(z) for z in points})

    def is_identity(self):
        E = self.chart0.curve
        identity = TransitionMatrix.identity(E)
        return self.chart0 == identity and all(A == identity for A in self.local.values())

    def check(self, m):
        """
        True when A0 is regular and invertible on chart 0 and every A_z is a local isomorphism.
        """
        E = m.base
        for entry in self.chart0.entries:
            if entry.is_zero:
                continue
            if any(n < 0 and P not in m.special_points for P, n in poles_of(E, entry).items()):
                return False
        if any(P not in m.special_points for P in divisor_of(E, self.chart0.det()).support):
            return False
        return all(self.chart(z).is_local_isomorphism(z) for z in m.special_points)


def _upper_gauge(E, a, b, z):
    """Local matrix sending the pair (a, b) to a multiple of (1, 0)."""
    if b.is_zero:
        return TransitionMatrix.identity(E)
    if a.is_zero:
        return TransitionMatrix.swap(E)
    if valuation(E, a, z) <= valuation(E, b, z):
        return TransitionMatrix.from_rows(E, ((1, 0), (-(b / a), 1)))
    return TransitionMatrix.from_rows(E, ((0, 1), (1, -(a / b))))


def normalize_section_to_infinity(m, sigma):
    """
    Gauges m so that sigma reads [1:0] everywhere and all transitions are upper triangular.

    The poles of sigma's coordinate are first added as special points, so that
    A0 = [[0, 1], [1, -g]] is regular and invertible on chart 0.

    Returns
    -------
    (model, gauge): the normalized model (on the refined special set) and the gauge used
    """
    E = m.base
    if sigma.curve != E:
        raise InvalidSection('section lives on {}, not {}'.format(sigma.curve, E))
    if sigma.is_infinite:
        chart0 = TransitionMatrix.identity(E)
        refined = m
    else:
        g = sigma.g
        poles = poles_of(E, g).support if not g.is_constant else ()
        refined = refine(m, poles)
        chart0 = TransitionMatrix.from_rows(E, ((0, 1), (1, -g)))
    local = {}
    for z, tau in zip(refined.special_points, refined.transitions):
        a, b = tau.apply(*sigma.canonical)
        local[z] = _upper_gauge(E, a, b, z)
    gauge = GaugeTransformation(chart0, local)
    return gauge.apply_to_model(refined), gauge


def normalize_two_sections(m, sigma1, sigma2):
    """
    Gauges m so that sigma1 reads [1:0], sigma2 reads [0:1] and every transition is diagonal.
    """
    if sigma1 == sigma2:
        raise EqualSections('the two sections coincide')
    E = m.base
    m1, first = normalize_section_to_infinity(m, sigma1)
    moved = first.apply_to_section(sigma2)
    if moved.is_infinite:
        raise EqualSections('the two sections coincide')
    h = moved.g
    for P, n in (poles_of(E, h).items() if not h.is_constant else ()):
        if n < 0 and P not in m1.special_points:
            raise NotDisjoint('sections meet above {}'.format(P))
    chart0 = TransitionMatrix.from_rows(E, ((1, -h), (0, 1)))
    local = {}
    for z, tau in zip(m1.special_points, m1.transitions):
        a, b = tau.apply(h, CurveFunction.one(E))
        if a.is_zero:
            local[z] = TransitionMatrix.identity(E)
        elif b.is_zero or valuation(E, a, z) < valuation(E, b, z):
            raise NotDisjoint('sections meet above {}'.format(z))
        else:
            local[z] = TransitionMatrix.from_rows(E, ((1, -(a / b)), (0, 1)))
    second = GaugeTransformation(chart0, local)
    return second.apply_to_model(m1), second.compose(first)


def self_intersection(m, sigma):
    """
    Self-intersection read off the diagonal of the normalized transitions:
    sum over special points of v(d) - v(a) for tau = [[a, b], [0, d]].
    """
    normalized, _ = normalize_section_to_infinity(m, sigma)
    E = m.base
    total = 0
    for z, tau in zip(normalized.special_points, normalized.transitions):
        a, _, _, d = tau.entries
        total += valuation(E, d, z) - valuation(E, a, z)
    return total


def intersection_number(m, sigma1, sigma2):
    """deg det(V) - deg L(sigma1) - deg L(sigma2)"""
    if sigma1 == sigma2:
        raise EqualSections('intersection number of a section with itself; use self_intersection')
    return (det_degree(m) - line_subbundle_divisor(m, sigma1).degree
            - line_subbundle_divisor(m, sigma2).degree)


def local_intersection(m, sigma1, sigma2, P):
    """Intersection multiplicity of two distinct sections above P."""
    if sigma1 == sigma2:
        raise EqualSections('the two sections coincide')
    E = m.base
    u1, v1 = section_chart_coordinates(m, sigma1, P)
    u2, v2 = section_chart_coordinates(m, sigma2, P)
    return valuation(E, u1 * v2 - u2 * v1, P) - _min_order(E, (u1, v1), P) - _min_order(E, (u2, v2), P)


def elm_function(E, z, avoid=(), rng=None):
    """
    Function with a simple zero at z: divisor (z) + (w) - (t) - (z + w - t).

    t is O unless z = O; w and t are drawn from rng, preferring points outside avoid.
    """
    if rng is None:
        rng = np.random.default_rng(default_arguments['seed'])
    points = list(E.points)
    order = [points[i] for i in rng.permutation(len(points))]
    t_candidates = ([INFINITY] if not z.is_infinity else []) + [P for P in order if not P.is_infinity]
    avoid = set(avoid)
    for strict in (True, False):
        for t in t_candidates:
            if t == z or (strict and t in avoid):
                continue
            for w in order:
                if w in (z, t) or (strict and w in avoid):
                    continue
                r = subtract_points(E, add_points(E, z, w), t)
                if strict and r in avoid:
                    continue
                D = Divisor({z: 1}) + Divisor.point(w) - Divisor.point(t) - Divisor.point(r)
                if D.multiplicity(z) != 1:
                    continue
                return function_with_divisor(E, D), D
    raise NonRationalSupport('{} has too few rational points to complete a divisor through {}'.format(E, z))


def elm_model(m, z, point, seed=None):
    """
    Elementary transformation centred at the point [u0:v0] of the fibre over z,
    written in the chart at z.

    The centre is first moved to [1:0] by a constant matrix G, then tau_z becomes
    diag(f, 1) * G * tau_z with f vanishing simply at z. The inverse transformation is
    centred at [0:1] in the new chart at z.
    """
    E = m.base
    E.check(z)
    p = E.modulus
    u0, v0 = normalize_projective(point, p)
    if seed is None:
        seed = default_arguments['seed']
    rng = np.random.default_rng([int(seed), len(m.history)])
    m = refine(m, [z])
    if u0:
        G = TransitionMatrix.from_rows(E, ((1, 0), (-v0, u0)))
    else:
        G = TransitionMatrix.swap(E)
    f, _ = elm_function(E, z, avoid=m.special_points, rng=rng)
    tau = TransitionMatrix.diagonal(E, f, 1) @ G @ m.transition(z)
    transitions = tuple(tau if w == z else t for w, t in zip(m.special_points, m.transitions))
    depth = None if m.elm_depth is None else m.elm_depth + 1
    return m.replace(transitions=transitions, elm_depth=depth,
                     history=m.history + (ElmRecord(z, (u0, v0)),),
                     inverse_base_point=(z, (0, 1)))


def gamma_divisor(m):
    """
    Cocycle divisor of det(V)^-1 (x) L(sigma)^2 for the infinite section of an
    upper-triangular model: sum of v(a) - v(d) over special points.
    """
    E = m.base
    terms = {}
    for z, tau in zip(m.special_points, m.transitions):
        if not tau.is_upper_triangular:
            raise InvalidSection('transition at {} is not upper triangular'.format(z))
        a, _, _, d = tau.entries
        terms[z] = valuation(E, a, z) - valuation(E, d, z)
    return Divisor(terms)


def gamma_class(m):
    return class_of(m.base, gamma_divisor(m))


def apply_f_gamma(m, gamma, sigma=None):
    """
    Fibrewise unipotent automorphism fixing a section.

    Without sigma the model must be upper triangular and the fixed section is [1:0]: in chart 0
    the map is [[1, gamma], [0, 1]], in the chart at z it reads [[1, (a/d) gamma], [0, 1]].
    With sigma, m is first gauged by normalize_section_to_infinity and the map is conjugated
    back, so it lives on m refined at the poles of sigma. In both cases gamma must be a global
    section of det(V)^-1 (x) L(sigma)^2 computed on the normalized model, i.e.
    div(gamma) + gamma_divisor >= 0.

    Returns
    -------
    gauge: GaugeTransformation commuting with every transition
    """
    if sigma is None or sigma.is_infinite:
        return _f_gamma(m, gamma)
    normalized, normalizer = normalize_section_to_infinity(m, sigma)
    gauge = _inverse_gauge(normalizer).compose(_f_gamma(normalized, gamma).compose(normalizer))
    refined = refine(m, normalized.special_points)
    _check_commutes(refined, gauge)
    return gauge


def _inverse_gauge(gauge):
    return GaugeTransformation(gauge.chart0.inverse(), {z: A.inverse() for z, A in gauge.local.items()})


def _check_commutes(m, gauge):
    for z, tau in zip(m.special_points, m.transitions):
        if tau @ gauge.chart0 != gauge.chart(z) @ tau:
            raise RuledSurfaceError('f_gamma does not commute with the transition at {}'.format(z))


def _f_gamma(m, gamma):
    E = m.base
    D = gamma_divisor(m)
    chart0 = TransitionMatrix.from_rows(E, ((1, gamma), (0, 1)))
    if gamma.is_zero:
        return GaugeTransformation(chart0, {z: TransitionMatrix.identity(E) for z in m.special_points})
    for P, n in poles_of(E, gamma).items():
        if P not in m.special_points and n < 0:
            raise NotGlobalSection('gamma has a pole at the ordinary point {}'.format(P))
    local = {}
    for z, tau in zip(m.special_points, m.transitions):
        if valuation(E, gamma, z) + D.multiplicity(z) < 0:
            raise NotGlobalSection('gamma is too singular at {}'.format(z))
        a, _, _, d = tau.entries
        local[z] = TransitionMatrix.from_rows(E, ((1, a / d * gamma), (0, 1)))
    gauge = GaugeTransformation(chart0, local)
    _check_commutes(m, gauge)
    return gauge


def moves_point(m, gauge, z, point):
    """Whether the automorphism moves the fibre point [u0:v0] (chart at z of m)."""
    A = gauge.chart(z) if z in m.special_points else gauge.chart0
    E = A.curve
    p = E.modulus
    image = A.apply(CurveFunction.constant(E, point[0]), CurveFunction.constant(E, point[1]))
    _, (cu, cv) = leading_vector(E, image[0], image[1], z)
    return (cu * point[1] - cv * point[0]) % p != 0


def section_lower_bound(m, k):
    """
    Every section (g, 1) with deg g = k has self-intersection at least
    2k - deg det + 2 * sum_z min v_z(tau_z).
    """
    slack = sum(tau.min_valuation(z) for z, tau in zip(m.special_points, m.transitions))
    return 2 * k - det_degree(m) + 2 * slack


@dataclass
class SegreSearchResult:
    """
    Outcome of a section search.

    exact means no section outside the searched families can go below segre;
    count_exact means none can even reach it. minimal_sections is empty when the value
    is certified by bounds alone.
    """
    segre: int
    minimal_sections: tuple
    exact: bool
    count_exact: bool
    evaluated: int
    records: tuple

    def sections_with(self, value):
        return [sigma for sigma, s in self.records if s == value]


def minimal_section_search(m, degree_bound=None, budget=None, anchors=None, suppress_output=True):
    """
    Sweeps the infinite section and every constant section, then, while the sweep is not
    certified, the families L(kA) for 2 <= k <= degree_bound anchored at O and the special points.

    Parameters
    ----------
    m : BundleModel
    degree_bound : int
        largest pole order of the function families
    budget : int
        maximal number of sections evaluated; FieldTooLarge beyond it

    Returns
    -------
    SegreSearchResult
    """
    if degree_bound is None:
        degree_bound = default_arguments['degree_bound']
    if budget is None:
        budget = default_arguments['budget']
    if degree_bound < 1:
        raise ValueError('degree_bound must be at least 1')
    E = m.base
    p = E.modulus
    if p + 1 > budget:
        raise FieldTooLarge('{} constant sections exceed the budget of {}'.format(p + 1, budget))
    sweep = [BundleSection.infinity(E)] + [BundleSection.constant(E, c) for c in range(p)]
    records = [(sigma, _self_intersection_fast(m, sigma)) for sigma in sweep]
    best = min(s for _, s in records)
    floor = section_lower_bound(m, 2)
    evaluated = len(records)
    # the Segre invariant is at most the genus and has the parity of deg det
    ceiling = det_degree(m) % 2
    if best > ceiling and floor >= ceiling:
        return SegreSearchResult(ceiling, (), True, False, evaluated, tuple(records))
    exact, count_exact = floor >= best, floor > best
    seen = set(sigma for sigma, _ in records)
    if anchors is None:
        anchors = sorted(set((INFINITY,) + m.special_points))
    k = 2
    while k <= degree_bound and not (count_exact or (exact and best > 0)):
        for A in anchors:
            basis = riemann_roch_basis(E, Divisor.point(A, k))
            size = p ** len(basis)
            if evaluated + size > budget:
                raise FieldTooLarge('family L({}*{}) over F_{} exceeds the budget of {}'.format(k, A, p, budget))
            for coeffs in itertools.product(range(p), repeat=len(basis)):
                g = CurveFunction.zero(E)
                for c, f in zip(coeffs, basis):
                    if c:
                        g = g + f * c
                sigma = BundleSection.from_function(g)
                if sigma in seen:
                    continue
                seen.add(sigma)
                records.append((sigma, _self_intersection_fast(m, sigma, pole_candidates=[A])))
            evaluated += size
            if not suppress_output:
                print('\r' + 'Sections evaluated: ' + str(evaluated), end='', file=sys.stderr)
        best = min(s for _, s in records)
        exact, count_exact = floor >= best, floor > best
        k += 1
    if not suppress_output:
        print('', file=sys.stderr)
    minimal = tuple(sigma for sigma, s in records if s == best)
    return SegreSearchResult(best, minimal, exact, count_exact, evaluated, tuple(records))


def segre_search(m, degree_bound=None, budget=None):
    """Smallest self-intersection found; certified when minimal_section_search says exact."""
    return minimal_section_search(m, degree_bound=degree_bound, budget=budget).segre


def model_to_record(m):
    record = {
        'curve': str(m.base),
        'special_points': [str(z) for z in m.special_points],
        'transitions': [[str(e) for e in tau.entries] for tau in m.transitions],
        'elm_depth': m.elm_depth,
        'history': [[str(r.z), list(r.center)] for r in m.history],
        'inverse_base_point': None,
    }
    if m.inverse_base_point is not None:
        z, point = m.inverse_base_point
        record['inverse_base_point'] = [str(z), list(point)]
    return record


def model_from_record(record):
    from .cli import parse_curve, parse_point, parse_curve_function
    E = parse_curve(record['curve'])
    points = [parse_point(text, E) for text in record['special_points']]
    transitions = [TransitionMatrix(tuple(parse_curve_function(text, E) for text in entries))
                   for entries in record['transitions']]
    history = tuple(ElmRecord(parse_point(z, E), tuple(center)) for z, center in record.get('history', []))
    inverse_base_point = record.get('inverse_base_point')
    if inverse_base_point is not None:
        inverse_base_point = (parse_point(inverse_base_point[0], E), tuple(inverse_base_point[1]))
    return BundleModel(E, points, transitions, elm_depth=record.get('elm_depth'),
                       history=history, inverse_base_point=inverse_base_point)


def save_model(m, path):
    if os.path.dirname(path):
        os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(model_to_record(m), f, indent=2)


def load_model(path):
    if not path:
        raise Exception('model file (path) is required')
    with open(path) as f:
        return model_from_record(json.load(f))

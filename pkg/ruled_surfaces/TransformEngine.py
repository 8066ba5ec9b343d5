import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from .BundleModel import (BundleSection, default_arguments, elm_model, fiber_point, line_subbundle_class,
                          minimal_section_search, normalize_projective, trivial_model)
from .Descriptors import (Atiyah0, Atiyah1, Decomposable, TrivialBundle, Undetermined, descriptor_of_model,
                          make_decomposable, segre)
from .elliptic import (INFINITY, Divisor, DivisorClass, add_points, function_with_divisor, h0,
                       point_class, random_point, scalar_mul, subtract_classes, subtract_points, valuation)
from .errors import InconsistentCenter, RuledSurfaceError

__all__ = [
    'Location',
    'ElmPoint',
    'Known',
    'PartiallyKnown',
    'Undetermined',
    'ChainStep',
    'ChainCertificate',
    'ScenarioOutcome',
    'CrosscheckReport',
    'elm_descriptor',
    'resolve_center',
    'chain_centers',
    'chain_step',
    'chain_theorem_A',
    'build_atiyah',
    'run_scenario',
    'crosscheck_elm',
]


class Location(Enum):
    OnMinimalSection = 'min'
    OnComplementarySection = 'comp'
    AtSpecialPoint = 'q'
    GenericOffNamedSections = 'generic'
    ModelCoordinates = 'coords'


@dataclass(frozen=True)
class ElmPoint:
    """
    Centre of an elementary transformation: a fibre z and a location tag. ModelCoordinates
    centres carry [u:v] in the chart at z of model, and are resolved to a tag first.
    """
    z: object
    location: Location
    coordinates: tuple = None
    model: object = None

    def __str__(self):
        if self.location is Location.ModelCoordinates:
            return 'z={}; loc=coords [{}:{}]'.format(self.z, *self.coordinates)
        return 'z={}; loc={}'.format(self.z, self.location.value)


@dataclass(frozen=True)
class Known:
    descriptor: object

    def __str__(self):
        return str(self.descriptor)


@dataclass(frozen=True)
class PartiallyKnown:
    """Only the Segre invariant (and possibly decomposability) of the result is known."""
    segre: int
    decomposable: bool = None

    def __str__(self):
        kind = {True: 'decomposable', False: 'indecomposable', None: 'decomposability unknown'}[self.decomposable]
        return 'PartiallyKnown: segre {}, {}'.format(self.segre, kind)


def _inconsistent(d, p, why):
    return InconsistentCenter('{} is not a valid centre on {}: {}'.format(p, d, why))


def elm_descriptor(d, p):
    """
    Descriptor of the surface obtained from d by an elementary transformation at p.

    Returns
    -------
    Known, PartiallyKnown or Undetermined

    Raises
    ------
    InconsistentCenter: the location is impossible on d
    """
    location = p.location
    if location is Location.ModelCoordinates:
        if p.model is None or p.coordinates is None:
            raise _inconsistent(d, p, 'model coordinates need a model')
        location = resolve_center(p.model, d, p.z, p.coordinates)
    z = p.z
    if isinstance(d, TrivialBundle):
        if location is Location.AtSpecialPoint:
            raise _inconsistent(d, p, 'C x P1 has no special point')
        return Known(Decomposable(d.curve, DivisorClass(1, z)))
    if isinstance(d, Decomposable):
        return _elm_decomposable(d, p, location)
    if isinstance(d, Atiyah0):
        if location is Location.OnMinimalSection:
            return PartiallyKnown(-1, True)
        if location is Location.GenericOffNamedSections:
            return Known(Atiyah1(d.curve))
        raise _inconsistent(d, p, 'A0 has one named section')
    if isinstance(d, Atiyah1):
        return Undetermined('elementary transformations of A1 are not covered by the rules')
    return Undetermined('no elementary transformation rules for {}'.format(d))


def _elm_decomposable(d, p, location):
    E, z = d.curve, p.z
    degree, s = d.degree, d.point
    if location is Location.OnMinimalSection and degree >= 1:
        return Known(make_decomposable(E, DivisorClass(degree + 1, add_points(E, s, z))))
    if degree == 0:
        if location is Location.OnMinimalSection:
            return Known(make_decomposable(E, DivisorClass(1, subtract_points(E, z, s))))
        if location is Location.OnComplementarySection:
            return Known(make_decomposable(E, DivisorClass(1, add_points(E, s, z))))
        if location is Location.GenericOffNamedSections:
            return Known(Atiyah1(E))
        raise _inconsistent(d, p, 'surfaces of degree 0 have no special point')
    if degree >= 2:
        return Undetermined('rules cover degree <= 1 off the minimal section')
    if z == s:
        if location is Location.AtSpecialPoint:
            return Known(TrivialBundle(E))
        if location is Location.GenericOffNamedSections:
            return Known(Atiyah0(E))
        raise _inconsistent(d, p, 'over the special fibre every section of self-intersection 1 meets the special point')
    if location is Location.AtSpecialPoint:
        raise _inconsistent(d, p, 'the special point lies over {}'.format(s))
    return Known(make_decomposable(E, DivisorClass(0, subtract_points(E, s, z))))


def resolve_center(m, d, z, point):
    """
    Location tag of the fibre point [u:v] (chart at z of m) relative to the sections of d,
    measured on the minimal sections found by the search.
    """
    E = m.base
    E.check(z)
    point = normalize_projective(point, E.modulus)
    search = minimal_section_search(m)
    minimal = list(search.minimal_sections)

    def on(sections):
        return any(fiber_point(m, sigma, z) == point for sigma in sections)

    if isinstance(d, Decomposable) and d.degree == 0:
        if len(minimal) != 2:
            raise _inconsistent(d, ElmPoint(z, Location.ModelCoordinates, point), 'model is not of degree 0')
        first, second = minimal
        first_is_o_side = subtract_classes(E, line_subbundle_class(m, second), line_subbundle_class(m, first)) == d.M
        if on([first]):
            return Location.OnMinimalSection if first_is_o_side else Location.OnComplementarySection
        if on([second]):
            return Location.OnComplementarySection if first_is_o_side else Location.OnMinimalSection
        return Location.GenericOffNamedSections
    if on(minimal):
        return Location.OnMinimalSection
    if isinstance(d, Decomposable) and d.degree == 1 and on(search.sections_with(1)):
        return Location.AtSpecialPoint if z == d.point else Location.OnComplementarySection
    return Location.GenericOffNamedSections


@dataclass
class ChainStep:
    """
    One elementary transformation along the minimal section of a decomposable surface.

    L is the class of det(V)^-1 (x) L(sigma)^2 after the step, which for P(O + M) with its
    minimal section is M itself.
    """
    step: int
    before: object
    after: object
    z: object
    L: DivisorClass
    h0_L: int
    h0_L_minus_z: int
    gamma_exists: bool
    gamma: object = None

    @property
    def segre(self):
        return segre(self.after)

    def line(self):
        return '{}, {}, {}, L={}, {}, {}, {}'.format(self.step, self.z, self.segre, self.L, self.h0_L,
                                                     self.h0_L_minus_z, self.gamma_exists)

    def to_record(self):
        record = {
            'step': self.step,
            'before': str(self.before),
            'after': str(self.after),
            'z': str(self.z),
            'segre': self.segre,
            'L': [self.L.degree, str(self.L.point)],
            'h0_L': self.h0_L,
            'h0_L_minus_z': self.h0_L_minus_z,
            'gamma_exists': self.gamma_exists,
        }
        if self.gamma is not None:
            record['gamma'] = str(self.gamma)
        return record

    @classmethod
    def from_record(cls, record, E):
        from .cli import parse_curve_function, parse_descriptor, parse_point
        gamma = record.get('gamma')
        return cls(step=record['step'],
                   before=parse_descriptor(record['before'], E),
                   after=parse_descriptor(record['after'], E),
                   z=parse_point(record['z'], E),
                   L=DivisorClass(record['L'][0], parse_point(record['L'][1], E)),
                   h0_L=record['h0_L'],
                   h0_L_minus_z=record['h0_L_minus_z'],
                   gamma_exists=record['gamma_exists'],
                   gamma=None if gamma is None else parse_curve_function(gamma, E))


@dataclass
class ChainCertificate:
    start: object
    steps: list = field(default_factory=list)

    @property
    def segre_sequence(self):
        return [segre(self.start)] + [s.segre for s in self.steps]

    @property
    def strictly_decreasing(self):
        seq = self.segre_sequence
        return all(b == a - 1 for a, b in zip(seq, seq[1:]))

    def lines(self):
        return ['step, z, segre, L=(d,s), h0(L), h0(L-z), gamma_exists'] + [s.line() for s in self.steps]

    def to_records(self):
        return {'start': str(self.start), 'steps': [s.to_record() for s in self.steps]}

    @classmethod
    def from_records(cls, records, E):
        """Inverse of to_records; descriptors and points are re-parsed over E."""
        from .cli import parse_descriptor
        return cls(parse_descriptor(records['start'], E), [ChainStep.from_record(r, E) for r in records['steps']])

    def to_dataframe(self):
        """
        returns
        -------
        df (pandas.DataFrame): one row per step
        """
        rows = [s.to_record() for s in self.steps]
        for row in rows:
            row['L'] = '({}, {})'.format(*row.pop('L'))
        return pd.DataFrame(rows, columns=['step', 'before', 'after', 'z', 'segre', 'L', 'h0_L',
                                           'h0_L_minus_z', 'gamma_exists'] + (['gamma'] if any('gamma' in r for r in rows) else []))


def chain_centers(E, n, seed=None):
    """n fibres z_i = P0 + [i]G, with P0 and G != O drawn from a seeded generator."""
    if seed is None:
        seed = default_arguments['seed']
    rng = np.random.default_rng(seed)
    start = random_point(E, rng)
    step = random_point(E, rng, exclude=(INFINITY,))
    return [add_points(E, start, scalar_mul(E, i, step)) for i in range(n)]


def _realize_gamma(E, L, z):
    """
    Function gamma in L(D) for a divisor D of class L through z whose pole at z has the full
    order mult_z(D), i.e. a section of L not vanishing at z.
    """
    d, s = L.degree, L.point
    B = INFINITY if not z.is_infinity else next(P for P in E.points if P != z)
    R = subtract_points(E, subtract_points(E, s, z), scalar_mul(E, d - 2, B))
    D = Divisor.point(z) + Divisor.point(B, d - 2) + Divisor.point(R)
    for A in E.points:
        if A == z:
            continue
        C = subtract_points(E, s, scalar_mul(E, d - 1, A))
        if C == z:
            continue
        gamma = function_with_divisor(E, Divisor.point(A, d - 1) + Divisor.point(C) - D)
        if valuation(E, gamma, z) != -D.multiplicity(z):
            raise RuledSurfaceError('gamma does not reach the full pole order at {}'.format(z))
        return gamma
    raise RuledSurfaceError('{} is a base point of the linear system of {}'.format(z, L))


def chain_step(E, d, z, step=1, realize_gamma=False):
    """Certificate row for the elementary transformation of d on its minimal section over z."""
    result = elm_descriptor(d, ElmPoint(z, Location.OnMinimalSection))
    if not isinstance(result, Known) or not isinstance(result.descriptor, Decomposable):
        raise RuledSurfaceError('chain steps need a decomposable surface of positive degree, got {}'.format(d))
    after = result.descriptor
    L = after.M
    h0_L = h0(E, L)
    h0_L_minus_z = h0(E, subtract_classes(E, L, point_class(E, z)))
    gamma_exists = h0_L > h0_L_minus_z
    gamma = _realize_gamma(E, L, z) if realize_gamma and gamma_exists and L.degree >= 2 else None
    return ChainStep(step, d, after, z, L, h0_L, h0_L_minus_z, gamma_exists, gamma)


def chain_theorem_A(E, start, n=None, centers=None, seed=None, realize_gamma=False, suppress_output=True):
    """
    Non-stationary chain of elementary transformations along minimal sections.

    Parameters
    ----------
    E : EllipticCurve
    start : Decomposable
        surface of degree >= 1
    n : int
        number of steps, defaults to default_arguments['steps']
    centers : sequence of CurvePoint
        fibres of the centres, defaults to chain_centers(E, n, seed)
    realize_gamma : bool
        also exhibit a function gamma for each step with deg L >= 2

    Returns
    -------
    ChainCertificate
    """
    if n is None:
        n = default_arguments['steps'] if centers is None else len(centers)
    if n < 1:
        raise ValueError('a chain needs at least one step')
    if not isinstance(start, Decomposable) or start.degree < 1:
        raise RuledSurfaceError('chains start from a decomposable surface of positive degree, got {}'.format(start))
    if centers is None:
        centers = chain_centers(E, n, seed)
    centers = list(centers)[:n]
    E.check(*centers)
    certificate = ChainCertificate(start)
    current = start
    for i, z in enumerate(centers):
        row = chain_step(E, current, z, step=i + 1, realize_gamma=realize_gamma)
        if row.segre != segre(current) - 1:
            raise RuledSurfaceError('Segre invariant did not drop at step {}'.format(i + 1))
        certificate.steps.append(row)
        current = row.after
        if not suppress_output:
            print('\r' + 'Chain steps certified: ' + str(i + 1) + '/' + str(len(centers)), sep='', end='', flush=True, file=sys.stderr)
    if not suppress_output:
        print('', file=sys.stderr)
    return certificate


def build_atiyah(E, variant, z1, z3=None, seed=None):
    """
    Atiyah surfaces from C x P1: elm at [1:0] over z1 gives D(1; s=z1); elm again over z1 at [1:1],
    off the (-1)-section and off the inverse base point, gives A0; for variant 1 a third elm
    over z3 off the unique 0-section gives A1.

    Returns
    -------
    (model, descriptor)
    """
    if variant not in (0, 1):
        raise ValueError('variant must be 0 or 1')
    E.check(z1)
    m = elm_model(trivial_model(E), z1, (1, 0), seed=seed)
    m = elm_model(m, z1, (1, 1), seed=seed)
    if variant == 0:
        return m, Atiyah0(E)
    if z3 is None:
        rng = np.random.default_rng(default_arguments['seed'] if seed is None else seed)
        z3 = random_point(E, rng, exclude=(z1,))
    E.check(z3)
    sigma0 = BundleSection.infinity(E)
    point = (0, 1) if fiber_point(m, sigma0, z3) != (0, 1) else (1, 0)
    return elm_model(m, z3, point, seed=seed), Atiyah1(E)


@dataclass
class ScenarioOutcome:
    seed: int
    steps: list
    rule: list
    model: list
    agree: list

    @property
    def disagreements(self):
        return [i for i, a in enumerate(self.agree) if a is False]


@dataclass
class CrosscheckReport:
    outcomes: list

    @property
    def compared(self):
        return sum(sum(a is not None for a in o.agree) for o in self.outcomes)

    @property
    def disagreements(self):
        return [(o.seed, i) for o in self.outcomes for i in o.disagreements]

    @property
    def passed(self):
        return not self.disagreements

    def to_dataframe(self):
        rows = []
        for o in self.outcomes:
            for i, (center, rule, model, agree) in enumerate(zip(o.steps, o.rule, o.model, o.agree)):
                rows.append({'seed': o.seed, 'depth': i + 1, 'center': center, 'rule': rule,
                             'model': model, 'agree': agree})
        return pd.DataFrame(rows, columns=['seed', 'depth', 'center', 'rule', 'model', 'agree'])


def _pick_center(m, d, rng):
    """Centre biased towards minimal sections, the inverse base point and other found sections."""
    E = m.base
    p = E.modulus
    search = minimal_section_search(m)
    kind = int(rng.integers(4))
    if kind == 0 and search.minimal_sections:
        sigma = search.minimal_sections[int(rng.integers(len(search.minimal_sections)))]
        z = random_point(E, rng)
        return z, fiber_point(m, sigma, z)
    if kind == 1 and m.inverse_base_point is not None:
        return m.inverse_base_point
    if kind == 2:
        values = sorted(set(s for _, s in search.records))
        others = search.sections_with(values[1]) if len(values) > 1 else []
        if others:
            sigma = others[int(rng.integers(len(others)))]
            z = random_point(E, rng)
            return z, fiber_point(m, sigma, z)
    if kind == 3 and m.special_points:
        z = m.special_points[int(rng.integers(len(m.special_points)))]
    else:
        z = random_point(E, rng)
    c = int(rng.integers(p + 1))
    return z, (0, 1) if c == p else (1, c)


def run_scenario(E, seed, depth=None):
    """
    Random elm sequence from C x P1, each step pushed through both the descriptor rules
    and the bundle model.
    """
    if depth is None:
        depth = default_arguments['crosscheck_depth']
    rng = np.random.default_rng(seed)
    m = trivial_model(E)
    d = TrivialBundle(E)
    outcome = ScenarioOutcome(seed, [], [], [], [])
    for _ in range(int(rng.integers(1, depth + 1))):
        z, point = _pick_center(m, d, rng)
        center = ElmPoint(z, Location.ModelCoordinates, point, m)
        try:
            rule = elm_descriptor(d, center)
        except InconsistentCenter:
            break
        m = elm_model(m, z, point, seed=seed)
        found = descriptor_of_model(m)
        if isinstance(rule, Known):
            agree = None if isinstance(found, Undetermined) else rule.descriptor == found
        elif isinstance(rule, PartiallyKnown):
            agree = (not isinstance(found, Undetermined) and segre(found) == rule.segre
                     and (rule.decomposable is not True or isinstance(found, (Decomposable, TrivialBundle))))
        else:
            agree = None
        outcome.steps.append(str(center))
        outcome.rule.append(str(rule))
        outcome.model.append(str(found))
        outcome.agree.append(agree)
        if isinstance(found, Undetermined):
            break
        d = found
    return outcome


def crosscheck_elm(E, seed=None, scenarios=None, depth=None, workers=None, suppress_output=None):
    """
    Runs seeded scenarios concurrently and merges them in seed order.

    Returns
    -------
    CrosscheckReport
    """
    if seed is None:
        seed = default_arguments['seed']
    if scenarios is None:
        scenarios = default_arguments['scenarios']
    if depth is None:
        depth = default_arguments['crosscheck_depth']
    if workers is None:
        workers = default_arguments['workers']
    if suppress_output is None:
        suppress_output = default_arguments['suppress_output']
    if depth > default_arguments['max_elm_depth']:
        raise ValueError('crosscheck depth {} exceeds the certified elm depth'.format(depth))
    seeds = [int(seed) * 100003 + i for i in range(scenarios)]
    outcomes = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        for i, outcome in enumerate(executor.map(lambda s: run_scenario(E, s, depth), seeds)):
            outcomes.append(outcome)
            if not suppress_output:
                print('\r' + 'Scenarios checked: ' + str(i + 1) + '/' + str(scenarios), sep='', end='', flush=True, file=sys.stderr)
    if not suppress_output:
        print('', file=sys.stderr)
    return CrosscheckReport(sorted(outcomes, key=lambda o: o.seed))

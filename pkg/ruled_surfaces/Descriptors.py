from dataclasses import dataclass
from enum import Enum

from .BundleModel import (default_arguments, det_divisor, line_subbundle_divisor, minimal_section_search)
from .elliptic import (EllipticCurve, DivisorClass, class_of, curve_automorphisms, negate_class, negate_point,
                       scalar_mul, subtract_points)
from .errors import BaseMismatch, BudgetExceeded, NotMaximalClass, RuledSurfaceError

__all__ = [
    'MinimalSectionCount',
    'TrivialBundle',
    'Decomposable',
    'Atiyah0',
    'Atiyah1',
    'Hirzebruch',
    'GenusAtLeastTwoTrivial',
    'Undetermined',
    'ConjugacyVerdict',
    'canonicalize',
    'make_decomposable',
    'segre',
    'minimal_section_count',
    'is_isomorphic',
    'is_maximal_class',
    'is_conjugate_aut',
    'descriptor_of_model',
    'describe_model',
    'descriptor_to_record',
]


class MinimalSectionCount(Enum):
    One = 'one'
    ExactlyTwo = 'exactly two'
    InfinitelyMany = 'infinitely many'
    Undetermined = 'undetermined'


@dataclass(frozen=True)
class TrivialBundle:
    """C x P1"""
    curve: EllipticCurve

    def __str__(self):
        return 'T'


@dataclass(frozen=True)
class Decomposable:
    """
    P(O + M) with M canonical: deg M >= 0, M nontrivial, and for deg M = 0 the point of M
    is the smaller of s and -s. Build it with make_decomposable.
    """
    curve: EllipticCurve
    M: DivisorClass

    def __post_init__(self):
        if self.M.is_trivial:
            raise RuledSurfaceError('P(O + O) is the trivial bundle, use make_decomposable')
        if canonicalize(self.curve, self.M) != self.M:
            raise RuledSurfaceError('{} is not a canonical class'.format(self.M))

    @property
    def degree(self):
        return self.M.degree

    @property
    def point(self):
        return self.M.point

    def __str__(self):
        return 'D({}; s={})'.format(self.M.degree, self.M.point)


@dataclass(frozen=True)
class Atiyah0:
    """Indecomposable, Segre invariant 0."""
    curve: EllipticCurve

    def __str__(self):
        return 'A0'


@dataclass(frozen=True)
class Atiyah1:
    """Indecomposable, Segre invariant 1."""
    curve: EllipticCurve

    def __str__(self):
        return 'A1'


@dataclass(frozen=True)
class Hirzebruch:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise RuledSurfaceError('Hirzebruch index must be non-negative, got {}'.format(self.n))

    def __str__(self):
        return 'F{}'.format(self.n)


@dataclass(frozen=True)
class GenusAtLeastTwoTrivial:
    """C x P1 for a base curve of genus at least two, known only by a tag."""
    genus_tag: str

    def __str__(self):
        return 'G({})'.format(self.genus_tag)


@dataclass(frozen=True)
class Undetermined:
    """No descriptor can be asserted; reason says which rule or certificate is missing."""
    reason: str

    def __str__(self):
        return 'Undetermined: {}'.format(self.reason)


@dataclass(frozen=True)
class ConjugacyVerdict:
    conjugate: bool
    non_maximal: bool = False

    def __bool__(self):
        return self.conjugate


_ELLIPTIC = (TrivialBundle, Decomposable, Atiyah0, Atiyah1)


def canonicalize(E, M):
    """
    Canonical representative of {M, -M}: non-negative degree, and in degree 0 the class
    whose point comes first in the point order.
    """
    if M.degree < 0:
        return negate_class(E, M)
    if M.degree > 0:
        return M
    return min(M, negate_class(E, M), key=lambda c: c.point.sort_key)


def make_decomposable(E, M):
    M = canonicalize(E, M)
    if M.is_trivial:
        return TrivialBundle(E)
    return Decomposable(E, M)


def segre(d):
    if isinstance(d, (TrivialBundle, Atiyah0, GenusAtLeastTwoTrivial)):
        return 0
    if isinstance(d, Decomposable):
        return -d.degree
    if isinstance(d, Atiyah1):
        return 1
    if isinstance(d, Hirzebruch):
        return -d.n
    raise RuledSurfaceError('no Segre invariant for {}'.format(d))


def minimal_section_count(d):
    if isinstance(d, (TrivialBundle, GenusAtLeastTwoTrivial)):
        return MinimalSectionCount.InfinitelyMany
    if isinstance(d, Hirzebruch):
        return MinimalSectionCount.One if d.n > 0 else MinimalSectionCount.InfinitelyMany
    if isinstance(d, Decomposable):
        return MinimalSectionCount.One if d.degree > 0 else MinimalSectionCount.ExactlyTwo
    if isinstance(d, Atiyah0):
        return MinimalSectionCount.One
    return MinimalSectionCount.Undetermined


def _check_bases(d1, d2):
    for d in (d1, d2):
        if isinstance(d, Undetermined):
            raise RuledSurfaceError('cannot compare an undetermined descriptor')
    if isinstance(d1, _ELLIPTIC) and isinstance(d2, _ELLIPTIC) and d1.curve != d2.curve:
        raise BaseMismatch('descriptors over {} and {}'.format(d1.curve, d2.curve))


def _decomposable_isomorphic(E, M1, M2):
    if M1.degree != M2.degree:
        return False
    d = M1.degree
    for alpha in curve_automorphisms(E):
        image = alpha(M1.point)
        if d == 0:
            if image in (M2.point, negate_point(E, M2.point)):
                return True
            continue
        for T in E.points:
            if subtract_points(E, image, scalar_mul(E, d, T)) == M2.point:
                return True
    return False


def is_isomorphic(d1, d2, over_base=False):
    """
    Abstract isomorphism of the ruled surfaces described by d1 and d2.

    Parameters
    ----------
    over_base : bool
        decide isomorphism over the identity of the base curve instead, i.e. equality of the
        canonical classes

    Raises
    ------
    BaseMismatch: elliptic descriptors over different curves
    """
    _check_bases(d1, d2)
    if type(d1) is not type(d2):
        return False
    if isinstance(d1, Decomposable):
        if over_base:
            return d1.M == d2.M
        return _decomposable_isomorphic(d1.curve, d1.M, d2.M)
    if isinstance(d1, Hirzebruch):
        return d1.n == d2.n
    if isinstance(d1, GenusAtLeastTwoTrivial):
        return d1.genus_tag == d2.genus_tag
    return True


def is_maximal_class(d):
    """Whether Aut of the surface is a maximal connected algebraic group."""
    if isinstance(d, (TrivialBundle, Atiyah0, Atiyah1, GenusAtLeastTwoTrivial)):
        return True
    if isinstance(d, Decomposable):
        return d.degree == 0
    if isinstance(d, Hirzebruch):
        return d.n != 1
    return False


def is_conjugate_aut(d1, d2):
    """
    Conjugacy of the connected automorphism groups inside the birational group. On the
    maximal classes this is isomorphism of the surfaces; otherwise the isomorphism answer
    is returned with non_maximal set.
    """
    for d in (d1, d2):
        if isinstance(d, Undetermined):
            raise NotMaximalClass('cannot decide conjugacy for an undetermined descriptor')
    return ConjugacyVerdict(is_isomorphic(d1, d2),
                            non_maximal=not (is_maximal_class(d1) and is_maximal_class(d2)))


def describe_model(m, degree_bound=None, budget=None, max_elm_depth=None):
    """
    Descriptor of a bundle model from its certified minimal-section search.

    Returns
    -------
    (descriptor, search): the descriptor (or Undetermined) and the SegreSearchResult
    """
    if max_elm_depth is None:
        max_elm_depth = default_arguments['max_elm_depth']
    if m.elm_depth is None or m.elm_depth > max_elm_depth:
        raise BudgetExceeded('model of elm depth {} is beyond the certified depth {}'.format(m.elm_depth, max_elm_depth))
    E = m.base
    search = minimal_section_search(m, degree_bound=degree_bound, budget=budget)
    if not search.exact:
        return Undetermined('minimal-section search not certified at degree bound {}'.format(
            degree_bound or default_arguments['degree_bound'])), search
    value = search.segre
    if value < 0:
        D = line_subbundle_divisor(m, search.minimal_sections[0]) * 2 - det_divisor(m)
        return make_decomposable(E, class_of(E, D)), search
    if value == 0:
        if not search.count_exact:
            return Undetermined('number of minimal sections not certified'), search
        count = len(search.minimal_sections)
        if count >= 3:
            return TrivialBundle(E), search
        if count == 2:
            first, second = search.minimal_sections
            D = line_subbundle_divisor(m, first) - line_subbundle_divisor(m, second)
            return make_decomposable(E, class_of(E, D)), search
        return Atiyah0(E), search
    if value == 1:
        return Atiyah1(E), search
    return Undetermined('Segre invariant {} exceeds the genus'.format(value)), search


def descriptor_of_model(m, degree_bound=None, budget=None, max_elm_depth=None):
    return describe_model(m, degree_bound=degree_bound, budget=budget, max_elm_depth=max_elm_depth)[0]


def descriptor_to_record(d):
    record = {'descriptor': str(d), 'tag': type(d).__name__}
    if isinstance(d, Decomposable):
        record.update(degree=d.degree, point=str(d.point))
    if isinstance(d, Undetermined):
        record['reason'] = d.reason
    else:
        record['segre'] = segre(d)
        record['minimal_sections'] = minimal_section_count(d).value
    return record

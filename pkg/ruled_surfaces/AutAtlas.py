import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .BundleModel import (GaugeTransformation, TransitionMatrix, default_arguments, elm_model, refine, trivial_model)
from .Descriptors import (Atiyah0, Atiyah1, Decomposable, GenusAtLeastTwoTrivial, Hirzebruch, TrivialBundle,
                          Undetermined, descriptor_of_model, is_maximal_class)
from .TransformEngine import chain_theorem_A
from .elliptic import (INFINITY, Divisor, add_points, function_with_divisor, negate_point, random_point, two_torsion)
from .errors import CharTwoOutOfScope, IncompleteTorsion, NotMaximalClass, RuledSurfaceError

__all__ = [
    'AutKernel',
    'Quotient',
    'Splits',
    'AutDescription',
    'SurfaceTag',
    'SurfaceClass',
    'DeltaKernelReport',
    'MaximalityCertificate',
    'DELTA_MATRICES',
    'aut_of_bundle',
    'classify_theorem_D',
    'ContainmentVerdict',
    'contained_in_maximal',
    'delta_kernel_check',
    'delta_centralizer_search',
    'maximality_certificate',
]


class AutKernel(Enum):
    Gm = 'Gm'
    Ga = 'Ga'
    TwoTorsionKlein = 'C[2]'
    TrivialGroup = '1'
    FullPGL2 = 'PGL2'
    ProductCxPGL2 = 'C x PGL2'
    PGL3 = 'PGL3'
    WholeAbelianSurface = 'X'
    EllipticCurveGroup = 'C'
    NotDescribed = '-'

    @property
    def dimension(self):
        return KERNEL_DIMENSIONS[self]


KERNEL_DIMENSIONS = {
    AutKernel.Gm: 1,
    AutKernel.Ga: 1,
    AutKernel.TwoTorsionKlein: 0,
    AutKernel.TrivialGroup: 0,
    AutKernel.FullPGL2: 3,
    AutKernel.ProductCxPGL2: 3,
    AutKernel.PGL3: 8,
    AutKernel.WholeAbelianSurface: 2,
    AutKernel.EllipticCurveGroup: 1,
    AutKernel.NotDescribed: 0,
}


class Quotient(Enum):
    EllipticCurve = 1
    Point = 0

    @property
    def dimension(self):
        return self.value


class Splits(Enum):
    Yes = 'yes'
    No = 'no'
    NotApplicable = 'n/a'


@dataclass
class AutDescription:
    """
    Connected automorphism group of a surface, as an extension kernel -> Aut -> quotient.

    dimension is None when the group is only known to sit inside a maximal one.
    """
    dimension: int
    kernel: AutKernel
    quotient: Quotient
    commutative: bool
    splits: Splits
    maximal: bool
    chain_witness: object = None
    justification: list = field(default_factory=list)

    @property
    def extension_shaped(self):
        return self.quotient is Quotient.EllipticCurve and self.kernel is not AutKernel.NotDescribed

    def dimension_consistent(self):
        if not self.extension_shaped:
            return True
        return self.dimension == self.kernel.dimension + self.quotient.dimension

    def to_record(self):
        record = {
            'dimension': self.dimension,
            'kernel': self.kernel.name,
            'quotient': self.quotient.name,
            'commutative': self.commutative,
            'splits': self.splits.value,
            'maximal': self.maximal,
            'justification': list(self.justification),
        }
        if self.chain_witness is not None:
            record['chain_witness'] = self.chain_witness.to_records()
        return record


class SurfaceTag(Enum):
    RationalMinimal = 'rational minimal'
    RationalNonMinimal = 'rational non-minimal'
    RuledElliptic = 'ruled over an elliptic curve'
    RuledHigherGenus = 'ruled over a curve of genus >= 2'
    Abelian = 'abelian'
    BlownUpAbelian = 'birational to abelian, not abelian'
    K3 = 'K3'
    Enriques = 'Enriques'
    BiellipticWithP1Quotient = 'bielliptic'
    BlownUpBielliptic = 'birational to bielliptic, not bielliptic'
    QuotientProperlyElliptic = 'properly elliptic (C x Y)/F'
    ProperlyEllipticOther = 'properly elliptic, other'
    GeneralType = 'general type'


@dataclass(frozen=True)
class SurfaceClass:
    """
    Birational class representative by tag.

    hirzebruch: None for P2, n for F_n (RationalMinimal); descriptor (RuledElliptic);
    trivial (RuledHigherGenus); in_E, whether X itself is a quotient (C x Y)/F
    (QuotientProperlyElliptic).
    """
    tag: SurfaceTag
    hirzebruch: int = None
    descriptor: object = None
    trivial: bool = True
    in_E: bool = True


def aut_of_bundle(d, steps=None, seed=None, delta_detail=False):
    """
    Connected automorphism group of the ruled surface described by d.

    Parameters
    ----------
    d : descriptor
    steps : int
        length of the chain witnessing non-maximality of decomposable surfaces of positive degree
    delta_detail : bool
        require the two-torsion data of the base for A1

    Returns
    -------
    AutDescription
    """
    if isinstance(d, TrivialBundle):
        return AutDescription(4, AutKernel.ProductCxPGL2, Quotient.EllipticCurve, False, Splits.Yes, True,
                              justification=['C x P1: Aut is C x PGL2, translations act on the base transitively'])
    if isinstance(d, Decomposable) and d.degree == 0:
        return AutDescription(2, AutKernel.Gm, Quotient.EllipticCurve, True, Splits.No, True,
                              justification=['0 -> Gm -> Aut -> C -> 0, extension class {} is nontrivial'.format(d.point),
                                             'Aut is commutative; maximal among connected subgroups'])
    if isinstance(d, Atiyah0):
        return AutDescription(2, AutKernel.Ga, Quotient.EllipticCurve, True, Splits.No, True,
                              justification=['0 -> Ga -> Aut -> C -> 0, not a semidirect product',
                                             'Aut is commutative; maximal among connected subgroups'])
    if isinstance(d, Atiyah1):
        if delta_detail and not two_torsion(d.curve).complete:
            raise CharTwoOutOfScope('two-torsion of {} is not rational; the kernel cannot be exhibited'.format(d.curve))
        return AutDescription(1, AutKernel.TwoTorsionKlein, Quotient.EllipticCurve, True, Splits.No, True,
                              justification=['0 -> C[2] -> Aut -> C -> 0 in odd characteristic',
                                             'maximal among connected subgroups'])
    if isinstance(d, Decomposable):
        witness = chain_theorem_A(d.curve, d, n=steps, seed=seed)
        return AutDescription(d.degree + 1, AutKernel.NotDescribed, Quotient.Point, False, Splits.NotApplicable, False,
                              chain_witness=witness,
                              justification=['Gm and the unipotent f_gamma from H0(M) act fibrewise',
                                             'elementary transformations along the minimal section give a strictly '
                                             'increasing chain of conjugate groups, so Aut is not maximal'])
    if isinstance(d, Hirzebruch):
        dimension = 6 if d.n == 0 else d.n + 5
        return AutDescription(dimension, AutKernel.NotDescribed, Quotient.Point, False, Splits.NotApplicable, d.n != 1,
                              justification=['F{}: maximal if and only if n != 1'.format(d.n)])
    if isinstance(d, GenusAtLeastTwoTrivial):
        return AutDescription(3, AutKernel.FullPGL2, Quotient.Point, False, Splits.NotApplicable, True,
                              justification=['C x P1 over genus >= 2: Aut is PGL2, maximal'])
    raise RuledSurfaceError('no automorphism data for {}'.format(d))


def _trivial(maximal, why):
    return AutDescription(0, AutKernel.TrivialGroup, Quotient.Point, True, Splits.NotApplicable, maximal,
                          justification=[why])


def classify_theorem_D(c, steps=None, seed=None):
    """Verdict on Aut(X) for a surface X given by its birational-class tag."""
    tag = c.tag
    if tag is SurfaceTag.RationalMinimal:
        if c.hirzebruch is None:
            return AutDescription(8, AutKernel.PGL3, Quotient.Point, False, Splits.NotApplicable, True,
                                  justification=['P2: Aut is PGL3, maximal'])
        return aut_of_bundle(Hirzebruch(c.hirzebruch))
    if tag is SurfaceTag.RationalNonMinimal:
        return AutDescription(None, AutKernel.NotDescribed, Quotient.Point, False, Splits.NotApplicable, False,
                              justification=['conjugate to an algebraic subgroup of Aut(P2) or Aut(F_n)'])
    if tag is SurfaceTag.RuledElliptic:
        return aut_of_bundle(c.descriptor, steps=steps, seed=seed)
    if tag is SurfaceTag.RuledHigherGenus:
        if c.trivial:
            return aut_of_bundle(GenusAtLeastTwoTrivial('g>=2'))
        return AutDescription(None, AutKernel.NotDescribed, Quotient.Point, False, Splits.NotApplicable, False,
                              justification=['non-trivial ruled surface over genus >= 2 fits into an infinite '
                                             'chain of strict inclusions'])
    if tag is SurfaceTag.Abelian:
        return AutDescription(2, AutKernel.WholeAbelianSurface, Quotient.Point, True, Splits.NotApplicable, True,
                              justification=['Aut is X itself, maximal'])
    if tag is SurfaceTag.BlownUpAbelian:
        return _trivial(False, 'trivial, conjugate to the trivial subgroup of an abelian surface')
    if tag in (SurfaceTag.K3, SurfaceTag.Enriques, SurfaceTag.GeneralType, SurfaceTag.ProperlyEllipticOther):
        return _trivial(True, 'trivial for every birational model, hence maximal')
    if tag is SurfaceTag.BiellipticWithP1Quotient:
        return AutDescription(1, AutKernel.EllipticCurveGroup, Quotient.Point, True, Splits.NotApplicable, True,
                              justification=['Aut is the elliptic curve C of (C x Y)/F, maximal'])
    if tag is SurfaceTag.BlownUpBielliptic:
        return _trivial(False, 'trivial, conjugate to the trivial subgroup of a bielliptic surface')
    if tag is SurfaceTag.QuotientProperlyElliptic:
        if c.in_E:
            return AutDescription(1, AutKernel.EllipticCurveGroup, Quotient.Point, True, Splits.NotApplicable, True,
                                  justification=['Aut is the elliptic curve C of (C x Y)/F, maximal'])
        return _trivial(False, 'birational to (C x Y)/F without being one: trivial, not maximal')
    raise RuledSurfaceError('unknown surface class {}'.format(tag))


@dataclass(frozen=True)
class ContainmentVerdict:
    """Whether every connected algebraic subgroup of Bir(X) lies in a maximal one."""
    contained: bool
    maximal_groups: str
    justification: list = field(default_factory=list)

    def __bool__(self):
        return self.contained

    def to_record(self):
        return {'contained': self.contained, 'maximal_groups': self.maximal_groups,
                'justification': list(self.justification)}


_RULED_IRRATIONAL = (SurfaceTag.RuledElliptic, SurfaceTag.RuledHigherGenus)
_RATIONAL = (SurfaceTag.RationalMinimal, SurfaceTag.RationalNonMinimal)


def contained_in_maximal(c):
    """
    Every connected algebraic subgroup of Bir(X) is contained in a maximal one exactly when
    X is not birational to C x P1 with C of genus >= 1.

    Returns
    -------
    ContainmentVerdict
    """
    tag = c.tag
    if not isinstance(tag, SurfaceTag):
        raise RuledSurfaceError('unknown surface class {}'.format(tag))
    if tag in _RULED_IRRATIONAL:
        return ContainmentVerdict(False, '-', ['birational to C x P1 with C of genus >= 1',
                                                 'elementary transformations along minimal sections give '
                                                 'a strictly increasing chain of connected subgroups'])
    if tag in _RATIONAL:
        return ContainmentVerdict(True, 'Aut(P2), Aut(F_n) for n != 1',
                                  ['every connected algebraic subgroup is conjugate into Aut(P2) or some Aut(F_n), n != 1'])
    return ContainmentVerdict(True, 'Aut(X) of a minimal model',
                              ['X is neither ruled nor rational: Aut of X is contained in a maximal connected '
                               'algebraic subgroup'])


DELTA_MATRICES = (
    ((1, 0), (0, 1)),
    ((-1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((0, -1), (1, 0)),
)


def _proportional(a, b, p):
    """Projective equality of 2x2 integer matrices mod p."""
    a, b = a.reshape(-1) % p, b.reshape(-1) % p
    return bool(np.all((np.outer(a, b) - np.outer(b, a)) % p == 0))


def _index_of(mat, group, p):
    for j, g in enumerate(group):
        if _proportional(mat, g, p):
            return j
    return None


def _projective_inverse(mat, p):
    """Adjugate, which is proportional to the inverse."""
    return np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]], dtype=np.int64) % p


@dataclass
class DeltaKernelReport:
    modulus: int
    table: list
    squares_identity: bool
    closed: bool
    noncyclic: bool
    normalizes: bool
    conjugation: list
    homomorphism: bool
    two_torsion: list

    @property
    def passed(self):
        return self.squares_identity and self.closed and self.noncyclic and self.normalizes and self.homomorphism

    def to_record(self):
        return {
            'modulus': self.modulus,
            'table': self.table,
            'squares_identity': self.squares_identity,
            'closed': self.closed,
            'noncyclic': self.noncyclic,
            'normalizes': self.normalizes,
            'conjugation': self.conjugation,
            'homomorphism': self.homomorphism,
            'two_torsion': self.two_torsion,
            'passed': self.passed,
        }


def delta_kernel_check(E):
    """
    Checks over F_p that the four fibre matrices form a Klein four-group in PGL2, that
    conjugation by each of them preserves every d_i up to sign, and that d_i -> i-th
    two-torsion point is a group isomorphism.

    Raises
    ------
    IncompleteTorsion: fewer than four rational two-torsion points
    """
    torsion = two_torsion(E)
    if not torsion.complete:
        raise IncompleteTorsion('{} has {} rational two-torsion points'.format(E, len(torsion)))
    p = E.modulus
    group = [np.array(m, dtype=np.int64) % p for m in DELTA_MATRICES]
    identity = group[0]
    table = [[_index_of(a @ b % p, group, p) for b in group] for a in group]
    closed = all(j is not None for row in table for j in row)
    squares_identity = all(_proportional(a @ a % p, identity, p) for a in group)
    noncyclic = closed and squares_identity
    conjugation = []
    normalizes = True
    for i, m in enumerate(group):
        row = []
        inverse = _projective_inverse(m, p)
        for j, d in enumerate(group):
            image = m @ d @ inverse % p
            k = _index_of(image, group, p)
            row.append(k)
            if k != j:
                normalizes = False
        conjugation.append(row)
    points = list(torsion)
    homomorphism = closed and all(points[table[i][j]] == add_points(E, points[i], points[j])
                                  for i in range(4) for j in range(4))
    return DeltaKernelReport(p, table, squares_identity, closed, noncyclic, normalizes, conjugation,
                             homomorphism, [str(P) for P in points])


def delta_centralizer_search(p):
    """
    Every class in PGL2(F_p) that commutes projectively with all four fibre matrices.

    Returns
    -------
    list of 2x2 numpy arrays, normalized with first nonzero entry 1
    """
    group = [np.array(m, dtype=np.int64) % p for m in DELTA_MATRICES]
    found = []
    candidates = itertools.chain(
        (((1, b), (c, d)) for b in range(p) for c in range(p) for d in range(p)),
        (((0, 1), (c, d)) for c in range(p) for d in range(p)),
    )
    for rows in candidates:
        m = np.array(rows, dtype=np.int64)
        if (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % p == 0:
            continue
        if all(_proportional(m @ d % p, d @ m % p, p) for d in group):
            found.append(m)
    return found


@dataclass
class MaximalityCertificate:
    descriptor: object
    facts: list
    translation: dict = None
    verified: bool = True

    def to_record(self):
        return {'descriptor': str(self.descriptor), 'facts': list(self.facts),
                'translation': self.translation, 'verified': self.verified}


def _translation_lift(d, seed=None):
    """
    Models of S_{z1,z2} and S_{t(z1),t(z2)} by two elementary transformations each, and
    the chart isomorphism diag(f, 1) between them, div f = z1 + t(z2) - t(z1) - z2.
    """
    E = d.curve
    rng = np.random.default_rng(default_arguments['seed'] if seed is None else seed)
    z1 = random_point(E, rng)
    z2 = add_points(E, z1, d.point)
    blocked = (INFINITY, d.point, negate_point(E, d.point))
    t = random_point(E, rng, exclude=blocked)
    tz1, tz2 = add_points(E, z1, t), add_points(E, z2, t)
    points = [z1, z2, tz1, tz2]

    def model(a, b):
        m = elm_model(trivial_model(E), a, (1, 0), seed=seed)
        return refine(elm_model(m, b, (0, 1), seed=seed), points)

    source, target = model(z1, z2), model(tz1, tz2)
    f = function_with_divisor(E, Divisor.point(z1) + Divisor.point(tz2) - Divisor.point(tz1) - Divisor.point(z2))
    chart0 = TransitionMatrix.diagonal(E, f, 1)
    local = {z: target.transition(z) @ chart0 @ source.transition(z).inverse() for z in points}
    gauge = GaugeTransformation(chart0, local)
    isomorphism = gauge.check(source)
    same = descriptor_of_model(source) == descriptor_of_model(target) == d
    record = {
        'z1': str(z1), 'z2': str(z2), 't': str(t),
        'f': str(f),
        'local_isomorphism': isomorphism,
        'descriptors_match': same,
    }
    return record, isomorphism and same


def maximality_certificate(d, seed=None):
    """
    Evidence that Aut(S) acts without fixed points: surjectivity onto the translations of
    the base, and for S_{z1,z2} an explicit lift of a sample translation.

    Raises
    ------
    NotMaximalClass: d is not one of the maximal classes
    """
    if isinstance(d, Undetermined) or not is_maximal_class(d) or isinstance(d, (Hirzebruch, GenusAtLeastTwoTrivial)):
        raise NotMaximalClass('{} is not a maximal class over an elliptic curve'.format(d))
    if isinstance(d, TrivialBundle):
        return MaximalityCertificate(d, ['translations of C lift to C x P1 as t x id',
                                         'Aut -> Aut(C) is surjective'])
    if isinstance(d, (Atiyah0, Atiyah1)):
        return MaximalityCertificate(d, ['Aut -> Aut(C) is surjective (structural fact, no model-level lift)'])
    record, verified = _translation_lift(d, seed=seed)
    return MaximalityCertificate(d, ['Aut -> Aut(C) is surjective',
                                     'sample translation lifted by an explicit chart isomorphism'],
                                 translation=record, verified=verified)

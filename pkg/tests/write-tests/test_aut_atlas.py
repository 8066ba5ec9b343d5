import numpy as np
import pytest
from ruled_surfaces.elliptic import *
from ruled_surfaces.Descriptors import *
from ruled_surfaces.AutAtlas import *
from ruled_surfaces.errors import CharTwoOutOfScope, IncompleteTorsion, NotMaximalClass, RuledSurfaceError

E = EllipticCurve(10, 0, 11)
s = CurvePoint(6, 1)


def test_maximal_bundles():
    aut = aut_of_bundle(TrivialBundle(E))
    assert((aut.dimension, aut.kernel, aut.maximal) == (4, AutKernel.ProductCxPGL2, True))
    aut = aut_of_bundle(make_decomposable(E, DivisorClass(0, s)))
    assert((aut.dimension, aut.kernel, aut.commutative, aut.splits) == (2, AutKernel.Gm, True, Splits.No))
    aut = aut_of_bundle(Atiyah0(E))
    assert((aut.dimension, aut.kernel, aut.splits) == (2, AutKernel.Ga, Splits.No))
    aut = aut_of_bundle(Atiyah1(E), delta_detail=True)
    assert((aut.dimension, aut.kernel, aut.quotient) == (1, AutKernel.TwoTorsionKlein, Quotient.EllipticCurve))
    for d in (TrivialBundle(E), Atiyah0(E), Atiyah1(E), make_decomposable(E, DivisorClass(0, s))):
        aut = aut_of_bundle(d)
        assert(aut.extension_shaped and aut.dimension_consistent())
        assert(aut.justification)


# positive degree: not maximal, witnessed by a chain of elementary transformations
def test_non_maximal_bundles():
    aut = aut_of_bundle(Decomposable(E, DivisorClass(2, s)), steps=4, seed=1)
    assert(not aut.maximal and aut.dimension == 3 and aut.quotient is Quotient.Point)
    assert(aut.chain_witness.segre_sequence == [-2, -3, -4, -5, -6])
    record = aut.to_record()
    assert(record['kernel'] == 'NotDescribed' and len(record['chain_witness']['steps']) == 4)
    assert(aut_of_bundle(Hirzebruch(1)).maximal is False)
    assert(aut_of_bundle(Hirzebruch(0)).dimension == 6)


def test_classification():
    tags = SurfaceTag
    cases = [
        (SurfaceClass(tags.RationalMinimal), (True, AutKernel.PGL3, 8)),
        (SurfaceClass(tags.RationalMinimal, hirzebruch=3), (True, AutKernel.NotDescribed, 8)),
        (SurfaceClass(tags.RationalNonMinimal), (False, AutKernel.NotDescribed, None)),
        (SurfaceClass(tags.RuledElliptic, descriptor=Decomposable(E, DivisorClass(1, s))), (False, AutKernel.NotDescribed, 2)),
        (SurfaceClass(tags.RuledHigherGenus), (True, AutKernel.FullPGL2, 3)),
        (SurfaceClass(tags.RuledHigherGenus, trivial=False), (False, AutKernel.NotDescribed, None)),
        (SurfaceClass(tags.Abelian), (True, AutKernel.WholeAbelianSurface, 2)),
        (SurfaceClass(tags.BlownUpAbelian), (False, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.K3), (True, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.BiellipticWithP1Quotient), (True, AutKernel.EllipticCurveGroup, 1)),
        (SurfaceClass(tags.QuotientProperlyElliptic, in_E=False), (False, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.GeneralType), (True, AutKernel.TrivialGroup, 0)),
    ]
    for c, expected in cases:
        description = classify_theorem_D(c, steps=3)
        assert((description.maximal, description.kernel, description.dimension) == expected)



# only surfaces birational to C x P1 with C irrational escape the maximal subgroups
def test_contained_in_maximal():
    tags = SurfaceTag
    verdict = contained_in_maximal(SurfaceClass(tags.RuledElliptic, descriptor=TrivialBundle(E)))
    assert(not verdict and verdict.maximal_groups == '-')
    assert(not contained_in_maximal(SurfaceClass(tags.RuledHigherGenus)))
    assert(not contained_in_maximal(SurfaceClass(tags.RuledHigherGenus, trivial=False)))
    verdict = contained_in_maximal(SurfaceClass(tags.RationalMinimal, hirzebruch=2))
    assert(verdict.contained and 'Aut(P2)' in verdict.maximal_groups)
    assert(contained_in_maximal(SurfaceClass(tags.RationalNonMinimal)))
    for tag in (tags.K3, tags.GeneralType, tags.Abelian, tags.BlownUpAbelian):
        assert(contained_in_maximal(SurfaceClass(tag)).contained)
    record = contained_in_maximal(SurfaceClass(tags.K3)).to_record()
    assert(record['contained'] is True and record['justification'])
    with pytest.raises(RuledSurfaceError):
        contained_in_maximal(SurfaceClass('Enriques'))

def test_delta_kernel():
    report = delta_kernel_check(E)
    assert(report.passed)
    assert(report.table[1][2] == 3 and report.table[3][3] == 0)
    assert(len(report.two_torsion) == 4)
    assert(report.to_record()['passed'])
    with pytest.raises(IncompleteTorsion):
        delta_kernel_check(EllipticCurve(1, 0, 11))
    with pytest.raises(CharTwoOutOfScope):
        aut_of_bundle(Atiyah1(EllipticCurve(1, 0, 11)), delta_detail=True)


# the four fibre matrices are their own centralizer in PGL2(F_p)
def test_delta_centralizer():
    for p in (11, 13):
        found = delta_centralizer_search(p)
        assert(len(found) == 4)
        keys = sorted(tuple(int(v) for v in m.reshape(-1)) for m in found)
        assert(keys == sorted([(1, 0, 0, 1), (1, 0, 0, p - 1), (0, 1, 1, 0), (0, 1, p - 1, 0)]))
        assert(all(isinstance(m, np.ndarray) for m in found))


def test_maximality_certificate():
    certificate = maximality_certificate(make_decomposable(E, DivisorClass(0, s)), seed=2)
    assert(certificate.verified)
    assert(certificate.translation['local_isomorphism'] and certificate.translation['descriptors_match'])
    assert(maximality_certificate(TrivialBundle(E)).verified)
    assert(maximality_certificate(Atiyah1(E)).translation is None)
    with pytest.raises(NotMaximalClass):
        maximality_certificate(Decomposable(E, DivisorClass(1, s)))
    with pytest.raises(NotMaximalClass):
        maximality_certificate(Hirzebruch(0))


if __name__ == '__main__':
    test_maximal_bundles()
    test_non_maximal_bundles()
    test_classification()
    test_contained_in_maximal()
    test_delta_kernel()
    test_delta_centralizer()
    test_maximality_certificate()

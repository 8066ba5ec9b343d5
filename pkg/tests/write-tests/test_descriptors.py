import pytest
from ruled_surfaces.elliptic import *
from ruled_surfaces.BundleModel import BundleSection, elm_model, trivial_model
from ruled_surfaces.Descriptors import *
from ruled_surfaces.errors import BaseMismatch, BudgetExceeded, NotMaximalClass, RuledSurfaceError

E = EllipticCurve(10, 0, 11)
E13 = EllipticCurve(1, 0, 13)


def pt(a, b):
    return CurvePoint(a, b)


def test_segre_table():
    assert(segre(TrivialBundle(E)) == 0)
    assert(segre(Atiyah0(E)) == 0)
    assert(segre(Atiyah1(E)) == 1)
    assert(segre(Hirzebruch(3)) == -3)
    for P in E.points:
        assert(segre(Decomposable(E, DivisorClass(1, P))) == -1)
        assert(segre(Decomposable(E, DivisorClass(4, P))) == -4)
        if not P.is_infinity:
            assert(segre(make_decomposable(E, DivisorClass(0, P))) == 0)
    with pytest.raises(RuledSurfaceError):
        segre(Undetermined('no data'))


def test_minimal_section_counts():
    assert(minimal_section_count(TrivialBundle(E)) == MinimalSectionCount.InfinitelyMany)
    assert(minimal_section_count(Decomposable(E, DivisorClass(2, INFINITY))) == MinimalSectionCount.One)
    assert(minimal_section_count(make_decomposable(E, DivisorClass(0, pt(6, 1)))) == MinimalSectionCount.ExactlyTwo)
    assert(minimal_section_count(Atiyah0(E)) == MinimalSectionCount.One)
    assert(minimal_section_count(Atiyah1(E)) == MinimalSectionCount.Undetermined)
    assert(minimal_section_count(Hirzebruch(0)) == MinimalSectionCount.InfinitelyMany)


# {M, -M} describe the same surface; the canonical class has degree >= 0
def test_canonicalize():
    c = DivisorClass(-2, pt(6, 1))
    assert(canonicalize(E, c) == DivisorClass(2, pt(6, 10)))
    d0 = DivisorClass(0, pt(6, 10))
    assert(canonicalize(E, d0) == DivisorClass(0, pt(6, 1)))
    assert(canonicalize(E, canonicalize(E, d0)) == canonicalize(E, d0))
    assert(make_decomposable(E, DivisorClass(0, INFINITY)) == TrivialBundle(E))
    assert(make_decomposable(E, d0) == Decomposable(E, DivisorClass(0, pt(6, 1))))
    assert(str(make_decomposable(E, c)) == 'D(2; s=(6,10))')
    with pytest.raises(RuledSurfaceError):
        Decomposable(E, d0)
    with pytest.raises(RuledSurfaceError):
        Decomposable(E, DivisorClass(0, INFINITY))


def test_isomorphism():
    s = pt(6, 1)
    assert(is_isomorphic(make_decomposable(E, DivisorClass(0, s)), make_decomposable(E, DivisorClass(0, negate_point(E, s)))))
    assert(is_isomorphic(TrivialBundle(E), TrivialBundle(E)))
    assert(not is_isomorphic(TrivialBundle(E), Atiyah0(E)))
    assert(not is_isomorphic(Atiyah0(E), Atiyah1(E)))
    # translations of the base move s by [d]T
    assert(is_isomorphic(Decomposable(E, DivisorClass(1, s)), Decomposable(E, DivisorClass(1, INFINITY))))
    assert(not is_isomorphic(Decomposable(E, DivisorClass(1, s)), Decomposable(E, DivisorClass(1, INFINITY)), over_base=True))
    assert(not is_isomorphic(Decomposable(E, DivisorClass(1, s)), Decomposable(E, DivisorClass(2, s))))
    # (0,0) and (6,1) have different orders, so no automorphism relates them
    assert(not is_isomorphic(make_decomposable(E, DivisorClass(0, pt(0, 0))), make_decomposable(E, DivisorClass(0, s))))
    assert(is_isomorphic(Hirzebruch(2), Hirzebruch(2)) and not is_isomorphic(Hirzebruch(1), Hirzebruch(2)))
    with pytest.raises(BaseMismatch):
        is_isomorphic(TrivialBundle(E), TrivialBundle(E13))


# on y^2 = x^3 + x over F13 the automorphism (x, y) -> (-x, iy) relates more classes
def test_isomorphism_with_extra_automorphisms():
    automorphisms = [a for a in curve_automorphisms(E13) if not a.is_identity and not a.is_negation]
    P = next(Q for Q in E13.points if not Q.is_infinity and Q.x != 0)
    image = automorphisms[0](P)
    assert(image not in (P, negate_point(E13, P)))
    assert(is_isomorphic(make_decomposable(E13, DivisorClass(0, P)), make_decomposable(E13, DivisorClass(0, image))))


def test_conjugacy():
    s = pt(6, 1)
    verdict = is_conjugate_aut(make_decomposable(E, DivisorClass(0, s)), make_decomposable(E, DivisorClass(0, negate_point(E, s))))
    assert(verdict.conjugate and not verdict.non_maximal and bool(verdict))
    verdict = is_conjugate_aut(Decomposable(E, DivisorClass(1, s)), Decomposable(E, DivisorClass(1, INFINITY)))
    assert(verdict.conjugate and verdict.non_maximal)
    assert(is_maximal_class(Atiyah1(E)) and is_maximal_class(Hirzebruch(0)))
    assert(not is_maximal_class(Hirzebruch(1)) and not is_maximal_class(Decomposable(E, DivisorClass(1, s))))
    with pytest.raises(NotMaximalClass):
        is_conjugate_aut(Undetermined('x'), TrivialBundle(E))


def test_describe_model():
    z = pt(8, 3)
    assert(descriptor_of_model(trivial_model(E)) == TrivialBundle(E))
    m = elm_model(trivial_model(E), z, (1, 0), seed=2)
    found, search = describe_model(m)
    assert(found == Decomposable(E, DivisorClass(1, z)))
    assert(search.minimal_sections == (BundleSection.infinity(E),))
    # off the (-1)-section and off the inverse base point over the same fibre: A0
    m0 = elm_model(m, z, (1, 1), seed=2)
    assert(descriptor_of_model(m0) == Atiyah0(E))
    with pytest.raises(BudgetExceeded):
        describe_model(m, max_elm_depth=0)
    record = descriptor_to_record(found)
    assert(record['degree'] == 1 and record['segre'] == -1 and record['minimal_sections'] == 'one')


if __name__ == '__main__':
    test_segre_table()
    test_minimal_section_counts()
    test_canonicalize()
    test_isomorphism()
    test_isomorphism_with_extra_automorphisms()
    test_conjugacy()
    test_describe_model()

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .AutAtlas import (DELTA_MATRICES, AutKernel, SurfaceClass, SurfaceTag, _proportional, aut_of_bundle,
                       classify_theorem_D, contained_in_maximal, delta_centralizer_search, delta_kernel_check,
                       maximality_certificate)
from .BundleModel import (BundleSection, GaugeTransformation, TransitionMatrix, _self_intersection_fast,
                          default_arguments, elm_model, intersection_number, model_from_record, model_to_record,
                          refine, self_intersection, trivial_model)
from .Descriptors import (Atiyah0, Atiyah1, Decomposable, GenusAtLeastTwoTrivial, Hirzebruch, TrivialBundle,
                          canonicalize, describe_model, descriptor_of_model, is_isomorphic, make_decomposable,
                          segre)
from .TransformEngine import (ChainCertificate, ElmPoint, Known, Location, PartiallyKnown, build_atiyah,
                              chain_theorem_A, crosscheck_elm, elm_descriptor)
from .elliptic import (INFINITY, CurveFunction, Divisor, DivisorClass, EllipticCurve, add_points, class_of,
                       curve_automorphisms, divisor_of, function_with_divisor, h0, negate_class, random_point,
                       riemann_roch_basis)
from .errors import CharTwoOutOfScope, InconsistentCenter, IncompleteTorsion, RuledSurfaceError

__all__ = [
    'SUITES',
    'SuiteResult',
    'run_suite',
    'run_suites',
    'suites_to_dataframe',
]

# y^2 = x^3 - x over F11: 12 points, all two-torsion rational
DEFAULT_CURVE = EllipticCurve(10, 0, 11)
# y^2 = x^3 + x over F13: four automorphisms fixing O
AUTOMORPHISM_CURVE = EllipticCurve(1, 0, 13)
# y^2 = x^3 + x over F11: one rational two-torsion point besides O
INCOMPLETE_TORSION_CURVE = EllipticCurve(1, 0, 11)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return self.total > 0 and self.passed == self.total and not self.failures

    def check(self, condition, message):
        self.total += 1
        if condition:
            self.passed += 1
        else:
            self.failures.append(message)

    def to_record(self):
        return {'name': self.name, 'passed': self.passed, 'total': self.total,
                'failures': list(self.failures), 'ok': self.ok}


def _random_center(E, rng):
    p = E.modulus
    c = int(rng.integers(p + 1))
    return random_point(E, rng), (0, 1) if c == p else (1, c)


def _random_model(E, rng, seed, max_elms=3):
    m = trivial_model(E)
    for _ in range(int(rng.integers(0, max_elms + 1))):
        z, point = _random_center(E, rng)
        m = elm_model(m, z, point, seed=seed)
    return m


def _random_function(E, rng, max_pole_order=4):
    """Random element of L(k O), k <= max_pole_order."""
    k = int(rng.integers(2, max_pole_order + 1))
    g = CurveFunction.constant(E, int(rng.integers(E.modulus)))
    for f in riemann_roch_basis(E, Divisor.point(INFINITY, k)):
        g = g + f * int(rng.integers(E.modulus))
    return g


def _random_section(E, rng):
    if rng.integers(5) == 0:
        return BundleSection.infinity(E)
    return BundleSection.from_function(_random_function(E, rng))


def _random_class(E, rng, degrees=(-4, 4)):
    return DivisorClass(int(rng.integers(degrees[0], degrees[1] + 1)), random_point(E, rng))


def _divisor_in_class(E, c):
    """(d - 1) O + s, of degree d and sum s."""
    return Divisor.point(INFINITY, c.degree - 1) + Divisor.point(c.point)


def _segre_table(result, E, rng, seed, steps, budget):
    result.check(segre(TrivialBundle(E)) == 0, 'segre(T) != 0')
    result.check(segre(Atiyah0(E)) == 0, 'segre(A0) != 0')
    result.check(segre(Atiyah1(E)) == 1, 'segre(A1) != 1')
    for P in E.points:
        result.check(segre(Decomposable(E, DivisorClass(1, P))) == -1, 'segre(D(1; s={})) != -1'.format(P))
        if not P.is_infinity:
            result.check(segre(make_decomposable(E, DivisorClass(0, P))) == 0, 'segre(D(0; s={})) != 0'.format(P))
    result.check(descriptor_of_model(trivial_model(E), budget=budget) == TrivialBundle(E), 'trivial model is not T')
    for z in E.points[:3]:
        found = descriptor_of_model(elm_model(trivial_model(E), z, (1, 0), seed=seed), budget=budget)
        result.check(found == Decomposable(E, DivisorClass(1, z)), 'one elm over {} gave {}'.format(z, found))


def _self_intersection(result, E, rng, seed, steps, budget):
    m = trivial_model(E)
    for c in range(E.modulus):
        result.check(self_intersection(m, BundleSection.constant(E, c)) == 0, 'constant {} is not a 0-section'.format(c))
    result.check(self_intersection(m, BundleSection.infinity(E)) == 0, '[1:0] is not a 0-section')
    x, y = CurveFunction.x_coordinate(E), CurveFunction.y_coordinate(E)
    result.check(self_intersection(m, BundleSection.from_function(x)) == 4, 'x does not give 4')
    result.check(self_intersection(m, BundleSection.from_function(y)) == 6, 'y does not give 6')
    for i in range(100):
        m = _random_model(E, rng, seed)
        sigma = _random_section(E, rng)
        local, cocycle = self_intersection(m, sigma), _self_intersection_fast(m, sigma)
        result.check(local == cocycle, 'pair {}: {} on {} gives {} and {}'.format(i, sigma, m, local, cocycle))


def _chain(result, E, rng, seed, steps, budget):
    steps = steps or default_arguments['steps']
    z0 = random_point(E, rng)
    certificate = chain_theorem_A(E, Decomposable(E, DivisorClass(1, z0)), n=steps, seed=seed, realize_gamma=True)
    expected = list(range(-1, -steps - 2, -1))
    result.check(certificate.segre_sequence == expected,
                 'segre sequence {} != {}'.format(certificate.segre_sequence, expected))
    for row in certificate.steps:
        if row.L.degree >= 2:
            result.check(row.gamma_exists and row.h0_L - row.h0_L_minus_z == 1 and row.gamma is not None,
                         'step {}: no gamma for L={} at {}'.format(row.step, row.L, row.z))


def _construction(result, E, rng, seed, steps, budget):
    for z1 in sorted({random_point(E, rng) for _ in range(3)}):
        m, asserted = build_atiyah(E, 0, z1, seed=seed)
        found, search = describe_model(m, budget=budget)
        result.check(search.segre == 0 and len(search.minimal_sections) == 1 and found == asserted,
                     'variant 0 over {}: segre {}, {} minimal sections, {}'.format(
                         z1, search.segre, len(search.minimal_sections), found))
        m, asserted = build_atiyah(E, 1, z1, seed=seed)
        found, search = describe_model(m, budget=budget)
        result.check(search.segre == 1 and found == asserted,
                     'variant 1 over {}: segre {}, {}'.format(z1, search.segre, found))


def _crosscheck(result, E, rng, seed, steps, budget):
    report = crosscheck_elm(E, seed=seed, scenarios=steps or default_arguments['scenarios'], suppress_output=True)
    result.check(report.compared > 0, 'no Known branch was compared')
    for outcome in report.outcomes:
        for i, agree in enumerate(outcome.agree):
            if agree is not None:
                result.check(agree, 'seed {} step {}: {} at {} vs model {}'.format(
                    outcome.seed, i + 1, outcome.rule[i], outcome.steps[i], outcome.model[i]))


def _riemann_roch(result, E, rng, seed, steps, budget):
    for _ in range(100):
        c = _random_class(E, rng)
        result.check(h0(E, c) - h0(E, negate_class(E, c)) == c.degree, 'h0 - h1 != deg for {}'.format(c))
        if c.degree >= 1:
            D = _divisor_in_class(E, c)
            basis = riemann_roch_basis(E, D)
            result.check(len(basis) == h0(E, c) and all((divisor_of(E, f) + D).is_effective() for f in basis),
                         'basis of L({}) is wrong'.format(D))
    for s in E.points:
        result.check(h0(E, DivisorClass(2, s)) == 2, 'h0((2, {})) != 2'.format(s))


def _round_trip(result, E, rng, seed, steps, budget):
    from .cli import parse_center, parse_descriptor
    for _ in range(100):
        S = Divisor()
        for _ in range(int(rng.integers(1, 5))):
            S = S + Divisor.point(random_point(E, rng), int(rng.choice([-2, -1, 1, 2])))
        c = class_of(E, S)
        D = S - Divisor.point(c.point) + Divisor.point(INFINITY, 1 - c.degree)
        result.check(divisor_of(E, function_with_divisor(E, D)) == D, 'div(f_D) != D for D = {}'.format(D))
    for _ in range(20):
        m = _random_model(E, rng, seed)
        record = model_to_record(m)
        again = model_to_record(model_from_record(json.loads(json.dumps(record))))
        result.check(again == record, 'model record changed: {}'.format(m))
    for _ in range(20):
        d = make_decomposable(E, _random_class(E, rng))
        result.check(parse_descriptor(str(d), E) == d, 'descriptor {} does not re-parse'.format(d))
        z, _ = _random_center(E, rng)
        p = ElmPoint(z, list(Location)[int(rng.integers(4))])
        result.check(parse_center(str(p), E) == p, 'centre {} does not re-parse'.format(p))
    for d in (TrivialBundle(E), Atiyah0(E), Atiyah1(E), Hirzebruch(int(rng.integers(0, 6))), GenusAtLeastTwoTrivial('C2')):
        result.check(parse_descriptor(str(d), E) == d, 'descriptor {} does not re-parse'.format(d))
    for i in range(3):
        start = Decomposable(E, DivisorClass(1, random_point(E, rng)))
        records = chain_theorem_A(E, start, n=steps or 4, seed=seed + i, realize_gamma=True).to_records()
        again = ChainCertificate.from_records(json.loads(json.dumps(records)), E)
        result.check(again.to_records() == records, 'chain certificate from {} does not re-parse'.format(start))
        result.check(again.strictly_decreasing, 're-parsed chain from {} lost its segre sequence'.format(start))


def _brute_force_isomorphic(E, pair1, pair2):
    for alpha in curve_automorphisms(E):
        for t in E.points:
            image = {add_points(E, alpha(P), t) for P in pair1}
            if sorted(image) == sorted(set(pair2)):
                return True
    return False


def _pair_surface(E, pair):
    z1, z2 = pair
    return make_decomposable(E, class_of(E, Divisor.point(z1) - Divisor.point(z2)))


def _isomorphism(result, E, rng, seed, steps, budget):
    for curve in (E, AUTOMORPHISM_CURVE):
        automorphisms = curve_automorphisms(curve)
        for i in range(50):
            pair1 = (random_point(curve, rng), random_point(curve, rng))
            if i % 2:
                alpha = automorphisms[int(rng.integers(len(automorphisms)))]
                t = random_point(curve, rng)
                pair2 = tuple(add_points(curve, alpha(P), t) for P in pair1)[::int(rng.choice([-1, 1]))]
            else:
                pair2 = (random_point(curve, rng), random_point(curve, rng))
            answer = is_isomorphic(_pair_surface(curve, pair1), _pair_surface(curve, pair2))
            expected = _brute_force_isomorphic(curve, pair1, pair2)
            result.check(answer == expected, '{}: pairs {} {} decided {} by rule, {} by search'.format(
                curve, [str(P) for P in pair1], [str(P) for P in pair2], answer, expected))


def _delta_kernel(result, E, rng, seed, steps, budget):
    report = delta_kernel_check(E)
    result.check(report.passed, 'Delta kernel check failed: {}'.format(report.to_record()))
    p = E.modulus
    found = delta_centralizer_search(p)
    result.check(len(found) == 4, 'centralizer has {} elements'.format(len(found)))
    for m in DELTA_MATRICES:
        target = np.array(m, dtype=np.int64) % p
        result.check(any(_proportional(a, target, p) for a in found),
                     '{} missing from the centralizer'.format(m))
    try:
        delta_kernel_check(INCOMPLETE_TORSION_CURVE)
        result.check(False, 'incomplete two-torsion was accepted')
    except IncompleteTorsion:
        result.check(True, '')
    try:
        aut_of_bundle(Atiyah1(INCOMPLETE_TORSION_CURVE), delta_detail=True)
        result.check(False, 'A1 kernel exhibited without rational two-torsion')
    except CharTwoOutOfScope:
        result.check(True, '')


def _theorem_d_corpus(E, rng):
    s = random_point(E, rng, exclude=(INFINITY,))
    z = random_point(E, rng)
    tags = SurfaceTag
    return [
        (SurfaceClass(tags.RationalMinimal), (True, AutKernel.PGL3, 8)),
        (SurfaceClass(tags.RationalMinimal, hirzebruch=0), (True, AutKernel.NotDescribed, 6)),
        (SurfaceClass(tags.RationalMinimal, hirzebruch=1), (False, AutKernel.NotDescribed, 6)),
        (SurfaceClass(tags.RationalMinimal, hirzebruch=3), (True, AutKernel.NotDescribed, 8)),
        (SurfaceClass(tags.RationalNonMinimal), (False, AutKernel.NotDescribed, None)),
        (SurfaceClass(tags.RuledElliptic, descriptor=TrivialBundle(E)), (True, AutKernel.ProductCxPGL2, 4)),
        (SurfaceClass(tags.RuledElliptic, descriptor=make_decomposable(E, DivisorClass(0, s))), (True, AutKernel.Gm, 2)),
        (SurfaceClass(tags.RuledElliptic, descriptor=Atiyah0(E)), (True, AutKernel.Ga, 2)),
        (SurfaceClass(tags.RuledElliptic, descriptor=Atiyah1(E)), (True, AutKernel.TwoTorsionKlein, 1)),
        (SurfaceClass(tags.RuledElliptic, descriptor=Decomposable(E, DivisorClass(1, z))),
         (False, AutKernel.NotDescribed, 2)),
        (SurfaceClass(tags.RuledHigherGenus), (True, AutKernel.FullPGL2, 3)),
        (SurfaceClass(tags.RuledHigherGenus, trivial=False), (False, AutKernel.NotDescribed, None)),
        (SurfaceClass(tags.Abelian), (True, AutKernel.WholeAbelianSurface, 2)),
        (SurfaceClass(tags.BlownUpAbelian), (False, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.K3), (True, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.Enriques), (True, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.BiellipticWithP1Quotient), (True, AutKernel.EllipticCurveGroup, 1)),
        (SurfaceClass(tags.BlownUpBielliptic), (False, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.QuotientProperlyElliptic), (True, AutKernel.EllipticCurveGroup, 1)),
        (SurfaceClass(tags.QuotientProperlyElliptic, in_E=False), (False, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.ProperlyEllipticOther), (True, AutKernel.TrivialGroup, 0)),
        (SurfaceClass(tags.GeneralType), (True, AutKernel.TrivialGroup, 0)),
    ]


def _theorem_d(result, E, rng, seed, steps, budget):
    corpus = _theorem_d_corpus(E, rng)
    result.check({c.tag for c, _ in corpus} == set(SurfaceTag), 'corpus misses a surface class')
    for c, (maximal, kernel, dimension) in corpus:
        description = classify_theorem_D(c, steps=steps, seed=seed)
        got = (description.maximal, description.kernel, description.dimension)
        result.check(got == (maximal, kernel, dimension) and description.dimension_consistent(),
                     '{} {}: got {}'.format(c.tag.name, c.descriptor or c.hirzebruch or '', got))
        expected = c.tag not in (SurfaceTag.RuledElliptic, SurfaceTag.RuledHigherGenus)
        result.check(contained_in_maximal(c).contained == expected,
                     '{}: containment in a maximal subgroup should be {}'.format(c.tag.name, expected))
        if c.tag is SurfaceTag.RuledElliptic and maximal:
            certificate = maximality_certificate(c.descriptor, seed=seed)
            result.check(certificate.verified, 'maximality of {} not verified: {}'.format(
                c.descriptor, certificate.translation))


def _random_gauge(m, rng):
    """Constant PGL2 matrix times [[1, h], [0, 1]], h with a double pole at a special point."""
    E = m.base
    p = E.modulus
    while True:
        a, b, c, d = (int(v) for v in rng.integers(p, size=4))
        if (a * d - b * c) % p:
            break
    z = m.special_points[int(rng.integers(len(m.special_points)))]
    h = CurveFunction.zero(E)
    for f in riemann_roch_basis(E, Divisor.point(z, 2)):
        h = h + f * int(rng.integers(p))
    unipotent = TransitionMatrix.from_rows(E, ((1, h), (0, 1)))
    return GaugeTransformation(TransitionMatrix.from_rows(E, ((a, b), (c, d))) @ unipotent)


def _gauge_invariance(result, E, rng, seed):
    for i in range(50):
        m = _random_model(E, rng, seed)
        m = refine(m, [random_point(E, rng)])
        gauge = _random_gauge(m, rng)
        gauged = gauge.apply_to_model(m)
        sigma1, sigma2 = _random_section(E, rng), _random_section(E, rng)
        ok = gauge.check(m)
        ok = ok and self_intersection(m, sigma1) == self_intersection(gauged, gauge.apply_to_section(sigma1))
        if sigma1 != sigma2:
            ok = ok and (intersection_number(m, sigma1, sigma2)
                         == intersection_number(gauged, gauge.apply_to_section(sigma1), gauge.apply_to_section(sigma2)))
        result.check(ok, 'gauge {}: invariants changed for {}, {} on {}'.format(i, sigma1, sigma2, m))


def _segre_steps(result, E):
    points = E.points
    descriptors = [TrivialBundle(E), Atiyah0(E), Atiyah1(E)]
    for s in points:
        descriptors.append(Decomposable(E, DivisorClass(1, s)))
        descriptors.append(Decomposable(E, DivisorClass(2, s)))
        if not s.is_infinity:
            descriptors.append(make_decomposable(E, DivisorClass(0, s)))
    for d in descriptors:
        for z in points:
            for location in list(Location)[:4]:
                try:
                    outcome = elm_descriptor(d, ElmPoint(z, location))
                except InconsistentCenter:
                    continue
                if isinstance(outcome, Known):
                    value = segre(outcome.descriptor)
                elif isinstance(outcome, PartiallyKnown):
                    value = outcome.segre
                else:
                    continue
                result.check(abs(value - segre(d)) == 1, '{} at {} changes segre by {}'.format(
                    d, ElmPoint(z, location), value - segre(d)))


def _elm_round_trip(result, E, rng, seed, budget):
    for i in range(10):
        m = _random_model(E, rng, seed, max_elms=1)
        z, point = _random_center(E, rng)
        there = elm_model(m, z, point, seed=seed)
        back = elm_model(there, *there.inverse_base_point, seed=seed)
        sections = [BundleSection.infinity(E)] + [_random_section(E, rng) for _ in range(3)]
        same = all(self_intersection(m, sigma) == self_intersection(back, sigma) for sigma in sections)
        before, after = descriptor_of_model(m, budget=budget), descriptor_of_model(back, budget=budget)
        result.check(same and before == after, 'round trip {} through {} {}: {} -> {}'.format(i, z, point, before, after))


def _canonical_idempotence(result, E):
    for degree in range(-3, 4):
        for P in E.points:
            c = DivisorClass(degree, P)
            once = canonicalize(E, c)
            result.check(canonicalize(E, once) == once and canonicalize(E, negate_class(E, c)) == once,
                         'canonicalize is not idempotent on {}'.format(c))


def _properties(result, E, rng, seed, steps, budget):
    _gauge_invariance(result, E, rng, seed)
    _segre_steps(result, E)
    _elm_round_trip(result, E, rng, seed, budget)
    _canonical_idempotence(result, E)


SUITES = {
    'segre-table': _segre_table,
    'self-intersection': _self_intersection,
    'chain': _chain,
    'construction': _construction,
    'crosscheck': _crosscheck,
    'riemann-roch': _riemann_roch,
    'round-trip': _round_trip,
    'isomorphism': _isomorphism,
    'delta-kernel': _delta_kernel,
    'theorem-d': _theorem_d,
    'properties': _properties,
}


def run_suite(name, E=None, seed=None, steps=None, budget=None):
    """
    Runs one acceptance suite; an exception inside the suite counts as a failure.

    Returns
    -------
    SuiteResult
    """
    if E is None:
        E = DEFAULT_CURVE
    if seed is None:
        seed = default_arguments['seed']
    if budget is None:
        budget = default_arguments['budget']
    result = SuiteResult(name)
    rng = np.random.default_rng([int(seed), sorted(SUITES).index(name)])
    start = time.perf_counter()
    try:
        SUITES[name](result, E, rng, seed, steps, budget)
    except RuledSurfaceError as e:
        result.failures.append('{} raised {}: {}'.format(name, type(e).__name__, e))
    result.seconds = time.perf_counter() - start
    return result


def run_suites(names, E=None, seed=None, steps=None, budget=None, workers=None):
    """Independent suites run concurrently; results come back sorted by name."""
    if workers is None:
        workers = default_arguments['workers']
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda name: run_suite(name, E, seed, steps, budget), names))
    return sorted(results, key=lambda r: r.name)


def suites_to_dataframe(results):
    return pd.DataFrame([{'suite': r.name, 'passed': r.passed, 'total': r.total, 'ok': r.ok,
                          'seconds': r.seconds} for r in results],
                        columns=['suite', 'passed', 'total', 'ok', 'seconds'])

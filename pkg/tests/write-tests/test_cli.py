import json
import os

import pytest
from ruled_surfaces.cli import *
from ruled_surfaces.elliptic import *
from ruled_surfaces.BundleModel import BundleSection
from ruled_surfaces.Descriptors import *
from ruled_surfaces.TransformEngine import Location
from ruled_surfaces.errors import InputError

CURVE = 'E/F11: y^2 = x^3 - x'
E = EllipticCurve(10, 0, 11)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_parse_curve():
    assert(parse_curve(CURVE) == E)
    assert(parse_curve(str(E)) == E)
    assert(parse_curve('E/F13:y^2=1*x+x^3') == EllipticCurve(1, 0, 13))
    with pytest.raises(InputError) as e:
        parse_curve('E/F9: y^2 = x^3 - x')
    assert(e.value.position == 3)
    assert(e.value.annotated().endswith('   ^'))
    for bad in ('E/F11: y^2 = x^3 + 2*x^2 + x', 'E/F11: y^2 = 2*x^3 + 1', 'E/F11: y^2 = x^3', 'F11: y^2 = x^3 + 1'):
        with pytest.raises(InputError):
            parse_curve(bad)


def test_parse_points_and_descriptors():
    assert(parse_point('(4, 4)', E) == CurvePoint(4, 4))
    assert(parse_point('O', E) == INFINITY)
    assert(parse_point('(15,-7)', E) == CurvePoint(4, 4))
    with pytest.raises(InputError) as e:
        parse_point('(2,1)', E)
    assert(e.value.position == 0)
    with pytest.raises(InputError) as e:
        parse_point('(4,4', E)
    assert(e.value.position == 4)
    for d in (TrivialBundle(E), Atiyah0(E), Atiyah1(E), Hirzebruch(2),
              GenusAtLeastTwoTrivial('C2'), Decomposable(E, DivisorClass(2, CurvePoint(6, 1))), make_decomposable(E, DivisorClass(0, CurvePoint(8, 3)))):
        assert(parse_descriptor(str(d), E) == d)
    assert(parse_descriptor('D(-1; s=(6,1))', E) == Decomposable(E, DivisorClass(1, CurvePoint(6, 10))))
    for bad in ('A2', 'Q', 'D(1; s=(2,1))', 'T T', 'F-1', 'G()', 'G(C2'):
        with pytest.raises(InputError):
            parse_descriptor(bad, E)


def test_parse_centers_and_sections():
    p = parse_center('z=(8,3); loc=min', E)
    assert(p.z == CurvePoint(8, 3) and p.location is Location.OnMinimalSection)
    p = parse_center('z=O; loc=coords [2:13]', E)
    assert(p.location is Location.ModelCoordinates and p.coordinates == (2, 2))
    with pytest.raises(InputError):
        parse_center('z=O; loc=coords [0:11]', E)
    with pytest.raises(InputError):
        parse_center('z=O; loc=nowhere', E)
    x = CurveFunction.x_coordinate(E)
    y = CurveFunction.y_coordinate(E)
    assert(parse_curve_function('(x^2 + 1)/(x - 6)', E) == (x * x + 1) / (x - 6))
    assert(parse_curve_function('y/2 + x', E) == y * 6 + x)
    assert(parse_section('x', E) == BundleSection.from_function(x))
    assert(parse_section('[1 : 0]', E) == BundleSection.infinity(E))
    assert(parse_section('[x : y]', E) == BundleSection(x, y))
    with pytest.raises(InputError):
        parse_section('[0:0]', E)
    with pytest.raises(InputError):
        parse_curve_function('x +* 1', E)


def test_segre_and_selfint(capsys):
    assert(run(capsys, 'segre', CURVE, 'A1')[:2] == (0, '1'))
    assert(run(capsys, 'segre', CURVE, 'D(2; s=(6,1))')[:2] == (0, '-2'))
    assert(run(capsys, 'selfint', CURVE, 'x')[:2] == (0, '4'))
    assert(run(capsys, 'selfint', CURVE, '[1:0]')[:2] == (0, '0'))
    code, out, err = run(capsys, 'segre', CURVE)
    assert(code == 2)


def test_elm_command(capsys):
    code, out, _ = run(capsys, 'elm', CURVE, 'D(1; s=(6,1))', 'z=(6,1); loc=q')
    assert((code, out) == (0, 'T'))
    code, out, _ = run(capsys, 'elm', CURVE, 'A1', 'z=(6,1); loc=generic')
    assert(code == 1 and out.startswith('Undetermined'))
    code, _, err = run(capsys, 'elm', CURVE, 'T', 'z=(6,1); loc=q')
    assert(code == 2 and 'error' in err)


def test_chain_command(capsys, tmp_path):
    out_path = os.path.join(str(tmp_path), 'chain.csv')
    code, out, _ = run(capsys, 'chain', CURVE, 'D(1; s=O)', '--steps', '3', '--json', '--gamma', '--out', out_path)
    assert(code == 0)
    record = json.loads(out)
    assert(record['command'] == 'chain' and record['params']['steps'] == 3)
    assert([s['segre'] for s in record['steps']] == [-2, -3, -4])
    assert(all('gamma' in s for s in record['steps']))
    assert(os.path.exists(out_path))


def test_other_commands(capsys, tmp_path):
    assert(run(capsys, 'iso', CURVE, 'D(0; s=(6,1))', 'D(0; s=(6,10))')[:2] == (0, 'true'))
    assert(run(capsys, 'iso', CURVE, 'D(1; s=(6,1))', 'D(1; s=O)', '--over-base')[:2] == (0, 'false'))
    code, out, _ = run(capsys, 'conj', CURVE, 'D(1; s=(6,1))', 'D(1; s=O)')
    assert(code == 0 and out.splitlines()[0] == 'true' and 'warning' in out)
    code, out, _ = run(capsys, 'aut', CURVE, 'A0')
    assert(code == 0 and 'kernel: Ga' in out)
    code, out, _ = run(capsys, 'classify', 'K3', '--json')
    assert(code == 0 and json.loads(out)['kernel'] == 'TrivialGroup')
    code, out, _ = run(capsys, 'classify', 'RuledElliptic', CURVE, 'T', '--json')
    assert(code == 0 and json.loads(out)['containment']['contained'] is False)
    code, out, _ = run(capsys, 'classify', 'GeneralType')
    assert(out.splitlines()[-1] == 'every connected subgroup in a maximal one: true')
    assert(run(capsys, 'classify', 'RationalMinimal', '--n', '1')[0] == 0)
    assert(run(capsys, 'classify', 'Bogus')[0] == 2)
    model_path = os.path.join(str(tmp_path), 'a0.json')
    code, out, _ = run(capsys, 'build-atiyah', CURVE, '0', '(4,4)', '--out', model_path)
    assert(code == 0 and 'found: A0' in out)
    assert(run(capsys, 'segre', CURVE, '--model', model_path)[:2] == (0, '0'))


def test_bad_input(capsys):
    code, _, err = run(capsys, 'segre', 'E/F9: y^2 = x^3 - x', 'T')
    assert(code == 2 and '^' in err)
    assert(run(capsys, 'nope')[0] == 2)
    assert(run(capsys, 'build-atiyah', CURVE, '2', 'O')[0] == 2)
    assert(run(capsys, 'verify', 'nothing')[0] == 2)

import argparse
import json
import re
import sys
import time

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .AutAtlas import SurfaceClass, SurfaceTag, aut_of_bundle, classify_theorem_D, contained_in_maximal
from .BundleModel import (BundleSection, default_arguments, load_model, minimal_section_search, save_model,
                          self_intersection, trivial_model)
from .Descriptors import (Atiyah0, Atiyah1, GenusAtLeastTwoTrivial, Hirzebruch, TrivialBundle, describe_model,
                          descriptor_to_record, is_conjugate_aut, is_isomorphic, make_decomposable, segre)
from .TransformEngine import ElmPoint, Known, Location, build_atiyah, chain_theorem_A, elm_descriptor
from .elliptic import INFINITY, CurveFunction, CurvePoint, DivisorClass, EllipticCurve
from .errors import BudgetExceeded, FieldTooLarge, InputError, RuledSurfaceError
from .exact_arith import check_modulus

__all__ = [
    'parse_curve',
    'parse_point',
    'parse_descriptor',
    'parse_center',
    'parse_section',
    'parse_curve_function',
    'build_parser',
    'main',
]

_X, _Y = sympy.symbols('x y')
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_INTEGER = re.compile(r'[+-]?\d+')
_WORD = re.compile(r'[A-Za-z]+')


class _Scanner:
    """Cursor over an input string; every failure names its character position."""

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.pos

    def peek(self, literal):
        self.skip()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal):
        if not self.peek(literal):
            raise InputError('expected {!r}'.format(literal), self.text, self.pos)
        self.pos += len(literal)

    def match(self, pattern, what):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise InputError('expected {}'.format(what), self.text, self.pos)
        self.pos = m.end()
        return m.group(0)

    def integer(self):
        return int(self.match(_INTEGER, 'an integer'))

    def until(self, literal):
        self.skip()
        end = self.text.find(literal, self.pos)
        if end < 0:
            raise InputError('expected {!r}'.format(literal), self.text, len(self.text))
        start, self.pos = self.pos, end
        return self.text[start:end], start

    def rest(self):
        start = self.skip()
        self.pos = len(self.text)
        return self.text[start:], start

    def end(self):
        if self.skip() != len(self.text):
            raise InputError('unexpected trailing input', self.text, self.pos)


def _reduce_rational(c, p):
    c = sympy.Rational(c)
    if c.q % p == 0:
        raise ZeroDivisionError('denominator {} vanishes mod {}'.format(c.q, p))
    return int(c.p) * pow(int(c.q), -1, p) % p


def _sympy_expression(text, offset, full_text):
    try:
        return parse_expr(text, local_dict={'x': _X, 'y': _Y}, transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise InputError('cannot parse {!r}: {}'.format(text, e), full_text, offset)


def parse_curve(text):
    """`E/F<p>: y^2 = x^3 + <a>*x + <b>` (spacing and term order are free)."""
    s = _Scanner(text)
    s.expect('E/F')
    p_pos = s.skip()
    p = s.integer()
    try:
        check_modulus(p)
    except RuledSurfaceError as e:
        raise InputError(str(e), text, p_pos)
    s.expect(':')
    s.expect('y^2')
    s.expect('=')
    rhs, rhs_pos = s.rest()
    expr = _sympy_expression(rhs, rhs_pos, text)
    try:
        coeffs = [_reduce_rational(c, p) for c in sympy.Poly(expr, _X).all_coeffs()]
    except (sympy.PolynomialError, ZeroDivisionError, TypeError) as e:
        raise InputError('right-hand side must be a polynomial in x: {}'.format(e), text, rhs_pos)
    if len(coeffs) != 4 or coeffs[0] != 1 or coeffs[1] != 0:
        raise InputError('right-hand side must read x^3 + a*x + b', text, rhs_pos)
    try:
        return EllipticCurve(coeffs[2], coeffs[3], p)
    except RuledSurfaceError as e:
        raise InputError(str(e), text, p_pos)


def _point(s, E):
    start = s.skip()
    if s.peek('O'):
        s.expect('O')
        return INFINITY
    s.expect('(')
    x = s.integer()
    s.expect(',')
    y = s.integer()
    s.expect(')')
    P = CurvePoint(x % E.modulus, y % E.modulus)
    if not E.contains(P):
        raise InputError('{} is not a point of {}'.format(P, E), s.text, start)
    return P


def parse_point(text, E):
    """`(x,y)` or `O`"""
    s = _Scanner(text)
    P = _point(s, E)
    s.end()
    return P


def parse_descriptor(text, E):
    """`T`, `D(<d>; s=(x,y))`, `A0`, `A1`, `F<n>` or `G(<tag>)`"""
    s = _Scanner(text)
    start = s.skip()
    word = s.match(_WORD, 'a descriptor tag')
    if word == 'T':
        d = TrivialBundle(E)
    elif word in ('A', 'F'):
        n = s.integer()
        if word == 'F':
            if n < 0:
                raise InputError('Hirzebruch index must be non-negative', text, start + 1)
            d = Hirzebruch(n)
        elif n == 0:
            d = Atiyah0(E)
        elif n == 1:
            d = Atiyah1(E)
        else:
            raise InputError('Atiyah tags are A0 and A1', text, start)
    elif word == 'D':
        s.expect('(')
        degree = s.integer()
        s.expect(';')
        s.expect('s')
        s.expect('=')
        point = _point(s, E)
        s.expect(')')
        d = make_decomposable(E, DivisorClass(degree, point))
    elif word == 'G':
        s.expect('(')
        tag, at = s.until(')')
        if not tag.strip():
            raise InputError('empty genus tag', text, at)
        s.expect(')')
        d = GenusAtLeastTwoTrivial(tag.strip())
    else:
        raise InputError('unknown descriptor tag {!r}'.format(word), text, start)
    s.end()
    return d


_LOCATIONS = {loc.value: loc for loc in Location}


def parse_center(text, E, model=None):
    """`z=(x,y); loc=min|comp|q|generic|coords [u:v]`"""
    s = _Scanner(text)
    s.expect('z')
    s.expect('=')
    z = _point(s, E)
    s.expect(';')
    s.expect('loc')
    s.expect('=')
    start = s.skip()
    word = s.match(_WORD, 'a location')
    if word not in _LOCATIONS:
        raise InputError('location must be one of {}'.format('|'.join(_LOCATIONS)), text, start)
    location = _LOCATIONS[word]
    coordinates = None
    if location is Location.ModelCoordinates:
        s.expect('[')
        u = s.integer()
        s.expect(':')
        v = s.integer()
        s.expect(']')
        if u % E.modulus == 0 and v % E.modulus == 0:
            raise InputError('[0:0] is not a point of P1', text, start)
        coordinates = (u % E.modulus, v % E.modulus)
    s.end()
    return ElmPoint(z, location, coordinates, model)


def parse_curve_function(text, E, offset=0, full_text=None):
    """
    Element of the function field of E written in x and y, e.g. `(x^2 + 1)/(x - 3) + (2)*y`.
    """
    full_text = text if full_text is None else full_text
    expr = _sympy_expression(text, offset, full_text)
    p = E.modulus
    try:
        numerator, denominator = sympy.fraction(sympy.together(expr))
        parts = []
        for part in (numerator, denominator):
            f = CurveFunction.zero(E)
            for (i, j), c in sympy.Poly(part, _X, _Y).terms():
                c = _reduce_rational(c, p)
                if c:
                    f = f + CurveFunction.x_coordinate(E) ** i * CurveFunction.y_coordinate(E) ** j * c
            parts.append(f)
        return parts[0] / parts[1]
    except (sympy.PolynomialError, ZeroDivisionError, TypeError) as e:
        raise InputError('{!r} is not a function on {}: {}'.format(text, E, e), full_text, offset)


def parse_section(text, E):
    """`[u:v]` with u, v curve functions, or a single function g meaning [g:1]"""
    s = _Scanner(text)
    if s.peek('['):
        s.expect('[')
        u_text, u_pos = s.until(':')
        s.expect(':')
        v_text, v_pos = s.until(']')
        s.expect(']')
        s.end()
        u = parse_curve_function(u_text, E, u_pos, text)
        v = parse_curve_function(v_text, E, v_pos, text)
    else:
        g_text, g_pos = s.rest()
        u, v = parse_curve_function(g_text, E, g_pos, text), CurveFunction.one(E)
    try:
        return BundleSection(u, v)
    except RuledSurfaceError as e:
        raise InputError(str(e), text, 0)


def build_parser():
    parser = argparse.ArgumentParser(prog='ruled-surfaces',
                                     description='Exact computations on ruled surfaces over elliptic curves')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='structured output')
    common.add_argument('--seed', type=int, default=default_arguments['seed'])
    common.add_argument('--steps', type=int, default=None, help='chain length / number of scenarios')
    common.add_argument('--budget', type=int, default=default_arguments['budget'])
    common.add_argument('--model', default=None, help='bundle model JSON file')
    common.add_argument('--out', default=None, help='write the resulting model or record here')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('segre', parents=[common])
    p.add_argument('curve')
    p.add_argument('descriptor', nargs='?')

    p = sub.add_parser('selfint', parents=[common])
    p.add_argument('curve')
    p.add_argument('section')

    p = sub.add_parser('elm', parents=[common])
    p.add_argument('curve')
    p.add_argument('descriptor')
    p.add_argument('center')

    p = sub.add_parser('chain', parents=[common])
    p.add_argument('curve')
    p.add_argument('descriptor')
    p.add_argument('--gamma', action='store_true', help='exhibit gamma for every step')

    for name in ('iso', 'conj'):
        p = sub.add_parser(name, parents=[common])
        p.add_argument('curve')
        p.add_argument('first')
        p.add_argument('second')
        if name == 'iso':
            p.add_argument('--over-base', action='store_true')

    p = sub.add_parser('aut', parents=[common])
    p.add_argument('curve')
    p.add_argument('descriptor')

    p = sub.add_parser('classify', parents=[common])
    p.add_argument('tag', help='|'.join(t.name for t in SurfaceTag))
    p.add_argument('curve', nargs='?')
    p.add_argument('descriptor', nargs='?')
    p.add_argument('--n', type=int, default=None, help='Hirzebruch index for RationalMinimal (omit for P2)')
    p.add_argument('--non-trivial', action='store_true')
    p.add_argument('--not-in-e', action='store_true')

    p = sub.add_parser('build-atiyah', parents=[common])
    p.add_argument('curve')
    p.add_argument('variant', type=int, choices=(0, 1))
    p.add_argument('z1')

    p = sub.add_parser('verify', parents=[common])
    p.add_argument('suite')
    return parser


def _emit(args, record, lines):
    if args.json:
        record = dict(record, command=args.command,
                      params={'seed': args.seed, 'steps': args.steps, 'budget': args.budget})
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _cmd_segre(args):
    E = parse_curve(args.curve)
    if args.model:
        m = load_model(args.model)
        search = minimal_section_search(m, budget=args.budget)
        _emit(args, {'segre': search.segre, 'exact': search.exact, 'count_exact': search.count_exact,
                     'evaluated': search.evaluated},
              [str(search.segre)] + ([] if search.exact else ['(not certified: upper bound only)']))
        return 0 if search.exact else 1
    if args.descriptor is None:
        raise InputError('segre needs a descriptor or --model', args.curve, len(args.curve))
    d = parse_descriptor(args.descriptor, E)
    _emit(args, {'segre': segre(d), 'descriptor': str(d)}, [str(segre(d))])
    return 0


def _cmd_selfint(args):
    E = parse_curve(args.curve)
    m = load_model(args.model) if args.model else trivial_model(E)
    if m.base != E:
        raise InputError('model lives on {}'.format(m.base), args.curve, 0)
    sigma = parse_section(args.section, E)
    value = self_intersection(m, sigma)
    _emit(args, {'section': str(sigma), 'self_intersection': value}, [str(value)])
    return 0


def _cmd_elm(args):
    E = parse_curve(args.curve)
    d = parse_descriptor(args.descriptor, E)
    model = load_model(args.model) if args.model else None
    p = parse_center(args.center, E, model)
    result = elm_descriptor(d, p)
    record = {'before': str(d), 'center': str(p), 'result': str(result)}
    if isinstance(result, Known):
        record['descriptor'] = descriptor_to_record(result.descriptor)
    _emit(args, record, [str(result)])
    return 0 if isinstance(result, Known) else 1


def _cmd_chain(args):
    E = parse_curve(args.curve)
    d = parse_descriptor(args.descriptor, E)
    steps = args.steps if args.steps is not None else default_arguments['steps']
    certificate = chain_theorem_A(E, d, n=steps, seed=args.seed, realize_gamma=args.gamma)
    if args.out:
        certificate.to_dataframe().to_csv(args.out, index=False)
    _emit(args, certificate.to_records(), certificate.lines())
    return 0


def _cmd_iso(args):
    E = parse_curve(args.curve)
    d1, d2 = parse_descriptor(args.first, E), parse_descriptor(args.second, E)
    answer = is_isomorphic(d1, d2, over_base=args.over_base)
    _emit(args, {'first': str(d1), 'second': str(d2), 'isomorphic': answer}, [str(answer).lower()])
    return 0


def _cmd_conj(args):
    E = parse_curve(args.curve)
    d1, d2 = parse_descriptor(args.first, E), parse_descriptor(args.second, E)
    verdict = is_conjugate_aut(d1, d2)
    lines = [str(verdict.conjugate).lower()]
    if verdict.non_maximal:
        lines.append('warning: at least one group is not maximal; answer is surface isomorphism')
    _emit(args, {'first': str(d1), 'second': str(d2), 'conjugate': verdict.conjugate,
                 'non_maximal': verdict.non_maximal}, lines)
    return 0


def _aut_lines(description):
    lines = ['dimension: {}'.format(description.dimension),
             'kernel: {}'.format(description.kernel.name),
             'quotient: {}'.format(description.quotient.name),
             'commutative: {}'.format(str(description.commutative).lower()),
             'splits: {}'.format(description.splits.value),
             'maximal: {}'.format(str(description.maximal).lower())]
    lines += ['  ' + line for line in description.justification]
    if description.chain_witness is not None:
        lines += description.chain_witness.lines()
    return lines


def _cmd_aut(args):
    E = parse_curve(args.curve)
    d = parse_descriptor(args.descriptor, E)
    description = aut_of_bundle(d, steps=args.steps, seed=args.seed)
    _emit(args, description.to_record(), _aut_lines(description))
    return 0


def _cmd_classify(args):
    if args.tag not in SurfaceTag.__members__:
        raise InputError('unknown surface class; expected one of {}'.format(', '.join(SurfaceTag.__members__)),
                         args.tag, 0)
    tag = SurfaceTag[args.tag]
    descriptor = None
    if tag is SurfaceTag.RuledElliptic:
        if args.curve is None or args.descriptor is None:
            raise InputError('RuledElliptic needs a curve and a descriptor', args.tag, len(args.tag))
        descriptor = parse_descriptor(args.descriptor, parse_curve(args.curve))
    c = SurfaceClass(tag, hirzebruch=args.n, descriptor=descriptor, trivial=not args.non_trivial,
                     in_E=not args.not_in_e)
    description = classify_theorem_D(c, steps=args.steps, seed=args.seed)
    containment = contained_in_maximal(c)
    _emit(args, dict(description.to_record(), containment=containment.to_record()),
          _aut_lines(description) + ['every connected subgroup in a maximal one: {}'.format(str(containment.contained).lower())])
    return 0


def _cmd_build_atiyah(args):
    E = parse_curve(args.curve)
    z1 = parse_point(args.z1, E)
    m, asserted = build_atiyah(E, args.variant, z1, seed=args.seed)
    found, search = describe_model(m, budget=args.budget)
    if args.out:
        save_model(m, args.out)
    agree = found == asserted
    _emit(args, {'asserted': str(asserted), 'found': str(found), 'segre': search.segre,
                 'minimal_sections': len(search.minimal_sections), 'agree': agree},
          ['asserted: {}'.format(asserted), 'found: {}'.format(found), 'segre: {}'.format(search.segre),
           'minimal sections found: {}'.format(len(search.minimal_sections))])
    return 0 if agree else 1


def _cmd_verify(args):
    from .acceptance import SUITES, run_suites, suites_to_dataframe
    names = sorted(SUITES) if args.suite == 'all' else [args.suite]
    for name in names:
        if name not in SUITES:
            raise InputError('unknown suite; expected one of {} or all'.format(', '.join(sorted(SUITES))), args.suite, 0)
    results = run_suites(names, seed=args.seed, steps=args.steps, budget=args.budget)
    if args.out:
        suites_to_dataframe(results).to_csv(args.out, index=False)
    _emit(args, {'suites': [r.to_record() for r in results]},
          ['{}: {}/{} {}'.format(r.name, r.passed, r.total, 'ok' if r.ok else 'FAILED') for r in results]
          + ['  ' + f for r in results for f in r.failures])
    for r in results:
        print('{}: {:.2f}s'.format(r.name, r.seconds), file=sys.stderr)
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {
    'segre': _cmd_segre,
    'selfint': _cmd_selfint,
    'elm': _cmd_elm,
    'chain': _cmd_chain,
    'iso': _cmd_iso,
    'conj': _cmd_conj,
    'aut': _cmd_aut,
    'classify': _cmd_classify,
    'build-atiyah': _cmd_build_atiyah,
    'verify': _cmd_verify,
}


def main(argv=None):
    """
    Parses argv and runs one command.

    Returns
    -------
    exit code: 0 determinate answer, 1 undetermined or partially known, 2 input error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except InputError as e:
        print(e.annotated(), file=sys.stderr)
        return 2
    except (BudgetExceeded, FieldTooLarge) as e:
        print('undetermined: {}'.format(e), file=sys.stderr)
        return 1
    except RuledSurfaceError as e:
        print('error: {}'.format(e), file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return 2
    print('elapsed: {:.3f}s'.format(time.perf_counter() - start), file=sys.stderr)
    return code

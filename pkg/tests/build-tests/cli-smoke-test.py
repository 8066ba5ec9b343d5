from ruled_surfaces import *

curve = 'E/F11: y^2 = x^3 - x'

for argv in (['segre', curve, 'D(2; s=(6,1))'],
             ['elm', curve, 'D(1; s=(6,1))', 'z=(6,1); loc=generic'],
             ['chain', curve, 'D(1; s=O)', '--steps', '10', '--gamma'],
             ['aut', curve, 'A1'],
             ['classify', 'RationalMinimal', '--n', '3', '--json'],
             ['build-atiyah', curve, '1', '(4,4)'],
             ['verify', 'all', '--steps', '20']):
    print('$ ruled-surfaces ' + ' '.join(argv))
    code = main(argv)
    print('exit', code)
    print()

#!/usr/bin/env python3
## Example use case of ruled_surfaces package

from ruled_surfaces import *

arguments = {
    "seed": 0,
    "steps": 10,
    "budget": 20000,
}

E = EllipticCurve(10, 0, 11)
z1 = E.points[1]

# C x P1, one elementary transformation, then the Atiyah surfaces
m = elm_model(trivial_model(E), z1, (1, 0), seed=arguments["seed"])
print(descriptor_of_model(m, budget=arguments["budget"]))

a1, asserted = build_atiyah(E, 1, z1, seed=arguments["seed"])
found, search = describe_model(a1, budget=arguments["budget"])
print(asserted, found, search.segre)

# a non-stationary chain of decomposable surfaces
certificate = chain_theorem_A(E, Decomposable(E, DivisorClass(1, z1)), n=arguments["steps"], seed=arguments["seed"])
print(certificate.to_dataframe())

print(aut_of_bundle(Atiyah1(E)).to_record())

# save_model(a1, 'a1.json')
# a1 = load_model('a1.json')

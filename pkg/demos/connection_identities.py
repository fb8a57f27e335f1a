"""A random connection on the pull-back of a generalized algebroid, with its structure identities."""
import random

from glacalc import pullback_algebroid, verify_bianchi_identities, verify_cartan_identities
from glacalc.connection import torsion
from glacalc.forms import format_form
from glacalc.sampling import generalized_spec, random_connection, so3_action

rng = random.Random(42)
spec = generalized_spec(so3_action(), rng)
P = pullback_algebroid(spec)
print("pull-back base:", P.coords.names)
print("h =", [str(e) for e in spec.h])
C = random_connection(rng, P, max_degree=1)
for c, T in enumerate(torsion(C)):
    print(f"T^{c + 1} =", format_form(T))
print("Cartan identities:", verify_cartan_identities(C).passed)
print("Bianchi identities:", verify_bianchi_identities(C).passed)

"""Involutivity of two planes in R^3: a coordinate plane and a contact plane."""
from glacalc import IDS, annihilator, eds_closure_check, frobenius_certificate, is_involutive
from glacalc.forms import format_form
from glacalc.sampling import so3, standard

R3 = standard(3)
x = R3.coords.coordinate("x")
for name, D in [("coordinate plane", IDS(R3, [[1, 0], [0, 1], [0, 0]])),
                ("contact plane", IDS(R3, [[1, 0], [0, 1], [0, x]])),
                ("so(3) line", IDS(so3(), [[1], [0], [0]]))]:
    print(f"== {name}")
    print("  annihilator:", [format_form(th) for th in annihilator(D)])
    print("  involutive:", bool(is_involutive(D)), " closed ideal:", eds_closure_check(D))
    cert = frobenius_certificate(D)
    if cert:
        for line in cert.lines():
            print("  ", line)
    else:
        print("  ", cert)

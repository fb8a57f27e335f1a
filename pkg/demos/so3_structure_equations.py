"""so(3) as an algebroid over a point: brackets, coframe differentials and a broken control."""
from glacalc import bracket, coframe, d, maurer_cartan_check, validate_axioms
from glacalc.forms import format_form
from glacalc.sampling import so3, so3_perturbed

A = so3()
t = A.frames()
print("[t1, t2] =", bracket(t[0], t[1]))
for a in range(3):
    print(f"d t^{a + 1} =", format_form(d(coframe(A, a))))
print("structure equations hold:", maurer_cartan_check(A).passed)

B = so3_perturbed()
rep = validate_axioms(B)
print("\nperturbed table validates:", rep.passed)
for f in rep.failures:
    print(" ", f)
for a in range(3):
    print(f"d d t^{a + 1} =", format_form(d(d(coframe(B, a)))))

"""Harmonic polynomials: the two-variable generator family and exact bases
computed as Laplacian nullspaces in any number of variables.

Run:  python demos/03_harmonic_families.py
"""

from ncharm import (
    check_independence_property,
    directional_derivative,
    express_in_basis,
    gamma_power_parts,
    harmonic_basis,
    laplacian,
    render_word,
)

print("== The rotation-style generator family (two variables) ==")
for d in (1, 2, 3, 4):
    re, im = gamma_power_parts(d)
    print(f"d={d}:  re = {re}")
    print(f"       im = {im}")
print("harmonicity up to degree 12:",
      all(laplacian(q).is_zero()
          for d in range(1, 13) for q in gamma_power_parts(d)))

print()
print("== Derivative symmetries of the family ==")
re5, im5 = gamma_power_parts(5)
print("D[re, x1] == D[im, x2]:",
      directional_derivative(re5, 1) == directional_derivative(im5, 2))
print("D[re, x2] == -D[im, x1]:",
      directional_derivative(re5, 2) == -directional_derivative(im5, 1))

print()
print("== Exact bases from the Laplacian nullspace ==")
for d in range(1, 7):
    basis = harmonic_basis(2, d)
    print(f"g=2, degree {d}: dimension {basis.dimension}")
basis3 = harmonic_basis(2, 3)
for el in basis3.elements:
    print("   ", el)

print()
print("== Coordinates in a basis ==")
re4 = gamma_power_parts(4)[0]
coords = express_in_basis(re4, harmonic_basis(2, 4))
print("re gamma^4 coordinates:", coords)
from ncharm import parse  # noqa: E402
print("x2^3 in the degree-3 basis:",
      express_in_basis(parse("x2^3", 2), basis3))

print()
print("== Private words (independence property) ==")
witness = check_independence_property(harmonic_basis(2, 2))
print("degree-2 witness words:", [render_word(w) for w in witness])

print()
print("== Growth in three variables ==")
dims = [harmonic_basis(3, d).dimension for d in range(1, 6)]
print("g=3 dimensions for d=1..5:", dims)

"""The directional derivative, the free Laplacian, and the collapse to the
classical Laplacian when variables commute.

Run:  python demos/02_derivatives_and_laplacian.py
"""

from ncharm import (
    commutative_collapse,
    commutative_laplacian,
    directional_derivative,
    laplacian,
    parse,
)

print("== Directional derivative ==")
p = parse("x1^2*x2", 2)
print("p            =", p)
print("D[p, x1]     =", directional_derivative(p, 1))
print("D[p, x2]     =", directional_derivative(p, 2))

print()
print("== The product rule, checked exactly ==")
a = parse("x1*x2 + 2*x2", 2)
b = parse("x2*x1 - x1", 2)
lhs = directional_derivative(a * b, 1)
rhs = directional_derivative(a, 1) * b + a * directional_derivative(b, 1)
print("D[a*b] == D[a]*b + a*D[b]:", lhs == rhs)

print()
print("== The Laplacian ==")
for text in ("x1", "x1^2", "x1^3", "x1*x2^2*x1"):
    q = parse(text, 2)
    print(f"Lap[{text}] =", laplacian(q))

print()
print("== Every Laplacian word carries exactly two h letters ==")
lap = laplacian(parse("x1^2*x2^2 + x2*x1*x2", 2))
print("Lap =", lap)
print("h-counts:", sorted({w.count(0) for w, _ in lap.terms()}))

print()
print("== Collapse to commuting variables ==")
p = parse("x1^2*x2*x1 + x1*x2*x1^2 + x1*x2 - x2*x1 + 7", 2)
print("p collapses to:", commutative_collapse(p))
lap_then_collapse = commutative_collapse(laplacian(p))
collapse_then_lap = commutative_laplacian(commutative_collapse(p)).times_h_power(2)
print("collapse(Lap p)         =", lap_then_collapse)
print("h^2 * Delta(collapse p) =", collapse_then_lap)
print("identity holds:", lap_then_collapse == collapse_then_lap)

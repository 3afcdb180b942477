"""Tour of the exact polynomial layer: words, arithmetic, transposes,
matrix evaluation.

Run:  python demos/01_free_polynomials.py
"""

import numpy as np

from ncharm import MatrixPoint, Poly, degree_profile, evaluate, parse, symmetrize

print("== Building polynomials ==")
x1 = Poly.variable(2, 1)
x2 = Poly.variable(2, 2)
p = 3 + x1 * x1 + (x2 ** 3).scale(5)
print("p  =", p)
print("same thing parsed:", parse("3 + x1^2 + 5*x2^3", 2))
assert p == parse("3 + x1^2 + 5*x2^3", 2)

print()
print("== Noncommutativity ==")
comm = x1 * x2 - x2 * x1
print("x1*x2 - x2*x1 =", comm, "(does not collapse to zero)")
print("its transpose =", comm.transpose(), "(an anti-automorphism)")
assert comm.transpose() == -comm

print()
print("== Exact rational coefficients ==")
q = parse("1/2*x1*x2 + 1/3*x2*x1", 2)
print("q       =", q)
print("6*q     =", q.scale(6))
print("q - q   =", q - q)

print()
print("== Degree profile ==")
prof = degree_profile(parse("x1^2*x2*x1 + x1*x2*x1^2", 2))
print("total degree:", prof.total_degree)
print("homogeneous degree:", prof.homogeneous_degree)
print("symmetric:", prof.symmetric)

print()
print("== Evaluating at symmetric matrices ==")
rng = np.random.default_rng(0)
X1 = symmetrize(rng.uniform(-1, 1, (3, 3)))
X2 = symmetrize(rng.uniform(-1, 1, (3, 3)))
pt = MatrixPoint(X=(X1, X2))
value = evaluate(p, pt)
direct = 3 * np.eye(3) + X1 @ X1 + 5 * (X2 @ X2 @ X2)
print("p(X) =\n", value)
print("max deviation from the hand-built formula:",
      np.max(np.abs(value - direct)))
print("transpose compatibility |p^T(X) - p(X)^T| =",
      np.max(np.abs(evaluate(p.transpose(), pt) - value.T)))

"""Border vectors and middle matrices for polynomials quadratic in h, and
the zero-diagonal screen that rules out matrix positivity.

Run:  python demos/04_middle_matrix.py
"""

import numpy as np

from ncharm import (
    evaluate_middle,
    extract,
    laplacian,
    ldl_pivots,
    parse,
    reconstruct,
    render_word,
    zeroes_violation,
)

SHOWCASE = (
    "3*x1*h*x2^2*h*x1 + h*x1*x2*x1*h - h*x1*h*x2^2 - x2^2*h*x1*h"
    " + 5*x1*x2*h*x2*h*x2*x1"
)

print("== Extraction ==")
q = parse(SHOWCASE, 2)
rep = extract(q)
print("q =", q)
print("border:", ", ".join(render_word(bytes([0]) + m) for m in rep.border))
for i in range(rep.size):
    print("  [" + ", ".join(str(rep.Z[i][j]) for j in range(rep.size)) + "]")
print("reconstruction is exact:", reconstruct(rep) == q)

print()
print("== The zero-diagonal screen ==")
pair = zeroes_violation(rep)
print("violating (row, col):", pair)
print("so q cannot take positive semidefinite values everywhere.")

print()
print("== Numeric confirmation at the identity ==")
Zx = evaluate_middle(rep, (np.eye(1), np.eye(1)))
print(Zx)
pivots, psd = ldl_pivots(Zx, 1e-9)
print("pivots:", [round(p, 6) for p in pivots], "psd:", psd)

print()
print("== A Laplacian middle matrix ==")
lap = laplacian(parse("x1*x2^2*x1", 2))
rep2 = extract(lap)
print("Lap[x1*x2^2*x1] =", lap)
print("border:", ", ".join(render_word(bytes([0]) + m) for m in rep2.border))
for i in range(rep2.size):
    print("  [" + ", ".join(str(rep2.Z[i][j]) for j in range(rep2.size)) + "]")
print("no zero-diagonal violation:", zeroes_violation(rep2) is None)

"""Classifying homogeneous polynomials in two variables, with certificates:
exact inequalities, family membership, PSD Gram forms, sums of squares of
harmonics, and the sandwich form of odd-degree harmonics.

Run:  python demos/06_classification_gallery.py
"""

from ncharm import (
    Degree4Coeffs,
    SampleConfig,
    classify,
    degree4_family,
    gamma_power_parts,
    laplacian_sos_identity_check,
    odd_sandwich,
    odd_sandwich_vanishing_check,
    parse,
    sos_decompose,
)

cfg = SampleConfig(seed=99)

print("== A gallery across degrees ==")
re2, im2 = gamma_power_parts(2)
re3, im3 = gamma_power_parts(3)
re6, im6 = gamma_power_parts(6)
gallery = [
    ("x1^2 + x2^2", parse("x1^2 + x2^2", 2)),
    ("x1^2 - 3*x2^2", parse("x1^2 - 3*x2^2", 2)),
    ("re gamma^7", gamma_power_parts(7)[0]),
    ("x1^3", parse("x1^3", 2)),
    ("strict degree-4 member", degree4_family(Degree4Coeffs(1, 0, 0, 0, 1, 1))),
    ("(re gamma^2)^2", re2 * re2),
    ("x1*x2^2*x1", parse("x1*x2^2*x1", 2)),
    ("x1^4", parse("x1^4", 2)),
    ("2*(re gamma^3)^2 + 5*im gamma^6", (re3 * re3).scale(2) + im6.scale(5)),
]
for label, p in gallery:
    verdict = classify(p, cfg)
    extra = ""
    if verdict.membership is not None:
        extra = f"  membership {tuple(str(c) for c in verdict.membership)}"
    if verdict.region is not None:
        extra += f"  region {verdict.region.kind}"
    print(f"{label:34s} -> {verdict.kind}{extra}")

print()
print("== Sums of squares of harmonics ==")
p = (re3 * re3).scale(2) + re6.scale(1)
dec = sos_decompose(p)
for d, r in dec.terms:
    print(f"  {d} * T(R)*R with R = {r}")
print("exact reconstruction:", dec.reconstruct() == p)
print("Laplacian derivative identity:", laplacian_sos_identity_check(dec))

print()
print("== Odd-degree harmonics in sandwich form ==")
s = odd_sandwich(re3)
print("coefficients phi[m][i][j] for re gamma^3:")
for m, plane in enumerate(s.phi):
    for i, row in enumerate(plane):
        for j, c in enumerate(row):
            if c:
                print(f"  phi[{m + 1}][x{i + 1}][{j + 1}] = {c}")
print("reconstruction exact:", s.reconstruct() == re3)
print("cancellation identities hold:", odd_sandwich_vanishing_check(s))

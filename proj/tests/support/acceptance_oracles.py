"""Exact values frozen into tests/acceptance/main.cpp.

Independent of the library: plain binomials and fractions, with curvature
inputs worked out by hand in the comments below.
"""

from fractions import Fraction as F
from math import comb


def schlafli(n, d):
    if n == 0:
        return 1
    return 2 * sum(comb(n - 1, r) for r in range(d))


def expected_volume(n, d, i):
    return F(comb(n, d - i), schlafli(n, d))


def expected_curvature(phi, n, k):
    d = len(phi) - 1
    return F(1, schlafli(n, d)) * sum(comb(n, s) * phi[k + s] for s in range(min(n, d - k) + 1))


def fixed_prob(v, n):
    d = len(v) - 1
    total = F(0)
    for j in range(1, d + 1):
        a = sum(comb(n, j - 2 * k - 1) for k in range((j - 1) // 2 + 1))
        total += a * v[j]
    return F(2, schlafli(n, d)) * total


def pair_prob(n, m, d):
    total = 0
    for k in range((d - 1) // 2 + 1):
        s = d - 2 * k - 1
        total += sum(comb(n, p) * comb(m, s - p) for p in range(s + 1))
    return F(2 * total, schlafli(n, d) * schlafli(m, d))


def orthant(d):
    return [F(comb(d, k), 2**d) for k in range(d + 1)]


def show(label, x):
    print(f"{label:40s} {x} = {float(x)!r}")


# Curvature inputs Φ_0..Φ_d:
#   R^2, A = R^2:                     (0, 0, 1)
#   quadrant, A = {x2 >= x1 >= 0}:    the apex lies in A (1/4), the ray e2
#                                     lies in A (1/4), the interior meets A
#                                     in a pi/4 wedge (1/8): (1/4, 1/4, 1/8)
#   orthant(3), A = R^3:              (1, 3, 3, 1)/8
#   R^3, A = orthant(3):              (0, 0, 0, 1/8)
panel = {
    "R2 whole n2": ([F(0), F(0), F(1)], 2),
    "quadrant wedge n3": ([F(1, 4), F(1, 4), F(1, 8)], 3),
    "orthant3 whole n2": (orthant(3), 2),
    "R3 orthant3 n3": ([F(0), F(0), F(0), F(1, 8)], 3),
}
for name, (phi, n) in panel.items():
    for k in range(1, len(phi)):
        show(f"curvature {name} k{k}", expected_curvature(phi, n, k))

for n, d in [(6, 3), (8, 2), (5, 4)]:
    for i in range(1, d + 1):
        show(f"EV n{n} d{d} i{i}", expected_volume(n, d, i))

half2 = [F(0), F(1, 2), F(1, 2)]
line2 = [F(0), F(1), F(0)]
wedge_pi3 = [F(1, 3), F(1, 2), F(1, 6)]
show("fixed halfplane n1", fixed_prob(half2, 1))
show("fixed line n1", fixed_prob(line2, 1))
show("fixed quadrant n3", fixed_prob(orthant(2), 3))
show("fixed wedge(pi/3) n2", fixed_prob(wedge_pi3, 2))
show("fixed orthant3 n2", fixed_prob(orthant(3), 2))
show("fixed orthant3 n4", fixed_prob(orthant(3), 4))
for n, m, d in [(1, 1, 2), (2, 2, 2), (3, 2, 3), (2, 2, 3), (3, 3, 4)]:
    show(f"pair n{n} m{m} d{d}", pair_prob(n, m, d))

"""Independent reference values for the test suites.

Recomputes every reference number with numpy/scipy (no shared code with the
C++ library) and writes tests/oracles/reference_values.hpp. Run from the
repository root:

    python3 tests/oracles/derive.py
"""

import math
import pathlib

import numpy as np
from scipy import integrate, optimize


def midpoint_nodes(a, b, n):
    h = (b - a) / n
    return a + h * (np.arange(n) + 0.5), np.full(n, h)


def ltc_phi_small(k, c, p):
    def gen(t):
        return k if t <= c else k + (t - c) ** (p - 1)
    return gen


def young(gen, x, breaks=()):
    pts = [b for b in breaks if 0 < b < x]
    val, _ = integrate.quad(gen, 0.0, x, points=pts or None, limit=200, epsabs=1e-14, epsrel=1e-14)
    return val


def riemann(gen, x, n):
    t, w = midpoint_nodes(0.0, x, n)
    return float(np.sum(np.vectorize(gen)(t) * w))


values = {}

# Young functions
values["power2_at3"] = young(lambda t: 2 * t, 3.0)
values["power2_at3_riemann"] = riemann(lambda t: 2 * t, 3.0, 10**6)
ltc = ltc_phi_small(1.0, 1.0, 2.0)
values["ltc_1_1_2_at2"] = young(ltc, 2.0, breaks=(1.0,))
values["ltc_1_1_2_at2_riemann"] = riemann(ltc, 2.0, 10**6)


def ltc_young(x, k=1.0, c=1.0, p=2.0):
    return k * x if x <= c else k * x + (x - c) ** p / p


xs = 4.0 * np.arange(1, 10**5 + 1) / 10**5
values["ltc_1_1_2_delta2_xmax4"] = float(max(ltc_young(2 * x) / ltc_young(x) for x in xs))


# staircase: base phi = 1, jumps +1 at 1/2 and 1/4 (right-continuous)
def stair(t):
    return 1.0 + (t >= 0.25) + (t >= 0.5)


values["stair_left_half"] = stair(0.5 - 1e-12)
values["stair_right_half"] = stair(0.5 + 1e-12)
values["stair_left_quarter"] = stair(0.25 - 1e-12)
values["stair_right_quarter"] = stair(0.25 + 1e-12)

# modular of g(x) = x under x^2 on the 10^4-node midpoint grid of [0, 1]
x, w = midpoint_nodes(0.0, 1.0, 10**4)
values["modular_x_sq_1e4"] = float(np.sum(w * x**2))
for n in (512, 1024, 2048, 4096):
    x, w = midpoint_nodes(0.0, 1.0, n)
    values[f"modular_x_sq_{n}"] = float(np.sum(w * x**2))

# Gram matrix of {1, x} on 10^4 nodes
x, w = midpoint_nodes(0.0, 1.0, 10**4)
B = np.stack([np.ones_like(x), x], axis=1)
G = B.T @ (w[:, None] * B)
values["gram_01"] = float(G[0, 1])
values["gram_11"] = float(G[1, 1])

# best L2 line to x^2 on [0,1] (continuum and 2048-node grid)
G2 = np.array([[1.0, 0.5], [0.5, 1.0 / 3.0]])
rhs = np.array([1.0 / 3.0, 0.25])
cont = np.linalg.solve(G2, rhs)
values["l2_line_x2_c0"] = float(cont[0])
values["l2_line_x2_c1"] = float(cont[1])
x, w = midpoint_nodes(0.0, 1.0, 2048)
B = np.stack([np.ones_like(x), x], axis=1)
disc = np.linalg.solve(B.T @ (w[:, None] * B), B.T @ (w * x**2))
values["l2_line_x2_grid_c0"] = float(disc[0])
values["l2_line_x2_grid_c1"] = float(disc[1])
values["l2_line_x2_roots_lo"] = (3 - math.sqrt(3)) / 6
values["l2_line_x2_roots_hi"] = (3 + math.sqrt(3)) / 6


def sign_changes(v, eta):
    s = [np.sign(t) for t in v if abs(t) > eta]
    return int(sum(1 for a, b in zip(s, s[1:]) if a != b))


res = x**2 - (disc[0] + disc[1] * x)
values["l2_line_x2_sign_changes"] = sign_changes(res, 1e-8)

# best L2 quadratic to sin 3x on [0, pi], 2048 nodes
x, w = midpoint_nodes(0.0, math.pi, 2048)
B = np.stack([np.ones_like(x), x, x**2], axis=1)
coef = np.linalg.solve(B.T @ (w[:, None] * B), B.T @ (w * np.sin(3 * x)))
values["sin3x_quad_sign_changes"] = sign_changes(np.sin(3 * x) - B @ coef, 1e-8)

# L2 / L1 constant fits of x on [0,1]
x, w = midpoint_nodes(0.0, 1.0, 2048)
values["l2_const_x"] = float(np.sum(w * x))
l1 = optimize.minimize_scalar(lambda c: float(np.sum(w * np.abs(x - c))), bounds=(0, 1),
                              method="bounded", options={"xatol": 1e-12})
values["l1_const_x"] = float(l1.x)
values["l1_const_x_median_lo"] = float(x[1023])
values["l1_const_x_median_hi"] = float(x[1024])

# measure of half the nodes of a 100-node grid on [0, 2]
_, w = midpoint_nodes(0.0, 2.0, 100)
values["half_measure_0_2"] = float(np.sum(w[:50]))

# f(x) = x, p = 0.5 on the 10^4 grid: nodes within 1e-6 of 0.5
x, _ = midpoint_nodes(0.0, 1.0, 10**4)
values["x_minus_half_eta_hits"] = int(np.sum(np.abs(x - 0.5) <= 1e-6))

# L2 constant fit of x + 10 on [-1, 1]
x, w = midpoint_nodes(-1.0, 1.0, 1000)
values["l2_const_x_plus_10"] = float(np.sum(w * (x + 10)) / 2.0)

# non-uniqueness instance: Phi = ltc(1, 1, 2), r = 0.4 cos(2 pi x), P3 = 0.3
x, w = midpoint_nodes(0.0, 1.0, 1024)
r = 0.4 * np.cos(2 * np.pi * x)
h = 0.3 * np.sign(r)
values["witness_modular_h"] = float(np.sum(w * np.abs(h)))
gaps = []
for eps in np.arange(1, 10) / 10:
    gaps.append(abs(float(np.sum(w * np.vectorize(ltc_young)(np.abs(h - eps * 0.3)))) -
                    values["witness_modular_h"]))
values["witness_modular_gap"] = max(gaps)

# measure of {|f - p1| > c} for f - p1 = 2x on [0,1], c = 1: (1/2, 1]
x, w = midpoint_nodes(0.0, 1.0, 1000)
values["condition_b_measure"] = float(np.sum(w[2 * x > 1.0]))

lines = [
    "#ifndef ORLICZ_TESTS_REFERENCE_VALUES_HPP_",
    "#define ORLICZ_TESTS_REFERENCE_VALUES_HPP_",
    "",
    "// Generated by tests/oracles/derive.py. Do not edit by hand.",
    "",
    "namespace reference",
    "{",
    "",
]
for key, val in values.items():
    if isinstance(val, int):
        lines.append(f"inline constexpr int {key} = {val};")
    else:
        lines.append(f"inline constexpr double {key} = {val!r};")
lines += ["", "}  // namespace reference", "", "#endif  // ORLICZ_TESTS_REFERENCE_VALUES_HPP_", ""]
out = pathlib.Path(__file__).with_name("reference_values.hpp")
out.write_text("\n".join(lines))
print(f"wrote {len(values)} values to {out}")

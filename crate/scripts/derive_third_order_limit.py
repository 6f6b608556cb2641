#!/usr/bin/env python3
"""Derive the piecewise tau -> infinity posterior covariance of the thrice
integrated Wiener process after observing x(0), x'(0), x'(hu), x'(hv).

In the limit the prior splits into a flat (improper) prior on the Taylor state
(x, x', x'', x''') at the step start plus integrated Wiener noise that runs
forward for s > 0 and backward for s < 0. With four observations for four
Taylor coefficients the posterior is the covariance of the residual process

    r(s) = n(s) - g(s)^T n_obs,    g(s) = H^{-T} phi(s),

which is a piecewise polynomial in (s, s'). Branches are indexed by the
interval containing each argument: 0 -> s <= 0, 1 -> (0, hu], 2 -> (hu, hv],
3 -> s > hv, with s' in a branch no later than s.

Writes crates/core/src/gmrk/limit3.rs. Requires sympy.
"""
import pathlib
import sympy as sp

x, y, u, v = sp.symbols("x y u v", positive=True)


def k(q, a, b, a_ge_b):
    m, M = (b, a) if a_ge_b else (a, b)
    d = M - m
    if q == 0:
        return m
    if q == 1:
        return m**3 / 3 + d * m**2 / 2
    if q == 2:
        return m**5 / 20 + d / 12 * ((a + b) * m**3 - m**4 / 2)
    return m**7 / 252 + d * m**4 / 720 * (5 * M**2 + 2 * a * b + 3 * m**2)


def kd(a, b, a_gt_b):
    """d/db of the thrice integrated kernel."""
    if a_gt_b:
        return b**3 / 720 * (20 * a**3 - 15 * a * a * b + 6 * a * b * b - b**3)
    return a**4 / 720 * (15 * b * b - 6 * a * b + a * a)


def branch(rs, rt):
    # normalized units: h = 1, nodes at u < v
    nodes = [u, v]
    q = 3
    phi = lambda z: [z**j / sp.factorial(j) for j in range(q + 1)]
    dphi = lambda z: [0] + [z ** (j - 1) / sp.factorial(j - 1) for j in range(1, q + 1)]
    H = sp.Matrix([phi(0), dphi(0)] + [dphi(c) for c in nodes])
    G = H.T.inv()
    gs, gt = G * sp.Matrix(phi(x)), G * sp.Matrix(phi(y))

    def noise(a, ra, b, rb):
        if ra > 0 and rb > 0:
            return k(q, a, b, True)
        if ra == 0 and rb == 0:
            return k(q, -a, -b, False)
        return 0

    def cross(a, ra, i):
        return 0 if ra == 0 else kd(a, nodes[i], ra > i + 1)

    val = noise(x, rs, y, rt)
    for i in range(2):
        val -= gs[i + 2] * cross(y, rt, i) + gt[i + 2] * cross(x, rs, i)
        for j in range(2):
            val += gs[i + 2] * gt[j + 2] * k(q - 1, nodes[i], nodes[j], i >= j)
    return sp.Poly(sp.expand(sp.simplify(val)), x, y)


def monomial(i, name):
    return [] if i == 0 else [name] if i == 1 else [f"{name}.powi({i})"]


def rational(r):
    r = abs(sp.Rational(r))
    return f"{r.p}.0" if r.q == 1 else f"({r.p}.0 / {r.q}.0)"


def polynomial(expr):
    poly = sp.Poly(sp.expand(expr), u, v)
    text = ""
    for n, ((i, j), c) in enumerate(poly.terms()):
        factors = monomial(i, "u") + monomial(j, "v")
        if abs(c) != 1 or not factors:
            factors = [rational(c)] + factors
        sign = "-" if c < 0 else "+"
        if n == 0:
            text = ("-" if c < 0 else "") + " * ".join(factors)
        else:
            text += f" {sign} " + " * ".join(factors)
    return "(" + text + ")"


def term(mono, coeff):
    num, den = sp.fraction(sp.together(sp.factor(coeff)))
    i, j = mono
    text = polynomial(num)
    if den != 1:
        text += " / " + polynomial(den)
    return " * ".join([f"({text})"] + monomial(i, "x") + monomial(j, "y"))


def main():
    out = [
        "// Generated by scripts/derive_third_order_limit.py. Do not edit by hand.",
        "//",
        "// Normalized units: x = s/h, y = s'/h, nodes at u < v, unit output scale.",
        "// Multiply by h^7 to restore time units.",
        "",
        "#![allow(clippy::all)]",
        "",
        "/// Evaluates branch `(region_s, region_t)` with `region_t <= region_s`.",
        "pub(super) fn branch(region_s: u8, region_t: u8, x: f64, y: f64, u: f64, v: f64) -> Option<f64> {",
        "    let value = match (region_s, region_t) {",
    ]
    for rs in range(3, -1, -1):
        for rt in range(rs, -1, -1):
            poly = branch(rs, rt)
            terms = [term(m, c) for m, c in poly.terms()]
            body = "\n            + ".join(terms)
            out.append(f"        ({rs}, {rt}) => {{\n            {body}\n        }}")
    out += ["        _ => return None,", "    };", "    Some(value)", "}", ""]
    dest = pathlib.Path(__file__).resolve().parent.parent / "crates/core/src/gmrk/limit3.rs"
    dest.write_text("\n".join(out))
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()

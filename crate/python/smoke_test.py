"""Smoke test for the gmrk_py extension module.

Build and install first:  maturin develop -m crates/python/Cargo.toml
"""

import math

import gmrk_py as g


def close(a, b, tol):
    assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)


def main():
    tab = g.Tableau(3, u=0.5, v=1.0)
    for got, want in zip(tab.b, [1 / 6, 2 / 3, 1 / 6]):
        close(got, want, 1e-15)
    assert tab.check_order_conditions()
    try:
        g.Tableau(3, u=2 / 3)
    except ValueError as e:
        assert "denominator" in str(e)
    else:
        raise AssertionError("u = 2/3 must be rejected")

    prob = g.Problem("linear")
    s = g.step(prob, 1.0, order=2, alpha=0.5)
    assert s.x1 == 0.625 and s.weights_b == [0.0, 1.0]
    assert s.variance_at_end >= 0.0

    naive = g.solve(prob, h=1.0, steps=10, mode="naive")
    close(naive.mean(10.0), 0.625**10, 1e-12)
    assert naive.std(5.0) is None

    cont = g.solve(prob, h=1.0, steps=10, mode="continuation")
    stds = [cont.std(float(n)) for n in range(11)]
    assert all(b >= a for a, b in zip(stds, stds[1:])), stds
    rows = cont.grid(4)
    assert len(rows) == 41 and rows[-1][0] == 10.0
    close(rows[-1][3], math.exp(-5.0), 1e-15)

    assert abs(cont.mean(10.0) - math.exp(-5.0)) < abs(g.se_endpoint(prob, 1.0, 10, 1.0) - math.exp(-5.0))
    close(g.wiener_k(1, 1.0, 1.0), 1 / 3, 1e-15)
    close(g.wiener_kd(1, 2.0, 1.0), 1.5, 1e-15)
    print("gmrk_py smoke test passed")


if __name__ == "__main__":
    main()

"""Exit criteria, one test each, at the pinned tolerances."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from volterra_spectral import (
    LogPowerSeries,
    PowerSeries,
    general_solution,
    homogeneous_series,
    iterate_eigenfunction,
    residual,
)
from volterra_spectral.cli import main
from volterra_spectral.series import (
    combine,
    dilate,
    evaluate,
    integrate_from_zero,
    lps_dilate,
    lps_eval,
    lps_integrate_from_zero,
)
from volterra_spectral.spectrum import check_conditions

from conftest import make_spec

LN2 = math.log(2)
EXAMPLE = {"alpha": 0.5, "a": [1], "kernel": [[1]], "f": [2]}


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(json.dumps(EXAMPLE))
    return str(path)


def cli_json(argv, capsys):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


@pytest.mark.criterion("1 eigenvalues a(0) alpha^n, exact ratio")
def test_eigenvalue_formula(example_file, capsys):
    lams = [e["lambda"] for e in cli_json(["--problem", example_file, "spectrum", "--count", "10"], capsys)["eigenvalues"]]
    assert lams == [2.0**-n for n in range(10)]
    assert all(b / a == 0.5 for a, b in zip(lams, lams[1:]))


@pytest.mark.criterion("2 series coefficients match product formula to 1e-12")
def test_product_formula():
    c = homogeneous_series(make_spec(), 0, 30).coeffs
    c1 = c[1]
    for n in range(2, 31):
        exact = Fraction(1, math.factorial(n))
        for k in range(2, n + 1):
            exact /= 1 - Fraction(1, 2**k)
        assert abs(c[n] / c1 - float(exact)) <= 1e-12 * float(exact)
    assert abs(c[2] / c1 - 2 / 3) <= 1e-12 * 2 / 3
    assert abs(c[3] / c1 - 16 / 63) <= 1e-12 * 16 / 63


@pytest.mark.criterion("3 resonant log coefficients b0, b1 and log-recurrence residual")
def test_resonant_log(example_file, capsys):
    sol = cli_json(["--problem", example_file, "solve", "--lambda", "1"], capsys)
    b = sol["Q"]
    assert abs(b[0] - 2 / LN2) <= 1e-12 * (2 / LN2)
    assert abs(b[1] - 4 / LN2) <= 1e-12 * (4 / LN2)
    assert abs(b[2] - 8 / (3 * LN2)) <= 1e-12 * (8 / (3 * LN2))
    spec = make_spec(f=(2.0,))
    x = LogPowerSeries(PowerSeries(sol["P"]), PowerSeries(b))
    assert residual(spec, 1.0, x, (0.01, 1.0)).sup_norm <= 1e-8
    # the recurrence b_i = 2^i/(2^i - 1) b_{i-1}, lacking 1/i, must fail the same oracle
    no_factor = [2 / LN2, 4 / LN2]
    for i in range(2, 31):
        no_factor.append(2**i / (2**i - 1) * no_factor[-1])
    wrong = LogPowerSeries(PowerSeries(sol["P"]), PowerSeries(no_factor))
    assert residual(spec, 1.0, wrong, (0.01, 1.0)).sup_norm > 1e-8


@pytest.mark.criterion("4 general solution residual <= 1e-8, c-variation <= 1e-9")
def test_general_solution():
    spec = make_spec(f=(2.0,))
    reports = [residual(spec, 1.0, general_solution(spec, 1.0, c, 30), (0.01, 1.0)) for c in (0.0, 1.0, 5.0)]
    assert all(r.sup_norm <= 1e-8 for r in reports)
    assert max(abs(r.sup_norm - reports[0].sup_norm) for r in reports) <= 1e-9
    assert max(np.max(np.abs(r.r - reports[0].r)) for r in reports) <= 1e-9


@pytest.mark.criterion("5 fixed-point contraction ratio <= q(L)+0.05, tol 1e-12 in <= 200 iterations")
def test_fixed_point_contraction():
    run = iterate_eigenfunction(make_spec(), 0, eps=0.5, tol=1e-12, max_iter=200)
    assert run.trace.converged and run.trace.iterations <= 200
    assert run.trace.differences[-1] <= 1e-12
    assert run.contraction.q_of_L < 1
    assert np.all(run.trace.ratios <= run.contraction.q_of_L + 0.05)


@pytest.mark.criterion("6 series vs fixed-point eigenfunction within 1e-6 on [0, 0.5]")
def test_cross_validation():
    spec = make_spec()
    run = iterate_eigenfunction(spec, 0)
    series = homogeneous_series(spec, 0, 30)
    half = spec.T / 2
    t = np.linspace(0.0, half, 1001)
    a = series(t) / series(half)
    b = run.phi(t) / run.phi(half)
    assert np.max(np.abs(a - b)) <= 1e-6


@pytest.mark.criterion("7 asymptotics phi_n ~ t^n, slope >= 0.45 for n = 0, 1, 2")
def test_asymptotics():
    spec = make_spec()
    t = np.geomspace(1e-3, 1e-1, 40)
    for n in (0, 1, 2):
        run = iterate_eigenfunction(spec, n)
        dev = np.abs(run.phi(t) / t**n - 1)
        slope = np.polyfit(np.log(t), np.log(dev), 1)[0]
        C = np.max(dev / t**0.5)
        assert slope >= 0.45 and np.isfinite(C)


@pytest.mark.criterion("8 x = x(t/2) + 2 solved by (2/ln 2) ln t")
def test_pure_functional_log():
    spec = make_spec(kernel=(), f=(2.0,))
    sol = general_solution(spec, 1.0, 0.0, 30)
    Q = sol.particular.Q.coeffs
    assert abs(Q[0] - 2 / LN2) <= 1e-12 * (2 / LN2)
    assert all(q == 0.0 for q in Q[1:])
    assert residual(spec, 1.0, sol, (0.01, 1.0)).sup_norm <= 1e-12


@pytest.mark.criterion("9 condition checks: constant a passes, a = 1 + t fails with q_hat ~ 1.41421")
def test_conditions():
    spec = make_spec()
    for eps in np.arange(1, 10) / 10:
        rep = check_conditions(spec, eps)
        assert rep.holds and rep.q_hat == pytest.approx(0.5**eps, rel=1e-14)
    rep = check_conditions(make_spec(a=(1.0, 1.0)), 0.5)
    assert not rep.holds and abs(rep.q_hat - 1.41421) <= 1e-5


@pytest.mark.criterion("10 series-algebra identities over 1000 random cases at 1e-12")
def test_series_properties():
    rng = np.random.default_rng(20240501)
    for _ in range(1000):
        n = int(rng.integers(0, 16))
        x = PowerSeries(rng.uniform(-5, 5, n + 1))
        y = PowerSeries(rng.uniform(-5, 5, n + 1))
        alpha, beta = rng.uniform(0.01, 0.99, 2)
        a, b = rng.uniform(-3, 3, 2)
        t = rng.uniform(-1.5, 1.5)
        tp = rng.uniform(1e-3, 1.5)
        xs = sum(abs(c) for c in x.coeffs)

        # dilation homomorphism
        scale = xs * max(1.0, abs(t)) ** n
        assert abs(evaluate(dilate(x, alpha), t) - evaluate(x, alpha * t)) <= 1e-12 * scale
        # dilation semigroup, coefficient-wise
        lhs, rhs = dilate(dilate(x, alpha), beta), dilate(x, alpha * beta)
        assert all(abs(u - v) <= 1e-12 * abs(v) + 1e-300 for u, v in zip(lhs.coeffs, rhs.coeffs))
        # integration linearity, coefficient-wise
        lhs = integrate_from_zero(combine(a, x, b, y))
        rhs = combine(a, integrate_from_zero(x), b, integrate_from_zero(y))
        bound = [abs(a * xi) + abs(b * yi) for xi, yi in zip((0.0,) + x.coeffs, (0.0,) + y.coeffs)]
        assert all(abs(u - v) <= 1e-12 * s for u, v, s in zip(lhs.coeffs, rhs.coeffs, bound))

        # log series: dilation homomorphism and integration against the closed form
        z = LogPowerSeries(x, y)
        zs = xs + sum(abs(c) for c in y.coeffs) * (1 + abs(math.log(alpha * tp)))
        assert abs(lps_eval(lps_dilate(z, alpha), tp) - lps_eval(z, alpha * tp)) <= 1e-12 * zs * max(1.0, tp) ** n
        F = lps_integrate_from_zero(z)
        closed = sum(
            xi * tp ** (i + 1) / (i + 1) + yi * (tp ** (i + 1) * math.log(tp) / (i + 1) - tp ** (i + 1) / (i + 1) ** 2)
            for i, (xi, yi) in enumerate(zip(x.coeffs, y.coeffs))
        )
        fs = (xs + sum(abs(c) for c in y.coeffs) * (1 + abs(math.log(tp)))) * max(1.0, tp) ** (n + 1)
        assert abs(lps_eval(F, tp) - closed) <= 1e-12 * fs

import math

import numpy as np
import pytest

from LambdaVarInsurance.core.dist import (
    Empirical,
    Exponential,
    LogNormal,
    Pareto,
    Uniform,
    load_empirical,
    quad_layer_expectation,
)
from LambdaVarInsurance.core.validation import DomainError


def test_pareto_closed_forms():
    d = Pareto(2.0)
    assert d.cdf(1.0) == pytest.approx(0.75)
    assert d.quantile(0.8) == pytest.approx(math.sqrt(5.0) - 1.0)
    assert d.quantile(1.0) == math.inf
    assert d.layer_expectation(0.0, math.inf) == pytest.approx(1.0)
    assert d.moments().variance == math.inf


def test_heavy_pareto_has_infinite_mean():
    d = Pareto(0.8)
    assert d.mean == math.inf
    assert d.layer_expectation(1.0, math.inf) == math.inf
    assert d.layer_expectation(0.0, 3.0) == pytest.approx(quad_layer_expectation(d, 0.0, 3.0), rel=1e-8)


def test_exponential_layer_matches_quadrature():
    d = Exponential(2.0)
    assert d.layer_expectation(0.3, 1.7) == pytest.approx(quad_layer_expectation(d, 0.3, 1.7), rel=1e-9)
    assert d.layer_expectation(0.0, math.inf) == pytest.approx(0.5)


def test_uniform_and_lognormal_layers():
    u = Uniform(2.0)
    assert u.layer_expectation(0.5, 5.0) == pytest.approx(quad_layer_expectation(u, 0.5, 2.0), rel=1e-9)
    assert u.ess_sup == pytest.approx(2.0)
    ln = LogNormal(0.0, 0.5)
    assert ln.layer_expectation(0.0, math.inf) == pytest.approx(ln.mean, rel=1e-9)
    assert ln.layer_expectation(0.5, 2.0) == pytest.approx(quad_layer_expectation(ln, 0.5, 2.0), rel=1e-7)


def test_domain_errors():
    with pytest.raises(DomainError):
        Pareto(0.0)
    with pytest.raises(DomainError):
        Exponential(1.0).cdf(-1.0)
    with pytest.raises(DomainError):
        Exponential(1.0).quantile(1.5)
    with pytest.raises(DomainError):
        Exponential(1.0).layer_expectation(2.0, 1.0)
    with pytest.raises(DomainError):
        Exponential(1.0).sample(0, seed=1)


def test_sample_is_sorted_and_seeded():
    d = Exponential(1.0)
    first = d.sample(50, seed=5)
    assert np.all(np.diff(first) >= 0)
    assert np.array_equal(first, d.sample(50, seed=5))


def test_empirical_step_cdf():
    d = Empirical((3.0, 1.0, 2.0, 2.0))
    assert d.values == (1.0, 2.0, 2.0, 3.0)
    assert d.cdf(2.0) == pytest.approx(0.75)
    assert d.cdf_left(2.0) == pytest.approx(0.25)
    assert d.quantile(0.25) == 1.0
    assert d.quantile(0.5) == 2.0
    assert d.quantile(1.0) == 3.0
    assert d.layer_expectation(1.5, math.inf) == pytest.approx((0.5 + 0.5 + 1.5) / 4)


def test_load_empirical(tmp_path):
    path = tmp_path / "losses.txt"
    path.write_text("1.5\n\n0.5\n2\n")
    d = load_empirical(path)
    assert d.values == (0.5, 1.5, 2.0)
    assert d.to_dict()["path"] == str(path)

    bad = tmp_path / "bad.txt"
    bad.write_text("1\nabc\n")
    with pytest.raises(DomainError):
        load_empirical(bad)
    with pytest.raises(DomainError):
        load_empirical(tmp_path / "missing.txt")

import numpy as np
import pytest

from qdhmc.errors import ConfigError, DomainError
from qdhmc.grid import RegisterSpec, all_coords
from qdhmc.targets import REGISTRY, energy, grad_energy, make_target, tempered_log_prob

CASES = [("gaussian", 1), ("gaussian", 3), ("gaussian_centered", 2), ("rosenbrock", 2),
         ("rosenbrock", 4), ("double_well", 1), ("double_well", 2), ("styblinski_tang", 3)]


def test_registry_names():
    assert set(REGISTRY) == {"gaussian", "gaussian_centered", "rosenbrock", "double_well",
                             "styblinski_tang"}


def test_reference_values():
    assert make_target("gaussian", 2).log_prob(np.zeros(2)) == 0.0
    assert make_target("gaussian", 2).log_prob(np.array([1.0, -2.0])) == pytest.approx(-2.0 - 2.0)
    assert make_target("rosenbrock", 2).log_prob(np.ones(2)) == 0.0
    assert make_target("rosenbrock", 3).log_prob(np.array([0.0, 1.0, 0.0])) == pytest.approx(-(10 + 1 + 10 + 0))
    dw = make_target("double_well", 2)
    assert dw.log_prob(np.zeros(2)) == 0.0
    np.testing.assert_allclose(dw.grad_log_prob(np.zeros(2)), [-0.5, 0.0])
    assert dw.log_prob(np.array([1.0, 2.0])) == pytest.approx(-(1 - 4 + 4) - 0.5)
    st = make_target("styblinski_tang", 1)
    assert st.log_prob(np.array([2.0])) == pytest.approx(-0.5 * (16 - 64 + 10))


def test_vectorized_over_leading_axes():
    t = make_target("rosenbrock", 3)
    x = np.random.default_rng(0).normal(size=(4, 5, 3))
    out = t.log_prob(x)
    assert out.shape == (4, 5)
    assert out[2, 3] == t.log_prob(x[2, 3])


@pytest.mark.parametrize("name,n", CASES)
def test_gradient_matches_finite_differences(name, n):
    t = make_target(name, n, temperature=0.7)
    rng = np.random.default_rng(CASES.index((name, n)))
    h = 1e-5
    worst = 0.0
    for x in rng.uniform(-2, 2, size=(100, n)):
        g = grad_energy(t, x)
        fd = np.array([(energy(t, x + h * e) - energy(t, x - h * e)) / (2 * h) for e in np.eye(n)])
        worst = max(worst, np.max(np.abs(g - fd) / np.maximum(1.0, np.abs(g))))
    assert worst <= 1e-5


def test_temperature_scaling():
    x = np.array([0.3, -1.1])
    for name in REGISTRY:
        hot = make_target(name, 2, 1.0)
        cold = make_target(name, 2, 0.1)
        assert energy(cold, x) == pytest.approx(10 * energy(hot, x), rel=1e-12)
        assert tempered_log_prob(cold, x) == pytest.approx(-energy(cold, x))
        np.testing.assert_allclose(grad_energy(cold, x), 10 * grad_energy(hot, x), rtol=1e-12)


def test_argmin_is_temperature_invariant():
    spec = RegisterSpec(5, 2)
    x = all_coords(spec)
    for name in REGISTRY:
        picks = {int(np.argmin(energy(make_target(name, 2, T), x))) for T in (0.01, 0.3, 1.0, 20.0)}
        assert len(picks) == 1


def test_gaussian_minimum_at_minus_half():
    t = make_target("gaussian", 1)
    x = np.linspace(-3, 3, 60001)[:, None]
    assert x[np.argmin(energy(t, x)), 0] == pytest.approx(-0.5, abs=1e-4)
    np.testing.assert_allclose(grad_energy(t, np.array([-0.5])), [0.0], atol=1e-15)


@pytest.mark.parametrize("name,n", [("rosenbrock", 1), ("double_well", 3), ("gaussian", 0)])
def test_dimension_errors(name, n):
    with pytest.raises(ConfigError):
        make_target(name, n)


def test_unknown_target_and_bad_temperature():
    with pytest.raises(ConfigError, match="unknown target"):
        make_target("banana")
    with pytest.raises(ConfigError):
        make_target("gaussian", 1, temperature=0.0)


def test_domain_errors():
    t = make_target("gaussian", 2)
    with pytest.raises(DomainError):
        energy(t, np.array([np.nan, 0.0]))
    with pytest.raises(DomainError):
        grad_energy(t, np.zeros(3))

# tests/test_noise.py

import pytest
from ghz_anon.adversary.noise import (
    NoiseSpec,
    NoisySource,
    eigenspace_junk,
    even_parity_probability,
    junk_labels,
    make_noisy_source,
    minus_junk,
    noise_from_delta,
    noise_from_epsilon,
    parse_junk,
    perturbed_state,
)
from ghz_anon.quantum.register import fidelity, ghz_state
from ghz_anon.utils.errors import ConfigurationError, DomainError
from ghz_anon.utils.rng import make_rng


def test_minus_junk_solves_delta():
    """Test eps = delta * 2(n+1) for |psi-> junk"""
    spec = noise_from_epsilon(5, 0.4, 'minus')
    assert spec.alpha == pytest.approx(-6.0)
    assert spec.delta == pytest.approx(0.4 / 12)
    assert spec.epsilon == pytest.approx(0.4)
    assert spec.bell_expectation == pytest.approx(5.6)


def test_eigen_junk_from_delta():
    """Test eps = delta * (n+1 - alpha) for eigenspace junk"""
    spec = noise_from_delta(5, 0.04, 'eigen:2')
    assert spec.alpha == pytest.approx(2.0)
    assert spec.epsilon == pytest.approx(0.16)


def test_lattice_top_is_next_eigenvalue():
    """Test lattice-top junk sits on eigenvalue n-3"""
    spec = noise_from_epsilon(5, 0.4, 'lattice-top')
    assert spec.alpha == pytest.approx(2.0)
    assert spec.delta == pytest.approx(0.1)


def test_zero_noise():
    """Test zero deficit needs no junk"""
    spec = noise_from_epsilon(3, 0.0)
    assert spec.delta == 0.0
    assert spec.junk == []
    assert NoisySource(spec).exact_parity_success() == 1.0


def test_parse_junk_labels():
    """Test junk labels"""
    assert len(parse_junk(5, 'minus')) == 1
    assert len(parse_junk(5, 'eigen:-2')) == 15
    assert len(parse_junk(5, None)) == 1
    with pytest.raises(ConfigurationError, match="Invalid eigenvalue"):
        parse_junk(5, 'eigen:x')
    with pytest.raises(ConfigurationError, match="Unknown junk label"):
        parse_junk(5, 'thermal')
    with pytest.raises(DomainError):
        eigenspace_junk(5, 6)


def test_junk_labels():
    """Test the advertised labels"""
    assert junk_labels(5) == ['minus', 'eigen:2', 'eigen:-2', 'eigen:-6']


def test_spec_validation():
    """Test inconsistent specs"""
    with pytest.raises(ConfigurationError):
        NoiseSpec(n=3, delta=0.1)
    with pytest.raises(ConfigurationError):
        NoiseSpec(n=3, junk=minus_junk(3), delta=0.1, target_epsilon=0.1)
    with pytest.raises(DomainError, match="overlaps"):
        NoiseSpec(n=3, junk=[(1.0, ghz_state(3, '+'))], delta=0.1)
    with pytest.raises(DomainError, match="sum to 1"):
        NoiseSpec(n=3, junk=[(0.5, ghz_state(3, '-'))], delta=0.1)
    with pytest.raises(DomainError):
        NoiseSpec(n=3, junk=minus_junk(3), delta=1.5)


def test_unreachable_epsilon():
    """Test deficits that need delta > 1"""
    with pytest.raises(DomainError, match="unreachable"):
        noise_from_epsilon(3, 10.0, 'minus')


def test_even_parity_probability():
    """Test X-parity statistics of the GHZ pair"""
    assert even_parity_probability(ghz_state(3, '+')) == pytest.approx(1.0)
    assert even_parity_probability(ghz_state(3, '-')) == pytest.approx(0.0)


def test_exact_parity_success_minus_junk():
    """Test Parity succeeds with 1 - delta on |psi-> junk"""
    spec = noise_from_epsilon(5, 0.4, 'minus')
    assert NoisySource(spec).exact_parity_success() == pytest.approx(1 - 0.4 / 12)


def test_exact_parity_success_eigen_junk():
    """Test eigenspace junk mixes even and odd parity states"""
    spec = noise_from_delta(5, 0.3, 'eigen:2')
    # 10 of the 15 eigenvectors are even superpositions
    assert NoisySource(spec).exact_parity_success() == pytest.approx(1 - 0.3 / 3)


@pytest.mark.statistical
def test_noisy_source_draw_frequency():
    """Test junk is drawn with probability delta"""
    source = NoisySource(noise_from_delta(3, 0.5, 'minus'))
    rng = make_rng(11)
    minus = ghz_state(3, '-')
    hits = sum(source.draw(rng).allclose(minus) for _ in range(4000))
    assert 0.45 < hits / 4000 < 0.55
    assert source.copies_drawn == 4000


def test_make_noisy_source_checks_n():
    """Test specs built for another n are rejected"""
    with pytest.raises(DomainError):
        make_noisy_source(5, noise_from_epsilon(3, 0.1))
    source = make_noisy_source(3, noise_from_epsilon(3, 0.1))
    assert source.describe()['junk'] == 'minus'


def test_perturbed_state_fidelity():
    """Test the pure perturbed state keeps weight 1 - delta on |psi+>"""
    spec = noise_from_delta(5, 0.04, 'eigen:2')
    state = perturbed_state(spec)
    assert fidelity(state, ghz_state(5)) ** 2 == pytest.approx(0.96)

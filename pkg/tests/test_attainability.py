import numpy as np
import pytest

from carnotreach.attainability import (
    ATTAINABLE_BEYOND,
    UNATTAINABLE_BEYOND,
    enumerate_patterns,
    fit,
    max_min_coordinate,
    probe,
)
from carnotreach.words import InvariantViolation, PqrPoint, pqr, random_word

PHI = (np.sqrt(5.0) - 1.0) / 2.0


def test_enumerate_patterns_counts():
    # 3 * 2^(n-1) no-adjacent-repeat sequences, minus the 6 two-letter ones
    for n, expected in ((3, 6), (4, 18), (5, 42), (6, 90)):
        assert len([p for p in enumerate_patterns(n) if len(p) == n]) == expected
    for p in enumerate_patterns(5):
        assert set(p) == {1, 2, 3}
        assert all(a != b for a, b in zip(p, p[1:]))
    with pytest.raises(InvariantViolation):
        enumerate_patterns(2)


def test_fit_vertices_exactly():
    for target in (PqrPoint(1, 1, 0), PqrPoint(0, 0, 1), PqrPoint(1, 0, 0)):
        result = fit(target, max_arcs=3)
        assert result.status == "attained"
        assert result.residual <= 1e-12


def test_fit_returns_reproducing_witness():
    result = fit(PqrPoint(0.6, 0.5, 0.4), seed=1)
    assert result.status == "attained"
    got = pqr(result.witness).as_array()
    assert np.linalg.norm(got - [0.6, 0.5, 0.4]) == result.residual
    assert result.residual <= 1e-7


def test_fit_round_trip_hidden_words():
    rng = np.random.default_rng(0)
    for _ in range(30):
        w = random_word(int(rng.integers(3, 9)), int(rng.integers(2**31)))
        target = pqr(w)
        result = fit(target, tol=1e-8, n_starts=8, seed=int(rng.integers(2**31)))
        assert result.status == "attained"
        assert result.residual <= 1e-8


def test_fit_reports_not_found_outside():
    # the all-cyclic point beyond the golden bound is not attainable
    result = fit(PqrPoint(0.7, 0.7, 0.7), seed=0)
    assert result.status == "not-found"
    assert result.witness is None
    assert result.residual > 1e-3


def test_fit_monotone_in_max_arcs():
    target = PqrPoint(0.55, 0.45, 0.6)
    r5 = fit(target, max_arcs=5, tol=1e-16, seed=3, n_starts=4)
    r7 = fit(target, max_arcs=7, tol=1e-16, seed=3, n_starts=4)
    assert r7.residual <= r5.residual + 1e-15


def test_fit_deterministic():
    target = PqrPoint(0.52, 0.48, 0.5)
    a = fit(target, seed=7)
    b = fit(target, seed=7)
    assert a == b


def test_fit_validates_arguments():
    t = PqrPoint(0.5, 0.5, 0.5)
    with pytest.raises(InvariantViolation):
        fit(t, max_arcs=2)
    with pytest.raises(InvariantViolation):
        fit(t, tol=0.0)
    with pytest.raises(InvariantViolation):
        fit(t, n_starts=0)


def test_probe_directions():
    inward = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    center = PqrPoint(0.5, 0.5, 0.5)
    assert probe(center, inward, eps=0.05, max_arcs=6, n_starts=8) == ATTAINABLE_BEYOND
    golden = PqrPoint(PHI, PHI, PHI)
    assert probe(golden, inward, eps=1e-3, max_arcs=8) == UNATTAINABLE_BEYOND
    # leaving the cube is unattainable outright
    assert probe(PqrPoint(1.0, 0.5, 0.5), (1, 0, 0)) == UNATTAINABLE_BEYOND
    with pytest.raises(InvariantViolation):
        probe(center, inward, eps=0.0)


def test_interior_point_both_sides_attainable():
    x = PqrPoint(0.75, 0.5, 0.5)
    n = np.array([1.0, 0.5, 0.5])
    n = n / np.linalg.norm(n)
    kwargs = dict(max_arcs=6, n_starts=8, seed=0)
    assert probe(x, n, eps=1e-3, **kwargs) == ATTAINABLE_BEYOND
    assert probe(x, -n, eps=1e-3, **kwargs) == ATTAINABLE_BEYOND


def test_max_min_coordinate_golden():
    val, word = max_min_coordinate(max_arcs=5)
    assert abs(val - PHI) <= 1e-6
    pt = pqr(word)
    assert min(pt.p, pt.q, pt.r) >= val - 1e-9

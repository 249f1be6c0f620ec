import json

import numpy as np
import pytest

import deblur1d


def test_sample_prior_shapes_and_determinism():
    u1, v1 = deblur1d.sample_prior(4, 0.25, seed=7)
    u2, v2 = deblur1d.sample_prior(4, 0.25, seed=7)
    assert u1.shape == (16,) and v1.shape == (16,)
    assert np.array_equal(u1, u2) and np.array_equal(v1, v2)
    u3, _ = deblur1d.sample_prior(4, 0.25, seed=8)
    assert not np.array_equal(u1, u3)


def test_forward_matrix_preserves_constants():
    a = deblur1d.forward_matrix(4, 3, width=0.05)
    assert a.shape == (8, 16)
    # a mass-one kernel maps the constant 1 to itself, and the measurement
    # coordinates are L2-orthonormal, so ||P_k A 1||_2 = ||1||_L2 = 1
    coords = a @ np.ones(16)
    assert abs(np.linalg.norm(coords) - 1.0) < 1e-10


def test_synthesize_noiseless_matches_matrix():
    rng = np.random.default_rng(0)
    u = rng.normal(size=16)
    a = deblur1d.forward_matrix(4, 4, width=0.04)
    m = deblur1d.synthesize(u, 4, width=0.04, sigma=0.0, seed=1)
    assert np.allclose(m, a @ u, atol=1e-12)


def test_estimate_runs_and_reports():
    cfg = {
        "n": 3,
        "k": 3,
        "epsilon": 0.05,
        "kernel": {"type": "periodized_gaussian", "width": 0.05},
        "mcmc": {"sweeps": 5000, "seed": 5},
    }
    u_true = np.where(np.arange(8) < 4, 1.0, -1.0)
    m = deblur1d.synthesize(u_true, 3, width=0.05, sigma=1.0, seed=2)
    out = deblur1d.estimate(m, 3, json.dumps(cfg))
    assert out["u_cm"].shape == (8,) and out["v_cm"].shape == (8,)
    assert np.all(np.isfinite(out["u_cm"])) and np.all(np.isfinite(out["v_cm"]))
    assert 0.0 <= out["acceptance"] <= 1.0
    assert out["samples"] == 4500


def test_log_posterior_pinned_at_zero():
    cfg = {"n": 2, "k": 2, "epsilon": 0.25}
    m = np.zeros(4)
    lp0 = deblur1d.log_posterior(np.zeros(8), m, 2, json.dumps(cfg))
    assert lp0 == pytest.approx(0.0, abs=1e-12)
    lp1 = deblur1d.log_posterior(0.1 * np.ones(8), m, 2, json.dumps(cfg))
    assert np.isfinite(lp1) and lp1 != lp0


def test_exp_moments_finite():
    est = deblur1d.exp_moments([2, 3], b=1.0, nsamples=500, epsilon=0.25, seed=3)
    assert [e.level for e in est] == [2, 3]
    for e in est:
        assert np.isfinite(e.log_estimate) and e.log_estimate > 0
        assert e.rel_std_error >= 0

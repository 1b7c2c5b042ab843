"""Instantaneous and ergodic downlink rate."""

import math

import numpy as np
import pytest

from isacbounds import (
    CommChannel,
    DomainError,
    ergodic_rate_closed,
    ergodic_rate_mc,
    instantaneous_rate,
    steered_beamformer,
)

DEG = math.pi / 180.0

# 40-digit oracle values of log2(e) e^(1/rho) E1(1/rho)
RATE_AT_1 = 0.86034738227088595
RATE_AT_10 = 2.906514808414805
RATE_AT_100 = 5.8840482336834735


def channel_and_beam(mean_gain=1.0, noise_var=1.0):
    ch = CommChannel(theta_c=45 * DEG, mean_gain=mean_gain, noise_var=noise_var)
    w = steered_beamformer(45 * DEG, 8, 1.0)  # matched: gain 8
    return ch, w


class TestInstantaneousRate:
    def test_zero_channel(self):
        ch, w = channel_and_beam()
        assert instantaneous_rate(0.0, ch, w) == 0.0

    def test_unit_snr_gives_one_bit(self):
        ch, w = channel_and_beam(noise_var=8.0)  # |alpha|^2 * 8 / 8 = 1
        assert abs(instantaneous_rate(1.0, ch, w) - 1.0) < 1e-12

    def test_snr_three_gives_two_bits(self):
        ch, w = channel_and_beam(noise_var=8.0)
        assert abs(instantaneous_rate(math.sqrt(3.0), ch, w) - 2.0) < 1e-12


class TestErgodicRateClosed:
    def test_reference_values(self):
        assert abs(ergodic_rate_closed(1.0) - RATE_AT_1) < 1e-11
        assert abs(ergodic_rate_closed(10.0) - RATE_AT_10) < 1e-11
        assert abs(ergodic_rate_closed(100.0) - RATE_AT_100) < 1e-11

    def test_domain(self):
        for bad in (0.0, -5.0):
            with pytest.raises(DomainError):
                ergodic_rate_closed(bad)

    def test_vanishes_at_low_snr(self):
        assert ergodic_rate_closed(1e-9) < 2e-9

    def test_strictly_increasing_and_concave(self):
        rhos = np.geomspace(0.01, 1e4, 60)
        vals = np.array([ergodic_rate_closed(r) for r in rhos])
        assert np.all(np.diff(vals) > 0)
        # concave in rho: second differences on a linear sub-grid
        lin = np.linspace(1.0, 100.0, 40)
        v = np.array([ergodic_rate_closed(r) for r in lin])
        assert np.all(np.diff(v, 2) < 1e-12)

    def test_jensen_bracket(self):
        gamma_e = 0.5772156649015329
        for rho in np.geomspace(0.01, 1e4, 30):
            rate = ergodic_rate_closed(rho)
            assert math.log2(1.0 + rho * math.exp(-gamma_e)) <= rate <= math.log2(1.0 + rho)


class TestErgodicRateMc:
    def test_matches_closed_form_within_3_stderr(self):
        # rho = mean_gain * 8 / noise_var = 100
        ch, w = channel_and_beam(mean_gain=12.5)
        mean, stderr = ergodic_rate_mc(ch, w, 100_000, seed=7)
        assert abs(mean - ergodic_rate_closed(100.0)) < 3.0 * stderr

    def test_degenerate_channel(self):
        ch, w = channel_and_beam(mean_gain=1e-12, noise_var=1.0)
        mean, _ = ergodic_rate_mc(ch, w, 1000, seed=0)
        assert mean < 1e-10

    def test_deterministic_given_seed(self):
        ch, w = channel_and_beam()
        a = ergodic_rate_mc(ch, w, 5000, seed=42)
        b = ergodic_rate_mc(ch, w, 5000, seed=42)
        assert a == b

    def test_sample_floor(self):
        ch, w = channel_and_beam()
        with pytest.raises(ValueError):
            ergodic_rate_mc(ch, w, 99, seed=0)

    def test_channel_validation(self):
        with pytest.raises(ValueError):
            CommChannel(theta_c=0.0, mean_gain=0.0, noise_var=1.0)
        with pytest.raises(ValueError):
            CommChannel(theta_c=0.0, mean_gain=1.0, noise_var=0.0)

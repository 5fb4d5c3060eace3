import math
import random

import pytest

from quadcpg.oscillator import (MU_MAX, MU_MIN, TWO_PI, CpgConfig,
                                InvalidCommandError, OscillatorState,
                                clamp_command, closed_form_amplitude, init_cpg,
                                step_oscillator)

CFG = CpgConfig()


def integrate(state, mu, omega, t, config=CFG):
    n = int(round(t / config.dt_integration))
    for _ in range(n):
        state = step_oscillator(state, mu, omega, config)
    return state


class TestStepOscillator:
    def test_equilibrium_is_fixed_point(self):
        state = OscillatorState(1.0, 0.0, 0.0, 0.0)
        new = step_oscillator(state, 1.0, 0.0, CFG)
        assert new.r == pytest.approx(1.0, abs=1e-15)
        assert new.r_dot == pytest.approx(0.0, abs=1e-15)
        assert new.theta == 0.0

    def test_amplitude_matches_closed_form_at_0p2s(self):
        # r(t) = 1 - (1 + 25 t) e^{-25 t} for mu=1, alpha=50, rest start
        state = integrate(OscillatorState(0.0, 0.0, 0.0, 0.0), 1.0, 0.0, 0.2)
        expected = 1.0 - (1.0 + 25.0 * 0.2) * math.exp(-25.0 * 0.2)
        assert expected == pytest.approx(0.95957, abs=5e-6)
        assert state.r == pytest.approx(expected, abs=1e-3)

    def test_phase_advance_quarter_turn(self):
        state = integrate(OscillatorState(0.0, 0.0, 0.0, 0.0), 1.0, 2.5, 0.1)
        assert state.theta == pytest.approx(math.pi / 2.0, abs=1e-9)
        assert state.theta_dot == pytest.approx(TWO_PI * 2.5)

    def test_non_finite_state_rejected(self):
        with pytest.raises(InvalidCommandError):
            step_oscillator(OscillatorState(math.nan, 0.0, 0.0, 0.0), 1.0, 1.0, CFG)
        with pytest.raises(InvalidCommandError):
            step_oscillator(OscillatorState(0.0, 0.0, 0.0, 0.0), math.inf, 1.0, CFG)


class TestClampCommand:
    def test_limits(self):
        cmd = clamp_command([5.0, 0.0, 1.0, 2.0, -1.0, 6.0, 2.0, 0.0])
        assert cmd.mu == (4.0, 0.5, 1.0, 2.0)
        assert cmd.omega == (0.0, 5.0, 2.0, 0.0)

    def test_in_range_identity_and_idempotence(self):
        raw = [1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0]
        cmd = clamp_command(raw)
        assert cmd.mu == (1.0,) * 4 and cmd.omega == (2.0,) * 4
        again = clamp_command(list(cmd.mu) + list(cmd.omega))
        assert again == cmd

    def test_nan_rejected(self):
        with pytest.raises(InvalidCommandError):
            clamp_command([math.nan] + [1.0] * 7)

    def test_wrong_length_rejected(self):
        with pytest.raises(InvalidCommandError):
            clamp_command([1.0] * 7)


class TestClosedForm:
    def test_steady_state(self):
        assert closed_form_amplitude(1.0, 50.0, 0.0, 0.0, 100.0) == pytest.approx(1.0)

    def test_initial_condition(self):
        assert closed_form_amplitude(1.0, 50.0, 0.0, 0.0, 0.0) == 0.0

    def test_reference_value(self):
        assert closed_form_amplitude(1.0, 50.0, 0.0, 0.0, 0.2) == pytest.approx(
            0.95957, abs=5e-6)

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            closed_form_amplitude(1.0, -1.0, 0.0, 0.0, 0.1)


class TestInitCpg:
    def test_trot_offsets(self):
        bank = init_cpg((0.0, math.pi, math.pi, 0.0), CFG)
        assert [s.theta for s in bank] == [0.0, math.pi, math.pi, 0.0]
        assert all(s.r == 0.0 and s.r_dot == 0.0 and s.theta_dot == 0.0
                   for s in bank)

    def test_all_in_phase(self):
        bank = init_cpg((0.0,) * 4, CFG)
        assert [s.theta for s in bank] == [0.0] * 4

    def test_wrap_convention(self):
        bank = init_cpg((3.0 * math.pi, 0.0, 0.0, 0.0), CFG)
        assert bank[0].theta == pytest.approx(math.pi)

    def test_non_finite_phase_rejected(self):
        with pytest.raises(InvalidCommandError):
            init_cpg((math.nan, 0.0, 0.0, 0.0), CFG)


class TestProperties:
    def test_oracle_equivalence_random_mu(self):
        # integration tracks the closed form within 1e-3 over [0, 2] s
        rng = random.Random(7)
        for _ in range(10):
            mu = rng.uniform(MU_MIN, MU_MAX)
            state = OscillatorState(0.0, 0.0, 0.0, 0.0)
            for n in range(2000):
                state = step_oscillator(state, mu, 0.0, CFG)
                t = (n + 1) * CFG.dt_integration
                exact = closed_form_amplitude(mu, CFG.alpha, 0.0, 0.0, t)
                assert abs(state.r - exact) < 1e-3

    def test_no_overshoot_monotone_from_rest(self):
        for mu in (0.5, 1.0, 4.0):
            state = OscillatorState(0.0, 0.0, 0.0, 0.0)
            prev = 0.0
            for _ in range(2000):
                state = step_oscillator(state, mu, 0.0, CFG)
                assert state.r >= prev - 1e-15
                assert state.r <= mu + 1e-12
                prev = state.r

    def test_amplitude_stays_nonnegative(self):
        state = OscillatorState(0.5, 0.0, 0.0, 0.0)
        for _ in range(2000):
            state = step_oscillator(state, 0.5, 3.0, CFG)
            assert state.r >= 0.0

    def test_phase_linearity_independent_of_amplitude(self):
        # same omega, different mu: phases stay identical step for step
        a = OscillatorState(0.0, 0.0, 1.0, 0.0)
        b = OscillatorState(0.0, 0.0, 1.0, 0.0)
        for _ in range(500):
            a = step_oscillator(a, 0.5, 3.3, CFG)
            b = step_oscillator(b, 4.0, 3.3, CFG)
            assert a.theta == b.theta

    def test_phase_wrap_range(self):
        state = OscillatorState(0.0, 0.0, 0.0, 0.0)
        for _ in range(3000):
            state = step_oscillator(state, 1.0, 5.0, CFG)
            assert 0.0 <= state.theta < TWO_PI


class TestConfig:
    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            CpgConfig(alpha=0.0)

    def test_invalid_dt(self):
        with pytest.raises(ValueError):
            CpgConfig(dt_integration=-1e-3)

import numpy as np
import pytest
from oracles import direct_gaussian_convolution

from oamem.decoherence import (DiffusionParams, EfficiencyModel, MagneticModel,
                               diffuse, longitudinal_drift_factor, magnetic_dephase,
                               qutrit_nodal_shift, retrieval_efficiency)
from oamem.errors import NodalLineNotFound
from oamem.fieldgrid import GridSpec, overlap
from oamem.modes import LGModeSpec, lg_field, qubit_state, qutrit_state, synthesize
from oamem.polariton import MemoryParams, SpinWave, read, write

RB85 = 85 * 1.66053906892e-27
W0 = 250e-6


@pytest.fixture
def diffusion():
    return DiffusionParams(temperature=100e-6, mass=RB85)


def stored(field):
    return write(field, MemoryParams())


class TestDiffuse:
    def test_zero_time_identity(self, grid, diffusion):
        s = stored(lg_field(LGModeSpec(1, W0), grid))
        s2 = diffuse(s, diffusion, 0.0)
        assert np.array_equal(s2.values, s.values)

    def test_sigma_value(self, diffusion):
        # 100 uK, 85 u, 500 us: one-axis spread just under 50 um
        assert diffusion.sigma(500e-6) == pytest.approx(49.45e-6, rel=1e-3)

    def test_gaussian_radius_growth(self, diffusion):
        g = GridSpec(256, 2.4e-3)
        w = 200e-6
        s = stored(lg_field(LGModeSpec(0, w), g))
        t_s = 500e-6
        s2 = diffuse(s, diffusion, t_s)
        xs = g.xs()
        row = np.abs(s2.values[g.n // 2, :])
        mask = row > row.max() * 1e-3
        slope = np.polyfit(xs[mask] ** 2, np.log(row[mask]), 1)[0]
        sigma = diffusion.sigma(t_s)
        assert np.sqrt(-1.0 / slope) == pytest.approx(np.sqrt(w ** 2 + 2 * sigma ** 2),
                                                      rel=1e-6)

    @pytest.mark.parametrize("t_s", [100e-6, 500e-6])
    def test_matches_direct_convolution(self, diffusion, t_s):
        # acceptance-grade oracle: dense separable convolution, no FFT
        g = GridSpec(128, 0.9e-3)
        f = synthesize(qutrit_state(1.0, 1.0, 1.0, l=1), 80e-6, g)
        s = SpinWave(g, f.values, 0.0, np.zeros(1), np.ones(1), np.ones(1))
        blurred = diffuse(s, diffusion, t_s)
        expected = direct_gaussian_convolution(f.values, g.pitch, diffusion.sigma(t_s))
        err = np.sqrt(np.sum(np.abs(blurred.values - expected) ** 2)
                      / np.sum(np.abs(expected) ** 2))
        assert err < 1e-6

    def test_spectral_contraction(self, grid, diffusion):
        s = stored(synthesize(qubit_state(np.pi / 2, 0.3, l=2), W0, grid))
        before = np.abs(np.fft.fft2(s.values))
        after = np.abs(np.fft.fft2(diffuse(s, diffusion, 2e-4).values))
        assert np.all(after <= before + 1e-12 * before.max())

    def test_zero_frequency_preserved(self, grid, diffusion):
        # unit-mass kernel: the q = 0 component never decays
        s = stored(lg_field(LGModeSpec(0, W0), grid))
        before = np.fft.fft2(s.values)[0, 0]
        after = np.fft.fft2(diffuse(s, diffusion, 2e-4).values)[0, 0]
        assert after == pytest.approx(before, rel=1e-9)

    def test_sequential_variance_composition(self, grid, diffusion):
        # kernel product rule: blur(t1) then blur(t2) equals one blur with
        # sigma^2 = sigma1^2 + sigma2^2
        s = stored(synthesize(qubit_state(np.pi / 3, 1.0, l=2), W0, grid))
        t1, t2 = 2e-4, 3.5e-4
        seq = diffuse(diffuse(s, diffusion, t1), diffusion, t2)
        sigma_eq = np.sqrt(diffusion.sigma(t1) ** 2 + diffusion.sigma(t2) ** 2)
        t_eq = sigma_eq / np.sqrt(diffusion.k_b * diffusion.temperature / diffusion.mass)
        merged = diffuse(s, diffusion, t_eq)
        assert np.max(np.abs(seq.values - merged.values)) < 1e-12 * np.max(np.abs(s.values))

    def test_rejects_negative_time(self, grid, diffusion):
        s = stored(lg_field(LGModeSpec(1, W0), grid))
        with pytest.raises(ValueError):
            diffuse(s, diffusion, -1e-6)

    def test_validation(self):
        with pytest.raises(ValueError):
            DiffusionParams(temperature=0.0)


class TestDarkLines:
    def test_qubit_nodal_axis_survives(self, diffusion):
        # reflection-odd pattern: the diagonal zeros are symmetry-protected
        g = GridSpec(512, 3.2e-3)
        s = stored(synthesize(qubit_state(np.pi / 2, 0.0, l=2), W0, g))
        s2 = diffuse(s, diffusion, 500e-6)
        inten = np.abs(s2.values) ** 2
        diag = np.abs(np.diagonal(s2.values)) ** 2
        assert diag.max() < 1e-6 * inten.max()

    def test_qutrit_dark_line_moves_left(self, diffusion):
        g = GridSpec(512, 3.2e-3)
        before = stored(synthesize(qutrit_state(1, 1, 1, l=1), W0, g))
        t_s = 500e-6
        after = diffuse(before, diffusion, t_s)
        shift = qutrit_nodal_shift(before, after)
        x0 = -W0 / (2 * np.sqrt(2))
        expected = x0 * 2 * diffusion.sigma(t_s) ** 2 / W0 ** 2
        assert shift < 0
        assert shift == pytest.approx(expected, rel=0.05)

    def test_identity_shift_zero(self, diffusion):
        g = GridSpec(512, 3.2e-3)
        s = stored(synthesize(qutrit_state(1, 1, 1, l=1), W0, g))
        assert qutrit_nodal_shift(s, s) == 0.0

    def test_qubit_pattern_shift_within_pixel(self, diffusion):
        g = GridSpec(512, 3.2e-3)
        before = stored(synthesize(qubit_state(np.pi / 2, 0.0, l=2), W0, g))
        after = diffuse(before, diffusion, 500e-6)
        assert abs(qutrit_nodal_shift(before, after)) <= g.pitch

    def test_no_node_raises(self, grid):
        s = stored(lg_field(LGModeSpec(0, W0), grid))
        with pytest.raises(NodalLineNotFound):
            qutrit_nodal_shift(s, s)


class TestMagneticDephase:
    def test_clock_states_identity(self, grid):
        s = stored(synthesize(qubit_state(np.pi / 2, 0.0, l=2), W0, grid))
        mdl = MagneticModel(trap_gradient=0.1, guiding_b=9.7e-5,
                            sensitivity=0.0, second_order_coeff=0.0)
        s2 = magnetic_dephase(s, mdl, 1e-4)
        assert np.max(np.abs(s2.values - s.values)) == 0.0

    def test_uniform_field_is_global_phase(self, grid):
        s = stored(synthesize(qubit_state(np.pi / 2, 0.0, l=2), W0, grid))
        mdl = MagneticModel(trap_gradient=0.0, guiding_b=1e-4, sensitivity=1e9)
        s2 = magnetic_dephase(s, mdl, 1e-5)
        ratio = s2.values[s.values != 0] / s.values[s.values != 0]
        assert np.max(np.abs(ratio - ratio[0])) < 1e-9

    def test_linear_ramp_matches_characteristic_function(self, grid):
        # phase kappa*x on a Gaussian: |<f|f e^{i kappa x}>| = exp(-kappa^2 w^2/8)
        kappa = 3.0e4
        mdl = MagneticModel(sensitivity=1.0, field=lambda x, y: kappa * x)
        f = lg_field(LGModeSpec(0, W0), grid)
        s2 = magnetic_dephase(stored(f), mdl, 1.0)
        p = MemoryParams()
        ov = abs(overlap(read(s2, p), f))
        assert ov == pytest.approx(np.exp(-(kappa * W0) ** 2 / 8.0), rel=1e-6)

    def test_magnitudes_preserved(self, grid, rng):
        s = stored(synthesize(qutrit_state(1, 0.5, 1, l=1), W0, grid))
        mdl = MagneticModel(trap_gradient=0.2, ambient_fraction=0.05,
                            guiding_b=0.0, sensitivity=4.4e10)
        s2 = magnetic_dephase(s, mdl, 1e-4)
        assert np.max(np.abs(np.abs(s2.values) - np.abs(s.values))) \
            < 1e-12 * np.abs(s.values).max()

    def test_unguided_dephasing_dominates_early(self, grid, diffusion):
        # ambient field at 5% of the trap, magnetically sensitive coherence:
        # the pattern distorts long before diffusion matters
        f = synthesize(qubit_state(np.pi / 2, 0.0, l=2), W0, grid)
        s = stored(f)
        p = MemoryParams()
        t_s = 40e-6
        sensitive = MagneticModel(trap_gradient=0.1, ambient_fraction=0.05,
                                  guiding_b=0.0, sensitivity=2 * np.pi * 0.7e6 / 1e-4)
        dephased = abs(overlap(read(magnetic_dephase(s, sensitive, t_s), p), f)) ** 2
        blurred = abs(overlap(read(diffuse(s, diffusion, t_s), p), f)) ** 2
        assert dephased < 0.9
        assert blurred > 0.99


class TestEfficiencyModel:
    def test_anchor_ratio(self):
        em = EfficiencyModel.from_anchors()
        assert em(400e-6) / em(10e-6) == pytest.approx(0.44, abs=1e-3)

    def test_anchors_reproduced(self):
        em = EfficiencyModel.from_anchors()
        assert em(10e-6) == pytest.approx(0.1074, rel=1e-12)
        assert em(400e-6) == pytest.approx(0.0473, rel=1e-12)

    def test_two_point_solution(self):
        em = EfficiencyModel.from_anchors()
        assert em.tau == pytest.approx(475.6e-6, rel=1e-3)
        assert em(500e-6) == pytest.approx(0.0383, abs=5e-4)

    def test_zero_time_gives_eta0(self):
        em = EfficiencyModel(eta0=0.25, tau=1e-4)
        assert retrieval_efficiency(em, 0.0) == 0.25

    def test_validation(self):
        with pytest.raises(ValueError):
            EfficiencyModel(eta0=1.5, tau=1e-4)
        with pytest.raises(ValueError):
            EfficiencyModel(eta0=0.1, tau=-1.0)
        with pytest.raises(ValueError):
            EfficiencyModel.from_anchors((10e-6, 0.05), (400e-6, 0.10))
        with pytest.raises(ValueError):
            EfficiencyModel(eta0=0.1, tau=1e-4)(-1e-6)


class TestLongitudinalDrift:
    def test_collinear_unity(self, diffusion):
        assert longitudinal_drift_factor(0.0, diffusion, 1e-3) == 1.0

    def test_formula(self, diffusion):
        dk = -4814.5
        t_s = 5e-4
        sigma = diffusion.sigma(t_s)
        expected = np.exp(-0.5 * (dk * sigma) ** 2)
        assert longitudinal_drift_factor(dk, diffusion, t_s) == pytest.approx(expected)

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from holologic.bargmann import BargmannSpace
from holologic.exceptions import ComplexInputError, DivergenceError
from holologic.gates import standard_gate
from holologic.holostate import is_product_state, monomial, variable
from holologic.systems import (
    NeuronParams,
    PendulumParams,
    RDConfig,
    chain_frequency_matrix,
    fields_to_poly,
    fields_to_state,
    gate_features,
    homogeneous_fixed_point,
    load_rd_config,
    neuron_forward,
    normal_modes,
    pendulum_gate_table,
    pendulum_state,
    perceptron_train,
    simulate_fhn,
    simulate_memristive,
    window_memristor,
)

S2 = BargmannSpace(2, 1.0)


class TestPendulum:
    def test_uncoupled(self):
        assert PendulumParams(1.3, 0.0).omega == 1.3

    def test_coupled(self):
        assert PendulumParams(1.0, 1.5).omega == pytest.approx(2.0)

    def test_state(self):
        st = pendulum_state(PendulumParams())
        assert st.state.terms == {(1, 1): 1}
        from holologic.bargmann import norm_squared

        assert norm_squared(S2, st.state) == 1

    def test_phases(self):
        p = PendulumParams(2.0, 0.5, phi=0.3, varphi=-0.1)
        st = pendulum_state(p, time=0.7)
        assert st.z1 == pytest.approx(np.exp(1j * (2.0 * 0.7 + 0.3)))
        assert st.z2 == pytest.approx(np.exp(1j * (p.omega * 0.7 - 0.1)))
        assert abs(st.value) == pytest.approx(1.0)

    def test_gate_table(self):
        rows = {r.gate: r for r in pendulum_gate_table(PendulumParams(alpha=2.0, beta=0.5j))}
        f = monomial((1, 1), 1j)
        assert rows["X"].image.isclose(standard_gate("X")(f))
        assert rows["Z"].image.is_zero()
        assert rows["H"].image.isclose(rows["X"].image / math.sqrt(2))
        assert rows["I"].image.isclose(2 * f)
        for g in ("X", "Y", "H"):
            assert abs(rows[g].expectation) < 1e-12

    @pytest.mark.parametrize("bad", [dict(omega0=0.0), dict(coupling=-1.0)])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            PendulumParams(**bad)

    def test_omega_monotone_and_continuous(self):
        ks = np.linspace(0, 5, 50)
        ws = [PendulumParams(1.0, k).omega for k in ks]
        assert all(w >= 1.0 for w in ws)
        assert PendulumParams(1.0, 1e-8).omega == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize(
        "W, expected",
        [
            (np.diag([1.0, 4.0]), [1.0, 2.0]),
            ([[2.5, -1.5], [-1.5, 2.5]], [1.0, 2.0]),
            (np.zeros((3, 3)), [0.0, 0.0, 0.0]),
        ],
    )
    def test_normal_modes(self, W, expected):
        np.testing.assert_allclose(normal_modes(W), expected, atol=1e-12)

    def test_pendulum_matrix(self):
        p = PendulumParams(1.0, 1.5)
        np.testing.assert_allclose(normal_modes(p.frequency_matrix()), [p.omega0, p.omega])

    def test_chain_modes(self):
        # free-end chain: omega_k^2 = omega0^2 + 4k sin^2(k pi / 2n)
        n, w0, k = 6, 1.0, 0.8
        expected = np.sqrt(w0**2 + 4 * k * np.sin(np.arange(n) * np.pi / (2 * n)) ** 2)
        np.testing.assert_allclose(normal_modes(chain_frequency_matrix(n, w0, k)), expected, rtol=1e-12)

    def test_unstable(self):
        with pytest.raises(DivergenceError):
            normal_modes(np.diag([1.0, -1.0]))
        with pytest.raises(ValueError):
            normal_modes([[1.0, 2.0], [0.0, 1.0]])


class TestMemristive:
    def test_frozen_state(self):
        tr = simulate_memristive(lambda x, u, t: 0.0, lambda x, u, t: 1.0, 5.0, 2.0, 0.1, 10)
        np.testing.assert_array_equal(tr.x, 5.0)
        np.testing.assert_array_equal(tr.y, 2.0)

    def test_linear_decay(self):
        tr = simulate_memristive(lambda x, u, t: -x, lambda x, u, t: 1.0, 1.0, 0.0, 0.01, 100)
        assert abs(tr.x[-1] - math.exp(-1)) < 1e-6
        np.testing.assert_allclose(tr.x, np.exp(-tr.t), atol=1e-9)

    def test_zero_input_zero_output(self):
        f, g = window_memristor()
        tr = simulate_memristive(f, g, 0.3, 0.0, 0.01, 50)
        np.testing.assert_array_equal(tr.y, 0.0)

    def test_aliases(self):
        f, g = window_memristor()
        tr = simulate_memristive(f, g, 0.5, lambda t: np.sin(t), 0.01, 20)
        assert tr.S is tr.u and tr.Q is tr.x and tr.R is tr.y

    def test_driven_against_solve_ivp(self):
        f, g = window_memristor(mobility=0.5)
        u = lambda t: np.sin(2 * np.pi * t)
        tr = simulate_memristive(f, g, 0.4, u, 0.001, 2000)
        ref = solve_ivp(lambda t, x: f(x, u(t), t), (0, 2), [0.4], rtol=1e-11, atol=1e-12, dense_output=True)
        np.testing.assert_allclose(tr.x, ref.sol(tr.t)[0], atol=1e-8)

    def test_sampled_input_hold(self):
        tr = simulate_memristive(lambda x, u, t: u, lambda x, u, t: 1.0, 0.0, [1.0, 2.0, 3.0], 0.5, 2)
        np.testing.assert_allclose(tr.u, [1.0, 2.0, 3.0])

    def test_vector_state(self):
        A = np.array([[0.0, 1.0], [-1.0, 0.0]])
        tr = simulate_memristive(lambda x, u, t: A @ x, lambda x, u, t: x[0], [1.0, 0.0], 1.0, 0.01, 314)
        np.testing.assert_allclose(tr.x[-1], [np.cos(3.14), -np.sin(3.14)], atol=1e-8)
        np.testing.assert_allclose(tr.y, tr.x[:, 0])

    def test_divergence(self):
        with pytest.raises(DivergenceError, match="step"):
            simulate_memristive(lambda x, u, t: x**3, lambda x, u, t: 1.0, 10.0, 0.0, 1.0, 20)

    def test_bad_dt(self):
        with pytest.raises(ValueError):
            simulate_memristive(lambda x, u, t: x, lambda x, u, t: 1.0, 1.0, 0.0, 0.0, 2)


class TestReactionDiffusion:
    def test_stability_bound(self):
        with pytest.raises(ValueError, match="stability"):
            RDConfig(dx=1.0, Da=1.0, dt=0.3)
        RDConfig(dx=1.0, Da=0.0, Db=0.0, dt=0.3)

    def test_zero_fixed_point(self):
        c = RDConfig(n=16, alpha=0.0, steps=500)
        a, b = simulate_fhn(c, np.zeros(16), np.zeros(16))
        np.testing.assert_array_equal(a, 0.0)
        np.testing.assert_array_equal(b, 0.0)

    def test_homogeneous_fixed_point(self):
        s = homogeneous_fixed_point(0.3)
        assert s == pytest.approx(0.6694329500821695)
        c = RDConfig(n=16, alpha=0.3, steps=10_000)
        a, b = simulate_fhn(c, np.full(16, s), np.full(16, s))
        assert np.max(np.abs(a - s)) < 1e-10 and np.max(np.abs(b - s)) < 1e-10

    def test_negative_alpha_root(self):
        assert homogeneous_fixed_point(-8.0) == pytest.approx(-2.0)

    def test_single_cell_against_ode(self):
        c = RDConfig(n=8, Da=0.0, Db=0.0, alpha=0.0, beta=1.0, dt=1e-4, steps=10_000)
        a, b = simulate_fhn(c, np.full(8, 0.1), np.zeros(8))

        def rhs(t, y):
            return [y[0] - y[0] ** 3 - y[1], y[0] - y[1]]

        ref = solve_ivp(rhs, (0, 1), [0.1, 0.0], rtol=1e-12, atol=1e-12).y[:, -1]
        np.testing.assert_allclose(a, ref[0], atol=1e-3)
        np.testing.assert_allclose(b, ref[1], atol=1e-3)

    def test_bounded_from_small_random_data(self):
        rng = np.random.default_rng(7)
        c = RDConfig(n=64, Da=1.0, Db=0.5, alpha=0.1, beta=0.8, dt=0.01, steps=10_000)
        a, b = simulate_fhn(c, rng.uniform(-0.1, 0.1, 64), rng.uniform(-0.1, 0.1, 64))
        assert np.all(np.isfinite(a)) and np.max(np.abs(a)) < 10

    def test_divergence_reported(self):
        c = RDConfig(n=4, Da=0.0, dt=0.5, steps=100)
        with pytest.raises(DivergenceError, match="step"):
            simulate_fhn(c, np.full(4, 50.0), np.zeros(4))

    def test_shape_check(self):
        with pytest.raises(ValueError):
            simulate_fhn(RDConfig(n=8), np.zeros(7), np.zeros(8))

    def test_config_file(self, tmp_path):
        p = tmp_path / "rd.cfg"
        p.write_text("# run\nn = 32\ndt = 0.02\nalpha=0.2  # shift\n\ninit = random\nseed = 3\n")
        cfg, extra = load_rd_config(p)
        assert cfg.n == 32 and cfg.dt == 0.02 and cfg.alpha == 0.2
        assert extra == {"init": "random", "seed": "3"}

    def test_config_file_errors(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("n 32\n")
        with pytest.raises(ValueError, match="bad.cfg:1"):
            load_rd_config(p)


class TestLift:
    x = np.linspace(-15, 15, 3001)
    ground = math.pi**-0.25 * np.exp(-x**2 / 2)

    def test_gaussian_fields(self):
        v = fields_to_state(BargmannSpace(1, 1.0), self.x, self.ground, self.ground, 0.3 + 0.2j, -1.0)
        assert v == pytest.approx(1.0, abs=1e-8)

    def test_zero_field(self):
        assert fields_to_state(BargmannSpace(1, 1.0), self.x, 0 * self.x, self.ground, 1.0, 1.0) == 0

    def test_conjugate_symmetry(self):
        sp = BargmannSpace(1, 1.0)
        a = np.exp(-self.x**2) * (1 + self.x**2)
        b = np.exp(-((self.x / 1.5) ** 2))
        z1, z2 = 0.4 + 0.7j, -0.2 + 0.3j
        v = fields_to_state(sp, self.x, a, b, z1, z2)
        w = fields_to_state(sp, self.x, a, b, np.conj(z1), np.conj(z2))
        assert abs(w - np.conj(v)) < 1e-8

    def test_product_structure(self):
        a = np.exp(-((self.x - 0.5) ** 2))
        b = np.exp(-((self.x + 0.3) ** 2) / 2)
        f = fields_to_poly(BargmannSpace(1, 1.0), self.x, a, b, 5)
        assert is_product_state(f, ([0], [1]))


class TestNeuron:
    def z_inputs(self, *signs):
        return [(S2, variable(0 if s > 0 else 1, 2), standard_gate("Z")) for s in signs]

    def test_forward(self):
        assert neuron_forward(NeuronParams((1, 1)), self.z_inputs(1, -1)) == pytest.approx(0.0)

    def test_step(self):
        assert NeuronParams((1.0,), -0.5, "step")([1.0]) == 1.0
        assert NeuronParams((1.0,), -1.5, "step")([1.0]) == 0.0

    def test_zero_weights(self):
        assert NeuronParams((0, 0), 0.3, "logistic")([5, -2]) == pytest.approx(1 / (1 + math.exp(-0.3)))

    def test_complex_input(self):
        f = variable(0, 2) + variable(1, 2)
        with pytest.raises(ComplexInputError):
            gate_features([(S2, f, standard_gate("S"))])

    def test_bad_arity(self):
        with pytest.raises(ValueError):
            NeuronParams((1, 2))([1.0])
        with pytest.raises(ValueError):
            NeuronParams((1,), activation="relu")

    def test_and_from_expectations(self):
        samples = []
        for s1 in (1, -1):
            for s2 in (1, -1):
                samples.append((self.z_inputs(s1, s2), int(s1 > 0 and s2 > 0)))
        res = perceptron_train(samples, epochs=50)
        assert res.errors[-1] == 0
        for inputs, target in samples:
            assert neuron_forward(res.params, inputs) == target

    def test_correct_start_is_fixed(self):
        init = NeuronParams((1.0, 1.0), -1.5, "step")
        data = [([1, 1], 1), ([1, -1], 0), ([-1, 1], 0), ([-1, -1], 0)]
        res = perceptron_train(data, epochs=5, initial=init)
        assert res.params.weights == init.weights and res.params.bias == init.bias
        assert res.errors == [0] * 5

    def test_zero_rate(self):
        data = [([1, 1], 1), ([1, -1], 0), ([-1, 1], 1)]
        res = perceptron_train(data, epochs=4, learning_rate=0.0)
        assert res.params.weights == (0.0, 0.0)
        assert len(set(res.errors)) == 1

    def test_bad_targets(self):
        with pytest.raises(ValueError):
            perceptron_train([([1.0], 2)])

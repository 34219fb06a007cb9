import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurise.errors import InvalidInputError, ParseError
from neurise.neural import (Mlp, MlpSpec, Optimizer, finite_difference_gradient, init_mlp, mlp_backward, mlp_forward,
                            mlp_param_count, read_net, relative_error, swish, write_net)


def naive_forward(net, x):
    h = np.asarray(x, dtype=float)
    layers = net.layers()
    for i, (w, b) in enumerate(layers):
        z = np.array([sum(w[j, k] * h[k] for k in range(len(h))) + b[j] for j in range(w.shape[0])])
        h = z if i == len(layers) - 1 else z / (1 + np.exp(-z))
    return h


class TestParamCount:
    @pytest.mark.parametrize("spec,count", [
        (MlpSpec(9, 2, 10), 221),
        (MlpSpec(14, 2, 12), 349),
        (MlpSpec(3, 1, 1), 6),
    ])
    def test_counts(self, spec, count):
        assert mlp_param_count(spec) == count
        assert init_mlp(spec, 0).params.size == count

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            MlpSpec(0, 2, 10)
        with pytest.raises(InvalidInputError):
            Mlp(MlpSpec(3, 1, 2), np.zeros(4))


class TestForward:
    def test_zero_net(self):
        assert mlp_forward(Mlp(MlpSpec(4, 2, 5)), np.ones(4))[0] == 0.0

    def test_identity_like(self):
        net = Mlp(MlpSpec(1, 1, 1), np.array([1.0, 0.0, 1.0, 0.0]))
        assert mlp_forward(net, [1.0])[0] == pytest.approx(0.7311, abs=1e-4)
        assert mlp_forward(net, [1.0])[0] == pytest.approx(swish(1.0))

    def test_matches_naive_loops(self):
        net = init_mlp(MlpSpec(5, 3, 4, 2), 7)
        x = np.random.default_rng(1).normal(size=(6, 5))
        out = mlp_forward(net, x)
        for r in range(6):
            np.testing.assert_allclose(out[r], naive_forward(net, x[r]), atol=1e-12)

    def test_batch_equals_rows(self):
        net = init_mlp(MlpSpec(4, 2, 6), 3)
        x = np.random.default_rng(0).normal(size=(5, 4))
        np.testing.assert_allclose(mlp_forward(net, x)[:, 0], [mlp_forward(net, r)[0] for r in x])

    def test_wrong_width(self):
        with pytest.raises(InvalidInputError):
            mlp_forward(init_mlp(MlpSpec(4, 1, 2), 0), np.ones(3))


class TestBackward:
    @pytest.mark.parametrize("seed", range(4))
    def test_param_gradient_finite_differences(self, seed):
        spec = MlpSpec(5, 2, 6, 3)
        net = init_mlp(spec, seed)
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(7, 5))
        c = rng.normal(size=(7, 3))

        def f(params):
            return float(np.sum(c * mlp_forward(Mlp(spec, params), x)))

        grad, _ = mlp_backward(net, x, c)
        fd = finite_difference_gradient(f, net.params, h=1e-6)
        assert relative_error(grad, fd) < 1e-6

    def test_input_gradient(self):
        net = init_mlp(MlpSpec(4, 2, 5), 2)
        x = np.random.default_rng(2).normal(size=4)
        _, gx = mlp_backward(net, x, np.array([1.0]))
        fd = finite_difference_gradient(lambda v: mlp_forward(net, v)[0], x, h=1e-6)
        assert relative_error(gx, fd) < 1e-6


def test_init_zero_input():
    net = init_mlp(MlpSpec(6, 2, 4), 0, zero_input=True)
    assert np.all(net.input_weights() == 0)
    assert np.all(net.params[net.input_weight_slice()] == 0)
    assert np.any(net.layers()[1][0] != 0)
    assert np.all(net.layers()[0][1] == 0)


def test_input_weight_layout():
    """Column v of the first matrix holds the weights fed by input v."""
    net = init_mlp(MlpSpec(3, 1, 2), 0)
    w = net.input_weights()
    x = np.zeros(3)
    x[1] = 1.0
    h = swish(w @ x)
    out = net.layers()[1][0] @ h
    assert mlp_forward(net, x)[0] == pytest.approx(out[0])
    np.testing.assert_array_equal(w[:, 1], net.params[[1, 4]])


class TestOptimizer:
    def test_sgd_step(self):
        p = np.array([1.0, 2.0])
        Optimizer("sgd", lr=0.5).step(p, np.array([1.0, -2.0]))
        np.testing.assert_allclose(p, [0.5, 3.0])

    def test_adam_first_step_is_lr_sign(self):
        p = np.zeros(3)
        opt = Optimizer("adam", lr=0.1)
        opt.step(p, np.array([3.0, -0.2, 0.0]))
        np.testing.assert_allclose(p, [-0.1, 0.1, 0.0], atol=1e-6)

    def test_adam_quadratic(self):
        p = np.array([5.0, -3.0])
        opt = Optimizer("adam", lr=0.05)
        for _ in range(2000):
            opt.step(p, 2 * p)
        assert np.max(np.abs(p)) < 1e-2

    def test_unknown(self):
        with pytest.raises(InvalidInputError):
            Optimizer("rmsprop")


@given(a=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=6))
@settings(max_examples=50)
def test_relative_error_properties(a):
    a = np.array(a)
    assert relative_error(a, a) == 0.0
    b = a + 1.0
    assert relative_error(a, b) == relative_error(b, a)
    assert 0.0 <= relative_error(a, -a) <= 2.0


def test_finite_difference_quadratic():
    g = finite_difference_gradient(lambda x: float(x @ x), np.array([1.0, -2.0]))
    np.testing.assert_allclose(g, [2.0, -4.0], atol=1e-8)


def test_net_round_trip(tmp_path):
    net = init_mlp(MlpSpec(4, 2, 3, 2), 5)
    write_net(net, tmp_path / "n.json")
    back = read_net(tmp_path / "n.json")
    assert back.spec == net.spec
    np.testing.assert_array_equal(back.params, net.params)
    (tmp_path / "bad.json").write_text("{\n\n oops")
    with pytest.raises(ParseError):
        read_net(tmp_path / "bad.json")
    assert math.isfinite(mlp_forward(back, np.ones(4))[0])

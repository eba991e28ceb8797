import numpy as np
import pytest

from config import MODEL_MAGIC
from qube.errors import DimensionError, ModelFormatError, NonFiniteError
from qube.neural import (
    AdamState,
    MLPModel,
    TrainingBatch,
    forward,
    init_model,
    load_model,
    loss_and_gradients,
    model_from_bytes,
    model_to_bytes,
    save_model,
    sgd_step,
    sync,
    td_targets,
)


def _bias_model(output_bias, input_dim=2, hidden=3, hidden_bias=0.0):
    out = len(output_bias)
    dims = (input_dim, hidden, hidden, out)
    weights = [np.zeros((a, b)) for a, b in zip(dims[:-1], dims[1:])]
    biases = [np.full(hidden, hidden_bias), np.full(hidden, hidden_bias), np.array(output_bias, dtype=float)]
    return MLPModel(dims, weights, biases)


def test_parameter_count_of_phase_1_network(rng):
    model = init_model((12, 100, 50, 12), rng)
    assert model.n_params == 12 * 100 + 100 + 100 * 50 + 50 + 50 * 12 + 12 == 6962


def test_init_is_deterministic_under_seed():
    a = init_model((4, 35, 16, 3), np.random.default_rng(5))
    b = init_model((4, 35, 16, 3), np.random.default_rng(5))
    assert a.output_dim == 3
    assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))


def test_init_draws_weights_within_one_over_root_fan_in_and_zero_biases(rng):
    model = init_model((36, 310, 115, 56), rng)
    for w, b in zip(model.weights, model.biases):
        bound = 1.0 / np.sqrt(w.shape[0])
        assert np.all(np.abs(w) <= bound)
        assert np.abs(w).max() > 0.9 * bound
        assert not np.any(b)


@pytest.mark.parametrize("dims", [(12, 0, 50, 12), (12, 100, 12), (-1, 2, 2, 2)])
def test_init_rejects_bad_dims(dims, rng):
    with pytest.raises(DimensionError):
        init_model(dims, rng)


def test_zero_weights_give_zero_q_values():
    model = _bias_model([0.0, 0.0, 0.0])
    assert not forward(model, np.array([3.0, -7.0])).any()


def test_dead_relu_hidden_layers_output_the_bias():
    model = _bias_model([0.5, -1.0, 2.0], hidden_bias=-10.0)
    model.weights[0][:] = 1.0
    assert np.allclose(forward(model, np.array([0.1, 0.2])), [0.5, -1.0, 2.0])


def test_forward_batch_and_dimension_check(rng):
    model = init_model((12, 100, 50, 12), rng)
    assert forward(model, np.zeros((5, 12))).shape == (5, 12)
    with pytest.raises(DimensionError):
        forward(model, np.zeros(11))


def _batch(rewards, terminals=None, n_actions=3):
    n = len(rewards)
    return TrainingBatch(
        observations=np.zeros((n, 2)),
        actions=np.zeros(n, dtype=np.int64),
        rewards=np.array(rewards, dtype=float),
        next_observations=np.zeros((n, 2)),
        terminals=None if terminals is None else np.array(terminals),
    )


def test_td_target_double_q_rule():
    online = _bias_model([0.0, 0.0, 1.0])
    target = _bias_model([1.0, 7.0, 3.0])
    y = td_targets(online, target, _batch([-2.0]), gamma=0.9)
    assert y[0] == pytest.approx(0.7)


def test_td_target_terminal_and_zero_gamma():
    online = _bias_model([0.0, 0.0, 1.0])
    target = _bias_model([1.0, 7.0, 3.0])
    assert td_targets(online, target, _batch([5000.0], [True]), gamma=0.9)[0] == 5000.0
    assert td_targets(online, target, _batch([-3.0, 4.0]), gamma=0.0).tolist() == [-3.0, 4.0]
    with pytest.raises(ValueError):
        td_targets(online, target, _batch([1.0]), gamma=1.0)


def _well_conditioned_case(dims, n=7, margin=1e-2):
    """Random model and batch with every hidden pre-activation at least ``margin`` away from the ReLU kink."""
    for seed in range(500):
        rng = np.random.default_rng(seed)
        model = init_model(dims, rng)
        for b in model.biases:
            b[:] = rng.normal(scale=0.5, size=b.shape)
        obs = rng.normal(size=(n, dims[0]))
        z1 = obs @ model.weights[0] + model.biases[0]
        z2 = np.maximum(z1, 0) @ model.weights[1] + model.biases[1]
        if min(np.abs(z1).min(), np.abs(z2).min()) > margin:
            return model, obs, rng.integers(0, dims[-1], size=n), rng.normal(size=n)
    raise AssertionError("no well-conditioned case found")


def test_gradients_match_finite_differences():
    model, obs, actions, targets = _well_conditioned_case((4, 6, 5, 3))
    _, grads_w, grads_b = loss_and_gradients(model, obs, actions, targets)
    h = 1e-4
    checked = 0
    for params, grads in ((model.weights, grads_w), (model.biases, grads_b)):
        for param, grad in zip(params, grads):
            for idx in np.ndindex(param.shape):
                original = param[idx]
                param[idx] = original + h
                up = loss_and_gradients(model, obs, actions, targets)[0]
                param[idx] = original - h
                down = loss_and_gradients(model, obs, actions, targets)[0]
                param[idx] = original
                numeric = (up - down) / (2 * h)
                rel = abs(grad[idx] - numeric) / max(abs(grad[idx]), abs(numeric), 1e-6)
                assert rel <= 1e-5, (idx, grad[idx], numeric)
                checked += 1
    assert checked == model.n_params


def test_sgd_step_at_fixed_point_changes_nothing(rng):
    model = init_model((2, 4, 4, 3), rng)
    batch = TrainingBatch(rng.normal(size=(6, 2)), np.array([0, 1, 2, 0, 1, 2]), np.zeros(6), np.zeros((6, 2)))
    targets = forward(model, batch.observations)[np.arange(6), batch.actions]
    before = model.copy()
    loss = sgd_step(model, AdamState.for_model(model), batch, targets, lr=1e-3)
    assert loss == pytest.approx(0.0)
    assert all(np.allclose(a, b) for a, b in zip(before.weights, model.weights))


def test_sgd_steps_reduce_loss(rng):
    model = init_model((2, 8, 8, 2), rng)
    adam = AdamState.for_model(model)
    batch = TrainingBatch(rng.normal(size=(16, 2)), rng.integers(0, 2, size=16), np.zeros(16), np.zeros((16, 2)))
    targets = np.ones(16)
    first = sgd_step(model, adam, batch, targets, lr=1e-2)
    for _ in range(200):
        last = sgd_step(model, adam, batch, targets, lr=1e-2)
    assert last < first
    assert adam.step == 201


def test_sgd_step_rejects_non_finite_targets(rng):
    model = init_model((2, 4, 4, 3), rng)
    batch = TrainingBatch(np.zeros((2, 2)), np.array([0, 1]), np.zeros(2), np.zeros((2, 2)))
    with pytest.raises(NonFiniteError):
        sgd_step(model, AdamState.for_model(model), batch, np.array([np.nan, 0.0]), lr=1e-3)
    with pytest.raises(ValueError):
        sgd_step(model, AdamState.for_model(model), batch, np.zeros(2), lr=0.0)


def test_sync_copies_parameters(rng):
    online = init_model((2, 4, 4, 3), rng)
    target = init_model((2, 4, 4, 3), rng)
    sync(target, online)
    assert all(np.array_equal(a, b) for a, b in zip(online.weights + online.biases, target.weights + target.biases))
    online.weights[0][0, 0] += 1.0
    assert target.weights[0][0, 0] != online.weights[0][0, 0]
    with pytest.raises(DimensionError):
        sync(init_model((2, 4, 4, 2), rng), online)


def test_model_file_round_trip(tmp_path, rng):
    model = init_model((4, 35, 16, 3), rng, phase=2)
    path = tmp_path / "phase2.qube"
    save_model(model, str(path))
    loaded = load_model(str(path), phase=2)
    assert loaded.layer_dims == (4, 35, 16, 3)
    assert loaded.phase == 2
    assert all(np.array_equal(a, b) for a, b in zip(model.weights + model.biases, loaded.weights + loaded.biases))
    assert path.read_bytes()[:len(MODEL_MAGIC)] == MODEL_MAGIC


def test_model_file_errors(rng):
    data = model_to_bytes(init_model((4, 35, 16, 3), rng), phase=2)

    with pytest.raises(ModelFormatError) as excinfo:
        model_from_bytes(b"NOTAQUBE" + data[8:])
    assert excinfo.value.offset == 0

    with pytest.raises(ModelFormatError):
        model_from_bytes(data, phase=3)

    with pytest.raises(ModelFormatError) as excinfo:
        model_from_bytes(data[:-20])
    assert excinfo.value.offset == len(data) - 20

    with pytest.raises(ModelFormatError):
        model_from_bytes(data + b"\x00")

    corrupted = bytearray(data)
    corrupted[40] ^= 0xFF
    with pytest.raises(ModelFormatError):
        model_from_bytes(bytes(corrupted))

"""Smoke tests for the python bindings."""

import math

import pytest

smes = pytest.importorskip("smes")


def test_tensor_ops():
    a = smes.Tensor.from_vector([1.0, 2.0])
    b = smes.Tensor.from_vector([3.0, 4.0])
    assert smes.add(a, b).data == [4.0, 6.0]
    assert smes.pow_scalar(smes.Tensor.from_vector([4.0]), 0.5).data == [2.0]
    eye = smes.Tensor(shape=[2, 2], data=[1.0, 0.0, 0.0, 1.0])
    assert smes.matvec(eye, a).data == [1.0, 2.0]


def test_shape_mismatch_raises():
    a = smes.Tensor.zeros([2])
    b = smes.Tensor.zeros([3])
    with pytest.raises(ValueError):
        smes.add(a, b)


def test_presets():
    adam = smes.preset("adam")
    assert adam.alpha == 0.5
    assert adam.beta1 == 0.9
    sgd = smes.preset("sgd")
    assert sgd.alpha == 0.0
    assert sgd.eta == 0.1


def test_first_adam_step():
    cfg = smes.preset("adam")
    state = smes.smes_init([1])
    updated = smes.smes_step(smes.Tensor.zeros([1]), smes.Tensor.from_vector([0.1]), state, cfg)
    assert math.isclose(updated[0], -cfg.eta * 0.1 / (0.1 + 1e-8), rel_tol=1e-12)
    assert state.t == 1


def test_rng_determinism():
    a = smes.RngStream(42).normal_tensor(0.0, 1.0, [4])
    b = smes.RngStream(42).normal_tensor(0.0, 1.0, [4])
    assert a.data == b.data


def test_objectives():
    rosen = smes.rosenbrock(2)
    assert rosen.eval(smes.Tensor.from_vector([1.0, 1.0])) == 0.0
    assert rosen.eval(smes.Tensor.from_vector([0.0, 0.0])) == 1.0


def test_generators_and_training(tmp_path):
    stream = smes.RngStream(7)
    pair = smes.gen_blobs(3, 10, 4, 0.3, stream)
    assert len(pair.train) == 30
    assert pair.train.num_classes == 3

    spec = smes.SweepSpec()
    spec.alpha_grid = [0.0]
    spec.seeds = [1]
    spec.epochs = 2
    spec.batch_size = 8
    spec.data.kind = smes.DataKind.blobs
    spec.data.classes = 3
    spec.data.per_class = 10
    spec.data.dim = 4
    spec.data.spread = 0.3
    spec.model.layer_sizes = [4, 8, 3]
    spec.optimizer = smes.preset("sgd")

    record = smes.train_one(spec, 0.0, 1)
    assert not record.diverged
    assert len(record.test_err) == 2
    assert 0.0 <= record.final_test_err <= 100.0

    result = smes.run_sweep(spec, str(tmp_path / "records.jsonl"), 1)
    assert len(result.records) == 1
    assert result.summary.argmin_alpha == 0.0
    assert len(smes.read_records(str(tmp_path / "records.jsonl"))) == 1


def test_selfcheck():
    results = smes.run_selfcheck()
    assert all(r.passed for r in results), [(r.name, r.detail) for r in results]

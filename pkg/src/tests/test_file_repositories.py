import numpy as np
import pandas as pd
import pytest

from src.core.errors import FormatError, UsageError
from src.core.services.flowmodel import VelocityField
from src.database.repositories.files.checkpoint_loader_service import (
    CheckpointLoaderService,
    decode_checkpoint,
)
from src.database.repositories.files.checkpoint_saver_service import (
    CheckpointSaverService,
    encode_checkpoint,
)
from src.database.repositories.files.metrics_csv_saver_service import MetricsCsvSaverService
from src.database.repositories.files.samples_csv_loader_service import SamplesCsvLoaderService
from src.database.repositories.files.samples_csv_saver_service import SamplesCsvSaverService
from src.database.repositories.files.trajectory_csv_saver_service import TrajectoryCsvSaverService
from src.models.flow import TrajectoryBatch
from src.models.records import IterateRecord, MetricSnapshot


def test_checkpoint_round_trip_is_bit_exact(small_field, tmp_path, rng):
    path = CheckpointSaverService().save(small_field, tmp_path / "nested" / "model.fexp")
    loaded = CheckpointLoaderService().load(path)
    assert loaded.activation == small_field.activation
    for original, restored in zip(small_field.parameters(), loaded.parameters()):
        assert np.array_equal(original.data.reshape(-1), restored.data.reshape(-1))
    x = rng.normal(size=(5, 2))
    assert np.array_equal(loaded.evaluate(x, 0.3), small_field.evaluate(x, 0.3))


def test_checkpoint_header_layout(small_field):
    payload = encode_checkpoint(small_field)
    assert payload[:6] == b"FEXP1\n"
    assert int(np.frombuffer(payload, dtype="<u4", count=1, offset=6)[0]) == 3
    params = sum(p.size for p in small_field.parameters())
    assert len(payload) == 6 + 4 + 3 * 8 + 8 * params + 4


def test_checkpoint_bad_magic(small_field):
    payload = bytearray(encode_checkpoint(small_field))
    payload[0:1] = b"X"
    with pytest.raises(FormatError):
        decode_checkpoint(bytes(payload))


def test_checkpoint_truncated(small_field):
    with pytest.raises(FormatError):
        decode_checkpoint(encode_checkpoint(small_field)[:-12])


def test_checkpoint_mismatched_layer_count(small_field):
    payload = bytearray(encode_checkpoint(small_field))
    payload[6:10] = np.asarray([2], dtype="<u4").tobytes()
    with pytest.raises(FormatError):
        decode_checkpoint(bytes(payload))


def test_checkpoint_trailing_bytes(small_field):
    with pytest.raises(FormatError):
        decode_checkpoint(encode_checkpoint(small_field) + b"\x00")


def test_samples_round_trip_with_labels(tmp_path, rng):
    points = rng.normal(size=(10, 3))
    labels = rng.integers(0, 3, size=10)
    path = SamplesCsvSaverService().save(points, tmp_path / "data.csv", labels)
    assert pd.read_csv(path).columns.tolist() == ["x1", "x2", "x3", "label"]
    loaded, loaded_labels = SamplesCsvLoaderService().load(path)
    assert np.allclose(loaded, points, rtol=1e-15)
    assert np.array_equal(loaded_labels, labels)


def test_empty_samples_csv_is_a_usage_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    header_only = tmp_path / "header.csv"
    header_only.write_text("x1,x2\n")
    loader = SamplesCsvLoaderService()
    with pytest.raises(UsageError):
        loader.load(empty)
    with pytest.raises(UsageError):
        loader.load(header_only)


def test_samples_csv_without_coordinates(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(FormatError):
        SamplesCsvLoaderService().load(path)


def test_metrics_csv_columns(tmp_path):
    records = [
        IterateRecord(0, "pretrained", "a.fexp", MetricSnapshot(1.0, 1.0, 2.0), 0.5),
        IterateRecord(1, "iterate", "b.fexp", MetricSnapshot(1.5, None, 3.0), 0.7),
    ]
    frame = pd.read_csv(MetricsCsvSaverService().save_records(records, tmp_path / "metrics.csv"))
    assert frame.columns.tolist() == ["k", "phase", "entropy", "validity", "vendi", "wall_seconds"]
    assert frame["phase"].tolist() == ["pretrained", "iterate"]
    assert np.isnan(frame["validity"].iloc[1])


def test_loss_csv(tmp_path):
    frame = pd.read_csv(MetricsCsvSaverService().save_losses([3.0, 2.0, 1.5], tmp_path / "loss.csv"))
    assert frame["epoch"].tolist() == [1, 2, 3]
    assert frame["loss"].tolist() == [3.0, 2.0, 1.5]


def test_trajectory_csv_blocks(tmp_path, rng):
    states = rng.normal(size=(4, 2, 2))
    batch = TrajectoryBatch(times=np.linspace(0.125, 1.0, 4), states=states, noises=rng.normal(size=(3, 2, 2)))
    frame = pd.read_csv(TrajectoryCsvSaverService().save(batch, tmp_path / "traj.csv"))
    assert frame.columns.tolist() == ["trajectory", "t", "x1", "x2"]
    assert frame["trajectory"].tolist() == [0] * 4 + [1] * 4
    assert np.allclose(frame[frame["trajectory"] == 1][["x1", "x2"]].to_numpy(), states[:, 1, :])

"""End-to-end smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import revfeat


def test_itdg_table_matches_geometry():
    rows = revfeat.itdg_table([1.0, 2.0, 3.0], [(1.5, 1.5)])
    assert [r.distance_m for r in rows] == [1.0, 2.0, 3.0]
    assert rows[0].direct_ms == pytest.approx(2.9)
    assert rows[0].first_ref_ms == pytest.approx(9.2)
    assert rows[0].itdg_ms == pytest.approx(6.3)
    # Rows agree with the scalar helpers before rounding.
    g = revfeat.SceneGeometry(2.0, 1.5, 1.5)
    assert rows[1].itdg_ms == pytest.approx(revfeat.itdg(g) * 1e3, abs=0.05)
    assert revfeat.first_reflection_delay(g) > revfeat.direct_delay(g)


def test_extract_shapes_and_channel_names():
    rng = np.random.default_rng(5)
    foa = 0.1 * rng.standard_normal((4, 72000))
    for mode, canonical, channels in [
        ("none", "none", 7),
        ("drr", "drr", 8),
        ("dplusr", "d_plus_r", 9),
        ("stpacc", "stpacc", 8),
    ]:
        stack = revfeat.extract(foa, 24000, mode)
        assert stack.mode == canonical
        assert stack.data.shape == (channels, 480, 128)
        assert stack.data.dtype == np.float32
        assert len(stack.channel_names) == channels
    np.testing.assert_array_equal(
        revfeat.extract(foa, 24000, "none").data,
        revfeat.extract(foa, 24000).data,
    )


def test_stpacc_is_gain_invariant():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(48000)
    a = revfeat.stpacc(x)
    b = revfeat.stpacc(4.2 * x)
    assert a.shape[1] == 128
    assert np.max(np.abs(a - b)) < 1e-9
    assert a.min() >= 0.0 and a.max() <= 1.0


def test_simulated_reflection_lag_tracks_geometry():
    dry = revfeat.burst_noise(1.0, 24000, 7)
    g = revfeat.SceneGeometry(2.0, 1.5, 1.5)
    rir = revfeat.make_rir(g, 0.7)
    wet = revfeat.spatialize(dry, 24000, rir)
    lag = revfeat.reflection_lag(wet)
    assert lag.found
    assert lag.seconds == pytest.approx(revfeat.itdg(g), rel=0.1)
    assert revfeat.true_drr(rir.samples, 24000) > 0.0


def test_wpe_split_reconstructs_input():
    dry = revfeat.burst_noise(1.0, 24000, 3)
    g = revfeat.SceneGeometry(1.5, 1.5, 1.5)
    tail = revfeat.RirTail(start_s=revfeat.direct_delay(g) + 0.04, t60_s=0.5, level=0.03, seed=9)
    wet = revfeat.spatialize(dry, 24000, revfeat.make_rir(g, 0.7, tail))
    direct, reverb = revfeat.split_direct_reverb(wet, 24000)
    assert direct.shape == wet.shape
    assert np.max(np.abs(direct + reverb - wet)) < 1e-12


def test_acs_preserves_omni_and_moves_labels():
    rng = np.random.default_rng(8)
    s = rng.standard_normal(12000)
    az, el = math.radians(40.0), math.radians(10.0)
    foa = np.stack(
        [
            s,
            math.cos(az) * math.cos(el) * s,
            math.sin(az) * math.cos(el) * s,
            math.sin(el) * s,
        ]
    )
    events = [revfeat.EventRecord(0, 0, 40.0, 10.0, 2.0)]
    transforms = revfeat.acs_transforms()
    assert len(transforms) == 8
    for t in transforms:
        moved = revfeat.acs_audio(foa, 24000, t)
        np.testing.assert_array_equal(moved[0], foa[0])
        labels = revfeat.acs_labels(events, t)
        assert -180.0 < labels[0].azimuth <= 180.0
        assert labels[0].elevation == pytest.approx(10.0 * (-1 if t.elevation_flip else 1))
        assert labels[0].distance == pytest.approx(2.0)


def test_score_worked_example_and_jackknife():
    pred = [revfeat.EventRecord(0, 0, 15.0, 0.0, 3.0)]
    ref = [revfeat.EventRecord(0, 0, 0.0, 0.0, 2.0)]
    s = revfeat.score(pred, ref)
    assert s.f_score == pytest.approx(1.0)
    assert s.doae == pytest.approx(15.0)
    assert s.rde == pytest.approx(0.5)
    assert s.seld == pytest.approx(7.0 / 36.0, abs=1e-9)
    assert revfeat.angular_error(15.0, 0.0, 0.0, 0.0) == pytest.approx(15.0)

    est = revfeat.jackknife_ci([(pred, ref), (pred, ref), (pred, ref)], "seld")
    assert est.low <= est.pseudo_mean <= est.high
    assert est.point == pytest.approx(7.0 / 36.0, abs=1e-9)


def test_wav_and_tensor_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    clip = 0.2 * rng.standard_normal((4, 24000))
    wav = tmp_path / "clip.wav"
    revfeat.write_wav(str(wav), clip, 24000)
    back, sr = revfeat.read_wav(str(wav))
    assert sr == 24000
    assert back.shape == clip.shape
    assert np.max(np.abs(back - clip)) < 1e-6  # float32 quantization only

    stack = revfeat.extract(back, sr, "stpacc")
    tensor = tmp_path / "clip.rvft"
    revfeat.write_tensor(str(tensor), stack)
    loaded, metadata = revfeat.read_tensor(str(tensor))
    np.testing.assert_array_equal(loaded.data, stack.data)
    assert loaded.channel_names == stack.channel_names
    assert "stpacc" in metadata


def test_metadata_csv_round_trip(tmp_path):
    events = [
        revfeat.EventRecord(3, 2, -45.0, 20.0, 1.57, track_id=1),
        revfeat.EventRecord(4, 0, 180.0, -10.0, 3.0),
    ]
    path = tmp_path / "events.csv"
    revfeat.write_metadata_csv(str(path), events)
    back = revfeat.read_metadata_csv(str(path))
    assert len(back) == 2
    assert back[0].frame == 3 and back[0].class_id == 2 and back[0].track_id == 1
    assert back[0].azimuth == pytest.approx(-45.0)
    assert back[0].distance == pytest.approx(1.57)

"""End-to-end smoke tests for the Python bindings."""

import math

import pytest

import rcsclass as rc


@pytest.fixture(scope="module")
def fleet():
    return rc.generate_fleet(num_classes=4, separation_db=8.0, seed=7)


def test_fleet_shape(fleet):
    assert len(fleet) == 4
    assert fleet.class_names == ["uav01", "uav02", "uav03", "uav04"]
    sig = fleet.signatures[0]
    assert len(sig.samples_m2) == 180
    assert sig.polarization == "vv"
    assert min(sig.samples_m2) > 0.0


def test_fleet_determinism():
    a = rc.generate_fleet(num_classes=3, seed=11)
    b = rc.generate_fleet(num_classes=3, seed=11)
    assert a.signatures[1].samples_m2 == b.signatures[1].samples_m2


def test_noise_and_features(fleet):
    sig = fleet.signatures[0]
    noisy = rc.add_noise(sig, snr_db=5.0, seed=3)
    assert noisy.samples_m2 != sig.samples_m2
    feats = rc.extract_features(sig)
    assert set(feats) == {"peak", "rms", "mean", "std", "variance", "median", "mode"}
    assert feats["peak"] >= feats["median"]
    with_min = rc.extract_features(sig, include_minimum=True)
    assert "minimum" in with_min


def test_train_and_classify(fleet, tmp_path):
    model = rc.train_classifier(fleet, "gamma", seed=1)
    label, scores = model.classify(fleet.signatures[2])
    assert label == fleet.signatures[2].target_id
    assert set(scores) == set(fleet.class_names)

    path = str(tmp_path / "model.json")
    model.save(path)
    again = rc.load_classifier(path)
    assert again.classify(fleet.signatures[2])[0] == label


def test_csv_round_trip(fleet, tmp_path):
    path = str(tmp_path / "fleet.csv")
    fleet.save_csv(path)
    back = rc.Dataset.load_csv(path)
    assert back.class_names == fleet.class_names
    assert len(back) == len(fleet)


def test_gamma_fit_recovery():
    fleet = rc.generate_fleet(num_classes=2, seed=5)
    fit = rc.fit_gamma(fleet.signatures[0].samples_m2)
    assert fit["shape"] > 0.0 and fit["rate"] > 0.0


def test_cwt_and_png(tmp_path):
    values = [math.sin(2.0 * math.pi * i / 16.0) for i in range(128)]
    mags, scales = rc.cwt_scalogram(values, num_scales=16)
    assert len(mags) == 16
    assert len(mags[0]) == 128
    assert len(scales) == 16
    assert scales == sorted(scales)

    path = tmp_path / "scalogram.png"
    degenerate = rc.save_scalogram_png(values, str(path), num_scales=16, size=224)
    assert not degenerate
    assert path.read_bytes()[:4] == b"\x89PNG"


def test_boxplot():
    stats = rc.boxplot([1.0, 2.0, 3.0, 4.0, 5.0])
    assert stats["min"] == 1.0 and stats["max"] == 5.0
    assert stats["q1"] == 2.0 and stats["median"] == 3.0 and stats["q3"] == 4.0
    assert stats["outliers"] == []


def test_sweep_report():
    fleet = rc.generate_fleet(num_classes=2, separation_db=20.0, seed=9)
    report = rc.sweep_report(
        fleet,
        ["swerling12"],
        snr_grid_db=[20.0],
        runs=2,
        tests_per_class=3,
        seed=4,
    )
    cells = report["per_classifier"][0]["cells"]
    assert cells[0]["accuracy_mean"] == 1.0


def test_validation_error_maps_to_value_error():
    with pytest.raises(ValueError):
        rc.generate_fleet(num_classes=0)

import math

import pytest

import hopfkit


def test_atlas_names():
    names = hopfkit.atlas_names()
    for n in ["multi2", "semistable2", "persist1", "persist-semi", "infinity", "cubic-std"]:
        assert n in names


def test_jacobian_and_trace_inverse():
    vf = hopfkit.atlas_system("multi2")
    js = hopfkit.jacobian_summary(vf, 0.1)
    assert js["tau"] == pytest.approx(0.002)
    assert js["hopf_ok"]
    assert hopfkit.a_of_tau(vf, 0.002) == pytest.approx(0.1)


def test_find_cycles_multi2():
    cycles = hopfkit.find_cycles(hopfkit.atlas_system("multi2"), 0.04, 1e-3, 1.0)
    assert [c["stability"] for c in cycles] == ["Stable", "Unstable"]
    assert cycles[0]["radius"] == pytest.approx(2 / math.sqrt(3) * 0.2, rel=5e-3)
    assert cycles[1]["radius"] == pytest.approx(0.4, rel=5e-3)


def test_classify_cubic():
    c = hopfkit.classify(hopfkit.atlas_system("cubic-std"))
    assert c["kind"] == "NonDegenerate"
    assert c["radius_constant"] == pytest.approx(math.sqrt(0.5), rel=0.02)


def test_analyze_and_predict():
    report = hopfkit.analyze(hopfkit.atlas_system("multi2"), 0.1)
    assert report["pipeline"]["p3"] == pytest.approx(0.01, rel=1e-6)
    assert "pipeline/empirical ratio 0.5" in report["warnings"]
    preds = hopfkit.predict_cycles(0.0032, -0.015, 1.28e-4)
    assert [p["stability"] for p in preds] == ["Stable", "Unstable"]


def test_errors():
    with pytest.raises(hopfkit.InputError):
        hopfkit.atlas_system("nope")
    with pytest.raises(hopfkit.NumericError):
        hopfkit.a_of_tau(hopfkit.atlas_system("cubic-std"), 5.0)
    with pytest.raises(hopfkit.InputError):
        hopfkit.parse_system('{"degree": 3,\n "coefficients": [')


def test_system_round_trip():
    vf = hopfkit.atlas_system("semistable2")
    again = hopfkit.parse_system(vf.to_json())
    assert again.degree == vf.degree

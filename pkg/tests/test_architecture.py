import pytest

from utils.architecture import (
    ArchitectureSpec,
    DiagnosisClass,
    classify_layer,
    classify_self_diagnosis,
    is_reference,
    parse_architecture,
    validate,
)
from utils.exceptions import NonPositiveRate, ParseError, ThresholdOutOfRange


def test_validate_accepts_study_architecture():
    spec = ArchitectureSpec(3, 2, 3, 2, 1e-5, 1e-4)
    assert validate(spec) is spec


def test_validate_accepts_reference():
    spec = ArchitectureSpec(1, 1, 1, 1, 1e-5, 1e-4)
    assert validate(spec) is spec
    assert is_reference(spec)


@pytest.mark.parametrize("fields", [
    (3, 4, 3, 2),
    (3, 0, 3, 2),
    (3, 2, 3, 0),
    (3, 2, 2, 3),
    (0, 0, 1, 1),
])
def test_validate_rejects_thresholds(fields):
    with pytest.raises(ThresholdOutOfRange):
        validate(ArchitectureSpec(*fields, 1e-5, 1e-4))


@pytest.mark.parametrize("lambda_s,lambda_m", [(0.0, 1e-4), (1e-5, -1e-4), (float("nan"), 1e-4), (1e-5, float("inf"))])
def test_validate_rejects_rates(lambda_s, lambda_m):
    with pytest.raises(NonPositiveRate):
        validate(ArchitectureSpec(3, 2, 3, 2, lambda_s, lambda_m))


@pytest.mark.parametrize("label,expected", [
    ("2oo3/2oo3", (DiagnosisClass.MAJORITY_VOTING, DiagnosisClass.MAJORITY_VOTING, True)),
    ("1oo3/1oo3", (DiagnosisClass.PURE_PARALLEL, DiagnosisClass.PURE_PARALLEL, False)),
    ("3oo3/1oo3", (DiagnosisClass.PURE_SERIES, DiagnosisClass.PURE_PARALLEL, False)),
    ("3oo3/2oo4", (DiagnosisClass.PURE_SERIES, DiagnosisClass.MAJORITY_VOTING, False)),
    ("1oo1/2oo3", (DiagnosisClass.NO_REDUNDANCY, DiagnosisClass.MAJORITY_VOTING, True)),
    ("1oo1/1oo1", (DiagnosisClass.NO_REDUNDANCY, DiagnosisClass.NO_REDUNDANCY, False)),
    ("2oo2/1oo1", (DiagnosisClass.PURE_SERIES, DiagnosisClass.NO_REDUNDANCY, False)),
])
def test_classify_self_diagnosis(arch, label, expected):
    assert tuple(classify_self_diagnosis(arch(label))) == expected


def test_classification_partitions_layers():
    for count in range(1, 9):
        for threshold in range(1, count + 1):
            tag = classify_layer(threshold, count)
            matches = [
                count == 1,
                count > 1 and threshold == count,
                count > 1 and threshold == 1,
                1 < threshold < count,
            ]
            assert sum(matches) == 1
            assert tag is [
                DiagnosisClass.NO_REDUNDANCY,
                DiagnosisClass.PURE_SERIES,
                DiagnosisClass.PURE_PARALLEL,
                DiagnosisClass.MAJORITY_VOTING,
            ][matches.index(True)]


def test_classification_ignores_rates(arch):
    assert classify_self_diagnosis(arch("2oo3/3oo4", 1e-3, 1e-9)) == classify_self_diagnosis(arch("2oo3/3oo4"))


def test_parse_is_case_insensitive(arch):
    spec = parse_architecture(" 2OO3 / 3Oo4 ", 1e-5, 1e-4)
    assert spec == arch("2oo3/3oo4")
    assert (spec.n_sensors, spec.s_required, spec.n_mcus, spec.m_required) == (3, 2, 4, 3)


@pytest.mark.parametrize("label", ["2of3/2oo3", "2oo3", "", "5oo2/1oo1", "0oo3/1oo1", "2oo3/2oo3/1oo1"])
def test_parse_rejects(label):
    with pytest.raises(ParseError):
        parse_architecture(label, 1e-5, 1e-4)


def test_label_round_trip(all_architectures):
    for spec in all_architectures:
        assert parse_architecture(spec.label, spec.lambda_sensor, spec.lambda_mcu) == spec

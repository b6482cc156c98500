"""
Sensor/MCU majority architectures.

An architecture is written "SooN_S/MooN_M": the sensor layer needs S of its
N_S sensors and the MCU layer needs M of its N_M microcontroller units.
Failure rates are per hour and travel with the spec but never with the label.
"""

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from utils.exceptions import NonPositiveRate, ParseError, ThresholdOutOfRange

logger = logging.getLogger(__name__)

_LABEL_PATTERN = re.compile(
    r"^\s*(\d+)\s*oo\s*(\d+)\s*/\s*(\d+)\s*oo\s*(\d+)\s*$", re.IGNORECASE
)


@dataclass(frozen=True)
class ArchitectureSpec:
    """A SooN_S/MooN_M configuration with its component failure rates"""

    n_sensors: int
    s_required: int
    n_mcus: int
    m_required: int
    lambda_sensor: float
    lambda_mcu: float

    @property
    def sensor_label(self) -> str:
        return f"{self.s_required}oo{self.n_sensors}"

    @property
    def mcu_label(self) -> str:
        return f"{self.m_required}oo{self.n_mcus}"

    @property
    def label(self) -> str:
        return f"{self.sensor_label}/{self.mcu_label}"

    def __str__(self) -> str:
        return self.label


class DiagnosisClass(str, Enum):
    """Self-diagnosis capability of one redundancy layer"""

    MAJORITY_VOTING = "MajorityVoting"
    PURE_SERIES = "PureSeries"
    PURE_PARALLEL = "PureParallel"
    NO_REDUNDANCY = "NoRedundancy"

    def __str__(self) -> str:
        return self.value


class SelfDiagnosis(NamedTuple):
    sensor_layer: DiagnosisClass
    mcu_layer: DiagnosisClass
    suitable: bool


def _check_threshold(name: str, threshold: int, count: int):
    for value in (threshold, count):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ThresholdOutOfRange(f"{name}: counts and thresholds must be integers, got {value!r}")
    if count < 1:
        raise ThresholdOutOfRange(f"{name}: component count must be at least 1, got {count}")
    if threshold < 1 or threshold > count:
        raise ThresholdOutOfRange(
            f"{name}: threshold {threshold} outside [1, {count}]"
        )


def _check_rate(name: str, rate: float):
    try:
        value = float(rate)
    except (TypeError, ValueError):
        raise NonPositiveRate(f"{name} must be a real number, got {rate!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise NonPositiveRate(f"{name} must be a finite positive rate, got {rate!r}")


def validate(spec: ArchitectureSpec) -> ArchitectureSpec:
    """
    Check thresholds and rates and hand the architecture back unchanged.

    Raises:
        ThresholdOutOfRange: a threshold is below 1 or above its count
        NonPositiveRate: a failure rate is not strictly positive
    """
    _check_threshold("sensor layer", spec.s_required, spec.n_sensors)
    _check_threshold("MCU layer", spec.m_required, spec.n_mcus)
    _check_rate("lambda_sensor", spec.lambda_sensor)
    _check_rate("lambda_mcu", spec.lambda_mcu)
    return spec


def classify_layer(threshold: int, count: int) -> DiagnosisClass:
    """Tag one layer; the four tags partition the valid (threshold, count) pairs"""
    if count == 1:
        return DiagnosisClass.NO_REDUNDANCY
    if threshold == count:
        return DiagnosisClass.PURE_SERIES
    if threshold == 1:
        return DiagnosisClass.PURE_PARALLEL
    return DiagnosisClass.MAJORITY_VOTING


def classify_self_diagnosis(spec: ArchitectureSpec) -> SelfDiagnosis:
    """
    Classify both layers and decide fault-tolerant suitability.

    A spec is suitable when both layers vote by majority, or when one layer
    votes by majority and the other has a single component. Any 1ooN or NooN
    layer with N > 1 rules the spec out.
    """
    sensor_layer = classify_layer(spec.s_required, spec.n_sensors)
    mcu_layer = classify_layer(spec.m_required, spec.n_mcus)

    layers = {sensor_layer, mcu_layer}
    suitable = layers == {DiagnosisClass.MAJORITY_VOTING} or layers == {
        DiagnosisClass.MAJORITY_VOTING,
        DiagnosisClass.NO_REDUNDANCY,
    }
    return SelfDiagnosis(sensor_layer, mcu_layer, suitable)


def is_reference(spec: ArchitectureSpec) -> bool:
    """True for the non-redundant 1oo1/1oo1 baseline"""
    return spec.n_sensors == spec.s_required == spec.n_mcus == spec.m_required == 1


def parse_architecture(label: str, lambda_sensor: float, lambda_mcu: float) -> ArchitectureSpec:
    """
    Parse a "SooN_S/MooN_M" label (case-insensitive) into a validated spec.

    Raises:
        ParseError: the label is malformed or a threshold exceeds its count
        NonPositiveRate: a supplied rate is not strictly positive
    """
    match = _LABEL_PATTERN.match(label or "")
    if match is None:
        raise ParseError(f"Cannot parse architecture {label!r}; expected e.g. '2oo3/2oo4'")

    s_required, n_sensors, m_required, n_mcus = (int(group) for group in match.groups())
    spec = ArchitectureSpec(
        n_sensors=n_sensors,
        s_required=s_required,
        n_mcus=n_mcus,
        m_required=m_required,
        lambda_sensor=lambda_sensor,
        lambda_mcu=lambda_mcu,
    )
    try:
        validate(spec)
    except ThresholdOutOfRange as e:
        raise ParseError(f"Invalid architecture {label!r}: {e}") from e

    logger.debug("Parsed architecture %s", spec.label)
    return spec


def reference_architecture(lambda_sensor: float, lambda_mcu: float) -> ArchitectureSpec:
    return validate(ArchitectureSpec(1, 1, 1, 1, lambda_sensor, lambda_mcu))

"""
Run configuration schema.

A run config is a JSON document validated by the serializer tree below;
``RunConfigSerializer.save()`` returns an immutable ``RunConfig`` whose
canonical dictionary (every default filled in, output directory excluded)
determines the config hash that names every emitted file.
"""

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from django.conf import settings
from rest_framework import serializers

from clifford.gamma import build_gamma
from critical.choices import SolverKind
from critical.config import SolveConfig
from dirac.operator import DiracOperator
from eigen.config import EigenConfig
from energy.choices import NonlinearityKind
from energy.functional import Energy
from energy.nonlinearity import Nonlinearity
from lattice.torus import TorusModel
from runs.choices import EigenModeChoices
from shared.descent import StepRule
from shared.exceptions import ConfigurationError

SECTIONS = ("model", "nonlinearity", "spectrum", "eigen", "solve")


def _pdirac(name):
    return lambda: settings.PDIRAC[name]


class FiniteFloatField(serializers.FloatField):
    default_error_messages = {"not_finite": "must be finite"}

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail("not_finite")
        return value


class StepRuleSectionSerializer(serializers.Serializer):
    armijo = FiniteFloatField(default=1e-4)
    growth = FiniteFloatField(default=2.0)
    shrink = FiniteFloatField(default=0.5)
    memory = serializers.IntegerField(min_value=0, default=8)
    stall_rounds = serializers.IntegerField(min_value=1, default=100)

    def validate(self, attrs):
        try:
            StepRule(armijo=attrs["armijo"], growth=attrs["growth"], shrink=attrs["shrink"])
        except ConfigurationError as exc:
            raise serializers.ValidationError(str(exc)) from exc
        return attrs


class ModelSectionSerializer(serializers.Serializer):
    """Torus model; grid, lengths and twist default per dimension"""

    m = serializers.IntegerField(min_value=2, default=3)
    grid = serializers.ListField(child=serializers.IntegerField(), required=False)
    lengths = serializers.ListField(child=FiniteFloatField(), required=False)
    twist = serializers.ListField(child=FiniteFloatField(), required=False)
    allow_singular = serializers.BooleanField(default=False)

    def validate(self, attrs):
        m = attrs["m"]
        try:
            model = TorusModel(
                m=m,
                grid=tuple(attrs.get("grid", [8] * m)),
                lengths=tuple(attrs.get("lengths", [1.0] * m)),
                twist=tuple(attrs.get("twist", [0.5] * m)),
            )
        except ConfigurationError as exc:
            raise serializers.ValidationError(str(exc)) from exc
        if not model.is_invertible and not attrs["allow_singular"]:
            raise serializers.ValidationError(
                {
                    "twist": "an all-periodic twist gives D a kernel; "
                    "set allow_singular to proceed"
                }
            )
        return {
            "m": model.m,
            "grid": list(model.grid),
            "lengths": list(model.lengths),
            "twist": list(model.twist),
            "allow_singular": attrs["allow_singular"],
        }


class NonlinearitySerializer(serializers.Serializer):
    kind = serializers.ChoiceField(
        choices=NonlinearityKind.choices, default=NonlinearityKind.POWER
    )
    c = FiniteFloatField(default=1.0)
    e = FiniteFloatField(default=4.0)
    eps_H = FiniteFloatField(min_value=0.0, allow_null=True, default=None)

    def validate(self, attrs):
        if attrs["kind"] == NonlinearityKind.ZERO:
            return Nonlinearity.zero().as_dict()
        try:
            nl = Nonlinearity.power(c=attrs["c"], e=attrs["e"], eps_h=attrs["eps_H"])
        except ConfigurationError as exc:
            raise serializers.ValidationError(str(exc)) from exc
        return nl.as_dict()


class SpectrumSectionSerializer(serializers.Serializer):
    count = serializers.IntegerField(min_value=1, default=10)


class EigenSectionSerializer(StepRuleSectionSerializer):
    tolerance = FiniteFloatField(min_value=0.0, default=_pdirac("EIGEN_TOLERANCE"))
    max_iter = serializers.IntegerField(min_value=1, default=_pdirac("EIGEN_MAX_ITER"))
    restarts = serializers.IntegerField(min_value=1, default=_pdirac("EIGEN_RESTARTS"))
    deflation_count = serializers.IntegerField(min_value=0, default=0)
    mode = serializers.ChoiceField(
        choices=EigenModeChoices.choices, default=EigenModeChoices.MIN
    )
    count = serializers.IntegerField(min_value=1, default=5)
    q = FiniteFloatField(min_value=1.0, allow_null=True, default=None)
    kmax = serializers.IntegerField(min_value=0, default=5)

    def validate_tolerance(self, value):
        if value <= 0:
            raise serializers.ValidationError("tolerance must be > 0")
        return value


class SolveSectionSerializer(StepRuleSectionSerializer):
    solver = serializers.ChoiceField(
        choices=SolverKind.choices, default=SolverKind.MOUNTAIN_PASS
    )
    path_points = serializers.IntegerField(min_value=8, default=_pdirac("PATH_POINTS"))
    tol = FiniteFloatField(default=_pdirac("SOLVE_TOLERANCE"))
    max_iter = serializers.IntegerField(min_value=0, default=_pdirac("SOLVE_MAX_ITER"))
    galerkin_k = serializers.IntegerField(min_value=1, default=_pdirac("GALERKIN_K"))
    restarts = serializers.IntegerField(min_value=0, default=4)
    rim_radius = FiniteFloatField(allow_null=True, default=None)
    rim_samples = serializers.IntegerField(min_value=32, default=32)
    max_doublings = serializers.IntegerField(min_value=1, default=60)
    kmax = serializers.IntegerField(min_value=1, default=4)
    seed_branch = serializers.BooleanField(default=False)
    dump_fields = serializers.BooleanField(default=False)
    estimate_tails = serializers.BooleanField(default=False)

    def validate_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("tol must be > 0")
        return value

    def validate_rim_radius(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("rim_radius must be > 0")
        return value


class RunConfigSerializer(serializers.Serializer):
    model = ModelSectionSerializer()
    p = FiniteFloatField(default=2.0)
    eps = FiniteFloatField(min_value=0.0, allow_null=True, default=None)
    override_p_range = serializers.BooleanField(default=False)
    nonlinearity = NonlinearitySerializer()
    spectrum = SpectrumSectionSerializer()
    eigen = EigenSectionSerializer()
    solve = SolveSectionSerializer()
    seed = serializers.IntegerField(min_value=0, default=0)
    output_dir = serializers.CharField(default=_pdirac("OUTPUT_DIR"))

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError(
                {"non_field_errors": ["a run config must be a JSON object"]}
            )
        # absent sections still pass through their serializer to pick up defaults
        data = {**data}
        for section in SECTIONS:
            if data.get(section) is None:
                data[section] = {}
        return super().to_internal_value(data)

    def validate(self, attrs):
        p, m = attrs["p"], attrs["model"]["m"]
        if p <= 1:
            raise serializers.ValidationError({"p": f"p must be > 1, got {p}"})
        if p >= m and not attrs["override_p_range"]:
            raise serializers.ValidationError(
                {"p": f"p must be < m = {m}; pass --override-p-range to allow p={p}"}
            )
        return attrs

    def create(self, validated_data):
        data = copy.deepcopy(validated_data)
        output_dir = Path(data.pop("output_dir"))
        return RunConfig(data=data, output_dir=output_dir)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Validated, fully defaulted run configuration"""

    data: dict
    output_dir: Path = field(default_factory=lambda: Path(settings.PDIRAC["OUTPUT_DIR"]))

    def to_dict(self):
        return copy.deepcopy(self.data)

    def canonical_json(self):
        return json.dumps(self.data, sort_keys=True, separators=(",", ":"))

    @cached_property
    def config_hash(self):
        """Git blob SHA-1 of the canonical JSON"""
        body = self.canonical_json().encode("utf-8")
        return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()

    @property
    def short_hash(self):
        return self.config_hash[:12]

    def section(self, name):
        return self.data[name]

    @property
    def p(self):
        return self.data["p"]

    @property
    def eps(self):
        return self.data["eps"]

    @property
    def seed(self):
        return self.data["seed"]

    @property
    def override_p_range(self):
        return self.data["override_p_range"]

    # Builders

    def build_model(self):
        section = self.data["model"]
        return TorusModel(
            m=section["m"],
            grid=tuple(section["grid"]),
            lengths=tuple(section["lengths"]),
            twist=tuple(section["twist"]),
        )

    def build_dirac(self):
        model = self.build_model()
        return DiracOperator(model, build_gamma(model.m))

    def build_nonlinearity(self):
        section = self.data["nonlinearity"]
        if section["kind"] == NonlinearityKind.ZERO:
            return Nonlinearity.zero()
        return Nonlinearity.power(c=section["c"], e=section["e"], eps_h=section["eps_H"])

    def build_energy(self, dirac=None):
        return Energy(
            dirac or self.build_dirac(),
            self.p,
            self.build_nonlinearity(),
            self.eps,
            override_p_range=self.override_p_range,
        )

    def _step_rule(self, section):
        return StepRule(
            armijo=section["armijo"], growth=section["growth"], shrink=section["shrink"]
        )

    def eigen_config(self):
        section = self.data["eigen"]
        return EigenConfig(
            p=self.p,
            tolerance=section["tolerance"],
            max_iter=section["max_iter"],
            step_rule=self._step_rule(section),
            restarts=section["restarts"],
            deflation_count=section["deflation_count"],
            eps=self.eps,
            seed=self.seed,
            memory=section["memory"],
            stall_rounds=section["stall_rounds"],
            allow_singular=self.data["model"]["allow_singular"],
        )

    def solve_config(self):
        section = self.data["solve"]
        return SolveConfig(
            path_points=section["path_points"],
            step_rule=self._step_rule(section),
            tol=section["tol"],
            max_iter=section["max_iter"],
            seed=self.seed,
            galerkin_k=section["galerkin_k"],
            restarts=section["restarts"],
            rim_radius=section["rim_radius"],
            rim_samples=section["rim_samples"],
            memory=section["memory"],
            stall_rounds=section["stall_rounds"],
            max_doublings=section["max_doublings"],
        )


def merge(base, overrides):
    """Nested update of ``base`` with the non-None entries of ``overrides``"""
    merged = {**base}
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        elif isinstance(value, dict):
            merged[key] = merge({}, value)
        else:
            merged[key] = value
    return merged


def read_document(path):
    """A config file, or the config recorded inside a run manifest"""
    try:
        document = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file {path} does not exist") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if isinstance(document, dict) and "config_hash" in document and "config" in document:
        return document["config"]
    return document


def load_config(path=None, overrides=None):
    """
    Defaults < config file < overrides. Raises ``serializers.ValidationError``
    on schema errors and ``ConfigurationError`` on unreadable files.
    """
    document = read_document(path) if path else {}
    if not isinstance(document, dict):
        raise ConfigurationError("a run config must be a JSON object")
    serializer = RunConfigSerializer(data=merge(document, overrides or {}))
    serializer.is_valid(raise_exception=True)
    return serializer.save()

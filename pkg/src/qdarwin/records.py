"""Experiment specs, run records and their CSV / JSON forms.

CSV floats use 9 significant digits (``%.9g``) so golden files stay
byte-stable. JSON floats use Python's ``repr``, which round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from . import __version__
from .dynamics import ModelConfig, initial_state, pointer_coherence, run_model, system_state
from .information import (DEFAULT_DELTA, DEFAULT_MC_SAMPLES, DEFAULT_POLICY_THRESHOLD,
                          CurvePoint, MICurve, RedundancyResult, mi_curve, redundancy)
from .rng import RandomStream

CURVE_HEADER = "m,f,mean_mi_bits,std_mi_bits,n_fragments,exhaustive"
SUMMARY_HEADER = "value,h_s_bits,m_star,r_delta"
FORMATS = ("csv", "json")


def fmt(x: float) -> str:
    return f"{x:.9g}"


@dataclass(frozen=True)
class ExperimentSpec:
    n_env: int = 8
    copy_angle: float = float(np.pi)
    system_init: Any = "plus"
    scattering_rounds: int = 0
    scattering_angle: float = 0.0
    scattering_kind: str = "flip"
    seed: int = 0
    delta: float = DEFAULT_DELTA
    policy_threshold: int = DEFAULT_POLICY_THRESHOLD
    mc_samples: int = DEFAULT_MC_SAMPLES
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if self.policy_threshold < 0:
            raise ValueError("policy_threshold must be non-negative")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if not isinstance(self.system_init, str):
            object.__setattr__(self, "system_init", tuple(complex(a) for a in self.system_init))
        self.model_config()  # validates the embedded model parameters

    def model_config(self) -> ModelConfig:
        return ModelConfig(n_env=self.n_env, copy_angle=self.copy_angle,
                           system_init=self.system_init,
                           scattering_rounds=self.scattering_rounds,
                           scattering_angle=self.scattering_angle, seed=self.seed,
                           scattering_kind=self.scattering_kind)

    def to_dict(self) -> dict:
        d = asdict(self)
        if not isinstance(self.system_init, str):
            d["system_init"] = [[a.real, a.imag] for a in self.system_init]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        init = d.get("system_init", "plus")
        if not isinstance(init, str):
            d["system_init"] = tuple(complex(re, im) for re, im in init)
        return cls(**d)


@dataclass(frozen=True)
class RunRecord:
    spec: ExperimentSpec
    curve: MICurve
    redundancy: RedundancyResult
    pointer_coherence_before: float
    pointer_coherence_after: float
    tool_version: str = __version__
    warnings: tuple[str, ...] = field(default=())

    @property
    def seed(self) -> int:
        return self.spec.seed

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "seed": self.seed,
            "spec": self.spec.to_dict(),
            "pointer_coherence_before": self.pointer_coherence_before,
            "pointer_coherence_after": self.pointer_coherence_after,
            "redundancy": asdict(self.redundancy),
            "curve": {
                "n_env": self.curve.n_env,
                "h_s": self.curve.h_s,
                "points": [asdict(p) for p in self.curve.points],
            },
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        c = d["curve"]
        curve = MICurve(n_env=c["n_env"], h_s=c["h_s"],
                        points=tuple(CurvePoint(**p) for p in c["points"]))
        return cls(spec=ExperimentSpec.from_dict(d["spec"]), curve=curve,
                   redundancy=RedundancyResult(**d["redundancy"]),
                   pointer_coherence_before=d["pointer_coherence_before"],
                   pointer_coherence_after=d["pointer_coherence_after"],
                   tool_version=d["tool_version"], warnings=tuple(d.get("warnings", ())))


def record_to_json(record: RunRecord) -> str:
    return json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n"


def record_from_json(text: str) -> RunRecord:
    return RunRecord.from_dict(json.loads(text))


def curve_to_csv(curve: MICurve) -> str:
    lines = [CURVE_HEADER]
    for p in curve.points:
        lines.append(",".join([str(p.m), fmt(p.f), fmt(p.mean_mi), fmt(p.std_mi),
                               str(p.n_fragments), "true" if p.exhaustive else "false"]))
    return "\n".join(lines) + "\n"


def summary_to_csv(rows: list[tuple[float, RunRecord]]) -> str:
    lines = [SUMMARY_HEADER]
    for value, rec in rows:
        red = rec.redundancy
        lines.append(",".join([
            fmt(value), fmt(red.h_s),
            "" if red.m_star is None else str(red.m_star),
            "" if red.r_delta is None else fmt(red.r_delta),
        ]))
    return "\n".join(lines) + "\n"


def simulate(spec: ExperimentSpec, workers: int = 1) -> RunRecord:
    """Run dynamics, the MI sweep and redundancy for one spec."""
    config = spec.model_config()
    before = pointer_coherence(system_state(initial_state(config)))
    gs = run_model(config)
    curve = mi_curve(gs, policy_threshold=spec.policy_threshold, samples=spec.mc_samples,
                     stream=RandomStream(spec.seed), workers=workers)
    return RunRecord(spec=spec, curve=curve, redundancy=redundancy(curve, spec.delta),
                     pointer_coherence_before=before,
                     pointer_coherence_after=pointer_coherence(system_state(gs)),
                     warnings=gs.warnings)


SPEC_FIELDS = tuple(f.name for f in fields(ExperimentSpec))

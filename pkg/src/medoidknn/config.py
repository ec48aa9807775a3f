"""Pipeline configuration: one flat record of every tunable, loadable from
a JSON file with explicit flags taking precedence."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .classifier import WeightMode
from .errors import InputError, IoFailure
from .vectorspace import IdfBase, Weighting


@dataclass(frozen=True)
class PipelineConfig:
    stopwords_path: str | None = None
    min_token_len: int = 2
    conflate_tau: float = 0.6
    n_features: int = 2000
    weighting: Weighting = Weighting.TFIDF
    idf_base: IdfBase = IdfBase.TEN
    k_fraction: float = 0.1
    min_cluster_size: int = 5
    outlier_sigma: float = 2.0
    edit_cap: int = 256
    restarts: int = 5
    max_iter: int = 100
    fallback_full_category: bool = True
    knn_k: int = 5
    weight_mode: WeightMode = WeightMode.RANK
    seed: int = 0
    threads: int = 1

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["weighting"] = self.weighting.value
        out["idf_base"] = self.idf_base.value
        out["weight_mode"] = self.weight_mode.value
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(raw)
        try:
            if "weighting" in kwargs:
                kwargs["weighting"] = Weighting(kwargs["weighting"])
            if "idf_base" in kwargs:
                kwargs["idf_base"] = IdfBase(str(kwargs["idf_base"]))
            if "weight_mode" in kwargs:
                kwargs["weight_mode"] = WeightMode(kwargs["weight_mode"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return cls(**kwargs)

    def merged(self, overrides: dict) -> "PipelineConfig":
        """A copy with the given fields replaced; None values are ignored
        so unset CLI flags fall through to this config."""
        cleaned = {k: v for k, v in overrides.items() if v is not None}
        base = self.to_dict()
        base.update(
            {
                k: (v.value if hasattr(v, "value") else v)
                for k, v in cleaned.items()
            }
        )
        return PipelineConfig.from_dict(base)


def load_config(path: str | Path) -> PipelineConfig:
    """Read a flat JSON object of config fields."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config file {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InputError(f"config file {path} must hold a JSON object")
    return PipelineConfig.from_dict(raw)

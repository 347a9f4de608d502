"""Scenario files: strict schema, presets and config digest."""

import hashlib
import json
import logging
import math
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, model_validator

from ..core import SessionConfig, StreamSeeds
from ..core.distributions import MAX_VOCAB
from ..exceptions import ScenarioError
from ..models import AlignedPair, TableModel, make_aligned_pair, make_constant_alpha_pair
from ..pipeline.truncation import TruncationPolicy
from ..transport import ChannelConfig

logger = logging.getLogger(__name__)

MODES = ("sync", "async", "no-fastverify", "no-splitrej")
# Verdict body is 4 + 6 K' bytes and body_len is a u16
MAX_DENSE_VOCAB = (0xFFFF - 4) // 6


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ModelSpec(_Strict):
    """Either generated aligned tables, a constant-alpha pair, or explicit tables."""

    V: int = Field(16, ge=2, le=MAX_VOCAB)
    m: int = Field(1, ge=1)
    lam: float = Field(0.8, alias="lambda", ge=0.0, le=1.0)
    alpha: Optional[float] = Field(None, ge=0.0, le=1.0)
    seed: int = 0
    concentration: float = Field(0.5, gt=0.0)
    target_table: Optional[Dict[str, Any]] = None
    draft_table: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def _check_tables(self):
        if (self.target_table is None) != (self.draft_table is None):
            raise ValueError("target_table and draft_table must be given together")
        if self.alpha is not None and self.V % 2:
            raise ValueError("constant-alpha models need an even V")
        return self


class CostSpec(_Strict):
    t_d: float = Field(25.0, ge=0.0)
    t_v: float = Field(10.0, ge=0.0)
    # (first batch id, multiplier on t_d) steps
    draft_cost_schedule: List[Tuple[int, float]] = Field(default_factory=list)


class SessionSpec(_Strict):
    gamma: int = Field(4, ge=1, le=64)
    K: int = Field(10, ge=1)
    seed: int = 0


class ChannelSpec(_Strict):
    one_way_latency: float = Field(30.0, ge=0.0)
    bandwidth: Optional[float] = Field(None, gt=0.0)  # bytes/ms, null = unlimited
    jitter_std: float = Field(0.0, ge=0.0)
    seed: Optional[int] = None


class TruncationSpec(_Strict):
    beta: Optional[float] = Field(1.25, gt=0.0)  # null disables truncation
    decay: float = Field(0.2, gt=0.0, le=1.0)


class ScenarioConfig(_Strict):
    name: str = "custom"
    description: str = ""
    model: ModelSpec = Field(default_factory=ModelSpec)
    costs: CostSpec = Field(default_factory=CostSpec)
    session: SessionSpec = Field(default_factory=SessionSpec)
    channel: ChannelSpec = Field(default_factory=ChannelSpec)
    truncation: TruncationSpec = Field(default_factory=TruncationSpec)
    mode: Literal["sync", "async", "no-fastverify", "no-splitrej"] = "async"
    max_tokens: int = Field(1000, ge=1)
    prompt: List[int] = Field(default_factory=lambda: [0])

    _pair: Optional[AlignedPair] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_consistency(self):
        V = self.model.V
        if self.session.K > V:
            raise ValueError(f"K={self.session.K} exceeds V={V}")
        if not self.prompt:
            raise ValueError("prompt must hold at least one token")
        if any(not 0 <= t < V for t in self.prompt):
            raise ValueError("prompt tokens must lie in [0, V)")
        if self.mode == "no-splitrej" and V > MAX_DENSE_VOCAB:
            raise ValueError(f"dense verdicts need V <= {MAX_DENSE_VOCAB}")
        return self

    # Builders

    def build_pair(self) -> AlignedPair:
        if self._pair is None:
            self._pair = self._build_pair()
        return self._pair

    def _build_pair(self) -> AlignedPair:
        model_spec = self.model
        if model_spec.target_table is not None:
            target = TableModel.from_dict(model_spec.target_table)
            draft = TableModel.from_dict(model_spec.draft_table)
            if target.V != model_spec.V or draft.V != model_spec.V:
                raise ScenarioError("explicit tables disagree with model.V")
            target.cost_ms = self.costs.t_v
            draft.cost_ms = self.costs.t_d
            return AlignedPair(target=target, draft=draft, lam=model_spec.lam)
        if model_spec.alpha is not None:
            return make_constant_alpha_pair(
                model_spec.alpha, V=model_spec.V, draft_cost_ms=self.costs.t_d, verify_cost_ms=self.costs.t_v
            )
        return make_aligned_pair(
            V=model_spec.V,
            m=model_spec.m,
            lam=model_spec.lam,
            seed=model_spec.seed,
            concentration=model_spec.concentration,
            draft_cost_ms=self.costs.t_d,
            verify_cost_ms=self.costs.t_v,
        )

    def stream_seeds(self) -> StreamSeeds:
        seed = self.session.seed
        network = self.channel.seed if self.channel.seed is not None else seed
        return StreamSeeds(seed, seed, seed, network)

    def session_config(self) -> SessionConfig:
        return SessionConfig(
            V=self.model.V, gamma=self.session.gamma, K=self.session.K, seeds=self.stream_seeds()
        )

    def channel_config(self) -> ChannelConfig:
        bw = self.channel.bandwidth
        return ChannelConfig(
            one_way_latency=self.channel.one_way_latency,
            bandwidth=math.inf if bw is None else bw,
            jitter_std=self.channel.jitter_std,
            seed=self.stream_seeds().network,
        )

    def truncation_policy(self) -> TruncationPolicy:
        return TruncationPolicy(beta=self.truncation.beta, decay=self.truncation.decay)

    # Overrides and identity

    def updated(self, **changes: Any) -> "ScenarioConfig":
        """
        Copy with dotted-path overrides, revalidated.

        Example: ``scenario.updated(**{"session.gamma": 6, "mode": "sync"})``
        """
        data = self.model_dump(by_alias=True)
        for path, value in changes.items():
            node = data
            *parents, leaf = path.split(".")
            for key in parents:
                node = node[key]
            if leaf not in node:
                raise ScenarioError(f"unknown scenario field {path!r}")
            node[leaf] = value
        return parse_scenario(data, source=self.name)

    def canonical_json(self) -> str:
        return json.dumps(
            self.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":")
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def parse_scenario(data: Any, source: str = "<memory>") -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: scenario must be a mapping")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(f"{source}: invalid scenario\n{e}") from e


def preset_names() -> List[str]:
    root = resources.files("edgespec.scenarios")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_scenario(source: Union[str, Path]) -> ScenarioConfig:
    """Load a scenario from a JSON/YAML path or a bundled preset name."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
        label = str(path)
    else:
        preset = resources.files("edgespec.scenarios").joinpath(f"{source}.json")
        if not preset.is_file():
            raise ScenarioError(f"scenario file not found: {source}")
        text = preset.read_text()
        label = f"preset {source}"
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioError(f"{label}: cannot parse: {e}") from e
    scenario = parse_scenario(data, source=label)
    logger.info("loaded scenario %s (%s) digest %s", scenario.name, label, scenario.digest()[:12])
    return scenario

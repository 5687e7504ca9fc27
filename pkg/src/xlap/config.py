"""Run configuration: declarative key=value config file plus CLI overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .align import PipelineConfig
from .corpus import AlignmentMethod

VARIANTS = ("european", "brazilian")
PROVIDER_MODES = ("fixture", "live")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str = ""
    output: str = ""
    gold: str | None = None
    variant: str = "european"
    providers: str = "fixture"
    cache_dir: str = ".xlap-cache"
    fixtures_dir: str = "fixtures/providers"
    parallelism: int = 1
    order: tuple[AlignmentMethod, ...] | None = None
    fuzzy_threshold: float | None = None
    safeguard_ratio: float | None = None
    safeguard_slack_tokens: int | None = None
    aligner_prob_threshold: float | None = None
    case_fold_direct_match: bool | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.providers not in PROVIDER_MODES:
            raise ConfigError(f"providers must be one of {PROVIDER_MODES}, got {self.providers!r}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be a positive integer")

    def pipeline_config(self) -> PipelineConfig:
        config = PipelineConfig()
        overrides = {
            name: getattr(self, name)
            for name in (
                "fuzzy_threshold",
                "safeguard_ratio",
                "safeguard_slack_tokens",
                "aligner_prob_threshold",
                "case_fold_direct_match",
            )
            if getattr(self, name) is not None
        }
        if self.order is not None:
            overrides["strategy_order"] = self.order
        return replace(config, **overrides) if overrides else config


def parse_order(text: str) -> tuple[AlignmentMethod, ...]:
    """Parse a comma-separated strategy list like "SMatch,Lemma,WAligner"."""
    names = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return tuple(AlignmentMethod(name) for name in names)
    except ValueError as err:
        raise ConfigError(f"bad strategy order {text!r}: {err}") from None


_BOOL_VALUES = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def load_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment. Returns raw values
    coerced to the RunConfig field types."""
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()

    typed: dict = {}
    known = {f.name: f for f in fields(RunConfig)}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"{path}: unknown config key {key!r}")
        typed[key] = _coerce(key, value)
    return typed


def _coerce(key: str, value: str):
    if key == "order":
        return parse_order(value)
    if key in ("parallelism", "safeguard_slack_tokens"):
        return int(value)
    if key in ("fuzzy_threshold", "safeguard_ratio", "aligner_prob_threshold"):
        return float(value)
    if key == "case_fold_direct_match":
        try:
            return _BOOL_VALUES[value.lower()]
        except KeyError:
            raise ConfigError(f"bad boolean for {key}: {value!r}") from None
    return value


def build_run_config(config_file: str | None, cli_overrides: dict) -> RunConfig:
    """Merge precedence: defaults < config file < explicitly passed CLI flags."""
    merged: dict = {}
    if config_file:
        merged.update(load_config_file(config_file))
    merged.update({k: v for k, v in cli_overrides.items() if v is not None})
    try:
        return RunConfig(**merged)
    except TypeError as err:
        raise ConfigError(str(err)) from None

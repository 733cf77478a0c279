"""Run configuration and its TOML file form.

Example file::

    [run]
    t = 2.0
    generator_mode = "column-generator"
    entropy_method = "deng"
    fit_scope = "per-experiment"
    target = "em-published"

    [rates."townsend2000/N"]
    k_r = 0.151885
    k_w = 0.359577
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .calibration import TARGET_SOURCES
from .errors import ParseError
from .evidence import EntropyMethod
from .markov import GeneratorMode
from .model import DEFAULT_TIME

FIT_SCOPES = ("per-experiment", "shared")


@dataclass(frozen=True)
class RunConfig:
    t: float = DEFAULT_TIME
    generator_mode: GeneratorMode = GeneratorMode.COLUMN_GENERATOR
    entropy_method: EntropyMethod = EntropyMethod.DENG
    fit_scope: str = "per-experiment"
    target: str = "em-published"
    rate_overrides: Optional[tuple[float, float]] = None
    fitted_rates: dict = field(default_factory=dict)
    gamma_zero: bool = False

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")
        object.__setattr__(self, "generator_mode", GeneratorMode.parse(self.generator_mode))
        object.__setattr__(self, "entropy_method", EntropyMethod.parse(self.entropy_method))
        if self.fit_scope not in FIT_SCOPES:
            raise ValueError(f"fit_scope must be one of {FIT_SCOPES}, got {self.fit_scope!r}")
        if self.target not in TARGET_SOURCES:
            raise ValueError(f"target must be one of {TARGET_SOURCES}, got {self.target!r}")
        if self.rate_overrides is not None:
            k_r, k_w = (float(v) for v in self.rate_overrides)
            if k_r < 0 or k_w < 0:
                raise ValueError("rate overrides must be nonnegative")
            object.__setattr__(self, "rate_overrides", (k_r, k_w))

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def record_key(record) -> str:
    return f"{record.name}/{record.face_type}"


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    run = dict(data.get("run", {}))
    overrides = run.pop("rate_overrides", None)
    rates = {
        key: (float(v["k_r"]), float(v["k_w"]))
        for key, v in data.get("rates", {}).items()
    }
    try:
        return RunConfig(
            rate_overrides=tuple(overrides) if overrides is not None else None,
            fitted_rates=rates,
            **run,
        )
    except TypeError as exc:
        raise ParseError(f"{path}: {exc}") from None


def dump_config(config: RunConfig) -> str:
    lines = [
        "[run]",
        f"t = {config.t!r}",
        f'generator_mode = "{config.generator_mode.value}"',
        f'entropy_method = "{config.entropy_method.value}"',
        f'fit_scope = "{config.fit_scope}"',
        f'target = "{config.target}"',
        f"gamma_zero = {'true' if config.gamma_zero else 'false'}",
    ]
    if config.rate_overrides is not None:
        lines.append(f"rate_overrides = [{config.rate_overrides[0]!r}, {config.rate_overrides[1]!r}]")
    for key in sorted(config.fitted_rates):
        k_r, k_w = config.fitted_rates[key]
        lines += ["", f'[rates."{key}"]', f"k_r = {k_r!r}", f"k_w = {k_w!r}"]
    return "\n".join(lines) + "\n"


def save_config(config: RunConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_config(config), encoding="utf-8")

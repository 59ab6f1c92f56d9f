"""Experiment configuration: JSON parsing, validation and measure resolution."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

from .errors import ConfigError
from .measures import Measure
from .strategies import christoffel_sampling_measure, strategy_one, strategy_two

EXPERIMENT_KINDS = ("convergence", "theta", "budget", "sample")

# strategy ids accepted in configs; parametrized ones take ":<value>"
_PLAIN_STRATEGIES = ("fig1", "one", "two", "christoffel", "uniform", "chebyshev")


@dataclass(frozen=True)
class MRule:
    """Sample-count rule m(n) = ceil(coefficient * n^exponent)."""

    coefficient: float
    exponent: float

    def __post_init__(self):
        if self.coefficient <= 0.0:
            raise ConfigError("m-rule coefficient must be positive")

    def m_for(self, n: int) -> int:
        return math.ceil(self.coefficient * float(n) ** self.exponent)


def parse_measure_spec(spec: str, alpha: float = 1.5, delta: float = 0.1, n: int | None = None) -> Measure:
    """Resolve a strategy/measure id to a concrete sampling measure.

    Plain ids: uniform, chebyshev, christoffel, one, two, fig1.
    Parametrized: jacobi:<beta>, scaled_chebyshev:<sigma>, christoffel:<n>.
    Ids depending on n (two, christoffel, fig1-with-n) require ``n``.
    """
    spec = spec.strip().lower()
    name, _, arg = spec.partition(":")
    try:
        if name == "uniform":
            return Measure.uniform()
        if name == "chebyshev":
            return Measure.chebyshev()
        if name == "jacobi":
            return Measure.jacobi(float(arg))
        if name == "scaled_chebyshev":
            return Measure.scaled_chebyshev(float(arg))
        if name == "christoffel":
            size = int(arg) if arg else n
            if size is None:
                raise ConfigError("christoffel measure needs a basis dimension")
            return christoffel_sampling_measure(size)
        if name == "one":
            return strategy_one(alpha, delta)
        if name == "two":
            if n is None:
                raise ConfigError("strategy two needs the basis dimension n")
            return strategy_two(n)
        if name == "fig1":
            # the convergence-experiment default: Jacobi exponent alpha - 1
            return Measure.jacobi(alpha - 1.0)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid measure spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown measure spec {spec!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment run."""

    kind: str
    n_values: tuple[int, ...]
    strategy: str = "fig1"
    alpha: float = 1.5
    delta: float = 0.1
    m_rule: MRule | None = None
    trials: int = 50
    epsilon: float = 0.1
    theta: float = 10.0
    m_step: int = 50
    m_cap: int = 100_000
    noise_amplitude: float = 0.0
    base_seed: int = 0
    quadrature_margin: int = 16
    grid_size: int = 4001
    sigma: float | None = None
    pole: float = 1.1
    output: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if len(self.n_values) == 0:
            raise ConfigError("n list must be nonempty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ConfigError("n list must be strictly increasing")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("n values must be positive")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not (0.0 < self.epsilon < 1.0):
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.theta <= 1.0:
            raise ConfigError("theta must exceed 1")
        if self.m_step < 1 or self.m_cap < 1:
            raise ConfigError("m step and cap must be positive")
        if self.noise_amplitude < 0.0:
            raise ConfigError("noise amplitude must be nonnegative")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        name = self.strategy.partition(":")[0]
        if name not in _PLAIN_STRATEGIES + ("jacobi", "scaled_chebyshev"):
            raise ConfigError(f"unknown strategy id {self.strategy!r}")
        if self.kind == "convergence" and self.m_rule is None:
            raise ConfigError("convergence experiments require an m rule")
        if self.m_rule is not None:
            bad = [n for n in self.n_values if self.m_rule.m_for(n) < n]
            if bad:
                raise ConfigError(f"m rule yields m < n at n = {bad[0]}")

    def measure_for(self, n: int) -> Measure:
        if self.sigma is not None and self.strategy.partition(":")[0] == "two":
            return Measure.scaled_chebyshev(self.sigma)
        return parse_measure_spec(self.strategy, self.alpha, self.delta, n)

    def effective_jobs(self) -> int:
        env = os.environ.get("COSTWISE_JOBS")
        if env is not None:
            try:
                jobs = int(env)
            except ValueError as exc:
                raise ConfigError(f"COSTWISE_JOBS must be an integer, got {env!r}") from exc
            if jobs < 1:
                raise ConfigError("COSTWISE_JOBS must be at least 1")
            return jobs
        return self.jobs

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        data = dict(data)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "n_values" in data:
            try:
                data["n_values"] = tuple(int(n) for n in data["n_values"])
            except (TypeError, ValueError) as exc:
                raise ConfigError("n_values must be a list of integers") from exc
        rule = data.get("m_rule")
        if rule is not None and not isinstance(rule, MRule):
            if not isinstance(rule, dict) or set(rule) != {"coefficient", "exponent"}:
                raise ConfigError("m_rule must be {\"coefficient\": ..., \"exponent\": ...}")
            data["m_rule"] = MRule(float(rule["coefficient"]), float(rule["exponent"]))
        try:
            return cls(**data)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
        return cls.from_dict(data)

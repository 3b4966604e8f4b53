"""Service-time distributions parameterized by their mean."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .._validation import check_real
from ..exceptions import ConfigError

KINDS = ("exponential", "deterministic", "lognormal", "erlang_phase")


@dataclass(frozen=True)
class ServiceDistribution:
    """Service time law with a fixed mean.

    ``shape`` is the sigma of the underlying normal for ``lognormal``
    (default 1.0) and the number of phases for ``erlang_phase``
    (default 2). It is ignored otherwise.
    """

    kind: str
    mean: float
    shape: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown service distribution {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "mean", check_real(self.mean, "mean", minimum=0.0, strict=True, error=ConfigError))
        if self.shape is not None:
            shape = check_real(self.shape, "shape", minimum=0.0, strict=True, error=ConfigError)
            if self.kind == "erlang_phase" and not shape.is_integer():
                raise ConfigError(f"erlang_phase needs an integer phase count, got {shape}")
            object.__setattr__(self, "shape", shape)

    @property
    def sigma(self):
        return 1.0 if self.shape is None else self.shape

    @property
    def phases(self):
        return 2 if self.shape is None else int(self.shape)

    @property
    def scv(self):
        """Squared coefficient of variation."""
        if self.kind == "exponential":
            return 1.0
        if self.kind == "deterministic":
            return 0.0
        if self.kind == "lognormal":
            return math.expm1(self.sigma ** 2)
        return 1.0 / self.phases

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "exponential":
            return rng.exponential(self.mean, size)
        if self.kind == "deterministic":
            return np.full(size, self.mean)
        if self.kind == "lognormal":
            s = self.sigma
            return rng.lognormal(math.log(self.mean) - 0.5 * s * s, s, size)
        k = self.phases
        return rng.gamma(k, self.mean / k, size)

    def label(self):
        if self.kind == "lognormal":
            return f"lognormal(sigma={self.sigma:g})"
        if self.kind == "erlang_phase":
            return f"erlang_phase(k={self.phases})"
        return self.kind

"""Run configuration shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import ConfigError
from .fpcore import validate_odd_prime


SPECTRA = ("mu", "bp")
FORMATS = ("json", "text", "tsv", "svg")
SUITES = ("all", "steenrod", "singer", "tate", "kappa", "gamma", "segal", "hochschild")


@dataclass
class RunConfig:
    p: int = 3
    spectrum: str = "mu"
    ell_max: int = 3
    k_max: int = 2
    degree_max: int = 40
    degree_min: int = 0
    floor: int = -24
    s_max: int = 0
    seed: int = 0
    fmt: str = "text"

    def validate(self):
        validate_odd_prime(self.p)
        if self.spectrum not in SPECTRA:
            raise ConfigError(f"spectrum must be one of {SPECTRA}")
        if self.ell_max < 1 or self.k_max < 1:
            raise ConfigError("generator bounds must be at least 1")
        if self.degree_min > self.degree_max:
            raise ConfigError("empty total-degree window")
        if self.floor > self.s_max:
            raise ConfigError("empty filtration window")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        return self

    def echo(self):
        return asdict(self)

    def gen_bound(self):
        return self.ell_max if self.spectrum == "mu" else self.k_max

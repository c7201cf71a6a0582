"""Ground-truth linear non-Gaussian models with latent confounders.

A model is a pair of observed variables built from independent noise
sources: one source per latent confounder plus one own noise each. From
the path-coefficient form every source enters (X, Y) through a coefficient
pair, which makes exact population joint cumulants a one-line sum. That
sum is the brute-force oracle behind all rank/determinant theorem checks.

Synthetic data follows the benchmark protocol: noises are log-absolute
transforms of draws from one of five scale families, causal coefficients
are drawn from +/-[0.2, 0.8], scales from [0.5, 1.5].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cumulants import BivariateSample, CumulantTable, univariate_cumulants

FAMILIES = ("laplace", "normal", "logistic", "exponential", "uniform")
FAMILY_ALIASES = {f"d{i + 1}": fam for i, fam in enumerate(FAMILIES)}

X_TO_Y = "x->y"
Y_TO_X = "y->x"
NO_EDGE = "none"

COEF_LOW, COEF_HIGH = 0.2, 0.8
SCALE_LOW, SCALE_HIGH = 0.5, 1.5


@dataclass(frozen=True)
class NoiseSpec:
    """One independent noise source.

    Either a distribution family (optionally log-abs transformed, the
    benchmark default) or an explicit cumulant list for population-exact
    oracle models.
    """

    family: str | None = None
    scale: float = 1.0
    log_abs: bool = True
    explicit_cumulants: tuple[float, ...] | None = None  # kappa_1, kappa_2, ...

    def __post_init__(self):
        if (self.family is None) == (self.explicit_cumulants is None):
            raise ValueError("give exactly one of family / explicit_cumulants")
        if self.family is not None:
            fam = FAMILY_ALIASES.get(self.family, self.family)
            if fam not in FAMILIES:
                raise ValueError(f"unknown family {self.family!r}")
            object.__setattr__(self, "family", fam)
            if self.scale <= 0:
                raise ValueError("scale must be positive")
        else:
            object.__setattr__(self, "explicit_cumulants", tuple(self.explicit_cumulants))
            if not any(abs(c) > 0 for c in self.explicit_cumulants[2:]):
                raise ValueError("explicit cumulants need a nonzero entry of order >= 3")

    def cumulants(self, max_order: int) -> np.ndarray:
        """kappa_1..kappa_max_order (index 0 unused); explicit specs only."""
        if self.explicit_cumulants is None:
            raise ValueError("distributional spec has no exact cumulants; use noise_cumulants_mc")
        if len(self.explicit_cumulants) < max_order:
            raise ValueError(f"spec holds {len(self.explicit_cumulants)} cumulants, need {max_order}")
        out = np.zeros(max_order + 1)
        out[1:] = self.explicit_cumulants[:max_order]
        return out

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.family is None:
            raise ValueError("cumulant-only spec cannot be sampled")
        if self.family == "laplace":
            r = rng.laplace(0.0, self.scale, n)
        elif self.family == "normal":
            r = rng.normal(0.0, self.scale, n)
        elif self.family == "logistic":
            r = rng.logistic(0.0, self.scale, n)
        elif self.family == "exponential":
            r = rng.exponential(self.scale, n)
        else:
            r = rng.uniform(0.0, self.scale, n)
        if self.log_abs:
            r = np.log(np.abs(r))
        return r


@dataclass(frozen=True)
class ModelSpec:
    """Structural parameters of a two-variable model with m latent confounders."""

    m: int
    gamma: float
    lambda_x: tuple[float, ...]
    lambda_y: tuple[float, ...]
    direction: str  # X_TO_Y, Y_TO_X or NO_EDGE
    noise_latents: tuple[NoiseSpec, ...] = field(default=())
    noise_x: NoiseSpec = field(default=None)
    noise_y: NoiseSpec = field(default=None)
    seed: int | None = None

    def __post_init__(self):
        if self.direction not in (X_TO_Y, Y_TO_X, NO_EDGE):
            raise ValueError(f"unknown direction {self.direction!r}")
        if len(self.lambda_x) != self.m or len(self.lambda_y) != self.m:
            raise ValueError("lambda vectors must have length m")
        if len(self.noise_latents) != self.m:
            raise ValueError("need one latent noise spec per latent")
        al, be = self.alpha, self.beta
        for i in range(self.m):
            if al[i] == 0.0 or be[i] == 0.0:
                raise ValueError("irreducibility violated: every latent needs nonzero "
                                 "total effect on both observed variables")

    @property
    def alpha(self) -> tuple[float, ...]:
        """Total effect of each latent noise on X."""
        if self.direction == Y_TO_X:
            return tuple(lx + self.gamma * ly for lx, ly in zip(self.lambda_x, self.lambda_y))
        return tuple(self.lambda_x)

    @property
    def beta(self) -> tuple[float, ...]:
        """Total effect of each latent noise on Y."""
        if self.direction == X_TO_Y:
            return tuple(self.gamma * lx + ly for lx, ly in zip(self.lambda_x, self.lambda_y))
        return tuple(self.lambda_y)

    def source_loadings(self) -> list[tuple[NoiseSpec, float, float]]:
        """Every noise source with its (coefficient into X, coefficient into Y)."""
        out = [(s, a, b) for s, a, b in zip(self.noise_latents, self.alpha, self.beta)]
        if self.direction == X_TO_Y:
            out.append((self.noise_x, 1.0, self.gamma))
            out.append((self.noise_y, 0.0, 1.0))
        elif self.direction == Y_TO_X:
            out.append((self.noise_x, 1.0, 0.0))
            out.append((self.noise_y, self.gamma, 1.0))
        else:
            out.append((self.noise_x, 1.0, 0.0))
            out.append((self.noise_y, 0.0, 1.0))
        return out

    def to_dict(self) -> dict:
        def spec_dict(s: NoiseSpec) -> dict:
            return {
                "family": s.family,
                "scale": s.scale,
                "log_abs": s.log_abs,
                "explicit_cumulants": list(s.explicit_cumulants) if s.explicit_cumulants else None,
            }

        return {
            "m": self.m,
            "gamma": self.gamma,
            "lambda_x": list(self.lambda_x),
            "lambda_y": list(self.lambda_y),
            "direction": self.direction,
            "noise_latents": [spec_dict(s) for s in self.noise_latents],
            "noise_x": spec_dict(self.noise_x),
            "noise_y": spec_dict(self.noise_y),
            "seed": self.seed,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        def spec(sd: dict) -> NoiseSpec:
            ec = sd.get("explicit_cumulants")
            return NoiseSpec(
                family=sd.get("family"),
                scale=sd.get("scale", 1.0),
                log_abs=sd.get("log_abs", True),
                explicit_cumulants=tuple(ec) if ec else None,
            )

        return cls(
            m=d["m"],
            gamma=d["gamma"],
            lambda_x=tuple(d["lambda_x"]),
            lambda_y=tuple(d["lambda_y"]),
            direction=d["direction"],
            noise_latents=tuple(spec(s) for s in d["noise_latents"]),
            noise_x=spec(d["noise_x"]),
            noise_y=spec(d["noise_y"]),
            seed=d.get("seed"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        return cls.from_dict(json.loads(text))


def population_cumulants(model: ModelSpec, max_order: int) -> CumulantTable:
    """Exact joint cumulant table: C[a, b] = sum_s u_s^a v_s^b kappa_{a+b}(E_s).

    Every noise spec must carry explicit cumulants up to max_order.
    """
    kappa = np.zeros((max_order + 1, max_order + 1))
    for spec, u, v in model.source_loadings():
        src = spec.cumulants(max_order)
        for a in range(max_order + 1):
            for b in range(max_order + 1 - a):
                if a + b == 0:
                    continue
                kappa[a, b] += u**a * v**b * src[a + b]
    return CumulantTable(order=max_order, kappa=kappa)


def _draw_coefficient(rng: np.random.Generator) -> float:
    """Uniform on [-0.8, -0.2] union [0.2, 0.8]."""
    mag = rng.uniform(COEF_LOW, COEF_HIGH)
    return mag if rng.uniform() < 0.5 else -mag


def sample_model(case: int, m: int | None = None, family: str = "laplace",
                 seed=None) -> ModelSpec:
    """Random benchmark model for one of the three simulation cases.

    Case 1: no latents; case 2: exactly one latent; case 3: m >= 2 latents
    (default 2). All noises share the given family, log-abs transformed,
    with scales drawn from [0.5, 1.5]. Direction is X -> Y.
    """
    if case == 1:
        if m not in (None, 0):
            raise ValueError("case 1 has no latent variables")
        m = 0
    elif case == 2:
        if m not in (None, 1):
            raise ValueError("case 2 has exactly one latent variable")
        m = 1
    elif case == 3:
        m = 2 if m is None else m
        if m < 2:
            raise ValueError("case 3 requires m >= 2 latent variables")
    else:
        raise ValueError(f"unknown case {case}")
    rng = np.random.default_rng(seed)

    def noise() -> NoiseSpec:
        return NoiseSpec(family=family, scale=rng.uniform(SCALE_LOW, SCALE_HIGH), log_abs=True)

    return ModelSpec(
        m=m,
        gamma=_draw_coefficient(rng),
        lambda_x=tuple(_draw_coefficient(rng) for _ in range(m)),
        lambda_y=tuple(_draw_coefficient(rng) for _ in range(m)),
        direction=X_TO_Y,
        noise_latents=tuple(noise() for _ in range(m)),
        noise_x=noise(),
        noise_y=noise(),
    )


def random_oracle_model(m: int, max_order: int, seed=None, *, zero_beta: bool = False) -> ModelSpec:
    """Population-exact model with explicit source cumulants.

    Source cumulants of order >= 3 are drawn from [0.5, 2] with random
    sign so no accidental cancellation can occur; variances are positive.
    `zero_beta` deliberately breaks irreducibility (test hook).
    """
    rng = np.random.default_rng(seed)

    def source() -> NoiseSpec:
        ks = [rng.uniform(0.0, 1.0), rng.uniform(0.5, 2.0)]  # mean, variance
        for _ in range(3, max_order + 1):
            ks.append(rng.uniform(0.5, 2.0) * (1 if rng.uniform() < 0.5 else -1))
        return NoiseSpec(explicit_cumulants=tuple(ks))

    gamma = _draw_coefficient(rng)
    lambda_x = tuple(_draw_coefficient(rng) for _ in range(m))
    lambda_y = tuple(_draw_coefficient(rng) for _ in range(m))
    if zero_beta and m >= 1:
        # force beta_1 = gamma*lambda_x1 + lambda_y1 = 0, bypassing validation
        lambda_y = (-gamma * lambda_x[0],) + lambda_y[1:]
        spec = ModelSpec.__new__(ModelSpec)
        fields = {
            "m": m, "gamma": gamma, "lambda_x": lambda_x, "lambda_y": lambda_y,
            "direction": X_TO_Y, "noise_latents": tuple(source() for _ in range(m)),
            "noise_x": source(), "noise_y": source(), "seed": None,
        }
        for name, value in fields.items():
            object.__setattr__(spec, name, value)
        return spec
    return ModelSpec(
        m=m,
        gamma=gamma,
        lambda_x=lambda_x,
        lambda_y=lambda_y,
        direction=X_TO_Y,
        noise_latents=tuple(source() for _ in range(m)),
        noise_x=source(),
        noise_y=source(),
    )


def generate_data(model: ModelSpec, n: int, seed=None) -> BivariateSample:
    """Draw n i.i.d. rows from the structural equations; reproducible under seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    latents = [s.draw(n, rng) for s in model.noise_latents]
    ex = model.noise_x.draw(n, rng)
    ey = model.noise_y.draw(n, rng)
    if model.direction == X_TO_Y:
        x = sum(lx * li for lx, li in zip(model.lambda_x, latents)) + ex
        y = model.gamma * x + sum(ly * li for ly, li in zip(model.lambda_y, latents)) + ey
    elif model.direction == Y_TO_X:
        y = sum(ly * li for ly, li in zip(model.lambda_y, latents)) + ey
        x = model.gamma * y + sum(lx * li for lx, li in zip(model.lambda_x, latents)) + ex
    else:
        x = sum(lx * li for lx, li in zip(model.lambda_x, latents)) + ex
        y = sum(ly * li for ly, li in zip(model.lambda_y, latents)) + ey
    return BivariateSample(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def noise_cumulants_mc(spec: NoiseSpec, max_order: int, n_mc: int = 1_000_000,
                       seed=None) -> np.ndarray:
    """Monte-Carlo univariate cumulants kappa_1..kappa_max_order of a noise source."""
    rng = np.random.default_rng(seed)
    draws = spec.draw(n_mc, rng)
    return univariate_cumulants(draws, max_order)

"""Causal direction identification from bivariate data.

Grows the cumulant-matrix order k from 2 until at least one orientation is
rank-deficient, infers the latent confounder count, then decides the
direction (or conditional independence) by comparing the two absolute
determinants. A forced mode skips the rank loop for a caller-assumed
latent count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cumulants import BivariateSample, CumulantTable, estimate_cumulants
from .matrix import XY, YX, RankReport, build_cumulant_matrix, matrix_abs_determinant, matrix_rank

X_CAUSES_Y = "x_causes_y"
Y_CAUSES_X = "y_causes_x"
CONDITIONALLY_INDEPENDENT = "conditionally_independent"
UNDECIDED = "undecided"

VERDICTS = (X_CAUSES_Y, Y_CAUSES_X, CONDITIONALLY_INDEPENDENT, UNDECIDED)


@dataclass(frozen=True)
class IdentifyConfig:
    epsilon: float = 1e-5  # determinant-equality threshold
    rank_rel_tol: float = 0.05
    k_max: int = 6
    standardize: bool = True
    relative_epsilon: bool = False  # compare |delta| / max(dets) instead
    assumed_m: int | None = None  # forced k = assumed_m + 2, skip rank loop
    min_samples: int = 500

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 2 <= self.k_max <= 8:
            raise ValueError("k_max must lie in [2, 8]")
        if self.assumed_m is not None and not 0 <= self.assumed_m <= self.k_max - 2:
            raise ValueError("assumed_m must lie in [0, k_max - 2]")


@dataclass(frozen=True)
class InferenceResult:
    verdict: str
    m: int | None  # inferred latent count; None when undecided
    k_used: int
    det_xy: float
    det_yx: float
    rank_xy: tuple[RankReport, ...] = field(repr=False)  # one per k tried
    rank_yx: tuple[RankReport, ...] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "m": self.m,
            "k_used": self.k_used,
            "det_xy": self.det_xy,
            "det_yx": self.det_yx,
            "ranks_xy": [r.rank for r in self.rank_xy],
            "ranks_yx": [r.rank for r in self.rank_yx],
            "singular_values_xy": list(map(float, self.rank_xy[-1].singular_values)),
            "singular_values_yx": list(map(float, self.rank_yx[-1].singular_values)),
        }


def infer_latent_count(rank_xy: RankReport, rank_yx: RankReport) -> int:
    """Latent count m = min(rank_xy, rank_yx) - 1, floored at 0.

    Requires at least one rank-deficient report; the deficient side's rank
    counts the independent sources feeding its first variable.
    """
    if not (rank_xy.deficient or rank_yx.deficient):
        raise ValueError("neither cumulant matrix is rank-deficient")
    return max(min(rank_xy.rank, rank_yx.rank) - 1, 0)


def _decide(det_xy: float, det_yx: float, rank_xy: RankReport, rank_yx: RankReport,
            config: IdentifyConfig) -> str:
    delta = abs(det_xy - det_yx)
    if config.relative_epsilon:
        scale = max(det_xy, det_yx)
        tie = scale == 0.0 or delta / scale < config.epsilon
    else:
        tie = delta < config.epsilon
    if tie:
        # determinants cannot separate the orientations; with k > m + 2 both
        # are zero yet the ranks still order the causal side below the other
        if (rank_xy.deficient or rank_yx.deficient) and rank_xy.rank != rank_yx.rank:
            return X_CAUSES_Y if rank_xy.rank < rank_yx.rank else Y_CAUSES_X
        return CONDITIONALLY_INDEPENDENT
    return X_CAUSES_Y if det_xy < det_yx else Y_CAUSES_X


def identify_from_cumulants(cumulants: CumulantTable, config: IdentifyConfig | None = None) -> InferenceResult:
    """Run the identification loop on a precomputed cumulant table.

    The table must cover total order 2k - 1 for every k the loop may
    reach (2 .. k_max, or assumed_m + 2 in forced mode). Used directly by
    population-exact oracle checks; `identify_direction` wraps it for
    samples.
    """
    config = config or IdentifyConfig()
    reports_xy: list[RankReport] = []
    reports_yx: list[RankReport] = []

    if config.assumed_m is not None:
        k = config.assumed_m + 2
        mats = [build_cumulant_matrix(cumulants, k, o) for o in (XY, YX)]
        reports_xy.append(matrix_rank(mats[0], config.rank_rel_tol))
        reports_yx.append(matrix_rank(mats[1], config.rank_rel_tol))
        det_xy, det_yx = (matrix_abs_determinant(m) for m in mats)
        verdict = _decide(det_xy, det_yx, config)
        return InferenceResult(
            verdict=verdict, m=config.assumed_m, k_used=k,
            det_xy=det_xy, det_yx=det_yx,
            rank_xy=tuple(reports_xy), rank_yx=tuple(reports_yx),
        )

    k = 2
    while True:
        mat_xy = build_cumulant_matrix(cumulants, k, XY)
        mat_yx = build_cumulant_matrix(cumulants, k, YX)
        rep_xy = matrix_rank(mat_xy, config.rank_rel_tol)
        rep_yx = matrix_rank(mat_yx, config.rank_rel_tol)
        reports_xy.append(rep_xy)
        reports_yx.append(rep_yx)
        if rep_xy.deficient or rep_yx.deficient:
            break
        if k >= config.k_max:
            # estimated matrices can stay full-rank indefinitely; give up
            return InferenceResult(
                verdict=UNDECIDED, m=None, k_used=k,
                det_xy=matrix_abs_determinant(mat_xy),
                det_yx=matrix_abs_determinant(mat_yx),
                rank_xy=tuple(reports_xy), rank_yx=tuple(reports_yx),
            )
        k += 1

    m = k - 2
    det_xy = matrix_abs_determinant(mat_xy)
    det_yx = matrix_abs_determinant(mat_yx)
    verdict = _decide(det_xy, det_yx, config)
    return InferenceResult(
        verdict=verdict, m=m, k_used=k, det_xy=det_xy, det_yx=det_yx,
        rank_xy=tuple(reports_xy), rank_yx=tuple(reports_yx),
    )


def identify_direction(sample: BivariateSample, config: IdentifyConfig | None = None) -> InferenceResult:
    """Identify the causal direction between the sample's two series.

    Both series are rescaled to unit variance first (the determinant
    criterion is not scale invariant); cumulants are estimated once up to
    the maximum order the loop may need.
    """
    config = config or IdentifyConfig()
    if sample.n < config.min_samples:
        raise ValueError(f"need at least {config.min_samples} observations, got {sample.n}")
    x, y = sample.x, sample.y
    sx, sy = x.std(), y.std()
    if sx == 0.0 or sy == 0.0:
        raise ValueError("degenerate (constant) series")
    if config.standardize:
        sample = BivariateSample(x / sx, y / sy)
    k_top = config.k_max if config.assumed_m is None else config.assumed_m + 2
    cumulants = estimate_cumulants(sample, 2 * k_top - 1)
    return identify_from_cumulants(cumulants, config)

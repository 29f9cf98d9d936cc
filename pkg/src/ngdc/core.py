"""The geographical distance coefficient and candidate ranking.

For a candidate at distance ``D`` (km) with ``S`` million parallel sentences::

    z     = c * (D / d_scale) / ((1 - c) * (S / s_scale))
    delta = 1                    if penalty is on and D >= d_max
          = 1 / (1 + exp(-z))    otherwise

Lower ``delta`` is better; the best candidate heads the ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geodesy import DistanceMethod, DistanceUnresolvable, resolve_distance_km
from .registry import LanguageEntry, Registry

DEFAULT_C = 0.4
DEFAULT_D_MAX_KM = 5000.0
DEFAULT_D_SCALE = 1000.0
DEFAULT_S_SCALE = 1.0


class RankingError(ValueError):
    """Candidates could not be scored; ``codes`` lists the offenders."""

    def __init__(self, message: str, codes: tuple[str, ...] = ()):
        super().__init__(message)
        self.codes = codes


@dataclass(frozen=True)
class NgdcParams:
    c: float = DEFAULT_C
    d_max_km: float = DEFAULT_D_MAX_KM
    apply_penalty: bool = True
    d_scale: float = DEFAULT_D_SCALE
    s_scale: float = DEFAULT_S_SCALE

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must lie in the open interval (0, 1), got {self.c}")
        for name in ("d_max_km", "d_scale", "s_scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class NgdcScore:
    code: str
    d_km: float
    s_m: float
    z: float
    delta: float
    penalized: bool


def logistic(z: float) -> float:
    """exp(z) / (1 + exp(z)) without overflow for large ``|z|``."""
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def ngdc_z(d_km: float, s_m: float, params: NgdcParams = NgdcParams()) -> float:
    if not s_m > 0:
        raise ValueError(f"corpus size must be positive, got {s_m}")
    if not d_km >= 0:
        raise ValueError(f"distance must be non-negative, got {d_km}")
    c = params.c
    return (c * (d_km / params.d_scale)) / ((1.0 - c) * (s_m / params.s_scale))


def ngdc_delta(
    d_km: float, s_m: float, params: NgdcParams = NgdcParams(), code: str = ""
) -> NgdcScore:
    z = ngdc_z(d_km, s_m, params)
    if params.apply_penalty and d_km >= params.d_max_km:
        return NgdcScore(code, d_km, s_m, z, 1.0, True)
    return NgdcScore(code, d_km, s_m, z, logistic(z), False)


def _sort_key(score: NgdcScore):
    return (score.delta, score.d_km, score.code)


@dataclass(frozen=True)
class Ranking:
    """Scores in ascending delta; ties fall to the shorter distance, then the code."""

    scores: tuple[NgdcScore, ...]

    def __post_init__(self):
        object.__setattr__(self, "scores", tuple(sorted(self.scores, key=_sort_key)))

    def __iter__(self):
        return iter(self.scores)

    def __len__(self):
        return len(self.scores)

    def __getitem__(self, i):
        return self.scores[i]

    @property
    def best(self) -> NgdcScore:
        return self.scores[0]

    def codes(self) -> list[str]:
        return [s.code for s in self.scores]


def score_entry(
    entry: LanguageEntry,
    registry: Registry,
    params: NgdcParams = NgdcParams(),
    method: DistanceMethod | str = DistanceMethod.PUBLISHED_FIRST,
) -> NgdcScore:
    if entry.corpus_size_m is None:
        raise RankingError(f"{entry.code}: no corpus size", (entry.code,))
    target = registry.target
    if target is None:
        # only published distances are usable without a target point
        if DistanceMethod(method) is not DistanceMethod.PUBLISHED_FIRST or entry.published_gd_km is None:
            raise RankingError(f"{entry.code}: registry has no target to measure from", (entry.code,))
        d = entry.published_gd_km
    else:
        try:
            d = resolve_distance_km(entry, target, method)
        except DistanceUnresolvable as exc:
            raise RankingError(str(exc), (entry.code,)) from None
    return ngdc_delta(d, entry.corpus_size_m, params, code=entry.code)


def rank_candidates(
    registry: Registry,
    params: NgdcParams = NgdcParams(),
    method: DistanceMethod | str = DistanceMethod.PUBLISHED_FIRST,
) -> Ranking:
    """Score every non-target entry and order them, best first.

    All candidates must be scorable; otherwise :class:`RankingError` names
    every offending code and nothing is returned.
    """
    candidates = registry.candidates
    if not candidates:
        raise RankingError("no candidate languages to rank")
    scores, bad, reasons = [], [], []
    for entry in candidates:
        try:
            scores.append(score_entry(entry, registry, params, method))
        except RankingError as exc:
            bad.extend(exc.codes)
            reasons.append(str(exc))
    if bad:
        raise RankingError(
            "cannot score: " + ", ".join(bad) + " (" + "; ".join(reasons) + ")", tuple(bad)
        )
    return Ranking(tuple(scores))

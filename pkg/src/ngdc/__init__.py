"""Source-language selection for low-resource MT transfer learning.

The geographical distance coefficient weighs the distance between a candidate
source language and the target against the candidate's corpus size; the
candidate with the smallest coefficient is the recommended pre-training
language.
"""

__version__ = "0.1.0"

from .bleu import BleuReport, SentencePair, Smoothing, corpus_bleu, tokenize_basic
from .core import (
    NgdcParams,
    NgdcScore,
    Ranking,
    RankingError,
    logistic,
    ngdc_delta,
    ngdc_z,
    rank_candidates,
)
from .geodesy import (
    WGS84,
    DistanceMethod,
    DistanceUnresolvable,
    Ellipsoid,
    GeoPoint,
    VincentyNonConvergence,
    haversine_km,
    lambert_km,
    resolve_distance_km,
    vincenty_km,
)
from .registry import (
    LanguageEntry,
    Registry,
    RegistryError,
    builtin_paper_registry,
    export_registry,
    load_registry,
)

__all__ = [
    "BleuReport",
    "DistanceMethod",
    "DistanceUnresolvable",
    "Ellipsoid",
    "GeoPoint",
    "LanguageEntry",
    "NgdcParams",
    "NgdcScore",
    "Ranking",
    "RankingError",
    "Registry",
    "RegistryError",
    "SentencePair",
    "Smoothing",
    "VincentyNonConvergence",
    "WGS84",
    "builtin_paper_registry",
    "corpus_bleu",
    "export_registry",
    "haversine_km",
    "lambert_km",
    "load_registry",
    "logistic",
    "ngdc_delta",
    "ngdc_z",
    "rank_candidates",
    "resolve_distance_km",
    "tokenize_basic",
    "vincenty_km",
]

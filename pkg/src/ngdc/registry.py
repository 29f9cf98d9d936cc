"""Candidate-language metadata: validation, TSV/JSON ingestion and export."""

from __future__ import annotations

import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .geodesy import GeoPoint

TSV_COLUMNS = (
    "code",
    "name",
    "family_path",
    "lat",
    "lon",
    "corpus_size_m",
    "published_gd_km",
    "bleu_val",
    "bleu_test",
)
REQUIRED_COLUMNS = ("code", "name")
FAMILY_SEP = ";"
TARGET_PRAGMA = "# target:"

# decimal point only, no thousands separators, no nan/inf
_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_FORBIDDEN = re.compile(r"[\t\r\n]")


class RegistryError(ValueError):
    pass


class RegistryParseError(RegistryError):
    pass


class RegistryValidationError(RegistryError):
    pass


@dataclass(frozen=True)
class LanguageEntry:
    code: str
    name: str
    family_path: tuple[str, ...] = ()
    centroid: GeoPoint | None = None
    corpus_size_m: float | None = None
    published_gd_km: float | None = None
    bleu_val: float | None = None
    bleu_test: float | None = None

    def __post_init__(self):
        if not self.code or self.code.startswith("#") or re.search(r"\s", self.code):
            raise RegistryValidationError(f"invalid language code {self.code!r}")
        if _FORBIDDEN.search(self.name):
            raise RegistryValidationError(f"{self.code}: name contains tab or newline")
        object.__setattr__(self, "family_path", tuple(self.family_path))
        for label in self.family_path:
            if not label or FAMILY_SEP in label or _FORBIDDEN.search(label):
                raise RegistryValidationError(f"{self.code}: invalid family label {label!r}")
        for attr in ("corpus_size_m", "published_gd_km", "bleu_val", "bleu_test"):
            value = getattr(self, attr)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise RegistryValidationError(f"{self.code}: {attr} must be a number")
            value = float(value)
            if not math.isfinite(value):
                raise RegistryValidationError(f"{self.code}: {attr} must be finite")
            object.__setattr__(self, attr, value)
        if self.corpus_size_m is not None and self.corpus_size_m <= 0:
            raise RegistryValidationError(
                f"{self.code}: corpus_size_m must be positive, got {self.corpus_size_m}"
            )
        if self.published_gd_km is not None and self.published_gd_km < 0:
            raise RegistryValidationError(
                f"{self.code}: published_gd_km must be non-negative, got {self.published_gd_km}"
            )

    @property
    def has_distance_source(self) -> bool:
        return self.centroid is not None or self.published_gd_km is not None


@dataclass(frozen=True)
class Registry:
    """Immutable set of :class:`LanguageEntry` keyed by code.

    ``target_code`` names the fine-tuning target; it may be ``None`` for a
    bare collection, otherwise it must be one of the registered codes.
    """

    entries: tuple[LanguageEntry, ...] = ()
    target_code: str | None = None
    _index: Mapping[str, LanguageEntry] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        index: dict[str, LanguageEntry] = {}
        for e in self.entries:
            if e.code in index:
                raise RegistryValidationError(f"duplicate language code {e.code!r}")
            index[e.code] = e
        if self.target_code is not None and self.target_code not in index:
            raise RegistryValidationError(
                f"target {self.target_code!r} is not a registered language"
            )
        object.__setattr__(self, "entries", tuple(sorted(index.values(), key=lambda e: e.code)))
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LanguageEntry]:
        return iter(self.entries)

    def __contains__(self, code: object) -> bool:
        return code in self._index

    def __getitem__(self, code: str) -> LanguageEntry:
        try:
            return self._index[code]
        except KeyError:
            raise KeyError(f"unknown language code {code!r}") from None

    def lookup(self, code: str) -> LanguageEntry:
        return self[code]

    @property
    def target(self) -> LanguageEntry | None:
        return None if self.target_code is None else self._index[self.target_code]

    @property
    def candidates(self) -> tuple[LanguageEntry, ...]:
        """Every entry except the target, sorted by code."""
        return tuple(e for e in self.entries if e.code != self.target_code)


# -- parsing helpers --------------------------------------------------------


def _parse_number(text: str, where: str) -> float:
    if not _NUMBER_RE.fullmatch(text):
        raise RegistryParseError(f"{where}: not a plain decimal number: {text!r}")
    return float(text)


def _format_number(value: float) -> str:
    return repr(float(value))


def _make_entry(fields: dict, where: str) -> LanguageEntry:
    lat, lon = fields.pop("lat", None), fields.pop("lon", None)
    if (lat is None) != (lon is None):
        raise RegistryValidationError(f"{where}: lat and lon must be given together")
    try:
        centroid = None if lat is None else GeoPoint(lat, lon)
        return LanguageEntry(centroid=centroid, **fields)
    except RegistryError as exc:
        raise type(exc)(f"{where}: {exc}") from None
    except ValueError as exc:
        raise RegistryValidationError(f"{where}: {exc}") from None


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    return source.read()


# -- TSV --------------------------------------------------------------------


def _load_tsv(text: str) -> Registry:
    header: list[str] | None = None
    target = None
    entries = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if line.startswith("#"):
            if line.startswith(TARGET_PRAGMA):
                target = line[len(TARGET_PRAGMA) :].strip() or None
            continue
        if not line.strip():
            continue
        cells = line.split("\t")
        if header is None:
            unknown = [c for c in cells if c not in TSV_COLUMNS]
            if unknown:
                raise RegistryParseError(f"line {lineno}: unknown column(s) {unknown}")
            if len(set(cells)) != len(cells):
                raise RegistryParseError(f"line {lineno}: repeated column in header")
            missing = [c for c in REQUIRED_COLUMNS if c not in cells]
            if missing:
                raise RegistryParseError(f"line {lineno}: missing required column(s) {missing}")
            header = cells
            continue
        if len(cells) != len(header):
            raise RegistryParseError(
                f"line {lineno}: expected {len(header)} fields, found {len(cells)}"
            )
        row = dict(zip(header, cells))
        fields: dict = {"code": row["code"], "name": row["name"]}
        fp = row.get("family_path", "")
        fields["family_path"] = tuple(fp.split(FAMILY_SEP)) if fp else ()
        for col in ("lat", "lon", "corpus_size_m", "published_gd_km", "bleu_val", "bleu_test"):
            cell = row.get(col, "")
            if cell != "":
                fields[col] = _parse_number(cell, f"line {lineno}, field {col!r}")
        entries.append(_make_entry(fields, f"line {lineno}"))
    return Registry(tuple(entries), target)


def _dump_tsv(registry: Registry) -> str:
    out = io.StringIO()
    if registry.target_code is not None:
        out.write(f"{TARGET_PRAGMA} {registry.target_code}\n")
    out.write("\t".join(TSV_COLUMNS) + "\n")
    for e in registry:
        lat = lon = ""
        if e.centroid is not None:
            lat, lon = _format_number(e.centroid.lat_deg), _format_number(e.centroid.lon_deg)
        nums = [
            "" if v is None else _format_number(v)
            for v in (e.corpus_size_m, e.published_gd_km, e.bleu_val, e.bleu_test)
        ]
        row = [e.code, e.name, FAMILY_SEP.join(e.family_path), lat, lon, *nums]
        out.write("\t".join(row) + "\n")
    return out.getvalue()


# -- JSON -------------------------------------------------------------------

_JSON_NUMERIC = ("lat", "lon", "corpus_size_m", "published_gd_km", "bleu_val", "bleu_test")


def _load_json(text: str) -> Registry:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryParseError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("languages", []), list):
        raise RegistryParseError("top level must be an object with a 'languages' list")
    target = doc.get("target")
    if target is not None and not isinstance(target, str):
        raise RegistryParseError("'target' must be a string")
    entries = []
    for i, item in enumerate(doc.get("languages", [])):
        where = f"languages[{i}]"
        if not isinstance(item, dict):
            raise RegistryParseError(f"{where}: entry must be an object")
        unknown = set(item) - set(TSV_COLUMNS)
        if unknown:
            raise RegistryParseError(f"{where}: unknown key(s) {sorted(unknown)}")
        for key in REQUIRED_COLUMNS:
            if not isinstance(item.get(key), str):
                raise RegistryParseError(f"{where}, field {key!r}: required string")
        fields: dict = {"code": item["code"], "name": item["name"]}
        fp = item.get("family_path", [])
        if not isinstance(fp, list) or not all(isinstance(x, str) for x in fp):
            raise RegistryParseError(f"{where}, field 'family_path': must be a list of strings")
        fields["family_path"] = tuple(fp)
        for key in _JSON_NUMERIC:
            if key not in item:
                continue
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise RegistryParseError(f"{where}, field {key!r}: must be a number")
            fields[key] = float(v)
        entries.append(_make_entry(fields, where))
    return Registry(tuple(entries), target)


def _dump_json(registry: Registry) -> str:
    languages = []
    for e in registry:
        item: dict = {"code": e.code, "name": e.name, "family_path": list(e.family_path)}
        if e.centroid is not None:
            item["lat"], item["lon"] = e.centroid.lat_deg, e.centroid.lon_deg
        for key in ("corpus_size_m", "published_gd_km", "bleu_val", "bleu_test"):
            value = getattr(e, key)
            if value is not None:
                item[key] = value
        languages.append(item)
    doc = {"target": registry.target_code, "languages": languages}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- public API -------------------------------------------------------------


def load_registry(source, format: str = "tsv") -> Registry:
    """Parse a registry from text, bytes or a text stream.

    ``format`` is ``"tsv"`` or ``"json"``. Raises :class:`RegistryParseError`
    for malformed documents and :class:`RegistryValidationError` for
    well-formed documents that break an entry or registry invariant.
    """
    text = _read_text(source)
    fmt = format.lower()
    if fmt == "tsv":
        return _load_tsv(text)
    if fmt == "json":
        return _load_json(text)
    raise ValueError(f"unknown registry format {format!r}")


def export_registry(registry: Registry, format: str = "tsv") -> str:
    fmt = format.lower()
    if fmt == "tsv":
        return _dump_tsv(registry)
    if fmt == "json":
        return _dump_json(registry)
    raise ValueError(f"unknown registry format {format!r}")


def load_registry_file(path) -> Registry:
    """Load from disk; ``.json`` files are read as JSON, anything else as TSV."""
    path = str(path)
    fmt = "json" if path.lower().endswith(".json") else "tsv"
    with open(path, encoding="utf-8", newline="") as fh:
        return load_registry(fh, fmt)


# -- built-in dataset ---------------------------------------------------------

TARGET_CODE = "zu"

# code, name, family path, corpus size (M sentences), GD to isiZulu (km), BLEU val, BLEU test
_PAPER_ROWS = (
    ("xh", "isiXhosa", ("Niger-Congo", "Bantu", "Southern Bantu", "Nguni"), 20.7, 1000.0, 10.20, 8.56),
    ("roa", "Romance", ("Indo-European", "Italic", "Romance"), 1232.7, 13094.4, 7.76, 5.83),
    ("ar", "Arabic", ("Afro-Asiatic", "Semitic"), 102.8, 5205.0, 5.76, 3.07),
    ("fr", "French", ("Indo-European", "Italic", "Romance"), 479.1, 13094.0, 5.42, 3.91),
    ("sw", "Kiswahili", ("Niger-Congo", "Bantu", "Northeast Bantu", "Sabaki"), 9.1, 3783.1, 5.28, 3.97),
    ("sn", "chiShona", ("Niger-Congo", "Bantu", "Southern Bantu"), 0.1, 1584.0, 4.32, 2.83),
    ("tw", "Twi", ("Niger-Congo", "Kwa", "Akan"), 0.047, 7962.0, 1.91, 1.34),
    ("lg", "Luganda", ("Niger-Congo", "Bantu"), 0.039, 4883.7, 0.94, 0.55),
)


def builtin_paper_registry() -> Registry:
    """The eight transfer candidates for English-isiZulu plus the isiZulu target.

    Only published distances are stored; no coordinates are attached.
    """
    entries = [
        LanguageEntry(
            code=code,
            name=name,
            family_path=family,
            corpus_size_m=size,
            published_gd_km=gd,
            bleu_val=bv,
            bleu_test=bt,
        )
        for code, name, family, size, gd, bv, bt in _PAPER_ROWS
    ]
    entries.append(
        LanguageEntry(
            code=TARGET_CODE,
            name="isiZulu",
            family_path=("Niger-Congo", "Bantu", "Southern Bantu", "Nguni"),
        )
    )
    return Registry(tuple(entries), TARGET_CODE)

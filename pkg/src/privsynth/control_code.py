"""Entity-aware control codes: construction, text form, and fictional sampling.

A control code groups a document's private values by category and renders
as one ``CATEGORY: v1, v2`` line per category. Fictional codes carry the
same shape but fabricated values drawn from small public-style pools and
simple grammars, one per category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import exp, log
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import CANONICAL_CATEGORY_ORDER, Category, Document, IdentifierClass
from .rng import SeededRng


class ControlCodeError(ValueError):
    """Raised for invalid control code values or unparseable text."""


_VALUE_DELIMITER = ", "


def _check_value(value: str) -> None:
    if not value:
        raise ControlCodeError("control code values must be non-empty")
    if _VALUE_DELIMITER in value:
        raise ControlCodeError(f"value {value!r} contains the delimiter {_VALUE_DELIMITER!r}")
    if "\n" in value or value != value.strip():
        raise ControlCodeError(f"value {value!r} has a newline or leading/trailing whitespace")


@dataclass(frozen=True)
class ControlCode:
    """Ordered (category, values) entries; values deduplicated in order."""

    entries: tuple[tuple[Category, tuple[str, ...]], ...] = ()

    def __post_init__(self) -> None:
        seen_categories: set[Category] = set()
        normalized = []
        for category, values in self.entries:
            if category in seen_categories:
                raise ControlCodeError(f"duplicate category {category.name}")
            seen_categories.add(category)
            deduped: list[str] = []
            for value in values:
                _check_value(value)
                if value not in deduped:
                    deduped.append(value)
            if not deduped:
                raise ControlCodeError(f"category {category.name} has no values")
            normalized.append((category, tuple(deduped)))
        object.__setattr__(self, "entries", tuple(normalized))

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def categories(self) -> tuple[Category, ...]:
        return tuple(category for category, _ in self.entries)

    def values_of(self, category: Category) -> tuple[str, ...]:
        for cat, values in self.entries:
            if cat is category:
                return values
        return ()

    def all_values(self) -> list[str]:
        """Every value across categories, in rendered order."""
        return [value for _, values in self.entries for value in values]


def build_control_code(doc: Document, classes: Iterable[IdentifierClass]) -> ControlCode:
    """Group a document's qualifying span surfaces by category.

    Categories appear in order of their first qualifying span; surfaces are
    deduplicated per category by exact string.
    """
    wanted = frozenset(classes)
    grouped: dict[Category, list[str]] = {}
    for span in doc.spans:  # spans are sorted by start
        if span.identifier_class not in wanted:
            continue
        values = grouped.setdefault(span.category, [])
        if span.surface not in values:
            values.append(span.surface)
    return ControlCode(tuple((category, tuple(values)) for category, values in grouped.items()))


def render(code: ControlCode) -> str:
    """One ``CATEGORY: v1, v2`` line per category, with a trailing newline."""
    return "".join(f"{category.name}: {_VALUE_DELIMITER.join(values)}\n" for category, values in code.entries)


def parse(text: str) -> ControlCode:
    """Inverse of render: ``parse(render(c)) == c`` for every valid code."""
    entries: list[tuple[Category, tuple[str, ...]]] = []
    seen: set[Category] = set()
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line:
            continue
        name, sep, rest = line.partition(": ")
        if not sep:
            raise ControlCodeError(f"line {lineno}: expected 'CATEGORY: values', got {line!r}")
        try:
            category = Category[name]
        except KeyError:
            raise ControlCodeError(f"line {lineno}: unknown category {name!r}") from None
        if category in seen:
            raise ControlCodeError(f"line {lineno}: duplicate category {name}")
        seen.add(category)
        values = rest.split(_VALUE_DELIMITER)
        if any(not v for v in values):
            raise ControlCodeError(f"line {lineno}: empty value in {rest!r}")
        entries.append((category, tuple(values)))
    return ControlCode(tuple(entries))


# --------------------------------------------------------------------------
# Fictional codes
# --------------------------------------------------------------------------

MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)
# February fixed at 28: fictional dates ignore leap years.
_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
_CODE_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


@dataclass(frozen=True)
class FictionalPools:
    """Value pools and grammar constants for fictional control codes."""

    titles: tuple[str, ...] = ("Mr", "Ms", "Dr", "Prof")
    first_names: tuple[str, ...] = (
        "Alex", "Blake", "Casey", "Dana", "Elliot", "Finley", "Harper",
        "Jordan", "Kai", "Logan", "Morgan", "Quinn", "Riley", "Skyler",
    )
    last_names: tuple[str, ...] = (
        "Adams", "Baker", "Carson", "Dawson", "Ellis", "Foster",
        "Griffin", "Hayes", "Irwin", "Johnson", "Kennedy", "Lewis",
    )
    cities: tuple[str, ...] = ("Baltimore", "Seattle", "Tokyo", "Munich", "Cairo")
    countries: tuple[str, ...] = ("USA", "Germany", "Japan", "Kenya", "Brazil")
    addresses: tuple[str, ...] = ("221B Baker St", "1600 Amphitheatre Pkwy", "350 Fifth Ave")
    infrastructure: tuple[str, ...] = ("London Bridge", "Central Station", "Pier 39")
    organizations: tuple[str, ...] = (
        "OpenAI", "World Health Organization", "Harvard University", "UNICEF",
        "St. Mary's Hospital", "SpaceX", "NASA", "MIT", "Stanford University", "Google",
    )
    heritages: tuple[str, ...] = ("Irish-American", "Nigerian", "Chinese", "Latinx", "Punjabi")
    jobs: tuple[str, ...] = ("software engineer", "nurse", "professor", "mechanic", "pilot")
    date_range: tuple[int, int] = (1990, 2024)

    @classmethod
    def from_json(cls, path: str | Path) -> "FictionalPools":
        """Pool override file: JSON object keyed by pool name, arrays of strings."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ControlCodeError(f"pool file {path} must hold a JSON object")
        known = {f.name for f in cls.__dataclass_fields__.values()} - {"date_range"}
        overrides: dict[str, tuple[str, ...]] = {}
        for name, values in data.items():
            if name not in known:
                raise ControlCodeError(f"unknown pool name {name!r}")
            overrides[name] = tuple(str(v) for v in values)
        return cls(**overrides)


_SUPPORTED_FICTIONAL = tuple(c for c in CANONICAL_CATEGORY_ORDER if c is not Category.MISC)


def _require_pool(pool: Sequence[str], name: str) -> Sequence[str]:
    if not pool:
        raise ControlCodeError(f"pool {name!r} is empty but required")
    return pool


def _sample_value(category: Category, pools: FictionalPools, rng: SeededRng) -> str:
    if category is Category.PERSON:
        return " ".join(
            rng.choice(_require_pool(pool, name))
            for pool, name in ((pools.titles, "titles"), (pools.first_names, "first_names"), (pools.last_names, "last_names"))
        )
    if category is Category.CODE:
        head = "".join(rng.choice(_CODE_ALPHABET) for _ in range(5))
        tail = "".join(rng.choice(_CODE_ALPHABET) for _ in range(2))
        return f"{head}/{tail}"
    if category is Category.DATETIME:
        month = rng.randint(1, 12)
        day = rng.randint(1, _DAYS_IN_MONTH[month - 1])
        year = rng.randint(*pools.date_range)
        return f"{day} {MONTH_NAMES[month - 1]} {year}"
    if category is Category.LOC:
        union = tuple(pools.cities) + tuple(pools.countries) + tuple(pools.addresses) + tuple(pools.infrastructure)
        return rng.choice(_require_pool(union, "cities/countries/addresses/infrastructure"))
    if category is Category.ORG:
        return rng.choice(_require_pool(pools.organizations, "organizations"))
    if category is Category.DEM:
        if rng.randrange(2) == 0:
            return f"{rng.randint(18, 90)}-year-old {rng.choice(_require_pool(pools.jobs, 'jobs'))}"
        return f"{rng.choice(_require_pool(pools.heritages, 'heritages'))} descent"
    if category is Category.QUANTITY:
        if rng.randrange(2) == 0:
            return f"{rng.randint(1, 99)}%"
        # Log-uniform dollar amount in [1e3, 1e6], rounded to hundreds.
        amount = int(round(exp(rng.random() * (log(1_000_000) - log(1_000)) + log(1_000)) / 100.0) * 100)
        return f"${amount:,}"
    raise ControlCodeError(f"no fictional grammar for category {category.name}")


def sample_fictional(categories: Sequence[Category], pools: FictionalPools, rng: SeededRng) -> ControlCode:
    """Sample one fictional value per requested category.

    Categories come out in canonical order regardless of request order;
    MISC is silently skipped (it has no generation grammar).
    """
    requested = {c for c in categories if c is not Category.MISC}
    entries = tuple(
        (category, (_sample_value(category, pools, rng),))
        for category in _SUPPORTED_FICTIONAL
        if category in requested
    )
    return ControlCode(entries)

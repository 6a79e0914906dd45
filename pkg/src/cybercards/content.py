"""Content packs: the card texts, categories, answer keys and palettes.

A content pack is a single JSON document (see ``PACK_SCHEMA_VERSION`` and the
field names below, which are the wire format). Packs are immutable after
loading and safe to share across threads. The engine never looks at colors or
display names; category ids are the only identity it uses.

The bundled ``default`` pack carries the playtested four-category corpus; the
bundled ``five-category-example`` pack adds a safe-online-shopping category
whose texts are illustrative placeholders, not playtested content (see
README).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from .errors import ParseError, SchemaError, ValidationError

PACK_SCHEMA_VERSION = 1

RANKS_PER_CATEGORY = 8
MIN_CATEGORIES = 2
MAX_CATEGORIES = 8
MAX_CHANGE_ORDINAL = 8
DEFAULT_MAX_DEFENSES = 3

BUNDLED_PACKS = {
    "default": "default_pack.json",
    "five-category-example": "five_category_example.json",
}

_HEX_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")


class ChallengeKind(str, Enum):
    TRUE_FALSE = "TrueFalse"
    SCENARIO = "Scenario"


@dataclass(frozen=True)
class Category:
    id: str
    display_name: str
    color: str  # palette slot key; every palette must define it


@dataclass(frozen=True)
class AdviceEntry:
    category: str
    rank: int
    text: str


@dataclass(frozen=True)
class MisconceptionEntry:
    category: str
    text: str
    truth_value: bool = False  # misconceptions are false by definition


@dataclass(frozen=True)
class ChangeInfo:
    ordinal: int
    lines: tuple[str, ...]
    linked_categories: tuple[str, ...]  # canonicalized sorted


@dataclass(frozen=True)
class ChallengeEntry:
    kind: ChallengeKind
    statement: str
    answer: bool | None = None  # TrueFalse only
    relevant_cards: tuple[tuple[str, int], ...] = ()  # Scenario only, sorted
    max_defenses: int | None = None  # Scenario only


@dataclass(frozen=True)
class Palette:
    name: str
    colors: tuple[tuple[str, str], ...]  # (slot, "#RRGGBB"), sorted by slot

    def color_for(self, slot: str) -> str | None:
        for key, value in self.colors:
            if key == slot:
                return value
        return None


@dataclass(frozen=True)
class ContentPack:
    schema_version: int
    categories: tuple[Category, ...]
    advice: tuple[AdviceEntry, ...]
    misconceptions: tuple[MisconceptionEntry, ...]
    change_cards: tuple[ChangeInfo, ...]
    challenges: tuple[ChallengeEntry, ...]
    palettes: tuple[Palette, ...]

    def category_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.categories)

    def category(self, category_id: str) -> Category | None:
        for c in self.categories:
            if c.id == category_id:
                return c
        return None

    def advice_text(self, category_id: str, rank: int) -> str | None:
        for entry in self.advice:
            if entry.category == category_id and entry.rank == rank:
                return entry.text
        return None

    def advice_pairs(self) -> frozenset[tuple[str, int]]:
        return frozenset((a.category, a.rank) for a in self.advice)


@dataclass(frozen=True)
class Violation:
    """One invariant breach; ``path`` points at the offending entry."""

    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} {self.path}: {self.message}"


# ---------------------------------------------------------------------------
# Loading

_TOP_LEVEL_KEYS = (
    "schema_version",
    "categories",
    "advice",
    "misconceptions",
    "change_cards",
    "challenges",
    "palettes",
)

_FIELD_SPECS = {
    "categories": {"id": str, "display_name": str, "color": str},
    "advice": {"category": str, "rank": int, "text": str},
    "misconceptions": {"category": str, "text": str, "truth_value": bool},
    "change_cards": {"ordinal": int, "lines": list, "linked_categories": list},
    "palettes": {"name": str, "colors": dict},
}


def _require(obj: dict, key: str, kind, path: str, strict: bool, warnings: list[str]):
    if key not in obj:
        raise SchemaError(f"missing field '{key}'", path)
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"field '{key}' must be an integer", path)
    if not isinstance(value, kind):
        raise SchemaError(f"field '{key}' must be {kind.__name__}", path)
    return value


def _check_unknown(obj: dict, allowed, path: str, strict: bool, warnings: list[str]) -> None:
    extra = sorted(set(obj) - set(allowed))
    if not extra:
        return
    message = f"unknown field(s) {', '.join(extra)}"
    if strict:
        raise SchemaError(message, path)
    warnings.append(f"{path}: {message}")


def _parse_section(doc: dict, section: str, strict: bool, warnings: list[str]) -> list[dict]:
    value = doc[section]
    if not isinstance(value, list):
        raise SchemaError("must be a list", f"/{section}")
    for i, entry in enumerate(value):
        if not isinstance(entry, dict):
            raise SchemaError("entry must be an object", f"/{section}/{i}")
    return value


def load_pack(document: str | bytes, *, strict: bool = True, warnings: list[str] | None = None) -> ContentPack:
    """Parse, schema-check and validate a pack document.

    Raises ParseError for malformed JSON, SchemaError for missing, mistyped
    or (in strict mode) unknown fields, and ValidationError when the content
    breaks a pack invariant. In lenient mode unknown fields are reported into
    ``warnings`` instead of raising.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"pack is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"pack is not valid JSON: {exc}") from exc
    return pack_from_doc(doc, strict=strict, warnings=warnings)


def pack_from_doc(doc, *, strict: bool = True, warnings: list[str] | None = None) -> ContentPack:
    """Build and validate a pack from an already-parsed JSON object."""
    if warnings is None:
        warnings = []
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "/")

    _check_unknown(doc, _TOP_LEVEL_KEYS, "/", strict, warnings)
    for key in _TOP_LEVEL_KEYS:
        if key not in doc:
            raise SchemaError(f"missing field '{key}'", "/")
    if not isinstance(doc["schema_version"], int) or isinstance(doc["schema_version"], bool):
        raise SchemaError("must be an integer", "/schema_version")
    if doc["schema_version"] != PACK_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {doc['schema_version']} (expected {PACK_SCHEMA_VERSION})",
            "/schema_version",
        )

    categories = []
    for i, entry in enumerate(_parse_section(doc, "categories", strict, warnings)):
        path = f"/categories/{i}"
        _check_unknown(entry, _FIELD_SPECS["categories"], path, strict, warnings)
        categories.append(
            Category(
                id=_require(entry, "id", str, path, strict, warnings),
                display_name=_require(entry, "display_name", str, path, strict, warnings),
                color=_require(entry, "color", str, path, strict, warnings),
            )
        )

    advice = []
    for i, entry in enumerate(_parse_section(doc, "advice", strict, warnings)):
        path = f"/advice/{i}"
        _check_unknown(entry, _FIELD_SPECS["advice"], path, strict, warnings)
        advice.append(
            AdviceEntry(
                category=_require(entry, "category", str, path, strict, warnings),
                rank=_require(entry, "rank", int, path, strict, warnings),
                text=_require(entry, "text", str, path, strict, warnings),
            )
        )

    misconceptions = []
    for i, entry in enumerate(_parse_section(doc, "misconceptions", strict, warnings)):
        path = f"/misconceptions/{i}"
        _check_unknown(entry, _FIELD_SPECS["misconceptions"], path, strict, warnings)
        truth = _require(entry, "truth_value", bool, path, strict, warnings)
        if truth is not False:
            raise SchemaError("truth_value must be false for misconceptions", path)
        misconceptions.append(
            MisconceptionEntry(
                category=_require(entry, "category", str, path, strict, warnings),
                text=_require(entry, "text", str, path, strict, warnings),
                truth_value=False,
            )
        )

    change_cards = []
    for i, entry in enumerate(_parse_section(doc, "change_cards", strict, warnings)):
        path = f"/change_cards/{i}"
        _check_unknown(entry, _FIELD_SPECS["change_cards"], path, strict, warnings)
        lines = _require(entry, "lines", list, path, strict, warnings)
        linked = _require(entry, "linked_categories", list, path, strict, warnings)
        if not all(isinstance(line, str) for line in lines):
            raise SchemaError("lines must be strings", path)
        if not all(isinstance(c, str) for c in linked):
            raise SchemaError("linked_categories must be strings", path)
        change_cards.append(
            ChangeInfo(
                ordinal=_require(entry, "ordinal", int, path, strict, warnings),
                lines=tuple(lines),
                linked_categories=tuple(sorted(set(linked))),
            )
        )

    challenges = []
    for i, entry in enumerate(_parse_section(doc, "challenges", strict, warnings)):
        path = f"/challenges/{i}"
        kind_raw = _require(entry, "kind", str, path, strict, warnings)
        try:
            kind = ChallengeKind(kind_raw)
        except ValueError:
            raise SchemaError(f"unknown challenge kind '{kind_raw}'", path) from None
        statement = _require(entry, "statement", str, path, strict, warnings)
        if kind is ChallengeKind.TRUE_FALSE:
            _check_unknown(entry, ("kind", "statement", "answer"), path, strict, warnings)
            answer = _require(entry, "answer", bool, path, strict, warnings)
            challenges.append(ChallengeEntry(kind=kind, statement=statement, answer=answer))
        else:
            _check_unknown(
                entry, ("kind", "statement", "relevant_cards", "max_defenses"), path, strict, warnings
            )
            raw_pairs = _require(entry, "relevant_cards", list, path, strict, warnings)
            pairs = []
            for j, pair in enumerate(raw_pairs):
                if (
                    not isinstance(pair, list)
                    or len(pair) != 2
                    or not isinstance(pair[0], str)
                    or isinstance(pair[1], bool)
                    or not isinstance(pair[1], int)
                ):
                    raise SchemaError("relevant_cards entries must be [category, rank] pairs", f"{path}/relevant_cards/{j}")
                pairs.append((pair[0], pair[1]))
            max_defenses = entry.get("max_defenses", DEFAULT_MAX_DEFENSES)
            if not isinstance(max_defenses, int) or isinstance(max_defenses, bool):
                raise SchemaError("max_defenses must be an integer", path)
            challenges.append(
                ChallengeEntry(
                    kind=kind,
                    statement=statement,
                    relevant_cards=tuple(sorted(set(pairs))),
                    max_defenses=max_defenses,
                )
            )

    palettes = []
    for i, entry in enumerate(_parse_section(doc, "palettes", strict, warnings)):
        path = f"/palettes/{i}"
        _check_unknown(entry, _FIELD_SPECS["palettes"], path, strict, warnings)
        colors = _require(entry, "colors", dict, path, strict, warnings)
        pairs = []
        for slot, value in colors.items():
            if not isinstance(slot, str) or not isinstance(value, str):
                raise SchemaError("colors must map slot names to hex strings", path)
            pairs.append((slot, value))
        palettes.append(
            Palette(
                name=_require(entry, "name", str, path, strict, warnings),
                colors=tuple(sorted(pairs)),
            )
        )

    pack = ContentPack(
        schema_version=doc["schema_version"],
        categories=tuple(categories),
        advice=tuple(advice),
        misconceptions=tuple(misconceptions),
        change_cards=tuple(change_cards),
        challenges=tuple(challenges),
        palettes=tuple(palettes),
    )
    violations = validate_pack(pack)
    if violations:
        raise ValidationError(violations)
    return pack


def serialize_pack(pack: ContentPack) -> str:
    """Render a pack back to its JSON document form (round-trips load_pack)."""
    return json.dumps(pack_to_doc(pack), indent=2, ensure_ascii=False) + "\n"


def pack_to_doc(pack: ContentPack) -> dict:
    return {
        "schema_version": pack.schema_version,
        "categories": [
            {"id": c.id, "display_name": c.display_name, "color": c.color} for c in pack.categories
        ],
        "advice": [
            {"category": a.category, "rank": a.rank, "text": a.text} for a in pack.advice
        ],
        "misconceptions": [
            {"category": m.category, "text": m.text, "truth_value": m.truth_value}
            for m in pack.misconceptions
        ],
        "change_cards": [
            {
                "ordinal": ch.ordinal,
                "lines": list(ch.lines),
                "linked_categories": list(ch.linked_categories),
            }
            for ch in pack.change_cards
        ],
        "challenges": [
            (
                {"kind": e.kind.value, "statement": e.statement, "answer": e.answer}
                if e.kind is ChallengeKind.TRUE_FALSE
                else {
                    "kind": e.kind.value,
                    "statement": e.statement,
                    "relevant_cards": [[c, r] for c, r in e.relevant_cards],
                    "max_defenses": e.max_defenses,
                }
            )
            for e in pack.challenges
        ],
        "palettes": [{"name": p.name, "colors": dict(p.colors)} for p in pack.palettes],
    }


# ---------------------------------------------------------------------------
# Validation


def category_prefix(display_name: str) -> str:
    """Card-id prefix for a category: the initials of its display name."""
    words = [w for w in re.split(r"[\s-]+", display_name) if w]
    return "".join(w[0].upper() for w in words)


_RESERVED_PREFIXES = ("CHG", "TF", "SC")


def validate_pack(pack: ContentPack) -> list[Violation]:
    """Return every invariant breach, ordered by entry path then code."""
    out: list[Violation] = []
    ids = [c.id for c in pack.categories]
    known = set(ids)

    seen_ids: dict[str, int] = {}
    for i, cat in enumerate(pack.categories):
        path = f"/categories/{i}"
        if cat.id in seen_ids:
            out.append(
                Violation(
                    "DUPLICATE_CATEGORY_ID",
                    path,
                    f"category id '{cat.id}' already defined at /categories/{seen_ids[cat.id]}",
                )
            )
        else:
            seen_ids[cat.id] = i
        if not cat.id:
            out.append(Violation("EMPTY_TEXT", path, "category id is empty"))
        if not cat.display_name:
            out.append(Violation("EMPTY_TEXT", path, "display_name is empty"))

    if not (MIN_CATEGORIES <= len(seen_ids) <= MAX_CATEGORIES):
        out.append(
            Violation(
                "CATEGORY_COUNT",
                "/categories",
                f"{len(seen_ids)} categories; engine accepts {MIN_CATEGORIES}..{MAX_CATEGORIES}",
            )
        )

    prefixes: dict[str, str] = {}
    for i, cat in enumerate(pack.categories):
        prefix = category_prefix(cat.display_name)
        clash = prefixes.get(prefix)
        if clash is not None or prefix in _RESERVED_PREFIXES:
            out.append(
                Violation(
                    "PREFIX_COLLISION",
                    f"/categories/{i}",
                    f"card-id prefix '{prefix}' collides with "
                    + (f"category '{clash}'" if clash else "a reserved prefix"),
                )
            )
        else:
            prefixes[prefix] = cat.id

    pair_first: dict[tuple[str, int], int] = {}
    by_category_ranks: dict[str, set[int]] = {c: set() for c in known}
    for i, entry in enumerate(pack.advice):
        path = f"/advice/{i}"
        if entry.category not in known:
            out.append(Violation("UNKNOWN_CATEGORY", path, f"category '{entry.category}' not defined"))
            continue
        if not (1 <= entry.rank <= RANKS_PER_CATEGORY):
            out.append(
                Violation("RANK_OUT_OF_RANGE", path, f"rank {entry.rank} outside 1..{RANKS_PER_CATEGORY}")
            )
            continue
        key = (entry.category, entry.rank)
        if key in pair_first:
            out.append(
                Violation(
                    "DUPLICATE_ADVICE",
                    path,
                    f"({entry.category}, {entry.rank}) already defined at /advice/{pair_first[key]}",
                )
            )
        else:
            pair_first[key] = i
            by_category_ranks[entry.category].add(entry.rank)
        if not entry.text:
            out.append(Violation("EMPTY_TEXT", path, "advice text is empty"))

    for cat_id in sorted(known):
        missing = sorted(set(range(1, RANKS_PER_CATEGORY + 1)) - by_category_ranks[cat_id])
        if missing:
            out.append(
                Violation(
                    "GAP_IN_RANKS",
                    f"/advice[{cat_id}]",
                    f"category '{cat_id}' is missing rank(s) {', '.join(map(str, missing))}",
                )
            )

    for i, entry in enumerate(pack.misconceptions):
        path = f"/misconceptions/{i}"
        if entry.category not in known:
            out.append(Violation("UNKNOWN_CATEGORY", path, f"category '{entry.category}' not defined"))
        if not entry.text:
            out.append(Violation("EMPTY_TEXT", path, "misconception text is empty"))
        if entry.truth_value is not False:
            out.append(Violation("NOT_FALSE", path, "misconceptions must carry truth_value false"))

    ordinal_first: dict[int, int] = {}
    for i, entry in enumerate(pack.change_cards):
        path = f"/change_cards/{i}"
        if not (1 <= entry.ordinal <= MAX_CHANGE_ORDINAL):
            out.append(
                Violation("ORDINAL_OUT_OF_RANGE", path, f"ordinal {entry.ordinal} outside 1..{MAX_CHANGE_ORDINAL}")
            )
        elif entry.ordinal in ordinal_first:
            out.append(
                Violation(
                    "DUPLICATE_ORDINAL",
                    path,
                    f"ordinal {entry.ordinal} already defined at /change_cards/{ordinal_first[entry.ordinal]}",
                )
            )
        else:
            ordinal_first[entry.ordinal] = i
        if not entry.lines or not all(entry.lines):
            out.append(Violation("EMPTY_TEXT", path, "change card needs at least one non-empty line"))
        if not entry.linked_categories:
            out.append(Violation("NO_LINKED_CATEGORIES", path, "linked_categories is empty"))
        for cat_id in entry.linked_categories:
            if cat_id not in known:
                out.append(Violation("UNKNOWN_CATEGORY", path, f"linked category '{cat_id}' not defined"))

    advice_pairs = set(pair_first)
    for i, entry in enumerate(pack.challenges):
        path = f"/challenges/{i}"
        if entry.kind is ChallengeKind.TRUE_FALSE:
            if entry.answer is None:
                out.append(Violation("MISSING_ANSWER", path, "TrueFalse entry has no answer"))
            if entry.relevant_cards:
                out.append(Violation("UNEXPECTED_FIELD", path, "TrueFalse entry carries relevant_cards"))
        else:
            if entry.answer is not None:
                out.append(Violation("UNEXPECTED_FIELD", path, "Scenario entry carries an answer"))
            if not entry.relevant_cards:
                out.append(Violation("NO_RELEVANT_CARDS", path, "Scenario entry has no relevant_cards"))
            if entry.max_defenses is None or entry.max_defenses < 1:
                out.append(Violation("BAD_MAX_DEFENSES", path, "max_defenses must be at least 1"))
            for cat_id, rank in entry.relevant_cards:
                if (cat_id, rank) not in advice_pairs:
                    out.append(
                        Violation(
                            "DANGLING_CARD_REF",
                            path,
                            f"relevant card ({cat_id}, {rank}) does not exist in the pack",
                        )
                    )
        if not entry.statement:
            out.append(Violation("EMPTY_TEXT", path, "challenge statement is empty"))

    if len(pack.palettes) < 2:
        out.append(
            Violation(
                "TOO_FEW_PALETTES",
                "/palettes",
                "packs ship at least two palettes (a default and a colorblind-safe one)",
            )
        )
    palette_names: dict[str, int] = {}
    for i, palette in enumerate(pack.palettes):
        path = f"/palettes/{i}"
        if palette.name in palette_names:
            out.append(
                Violation(
                    "DUPLICATE_PALETTE",
                    path,
                    f"palette '{palette.name}' already defined at /palettes/{palette_names[palette.name]}",
                )
            )
        else:
            palette_names[palette.name] = i
        slots = dict(palette.colors)
        for slot, value in palette.colors:
            if not _HEX_COLOR.match(value):
                out.append(Violation("BAD_COLOR_FORMAT", path, f"slot '{slot}' color '{value}' is not #RRGGBB"))
        lowered = [v.lower() for v in slots.values()]
        if len(set(lowered)) != len(lowered):
            out.append(Violation("PALETTE_COLORS_NOT_DISTINCT", path, "palette colors must be pairwise distinct"))
        for cat in pack.categories:
            if cat.color not in slots:
                out.append(
                    Violation(
                        "PALETTE_MISSING_SLOT",
                        path,
                        f"palette '{palette.name}' has no color for slot '{cat.color}' (category '{cat.id}')",
                    )
                )

    out.sort(key=lambda v: (v.path, v.code, v.message))
    return out


# ---------------------------------------------------------------------------
# Bundled packs


@lru_cache(maxsize=None)
def load_bundled_pack(name: str) -> ContentPack:
    if name not in BUNDLED_PACKS:
        raise KeyError(f"no bundled pack named '{name}' (have: {', '.join(sorted(BUNDLED_PACKS))})")
    text = resources.files("cybercards.packs").joinpath(BUNDLED_PACKS[name]).read_text("utf-8")
    return load_pack(text)


def default_pack() -> ContentPack:
    """The shipped four-category pack carrying the playtested corpus."""
    return load_bundled_pack("default")

"""Candidate romanization of Ottoman Turkish words into Modern Turkish.

An OT word underdetermines its MT reading: polyphonic letters fan out into
several Latin realizations and most vowels are only implied by the script.
Candidates are therefore generated by substitution per the correspondence
table plus bounded epenthetic vowel insertion, filtered against a stem/affix
lexicon with vowel-harmony reconstruction, and rescored by a language model.
Conventional-pronunciation exceptions short-circuit the whole pipeline.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

from .scheme import SchemeTable, UnknownLetter

# Word-initial alif acts as a bare vowel carrier and may open the word with
# any MT vowel, beyond the two alternatives of the correspondence chart.
_INITIAL_ALIF = "ا"

_BACK_VOWELS = frozenset("aıou")
_FRONT_VOWELS = frozenset("eiöü")
_ROUNDED_VOWELS = frozenset("oöuü")
_HIGH_VOWELS = frozenset("ıiuü")
_VOWELS = _BACK_VOWELS | _FRONT_VOWELS | frozenset("âîû")
_VOICELESS_FINALS = frozenset("çfhkpsşt")

_LONG_VOWEL_BASE = {"â": "a", "î": "i", "û": "u"}

INSERTION_PENALTY = 0.5


class NoVowelInStem(ValueError):
    """Harmony is undefined for a stem without any vowel."""


def _is_vowel(ch: str) -> bool:
    return ch in _VOWELS


def _last_vowel(word: str) -> Optional[str]:
    for ch in reversed(word):
        base = _LONG_VOWEL_BASE.get(ch, ch)
        if base in _BACK_VOWELS or base in _FRONT_VOWELS:
            return base
    return None


@dataclass(frozen=True)
class OTWord:
    """An Arabic-script word in logical (reading) order, NFC-normalized."""

    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("OT word must be non-empty")

    @classmethod
    def from_text(cls, text: str, table: SchemeTable) -> "OTWord":
        normalized = unicodedata.normalize("NFC", text)
        letters = []
        for ch in normalized:
            if unicodedata.category(ch) == "Mn":
                continue  # vocalization marks carry no letter of their own
            if ch not in table.ot_to_latin:
                raise UnknownLetter(ch)
            letters.append(ch)
        return cls(tuple(letters))

    @property
    def text(self) -> str:
        return "".join(self.letters)


@dataclass(frozen=True)
class TraceStep:
    """One derivation step: a table substitution, an inserted vowel, or an
    exception-lexicon override."""

    kind: str  # "sub" | "ins" | "exception"
    ot_letter: str = ""
    output: str = ""


@dataclass(frozen=True)
class Candidate:
    surface: str
    trace: tuple[TraceStep, ...]
    gen_score: float
    lm_score: float = 0.0
    total: float = 0.0


@dataclass(frozen=True)
class GenLimits:
    max_insertions: Optional[int] = None  # None: ceil(letters / 2)
    beam_width: int = 500
    max_candidates: int = 50

    def __post_init__(self):
        if self.max_insertions is not None and self.max_insertions < 0:
            raise ValueError("max_insertions must be non-negative")
        if self.beam_width <= 0 or self.max_candidates <= 0:
            raise ValueError("beam width and max candidates must be positive")

    def insertions_for(self, word: OTWord) -> int:
        if self.max_insertions is not None:
            return self.max_insertions
        return math.ceil(len(word.letters) / 2)


@dataclass(frozen=True)
class GenerationResult:
    candidates: tuple[Candidate, ...]
    truncated: bool

    def surfaces(self) -> list[str]:
        return [c.surface for c in self.candidates]


@dataclass(frozen=True)
class Affix:
    """A suffix template in archiphoneme notation.

    A/I/D realize by harmony and assimilation; a leading parenthesized segment
    is present only after a consonant-final base.
    """

    name: str
    template: str

    def realizations(self) -> set[str]:
        template = self.template
        optional = ""
        if template.startswith("("):
            close = template.index(")")
            optional = template[1:close]
            template = template[close + 1 :]
        expansions = _expand_archiphonemes(template)
        if optional:
            with_opt = {
                o + e
                for o in _expand_archiphonemes(optional)
                for e in expansions
            }
            return expansions | with_opt
        return expansions


def _expand_archiphonemes(template: str) -> set[str]:
    results = {""}
    choices = {"A": "ae", "I": "ıiuü", "D": "dt"}
    for ch in template:
        alts = choices.get(ch, ch)
        results = {r + a for r in results for a in alts}
    return results


DEFAULT_AFFIXES: tuple[Affix, ...] = (
    Affix("-DI", "DI"),
    Affix("-lAr", "lAr"),
    Affix("-(I)ncI", "(I)ncI"),
    Affix("-In", "In"),
    Affix("-DA", "DA"),
    Affix("-Dan", "DAn"),
)


@dataclass(frozen=True)
class Lexicon:
    stems: frozenset[str]
    full_forms: frozenset[str] = frozenset()
    affixes: tuple[Affix, ...] = DEFAULT_AFFIXES

    @classmethod
    def from_file(cls, path: Path | str, affixes: tuple[Affix, ...] = DEFAULT_AFFIXES) -> "Lexicon":
        stems, fulls = set(), set()
        for raw in Path(path).read_text("utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" in line:
                word, tag = line.split("\t", 1)
                if tag.strip() == "full":
                    fulls.add(unicodedata.normalize("NFC", word.strip()).lower())
                else:
                    raise ValueError(f"unknown lexicon tag: {tag!r}")
            else:
                stems.add(unicodedata.normalize("NFC", line).lower())
        return cls(frozenset(stems), frozenset(fulls), affixes)

    def contains(self, surface: str) -> bool:
        word = surface.lower()
        return word in self.stems or word in self.full_forms


@dataclass(frozen=True)
class ExceptionLexicon:
    """Conventional pronunciations that override character accuracy."""

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: Path | str) -> "ExceptionLexicon":
        entries = {}
        for raw in Path(path).read_text("utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            ot, mt = line.split("\t", 1)
            key = unicodedata.normalize("NFC", ot.strip())
            entries[key] = unicodedata.normalize("NFC", mt.strip())
        return cls(entries)

    def lookup(self, word: OTWord) -> Optional[str]:
        return self.entries.get(word.text)


def _letter_alternatives(
    word: OTWord, index: int, table: SchemeTable
) -> tuple[str, ...]:
    letter = word.letters[index]
    if index == 0 and letter == _INITIAL_ALIF:
        return table.mt_vowels
    return table.candidates(letter)


def generate_candidates(
    word: OTWord, table: SchemeTable, limits: GenLimits = GenLimits()
) -> GenerationResult:
    """Enumerate character-accurate MT readings of an OT word.

    Each candidate substitutes every letter with one table alternative and may
    insert epenthetic vowels between adjacent consonant realizations or after a
    word-final consonant, bounded by the insertion budget and beam width.
    """
    max_ins = limits.insertions_for(word)
    truncated = False

    # beam state: (surface, trace, score, insertions_used)
    beam: list[tuple[str, tuple[TraceStep, ...], float, int]] = [("", (), 1.0, 0)]
    for i in range(len(word.letters)):
        alternatives = _letter_alternatives(word, i, table)
        letter = word.letters[i]
        next_beam = []
        for surface, trace, score, used in beam:
            for alt_index, alt in enumerate(alternatives):
                weight = 1.0 / (1 + alt_index)
                step = TraceStep("sub", ot_letter=letter, output=alt)
                # epenthesis between two consonant realizations
                if (
                    used < max_ins
                    and surface
                    and not _is_vowel(surface[-1])
                    and alt
                    and not _is_vowel(alt[0])
                ):
                    for vowel in table.mt_vowels:
                        next_beam.append(
                            (
                                surface + vowel + alt,
                                trace + (TraceStep("ins", output=vowel), step),
                                score * INSERTION_PENALTY * weight,
                                used + 1,
                            )
                        )
                next_beam.append((surface + alt, trace + (step,), score * weight, used))
        next_beam.sort(key=lambda s: (-s[2], s[0]))
        if len(next_beam) > limits.beam_width:
            truncated = True
            next_beam = next_beam[: limits.beam_width]
        beam = next_beam

    finished = list(beam)
    for surface, trace, score, used in beam:
        if used < max_ins and surface and not _is_vowel(surface[-1]):
            for vowel in table.mt_vowels:
                finished.append(
                    (
                        surface + vowel,
                        trace + (TraceStep("ins", output=vowel),),
                        score * INSERTION_PENALTY,
                        used + 1,
                    )
                )

    best: dict[str, tuple[str, tuple[TraceStep, ...], float, int]] = {}
    for state in finished:
        current = best.get(state[0])
        if current is None or state[2] > current[2]:
            best[state[0]] = state
    ordered = sorted(best.values(), key=lambda s: (-s[2], s[0]))
    if len(ordered) > limits.max_candidates:
        truncated = True
        ordered = ordered[: limits.max_candidates]
    candidates = tuple(
        Candidate(surface=s, trace=t, gen_score=score) for s, t, score, _ in ordered
    )
    return GenerationResult(candidates, truncated)


def invert_candidate(candidate: Candidate) -> str:
    """Recover the OT word from a candidate's derivation trace."""
    return "".join(
        step.ot_letter for step in candidate.trace if step.kind == "sub"
    )


def strip_affixes(surface: str, lexicon: Lexicon) -> set[tuple[str, tuple[str, ...]]]:
    """All (stem, affix chain) segmentations licensed by the lexicon.

    Suffix realizations are matched iteratively from the end of the word; a
    segmentation counts only if the remaining stem is an attested stem or full
    form. Chains are returned in application order.
    """
    word = surface.lower()
    results: set[tuple[str, tuple[str, ...]]] = set()
    seen: set[tuple[str, tuple[str, ...]]] = set()

    def walk(rest: str, chain: tuple[str, ...]) -> None:
        if (rest, chain) in seen:
            return
        seen.add((rest, chain))
        if lexicon.contains(rest):
            results.add((rest, tuple(reversed(chain))))
        for affix in lexicon.affixes:
            for form in sorted(affix.realizations(), key=len, reverse=True):
                if form and len(rest) > len(form) and rest.endswith(form):
                    walk(rest[: -len(form)], chain + (affix.name,))

    walk(word, ())
    return results


def _affix_by_name(name: str, lexicon: Lexicon) -> Affix:
    for affix in lexicon.affixes:
        if affix.name == name:
            return affix
    raise KeyError(name)


def apply_harmony(stem: str, chain: Iterable[str | Affix], lexicon: Lexicon | None = None) -> str:
    """Attach archiphonemic suffixes to a stem with MT harmony rules.

    A realizes as a/e (two-fold backness harmony); I as ı/i/u/ü (four-fold
    backness+rounding harmony); D as d/t (voicing assimilation). A leading
    parenthesized segment is used only after a consonant.
    """
    word = stem
    if _last_vowel(word) is None:
        raise NoVowelInStem(stem)
    for item in chain:
        if isinstance(item, Affix):
            template = item.template
        elif lexicon is not None:
            template = _affix_by_name(item, lexicon).template
        else:
            template = _affix_by_name(item, Lexicon(frozenset())).template
        if template.startswith("("):
            close = template.index(")")
            optional, template = template[1:close], template[close + 1 :]
            if not _is_vowel(word[-1]):
                word = _realize(word, optional)
        word = _realize(word, template)
    return word


def _realize(word: str, template: str) -> str:
    for ch in template:
        if ch == "A":
            word += "a" if _last_vowel(word) in _BACK_VOWELS else "e"
        elif ch == "I":
            last = _last_vowel(word)
            back = last in _BACK_VOWELS
            rounded = last in _ROUNDED_VOWELS
            word += {
                (True, False): "ı",
                (False, False): "i",
                (True, True): "u",
                (False, True): "ü",
            }[(back, rounded)]
        elif ch == "D":
            word += "t" if word[-1] in _VOICELESS_FINALS else "d"
        else:
            word += ch
    return word


def check_vowel_harmony(word: str) -> bool:
    """True iff consecutive vowels obey two-fold backness harmony, with
    rounding additionally checked for high vowels."""
    vowels = [
        _LONG_VOWEL_BASE.get(ch, ch)
        for ch in word.lower()
        if _LONG_VOWEL_BASE.get(ch, ch) in _BACK_VOWELS | _FRONT_VOWELS
    ]
    for prev, cur in zip(vowels, vowels[1:]):
        if (cur in _BACK_VOWELS) != (prev in _BACK_VOWELS):
            return False
        if cur in _HIGH_VOWELS and (cur in _ROUNDED_VOWELS) != (prev in _ROUNDED_VOWELS):
            return False
    return True


def romanize(
    word: OTWord,
    table: SchemeTable,
    lexicon: Lexicon,
    exceptions: ExceptionLexicon,
    lm_model=None,
    limits: GenLimits = GenLimits(),
    alpha: float = 0.5,
) -> list[Candidate]:
    """Full romanization pipeline, deterministically ranked best-first.

    Exception entries short-circuit generation entirely. Generated candidates
    are kept when the lexicon attests them (directly or after affix stripping);
    if none pass, all candidates are kept so the pipeline still yields a
    good-enough reading. Ranking combines generation prior and LM score.
    """
    override = exceptions.lookup(word)
    if override is not None:
        step = TraceStep("exception", ot_letter=word.text, output=override)
        return [Candidate(surface=override, trace=(step,), gen_score=1.0, total=0.0)]

    result = generate_candidates(word, table, limits)
    passing = [
        c
        for c in result.candidates
        if lexicon.contains(c.surface) or strip_affixes(c.surface, lexicon)
    ]
    pool = passing if passing else list(result.candidates)

    if lm_model is not None:
        from .lm import RescoreConfig, rescore

        return rescore(pool, lm_model, RescoreConfig(alpha=alpha))

    scored = [replace(c, total=math.log(c.gen_score)) for c in pool]
    scored.sort(key=lambda c: (-c.total, c.surface))
    return scored

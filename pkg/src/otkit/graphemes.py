"""Grapheme-level line reversal for pairing LTR transcriptions with RTL page images.

HTR platforms match transcription lines against image lines, so a left-to-right
Latin transcription of a right-to-left page has to be stored in reversed order.
Reversal operates on extended grapheme clusters (never splitting combining
diacritics from their base) and keeps digit runs in their original internal
order, since numerals run LTR even inside RTL text.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import regex

_GRAPHEME_RE = regex.compile(r"\X")

# Decimal digits that keep LTR order inside RTL text: ASCII plus Arabic-Indic.
_DIGITS = frozenset("0123456789٠١٢٣٤٥٦٧٨٩")

_BRACKET_MIRROR = str.maketrans("()[]{}<>", ")(][}{><")


class RunKind(Enum):
    REVERSIBLE = "reversible"
    DIGIT_RUN = "digit_run"


@dataclass(frozen=True)
class RunSegment:
    """A contiguous [start, end) span of grapheme indices of uniform kind."""

    kind: RunKind
    start: int
    end: int


@dataclass(frozen=True)
class GraphemeLine:
    """A line of text as a sequence of extended grapheme clusters (NFC)."""

    graphemes: tuple[str, ...]
    source_normalization: bool = True

    def __len__(self) -> int:
        return len(self.graphemes)

    @property
    def text(self) -> str:
        return "".join(self.graphemes)


@dataclass(frozen=True)
class ReversalOptions:
    mirror_brackets: bool = False
    preserve_digit_runs: bool = True


def segment_line(text: str) -> GraphemeLine:
    """Split `text` into extended grapheme clusters after NFC normalization."""
    normalized = unicodedata.normalize("NFC", text)
    return GraphemeLine(tuple(_GRAPHEME_RE.findall(normalized)))


def _is_digit(grapheme: str) -> bool:
    return all(ch in _DIGITS for ch in grapheme) and bool(grapheme)


def segment_runs(line: GraphemeLine) -> list[RunSegment]:
    """Partition a line into maximal digit runs and reversible spans."""
    runs: list[RunSegment] = []
    for i, g in enumerate(line.graphemes):
        kind = RunKind.DIGIT_RUN if _is_digit(g) else RunKind.REVERSIBLE
        if runs and runs[-1].kind is kind:
            runs[-1] = RunSegment(kind, runs[-1].start, i + 1)
        else:
            runs.append(RunSegment(kind, i, i + 1))
    return runs


def _rereverse_digit_runs(graphemes: list[str]) -> list[str]:
    out = list(graphemes)
    i = 0
    n = len(out)
    while i < n:
        if _is_digit(out[i]):
            j = i
            while j < n and _is_digit(out[j]):
                j += 1
            out[i:j] = reversed(out[i:j])
            i = j
        else:
            i += 1
    return out


def reverse_line(text: str, opts: ReversalOptions = ReversalOptions()) -> str:
    """Reverse a line grapheme by grapheme.

    With `preserve_digit_runs`, every maximal digit run ends up at its reversed
    position but keeps its original internal order ("sayfa 12" -> "12 afyas").
    Applying the function twice returns the NFC form of the input.
    """
    line = segment_line(text)
    reversed_graphemes = list(reversed(line.graphemes))
    if opts.preserve_digit_runs:
        reversed_graphemes = _rereverse_digit_runs(reversed_graphemes)
    result = "".join(reversed_graphemes)
    if opts.mirror_brackets:
        result = result.translate(_BRACKET_MIRROR)
    return result


def reverse_document(
    lines: Iterable[str], opts: ReversalOptions = ReversalOptions()
) -> list[str]:
    """Apply reverse_line element-wise; line order is unchanged."""
    return [reverse_line(line, opts) for line in lines]

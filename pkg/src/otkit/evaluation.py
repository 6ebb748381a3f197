"""Character and word error rates over grapheme-cluster alignments.

CER follows the (S+I+D)/|reference| convention at grapheme-cluster level, so a
diacritic-marked letter counts as a single error rather than two. WER applies
the same edit distance over whitespace tokens. Reports pool edits across lines
and documents (micro averaging) and mirror the publication/subject/date table
layout used for cross-domain comparisons.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .graphemes import segment_line


class EmptyReference(ValueError):
    """Error rates are undefined against an empty reference."""


class EditOp(Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"


@dataclass(frozen=True)
class AlignmentStep:
    op: EditOp
    ref: Optional[str]  # reference grapheme/token, None for insertions
    hyp: Optional[str]  # hypothesis grapheme/token, None for deletions


@dataclass(frozen=True)
class Alignment:
    ops: tuple[AlignmentStep, ...]
    substitutions: int
    insertions: int
    deletions: int
    matches: int

    @property
    def distance(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    def replay(self) -> list[str]:
        """Apply the ops to the reference, reproducing the hypothesis."""
        out = []
        for step in self.ops:
            if step.op is EditOp.MATCH:
                out.append(step.ref)
            elif step.op in (EditOp.SUBSTITUTE, EditOp.INSERT):
                out.append(step.hyp)
        return out


def levenshtein_align(ref: Sequence[str], hyp: Sequence[str]) -> Alignment:
    """Minimal unit-cost alignment with deterministic traceback.

    Ties are broken preferring Match > Substitute > Delete > Insert.
    """
    n, m = len(ref), len(hyp)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row, prev = dist[i], dist[i - 1]
        for j in range(1, m + 1):
            same = ref[i - 1] == hyp[j - 1]
            row[j] = min(
                prev[j - 1] + (0 if same else 1),
                prev[j] + 1,
                row[j - 1] + 1,
            )

    ops: list[AlignmentStep] = []
    i, j = n, m
    s = ins = dele = matches = 0
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dist[i][j] == dist[i - 1][j - 1]:
            ops.append(AlignmentStep(EditOp.MATCH, ref[i - 1], hyp[j - 1]))
            matches += 1
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + 1:
            ops.append(AlignmentStep(EditOp.SUBSTITUTE, ref[i - 1], hyp[j - 1]))
            s += 1
            i, j = i - 1, j - 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            ops.append(AlignmentStep(EditOp.DELETE, ref[i - 1], None))
            dele += 1
            i -= 1
        else:
            ops.append(AlignmentStep(EditOp.INSERT, None, hyp[j - 1]))
            ins += 1
            j -= 1
    ops.reverse()
    return Alignment(tuple(ops), s, ins, dele, matches)


def cer(ref: str, hyp: str) -> float:
    """(S+I+D) / reference length, in grapheme clusters. May exceed 1.0."""
    ref_g = segment_line(ref).graphemes
    if not ref_g:
        raise EmptyReference("reference has no graphemes")
    hyp_g = segment_line(hyp).graphemes
    return levenshtein_align(ref_g, hyp_g).distance / len(ref_g)


def wer(ref: str, hyp: str) -> float:
    """(S+I+D) / reference length, over whitespace tokens."""
    ref_t = ref.split()
    if not ref_t:
        raise EmptyReference("reference has no tokens")
    return levenshtein_align(ref_t, hyp.split()).distance / len(ref_t)


@dataclass(frozen=True)
class DocumentMeta:
    name: str
    subject: str = ""
    date: str = ""


@dataclass(frozen=True)
class DocumentRow:
    meta: DocumentMeta
    cer: float
    wer: float
    char_edits: int
    char_total: int
    word_edits: int
    word_total: int


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[DocumentRow, ...]
    skipped: tuple[tuple[DocumentMeta, str], ...] = ()

    @property
    def micro_cer(self) -> float:
        total = sum(r.char_total for r in self.rows)
        if total == 0:
            raise EmptyReference("no reference graphemes in report")
        return sum(r.char_edits for r in self.rows) / total

    @property
    def micro_wer(self) -> float:
        total = sum(r.word_total for r in self.rows)
        if total == 0:
            raise EmptyReference("no reference tokens in report")
        return sum(r.word_edits for r in self.rows) / total

    def render_table(self) -> str:
        headers = ("Name of publication", "Subject", "Date", "CER", "WER")
        body = [
            (r.meta.name, r.meta.subject, r.meta.date, f"{r.cer:.2%}", f"{r.wer:.2%}")
            for r in self.rows
        ]
        if self.rows:
            body.append(("TOTAL", "", "", f"{self.micro_cer:.2%}", f"{self.micro_wer:.2%}"))
        widths = [max(len(row[c]) for row in [headers, *body]) for c in range(5)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                 for row in [headers, *body]]
        for meta, reason in self.skipped:
            lines.append(f"# skipped {meta.name}: {reason}")
        return "\n".join(lines)

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "subject", "date", "cer", "wer"])
        for r in self.rows:
            writer.writerow(
                [r.meta.name, r.meta.subject, r.meta.date, f"{r.cer:.6f}", f"{r.wer:.6f}"]
            )
        if self.rows:
            writer.writerow(
                ["TOTAL", "", "", f"{self.micro_cer:.6f}", f"{self.micro_wer:.6f}"]
            )
        return buf.getvalue()


def document_counts(ref_lines: Sequence[str], hyp_lines: Sequence[str]):
    """Pooled (char_edits, char_total, word_edits, word_total) over line pairs."""
    char_edits = char_total = word_edits = word_total = 0
    for ref, hyp in zip(ref_lines, hyp_lines):
        ref_g = segment_line(ref).graphemes
        hyp_g = segment_line(hyp).graphemes
        char_edits += levenshtein_align(ref_g, hyp_g).distance
        char_total += len(ref_g)
        ref_t, hyp_t = ref.split(), hyp.split()
        word_edits += levenshtein_align(ref_t, hyp_t).distance
        word_total += len(ref_t)
    return char_edits, char_total, word_edits, word_total


def corpus_report(
    pairs: Sequence[tuple[DocumentMeta, Sequence[str], Sequence[str]]],
) -> EvalReport:
    """Per-document micro CER/WER plus pooled totals.

    Documents whose line counts differ are reported as skipped and excluded
    from the totals rather than aborting the run.
    """
    rows = []
    skipped = []
    for meta, ref_lines, hyp_lines in pairs:
        if len(ref_lines) != len(hyp_lines):
            skipped.append(
                (meta, f"line count mismatch ({len(ref_lines)} vs {len(hyp_lines)})")
            )
            continue
        ce, ct, we, wt = document_counts(ref_lines, hyp_lines)
        if ct == 0:
            skipped.append((meta, "empty reference"))
            continue
        rows.append(
            DocumentRow(
                meta=meta,
                cer=ce / ct,
                wer=we / wt if wt else 0.0,
                char_edits=ce,
                char_total=ct,
                word_edits=we,
                word_total=wt,
            )
        )
    return EvalReport(tuple(rows), tuple(skipped))

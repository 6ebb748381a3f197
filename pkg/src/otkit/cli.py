"""Command-line entry point for the toolkit.

Subcommands mirror the ground-truth pipeline: reverse, convert, romanize,
lm-train, lm-score, eval, prepare, split. Data goes to stdout, diagnostics to
stderr. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation, ingest, lm
from .graphemes import ReversalOptions, reverse_line
from .romanizer import (
    ExceptionLexicon,
    GenLimits,
    Lexicon,
    OTWord,
    romanize,
)
from .scheme import (
    SchemeId,
    UnknownLetter,
    UnknownScheme,
    convert_scheme,
    load_table,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_lines(path: str | None) -> list[str]:
    if path is None or path == "-":
        return sys.stdin.read().split("\n")
    return Path(path).read_text("utf-8").split("\n")


def _write_lines(lines: list[str], path: str | None) -> None:
    text = "\n".join(lines)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, "utf-8")


def build_parser() -> _Parser:
    parser = _Parser(prog="otkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reverse", help="reverse transcription lines grapheme-wise")
    p.add_argument("--input", "-i", default=None, help="input file (default stdin)")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--mirror-brackets", action="store_true")
    p.add_argument(
        "--no-digit-runs",
        action="store_true",
        help="reverse digits along with everything else",
    )

    p = sub.add_parser("convert", help="convert transcription between schemes")
    p.add_argument("--from", dest="from_scheme", default="ia", choices=["ia", "loose"])
    p.add_argument("--to", dest="to_scheme", default="loose", choices=["ia", "loose"])
    p.add_argument("--input", "-i", default=None)
    p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("romanize", help="rank MT readings for OT words from stdin")
    p.add_argument("--lexicon", default=None)
    p.add_argument("--exceptions", default=None)
    p.add_argument("--model", default=None, help="trained LM file")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--max-insertions", type=int, default=None)
    p.add_argument("--beam", type=int, default=500)
    p.add_argument("--max-candidates", type=int, default=50)
    p.add_argument("--top", type=int, default=5, help="candidates printed per word")

    p = sub.add_parser("lm-train", help="train an n-gram model on a text corpus")
    p.add_argument("corpus", nargs="+", help="UTF-8 text files")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--char-order", type=int, default=3)
    p.add_argument("--add-k", type=float, default=0.1)
    p.add_argument("--backoff-weight", type=float, default=0.5)
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("lm-score", help="score lines with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", "-i", default=None)
    p.add_argument("--perplexity", action="store_true", help="print corpus perplexity only")

    p = sub.add_parser("eval", help="CER/WER of hypothesis against reference")
    p.add_argument("--ref", required=True, help="reference file or directory")
    p.add_argument("--hyp", required=True, help="hypothesis file or directory")
    p.add_argument("--report", choices=["table", "csv"], default="table")

    p = sub.add_parser("prepare", help="pair PAGE-XML with transcripts and export")
    p.add_argument("--manifest", default=None, help="corpus manifest JSON")
    p.add_argument("--page", default=None, help="single PAGE-XML file")
    p.add_argument("--transcript", default=None, help="single transcript file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-reverse", action="store_true")

    p = sub.add_parser("split", help="assign train/val/test labels in a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True)

    return parser


def _cmd_reverse(args) -> int:
    opts = ReversalOptions(
        mirror_brackets=args.mirror_brackets,
        preserve_digit_runs=not args.no_digit_runs,
    )
    lines = _read_lines(args.input)
    _write_lines([reverse_line(line, opts) for line in lines], args.output)
    return 0


def _cmd_convert(args) -> int:
    table = load_table()
    from_scheme = SchemeId.parse(args.from_scheme)
    to_scheme = SchemeId.parse(args.to_scheme)
    lines = _read_lines(args.input)
    _write_lines(
        [convert_scheme(line, from_scheme, to_scheme, table) for line in lines],
        args.output,
    )
    return 0


def _cmd_romanize(args) -> int:
    table = load_table()
    lexicon = (
        Lexicon.from_file(args.lexicon) if args.lexicon else Lexicon(frozenset())
    )
    exceptions = (
        ExceptionLexicon.from_file(args.exceptions)
        if args.exceptions
        else ExceptionLexicon()
    )
    model = lm.load(args.model) if args.model else None
    limits = GenLimits(
        max_insertions=args.max_insertions,
        beam_width=args.beam,
        max_candidates=args.max_candidates,
    )
    out = []
    for raw in sys.stdin.read().split():
        word = OTWord.from_text(raw, table)
        ranked = romanize(
            word, table, lexicon, exceptions, model, limits, alpha=args.alpha
        )
        out.append("\t".join([raw, *[c.surface for c in ranked[: args.top]]]))
    sys.stdout.write("\n".join(out) + ("\n" if out else ""))
    return 0


def _cmd_lm_train(args) -> int:
    lines = []
    for path in args.corpus:
        lines.extend(Path(path).read_text("utf-8").splitlines())
    model = lm.train(
        lines,
        order=args.order,
        char_order=args.char_order,
        k=args.add_k,
        backoff_weight=args.backoff_weight,
    )
    lm.save(model, args.output)
    print(f"trained order-{args.order} model on {len(lines)} lines", file=sys.stderr)
    return 0


def _cmd_lm_score(args) -> int:
    model = lm.load(args.model)
    lines = [line for line in _read_lines(args.input) if line.strip()]
    if args.perplexity:
        print(f"{lm.perplexity(model, lines):.6f}")
        return 0
    for line in lines:
        print(f"{lm.score(model, lm.tokenize(line)):.6f}\t{line}")
    return 0


def _collect_eval_pairs(ref: Path, hyp: Path):
    if ref.is_dir() != hyp.is_dir():
        raise ValueError("--ref and --hyp must both be files or both directories")
    if ref.is_dir():
        pairs = []
        for ref_file in sorted(ref.glob("*.txt")):
            hyp_file = hyp / ref_file.name
            if not hyp_file.exists():
                raise FileNotFoundError(hyp_file)
            pairs.append(
                (
                    evaluation.DocumentMeta(name=ref_file.stem),
                    ref_file.read_text("utf-8").splitlines(),
                    hyp_file.read_text("utf-8").splitlines(),
                )
            )
        return pairs
    return [
        (
            evaluation.DocumentMeta(name=ref.stem),
            ref.read_text("utf-8").splitlines(),
            hyp.read_text("utf-8").splitlines(),
        )
    ]


def _cmd_eval(args) -> int:
    pairs = _collect_eval_pairs(Path(args.ref), Path(args.hyp))
    report = evaluation.corpus_report(pairs)
    if args.report == "csv":
        sys.stdout.write(report.render_csv())
    else:
        sys.stdout.write(report.render_table() + "\n")
    for meta, reason in report.skipped:
        print(f"skipped {meta.name}: {reason}", file=sys.stderr)
    return 2 if report.skipped and not report.rows else 0


def _prepare_one(page_path: Path, transcript_path: Path, out_dir: Path, reverse: bool):
    doc = ingest.parse_page_xml(page_path.read_bytes())
    transcript = ingest.load_transcript(transcript_path)
    pairs = ingest.pair_ground_truth(doc, transcript)
    name = page_path.stem
    ingest.export_training_pairs([(name, pairs)], out_dir, reverse=reverse)


def _cmd_prepare(args) -> int:
    out_dir = Path(args.out)
    reverse = not args.no_reverse
    if args.manifest:
        manifest = ingest.load_manifest(args.manifest)
        base = Path(args.manifest).parent
        for entry in manifest.entries:
            _prepare_one(
                base / entry.page_file, base / entry.transcript_file, out_dir, reverse
            )
        print(f"prepared {len(manifest.entries)} pages", file=sys.stderr)
        return 0
    if not (args.page and args.transcript):
        raise _UsageError("prepare needs --manifest or both --page and --transcript")
    _prepare_one(Path(args.page), Path(args.transcript), out_dir, reverse)
    return 0


def _cmd_split(args) -> int:
    try:
        ratios = tuple(float(x) for x in args.ratios.split(","))
    except ValueError:
        raise _UsageError(f"bad --ratios value: {args.ratios!r}") from None
    if len(ratios) != 3:
        raise _UsageError("--ratios needs three comma-separated numbers")
    manifest = ingest.load_manifest(args.manifest)
    result = ingest.split_corpus(manifest, ratios, seed=args.seed)
    ingest.save_manifest(result, args.output)
    return 0


_COMMANDS = {
    "reverse": _cmd_reverse,
    "convert": _cmd_convert,
    "romanize": _cmd_romanize,
    "lm-train": _cmd_lm_train,
    "lm-score": _cmd_lm_score,
    "eval": _cmd_eval,
    "prepare": _cmd_prepare,
    "split": _cmd_split,
}

_DATA_ERRORS = (
    UnknownLetter,
    UnknownScheme,
    ingest.MalformedXml,
    ingest.UnsupportedSchema,
    ingest.LineCountMismatch,
    ingest.EmptyManifest,
    evaluation.EmptyReference,
    lm.EmptyCorpus,
    FileNotFoundError,
    json.JSONDecodeError,
    UnicodeDecodeError,
    ValueError,
)


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"otkit: error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"otkit: error: {exc}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as exc:
        print(f"otkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

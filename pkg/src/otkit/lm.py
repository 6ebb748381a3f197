"""Word n-gram language model with a character-level backoff for unknown words.

Add-k smoothed word n-grams capture in-domain preferences between competing
readings; out-of-vocabulary words are scored by routing a weighted share of the
UNK probability mass through a character n-gram model, so an unseen inflected
form of a seen stem still scores well above a random string.
"""

from __future__ import annotations

import json
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

BOS = "<s>"
UNK = "<unk>"
_CHAR_BOS = "\x02"
_CHAR_EOS = "\x03"
_KEY_SEP = "\x1f"

FORMAT_VERSION = 1


class EmptyCorpus(ValueError):
    """Raised when training or evaluation input contains no tokens."""


def tokenize(line: str) -> list[str]:
    """NFC-normalize and split on whitespace; punctuation stays attached."""
    return unicodedata.normalize("NFC", line).split()


@dataclass(frozen=True)
class CharNgramModel:
    order: int
    counts: dict[tuple[str, ...], Counter]
    vocab: frozenset[str]
    k: float

    def logprob(self, word: str) -> float:
        chars = [_CHAR_BOS] * (self.order - 1) + list(word) + [_CHAR_EOS]
        total = 0.0
        denom_extra = self.k * (len(self.vocab) + 1)
        for i in range(self.order - 1, len(chars)):
            history = tuple(chars[i - self.order + 1 : i])
            counter = self.counts.get(history)
            seen = sum(counter.values()) if counter else 0
            count = counter.get(chars[i], 0) if counter else 0
            total += math.log((count + self.k) / (seen + denom_extra))
        return total


@dataclass(frozen=True)
class NgramModel:
    order: int
    counts: dict[tuple[str, ...], Counter]
    vocab: frozenset[str]
    k: float
    char_backoff: CharNgramModel
    backoff_weight: float

    def prob(self, history: Sequence[str], word: str) -> float:
        """Add-k probability of an in-vocabulary word (or UNK) given a history."""
        h = tuple(history[-(self.order - 1) :]) if self.order > 1 else ()
        counter = self.counts.get(h)
        seen = sum(counter.values()) if counter else 0
        count = counter.get(word, 0) if counter else 0
        return (count + self.k) / (seen + self.k * (len(self.vocab) + 1))

    def token_logprob(self, history: Sequence[str], token: str) -> float:
        if token in self.vocab:
            return math.log(self.prob(history, token))
        return (
            math.log(self.prob(history, UNK))
            + math.log(self.backoff_weight)
            + self.char_backoff.logprob(token)
        )


def _train_char_model(words: Iterable[str], order: int, k: float) -> CharNgramModel:
    counts: dict[tuple[str, ...], Counter] = {}
    vocab: set[str] = set()
    for word in words:
        chars = [_CHAR_BOS] * (order - 1) + list(word) + [_CHAR_EOS]
        vocab.update(word)
        for i in range(order - 1, len(chars)):
            history = tuple(chars[i - order + 1 : i])
            counts.setdefault(history, Counter())[chars[i]] += 1
    return CharNgramModel(order=order, counts=counts, vocab=frozenset(vocab), k=k)


def train(
    corpus: Iterable[str],
    order: int = 2,
    char_order: int = 3,
    k: float = 0.1,
    backoff_weight: float = 0.5,
) -> NgramModel:
    """Train an add-k n-gram model with sentence-boundary padding."""
    if order < 1 or char_order < 1:
        raise ValueError("model orders must be >= 1")
    if k <= 0:
        raise ValueError("add-k constant must be positive")
    if not 0 < backoff_weight < 1:
        raise ValueError("backoff weight must be in (0, 1)")

    counts: dict[tuple[str, ...], Counter] = {}
    all_tokens: list[str] = []
    for line in corpus:
        tokens = tokenize(line)
        if not tokens:
            continue
        all_tokens.extend(tokens)
        padded = [BOS] * (order - 1) + tokens
        for i in range(order - 1, len(padded)):
            history = tuple(padded[i - order + 1 : i])
            counts.setdefault(history, Counter())[padded[i]] += 1
    if not all_tokens:
        raise EmptyCorpus("no tokens after whitespace tokenization")

    return NgramModel(
        order=order,
        counts=counts,
        vocab=frozenset(all_tokens),
        k=k,
        char_backoff=_train_char_model(all_tokens, char_order, k),
        backoff_weight=backoff_weight,
    )


def score(model: NgramModel, tokens: Sequence[str]) -> float:
    """Log-probability of a token sequence; finite for any input."""
    if not tokens:
        raise ValueError("token sequence must be non-empty")
    history = [BOS] * (model.order - 1)
    total = 0.0
    for token in tokens:
        total += model.token_logprob(history, token)
        history = (history + [token])[-(model.order - 1) :] if model.order > 1 else []
    return total


def perplexity(model: NgramModel, corpus: Iterable[str]) -> float:
    """exp(-mean log P) over all corpus tokens; lower is better."""
    total = 0.0
    n = 0
    for line in corpus:
        tokens = tokenize(line)
        if not tokens:
            continue
        total += score(model, tokens)
        n += len(tokens)
    if n == 0:
        raise EmptyCorpus("no tokens to evaluate")
    return math.exp(-total / n)


@dataclass(frozen=True)
class RescoreConfig:
    """Weight between generation prior (alpha) and LM score (1 - alpha)."""

    alpha: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


def rescore(candidates, model: NgramModel, config: RescoreConfig = RescoreConfig()):
    """Rank candidates by alpha*log(gen) + (1-alpha)*lm, ties broken by surface."""
    if not candidates:
        raise ValueError("candidate set must be non-empty")
    rescored = []
    for cand in candidates:
        gen_log = math.log(cand.gen_score) if cand.gen_score > 0 else -math.inf
        lm_log = score(model, [cand.surface])
        total = config.alpha * gen_log + (1.0 - config.alpha) * lm_log
        rescored.append(replace(cand, lm_score=lm_log, total=total))
    rescored.sort(key=lambda c: (-c.total, c.surface))
    return rescored


def _counts_to_json(counts: dict[tuple[str, ...], Counter]) -> dict:
    return {
        _KEY_SEP.join(history): dict(sorted(counter.items()))
        for history, counter in sorted(counts.items())
    }


def _counts_from_json(data: dict) -> dict[tuple[str, ...], Counter]:
    return {
        tuple(key.split(_KEY_SEP)) if key else (): Counter(value)
        for key, value in data.items()
    }


def save(model: NgramModel, path: Path | str) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "order": model.order,
        "k": model.k,
        "backoff_weight": model.backoff_weight,
        "vocab": sorted(model.vocab),
        "counts": _counts_to_json(model.counts),
        "char_backoff": {
            "order": model.char_backoff.order,
            "k": model.char_backoff.k,
            "vocab": sorted(model.char_backoff.vocab),
            "counts": _counts_to_json(model.char_backoff.counts),
        },
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True), "utf-8"
    )


def load(path: Path | str) -> NgramModel:
    payload = json.loads(Path(path).read_text("utf-8"))
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version}")
    char = payload["char_backoff"]
    return NgramModel(
        order=payload["order"],
        counts=_counts_from_json(payload["counts"]),
        vocab=frozenset(payload["vocab"]),
        k=payload["k"],
        char_backoff=CharNgramModel(
            order=char["order"],
            counts=_counts_from_json(char["counts"]),
            vocab=frozenset(char["vocab"]),
            k=char["k"],
        ),
        backoff_weight=payload["backoff_weight"],
    )

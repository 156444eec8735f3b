"""Alphabets, nonempty words, the cutoff function and word enumeration."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidRange, InvalidWord

Word = tuple[str, ...]


def cutoff(low: int, high: int, value: int) -> int:
    """Clamp ``value`` into ``[low, high]``."""
    if low > high:
        raise InvalidRange(f"empty interval [{low}, {high}]")
    if value < low:
        return low
    if value > high:
        return high
    return value


@dataclass(frozen=True)
class Alphabet:
    """An ordered, nonempty set of symbol names (arbitrary strings)."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet {symbols!r}")
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise ValueError(f"symbols must be nonempty strings, got {s!r}")

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols

    def word(self, text: str | Iterable[str]) -> Word:
        """Build a word, splitting a string into symbols.

        A string is split character by character when every symbol is a
        single character; otherwise it is split on whitespace or commas.
        """
        if isinstance(text, str):
            if all(len(s) == 1 for s in self.symbols) and not re.search(r"[\s,]", text):
                parts: Sequence[str] = list(text)
            else:
                parts = [p for p in re.split(r"[\s,]+", text) if p]
        else:
            parts = list(text)
        return make_word(parts, self)


def make_word(symbols: Iterable[str], alphabet: Alphabet | None = None) -> Word:
    """Validate and freeze a word; empty words are rejected."""
    w = tuple(symbols)
    if not w:
        raise InvalidWord("words must contain at least one symbol")
    if alphabet is not None:
        for s in w:
            if s not in alphabet:
                raise InvalidWord(f"symbol {s!r} is not in the alphabet {alphabet.symbols!r}")
    return w


def enumerate_words(alphabet: Alphabet | Sequence[str], max_len: int) -> Iterator[Word]:
    """Yield every nonempty word up to ``max_len``, shortest first, then lexicographically."""
    symbols = tuple(alphabet)
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    for n in range(1, max_len + 1):
        yield from itertools.product(symbols, repeat=n)


def count_words(size: int, max_len: int) -> int:
    return sum(size**n for n in range(1, max_len + 1))


def format_word(w: Sequence[str]) -> str:
    """Inverse of :meth:`Alphabet.word` for display purposes."""
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)

"""Two-generated words: bracketed products of the terms ``f`` and ``g`` (= ef).

Concrete syntax::

    word := "f" | "g" | "(" word " " word ")"

so ``((f g) f)`` is the product ``(f . ef) . f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Iterator, Optional

if TYPE_CHECKING:
    from .groupoid import CayleyTable, GeneratorContext

LETTERS = ("f", "g")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class Word:
    """A leaf letter or an ordered pair of sub-words."""

    letter: Optional[str] = None
    left: Optional["Word"] = None
    right: Optional["Word"] = None

    def __post_init__(self):
        if self.letter is None:
            if self.left is None or self.right is None:
                raise ValueError("a compound word needs both factors")
        elif self.letter not in LETTERS or self.left is not None or self.right is not None:
            raise ValueError(f"bad leaf {self.letter!r}")

    @classmethod
    def leaf(cls, letter: str) -> "Word":
        return cls(letter=letter)

    @classmethod
    def pair(cls, left: "Word", right: "Word") -> "Word":
        return cls(left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.letter is not None

    def __len__(self) -> int:
        return self.length

    @property
    def length(self) -> int:
        if self.letter is not None:
            return 1
        return self.left.length + self.right.length

    def letters(self) -> str:
        if self.letter is not None:
            return self.letter
        return self.left.letters() + self.right.letters()

    def render(self) -> str:
        if self.letter is not None:
            return self.letter
        return f"({self.left.render()} {self.right.render()})"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Word({self.render()!r})"

    def subwords(self) -> Iterator["Word"]:
        """Post-order traversal, factors before their product."""
        if self.letter is None:
            yield from self.left.subwords()
            yield from self.right.subwords()
        yield self


F = Word.leaf("f")
G = Word.leaf("g")


def parse(text: str) -> Word:
    pos = 0

    def fail(msg: str, at: int):
        raise WordSyntaxError(msg, text, at)

    def word() -> Word:
        nonlocal pos
        if pos >= len(text):
            fail("unexpected end of input", pos)
        ch = text[pos]
        if ch in LETTERS:
            pos += 1
            return Word.leaf(ch)
        if ch != "(":
            fail(f"unexpected character {ch!r}", pos)
        pos += 1
        left = word()
        if pos >= len(text):
            fail("unexpected end of input", pos)
        if text[pos] != " ":
            fail("expected a single space", pos)
        pos += 1
        right = word()
        if pos >= len(text):
            fail("unexpected end of input", pos)
        if text[pos] != ")":
            fail("expected ')'", pos)
        pos += 1
        return Word.pair(left, right)

    w = word()
    if pos != len(text):
        fail("trailing input", pos)
    return w


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    # Bracketings as nested tuples of None leaves; split point ascending.
    if n == 1:
        return (None,)
    out = []
    for i in range(1, n):
        for a in _shapes(i):
            for b in _shapes(n - i):
                out.append((a, b))
    return tuple(out)


def _fill(shape, letters: Iterator[str]) -> Word:
    if shape is None:
        return Word.leaf(next(letters))
    left = _fill(shape[0], letters)
    return Word.pair(left, _fill(shape[1], letters))


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


def enumerate_words(n: int) -> list[Word]:
    """All ``2**n * catalan(n - 1)`` words of length ``n``.

    Bracketings form the outer loop (left factor size ascending), letter
    sequences the inner one, in binary order with ``f < g``.
    """
    if n < 1:
        raise ValueError("word length must be at least 1")
    return [
        _fill(shape, iter(seq))
        for shape in _shapes(n)
        for seq in product(LETTERS, repeat=n)
    ]


def evaluate(w: Word, t: "CayleyTable", ctx: "GeneratorContext") -> int:
    n = t.order
    for x in (ctx.f, ctx.g):
        if not 0 <= x < n:
            raise IndexError(f"generator index {x} out of range for order {n}")
    rows = t.product

    def go(node: Word) -> int:
        if node.letter == "f":
            return ctx.f
        if node.letter == "g":
            return ctx.g
        return rows[go(node.left)][go(node.right)]

    return go(w)

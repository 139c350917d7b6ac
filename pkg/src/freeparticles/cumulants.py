"""Moment <-> cumulant transforms over non-crossing and over all set partitions.

A moment functional is any callable taking a tuple of hashable handles (test
functions, operator labels, ...) and returning an exact ``Fraction``. The
transforms never assume multilinearity; they only look at the values on words.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .combinat import SetPartition, enumerate_nc_partitions, enumerate_set_partitions
from .errors import ResourceLimitError

WORD_CAP = 8

Word = tuple[Hashable, ...]
Evaluator = Callable[[Word], Fraction]


class MomentFunctional:
    """Caching wrapper around a word evaluator."""

    def __init__(self, evaluate: Evaluator, cap: int = WORD_CAP):
        self._evaluate = evaluate
        self.cap = cap
        self._cache: dict[Word, Fraction] = {}

    def __call__(self, word: Sequence[Hashable]) -> Fraction:
        word = tuple(word)
        _check_word(word, self.cap)
        try:
            return self._cache[word]
        except KeyError:
            val = self._cache[word] = Fraction(self._evaluate(word))
            return val


def _check_word(word: Word, cap: int) -> None:
    if not word:
        raise ValueError("words must be nonempty")
    if len(word) > cap:
        raise ResourceLimitError(f"word length {len(word)} exceeds the cap {cap}")


def restrict(word: Word, block: Sequence[int]) -> Word:
    """Sub-word on a block of 1-based positions, in increasing position order."""
    return tuple(word[i - 1] for i in block)


def partition_product(values: Evaluator, p: SetPartition, word: Word) -> Fraction:
    out = Fraction(1)
    for block in p.blocks:
        out *= values(restrict(word, block))
        if out == 0:
            break
    return out


def free_cumulant(mf: Evaluator, word: Sequence[Hashable], cap: int = WORD_CAP,
                  memo: dict | None = None) -> Fraction:
    """Free cumulant R^(k) of the word, by recursion over non-crossing partitions.

    ``memo`` may be shared between calls that use the same ``mf``.
    """
    word = tuple(word)
    _check_word(word, cap)
    if memo is None:
        memo = {}

    def rc(w: Word) -> Fraction:
        try:
            return memo[w]
        except KeyError:
            pass
        val = Fraction(mf(w))
        for p in enumerate_nc_partitions(len(w)):
            if len(p) == 1:
                continue
            val -= partition_product(rc, p, w)
        memo[w] = val
        return val

    return rc(word)


def moments_from_free_cumulants(rc: Evaluator, word: Sequence[Hashable], cap: int = WORD_CAP) -> Fraction:
    word = tuple(word)
    _check_word(word, cap)
    return sum((partition_product(rc, p, word) for p in enumerate_nc_partitions(len(word))), Fraction(0))


def classical_moment_from_cumulants(cc: Evaluator, word: Sequence[Hashable], cap: int = WORD_CAP) -> Fraction:
    word = tuple(word)
    _check_word(word, cap)
    return sum((partition_product(cc, p, word) for p in enumerate_set_partitions(len(word))), Fraction(0))


def classical_cumulant(mf: Evaluator, word: Sequence[Hashable], cap: int = WORD_CAP,
                       memo: dict | None = None) -> Fraction:
    """Classical cumulant, the inverse of ``classical_moment_from_cumulants``."""
    word = tuple(word)
    _check_word(word, cap)
    if memo is None:
        memo = {}

    def cc(w: Word) -> Fraction:
        if w in memo:
            return memo[w]
        val = Fraction(mf(w))
        for p in enumerate_set_partitions(len(w)):
            if len(p) > 1:
                val -= partition_product(cc, p, w)
        memo[w] = val
        return val

    return cc(word)


def centered_cumulant(mf: Evaluator, word: Sequence[Hashable], cap: int = WORD_CAP,
                      memo: dict | None = None) -> Fraction:
    """Free cumulant of the centered variables a - mf(a).

    Centering kills the first cumulant and leaves all higher ones unchanged.
    """
    word = tuple(word)
    _check_word(word, cap)
    if len(word) == 1:
        return Fraction(0)
    return free_cumulant(mf, word, cap, memo)

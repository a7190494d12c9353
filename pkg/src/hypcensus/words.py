"""Words in surface and free groups.

A word is a tuple of nonzero signed integers: letter +k is the k-th
generator (1-indexed), -k its inverse.  Kernels use a dense letter id
instead: id = 2*(k-1) for +k and 2*(k-1)+1 for -k, so that the natural id
order is the shortlex letter order a < a^-1 < b < b^-1 < ...
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Word = Tuple[int, ...]

_POS = "abcdefgh"
_NEG = "ABCDEFGH"


def letter_to_id(letter: int) -> int:
    k = abs(letter) - 1
    return 2 * k + (0 if letter > 0 else 1)


def id_to_letter(lid: int) -> int:
    k = lid // 2 + 1
    return k if lid % 2 == 0 else -k


def letter_key(letter: int) -> int:
    return letter_to_id(letter)


def word_to_string(word: Iterable[int]) -> str:
    out = []
    for let in word:
        k = abs(let) - 1
        out.append(_POS[k] if let > 0 else _NEG[k])
    return "".join(out) or "1"


def word_from_string(s: str) -> Word:
    if s == "1":
        return ()
    out = []
    for ch in s:
        if ch in _POS:
            out.append(_POS.index(ch) + 1)
        elif ch in _NEG:
            out.append(-(_NEG.index(ch) + 1))
        else:
            raise ValueError(f"bad letter {ch!r} in word {s!r}")
    return tuple(out)


def reduce_word(letters: Sequence[int]) -> Word:
    """Free reduction: cancel adjacent x x^-1 pairs."""
    out: list[int] = []
    for let in letters:
        if let == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -let:
            out.pop()
        else:
            out.append(let)
    return tuple(out)


def concat(*words: Sequence[int]) -> Word:
    merged: list[int] = []
    for w in words:
        merged.extend(w)
    return reduce_word(merged)


def inverse_word(word: Sequence[int]) -> Word:
    return tuple(-let for let in reversed(word))


def power(word: Sequence[int], n: int) -> Word:
    if n < 0:
        return power(inverse_word(word), -n)
    return concat(*([tuple(word)] * n)) if n else ()


def cyclic_reduce(word: Sequence[int]) -> Tuple[Word, Word]:
    """Return (core, conj) with word = conj * core * conj^-1 freely."""
    w = list(reduce_word(word))
    pre: list[int] = []
    while len(w) >= 2 and w[0] == -w[-1]:
        pre.append(w[0])
        w = w[1:-1]
    return tuple(w), tuple(pre)


def _lex_less(u: Sequence[int], v: Sequence[int]) -> bool:
    for a, b in zip(u, v):
        ka, kb = letter_key(a), letter_key(b)
        if ka != kb:
            return ka < kb
    return len(u) < len(v)


def canonical_class(word: Sequence[int]) -> Word:
    """Canonical name of the conjugacy class of an unoriented loop.

    Cyclically reduce, then take the shortlex-least word over all
    rotations of the core and of its inverse.
    """
    core, _ = cyclic_reduce(word)
    n = len(core)
    if n == 0:
        return ()
    best = None
    for base in (core, inverse_word(core)):
        doubled = base + base
        for i in range(n):
            cand = doubled[i:i + n]
            if best is None or _lex_less(cand, best):
                best = cand
    return tuple(best)


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    w = tuple(word)
    if w != reduce_word(w):
        return False
    return not (len(w) >= 2 and w[0] == -w[-1])


def is_primitive(word: Sequence[int]) -> bool:
    """False iff the cyclic word is a proper power."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        return False
    for p in range(1, n):
        if n % p == 0 and w == w[p:] + w[:p]:
            return False
    return True


def rotations(word: Sequence[int]):
    w = tuple(word)
    for i in range(len(w)):
        yield w[i:] + w[:i]


def exponent_sum(word: Sequence[int], gen_index: int) -> int:
    """Signed count of occurrences of generator `gen_index` (0-based)."""
    k = gen_index + 1
    return sum(1 if let == k else -1 if let == -k else 0 for let in word)

"""Combinatorics on words: periods, primitivity, factors and letter counts."""

from __future__ import annotations

import re
from math import gcd

_ATOM_RE = re.compile(r"[A-Za-z0-9_]+\Z")

# Words encode to one char per letter so factor searches can run on str.find.
# The NUL char stands for letters unknown to the encoding alphabet; it never
# occurs in an encoded pattern, so it can never produce a false match against
# a pattern over the alphabet.
_UNKNOWN = "\x00"


class Alphabet:
    """Finite ordered set of letter atoms over [A-Za-z0-9_].

    Letters are tokens, not single characters: letters of derived alphabets
    abbreviate whole words, and multi-symbol atoms keep that unambiguous.
    """

    __slots__ = ("letters", "index", "_chars")

    def __init__(self, letters=()):
        letters = tuple(letters)
        seen = set()
        for tok in letters:
            if not isinstance(tok, str) or not _ATOM_RE.match(tok):
                raise ValueError(f"invalid letter atom {tok!r}")
            if tok in seen:
                raise ValueError(f"duplicate letter {tok!r}")
            seen.add(tok)
        self.letters = letters
        self.index = {tok: i for i, tok in enumerate(letters)}
        self._chars = {tok: chr(0x100 + i) for i, tok in enumerate(letters)}

    def encode(self, letters) -> str:
        chars = self._chars
        return "".join([chars.get(x, _UNKNOWN) for x in letters])

    def word(self, spec=()) -> "Word":
        """Build a word; a str is split on whitespace into atoms."""
        if isinstance(spec, str):
            spec = spec.split()
        return Word(self, spec)

    def __contains__(self, tok):
        return tok in self.index

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Alphabet):
            return NotImplemented
        if isinstance(other, BlockAlphabet) != isinstance(self, BlockAlphabet):
            return False
        return self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({' '.join(self.letters)})"


class Word:
    """Immutable sequence of letters over a fixed alphabet."""

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters=()):
        if isinstance(letters, Word):
            letters = letters.letters
        letters = tuple(letters)
        index = alphabet.index
        for tok in letters:
            if tok not in index:
                raise ValueError(f"letter {tok!r} not in alphabet")
        self.alphabet = alphabet
        self.letters = letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.letters[i])
        return self.letters[i]

    def __add__(self, other):
        if isinstance(other, Word):
            other = other.letters
        return Word(self.alphabet, self.letters + tuple(other))

    def __mul__(self, k: int):
        return Word(self.alphabet, self.letters * k)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters and self.alphabet == other.alphabet

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"<{' '.join(self.letters) or 'ε'}>"

    def text(self) -> str:
        return " ".join(self.letters)

    def is_empty(self) -> bool:
        return not self.letters


class ParikhVector:
    """Letter-count vector of a word; compared componentwise."""

    __slots__ = ("alphabet", "counts")

    def __init__(self, alphabet: Alphabet, counts=None):
        self.alphabet = alphabet
        base = {a: 0 for a in alphabet.letters}
        if counts:
            for a, k in dict(counts).items():
                if a not in base:
                    raise ValueError(f"letter {a!r} not in alphabet")
                base[a] = int(k)
        self.counts = base

    def __getitem__(self, a):
        return self.counts[a]

    def __add__(self, other):
        merged = {a: self.counts[a] + other.counts[a] for a in self.counts}
        return ParikhVector(self.alphabet, merged)

    def __eq__(self, other):
        if not isinstance(other, ParikhVector):
            return NotImplemented
        return self.counts == other.counts

    def __le__(self, other):
        return all(self.counts[a] <= other.counts[a] for a in self.counts)

    def __lt__(self, other):
        return self <= other and self.counts != other.counts

    def total(self) -> int:
        return sum(self.counts.values())

    def __repr__(self):
        inner = ", ".join(f"{a}:{k}" for a, k in self.counts.items())
        return f"Parikh({inner})"


class WeightFunction:
    """Strictly positive letter weights, extended additively to words."""

    __slots__ = ("alphabet", "weights")

    def __init__(self, alphabet: Alphabet, weights):
        weights = dict(weights)
        for a in alphabet.letters:
            w = weights.get(a)
            if not isinstance(w, int) or w <= 0:
                raise ValueError(f"weight of {a!r} must be a positive integer")
        self.alphabet = alphabet
        self.weights = {a: weights[a] for a in alphabet.letters}

    def __call__(self, word) -> int:
        weights = self.weights
        letters = word.letters if isinstance(word, Word) else word
        return sum(weights[a] for a in letters)


def parikh(w: Word) -> ParikhVector:
    counts = {}
    for a in w.letters:
        counts[a] = counts.get(a, 0) + 1
    return ParikhVector(w.alphabet, counts)


def weight(w: Word, f: WeightFunction) -> int:
    return f(w)


def border_array(letters) -> list[int]:
    """Failure function: b[i] = length of the longest proper border of the
    prefix ending at i.  Linear time."""
    n = len(letters)
    b = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and letters[k] != letters[i]:
            k = b[k - 1]
        if letters[k] == letters[i]:
            k += 1
        b[i] = k
    return b


def smallest_period(w) -> int:
    """Least p >= 1 with w[i] == w[i+p] throughout; p = |w| if none smaller.

    Computed from the border array: the smallest period is the length minus
    the longest border.
    """
    letters = w.letters if isinstance(w, Word) else tuple(w)
    n = len(letters)
    if n == 0:
        raise ValueError("empty word has no period")
    return n - border_array(letters)[n - 1]


def is_period(w, p: int) -> bool:
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if p < 1:
        raise ValueError("period must be >= 1")
    return all(letters[i] == letters[i + p] for i in range(len(letters) - p))


def is_primitive(u: Word) -> bool:
    """True iff u occurs in u*u only at the two trivial positions."""
    n = len(u)
    if n == 0:
        raise ValueError("empty word has no primitivity")
    s = u.alphabet.encode(u.letters)
    return (s + s).find(s, 1) == n


def is_prefix(u: Word, w: Word) -> bool:
    return w.letters[: len(u)] == u.letters


def is_suffix(u: Word, w: Word) -> bool:
    return len(u) <= len(w) and (len(u) == 0 or w.letters[-len(u):] == u.letters)


def is_factor(u: Word, w: Word) -> bool:
    if len(u) == 0:
        return True
    text = w.alphabet.encode(w.letters)
    pat = w.alphabet.encode(u.letters)
    return text.find(pat) >= 0


def is_subword(u: Word, w: Word) -> bool:
    """Scattered-subsequence test."""
    it = iter(w.letters)
    return all(a in it for a in u.letters)


def occurrences(u, w) -> list[int]:
    """All start positions of u as a factor of w (overlaps included)."""
    u_letters = u.letters if isinstance(u, Word) else tuple(u)
    w_letters = w.letters if isinstance(w, Word) else tuple(w)
    if not u_letters:
        return list(range(len(w_letters) + 1))
    alph = w.alphabet if isinstance(w, Word) else None
    out = []
    if alph is not None:
        text = alph.encode(w_letters)
        pat = alph.encode(u_letters)
        i = text.find(pat)
        while i >= 0:
            out.append(i)
            i = text.find(pat, i + 1)
    else:
        m = len(u_letters)
        for i in range(len(w_letters) - m + 1):
            if w_letters[i : i + m] == u_letters:
                out.append(i)
    return out


def factors_of_power_membership(w: Word, n: int) -> bool:
    """Is w a factor of some power of a nonempty word of length <= n?

    Equivalent to smallest_period(w) <= n; the empty word belongs by
    convention (it is a factor of every power).
    """
    if n < 1:
        raise ValueError("power-factor membership needs n >= 1")
    if len(w) == 0:
        return True
    return smallest_period(w) <= n


def fine_wilf_check(w: Word, p: int, q: int) -> bool:
    """One instance of the two-periods interaction law.

    If p and q are periods of w and |w| >= p + q - gcd(p, q), then gcd(p, q)
    must be a period as well; returns whether this implication holds, so it
    is True on every input and exists as a property-test oracle.
    """
    if p < 1 or q < 1:
        raise ValueError("periods must be >= 1")
    letters = w.letters
    g = gcd(p, q)
    premise = (
        is_period(letters, p)
        and is_period(letters, q)
        and len(letters) >= p + q - g
    )
    return (not premise) or is_period(letters, g)


class BlockAlphabet(Alphabet):
    """Alphabet whose letters abbreviate words over a base alphabet.

    Every block ends with the same separator letter and is separator-free
    before it, so the set of blocks is a prefix code and decoding is
    unambiguous.
    """

    __slots__ = ("base", "sep", "expansions", "_by_expansion")

    def __init__(self, base: Alphabet, sep: str, blocks, names=None):
        blocks = [tuple(b.letters if isinstance(b, Word) else b) for b in blocks]
        if sep not in base.index:
            raise ValueError(f"separator {sep!r} not in base alphabet")
        for b in blocks:
            if not b or b[-1] != sep:
                raise ValueError(f"block {b!r} does not end with separator {sep!r}")
            if any(x == sep for x in b[:-1]):
                raise ValueError(f"block {b!r} has an interior separator")
            for x in b:
                if x not in base.index:
                    raise ValueError(f"block letter {x!r} not in base alphabet")
        if len(set(blocks)) != len(blocks):
            raise ValueError("duplicate blocks")
        if names is None:
            names = tuple(f"k{i}" for i in range(len(blocks)))
        else:
            names = tuple(names)
            if len(names) != len(blocks):
                raise ValueError("names and blocks differ in length")
        super().__init__(names)
        self.base = base
        self.sep = sep
        self.expansions = {name: blk for name, blk in zip(names, blocks)}
        self._by_expansion = {blk: name for name, blk in zip(names, blocks)}

    def block(self, name: str) -> tuple:
        return self.expansions[name]

    def letter_for(self, block) -> str | None:
        if isinstance(block, Word):
            block = block.letters
        return self._by_expansion.get(tuple(block))

    def expand(self, letters) -> tuple:
        """Flatten a sequence of block letters into base letters."""
        exp = self.expansions
        out = []
        for name in letters:
            out.extend(exp[name])
        return tuple(out)

    def expand_word(self, kword: Word) -> Word:
        return Word(self.base, self.expand(kword.letters))

    def decode(self, base_letters) -> tuple | None:
        """Full decode of a base-letter sequence, or None if not in the code."""
        if isinstance(base_letters, Word):
            base_letters = base_letters.letters
        out = []
        start = 0
        n = len(base_letters)
        for i, x in enumerate(base_letters):
            if x == self.sep:
                name = self._by_expansion.get(tuple(base_letters[start : i + 1]))
                if name is None:
                    return None
                out.append(name)
                start = i + 1
        if start != n:
            return None
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, BlockAlphabet):
            return NotImplemented if not isinstance(other, Alphabet) else False
        return (
            self.letters == other.letters
            and self.sep == other.sep
            and self.base == other.base
            and self.expansions == other.expansions
        )

    def __hash__(self):
        return hash((self.letters, self.sep, self.base))

    def __repr__(self):
        inner = ", ".join(f"{n}={' '.join(b)}" for n, b in self.expansions.items())
        return f"BlockAlphabet({inner})"


def expand_letters_to(alphabet: Alphabet, letters, target: Alphabet) -> tuple:
    """Expand block letters level by level until they live in `target`.

    Letters already interpretable in `target` are passed through, which
    covers systems over a sub-alphabet of the target.
    """
    letters = tuple(letters)
    while isinstance(alphabet, BlockAlphabet) and alphabet != target:
        if all(x in target.index for x in letters):
            break
        letters = alphabet.expand(letters)
        alphabet = alphabet.base
    return letters

import random
from itertools import product

import pytest

from parikhcr import (
    Alphabet,
    BlockAlphabet,
    ParikhVector,
    WeightFunction,
    factors_of_power_membership,
    fine_wilf_check,
    is_factor,
    is_prefix,
    is_primitive,
    is_subword,
    is_suffix,
    parikh,
    smallest_period,
    weight,
)
from parikhcr.words import is_period

AB = Alphabet(["a", "b"])


def w(text):
    return AB.word(" ".join(text))


def all_words(max_len, letters="ab"):
    for n in range(max_len + 1):
        for combo in product(letters, repeat=n):
            yield AB.word(combo)


def brute_smallest_period(word):
    n = len(word)
    for p in range(1, n + 1):
        if all(word.letters[i] == word.letters[i + p] for i in range(n - p)):
            return p


class TestPeriods:
    def test_examples(self):
        assert smallest_period(w("abab")) == 2
        assert smallest_period(w("aaaaa")) == 1
        # p = 1, 2 both fail for aab, so the trivial period remains
        assert smallest_period(w("aab")) == 3

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            smallest_period(AB.word(""))

    def test_range_and_validity_exhaustive(self):
        for word in all_words(8):
            if len(word) == 0:
                continue
            p = smallest_period(word)
            assert 1 <= p <= len(word)
            assert is_period(word, p)
            assert p == brute_smallest_period(word)


class TestPrimitivity:
    def test_examples(self):
        assert is_primitive(w("ab"))
        assert not is_primitive(w("abab"))
        assert is_primitive(w("aab"))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            is_primitive(AB.word(""))

    def test_against_power_definition(self):
        # u primitive iff u = v^i forces i = 1
        for word in all_words(8):
            n = len(word)
            if n == 0:
                continue
            is_power = any(
                n % d == 0 and word.letters == word.letters[:d] * (n // d)
                for d in range(1, n)
            )
            assert is_primitive(word) == (not is_power)

    def test_against_period_criterion(self):
        for word in all_words(8):
            n = len(word)
            if n == 0:
                continue
            p = smallest_period(word)
            assert is_primitive(word) == (p == n or n % p != 0)


class TestFineWilf:
    def test_examples(self):
        five_a = AB.word("a a a a a")
        assert fine_wilf_check(five_a, 2, 3)
        assert fine_wilf_check(w("abaab"), 2, 3)

    def test_invalid_periods(self):
        with pytest.raises(ValueError):
            fine_wilf_check(w("ab"), 0, 2)

    def test_holds_on_random_triples(self):
        rng = random.Random(99)
        letters = AB.letters
        for _ in range(100_000):
            n = rng.randrange(1, 21)
            word = AB.word(tuple(rng.choice(letters) for _ in range(n)))
            p = rng.randrange(1, n + 3)
            q = rng.randrange(1, n + 3)
            assert fine_wilf_check(word, p, q)


class TestCountsAndWeights:
    def test_parikh_additive(self):
        rng = random.Random(5)
        for _ in range(200):
            u = AB.word(tuple(rng.choice("ab") for _ in range(rng.randrange(8))))
            v = AB.word(tuple(rng.choice("ab") for _ in range(rng.randrange(8))))
            assert parikh(u + v) == parikh(u) + parikh(v)

    def test_weight_additive_and_positive(self):
        f = WeightFunction(AB, {"a": 3, "b": 5})
        u, v = w("aab"), w("ba")
        assert weight(u + v, f) == weight(u, f) + weight(v, f) == 11 + 8

    def test_weight_requires_positive(self):
        with pytest.raises(ValueError):
            WeightFunction(AB, {"a": 0, "b": 1})

    def test_parikh_order(self):
        small = ParikhVector(AB, {"a": 1, "b": 2})
        big = ParikhVector(AB, {"a": 1, "b": 3})
        assert small <= big and small < big and not big <= small


class TestFactorRelations:
    def test_basics(self):
        assert is_prefix(w("ab"), w("abb"))
        assert is_suffix(w("bb"), w("abb"))
        assert is_factor(w("ba"), w("abab"))
        assert not is_factor(w("bb"), w("abab"))
        assert is_subword(AB.word("a b"), w("aab"))

    def test_subword_example_three_letters(self):
        abc = Alphabet(["a", "b", "c"])
        assert is_subword(abc.word("a c"), abc.word("a b c"))

    def test_empty_cases(self):
        assert is_prefix(AB.word(""), w("ab"))
        assert is_factor(AB.word(""), AB.word(""))
        assert is_subword(AB.word(""), w("a"))


class TestPowerFactorMembership:
    def test_examples(self):
        assert factors_of_power_membership(w("ababa"), 2)
        assert not factors_of_power_membership(w("aab"), 2)
        assert factors_of_power_membership(AB.word(""), 1)

    def test_needs_positive_bound(self):
        with pytest.raises(ValueError):
            factors_of_power_membership(w("ab"), 0)

    def test_against_brute_force(self):
        n = 2
        bases = [
            AB.word(combo)
            for length in (1, 2)
            for combo in product("ab", repeat=length)
        ]
        for word in all_words(10):
            if len(word) == 0:
                continue
            reps = len(word) + n
            brute = any(
                is_factor(word, base * (reps // len(base) + 2)) for base in bases
            )
            assert factors_of_power_membership(word, n) == brute


class TestBlockAlphabet:
    def test_expand_decode_roundtrip(self):
        base = Alphabet(["a", "c"])
        blocks = BlockAlphabet(base, "c", [("c",), ("a", "c")])
        assert blocks.letters == ("k0", "k1")
        word = ("k1", "k0", "k1")
        flat = blocks.expand(word)
        assert flat == ("a", "c", "c", "a", "c")
        assert blocks.decode(flat) == word
        assert blocks.decode(("a", "a", "c")) is None
        assert blocks.decode(("c", "a")) is None

    def test_validation(self):
        base = Alphabet(["a", "c"])
        with pytest.raises(ValueError):
            BlockAlphabet(base, "c", [("a",)])  # does not end with separator
        with pytest.raises(ValueError):
            BlockAlphabet(base, "c", [("c", "c")])  # interior separator
        with pytest.raises(ValueError):
            BlockAlphabet(base, "x", [("x",)])  # separator not in base

    def test_atom_validation(self):
        with pytest.raises(ValueError):
            Alphabet(["a", "b!"])
        with pytest.raises(ValueError):
            Alphabet(["a", "a"])

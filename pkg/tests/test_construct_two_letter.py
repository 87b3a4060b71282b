import random
from itertools import product

import pytest

from parikhcr import (
    LEFTMOST_LONGEST,
    LEFTMOST_SHORTEST,
    RIGHTMOST,
    Alphabet,
    FiniteMonoid,
    Homomorphism,
    Word,
    confluence_sampling,
    construct_two_letter,
    group_exponent,
    group_normal_forms,
    normal_form,
)
from parikhcr.rewrite import instance_parikh_reducing

AB = Alphabet(["a", "b"])


def hom_z2():
    return Homomorphism(AB, FiniteMonoid.cyclic(2), {"a": 1, "b": 0})


def hom_s3():
    # a transposition and a 3-cycle generate the full symmetric group
    s3 = FiniteMonoid.symmetric3()
    perms = {}
    import itertools

    for i, p in enumerate(sorted(itertools.permutations(range(3)))):
        perms[p] = i
    return Homomorphism(AB, s3, {"a": perms[(1, 0, 2)], "b": perms[(1, 2, 0)]})


class TestParameters:
    def test_z2(self, two_letter_z2_artifact):
        node = two_letter_z2_artifact.root
        assert node.params["n"] == 2
        assert node.params["t"] == 4 * 13 == 52
        assert node.params["t0"] == (52 + 4 + 3) * (4 + 1) == 295
        assert node.blocks.expansions == {"k0": ("b",), "k1": ("a", "b")}
        r_rules = [(r.lhs.letters, r.rhs.letters) for r in node.r_system.rules]
        assert r_rules == [(("a", "a"), ())]

    def test_z2_marker_count(self, two_letter_z2_artifact):
        node = two_letter_z2_artifact.root
        markers = node.t_system.parts[1].markers
        assert markers.window == 12 and markers.period_bound == 4
        assert markers.count() == len(markers.enumerate_all()) == 2037
        assert node.params["t_max"] == (1 << 2037) * (295 + 52) - 52

    def test_s3(self):
        art = construct_two_letter(hom_s3())
        node = art.root
        assert node.params["n"] == 6
        assert node.params["t"] == 36 * 25 == 900
        assert len(node.blocks) == 6

    def test_exponent(self):
        assert group_exponent(FiniteMonoid.symmetric3()) == 6
        assert group_exponent(FiniteMonoid.cyclic(12)) == 12

    def test_wrong_alphabet_size(self):
        A3 = Alphabet(["a", "b", "c"])
        h = Homomorphism(A3, FiniteMonoid.cyclic(2), {"a": 1, "b": 0, "c": 0})
        with pytest.raises(ValueError, match="two letters"):
            construct_two_letter(h)

    def test_non_group_image_rejected(self):
        h = Homomorphism(AB, FiniteMonoid.monogenic(2, 2), {"a": 1, "b": 0})
        with pytest.raises(ValueError, match="group"):
            construct_two_letter(h)


class TestNormalFormTable:
    def test_z2_entries(self, two_letter_z2_artifact):
        node = two_letter_z2_artifact.root
        table = node.t_system.parts[1].rhs.table
        blocks = node.blocks
        # identity: single slot b, so b^25 as a plain word
        assert blocks.expand(table[0]) == ("b",) * 25
        # generator: slot ab, b^12 a b^13
        assert blocks.expand(table[1]) == ("b",) * 12 + ("a",) + ("b",) * 13

    def test_z2_exhaustive_slot_minimality(self, two_letter_z2_artifact):
        """Independent oracle: enumerate every slot layout directly."""
        node = two_letter_z2_artifact.root
        blocks = node.blocks
        table = node.t_system.parts[1].rhs.table
        h = hom_z2()
        n = 2
        options = [("b",) * k for k in (1, 2)] + [
            ("a",) + ("b",) * (k - 1) + ("b",) for k in (1, 2)
        ]
        best = {}
        for combo in product(range(len(options)), repeat=n - 1):
            letters = ("b",) * 12
            for oi in combo:
                word_opt = options[oi]
                letters = letters + word_opt + ("b",) * 12
            g = h.evaluate(letters)
            acount = letters.count("a")
            key = (acount, combo)
            if g not in best or key < best[g][0]:
                best[g] = (key, letters)
        for g, (_, letters) in best.items():
            assert blocks.expand(table[g]) == letters

    def test_entry_images(self):
        for hom in (hom_z2(), hom_s3()):
            cohom, _ = hom.image_monoid()
            n = group_exponent(cohom.codomain)
            art = construct_two_letter(hom)
            blocks = art.root.blocks
            table = art.root.t_system.parts[1].rhs.table
            assert set(table) == set(range(cohom.codomain.size))
            for g, entry in table.items():
                assert cohom.evaluate(blocks.expand(entry)) == g

    def test_length_window(self):
        for hom in (hom_z2(), hom_s3()):
            art = construct_two_letter(hom)
            node = art.root
            n = node.params["n"]
            t = node.params["t"]
            for entry in node.t_system.parts[1].rhs.table.values():
                assert t - 7 * n * n < len(entry) < t - 6 * n * n

    def test_only_minimal_markers_inside(self, two_letter_z2_artifact):
        node = two_letter_z2_artifact.root
        markers = node.t_system.parts[1].markers
        table = node.t_system.parts[1].rhs.table
        allowed = ("k1",) + ("k0",) * 11
        for entry in table.values():
            for q in markers.positions(entry):
                assert entry[q : q + 12] == allowed

    def test_trivial_group(self):
        h = Homomorphism(AB, FiniteMonoid.cyclic(1), {"a": 0, "b": 0})
        art = construct_two_letter(h)
        node = art.root
        assert node.params["n"] == 1
        table = node.t_system.parts[1].rhs.table
        assert list(table.values()) == [("k0",) * 3]
        w = AB.word("a b a b")
        nf = normal_form(art.system, w)
        assert h.evaluate(w) == h.evaluate(nf)


class TestSampledProperties:
    def test_instances_invariant_and_reducing(self, two_letter_z2_artifact):
        h = hom_z2()
        rng = random.Random(91)
        system = two_letter_z2_artifact.system
        count = 0
        for lhs, rhs in system.sample_instances(rng, 150):
            assert instance_parikh_reducing(lhs, rhs)
            assert h.evaluate(lhs) == h.evaluate(rhs)
            count += 1
        assert count >= 100

    def test_s3_instances_invariant(self):
        hom = hom_s3()
        cohom, _ = hom.image_monoid()
        art = construct_two_letter(hom)
        rng = random.Random(92)
        for lhs, rhs in art.system.sample_instances(rng, 40):
            assert instance_parikh_reducing(lhs, rhs)
            assert cohom.evaluate(lhs) == cohom.evaluate(rhs)

    def test_marker_instance_convergence(self, two_letter_z2_artifact):
        node = two_letter_z2_artifact.root
        T = node.t_system
        rng = random.Random(93)
        for lhs, rhs in T.parts[1].sample_instances(rng, 10):
            w = Word(node.blocks, lhs)
            for st in (LEFTMOST_SHORTEST, LEFTMOST_LONGEST, RIGHTMOST):
                assert normal_form(T, w, st).letters == rhs

    def test_confluence_sampling(self, two_letter_z2_artifact):
        A = two_letter_z2_artifact.system.alphabet

        def sampler(rng):
            return _structured_ab_word(A, rng, 200)

        ok, ce = confluence_sampling(
            two_letter_z2_artifact.system,
            sampler,
            trials=40,
            strategies=[LEFTMOST_SHORTEST, LEFTMOST_LONGEST, RIGHTMOST],
        )
        assert ok, f"diverged on {ce[0].text()!r}"


def _structured_ab_word(alphabet, rng, max_len):
    letters = []
    target = rng.randrange(max_len + 1)
    while len(letters) < target:
        kind = rng.randrange(5)
        if kind == 0:
            letters.extend(["b"] * rng.randrange(1, 60))
        elif kind == 1:
            letters.extend(["a", "b"] * rng.randrange(1, 30))
        elif kind == 2:
            letters.extend(["a"] * rng.randrange(1, 5))
        elif kind == 3:
            letters.extend(["a", "b"] + ["b"] * 11)
        else:
            letters.extend(rng.choice("ab") for _ in range(rng.randrange(1, 20)))
    return Word(alphabet, tuple(letters[:max_len]))

import random
from itertools import permutations

import pytest

from parikhcr import Alphabet, FiniteMonoid, Homomorphism, format_mon, parse_mon
from parikhcr.monoids import MonFormatError, order_lcm

Z2 = FiniteMonoid.cyclic(2)
Z3 = FiniteMonoid.cyclic(3)
Z4 = FiniteMonoid.cyclic(4)
Z6 = FiniteMonoid.cyclic(6)
S3 = FiniteMonoid.symmetric3()
MONOGENIC_2_2 = FiniteMonoid.monogenic(2, 2)  # x^4 = x^2


class TestTableValidation:
    def test_non_associative_rejected(self):
        with pytest.raises(ValueError, match="associative"):
            FiniteMonoid([[0, 1, 2], [1, 2, 2], [2, 2, 1]], identity=0)

    def test_missing_identity(self):
        with pytest.raises(ValueError, match="identity"):
            FiniteMonoid([[0, 0], [0, 0]])

    def test_wrong_identity_declared(self):
        with pytest.raises(ValueError):
            FiniteMonoid([[0, 1], [1, 0]], identity=1)

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            FiniteMonoid([[0, 1], [1]])


class TestArithmetic:
    def test_evaluate_involution(self):
        A = Alphabet(["a"])
        h = Homomorphism(A, Z2, {"a": 1})
        assert h.evaluate(A.word("a a")) == 0
        assert h.evaluate(A.word("")) == Z2.identity

    def test_evaluate_z3(self):
        A = Alphabet(["a"])
        h = Homomorphism(A, Z3, {"a": 1})
        assert h.evaluate(A.word("a a a a")) == 1

    def test_evaluate_outside_domain(self):
        A = Alphabet(["a"])
        h = Homomorphism(A, Z2, {"a": 1})
        with pytest.raises(ValueError):
            h.evaluate(("b",))

    def test_evaluate_is_multiplicative(self):
        A = Alphabet(["x", "y"])
        h = Homomorphism(A, S3, {"x": 1, "y": 4})
        rng = random.Random(3)
        for _ in range(200):
            u = tuple(rng.choice("xy") for _ in range(rng.randrange(6)))
            v = tuple(rng.choice("xy") for _ in range(rng.randrange(6)))
            assert h.evaluate(u + v) == S3.mul(h.evaluate(u), h.evaluate(v))

    def test_element_order(self):
        assert Z6.element_order(1) == 6
        assert Z6.element_order(2) == 3
        assert Z6.element_order(Z6.identity) == 1

    def test_element_order_non_group(self):
        # powers of x: x, x^2, x^3, x^4 = x^2; idempotent power is x^2
        assert MONOGENIC_2_2.element_order(1) == 2
        assert MONOGENIC_2_2.idempotent_power(1) == 2

    def test_index_period(self):
        assert MONOGENIC_2_2.index_period(1) == (2, 2)
        assert Z6.index_period(1) == (1, 6)

    def test_order_lcm(self):
        A = Alphabet(["a", "c"])
        h = Homomorphism(A, Z6, {"a": 2, "c": 3})
        assert order_lcm(h) == 6


class TestLocalDivisor:
    def test_monogenic_example(self):
        div = MONOGENIC_2_2.local_divisor(1)
        assert div.carrier == (1, 2, 3)
        assert div.size == 3
        assert div.to_base(div.identity) == 1

    def test_identity_divisor_is_whole_monoid(self):
        div = MONOGENIC_2_2.local_divisor(MONOGENIC_2_2.identity)
        assert div.size == MONOGENIC_2_2.size
        assert [
            [div.to_base(div.mul(x, y)) for y in range(div.size)]
            for x in range(div.size)
        ] == [list(row) for row in MONOGENIC_2_2.table]

    def test_group_divisor_isomorphic(self):
        # exhaustive bijection search, identity forced to identity
        for group in (Z2, Z3, Z4, Z6, FiniteMonoid.cyclic(8)):
            for c in range(group.size):
                div = group.local_divisor(c)
                assert div.size == group.size
                assert self._isomorphic(group, div)

    @staticmethod
    def _isomorphic(a, b) -> bool:
        if a.size != b.size:
            return False
        rest = [x for x in range(a.size) if x != a.identity]
        images = [y for y in range(b.size) if y != b.identity]
        for perm in permutations(images):
            iso = {a.identity: b.identity}
            iso.update(dict(zip(rest, perm)))
            if all(
                iso[a.mul(x, y)] == b.mul(iso[x], iso[y])
                for x in range(a.size)
                for y in range(a.size)
            ):
                return True
        return False

    def test_smaller_for_non_units(self):
        for monoid in (MONOGENIC_2_2, S3, FiniteMonoid.left_zero_with_identity(3)):
            for c in range(monoid.size):
                div = monoid.local_divisor(c)
                if monoid.is_unit(c):
                    assert div.size == monoid.size
                else:
                    assert div.size < monoid.size

    def test_divisor_associativity_validated(self):
        # LocalDivisor goes through full monoid validation
        for c in range(S3.size):
            S3.local_divisor(c)


class TestSubgroups:
    def test_group_is_its_own_subgroup(self):
        groups = Z4.maximal_subgroups()
        assert groups == [(0, tuple(range(4)))]

    def test_monogenic_subgroups(self):
        groups = dict(MONOGENIC_2_2.maximal_subgroups())
        assert groups[0] == (0,)
        assert groups[2] == (2, 3)

    def test_left_zero_trivial_groups(self):
        monoid = FiniteMonoid.left_zero_with_identity(3)
        for _, members in monoid.maximal_subgroups():
            assert len(members) == 1

    def test_ab_bar(self):
        assert FiniteMonoid.direct_product(Z2, Z3).has_only_abelian_subgroups()
        assert not S3.has_only_abelian_subgroups()
        assert MONOGENIC_2_2.has_only_abelian_subgroups()

    def test_ab_bar_witness(self):
        e, members = S3.non_abelian_subgroup_witness()
        assert e == S3.identity
        assert len(members) == 6

    def test_is_group_flags(self):
        assert Z6.is_group() and Z6.is_abelian()
        assert S3.is_group() and not S3.is_abelian()
        assert not MONOGENIC_2_2.is_group()


class TestSubmonoid:
    def test_generated(self):
        sub, elems = Z6.submonoid_generated([2])
        assert sorted(elems) == [0, 2, 4]
        assert sub.size == 3 and sub.is_group()

    def test_image_monoid(self):
        A = Alphabet(["a"])
        h = Homomorphism(A, Z6, {"a": 2})
        cohom, elems = h.image_monoid()
        assert cohom.codomain.size == 3
        assert cohom.evaluate(A.word("a a a")) == cohom.codomain.identity
        assert elems[cohom.images["a"]] == 2


class TestMonFormat:
    def test_roundtrip(self):
        A = Alphabet(["a", "c"])
        h = Homomorphism(A, Z2, {"a": 1, "c": 1})
        text = format_mon(Z2, h)
        monoid, hom = parse_mon(text)
        assert monoid == Z2
        assert hom == h

    def test_comments_and_blanks(self):
        text = "# cyclic group\nsize 2\nidentity 0\n\n0 1  # row\n1 0\n"
        monoid, hom = parse_mon(text)
        assert monoid == Z2 and hom is None

    def test_errors_carry_line_numbers(self):
        with pytest.raises(MonFormatError, match="line 3"):
            parse_mon("size 2\nidentity 0\n0 x\n1 0\n")
        with pytest.raises(MonFormatError):
            parse_mon("identity 0\n")
        with pytest.raises(MonFormatError):
            parse_mon("size 2\nidentity 0\n0 1\n")

import pytest

from parikhcr import (
    Alphabet,
    FiniteMonoid,
    Homomorphism,
    construct_abelian,
    construct_two_letter,
)


@pytest.fixture(scope="session")
def ac_alphabet():
    return Alphabet(["a", "c"])


@pytest.fixture(scope="session")
def z2_parity_ac(ac_alphabet):
    """Both letters to the generator of the 2-element group."""
    return Homomorphism(ac_alphabet, FiniteMonoid.cyclic(2), {"a": 1, "c": 1})


@pytest.fixture(scope="session")
def abelian_z2_artifact(z2_parity_ac):
    return construct_abelian(z2_parity_ac)


@pytest.fixture(scope="session")
def two_letter_z2_artifact():
    ab = Alphabet(["a", "b"])
    hom = Homomorphism(ab, FiniteMonoid.cyclic(2), {"a": 1, "b": 0})
    return construct_two_letter(hom)

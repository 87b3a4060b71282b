"""Independent brute-force verifiers and reference systems.

Everything here recomputes claims by enumeration, deliberately avoiding the
construction-side code paths it checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .construct_abelian import compose_systems, index_formula
from .monoids import FiniteMonoid
from .rewrite import (
    RewriteSystem,
    System,
    irreducible_words,
    normal_form,
)
from .words import Alphabet, BlockAlphabet, Word

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def niemann_waldmann(m: int, letters=None) -> RewriteSystem:
    """Reference system for the all-letters-to-generator parity map.

    Rules xyz -> max(x, z) for all triples with y = min(x, y, z), over an
    ordered alphabet; published as an explicit Parikh-reducing example.
    """
    if m < 1:
        raise ValueError("need at least one letter")
    if letters is None:
        letters = [str(i + 1) for i in range(m)]
    A = Alphabet(letters)
    rank = A.index
    rules = []
    for x in letters:
        for y in letters:
            for z in letters:
                if rank[y] == min(rank[x], rank[y], rank[z]):
                    top = x if rank[x] >= rank[z] else z
                    rules.append((A.word((x, y, z)), A.word((top,))))
    return RewriteSystem(A, rules, label="nw")


def nw_expected_index(m: int) -> int:
    return (2 ** (2 * m + 1) + 1) // 3


def check_lower_bound(system: System, n: int, max_len: int | None = None,
                      max_words: int = 200000) -> bool:
    """No word shorter than n may be reducible.

    Established through the left-side length bound; when the index is
    enumerable the class-count lower bound (|A|^n - 1)/(|A| - 1) is verified
    as well.
    """
    if system.min_lhs_length_bound() < n:
        return False
    if max_len is not None:
        words, complete = irreducible_words(system, max_len, max_words)
        if complete:
            m = len(system.alphabet)
            floor = n if m == 1 else (m ** n - 1) // (m - 1)
            if len(words) < floor:
                return False
    return True


def _complete_enumeration(system: System, max_len: int, max_words: int):
    words, complete = irreducible_words(system, max_len, max_words)
    return (words if complete else None)


def check_index_formula(r_system: RewriteSystem, blocks: BlockAlphabet,
                        t_system: RewriteSystem, sep: str,
                        max_words: int = 500000) -> str:
    """Compose the two systems and compare the enumerated class count with
    the two-part count formula.  Truncated enumeration is reported as
    inconclusive, distinct from failure."""
    alphabet = blocks.base
    r_words = _probe_complete(r_system, max_words)
    t_words = _probe_complete(t_system, max_words)
    if r_words is None or t_words is None:
        return INCONCLUSIVE
    expected = index_formula(len(r_words), len(t_words))
    composed = compose_systems(r_system, t_system, sep, blocks, alphabet)
    max_r = max((len(w) for w in r_words), default=0)
    max_t = max(
        (len(blocks.expand(w)) for w in t_words), default=0
    )
    bound = 2 * max_r + max_t + 1
    words = _complete_enumeration(composed, bound + 2, max_words)
    if words is None:
        return INCONCLUSIVE
    return PASS if len(words) == expected else FAIL


def _probe_complete(system: System, max_words: int):
    length = 4
    while length <= 512:
        words, complete = irreducible_words(system, length, max_words)
        if complete:
            return words
        if len(words) >= max_words:
            return None
        length *= 2
    return None


def quotient_monoid(system: System, max_len: int = 24,
                    max_words: int = 200000
                    ) -> tuple[FiniteMonoid, list[tuple]]:
    """Materialize the quotient by multiplying normal forms.

    Fails if the irreducible language cannot be enumerated completely.  The
    resulting table goes through full monoid validation, so associativity of
    the quotient is re-verified.
    """
    words, complete = irreducible_words(system, max_len, max_words)
    if not complete:
        raise ValueError("index not enumerable within the configured caps")
    pos = {w: i for i, w in enumerate(words)}
    A = system.alphabet
    table = []
    for u in words:
        row = []
        for v in words:
            nf = normal_form(system, Word(A, u + v)).letters
            if nf not in pos:
                raise AssertionError("product left the irreducible language")
            row.append(pos[nf])
        table.append(row)
    return FiniteMonoid(table, identity=pos[()]), words


@dataclass
class SubgroupReport:
    entries: list  # (idempotent word letters, group order, abelian flag)
    all_abelian: bool
    quotient_size: int


def subgroup_audit(system: System, max_len: int = 24,
                   max_words: int = 200000) -> SubgroupReport:
    """Maximal subgroups of the finite quotient, with abelianness flags."""
    monoid, words = quotient_monoid(system, max_len, max_words)
    entries = []
    ok = True
    for e, members in monoid.maximal_subgroups():
        t = monoid.table
        abelian = all(
            t[x][y] == t[y][x] for x in members for y in members
        )
        ok = ok and abelian
        entries.append((words[e], len(members), abelian))
    return SubgroupReport(entries, ok, monoid.size)

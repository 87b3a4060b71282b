"""Semi-Thue systems, schematic rule families, rewriting and confluence checks.

Two kinds of systems share one interface: explicit finite rule lists and
lazily matched rule families (used where the rule set is finite but far too
large to expand).  Everything a caller needs is the set of matches inside a
word; rewriting, normal forms, enumeration and sampling are built on that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .words import Alphabet, BlockAlphabet, Word, expand_letters_to

DEFAULT_BUDGET = 10_000_000


class BudgetExhausted(RuntimeError):
    """Raised when a reduction exceeds its step budget."""

    def __init__(self, letters, steps):
        super().__init__(f"budget exhausted after {steps} steps")
        self.letters = letters
        self.steps = steps


@dataclass(frozen=True)
class Strategy:
    """Which match a rewrite step applies."""

    kind: str
    seed: int | None = None

    @staticmethod
    def parse(text: str) -> "Strategy":
        if text.startswith("random"):
            _, _, seedtext = text.partition(":")
            return Strategy("random", int(seedtext) if seedtext else 0)
        if text in ("leftmost_shortest", "leftmost_longest", "rightmost"):
            return Strategy(text)
        raise ValueError(f"unknown strategy {text!r}")


LEFTMOST_SHORTEST = Strategy("leftmost_shortest")
LEFTMOST_LONGEST = Strategy("leftmost_longest")
RIGHTMOST = Strategy("rightmost")


def random_strategy(seed: int) -> Strategy:
    return Strategy("random", seed)


@dataclass
class Match:
    """One applicable rule occurrence: replace length letters at start."""

    start: int
    length: int
    replacement: tuple
    family: str
    note: str = ""

    @property
    def end(self):
        return self.start + self.length


class System:
    """Common surface of explicit systems and rule schemas."""

    alphabet: Alphabet
    label: str | None = None
    is_explicit = False

    def matches(self, letters) -> list[Match]:
        raise NotImplementedError

    def is_irreducible(self, letters) -> bool:
        return not self.matches(letters)

    def has_end_match(self, letters) -> bool:
        """Any match ending exactly at the last position."""
        n = len(letters)
        return any(m.end == n for m in self.matches(letters))

    def min_lhs_length_bound(self) -> int:
        """A lower bound on the length of any left side, in own letters."""
        raise NotImplementedError

    def sample_instances(self, rng, count) -> list[tuple[tuple, tuple]]:
        """Sample (lhs, rhs) rule instances for sampled verification."""
        raise NotImplementedError


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self):
        if len(self.lhs) == 0:
            raise ValueError("rule left side must be non-empty")
        if self.lhs.letters == self.rhs.letters:
            raise ValueError("rule sides must differ")


class RewriteSystem(System):
    """Explicit finite set of rules over one alphabet."""

    is_explicit = True

    def __init__(self, alphabet: Alphabet, rules, label: str | None = None):
        norm = []
        for item in rules:
            if isinstance(item, Rule):
                lhs, rhs = item.lhs, item.rhs
            else:
                lhs, rhs = item
            if not isinstance(lhs, Word):
                lhs = alphabet.word(lhs)
            if not isinstance(rhs, Word):
                rhs = alphabet.word(rhs)
            norm.append(Rule(lhs, rhs))
        pairs = [(r.lhs.letters, r.rhs.letters) for r in norm]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate rules")
        self.alphabet = alphabet
        self.rules = tuple(norm)
        self.label = label
        self._patterns = tuple(alphabet.encode(r.lhs.letters) for r in self.rules)

    def matches(self, letters) -> list[Match]:
        text = self.alphabet.encode(letters)
        tag = self.label or "rule"
        out = []
        for ri, rule in enumerate(self.rules):
            pat = self._patterns[ri]
            i = text.find(pat)
            while i >= 0:
                out.append(
                    Match(i, len(rule.lhs), rule.rhs.letters, f"{tag}[{ri}]")
                )
                i = text.find(pat, i + 1)
        out.sort(key=lambda m: (m.start, m.length))
        return out

    def is_irreducible(self, letters) -> bool:
        text = self.alphabet.encode(letters)
        return all(text.find(p) < 0 for p in self._patterns)

    def has_end_match(self, letters) -> bool:
        text = self.alphabet.encode(letters)
        return any(text.endswith(p) for p in self._patterns)

    def min_lhs_length_bound(self) -> int:
        return min(len(r.lhs) for r in self.rules) if self.rules else 1 << 62

    def sample_instances(self, rng, count):
        if not self.rules:
            return []
        return [
            (r.lhs.letters, r.rhs.letters)
            for r in (rng.choice(self.rules) for _ in range(count))
        ]

    def __eq__(self, other):
        if not isinstance(other, RewriteSystem):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and [(r.lhs.letters, r.rhs.letters) for r in self.rules]
            == [(r.lhs.letters, r.rhs.letters) for r in other.rules]
        )

    def __repr__(self):
        return f"RewriteSystem({len(self.rules)} rules over {self.alphabet!r})"


class UnionSystem(System):
    """Union of sub-systems over a common ambient alphabet."""

    def __init__(self, alphabet: Alphabet, parts, label: str | None = None):
        self.alphabet = alphabet
        self.parts = tuple(parts)
        self.label = label

    def matches(self, letters) -> list[Match]:
        out = []
        for pi, part in enumerate(self.parts):
            for m in part.matches(letters):
                out.append((m.start, m.length, pi, len(out), m))
        out.sort(key=lambda t: t[:4])
        return [t[4] for t in out]

    def is_irreducible(self, letters) -> bool:
        return all(p.is_irreducible(letters) for p in self.parts)

    def has_end_match(self, letters) -> bool:
        return any(p.has_end_match(letters) for p in self.parts)

    def min_lhs_length_bound(self) -> int:
        return min(p.min_lhs_length_bound() for p in self.parts)

    def sample_instances(self, rng, count):
        out = []
        share = max(1, count // max(1, len(self.parts)))
        for part in self.parts:
            out.extend(part.sample_instances(rng, share))
        return out[:count] if len(out) > count else out

    def __eq__(self, other):
        if not isinstance(other, UnionSystem):
            return NotImplemented
        return self.alphabet == other.alphabet and self.parts == other.parts

    def __repr__(self):
        return f"UnionSystem({len(self.parts)} parts)"


class LiftedSystem(System):
    """Rules sep·expand(l) -> sep·expand(r) for l -> r in an inner system.

    The inner system works over a block alphabet; an occurrence needs an
    anchoring separator in front, and because every block ends with the
    separator, any decoded block run after any separator yields occurrences.
    """

    def __init__(self, alphabet, sep, blocks: BlockAlphabet, inner: System,
                 label: str | None = None):
        if sep not in alphabet.index:
            raise ValueError(f"separator {sep!r} not in alphabet")
        self.alphabet = alphabet
        self.sep = sep
        self.blocks = blocks
        self.inner = inner
        self.label = label

    def _block_runs(self, letters):
        """Maximal decodable runs; yields (anchor_positions, block_names).

        anchor_positions[i] is the separator position just before block i,
        plus one final entry for the separator ending the last block.
        """
        sep = self.sep
        positions = [i for i, x in enumerate(letters) if x == sep]
        runs = []
        anchors: list[int] = []
        names: list[str] = []
        for j in range(1, len(positions)):
            prev, cur = positions[j - 1], positions[j]
            name = self.blocks.letter_for(letters[prev + 1 : cur + 1])
            if name is None:
                if names:
                    runs.append((anchors, names))
                anchors, names = [], []
                continue
            if not names:
                anchors = [prev]
            names.append(name)
            anchors.append(cur)
        if names:
            runs.append((anchors, names))
        return runs

    def matches(self, letters) -> list[Match]:
        tag = self.label or "lift"
        out = []
        for anchors, names in self._block_runs(letters):
            for m in self.inner.matches(tuple(names)):
                a_start = anchors[m.start]
                a_end = anchors[m.start + m.length]
                repl = (self.sep,) + self.blocks.expand(m.replacement)
                note = f"k {m.length}->{len(m.replacement)}"
                if m.note:
                    note += f"; {m.note}"
                out.append(
                    Match(a_start, a_end - a_start + 1, repl,
                          f"{tag}/{m.family}", note)
                )
        out.sort(key=lambda m: (m.start, m.length))
        return out

    def min_lhs_length_bound(self) -> int:
        min_block = min(len(b) for b in self.blocks.expansions.values())
        return 1 + self.inner.min_lhs_length_bound() * min_block

    def sample_instances(self, rng, count):
        out = []
        for lhs, rhs in self.inner.sample_instances(rng, count):
            out.append(
                ((self.sep,) + self.blocks.expand(lhs),
                 (self.sep,) + self.blocks.expand(rhs))
            )
        return out

    def __eq__(self, other):
        if not isinstance(other, LiftedSystem):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.sep == other.sep
            and self.blocks == other.blocks
            and self.inner == other.inner
        )

    def __repr__(self):
        return f"LiftedSystem(sep={self.sep!r}, inner={self.inner!r})"


# -- rewriting ---------------------------------------------------------------


def _pick(matches: list[Match], strategy: Strategy, rng) -> Match:
    if strategy.kind == "random":
        return matches[rng.randrange(len(matches))]
    if strategy.kind == "leftmost_shortest":
        key = lambda t: (t[1].start, t[1].length, t[0])
    elif strategy.kind == "leftmost_longest":
        key = lambda t: (t[1].start, -t[1].length, t[0])
    elif strategy.kind == "rightmost":
        key = lambda t: (-t[1].start, t[1].length, t[0])
    else:
        raise ValueError(f"unknown strategy {strategy.kind!r}")
    return min(enumerate(matches), key=key)[1]


def rewrite_step(system: System, w: Word, strategy: Strategy = LEFTMOST_SHORTEST,
                 rng=None) -> Word | None:
    """One rewrite step, or None if w is irreducible."""
    ms = system.matches(w.letters)
    if not ms:
        return None
    if rng is None:
        rng = random.Random(strategy.seed)
    m = _pick(ms, strategy, rng)
    letters = w.letters[: m.start] + m.replacement + w.letters[m.end :]
    return Word(w.alphabet, letters)


def normal_form(system: System, w: Word, strategy: Strategy = LEFTMOST_SHORTEST,
                budget: int = DEFAULT_BUDGET, on_step=None,
                validators=()) -> Word:
    """Iterate rewrite steps until irreducible.

    on_step(letters, match) is called before each application; validators
    may raise to reject an application (used to audit sampled reductions).
    """
    rng = random.Random(strategy.seed)
    letters = w.letters
    steps = 0
    while True:
        ms = system.matches(letters)
        if not ms:
            return Word(w.alphabet, letters)
        m = _pick(ms, strategy, rng)
        for check in validators:
            check(letters, m)
        if on_step is not None:
            on_step(letters, m)
        steps += 1
        if steps > budget:
            raise BudgetExhausted(letters, steps)
        letters = letters[: m.start] + m.replacement + letters[m.end :]


# -- critical pairs and confluence -------------------------------------------


@dataclass(frozen=True)
class CriticalPair:
    left: Word
    right: Word
    source: str  # "overlap" | "factor"
    witness: Word


def critical_pairs(system: RewriteSystem) -> list[CriticalPair]:
    """All overlap and factor critical pairs over ordered rule pairs.

    Overlaps are proper (both protruding parts non-empty); the same-rule
    same-position factor case is skipped as trivially resolving.
    """
    if not isinstance(system, RewriteSystem):
        raise TypeError("critical pairs require an explicit system")
    A = system.alphabet
    out = []
    seen = set()
    rules = system.rules
    for i1, r1 in enumerate(rules):
        l1, rhs1 = r1.lhs.letters, r1.rhs.letters
        for i2, r2 in enumerate(rules):
            l2, rhs2 = r2.lhs.letters, r2.rhs.letters
            for k in range(1, min(len(l1), len(l2))):
                if l2[-k:] == l1[:k]:
                    x = l2[:-k]
                    y = l1[k:]
                    witness = l2 + y
                    key = ("o", witness, len(x), i1, i2)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(
                        CriticalPair(
                            Word(A, x + rhs1),
                            Word(A, rhs2 + y),
                            "overlap",
                            Word(A, witness),
                        )
                    )
            if len(l2) <= len(l1):
                for pos in range(len(l1) - len(l2) + 1):
                    if l1[pos : pos + len(l2)] != l2:
                        continue
                    if i1 == i2 and pos == 0 and len(l1) == len(l2):
                        continue
                    key = ("f", l1, pos, i1, i2)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(
                        CriticalPair(
                            Word(A, rhs1),
                            Word(A, l1[:pos] + rhs2 + l1[pos + len(l2) :]),
                            "factor",
                            Word(A, l1),
                        )
                    )
    return out


def is_locally_confluent(system: RewriteSystem,
                         strategy: Strategy = LEFTMOST_SHORTEST,
                         budget: int = DEFAULT_BUDGET
                         ) -> tuple[bool, CriticalPair | None]:
    """Check that every critical pair reduces to one normal form.

    Sound and complete for terminating systems: were the system locally
    confluent, normal forms would be unique, so a disagreeing pair refutes
    local confluence outright.
    """
    for pair in critical_pairs(system):
        nf1 = normal_form(system, pair.left, strategy, budget)
        nf2 = normal_form(system, pair.right, strategy, budget)
        if nf1.letters != nf2.letters:
            return False, pair
    return True, None


# -- classification -----------------------------------------------------------


class Classification:
    """Reduction flags of an explicit system."""

    def __init__(self, system: RewriteSystem):
        if not isinstance(system, RewriteSystem):
            raise TypeError("classification requires an explicit system")
        self.system = system
        self.parikh_reducing = all(
            instance_parikh_reducing(r.lhs, r.rhs) for r in system.rules
        )
        self.subword_reducing = all(
            r.rhs.letters != r.lhs.letters and _subseq(r.rhs.letters, r.lhs.letters)
            for r in system.rules
        )
        self.length_reducing = all(
            len(r.rhs) < len(r.lhs) for r in system.rules
        )

    def weight_reducing_for(self, f) -> bool:
        return all(f(r.lhs) > f(r.rhs) for r in self.system.rules)


def _subseq(u, w):
    it = iter(w)
    return all(a in it for a in u)


def instance_parikh_reducing(lhs, rhs) -> bool:
    """Counts never increase, at least one strictly decreases."""
    lhs_letters = lhs.letters if isinstance(lhs, Word) else lhs
    rhs_letters = rhs.letters if isinstance(rhs, Word) else rhs
    counts = {}
    for a in lhs_letters:
        counts[a] = counts.get(a, 0) + 1
    for a in rhs_letters:
        k = counts.get(a, 0) - 1
        if k < 0:
            return False
        counts[a] = k
    return any(v > 0 for v in counts.values())


def classify(system: RewriteSystem) -> Classification:
    return Classification(system)


# -- invariance ---------------------------------------------------------------


def check_invariance(system: System, hom, samples: int = 256, rng=None) -> bool:
    """Does the homomorphism factor through the system?

    Exact on explicit systems; on schemas, checked on sampled instances
    from the schema generator (sound refutation, sampled verification).
    Letters of derived alphabets are expanded down to the homomorphism's
    alphabet before evaluation.
    """

    def phi(letters):
        ground = expand_letters_to(system.alphabet, letters, hom.alphabet)
        return hom.evaluate(ground)

    if system.is_explicit:
        return all(phi(r.lhs.letters) == phi(r.rhs.letters)
                   for r in system.rules)
    if rng is None:
        rng = random.Random(0)
    return all(
        phi(lhs) == phi(rhs)
        for lhs, rhs in system.sample_instances(rng, samples)
    )


# -- enumeration ---------------------------------------------------------------


def irreducible_words(system: System, max_len: int, max_count: int | None = None
                      ) -> tuple[list[tuple], bool]:
    """All irreducible words of length <= max_len, plus a completeness flag.

    Irreducible languages are factor-closed, so breadth-first extension with
    suffix-anchored reducibility checks enumerates them exactly.  complete
    is True iff no irreducible word of length max_len exists, in which case
    the list is the entire irreducible language.
    """
    letters = system.alphabet.letters
    words: list[tuple] = [()]
    frontier: list[tuple] = [()]
    for length in range(1, max_len + 1):
        nxt = []
        for w in frontier:
            for x in letters:
                w2 = w + (x,)
                if not system.has_end_match(w2):
                    nxt.append(w2)
                    if max_count is not None and len(words) + len(nxt) > max_count:
                        return words + nxt, False
        words.extend(nxt)
        frontier = nxt
        if not frontier:
            return words, True
    return words, not frontier


def enumerate_irreducible(system: System, max_len: int,
                          max_count: int | None = None) -> tuple[int, bool]:
    words, complete = irreducible_words(system, max_len, max_count)
    return len(words), complete


# -- sampling ------------------------------------------------------------------


def random_word(alphabet: Alphabet, max_len: int, rng) -> Word:
    n = rng.randrange(max_len + 1)
    return Word(alphabet, tuple(rng.choice(alphabet.letters) for _ in range(n)))


def confluence_sampling(system: System, word_sampler, trials: int,
                        strategies, budget: int = DEFAULT_BUDGET,
                        validators=()) -> tuple[bool, tuple | None]:
    """Normal forms under all strategies must coincide on sampled words.

    Returns (True, None) or (False, (word, normal_forms)).  Budget
    exhaustion propagates.
    """
    rng = random.Random(12345)
    strategies = list(strategies)
    for _ in range(trials):
        w = word_sampler(rng)
        nfs = [
            normal_form(system, w, st, budget, validators=validators)
            for st in strategies
        ]
        first = nfs[0].letters
        if any(nf.letters != first for nf in nfs[1:]):
            return False, (w, nfs)
    return True, None


def reachable_normal_form_after(system: System, w: Word, steps_rng,
                                budget: int = DEFAULT_BUDGET) -> Word:
    """Normal form along a uniformly random reduction path."""
    return normal_form(system, w, Strategy("random", steps_rng.randrange(1 << 30)),
                       budget)

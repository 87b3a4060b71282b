"""Construction of Parikh-reducing Church-Rosser systems for homomorphisms
into finite abelian groups.

The system is built by induction on the alphabet: the last letter c is
peeled off, the remaining letters are handled recursively by a system R, and
irreducible words suffixed by c become the letters of a block alphabet K.
Over K two schematic rule families finish the job: collapse rules shorten
long repetitions of short words, and marker rules rewrite long stretches
between dominant marker factors to a canonical letter-count normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .monoids import Homomorphism, order_lcm
from .rewrite import (
    LiftedSystem,
    Match,
    RewriteSystem,
    System,
    UnionSystem,
    irreducible_words,
)
from .words import Alphabet, BlockAlphabet, Word, border_array, smallest_period


class ConstructionInfeasible(RuntimeError):
    """The construction is well-defined but too large to materialize."""


# span bounds wider than this many bits stay symbolic
MATERIALIZE_BITS = 100_000


class AstronomicalBound:
    """Exact value factor·2^exponent - offset, kept symbolic.

    Used for span ceilings whose exact integer would need more bits than
    is sensible to allocate; they only ever face comparisons against
    machine-scale word lengths, which they dwarf.
    """

    __slots__ = ("exponent", "factor", "offset")

    def __init__(self, exponent: int, factor: int, offset: int):
        if exponent < MATERIALIZE_BITS or factor < 1 or offset < 0:
            raise ValueError("bound is small enough to materialize exactly")
        self.exponent = exponent
        self.factor = factor
        self.offset = offset

    def _key(self):
        return (self.exponent, self.factor, self.offset)

    def __eq__(self, other):
        if isinstance(other, AstronomicalBound):
            return self._key() == other._key()
        return False

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        if isinstance(other, int):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, int):
            return True
        return NotImplemented

    def __repr__(self):
        return f"2^{self.exponent}*{self.factor}-{self.offset}"


def exact_span_bound(marker_count: int, cover: int, threshold: int):
    """2^markers·(cover + threshold) - threshold, symbolic when too wide."""
    if marker_count <= MATERIALIZE_BITS:
        return (1 << marker_count) * (cover + threshold) - threshold
    return AstronomicalBound(marker_count, cover + threshold, threshold)


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


class RunCollapseRules(System):
    """Rules base^(power+step) -> base^power for every non-empty base word of
    length at most max_period.

    Matching scans, for each position and candidate period, whether a long
    enough run starts there; the instance set is exactly the family above.
    """

    def __init__(self, alphabet: Alphabet, max_period: int, power: int,
                 step: int, label: str | None = None):
        if max_period < 1 or step < 1:
            raise ValueError("max_period and step must be >= 1")
        if power <= 2 * max_period:
            raise ValueError(
                f"collapse threshold {power} must exceed twice the period "
                f"bound {max_period}"
            )
        self.alphabet = alphabet
        self.max_period = max_period
        self.power = power
        self.step = step
        self.label = label

    def matches(self, letters) -> list[Match]:
        n = len(letters)
        tag = self.label or "collapse"
        out = []
        reps = self.power + self.step
        for p in range(1, self.max_period + 1):
            need = p * reps
            if need > n:
                break
            # run[i]: longest stretch from i on which the word has period p
            ok_until = n - p  # eq[i] defined for i < n - p
            run = [0] * (ok_until + 1)
            for i in range(ok_until - 1, -1, -1):
                if letters[i] == letters[i + p]:
                    run[i] = run[i + 1] + 1
            for i in range(n - need + 1):
                if run[i] >= need - p:
                    out.append(
                        Match(i, need, letters[i : i + p] * self.power,
                              tag, f"p={p}")
                    )
        out.sort(key=lambda m: (m.start, m.length))
        return out

    def has_end_match(self, letters) -> bool:
        n = len(letters)
        reps = self.power + self.step
        for p in range(1, self.max_period + 1):
            need = p * reps
            if need > n:
                return False
            tail = letters[n - need :]
            if all(tail[i] == tail[i + p] for i in range(need - p)):
                return True
        return False

    def min_lhs_length_bound(self) -> int:
        return self.power + self.step

    def sample_instances(self, rng, count):
        out = []
        letters = self.alphabet.letters
        for _ in range(count):
            p = rng.randrange(1, self.max_period + 1)
            base = tuple(rng.choice(letters) for _ in range(p))
            out.append((base * (self.power + self.step), base * self.power))
        return out

    def __eq__(self, other):
        if not isinstance(other, RunCollapseRules):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.max_period == other.max_period
            and self.power == other.power
            and self.step == other.step
        )

    def __repr__(self):
        return (
            f"RunCollapseRules(max_period={self.max_period}, "
            f"power={self.power}, step={self.step})"
        )


class MarkerSet:
    """Fixed-length factors witnessing the absence of short-period runs.

    A marker has the set window length, does not start with the separator
    letter and has smallest period above the period bound.  Markers are
    preordered by their trailing separator block: the longer the block, the
    smaller the marker; equal-length blocks of maximal length are all
    equivalent, everything else is tie-broken lexicographically.
    """

    def __init__(self, alphabet: Alphabet, sep: str, window: int,
                 period_bound: int):
        if sep not in alphabet.index:
            raise ValueError(f"separator {sep!r} not in alphabet")
        if window != 3 * period_bound:
            raise ValueError("marker window must be three period bounds wide")
        self.alphabet = alphabet
        self.sep = sep
        self.window = window
        self.period_bound = period_bound

    def contains(self, letters) -> bool:
        if len(letters) != self.window:
            raise ValueError(
                f"marker candidates have length {self.window}, got {len(letters)}"
            )
        if letters[0] == self.sep:
            return False
        return smallest_period(letters) > self.period_bound

    def key(self, letters):
        """Preorder key; comparing keys lexicographically realizes <=."""
        tail = 0
        for x in reversed(letters):
            if x != self.sep:
                break
            tail += 1
        if tail == self.window - 1:
            return (-tail,)
        index = self.alphabet.index
        return (-tail,) + tuple(index[x] for x in letters)

    def positions(self, letters) -> list[int]:
        """Start positions of all marker occurrences."""
        W = self.window
        n = len(letters)
        sep = self.sep
        bound = self.period_bound
        out = []
        for q in range(n - W + 1):
            if letters[q] == sep:
                continue
            win = letters[q : q + W]
            if W - border_array(win)[W - 1] > bound:
                out.append(q)
        return out

    def max_key(self, letters):
        """Largest marker key occurring in the word, or None."""
        best = None
        for q in self.positions(letters):
            k = self.key(letters[q : q + self.window])
            if best is None or k > best:
                best = k
        return best

    def count(self) -> int:
        """Exact number of markers, by the smallest-period count formula.

        Words of the window length with some period <= bound are counted via
        Moebius inversion over smallest periods (any two short periods of a
        window-length word interact, so smallest periods divide all others).
        """
        m = len(self.alphabet)
        if m == 0:
            return 0
        total = (m - 1) * m ** (self.window - 1)
        short = 0
        for p in range(1, self.period_bound + 1):
            for d in range(1, p + 1):
                if p % d == 0:
                    short += _mobius(p // d) * (m - 1) * m ** (d - 1)
        return total - short

    def enumerate_all(self, limit: int = 1 << 20) -> list[tuple]:
        m = len(self.alphabet)
        if m ** self.window > limit:
            raise ConstructionInfeasible(
                f"marker enumeration over {m}^{self.window} words refused"
            )
        return [
            w
            for w in product(self.alphabet.letters, repeat=self.window)
            if self.contains(w)
        ]

    def __eq__(self, other):
        if not isinstance(other, MarkerSet):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.sep == other.sep
            and self.window == other.window
            and self.period_bound == other.period_bound
        )


class CountNormalForm:
    """Canonical word with the same letter counts modulo the letter orders.

    The output spells, between runs of separator blocks, each base letter to
    its count residue: sep^w  a1^k1 sep^w  ...  as^ks sep^w  sep^kc sep^w,
    re-encoded as block letters.
    """

    kind = "counts"

    def __init__(self, blocks: BlockAlphabet, letter_order, orders, window: int):
        letter_order = tuple(letter_order)
        if letter_order[-1] != blocks.sep:
            raise ValueError("letter order must end with the separator")
        self.blocks = blocks
        self.letter_order = letter_order
        self.orders = {a: int(orders[a]) for a in letter_order}
        self.window = window
        self._sep_block = blocks.letter_for((blocks.sep,))
        if self._sep_block is None:
            raise ValueError("block alphabet lacks the bare separator block")

    def residues(self, kletters) -> dict[str, int]:
        ground = self.blocks.expand(kletters)
        counts = {a: 0 for a in self.letter_order}
        for x in ground:
            counts[x] += 1
        return {a: counts[a] % self.orders[a] for a in self.letter_order}

    def __call__(self, kletters) -> tuple:
        res = self.residues(kletters)
        sep_block = self._sep_block
        out = [sep_block] * self.window
        for a in self.letter_order[:-1]:
            k = res[a]
            if k:
                name = self.blocks.letter_for((a,) * k + (self.blocks.sep,))
                if name is None:
                    raise ValueError(
                        f"normal-form block {a}^{k}·{self.blocks.sep} missing"
                    )
                out.append(name)
                out.extend([sep_block] * (self.window - 1))
            else:
                out.extend([sep_block] * self.window)
        out.extend([sep_block] * res[self.letter_order[-1]])
        out.extend([sep_block] * self.window)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, CountNormalForm):
            return NotImplemented
        return (
            self.blocks == other.blocks
            and self.letter_order == other.letter_order
            and self.orders == other.orders
            and self.window == other.window
        )


class MarkerRules(System):
    """Rules rewriting marker-bounded factors to their normal form.

    A match is a factor starting and ending with markers that dominate every
    marker inside the factor, with length in [min_span, max_span]; the part
    between the end markers is replaced by the normal form.
    """

    def __init__(self, alphabet: Alphabet, markers: MarkerSet, min_span: int,
                 max_span: int, rhs, relax_upper_bound: bool = False,
                 label: str | None = None):
        self.alphabet = alphabet
        self.markers = markers
        self.min_span = min_span
        self.max_span = max_span
        self.rhs = rhs
        self.relax_upper_bound = relax_upper_bound
        self.label = label

    def matches(self, letters) -> list[Match]:
        W = self.markers.window
        tag = self.label or "marker"
        positions = self.markers.positions(letters)
        keys = [self.markers.key(letters[q : q + W]) for q in positions]
        out = []
        for i, q1 in enumerate(positions):
            running = keys[i]
            for j in range(i, len(positions)):
                q2 = positions[j]
                if keys[j] > running:
                    running = keys[j]
                span = q2 + W - q1
                if span < self.min_span:
                    continue
                if span > self.max_span and not self.relax_upper_bound:
                    break
                if keys[i] == running and keys[j] == running:
                    mid = self.rhs(letters[q1 + W : q2])
                    new_span = 2 * W + len(mid)
                    if new_span >= span:
                        raise AssertionError(
                            "marker rewrite failed to shorten the factor"
                        )
                    repl = (
                        letters[q1 : q1 + W] + mid + letters[q2 : q2 + W]
                    )
                    out.append(
                        Match(q1, span, repl, tag,
                              f"span {span}->{new_span}")
                    )
        out.sort(key=lambda m: (m.start, m.length))
        return out

    def min_lhs_length_bound(self) -> int:
        return self.min_span

    def sample_instances(self, rng, count):
        """Instances built from markers of the minimal class.

        Interior non-separator letters are kept at least a window apart, so
        every marker factor of the body is minimal as well and both end
        markers dominate.
        """
        sep = self.markers.sep
        others = [x for x in self.alphabet.letters if x != sep]
        if not others:
            return []
        W = self.markers.window
        out = []
        for _ in range(count):
            x = rng.choice(others)
            marker = (x,) + (sep,) * (W - 1)
            target = self.min_span - 2 * W + rng.randrange(0, 2 * W + 1)
            body: list = []
            while len(body) < target:
                body.extend([sep] * (W + rng.randrange(0, 3)))
                if rng.random() < 0.8:
                    body.append(rng.choice(others))
            # trailing separators keep the last letter a full window away
            # from the closing marker, so no non-minimal marker arises
            body.extend([sep] * W)
            body_t = tuple(body)
            lhs = marker + body_t + marker
            rhs = marker + self.rhs(body_t) + marker
            out.append((lhs, rhs))
        return out

    def __eq__(self, other):
        if not isinstance(other, MarkerRules):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.markers == other.markers
            and self.min_span == other.min_span
            and self.max_span == other.max_span
            and self.rhs == other.rhs
            and self.relax_upper_bound == other.relax_upper_bound
        )

    def __repr__(self):
        return f"MarkerRules(min_span={self.min_span}, max_span={self.max_span})"


# -- artifacts -----------------------------------------------------------------


@dataclass
class BuildNode:
    """One node of the construction recursion, for provenance and audits."""

    alphabet: Alphabet
    case: str
    params: dict
    monoid_size: int | None = None
    r_system: System | None = None
    blocks: BlockAlphabet | None = None
    t_system: System | None = None
    children: list = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class ConstructionArtifact:
    system: System
    root: BuildNode

    def levels(self) -> list[BuildNode]:
        return list(self.root.walk())

    def summary_lines(self) -> list[str]:
        out = []
        for node in self.levels():
            bits = [f"alphabet={{{' '.join(node.alphabet.letters)}}}",
                    f"case={node.case}"]
            for k, v in node.params.items():
                bits.append(f"{k}={v}")
            out.append("  ".join(bits))
        return out


def materialize_small(system: System, max_rules: int = 256) -> System:
    """Expand a schematic system into explicit rules when its rule family is
    small enough; otherwise return it unchanged.

    Collapse families are finite per se; marker families materialize only
    when empty (no markers exist), since otherwise the span window makes
    them astronomically large.
    """
    rules = _explicit_rules(system, max_rules)
    if rules is None:
        return system
    return RewriteSystem(system.alphabet, rules, label=system.label)


def _explicit_rules(system: System, max_rules: int):
    if isinstance(system, RewriteSystem):
        return [(r.lhs, r.rhs) for r in system.rules]
    if isinstance(system, RunCollapseRules):
        m = len(system.alphabet)
        total = sum(m ** p for p in range(1, system.max_period + 1))
        if total > max_rules:
            return None
        out = []
        for p in range(1, system.max_period + 1):
            for base in product(system.alphabet.letters, repeat=p):
                out.append(
                    (
                        Word(system.alphabet, base * (system.power + system.step)),
                        Word(system.alphabet, base * system.power),
                    )
                )
        return out
    if isinstance(system, MarkerRules):
        return [] if system.markers.count() == 0 else None
    if isinstance(system, UnionSystem):
        out = []
        for part in system.parts:
            sub = _explicit_rules(part, max_rules)
            if sub is None or len(out) + len(sub) > max_rules:
                return None
            out.extend(sub)
        return out
    if isinstance(system, LiftedSystem):
        sub = _explicit_rules(system.inner, max_rules)
        if sub is None:
            return None
        return [
            (
                Word(system.alphabet, (system.sep,) + system.blocks.expand(l.letters)),
                Word(system.alphabet, (system.sep,) + system.blocks.expand(r.letters)),
            )
            for l, r in sub
        ]
    return None


def index_formula(index_r: int, index_t: int) -> int:
    """Congruence-class count of the composed system from the two parts."""
    if index_t < 1 or index_r < 1:
        raise ValueError("indices count at least the empty-word class")
    return index_r + index_r * index_r * index_t


def compose_systems(r_system: System, t_system: System, sep: str,
                    blocks: BlockAlphabet, alphabet: Alphabet,
                    label: str | None = None) -> System:
    """R together with every inner rule anchored at the separator.

    Explicit inputs produce an explicit union; schematic inputs stay lazy
    behind a lifted wrapper.
    """
    if r_system.is_explicit and t_system.is_explicit:
        rules = [(r.lhs, r.rhs) for r in r_system.rules]
        for rule in t_system.rules:
            lhs = (sep,) + blocks.expand(rule.lhs.letters)
            rhs = (sep,) + blocks.expand(rule.rhs.letters)
            rules.append((Word(alphabet, lhs), Word(alphabet, rhs)))
        return RewriteSystem(alphabet, rules, label=label)
    lifted = LiftedSystem(alphabet, sep, blocks, t_system,
                          label=label or f"T({sep})")
    return UnionSystem(alphabet, (r_system, lifted))


def build_block_alphabet(r_system: System, base: Alphabet, sep: str,
                         max_len: int, max_words: int) -> BlockAlphabet:
    """Blocks = irreducible words of the inner system, suffixed by sep."""
    irr, complete = irreducible_words(r_system, max_len, max_words)
    if not complete:
        raise ConstructionInfeasible(
            f"irreducible language too large to enumerate "
            f"(cap {max_words} words / length {max_len}); "
            f"the construction is defined but not materializable at this size"
        )
    base_index = base.index
    ordered = sorted(irr, key=lambda w: (len(w), [base_index[x] for x in w]))
    return BlockAlphabet(base, sep, [w + (sep,) for w in ordered])


def construct_abelian(hom: Homomorphism, *, relax_upper_bound: bool = False,
                      max_block_len: int = 64, max_block_words: int = 20000
                      ) -> ConstructionArtifact:
    """Invariant Parikh-reducing Church-Rosser system for an abelian image.

    Letters are peeled right to left; each level contributes collapse rules
    and marker rules over the block alphabet of the level below.
    """
    if len(hom.alphabet) == 0:
        raise ValueError("alphabet must be non-empty")
    cohom, _ = hom.image_monoid()
    if not (cohom.codomain.is_group() and cohom.codomain.is_abelian()):
        raise ValueError("construction requires an abelian group image")
    system, node = _build_abelian(cohom, relax_upper_bound, max_block_len,
                                  max_block_words)
    return ConstructionArtifact(system, node)


def _build_abelian(hom: Homomorphism, relax: bool, max_block_len: int,
                   max_block_words: int) -> tuple[System, BuildNode]:
    A = hom.alphabet
    if len(A) == 1:
        c = A.letters[0]
        n1 = hom.letter_order(c)
        system = RewriteSystem(A, [(A.word((c,) * n1), A.word(()))],
                               label=f"R({c})")
        node = BuildNode(A, "single_letter", {"n": n1},
                         monoid_size=hom.codomain.size)
        return system, node

    c = A.letters[-1]
    inner_sys, inner_node = _build_abelian(
        hom.restrict(A.letters[:-1]), relax, max_block_len, max_block_words
    )
    blocks = build_block_alphabet(inner_sys, A, c, max_block_len,
                                  max_block_words)
    n = order_lcm(hom)
    s = len(A) - 1
    t = 3 * n * (s + 4) + n
    t0 = (t + n + 3) * (n + 1)
    sep_block = blocks.letter_for((c,))
    markers = MarkerSet(blocks, sep_block, 3 * n, n)
    marker_count = markers.count()
    t_max = exact_span_bound(marker_count, t0, t)
    collapse = RunCollapseRules(blocks, n, t, n, label=f"T({c})/collapse")
    counts = CountNormalForm(
        blocks, A.letters, {a: hom.letter_order(a) for a in A.letters}, 3 * n
    )
    marker_rules = MarkerRules(blocks, markers, t, t_max, counts,
                               relax_upper_bound=relax,
                               label=f"T({c})/marker")
    t_system = UnionSystem(blocks, (collapse, marker_rules))
    system = compose_systems(inner_sys, materialize_small(t_system), c,
                             blocks, A, label=f"T({c})")
    node = BuildNode(
        A,
        "peel",
        {
            "c": c,
            "n": n,
            "s": s,
            "t": t,
            "t0": t0,
            "markers": marker_count,
            "t_max": t_max,
            "k_size": len(blocks),
        },
        monoid_size=hom.codomain.size,
        r_system=inner_sys,
        blocks=blocks,
        t_system=t_system,
        children=[inner_node],
    )
    return system, node

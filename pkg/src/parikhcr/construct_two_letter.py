"""Construction over a two-letter alphabet for an arbitrary finite group.

Same skeleton as the abelian construction, but the letter counts normal
form is replaced by a table of canonical words, one per group element, laid
out as separator runs with small slots, chosen with as few occurrences of
the first letter as possible.
"""

from __future__ import annotations

from collections import deque
from math import lcm

from .construct_abelian import (
    BuildNode,
    ConstructionArtifact,
    MarkerRules,
    MarkerSet,
    RunCollapseRules,
    compose_systems,
    exact_span_bound,
    materialize_small,
)
from .monoids import FiniteMonoid, Homomorphism
from .rewrite import RewriteSystem, UnionSystem
from .words import Alphabet, BlockAlphabet


def group_exponent(group: FiniteMonoid) -> int:
    return lcm(*(group.element_order(g) for g in range(group.size)))


def _min_letter_cost(hom: Homomorphism, costly: str) -> dict[int, int]:
    """Least number of `costly` letters needed to spell each element.

    0-1 breadth-first search on the right Cayley graph, free moves by the
    other letter.
    """
    group = hom.codomain
    start = group.identity
    dist = {start: 0}
    queue = deque([start])
    images = hom.images
    while queue:
        g = queue.popleft()
        for a, img in images.items():
            h = group.mul(g, img)
            cost = dist[g] + (1 if a == costly else 0)
            if h not in dist or cost < dist[h]:
                dist[h] = cost
                if a == costly:
                    queue.append(h)
                else:
                    queue.appendleft(h)
    return dist


def group_normal_forms(hom: Homomorphism, blocks: BlockAlphabet, n: int
                       ) -> dict[int, tuple]:
    """Canonical block word per group element.

    Layout: sep^(3n²) slot sep^(3n²) ... slot sep^(3n²) with n-1 slots, each
    slot one of  b^k  or  a·b^k  for 1 <= k <= n.  Among all layouts mapping
    to the element, the number of a's is minimal, ties broken by the slot
    option order b^1 < ... < b^n < ab^1 < ... < ab^n.
    """
    a, b = hom.alphabet.letters
    group = hom.codomain
    window = 3 * n * n
    sep_block = blocks.letter_for((b,))
    beta_run = group.power(hom.images[b], window)

    # slot options in tie-break order: (a-count, group value, block letters)
    options = []
    for k in range(1, n + 1):
        options.append((0, group.power(hom.images[b], k), (sep_block,) * k))
    ab_block = blocks.letter_for((a, b))
    if ab_block is not None:  # absent only for the trivial group (no slots)
        for k in range(1, n + 1):
            val = group.mul(hom.images[a], group.power(hom.images[b], k))
            options.append((1, val, (ab_block,) + (sep_block,) * (k - 1)))

    best: dict[int, tuple] = {beta_run: (0, ())}
    for _ in range(n - 1):
        nxt: dict[int, tuple] = {}
        for g, (acount, seq) in best.items():
            for oi, (oa, oval, _) in enumerate(options):
                h = group.mul(group.mul(g, oval), beta_run)
                cand = (acount + oa, seq + (oi,))
                if h not in nxt or cand < nxt[h]:
                    nxt[h] = cand
        best = nxt

    if len(best) != group.size:
        missing = [g for g in range(group.size) if g not in best]
        raise ValueError(
            f"normal-form table cannot reach elements {missing}; "
            f"is the homomorphism surjective onto the group?"
        )

    min_cost = _min_letter_cost(hom, a)
    table: dict[int, tuple] = {}
    for g, (acount, seq) in best.items():
        if acount != min_cost[g]:
            raise AssertionError(
                f"slot layout for element {g} needs {acount} occurrences of "
                f"{a!r} but {min_cost[g]} suffice; table would not be "
                f"count-reducing"
            )
        word = [sep_block] * window
        for oi in seq:
            word.extend(options[oi][2])
            word.extend([sep_block] * window)
        entry = tuple(word)
        if hom.evaluate(blocks.expand(entry)) != g:
            raise AssertionError(f"normal form for element {g} has wrong image")
        table[g] = entry
    return table


class TableNormalForm:
    """Rewrite target lookup: the canonical word of the image element."""

    kind = "table"

    def __init__(self, blocks: BlockAlphabet, hom: Homomorphism, table):
        self.blocks = blocks
        self.hom = hom
        self.table = dict(table)

    def __call__(self, kletters) -> tuple:
        g = self.hom.evaluate(self.blocks.expand(kletters))
        return self.table[g]

    def __eq__(self, other):
        if not isinstance(other, TableNormalForm):
            return NotImplemented
        return (
            self.blocks == other.blocks
            and self.hom == other.hom
            and self.table == other.table
        )


def construct_two_letter(hom: Homomorphism) -> ConstructionArtifact:
    """System for a homomorphism of a two-letter free monoid into a group."""
    A = hom.alphabet
    if len(A) != 2:
        raise ValueError("two-letter construction requires exactly two letters")
    cohom, _ = hom.image_monoid()
    if not cohom.codomain.is_group():
        raise ValueError("two-letter construction requires a group image")
    a, b = A.letters
    group = cohom.codomain
    n = group_exponent(group)
    wp = n * n
    t = wp * (3 * n + 7)
    t0 = (t + wp + 3) * (wp + 1)

    r_system = RewriteSystem(A, [(A.word((a,) * n), A.word(()))],
                             label=f"R({a})")
    blocks = BlockAlphabet(A, b, [(a,) * i + (b,) for i in range(n)])
    sep_block = blocks.letter_for((b,))
    markers = MarkerSet(blocks, sep_block, 3 * wp, wp)
    marker_count = markers.count()
    t_max = exact_span_bound(marker_count, t0, t)

    collapse = RunCollapseRules(blocks, wp, t, n, label=f"T({b})/collapse")
    table = group_normal_forms(cohom, blocks, n)
    _check_marker_content(table, markers, blocks, a, b)
    if n >= 2:
        for entry in table.values():
            if not (t - 7 * wp < len(entry) < t - 6 * wp):
                raise AssertionError("normal-form length outside its window")
    rhs = TableNormalForm(blocks, cohom, table)
    marker_rules = MarkerRules(blocks, markers, t, t_max, rhs,
                               label=f"T({b})/marker")
    t_system = UnionSystem(blocks, (collapse, marker_rules))
    system = compose_systems(r_system, materialize_small(t_system), b, blocks,
                             A, label=f"T({b})")
    node = BuildNode(
        A,
        "two_letter",
        {
            "n": n,
            "t": t,
            "t0": t0,
            "markers": marker_count,
            "t_max": t_max,
            "k_size": len(blocks),
        },
        monoid_size=group.size,
        r_system=r_system,
        blocks=blocks,
        t_system=t_system,
    )
    return ConstructionArtifact(system, node)


def _check_marker_content(table, markers: MarkerSet, blocks: BlockAlphabet,
                          a: str, b: str):
    """Table entries may only contain the minimal marker a·b^(window-1)."""
    W = markers.window
    ab_block = blocks.letter_for((a, b))
    sep_block = blocks.letter_for((b,))
    allowed = (ab_block,) + (sep_block,) * (W - 1)
    for g, entry in table.items():
        for q in markers.positions(entry):
            if entry[q : q + W] != allowed:
                raise AssertionError(
                    f"normal form for element {g} contains a non-minimal marker"
                )

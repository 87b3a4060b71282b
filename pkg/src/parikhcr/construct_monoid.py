"""Construction for finite monoids all of whose subgroups are abelian.

Group images dispatch to the dedicated group constructions; otherwise one
letter with a non-unit image is peeled off and the block alphabet is mapped
into the local divisor at that image, shrinking the monoid.  An optional
reduction pass shortens block letters through value collisions of their
prefixes, which keeps block alphabets small.
"""

from __future__ import annotations

from .construct_abelian import (
    BuildNode,
    ConstructionArtifact,
    build_block_alphabet,
    construct_abelian,
)
from .construct_two_letter import construct_two_letter
from .monoids import Homomorphism
from .rewrite import (
    LiftedSystem,
    RewriteSystem,
    System,
    UnionSystem,
    normal_form,
)
from .words import Alphabet, BlockAlphabet, Word


class UnsupportedCase(RuntimeError):
    """Cases outside the supported classes (open problem territory)."""


def _check_measure(parent: tuple[int, int], node: BuildNode):
    child = (node.monoid_size, len(node.alphabet))
    if not child < parent:
        raise AssertionError(
            f"recursion measure did not decrease: {parent} -> {child}"
        )


def psi_homomorphism(hom: Homomorphism, c: str, blocks: BlockAlphabet
                     ) -> Homomorphism:
    """Map of the block monoid into the local divisor at the image of c.

    A block u·c is sent to the value of c·u·c, which lies in the divisor
    carrier; chaining blocks multiplies exactly like the original map with
    a leading c.
    """
    monoid = hom.codomain
    c_img = hom.images[c]
    divisor = monoid.local_divisor(c_img)
    images = {}
    for name in blocks.letters:
        val = monoid.product(hom.images[x] for x in blocks.expansions[name])
        images[name] = divisor.from_base(monoid.mul(c_img, val))
    return Homomorphism(blocks, divisor, images)


def alphabet_reduce(blocks: BlockAlphabet, hom: Homomorphism,
                    r_system: System) -> tuple[BlockAlphabet, RewriteSystem]:
    """Shorten block prefixes beyond the monoid size via value collisions.

    For a prefix b1..bk with k above the monoid size there are positions
    i < j with equal prefix values and i + (k - j) within the bound; cutting
    b(i+1)..bj preserves the image and yields a deletion-only rule.  The cut
    prefix is re-reduced and the process iterates to a fixpoint.
    """
    monoid = hom.codomain
    bound = monoid.size
    sep = blocks.sep
    base = blocks.base
    rules: list[tuple[tuple, tuple]] = []
    finals = []
    for name in blocks.letters:
        cur = blocks.expansions[name][:-1]
        while len(cur) > bound:
            vals = [monoid.identity]
            acc = monoid.identity
            for x in cur:
                acc = monoid.mul(acc, hom.images[x])
                vals.append(acc)
            k = len(cur)
            cut = None
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    if vals[i] == vals[j] and i + (k - j) <= bound:
                        cut = (i, j)
                        break
                if cut:
                    break
            if cut is None:
                # no single cut reaches the bound; take the first collision
                for i in range(k + 1):
                    for j in range(i + 1, k + 1):
                        if vals[i] == vals[j]:
                            cut = (i, j)
                            break
                    if cut:
                        break
            if cut is None:
                raise AssertionError("pigeonhole collision missing")
            i, j = cut
            shorter = cur[:i] + cur[j:]
            rules.append((cur + (sep,), shorter + (sep,)))
            cur = normal_form(r_system, Word(base, shorter)).letters
        finals.append(cur)

    seen = set()
    unique_rules = []
    for lhs, rhs in rules:
        if (lhs, rhs) not in seen:
            seen.add((lhs, rhs))
            unique_rules.append((Word(base, lhs), Word(base, rhs)))
    reduction = RewriteSystem(base, unique_rules, label="reduce")

    index = base.index
    ordered = sorted(set(finals), key=lambda w: (len(w), [index[x] for x in w]))
    reduced = BlockAlphabet(base, sep, [w + (sep,) for w in ordered])
    return reduced, reduction


def construct_monoid(hom: Homomorphism, *, reduce_alphabet: bool = True,
                     max_block_len: int = 64, max_block_words: int = 20000
                     ) -> ConstructionArtifact:
    """Invariant Parikh-reducing Church-Rosser system for a monoid image
    whose subgroups are all abelian."""
    if len(hom.alphabet) == 0:
        raise ValueError("alphabet must be non-empty")
    cohom, _ = hom.image_monoid()
    image = cohom.codomain

    if image.is_group():
        if image.is_abelian():
            return construct_abelian(cohom, max_block_len=max_block_len,
                                     max_block_words=max_block_words)
        if len(hom.alphabet) == 2:
            return construct_two_letter(cohom)
        raise UnsupportedCase(
            "unsupported: open problem — non-abelian group image over an "
            f"alphabet of {len(hom.alphabet)} letters"
        )

    witness = hom.codomain.non_abelian_subgroup_witness()
    if witness is not None:
        e, members = witness
        raise ValueError(
            f"monoid outside the supported class: non-abelian maximal "
            f"subgroup {members} at idempotent {e}"
        )

    A = cohom.alphabet
    if len(A) == 1:
        c = A.letters[0]
        i, p = image.index_period(cohom.images[c])
        system = RewriteSystem(
            A, [(A.word((c,) * (i + p)), A.word((c,) * i))], label=f"R({c})"
        )
        node = BuildNode(A, "monogenic", {"index": i, "period": p},
                         monoid_size=image.size)
        return ConstructionArtifact(system, node)

    c = next(
        (x for x in reversed(A.letters) if not image.is_unit(cohom.images[x])),
        None,
    )
    if c is None:
        raise AssertionError("non-group image must have a non-unit letter")
    b_letters = [x for x in A.letters if x != c]
    inner = construct_monoid(hom.restrict(b_letters),
                             reduce_alphabet=reduce_alphabet,
                             max_block_len=max_block_len,
                             max_block_words=max_block_words)
    _check_measure((image.size, len(A)), inner.root)
    r_system = inner.system

    blocks = build_block_alphabet(r_system, A, c, max_block_len,
                                  max_block_words)
    reduction = None
    if reduce_alphabet:
        blocks, reduction = alphabet_reduce(blocks, cohom, r_system)
        if not reduction.rules:
            reduction = None

    psi = psi_homomorphism(cohom, c, blocks)
    t_artifact = construct_monoid(psi, reduce_alphabet=reduce_alphabet,
                                  max_block_len=max_block_len,
                                  max_block_words=max_block_words)
    _check_measure((image.size, len(A)), t_artifact.root)
    t_system = t_artifact.system

    system = _assemble(A, r_system, reduction, c, blocks, t_system)
    node = BuildNode(
        A,
        "peel",
        {
            "c": c,
            "k_size": len(blocks),
            "divisor_size": psi.codomain.size,
            "reduced": reduction is not None,
        },
        monoid_size=image.size,
        r_system=r_system,
        blocks=blocks,
        t_system=t_system,
        children=[inner.root, t_artifact.root],
    )
    return ConstructionArtifact(system, node)


def _assemble(alphabet: Alphabet, r_system: System,
              reduction: RewriteSystem | None, sep: str,
              blocks: BlockAlphabet, t_system: System) -> System:
    if r_system.is_explicit and t_system.is_explicit:
        pairs = [(r.lhs, r.rhs) for r in r_system.rules]
        if reduction is not None:
            pairs.extend(
                (Word(alphabet, r.lhs.letters), Word(alphabet, r.rhs.letters))
                for r in reduction.rules
            )
        for rule in t_system.rules:
            lhs = (sep,) + blocks.expand(rule.lhs.letters)
            rhs = (sep,) + blocks.expand(rule.rhs.letters)
            pairs.append((Word(alphabet, lhs), Word(alphabet, rhs)))
        return RewriteSystem(alphabet, pairs)
    parts: list[System] = [r_system]
    if reduction is not None:
        parts.append(reduction)
    parts.append(LiftedSystem(alphabet, sep, blocks, t_system,
                              label=f"T({sep})"))
    return UnionSystem(alphabet, tuple(parts))

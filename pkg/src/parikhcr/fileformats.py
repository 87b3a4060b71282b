"""Text serialization of rewriting systems (.sts).

Explicit systems list their rules; schematic systems serialize as nested
parameter blocks and are reconstructed on load, never expanded.  Block
alphabets appear once per scope and are inherited by nested systems.
"""

from __future__ import annotations

from .construct_abelian import (
    AstronomicalBound,
    CountNormalForm,
    MarkerRules,
    MarkerSet,
    RunCollapseRules,
)
from .construct_two_letter import TableNormalForm
from .monoids import FiniteMonoid, Homomorphism
from .rewrite import LiftedSystem, RewriteSystem, System, UnionSystem
from .words import Alphabet, BlockAlphabet


class StsFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.items.append((lineno, body.split()))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self):
        item = self.peek()
        if item is None:
            raise StsFormatError(0, "unexpected end of file")
        self.pos += 1
        return item

    def expect(self, head: str):
        lineno, parts = self.next()
        if parts[0] != head:
            raise StsFormatError(lineno, f"expected {head!r}, got {parts[0]!r}")
        return lineno, parts


def parse_sts(text: str) -> System:
    lines = _Lines(text)
    system = _parse_system(lines, None)
    if lines.peek() is not None:
        lineno, parts = lines.peek()
        raise StsFormatError(lineno, f"trailing content {' '.join(parts)!r}")
    return system


def _parse_blocks(lines: _Lines, base: Alphabet, sep: str) -> BlockAlphabet:
    lines.expect("blocks")
    names = []
    expansions = []
    while True:
        lineno, parts = lines.next()
        if parts[0] == "end":
            break
        if parts[0] != "block" or "=" not in parts:
            raise StsFormatError(lineno, "expected 'block <name> = <letters>'")
        eq = parts.index("=")
        if eq != 2:
            raise StsFormatError(lineno, "expected 'block <name> = <letters>'")
        names.append(parts[1])
        expansions.append(tuple(parts[3:]))
    try:
        return BlockAlphabet(base, sep, expansions, names)
    except ValueError as exc:
        raise StsFormatError(lineno, str(exc)) from exc


def _parse_system(lines: _Lines, context: Alphabet | None) -> System:
    lineno, parts = lines.expect("system")
    if len(parts) != 2:
        raise StsFormatError(lineno, "expected 'system <kind>'")
    kind = parts[1]
    label = None
    alphabet = context

    nxt = lines.peek()
    if nxt and nxt[1][0] == "label":
        label = " ".join(lines.next()[1][1:])
        nxt = lines.peek()
    if nxt and nxt[1][0] == "alphabet":
        alphabet = Alphabet(lines.next()[1][1:])
        nxt = lines.peek()
    elif nxt and nxt[1][0] == "base":
        base = Alphabet(lines.next()[1][1:])
        _, sep_parts = lines.expect("sep")
        alphabet = _parse_blocks(lines, base, sep_parts[1])
        nxt = lines.peek()

    if alphabet is None:
        raise StsFormatError(lineno, f"system {kind} has no alphabet in scope")

    if kind == "explicit":
        return _parse_explicit(lines, alphabet, label)
    if kind == "union":
        return _parse_union(lines, alphabet, label)
    if kind == "lifted":
        return _parse_lifted(lines, alphabet, label)
    if kind == "collapse":
        return _parse_collapse(lines, alphabet, label)
    if kind == "marker":
        return _parse_marker(lines, alphabet, label)
    raise StsFormatError(lineno, f"unknown system kind {kind!r}")


def _parse_explicit(lines, alphabet, label):
    rules = []
    while True:
        lineno, parts = lines.next()
        if parts[0] == "end":
            break
        if parts[0] != "rule" or "->" not in parts:
            raise StsFormatError(lineno, "expected 'rule <lhs> -> <rhs>'")
        arrow = parts.index("->")
        try:
            rules.append(
                (alphabet.word(parts[1:arrow]), alphabet.word(parts[arrow + 1:]))
            )
        except ValueError as exc:
            raise StsFormatError(lineno, str(exc)) from exc
    try:
        return RewriteSystem(alphabet, rules, label=label)
    except ValueError as exc:
        raise StsFormatError(lineno, str(exc)) from exc


def _parse_union(lines, alphabet, label):
    parts_list = []
    while True:
        lineno, parts = lines.next()
        if parts[0] == "end":
            break
        if parts[0] != "sub":
            raise StsFormatError(lineno, "expected 'sub' or 'end'")
        parts_list.append(_parse_system(lines, alphabet))
    return UnionSystem(alphabet, tuple(parts_list), label=label)


def _parse_lifted(lines, alphabet, label):
    _, sep_parts = lines.expect("sep")
    sep = sep_parts[1]
    blocks = _parse_blocks(lines, alphabet, sep)
    lines.expect("sub")
    inner = _parse_system(lines, blocks)
    lines.expect("end")
    return LiftedSystem(alphabet, sep, blocks, inner, label=label)


def _parse_params(lines, allowed):
    values = {}
    while True:
        lineno, parts = lines.peek() or (0, ["end"])
        if parts[0] not in allowed:
            return values
        lines.next()
        values[parts[0]] = (lineno, parts[1:])


def _parse_collapse(lines, alphabet, label):
    vals = _parse_params(lines, {"maxperiod", "power", "step"})
    lines.expect("end")
    try:
        return RunCollapseRules(
            alphabet,
            int(vals["maxperiod"][1][0]),
            int(vals["power"][1][0]),
            int(vals["step"][1][0]),
            label=label,
        )
    except (KeyError, ValueError, IndexError) as exc:
        raise StsFormatError(0, f"bad collapse parameters: {exc}") from exc


def _parse_marker(lines, alphabet, label):
    if not isinstance(alphabet, BlockAlphabet):
        raise StsFormatError(0, "marker systems need a block alphabet")
    vals = _parse_params(
        lines,
        {"sepblock", "window", "periodbound", "minspan", "maxspan", "relax"},
    )
    lineno, parts = lines.expect("rhs")
    rhs_kind = parts[1]
    window = int(vals["window"][1][0])
    if rhs_kind == "counts":
        orders = {}
        order_seq = []
        while True:
            lineno, parts = lines.next()
            if parts[0] == "endrhs":
                break
            if parts[0] != "order":
                raise StsFormatError(lineno, "expected 'order <letter> <n>'")
            orders[parts[1]] = int(parts[2])
            order_seq.append(parts[1])
        rhs = CountNormalForm(alphabet, tuple(order_seq), orders, window)
    elif rhs_kind == "table":
        rhs = _parse_table_rhs(lines, alphabet)
    else:
        raise StsFormatError(lineno, f"unknown rhs kind {rhs_kind!r}")
    lines.expect("end")
    try:
        markers = MarkerSet(
            alphabet,
            vals["sepblock"][1][0],
            window,
            int(vals["periodbound"][1][0]),
        )
        max_parts = vals["maxspan"][1]
        if max_parts[0] == "pow2":
            max_span = AstronomicalBound(int(max_parts[1]), int(max_parts[2]),
                                         int(max_parts[3]))
        else:
            max_span = int(max_parts[0])
        return MarkerRules(
            alphabet,
            markers,
            int(vals["minspan"][1][0]),
            max_span,
            rhs,
            relax_upper_bound=bool(int(vals.get("relax", (0, ["0"]))[1][0])),
            label=label,
        )
    except (KeyError, ValueError, IndexError) as exc:
        raise StsFormatError(0, f"bad marker parameters: {exc}") from exc


def _parse_table_rhs(lines, blocks: BlockAlphabet):
    lineno, parts = lines.expect("monoid")
    size, identity = int(parts[1]), int(parts[2])
    rows = []
    for _ in range(size):
        lineno, parts = lines.expect("row")
        rows.append([int(x) for x in parts[1:]])
    try:
        monoid = FiniteMonoid(rows, identity)
    except ValueError as exc:
        raise StsFormatError(lineno, str(exc)) from exc
    images = {}
    letters = []
    while True:
        lineno, parts = lines.next()
        if parts[0] != "img":
            break
        images[parts[1]] = int(parts[2])
        letters.append(parts[1])
    table = {}
    while parts[0] == "entry":
        table[int(parts[1])] = tuple(parts[2:])
        lineno, parts = lines.next()
    if parts[0] != "endrhs":
        raise StsFormatError(lineno, "expected 'endrhs'")
    hom = Homomorphism(Alphabet(letters), monoid, images)
    return TableNormalForm(blocks, hom, table)


# -- serialization -------------------------------------------------------------


def format_sts(system: System) -> str:
    out: list[str] = []
    _emit(system, None, out, 0)
    return "\n".join(out) + "\n"


def _emit_alphabet_spec(alphabet, context, out, ind):
    if context is not None and alphabet == context:
        return
    if isinstance(alphabet, BlockAlphabet):
        out.append(f"{ind}base {' '.join(alphabet.base.letters)}")
        out.append(f"{ind}sep {alphabet.sep}")
        _emit_blocks(alphabet, out, ind)
    else:
        out.append(f"{ind}alphabet {' '.join(alphabet.letters)}")


def _emit_blocks(blocks: BlockAlphabet, out, ind):
    out.append(f"{ind}blocks")
    for name in blocks.letters:
        out.append(f"{ind}block {name} = {' '.join(blocks.expansions[name])}")
    out.append(f"{ind}end")


def _emit(system: System, context, out, depth):
    ind = "  " * depth

    def put(text):
        out.append(f"{ind}{text}")

    if isinstance(system, RewriteSystem):
        put("system explicit")
        if system.label:
            put(f"label {system.label}")
        _emit_alphabet_spec(system.alphabet, context, out, ind)
        for rule in system.rules:
            put(f"rule {' '.join(rule.lhs.letters)} -> {' '.join(rule.rhs.letters)}".rstrip())
        put("end")
    elif isinstance(system, UnionSystem):
        put("system union")
        if system.label:
            put(f"label {system.label}")
        _emit_alphabet_spec(system.alphabet, context, out, ind)
        for part in system.parts:
            put("sub")
            _emit(part, system.alphabet, out, depth + 1)
        put("end")
    elif isinstance(system, LiftedSystem):
        put("system lifted")
        if system.label:
            put(f"label {system.label}")
        _emit_alphabet_spec(system.alphabet, context, out, ind)
        put(f"sep {system.sep}")
        _emit_blocks(system.blocks, out, ind)
        put("sub")
        _emit(system.inner, system.blocks, out, depth + 1)
        put("end")
    elif isinstance(system, RunCollapseRules):
        put("system collapse")
        if system.label:
            put(f"label {system.label}")
        _emit_alphabet_spec(system.alphabet, context, out, ind)
        put(f"maxperiod {system.max_period}")
        put(f"power {system.power}")
        put(f"step {system.step}")
        put("end")
    elif isinstance(system, MarkerRules):
        put("system marker")
        if system.label:
            put(f"label {system.label}")
        _emit_alphabet_spec(system.alphabet, context, out, ind)
        put(f"sepblock {system.markers.sep}")
        put(f"window {system.markers.window}")
        put(f"periodbound {system.markers.period_bound}")
        put(f"minspan {system.min_span}")
        bound = system.max_span
        if isinstance(bound, AstronomicalBound):
            put(f"maxspan pow2 {bound.exponent} {bound.factor} {bound.offset}")
        else:
            put(f"maxspan {bound}")
        put(f"relax {int(system.relax_upper_bound)}")
        _emit_rhs(system.rhs, out, ind)
        put("end")
    else:
        raise TypeError(f"cannot serialize {type(system).__name__}")


def _emit_rhs(rhs, out, ind):
    if isinstance(rhs, CountNormalForm):
        out.append(f"{ind}rhs counts")
        for a in rhs.letter_order:
            out.append(f"{ind}order {a} {rhs.orders[a]}")
        out.append(f"{ind}endrhs")
    elif isinstance(rhs, TableNormalForm):
        out.append(f"{ind}rhs table")
        monoid = rhs.hom.codomain
        out.append(f"{ind}monoid {monoid.size} {monoid.identity}")
        for row in monoid.table:
            out.append(f"{ind}row {' '.join(str(x) for x in row)}")
        for a in rhs.hom.alphabet.letters:
            out.append(f"{ind}img {a} {rhs.hom.images[a]}")
        for g in sorted(rhs.table):
            out.append(f"{ind}entry {g} {' '.join(rhs.table[g])}")
        out.append(f"{ind}endrhs")
    else:
        raise TypeError(f"cannot serialize rhs {type(rhs).__name__}")

"""Finite monoids as multiplication tables, homomorphisms, local divisors."""

from __future__ import annotations

from itertools import permutations
from math import lcm

from .words import Alphabet, Word, expand_letters_to


class MonFormatError(ValueError):
    """Parse error in the .mon text format, carrying a line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class FiniteMonoid:
    """Multiplication table with identity; validated on construction.

    Elements are indices 0..size-1.  The table is checked to be associative
    (cubic scan) and the identity row/column must be the identity map.
    """

    __slots__ = ("size", "identity", "table")

    def __init__(self, table, identity=None, validate=True):
        table = tuple(tuple(int(x) for x in row) for row in table)
        size = len(table)
        if size < 1:
            raise ValueError("monoid must have at least one element")
        for row in table:
            if len(row) != size:
                raise ValueError("multiplication table must be square")
            for x in row:
                if not 0 <= x < size:
                    raise ValueError(f"table entry {x} out of range")
        if identity is None:
            identity = next(
                (
                    e
                    for e in range(size)
                    if all(table[e][x] == x == table[x][e] for x in range(size))
                ),
                None,
            )
            if identity is None:
                raise ValueError("table has no identity element")
        self.size = size
        self.identity = int(identity)
        self.table = table
        if validate:
            self._validate()

    def _validate(self):
        e = self.identity
        t = self.table
        n = self.size
        for x in range(n):
            if t[e][x] != x or t[x][e] != x:
                raise ValueError(f"element {self.identity} is not an identity")
        for x in range(n):
            tx = t[x]
            for y in range(n):
                txy = tx[y]
                ty = t[y]
                for z in range(n):
                    if t[txy][z] != tx[ty[z]]:
                        raise ValueError(
                            f"table not associative at ({x},{y},{z})"
                        )

    # -- arithmetic --------------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, elements) -> int:
        acc = self.identity
        t = self.table
        for g in elements:
            acc = t[acc][g]
        return acc

    def power(self, g: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][g]
        return acc

    def index_period(self, g: int) -> tuple[int, int]:
        """(i, p) with g^(i+p) = g^i, both minimal, i >= 1."""
        seen = {}
        acc = g
        k = 1
        while acc not in seen:
            seen[acc] = k
            acc = self.table[acc][g]
            k += 1
        i = seen[acc]
        return i, k - i

    def element_order(self, g: int) -> int:
        """Least k >= 1 with g^k equal to the idempotent power of g.

        For an element of a subgroup whose identity is the monoid identity
        this is the classical order.
        """
        i, p = self.index_period(g)
        # least multiple of p that is >= i
        return ((i + p - 1) // p) * p

    def idempotent_power(self, g: int) -> int:
        return self.power(g, self.element_order(g))

    # -- structure ---------------------------------------------------------

    def is_unit(self, g: int) -> bool:
        e = self.identity
        t = self.table
        return any(t[g][y] == e and t[y][g] == e for y in range(self.size))

    def units(self) -> list[int]:
        return [g for g in range(self.size) if self.is_unit(g)]

    def is_group(self) -> bool:
        return all(self.is_unit(g) for g in range(self.size))

    def is_abelian(self) -> bool:
        t = self.table
        n = self.size
        return all(t[x][y] == t[y][x] for x in range(n) for y in range(x + 1, n))

    def idempotents(self) -> list[int]:
        return [x for x in range(self.size) if self.table[x][x] == x]

    def maximal_subgroups(self) -> list[tuple[int, tuple[int, ...]]]:
        """Per idempotent e, the group of invertible elements of e*M*e.

        Every subsemigroup of M that is a group embeds in one of these, so
        they suffice to decide subgroup properties.
        """
        out = []
        t = self.table
        for e in self.idempotents():
            corner = sorted({t[t[e][x]][e] for x in range(self.size)})
            members = tuple(
                x
                for x in corner
                if any(t[x][y] == e and t[y][x] == e for y in corner)
            )
            out.append((e, members))
        return out

    def non_abelian_subgroup_witness(self) -> tuple[int, tuple[int, ...]] | None:
        for e, members in self.maximal_subgroups():
            t = self.table
            for x in members:
                for y in members:
                    if t[x][y] != t[y][x]:
                        return e, members
        return None

    def has_only_abelian_subgroups(self) -> bool:
        return self.non_abelian_subgroup_witness() is None

    def submonoid_generated(self, generators):
        """Closure of the generators plus identity.

        Returns (monoid, elements) where elements[i] is the old index of the
        new element i.
        """
        elems = [self.identity]
        pos = {self.identity: 0}
        queue = list(elems)
        gens = [g for g in generators]
        while queue:
            x = queue.pop()
            for g in gens:
                for y in (self.table[x][g], self.table[g][x]):
                    if y not in pos:
                        pos[y] = len(elems)
                        elems.append(y)
                        queue.append(y)
        table = [[pos[self.table[x][y]] for y in elems] for x in elems]
        return FiniteMonoid(table, identity=0, validate=False), tuple(elems)

    def local_divisor(self, c: int) -> "LocalDivisor":
        return LocalDivisor(self, c)

    # -- constructions -----------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteMonoid":
        return cls([[(x + y) % n for y in range(n)] for x in range(n)], 0)

    @classmethod
    def monogenic(cls, index: int, period: int) -> "FiniteMonoid":
        """1, x, ..., x^(index+period-1) with x^(index+period) = x^index."""
        if index < 1 or period < 1:
            raise ValueError("index and period must be >= 1")
        size = index + period

        def red(e):
            return e if e < size else ((e - index) % period) + index

        return cls([[red(x + y) for y in range(size)] for x in range(size)], 0)

    @classmethod
    def direct_product(cls, a: "FiniteMonoid", b: "FiniteMonoid") -> "FiniteMonoid":
        nb = b.size

        def idx(x, y):
            return x * nb + y

        table = [
            [
                idx(a.table[xa][ya], b.table[xb][yb])
                for ya in range(a.size)
                for yb in range(nb)
            ]
            for xa in range(a.size)
            for xb in range(nb)
        ]
        return cls(table, idx(a.identity, b.identity), validate=False)

    @classmethod
    def symmetric3(cls) -> "FiniteMonoid":
        perms = sorted(permutations(range(3)))
        pos = {p: i for i, p in enumerate(perms)}

        def compose(p, q):
            return tuple(p[q[i]] for i in range(3))

        table = [[pos[compose(p, q)] for q in perms] for p in perms]
        return cls(table, pos[(0, 1, 2)])

    @classmethod
    def left_zero_with_identity(cls, k: int) -> "FiniteMonoid":
        """k left-zero elements (x*y = x) with an adjoined identity 0."""
        size = k + 1
        table = [list(range(size))]
        for x in range(1, size):
            table.append([x] * size)
        return cls(table, 0)

    def __eq__(self, other):
        if not isinstance(other, FiniteMonoid):
            return NotImplemented
        return self.table == other.table and self.identity == other.identity

    def __hash__(self):
        return hash((self.identity, self.table))

    def __repr__(self):
        return f"FiniteMonoid(size={self.size}, identity={self.identity})"


class LocalDivisor(FiniteMonoid):
    """The monoid on cM ∩ Mc with product (uc) ∘ (cv) = ucv and unit c.

    The product is computed through representative choice; construction
    audits that every choice of representative yields the same product, so a
    broken base table is caught immediately.
    """

    __slots__ = ("base", "c", "carrier")

    def __init__(self, base: FiniteMonoid, c: int):
        t = base.table
        n = base.size
        right = {t[c][v] for v in range(n)}
        left = {t[u][c] for u in range(n)}
        carrier = tuple(sorted(right & left))
        pos = {x: i for i, x in enumerate(carrier)}
        reps = {x: [u for u in range(n) if t[u][c] == x] for x in carrier}
        table = []
        for x in carrier:
            row = []
            for y in carrier:
                prods = {t[u][y] for u in reps[x]}
                if len(prods) != 1:
                    raise ValueError(
                        f"local product at c={c} ill-defined for ({x},{y})"
                    )
                row.append(pos[prods.pop()])
            table.append(row)
        self.base = base
        self.c = c
        self.carrier = carrier
        super().__init__(table, identity=pos[c], validate=True)
        if not base.is_unit(c) and len(carrier) >= base.size:
            raise ValueError("local divisor at a non-unit must be smaller")

    def to_base(self, x: int) -> int:
        return self.carrier[x]

    def from_base(self, x: int) -> int:
        return self.carrier.index(x)

    def __repr__(self):
        return f"LocalDivisor(c={self.c}, size={self.size})"


class Homomorphism:
    """Map from a free monoid into a finite monoid, given on letters."""

    __slots__ = ("alphabet", "codomain", "images")

    def __init__(self, alphabet: Alphabet, codomain: FiniteMonoid, images):
        images = dict(images)
        for a in alphabet.letters:
            g = images.get(a)
            if g is None:
                raise ValueError(f"no image for letter {a!r}")
            if not 0 <= g < codomain.size:
                raise ValueError(f"image of {a!r} out of range")
        self.alphabet = alphabet
        self.codomain = codomain
        self.images = {a: images[a] for a in alphabet.letters}

    def evaluate(self, word) -> int:
        letters = word.letters if isinstance(word, Word) else tuple(word)
        if isinstance(word, Word) and word.alphabet != self.alphabet:
            letters = expand_letters_to(word.alphabet, letters, self.alphabet)
        images = self.images
        acc = self.codomain.identity
        t = self.codomain.table
        for a in letters:
            g = images.get(a)
            if g is None:
                raise ValueError(f"letter {a!r} outside homomorphism domain")
            acc = t[acc][g]
        return acc

    __call__ = evaluate

    def letter_order(self, a: str) -> int:
        return self.codomain.element_order(self.images[a])

    def restrict(self, letters) -> "Homomorphism":
        keep = [a for a in self.alphabet.letters if a in set(letters)]
        return Homomorphism(
            Alphabet(keep), self.codomain, {a: self.images[a] for a in keep}
        )

    def image_monoid(self) -> tuple["Homomorphism", tuple[int, ...]]:
        """Corestriction onto the submonoid generated by the letter images."""
        sub, elems = self.codomain.submonoid_generated(self.images.values())
        back = {old: new for new, old in enumerate(elems)}
        hom = Homomorphism(
            self.alphabet, sub, {a: back[g] for a, g in self.images.items()}
        )
        return hom, elems

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __repr__(self):
        inner = ", ".join(f"{a}->{g}" for a, g in self.images.items())
        return f"Homomorphism({inner})"


def order_lcm(hom: Homomorphism) -> int:
    """lcm of the orders of the letter images."""
    return lcm(*(hom.letter_order(a) for a in hom.alphabet.letters))


# -- .mon text format -------------------------------------------------------


def parse_mon(text: str) -> tuple[FiniteMonoid, Homomorphism | None]:
    """Parse the .mon format: size, identity, table rows, optional hom lines."""
    size = None
    identity = None
    rows = []
    hom_items: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "size":
                size = int(parts[1])
            elif head == "identity":
                identity = int(parts[1])
            elif head == "hom":
                hom_items.append((parts[1], int(parts[2])))
            else:
                rows.append(([int(x) for x in parts], lineno))
        except (IndexError, ValueError) as exc:
            raise MonFormatError(lineno, f"cannot parse {line!r}") from exc
        if size is not None and len(rows) > size:
            raise MonFormatError(lineno, "more table rows than declared size")
    if size is None:
        raise MonFormatError(0, "missing 'size' line")
    if identity is None:
        raise MonFormatError(0, "missing 'identity' line")
    if len(rows) != size:
        raise MonFormatError(0, f"expected {size} table rows, got {len(rows)}")
    for row, lineno in rows:
        if len(row) != size:
            raise MonFormatError(lineno, f"expected {size} entries in row")
    try:
        monoid = FiniteMonoid([row for row, _ in rows], identity)
    except ValueError as exc:
        raise MonFormatError(0, str(exc)) from exc
    hom = None
    if hom_items:
        letters = [a for a, _ in hom_items]
        try:
            hom = Homomorphism(Alphabet(letters), monoid, dict(hom_items))
        except ValueError as exc:
            raise MonFormatError(0, str(exc)) from exc
    return monoid, hom


def format_mon(monoid: FiniteMonoid, hom: Homomorphism | None = None) -> str:
    lines = [f"size {monoid.size}", f"identity {monoid.identity}"]
    for row in monoid.table:
        lines.append(" ".join(str(x) for x in row))
    if hom is not None:
        for a in hom.alphabet.letters:
            lines.append(f"hom {a} {hom.images[a]}")
    return "\n".join(lines) + "\n"

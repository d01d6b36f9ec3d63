"""Groups with exact normal forms: free, free abelian and finite.

Elements are plain hashable values in normal form:

* free group: tuple of nonzero ints, ``k`` for the k-th generator and ``-k``
  for its inverse, freely reduced;
* free abelian group: tuple of exponents;
* finite group: an element id ``0..n-1`` of the multiplication table.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from typing import NamedTuple

SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")


class WordError(ValueError):
    """Raised for words that cannot be parsed over a group's alphabet."""


class Group:
    kind = "abstract"

    def __init__(self, symbols: dict):
        # symbol -> element for every letter of the alphabet
        self.symbols = dict(symbols)
        self._by_length = sorted(self.symbols, key=len, reverse=True)

    # subclasses provide identity, multiply, inverse, format, order_key

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def power(self, g, n: int):
        if n < 0:
            g, n = self.inverse(g), -n
        out = self.identity
        base = g
        while n:
            if n & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            n >>= 1
        return out

    def product(self, elements):
        out = self.identity
        for g in elements:
            out = self.multiply(out, g)
        return out

    def commutator(self, g, h):
        return self.product([g, h, self.inverse(g), self.inverse(h)])

    def conjugate(self, g, h):
        """h g h^-1"""
        return self.product([h, g, self.inverse(h)])

    def normal_form(self, word):
        """Parse a word (string) or a list of symbols into its normal form."""
        if isinstance(word, str):
            return _WordParser(self, word).parse()
        out = self.identity
        for sym in word:
            out = self.multiply(out, self.parse_letter(sym))
        return out

    parse = normal_form

    def parse_letter(self, sym: str):
        if sym in self.symbols:
            return self.symbols[sym]
        if sym.endswith("^-1") and sym[:-3] in self.symbols:
            return self.inverse(self.symbols[sym[:-3]])
        raise WordError(f"unknown symbol {sym!r}")

    def is_identity(self, g) -> bool:
        return g == self.identity

    def check_element(self, g):
        """Raise if g is not a normal form of this group."""
        raise NotImplementedError

    def format(self, g) -> str:
        raise NotImplementedError

    def order_key(self, g):
        """Total order used to break ShortLex ties."""
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def symmetric_generators(self) -> list:
        out = []
        for g in self.generators():
            for h in (g, self.inverse(g)):
                if h != self.identity and h not in out:
                    out.append(h)
        return out

    def is_finite(self) -> bool:
        return False


class _WordParser:
    """Recursive descent over  expr := term*,  term := atom ('^' int)?,
    atom := symbol | '1' | '(' expr ')' | '[' expr ',' expr ']'."""

    def __init__(self, group: Group, text: str):
        self.group = group
        self.text = text.translate(SUPERSCRIPTS).replace("−", "-")
        self.pos = 0

    def error(self, msg):
        raise WordError(f"{msg} at offset {self.pos} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t*·.":
            self.pos += 1

    def parse(self):
        g = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected character")
        return g

    def expr(self):
        group = self.group
        out = group.identity
        while True:
            self.skip()
            if self.pos >= len(self.text) or self.text[self.pos] in ",])":
                return out
            out = group.multiply(out, self.term())

    def term(self):
        g = self.atom()
        self.skip()
        if self.pos < len(self.text) and self.text[self.pos] == "^":
            self.pos += 1
            m = re.compile(r"\s*(-?\d+)").match(self.text, self.pos)
            if not m:
                self.error("bad exponent")
            self.pos = m.end()
            g = self.group.power(g, int(m.group(1)))
        return g

    def atom(self):
        group = self.group
        text = self.text
        for sym in group._by_length:
            if text.startswith(sym, self.pos):
                self.pos += len(sym)
                return group.symbols[sym]
        c = text[self.pos]
        if c == "1":
            self.pos += 1
            return group.identity
        if c == "(":
            self.pos += 1
            g = self.expr()
            self.expect(")")
            return g
        if c == "[":
            self.pos += 1
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect("]")
            return group.commutator(u, v)
        self.error(f"unknown symbol {c!r}")

    def expect(self, c):
        self.skip()
        if self.pos >= len(self.text) or self.text[self.pos] != c:
            self.error(f"expected {c!r}")
        self.pos += 1


def _default_names(rank, pool):
    if rank <= len(pool):
        return list(pool[:rank])
    return [f"{pool[0]}{k + 1}" for k in range(rank)]


def _format_power(name, e):
    return name if e == 1 else f"{name}^{e}"


class FreeGroup(Group):
    kind = "free"

    def __init__(self, rank: int, names=None):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.names = list(names) if names else _default_names(rank, "abcdefgh")
        if len(self.names) != rank:
            raise ValueError("need one name per generator")
        self.identity = ()
        super().__init__({n: (k + 1,) for k, n in enumerate(self.names)})

    def __repr__(self):
        return f"FreeGroup({self.rank})"

    def multiply(self, g, h):
        k = 0
        n = min(len(g), len(h))
        while k < n and g[len(g) - 1 - k] == -h[k]:
            k += 1
        return g[: len(g) - k] + h[k:]

    def inverse(self, g):
        return tuple(-x for x in reversed(g))

    def check_element(self, g):
        if not isinstance(g, tuple) or any(
            not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in g
        ):
            raise WordError(f"not an element of {self!r}: {g!r}")
        if any(a == -b for a, b in zip(g, g[1:])):
            raise WordError(f"not freely reduced: {g!r}")

    def format(self, g):
        if not g:
            return "1"
        parts = []
        for x, run in itertools.groupby(g):
            e = len(list(run)) * (1 if x > 0 else -1)
            parts.append(_format_power(self.names[abs(x) - 1], e))
        return " ".join(parts)

    def order_key(self, g):
        return (len(g), tuple(2 * (abs(x) - 1) + (x < 0) for x in g))

    def generators(self):
        return [(k + 1,) for k in range(self.rank)]


class FreeAbelianGroup(Group):
    kind = "abelian"

    def __init__(self, rank: int, names=None):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.names = list(names) if names else _default_names(rank, "xyzw")
        if len(self.names) != rank:
            raise ValueError("need one name per generator")
        self.identity = (0,) * rank
        super().__init__({n: self._unit(k) for k, n in enumerate(self.names)})

    def __repr__(self):
        return f"FreeAbelianGroup({self.rank})"

    def _unit(self, k):
        return tuple(int(j == k) for j in range(self.rank))

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def check_element(self, g):
        if not isinstance(g, tuple) or len(g) != self.rank:
            raise WordError(f"not an element of {self!r}: {g!r}")

    def format(self, g):
        parts = [_format_power(n, e) for n, e in zip(self.names, g) if e]
        return " ".join(parts) if parts else "1"

    def order_key(self, g):
        return (sum(abs(a) for a in g), tuple((abs(a), a < 0) for a in g))

    def generators(self):
        return [self._unit(k) for k in range(self.rank)]


class FiniteGroup(Group):
    """Group given by a multiplication table ``table[g][h] = g*h``."""

    kind = "finite"

    def __init__(self, table, names=None, generators=None, check=True):
        self.table = [list(row) for row in table]
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square and non-empty")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise ValueError("table entries must be element ids")
        self.order = n
        ids = [e for e in range(n) if all(self.table[e][g] == g == self.table[g][e] for g in range(n))]
        if not ids:
            raise ValueError("table has no identity")
        self.identity = ids[0]
        self._inv = {}
        for g in range(n):
            inv = [h for h in range(n) if self.table[g][h] == self.identity]
            if len(inv) != 1 or self.table[inv[0]][g] != self.identity:
                raise ValueError(f"element {g} has no two-sided inverse")
            self._inv[g] = inv[0]
        if check and any(
            self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]
            for a in range(n) for b in range(n) for c in range(n)
        ):
            raise ValueError("table is not associative")
        if names is None:
            names = ["1" if g == self.identity else f"g{g}" for g in range(n)]
        self.names = list(names)
        self._gens = list(generators) if generators is not None else [
            g for g in range(n) if g != self.identity
        ]
        super().__init__({nm: g for g, nm in enumerate(self.names) if g != self.identity})

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def multiply(self, g, h):
        return self.table[g][h]

    def inverse(self, g):
        return self._inv[g]

    def check_element(self, g):
        if not isinstance(g, int) or not 0 <= g < self.order:
            raise WordError(f"not an element of {self!r}: {g!r}")

    def format(self, g):
        return self.names[g]

    def order_key(self, g):
        return (g,)

    def generators(self):
        return list(self._gens)

    def elements(self):
        return list(range(self.order))

    def is_finite(self):
        return True


def _cycle_name(perm):
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        cycles.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(cycles) or "1"


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with cycle-notation names; products compose right to left."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    names = [_cycle_name(p) for p in perms]
    gens = []
    if n >= 2:
        gens.append(index[tuple([1, 0] + list(range(2, n)))])
    if n >= 3:
        gens.append(index[tuple(list(range(1, n)) + [0])])
    return FiniteGroup(table, names, generators=gens, check=False)


def cyclic_group(n: int, name="c") -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, n)]
    return FiniteGroup(table, names, generators=[1] if n > 1 else [], check=False)


# ---------------------------------------------------------------------------
# subgroup membership structures


class StallingsGraph:
    """Folded automaton of a finitely generated subgroup of a free group."""

    def __init__(self, words):
        edges = []
        nxt = 1
        for w in words:
            if not w:
                continue
            prev = 0
            for pos, x in enumerate(w):
                if pos == len(w) - 1:
                    target = 0
                else:
                    target, nxt = nxt, nxt + 1
                if x > 0:
                    edges.append((prev, x, target))
                else:
                    edges.append((target, -x, prev))
                prev = target
        self.out, self.inn = self._fold(edges)
        states = {0} | {u for u, _ in self.out} | set(self.out.values())
        self.states = sorted(states)

    @staticmethod
    def _fold(edges):
        parent = {}

        def find(v):
            parent.setdefault(v, v)
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        def union(a, b):
            a, b = find(a), find(b)
            if a != b:
                # keep the smaller id so the base point stays 0
                if b < a:
                    a, b = b, a
                parent[b] = a

        while True:
            out, inn, merged = {}, {}, False
            for u, k, v in edges:
                u, v = find(u), find(v)
                w = out.get((u, k))
                if w is not None and find(w) != v:
                    union(w, v)
                    merged = True
                    break
                w = inn.get((v, k))
                if w is not None and find(w) != u:
                    union(w, u)
                    merged = True
                    break
                out[(u, k)] = v
                inn[(v, k)] = u
            if not merged:
                return out, inn

    def read(self, word, state=0):
        """Follow word from state as far as possible; return (state, consumed)."""
        for pos, x in enumerate(word):
            nxt = self.out.get((state, x)) if x > 0 else self.inn.get((state, -x))
            if nxt is None:
                return state, pos
            state = nxt
        return state, len(word)

    def accepts(self, word) -> bool:
        state, pos = self.read(word)
        return pos == len(word) and state == 0

    def right_coset_key(self, word):
        """Canonical key of the right coset H*word."""
        state, pos = self.read(word)
        return (state, tuple(word[pos:]))


def hermite_basis(vectors, dim):
    """Row Hermite normal form of the integer span of vectors."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    for col in range(dim):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            new = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            active = new
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append((col, piv))
        rows = rest
    # reduce entries above each pivot
    for k in range(len(basis)):
        col, piv = basis[k]
        for j in range(k):
            c2, row = basis[j]
            q = row[col] // piv[col]
            if q:
                basis[j] = (c2, [a - q * b for a, b in zip(row, piv)])
    return basis


class Subgroup:
    """Finitely generated subgroup with an exact membership structure."""

    def __init__(self, parent: Group, generators, name=None):
        self.parent = parent
        gens = [parent.normal_form(w) if isinstance(w, (str, list)) else w for w in generators]
        for g in gens:
            parent.check_element(g)
        self.generators = gens
        self.name = name
        if parent.kind == "free":
            self.automaton = StallingsGraph(gens)
        elif parent.kind == "abelian":
            self.lattice = hermite_basis(gens, parent.rank)
        elif parent.kind == "finite":
            self.elements = self._closure(gens)
        else:
            raise ValueError(f"unsupported group kind {parent.kind}")
        for g in gens:
            assert self.contains(g)

    def _closure(self, gens):
        grp = self.parent
        seen = {grp.identity}
        queue = deque([grp.identity])
        while queue:
            x = queue.popleft()
            for s in gens:
                for y in (grp.multiply(x, s), grp.multiply(x, grp.inverse(s))):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        return frozenset(seen)

    def __repr__(self):
        gens = ", ".join(self.parent.format(g) for g in self.generators)
        return f"<{gens}>"

    def contains(self, g) -> bool:
        kind = self.parent.kind
        if kind == "free":
            return self.automaton.accepts(g)
        if kind == "abelian":
            return not any(self._reduce(g))
        return g in self.elements

    __contains__ = contains

    def _reduce(self, g):
        v = list(g)
        for col, row in self.lattice:
            q = v[col] // row[col]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def left_coset_key(self, g):
        """Key that agrees for g, h exactly when g^-1 h lies in the subgroup."""
        kind = self.parent.kind
        if kind == "free":
            return self.automaton.right_coset_key(self.parent.inverse(g))
        if kind == "abelian":
            return self._reduce(g)
        return min(self.parent.multiply(g, h) for h in self.elements)

    def is_trivial(self) -> bool:
        return all(g == self.parent.identity for g in self.generators)


def subgroup_membership(H: Subgroup, g) -> bool:
    return H.contains(g)


def group_op(G: Group, g, h=None, mode="multiply"):
    if mode == "multiply":
        return G.multiply(g, h)
    if mode == "invert":
        return G.inverse(g)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# group pairs


class CosetLabel(NamedTuple):
    i: int
    rep: object


class OutsideBall(ValueError):
    """Element lies outside the explored ball; canonical labels cannot be certified."""


class CompatibilityReport(NamedTuple):
    ok: bool
    failing: int | None
    expressions: dict


class GroupPair:
    """A group with an ordered family of peripheral subgroups and a symmetric
    generating set S not containing the identity."""

    def __init__(self, gamma: Group, peripherals, gen_set=None, names=None):
        self.gamma = gamma
        self.peripherals = [
            p if isinstance(p, Subgroup) else Subgroup(gamma, p) for p in peripherals
        ]
        if not self.peripherals:
            raise ValueError("peripheral family must be non-empty")
        for p in self.peripherals:
            if p.parent is not gamma:
                raise ValueError("peripheral subgroup of a different group")
        if gen_set is None:
            gen_set = gamma.symmetric_generators()
        S = []
        for s in gen_set:
            s = gamma.normal_form(s) if isinstance(s, (str, list)) else s
            gamma.check_element(s)
            if s not in S:
                S.append(s)
        if gamma.identity in S:
            raise ValueError("generating set must exclude the identity")
        if any(gamma.inverse(s) not in S for s in S):
            raise ValueError("generating set must be symmetric")
        self.S = S
        self.names = list(names) if names else [str(k + 1) for k in range(len(self.peripherals))]
        self._ball = {}
        self._ball_radius = -1
        self._coset_reps = {}

    @property
    def I(self):
        return list(range(len(self.peripherals)))

    def __repr__(self):
        return f"GroupPair({self.gamma!r}, {self.peripherals!r})"

    def peripheral_generators(self, i):
        """S ∩ Γ_i"""
        return [s for s in self.S if self.peripherals[i].contains(s)]

    # explored ball -------------------------------------------------------

    def explore(self, R: int):
        """Word-metric ball of radius R about the identity; returns elements in
        ShortLex order (word length, then the group's order key)."""
        if R > self._ball_radius:
            grp = self.gamma
            dist = {grp.identity: 0}
            frontier = [grp.identity]
            for r in range(1, R + 1):
                nxt = []
                for x in frontier:
                    for s in self.S:
                        y = grp.multiply(x, s)
                        if y not in dist:
                            dist[y] = r
                            nxt.append(y)
                frontier = nxt
            self._ball = dist
            self._ball_radius = R
            self._coset_reps = {}
        grp = self.gamma
        return sorted(
            (g for g, d in self._ball.items() if d <= R),
            key=lambda g: (self._ball[g], grp.order_key(g)),
        )

    def word_length(self, g):
        if g not in self._ball:
            raise OutsideBall(f"{self.gamma.format(g)} outside explored ball")
        return self._ball[g]

    def shortlex_key(self, g):
        return (self.word_length(g), self.gamma.order_key(g))

    def _reps(self, i):
        if i not in self._coset_reps:
            H = self.peripherals[i]
            reps = {}
            for g in sorted(self._ball, key=self.shortlex_key):
                reps.setdefault(H.left_coset_key(g), g)
            self._coset_reps[i] = reps
        return self._coset_reps[i]

    def coset_label(self, g, i: int) -> CosetLabel:
        if g not in self._ball:
            raise OutsideBall(f"{self.gamma.format(g)} outside explored ball")
        key = self.peripherals[i].left_coset_key(g)
        return CosetLabel(i, self._reps(i)[key])

    def same_coset(self, g, h, i) -> bool:
        grp = self.gamma
        return self.peripherals[i].contains(grp.multiply(grp.inverse(g), h))

    def cosets_in_ball(self, i, R=None):
        """Map coset representative -> ball elements of that coset (ShortLex)."""
        elems = self.explore(R) if R is not None else self.explore(self._ball_radius)
        H = self.peripherals[i]
        reps = self._reps(i)
        out = {}
        for g in elems:
            out.setdefault(reps[H.left_coset_key(g)], []).append(g)
        return out


def _generates(gamma: Group, elements) -> bool:
    H = Subgroup(gamma, list(elements))
    if gamma.kind == "finite":
        return len(H.elements) == gamma.order
    return all(H.contains(g) for g in gamma.generators())


def express(gamma: Group, target, letters, budget=200000):
    """Shortest word in `letters` (and inverses) evaluating to target, by BFS.
    Returns a list of (letter index, ±1) or None when the budget runs out."""
    if target == gamma.identity:
        return []
    steps = []
    for k, s in enumerate(letters):
        steps.append((k, 1, s))
        steps.append((k, -1, gamma.inverse(s)))
    prev = {gamma.identity: None}
    queue = deque([gamma.identity])
    while queue and len(prev) < budget:
        x = queue.popleft()
        for k, e, s in steps:
            y = gamma.multiply(x, s)
            if y in prev:
                continue
            prev[y] = (x, k, e)
            if y == target:
                word = []
                while prev[y] is not None:
                    x0, k0, e0 = prev[y]
                    word.append((k0, e0))
                    y = x0
                return word[::-1]
            queue.append(y)
    return None


def check_compatible(pair: GroupPair) -> CompatibilityReport:
    """True iff S generates Γ and S ∩ Γ_i generates Γ_i for every i.

    The certificate maps i to a list of words (in S ∩ Γ_i) expressing each
    generator of Γ_i."""
    gamma = pair.gamma
    if not _generates(gamma, pair.S):
        return CompatibilityReport(False, None, {})
    expressions = {}
    for i, H in enumerate(pair.peripherals):
        T = pair.peripheral_generators(i)
        K = Subgroup(gamma, T)
        words = []
        for h in H.generators:
            if not K.contains(h):
                return CompatibilityReport(False, i, expressions)
            w = express(gamma, h, T)
            if w is None:
                return CompatibilityReport(False, i, expressions)
            words.append([gamma.format(T[k]) if e > 0 else gamma.format(gamma.inverse(T[k])) for k, e in w])
        expressions[i] = words
    return CompatibilityReport(True, None, expressions)


# ---------------------------------------------------------------------------
# group description files


def _read_table(path):
    names = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("names:"):
                names = line[len("names:"):].split()
                continue
            rows.append([int(x) for x in line.split()])
    return FiniteGroup(rows, names)


def parse_group_pair(text: str, base_dir=".") -> GroupPair:
    """Parse a group description::

        group free 2            # or: abelian 2, finite table.txt, symmetric 3, cyclic 4
        peripheral 1: a
        gens: a a^-1 b b^-1
    """
    import os

    gamma = None
    periph, names, gens = [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "group":
                kind, *args = rest.split()
                if kind == "free":
                    gamma = FreeGroup(int(args[0]), args[1:] or None)
                elif kind == "abelian":
                    gamma = FreeAbelianGroup(int(args[0]), args[1:] or None)
                elif kind == "finite":
                    gamma = _read_table(os.path.join(base_dir, args[0]))
                elif kind == "symmetric":
                    gamma = symmetric_group(int(args[0]))
                elif kind == "cyclic":
                    gamma = cyclic_group(int(args[0]))
                else:
                    raise ValueError(f"unknown group kind {kind!r}")
            elif head == "peripheral":
                if gamma is None:
                    raise ValueError("peripheral before group line")
                label, _, words = rest.partition(":")
                names.append(label.strip())
                periph.append(Subgroup(gamma, [gamma.normal_form(w) for w in words.split()]))
            elif head == "gens:":
                if gamma is None:
                    raise ValueError("gens before group line")
                gens = [gamma.normal_form(w) for w in rest.split()]
            else:
                raise ValueError(f"unknown directive {head!r}")
        except (ValueError, IndexError, WordError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if gamma is None:
        raise ValueError("missing group line")
    return GroupPair(gamma, periph, gens, names)


def load_group_pair(path) -> GroupPair:
    import os

    with open(path) as fh:
        return parse_group_pair(fh.read(), os.path.dirname(os.path.abspath(path)))

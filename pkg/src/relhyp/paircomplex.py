"""Relative presentations, the relative Cayley complex and the quotient complex X̂.

Cell keys: vertices are ints, edges ``("e", n)`` and 2-cells ``("f", n)``, so
chains of different degrees never share keys. Edges are oriented tail -> head;
2-cells carry a closed loop of (edge key, ±1) steps.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .complexes import Chain
from .graphs import SimpGraph
from .groups import SUPERSCRIPTS, GroupPair, Subgroup


class PresentationError(ValueError):
    def __init__(self, msg, offset=None):
        super().__init__(msg if offset is None else f"{msg} at offset {offset}")
        self.offset = offset


class RelatorNotTrivial(ValueError):
    pass


class RelativePresentation(NamedTuple):
    """⟨𝒜, Γ′ | ℛ⟩ as words: gens 𝒜, generator words per peripheral (empty
    list for the trivial subgroup), relator words."""

    gens: list
    peripherals: list
    relators: list
    names: list


# ---------------------------------------------------------------------------
# parsing


def _split_top(text, sep, base, keep_empty=False):
    """Split at separators outside brackets, returning (piece, offset) pairs."""
    out, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([⟨<":
            depth += 1
        elif ch in ")]⟩>":
            depth -= 1
            if depth < 0:
                raise PresentationError(f"unbalanced {ch!r}", base + k)
        elif ch == sep and depth == 0:
            out.append((text[start:k], base + start))
            start = k + 1
    if depth:
        raise PresentationError("unbalanced bracket", base + len(text))
    out.append((text[start:], base + start))
    return [(p.strip(), off) for p, off in out if keep_empty or p.strip()]


def _check_balanced(text):
    stack = []
    pairs = {")": "(", "]": "[", "⟩": "⟨", ">": "<"}
    for k, ch in enumerate(text):
        if ch in "([⟨<":
            stack.append((ch, k))
        elif ch in pairs:
            if not stack or stack[-1][0] != pairs[ch]:
                raise PresentationError(f"unmatched {ch!r}", k)
            stack.pop()
    if stack:
        raise PresentationError(f"unclosed {stack[-1][0]!r}", stack[-1][1])


def _subgroup_words(piece, off):
    piece = piece.strip()
    if piece in ("—", "-", "1", "<>", "⟨⟩", "<1>", "⟨1⟩"):
        return []
    m = re.fullmatch(r"[<⟨](.*)[>⟩]", piece, re.S)
    if not m:
        raise PresentationError(f"expected <...> subgroup, got {piece!r}", off)
    inner = m.group(1)
    return [w for w, _ in _split_top(inner, ",", off + 1) if w not in ("1",)]


def _parse_ascii(text):
    m = re.fullmatch(r"\s*rel-pres\s*\{(.*)\}\s*", text, re.S)
    if not m:
        raise PresentationError("expected 'rel-pres { ... }'", 0)
    body, base = m.group(1), m.start(1)
    fields = {}
    for piece, off in _split_top(body, ";", base):
        key, colon, val = piece.partition(":")
        if not colon:
            raise PresentationError(f"expected 'field: value', got {piece!r}", off)
        key = key.strip()
        if key not in ("gens", "peripherals", "relators") or key in fields:
            raise PresentationError(f"unexpected field {key!r}", off)
        fields[key] = (val, off + len(key) + 1)
    gens_text, goff = fields.get("gens", ("", base))
    gens = [w for w, _ in _split_top(gens_text.replace(" ", ","), ",", goff)]
    periph, names = [], []
    ptext, poff = fields.get("peripherals", ("", base))
    for item, ioff in _split_top(ptext, ",", poff):
        name, eq, sub = item.partition("=")
        if not eq:
            name, sub = f"P{len(periph) + 1}", item
        names.append(name.strip())
        periph.append(_subgroup_words(sub, ioff + (len(name) + 1 if eq else 0)))
    rtext, roff = fields.get("relators", ("", base))
    relators = [w for w, _ in _split_top(rtext, ",", roff)]
    return RelativePresentation(gens, periph, relators, names)


def _parse_angle(text):
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("⟨") and s.endswith("⟩")):
        raise PresentationError("expected ⟨ ... ⟩", lead)
    body, base = s[1:-1], lead + 1
    bar = [k for k, ch in enumerate(body) if ch == "|"]
    if len(bar) != 1:
        raise PresentationError("expected exactly one '|'", base + (bar[1] if len(bar) > 1 else len(body)))
    left, right = body[: bar[0]], body[bar[0] + 1:]
    semi = _split_top(left, ";", base, keep_empty=True)
    if len(semi) != 2:
        raise PresentationError("expected 'generators ; peripherals' before '|'", base)
    gens_text, goff = semi[0]
    gens = [w for w, _ in _split_top(gens_text, ",", goff)]
    periph = []
    ptext, poff = semi[1]
    for item, ioff in _split_top(ptext, ",", poff):
        periph.append(_subgroup_words(item, ioff))
    relators = [w for w, _ in _split_top(right, ",", base + bar[0] + 1)]
    return RelativePresentation(gens, periph, relators, [f"P{k + 1}" for k in range(len(periph))])


def parse_relative_presentation(text: str, gamma=None) -> RelativePresentation:
    """Parse ``rel-pres { gens: b; peripherals: P1 = <a>; relators: ; }`` or
    ``⟨b; ⟨a⟩ | ⟩``. With a group given, words are checked and every relator
    must evaluate to the identity."""
    _check_balanced(text)
    pres = _parse_ascii(text) if "rel-pres" in text else _parse_angle(text)
    if gamma is not None:
        for w in pres.gens + [w for p in pres.peripherals for w in p]:
            gamma.normal_form(w)
        for r in pres.relators:
            if gamma.normal_form(r) != gamma.identity:
                raise RelatorNotTrivial(f"relator {r!r} is not trivial in the group")
    return pres


class _LetterParser:
    """Expand a word into a list of (letter element, ±1) over a fixed alphabet."""

    def __init__(self, gamma, letters, text):
        self.gamma = gamma
        self.letters = letters  # element -> letter index
        self.text = text.translate(SUPERSCRIPTS).replace("−", "-")
        self.pos = 0

    def error(self, msg):
        raise PresentationError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t*·.":
            self.pos += 1

    def parse(self):
        out = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected character")
        return out

    def expr(self):
        out = []
        while True:
            self.skip()
            if self.pos >= len(self.text) or self.text[self.pos] in ",])":
                return out
            out += self.term()

    def term(self):
        w = self.atom()
        self.skip()
        if self.pos < len(self.text) and self.text[self.pos] == "^":
            m = re.compile(r"\^\s*(-?\d+)").match(self.text, self.pos)
            if not m:
                self.error("bad exponent")
            self.pos = m.end()
            n = int(m.group(1))
            w = (w if n >= 0 else _inv_word(w)) * abs(n)
        return w

    def atom(self):
        gamma, text = self.gamma, self.text
        for sym in gamma._by_length:
            if text.startswith(sym, self.pos):
                self.pos += len(sym)
                g = gamma.symbols[sym]
                if g in self.letters:
                    return [(self.letters[g], 1)]
                ginv = gamma.inverse(g)
                if ginv in self.letters:
                    return [(self.letters[ginv], -1)]
                self.error(f"symbol {sym!r} is not a letter of the generating set")
        c = text[self.pos]
        if c == "1":
            self.pos += 1
            return []
        if c == "(":
            self.pos += 1
            w = self.expr()
            self.expect(")")
            return w
        if c == "[":
            self.pos += 1
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect("]")
            return u + v + _inv_word(u) + _inv_word(v)
        self.error(f"unknown symbol {c!r}")

    def expect(self, c):
        self.skip()
        if self.pos >= len(self.text) or self.text[self.pos] != c:
            self.error(f"expected {c!r}")
        self.pos += 1


def _inv_word(w):
    return [(k, -e) for k, e in reversed(w)]


def _free_reduce_cyclic(w):
    out = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    while len(out) > 1 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


# ---------------------------------------------------------------------------
# combinatorial 2-complexes


class CombComplex2:
    """2-dimensional combinatorial cell complex with labelled cells."""

    def __init__(self):
        self.vertex_labels = []
        self.vindex = {}
        self.edges = []  # (tail, head, label)
        self.edge_index = {}  # label -> key
        self.faces = []  # (loop [(edge key, ±1)], label)
        self.pair = None
        self.letters = None

    def __repr__(self):
        return f"CombComplex2(V={len(self.vertex_labels)}, E={len(self.edges)}, F={len(self.faces)})"

    # construction helpers
    def add_vertex(self, label):
        if label not in self.vindex:
            self.vindex[label] = len(self.vertex_labels)
            self.vertex_labels.append(label)
        return self.vindex[label]

    def add_edge(self, tail, head, label):
        key = ("e", len(self.edges))
        self.edges.append((tail, head, label))
        self.edge_index[label] = key
        return key

    def add_face(self, loop, label):
        key = ("f", len(self.faces))
        self.faces.append((tuple(loop), label))
        return key

    # complex interface
    def cells(self, k):
        if k == 0:
            return list(range(len(self.vertex_labels)))
        if k == 1:
            return [("e", n) for n in range(len(self.edges))]
        if k == 2:
            return [("f", n) for n in range(len(self.faces))]
        return []

    def edge_endpoints(self, key):
        t, h, _ = self.edges[key[1]]
        return t, h

    def loop(self, key):
        return self.faces[key[1]][0]

    def vertices_of(self, key):
        if isinstance(key, int):
            return (key,)
        if key[0] == "e":
            return self.edge_endpoints(key)
        verts = []
        for e, sgn in self.loop(key):
            t, h = self.edge_endpoints(e)
            verts.append(t if sgn > 0 else h)
        return tuple(verts)

    def cell_boundary(self, key) -> Chain:
        if key[0] == "e":
            t, h = self.edge_endpoints(key)
            return Chain(0, {h: 1}) + Chain(0, {t: -1}) if t != h else Chain(0)
        out = Chain(1)
        for e, sgn in self.loop(key):
            out._add(e, sgn)
        return out

    def label(self, key):
        if isinstance(key, int):
            return self.vertex_labels[key]
        return self.edges[key[1]][2] if key[0] == "e" else self.faces[key[1]][1]

    def loop_is_closed(self, key) -> bool:
        steps = self.loop(key)
        if not steps:
            return True
        ends = [self.edge_endpoints(e) if s > 0 else self.edge_endpoints(e)[::-1] for e, s in steps]
        return all(ends[k][1] == ends[(k + 1) % len(ends)][0] for k in range(len(ends)))

    def graph(self) -> SimpGraph:
        """Underlying simple graph (loops and parallel edges dropped)."""
        pairs = {(min(t, h), max(t, h)) for t, h, _ in self.edges if t != h}
        return SimpGraph(range(len(self.vertex_labels)), sorted(pairs))

    def edge_chain(self, steps) -> Chain:
        """1-chain of a list of (edge label, ±1)."""
        out = Chain(1)
        for lab, sgn in steps:
            out._add(self.edge_index[lab], sgn)
        return out

    def path_chain(self, start_label, word) -> Chain:
        """1-chain traced by a word of (letter index, ±1) from a vertex label
        (g, i) in a relative Cayley complex."""
        gamma = self.pair.gamma
        g, i = start_label
        out = Chain(1)
        for k, e in word:
            s = self.letters[k]
            if e > 0:
                out._add(self.edge_index[("h", g, k, i)], 1)
                g = gamma.multiply(g, s)
            else:
                g = gamma.multiply(g, gamma.inverse(s))
                out._add(self.edge_index[("h", g, k, i)], -1)
        return out

    # group action
    def translate_label(self, label, t):
        """Left translation by t of a vertex/edge label of a relative Cayley complex."""
        gamma = self.pair.gamma
        if label[0] in ("h", "v"):
            return (label[0], gamma.multiply(t, label[1])) + tuple(label[2:])
        g, i = label
        return (gamma.multiply(t, g), i)

    def canonical_circuit(self, chain: Chain):
        """Translation-invariant key of a 1-chain in a relative Cayley complex."""
        gamma = self.pair.gamma
        items = [(self.label(k), v) for k, v in chain.items()]
        bases = {lab[1] for lab, _ in items}
        if gamma.kind == "abelian":
            bases = [min(bases)]  # lexicographic order is translation invariant
        best = None
        for b in bases:
            t = gamma.inverse(b)
            key = tuple(sorted(repr((self.translate_label(lab, t), v)) for lab, v in items))
            if best is None or key < best:
                best = key
        return best

    def identity_vertices(self):
        gamma = self.pair.gamma
        return [self.vindex[(gamma.identity, i)] for i in self.pair.I if (gamma.identity, i) in self.vindex]


def presentation_letters(pres: RelativePresentation, pair: GroupPair):
    """Positive letters of the complex: 𝒜 followed by the peripheral generators."""
    gamma = pair.gamma
    letters = []
    words = list(pres.gens) + [w for p in pres.peripherals for w in p]
    for w in words:
        g = gamma.normal_form(w)
        if g != gamma.identity and g not in letters and gamma.inverse(g) not in letters:
            letters.append(g)
    return letters


def build_relative_cayley_complex(pres: RelativePresentation, pair: GroupPair, R: int) -> CombComplex2:
    """Relative Cayley complex truncated to the word-metric R-ball of Γ.

    Horizontal edges (x, s) for each positive letter s and copy i, one vertical
    edge (v, i)-(v, j) for i < j, relator loops attached at every basepoint and
    copy whose loop stays in the ball, and one rectangle per horizontal edge of
    G and pair of copies."""
    gamma = pair.gamma
    letters = presentation_letters(pres, pair)
    index = {g: k for k, g in enumerate(letters)}
    words = []
    for r in pres.relators:
        w = _free_reduce_cyclic(_LetterParser(gamma, index, r).parse())
        if gamma.product(letters[k] if e > 0 else gamma.inverse(letters[k]) for k, e in w) != gamma.identity:
            raise RelatorNotTrivial(f"relator {r!r} is not trivial in the group")
        if w:
            words.append(w)
    ball = pair.explore(R)
    inball = set(ball)
    K = CombComplex2()
    K.pair, K.letters, K.presentation = pair, letters, pres
    I = pair.I
    for g in ball:
        for i in I:
            K.add_vertex((g, i))
    for g in ball:
        for k, s in enumerate(letters):
            h = gamma.multiply(g, s)
            if h in inball:
                for i in I:
                    K.add_edge(K.vindex[(g, i)], K.vindex[(h, i)], ("h", g, k, i))
    for g in ball:
        for a in I:
            for b in I:
                if a < b:
                    K.add_edge(K.vindex[(g, a)], K.vindex[(g, b)], ("v", g, a, b))
    for g in ball:
        for r, w in enumerate(words):
            x, ok = g, True
            for k, e in w:
                x = gamma.multiply(x, letters[k] if e > 0 else gamma.inverse(letters[k]))
                if x not in inball:
                    ok = False
                    break
            if not ok:
                continue
            for i in I:
                K.add_face(_chain_to_loop(K, (g, i), w), ("rel", g, r, i))
    for g in ball:
        for k, s in enumerate(letters):
            h = gamma.multiply(g, s)
            if h not in inball:
                continue
            for a in I:
                for b in I:
                    if a < b:
                        loop = [
                            (K.edge_index[("h", g, k, a)], 1),
                            (K.edge_index[("v", h, a, b)], 1),
                            (K.edge_index[("h", g, k, b)], -1),
                            (K.edge_index[("v", g, a, b)], -1),
                        ]
                        K.add_face(loop, ("rect", g, k, a, b))
    return K


def _chain_to_loop(K, start, word):
    gamma = K.pair.gamma
    g, i = start
    steps = []
    for k, e in word:
        s = K.letters[k]
        if e > 0:
            steps.append((K.edge_index[("h", g, k, i)], 1))
            g = gamma.multiply(g, s)
        else:
            g = gamma.multiply(g, gamma.inverse(s))
            steps.append((K.edge_index[("h", g, k, i)], -1))
    return steps


def build_quotient_complex(K: CombComplex2, pair: GroupPair | None = None) -> CombComplex2:
    """X̂: collapse each coset copy gΓ_i × {i} to a point.

    Horizontal edges (x, s) of copy i with s in Γ_i collapse; all other edges
    survive. 2-cells keep their loop with collapsed edges removed and are
    dropped when nothing is left. Vertices are labelled (i, coset rep)."""
    pair = pair or K.pair
    Q = CombComplex2()
    Q.pair, Q.letters, Q.source = pair, K.letters, K
    vmap = {}
    for v, (g, i) in enumerate(K.vertex_labels):
        vmap[v] = Q.add_vertex(tuple(pair.coset_label(g, i)))
    emap = {}
    for n, (t, h, lab) in enumerate(K.edges):
        if lab[0] == "h" and pair.peripherals[lab[3]].contains(K.letters[lab[2]]):
            continue
        emap[("e", n)] = Q.add_edge(vmap[t], vmap[h], lab)
    for loop, lab in K.faces:
        new = [(emap[e], s) for e, s in loop if e in emap]
        if new:
            Q.add_face(new, lab)
    return Q


# ---------------------------------------------------------------------------
# fineness


class _GraphAsComplex:
    def __init__(self, G: SimpGraph):
        self.G = G

    def cells(self, k):
        return list(self.G.edges()) if k == 1 else list(range(self.G.n))

    def edge_endpoints(self, key):
        return key


class FinenessReport(NamedTuple):
    edge: object
    max_len: int
    circuits: list  # Chains
    counts: dict  # length -> number of circuits


def fineness_probe(G, e, L: int) -> FinenessReport:
    """All circuits of length <= L through the edge e."""
    from .filling import enumerate_circuits

    if L < 3:
        raise ValueError("L must be >= 3")
    K = _GraphAsComplex(G) if isinstance(G, SimpGraph) else G
    if isinstance(G, SimpGraph):
        e = (min(e), max(e))
    found = enumerate_circuits(K, L, through_edge=e)
    counts = {}
    for z in found:
        counts[len(z)] = counts.get(len(z), 0) + 1
    return FinenessReport(e, L, found, dict(sorted(counts.items())))


def free_action_check(K: CombComplex2, elements=None) -> bool:
    """Translations by ball elements fix no vertex or edge label (checked on
    labels that stay inside the truncation)."""
    gamma = K.pair.gamma
    elements = [g for g in (elements or [lab[0] for lab in K.vertex_labels]) if g != gamma.identity]
    for t in elements:
        for lab in K.vertex_labels:
            if K.translate_label(lab, t) == lab:
                return False
        for _, _, lab in K.edges:
            if K.translate_label(lab, t) == lab:
                return False
    return True


def trivial_subgroup(gamma) -> Subgroup:
    return Subgroup(gamma, [])


def word_cycle(K: CombComplex2, text: str, start=None, copy=None) -> Chain:
    """1-chain traced in a relative Cayley complex by a word over its letters,
    starting at the vertex (start, copy) (identity in the first copy by default)."""
    gamma = K.pair.gamma
    index = {g: k for k, g in enumerate(K.letters)}
    word = _LetterParser(gamma, index, text).parse()
    g = gamma.identity if start is None else start
    i = K.pair.I[0] if copy is None else copy
    try:
        return K.path_chain((g, i), word)
    except KeyError:
        raise ValueError("the word leaves the truncated complex") from None

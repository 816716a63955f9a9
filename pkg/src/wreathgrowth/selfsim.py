"""Self-similar groups on the binary tree: the Grigorchuk family.

Two conventions are supported. The ``fsa`` preset is the first
Grigorchuk group with

    a = swap,  b = <a, c>,  c = <a, d>,  d = <1, b>

(the section at 0 is written first). The ``family`` preset is G_omega:
at depth i the letter w = omega_i in {0, 1, 2} sends the generator
ker(w) (b, c, d respectively) to <1, x> and the other two to <a, x>.
The map (a, b, c, d) -> (a, d, c, b) identifies the fsa preset with the
family preset at omega = (012)^infinity.

Tree vertices are strings over "01" whose rightmost letter is the
level-1 letter, so a generator acts on ``v + x`` by swapping ``x`` and
acting on ``v`` with its section at ``x``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceError, SpecParseError, UnsupportedInputError

LETTERS = "abcd"
NUCLEUS = ("", "a", "b", "c", "d")
_THIRD = {("b", "c"): "d", ("c", "b"): "d", ("c", "d"): "b", ("d", "c"): "b",
          ("b", "d"): "c", ("d", "b"): "c"}
_KERNEL = {0: "b", 1: "c", 2: "d"}
FSA_SECTIONS = {"b": ("a", "c"), "c": ("a", "d"), "d": ("", "b")}
FSA_TO_FAMILY = str.maketrans("abcd", "adcb")


# ---------------------------------------------------------------------------
# omega sequences


@dataclass(frozen=True)
class OmegaSeq:
    """An eventually periodic sequence over {0,1,2}.

    ``syllables`` is a tuple of (block, repeat) pairs making the finite
    prefix, and ``tail`` repeats forever.
    """

    syllables: tuple = ()
    tail: str = "012"

    def __post_init__(self):
        if not self.tail or set(self.tail) - set("012"):
            raise SpecParseError(f"bad tail {self.tail!r}")
        for block, rep in self.syllables:
            if not block or set(block) - set("012") or rep < 0:
                raise SpecParseError(f"bad syllable ({block!r}, {rep})")

    @classmethod
    def periodic(cls, word: str) -> "OmegaSeq":
        return cls((), word)

    @classmethod
    def parse(cls, spec: str) -> "OmegaSeq":
        """Read ``periodic:012`` or ``syllables:(012)^3 2^5 tail=012``."""
        spec = spec.strip()
        if spec.startswith("periodic:"):
            return cls.periodic(spec[len("periodic:"):].strip())
        if spec.startswith("syllables:"):
            body = spec[len("syllables:"):]
            tail = "012"
            m = re.search(r"tail=([012]+)", body)
            if m:
                tail = m.group(1)
                body = body[: m.start()] + body[m.end():]
            syl = []
            for tok in body.split():
                mm = re.fullmatch(r"\(?([012]+)\)?(?:\^(\d+))?", tok)
                if not mm:
                    raise SpecParseError(f"cannot read syllable {tok!r}")
                syl.append((mm.group(1), int(mm.group(2) or 1)))
            return cls(tuple(syl), tail)
        if re.fullmatch(r"[012]+", spec):
            return cls.periodic(spec)
        raise SpecParseError(f"cannot read omega spec {spec!r}")

    @property
    def prefix_length(self) -> int:
        return sum(len(b) * r for b, r in self.syllables)

    def prefix(self, n: int) -> str:
        out = []
        for block, rep in self.syllables:
            out.append(block * rep)
        s = "".join(out)
        if len(s) < n:
            k = n - len(s)
            s += self.tail * (k // len(self.tail) + 1)
        return s[:n]

    def letter(self, i: int) -> int:
        p = self.prefix_length
        if i >= p:
            return int(self.tail[(i - p) % len(self.tail)])
        return int(self.prefix(i + 1)[i])

    def canonical_shift(self, i: int) -> int:
        """Smallest j with sigma^j omega = sigma^i omega, as far as the encoding sees."""
        p = self.prefix_length
        return i if i < p else p + (i - p) % len(self.tail)

    @property
    def in_omega_prime(self) -> bool:
        """Does the sequence contain every symbol infinitely often?"""
        return set(self.tail) == set("012")

    def shifted(self, k: int) -> "OmegaSeq":
        p = self.prefix_length
        if k >= p:
            j = (k - p) % len(self.tail)
            return OmegaSeq((), self.tail[j:] + self.tail[:j])
        rest = self.prefix(p)[k:]
        return OmegaSeq(((rest, 1),), self.tail)

    def syllable_string(self) -> str:
        parts = []
        for block, rep in self.syllables:
            b = f"({block})" if len(block) > 1 else block
            parts.append(b if rep == 1 else f"{b}^{rep}")
        t = f"({self.tail})" if len(self.tail) > 1 else self.tail
        parts.append(f"{t}^inf")
        return " ".join(parts)


FIRST_GRIGORCHUK = OmegaSeq.periodic("012")


# ---------------------------------------------------------------------------
# words


def parse_word(text: str) -> str:
    """Expand ``(ad)^4``-style powers; whitespace and ``1`` are dropped."""
    text = text.replace("⁴", "^4").replace(" ", "").replace("1", "")
    pattern = re.compile(r"\(([abcd]*)\)\^(\d+)|([abcd])\^(\d+)")
    while True:
        m = pattern.search(text)
        if not m:
            break
        block = m.group(1) if m.group(1) is not None else m.group(3)
        k = int(m.group(2) or m.group(4))
        text = text[: m.start()] + block * k + text[m.end():]
    if set(text) - set(LETTERS):
        raise SpecParseError(f"not a word over a,b,c,d: {text!r}")
    return text


def reduce(word: str) -> str:
    """Normal form in <a,b,c,d | a^2, b^2, c^2, d^2, bcd>."""
    out: list[str] = []
    for ch in word:
        if ch == "1":
            continue
        if out:
            top = out[-1]
            if ch == "a" and top == "a":
                out.pop()
                continue
            if ch != "a" and top != "a":
                if ch == top:
                    out.pop()
                else:
                    out[-1] = _THIRD[(top, ch)]
                continue
        out.append(ch)
    return "".join(out)


def is_reduced(word: str) -> bool:
    return reduce(word) == word


def inverse_word(word: str) -> str:
    return word[::-1]


def generator_sections(x: str, preset: str, letter: int | None = None) -> tuple[str, str, bool]:
    """Sections of a single generator (or "" for the identity)."""
    if x == "":
        return "", "", False
    if x == "a":
        return "", "", True
    if preset == "fsa":
        s0, s1 = FSA_SECTIONS[x]
        return s0, s1, False
    return ("" if _KERNEL[letter] == x else "a"), x, False


# ---------------------------------------------------------------------------
# the group object


class GrigGroup:
    """G_omega for one (preset, omega) pair, holding its memo tables.

    Memo tables are bounded LRU caches; ``functools.lru_cache`` is safe
    under concurrent calls, and outputs never depend on cache state.
    """

    def __init__(self, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                 cache_size: int = 1 << 18, max_depth: int = 10_000):
        if preset not in ("fsa", "family"):
            raise SpecParseError(f"unknown preset {preset!r}")
        self.preset = preset
        self.omega = omega if preset == "family" else FIRST_GRIGORCHUK
        self.max_depth = max_depth
        self._sections = lru_cache(maxsize=cache_size)(self._sections_impl)
        self._trivial = lru_cache(maxsize=cache_size)(self._trivial_impl)
        self._lock = threading.Lock()
        self.engine = PortraitEngine(self)

    # shift bookkeeping
    def canon(self, shift: int) -> int:
        return 0 if self.preset == "fsa" else self.omega.canonical_shift(shift)

    def next_shift(self, shift: int) -> int:
        return self.canon(shift + 1)

    def letter(self, shift: int) -> int | None:
        return None if self.preset == "fsa" else self.omega.letter(shift)

    def gen_sections(self, x: str, shift: int = 0) -> tuple[str, str, bool]:
        return generator_sections(x, self.preset, self.letter(shift))

    def require_faithful(self) -> None:
        if self.preset == "family" and not self.omega.in_omega_prime:
            raise UnsupportedInputError(
                "omega tail must contain 0, 1 and 2; the tree action may not be faithful otherwise"
            )

    # sections
    def sections(self, word: str, shift: int = 0) -> tuple[str, str, bool]:
        return self._sections(reduce(word), self.canon(shift))

    def _sections_impl(self, word: str, shift: int) -> tuple[str, str, bool]:
        w0: list[str] = []
        w1: list[str] = []
        swap = False
        letter = self.letter(shift)
        for ch in word:
            if ch == "a":
                swap = not swap
                continue
            s0, s1, _ = generator_sections(ch, self.preset, letter)
            if swap:
                s0, s1 = s1, s0
            w0.append(s0)
            w1.append(s1)
        return reduce("".join(w0)), reduce("".join(w1)), swap

    # word problem
    def wp_trivial(self, word: str, shift: int = 0) -> bool:
        self.require_faithful()
        return self._trivial(reduce(word), self.canon(shift))

    def _trivial_impl(self, word: str, shift: int) -> bool:
        if len(word) <= 1:
            return word == ""
        if word.count("a") % 2:
            return False
        w0, w1, _ = self._sections_impl(word, shift)
        nxt = self.next_shift(shift)
        return self._trivial(w0, nxt) and self._trivial(w1, nxt)

    def equal(self, u: str, v: str, shift: int = 0) -> bool:
        return self.wp_trivial(u + inverse_word(v), shift)

    # order
    def order(self, word: str, shift: int = 0) -> int:
        """Order of the element, a power of 2 for omega with every symbol in its tail."""
        self.require_faithful()
        return self._order(reduce(word), self.canon(shift), frozenset(), 0)

    def _order(self, word: str, shift: int, stack: frozenset, depth: int) -> int:
        if word == "":
            return 1
        if len(word) == 1:
            return 2
        if depth > self.max_depth or (word, shift) in stack:
            raise ResourceError("order recursion does not terminate; element may have infinite order")
        stack = stack | {(word, shift)}
        w0, w1, swap = self._sections_impl(word, shift)
        nxt = self.next_shift(shift)
        if swap:
            return 2 * self._order(reduce(w0 + w1), nxt, stack, depth + 1)
        return max(self._order(w0, nxt, stack, depth + 1), self._order(w1, nxt, stack, depth + 1))

    # tree action
    def act_vertex(self, word: str, vertex: str, shift: int = 0) -> str:
        word = reduce(word)
        out = []
        s = self.canon(shift)
        for pos in range(len(vertex) - 1, -1, -1):
            if word == "":
                return vertex[: pos + 1] + "".join(reversed(out))
            x = vertex[pos]
            w0, w1, swap = self._sections(word, s)
            out.append(str(int(x) ^ int(swap)))
            word = w0 if x == "0" else w1
            s = self.next_shift(s)
        return "".join(reversed(out))

    def level_perm(self, word: str, n: int, shift: int = 0, max_level: int = 22) -> np.ndarray:
        """Permutation of the 2^n vertices of level n, as an index array.

        Vertex v is numbered int(v, 2), so the level-1 letter is the low bit;
        ``p[i]`` is the image of vertex i.
        """
        if n > max_level:
            raise ResourceError(f"level {n} exceeds the limit {max_level}")
        return self._level_perm(reduce(word), n, self.canon(shift)).copy()

    def _level_perm(self, word: str, n: int, shift: int) -> np.ndarray:
        if n == 0:
            return np.zeros(1, dtype=np.int64)
        if word == "":
            return np.arange(1 << n, dtype=np.int64)
        w0, w1, swap = self._sections(word, shift)
        nxt = self.next_shift(shift)
        out = np.empty(1 << n, dtype=np.int64)
        out[0::2] = 2 * self._level_perm(w0, n - 1, nxt) + int(swap)
        out[1::2] = 2 * self._level_perm(w1, n - 1, nxt) + (1 - int(swap))
        return out

    # portraits
    def portrait(self, word: str, shift: int = 0) -> "Portrait":
        self.require_faithful()
        return self.engine.to_portrait(self.engine.from_word(reduce(word), self.canon(shift)))

    def portrait_id(self, word: str, shift: int = 0) -> int:
        self.require_faithful()
        return self.engine.from_word(reduce(word), self.canon(shift))


_GROUPS: dict = {}
_GROUPS_LOCK = threading.Lock()


def grig_group(omega: OmegaSeq | str = FIRST_GRIGORCHUK, preset: str = "fsa") -> GrigGroup:
    """Shared GrigGroup instance for (omega, preset)."""
    if isinstance(omega, str):
        omega = OmegaSeq.parse(omega)
    key = (preset, omega if preset == "family" else None)
    with _GROUPS_LOCK:
        g = _GROUPS.get(key)
        if g is None:
            g = _GROUPS[key] = GrigGroup(omega, preset)
        return g


# module-level conveniences mirroring the methods


def sections(word: str, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> tuple[str, str, bool]:
    return grig_group(omega, preset).sections(word)


def wp_trivial(word: str, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> bool:
    return grig_group(omega, preset).wp_trivial(word)


def order(word: str, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> int:
    return grig_group(omega, preset).order(word)


def portrait(word: str, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> "Portrait":
    return grig_group(omega, preset).portrait(word)


def act_vertex(word: str, vertex: str, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> str:
    return grig_group(omega, preset).act_vertex(word, vertex)


def level_perm(word: str, n: int, omega=FIRST_GRIGORCHUK, preset: str = "fsa") -> np.ndarray:
    return grig_group(omega, preset).level_perm(word, n)


def compose_perms(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """First p, then q."""
    return q[p]


# ---------------------------------------------------------------------------
# portraits


@dataclass(frozen=True)
class Leaf:
    label: str  # "1", "a", "b", "c" or "d"
    shift: int

    def text(self) -> str:
        return self.label

    def depth(self) -> int:
        return 0

    def as_json(self):
        return {"leaf": self.label, "shift": self.shift}


@dataclass(frozen=True)
class Node:
    swap: bool
    left: "Portrait"
    right: "Portrait"
    shift: int

    def text(self) -> str:
        mark = "s" if self.swap else "."
        return f"{mark}({self.left.text()},{self.right.text()})"

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())

    def as_json(self):
        return {"swap": self.swap, "shift": self.shift,
                "children": [self.left.as_json(), self.right.as_json()]}


Portrait = Leaf | Node


class PortraitEngine:
    """Hash-consed portraits with memoised products.

    Node ids are small integers; two elements are equal iff their ids
    are (for faithful actions). A stored node is either
    ("leaf", letter, shift) or ("node", swap, left_id, right_id, shift),
    and a node is stored as a leaf whenever it equals a nucleus element.
    """

    def __init__(self, group: GrigGroup):
        self.group = group
        self._ids: dict[tuple, int] = {}
        self._nodes: list[tuple] = []
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        self._lock = threading.RLock()

    def _intern(self, t: tuple) -> int:
        i = self._ids.get(t)
        if i is None:
            i = len(self._nodes)
            self._nodes.append(t)
            self._ids[t] = i
        return i

    def leaf(self, letter: str, shift: int) -> int:
        return self._intern(("leaf", letter, self.group.canon(shift)))

    def identity(self, shift: int = 0) -> int:
        return self.leaf("", shift)

    def node(self, i: int) -> tuple:
        return self._nodes[i]

    def _expand(self, i: int) -> tuple[bool, int, int, int]:
        t = self._nodes[i]
        if t[0] == "node":
            return t[1], t[2], t[3], t[4]
        letter, shift = t[1], t[2]
        s0, s1, swap = self.group.gen_sections(letter, shift)
        nxt = self.group.next_shift(shift)
        return swap, self.leaf(s0, nxt), self.leaf(s1, nxt), shift

    def make(self, swap: bool, left: int, right: int, shift: int) -> int:
        shift = self.group.canon(shift)
        nxt = self.group.next_shift(shift)
        for x in NUCLEUS:
            s0, s1, sw = self.group.gen_sections(x, shift)
            if sw == swap and self.leaf(s0, nxt) == left and self.leaf(s1, nxt) == right:
                return self.leaf(x, shift)
        return self._intern(("node", bool(swap), left, right, shift))

    def from_word(self, word: str, shift: int) -> int:
        with self._lock:
            return self._from_word(word, shift)

    def _from_word(self, word: str, shift: int) -> int:
        if len(word) <= 1:
            return self.leaf(word, shift)
        w0, w1, swap = self.group.sections(word, shift)
        nxt = self.group.next_shift(shift)
        return self.make(swap, self._from_word(w0, nxt), self._from_word(w1, nxt), shift)

    def mul(self, i: int, j: int) -> int:
        with self._lock:
            return self._mul_impl(i, j)

    def _mul_impl(self, i: int, j: int) -> int:
        ti, tj = self._nodes[i], self._nodes[j]
        if ti[0] == "leaf" and ti[1] == "":
            return j
        if tj[0] == "leaf" and tj[1] == "":
            return i
        key = (i, j)
        r = self._mul.get(key)
        if r is not None:
            return r
        if ti[0] == "leaf" and tj[0] == "leaf":
            red = reduce(ti[1] + tj[1])
            if len(red) <= 1:
                r = self.leaf(red, ti[2])
                self._mul[key] = r
                return r
        sw_i, l_i, r_i, shift = self._expand(i)
        sw_j, l_j, r_j, _ = self._expand(j)
        if sw_i:
            left = self._mul_impl(l_i, r_j)
            right = self._mul_impl(r_i, l_j)
        else:
            left = self._mul_impl(l_i, l_j)
            right = self._mul_impl(r_i, r_j)
        r = self.make(sw_i != sw_j, left, right, shift)
        self._mul[key] = r
        return r

    def inv(self, i: int) -> int:
        with self._lock:
            return self._inv_impl(i)

    def _inv_impl(self, i: int) -> int:
        t = self._nodes[i]
        if t[0] == "leaf":
            return i  # nucleus elements are involutions
        r = self._inv.get(i)
        if r is None:
            _, swap, left, right, shift = t
            if swap:
                r = self.make(True, self._inv_impl(right), self._inv_impl(left), shift)
            else:
                r = self.make(False, self._inv_impl(left), self._inv_impl(right), shift)
            self._inv[i] = r
        return r

    def swap_of(self, i: int) -> bool:
        return self._expand(i)[0]

    def section(self, i: int, x: int) -> int:
        sw, left, right, _ = self._expand(i)
        return left if x == 0 else right

    def act_point_word(self, i: int, vertex: str) -> str:
        """Act on a finite vertex (level-1 letter rightmost)."""
        out = []
        for pos in range(len(vertex) - 1, -1, -1):
            t = self._nodes[i]
            if t[0] == "leaf" and t[1] == "":
                return vertex[: pos + 1] + "".join(reversed(out))
            x = int(vertex[pos])
            sw, left, right, _ = self._expand(i)
            out.append(str(x ^ int(sw)))
            i = left if x == 0 else right
        return "".join(reversed(out))

    def to_portrait(self, i: int) -> Portrait:
        t = self._nodes[i]
        if t[0] == "leaf":
            return Leaf(t[1] or "1", t[2])
        _, swap, left, right, shift = t
        return Node(swap, self.to_portrait(left), self.to_portrait(right), shift)

    def size(self) -> int:
        return len(self._nodes)


# ---------------------------------------------------------------------------
# Mealy automata


@dataclass(frozen=True)
class MealyAutomaton:
    states: tuple
    alphabet: tuple
    transitions: dict
    outputs: dict

    def __post_init__(self):
        for s in self.states:
            images = sorted(self.outputs[(s, x)] for x in self.alphabet)
            if images != sorted(self.alphabet):
                raise ValueError(f"state {s!r} does not permute the alphabet")

    def edges(self) -> list[tuple]:
        """(source, input, output, target) for every edge."""
        return [(s, x, self.outputs[(s, x)], self.transitions[(s, x)])
                for s in self.states for x in self.alphabet]


def mealy_of(preset: str = "fsa", omega: OmegaSeq = FIRST_GRIGORCHUK) -> MealyAutomaton:
    """Automaton whose states are the nucleus generators.

    For the family preset the states are (letter, shift) over the finitely
    many canonical shifts of an eventually periodic omega.
    """
    g = grig_group(omega, preset)
    if preset == "fsa":
        shifts = [0]
    else:
        n = omega.prefix_length + len(omega.tail)
        shifts = sorted({g.canon(i) for i in range(n)})
    states, trans, outs = [], {}, {}
    for sh in shifts:
        for x in ("1",) + tuple(LETTERS):
            st = x if preset == "fsa" else (x, sh)
            states.append(st)
            s0, s1, swap = g.gen_sections("" if x == "1" else x, sh)
            nxt = g.next_shift(sh)
            for inp, sec in ((0, s0), (1, s1)):
                lab = sec or "1"
                trans[(st, inp)] = lab if preset == "fsa" else (lab, nxt)
                outs[(st, inp)] = inp ^ int(swap)
    return MealyAutomaton(tuple(states), (0, 1), trans, outs)


def _state_letter(s) -> str:
    lab = s if isinstance(s, str) else s[0]
    return "" if lab == "1" else lab


def reachability_analysis(automaton: MealyAutomaton, state_word: Sequence) -> tuple[frozenset, frozenset, bool]:
    """Reachable and recurrent sets of the product automaton started at ``state_word``.

    Returns (U''_0, U, trivial) where ``trivial`` applies the criterion:
    every edge out of U''_0 is of the form x|x and every recurrent
    state word evaluates to 1 in <a,b,c,d | a^2, b^2, c^2, d^2, bcd>.
    """
    start = tuple(state_word)

    def step(w: tuple, x):
        targets = []
        for s in w:
            targets.append(automaton.transitions[(s, x)])
            x = automaton.outputs[(s, x)]
        return x, tuple(targets)

    reach = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for x in automaton.alphabet:
                _, t = step(w, x)
                if t not in reach:
                    reach.add(t)
                    nxt.append(t)
        frontier = nxt
    reach_f = frozenset(reach)

    cur = set(reach)
    while True:
        nxt_set = {step(w, x)[1] for w in cur for x in automaton.alphabet}
        if nxt_set == cur:
            break
        cur = nxt_set
    recurrent = frozenset(cur)

    identity_edges = all(step(w, x)[0] == x for w in reach for x in automaton.alphabet)
    trivial_states = all(reduce("".join(_state_letter(s) for s in w)) == "" for w in recurrent)
    return reach_f, recurrent, identity_edges and trivial_states


def fsa_to_family(word: str) -> str:
    """Rename generators from the fsa preset to the family preset at (012)^infinity."""
    return word.translate(FSA_TO_FAMILY)


def all_reduced_words(max_len: int, alphabet_bcd: Iterable[str] = "bcd") -> list[str]:
    """Every reduced word of length at most ``max_len``, shortest first."""
    bcd = tuple(alphabet_bcd)
    out = [""]
    layer = [""]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            last = w[-1] if w else None
            if last != "a":
                nxt.append(w + "a")
            if last is None or last == "a":
                nxt.extend(w + x for x in bcd)
        out.extend(nxt)
        layer = nxt
    return out

"""Letters, walks, strings, canonical forms, enumeration, bands.

A walk is a composable sequence of letters (arrows or formal inverses),
concatenated in diagram order: each letter ends where the next starts.
A string is a reduced walk none of whose direct subwalks, nor their
inverses, lies in the relation ideal.  The canonical representative of
a string is the lexicographic minimum of the walk and its inverse under
the letter order (arrow declaration order, direct before inverse).
"""

from __future__ import annotations

import re

from .errors import BandFoundError, NotAStringError, UnknownLabelError


class Letter:
    __slots__ = ("arrow", "inverse")

    def __init__(self, arrow, inverse=False):
        self.arrow = arrow
        self.inverse = inverse

    def inverted(self):
        return Letter(self.arrow, not self.inverse)

    def __eq__(self, other):
        return (
            isinstance(other, Letter)
            and self.arrow == other.arrow
            and self.inverse == other.inverse
        )

    def __hash__(self):
        return hash((self.arrow, self.inverse))

    def __repr__(self):
        return f"{self.arrow}^-" if self.inverse else self.arrow


class Walk:
    """A possibly-trivial walk; trivial walks carry an explicit basepoint."""

    __slots__ = ("letters", "basepoint")

    def __init__(self, letters=(), basepoint=None):
        self.letters = tuple(letters)
        if self.letters:
            self.basepoint = None
        else:
            if basepoint is None:
                raise ValueError("a trivial walk needs a basepoint")
            self.basepoint = basepoint

    def __len__(self):
        return len(self.letters)

    @property
    def is_trivial(self):
        return not self.letters

    def inverse(self):
        if self.is_trivial:
            return self
        return Walk(tuple(l.inverted() for l in reversed(self.letters)))

    def __eq__(self, other):
        return (
            isinstance(other, Walk)
            and self.letters == other.letters
            and self.basepoint == other.basepoint
        )

    def __hash__(self):
        return hash((self.letters, self.basepoint))

    def __repr__(self):
        return f"Walk({walk_to_text(self)})"


def letter_source(p, letter):
    a = p.quiver.arrow(letter.arrow)
    return a.target if letter.inverse else a.source


def letter_target(p, letter):
    a = p.quiver.arrow(letter.arrow)
    return a.source if letter.inverse else a.target


def walk_source(p, w):
    return w.basepoint if w.is_trivial else letter_source(p, w.letters[0])


def walk_target(p, w):
    return w.basepoint if w.is_trivial else letter_target(p, w.letters[-1])


def walk_vertices(p, w):
    """The n+1 vertices visited by a length-n walk."""
    if w.is_trivial:
        return [w.basepoint]
    verts = [letter_source(p, w.letters[0])]
    for l in w.letters:
        verts.append(letter_target(p, l))
    return verts


class StringCheck:
    __slots__ = ("ok", "reason", "index")

    def __init__(self, ok, reason=None, index=None):
        self.ok = ok
        self.reason = reason
        self.index = index

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "StringCheck(ok)" if self.ok else f"StringCheck({self.reason!r} at {self.index})"


def is_string(p, w):
    """Decide stringhood; the reason pinpoints the first offending letter index."""
    for l in w.letters:
        if l.arrow not in p.quiver.arrow_by_label:
            raise UnknownLabelError(f"unknown arrow label {l.arrow!r}")
    if w.is_trivial:
        if w.basepoint not in p.quiver.vertex_index:
            raise UnknownLabelError(f"unknown vertex {w.basepoint!r}")
        return StringCheck(True)
    for i in range(len(w.letters) - 1):
        if letter_target(p, w.letters[i]) != letter_source(p, w.letters[i + 1]):
            return StringCheck(False, "letters do not concatenate", i)
        if w.letters[i + 1] == w.letters[i].inverted():
            return StringCheck(False, "not reduced", i)
    # relation factors live inside maximal one-direction runs
    i = 0
    n = len(w.letters)
    while i < n:
        j = i
        inv = w.letters[i].inverse
        while j < n and w.letters[j].inverse == inv:
            j += 1
        labels = tuple(l.arrow for l in w.letters[i:j])
        if inv:
            labels = tuple(reversed(labels))
        hit = _first_relation_factor(p, labels)
        if hit is not None:
            off, rel = hit
            idx = i + off if not inv else i + (len(labels) - off - len(rel))
            kind = "inverse of a relation" if inv else "relation"
            return StringCheck(False, f"subwalk is the {kind} {' '.join(rel)}", idx)
        i = j
    return StringCheck(True)


def _first_relation_factor(p, labels):
    for rel in p.relations:
        k = len(rel)
        for i in range(len(labels) - k + 1):
            if labels[i : i + k] == rel:
                return i, rel
    return None


def letter_key(p, letter):
    return (p.quiver.arrow_index[letter.arrow], 1 if letter.inverse else 0)


def walk_key(p, w):
    """Total order key: (length, letters); trivial walks order by basepoint."""
    if w.is_trivial:
        return (0, (p.quiver.vertex_index[w.basepoint],))
    return (len(w.letters), tuple(letter_key(p, l) for l in w.letters))


def canonical_walk(p, w):
    """Lexicographic minimum of the walk and its inverse."""
    if w.is_trivial:
        return w
    inv = w.inverse()
    return w if walk_key(p, w) <= walk_key(p, inv) else inv


class StringWord:
    """A validated canonical string."""

    __slots__ = ("walk", "canonical")

    def __init__(self, walk, canonical=True):
        self.walk = walk
        self.canonical = canonical

    def __len__(self):
        return len(self.walk)

    def __eq__(self, other):
        return isinstance(other, StringWord) and self.walk == other.walk

    def __hash__(self):
        return hash(self.walk)

    def __repr__(self):
        return f"StringWord({walk_to_text(self.walk)})"


def string_word(p, walk):
    """Validate and canonicalize a walk into a StringWord."""
    chk = is_string(p, walk)
    if not chk:
        raise NotAStringError(f"{walk_to_text(walk)}: {chk.reason} (letter {chk.index})")
    return StringWord(canonical_walk(p, walk))


def canonicalize(p, word):
    """Canonical representative; idempotent and inversion-invariant."""
    walk = word.walk if isinstance(word, StringWord) else word
    return StringWord(canonical_walk(p, walk))


class StringFlags:
    __slots__ = (
        "starts_in_deep",
        "starts_on_peak",
        "ends_in_deep",
        "ends_on_peak",
        "is_direct",
        "is_inverse",
    )

    def __init__(self, sid, sop, eid, eop, d, i):
        self.starts_in_deep = sid
        self.starts_on_peak = sop
        self.ends_in_deep = eid
        self.ends_on_peak = eop
        self.is_direct = d
        self.is_inverse = i

    def as_dict(self):
        return {
            "startsInDeep": self.starts_in_deep,
            "startsOnPeak": self.starts_on_peak,
            "endsInDeep": self.ends_in_deep,
            "endsOnPeak": self.ends_on_peak,
            "isDirect": self.is_direct,
            "isInverse": self.is_inverse,
        }


def prepend_candidates(p, w, inverse):
    """Arrows b such that b^{±1}w is a string (b ends resp. starts at the walk source)."""
    v = walk_source(p, w)
    pool = p.quiver.arrows_from(v) if inverse else p.quiver.arrows_into(v)
    out = []
    for b in pool:
        cand = Walk((Letter(b.label, inverse),) + w.letters)
        if is_string(p, cand):
            out.append(b)
    return out


def append_candidates(p, w, inverse):
    """Arrows b such that wb^{±1} is a string (b starts resp. ends at the walk target)."""
    v = walk_target(p, w)
    pool = p.quiver.arrows_into(v) if inverse else p.quiver.arrows_from(v)
    out = []
    for b in pool:
        cand = Walk(w.letters + (Letter(b.label, inverse),))
        if is_string(p, cand):
            out.append(b)
    return out


def string_flags(p, word):
    w = word.walk if isinstance(word, StringWord) else word
    return StringFlags(
        sid=not prepend_candidates(p, w, inverse=True),
        sop=not prepend_candidates(p, w, inverse=False),
        eid=not append_candidates(p, w, inverse=False),
        eop=not append_candidates(p, w, inverse=True),
        d=all(not l.inverse for l in w.letters),
        i=all(l.inverse for l in w.letters),
    )


def enumerate_strings(p, max_len=None):
    """All canonical strings up to max_len, in (length, lex) order.

    Unbounded enumeration demands a band-free presentation, otherwise the
    walk language is infinite and we refuse with BandFoundError.
    """
    if max_len is None:
        if has_band(p):
            raise BandFoundError(
                "unbounded string enumeration on a presentation with bands"
            )
    seen = set()
    out = []
    frontier = []
    for v in p.quiver.vertices:
        w = Walk(basepoint=v)
        seen.add(w)
        out.append(StringWord(w))
        frontier.append(w)
    length = 0
    while frontier and (max_len is None or length < max_len):
        length += 1
        layer = set()
        for w in frontier:
            # extend both orientations rightward: every longer string arises
            # from some string by attaching one letter at one end
            orientations = (w,) if w.is_trivial else (w, w.inverse())
            for o in orientations:
                for inv in (False, True):
                    for b in append_candidates(p, o, inverse=inv):
                        nxt = Walk(o.letters + (Letter(b.label, inv),))
                        canon = canonical_walk(p, nxt)
                        if canon not in seen:
                            seen.add(canon)
                            layer.add(canon)
        out.extend(StringWord(c) for c in sorted(layer, key=lambda c: walk_key(p, c)))
        frontier = sorted(layer, key=lambda c: walk_key(p, c))
    out.sort(key=lambda sw: walk_key(p, sw.walk))
    return out


def _window_strings(p, w):
    """All strings of length exactly w, as letter tuples (both orientations)."""
    words = [(Letter(a.label, inv),) for a in p.quiver.arrows for inv in (False, True)]
    for _ in range(w - 1):
        nxt = []
        for word in words:
            wk = Walk(word)
            for inv in (False, True):
                for b in append_candidates(p, wk, inverse=inv):
                    nxt.append(word + (Letter(b.label, inv),))
        words = nxt
    return words


def has_band(p):
    """Exact band-existence test via a cycle in the letter-window graph.

    Windows of length max(relation length, 2) − 1 see every forbidden
    factor (relations, their inverses, backtracks), so arbitrarily long
    strings exist iff the window graph has a cycle, iff a band exists.
    """
    w = max(p.max_relation_length, 2) - 1
    nodes = _window_strings(p, w)
    if not nodes:
        return False
    index = {n: i for i, n in enumerate(nodes)}
    succ = [[] for _ in nodes]
    for n in nodes:
        wk = Walk(n)
        for inv in (False, True):
            for b in append_candidates(p, wk, inverse=inv):
                nxt = n + (Letter(b.label, inv),)
                succ[index[n]].append(index[nxt[1:]])
    from .presentation import _digraph_has_cycle

    return _digraph_has_cycle(succ)


def _rotations(letters):
    n = len(letters)
    return [letters[i:] + letters[:i] for i in range(n)]


def _is_primitive(letters):
    n = len(letters)
    for d in range(1, n):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return False
    return True


def _is_band(p, letters):
    """Cyclic, primitive, and every power is a string."""
    wk = Walk(letters)
    if walk_source(p, wk) != walk_target(p, wk):
        return False
    if not _is_primitive(letters):
        return False
    # power high enough that every forbidden-factor window is inspected
    t = max(2, p.max_relation_length // len(letters) + 2)
    return bool(is_string(p, Walk(letters * t)))


def canonical_band(p, letters):
    """Minimal rotation over the word and its inverse."""
    best = None
    for seq in (letters, Walk(letters).inverse().letters):
        for rot in _rotations(tuple(seq)):
            key = tuple(letter_key(p, l) for l in rot)
            if best is None or key < best[0]:
                best = (key, rot)
    return Walk(best[1])


def find_bands(p, max_len):
    """Canonical band words of length <= max_len, sorted."""
    found = {}
    words = [(Letter(a.label, inv),) for a in p.quiver.arrows for inv in (False, True)]
    length = 1
    while words and length <= max_len:
        for word in words:
            if _is_band(p, word):
                band = canonical_band(p, word)
                found[band.letters] = band
        if length == max_len:
            break
        nxt = []
        for word in words:
            wk = Walk(word)
            for inv in (False, True):
                for b in append_candidates(p, wk, inverse=inv):
                    nxt.append(word + (Letter(b.label, inv),))
        words = nxt
        length += 1
    return sorted(found.values(), key=lambda w: walk_key(p, w))


_LETTER_RE = re.compile(r"^(.*?)(\^-)?$")
_TRIVIAL_RE = re.compile(r"^e\((.+)\)$")


def walk_to_text(w):
    """Space-separated letters, inverses suffixed ^-; trivial walks `e(v)`."""
    if w.is_trivial:
        return f"e({w.basepoint})"
    return " ".join(f"{l.arrow}^-" if l.inverse else l.arrow for l in w.letters)


def walk_from_text(text):
    text = text.strip()
    m = _TRIVIAL_RE.match(text)
    if m:
        return Walk(basepoint=m.group(1))
    letters = []
    for tok in text.split():
        m = _LETTER_RE.match(tok)
        label, inv = m.group(1), m.group(2) is not None
        if not label:
            raise NotAStringError(f"empty letter token in {text!r}")
        letters.append(Letter(label, inv))
    if not letters:
        raise NotAStringError("empty walk text; trivial walks are written e(v)")
    return Walk(letters)

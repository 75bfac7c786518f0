"""Quivers with monomial relations: parsing, validation, finiteness.

The presentation grammar is line oriented:

    algebra <name>
    vertices <id> <id> ...
    arrow <label> <src> -> <dst>
    relation <label> <label> ...

'#' starts a comment.  Declaration order of vertices and arrows is kept
and is the canonical order for everything downstream.
"""

from __future__ import annotations

import math

from .errors import (
    CompositionError,
    PresentationSyntaxError,
    UnknownLabelError,
)


class Arrow:
    __slots__ = ("label", "source", "target")

    def __init__(self, label, source, target):
        self.label = label
        self.source = source
        self.target = target

    def __eq__(self, other):
        return (
            isinstance(other, Arrow)
            and (self.label, self.source, self.target)
            == (other.label, other.source, other.target)
        )

    def __hash__(self):
        return hash((self.label, self.source, self.target))

    def __repr__(self):
        return f"Arrow({self.label}: {self.source} -> {self.target})"


class Quiver:
    """Finite quiver; vertex/arrow order is declaration order."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationSyntaxError("duplicate vertex identifier")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise PresentationSyntaxError("duplicate arrow label")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_by_label = {a.label: a for a in self.arrows}
        self.arrow_index = {a.label: i for i, a in enumerate(self.arrows)}
        for a in self.arrows:
            if a.source not in self.vertex_index:
                raise UnknownLabelError(f"arrow {a.label}: unknown vertex {a.source}")
            if a.target not in self.vertex_index:
                raise UnknownLabelError(f"arrow {a.label}: unknown vertex {a.target}")
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def arrows_from(self, v):
        return self._out[v]

    def arrows_into(self, v):
        return self._in[v]

    def arrow(self, label):
        a = self.arrow_by_label.get(label)
        if a is None:
            raise UnknownLabelError(f"unknown arrow label {label!r}")
        return a

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


# A monomial relation is a composable tuple of arrow labels of length >= 2,
# written in diagram order (first-traversed arrow leftmost).
Monomial = tuple


class AlgebraPresentation:
    """A quiver with a normalized set of monomial relations."""

    def __init__(self, quiver, relations, name=""):
        self.name = name
        self.quiver = quiver
        rels = []
        for rel in relations:
            rel = tuple(rel)
            if len(rel) < 2:
                raise PresentationSyntaxError(
                    f"relation {' '.join(rel)}: monomial relations must have length >= 2"
                )
            for lab in rel:
                quiver.arrow(lab)
            for x, y in zip(rel, rel[1:]):
                if quiver.arrow(x).target != quiver.arrow(y).source:
                    raise CompositionError(
                        f"relation {' '.join(rel)}: {x} ends at "
                        f"{quiver.arrow(x).target} but {y} starts at {quiver.arrow(y).source}"
                    )
            if rel not in rels:
                rels.append(rel)
        # normalized generating set: no relation may contain another as a factor
        self.relations = tuple(
            r
            for r in rels
            if not any(s != r and _is_factor(s, r) for s in rels)
        )
        self._max_rel_len = max((len(r) for r in self.relations), default=0)

    def path_in_ideal(self, labels):
        """True iff the path contains some relation as a contiguous factor."""
        labels = tuple(labels)
        for rel in self.relations:
            k = len(rel)
            if k > len(labels):
                continue
            for i in range(len(labels) - k + 1):
                if labels[i : i + k] == rel:
                    return True
        return False

    @property
    def max_relation_length(self):
        return self._max_rel_len

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraPresentation)
            and self.name == other.name
            and self.quiver == other.quiver
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.name, self.quiver, self.relations))

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r})"


def _is_factor(s, r):
    k = len(s)
    return any(r[i : i + k] == s for i in range(len(r) - k + 1))


def parse_presentation(text):
    """Parse presentation source text; see the module docstring for the grammar."""
    name = ""
    vertices = []
    arrow_specs = []
    relations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw = tokens[0]
        if kw == "algebra":
            if len(tokens) != 2:
                raise PresentationSyntaxError(
                    "algebra line needs exactly one name", line=lineno, column=len(kw) + 1
                )
            name = tokens[1]
        elif kw == "vertices":
            if len(tokens) < 2:
                raise PresentationSyntaxError(
                    "vertices line needs at least one identifier", line=lineno, column=len(kw) + 1
                )
            vertices.extend(tokens[1:])
        elif kw == "arrow":
            if len(tokens) != 5 or tokens[3] != "->":
                raise PresentationSyntaxError(
                    "expected: arrow <label> <src> -> <dst>", line=lineno, column=1
                )
            arrow_specs.append((tokens[1], tokens[2], tokens[4], lineno))
        elif kw == "relation":
            if len(tokens) < 3:
                raise PresentationSyntaxError(
                    "relations must list at least two arrow labels", line=lineno, column=len(kw) + 1
                )
            relations.append((tuple(tokens[1:]), lineno))
        else:
            raise PresentationSyntaxError(
                f"unknown directive {kw!r}", line=lineno, column=1
            )
    seen = set()
    for label, src, dst, lineno in arrow_specs:
        if label in seen:
            raise PresentationSyntaxError(f"duplicate arrow label {label!r}", line=lineno)
        seen.add(label)
        for v in (src, dst):
            if v not in vertices:
                raise UnknownLabelError(
                    f"arrow {label}: unknown vertex {v!r}", line=lineno
                )
    quiver = Quiver(vertices, [Arrow(l, s, t) for l, s, t, _ in arrow_specs])
    rels = []
    for rel, lineno in relations:
        try:
            AlgebraPresentation(quiver, [rel])
        except (CompositionError, UnknownLabelError) as exc:
            exc.line = lineno
            raise
        rels.append(rel)
    return AlgebraPresentation(quiver, rels, name=name)


def serialize_presentation(p):
    """Emit presentation source; byte-stable and reparses to an equal object."""
    lines = []
    if p.name:
        lines.append(f"algebra {p.name}")
    if p.quiver.vertices:
        lines.append("vertices " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.label} {a.source} -> {a.target}")
    for rel in p.relations:
        lines.append("relation " + " ".join(rel))
    return "\n".join(lines) + "\n"


class ConditionReport:
    __slots__ = ("key", "passed", "witness")

    def __init__(self, key, passed, witness=None):
        self.key = key
        self.passed = passed
        self.witness = witness

    def as_dict(self):
        return {"condition": self.key, "passed": self.passed, "witness": self.witness}

    def __repr__(self):
        state = "pass" if self.passed else f"FAIL ({self.witness})"
        return f"({self.key}) {state}"


class ValidationReport:
    def __init__(self, conditions):
        self.conditions = conditions
        self.is_string_algebra = all(c.passed for c in conditions)

    def as_dict(self):
        return {
            "isStringAlgebra": self.is_string_algebra,
            "conditions": [c.as_dict() for c in self.conditions],
        }

    def __repr__(self):
        return f"ValidationReport(is_string_algebra={self.is_string_algebra})"


def validate_string_algebra(p):
    """Check the five string-algebra conditions; failures are data, not errors."""
    q = p.quiver
    conditions = []

    bad = next((v for v in q.vertices if len(q.arrows_from(v)) > 2), None)
    conditions.append(
        ConditionReport("1", bad is None, None if bad is None else f"vertex {bad} emits >2 arrows")
    )
    bad = next((v for v in q.vertices if len(q.arrows_into(v)) > 2), None)
    conditions.append(
        ConditionReport("1'", bad is None, None if bad is None else f"vertex {bad} receives >2 arrows")
    )

    witness2 = None
    for beta in q.arrows:
        preds = [
            g.label
            for g in q.arrows_into(beta.source)
            if not p.path_in_ideal((g.label, beta.label))
        ]
        if len(preds) > 1:
            witness2 = f"arrow {beta.label} admits predecessors {', '.join(preds)}"
            break
    conditions.append(ConditionReport("2", witness2 is None, witness2))

    witness2p = None
    for gamma in q.arrows:
        succs = [
            b.label
            for b in q.arrows_from(gamma.target)
            if not p.path_in_ideal((gamma.label, b.label))
        ]
        if len(succs) > 1:
            witness2p = f"arrow {gamma.label} admits successors {', '.join(succs)}"
            break
    conditions.append(ConditionReport("2'", witness2p is None, witness2p))

    # (3) the ideal is monomial by construction: non-monomial input never parses
    conditions.append(ConditionReport("3", True, None))
    return ValidationReport(conditions)


def _direct_window(p, window_len):
    """All relation-free direct paths of a given length, as label tuples."""
    q = p.quiver
    if window_len == 0:
        return [()]
    paths = [(a.label,) for a in q.arrows]
    for _ in range(window_len - 1):
        nxt = []
        for path in paths:
            last = q.arrow(path[-1])
            for b in q.arrows_from(last.target):
                cand = path + (b.label,)
                if not p.path_in_ideal(cand):
                    nxt.append(cand)
        paths = nxt
    return paths


def has_unbounded_paths(p):
    """True iff relation-free direct paths of unbounded length exist.

    Windows of length max(relation length, 1) form a finite graph whose
    walks are exactly the long relation-free paths; a cycle there pumps.
    """
    w = max(p.max_relation_length - 1, 1)
    nodes = _direct_window(p, w)
    if not nodes:
        return False
    index = {n: i for i, n in enumerate(nodes)}
    succ = [[] for _ in nodes]
    q = p.quiver
    for n in nodes:
        last = q.arrow(n[-1])
        for b in q.arrows_from(last.target):
            cand = n + (b.label,)
            if p.path_in_ideal(cand):
                continue
            succ[index[n]].append(index[cand[1:]])
    return _digraph_has_cycle(succ)


def _digraph_has_cycle(succ):
    n = len(succ)
    color = [0] * n  # 0 unseen, 1 on stack, 2 done
    for start in range(n):
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return False


def nonzero_paths_from(p, v):
    """Relation-free paths starting at v, each a label tuple, by (length, order).

    The caller must know the count is finite (see has_unbounded_paths).
    """
    q = p.quiver
    out = [()]
    layer = [()]
    start = {(): v}
    while layer:
        nxt = []
        for path in layer:
            end = start[path] if not path else q.arrow(path[-1]).target
            for b in q.arrows_from(end):
                cand = path + (b.label,)
                if not p.path_in_ideal(cand):
                    nxt.append(cand)
                    start[cand] = v
        out.extend(nxt)
        layer = nxt
    return out


def nonzero_path_count(p):
    """Number of relation-free paths (trivial ones included); math.inf if unbounded."""
    if has_unbounded_paths(p):
        return math.inf
    return sum(len(nonzero_paths_from(p, v)) for v in p.quiver.vertices)

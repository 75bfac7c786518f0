"""Local quiver patterns, cycles of length three, path classes, theorem audits.

The audits are a falsification harness: canonical irreducible matrices get
seeded perturbations from the second radical layer, all depths are computed
with exact arithmetic, and any counterexample is reported verbatim.
"""

from __future__ import annotations

import random

from .artheory import (
    ar_sequence,
    is_projective_word,
    knit,
    rad_projective_arrows,
    tau_word,
)
from .errors import BandFoundError, MeshInconsistencyError
from .fields import QQ
from .modules import realize
from .radical import ZERO_DEPTH, RadicalTable
from .strings import canonical_walk, has_band


class PatternMatch:
    __slots__ = ("pattern_id", "binding", "conditions")

    def __init__(self, pattern_id, binding, conditions):
        self.pattern_id = pattern_id
        self.binding = binding
        self.conditions = conditions

    def as_dict(self):
        return {
            "pattern": self.pattern_id,
            "binding": {k: v for k, v in self.binding.items()},
            "conditions": [
                {"condition": c[0], "passed": c[1]} for c in self.conditions
            ],
        }

    def __repr__(self):
        return f"PatternMatch({self.pattern_id}, {self.binding})"


def _all_pass(conds):
    return all(ok for _, ok in conds)


def _relation_is_loop_power(p, loop_label):
    return any(all(lab == loop_label for lab in rel) for rel in p.relations)


def _simple_paths(p, src, length):
    """Directed simple paths of exactly `length` arrows from src, lexicographic."""
    out = []

    def grow(path, seen):
        if len(path) == length:
            out.append(tuple(path))
            return
        end = p.quiver.arrow(path[-1]).target if path else src
        for a in p.quiver.arrows_from(end):
            if a.target in seen:
                continue
            path.append(a.label)
            seen.add(a.target)
            grow(path, seen)
            seen.discard(a.target)
            path.pop()

    grow([], {src})
    return out


def detect_local_patterns(p):
    """All bindings of the six local patterns, side conditions checked literally."""
    out = []
    q = p.quiver
    loops = [a for a in q.arrows if a.source == a.target]
    plain = [a for a in q.arrows if a.source != a.target]

    for al in loops:
        a_v = al.source
        for be in q.arrows_from(a_v):
            if be.source == be.target:
                continue
            x = be.target
            # loop with an outgoing bridge: the two flavor split is on alpha*beta
            extra_at_a = [
                c for c in q.arrows if a_v in (c.source, c.target) and c not in (al, be)
            ]
            conds = [
                ("some power of the loop lies in the ideal", _relation_is_loop_power(p, al.label)),
                ("loop then bridge lies in the ideal", p.path_in_ideal((al.label, be.label))),
                ("bridge continuations die", all(
                    p.path_in_ideal((be.label, d.label)) for d in q.arrows_from(x)
                )),
                ("no other arrows at the loop vertex", not extra_at_a),
                ("bridge is the only arrow into its target", q.arrows_into(x) == [be]),
            ]
            if _all_pass(conds):
                out.append(PatternMatch("Q1", {"a": a_v, "x": x}, conds))
            conds = [
                ("loop squared lies in the ideal", p.path_in_ideal((al.label, al.label))),
                ("loop then bridge survives", not p.path_in_ideal((al.label, be.label))),
                ("no other arrows into the loop vertex", q.arrows_into(a_v) == [al]),
                ("bridge continuations die", all(
                    p.path_in_ideal((be.label, d.label)) for d in q.arrows_from(x)
                )),
                ("bridge is the only arrow into its target", q.arrows_into(x) == [be]),
            ]
            if _all_pass(conds):
                out.append(PatternMatch("loop-out", {"1": a_v, "2": x}, conds))
        for be in q.arrows_into(a_v):
            if be.source == be.target:
                continue
            x = be.source
            extra_at_a = [
                c for c in q.arrows if a_v in (c.source, c.target) and c not in (al, be)
            ]
            conds = [
                ("some power of the loop lies in the ideal", _relation_is_loop_power(p, al.label)),
                ("bridge then loop lies in the ideal", p.path_in_ideal((be.label, al.label))),
                ("bridge approaches die", all(
                    p.path_in_ideal((d.label, be.label)) for d in q.arrows_into(x)
                )),
                ("no other arrows at the loop vertex", not extra_at_a),
                ("bridge is the only arrow out of its source", q.arrows_from(x) == [be]),
            ]
            if _all_pass(conds):
                out.append(PatternMatch("Q2", {"a": a_v, "x": x}, conds))
            conds = [
                ("loop squared lies in the ideal", p.path_in_ideal((al.label, al.label))),
                ("bridge then loop survives", not p.path_in_ideal((be.label, al.label))),
                ("no other arrows out of the loop vertex", q.arrows_from(a_v) == [al]),
                ("bridge approaches die", all(
                    p.path_in_ideal((d.label, be.label)) for d in q.arrows_into(x)
                )),
                ("bridge is the only arrow out of its source", q.arrows_from(x) == [be]),
            ]
            if _all_pass(conds):
                out.append(PatternMatch("loop-in", {"1": a_v, "2": x}, conds))

    # parallel-route patterns: a shortcut arrow next to a longer route
    for alpha in plain:
        one, z = alpha.source, alpha.target
        for m in range(1, len(q.arrows) + 1):
            for route in _simple_paths(p, one, m):
                if alpha.label in route:
                    continue
                if p.quiver.arrow(route[-1]).target != z:
                    continue
                if any(p.quiver.arrow(lab).source == z for lab in route):
                    continue
                for be in q.arrows_from(z):
                    a_v = be.target
                    if a_v in {one, z} or any(
                        a_v in (q.arrow(lab).source, q.arrow(lab).target) for lab in route
                    ):
                        continue
                    conds = [
                        ("shortcut then exit lies in the ideal", p.path_in_ideal((alpha.label, be.label))),
                        ("route then exit survives", not p.path_in_ideal(route + (be.label,))),
                        ("exit continuations die", all(
                            p.path_in_ideal(route + (be.label, d.label))
                            for d in q.arrows_from(a_v)
                        )),
                        ("route approaches die", all(
                            p.path_in_ideal((l.label,) + route) for l in q.arrows_into(one)
                        )),
                        ("exit target receives nothing else", q.arrows_into(a_v) == [be]),
                    ]
                    if _all_pass(conds):
                        out.append(
                            PatternMatch(
                                "Q3",
                                {"1": one, "z": z, "a": a_v, "route": list(route), "m": m},
                                conds,
                            )
                        )
                for be in q.arrows_into(one):
                    a_v = be.source
                    if a_v in {one, z} or any(
                        a_v in (q.arrow(lab).source, q.arrow(lab).target) for lab in route
                    ):
                        continue
                    conds = [
                        ("entry then shortcut lies in the ideal", p.path_in_ideal((be.label, alpha.label))),
                        ("entry then route survives", not p.path_in_ideal((be.label,) + route)),
                        ("entry approaches die", all(
                            p.path_in_ideal((d.label, be.label) + route)
                            for d in q.arrows_into(a_v)
                        )),
                        ("route continuations die", all(
                            p.path_in_ideal(route + (l.label,)) for l in q.arrows_from(z)
                        )),
                        ("entry source emits nothing else", q.arrows_from(a_v) == [be]),
                    ]
                    if _all_pass(conds):
                        out.append(
                            PatternMatch(
                                "Q4",
                                {"1": z, "z": one, "a": a_v, "route": list(route), "m": m},
                                conds,
                            )
                        )
    return out


def find_three_cycles(quiver):
    """Directed cycles of three irreducible arrows, canonical rotation, sorted."""
    seen = set()
    cycles = []
    arrows = quiver.arrows
    for a1 in arrows:
        for a2 in quiver.arrows_from(a1.target):
            for a3 in quiver.arrows_from(a2.target):
                if a3.target != a1.source:
                    continue
                triple = (a1, a2, a3)
                nodes = (a1.source, a2.source, a3.source)
                k = min(range(3), key=lambda i: nodes[i])
                rotated = tuple(nodes[(k + i) % 3] for i in range(3))
                arr = tuple(triple[(k + i) % 3] for i in range(3))
                key = tuple(id(a) for a in arr)
                if key not in seen:
                    seen.add(key)
                    cycles.append(arr)
    cycles.sort(key=lambda arr: (arr[0].source, arr[1].source, arr[2].source))
    return cycles


def find_tau_arrows(p, quiver=None, candidates=None, field=QQ):
    """Pairs (M, tau M) joined by an irreducible morphism.

    With a knitted quiver the meshes are scanned; with explicit candidate
    modules (the banded case) the relevant mesh is built locally.
    """
    out = []
    if quiver is not None:
        for n in quiver.nodes:
            if n.projective:
                continue
            t = quiver.nodes[quiver.tau_pairs[n.index]]
            if quiver.arrows_between(n.index, t.index):
                out.append((n.module, t.module))
        return out
    if candidates is None:
        raise ValueError("need a knitted quiver or candidate modules")
    for M in candidates:
        if is_projective_word(p, M.word.walk):
            continue
        t_walk = canonical_walk(p, tau_word(p, M.word.walk))
        t_mod = realize(p, t_walk, field)
        if is_projective_word(p, t_walk):
            for v in p.quiver.vertices:
                from .modules import projective_word

                if canonical_walk(p, projective_word(p, v)) == t_walk:
                    summands = rad_projective_arrows(
                        p, v, field, lambda w: realize(p, w, field)
                    )
                    if any(src.word.walk == M.word.walk for src, _, _ in summands):
                        out.append((M, t_mod))
                    break
            continue
        seq = ar_sequence(p, t_mod, "endingAt", field=field)
        if any(mid.word.walk == M.word.walk for mid in seq.middle):
            out.append((M, t_mod))
    return out


class PathClass:
    __slots__ = (
        "is_sectional",
        "is_presectional",
        "is_left_almost_presectional",
        "is_right_almost_presectional",
    )

    def __init__(self, s, ps, lap, rap):
        self.is_sectional = s
        self.is_presectional = ps
        self.is_left_almost_presectional = lap
        self.is_right_almost_presectional = rap

    def as_dict(self):
        return {
            "sectional": self.is_sectional,
            "presectional": self.is_presectional,
            "leftAlmostPresectional": self.is_left_almost_presectional,
            "rightAlmostPresectional": self.is_right_almost_presectional,
        }


def path_class(quiver, node_indices):
    """Classify a directed path of Gamma nodes."""
    idx = list(node_indices)
    for a, b in zip(idx, idx[1:]):
        if not quiver.arrows_between(a, b):
            raise MeshInconsistencyError(
                f"{quiver.nodes[a].text} -> {quiver.nodes[b].text} is not an arrow"
            )

    def tau_of(i):
        return quiver.tau_pairs.get(i)

    sectional = all(
        tau_of(idx[j]) != idx[j - 2] or tau_of(idx[j]) is None
        for j in range(2, len(idx))
    )

    def presectional_range(lo, hi):
        for i in range(lo + 1, hi):
            if tau_of(idx[i + 1]) == idx[i - 1]:
                if len(quiver.arrows_between(idx[i - 1], idx[i])) < 2:
                    return False
        return True

    n = len(idx) - 1
    presectional = presectional_range(0, n)
    lap = (
        n >= 2
        and presectional_range(0, n - 1)
        and tau_of(idx[n]) == idx[n - 2]
    )
    rap = (
        n >= 2
        and presectional_range(1, n)
        and tau_of(idx[2]) == idx[0]
    )
    return PathClass(sectional, presectional, lap, rap)


class AuditReport:
    def __init__(self, algebra, samples, seed, audits, stats):
        self.algebra = algebra
        self.samples = samples
        self.seed = seed
        self.audits = audits
        self.stats = stats
        self.passed = all(a["passed"] for a in audits.values())

    def as_dict(self):
        return {
            "algebra": self.algebra,
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "stats": self.stats,
            "audits": self.audits,
        }


def audit_theorems(p, samples=32, seed=0, field=QQ):
    """Run the four structure audits over the knitted quiver.

    (A) no composite of three irreducibles of depth exactly 6 whose two
        pair composites both stay at depth <= 2;
    (B) every triple composite of depth >= 4 has depth >= 6;
    (C) every 3-cycle carries a block-mono and a block-epi;
    (D) 3-cycles exist iff some irreducible M -> tau M exists.
    """
    if has_band(p):
        raise BandFoundError("audits need a band-free presentation")
    quiver = knit(p, field)
    table = RadicalTable(quiver)
    arrows = quiver.arrows
    triples = []
    for a1 in arrows:
        for a2 in quiver.arrows_from(a1.target):
            for a3 in quiver.arrows_from(a2.target):
                triples.append((a1, a2, a3))

    def rand_in_layer(rng, x, y, n):
        space = table.layer(x, y, n)
        f = None
        from .modules import morphism_from_flat, zero_morphism

        f = zero_morphism(x.module.rep, y.module.rep)
        for row in space.rows:
            c = rng.randint(-3, 3)
            if c:
                g = morphism_from_flat(x.module.rep, y.module.rep, row)
                f = f.add(g.scale(field.of(c)))
        return f

    a_violations = []
    b_violations = []
    for t_ix, (a1, a2, a3) in enumerate(triples):
        ends = [
            (quiver.nodes[a1.source], quiver.nodes[a1.target]),
            (quiver.nodes[a2.source], quiver.nodes[a2.target]),
            (quiver.nodes[a3.source], quiver.nodes[a3.target]),
        ]
        rng = random.Random(f"{seed}:{t_ix}")
        for s_ix in range(samples):
            hs = []
            for (x, y), arrow in zip(ends, (a1, a2, a3)):
                h = arrow.morphism
                if s_ix:  # sample 0 is the bare canonical triple
                    h = h.add(rand_in_layer(rng, x, y, 2))
                hs.append(h)
            h21 = hs[1].compose(hs[0])
            h32 = hs[2].compose(hs[1])
            total = hs[2].compose(h21)
            d21 = table.depth(h21, ends[0][0], ends[1][1])
            d32 = table.depth(h32, ends[1][0], ends[2][1])
            dtot = table.depth(total, ends[0][0], ends[2][1])
            spot = {
                "triple": [ends[0][0].text, ends[1][0].text, ends[2][0].text, ends[2][1].text],
                "sample": s_ix,
                "depths": {
                    "pair12": None if d21 == ZERO_DEPTH else d21,
                    "pair23": None if d32 == ZERO_DEPTH else d32,
                    "total": None if dtot == ZERO_DEPTH else dtot,
                },
            }
            if dtot == 6 and d21 <= 2 and d32 <= 2:
                a_violations.append(spot)
            if dtot != ZERO_DEPTH and 4 <= dtot < 6:
                b_violations.append(spot)

    cycles = find_three_cycles(quiver)
    c_violations = []
    for arr in cycles:
        monos = [a.morphism.is_mono() for a in arr]
        epis = [a.morphism.is_epi() for a in arr]
        if not (any(monos) and any(epis)):
            c_violations.append(
                {"cycle": [quiver.nodes[a.source].text for a in arr]}
            )
    pairs = find_tau_arrows(p, quiver=quiver)
    d_ok = bool(cycles) == bool(pairs)

    audits = {
        "A-no-shallow-triple-at-6": {
            "passed": not a_violations,
            "counterexamples": a_violations,
        },
        "B-depth-4-implies-6": {
            "passed": not b_violations,
            "counterexamples": b_violations,
        },
        "C-cycles-mix-mono-epi": {
            "passed": not c_violations,
            "counterexamples": c_violations,
        },
        "D-cycles-iff-translate-arrows": {
            "passed": d_ok,
            "counterexamples": []
            if d_ok
            else [{"cycles": len(cycles), "translateArrows": len(pairs)}],
        },
    }
    stats = {
        "nodes": len(quiver.nodes),
        "arrows": len(arrows),
        "triples": len(triples),
        "threeCycles": len(cycles),
        "translateArrowPairs": len(pairs),
    }
    return AuditReport(p.name or "", samples, seed, audits, stats)

"""Auslander-Reiten translates, almost split sequences, and knitting.

The translate of a string module is computed by surgery on its word, one
operation per word end.  For the sequence ending at M(C) an end either
loses its hook (the outer inverse run and the following direct letter, on
the left) or gains a cohook (a new inverse letter plus a maximal direct
run); for the sequence starting at M(C) the operations are the formal
inverses.  Middle terms apply one end's operation, the far term applies
both; additions are applied before deletions and deletions inspect the
current word, which is what makes single-middle meshes come out right.

An independent DTr oracle (minimal projective presentation, transpose
over the opposite quiver, linear dual) guards the surgery.
"""

from __future__ import annotations

import itertools

from .errors import (
    BandFoundError,
    InfiniteDimensionalError,
    IsInjectiveError,
    IsProjectiveError,
    MeshInconsistencyError,
)
from .fields import Mat, QQ, Subspace, nullspace, solve
from .modules import (
    MorphismMatrix,
    Representation,
    StringModule,
    identity_morphism,
    injective_word,
    is_isomorphic,
    projective_word,
    realize,
    realize_walk,
    zero_morphism,
)
from .presentation import has_unbounded_paths, nonzero_path_count, nonzero_paths_from
from .strings import (
    Letter,
    StringWord,
    Walk,
    append_candidates,
    canonical_walk,
    enumerate_strings,
    has_band,
    prepend_candidates,
    string_word,
    walk_to_text,
    walk_vertices,
)

_CLIMB_CAP = 10000


def _letter_pattern_ok(walk, first_inverse):
    """True iff the letters read (inverse*)(direct*) or its flip."""
    seen_second = False
    for l in walk.letters:
        if l.inverse == first_inverse and not seen_second:
            continue
        if l.inverse == first_inverse and seen_second:
            return False
        seen_second = True
    return True


def is_projective_word(p, walk):
    """M(C) is projective iff C reads inverse*direct* and both ends sit in a deep."""
    if not _letter_pattern_ok(walk, first_inverse=True):
        return False
    if prepend_candidates(p, walk, inverse=True):
        return False
    if append_candidates(p, walk, inverse=False):
        return False
    return True


def is_injective_word(p, walk):
    """M(C) is injective iff C reads direct*inverse* and both ends sit on a peak."""
    if not _letter_pattern_ok(walk, first_inverse=False):
        return False
    if prepend_candidates(p, walk, inverse=False):
        return False
    if append_candidates(p, walk, inverse=True):
        return False
    return True


class _Tracked:
    """A walk whose positions carry identity tokens across surgery steps."""

    __slots__ = ("walk", "tokens")

    def __init__(self, walk, tokens):
        self.walk = walk
        self.tokens = tuple(tokens)
        assert len(self.tokens) == len(walk.letters) + 1

    @classmethod
    def fresh(cls, walk, counter):
        return cls(walk, tuple(next(counter) for _ in range(len(walk.letters) + 1)))


def _initial_run(walk, inverse):
    """Length of the maximal initial run of letters with the given direction."""
    n = 0
    for l in walk.letters:
        if l.inverse != inverse:
            break
        n += 1
    return n


def _terminal_run(walk, inverse):
    n = 0
    for l in reversed(walk.letters):
        if l.inverse != inverse:
            break
        n += 1
    return n


class _SideOp:
    """One end's surgery operation: either ("add", arrow) or ("delete", None)."""

    __slots__ = ("kind", "arrow")

    def __init__(self, kind, arrow=None):
        self.kind = kind
        self.arrow = arrow


def _unique(cands, what):
    if len(cands) > 1:
        raise MeshInconsistencyError(f"ambiguous {what}: {[a.label for a in cands]}")
    return cands[0] if cands else None


def _side_ops(p, walk, direction):
    """Decide each end's operation for the mesh in the given direction.

    direction "start": the sequence starting at M(walk) (hooks are added).
    direction "end":   the sequence ending at M(walk) (cohooks are added).
    A trivial word has no intrinsic ends; the at most two attachable
    arrows are split one per side, in declaration order.
    """
    if walk.is_trivial:
        v = walk.basepoint
        pool = (
            p.quiver.arrows_into(v) if direction == "start" else p.quiver.arrows_from(v)
        )
        if len(pool) > 2:
            raise MeshInconsistencyError(f"vertex {v} breaks the two-arrow bound")
        ops = []
        for i in range(2):
            ops.append(_SideOp("add", pool[i]) if i < len(pool) else _SideOp("delete"))
        return ops[0], ops[1]
    if direction == "start":
        left = _unique(prepend_candidates(p, walk, inverse=False), "left hook")
        right = _unique(append_candidates(p, walk, inverse=True), "right hook")
    else:
        left = _unique(prepend_candidates(p, walk, inverse=True), "left cohook")
        right = _unique(append_candidates(p, walk, inverse=False), "right cohook")
    return (
        _SideOp("add", left) if left else _SideOp("delete"),
        _SideOp("add", right) if right else _SideOp("delete"),
    )


def _apply_add(p, tracked, direction, side, arrow, counter):
    walk, tokens = tracked.walk, tracked.tokens
    if side == "left":
        first = Letter(arrow.label, inverse=(direction == "end"))
        letters = (first,) + walk.letters
        tokens = (next(counter),) + tokens
        climb_inverse = direction == "start"
        cur = Walk(letters)
        for _ in range(_CLIMB_CAP):
            cand = _unique(
                prepend_candidates(p, cur, inverse=climb_inverse), "left climb"
            )
            if cand is None:
                break
            cur = Walk((Letter(cand.label, climb_inverse),) + cur.letters)
            tokens = (next(counter),) + tokens
        else:
            raise MeshInconsistencyError("left climb did not terminate")
        return _Tracked(cur, tokens)
    first = Letter(arrow.label, inverse=(direction == "start"))
    letters = walk.letters + (first,)
    tokens = tokens + (next(counter),)
    climb_inverse = direction == "end"
    cur = Walk(letters)
    for _ in range(_CLIMB_CAP):
        cand = _unique(append_candidates(p, cur, inverse=climb_inverse), "right climb")
        if cand is None:
            break
        cur = Walk(cur.letters + (Letter(cand.label, climb_inverse),))
        tokens = tokens + (next(counter),)
    else:
        raise MeshInconsistencyError("right climb did not terminate")
    return _Tracked(cur, tokens)


def _apply_delete(p, tracked, direction, side):
    """Remove a hook or cohook from one end; None when the whole word would go."""
    walk, tokens = tracked.walk, tracked.tokens
    n = len(walk.letters)
    if side == "left":
        run = _initial_run(walk, inverse=(direction == "end"))
        if run >= n:
            return None
        rest = walk.letters[run + 1 :]
        toks = tokens[run + 1 :]
        if rest:
            return _Tracked(Walk(rest), toks)
        return _Tracked(Walk(basepoint=walk_vertices(p, walk)[run + 1]), toks[:1])
    run = _terminal_run(walk, inverse=(direction == "start"))
    if run >= n:
        return None
    rest = walk.letters[: n - run - 1]
    toks = tokens[: n - run]
    if rest:
        return _Tracked(Walk(rest), toks)
    return _Tracked(Walk(basepoint=walk_vertices(p, walk)[n - run - 1]), toks[:1])


def _compute_side(p, tracked, direction, side, op, counter):
    """One end's operation; returns (middle word or None, added material or None).

    Material is the (letters, tokens) pair of the newly attached positions;
    sharing it between the middle and the far term keeps token identities
    consistent across the mesh.
    """
    if op.kind == "add":
        res = _apply_add(p, tracked, direction, side, op.arrow, counter)
        added = len(res.walk.letters) - len(tracked.walk.letters)
        if side == "left":
            material = (res.walk.letters[:added], res.tokens[:added])
        else:
            material = (res.walk.letters[-added:], res.tokens[-added:])
        return res, material
    return _apply_delete(p, tracked, direction, side), None


def _attach(material, tracked, side):
    letters, tokens = material
    if side == "left":
        return _Tracked(Walk(letters + tracked.walk.letters), tokens + tracked.tokens)
    return _Tracked(Walk(tracked.walk.letters + letters), tracked.tokens + tokens)


def _far_term(p, tracked, direction, sides):
    """Both ends' operations; additions first, deletions read the current word."""
    cur = tracked
    for side, op, material in sides:
        if op.kind == "add":
            cur = _attach(material, cur, side)
    for side, op, _ in sides:
        if op.kind == "delete":
            if cur is None:
                return None
            cur = _apply_delete(p, cur, direction, side)
    return cur


def _surgery(p, walk, direction):
    """All pieces of the mesh on the given side of M(walk)."""
    counter = itertools.count()
    t = _Tracked.fresh(walk, counter)
    op_l, op_r = _side_ops(p, walk, direction)
    mid_l, mat_l = _compute_side(p, t, direction, "left", op_l, counter)
    mid_r, mat_r = _compute_side(p, t, direction, "right", op_r, counter)
    far = _far_term(
        p, t, direction, (("left", op_l, mat_l), ("right", op_r, mat_r))
    )
    middles = [m for m in (mid_l, mid_r) if m is not None]
    return t, middles, far


def tau_word(p, walk):
    """Word of the translate (raw orientation); IsProjectiveError on projectives."""
    if is_projective_word(p, walk):
        raise IsProjectiveError(f"{walk_to_text(walk)} is projective")
    _, _, far = _surgery(p, walk, "end")
    if far is None:
        raise MeshInconsistencyError("translate of a non-projective word vanished")
    return far.walk


def tau_inverse_word(p, walk):
    if is_injective_word(p, walk):
        raise IsInjectiveError(f"{walk_to_text(walk)} is injective")
    _, _, far = _surgery(p, walk, "start")
    if far is None:
        raise MeshInconsistencyError("co-translate of a non-injective word vanished")
    return far.walk


def tau(p, M, field=QQ):
    """Translate of a string module by word surgery."""
    word = M.word if isinstance(M, StringModule) else M
    return realize(p, tau_word(p, word.walk), field)


def tau_inverse(p, M, field=QQ):
    word = M.word if isinstance(M, StringModule) else M
    return realize(p, tau_inverse_word(p, word.walk), field)


class _RawPiece:
    """A tracked walk, its raw realization, and the hop to the canonical module."""

    __slots__ = ("tracked", "rep", "coord", "module", "to_canon", "from_canon")

    def __init__(self, p, tracked, field, resolve):
        self.tracked = tracked
        self.rep, self.coord = realize_walk(p, tracked.walk, field)
        self.module = resolve(canonical_walk(p, tracked.walk))
        n = len(tracked.walk.letters)
        canon = self.module.word.walk
        if canon == tracked.walk:
            perm = list(range(n + 1))
        elif canon == tracked.walk.inverse() or tracked.walk.is_trivial:
            perm = [n - j for j in range(n + 1)]
        else:
            raise MeshInconsistencyError("canonical form mismatch")
        fwd = {v: Mat.zeros(field, self.module.rep.dims[v], self.rep.dims[v]) for v in p.quiver.vertices}
        one = field.one()
        for j in range(n + 1):
            v, c_raw = self.coord[j]
            v2, c_canon = self.module.basis[perm[j]]
            if v != v2:
                raise MeshInconsistencyError("canonical relabeling mismatch")
            fwd[v].rows[c_canon][c_raw] = one
        self.to_canon = MorphismMatrix(self.rep, self.module.rep, fwd)
        bwd = {v: m.transpose() for v, m in fwd.items()}
        self.from_canon = MorphismMatrix(self.module.rep, self.rep, bwd)


def _segment_offset(small, big):
    ns, nb = len(small.tokens), len(big.tokens)
    for off in range(nb - ns + 1):
        if big.tokens[off : off + ns] == small.tokens:
            return off
    return None


def _graph_map(p, src, dst, field):
    """Inclusion or projection between raw pieces whose tokens nest."""
    off = _segment_offset(src.tracked, dst.tracked)
    one = field.one()
    if off is not None:
        blocks = {v: Mat.zeros(field, dst.rep.dims[v], src.rep.dims[v]) for v in p.quiver.vertices}
        for j in range(len(src.tracked.tokens)):
            v, c_src = src.coord[j]
            v2, c_dst = dst.coord[off + j]
            assert v == v2
            blocks[v].rows[c_dst][c_src] = one
        return MorphismMatrix(src.rep, dst.rep, blocks)
    off = _segment_offset(dst.tracked, src.tracked)
    if off is None:
        raise MeshInconsistencyError("mesh words do not nest")
    blocks = {v: Mat.zeros(field, dst.rep.dims[v], src.rep.dims[v]) for v in p.quiver.vertices}
    for j in range(len(dst.tracked.tokens)):
        v, c_dst = dst.coord[j]
        v2, c_src = src.coord[off + j]
        assert v == v2
        blocks[v].rows[c_dst][c_src] = one
    return MorphismMatrix(src.rep, dst.rep, blocks)


def _canon_map(p, src_piece, dst_piece, field):
    raw = _graph_map(p, src_piece, dst_piece, field)
    return dst_piece.to_canon.compose(raw.compose(src_piece.from_canon))


class AlmostSplitSequence:
    """0 -> leftTerm -> middle_1 (+) middle_2 -> rightTerm -> 0, maps included."""

    def __init__(self, left_term, middle, right_term, left_maps, right_maps):
        self.left_term = left_term
        self.middle = middle
        self.right_term = right_term
        self.left_maps = left_maps
        self.right_maps = right_maps
        self.verify()

    @property
    def alpha(self):
        return len(self.middle)

    def verify(self):
        if not 1 <= len(self.middle) <= 2:
            raise MeshInconsistencyError(f"{len(self.middle)} middle terms")
        if len(self.middle) == 2 and self.middle[0].word == self.middle[1].word:
            raise MeshInconsistencyError("isomorphic middle terms")
        lt, rt = self.left_term.rep, self.right_term.rep
        for v in lt.dims:
            if lt.dims[v] + rt.dims[v] != sum(m.rep.dims[v] for m in self.middle):
                raise MeshInconsistencyError("middle dimension mismatch")
        comp = zero_morphism(lt, rt)
        for l, r in zip(self.left_maps, self.right_maps):
            comp = comp.add(r.compose(l))
        if not comp.is_zero():
            if len(self.middle) == 2:
                self.right_maps[1] = self.right_maps[1].neg()
                comp = self.right_maps[0].compose(self.left_maps[0]).add(
                    self.right_maps[1].compose(self.left_maps[1])
                )
            if not comp.is_zero():
                raise MeshInconsistencyError("mesh composite is not zero")
        for f in self.left_maps + self.right_maps:
            if not f.check_intertwining():
                raise MeshInconsistencyError("mesh map is not a morphism")
        # left map is a monomorphism into the sum, right map an epimorphism out of it
        for v in lt.dims:
            stacked = [row for l in self.left_maps for row in l.blocks[v].rows]
            m = Mat(lt.field, stacked, lt.dims[v])
            if m.rank() != lt.dims[v]:
                raise MeshInconsistencyError("left mesh map not mono")
            rows = []
            for i in range(rt.dims[v]):
                row = []
                for r in self.right_maps:
                    row.extend(r.blocks[v].rows[i])
                rows.append(row)
            m = Mat(rt.field, rows, sum(mm.rep.dims[v] for mm in self.middle))
            if m.rank() != rt.dims[v]:
                raise MeshInconsistencyError("right mesh map not epi")
        if self._splits():
            raise MeshInconsistencyError("almost split sequence splits")

    def _splits(self):
        """Is there a retraction h (a morphism!) with sum h_i o l_i = id?"""
        from .modules import hom_basis

        lt = self.left_term.rep
        field = lt.field
        columns = []
        for l, m in zip(self.left_maps, self.middle):
            for e in hom_basis(m.rep, lt).basis:
                columns.append(e.compose(l).flatten())
        target = identity_morphism(lt).flatten()
        if not columns:
            return not any(target)
        mat = Mat(field, [list(row) for row in zip(*columns)], len(columns))
        return solve(mat, target) is not None

    def __repr__(self):
        mids = " (+) ".join(walk_to_text(m.word.walk) for m in self.middle)
        return (
            f"0 -> {walk_to_text(self.left_term.word.walk)} -> {mids} -> "
            f"{walk_to_text(self.right_term.word.walk)} -> 0"
        )


def _mesh_from_left(p, left_walk, field, resolve):
    """The almost split sequence starting at M(left_walk)."""
    if is_injective_word(p, left_walk):
        raise IsInjectiveError(f"{walk_to_text(left_walk)} is injective")
    t, mids, far = _surgery(p, left_walk, "start")
    if far is None or not mids:
        raise MeshInconsistencyError("degenerate mesh")
    left_piece = _RawPiece(p, t, field, resolve)
    far_piece = _RawPiece(p, far, field, resolve)
    mid_pieces = [_RawPiece(p, m, field, resolve) for m in mids]
    left_maps = [_canon_map(p, left_piece, m, field) for m in mid_pieces]
    right_maps = [_canon_map(p, m, far_piece, field) for m in mid_pieces]
    return AlmostSplitSequence(
        left_piece.module,
        [m.module for m in mid_pieces],
        far_piece.module,
        left_maps,
        right_maps,
    )


def _default_resolver(p, field):
    cache = {}

    def resolve(canon_walk):
        if canon_walk not in cache:
            cache[canon_walk] = realize(p, canon_walk, field)
        return cache[canon_walk]

    return resolve


def ar_sequence(p, M, side, field=None, resolve=None):
    """Almost split sequence ending or starting at a string module."""
    word = M.word if isinstance(M, StringModule) else string_word(p, M.walk if isinstance(M, StringWord) else M)
    field = field or (M.rep.field if isinstance(M, StringModule) else QQ)
    resolve = resolve or _default_resolver(p, field)
    if side == "endingAt":
        left = tau_word(p, word.walk)
        seq = _mesh_from_left(p, left, field, resolve)
        if seq.right_term.word != string_word(p, word.walk):
            raise MeshInconsistencyError("translate round trip failed")
        return seq
    if side == "startingAt":
        return _mesh_from_left(p, word.walk, field, resolve)
    raise ValueError(f"unknown side {side!r}")


def rad_projective_arrows(p, v, field, resolve):
    """Arrows rad-summand -> P(v) with their canonical inclusion matrices."""
    raw = projective_word(p, v)
    if raw.is_trivial:
        return []
    counter = itertools.count()
    t = _Tracked.fresh(raw, counter)
    n = len(raw.letters)
    k = _initial_run(raw, inverse=True)
    segments = []
    if k > 0:
        # inverse branch minus its innermost arrow: initial positions 0..k-1
        segments.append(_Tracked(Walk(raw.letters[: k - 1]) if k > 1 else Walk(basepoint=walk_vertices(p, raw)[0]), t.tokens[:k]))
    if n - k > 0:
        segments.append(
            _Tracked(
                Walk(raw.letters[k + 1 :]) if n - k > 1 else Walk(basepoint=walk_vertices(p, raw)[k + 1]),
                t.tokens[k + 1 :],
            )
        )
    proj_piece = _RawPiece(p, t, field, resolve)
    out = []
    for seg in segments:
        piece = _RawPiece(p, seg, field, resolve)
        out.append((piece.module, proj_piece.module, _canon_map(p, piece, proj_piece, field)))
    return out


def socle_quotient_arrows(p, v, field, resolve):
    """Arrows I(v) -> summand of I(v)/soc with canonical projection matrices."""
    raw = injective_word(p, v)
    if raw.is_trivial:
        return []
    counter = itertools.count()
    t = _Tracked.fresh(raw, counter)
    n = len(raw.letters)
    k = n - _terminal_run(raw, inverse=True)  # peak position: end of the direct run
    segments = []
    if k > 0:
        segments.append(
            _Tracked(
                Walk(raw.letters[: k - 1]) if k > 1 else Walk(basepoint=walk_vertices(p, raw)[0]),
                t.tokens[:k],
            )
        )
    if n - k > 0:
        segments.append(
            _Tracked(
                Walk(raw.letters[k + 1 :]) if n - k > 1 else Walk(basepoint=walk_vertices(p, raw)[n]),
                t.tokens[k + 1 :],
            )
        )
    inj_piece = _RawPiece(p, t, field, resolve)
    out = []
    for seg in segments:
        piece = _RawPiece(p, seg, field, resolve)
        out.append((inj_piece.module, piece.module, _canon_map(p, inj_piece, piece, field)))
    return out


class ARNode:
    __slots__ = ("index", "module", "projective", "injective")

    def __init__(self, index, module, projective, injective):
        self.index = index
        self.module = module
        self.projective = projective
        self.injective = injective

    @property
    def word(self):
        return self.module.word

    @property
    def text(self):
        return walk_to_text(self.module.word.walk)

    def __repr__(self):
        flags = ("P" if self.projective else "") + ("I" if self.injective else "")
        return f"ARNode({self.text}{' ' + flags if flags else ''})"


class ARArrow:
    __slots__ = ("source", "target", "morphism")

    def __init__(self, source, target, morphism):
        self.source = source
        self.target = target
        self.morphism = morphism

    def __repr__(self):
        return f"ARArrow({self.source} -> {self.target})"


class ARQuiver:
    """The knitted translation quiver of a band-free presentation."""

    def __init__(self, p, field, nodes, arrows, tau_pairs, meshes):
        self.p = p
        self.field = field
        self.nodes = nodes
        self.arrows = arrows
        self.tau_pairs = tau_pairs
        self.meshes = meshes
        self._by_walk = {n.module.word.walk: n.index for n in nodes}
        self._into = {n.index: [] for n in nodes}
        self._from = {n.index: [] for n in nodes}
        for a in arrows:
            self._into[a.target].append(a)
            self._from[a.source].append(a)

    def node_of(self, word_or_walk):
        walk = word_or_walk.walk if isinstance(word_or_walk, StringWord) else word_or_walk
        canon = canonical_walk(self.p, walk)
        idx = self._by_walk.get(canon)
        if idx is None:
            raise MeshInconsistencyError(f"{walk_to_text(canon)} is not a node")
        return self.nodes[idx]

    def arrows_into(self, idx):
        return self._into[idx]

    def arrows_from(self, idx):
        return self._from[idx]

    def arrows_between(self, src, dst):
        return [a for a in self._from[src] if a.target == dst]

    def tau_of(self, idx):
        return self.tau_pairs.get(idx)

    def to_json(self):
        return {
            "nodes": [
                {
                    "word": n.text,
                    "dims": n.module.rep.dim_vector(),
                    "projective": n.projective,
                    "injective": n.injective,
                }
                for n in self.nodes
            ],
            "arrows": [
                {"source": self.nodes[a.source].text, "target": self.nodes[a.target].text}
                for a in self.arrows
            ],
            "tauPairs": {
                self.nodes[i].text: self.nodes[j].text for i, j in sorted(self.tau_pairs.items())
            },
        }

    def to_dot(self):
        lines = ["digraph ar_quiver {", "  rankdir=LR;"]
        for n in self.nodes:
            label = n.text
            if n.projective:
                label = "|" + label
            if n.injective:
                label = label + "|"
            lines.append(f'  n{n.index} [label="{label}" shape=plaintext];')
        for a in self.arrows:
            lines.append(f"  n{a.source} -> n{a.target};")
        for x, tx in sorted(self.tau_pairs.items()):
            lines.append(f"  n{x} -> n{tx} [style=dotted dir=none constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def knit(p, field=QQ):
    """Assemble the full AR quiver of a band-free, finite-dimensional presentation."""
    if has_band(p):
        raise BandFoundError("cannot knit: the presentation has bands")
    if nonzero_path_count(p) == float("inf"):
        raise InfiniteDimensionalError("cannot knit: infinitely many nonzero paths")
    words = enumerate_strings(p)
    resolve = _default_resolver(p, field)
    modules = [resolve(w.walk) for w in words]
    proj_walks = {canonical_walk(p, projective_word(p, v)) for v in p.quiver.vertices}
    inj_walks = {canonical_walk(p, injective_word(p, v)) for v in p.quiver.vertices}
    nodes = [
        ARNode(i, m, m.word.walk in proj_walks, m.word.walk in inj_walks)
        for i, m in enumerate(modules)
    ]
    by_walk = {n.module.word.walk: n.index for n in nodes}
    arrows = []
    tau_pairs = {}
    meshes = {}
    for n in nodes:
        if n.projective:
            v_top = _projective_top_vertex(p, n.module.word.walk)
            for src_mod, dst_mod, mor in rad_projective_arrows(p, v_top, field, resolve):
                arrows.append(ARArrow(by_walk[src_mod.word.walk], n.index, mor))
            continue
        seq = ar_sequence(p, n.module, "endingAt", field=field, resolve=resolve)
        meshes[n.index] = seq
        tau_idx = by_walk[seq.left_term.word.walk]
        tau_pairs[n.index] = tau_idx
        if nodes[tau_idx].injective:
            raise MeshInconsistencyError("translate landed on an injective")
        for mid, rmap in zip(seq.middle, seq.right_maps):
            arrows.append(ARArrow(by_walk[mid.word.walk], n.index, rmap))
    if len(set(tau_pairs.values())) != len(tau_pairs):
        raise MeshInconsistencyError("translate pairing is not injective")
    non_inj = {n.index for n in nodes if not n.injective}
    if set(tau_pairs.values()) != non_inj:
        raise MeshInconsistencyError("translate pairing is not onto the non-injectives")
    quiver = ARQuiver(p, field, nodes, arrows, tau_pairs, meshes)
    _check_mesh_symmetry(quiver)
    return quiver


def _projective_top_vertex(p, canon_walk):
    for v in p.quiver.vertices:
        if canonical_walk(p, projective_word(p, v)) == canon_walk:
            return v
    raise MeshInconsistencyError("projective word without a vertex")


def _check_mesh_symmetry(quiver):
    for x, tx in quiver.tau_pairs.items():
        for n in {a.source for a in quiver.arrows_into(x)}:
            incoming = len(quiver.arrows_between(n, x))
            outgoing = len(quiver.arrows_between(tx, n))
            if incoming != outgoing:
                raise MeshInconsistencyError(
                    f"mesh symmetry fails at {quiver.nodes[x].text}"
                )


class OrbitResult:
    __slots__ = ("modules", "hit_projective", "steps")

    def __init__(self, modules, hit_projective, steps):
        self.modules = modules
        self.hit_projective = hit_projective
        self.steps = steps

    def __repr__(self):
        tail = " (stopped at projective)" if self.hit_projective else ""
        return f"OrbitResult({len(self.modules)} modules{tail})"


def tau_orbit(p, M, k, field=None, verify=True):
    """[M, tau M, ...] for up to k steps; stops early when a projective appears.

    Every surgery step is cross-checked against the DTr oracle.
    """
    field = field or M.rep.field
    out = [M]
    cur = M
    for _ in range(k):
        if is_projective_word(p, cur.word.walk):
            return OrbitResult(out, True, len(out) - 1)
        nxt = tau(p, cur, field)
        if verify:
            oracle = tau_oracle(p, cur, field)
            if not is_isomorphic(nxt.rep, oracle):
                raise MeshInconsistencyError(
                    f"surgery and DTr disagree at {walk_to_text(cur.word.walk)}"
                )
        out.append(nxt)
        cur = nxt
    return OrbitResult(out, False, len(out) - 1)


# --- DTr oracle -----------------------------------------------------------


def path_representation(p, v, field):
    """P(v) on its path basis; returns (rep, ordered path list, coord map)."""
    paths = nonzero_paths_from(p, v)
    dims = {}
    coord = {}
    for path in paths:
        end = v if not path else p.quiver.arrow(path[-1]).target
        coord[path] = (end, dims.get(end, 0))
        dims[end] = dims.get(end, 0) + 1
    maps = {
        a.label: Mat.zeros(field, dims.get(a.target, 0), dims.get(a.source, 0))
        for a in p.quiver.arrows
    }
    one = field.one()
    for path in paths:
        end = v if not path else p.quiver.arrow(path[-1]).target
        for a in p.quiver.arrows_from(end):
            ext = path + (a.label,)
            if ext in coord:
                _, col = coord[path]
                _, row = coord[ext]
                maps[a.label].rows[row][col] = one
    return Representation(p, field, dims, maps), paths, coord


def opposite_presentation(p):
    from .presentation import AlgebraPresentation, Arrow, Quiver

    q = Quiver(
        p.quiver.vertices,
        [Arrow(a.label, a.target, a.source) for a in p.quiver.arrows],
    )
    rels = [tuple(reversed(r)) for r in p.relations]
    return AlgebraPresentation(q, rels, name=p.name + "^op" if p.name else "")


class _ProjSum:
    """A finite direct sum of path representations with bookkeeping."""

    def __init__(self, p, field, vertices):
        self.p = p
        self.field = field
        self.verts = list(vertices)
        self.parts = [path_representation(p, v, field) for v in self.verts]
        dims = {v: 0 for v in p.quiver.vertices}
        self.offsets = []  # per part, per vertex: column offset
        for rep, _, _ in self.parts:
            self.offsets.append({v: dims[v] for v in p.quiver.vertices})
            for v in p.quiver.vertices:
                dims[v] += rep.dims[v]
        maps = {}
        for a in p.quiver.arrows:
            m = Mat.zeros(field, dims[a.target], dims[a.source])
            for rep_ix, (rep, _, _) in enumerate(self.parts):
                off_t = self.offsets[rep_ix][a.target]
                off_s = self.offsets[rep_ix][a.source]
                block = rep.maps[a.label]
                for i in range(block.nrows):
                    for j in range(block.ncols):
                        if block.rows[i][j]:
                            m.rows[off_t + i][off_s + j] = block.rows[i][j]
            maps[a.label] = m
        self.rep = Representation(p, field, dims, maps)

    def generator_index(self, part_ix):
        """Flat column of the trivial path of part part_ix at its start vertex."""
        rep, paths, coord = self.parts[part_ix]
        v = self.verts[part_ix]
        return v, self.offsets[part_ix][v] + coord[()][1]


def _column_space(field, mat):
    s = Subspace(field, mat.nrows)
    for j in range(mat.ncols):
        s.insert(mat.column(j))
    return s


def _top_lifts(rep):
    """For each vertex, unit-vector lifts of a basis of the top (deterministic)."""
    field = rep.field
    lifts = []
    for v in rep.p.quiver.vertices:
        d = rep.dims[v]
        if d == 0:
            continue
        rad = Subspace(field, d)
        for a in rep.p.quiver.arrows_into(v):
            m = rep.maps[a.label]
            for j in range(m.ncols):
                rad.insert(m.column(j))
        for i in range(d):
            unit = [field.zero()] * d
            unit[i] = field.one()
            if rad.insert(list(unit)):
                lifts.append((v, unit))
    return lifts


def _cover(p, field, M):
    """Minimal projective cover P0 -> M as a (_ProjSum, MorphismMatrix) pair."""
    lifts = _top_lifts(M)
    psum = _ProjSum(p, field, [v for v, _ in lifts])
    blocks = {v: Mat.zeros(field, M.dims[v], psum.rep.dims[v]) for v in p.quiver.vertices}
    for part_ix, (v, unit) in enumerate(lifts):
        rep, paths, coord = psum.parts[part_ix]
        images = {(): list(unit)}
        for path in paths:
            if not path:
                continue
            prefix, last = path[:-1], path[-1]
            img = images[prefix]
            m = M.maps[last]
            images[path] = [
                sum((m.rows[i][j] * img[j] for j in range(m.ncols)), field.zero())
                for i in range(m.nrows)
            ]
        for path in paths:
            end = v if not path else p.quiver.arrow(path[-1]).target
            col = psum.offsets[part_ix][end] + coord[path][1]
            for i, val in enumerate(images[path]):
                blocks[end].rows[i][col] = val
    return psum, MorphismMatrix(psum.rep, M, blocks)


def _kernel_rep(p, field, morphism):
    """Kernel of a morphism as a representation plus per-vertex basis columns."""
    src = morphism.source
    basis = {}
    dims = {}
    for v in p.quiver.vertices:
        vecs = nullspace(morphism.blocks[v]) if src.dims[v] else []
        basis[v] = vecs
        dims[v] = len(vecs)
    maps = {}
    for a in p.quiver.arrows:
        s, t = a.source, a.target
        m = Mat.zeros(field, dims[t], dims[s])
        if dims[s] and src.dims[t]:
            tmat = Mat(field, [list(col) for col in zip(*basis[t])], dims[t]) if dims[t] else Mat.zeros(field, src.dims[t], 0)
            for j, vec in enumerate(basis[s]):
                img = [
                    sum(
                        (src.maps[a.label].rows[i][k] * vec[k] for k in range(src.dims[s])),
                        field.zero(),
                    )
                    for i in range(src.dims[t])
                ]
                if dims[t] == 0:
                    if any(img):
                        raise MeshInconsistencyError("kernel not closed under action")
                    continue
                sol = solve(tmat, img)
                if sol is None:
                    raise MeshInconsistencyError("kernel not closed under action")
                for i in range(dims[t]):
                    m.rows[i][j] = sol[i]
        maps[a.label] = m
    return Representation(p, field, dims, maps), basis


def tau_oracle(p, M, field=None):
    """DTr: minimal presentation, transpose over the opposite quiver, dualize."""
    rep = M.rep if isinstance(M, StringModule) else M
    field = field or rep.field
    if has_unbounded_paths(p):
        raise InfiniteDimensionalError("DTr needs a finite-dimensional algebra")
    p0, cover = _cover(p, field, rep)
    K, kbasis = _kernel_rep(p, field, cover)
    if K.total_dim == 0:
        raise IsProjectiveError("projective module has no translate")
    p1, kcover = _cover(p, field, K)
    # presentation map d: P1 -> P0, then its path matrix
    incl_blocks = {}
    for v in p.quiver.vertices:
        cols = kbasis[v]
        m = Mat.zeros(field, p0.rep.dims[v], K.dims[v])
        for j, vec in enumerate(cols):
            for i, val in enumerate(vec):
                m.rows[i][j] = val
        incl_blocks[v] = m
    incl = MorphismMatrix(K, p0.rep, incl_blocks)
    d = incl.compose(kcover)
    # entries: for generator j (vertex w_j), its image coefficients over the
    # path basis of each part i give formal sums of paths v_i -> w_j
    pop = opposite_presentation(p)
    p0_op = _ProjSum(pop, field, p0.verts)
    p1_op = _ProjSum(pop, field, p1.verts)
    dop_blocks = {
        v: Mat.zeros(field, p1_op.rep.dims[v], p0_op.rep.dims[v])
        for v in pop.quiver.vertices
    }
    for j, wj in enumerate(p1.verts):
        gen_v, gen_col = p1.generator_index(j)
        img = d.blocks[gen_v].column(gen_col)
        for i, vi in enumerate(p0.verts):
            rep_i, paths_i, coord_i = p0.parts[i]
            for path in paths_i:
                end = vi if not path else p.quiver.arrow(path[-1]).target
                if end != wj:
                    continue
                coeff = img[p0.offsets[i][end] + coord_i[path][1]]
                if not coeff:
                    continue
                rpath = tuple(reversed(path))
                _apply_op_path_morphism(
                    pop, field, p0_op, i, p1_op, j, rpath, coeff, dop_blocks
                )
    # cokernel of d_op, vertexwise, with induced op-arrow maps
    tr_dims = {}
    tr_sections = {}
    tr_solvers = {}
    for v in pop.quiver.vertices:
        n = p1_op.rep.dims[v]
        img = _column_space(field, dop_blocks[v])
        comp_idx = []
        probe = img.copy()
        for i in range(n):
            unit = [field.zero()] * n
            unit[i] = field.one()
            if probe.insert(unit):
                comp_idx.append(i)
        tr_dims[v] = len(comp_idx)
        basis_cols = [img.rows[i] for i in range(img.dim)]
        for i in comp_idx:
            unit = [field.zero()] * n
            unit[i] = field.one()
            basis_cols.append(unit)
        tr_sections[v] = comp_idx
        if n:
            tr_solvers[v] = Mat(field, [list(r) for r in zip(*basis_cols)], len(basis_cols))
        else:
            tr_solvers[v] = None
    def project(v, vec):
        solver = tr_solvers[v]
        if solver is None:
            return []
        sol = solve(solver, list(vec))
        if sol is None:
            raise MeshInconsistencyError("cokernel projection failed")
        img_rank = solver.ncols - tr_dims[v]
        return sol[img_rank:]

    tau_maps = {}
    for a in p.quiver.arrows:
        # the op arrow with label a maps fibers at e(a) to fibers at s(a)
        src_v, dst_v = a.target, a.source
        m = Mat.zeros(field, tr_dims[dst_v], tr_dims[src_v])
        op_map = p1_op.rep.maps[a.label]
        for k, unit_ix in enumerate(tr_sections[src_v]):
            col = op_map.column(unit_ix)
            proj = project(dst_v, col)
            for i in range(tr_dims[dst_v]):
                m.rows[i][k] = proj[i]
        # dualize: transpose swaps the direction back to s(a) -> e(a)
        tau_maps[a.label] = m.transpose()
    dims = {v: tr_dims[v] for v in p.quiver.vertices}
    return Representation(p, field, dims, tau_maps)


def _apply_op_path_morphism(pop, field, p0_op, i, p1_op, j, rpath, coeff, out_blocks):
    """Add coeff * (morphism P_op(v_i) -> P_op(w_j) given by the op path rpath)."""
    rep_i, paths_i, coord_i = p0_op.parts[i]
    rep_j, paths_j, coord_j = p1_op.parts[j]
    vi = p0_op.verts[i]
    for q in paths_i:
        target = rpath + q
        if pop.path_in_ideal(target) or target not in coord_j:
            continue
        end = p1_op.verts[j] if not target else pop.quiver.arrow(target[-1]).target
        endq = vi if not q else pop.quiver.arrow(q[-1]).target
        assert end == endq
        row = p1_op.offsets[j][end] + coord_j[target][1]
        col = p0_op.offsets[i][end] + coord_i[q][1]
        out_blocks[end].rows[row][col] = out_blocks[end].rows[row][col] + coeff

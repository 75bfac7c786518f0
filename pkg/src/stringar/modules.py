"""String modules as explicit representations over an exact field.

A walk c_1...c_n is realized on basis positions z_0..z_n lying over the
visited vertices; every letter's arrow carries the position at its source
endpoint to the one at its target endpoint, all other actions are zero.
Relations annihilate automatically because a string contains no relation
factor.
"""

from __future__ import annotations

from .errors import CompositionError, NotAStringError, UnknownLabelError
from .fields import Mat, QQ, Subspace, nullspace, solve
from .strings import (
    StringWord,
    Walk,
    is_string,
    string_word,
    walk_to_text,
    walk_vertices,
)


class Representation:
    """Vertex dimensions plus one (target-dim x source-dim) matrix per arrow."""

    def __init__(self, p, field, dims, maps):
        self.p = p
        self.field = field
        self.dims = {v: dims.get(v, 0) for v in p.quiver.vertices}
        self.maps = {}
        for a in p.quiver.arrows:
            m = maps.get(a.label)
            if m is None:
                m = Mat.zeros(field, self.dims[a.target], self.dims[a.source])
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise CompositionError(
                    f"map for arrow {a.label} has shape {m.shape}, expected "
                    f"({self.dims[a.target]}, {self.dims[a.source]})"
                )
            self.maps[a.label] = m

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def path_action(self, labels):
        """Matrix of the path a_1...a_k acting first-arrow-first."""
        q = self.p.quiver
        if not labels:
            raise ValueError("path action needs a nonempty path")
        m = self.maps[labels[0]]
        for lab in labels[1:]:
            m = self.maps[lab] * m
        return m

    def check_relations(self):
        for rel in self.p.relations:
            if not self.path_action(rel).is_zero():
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.p == other.p
            and self.field == other.field
            and self.dims == other.dims
            and all(self.maps[a.label] == other.maps[a.label] for a in self.p.quiver.arrows)
        )

    def __repr__(self):
        return f"Representation({self.dims})"

    def dim_vector(self):
        return tuple(self.dims[v] for v in self.p.quiver.vertices)

    def as_dict(self):
        return {
            "dims": dict(self.dims),
            "maps": {
                lab: [[self.field.to_str(x) for x in row] for row in m.rows]
                for lab, m in self.maps.items()
            },
        }


class StringModule:
    """A string word together with its realization and walk basis."""

    __slots__ = ("word", "rep", "basis")

    def __init__(self, word, rep, basis):
        self.word = word
        self.rep = rep
        self.basis = basis

    @property
    def total_dim(self):
        return self.rep.total_dim

    def __repr__(self):
        return f"StringModule({walk_to_text(self.word.walk)})"


def realize_walk(p, walk, field=QQ):
    """Realize an exact walk (no canonicalization); the mesh machinery needs this."""
    chk = is_string(p, walk)
    if not chk:
        raise NotAStringError(f"{walk_to_text(walk)}: {chk.reason}")
    verts = walk_vertices(p, walk)
    dims = {}
    coord = []  # position -> (vertex, coordinate within the vertex block)
    for v in verts:
        c = dims.get(v, 0)
        coord.append((v, c))
        dims[v] = c + 1
    maps = {
        a.label: Mat.zeros(field, dims.get(a.target, 0), dims.get(a.source, 0))
        for a in p.quiver.arrows
    }
    one = field.one()
    for i, letter in enumerate(walk.letters, start=1):
        src_pos, dst_pos = (i, i - 1) if letter.inverse else (i - 1, i)
        _, col = coord[src_pos]
        _, row = coord[dst_pos]
        maps[letter.arrow].rows[row][col] = one
    rep = Representation(p, field, dims, maps)
    return rep, coord


def realize(p, word, field=QQ):
    """Realize the canonical representative of a string."""
    if isinstance(word, StringWord):
        walk = word.walk
    else:
        walk = word
    sw = string_word(p, walk)
    rep, coord = realize_walk(p, sw.walk, field)
    return StringModule(sw, rep, coord)


def _maximal_path_from(p, arrow):
    """The unique maximal relation-free path starting with the given arrow."""
    path = [arrow.label]
    while True:
        end = p.quiver.arrow(path[-1]).target
        nxt = [
            b
            for b in p.quiver.arrows_from(end)
            if not p.path_in_ideal(tuple(path) + (b.label,))
        ]
        if not nxt:
            return tuple(path)
        if len(nxt) > 1:
            raise CompositionError(
                f"vertex {end} violates unique continuation; not a string algebra"
            )
        path.append(nxt[0].label)


def _maximal_path_into(p, arrow):
    """The unique maximal relation-free path ending with the given arrow."""
    path = [arrow.label]
    while True:
        start = p.quiver.arrow(path[0]).source
        prv = [
            b
            for b in p.quiver.arrows_into(start)
            if not p.path_in_ideal((b.label,) + tuple(path))
        ]
        if not prv:
            return tuple(path)
        if len(prv) > 1:
            raise CompositionError(
                f"vertex {start} violates unique continuation; not a string algebra"
            )
        path.insert(0, prv[0].label)


def _direct_letters(labels):
    from .strings import Letter

    return tuple(Letter(lab) for lab in labels)


def projective_word(p, v):
    """P(v) = M(C1 C2): inverse of one maximal outgoing path, then the other."""
    branches = [_maximal_path_from(p, a) for a in p.quiver.arrows_from(v)]
    if not branches:
        return Walk(basepoint=v)
    if len(branches) == 1:
        return Walk(_direct_letters(branches[0]))
    first = Walk(_direct_letters(branches[0])).inverse()
    return Walk(first.letters + _direct_letters(branches[1]))


def injective_word(p, v):
    """I(v) = M(D1 D2): one maximal incoming path, then the inverse of the other."""
    branches = [_maximal_path_into(p, a) for a in p.quiver.arrows_into(v)]
    if not branches:
        return Walk(basepoint=v)
    if len(branches) == 1:
        return Walk(_direct_letters(branches[0]))
    second = Walk(_direct_letters(branches[1])).inverse()
    return Walk(_direct_letters(branches[0]) + second.letters)


def standard_module(p, v, kind, field=QQ):
    if v not in p.quiver.vertex_index:
        raise UnknownLabelError(f"unknown vertex {v!r}")
    if kind == "projective":
        return realize(p, projective_word(p, v), field)
    if kind == "injective":
        return realize(p, injective_word(p, v), field)
    if kind == "simple":
        return realize(p, Walk(basepoint=v), field)
    raise ValueError(f"unknown standard module kind {kind!r}")


class MorphismMatrix:
    """A representation morphism as one block per vertex."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source, target, blocks):
        self.source = source
        self.target = target
        self.blocks = {}
        for v in source.p.quiver.vertices:
            b = blocks.get(v)
            if b is None:
                b = Mat.zeros(source.field, target.dims[v], source.dims[v])
            if b.shape != (target.dims[v], source.dims[v]):
                raise CompositionError(f"block at {v} has shape {b.shape}")
            self.blocks[v] = b

    def check_intertwining(self):
        for a in self.source.p.quiver.arrows:
            lhs = self.blocks[a.target] * self.source.maps[a.label]
            rhs = self.target.maps[a.label] * self.blocks[a.source]
            if lhs != rhs:
                return False
        return True

    def compose(self, first):
        """self o first (apply `first`, then self)."""
        if first.target.dims != self.source.dims:
            raise CompositionError("composition shape mismatch")
        return MorphismMatrix(
            first.source,
            self.target,
            {v: self.blocks[v] * first.blocks[v] for v in self.blocks},
        )

    def add(self, other):
        return MorphismMatrix(
            self.source,
            self.target,
            {v: self.blocks[v] + other.blocks[v] for v in self.blocks},
        )

    def scale(self, c):
        return MorphismMatrix(
            self.source, self.target, {v: self.blocks[v].scale(c) for v in self.blocks}
        )

    def neg(self):
        return MorphismMatrix(
            self.source, self.target, {v: -self.blocks[v] for v in self.blocks}
        )

    def is_zero(self):
        return all(b.is_zero() for b in self.blocks.values())

    def is_mono(self):
        return all(b.rank() == b.ncols for b in self.blocks.values())

    def is_epi(self):
        return all(b.rank() == b.nrows for b in self.blocks.values())

    def is_invertible(self):
        return all(b.nrows == b.ncols and b.rank() == b.nrows for b in self.blocks.values())

    def flatten(self):
        out = []
        for v in self.source.p.quiver.vertices:
            out.extend(self.blocks[v].flatten())
        return out

    def as_dict(self):
        f = self.source.field
        return {
            v: [[f.to_str(x) for x in row] for row in self.blocks[v].rows]
            for v in self.blocks
        }

    def __eq__(self, other):
        return (
            isinstance(other, MorphismMatrix)
            and self.source.dims == other.source.dims
            and self.target.dims == other.target.dims
            and self.blocks == other.blocks
        )

    def __repr__(self):
        return f"MorphismMatrix({self.source.dim_vector()} -> {self.target.dim_vector()})"


def zero_morphism(M, N):
    return MorphismMatrix(M, N, {})


def identity_morphism(M):
    return MorphismMatrix(
        M, M, {v: Mat.identity(M.field, d) for v, d in M.dims.items()}
    )


def morphism_from_flat(M, N, vec):
    blocks = {}
    i = 0
    for v in M.p.quiver.vertices:
        r, c = N.dims[v], M.dims[v]
        blocks[v] = Mat(M.field, [vec[i + k * c : i + (k + 1) * c] for k in range(r)], c)
        i += r * c
    return MorphismMatrix(M, N, blocks)


def hom_flat_dim(M, N):
    return sum(N.dims[v] * M.dims[v] for v in M.p.quiver.vertices)


class HomBasis:
    __slots__ = ("source", "target", "basis", "dimension")

    def __init__(self, source, target, basis):
        self.source = source
        self.target = target
        self.basis = basis
        self.dimension = len(basis)

    def __repr__(self):
        return f"HomBasis(dim {self.dimension})"


def hom_basis(M, N):
    """Solve the intertwining equations; canonical reduced-echelon kernel basis."""
    if M.p != N.p or M.field != N.field:
        raise CompositionError("Hom spaces need a common presentation and field")
    field = M.field
    q = M.p.quiver
    offsets = {}
    total = 0
    for v in q.vertices:
        offsets[v] = total
        total += N.dims[v] * M.dims[v]

    rows = []
    z = field.zero()
    for a in q.arrows:
        s, t = a.source, a.target
        Msrc, Ntgt = M.maps[a.label], N.maps[a.label]
        for i in range(N.dims[t]):
            for j in range(M.dims[s]):
                row = [z] * total
                # (B_t * M_a)[i][j]: coefficient of B_t[i][k] is M_a[k][j]
                for k in range(M.dims[t]):
                    c = Msrc.rows[k][j]
                    if c:
                        row[offsets[t] + i * M.dims[t] + k] = row[
                            offsets[t] + i * M.dims[t] + k
                        ] + c
                # (N_a * B_s)[i][j]: coefficient of B_s[k][j] is N_a[i][k]
                for k in range(N.dims[s]):
                    c = Ntgt.rows[i][k]
                    if c:
                        idx = offsets[s] + k * M.dims[s] + j
                        row[idx] = row[idx] - c
                rows.append(row)
    if total == 0:
        return HomBasis(M, N, [])
    if not rows:
        mat = Mat.zeros(field, 1, total)
    else:
        mat = Mat(field, rows, total)
    basis = [morphism_from_flat(M, N, vec) for vec in nullspace(mat)]
    return HomBasis(M, N, basis)


def compose_chain(fs):
    """Compose [f1, ..., fk] in application order: returns fk o ... o f1."""
    if not fs:
        raise ValueError("compose_chain needs at least one morphism")
    out = fs[0]
    for f in fs[1:]:
        out = f.compose(out)
    return out


def is_isomorphic(M, N):
    """Exact isomorphism test for representations of the same presentation."""
    if M.dims != N.dims:
        return False
    if M.total_dim == 0:
        return True
    H = hom_basis(M, N)
    if not H.basis:
        return False
    for f in H.basis:
        if f.is_invertible():
            return True
    total = H.basis[0]
    for f in H.basis[1:]:
        total = total.add(f)
    return total.is_invertible()


def string_modules_isomorphic(A, B):
    """Canonical-word equality: the primary isomorphism test for string modules."""
    return A.word == B.word


def _coords_in_basis(field, flat_basis, vec):
    """Coordinates of vec in the span of flat_basis (must lie inside)."""
    mat = Mat(field, [list(col) for col in zip(*flat_basis)], len(flat_basis))
    sol = solve(mat, list(vec))
    if sol is None:
        raise ValueError("vector not in span")
    return sol


def end_radical(M):
    """Jacobson radical of End(M) via the trace bilinear form.

    rad End = left kernel of (x, y) -> trace of left-multiplication by x o y
    on End(M); exact in characteristic 0 (the default field).  Over a prime
    field the same computation is used; it is valid whenever p exceeds
    dim End(M).
    """
    field = M.field
    E = hom_basis(M, M)
    n = E.dimension
    if n == 0:
        return []
    flat = [f.flatten() for f in E.basis]
    # structure coordinates of all products e_i o e_j
    prod_coords = [
        [_coords_in_basis(field, flat, E.basis[i].compose(E.basis[j]).flatten()) for j in range(n)]
        for i in range(n)
    ]

    def left_mult_trace(coords):
        # trace of y -> x o y where x = sum coords[i] e_i
        t = field.zero()
        for m in range(n):
            for i in range(n):
                if coords[i]:
                    t = t + coords[i] * prod_coords[i][m][m]
        return t

    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(left_mult_trace(prod_coords[i][j]))
        gram.append(row)
    ker = nullspace(Mat(field, gram, n).transpose())
    rad = []
    for coeffs in ker:
        f = zero_morphism(M, M)
        for c, e in zip(coeffs, E.basis):
            if c:
                f = f.add(e.scale(c))
        rad.append(f)
    return rad


def morphism_subspace(field, morphisms, flat_dim):
    s = Subspace(field, flat_dim)
    for f in morphisms:
        s.insert(f.flatten())
    return s

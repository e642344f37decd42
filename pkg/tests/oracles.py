"""Independent test oracles.

The level-2 cohomology oracle transcribes the explicit cocycle relations for
pairs (f, g) and the coboundary pairs produced by a single map directly from
the structure constants, by Sweedler-style contraction.  It never touches
the differential kernels or the corestriction machinery of the package, so
agreement with ``bideform.cohomology`` is a genuine dual-pipeline check.

Also here: random deformation/morphism generators used across the suite.
"""

from __future__ import annotations

from bideform import Deformation, DeformationMorphism, Matrix, ff_rank
from bideform.cohomology import context_for
from bideform.deformation import _embedded_correction
from bideform.graded import GradedMap


# --------------------------------------------------------------------------
# basic structure-constant arithmetic (local, deliberately redundant)
# --------------------------------------------------------------------------


def _mulvec(B, va, vb):
    f = B.field
    out = {}
    for i, a in va.items():
        for j, b in vb.items():
            col = B.mul.get((i, j))
            if not col:
                continue
            ab = f.mul(a, b)
            for k, c in col.items():
                out[k] = f.add(out.get(k, f.zero), f.mul(ab, c))
    return {k: v for k, v in out.items() if v}


def _comulvec(B, v):
    f = B.field
    out = {}
    for i, a in v.items():
        for (j, k), c in B.comul.get(i, {}).items():
            out[(j, k)] = f.add(out.get((j, k), f.zero), f.mul(a, c))
    return {k: v2 for k, v2 in out.items() if v2}


def _ideal_basis_vec(B, a):
    """The ambient vector of the augmentation-ideal basis element attached
    to the non-unit basis vector a."""
    f = B.field
    vec = {a: f.one}
    e = B.counit[a]
    if e:
        vec[B.unit_index] = f.neg(e)
    return vec


def _project(B, vec):
    """Coordinates in the ideal basis: drop the unit, keep other indices."""
    return {k: v for k, v in vec.items() if k != B.unit_index and v}


def _project2(B, vec2):
    unit = B.unit_index
    return {
        (j, k): v for (j, k), v in vec2.items() if j != unit and k != unit and v
    }


def _project3(B, vec3):
    unit = B.unit_index
    return {key: v for key, v in vec3.items() if unit not in key and v}


# --------------------------------------------------------------------------
# level-2 cohomology, straight from the explicit relations
# --------------------------------------------------------------------------


class H2Oracle:
    """Direct pipeline for the level-2 cohomology of internal degree l."""

    def __init__(self, B, degree):
        self.B = B
        self.f = B.field
        self.degree = degree
        unit = B.unit_index
        degs = B.space.degrees
        nonunit = [i for i in range(B.dim) if i != unit]
        self.nonunit = nonunit
        # independent enumeration of the unknowns
        self.f_unknowns = [
            (a, b, t)
            for a in nonunit
            for b in nonunit
            for t in nonunit
            if degs[t] == degs[a] + degs[b] + degree
        ]
        self.g_unknowns = [
            (c, t1, t2)
            for c in nonunit
            for t1 in nonunit
            for t2 in nonunit
            if degs[t1] + degs[t2] == degs[c] + degree
        ]
        self.theta_unknowns = [
            (a, t) for a in nonunit for t in nonunit if degs[t] == degs[a] + degree
        ]

    # -- elementary maps, embedded into the ambient space --------------------

    def _f_hat(self, fu):
        """Embedded elementary f: returns a function on pairs of ambient
        vectors."""
        B, f = self.B, self.f
        a0, b0, t0 = fu
        tvec = _ideal_basis_vec(B, t0)

        def apply(u, v):
            cu = u.get(a0, f.zero)
            cv = v.get(b0, f.zero)
            coeff = f.mul(cu, cv)
            if not coeff:
                return {}
            return {k: f.mul(coeff, c) for k, c in tvec.items()}

        return apply

    def _g_hat(self, gu):
        B, f = self.B, self.f
        c0, t1, t2 = gu
        v1 = _ideal_basis_vec(B, t1)
        v2 = _ideal_basis_vec(B, t2)

        def apply(u):
            coeff = u.get(c0, f.zero)
            if not coeff:
                return {}
            out = {}
            for x, cx in v1.items():
                for y, cy in v2.items():
                    out[(x, y)] = f.mul(coeff, f.mul(cx, cy))
            return out

        return apply

    # -- relation evaluation on one elementary unknown ------------------------

    def _relations_column(self, f_hat, g_hat):
        """All three relation families evaluated with the given embedded
        (f, g); returns {row_key: scalar}."""
        B, f = self.B, self.f
        unit = B.unit_index
        col = {}

        def acc(key, val):
            if val:
                col[key] = f.add(col.get(key, f.zero), val)

        for a in self.nonunit:
            va = _ideal_basis_vec(B, a)
            for b in self.nonunit:
                vb = _ideal_basis_vec(B, b)
                ab = _mulvec(B, va, vb)
                for c in self.nonunit:
                    vc = _ideal_basis_vec(B, c)
                    # first relation: a f(b⊗c) - f(ab⊗c) + f(a⊗bc) - f(a⊗b) c
                    out = _mulvec(B, va, f_hat(vb, vc))
                    for k, v in f_hat(ab, vc).items():
                        out[k] = f.sub(out.get(k, f.zero), v)
                    for k, v in f_hat(va, _mulvec(B, vb, vc)).items():
                        out[k] = f.add(out.get(k, f.zero), v)
                    for k, v in _mulvec(B, f_hat(va, vb), vc).items():
                        out[k] = f.sub(out.get(k, f.zero), v)
                    for k, v in out.items():
                        acc(("A", a, b, c, k), v)

        for a in self.nonunit:
            va = _ideal_basis_vec(B, a)
            da = _comulvec(B, va)
            for b in self.nonunit:
                vb = _ideal_basis_vec(B, b)
                db = _comulvec(B, vb)
                ab = _mulvec(B, va, vb)
                out = {}
                # f(a1⊗b1) ⊗ a2 b2  and  a1 b1 ⊗ f(a2⊗b2)
                for (a1, a2), ca in da.items():
                    for (b1, b2), cb in db.items():
                        coeff = f.mul(ca, cb)
                        left = f_hat({a1: f.one}, {b1: f.one})
                        if left:
                            tail = _mulvec(B, {a2: f.one}, {b2: f.one})
                            for k1, c1 in left.items():
                                for k2, c2 in tail.items():
                                    key = (k1, k2)
                                    out[key] = f.add(
                                        out.get(key, f.zero),
                                        f.mul(coeff, f.mul(c1, c2)),
                                    )
                        right = f_hat({a2: f.one}, {b2: f.one})
                        if right:
                            head = _mulvec(B, {a1: f.one}, {b1: f.one})
                            for k1, c1 in head.items():
                                for k2, c2 in right.items():
                                    key = (k1, k2)
                                    out[key] = f.add(
                                        out.get(key, f.zero),
                                        f.mul(coeff, f.mul(c1, c2)),
                                    )
                # - Delta(f(a⊗b))
                for (k1, k2), v in _comulvec(B, f_hat(va, vb)).items():
                    out[(k1, k2)] = f.sub(out.get((k1, k2), f.zero), v)
                # a1 g(b)_l ⊗ a2 g(b)_r
                gb = g_hat(vb)
                for (a1, a2), ca in da.items():
                    for (x, y), cg in gb.items():
                        coeff = f.mul(ca, cg)
                        left = _mulvec(B, {a1: f.one}, {x: f.one})
                        right = _mulvec(B, {a2: f.one}, {y: f.one})
                        for k1, c1 in left.items():
                            for k2, c2 in right.items():
                                key = (k1, k2)
                                out[key] = f.add(
                                    out.get(key, f.zero), f.mul(coeff, f.mul(c1, c2))
                                )
                # - g(ab)
                for key, v in g_hat(ab).items():
                    out[key] = f.sub(out.get(key, f.zero), v)
                # g(a)_l b1 ⊗ g(a)_r b2
                ga = g_hat(va)
                for (x, y), cg in ga.items():
                    for (b1, b2), cb in db.items():
                        coeff = f.mul(cg, cb)
                        left = _mulvec(B, {x: f.one}, {b1: f.one})
                        right = _mulvec(B, {y: f.one}, {b2: f.one})
                        for k1, c1 in left.items():
                            for k2, c2 in right.items():
                                key = (k1, k2)
                                out[key] = f.add(
                                    out.get(key, f.zero), f.mul(coeff, f.mul(c1, c2))
                                )
                for key, v in out.items():
                    if v:
                        acc(("C", a, b) + key, v)

        for c in self.nonunit:
            vc = _ideal_basis_vec(B, c)
            dc = _comulvec(B, vc)
            out = {}
            # c1 ⊗ g(c2)  -  (Delta⊗Id) g(c)  +  (Id⊗Delta) g(c)  -  g(c1) ⊗ c2
            for (c1, c2), cc in dc.items():
                for (x, y), cg in g_hat({c2: self.f.one}).items():
                    key = (c1, x, y)
                    out[key] = f.add(out.get(key, f.zero), f.mul(cc, cg))
                for (x, y), cg in g_hat({c1: self.f.one}).items():
                    key = (x, y, c2)
                    out[key] = f.sub(out.get(key, f.zero), f.mul(cc, cg))
            for (x, y), cg in g_hat(vc).items():
                for (x1, x2), cd in _comulvec(B, {x: f.one}).items():
                    key = (x1, x2, y)
                    out[key] = f.sub(out.get(key, f.zero), f.mul(cg, cd))
                for (y1, y2), cd in _comulvec(B, {y: f.one}).items():
                    key = (x, y1, y2)
                    out[key] = f.add(out.get(key, f.zero), f.mul(cg, cd))
            for key, v in out.items():
                if v:
                    acc(("CC", c) + key, v)
        return col

    def _zero_f(self):
        return lambda u, v: {}

    def _zero_g(self):
        return lambda u: {}

    def cocycle_matrix_columns(self):
        cols = []
        for fu in self.f_unknowns:
            cols.append(self._relations_column(self._f_hat(fu), self._zero_g()))
        for gu in self.g_unknowns:
            cols.append(self._relations_column(self._zero_f(), self._g_hat(gu)))
        return cols

    def coboundary_columns(self):
        """Pairs produced from a single degree-l map, as coordinates over the
        (f, g) unknowns."""
        B, f = self.B, self.f
        fpos = {u: i for i, u in enumerate(self.f_unknowns)}
        gpos = {u: len(self.f_unknowns) + i for i, u in enumerate(self.g_unknowns)}
        cols = []
        for (a0, t0) in self.theta_unknowns:
            tvec = _ideal_basis_vec(B, t0)

            def theta(u, _a0=a0, _tvec=tvec):
                coeff = u.get(_a0, f.zero)
                if not coeff:
                    return {}
                return {k: f.mul(coeff, c) for k, c in _tvec.items()}

            col = {}
            for a in self.nonunit:
                va = _ideal_basis_vec(B, a)
                for b in self.nonunit:
                    vb = _ideal_basis_vec(B, b)
                    # a θ(b) - θ(ab) + θ(a) b
                    out = _mulvec(B, va, theta(vb))
                    for k, v in theta(_mulvec(B, va, vb)).items():
                        out[k] = f.sub(out.get(k, f.zero), v)
                    for k, v in _mulvec(B, theta(va), vb).items():
                        out[k] = f.add(out.get(k, f.zero), v)
                    for t, v in _project(B, out).items():
                        col[fpos[(a, b, t)]] = f.add(
                            col.get(fpos[(a, b, t)], f.zero), v
                        )
            for c in self.nonunit:
                vc = _ideal_basis_vec(B, c)
                dc = _comulvec(B, vc)
                out = {}
                for (x, y), cg in _comulvec(B, theta(vc)).items():
                    out[(x, y)] = f.add(out.get((x, y), f.zero), cg)
                for (c1, c2), cc in dc.items():
                    for k, v in theta({c2: f.one}).items():
                        key = (c1, k)
                        out[key] = f.sub(out.get(key, f.zero), f.mul(cc, v))
                    for k, v in theta({c1: f.one}).items():
                        key = (k, c2)
                        out[key] = f.sub(out.get(key, f.zero), f.mul(cc, v))
                for (t1, t2), v in _project2(B, out).items():
                    pos = gpos[(c, t1, t2)]
                    col[pos] = f.add(col.get(pos, f.zero), v)
            cols.append({k: v for k, v in col.items() if v})
        return cols

    def dimensions(self):
        """(dim cocycles, dim coboundaries, dim cohomology)."""
        f = self.B.field
        unknowns = len(self.f_unknowns) + len(self.g_unknowns)
        if unknowns == 0:
            return 0, 0, 0
        cols = self.cocycle_matrix_columns()
        row_keys = sorted({k for col in cols for k in col})
        key_pos = {k: i for i, k in enumerate(row_keys)}
        zero = f.zero
        if row_keys:
            rows = [[zero] * unknowns for _ in row_keys]
            for j, col in enumerate(cols):
                for k, v in col.items():
                    rows[key_pos[k]][j] = v
            rank = Matrix(f, rows, unknowns).rank()
        else:
            rank = 0
        dim_cocycles = unknowns - rank
        cob = self.coboundary_columns()
        if cob:
            rows = [[zero] * len(cob) for _ in range(unknowns)]
            for j, col in enumerate(cob):
                for i, v in col.items():
                    rows[i][j] = v
            dim_cob = Matrix(f, rows, len(cob)).rank()
        else:
            dim_cob = 0
        return dim_cocycles, dim_cob, dim_cocycles - dim_cob


def h2_direct(B, degree):
    """dim data of the level-2 cohomology via the explicit relations."""
    return H2Oracle(B, degree).dimensions()


# --------------------------------------------------------------------------
# random generators
# --------------------------------------------------------------------------


def random_scalar(field, rng, nonzero=False):
    prime = getattr(field, "prime", 0)
    if prime:
        v = rng.randrange(1 if nonzero else 0, prime)
    else:
        v = rng.randint(1 if nonzero else -3, 3)
    return field.check(v)


def random_morphism(B, level, rng, density=0.6):
    """A random deformation morphism built from ideal-level maps."""
    ctx = context_for(B)
    f = B.field
    parts = []
    for s in range(1, level + 1):
        idx = ctx.pair_index(1, 1, -s)
        dmap = {}
        for scode, tcode in idx.pairs:
            if rng.random() < density:
                val = random_scalar(f, rng, nonzero=True)
                dmap.setdefault(scode, {})[tcode] = val
        parts.append(
            _embedded_correction(B, dmap, 1, 1, -s)
            if dmap
            else GradedMap.zero(B.space, B.space, -s, f)
        )
    return DeformationMorphism(B, parts)


def random_valid_deformation(B, level, rng):
    """Conjugate of the trivial deformation by a random morphism, then
    restricted to the requested level."""
    from bideform import conjugate, restrict

    full = max(level, 1)
    top = max(2 * B.top_degree, full)
    d = conjugate(Deformation.trivial(B, top), random_morphism(B, top, rng))
    return restrict(d, level)


def corrupt_deformation(d, rng):
    """Perturb one correction entry (degree-respecting, possibly breaking
    normalization or the deformation identities)."""
    B = d.base
    f = B.field
    ctx = context_for(B)
    from bideform.graded import tensor_power

    sq = tensor_power(B.space, 2)
    attempts = 0
    while True:
        attempts += 1
        s = rng.randrange(1, d.level + 1)
        which = rng.random() < 0.5
        if which:
            gm = d.m_corrections[s - 1]
            candidates = [
                (i, j)
                for j in range(sq.dim)
                for i in range(B.dim)
                if B.space.degree_of(i) == sq.degree_of(j) - s
            ]
            if not candidates:
                if attempts > 20:
                    raise RuntimeError("no corruptible slot")
                continue
            i, j = rng.choice(candidates)
            cols = {jj: dict(col) for jj, col in gm.cols.items()}
            col = cols.setdefault(j, {})
            col[i] = f.add(col.get(i, f.zero), random_scalar(f, rng, nonzero=True))
            new = GradedMap(sq, B.space, -s, f, cols)
            ms = list(d.m_corrections)
            ms[s - 1] = new
            return Deformation(B, d.level, ms, d.delta_corrections)
        gm = d.delta_corrections[s - 1]
        candidates = [
            (i, j)
            for j in range(B.dim)
            for i in range(sq.dim)
            if sq.degree_of(i) == B.space.degree_of(j) - s
        ]
        if not candidates:
            if attempts > 20:
                raise RuntimeError("no corruptible slot")
            continue
        i, j = rng.choice(candidates)
        cols = {jj: dict(col) for jj, col in gm.cols.items()}
        col = cols.setdefault(j, {})
        col[i] = f.add(col.get(i, f.zero), random_scalar(f, rng, nonzero=True))
        new = GradedMap(B.space, sq, -s, f, cols)
        ds = list(d.delta_corrections)
        ds[s - 1] = new
        return Deformation(B, d.level, d.m_corrections, ds)


def solvable_by_rank(matrix: Matrix, b) -> bool:
    """Independent solvability decision via the fraction-free rank."""
    aug = Matrix(
        matrix.field,
        [list(row) + [bv] for row, bv in zip(matrix.entries, b)],
        matrix.ncols + 1,
    )
    return ff_rank(matrix) == ff_rank(aug)

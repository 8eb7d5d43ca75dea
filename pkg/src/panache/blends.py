"""Large-kernel predicates, blended extensions, pair equivalence, the
three-hypothesis patching theorem, and the counterexample search.

A compatible pair is a pair of extension classes (L, N) against objects
B (low weights), A (pure middle weight) and C (high weights); a blend is a
middle object realising both at once.  The obstruction to blending is the
composition pairing in degree two, and the two facts are checked against
each other as independent oracles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (Mat, ONE, ZERO, lattice_solve, solve_linear, solve_mod2,
                     vec_is_zero)
from .objects import (IsoResult, Morphism, RepObject, is_isomorphic,
                      morphism_space, weight_filtration, weight_quotient)
from .galois import hom_block, strictly_lower_block, u_of, u_p_of
from .cohomology import (ExtClassHandle, H2Class, e_p_class, ext1_class,
                         h1_basis, is_split, min_split_support, quotient_class,
                         yoneda_compose)
from .axioms import check_axioms
from .presentations import add_deg


# ---------------------------------------------------------------------------
# largeness and total nonsplitness


def is_large_u(m: RepObject) -> bool:
    """Does the unipotent kernel fill the whole strictly-lowering block?"""
    return u_of(m).space == strictly_lower_block(m)


def is_large_u_p(m: RepObject, p: int) -> bool:
    return u_p_of(m, p).space == hom_block(m, p)


def is_totally_nonsplit(e: ExtClassHandle) -> bool:
    """Pure target only: every pushforward to a nonzero quotient is nonsplit,
    i.e. the minimal support is everything."""
    return min_split_support(e).dim == e.target.dim


# ---------------------------------------------------------------------------
# compatible pairs and blends


@dataclass
class CompatiblePair:
    b: RepObject
    a: RepObject
    c: RepObject
    l_class: ExtClassHandle   # in Ext^1(A, B)
    n_class: ExtClassHandle   # in Ext^1(C, A)

    def __post_init__(self):
        if self.a.dim == 0 or not _pure(self.a):
            raise ValueError("middle object must be nonzero and pure")
        if self.b.dim and self.b.max_weight() >= self.a.min_weight():
            raise ValueError("weight separation fails between B and A")
        if self.c.dim and self.a.max_weight() >= self.c.min_weight():
            raise ValueError("weight separation fails between A and C")
        for cls, (src, tgt) in ((self.l_class, (self.a, self.b)),
                                (self.n_class, (self.c, self.a))):
            if cls.hom_source is None or cls.hom_source.characters != src.characters \
                    or cls.hom_target.characters != tgt.characters:
                raise ValueError("extension class does not match the pair objects")


def _pure(m: RepObject) -> bool:
    return len(m.weights()) <= 1


@dataclass
class BlendedDiagram:
    """The nine-object exact diagram attached to a compatible pair."""

    b: RepObject
    l_mid: RepObject
    a: RepObject
    m: RepObject
    n_mid: RepObject
    c: RepObject
    iota_l: Morphism     # B -> L
    pi_l: Morphism       # L -> A
    iota_m: Morphism     # B -> M
    pi_m: Morphism       # M -> N
    alpha: Morphism      # L -> M
    beta: Morphism       # M -> C
    iota_n: Morphism     # A -> N
    pi_n: Morphism       # N -> C

    def validate(self) -> list[str]:
        problems = []
        for name, mor in (("iota_l", self.iota_l), ("pi_l", self.pi_l),
                          ("iota_m", self.iota_m), ("pi_m", self.pi_m),
                          ("alpha", self.alpha), ("beta", self.beta),
                          ("iota_n", self.iota_n), ("pi_n", self.pi_n)):
            bad = mor.validate()
            if bad:
                problems.append(f"{name}: {bad[0]}")
        if problems:
            return problems
        rows = [
            ("row L", self.iota_l, self.pi_l),
            ("row M", self.iota_m, self.pi_m),
            ("col M", self.alpha, self.beta),
            ("col N", self.iota_n, self.pi_n),
        ]
        for name, inj, sur in rows:
            if inj.matrix.rank() != inj.source.dim:
                problems.append(f"{name}: first map not injective")
            if sur.matrix.rank() != sur.target.dim:
                problems.append(f"{name}: second map not surjective")
            comp = sur.matrix.matmul(inj.matrix)
            if not comp.is_zero():
                problems.append(f"{name}: not a complex")
            if inj.matrix.rank() + sur.matrix.rank() != inj.target.dim:
                problems.append(f"{name}: rank condition fails")
        if self.alpha.matrix.matmul(self.iota_l.matrix) != self.iota_m.matrix:
            problems.append("square B: alpha∘iota_L != iota_M")
        if self.pi_m.matrix.matmul(self.alpha.matrix) != \
                self.iota_n.matrix.matmul(self.pi_l.matrix):
            problems.append("square A: pi_M∘alpha != iota_N∘pi_L")
        if self.pi_n.matrix.matmul(self.pi_m.matrix) != self.beta.matrix:
            problems.append("square C: pi_N∘pi_M != beta")
        return problems


@dataclass
class BlendResult:
    ok: bool
    diagram: BlendedDiagram | None = None
    obstruction: H2Class | None = None
    certificate: list | None = None

    def __bool__(self):
        return self.ok


def _two_step_object(base: RepObject, top: RepObject, cls: ExtClassHandle,
                     label: str) -> RepObject:
    """Extension object of top by base with the given cocycle blocks."""
    dim = base.dim + top.dim
    chars = base.characters + top.characters
    actions = {}
    for i in set(base.actions) | set(top.actions) | set(cls.comps):
        mat = Mat.zeros(dim, dim)
        mb = base.actions.get(i)
        if mb is not None:
            for a, b, c in mb.nonzero_entries():
                mat.data[a][b] = c
        mt = top.actions.get(i)
        if mt is not None:
            for a, b, c in mt.nonzero_entries():
                mat.data[base.dim + a][base.dim + b] = c
        comp = cls.comps.get(i)
        if comp is not None:
            block = Mat.unflatten(list(comp), base.dim, top.dim)
            for a, b, c in block.nonzero_entries():
                mat.data[a][base.dim + b] = c
        if not mat.is_zero():
            actions[i] = mat
    labels = tuple(f"{label}.{x}" for x in base.labels + top.labels)
    return RepObject(base.presentation, labels, chars, actions)


def blend(pair: CompatiblePair) -> BlendResult:
    """Solve the corner blocks of the three-step ansatz; on failure return
    the degree-two obstruction with an infeasibility certificate."""
    b_obj, a_obj, c_obj = pair.b, pair.a, pair.c
    p = b_obj.presentation
    lmats = {i: Mat.unflatten(list(v), b_obj.dim, a_obj.dim)
             for i, v in pair.l_class.comps.items()}
    nmats = {i: Mat.unflatten(list(v), a_obj.dim, c_obj.dim)
             for i, v in pair.n_class.comps.items()}

    # corner unknowns: equivariant blocks fiber(C) -> fiber(B)
    layout: list[tuple[int, int, int]] = []   # (gen, row in B, col in C)
    diff_chars = {}
    for a in range(b_obj.dim):
        for c in range(c_obj.dim):
            diff = tuple(x - y for x, y in zip(b_obj.characters[a], c_obj.characters[c]))
            diff_chars.setdefault(diff, []).append((a, c))
    gen_cells: dict[int, list[tuple[int, int]]] = {}
    for diff, cells in diff_chars.items():
        for g in p.gens_of_degree(diff):
            gen_cells[g] = cells
            for (a, c) in cells:
                layout.append((g, a, c))
    layout.sort()
    pos = {key: k for k, key in enumerate(layout)}

    relevant = sorted(set(lmats) | set(nmats) | set(b_obj.actions) |
                      set(c_obj.actions) | set(gen_cells))
    pairs = set()
    for i in relevant:
        for j in relevant:
            if i < j:
                pairs.add((i, j))
    for g in gen_cells:
        pairs.update(p.pairs_with_degree_sum(p.degree(g)))

    sparse_rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for (i, j) in sorted(pairs):
        bi, bj = b_obj.actions.get(i), b_obj.actions.get(j)
        ci, cj = c_obj.actions.get(i), c_obj.actions.get(j)
        bracket = p.bracket(i, j)
        # commutator condition on the (B, C) corner:
        # B_i m_j + L_i N_j + m_i C_j - B_j m_i - L_j N_i - m_j C_i = sum c_k m_k
        cup = Mat.zeros(b_obj.dim, c_obj.dim)
        if i in lmats and j in nmats:
            cup = cup + lmats[i].matmul(nmats[j])
        if j in lmats and i in nmats:
            cup = cup - lmats[j].matmul(nmats[i])
        bracket_hits = [(k, coeff) for k, coeff in bracket.items() if k in gen_cells]
        if bi is None and bj is None and ci is None and cj is None \
                and not bracket_hits and cup.is_zero():
            continue
        for r in range(b_obj.dim):
            for s in range(c_obj.dim):
                row: dict[int, Fraction] = {}

                def put(key, val):
                    k = pos.get(key)
                    if k is not None and val != 0:
                        row[k] = row.get(k, ZERO) + val

                if bi is not None:
                    for t in range(b_obj.dim):
                        put((j, t, s), bi.data[r][t])
                if bj is not None:
                    for t in range(b_obj.dim):
                        put((i, t, s), -bj.data[r][t])
                if cj is not None:
                    for t in range(c_obj.dim):
                        put((i, r, t), cj.data[t][s])
                if ci is not None:
                    for t in range(c_obj.dim):
                        put((j, r, t), -ci.data[t][s])
                for k, coeff in bracket_hits:
                    put((k, r, s), -coeff)
                row = {k: v for k, v in row.items() if v != 0}
                if row or cup.data[r][s] != 0:
                    sparse_rows.append(row)
                    rhs.append(-cup.data[r][s])

    if sparse_rows:
        dense = []
        for row in sparse_rows:
            out = [ZERO] * len(layout)
            for k, v in row.items():
                out[k] = v
            dense.append(out)
        sol = solve_linear(Mat.from_rows(dense), rhs)
    else:
        sol = solve_linear(Mat.zeros(0, len(layout)), [])
    if not sol.feasible:
        obstruction = yoneda_compose(pair.l_class, pair.n_class)
        return BlendResult(False, obstruction=obstruction, certificate=sol.certificate)
    corner = {key: sol.particular[k] for key, k in pos.items() if sol.particular[k] != 0}
    diagram = _assemble_diagram(pair, lmats, nmats, corner)
    return BlendResult(True, diagram=diagram)


def blend_with_corner(pair: CompatiblePair, corner: dict) -> BlendedDiagram:
    lmats = {i: Mat.unflatten(list(v), pair.b.dim, pair.a.dim)
             for i, v in pair.l_class.comps.items()}
    nmats = {i: Mat.unflatten(list(v), pair.a.dim, pair.c.dim)
             for i, v in pair.n_class.comps.items()}
    return _assemble_diagram(pair, lmats, nmats, corner)


def _assemble_diagram(pair: CompatiblePair, lmats, nmats, corner) -> BlendedDiagram:
    b_obj, a_obj, c_obj = pair.b, pair.a, pair.c
    p = b_obj.presentation
    db, da, dc = b_obj.dim, a_obj.dim, c_obj.dim
    dim = db + da + dc
    chars = b_obj.characters + a_obj.characters + c_obj.characters
    gens = (set(b_obj.actions) | set(a_obj.actions) | set(c_obj.actions)
            | set(lmats) | set(nmats) | {g for (g, _, _) in corner})
    actions = {}
    for i in gens:
        mat = Mat.zeros(dim, dim)
        for obj, off in ((b_obj, 0), (a_obj, db), (c_obj, db + da)):
            ai = obj.actions.get(i)
            if ai is not None:
                for a, b, c in ai.nonzero_entries():
                    mat.data[off + a][off + b] = c
        if i in lmats:
            for a, b, c in lmats[i].nonzero_entries():
                mat.data[a][db + b] = c
        if i in nmats:
            for a, b, c in nmats[i].nonzero_entries():
                mat.data[db + a][db + da + b] = c
        for (g, r, s), val in corner.items():
            if g == i:
                mat.data[r][db + da + s] = val
        if not mat.is_zero():
            actions[i] = mat
    labels = tuple(f"b.{x}" for x in b_obj.labels) + tuple(f"a.{x}" for x in a_obj.labels) \
        + tuple(f"c.{x}" for x in c_obj.labels)
    m_obj = RepObject(p, labels, chars, actions)

    l_mid = _two_step_object(b_obj, a_obj, pair.l_class, "L")
    n_mid = _two_step_object(a_obj, c_obj, pair.n_class, "N")

    def block_incl(total, idx):
        out = Mat.zeros(total, len(idx))
        for col, a in enumerate(idx):
            out.data[a][col] = ONE
        return out

    def block_proj(total, idx):
        out = Mat.zeros(len(idx), total)
        for r, a in enumerate(idx):
            out.data[r][a] = ONE
        return out

    iota_l = Morphism(b_obj, l_mid, block_incl(db + da, range(db)))
    pi_l = Morphism(l_mid, a_obj, block_proj(db + da, range(db, db + da)))
    iota_m = Morphism(b_obj, m_obj, block_incl(dim, range(db)))
    pi_m = Morphism(m_obj, n_mid, block_proj(dim, range(db, dim)))
    alpha = Morphism(l_mid, m_obj, block_incl(dim, range(db + da)))
    beta = Morphism(m_obj, c_obj, block_proj(dim, range(db + da, dim)))
    iota_n = Morphism(a_obj, n_mid, block_incl(da + dc, range(da)))
    pi_n = Morphism(n_mid, c_obj, block_proj(da + dc, range(da, da + dc)))
    return BlendedDiagram(b_obj, l_mid, a_obj, m_obj, n_mid, c_obj,
                          iota_l, pi_l, iota_m, pi_m, alpha, beta, iota_n, pi_n)


@dataclass
class AttachedResult:
    status: str                 # "unique" | "non_unique" | "not_compatible" | "undecided"
    first: RepObject | None = None
    second: RepObject | None = None
    iso: IsoResult | None = None


def attached_unique(pair: CompatiblePair) -> AttachedResult:
    """When Ext^1(C, B) vanishes, two different corner solutions must give
    isomorphic middles, and the attached object is unique."""
    res = blend(pair)
    if not res.ok:
        return AttachedResult("not_compatible")
    from .objects import internal_hom
    hom_cb = internal_hom(pair.c, pair.b)
    obstruction_space = h1_basis(hom_cb)
    m1 = res.diagram.m
    second = _second_blend(pair, res, obstruction_space)
    if second is None:
        iso = is_isomorphic(m1, m1)
        return AttachedResult("unique", m1, m1, iso)
    iso = is_isomorphic(m1, second)
    if not obstruction_space:
        return AttachedResult("unique" if iso.status == "yes" else "undecided",
                              m1, second, iso)
    if iso.status == "no":
        return AttachedResult("non_unique", m1, second, iso)
    if iso.status == "yes":
        # this particular perturbation did not change the class; stay honest
        return AttachedResult("undecided", m1, second, iso)
    return AttachedResult("undecided", m1, second, iso)


def _second_blend(pair: CompatiblePair, res: BlendResult, obstruction_space):
    """Perturb the corner by a one-cocycle: a nonzero Ext class if one
    exists, else a coboundary shift; None when the corner is forced."""
    corner_shift = None
    if obstruction_space:
        cls = obstruction_space[0]
        corner_shift = {(i, a // pair.c.dim, a % pair.c.dim): v
                        for i, comp in cls.comps.items()
                        for a, v in enumerate(comp) if v != 0}
    else:
        # coboundary of a character-zero hom: exists only with matching chars
        zero_char = tuple([0] * pair.b.presentation.torus_rank)
        from .objects import internal_hom
        hom_cb = internal_hom(pair.c, pair.b)
        idx = hom_cb.char_indices(zero_char)
        for a0 in idx:
            shift = {}
            for i, mat in hom_cb.actions.items():
                for r in range(hom_cb.dim):
                    if mat.data[r][a0] != 0:
                        shift[(i, r // pair.c.dim, r % pair.c.dim)] = mat.data[r][a0]
            if shift:
                corner_shift = shift
                break
    if corner_shift is None:
        return None
    base = {}
    d = res.diagram
    db, da = pair.b.dim, pair.a.dim
    for i, mat in d.m.actions.items():
        for r in range(db):
            for s in range(pair.c.dim):
                v = mat.data[r][db + da + s]
                if v != 0:
                    base[(i, r, s)] = v
    merged = dict(base)
    for k, v in corner_shift.items():
        merged[k] = merged.get(k, ZERO) + v
    merged = {k: v for k, v in merged.items() if v != 0}
    return _assemble_diagram(pair,
                             {i: Mat.unflatten(list(v), pair.b.dim, pair.a.dim)
                              for i, v in pair.l_class.comps.items()},
                             {i: Mat.unflatten(list(v), pair.a.dim, pair.c.dim)
                              for i, v in pair.n_class.comps.items()},
                             merged).m


# ---------------------------------------------------------------------------
# pair equivalence


@dataclass
class EquivalenceResult:
    status: str                 # "equivalent" | "not_equivalent" | "unknown"
    scalings: dict | None = None
    reason: str = ""


def _components(m: RepObject) -> list[int]:
    """Connected components of the action graph; automorphisms of a
    multiplicity-free object are constant on them."""
    parent = list(range(m.dim))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mat in m.actions.values():
        for a, b, c in mat.nonzero_entries():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return [find(a) for a in range(m.dim)]


def pair_equivalent(p1: CompatiblePair, p2: CompatiblePair,
                    random_trials: int = 200, seed: int = 0) -> EquivalenceResult:
    """Orbit equality under the automorphism scalings of B, A, C.

    Exact in the multiplicity-free regime (all automorphisms are diagonal and
    the orbit equations become solvable power-product systems over Q^*);
    otherwise a bounded seeded search that may return unknown.
    """
    for x, y in ((p1.b, p2.b), (p1.a, p2.a), (p1.c, p2.c)):
        if x.characters != y.characters:
            raise ValueError("pairs must share the three outer objects")
    if is_split(p1.l_class).split != is_split(p2.l_class).split \
            or is_split(p1.n_class).split != is_split(p2.n_class).split:
        return EquivalenceResult("not_equivalent", reason="splitness differs")

    if p1.l_class.same_class(p2.l_class) and p1.n_class.same_class(p2.n_class):
        return EquivalenceResult("equivalent", scalings={})

    multiplicity_free = all(
        len(obj.character_multiset()) == len(obj.character_set())
        for obj in (p1.b, p1.a, p1.c))
    if not multiplicity_free:
        return _pair_equivalent_random(p1, p2, random_trials, seed)

    # zero patterns must agree (invertible scalings cannot change them)
    def pattern(cls):
        return {(i, k) for i, v in cls.comps.items() for k, x in enumerate(v) if x != 0}

    if pattern(p1.l_class) != pattern(p2.l_class) or \
            pattern(p1.n_class) != pattern(p2.n_class):
        return EquivalenceResult("not_equivalent", reason="support patterns differ")

    comp_b = _components(p1.b)
    comp_a = _components(p1.a)
    comp_c = _components(p1.c)
    var_index: dict[tuple[str, int], int] = {}

    def var(group, comp):
        key = (group, comp)
        if key not in var_index:
            var_index[key] = len(var_index)
        return var_index[key]

    exponent_rows: list[dict[int, int]] = []
    ratios: list[Fraction] = []
    for i, v in p1.l_class.comps.items():
        w = p2.l_class.comps[i]
        for k, x in enumerate(v):
            if x == 0:
                continue
            a_row, a_col = divmod(k, p1.a.dim)
            # L2 = beta_row * L1 * alpha_col
            row = {var("b", comp_b[a_row]): 1, var("a", comp_a[a_col]): 1}
            exponent_rows.append(row)
            ratios.append(w[k] / x)
    for i, v in p1.n_class.comps.items():
        w = p2.n_class.comps[i]
        for k, x in enumerate(v):
            if x == 0:
                continue
            a_row, c_col = divmod(k, p1.c.dim)
            # N2 = alpha_row^{-1} * N1 * gamma_col
            row = {var("a", comp_a[a_row]): -1, var("c", comp_c[c_col]): 1}
            exponent_rows.append(row)
            ratios.append(w[k] / x)

    n_vars = len(var_index)
    dense = [[r.get(j, 0) for j in range(n_vars)] for r in exponent_rows]
    primes = sorted({q for r in ratios for q in _prime_support(r)})
    transpose = [[dense[r][j] for r in range(len(dense))] for j in range(n_vars)]
    for q in primes:
        target = [_valuation(r, q) for r in ratios]
        if lattice_solve(transpose, target) is None:
            return EquivalenceResult("not_equivalent",
                                     reason=f"no scaling matches the {q}-adic pattern")
    signs = [0 if r > 0 else 1 for r in ratios]
    if solve_mod2(transpose, signs) is None:
        return EquivalenceResult("not_equivalent", reason="no scaling matches the signs")
    return EquivalenceResult("equivalent", scalings={"variables": n_vars})


def _prime_support(r: Fraction):
    out = set()
    for n in (abs(r.numerator), r.denominator):
        d = 2
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            out.add(n)
    return out


def _valuation(r: Fraction, q: int) -> int:
    v = 0
    n = abs(r.numerator)
    while n % q == 0:
        n //= q
        v += 1
    d = r.denominator
    while d % q == 0:
        d //= q
        v -= 1
    return v


def _pair_equivalent_random(p1, p2, trials, seed) -> EquivalenceResult:
    rng = random.Random(seed)
    auts = {}
    for name, obj in (("b", p1.b), ("a", p1.a), ("c", p1.c)):
        space = morphism_space(obj, obj)
        auts[name] = [Mat.unflatten(list(r), obj.dim, obj.dim) for r in space.basis]

    def sample(name, obj):
        base = auts[name]
        for _ in range(8):
            m = Mat.zeros(obj.dim, obj.dim)
            for b in base:
                m = m + b.scale(Fraction(rng.randint(-3, 3)))
            if m.det() != 0:
                return m
        return Mat.identity(obj.dim)

    for _ in range(trials):
        fb, fa, fc = sample("b", p1.b), sample("a", p1.a), sample("c", p1.c)
        try:
            fa_inv = fa.inverse()
            fb_inv = fb.inverse()
        except ValueError:
            continue
        l2 = {i: tuple(fb_inv.matmul(Mat.unflatten(list(v), p1.b.dim, p1.a.dim)).matmul(fa).flat())
              for i, v in p1.l_class.comps.items()}
        n2 = {i: tuple(fa_inv.matmul(Mat.unflatten(list(v), p1.a.dim, p1.c.dim)).matmul(fc).flat())
              for i, v in p1.n_class.comps.items()}
        cand_l = ext1_class(p1.a, p1.b, l2)
        cand_n = ext1_class(p1.c, p1.a, n2)
        if cand_l.same_class(p2.l_class) and cand_n.same_class(p2.n_class):
            return EquivalenceResult("equivalent")
    return EquivalenceResult("unknown", reason="random search exhausted")


def extract_pair(m: RepObject, b_cut: int, a_cut: int) -> CompatiblePair:
    """The classification map: read the pair of extension classes off an
    object whose filtration steps at the two cuts separate its weights.

    The lower class comes from the middle filtration step, the upper one
    from the quotient; the object is attached to the extracted pair (its own
    corner blocks solve the blend equations)."""
    from .objects import subquotient
    from .linalg import rref_basis
    b_idx = [i for i in range(m.dim) if m.weight_of(i) <= b_cut]
    a_idx = [i for i in range(m.dim) if b_cut < m.weight_of(i) <= a_cut]
    c_idx = [i for i in range(m.dim) if m.weight_of(i) > a_cut]
    if not b_idx or not a_idx or not c_idx:
        raise ValueError("both cuts must separate nonempty weight layers")
    b_obj = weight_filtration(m, b_cut).source
    step = weight_filtration(m, a_cut).source
    rows = []
    for i in range(step.dim):
        if step.weight_of(i) <= b_cut:
            row = [ZERO] * step.dim
            row[i] = ONE
            rows.append(row)
    a_obj = subquotient(step, rref_basis(rows, step.dim)).quotient
    c_obj = weight_quotient(m, a_cut).target
    l_comps = {}
    n_comps = {}
    for i, mat in m.actions.items():
        lv = [ZERO] * (len(b_idx) * len(a_idx))
        nv = [ZERO] * (len(a_idx) * len(c_idx))
        for r, orig_r in enumerate(b_idx):
            for c, orig_c in enumerate(a_idx):
                lv[r * len(a_idx) + c] = mat.data[orig_r][orig_c]
        for r, orig_r in enumerate(a_idx):
            for c, orig_c in enumerate(c_idx):
                nv[r * len(c_idx) + c] = mat.data[orig_r][orig_c]
        if any(x != 0 for x in lv):
            l_comps[i] = lv
        if any(x != 0 for x in nv):
            n_comps[i] = nv
    return CompatiblePair(b_obj, a_obj, c_obj,
                          ext1_class(a_obj, b_obj, l_comps),
                          ext1_class(c_obj, a_obj, n_comps))


def pair_act(pair: CompatiblePair, fb: Mat, fa: Mat, fc: Mat) -> CompatiblePair:
    """The right action of automorphism triples on pairs."""
    fb_inv, fa_inv = fb.inverse(), fa.inverse()
    l2 = {i: tuple(fb_inv.matmul(Mat.unflatten(list(v), pair.b.dim, pair.a.dim)).matmul(fa).flat())
          for i, v in pair.l_class.comps.items()}
    n2 = {i: tuple(fa_inv.matmul(Mat.unflatten(list(v), pair.a.dim, pair.c.dim)).matmul(fc).flat())
          for i, v in pair.n_class.comps.items()}
    return CompatiblePair(pair.b, pair.a, pair.c,
                          ext1_class(pair.a, pair.b, l2),
                          ext1_class(pair.c, pair.a, n2))


# ---------------------------------------------------------------------------
# the patching theorem


@dataclass
class PatchReport:
    p: int
    hyp_sub_large: bool
    hyp_quot_large: bool
    hyp_axiom: bool
    axiom_witness_q: int | None
    conclusion_large: bool
    implication_ok: bool
    converse_ok: bool
    dim_u: int

    def as_dict(self):
        return self.__dict__.copy()


def theorem3_verify(m: RepObject, p: int) -> PatchReport:
    """Evaluate the three patching hypotheses and the largeness conclusion
    independently, plus the unconditional converse direction."""
    wq = weight_quotient(m, p)
    if wq.target.dim != 1 or any(c != 0 for c in wq.target.characters[0]) \
            or wq.target.actions:
        raise ValueError("quotient above the cut must be the unit object")
    grp = [a for a in range(m.dim) if m.weight_of(a) == p]
    if not grp:
        raise ValueError("the cut weight must occur")
    sub = weight_filtration(m, p).source
    quot_above = weight_quotient(m, p - 1).target
    hyp_i = is_large_u(sub)
    hyp_ii = is_large_u(quot_above)
    lo = m.min_weight() - 1
    hyp_iii = True
    witness_q = None
    for q in range(lo, p + 1):
        if not check_axioms(m, p, q).ia1:
            hyp_iii = False
            witness_q = q
            break
    conclusion = is_large_u(m)
    implication_ok = (not (hyp_i and hyp_ii and hyp_iii)) or conclusion
    converse_ok = (not conclusion) or (hyp_i and hyp_ii)
    return PatchReport(p, hyp_i, hyp_ii, hyp_iii, witness_q, conclusion,
                       implication_ok, converse_ok, u_of(m).dim)


# ---------------------------------------------------------------------------
# counterexample search


@dataclass
class SearchOutcome:
    found: bool
    seed: int | None = None
    p: int | None = None
    object_spec: dict | None = None
    certificate: list | None = None
    system: tuple | None = None
    log: dict = field(default_factory=dict)


def abelian_search_presentation(chars: list[int], degrees: list[int]):
    from .presentations import abelian_presentation
    names = [f"x{i}" for i in range(len(degrees))]
    return abelian_presentation(1, (-2,), [(d,) for d in degrees], names=names)


def sample_commuting_object(pres, chars: list[int], seed: int, density: float = 0.85):
    """Sequentially sample equivariant actions for an abelian presentation:
    each new generator is drawn from the commutant of the previous ones."""
    rng = random.Random(seed)
    dim = len(chars)
    char_tuples = [(c,) for c in chars]
    actions: dict[int, Mat] = {}

    def random_equivariant(g):
        delta = pres.degree(g)
        mat = Mat.zeros(dim, dim)
        touched = False
        for a in range(dim):
            for b in range(dim):
                if char_tuples[a] == add_deg(char_tuples[b], delta):
                    if rng.random() < density:
                        mat.data[a][b] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
                        touched = True
        return mat if touched else None

    for g in range(pres.n_gens):
        cand = random_equivariant(g)
        if cand is None:
            continue
        if not actions:
            actions[g] = cand
            continue
        # project onto the commutant: solve [A_h, X] = 0 for X equivariant
        cells = [(a, b) for a in range(dim) for b in range(dim)
                 if char_tuples[a] == add_deg(char_tuples[b], pres.degree(g))]
        rows = []
        for h, ah in actions.items():
            for r in range(dim):
                for s in range(dim):
                    row = []
                    for (a, b) in cells:
                        v = ZERO
                        if b == s and ah.data[r][a] != 0:
                            v += ah.data[r][a]
                        if a == r and ah.data[b][s] != 0:
                            v -= ah.data[b][s]
                        row.append(v)
                    if any(x != 0 for x in row):
                        rows.append(row)
        if rows:
            from .linalg import kernel_basis
            kern = kernel_basis(Mat.from_rows(rows))
            if not kern:
                continue
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in kern]
            if all(c == 0 for c in coeffs):
                coeffs[0] = ONE
            mat = Mat.zeros(dim, dim)
            for cvec, coeff in zip(kern, coeffs):
                for (cell, val) in zip(cells, cvec):
                    mat.data[cell[0]][cell[1]] += coeff * val
            if not mat.is_zero():
                actions[g] = mat
        else:
            actions[g] = cand
    return RepObject(pres, tuple(f"v{i}" for i in range(dim)), tuple(char_tuples), actions)


def counterexample_search(weight_pattern: list[int],
                          seeds: range,
                          degrees: list[int] | None = None,
                          stop_at_first: bool = True) -> SearchOutcome:
    """Look for instances with the given weights where some filtration class
    stays nonsplit after quotienting by its own kernel block.

    Every Found result carries the re-checkable infeasibility certificate of
    the splitting system.
    """
    if any(w % 2 for w in weight_pattern):
        raise ValueError("the search model uses the even-weight convention")
    chars = sorted({-w // 2 for w in weight_pattern})
    if degrees is None:
        degrees = [1, 1]
    pres = abelian_search_presentation(chars, degrees)
    checked = 0
    found_count = 0
    found: SearchOutcome | None = None
    for seed in seeds:
        m = sample_commuting_object(pres, chars, seed)
        if m.validate():
            continue
        checked += 1
        for p in m.weights()[:-1]:
            e = e_p_class(m, p)
            q = quotient_class(e, u_p_of(m, p))
            verdict = is_split(q)
            if not verdict.split:
                found_count += 1
                out = SearchOutcome(
                    True, seed=seed, p=p,
                    object_spec=_object_spec(m),
                    certificate=verdict.certificate,
                    system=verdict.system,
                    log={"checked": checked, "pattern": weight_pattern})
                if stop_at_first:
                    return out
                if found is None:
                    found = out
                break
    if found is not None:
        found.log["checked"] = checked
        found.log["found_count"] = found_count
        return found
    return SearchOutcome(False, log={"checked": checked, "pattern": weight_pattern,
                                     "seeds": [seeds.start, seeds.stop]})


def _object_spec(m: RepObject) -> dict:
    from .linalg import format_rat
    return {
        "characters": [list(c) for c in m.characters],
        "actions": {m.presentation.name_of(i): [[a, b, format_rat(c)]
                                                for a, b, c in mat.nonzero_entries()]
                    for i, mat in m.actions.items()},
    }


def verify_certificate(system: tuple, certificate: list) -> bool:
    """Re-check an infeasibility certificate: y·A = 0 and y·b != 0."""
    rows, rhs = system
    if not certificate or len(certificate) != len(rows):
        return False
    n = len(rows[0]) if rows else 0
    combo = [ZERO] * n
    acc = ZERO
    for y, row, b in zip(certificate, rows, rhs):
        if y != 0:
            combo = [c + y * x for c, x in zip(combo, row)]
            acc += y * b
    return vec_is_zero(combo) and acc != 0

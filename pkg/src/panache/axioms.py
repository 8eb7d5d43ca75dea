"""Weight-region difference sets and the independence axioms.

The two regions at a cut (p, q <= p) partition the strictly-lower pairs of
weights that can carry kernel directions vanishing below q; the axioms ask
the two (or, for q > p, three) regions to be independent, either at the
level of simple constituents (here: characters) or of weights.  All flags
depend only on the associated graded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .objects import RepObject

Region = list[tuple[int, int]]


def _occurring_pairs(weights: list[int]) -> list[tuple[int, int]]:
    return [(i, j) for i in weights for j in weights if i < j]


def region_membership(p: int, q: int, kind: str):
    """Predicates for the (i, j) regions; i is the target weight, j the source."""
    if kind == "j1":
        return lambda i, j: i <= p < j
    if kind == "j2":
        return lambda i, j: i < j and (q < j <= p or i > p)
    if kind == "j1p":
        return lambda i, j: i <= p and j > q
    if kind == "j2p":
        return lambda i, j: p < i <= q < j
    if kind == "j3p":
        return lambda i, j: q < i < j
    raise ValueError(kind)


def j_sets(m: RepObject, p: int, q: int) -> dict[str, set[int]]:
    """Difference sets i - j over occurring weights in the indicated regions.

    For q <= p returns {"J1": ..., "J2": ...}; for q > p the primed triple
    {"J1'": ..., "J2'": ..., "J3'": ...}.
    """
    weights = m.weights()
    pairs = _occurring_pairs(weights)
    if q <= p:
        kinds = [("J1", "j1"), ("J2", "j2")]
    else:
        kinds = [("J1'", "j1p"), ("J2'", "j2p"), ("J3'", "j3p")]
    out = {}
    for name, kind in kinds:
        member = region_membership(p, q, kind)
        out[name] = {i - j for (i, j) in pairs if member(i, j)}
    return out


def _char_diffs(m: RepObject, member) -> set[tuple[int, ...]]:
    out = set()
    for a in range(m.dim):
        for b in range(m.dim):
            wa, wb = m.weight_of(a), m.weight_of(b)
            if member(wa, wb):
                out.add(tuple(x - y for x, y in zip(m.characters[a], m.characters[b])))
    return out


@dataclass
class AxiomReport:
    p: int
    q: int
    primed: bool
    j_weights: dict[str, set[int]]
    ia1: bool
    ia2: bool
    ia3: bool
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        prefix = "'" if self.primed else ""
        return {
            "p": self.p,
            "q": self.q,
            **{k: sorted(v) for k, v in self.j_weights.items()},
            f"ia1{prefix}": self.ia1,
            f"ia2{prefix}": self.ia2,
            "ia3": self.ia3,
            "witness": {k: list(v) if isinstance(v, (set, tuple)) else v
                        for k, v in self.witness.items()},
        }


def ia3_holds(m: RepObject) -> tuple[bool, int | None]:
    """All differences of occurring weights distinct."""
    weights = m.weights()
    diffs = [i - j for (i, j) in _occurring_pairs(weights)]
    seen = set()
    for d in diffs:
        if d in seen:
            return False, d
        seen.add(d)
    return True, None


def check_axioms(m: RepObject, p: int, q: int) -> AxiomReport:
    """Evaluate the independence axioms at the cut (p, q)."""
    primed = q > p
    jsets = j_sets(m, p, q)
    names = list(jsets)
    witness: dict = {}

    ia2 = True
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            inter = jsets[names[i]] & jsets[names[j]]
            if inter:
                ia2 = False
                witness.setdefault("shared_weight", sorted(inter)[0])

    kinds = ["j1", "j2"] if not primed else ["j1p", "j2p", "j3p"]
    char_sets = [_char_diffs(m, region_membership(p, q, k)) for k in kinds]
    ia1 = True
    for i in range(len(char_sets)):
        for j in range(i + 1, len(char_sets)):
            inter = char_sets[i] & char_sets[j]
            if inter:
                ia1 = False
                witness.setdefault("shared_character", sorted(inter)[0])

    ia3, bad = ia3_holds(m)
    if not ia3:
        witness.setdefault("repeated_difference", bad)
    return AxiomReport(p, q, primed, jsets, ia1, ia2, ia3, witness)


def ia1_all_q(m: RepObject, p: int) -> bool:
    """The character-level axiom at (p, q) for every q <= p; by monotonicity
    it is enough to test below the lowest occurring weight, but all relevant
    integer cuts are checked anyway."""
    lo = m.min_weight() - 1
    return all(check_axioms(m, p, q).ia1 for q in range(lo, p + 1))


def ia2_all_q(m: RepObject, p: int) -> bool:
    lo = m.min_weight() - 1
    return all(check_axioms(m, p, q).ia2 for q in range(lo, p + 1))

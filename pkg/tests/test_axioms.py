"""Weight-region difference sets and the independence axioms."""

from hypothesis import given, settings, strategies as st

from panache.axioms import check_axioms, ia1_all_q, ia2_all_q, ia3_holds, j_sets
from panache.objects import RepObject, gr_object
from panache.presentations import abelian_presentation


def weights_object(weights, rank=1, chars=None):
    if chars is None:
        chars = [(-w,) for w in weights]
        p = abelian_presentation(1, (-1,), [(1,)])
    else:
        p = abelian_presentation(rank, (-1,) * rank, [(1,) + (0,) * (rank - 1)])
    labels = tuple(f"v{i}" for i in range(len(chars)))
    return RepObject(p, labels, tuple(chars), {})


def test_j_sets_worked_example():
    m = weights_object([0, -1, -3])
    js = j_sets(m, -1, -2)
    assert js["J1"] == {-1, -3}
    assert js["J2"] == {-2}


def test_j_sets_single_weight_empty():
    m = weights_object([-2])
    js = j_sets(m, -2, -3)
    assert js["J1"] == set() and js["J2"] == set()


def test_j_sets_overlap_at_low_cut():
    """Weights 0, -2, -4 share the difference -2 across the regions once the
    lower cut sits strictly below the middle weight."""
    m = weights_object([0, -2, -4])
    js = j_sets(m, -2, -3)
    assert js["J1"] == {-2, -4}
    assert js["J2"] == {-2}
    assert js["J1"] & js["J2"] == {-2}
    # at q = p the second region is empty by definition
    js_tight = j_sets(m, -2, -2)
    assert js_tight["J2"] == set()


def test_j_sets_rejects_wrong_order():
    m = weights_object([0, -1])
    assert "J1'" in j_sets(m, -2, -1)
    assert "J1" in j_sets(m, -1, -1)


def test_axioms_ia3_spaced_weights():
    m = weights_object([0, -1, -3, -7])
    rep = check_axioms(m, -1, -2)
    assert rep.ia3 and rep.ia2 and rep.ia1


def test_axioms_doubled_gap():
    m = weights_object([0, -2, -4])
    rep = check_axioms(m, -2, -3)
    assert not rep.ia3
    assert not rep.ia2
    assert rep.witness["repeated_difference"] == -2
    assert rep.witness["shared_weight"] == -2


def test_rank_two_characters_split_weights():
    """Equal weights but disjoint characters: subobject-level axiom holds
    while the weight-level one fails."""
    p = abelian_presentation(2, (-1, -1), [(1, 0)])
    chars = ((0, 0), (1, 0), (1, 1))
    m = RepObject(p, ("a", "b", "c"), chars, {})
    rep = check_axioms(m, -1, -2)
    assert rep.ia1 and not rep.ia2


def test_primed_regions():
    m = weights_object([0, -1, -3, -7])
    rep = check_axioms(m, -3, -1)
    assert rep.primed
    assert rep.j_weights["J1'"] == {-3, -7}
    assert rep.j_weights["J2'"] == {-1}
    assert rep.j_weights["J3'"] == set()
    assert rep.ia1 and rep.ia2


weight_sets = st.lists(st.integers(min_value=-9, max_value=0), min_size=1,
                       max_size=5, unique=True)


@settings(max_examples=120, deadline=None)
@given(weight_sets, st.integers(min_value=-9, max_value=0),
       st.integers(min_value=-10, max_value=1))
def test_implication_chain(weights, p, q):
    m = weights_object(sorted(weights))
    rep = check_axioms(m, p, q)
    if rep.ia3:
        assert rep.ia2
    if rep.ia2:
        assert rep.ia1
    # the global axiom also implies the primed variant at every cut
    if rep.primed and rep.ia3:
        assert rep.ia2


@settings(max_examples=80, deadline=None)
@given(weight_sets, st.integers(min_value=-9, max_value=0),
       st.integers(min_value=-12, max_value=0), st.integers(min_value=0, max_value=4))
def test_monotonicity_in_q(weights, p, q, step):
    q2 = q + step
    if q2 > p:
        q2 = p
    if q > p:
        q = p
    m = weights_object(sorted(weights))
    lower = check_axioms(m, p, min(q, q2))
    higher = check_axioms(m, p, max(q, q2))
    if lower.ia1:
        assert higher.ia1
    if lower.ia2:
        assert higher.ia2


def test_axioms_depend_only_on_graded():
    m = weights_object([0, -2, -4])
    assert check_axioms(m, -2, -3).as_dict() == \
        check_axioms(gr_object(m), -2, -3).as_dict()


def test_all_q_helpers():
    m = weights_object([0, -1, -3, -7])
    assert ia1_all_q(m, -1) and ia2_all_q(m, -1)
    bad = weights_object([0, -2, -4])
    assert not ia2_all_q(bad, -2)


def test_ia3_helper():
    ok, _ = ia3_holds(weights_object([0, -1, -3, -7]))
    assert ok
    bad, witness = ia3_holds(weights_object([0, -2, -4]))
    assert not bad and witness == -2

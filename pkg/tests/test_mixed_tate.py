"""Mixed-Tate layer: dimension rules, classification, duality, periods."""

import random
from fractions import Fraction

import pytest

from panache.blends import is_large_u, pair_equivalent
from panache.cohomology import h1_basis, h2_basis
from panache.galois import galois_dim, u_of
from panache.mixed_tate import (KUMMER_FAMILY, Monomial, PeriodMatrix,
                                build_four_dim_example, build_mt_model,
                                classification_unique, classify_three_dim,
                                duality_check, exponent_vector, ext_dim_rule,
                                kummer_canonical, kummer_class,
                                period_matrix_report, sigma_class,
                                entry, _diag, ZERO_ENTRY)
from panache.objects import is_isomorphic, simple_character


def test_ext_dim_rule_table():
    assert ext_dim_rule(3).kind == "one"
    assert ext_dim_rule(5).kind == "one"
    assert ext_dim_rule(2).kind == "zero"
    assert ext_dim_rule(0).kind == "zero"
    assert ext_dim_rule(-3).kind == "zero"
    rule1 = ext_dim_rule(1)
    assert rule1.kind == "kummer" and rule1.dim() == 8
    assert ext_dim_rule(1, desk_rank=3).dim() == 3


def test_kummer_canonical_examples():
    assert kummer_canonical(8).value() == 2
    assert kummer_canonical(Fraction(4, 9)).value() == Fraction(3, 2)
    assert kummer_canonical(5).value() == 5
    assert kummer_canonical(Fraction(1, 2)).value() == 2
    assert kummer_canonical(Fraction(27, 8)).value() == Fraction(3, 2)
    with pytest.raises(ValueError):
        kummer_canonical(1)
    with pytest.raises(ValueError):
        kummer_canonical(Fraction(-2))


def test_kummer_canonical_idempotent_and_orbit_constant():
    rng = random.Random(0)
    primes = [2, 3, 5, 7]
    for _ in range(300):
        exps = {p: rng.randint(-3, 3) for p in rng.sample(primes, rng.randint(1, 3))}
        exps = {p: e for p, e in exps.items() if e}
        if not exps:
            continue
        r = Fraction(1)
        for p, e in exps.items():
            r *= Fraction(p) ** e
        if r == 1:
            continue
        canon = kummer_canonical(r)
        assert kummer_canonical(canon.value()) == canon
        # scaling the exponent vector preserves the representative
        power = r ** rng.randint(1, 3)
        if power != 1:
            assert kummer_canonical(power) == canon
        assert kummer_canonical(1 / r) == canon


def test_exponent_vector():
    assert exponent_vector(Fraction(12, 5)) == {2: 2, 3: 1, 5: -1}
    assert exponent_vector(Fraction(1)) == {}


def test_model_calibration_small():
    model = build_mt_model(5, 2)
    for n in range(1, 6):
        assert len(h1_basis(simple_character(model, (n,)))) == \
            ext_dim_rule(n, desk_rank=2).dim()
        assert h2_basis(simple_character(model, (n,))) == []


def test_sigma_and_kummer_classes():
    model = build_mt_model(5, 2)
    s3 = sigma_class(model, 3)
    assert not s3.is_zero_class()
    k6 = kummer_class(model, 6)
    assert len(k6.support()) == 2
    with pytest.raises(ValueError):
        kummer_class(model, 5)   # prime 5 not in a rank-2 model


def test_classification_cases():
    assert classify_three_dim(4, 1, 2).case == "I"
    assert classify_three_dim(6, 3).case == "II"
    assert classify_three_dim(6, 5, 2).case == "III"
    rejected = classify_three_dim(4, 2)
    assert rejected.case == "Rejected" and rejected.reason == "n = 2k"
    assert classify_three_dim(5, 2).case == "Rejected"
    assert classify_three_dim(3, 2).case == "Rejected"  # gap 1 is fine, k=2 is not
    assert classify_three_dim(8, 3).case == "II"
    assert classify_three_dim(4, 3).case == "III"
    with pytest.raises(ValueError):
        classify_three_dim(2, 2)


def test_case_one_representative_properties():
    res = classify_three_dim(4, 1, 2)
    rep = res.representative
    assert rep is not None and rep.validate() == []
    assert rep.dim == 3
    assert is_large_u(rep)
    assert u_of(rep).dim == 3
    assert galois_dim(rep) == 4
    assert res.parameter_space == KUMMER_FAMILY


def test_case_two_unique():
    res = classify_three_dim(6, 3)
    assert classification_unique(res).status == "unique"
    res8 = classify_three_dim(8, 3)
    assert classification_unique(res8).status == "unique"
    rep8 = res8.representative
    assert is_large_u(rep8) and galois_dim(rep8) == 4


def test_case_representatives_constant_on_kummer_orbits():
    """Equivalent Kummer parameters give isomorphic representatives."""
    model = build_mt_model(4, 1)
    res_a = classify_three_dim(4, 1, 2, model=model)
    res_b = classify_three_dim(4, 1, 8, model=model)
    assert pair_equivalent(res_a.pair, res_b.pair).status == "equivalent"
    assert is_isomorphic(res_a.representative, res_b.representative).status == "yes"


def test_case_representatives_distinguish_parameters():
    model = build_mt_model(4, 2)
    res_a = classify_three_dim(4, 1, 2, model=model)
    res_b = classify_three_dim(4, 1, 3, model=model)
    assert pair_equivalent(res_a.pair, res_b.pair).status == "not_equivalent"


@pytest.mark.parametrize("r", [2, 3, Fraction(3, 2)])
def test_duality(r):
    assert duality_check(6, r)


def test_duality_sanity_double_dual():
    from panache.objects import dual, tensor_product
    model = build_mt_model(4, 1)
    rep = classify_three_dim(4, 1, 2, model=model).representative
    assert is_isomorphic(dual(dual(rep)), rep).status == "yes"


def test_period_report_case_one():
    res = classify_three_dim(4, 1, 2)
    report = period_matrix_report(res)
    symbols = report.matrix.symbol_set()
    assert symbols == {"(2pi*i)^-4", "(2pi*i)^-4 zeta(3)", "*M(4,2)*",
                       "(2pi*i)^-1", "(2pi*i)^-1 log(2)"}
    assert report.galois_dimension == 4
    assert any("zeta(3)" in note and "log(2)" in note for note in report.notes)
    assert set(report.independent_symbols) == {"2pi*i", "zeta(3)", "log(2)", "*M(4,2)*"}


def test_period_report_case_two():
    report = period_matrix_report(classify_three_dim(6, 3))
    rendered = report.matrix.symbol_set()
    assert "(2pi*i)^-6 zeta(3)" in rendered
    assert "(2pi*i)^-3 zeta(3)" in rendered


def test_period_report_case_three():
    report = period_matrix_report(classify_three_dim(6, 5, 2))
    rendered = report.matrix.symbol_set()
    assert "(2pi*i)^-6 log(2)" in rendered
    assert "(2pi*i)^-5 zeta(5)" in rendered


def test_period_report_euler_note_only_for_four_two():
    with_note = period_matrix_report(classify_three_dim(4, 1, 2))
    assert any("zeta(3) = a*log(2)^3" in n for n in with_note.notes)
    without = period_matrix_report(classify_three_dim(4, 1, 3))
    assert not any("zeta(3) = a*log(2)^3" in n for n in without.notes)
    with pytest.raises(ValueError):
        period_matrix_report(classify_three_dim(4, 2))


def test_period_matrix_invariants():
    with pytest.raises(ValueError):
        # a lower-triangular entry is rejected
        PeriodMatrix((-2, 0), [[_diag(-1), ZERO_ENTRY],
                               [entry((1, Monomial(zetas=(3,)))), _diag(0)]])
    with pytest.raises(ValueError):
        # diagonal must be pure powers
        PeriodMatrix((-2, 0), [[entry((1, Monomial(zetas=(3,)))), ZERO_ENTRY],
                               [ZERO_ENTRY, _diag(0)]])


def test_four_dim_example():
    rep = build_four_dim_example(2)
    assert rep.ia3
    assert rep.large
    assert rep.dim_u == 6
    assert rep.galois_dimension == 7
    assert rep.object.dim == 4
    assert rep.object.weights() == [-18, -12, -10, 0]
    assert rep.object.validate() == []
    assert len(rep.period.independent_symbols) == 7
    assert rep.period.matrix.row_weights == (-18, -12, -10, 0)


def test_big_model_calibration_dimensions():
    """The full-size model realises the dimension table at every twist."""
    model = build_mt_model(9, 4)
    expected = {1: 4, 2: 0, 3: 1, 4: 0, 5: 1, 6: 0, 7: 1, 8: 0, 9: 1}
    for n, dim in expected.items():
        assert len(h1_basis(simple_character(model, (n,)))) == dim
        assert h2_basis(simple_character(model, (n,))) == []


def test_larger_case_two_instances():
    res = classify_three_dim(10, 3)
    assert res.case == "II"
    assert classification_unique(res).status == "unique"
    rep = res.representative
    assert rep.validate() == [] and is_large_u(rep)


def test_four_dim_example_two_primes():
    """The parameter 6 pulls in two degree-one generators; the blend still
    closes with a full kernel."""
    rep = build_four_dim_example(6)
    assert rep.ia3 and rep.large and rep.dim_u == 6 and rep.galois_dimension == 7

"""
Garland 界与消失预测测试
"""
from fractions import Fraction

import pytest

from framelab.errors import LinkDisconnectedError
from framelab.garland_bounds import (
    garland_table,
    garland_verdict,
    is_monotone,
    lambda_min_link,
    p_bound,
    poset_vanishing_prediction,
    q2_bound,
    q_bound,
    vanishing_prediction,
)
from framelab.spectrum import smallest_positive_laplacian


def test_lambda_min_examples():
    assert lambda_min_link(4, 3, 0) == Fraction(6, 7)
    assert lambda_min_link(4, 3, 1) == Fraction(1, 2)
    assert lambda_min_link(5, 4, 2) == Fraction(2, 3)


@pytest.mark.parametrize("m,q", [(3, 3), (4, 3), (5, 4), (4, 5), (6, 3)])
def test_lambda_min_matches_laplacian(m, q):
    assert lambda_min_link(m + 1, q, 1) == smallest_positive_laplacian(m, q)


def test_lambda_min_q2_parity():
    # m 偶：1 - 3/(2(2^{m-1}+1))；m 奇：1 - 3/(2^{m-1}-1)
    assert lambda_min_link(4, 2, 0) == Fraction(5, 6)
    assert lambda_min_link(5, 2, 0) == Fraction(4, 5)
    with pytest.raises(ValueError):
        lambda_min_link(5, 2, 2)


def test_lambda_min_disconnected_links():
    with pytest.raises(LinkDisconnectedError):
        lambda_min_link(4, 3, 2)
    with pytest.raises(LinkDisconnectedError):
        lambda_min_link(3, 2, 0)
    with pytest.raises(ValueError):
        lambda_min_link(4, 3, 3)


def test_verdict_boundary_case_fails():
    verdict = garland_verdict(4, 3, 1)
    assert verdict.lambda_min == verdict.threshold == Fraction(1, 2)
    assert not verdict.passes
    assert verdict.predicted_vanishing == []
    assert not garland_verdict(5, 4, 2).passes


def test_verdict_passes():
    verdict = garland_verdict(4, 3, 0)
    assert verdict.passes
    assert verdict.predicted_vanishing == [0]
    assert verdict.to_dict()["lambda_min"] == "6/7"


def test_verdict_not_applicable():
    verdict = garland_verdict(3, 2, 0)
    assert verdict.lambda_min is None
    assert not verdict.passes
    assert verdict.reason


@pytest.mark.parametrize("n,q", [(4, 3), (5, 3), (6, 4), (7, 2), (9, 2), (8, 5)])
def test_q_bound_sign_matches_verdict(n, q):
    for v in garland_table(n, q):
        if v.lambda_min is not None:
            assert v.passes == (q_bound(n, q, v.i) > 0)


def test_q_bounds():
    assert q_bound(4, 3, 0) == 6
    assert q_bound(4, 3, 1) == 0
    assert q2_bound(6, 0) == 21
    assert q2_bound(6, 1) == 3
    assert q2_bound(6, 2) == 3
    with pytest.raises(ValueError):
        q2_bound(6, 3)


@pytest.mark.parametrize("n,q", [(6, 2), (9, 2), (12, 2), (5, 3), (8, 4), (10, 7)])
def test_monotone(n, q):
    assert is_monotone(n, q)


def test_monotone_step_shape():
    assert [q_bound(5, 3, i) for i in range(3)] == [19, 5, -1]
    assert [q2_bound(9, i) for i in range(6)] == [84, 84, 18, 18, 0, 0]


def test_p_bound_values():
    assert p_bound(4, 3) == 10
    assert [p_bound(j, 2) for j in range(4, 12)] == [9, 9, 27, 27, 93, 93, 351, 351]
    with pytest.raises(ValueError):
        p_bound(3, 2)
    with pytest.raises(ValueError):
        p_bound(2, 3)


@pytest.mark.parametrize(
    "n,q,degrees",
    [(4, 5, [0, 1]), (4, 3, [0]), (6, 2, [0, 1, 2]), (4, 2, [0]), (3, 2, []), (3, 3, [0]), (2, 2, []), (2, 5, [])],
)
def test_vanishing_prediction(n, q, degrees):
    assert vanishing_prediction(n, q).degrees == degrees


def test_prediction_records_rules():
    pred = vanishing_prediction(4, 5)
    assert pred.rules["n<q+1"] == [0, 1]
    assert pred.to_dict()["degrees"] == ["0", "1"]
    with pytest.raises(ValueError):
        vanishing_prediction(1, 3)


def test_prediction_never_contradicts_known_betti():
    known = {(3, 2): [3, 0, 0], (3, 3): [0, 64, 0], (4, 2): [0, 81, 0, 0], (4, 3): [0, 70, 9114, 0]}
    for (n, q), betti in known.items():
        for d in vanishing_prediction(n, q).degrees:
            assert betti[d] == 0


def test_poset_prediction():
    preds = poset_vanishing_prediction(4, 2)
    assert set(preds) == {"nondeg", "decomp"}
    assert preds["nondeg"].degrees == [0]
    assert poset_vanishing_prediction(3, 5)["decomp"].degrees == [0]
    assert poset_vanishing_prediction(6, 2)["nondeg"].degrees == [0, 1]
    assert poset_vanishing_prediction(6, 2)["decomp"].degrees == [0, 1]
    for key in ("nondeg", "decomp"):
        assert poset_vanishing_prediction(8, 2)[key].degrees == [0, 1, 2, 3]
        assert poset_vanishing_prediction(11, 2)[key].rules["q=2, n>=11"] == [0, 1, 2, 3, 4, 5]


def test_garland_table_range():
    table = garland_table(5, 3)
    assert [v.i for v in table] == [0, 1, 2, 3]

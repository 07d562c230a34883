"""
GF(q^2) 查表算术测试
"""
import pytest

from framelab.errors import FieldDivisionByZero, NotPrimePowerError, UnsupportedSizeError
from framelab.galois_field import FieldTable, field_new


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_axioms_exhaustive(q):
    assert field_new(q).verify_axioms()


@pytest.mark.parametrize("q", [7, 8, 9])
def test_axioms_sampled(q):
    assert field_new(q).verify_axioms(sample_size=5000, seed=1)


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_order_and_characteristic(q):
    F = field_new(q)
    assert F.order == q * q
    assert F.p ** F.degree == q * q
    assert len(F.fixed_field) == q


@pytest.mark.parametrize("q", [2, 3, 4])
def test_frobenius_is_involution(q):
    F = field_new(q)
    for x in range(F.order):
        assert F.frobenius(F.frobenius(x)) == x
        assert F.frobenius(F.mul(x, 2)) == F.mul(F.frobenius(x), F.frobenius(2))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_norm_and_trace_land_in_fixed_field(q):
    F = field_new(q)
    fixed = set(F.fixed_field)
    for x in range(F.order):
        assert F.norm(x) in fixed
        assert F.trace(x) in fixed
        assert F.norm(x) == F.mul(x, F.frobenius(x))
    assert {F.norm(x) for x in range(1, F.order)} == fixed - {0}


@pytest.mark.parametrize("q", [2, 3, 4])
def test_each_norm_has_q_plus_one_preimages(q):
    F = field_new(q)
    for c in F.fixed_field[1:]:
        assert len(F.norm_preimages(c)) == q + 1


def test_prime_field_embedding():
    F = field_new(3)
    assert F.from_int(1) == F.one
    assert F.from_int(2) == F.minus_one
    assert F.from_int(0) == F.zero
    assert F.add(F.one, F.minus_one) == F.zero
    assert all(F.is_fixed(F.from_int(k)) for k in range(3))


def test_division():
    F = field_new(4)
    for x in range(F.order):
        for y in range(1, F.order):
            assert F.mul(F.div(x, y), y) == x
    assert F.power(2, F.order - 1) == F.one


def test_inverse_of_zero():
    F = field_new(3)
    with pytest.raises(FieldDivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12])
def test_not_prime_power(q):
    with pytest.raises(NotPrimePowerError):
        FieldTable(q)


def test_unsupported_size():
    with pytest.raises(UnsupportedSizeError):
        FieldTable(17)
    with pytest.raises(ValueError):
        field_new(32)


def test_field_is_cached():
    assert field_new(3) is field_new(3)

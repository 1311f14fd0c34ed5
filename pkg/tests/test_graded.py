"""Tests for graded dimension tables and the stable multiplier series."""

from __future__ import annotations

import pytest

from fhcalc.graded import (
    ExtMonomial,
    GradedError,
    GradedSpace,
    e_multiply,
    even_ones,
    ext_algebra,
    from_dict,
    space,
    tensor,
    tensor_power,
    unit,
    zero,
)


def test_space_basics():
    s = space([1, 0, 2])
    assert s.truncation == 2
    assert s.dims == (1, 0, 2)
    assert s.dim(2) == 2
    assert s.dim(7) == 0
    assert s.total_dim() == 3
    assert not s.is_zero()
    assert zero(4).is_zero()
    assert unit(3).dims == (1, 0, 0, 0)


def test_space_padding_and_validation():
    assert space([1, 2], truncation=4).dims == (1, 2, 0, 0, 0)
    with pytest.raises(GradedError):
        space([1, 2, 3], truncation=1)
    with pytest.raises(GradedError):
        space([])
    with pytest.raises(GradedError):
        GradedSpace((1, -1))
    with pytest.raises(GradedError):
        GradedSpace((2,), labels=(("a",),))  # one label for dimension 2
    with pytest.raises(GradedError):
        GradedSpace((1, 1), labels=(("a",),))  # labels stop short


def test_from_dict():
    s = from_dict({0: 1, 3: 2}, truncation=4)
    assert s.dims == (1, 0, 0, 2, 0)
    with pytest.raises(GradedError):
        from_dict({5: 1}, truncation=4)


def test_truncate_and_pad():
    s = space([1, 2, 3])
    assert s.truncate(1).dims == (1, 2)
    assert s.truncate(4).dims == (1, 2, 3, 0, 0)
    assert s.pad(3).dims == (1, 2, 3, 0)
    with pytest.raises(GradedError):
        s.pad(1)
    labeled = GradedSpace((1, 1), labels=(("a",), ("b",)))
    assert labeled.truncate(0).labels == (("a",),)
    assert labeled.pad(2).labels == (("a",), ("b",), ())
    assert labeled.without_labels().labels is None


def test_tensor_is_convolution():
    a = space([1, 2])
    b = space([1, 1, 1])
    # Truncation drops to the smaller input.
    assert tensor(a, b).dims == (1, 3)
    c = space([1, 1], truncation=4)
    assert tensor(c, c).dims == (1, 2, 1, 0, 0)
    assert tensor(a, unit(5)).dims == a.dims
    assert a.tensor(zero(5)).is_zero()


def test_tensor_labels_order():
    a = GradedSpace((1, 1), labels=(("x",), ("y",)))
    b = GradedSpace((1, 1), labels=(("u",), ("v",)))
    out = tensor(a, b)
    assert out.dims == (1, 2)
    # Degree 1 pairs come in order of the degree carried by the left factor.
    assert out.labels[1] == (("x", "v"), ("y", "u"))
    assert tensor(a, b.without_labels()).labels is None


def test_tensor_power():
    w = space([1, 1], truncation=4)
    assert tensor_power(w, 0).dims == (1, 0, 0, 0, 0)
    assert tensor_power(w, 3).dims == (1, 3, 3, 1, 0)
    with pytest.raises(GradedError):
        tensor_power(w, -1)


def test_even_ones():
    assert even_ones(6).dims == (1, 0, 1, 0, 1, 0, 1)
    assert even_ones(0).dims == (1,)
    with pytest.raises(GradedError):
        even_ones(-1)


def test_poincare_series_strings():
    assert zero(3).poincare_series() == "0"
    assert unit(2).poincare_series() == "1"
    assert space([2, 1, 3]).poincare_series() == "2 + t + 3t^2"
    assert space([0, 1]).poincare_series() == "t"


def test_csv_text():
    text = space([1, 0, 2]).csv_text()
    assert text == "degree,dimension\n0,1\n1,0\n2,2\n"
    assert text.endswith("\n")


def test_ext_monomial_basics():
    m = ExtMonomial(3, (1, 0, 2, 0))
    assert m.exponents == (1, 0, 2)  # trailing zeros stripped
    assert m.degree == 2 * (1 + 2 * 9)
    assert str(m) == "g1*g3^2"
    assert str(ExtMonomial(3, ())) == "1"
    assert ExtMonomial(5, ()).is_unit()
    with pytest.raises(GradedError):
        ExtMonomial(3, (3,))
    with pytest.raises(ValueError):
        ExtMonomial(4, (1,))


def test_e_multiply():
    g1 = ExtMonomial(3, (1,))
    g2 = ExtMonomial(3, (0, 1))
    prod = e_multiply(g1, g2)
    assert prod == ExtMonomial(3, (1, 1))
    assert prod.degree == g1.degree + g2.degree
    # A p-th power is zero.
    sq = e_multiply(g1, g1)
    assert sq == ExtMonomial(3, (2,))
    assert e_multiply(sq, g1) is None
    assert g1.multiply(ExtMonomial(3, ())) == g1
    with pytest.raises(GradedError):
        e_multiply(g1, ExtMonomial(5, (1,)))


def test_ext_algebra_rank_one():
    alg = ext_algebra(2, 1, 6)
    assert alg.dims_table().dims == (1, 0, 1, 0, 0, 0, 0)
    alg = ext_algebra(3, 1, 8)
    # Exponents 0, 1, 2 of the degree-2 generator.
    assert alg.dims_table().dims == (1, 0, 1, 0, 1, 0, 0, 0, 0)


def test_ext_algebra_rank_two():
    alg = ext_algebra(2, 2, 14)
    table = alg.dims_table()
    # One monomial in each degree 2i with i < 4, nothing else.
    for n in range(15):
        assert table.dim(n) == (1 if n % 2 == 0 and n < 8 else 0)
    assert table.labels[2] == ((1,),)
    assert table.labels[6] == ((1, 1),)
    assert [str(m) for m in alg.monomials_of_degree(6)] == ["g1*g2"]


def test_ext_algebra_unbounded_is_even_ones():
    # Every even degree has exactly one monomial: the p-adic digits of
    # the half-degree pick the exponents.
    for p in (2, 3, 5):
        table = ext_algebra(p, None, 20).dims_table()
        assert table.dims == even_ones(20).dims


def test_ext_algebra_generator_cutoff():
    # Generators whose degree exceeds the truncation never appear, so a
    # large finite rank agrees with the unbounded algebra.
    a = ext_algebra(3, 10, 16)
    b = ext_algebra(3, None, 16)
    assert a.monomials == b.monomials
    assert ext_algebra(2, 0, 6).dims_table().dims == (1, 0, 0, 0, 0, 0, 0)
    with pytest.raises(GradedError):
        ext_algebra(2, -1, 6)
    with pytest.raises(GradedError):
        ext_algebra(2, 1, -1)


def test_ext_algebra_monomial_order_is_deterministic():
    alg = ext_algebra(2, None, 12)
    keys = [(m.degree, m.exponents) for m in alg.monomials]
    assert keys == sorted(keys)

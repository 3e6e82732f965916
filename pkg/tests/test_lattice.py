import math

import pytest

from oklab.errors import DimensionMismatchError, NotASubgroupError
from oklab.lattice import (Sublattice, group_generated,
                           hermite_normal_form, int_det, integer_kernel,
                           lattice_preimage, rational_rank, saturation,
                           subgroup_index, vanishing_forms)


def test_hnf_identity_like():
    basis, rank = hermite_normal_form([(2, 0), (0, 3)])
    assert basis == [(2, 0), (0, 3)]
    assert rank == 2


def test_hnf_gcd_collapse():
    basis, rank = hermite_normal_form([(2, 4), (3, 6)])
    assert basis == [(1, 2)]
    assert rank == 1


def test_hnf_reduces_above_pivot():
    basis, _ = hermite_normal_form([(1, 5), (0, 3)])
    assert basis == [(1, 2), (0, 3)]


def test_hnf_empty_needs_dim():
    basis, rank = hermite_normal_form([], ncols=3)
    assert basis == [] and rank == 0
    with pytest.raises(DimensionMismatchError):
        hermite_normal_form([])


def test_hnf_mixed_dims_rejected():
    with pytest.raises(DimensionMismatchError):
        hermite_normal_form([(1, 2), (1, 2, 3)])


def test_group_membership_and_coordinates():
    lat = group_generated([(2, 0), (0, 3)])
    assert lat.contains((4, 3))
    assert not lat.contains((1, 0))
    assert lat.coordinates((4, 3)) == [2, 1]
    assert lat.member([2, 1]) == (4, 3)


def test_int_det():
    assert int_det([[2, 0], [0, 3]]) == 6
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[1, 2], [2, 4]]) == 0
    assert int_det([]) == 1


def test_subgroup_index_basic():
    amb = group_generated([(1, 0), (0, 1)])
    sub = group_generated([(2, 0), (0, 3)])
    assert subgroup_index(sub, amb) == 6


def test_subgroup_index_rank_drop():
    amb = group_generated([(1, 0), (0, 1)])
    sub = group_generated([(1, 1)])
    assert subgroup_index(sub, amb) == math.inf


def test_subgroup_index_not_contained():
    amb = group_generated([(2, 0), (0, 2)])
    sub = group_generated([(1, 1)])
    with pytest.raises(NotASubgroupError):
        subgroup_index(sub, amb)


def test_integer_kernel_saturated():
    ker = integer_kernel([(1, 1, 1)], 3)
    assert ker.rank == 2
    assert ker.contains((1, -1, 0))
    assert ker.contains((0, 1, -1))
    # Saturation: (1, 0, -1) = half of (2, 0, -2) must be present.
    assert ker.contains((1, 0, -1))


def test_vanishing_forms_and_saturation():
    lat = group_generated([(2, 2)])
    forms = vanishing_forms(lat)
    assert forms.contains((1, -1))
    sat = saturation(lat)
    assert sat.contains((1, 1))
    assert sat.rank == 1


def test_lattice_preimage():
    # phi(x, y) = x + y; preimage of 2Z is {x + y even}.
    target = group_generated([(2,)], ambient_dim=1)
    pre = lattice_preimage([(1, 1)], target)
    assert pre.contains((1, 1))
    assert pre.contains((2, 0))
    assert not pre.contains((1, 0))


def test_rational_rank():
    assert rational_rank([(1, 2), (2, 4)]) == 1
    assert rational_rank([(1, 0), (0, 1), (1, 1)]) == 2
    assert rational_rank([]) == 0

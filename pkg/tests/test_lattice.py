from fractions import Fraction

import pytest

from troplift.errors import InvariantError
from troplift.lattice import (
    integer_kernel,
    is_primitive,
    make_primitive,
    nullspace,
    sign_normalize,
    vec_dot,
)


def test_make_primitive_scales_and_orients():
    assert make_primitive((2, 4, -6)) == (1, 2, -3)
    assert make_primitive((Fraction(1, 2), Fraction(3, 2), 0)) == (1, 3, 0)
    assert make_primitive((-3,)) == (-1,)


def test_make_primitive_rejects_zero():
    with pytest.raises(InvariantError):
        make_primitive((0, 0))


def test_is_primitive():
    assert is_primitive((1, -1, 0))
    assert not is_primitive((2, 2, 0))
    assert not is_primitive((0, 0, 0))


def test_sign_normalize():
    assert sign_normalize((-1, 2)) == (1, -2)
    assert sign_normalize((0, -3)) == (0, 3)
    assert sign_normalize((0, 0)) == (0, 0)


def test_integer_kernel_is_saturated():
    basis = integer_kernel([(2, 0, 0)])
    assert len(basis) == 2
    for v in basis:
        assert vec_dot(v, (2, 0, 0)) == 0
        assert is_primitive(v)
    # the kernel lattice contains the unit vectors e2, e3
    span = {tuple(v) for v in basis}
    assert all(v[0] == 0 for v in span)


def test_integer_kernel_of_line():
    basis = integer_kernel([(1, 1, 0)])
    assert len(basis) == 2
    for v in basis:
        assert vec_dot(v, (1, 1, 0)) == 0
    # saturation: (1,-1,0) and (0,0,1) must be integer combinations of the basis
    import itertools
    targets = [(1, -1, 0), (0, 0, 1)]
    for t in targets:
        found = False
        for coeffs in itertools.product(range(-3, 4), repeat=len(basis)):
            v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(3))
            if v == t:
                found = True
                break
        assert found, f"{t} not reachable"


def test_integer_kernel_full_rank():
    assert integer_kernel([(1, 0), (0, 1)]) == []


def test_nullspace():
    m = [[Fraction(1), Fraction(1), Fraction(0)],
         [Fraction(0), Fraction(1), Fraction(1)]]
    basis = nullspace(m, 3)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v[1] + v[2] == 0

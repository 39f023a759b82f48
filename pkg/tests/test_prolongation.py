"""Jet prolongation: pivot choice, triangular solve, consistency checks."""

import math
import random
from fractions import Fraction

import pytest

from crtrans.errors import InconsistentData, NoWitness, StructureError
from crtrans.fracseries import FracSeries
from crtrans.prolongation import (
    ProlongationInstance,
    forward_expand,
    minimal_ordered_nonzero,
    prolongation_solve,
)
from crtrans.series import Series


def expand_instance(a, n, b, max_order):
    return ProlongationInstance(a, n, forward_expand(a, n, b, max_order))


def jets_of(b, gamma):
    scale = 1
    for e in gamma:
        scale *= math.factorial(e)
    zeros = [0] * len(gamma)
    return b.coefficient_series(list(range(len(gamma))), gamma).scale(scale)


def test_pivot_is_ordered_minimum():
    a = Series.polynomial(2, 8, {(1, 1): 1, (2, 0): 1})
    assert minimal_ordered_nonzero(a, 1) == (1,)
    # degree wins before position
    a2 = Series.polynomial(4, 8, {(0, 1, 1, 0): 1, (2, 0, 0, 0): 1})
    assert minimal_ordered_nonzero(a2, 2) == (0, 1)


def test_pivot_needs_nonzero():
    with pytest.raises(NoWitness):
        minimal_ordered_nonzero(Series.zero(2, 8), 1)


def test_roundtrip_recovers_jets():
    a = Series.polynomial(2, 8, {(1, 1): 1, (2, 0): 1})
    b1 = Series.polynomial(2, 8, {(0, 0): 2, (1, 0): 1, (0, 1): 3, (1, 1): Fraction(1, 2)})
    b2 = Series.polynomial(2, 8, {(0, 1): 1, (2, 0): 1})
    inst = expand_instance(a, 1, [b1, b2], 4)
    sol = prolongation_solve(inst, (3,))
    assert sol.pivot == (1,)
    assert sol.max_jet_order_used == 4
    for gamma in [(0,), (1,), (2,), (3,)]:
        for i, b in enumerate([b1, b2]):
            assert sol.jets[gamma][i] == FracSeries.from_series(jets_of(b, gamma))


def test_roundtrip_two_block_variables():
    rng = random.Random(7)
    a = Series.polynomial(4, 8, {(0, 1, 1, 0): 1, (1, 1, 0, 1): 2})
    b = Series.polynomial(
        4, 8, {(0, 0, 0, 0): 1, (1, 0, 0, 1): rng.randint(1, 5), (0, 1, 1, 0): rng.randint(1, 5)}
    )
    inst = expand_instance(a, 2, [b], 3)
    sol = prolongation_solve(inst, (1, 1))
    assert sol.pivot == (0, 1)
    assert sol.max_jet_order_used == 3
    got = sol.jets[(1, 1)][0]
    assert got == FracSeries.from_series(jets_of(b, (1, 1)))


def test_solution_is_linear_in_data():
    a = Series.polynomial(2, 8, {(1, 0): 1, (1, 1): 1})
    b1 = Series.polynomial(2, 8, {(0, 1): 2})
    b2 = Series.polynomial(2, 8, {(1, 0): 1, (0, 2): 1})
    s1 = prolongation_solve(expand_instance(a, 1, [b1], 3), (2,))
    s2 = prolongation_solve(expand_instance(a, 1, [b2], 3), (2,))
    s12 = prolongation_solve(expand_instance(a, 1, [b1 + b2], 3), (2,))
    for gamma in [(0,), (1,), (2,)]:
        assert s12.jets[gamma][0] == s1.jets[gamma][0] + s2.jets[gamma][0]


def test_division_by_pivot_series():
    # pivot coefficient chi + chi^2 forces genuine denominators
    a = Series.polynomial(2, 8, {(1, 1): 1, (1, 2): 1})
    b = Series.polynomial(2, 8, {(0, 0): 1})
    sol = prolongation_solve(expand_instance(a, 1, [b], 2), (1,))
    one = FracSeries.from_series(Series.one(1, 8))
    assert sol.jets[(0,)][0] == one
    assert sol.jets[(1,)][0].is_zero


def test_inconsistent_jet_below_pivot_order():
    a = Series.polynomial(2, 8, {(1, 1): 1, (2, 0): 1})
    b = Series.polynomial(2, 8, {(0, 0): 2, (0, 1): 3})
    jets = forward_expand(a, 1, [b], 4)
    v = jets[(0,)]
    jets[(0,)] = (v[0] + Series.one(1, v[0].degree),)
    with pytest.raises(InconsistentData):
        prolongation_solve(ProlongationInstance(a, 1, jets), (1,))


def test_inconsistent_jet_off_the_pivot_ladder():
    a = Series.polynomial(4, 8, {(0, 1, 1, 0): 1})
    b = Series.polynomial(4, 8, {(0, 0, 0, 0): 1, (1, 0, 0, 1): 2})
    jets = forward_expand(a, 2, [b], 3)
    v = jets[(2, 0)]
    jets[(2, 0)] = (v[0] + Series.one(2, v[0].degree),)
    with pytest.raises(InconsistentData):
        prolongation_solve(ProlongationInstance(a, 2, jets), (1, 1))


def test_missing_jets_detected():
    a = Series.polynomial(2, 8, {(1, 1): 1})
    b = Series.polynomial(2, 8, {(0, 1): 1})
    inst = expand_instance(a, 1, [b], 2)
    # alpha = (2,) needs jets through order 3
    with pytest.raises(StructureError):
        prolongation_solve(inst, (2,))


def test_jet_order_instrumentation_bound():
    a = Series.polynomial(2, 8, {(2, 1): 1})  # pivot order k = 2
    b = Series.polynomial(2, 8, {(0, 1): 1, (1, 0): 4})
    sol = prolongation_solve(expand_instance(a, 1, [b], 5), (3,))
    assert sol.pivot == (2,)
    assert sol.max_jet_order_used <= 3 + 2
    assert sol.jets[(3,)][0] == FracSeries.from_series(jets_of(b, (3,)))


def test_instance_validation():
    a = Series.polynomial(2, 8, {(1, 1): 1})
    jets = forward_expand(a, 1, [Series.polynomial(2, 8, {(0, 1): 1})], 2)
    with pytest.raises(StructureError):
        ProlongationInstance(a, 3, jets)
    bad = dict(jets)
    bad[(1,)] = ()
    with pytest.raises(StructureError):
        ProlongationInstance(a, 1, bad)

"""Witness searches: SPR constant estimation, disjoint pairs, perp pairs.

Search results are compared against hand-derived values on structured
subspaces and against the brute-force coefficient sweep in oracles.py on
a small real instance.  Search outcomes are one-sided: a found witness
certifies a lower bound, so assertions are written in the direction the
search can actually guarantee.
"""

import math

import numpy as np
import pytest

from phaselat import (
    Ambient,
    InfeasibleError,
    NormSpec,
    SearchBudget,
    Subspace,
    check_pr,
    estimate_spr_constant,
    search_almost_disjoint,
    search_perp_pair,
    spr_ratio,
)

from oracles import real_pair_sweep


def _cross_subspace():
    # span{u, w} in l_inf^4 whose perp stays near 0.1 for separated
    # pairs even though the phase distance collapses
    u = np.array([1, 1, 1, 0], dtype=complex)
    w = np.array([1, 1j, 0, 1], dtype=complex)
    return Subspace(Ambient(4, "complex", NormSpec(np.inf)), [u, w])


def test_one_dimensional_spans_have_constant_one():
    E = Subspace(Ambient(3, "real", NormSpec(2.0)), [[1.0, 2.0, 2.0]])
    est = estimate_spr_constant(E, SearchBudget(4, 60, 2), seed=0)
    assert not est.unbounded
    assert est.c_lower == pytest.approx(1.0, rel=1e-9)

    Ec = Subspace(Ambient(2, "complex", NormSpec(np.inf)), [[1.0, 0.5j]])
    estc = estimate_spr_constant(Ec, SearchBudget(4, 60, 2), seed=0)
    assert not estc.unbounded
    assert estc.c_lower == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("p", [1.0, np.inf])
def test_full_two_dim_space_is_unbounded(p):
    # e1, e2 are disjoint, so the sum/difference pair has equal moduli
    # at positive distance and the ratio blows up
    E = Subspace(Ambient(2, "real", NormSpec(p)), [[1.0, 0.0], [0.0, 1.0]])
    est = estimate_spr_constant(E, seed=0)
    assert est.unbounded
    assert math.isinf(est.c_lower)
    assert est.report.flag == "infinite"


def test_real_constant_matches_disjointness_sweep():
    # 1/c equals the minimal disjointness; the sweep oracle pins both
    basis = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    E = Subspace(Ambient(3, "real", NormSpec(np.inf)), basis)
    est = estimate_spr_constant(E, seed=0)
    assert not est.unbounded
    eps_star, ratio_max = real_pair_sweep(basis, np.inf)
    assert abs(1.0 / est.c_lower - eps_star) / eps_star <= 0.10
    assert est.c_lower >= ratio_max * (1.0 - 5e-3)

    adp = search_almost_disjoint(E, seed=0)
    assert abs(adp.disjointness - eps_star) / eps_star <= 0.10


def test_witness_reproduces_reported_constant():
    basis = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    E = Subspace(Ambient(3, "real", NormSpec(np.inf)), basis)
    est = estimate_spr_constant(E, seed=0)
    again = spr_ratio(est.witness_f, est.witness_g, E.ambient.norm, field="real")
    assert again.flag is None
    assert abs(again.ratio - est.c_lower) <= 1e-6 * est.c_lower


@pytest.mark.parametrize("p", [2.0, np.inf])
def test_complex_disjointness_forces_large_constant(p):
    # an eps'-almost-disjoint pair forces c >= 1/(sqrt(2) eps')
    for seed in (3, 4):
        rng = np.random.default_rng(100 + seed)
        B = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        E = Subspace(Ambient(4, "complex", NormSpec(p)), B)
        adp = search_almost_disjoint(E, seed=seed)
        est = estimate_spr_constant(E, seed=seed)
        if adp.disjointness <= 1e-12:
            assert est.unbounded
        else:
            bound = 1.0 / (math.sqrt(2.0) * adp.disjointness)
            assert est.unbounded or est.c_lower >= bound - 1e-6


def test_estimate_is_deterministic():
    rng = np.random.default_rng(11)
    B = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    E = Subspace(Ambient(3, "complex", NormSpec(2.0)), B)
    budget = SearchBudget(4, 80, 2)
    a = estimate_spr_constant(E, budget, seed=9)
    b = estimate_spr_constant(E, budget, seed=9)
    assert a.c_lower == b.c_lower
    assert a.unbounded == b.unbounded
    assert np.array_equal(a.witness_f, b.witness_f)
    assert np.array_equal(a.witness_g, b.witness_g)
    assert a.budget_used == b.budget_used


def test_colinear_span_disjointness_is_its_modulus_norm():
    # every normalized pair in a 1-dim span shares its modulus, so the
    # meet is that modulus and the disjointness is exactly 1
    E = Subspace(Ambient(2, "real", NormSpec(2.0)), [[1.0, 0.7]])
    wit = search_almost_disjoint(E, SearchBudget(3, 40, 1), seed=0)
    assert wit.disjointness == pytest.approx(1.0, abs=1e-12)


def test_perp_pair_exact_quadrature():
    # (1,1) and (i,-i) satisfy Re(u conj v) = 0 coordinatewise
    E = Subspace(Ambient(2, "complex", NormSpec(np.inf)), [[1.0, 1.0], [1j, -1j]])
    wit = search_perp_pair(E, 1.0, seed=0)
    assert wit.separation >= 1.0 - 1e-6
    assert wit.perp <= 1e-6


def test_perp_floor_versus_unconstrained():
    E = _cross_subspace()
    floor = search_perp_pair(E, 0.1, SearchBudget(8, 200, 3), seed=1)
    assert floor.separation >= 0.1 - 1e-6
    assert floor.perp > 1e-3
    free = search_perp_pair(E, 0.0, SearchBudget(8, 200, 3), seed=0)
    assert free.perp < 1e-3
    assert free.perp < floor.perp


def test_perp_pair_infeasible_separation():
    E = Subspace(Ambient(2, "complex", NormSpec(np.inf)), [[1.0, 1.0], [1j, -1j]])
    with pytest.raises(InfeasibleError):
        search_perp_pair(E, 3.0, SearchBudget(2, 40, 2), seed=0)


def test_perp_pair_rejects_negative_m():
    E = _cross_subspace()
    with pytest.raises(ValueError):
        search_perp_pair(E, -0.1)


@pytest.mark.parametrize("p", [2.0, np.inf])
def test_check_pr_fails_on_full_space(p):
    E = Subspace(Ambient(2, "complex", NormSpec(p)), [[1.0, 0.0], [0.0, 1.0]])
    verdict = check_pr(E, m_grid=(0.1,), seed=0)
    assert verdict.verdict == "fails_with_witness"
    assert verdict.witness.perp < 1e-6
    assert verdict.witness.separation >= 0.1 - 1e-6


def test_check_pr_fails_on_real_pair_in_complex_ambient():
    # f + ig and f - ig share a modulus whenever f, g are real
    rng = np.random.default_rng(5)
    B = np.stack([rng.standard_normal(5), rng.standard_normal(5)]).astype(complex)
    E = Subspace(Ambient(5, "complex", NormSpec(2.0)), B)
    verdict = check_pr(E, m_grid=(0.1,), budget=SearchBudget(8, 250, 3), seed=0)
    assert verdict.verdict == "fails_with_witness"


def test_check_pr_passes_on_cross_subspace():
    verdict = check_pr(
        _cross_subspace(), m_grid=(0.05, 0.1, 0.2),
        budget=SearchBudget(10, 200, 3), seed=3,
    )
    assert verdict.verdict == "passes_up_to_budget"
    assert verdict.witness is None
    assert all(v > 1e-3 for v in verdict.min_perp_per_m.values())


def test_check_pr_records_infeasible_m_as_inf():
    E = Subspace(Ambient(2, "complex", NormSpec(np.inf)), [[1.0, 1.0], [1j, -1j]])
    verdict = check_pr(E, m_grid=(3.0,), budget=SearchBudget(2, 40, 2), seed=0)
    assert verdict.verdict == "passes_up_to_budget"
    assert verdict.min_perp_per_m == {3.0: math.inf}


def test_check_pr_rejects_empty_grid():
    with pytest.raises(ValueError):
        check_pr(_cross_subspace(), m_grid=())


def test_budget_and_subspace_validation():
    with pytest.raises(ValueError):
        SearchBudget(0, 10, 1)
    with pytest.raises(ValueError):
        SearchBudget(4, 10, 0)
    with pytest.raises(ValueError):
        Subspace(Ambient(3, "real", NormSpec(2.0)), [[1.0, 2.0]])
    with pytest.raises(ValueError):
        Subspace(
            Ambient(2, "real", NormSpec(2.0)),
            [[1.0, 2.0], [2.0, 4.0]],
        )

import itertools
from fractions import Fraction

import pytest

from wittmod.exactlinalg import SparseVector, rref_basis
from wittmod.glmodules import exterior, explicit, nilsson, symmetric
from wittmod.structure import (
    ClosureBudget,
    CyclicityReport,
    GradedSubspace,
    IsoResult,
    NoCertificate,
    ReducibilityCertificate,
    Window,
    certify_reducible_fundamental,
    closure_reach,
    derham_map,
    derham_source_config,
    derham_target_config,
    find_cyclic_budget,
    is_window_cyclic,
    iso_criterion,
    verify_derham_intertwines,
)
from wittmod.wittaction import (
    FSpaceConfig,
    FVector,
    act,
    act_component,
    basis_fvector,
    lattice_box,
    operator_box,
)

F = Fraction

ALPHA2 = (F(1, 2), F(1, 3))


def brute_force_word_dims(cfg, generator, radius, max_len):
    """Oracle: enumerate every operator word (no pruning) and span per weight."""
    ops = operator_box(cfg.d, radius)
    ((n0, v0),) = generator.components.items()
    collected = [(n0, v0)]
    frontier = [(n0, v0)]
    for _ in range(max_len):
        new = []
        for n, v in frontier:
            for op in ops:
                n2, w = act_component(cfg, op.u, op.r, n, v)
                if not w.is_zero():
                    new.append((n2, w))
        collected.extend(new)
        frontier = new
    per_weight = {}
    for n, v in collected:
        per_weight.setdefault(n, []).append(v)
    return {n: rref_basis(vs).rank for n, vs in per_weight.items()}


# ---------------------------------------------------------------------------
# closure engine


def test_closure_zero_budget_spans_generators_only():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    gen = basis_fvector(cfg, (1,), (0, 0))
    reach = closure_reach(cfg, [gen], ClosureBudget(1, 0))
    assert reach.dims() == {(0, 0): 1}


def test_closure_rejects_zero_and_mixed_generators():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    with pytest.raises(ValueError):
        closure_reach(cfg, [FVector.zero()], ClosureBudget(1, 1))
    mixed = basis_fvector(cfg, (1,), (0, 0)) + basis_fvector(cfg, (2,), (1, 0))
    with pytest.raises(ValueError):
        closure_reach(cfg, [mixed], ClosureBudget(1, 1))


def test_closure_matches_brute_force_oracle():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    gen = basis_fvector(cfg, (1,), (0, 0))
    reach = closure_reach(cfg, [gen], ClosureBudget(1, 2))
    oracle = brute_force_word_dims(cfg, gen, 1, 2)
    assert reach.dims() == oracle
    assert reach.rank_at((0, 0)) == 2


def test_closure_monotone_in_budget():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    gen = basis_fvector(cfg, (1,), (0, 0))
    dims_by_t = [
        closure_reach(cfg, [gen], ClosureBudget(1, t)).dims() for t in range(4)
    ]
    for small, big in zip(dims_by_t, dims_by_t[1:]):
        for n, rank in small.items():
            assert big.get(n, 0) >= rank
    r1 = closure_reach(cfg, [gen], ClosureBudget(1, 2)).dims()
    r2 = closure_reach(cfg, [gen], ClosureBudget(2, 2)).dims()
    for n, rank in r1.items():
        assert r2.get(n, 0) >= rank


def test_closure_self_consistency_one_more_word():
    # acting on anything in the T-closure lands inside the (T+1)-closure
    cfg = FSpaceConfig(2, ALPHA2, symmetric(2, 2, 2))
    gen = basis_fvector(cfg, (2, 0), (0, 0))
    small = closure_reach(cfg, [gen], ClosureBudget(1, 2))
    bigger = closure_reach(cfg, [gen], ClosureBudget(1, 3))
    for op in operator_box(2, 1):
        for n in small.weights():
            for row in small.basis_at(n).rows:
                n2, w = act_component(cfg, op.u, op.r, n, row)
                assert bigger.contains_component(n2, w)


def test_closure_deterministic_under_generator_order():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    g1 = basis_fvector(cfg, (1,), (0, 0))
    g2 = basis_fvector(cfg, (2,), (1, 0))
    a = closure_reach(cfg, [g1, g2], ClosureBudget(1, 2))
    b = closure_reach(cfg, [g2, g1], ClosureBudget(1, 2))
    assert a == b


# ---------------------------------------------------------------------------
# window cyclicity


def test_cyclic_nilsson_generator_one():
    cfg = FSpaceConfig(2, ALPHA2, nilsson(2, "1/2", 0))
    gen = basis_fvector(cfg, (0,), (0, 0))
    report = is_window_cyclic(cfg, gen, Window(1, 2), ClosureBudget(1, 8))
    assert report.covered
    assert report.sufficient is not None
    assert report.sufficient[1] <= 8


def test_cyclic_exterior_b0_from_e2():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    gen = basis_fvector(cfg, (2,), (0, 0))
    report = find_cyclic_budget(cfg, gen, Window(1), ClosureBudget(2, 6))
    assert report.covered
    assert report.sufficient[0] == 1


def test_reducible_case_not_covered_from_image_vector():
    src = derham_source_config(2, 1, ALPHA2)
    tgt = derham_target_config(src)
    gen = derham_map(src, basis_fvector(src, (), (0, 0)))
    report = is_window_cyclic(tgt, gen, Window(1), ClosureBudget(1, 6))
    assert not report.covered
    assert all(row["achieved"] <= 1 for row in report.table.values())
    assert report.shortfall()


def test_cyclic_requires_degree_bound_for_nilsson():
    cfg = FSpaceConfig(2, ALPHA2, nilsson(2, "1/2", 0))
    gen = basis_fvector(cfg, (0,), (0, 0))
    with pytest.raises(ValueError):
        is_window_cyclic(cfg, gen, Window(1), ClosureBudget(1, 2))


# ---------------------------------------------------------------------------
# wedge intertwiner


def test_derham_examples():
    src0 = derham_source_config(2, 1, (0, 0))
    x = basis_fvector(src0, (), (1, 0))
    assert derham_map(src0, x) == basis_fvector(
        derham_target_config(src0), (1,), (1, 0)
    )
    # alpha + n = 0 kills the wedge
    assert derham_map(src0, basis_fvector(src0, (), (0, 0))).is_zero()
    src_half = derham_source_config(2, 1, (F(1, 2), 0))
    image = derham_map(src_half, basis_fvector(src_half, (), (0, 0)))
    assert image == FVector.single((0, 0), SparseVector({(1,): F(1, 2)}))


def test_derham_is_weight_preserving():
    src = derham_source_config(3, 2, (F(1, 2), F(1, 3), F(1, 5)))
    x = basis_fvector(src, (2,), (1, -1, 0)) + basis_fvector(src, (3,), (0, 2, 1))
    image = derham_map(src, x)
    assert set(image.components) <= set(x.components)


def test_derham_squared_is_zero():
    for d, k in [(2, 1), (3, 1), (3, 2)]:
        alpha = tuple(F(1, p) for p in (2, 3, 5))[:d]
        src = derham_source_config(d, k, alpha)
        mid = derham_target_config(src)
        for key in itertools.combinations(range(1, d + 1), k - 1):
            for n in lattice_box(d, 1):
                once = derham_map(src, basis_fvector(src, key, n))
                assert derham_map(mid, once).is_zero()


def test_derham_intertwines():
    assert verify_derham_intertwines(2, 1, ALPHA2, Window(2), 2) is None
    assert (
        verify_derham_intertwines(3, 2, (0, F(1, 2), F(1, 3)), Window(1), 1) is None
    )


def test_derham_mutated_target_fails():
    hit = verify_derham_intertwines(2, 1, ALPHA2, Window(1), 1, target_b=2)
    assert hit is not None


def test_derham_source_validation():
    cfg = FSpaceConfig(2, ALPHA2, exterior(2, 1, 0))
    with pytest.raises(ValueError):
        derham_map(cfg, basis_fvector(cfg, (1,), (0, 0)))


# ---------------------------------------------------------------------------
# reducibility certificate


def test_certificate_d2():
    result = certify_reducible_fundamental(2, 1, 1, ALPHA2, Window(2), 1)
    assert isinstance(result, ReducibilityCertificate)
    assert result.full_rank == 2
    assert all(rank == 1 for rank in result.image_ranks.values())
    assert len(result.proper_weights) == len(result.image_ranks)
    assert result.invariance_sites_checked > 0


def test_certificate_d3_k2():
    alpha = (F(1, 2), F(1, 3), F(1, 5))
    result = certify_reducible_fundamental(3, 2, 2, alpha, Window(1), 1)
    assert isinstance(result, ReducibilityCertificate)
    assert all(rank < 3 for rank in result.image_ranks.values())


def test_no_certificate_wrong_b():
    result = certify_reducible_fundamental(2, 1, 0, ALPHA2, Window(2), 1)
    assert isinstance(result, NoCertificate)
    assert result.reason == "invariance fails"
    assert result.failing_site is not None


def test_no_certificate_wrong_b_d3():
    alpha = (F(1, 2), F(1, 3), F(1, 5))
    for k, b in [(1, 2), (2, 5)]:
        result = certify_reducible_fundamental(3, k, b, alpha, Window(1), 1)
        assert isinstance(result, NoCertificate)
        assert result.reason == "invariance fails"


# ---------------------------------------------------------------------------
# isomorphism criterion


def cfg_of(alpha, module):
    return FSpaceConfig(len(alpha), tuple(alpha), module)


def test_iso_examples_from_truth_table():
    left = cfg_of((F(1, 2), 0), exterior(2, 1, 1))
    right = cfg_of((F(3, 2), -1), exterior(2, 1, 1))
    assert iso_criterion(left, right).isomorphic
    right2 = cfg_of((F(1, 3), 0), exterior(2, 1, 1))
    out = iso_criterion(left, right2)
    assert not out.isomorphic and not out.alpha_shift_integral
    right3 = cfg_of((F(1, 2), 0), exterior(2, 1, 2))
    out = iso_criterion(left, right3)
    assert not out.isomorphic and not out.b_equal and out.fibers_isomorphic


def test_iso_reflexive_symmetric():
    configs = [
        cfg_of(ALPHA2, exterior(2, 1, 1)),
        cfg_of(ALPHA2, symmetric(2, 2, 2)),
        cfg_of(ALPHA2, nilsson(2, "1/2", 0)),
        cfg_of((0, F(1, 7)), exterior(2, 2, 0)),
    ]
    for a in configs:
        assert iso_criterion(a, a).isomorphic
    for a, b in itertools.combinations(configs, 2):
        assert iso_criterion(a, b).isomorphic == iso_criterion(b, a).isomorphic


def test_iso_catalog_identifications():
    # first exterior and first symmetric powers are the natural module
    a = cfg_of(ALPHA2, exterior(2, 1, 1))
    b = cfg_of(ALPHA2, symmetric(2, 1, 1))
    assert iso_criterion(a, b).isomorphic
    # top exterior power and zeroth symmetric power are trivial
    c = cfg_of(ALPHA2, exterior(2, 2, 0))
    d = cfg_of(ALPHA2, symmetric(2, 0, 0))
    assert iso_criterion(c, d).isomorphic
    # for d = 2 the shift fibers at beta and -1-beta have identical operators
    n1 = cfg_of(ALPHA2, nilsson(2, "1/2", 0))
    n2 = cfg_of(ALPHA2, nilsson(2, "-3/2", 0))
    assert iso_criterion(n1, n2).isomorphic
    n3 = cfg_of(ALPHA2, nilsson(2, "1/3", 0))
    assert not iso_criterion(n1, n3).isomorphic


def test_iso_nilsson_beta_matters_for_higher_d():
    alpha = (F(1, 2), F(1, 3), F(1, 5))
    a = cfg_of(alpha, nilsson(3, "1/2", 0))
    b = cfg_of(alpha, nilsson(3, "-3/2", 0))
    assert not iso_criterion(a, b).isomorphic


NATURAL_2 = {
    (1, 1): [[1, 0], [0, 0]],
    (1, 2): [[0, 1], [0, 0]],
    (2, 1): [[0, 0], [1, 0]],
    (2, 2): [[0, 0], [0, 1]],
}


def test_iso_explicit_vs_catalog():
    a = cfg_of(ALPHA2, explicit(2, 1, NATURAL_2))
    b = cfg_of(ALPHA2, exterior(2, 1, 1))
    assert iso_criterion(a, b).isomorphic


def test_iso_explicit_conjugated_natural():
    # conjugate the natural action by g = [[1,1],[0,1]]
    conjugated = {
        (1, 1): [[1, 1], [0, 0]],
        (1, 2): [[0, 1], [0, 0]],
        (2, 1): [[-1, -1], [1, 1]],
        (2, 2): [[0, -1], [0, 1]],
    }
    a = cfg_of(ALPHA2, explicit(2, 1, conjugated))
    b = cfg_of(ALPHA2, explicit(2, 1, NATURAL_2))
    assert iso_criterion(a, b).isomorphic


def test_iso_explicit_trivial_pair_not_natural():
    trivial2 = {
        (1, 1): [["1/2", 0], [0, "1/2"]],
        (1, 2): [[0, 0], [0, 0]],
        (2, 1): [[0, 0], [0, 0]],
        (2, 2): [["1/2", 0], [0, "1/2"]],
    }
    a = cfg_of(ALPHA2, explicit(2, 1, trivial2))
    b = cfg_of(ALPHA2, exterior(2, 1, 1))
    out = iso_criterion(a, b)
    assert not out.isomorphic and not out.fibers_isomorphic


def test_iso_explicit_dimension_cap():
    dim = 9
    eye = [["1/2" if r == c else 0 for c in range(dim)] for r in range(dim)]
    zero = [[0] * dim for _ in range(dim)]
    big = {(1, 1): eye, (1, 2): zero, (2, 1): zero, (2, 2): eye}
    a = cfg_of(ALPHA2, explicit(2, 1, big))
    with pytest.raises(ValueError):
        iso_criterion(a, a)


def test_iso_rejects_mixed_d():
    a = cfg_of(ALPHA2, exterior(2, 1, 1))
    b = cfg_of((0, 0, 0), exterior(3, 1, 1))
    with pytest.raises(ValueError):
        iso_criterion(a, b)

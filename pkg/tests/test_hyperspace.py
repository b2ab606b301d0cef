import math

import numpy as np
import pytest

import oracles
from conftest import alternating_sequence, converging_sequence, reciprocal_sequence
from hausdorff_hyperspace import (
    EmptyLimit,
    HypothesisViolated,
    PointSet,
    PrefixExhausted,
    SetSequence,
    convergence_trace,
    hausdorff,
    is_cauchy,
    limit_characterization_agreement,
    limit_set,
    liminf_set,
    limsup_set,
    main_lemma_check,
    tail_resolution,
    tail_union,
    witness_chain,
)
from hausdorff_hyperspace.hyperspace import check_count, tail_sups

ZERO = [[0.0]]


def constant_sequence(A, N=40):
    return SetSequence(tuple(PointSet(A) for _ in range(N)))


# -- basics -------------------------------------------------------------------


def test_sequence_validation():
    with pytest.raises(ValueError):
        SetSequence((PointSet([[0.0]]),))
    with pytest.raises(ValueError):
        SetSequence((PointSet([[0.0]]), PointSet([[0.0, 1.0]])))


def test_check_count():
    assert check_count(reciprocal_sequence(200)) == 100
    assert check_count(reciprocal_sequence(3)) == 1
    assert check_count(reciprocal_sequence(10), 0.25) == 2


def test_tail_union_matches_brute_force(rng):
    seq = SetSequence(tuple(PointSet(rng.integers(0, 5, size=(6, 2)).astype(float)) for _ in range(12)))
    raw = [[tuple(p) for p in s] for s in seq]
    for n in range(1, 13):
        assert tail_union(seq, n).as_set() == set(oracles.union(*raw[n - 1:]))
    with pytest.raises(IndexError):
        tail_union(seq, 13)


def test_tail_union_examples():
    seq = reciprocal_sequence(5)
    assert tail_union(seq, 3) == PointSet([[1 / 3], [1 / 4], [1 / 5]])
    assert tail_union(seq, 5) is seq.at(5)


def test_tail_sups_by_hand(rng):
    seq, _ = converging_sequence(rng, N=15)
    H = seq.hausdorff_matrix
    T = tail_sups(seq)
    for m in range(15):
        block = H[m:, m:]
        assert T[m] == (block.max() if block.size else 0.0)


# -- Cauchy analysis ----------------------------------------------------------


def test_reciprocal_sequence_is_cauchy():
    rep = is_cauchy(reciprocal_sequence(50), 0.1)
    # rho_H(A_i, A_j) = |1/i - 1/j| < 1/(m+1) for i, j > m
    assert rep.is_cauchy and rep.m_star == 8
    assert rep.tail_sup < 0.1


def test_constant_sequence_is_cauchy_from_the_start():
    rep = is_cauchy(constant_sequence([[1.0, 2.0]]), 1e-9)
    assert rep.is_cauchy and rep.m_star == 0 and rep.tail_sup == 0.0


def test_alternating_sequence_is_not_cauchy():
    rep = is_cauchy(alternating_sequence(), 1.0)
    assert not rep.is_cauchy and rep.m_star is None


def test_integer_sequence_is_not_cauchy():
    seq = SetSequence(tuple(PointSet([[float(n)]]) for n in range(1, 51)))
    assert not is_cauchy(seq, 0.5).is_cauchy


def test_cauchy_needs_positive_epsilon():
    with pytest.raises(ValueError):
        is_cauchy(reciprocal_sequence(10), 0.0)


# -- limit sets ---------------------------------------------------------------


def test_reciprocal_limit_is_the_origin():
    lim = limit_set(reciprocal_sequence(200), 0.02, [[0.0], [0.05], [0.1]])
    assert lim.points == PointSet(ZERO)
    assert lim.is_cauchy


def test_constant_sequence_limit_is_the_set():
    A = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    seq = constant_sequence(A)
    for eps in (0.0, 0.01, 0.3):
        assert limit_set(seq, eps).points == PointSet(A)
    # finer structure than 2*eps is merged, never lost by more than 2*eps
    cloud = np.random.default_rng(1).uniform(size=(200, 2))
    lim = limit_set(constant_sequence(cloud, 10), 0.05)
    assert hausdorff(lim.points, PointSet(cloud)) <= 0.1
    assert lim.points.issubset(PointSet(cloud))


def test_alternating_converging_to_two_points():
    # A_n = {0} for odd n and {0, 1 + 1/n} for even n; the limit is {0, 1}
    sets = tuple(PointSet([[0.0]] if n % 2 else [[0.0], [1.0 + 1.0 / n]]) for n in range(1, 201))
    seq = SetSequence(sets)
    lim = limit_set(seq, 0.05, [[1.0]])
    assert lim.points == PointSet([[0.0], [1.0]])


def test_limit_set_against_literal_tail_closure(rng):
    sets = tuple(PointSet(np.round(rng.uniform(0, 1, size=(4, 1)) / n + (n % 3 == 0), 3))
                 for n in range(1, 41))
    seq = SetSequence(sets)
    eps = 0.08
    cand = [tuple(p) for p in np.linspace(-0.2, 2.2, 49).reshape(-1, 1)]
    lim = limit_set(seq, eps, cand)
    raw = [[tuple(p) for p in s] for s in seq]
    pool = oracles.union(cand, *raw)
    keep = oracles.tail_closure_limit(raw, pool, eps, check_count(seq))
    assert lim.qualifying == len(keep)
    reps = [tuple(p) for p in lim.points]
    assert set(reps) <= set(keep)
    # every qualifying candidate is represented within 2 eps
    assert all(oracles.point_set(q, reps) <= 2 * eps for q in keep)


def test_limit_set_is_order_independent(rng):
    seq, _ = converging_sequence(rng, N=30)
    shuffled = SetSequence(tuple(PointSet(s.points[rng.permutation(len(s))]) for s in seq))
    assert limit_set(seq, 0.05).points.points.tolist() == limit_set(shuffled, 0.05).points.points.tolist()


def test_empty_limit_raises():
    seq = reciprocal_sequence(50)
    with pytest.raises(EmptyLimit):
        limit_set(seq, 1e-3, [[5.0]], include_sets=False)


def test_convergence_trace_columns():
    seq = reciprocal_sequence(30)
    rows = convergence_trace(seq, PointSet(ZERO))
    assert [r.n for r in rows] == list(range(1, 31))
    assert all(r.u_limit_to_set == r.u_set_to_limit == r.rho_h == 1.0 / r.n for r in rows)
    rows = convergence_trace(constant_sequence([[2.0, 1.0]]), PointSet([[2.0, 1.0]]))
    assert all(r.rho_h == 0.0 for r in rows)


def test_convergence_trace_tail_is_small(rng):
    for _ in range(10):
        seq, _ = converging_sequence(rng, N=100)
        eps = 0.05
        lim = limit_set(seq, eps)
        rows = convergence_trace(seq, lim)
        assert max(r.rho_h for r in rows[75:]) <= 2 * eps


# -- lower and upper limits -----------------------------------------------------


def test_constant_sequence_lower_and_upper_limits():
    A = [[0.0], [1.0], [3.0]]
    seq = constant_sequence(A)
    assert liminf_set(seq, 0.1) == PointSet(A)
    assert limsup_set(seq, 0.1) == PointSet(A)


def test_reciprocal_lower_limit_contains_origin():
    lo = liminf_set(reciprocal_sequence(200), 0.02, [[0.0]])
    assert [0.0] in lo
    assert hausdorff(lo, PointSet(ZERO)) <= 0.04


def test_alternating_lower_and_upper_limits():
    seq = alternating_sequence()
    with pytest.raises(EmptyLimit):
        liminf_set(seq, 0.1)
    hi = limsup_set(seq, 0.1)
    assert hi == PointSet([[0.0], [5.0], [6.0]])


def test_lower_limit_inside_upper_limit(rng):
    for _ in range(10):
        seq, _ = converging_sequence(rng, N=40, dim=1)
        eps = max(0.05, tail_resolution(seq))
        lo, hi = liminf_set(seq, eps), limsup_set(seq, eps)
        assert lo.issubset(hi)


# -- Main Lemma -----------------------------------------------------------------


def test_lemma_on_reciprocals():
    seq = reciprocal_sequence(200)
    lim = limit_set(seq, 0.02, [[0.0]])
    v = main_lemma_check(seq, [1.0], 1.0, 0, lim, tol=lim.epsilon + 1e-9)
    assert v.distance == 1.0
    assert v.holds
    assert v.nearest == (0.0,)


def test_lemma_point_in_every_set():
    seq = constant_sequence([[0.0, 0.0], [1.0, 2.0]])
    for eps in (1e-6, 1.0):
        v = main_lemma_check(seq, [1.0, 2.0], eps, 3, limit_set(seq, 0.01))
        assert v.distance == 0.0 and v.holds


def test_lemma_reports_first_violating_index():
    seq = reciprocal_sequence(50)
    with pytest.raises(HypothesisViolated) as exc:
        main_lemma_check(seq, [2.0], 1.0, 0, PointSet(ZERO))
    assert exc.value.index == 1
    with pytest.raises(HypothesisViolated) as exc:
        main_lemma_check(seq, [-0.1], 0.11, 0, PointSet(ZERO))
    assert exc.value.index == 1


def test_lemma_random_cauchy(rng):
    for _ in range(20):
        seq, L = converging_sequence(rng, N=100)
        lim = limit_set(seq, 0.05)
        x = seq.at(100).points[0] + rng.normal(size=2) * 0.05
        eps = 0.5
        v = main_lemma_check(seq, x, eps, 60, lim)
        assert v.holds and v.distance <= v.bound == eps + lim.epsilon + 1e-9


# -- witness chain ----------------------------------------------------------------


@pytest.mark.parametrize("b", [1.5, 2.0, 4.0])
def test_witness_chain_on_reciprocals(b):
    seq = reciprocal_sequence(200)
    ch = witness_chain(seq, [1.0], 1.0, 0, b)
    assert ch.violations() == []
    zs = [p[0] for p in ch.points]
    assert zs == [1.0 / n for n in ch.indices]
    assert oracles.dist((1.0,), (zs[0],)) < 1.0
    for i, (a, c) in enumerate(zip(zs, zs[1:]), start=1):
        assert abs(a - c) < 1.0 / b ** i
    assert math.fsum(abs(a - c) for a, c in zip(zs, zs[1:])) <= 1.0 / (b - 1)
    assert abs(1.0 - zs[-1]) < (b + 1) / (b - 1)


def test_witness_chain_on_constant_sequence():
    seq = constant_sequence([[0.0, 0.0], [3.0, 1.0]], N=20)
    ch = witness_chain(seq, [3.0, 1.0], 0.5, 2)
    assert ch.indices == tuple(range(3, 16))
    assert set(ch.points) == {(3.0, 1.0)}
    assert ch.gaps == (0.0,) * 12 and ch.first_gap == 0.0


def test_witness_chain_prefix_exhausted():
    # x = 0 is in every set, but sets keep jumping by 1 so no index is admissible
    sets = tuple(PointSet([[0.0], [2.0 + n % 2]]) for n in range(1, 41))
    with pytest.raises(PrefixExhausted) as exc:
        witness_chain(SetSequence(sets), [0.0], 1.0, 0)
    assert exc.value.index == 1
    with pytest.raises(PrefixExhausted):
        witness_chain(reciprocal_sequence(40), [1.0], 1.0, 0, max_points=50)


def test_witness_chain_rejects_bad_ratio():
    with pytest.raises(ValueError):
        witness_chain(reciprocal_sequence(20), [1.0], 1.0, 0, b=1.0)


# -- agreement ----------------------------------------------------------------


def test_agreement_on_simple_sequences():
    A = [[0.0, 0.0], [1.0, 1.0]]
    rec = limit_characterization_agreement(constant_sequence(A), 0.01)
    assert rec.limit == rec.liminf == rec.limsup == PointSet(A)
    assert set(rec.distances.values()) == {0.0}
    rec = limit_characterization_agreement(reciprocal_sequence(200), 0.02, [[0.0]])
    assert rec.agree and rec.limit == PointSet(ZERO)
    assert [0.0] in rec.liminf and [0.0] in rec.limsup


def test_agreement_on_cauchy_sequences(rng):
    for _ in range(8):
        seq, _ = converging_sequence(rng, N=60)
        rec = limit_characterization_agreement(seq, max(0.05, tail_resolution(seq)))
        assert rec.agree and rec.upper_limit_identity and rec.is_cauchy


def test_lower_limit_can_be_empty_below_the_resolution():
    # still spread out at n = N/2: lower limit empty, tail-closure limit fine
    seq = SetSequence(tuple(PointSet([[(-1) ** n * 4.0 / n]]) for n in range(1, 41)))
    assert tail_resolution(seq) > 0.05
    rec = limit_characterization_agreement(seq, 0.05, [[0.0]])
    assert rec.liminf is None
    # the tail closest to 0 is 4/40, so 0 itself fails; a representative covers it
    assert hausdorff(rec.limit, PointSet(ZERO)) > 0.0
    assert min(abs(v) for v in rec.limit.points.ravel()) <= 2 * 0.05


def test_agreement_on_alternating_sequence():
    rec = limit_characterization_agreement(alternating_sequence(), 0.1)
    assert not rec.is_cauchy
    assert rec.liminf is None and rec.distances["limit_liminf"] == math.inf
    assert rec.upper_limit_identity and not rec.agree
    d = rec.to_dict()
    assert d["liminf"] is None and d["distances"]["limit_liminf"] is None

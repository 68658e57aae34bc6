import json
from dataclasses import replace
from math import comb

import numpy as np
import pytest

from secantlines.formulas import (
    dim_IZ_theory,
    dim_sigma2_theory,
    hilbert_function_theory,
)
from secantlines.gfpoly import PrimeField, derive_seed, random_form
from secantlines.oracle import (
    CHECK_RESIDUAL,
    CHECK_RESIDUAL_PLUS_POINTS,
    NotApplicableError,
    OracleReport,
    VERDICT_ABOVE,
    VERDICT_BELOW,
    VERDICT_MATCH,
    _verdict,
    nullspace,
    oracle_dim_IF,
    oracle_dim_IZ,
    oracle_dim_sigma2,
    oracle_hilbert,
    rank,
    secant_trials,
    specialization_check,
    tangent_slice,
    verify,
)
from secantlines.partitions import Partition, derived

P = 1_000_003
SEED = 1234


class TestRank:
    def test_identity(self):
        assert rank(np.eye(3, dtype=np.int64), P) == 3

    def test_zero(self):
        assert rank(np.zeros((4, 5), dtype=np.int64), P) == 0

    def test_outer_product(self):
        u = np.array([1, 2, 3, 4], dtype=np.int64)
        v = np.array([5, 6, 7, 8, 9], dtype=np.int64)
        assert rank(np.outer(u, v), P) == 1

    def test_empty(self):
        assert rank(np.zeros((0, 6), dtype=np.int64), P) == 0

    def test_rank_depends_on_modulus(self):
        # determinant is 7: singular mod 7, invertible mod 5
        a = [[3, 1], [2, 3]]
        assert rank(a, 7) == 1
        assert rank(a, 5) == 2

    def test_rejects_non_matrix(self):
        with pytest.raises(ValueError):
            rank(np.array([1, 2, 3]), P)


class TestNullspace:
    def test_kernel_is_annihilated(self):
        modulus = 1009
        rng = np.random.default_rng(0)
        a = rng.integers(0, modulus, size=(4, 7)).astype(np.int64)
        basis = nullspace(a, modulus)
        assert basis.shape[0] == 7 - rank(a, modulus)
        assert not ((a @ basis.T) % modulus).any()

    def test_empty_matrix_kernel_is_everything(self):
        basis = nullspace(np.zeros((0, 4), dtype=np.int64), P)
        assert basis.shape == (4, 4)
        assert rank(basis, P) == 4


class TestTangentSlice:
    @pytest.mark.parametrize(
        "parts, j, shape",
        [
            ([1, 1], 2, (6, 6)),
            ([1, 1, 1], 1, (0, 3)),
            ([2, 1], 3, (9, 10)),
        ],
    )
    def test_shapes(self, parts, j, shape):
        partition = Partition(parts)
        field = PrimeField(P)
        factors = [
            random_form(field, di, derive_seed(SEED, i))
            for i, di in enumerate(partition.parts)
        ]
        basis = tangent_slice(factors, j)
        assert (basis.row_count, basis.col_count) == shape
        assert basis.rows.shape == shape


class TestSliceDimensions:
    @pytest.mark.parametrize(
        "parts, j, want",
        [([1, 1], 2, 5), ([2, 1], 3, 8), ([1, 1, 1], 3, 7)],
    )
    def test_examples(self, parts, j, want):
        assert oracle_dim_IF(Partition(parts), j, SEED, prime=P) == want

    def test_hilbert_examples(self):
        assert oracle_hilbert(Partition([1, 1, 1]), 1, SEED, prime=P) == 3
        assert oracle_hilbert(Partition([2, 1]), 0, SEED, prime=P) == 1

    @pytest.mark.parametrize("parts", [[2, 1], [2, 2, 1], [3, 2]])
    def test_hilbert_stabilizes_at_point_count(self, parts):
        p = Partition(parts)
        q = derived(p)
        assert oracle_hilbert(p, q.d, SEED, prime=P) == q.D

    @pytest.mark.parametrize("parts", [[3, 2], [2, 2, 1], [1, 1, 1, 1]])
    def test_hilbert_matches_theory_all_degrees(self, parts):
        p = Partition(parts)
        for j in range(p.d + 1):
            assert oracle_hilbert(p, j, SEED, prime=P) == hilbert_function_theory(p, j)

    @pytest.mark.parametrize("parts", [[3, 2], [2, 2, 1], [2, 1, 1, 1]])
    def test_hilbert_monotone_for_fixed_factors(self, parts):
        p = Partition(parts)
        q = derived(p)
        values = [oracle_hilbert(p, j, SEED, prime=P) for j in range(q.d + 1)]
        assert values == sorted(values)
        for j, h in enumerate(values):
            assert h <= min(comb(j + 2, 2), q.D)


class TestSecantMeasurements:
    @pytest.mark.parametrize(
        "parts, want",
        [([1, 1, 1], 9), ([5, 1, 1, 1, 1, 1], 60), ([2, 1], 9)],
    )
    def test_sigma2_examples(self, parts, want):
        assert oracle_dim_sigma2(Partition(parts), 3, SEED, prime=P) == want

    @pytest.mark.parametrize(
        "parts, want",
        [
            ([2, 1, 1, 1], 3),
            ([3, 2, 1, 1], 2),
            ([4, 3, 3], 0),
            ([1, 1, 1], 4),
            ([2, 1], 6),
        ],
    )
    def test_intersection_examples(self, parts, want):
        assert oracle_dim_IZ(Partition(parts), 3, SEED, prime=P) == want

    def test_trial_count_validation(self):
        with pytest.raises(ValueError):
            oracle_dim_sigma2(Partition([2, 1]), 0, SEED, prime=P)

    @pytest.mark.parametrize("parts", [[2, 1], [2, 2, 1], [3, 1, 1]])
    def test_grassmann_identity_via_orthogonal_complements(self, parts):
        # Independent route: dim(U cap V) = ncols - rank([ker(A); ker(B)]).
        partition = Partition(parts)
        field = PrimeField(P)
        d = partition.d
        factors_f = [
            random_form(field, di, derive_seed(77, 0, i))
            for i, di in enumerate(partition.parts)
        ]
        factors_g = [
            random_form(field, di, derive_seed(77, 1, i))
            for i, di in enumerate(partition.parts)
        ]
        a = tangent_slice(factors_f, d).rows
        b = tangent_slice(factors_g, d).rows
        rank_a, rank_b = rank(a, P), rank(b, P)
        rank_joint = rank(np.vstack([a, b]), P)
        complements = np.vstack([nullspace(a, P), nullspace(b, P)])
        dim_intersection = a.shape[1] - rank(complements, P)
        assert rank_joint == rank_a + rank_b - dim_intersection
        assert dim_intersection == dim_IZ_theory(partition)

    def test_trials_record_all_ranks(self):
        trials = secant_trials(Partition([2, 2, 1]), 3, SEED, prime=P)
        assert len(trials) == 3
        for t in trials:
            assert t.dim_sigma2 == t.rank_joint - 1
            assert t.dim_IZ == t.dim_IF + t.dim_IG - t.rank_joint


class TestSpecializationCheck:
    def test_both_bounds_when_near_balanced(self):
        report = specialization_check(Partition([3, 2, 1, 1]), 1, SEED, prime=P)
        assert report.reduced == Partition([2, 2, 1, 1])
        assert report.dim_IZ == 2 and report.dim_IZ_reduced == 2
        kinds = {c.kind: c for c in report.checks}
        assert set(kinds) == {CHECK_RESIDUAL, CHECK_RESIDUAL_PLUS_POINTS}
        assert kinds[CHECK_RESIDUAL_PLUS_POINTS].bound == 2  # d1 - s + 1 = 0
        assert report.passed

    def test_residual_only(self):
        report = specialization_check(Partition([2, 2, 2]), 3, SEED, prime=P)
        assert [c.kind for c in report.checks] == [CHECK_RESIDUAL]
        assert report.passed

    def test_unit_degree_not_applicable(self):
        with pytest.raises(NotApplicableError):
            specialization_check(Partition([2, 1, 1]), 2, SEED, prime=P)

    def test_balanced_pair_not_applicable_off_lead(self):
        # [2,2] at e=2 has d_e = s_e, so neither bound applies
        with pytest.raises(NotApplicableError):
            specialization_check(Partition([2, 2]), 2, SEED, prime=P)

    def test_balanced_pair_lead_factor_applies(self):
        report = specialization_check(Partition([2, 2]), 1, SEED, prime=P)
        assert [c.kind for c in report.checks] == [CHECK_RESIDUAL_PLUS_POINTS]
        assert report.passed

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            specialization_check(Partition([2, 2]), 5, SEED, prime=P)


class TestVerify:
    @pytest.mark.parametrize(
        "parts, dim_IZ",
        [([2, 2, 1, 1], 2), ([6, 5, 2], 1)],
    )
    def test_match_examples(self, parts, dim_IZ):
        report = verify(Partition(parts), prime=P, trials=3, base_seed=SEED)
        assert report.verdict == VERDICT_MATCH
        assert report.measured["dim_IZ"] == dim_IZ

    def test_star_configuration_matches(self):
        report = verify(Partition([1, 1, 1, 1, 1]), prime=P, trials=3, base_seed=SEED)
        assert report.verdict == VERDICT_MATCH

    def test_defective_case_matches(self):
        report = verify(Partition([9, 7, 2]), prime=P, trials=3, base_seed=SEED)
        assert report.verdict == VERDICT_MATCH
        assert report.predicted["dim_sigma2"] == 188
        assert report.measured["dim_sigma2"] == 188

    def test_report_metadata_and_round_trip(self):
        p = Partition([2, 2, 1])
        report = verify(p, prime=P, trials=2, base_seed=SEED)
        assert report.trials == 2
        assert len(report.seeds) == 2
        assert len(report.trial_dim_sigma2) == 2
        assert all(
            t <= report.predicted["dim_sigma2"] for t in report.trial_dim_sigma2
        )
        assert report.predicted["dim_sigma2"] == dim_sigma2_theory(p)
        payload = json.loads(json.dumps(report.to_dict()))
        assert OracleReport.from_dict(payload) == report


class TestVerdict:
    BASE_MEASURED = {
        "dim_IF_d": 8,
        "hilbert": [1, 3, 3],
        "dim_sigma2": 9,
        "dim_IZ": 4,
    }

    def test_match(self):
        assert _verdict(self.BASE_MEASURED, dict(self.BASE_MEASURED)) == VERDICT_MATCH

    def test_below_when_rank_short(self):
        measured = dict(self.BASE_MEASURED, dim_sigma2=8)
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_BELOW

    def test_above_when_rank_exceeds(self):
        measured = dict(self.BASE_MEASURED, dim_sigma2=10)
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_ABOVE

    def test_above_when_hilbert_drops(self):
        measured = dict(self.BASE_MEASURED, hilbert=[1, 2, 3])
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_ABOVE

    def test_below_when_intersection_grows(self):
        measured = dict(self.BASE_MEASURED, dim_IZ=5)
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_BELOW

    def test_above_when_intersection_shrinks(self):
        measured = dict(self.BASE_MEASURED, dim_IZ=3)
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_ABOVE

    def test_above_wins_over_below(self):
        measured = dict(self.BASE_MEASURED, dim_sigma2=10, dim_IZ=5)
        assert _verdict(measured, self.BASE_MEASURED) == VERDICT_ABOVE

    def test_replace_keeps_dataclass_frozen(self):
        report = verify(Partition([2, 1]), prime=P, trials=1, base_seed=SEED)
        doctored = replace(report, verdict=VERDICT_BELOW)
        assert doctored.verdict == VERDICT_BELOW and report.verdict == VERDICT_MATCH

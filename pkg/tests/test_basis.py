import pytest
from mpmath import mp

from dft_hermite import (DegenerateStepError, PrecisionContext,
                         SeedFamily, SeedFormulaError, apply_L, build_basis,
                         compare_bases, dft, dot, eigenspace_dims,
                         gram_schmidt_reference, norm, recurrence_step,
                         seed_vectors, verify_basis, width)
from dft_hermite.basis import k_threshold, width_bound
from dft_hermite.core import norm_diff


def table1_row(n_dim):
    """Eigenspace dimensions straight from the published table rows."""
    L, r = divmod(n_dim, 4)
    return {
        0: (L + 1, L, L, L - 1),
        1: (L + 1, L, L, L),
        2: (L + 1, L, L + 1, L),
        3: (L + 1, L + 1, L + 1, L),
    }[r]


class TestEigenspaceDims:
    @pytest.mark.parametrize("n_dim, expected", [
        (8, (3, 2, 2, 1)),
        (5, (2, 1, 1, 1)),
        (6, (2, 1, 2, 1)),
        (4, (2, 1, 1, 0)),
    ])
    def test_examples(self, n_dim, expected):
        assert eigenspace_dims(n_dim).as_tuple() == expected

    @pytest.mark.parametrize("n_dim", range(2, 66))
    def test_matches_table_rows(self, n_dim):
        dims = eigenspace_dims(n_dim)
        assert dims.as_tuple() == table1_row(n_dim)
        assert sum(dims.as_tuple()) == n_dim

    def test_thresholds(self):
        assert [k_threshold(m, 8) for m in range(4)] == [2, 2, 3, 3]
        assert [k_threshold(m, 7) for m in range(4)] == [2, 2, 2, 3]


@pytest.fixture(scope="module")
def seeds8():
    ctx = PrecisionContext(digits=100)
    return seed_vectors(SeedFamily(8, ctx)), ctx


@pytest.fixture(scope="module")
def basis16():
    ctx = PrecisionContext(digits=120)
    return build_basis(16, ctx), ctx


class TestSeedVectors:
    def test_unit_norm(self, seeds8):
        t, ctx = seeds8
        with ctx.workdps():
            for v in t:
                assert abs(norm(v) - 1) <= mp.mpf(10) ** -(100 - 20)

    def test_eigen_equations(self, seeds8):
        t, ctx = seeds8
        for m, vec in enumerate(t):
            fv = dft(vec, ctx)
            lam = mp.mpc(0, -1) ** m
            assert norm_diff(fv, vec * lam) <= mp.mpf(10) ** -80

    def test_widths_are_thresholds(self, seeds8):
        t, ctx = seeds8
        for m, vec in enumerate(t):
            assert width(vec, ctx) == k_threshold(m, 8)

    def test_width_t2_n7(self):
        ctx = PrecisionContext(digits=100)
        t = seed_vectors(SeedFamily(7, ctx))
        assert width(t[2], ctx) == k_threshold(2, 7) == 2

    @pytest.mark.parametrize("n_dim", [2, 3, 4])
    def test_small_n_rejected(self, n_dim):
        ctx = PrecisionContext(digits=64)
        with pytest.raises(SeedFormulaError):
            seed_vectors(SeedFamily(n_dim, ctx))


class TestRecurrenceStep:
    def test_a0_near_four_n64(self):
        ctx = PrecisionContext(digits=100)
        t0 = seed_vectors(SeedFamily(64, ctx))[0]
        step = recurrence_step(t0, None, None, ctx)
        assert abs(step.a - 4) < mp.mpf("0.5")
        assert step.b > 0

    def test_b_squared_cross_check_n16(self):
        # independent check of b_0^2 + a_0^2 = ||L T_0||^2 (b_{-4} = 0)
        ctx = PrecisionContext(digits=100)
        t0 = seed_vectors(SeedFamily(16, ctx))[0]
        step = recurrence_step(t0, None, None, ctx)
        with ctx.workdps():
            lt = apply_L(t0)
            lhs = step.b ** 2 + step.a ** 2
            rhs = dot(lt, lt)
            assert abs(lhs - rhs) <= mp.mpf(10) ** -90
        assert step.b_sq_discrepancy <= mp.mpf(10) ** -90
        assert abs(step.a - 4) < mp.mpf("0.5")

    def test_next_vector_is_unit_and_orthogonal(self):
        ctx = PrecisionContext(digits=100)
        t0 = seed_vectors(SeedFamily(12, ctx))[0]
        step = recurrence_step(t0, None, None, ctx)
        with ctx.workdps():
            assert abs(norm(step.vector) - 1) <= mp.mpf(10) ** -90
            assert abs(dot(step.vector, t0)) <= mp.mpf(10) ** -90

    def test_exhausted_column_degenerates(self):
        # N=5 has dim(E_0) = 2: stepping beyond T_4 must fail loudly
        ctx = PrecisionContext(digits=64)
        fam = SeedFamily(5, ctx)
        t0 = seed_vectors(fam)[0]
        step = recurrence_step(t0, None, None, ctx, index=0)
        with pytest.raises(DegenerateStepError):
            recurrence_step(step.vector, t0, step.b, ctx, index=4)


class TestBuildBasis:
    def test_multiplicities_n8(self):
        basis = build_basis(8, PrecisionContext(digits=100))
        counts = [basis.eigen_exponents.count(m) for m in range(4)]
        assert tuple(counts) == (3, 2, 2, 1)

    def test_ghost_vector_even_n(self):
        basis = build_basis(6, PrecisionContext(digits=100))
        assert basis.ghost_used
        # lambda_5 = (-i)^6 = -1: the last vector lands in E_2
        assert basis.eigen_exponents[5] == 2
        assert basis.eigenvalue(5) == -1

    def test_no_ghost_for_odd_n(self):
        basis = build_basis(7, PrecisionContext(digits=100))
        assert not basis.ghost_used
        assert basis.eigen_exponents[6] == 2  # (-i)^6

    def test_width_of_last_vector_n17(self):
        ctx = PrecisionContext(digits=120)
        basis = build_basis(17, ctx)
        assert width(basis.vectors[16], ctx) == width_bound(16, 17) == 8

    def test_verification_n16(self, basis16):
        basis, ctx = basis16
        rep = verify_basis(basis, ctx)
        assert rep.max_ortho_residual <= mp.mpf(10) ** -60
        assert rep.max_eigen_residual <= mp.mpf(10) ** -60
        assert not rep.width_violations
        assert rep.dims_match
        assert rep.column_widths_ok
        assert rep.passed()

    def test_recurrence_symmetry(self, basis16):
        basis, ctx = basis16
        rep = verify_basis(basis, ctx)
        assert rep.recurrence_symmetry_residual <= mp.mpf(10) ** -90

    @pytest.mark.parametrize("n_dim", range(5, 21))
    def test_widths_exact_sweep(self, n_dim):
        ctx = PrecisionContext(digits=100)
        basis = build_basis(n_dim, ctx)
        for n, vec in enumerate(basis.vectors):
            assert width(vec, ctx) == width_bound(n, n_dim)

    @pytest.mark.parametrize("n_dim", [2, 3, 4])
    def test_small_n_falls_back(self, n_dim):
        ctx = PrecisionContext(digits=80)
        basis = build_basis(n_dim, ctx)
        assert basis.construction == "gram-schmidt"
        rep = verify_basis(basis, ctx)
        assert rep.passed()

    @pytest.mark.parametrize("n_dim", [8, 9, 12, 15])
    def test_vectors_have_exact_parity(self, n_dim):
        # entrywise equality, not tolerance: the construction mirrors all
        # trig/S products, so parity survives arithmetic exactly
        basis = build_basis(n_dim, PrecisionContext(digits=100))
        for n, vec in enumerate(basis.vectors):
            sign = -1 if basis.eigen_exponents[n] % 2 else 1
            assert all(vec[-k] == sign * vec[k] for k in vec.index
                       if -k in vec.index)

    def test_sign_convention_leading_entry_positive(self, basis16):
        basis, ctx = basis16
        thr = ctx.zero_tol()
        for vec in basis.vectors:
            lead = next(vec[k] for k in range(0, vec.index.hi + 1)
                        if abs(vec[k]) > thr)
            assert lead > 0

    def test_raw_signs_satisfy_recurrence_identity(self):
        # with the convention off, Eq-style chain T_{n+4} b_n = L T_n - a_n T_n - b_{n-4} T_{n-4}
        ctx = PrecisionContext(digits=100)
        basis = build_basis(13, ctx, sign_convention=False)
        assert basis.sign_convention == "raw"
        with ctx.workdps():
            for n, b_n in basis.recur_b.items():
                nxt = n + 4 if n + 4 < 13 else 12
                lhs = basis.vectors[nxt] * b_n
                rhs = apply_L(basis.vectors[n]) - basis.vectors[n] * basis.recur_a[n]
                if n - 4 in basis.recur_b:
                    rhs = rhs - basis.vectors[n - 4] * basis.recur_b[n - 4]
                assert norm_diff(lhs, rhs) <= mp.mpf(10) ** -85

    def test_track_error_attaches_interval_loss(self):
        ctx = PrecisionContext(digits=100, track_error=True)
        basis = build_basis(12, ctx)
        assert basis.interval_loss_digits is not None
        assert 0 <= basis.interval_loss_digits < 20

    def test_rejects_unknown_construction(self):
        with pytest.raises(ValueError):
            build_basis(8, PrecisionContext(digits=64), construction="qr")


class TestResidualBound:
    def _report(self, **kw):
        from dft_hermite import VerificationReport
        base = dict(n_dim=64, digits=200, construction="recurrence",
                    max_ortho_residual=mp.mpf(0), max_eigen_residual=mp.mpf(0),
                    width_violations=[], dims_match=True, column_widths_ok=True)
        base.update(kw)
        return VerificationReport(**base)

    def test_envelope_when_untracked(self):
        # the b^2 proxy alone must not tighten the bound: loss floors at N/2
        rep = self._report(precision_loss_digits=6.0)
        assert rep.residual_bound() == mp.mpf(10) ** -(200 - 32 - 20)

    def test_interval_loss_used_directly(self):
        rep = self._report(precision_loss_digits=30.0, loss_is_interval=True)
        assert rep.residual_bound() == mp.mpf(10) ** -150

    def test_bound_never_degenerates(self):
        rep = self._report(n_dim=400, digits=64)
        assert rep.residual_bound() == mp.mpf(10) ** -10

    def test_accumulated_loss_does_not_fail_good_basis(self):
        # at N=64 and 90 digits the residuals sit ~27 digits above ulp scale;
        # the verdict must still be PASS
        ctx = PrecisionContext(digits=90)
        rep = verify_basis(build_basis(64, ctx), ctx)
        assert rep.max_ortho_residual > mp.mpf(10) ** -85  # loss is real
        assert rep.passed()

    def test_exhausted_precision_fails_verification(self):
        # N=128 at 40 digits consumes the working precision entirely;
        # the floored bound must reject the degraded basis
        ctx = PrecisionContext(digits=40)
        rep = verify_basis(build_basis(128, ctx), ctx)
        assert not rep.passed()


class TestGramSchmidtReference:
    def test_tail_layout_n7(self):
        # N=7 is 3 mod 4: T_4, T_5, T_6 close the W, X, Y columns at width 3
        ctx = PrecisionContext(digits=100)
        basis = gram_schmidt_reference(SeedFamily(7, ctx), ctx)
        assert basis.eigen_exponents[4:] == [0, 1, 2]
        assert [width(basis.vectors[n], ctx) for n in (4, 5, 6)] == [3, 3, 3]

    def test_tail_layout_n5(self):
        # N=5 is 1 mod 4: the last vector is a +1 eigenvector of width 2
        ctx = PrecisionContext(digits=100)
        basis = gram_schmidt_reference(SeedFamily(5, ctx), ctx)
        assert basis.eigen_exponents[4] == 0
        assert width(basis.vectors[4], ctx) == 2

    def test_passes_verification(self):
        ctx = PrecisionContext(digits=100)
        basis = gram_schmidt_reference(SeedFamily(9, ctx), ctx)
        assert verify_basis(basis, ctx).passed()


class TestOracleEquivalence:
    @pytest.mark.parametrize("n_dim", [5, 6, 7, 8, 11, 16])
    def test_paths_agree_up_to_sign(self, n_dim):
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(n_dim, ctx)
        rec = build_basis(n_dim, ctx, family=fam)
        gs = gram_schmidt_reference(fam, ctx)
        assert compare_bases(rec, gs) <= mp.mpf(10) ** -(100 - 40)

    def test_sign_convention_makes_paths_identical(self):
        # same convention on both sides: agreement without the sign min
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(8, ctx)
        rec = build_basis(8, ctx, family=fam)
        gs = gram_schmidt_reference(fam, ctx)
        worst = max(norm_diff(a, b) for a, b in zip(rec.vectors, gs.vectors))
        assert worst <= mp.mpf(10) ** -60

    def test_deviation_recorded_in_report(self):
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(10, ctx)
        rec = build_basis(10, ctx, family=fam)
        gs = gram_schmidt_reference(fam, ctx)
        rep = verify_basis(rec, ctx, oracle=gs)
        assert rep.oracle_deviation is not None
        assert rep.oracle_deviation <= mp.mpf(10) ** -60
        assert rep.passed()


class TestProp14Counting:
    @pytest.mark.parametrize("n_dim", [5, 8, 9, 14, 19])
    def test_width_filtered_span_counts(self, n_dim):
        ctx = PrecisionContext(digits=100)
        basis = build_basis(n_dim, ctx)
        dims = eigenspace_dims(n_dim)
        widths = [width(v, ctx) for v in basis.vectors]
        for m in range(4):
            col = [widths[n] for n in basis.column(m)]
            for bound in range(0, n_dim // 2 + 1):
                got = sum(1 for w in col if w <= bound)
                expected = min(max(bound - dims.k_thresholds[m] + 1, 0), dims[m])
                assert got == expected

import pytest
from mpmath import mp

from dft_hermite import (PrecisionContext, SeedFamily, check_fourier_pairs,
                         dft, width)
from dft_hermite.core import norm_diff

TOL80 = mp.mpf(10) ** -80

# alpha_1 for N=5 from an independent 110-digit evaluation of
# S(1)^-2 sqrt(S(2)) with the S product written out directly
# (kept as a string: module constants would parse at default precision)
ALPHA_1_N5 = "1.0820445430988212829575660336997806658757474746336"


@pytest.fixture(scope="module")
def fam7():
    return SeedFamily(7, PrecisionContext(digits=100))


@pytest.fixture(scope="module")
def fam8():
    return SeedFamily(8, PrecisionContext(digits=100))


class TestScalarTables:
    def test_s_endpoints(self, fam7, fam8):
        assert fam7.s(0) == 1
        assert abs(fam7.s(6) - 7) <= TOL80          # S(N-1) = N
        assert abs(fam8.s(7) - 8) <= TOL80

    def test_s_small_values(self):
        fam = SeedFamily(4, PrecisionContext(digits=100))
        assert abs(fam.s(1) - mp.sqrt(2)) <= TOL80  # 2 sin(pi/4)
        assert abs(fam.s(3) - 4) <= TOL80

    def test_s_range_check(self, fam7):
        with pytest.raises(IndexError):
            fam7.s(7)
        with pytest.raises(IndexError):
            fam7.s(-1)

    @pytest.mark.parametrize("n_dim", [2, 3, 4, 7, 8, 16, 25, 64])
    def test_reflection_identity(self, n_dim):
        fam = SeedFamily(n_dim, PrecisionContext(digits=100))
        assert fam.reflection_residual() <= TOL80

    @pytest.mark.parametrize("n_dim", [5, 6, 9, 12, 31, 32])
    def test_product_split_identities(self, n_dim):
        fam = SeedFamily(n_dim, PrecisionContext(digits=100))
        assert fam.product_split_residual() <= TOL80

    def test_alpha_zero(self, fam7, fam8):
        assert fam7.alpha(0) == 1
        assert fam8.alpha(0) == mp.mpf(1) / 2

    def test_alpha_golden_value(self):
        fam = SeedFamily(5, PrecisionContext(digits=100))
        assert abs(fam.alpha(1) - mp.mpf(ALPHA_1_N5)) <= mp.mpf(10) ** -48

    def test_beta_exact_half_for_n4(self):
        # beta_1 = S(1)^-2 (S(1) cos(pi/4))^(1/2) = 1/2 since S(1) = sqrt(2)
        fam = SeedFamily(4, PrecisionContext(digits=100))
        assert abs(fam.beta(1) - mp.mpf(1) / 2) <= TOL80

    def test_index_guards(self, fam7):
        with pytest.raises(IndexError):
            fam7.alpha(4)
        with pytest.raises(IndexError):
            fam7.beta(0)
        with pytest.raises(IndexError):
            fam7.beta(4)
        with pytest.raises(IndexError):
            fam7.u(4)
        with pytest.raises(IndexError):
            fam7.v(0)


class TestTSequence:
    @pytest.mark.parametrize("n_dim", [5, 8, 9, 16])
    def test_identities_and_bounds(self, n_dim):
        fam = SeedFamily(n_dim, PrecisionContext(digits=100))
        omega = 2 * mp.pi / n_dim
        assert fam.t(0) == 0
        prev = None
        for k in fam.index:
            tk = fam.t(k)
            if -k in fam.index:  # k = N/2 wraps to itself for even N
                assert tk == -fam.t(-k)
            if k != 0:
                assert abs(tk) <= mp.sqrt(omega) * abs(k) + TOL80
                assert abs(tk) >= 2 * mp.sqrt(omega) * abs(k) / mp.pi - TOL80
            if prev is not None:
                assert tk > prev  # monotone on I_N
            prev = tk


class TestFamilies:
    def test_u_constant_at_top_even(self, fam8):
        c = 1 / (2 * mp.sqrt(8))
        assert all(abs(x - c) <= TOL80 for x in fam8.u(4))

    def test_u_constant_at_top_odd(self, fam7):
        # empty product: u_{floor(N/2)} == alpha_{floor(N/2)} everywhere
        a3 = fam7.alpha(3)
        assert all(abs(x - a3) <= TOL80 for x in fam7.u(3))
        assert all(abs(x - a3) <= TOL80 for x in fam7.u_product(3))

    def test_v_top_is_pure_sine(self, fam7):
        b3 = fam7.beta(3)
        omega = 2 * mp.pi / 7
        for k in fam7.index:
            assert abs(fam7.v(3)[k] - b3 * mp.sin(omega * k)) <= TOL80

    def test_v_vanishes_at_zero(self, fam7, fam8):
        assert fam7.v(2)[0] == 0
        assert fam8.v(3)[0] == 0
        assert fam8.v_product(3)[0] == 0

    def test_v_exactly_odd(self, fam8):
        v2 = fam8.v(2)
        assert all(v2[-k] == -v2[k] for k in fam8.index)

    def test_u_exactly_even(self, fam8):
        u2 = fam8.u(2)
        assert all(u2[-k] == u2[k] for k in fam8.index)

    def test_closed_matches_product_n7(self, fam7):
        diff = norm_diff(fam7.u(2), fam7.u_product(2))
        assert diff <= TOL80

    def test_closed_matches_product_n8(self, fam8):
        assert norm_diff(fam8.v(3), fam8.v_product(3)) <= TOL80

    @pytest.mark.parametrize("n_dim", [2, 3, 4, 5, 6, 9, 16, 21])
    def test_closed_vs_product_all(self, n_dim):
        fam = SeedFamily(n_dim, PrecisionContext(digits=100))
        assert fam.closed_vs_product_residual() <= TOL80

    @pytest.mark.parametrize("n_dim", [5, 6, 9, 12, 16])
    def test_widths_are_exact(self, n_dim):
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(n_dim, ctx)
        for n in range(0, fam.half_floor + 1):
            assert width(fam.u(n), ctx) == n
        for n in range(1, fam.half_ceil):
            assert width(fam.v(n), ctx) == n

    def test_product_width_from_vanishing_factors(self):
        # N=9, n=2: the product vanishes exactly at |k| in {3, 4}
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(9, ctx)
        assert width(fam.u_product(2), ctx) == 2


class TestFourierPairs:
    def test_report_bounds_n8(self, fam8):
        rep = check_fourier_pairs(fam8, fam8.ctx)
        assert rep.max_u_residual <= TOL80
        assert rep.max_v_residual <= TOL80

    def test_constant_maps_to_delta_like(self, fam7):
        # endpoint of the pairing: F u_3 = u_0 for N=7
        fu = dft(fam7.u(3), fam7.ctx)
        assert norm_diff(fu, fam7.u(0)) <= TOL80

    def test_v_pairing_via_full_dft(self):
        # N=9: F v_4 = -i v_1
        ctx = PrecisionContext(digits=100)
        fam = SeedFamily(9, ctx)
        fv = dft(fam.v(4), ctx)
        target = fam.v(1) * mp.mpc(0, -1)
        assert norm_diff(fv, target) <= TOL80

    @pytest.mark.parametrize("n_dim", [2, 3, 4, 5, 6, 7, 10, 13, 16])
    def test_pairing_sweep(self, n_dim):
        ctx = PrecisionContext(digits=100)
        rep = check_fourier_pairs(SeedFamily(n_dim, ctx), ctx)
        assert rep.max_residual() <= mp.mpf(10) ** -(100 - 30)

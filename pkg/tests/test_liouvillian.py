import math
from fractions import Fraction

import numpy as np
import pytest

import stabtherm as st
from stabtherm import Pauli
from stabtherm.liouvillian import _DenseRep, _alpha_syndromes, _vec

import oracles


def hermitian_observable(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


class TestGibbsData:
    def test_weights_normalized(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.4, 1.0):
                gibbs = st.gibbs_data(m, beta)
                assert gibbs.degeneracy * gibbs.rho.sum() == pytest.approx(1.0, rel=1e-13)
                assert (gibbs.rho > 0).all()

    def test_h_norm_toric(self, toric2):
        assert st.gibbs_data(toric2, 0.1).h_norm == Fraction(8)

    def test_rho_inv_norm_beta_zero(self, torus2):
        gibbs = st.gibbs_data(torus2, 0.0)
        assert gibbs.rho_inv_norm == pytest.approx(2.0 ** 4, rel=1e-13)

    def test_matches_dense_gibbs(self, chain3):
        beta = 0.6
        gibbs = st.gibbs_data(chain3, beta)
        h = oracles.dense_hamiltonian(chain3)
        vals = np.linalg.eigvalsh(h)
        z = np.exp(-beta * vals).sum()
        assert gibbs.z == pytest.approx(z, rel=1e-12)
        assert gibbs.rho_inv_norm == pytest.approx(z / np.exp(-beta * vals.max()),
                                                   rel=1e-12)


class TestGFunction:
    def test_beta_zero_is_one(self, small_models):
        for m in small_models.values():
            bath = st.BathSpec(beta=0.0)
            for j in range(m.n_qubits):
                for a in m.realized_syndromes():
                    assert st.g_function(m, bath, j, a) == 1.0

    def test_single_qubit_closed_form(self, model_1q):
        for beta in (0.2, 1.0, 2.5):
            bath = st.BathSpec(beta=beta)
            expected = (0.5 * (1.0 + math.exp(-2.0 * beta))) ** -0.5
            assert st.g_function(model_1q, bath, 0, 0) == pytest.approx(expected,
                                                                        rel=1e-14)

    def test_shift_identity_half_exponent(self, small_models):
        # G_j(a + e(alpha)) = G_j(a) exp(beta omega^alpha(a) / 2) exactly
        for m in small_models.values():
            bath = st.BathSpec(beta=0.7)
            scale = m.coupling_scale
            for j in range(m.n_qubits):
                syn = _alpha_syndromes(m, j)
                for ax in ("X", "Y", "Z"):
                    for a in m.realized_syndromes():
                        lhs = st.g_function(m, bath, j, a ^ syn[ax])
                        rhs = st.g_function(m, bath, j, a) * math.exp(
                            0.5 * 0.7 * m.omega_int(a, syn[ax]) / scale)
                        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestHeatBathDense:
    def test_beta_zero_depolarizing_spectrum(self, model_2q):
        q = st.heatbath_dense(model_2q, st.BathSpec(beta=0.0))
        codes = [(c & 3, c >> 2) for c in range(16)]
        weights = [bin(x | z).count("1") for x, z in codes]
        assert np.allclose(np.diag(q), [-w for w in weights], atol=1e-13)
        assert np.abs(q - np.diag(np.diag(q))).max() < 1e-13

    def test_single_qubit_entries_from_g_values(self, model_1q):
        beta = 0.9
        bath = st.BathSpec(beta=beta)
        q = st.heatbath_dense(model_1q, bath)
        g0 = st.g_function(model_1q, bath, 0, 0)
        g1 = st.g_function(model_1q, bath, 0, 1)
        # basis order: I, X, Z, Y.  Coherence sector (X, Y): the twirl kills
        # off-diagonal operators, so eigenvalue -1.  Population sector (I, Z):
        # E(Z) has a Z component (g0 g1 - ...) computed from the G values.
        assert q[0, 0] == pytest.approx(0.0, abs=1e-14)
        assert q[1, 1] == pytest.approx(-1.0, rel=1e-13)
        assert q[3, 3] == pytest.approx(-1.0, rel=1e-13)
        p0 = 0.5 * (g0 ** 2 + g0 * g1) - 1.0
        assert q[2, 2] == pytest.approx(p0, rel=1e-12)

    def test_jump_normalization_is_unital(self, chain3):
        bath = st.BathSpec(beta=0.8)
        rep = _DenseRep(chain3)
        dim = rep.dim
        for j in range(3):
            gamma = np.zeros((dim, dim), dtype=complex)
            for a in chain3.realized_syndromes():
                gamma += st.g_function(chain3, bath, j, a) * rep.projectors[a]
            total = np.zeros((dim, dim), dtype=complex)
            for ax in ("I", "X", "Y", "Z"):
                sig = (np.eye(dim, dtype=complex) if ax == "I"
                       else st.pauli_matrix(Pauli.single_site(3, j, ax)))
                a_op = 0.5 * (gamma @ sig)
                total += a_op.conj().T @ a_op
            assert np.abs(total - np.eye(dim)).max() < 1e-12

    def test_structural_residuals(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.5):
                bath = st.BathSpec(beta=beta)
                gibbs = st.gibbs_data(m, beta)
                q = st.heatbath_dense(m, bath)
                assert st.unitality_residual(q) < 1e-12
                assert st.fixed_point_residual(q, m, gibbs) < 1e-12
                assert st.detailed_balance_residual(q, m, gibbs) < 1e-10

    def test_spectrum_real_nonpositive(self, model_2q):
        q = st.heatbath_dense(model_2q, st.BathSpec(beta=0.4))
        vals = np.linalg.eigvals(q)
        assert np.abs(vals.imag).max() < 1e-10
        assert vals.real.max() < 1e-10


class TestDaviesDense:
    def test_single_qubit_glauber_gap(self, model_1q):
        # decay mode 2 (h(2J) + h(-2J)) = 2, coherence 2 h(0) + 1 = 2 for
        # the glauber rates at every temperature
        for beta in (0.0, 0.5, 1.5):
            bath = st.BathSpec(beta=beta)
            gibbs = st.gibbs_data(model_1q, beta)
            gap = st.gap_from_dense(st.davies_dense(model_1q, bath), model_1q, gibbs)
            assert gap.gap == pytest.approx(2.0, rel=1e-12)
            assert gap.zero_modes == 1

    def test_single_qubit_metropolis_gap(self, model_1q):
        for beta in (0.3, 1.0):
            bath = st.BathSpec(beta=beta, rate_preset="metropolis")
            gibbs = st.gibbs_data(model_1q, beta)
            gap = st.gap_from_dense(st.davies_dense(model_1q, bath), model_1q, gibbs)
            assert gap.gap == pytest.approx(2.0 * (1.0 + math.exp(-2.0 * beta)),
                                            rel=1e-12)

    def test_beta_zero_gap_constant(self, small_models):
        # uniform rates: the exact gap is the same O(1) constant for every
        # lattice size in the family
        for m in small_models.values():
            bath = st.BathSpec(beta=0.0)
            gibbs = st.gibbs_data(m, 0.0)
            gap = st.gap_from_dense(st.davies_dense(m, bath), m, gibbs)
            assert gap.gap == pytest.approx(2.0, rel=1e-11)

    def test_structural_residuals(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.3, 1.0):
                bath = st.BathSpec(beta=beta)
                gibbs = st.gibbs_data(m, beta)
                ld = st.davies_dense(m, bath)
                assert st.unitality_residual(ld) < 1e-12
                assert st.fixed_point_residual(ld, m, gibbs) < 1e-12
                assert st.detailed_balance_residual(ld, m, gibbs) < 1e-10
                assert st.spectrum_reality_residual(ld) < 1e-9

    def test_metropolis_residuals(self, chain3):
        bath = st.BathSpec(beta=0.6, rate_preset="metropolis")
        gibbs = st.gibbs_data(chain3, 0.6)
        ld = st.davies_dense(chain3, bath)
        assert st.fixed_point_residual(ld, chain3, gibbs) < 1e-12
        assert st.detailed_balance_residual(ld, chain3, gibbs) < 1e-10

    def test_dense_cap(self, toric2):
        with pytest.raises(st.ResourceError, match="coset"):
            st.davies_dense(toric2, st.BathSpec(beta=0.1))


class TestDirichletOracle:
    def test_pencil_eigenvalues_match_generator_spectrum(self, model_2q):
        import scipy.linalg

        beta = 0.5
        bath = st.BathSpec(beta=beta)
        gibbs = st.gibbs_data(model_2q, beta)
        ld = st.davies_dense(model_2q, bath)
        e = st.dirichlet_dense_from_generator(ld, model_2q, gibbs)
        m = st.kms_metric(model_2q, gibbs)
        pencil = np.sort(scipy.linalg.eigh(e, m, eigvals_only=True))
        direct = np.sort(-np.linalg.eigvals(ld).real)
        assert np.abs(pencil - direct).max() < 1e-9

    def test_identity_is_zero_mode(self, chain3):
        beta = 0.3
        gibbs = st.gibbs_data(chain3, beta)
        ld = st.davies_dense(chain3, st.BathSpec(beta=beta))
        e = st.dirichlet_dense_from_generator(ld, chain3, gibbs)
        ident = np.zeros(e.shape[0])
        ident[0] = 1.0
        assert np.abs(e @ ident).max() < 1e-12

    def test_psd(self, small_models):
        rng = np.random.default_rng(0)
        for m in small_models.values():
            beta = float(rng.uniform(0.0, 1.0))
            gibbs = st.gibbs_data(m, beta)
            for gen in (st.davies_dense, st.heatbath_dense):
                ld = gen(m, st.BathSpec(beta=beta))
                e = st.dirichlet_dense_from_generator(ld, m, gibbs)
                assert np.linalg.eigvalsh(e).min() > -1e-10


class TestCosetBlocks:
    def test_block_count_and_dimension(self, toric2):
        reps = st.coset_representatives(toric2)
        assert len(reps) == 1024
        bath = st.BathSpec(beta=0.1)
        blk = next(iter(st.dirichlet_blocks(toric2, bath, family="davies",
                                            reps=reps[:1])))
        assert blk.matrix.shape == (64, 64)

    def test_single_qubit_cosets(self, model_1q):
        assert len(st.coset_representatives(model_1q)) == 2

    @pytest.mark.parametrize("family", ["davies", "heatbath"])
    def test_blocks_match_projected_dense_oracle(self, small_models, family):
        for name, m in small_models.items():
            for beta in (0.0, 0.6):
                bath = st.BathSpec(beta=beta)
                gibbs = st.gibbs_data(m, beta)
                gen = st.davies_dense if family == "davies" else st.heatbath_dense
                e_dense = st.dirichlet_dense_from_generator(gen(m, bath), m, gibbs)
                u = _DenseRep(m).pauli_basis()
                for blk in st.dirichlet_blocks(m, bath, family=family):
                    coeff = oracles.coset_basis_coefficients(m, blk.rep, u)
                    proj = coeff.conj().T @ e_dense @ coeff
                    assert np.abs(proj - blk.matrix).max() < 1e-10, (name, beta)

    def test_cross_coset_entries_vanish(self, model_2q):
        beta = 0.4
        bath = st.BathSpec(beta=beta)
        gibbs = st.gibbs_data(model_2q, beta)
        e_dense = st.dirichlet_dense_from_generator(
            st.davies_dense(model_2q, bath), model_2q, gibbs)
        u = _DenseRep(model_2q).pauli_basis()
        reps = st.coset_representatives(model_2q)
        c0 = oracles.coset_basis_coefficients(model_2q, reps[0], u)
        c1 = oracles.coset_basis_coefficients(model_2q, reps[1], u)
        assert np.abs(c0.conj().T @ e_dense @ c1).max() < 1e-12

    def test_identity_coset_kills_constant_vector(self, small_models):
        for m in small_models.values():
            bath = st.BathSpec(beta=0.5)
            for family in ("davies", "heatbath"):
                blk = next(iter(st.dirichlet_blocks(m, bath, family=family)))
                assert blk.rep.is_identity
                ones = np.ones(blk.matrix.shape[0])
                assert np.abs(blk.matrix @ ones).max() < 1e-12

    def test_blocks_hermitian_psd(self, chain3):
        bath = st.BathSpec(beta=0.7)
        for family in ("davies", "heatbath"):
            for blk in st.dirichlet_blocks(chain3, bath, family=family):
                assert np.abs(blk.matrix - blk.matrix.T).max() < 1e-12
                assert np.linalg.eigvalsh(blk.matrix).min() > -1e-12

    def test_heatbath_identity_coset_beta_zero(self, model_2q):
        # beta = 0: the identity-coset block is the diagonal of Pauli
        # weights scaled by the flat Gibbs weight
        bath = st.BathSpec(beta=0.0)
        blk = next(iter(st.dirichlet_blocks(model_2q, bath, family="heatbath")))
        vals = np.sort(np.linalg.eigvalsh(blk.matrix * 4.0 / blk.metric[0]))
        assert np.allclose(vals, [0.0, 1.0, 1.0, 2.0], atol=1e-12)


class TestSpectralGap:
    def test_dense_and_coset_agree(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.4):
                bath = st.BathSpec(beta=beta)
                gibbs = st.gibbs_data(m, beta)
                for family, gen in (("davies", st.davies_dense),
                                    ("heatbath", st.heatbath_dense)):
                    gd = st.gap_from_dense(gen(m, bath), m, gibbs)
                    gb = st.gap_from_blocks(
                        st.dirichlet_blocks(m, bath, family=family))
                    assert gd.gap == pytest.approx(gb.gap, rel=1e-9)
                    assert gd.zero_modes == gb.zero_modes == 1

    def test_beta_zero_heatbath_gap_one(self, small_models):
        for m in small_models.values():
            gap = st.gap_from_blocks(
                st.dirichlet_blocks(m, st.BathSpec(beta=0.0), family="heatbath"))
            assert gap.gap == pytest.approx(1.0, abs=1e-9)

    def test_duplicated_zero_mode_rejected(self, model_1q):
        bath = st.BathSpec(beta=0.2)
        blocks = list(st.dirichlet_blocks(model_1q, bath, family="davies"))
        with pytest.raises(st.NonPrimitiveError):
            st.gap_from_blocks(blocks + [blocks[0]])

    def test_polymorphic_entry_point(self, model_2q):
        beta = 0.3
        bath = st.BathSpec(beta=beta)
        gibbs = st.gibbs_data(model_2q, beta)
        ld = st.davies_dense(model_2q, bath)
        a = st.spectral_gap(ld, model_2q, gibbs)
        b = st.spectral_gap(st.dirichlet_blocks(model_2q, bath, family="davies"))
        assert a.gap == pytest.approx(b.gap, rel=1e-10)
        assert a.method == "dense" and b.method == "coset"

    def test_toric_coset_gap_positive(self, toric2):
        bath = st.BathSpec(beta=0.1)
        res = st.gap_from_blocks(st.dirichlet_blocks(toric2, bath, family="davies"))
        assert res.gap > 0.0
        assert res.zero_modes == 1


class TestComparisonConstants:
    def test_tau_single_qubit_closed_form(self, model_1q):
        beta = 0.8
        bath = st.BathSpec(beta=beta)
        tau, r_lower = st.tau_and_r(model_1q, bath)
        hm = st.h_min(model_1q, bath)
        assert tau == pytest.approx(4.0 / ((1.0 + math.exp(-2.0 * beta)) * hm),
                                    rel=1e-13)
        assert 1.0 / tau >= r_lower - 1e-15

    def test_tau_beta_zero(self, small_models):
        for m in small_models.values():
            bath = st.BathSpec(beta=0.0)
            tau, _ = st.tau_and_r(m, bath)
            assert tau == pytest.approx(2.0 / st.h_min(m, bath), rel=1e-13)

    def test_gap_comparison_inequality(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.4, 1.0):
                bath = st.BathSpec(beta=beta)
                gibbs = st.gibbs_data(m, beta)
                lam_d = st.gap_from_dense(st.davies_dense(m, bath), m, gibbs).gap
                lam_q = st.gap_from_dense(st.heatbath_dense(m, bath), m, gibbs).gap
                tau, r_lower = st.tau_and_r(m, bath)
                assert lam_d >= lam_q / tau - 1e-12
                assert 1.0 / tau >= r_lower - 1e-12


class TestVarianceAndPoincare:
    def test_identity_observable(self, model_2q):
        beta = 0.5
        gibbs = st.gibbs_data(model_2q, beta)
        ld = st.davies_dense(model_2q, st.BathSpec(beta=beta))
        e = st.dirichlet_dense_from_generator(ld, model_2q, gibbs)
        var, energy = st.variance_and_dirichlet(model_2q, gibbs, np.eye(4), e)
        assert abs(var) < 1e-13
        assert abs(energy) < 1e-13

    def test_gap_eigenvector_saturates(self, model_2q):
        import scipy.linalg

        beta = 0.5
        gibbs = st.gibbs_data(model_2q, beta)
        ld = st.davies_dense(model_2q, st.BathSpec(beta=beta))
        e = st.dirichlet_dense_from_generator(ld, model_2q, gibbs)
        m = st.kms_metric(model_2q, gibbs)
        vals, vecs = scipy.linalg.eigh(e, m)
        gap = vals[1]
        u = _DenseRep(model_2q).pauli_basis()
        f = (u @ vecs[:, 1]).reshape(4, 4, order="F")
        var, energy = st.variance_and_dirichlet(model_2q, gibbs, f, e)
        assert energy == pytest.approx(gap * var, rel=1e-9)

    def test_random_observables_hold(self, small_models):
        rng = np.random.default_rng(99)
        for m in small_models.values():
            beta = 0.3
            gibbs = st.gibbs_data(m, beta)
            ld = st.davies_dense(m, st.BathSpec(beta=beta))
            e = st.dirichlet_dense_from_generator(ld, m, gibbs)
            gap = st.gap_from_dense(ld, m, gibbs).gap
            dim = 1 << m.n_qubits
            for _ in range(20):
                f = hermitian_observable(rng, dim)
                var, energy = st.variance_and_dirichlet(m, gibbs, f, e)
                assert st.poincare_check(gap, var, energy)


class TestOscillatorNormAndErgodicity:
    def test_identity_norm_zero(self):
        assert st.oscillator_norm(np.eye(8, dtype=complex), 3) == pytest.approx(0.0)

    def test_single_site_pauli_norm_one(self):
        f = st.pauli_matrix(Pauli.single_site(3, 1, "X"))
        assert st.oscillator_norm(f, 3) == pytest.approx(1.0, rel=1e-13)

    def test_beta_zero_saturation(self, model_2q):
        # T_t(X_0) = e^{-t} X_0 under the depolarizing semigroup; kappa = 0
        # and |||X_0||| = |X_0|, so the bound is met with equality
        f = st.pauli_matrix(Pauli.single_site(2, 0, "X")).astype(complex)
        pts = st.ergodicity_check(model_2q, st.BathSpec(beta=0.0), f,
                                  [0.1, 1.0, 5.0], kappa_value=0.0)
        for pt in pts:
            assert pt.lhs == pytest.approx(math.exp(-pt.t), rel=1e-10)
            assert pt.rhs == pytest.approx(math.exp(-pt.t), rel=1e-12)
            assert pt.holds

    def test_two_qubit_ising_small_beta(self, model_2q):
        beta = 0.05
        kn = st.kappa_numeric(model_2q, beta).kappa
        assert kn < 1.0
        rng = np.random.default_rng(17)
        f = hermitian_observable(rng, 4)
        pts = st.ergodicity_check(model_2q, st.BathSpec(beta=beta), f,
                                  [0.1, 1.0, 5.0], kn)
        assert all(pt.holds for pt in pts)

    def test_kappa_above_one_rejected(self, model_2q):
        with pytest.raises(st.ValidationError):
            st.ergodicity_check(model_2q, st.BathSpec(beta=1.0),
                                np.eye(4, dtype=complex), [1.0], 1.5)


class TestMixingTime:
    def test_beta_zero_formula(self, torus2):
        gibbs = st.gibbs_data(torus2, 0.0)
        bound = st.mixing_time_bound(1.0, gibbs)
        expected = 1.0 + 0.5 * 4 * math.log(2.0)
        assert bound.from_exact == pytest.approx(expected, rel=1e-13)
        assert bound.from_h_norm == pytest.approx(expected, rel=1e-13)

    def test_single_qubit_closed_form(self, model_1q):
        beta = 0.8
        gibbs = st.gibbs_data(model_1q, beta)
        bound = st.mixing_time_bound(2.0, gibbs)
        z = math.exp(beta) + math.exp(-beta)
        expected = (1.0 + 0.5 * math.log(z * math.exp(beta))) / 2.0
        assert bound.from_exact == pytest.approx(expected, rel=1e-13)

    def test_h_norm_variant_dominates_exact(self, small_models):
        for m in small_models.values():
            for beta in (0.0, 0.5, 1.5):
                gibbs = st.gibbs_data(m, beta)
                bound = st.mixing_time_bound(0.7, gibbs)
                assert bound.from_h_norm >= bound.from_exact - 1e-12

    def test_monotone_in_gap(self, model_2q):
        gibbs = st.gibbs_data(model_2q, 0.3)
        bounds = [st.mixing_time_bound(g, gibbs).from_exact for g in (0.1, 0.5, 2.0)]
        assert bounds[0] > bounds[1] > bounds[2]

    def test_positive_gap_required(self, model_2q):
        with pytest.raises(st.ValidationError):
            st.mixing_time_bound(0.0, st.gibbs_data(model_2q, 0.1))

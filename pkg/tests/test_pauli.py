import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

import stabtherm as st
from stabtherm import Pauli, commutes
from stabtherm.pauli import ValidationError

import oracles


def random_pauli(rng, n):
    code = int(rng.integers(0, 1 << (2 * n)))
    return Pauli(n, code & ((1 << n) - 1), code >> n)


def test_string_round_trip():
    for word in ("I", "XYZ", "IZXIY", "YY"):
        assert str(Pauli.from_string(word)) == word


def test_identity_and_involution():
    p = Pauli.from_string("XYZI")
    assert p.compose(p).is_identity
    assert Pauli.identity(4).is_identity
    assert p.compose(Pauli.identity(4)) == p


def test_commutes_basic():
    x0 = Pauli.single_site(1, 0, "X")
    z0 = Pauli.single_site(1, 0, "Z")
    assert commutes(x0, z0) == 1
    assert commutes(Pauli.identity(1), z0) == 0
    assert commutes(Pauli.identity(1), x0) == 0


def test_commutes_matches_dense_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p, q = random_pauli(rng, 3), random_pauli(rng, 3)
        assert commutes(p, q) == oracles.commute_bit(p, q)


def test_dimension_mismatch_rejected():
    with pytest.raises(st.DimensionError):
        commutes(Pauli.identity(2), Pauli.identity(3))


pauli_codes = hs.integers(min_value=0, max_value=(1 << 8) - 1)


@settings(max_examples=200, deadline=None)
@given(pauli_codes, pauli_codes, pauli_codes)
def test_symplectic_bilinearity(a, b, c):
    n = 4
    mask = (1 << n) - 1
    p = Pauli(n, a & mask, a >> n)
    q = Pauli(n, b & mask, b >> n)
    r = Pauli(n, c & mask, c >> n)
    assert commutes(p.compose(q), r) == commutes(p, r) ^ commutes(q, r)


class TestStabilizerModel:
    def test_single_qubit(self, model_1q):
        assert model_1q.rank == 1
        assert model_1q.realized_syndromes() == (0, 1)

    def test_noncommuting_rejected(self):
        with pytest.raises(ValidationError, match="do not commute"):
            st.StabilizerModel(2, [Pauli.from_string("XX"), Pauli.from_string("ZX")],
                               [Fraction(1), Fraction(1)])

    def test_nonpositive_coupling_rejected(self):
        with pytest.raises(ValidationError, match="positive"):
            st.StabilizerModel(1, [Pauli.from_string("Z")], [Fraction(0)])
        with pytest.raises(ValidationError, match="positive"):
            st.StabilizerModel(1, [Pauli.from_string("Z")], [Fraction(-1)])

    def test_minus_identity_dependency_rejected(self):
        # XX, YY, ZZ commute pairwise but multiply to -identity
        gens = [Pauli.from_string(w) for w in ("XX", "YY", "ZZ")]
        with pytest.raises(ValidationError, match="-identity"):
            st.StabilizerModel(2, gens, [Fraction(1)] * 3)

    def test_plus_identity_dependency_accepted(self, toric2):
        assert toric2.rank == 6

    def test_duplicate_generators_allowed(self):
        gens = [Pauli.from_string("ZZ"), Pauli.from_string("ZZ")]
        m = st.StabilizerModel(2, gens, [Fraction(1), Fraction(2)])
        assert m.rank == 1
        assert len(m.realized_syndromes()) == 2


class TestSyndrome:
    def test_identity_syndrome_zero(self, toric2):
        assert st.Pauli.identity(8).is_identity
        assert toric2.syndrome(Pauli.identity(8)).bits == 0

    def test_generators_have_zero_syndrome(self, toric2):
        for g in toric2.generators:
            assert toric2.syndrome(g).bits == 0

    def test_single_link_x_hits_two_vertices(self, toric2):
        # vertex generators occupy syndrome bits 0..3
        for q in range(8):
            syn = toric2.syndrome(Pauli.single_site(8, q, "X"))
            assert bin(syn.bits & 0b1111).count("1") == 2
            assert syn.bits >> 4 == 0

    def test_matches_dense_oracle(self, chain3):
        rng = np.random.default_rng(5)
        for _ in range(25):
            p = random_pauli(rng, 3)
            assert chain3.syndrome(p).bits == oracles.syndrome_bits(chain3, p)

    def test_homomorphism(self, toric2):
        rng = np.random.default_rng(8)
        for _ in range(100):
            p, q = random_pauli(rng, 8), random_pauli(rng, 8)
            assert (toric2.syndrome(p.compose(q)).bits
                    == toric2.syndrome(p).bits ^ toric2.syndrome(q).bits)

    def test_fast_code_path_matches_definition(self, toric2):
        rng = np.random.default_rng(13)
        for _ in range(100):
            p = random_pauli(rng, 8)
            assert toric2.syndrome_of_code(p.x, p.z) == toric2.syndrome(p).bits


class TestEnergy:
    def test_single_qubit_levels(self, model_1q):
        assert model_1q.energy(0) == Fraction(-1)
        assert model_1q.energy(1) == Fraction(1)

    def test_toric_ground(self, toric2):
        assert toric2.energy(0) == Fraction(-8)

    def test_energy_matches_dense_diagonalization(self, chain3):
        h = oracles.dense_hamiltonian(chain3)
        for a in chain3.realized_syndromes():
            proj = oracles.dense_projector(chain3, a)
            tr = np.trace(proj).real
            assert tr > 0.5
            val = np.trace(proj @ h).real / tr
            assert abs(val - float(chain3.energy(a))) < 1e-12

    def test_exact_rationals(self):
        m = st.parse_model("qubits 1\nterm 1/3 Z\n")
        assert m.energy(0) == Fraction(-1, 3)
        assert m.energy(1) == Fraction(1, 3)


class TestBohrFrequency:
    def test_single_qubit(self, model_1q):
        x = Pauli.from_string("X")
        assert model_1q.bohr_frequency(0, x) == Fraction(-2)
        assert model_1q.bohr_frequency(1, x) == Fraction(2)

    def test_commuting_pauli_gives_zero(self, toric2):
        for g in toric2.generators:
            assert toric2.bohr_frequency(0, g) == 0

    def test_equals_energy_difference(self, torus2):
        rng = np.random.default_rng(2)
        realized = torus2.realized_syndromes()
        for _ in range(50):
            a = realized[rng.integers(len(realized))]
            p = random_pauli(rng, 4)
            ep = torus2.syndrome(p).bits
            assert (torus2.bohr_frequency(a, p)
                    == torus2.energy(a) - torus2.energy(a ^ ep))

    def test_antisymmetry(self, chain3):
        rng = np.random.default_rng(4)
        for _ in range(50):
            p = random_pauli(rng, 3)
            ep = chain3.syndrome(p).bits
            for a in chain3.realized_syndromes():
                assert (chain3.bohr_frequency(a, p)
                        == -chain3.bohr_frequency(a ^ ep, p))

    def test_unrealized_needs_flag(self, toric2):
        # odd-weight vertex patterns are unrealized
        bad = 1
        assert bad not in toric2.realized_set()
        with pytest.raises(ValidationError):
            toric2.bohr_frequency(bad, Pauli.single_site(8, 0, "X"))
        toric2.bohr_frequency(bad, Pauli.single_site(8, 0, "X"),
                              allow_unrealized=True)

    def test_scaled_integer_matches_fraction(self):
        m = st.parse_model("qubits 2\nterm 1/2 ZZ\nterm 3/4 ZI\n")
        rng = np.random.default_rng(9)
        for _ in range(30):
            p = random_pauli(rng, 2)
            ep = m.syndrome(p).bits
            for a in m.realized_syndromes():
                w = m.bohr_frequency(a, p)
                assert Fraction(m.omega_int(a, ep), m.coupling_scale) == w


class TestRealizedSyndromes:
    def test_toric_counts_and_parity(self, toric2):
        realized = toric2.realized_syndromes()
        assert len(realized) == 64
        for b in realized:
            assert bin(b & 0b1111).count("1") % 2 == 0
            assert bin(b >> 4).count("1") % 2 == 0

    def test_matches_per_pauli_enumeration(self, toric2):
        seen = set()
        for code in range(1 << 16):
            seen.add(toric2.syndrome_of_code(code & 0xFF, code >> 8))
        assert seen == set(toric2.realized_syndromes())

    def test_independent_generators_give_full_cube(self, chain3):
        assert len(chain3.realized_syndromes()) == 2 ** chain3.n_terms

    def test_xor_closure(self, toric2):
        realized = toric2.realized_set()
        rng = np.random.default_rng(6)
        lst = list(realized)
        for _ in range(200):
            a, b = rng.integers(len(lst), size=2)
            assert lst[a] ^ lst[b] in realized

    def test_cap(self, toric2):
        with pytest.raises(st.ResourceError):
            toric2.realized_syndromes(cap_rank=5)


class TestBath:
    def test_glauber_zero_frequency(self):
        bath = st.BathSpec(beta=1.3)
        assert bath.rate(Fraction(0)) == 0.5

    def test_metropolis_kms(self):
        bath = st.BathSpec(beta=1.0, rate_preset="metropolis")
        assert bath.rate(Fraction(-2)) == pytest.approx(
            math.exp(-2.0) * bath.rate(Fraction(2)), rel=1e-15)
        assert bath.rate(Fraction(2)) == 1.0

    def test_glauber_kms_over_grid(self):
        bath = st.BathSpec(beta=0.7)
        for w in (Fraction(1, 3), Fraction(2), Fraction(5, 2)):
            lhs = bath.rate(-w)
            rhs = math.exp(-0.7 * float(w)) * bath.rate(w)
            assert abs(lhs - rhs) <= 1e-12 * max(lhs, rhs)

    def test_custom_table_kms_validation(self):
        beta = 1.0
        good = ((Fraction(2), 0.8), (Fraction(-2), 0.8 * math.exp(-2.0)),
                (Fraction(0), 0.5))
        bath = st.BathSpec(beta=beta, rate_preset="custom", table=good)
        assert bath.rate(Fraction(2)) == 0.8
        bad = ((Fraction(2), 0.8), (Fraction(-2), 0.5), (Fraction(0), 0.5))
        with pytest.raises(ValidationError, match="detailed balance"):
            st.BathSpec(beta=beta, rate_preset="custom", table=bad)

    def test_h_min_single_qubit(self, model_1q):
        bath = st.BathSpec(beta=1.0)
        assert st.h_min(model_1q, bath) == pytest.approx(1.0 / (1.0 + math.exp(2.0)),
                                                         rel=1e-14)

    def test_negative_beta_rejected(self):
        with pytest.raises(ValidationError):
            st.BathSpec(beta=-0.1)

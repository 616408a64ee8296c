"""Exact Davies and heat-bath generators for small models.

Two construction routes are provided and cross-checked against each other:

* dense:  jump operators built as explicit 2^N x 2^N matrices, assembled
          into the 4^N x 4^N Heisenberg-picture superoperator and expressed
          in the Hilbert-Schmidt-normalized Pauli basis;
* coset:  the quadratic (Dirichlet) form -tr[rho^1/2 f^+ rho^1/2 L(f)]
          assembled blockwise over the cosets of the stabilizer group,
          one Hermitian positive-semidefinite block per coset.

Both pictures carry the same spectrum relative to the Gibbs-weighted
metric, which is diagonal in the coset basis, so exact gaps of systems far
beyond the dense cap (e.g. sixteen-dimensional superoperators per coset for
a 2x2 toric lattice) remain tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .pauli import (
    BathSpec,
    Pauli,
    ResourceError,
    StabilizerModel,
    ValidationError,
    h_min,
)

_AXES4 = ("I", "X", "Y", "Z")

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SITE_MATS = {"I": _I2, "X": _X2, "Y": _Y2, "Z": _Z2}


class NonPrimitiveError(ValidationError):
    """The generator has more than one stationary mode."""


def pauli_matrix(p: Pauli) -> np.ndarray:
    """Hermitian matrix of a phase-free Pauli (site 0 is the leftmost
    tensor factor)."""
    m = np.array([[1.0 + 0.0j]])
    for ch in str(p):
        m = np.kron(m, _SITE_MATS[ch])
    return m


# -- Gibbs data -------------------------------------------------------------

@dataclass(frozen=True)
class GibbsData:
    """Spectral data of the Gibbs state over realized syndromes."""

    model: StabilizerModel
    beta: float
    realized: tuple[int, ...]
    energies: tuple[Fraction, ...]
    z: float
    rho: np.ndarray         # rho_a = exp(-beta eps(a)) / Z, per realized a
    degeneracy: int         # rank of each projector P(a) = 2^N / 2^rank

    @property
    def h_norm(self) -> Fraction:
        return max(abs(e) for e in self.energies)

    @property
    def rho_inv_norm(self) -> float:
        """Inverse of the smallest eigenvalue of the Gibbs state."""
        return self.z * math.exp(self.beta * float(max(self.energies)))

    def index(self, a: int) -> int:
        return self.realized.index(a)


def gibbs_data(model: StabilizerModel, beta: float) -> GibbsData:
    realized = model.realized_syndromes()
    energies = tuple(model.energy(a) for a in realized)
    deg = 2 ** (model.n_qubits - model.rank)
    weights = np.array([math.exp(-beta * float(e)) for e in energies])
    z = deg * weights.sum()
    return GibbsData(model, beta, realized, energies, z, weights / z, deg)


class _DenseRep:
    """Dense matrices for one model: generators, spectral projectors,
    Gibbs powers and the normalized-Pauli change of basis."""

    def __init__(self, model: StabilizerModel, cap: int = 6):
        if model.n_qubits > cap:
            raise ResourceError(
                f"dense route is capped at {cap} qubits; use the coset route"
            )
        self.model = model
        n = model.n_qubits
        self.dim = 1 << n
        self.gens = [pauli_matrix(g) for g in model.generators]
        eye = np.eye(self.dim, dtype=complex)
        self.projectors: dict[int, np.ndarray] = {}
        for a in model.realized_syndromes():
            p = eye
            for k, g in enumerate(self.gens):
                sign = -1.0 if (a >> k) & 1 else 1.0
                p = p @ (0.5 * (eye + sign * g))
            self.projectors[a] = p

    def rho_power(self, gibbs: GibbsData, s: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for a, w in zip(gibbs.realized, gibbs.rho):
            out += (w ** s) * self.projectors[a]
        return out

    def pauli_basis(self) -> np.ndarray:
        """Unitary whose columns are vec(sigma(nu)) / 2^{N/2}, nu in code
        order (x bits low, z bits high)."""
        n = self.model.n_qubits
        d2 = self.dim * self.dim
        u = np.empty((d2, d2), dtype=complex)
        norm = 2.0 ** (-n / 2.0)
        mask = (1 << n) - 1
        for code in range(d2):
            p = Pauli(n, code & mask, code >> n)
            u[:, code] = pauli_matrix(p).reshape(-1, order="F") * norm
        return u


def _vec(x: np.ndarray) -> np.ndarray:
    return x.reshape(-1, order="F")


def _unvec(v: np.ndarray, d: int) -> np.ndarray:
    return v.reshape(d, d, order="F")


def _lindblad_term(a_op: np.ndarray) -> np.ndarray:
    """Heisenberg superoperator of one jump operator, column-stacking:
    f -> A^+ f A - (A^+ A f + f A^+ A) / 2."""
    d = a_op.shape[0]
    eye = np.eye(d)
    aa = a_op.conj().T @ a_op
    out = np.kron(a_op.T, a_op.conj().T)
    out -= 0.5 * (np.kron(eye, aa) + np.kron(aa.T, eye))
    return out


def _alpha_syndromes(model: StabilizerModel, j: int) -> dict[str, int]:
    sx = model.slot_syndrome(j, "X")
    sz = model.slot_syndrome(j, "Z")
    return {"I": 0, "X": sx, "Z": sz, "Y": sx ^ sz}


def g_function(model: StabilizerModel, bath: BathSpec, j: int, a: int) -> float:
    """G_j(a) = (1/4 sum_alpha exp(beta omega^alpha_j(a)))^{-1/2}; the
    normalization of the site-j heat-bath jump operators on sector a."""
    scale = model.coupling_scale
    tot = 0.0
    for ep in _alpha_syndromes(model, j).values():
        w = model.omega_int(a, ep)
        tot += math.exp(bath.beta * w / scale)
    return (0.25 * tot) ** -0.5


def heatbath_dense(model: StabilizerModel, bath: BathSpec, cap: int = 6) -> np.ndarray:
    """Heisenberg-picture heat-bath generator in the normalized Pauli basis.

    Jump operators are A_{j,alpha} = (1/2) gamma_j sigma(alpha_j) with
    gamma_j = sum_a G_j(a) P(a); the four alphas per site satisfy
    sum_alpha A^+ A = identity, so the conditional-expectation form
    Q_j(f) = E_j(f) - f is reproduced exactly.
    """
    rep = _DenseRep(model, cap)
    d = rep.dim
    lhat = np.zeros((d * d, d * d), dtype=complex)
    for j in range(model.n_qubits):
        gamma = np.zeros((d, d), dtype=complex)
        for a in model.realized_syndromes():
            gamma += g_function(model, bath, j, a) * rep.projectors[a]
        for ax in _AXES4:
            sig = pauli_matrix(Pauli.single_site(model.n_qubits, j, ax)) \
                if ax != "I" else np.eye(d, dtype=complex)
            lhat += _lindblad_term(0.5 * (gamma @ sig))
    u = rep.pauli_basis()
    lp = u.conj().T @ lhat @ u
    if np.abs(lp.imag).max() > 1e-10:
        raise ValidationError("heat-bath generator is not real in the Pauli basis")
    return lp.real


def davies_dense(model: StabilizerModel, bath: BathSpec, cap: int = 6) -> np.ndarray:
    """Heisenberg-picture Davies generator in the normalized Pauli basis.

    For each site and each nontrivial single-site coupling, jump operators
    sigma(alpha_j) P_omega are grouped by exact rational equality of the
    Bohr frequency omega and weighted by the bath rate h(omega).  The
    identity coupling commutes with everything and drops out.
    """
    rep = _DenseRep(model, cap)
    d = rep.dim
    scale = model.coupling_scale
    lhat = np.zeros((d * d, d * d), dtype=complex)
    for j in range(model.n_qubits):
        syn = _alpha_syndromes(model, j)
        for ax in ("X", "Y", "Z"):
            groups: dict[int, np.ndarray] = {}
            for a in model.realized_syndromes():
                w = model.omega_int(a, syn[ax])
                if w not in groups:
                    groups[w] = np.zeros((d, d), dtype=complex)
                groups[w] += rep.projectors[a]
            sig = pauli_matrix(Pauli.single_site(model.n_qubits, j, ax))
            for w, proj in groups.items():
                rate = bath.rate(Fraction(w, scale))
                lhat += rate * _lindblad_term(sig @ proj)
    u = rep.pauli_basis()
    lp = u.conj().T @ lhat @ u
    if np.abs(lp.imag).max() > 1e-10:
        raise ValidationError("Davies generator is not real in the Pauli basis")
    return lp.real


def kms_metric(model: StabilizerModel, gibbs: GibbsData, cap: int = 6) -> np.ndarray:
    """Matrix of <f, g>_rho = tr[rho^1/2 f^+ rho^1/2 g] in the normalized
    Pauli basis; symmetric positive definite for beta < inf."""
    rep = _DenseRep(model, cap)
    sq = rep.rho_power(gibbs, 0.5)
    u = rep.pauli_basis()
    m = u.conj().T @ np.kron(sq.T, sq) @ u
    return m.real


def dirichlet_dense_from_generator(l_pauli: np.ndarray, model: StabilizerModel,
                                   gibbs: GibbsData, cap: int = 6) -> np.ndarray:
    """Dirichlet matrix -tr[rho^1/2 f^+ rho^1/2 L(f)] from any generator
    matrix, symmetrized; Hermitian PSD for detailed-balance generators."""
    m = kms_metric(model, gibbs, cap)
    e = -(m @ l_pauli)
    return 0.5 * (e + e.T)


def detailed_balance_residual(l_pauli: np.ndarray, model: StabilizerModel,
                              gibbs: GibbsData, cap: int = 6) -> float:
    """Max-entry asymmetry of M L, normalized by the scale of M L; zero
    exactly when the generator is self-adjoint for <.,.>_rho."""
    m = kms_metric(model, gibbs, cap)
    ml = m @ l_pauli
    scale = max(np.abs(ml).max(), 1e-300)
    return float(np.abs(ml - ml.T).max() / scale)


# -- coset blocks ------------------------------------------------------------

@dataclass(frozen=True)
class CosetBlock:
    """One Hermitian PSD Dirichlet block over a stabilizer coset.

    ``matrix`` is indexed by realized syndromes (model order); ``metric``
    holds the diagonal Gibbs weights sqrt(rho_a rho_{a + e(rep)}), so the
    generator eigenvalues on this coset are minus the eigenvalues of
    D^{-1/2} matrix D^{-1/2}.
    """

    rep: Pauli
    family: str
    matrix: np.ndarray
    metric: np.ndarray


def coset_representatives(model: StabilizerModel, cap: int = 1 << 20) -> list[Pauli]:
    """One representative per coset of the (phase-free) stabilizer group,
    smallest code first: 4^N / 2^rank cosets in total."""
    n = model.n_qubits
    total = 1 << (2 * n)
    n_cosets = total >> model.rank
    if n_cosets > cap:
        raise ResourceError(f"{n_cosets} cosets exceed the cap {cap}")
    if total > (1 << 26):
        raise ResourceError("coset enumeration needs 4^N <= 2^26")

    group_codes = [0]
    codes = [(g.x | (g.z << n)) for g in model.generators]
    basis: list[int] = []
    for c in codes:
        cur = c
        for b in basis:
            if cur & (b & -b):
                cur ^= b
        if cur:
            basis.append(cur)
    for b in basis:
        group_codes += [s ^ b for s in group_codes]

    visited = bytearray(total)
    reps = []
    mask = (1 << n) - 1
    for code in range(total):
        if visited[code]:
            continue
        reps.append(Pauli(n, code & mask, code >> n))
        for s in group_codes:
            visited[code ^ s] = 1
    return reps


class _BlockBuilder:
    """Precomputed per-model tables shared by all coset blocks."""

    def __init__(self, model: StabilizerModel, bath: BathSpec, gibbs: GibbsData):
        self.model = model
        self.bath = bath
        self.gibbs = gibbs
        realized = gibbs.realized
        self.nreal = len(realized)
        self.pos = {a: i for i, a in enumerate(realized)}
        self.realized = realized

        # omega^alpha_j(a) as exact scaled integers, h rates, permutations
        self.alpha_syn: list[dict[str, int]] = []
        self.omega: dict[tuple[int, str], np.ndarray] = {}
        self.rates: dict[tuple[int, str], np.ndarray] = {}
        self.perm: dict[tuple[int, str], np.ndarray] = {}
        scale = model.coupling_scale
        for j in range(model.n_qubits):
            syn = _alpha_syndromes(model, j)
            self.alpha_syn.append(syn)
            for ax in _AXES4:
                ep = syn[ax]
                w = np.array([model.omega_int(a, ep) for a in realized], dtype=np.int64)
                self.omega[(j, ax)] = w
                self.rates[(j, ax)] = np.array(
                    [bath.rate(Fraction(int(v), scale)) for v in w]
                )
                self.perm[(j, ax)] = np.array(
                    [self.pos[a ^ ep] for a in realized], dtype=np.intp
                )
        self.g_table = np.empty((model.n_qubits, self.nreal))
        for j in range(model.n_qubits):
            for i, a in enumerate(realized):
                self.g_table[j, i] = g_function(model, bath, j, a)

    def _coset_tables(self, rep_pauli: Pauli):
        e_rep = self.model.syndrome_of_code(rep_pauli.x, rep_pauli.z)
        shift = np.array([self.pos[a ^ e_rep] for a in self.realized], dtype=np.intp)
        sq = np.sqrt(self.gibbs.rho * self.gibbs.rho[shift])
        return shift, sq

    def _theta(self, j: int, ax: str, rep_pauli: Pauli) -> float:
        if ax == "I":
            return 1.0
        alpha = Pauli.single_site(self.model.n_qubits, j, ax)
        anti = ((alpha.x & rep_pauli.z).bit_count()
                + (alpha.z & rep_pauli.x).bit_count()) & 1
        return -1.0 if anti else 1.0

    def heatbath_block(self, rep_pauli: Pauli) -> CosetBlock:
        shift, sq = self._coset_tables(rep_pauli)
        nr = self.nreal
        e = np.zeros((nr, nr))
        idx = np.arange(nr)
        e[idx, idx] += self.model.n_qubits * sq
        for j in range(self.model.n_qubits):
            g = self.g_table[j]
            g_shift = g[shift]
            for ax in _AXES4:
                th = self._theta(j, ax, rep_pauli)
                perm = self.perm[(j, ax)]
                # column a, row a + e(alpha): -(1/4) G(a) G(a^rep) theta sq[row]
                e[perm, idx] -= 0.25 * th * g * g_shift * sq[perm]
        return CosetBlock(rep_pauli, "heatbath", e, sq)

    def davies_block(self, rep_pauli: Pauli) -> CosetBlock:
        shift, sq = self._coset_tables(rep_pauli)
        nr = self.nreal
        e = np.zeros((nr, nr))
        idx = np.arange(nr)
        for j in range(self.model.n_qubits):
            for ax in _AXES4:
                th = self._theta(j, ax, rep_pauli)
                perm = self.perm[(j, ax)]
                h = self.rates[(j, ax)]
                w = self.omega[(j, ax)]
                e[idx, idx] += 0.5 * (h + h[shift]) * sq
                same = w == w[shift]
                # row a, column a + e(alpha): -theta h(w(a)) [w(a) = w(a^rep)] sq[a]
                e[idx, perm] -= np.where(same, th * h * sq, 0.0)
        return CosetBlock(rep_pauli, "davies", e, sq)


def dirichlet_blocks(model: StabilizerModel, bath: BathSpec,
                     family: str = "davies",
                     reps: list[Pauli] | None = None,
                     cap_rank: int = 20,
                     cap_cosets: int = 1 << 20):
    """Yield the Dirichlet coset blocks of the chosen generator family.

    The direct sum of the blocks is exactly the dense Dirichlet matrix
    expressed in the coset basis {P(a) sigma(rep)}; build order follows
    the representative enumeration and is deterministic.
    """
    if model.rank > cap_rank:
        raise ResourceError(f"rank {model.rank} exceeds the block cap {cap_rank}")
    if family not in ("davies", "heatbath"):
        raise ValidationError(f"unknown generator family {family!r}")
    gibbs = gibbs_data(model, bath.beta)
    builder = _BlockBuilder(model, bath, gibbs)
    if reps is None:
        reps = coset_representatives(model, cap=cap_cosets)
    build = builder.davies_block if family == "davies" else builder.heatbath_block
    for rep_pauli in reps:
        yield build(rep_pauli)


# -- spectral gaps -----------------------------------------------------------

@dataclass(frozen=True)
class GapResult:
    """Spectral gap with zero-mode bookkeeping.

    ``witness`` identifies where the gap is attained: the coset
    representative (coset route) or the eigenvector coefficients in the
    normalized Pauli basis (dense route).
    """

    gap: float
    zero_modes: int
    method: str
    witness: object = None


_ZERO_MODE_REL = 1e-9


def gap_from_dense(l_pauli: np.ndarray, model: StabilizerModel,
                   gibbs: GibbsData, cap: int = 6) -> GapResult:
    """Gap of a detailed-balance generator from its dense Pauli-basis
    matrix, via the generalized problem (Dirichlet form, KMS metric)."""
    e = dirichlet_dense_from_generator(l_pauli, model, gibbs, cap)
    m = kms_metric(model, gibbs, cap)
    vals, vecs = scipy.linalg.eigh(e, m)
    top = max(vals.max(), 0.0)
    thresh = _ZERO_MODE_REL * top
    zero = int((vals <= thresh).sum())
    if zero != 1:
        raise NonPrimitiveError(
            f"generator has {zero} stationary modes; expected exactly one"
        )
    gap_idx = int(np.argsort(vals)[1])
    return GapResult(float(np.sort(vals)[1]), zero, "dense",
                     witness=vecs[:, gap_idx])


def gap_from_blocks(blocks) -> GapResult:
    """Gap from an iterable of coset blocks: minimum nonzero eigenvalue of
    D^{-1/2} E D^{-1/2} over all blocks, with exactly one zero mode in
    total (the identity coset's constant mode)."""
    all_vals: list[np.ndarray] = []
    reps: list[Pauli] = []
    for blk in blocks:
        d = 1.0 / np.sqrt(blk.metric)
        w = blk.matrix * np.outer(d, d)
        vals = np.linalg.eigvalsh(0.5 * (w + w.T))
        all_vals.append(vals)
        reps.append(blk.rep)
    if not all_vals:
        raise ValidationError("no blocks supplied")
    top = max(v.max() for v in all_vals)
    thresh = _ZERO_MODE_REL * max(top, 0.0)
    zero = sum(int((v <= thresh).sum()) for v in all_vals)
    if zero != 1:
        raise NonPrimitiveError(
            f"generator has {zero} stationary modes; expected exactly one"
        )
    best = math.inf
    best_rep = None
    for v, rep in zip(all_vals, reps):
        pos = v[v > thresh]
        if len(pos) and pos.min() < best:
            best = float(pos.min())
            best_rep = rep
    return GapResult(best, zero, "coset", witness=best_rep)


def spectral_gap(source, model: StabilizerModel | None = None,
                 gibbs: GibbsData | None = None) -> GapResult:
    """Gap of a dense Pauli-basis generator (pass model and gibbs) or of an
    iterable of coset blocks."""
    if isinstance(source, np.ndarray):
        if model is None or gibbs is None:
            raise ValidationError("dense gap needs the model and Gibbs data")
        return gap_from_dense(source, model, gibbs)
    return gap_from_blocks(source)


# -- comparison constants and checks ----------------------------------------

def tau_and_r(model: StabilizerModel, bath: BathSpec) -> tuple[float, float]:
    """Dirichlet comparison constant tau = max_{j,a} 2 G_j(a)^2 / h_min over
    realized syndromes, and the analytic lower bound on R = 1/tau:
    R >= 1/2 h_min exp(-2 beta J S_*)."""
    from .hightemp import adjacency

    hm = h_min(model, bath)
    g_max = 0.0
    for j in range(model.n_qubits):
        for a in model.realized_syndromes():
            g_max = max(g_max, g_function(model, bath, j, a))
    tau = 2.0 * g_max * g_max / hm
    s_star = adjacency(model).s_star_max()
    r_lower = 0.5 * hm * math.exp(-2.0 * bath.beta * float(model.max_coupling) * s_star)
    return tau, r_lower


def variance_and_dirichlet(model: StabilizerModel, gibbs: GibbsData,
                           f: np.ndarray, e_hat: np.ndarray,
                           cap: int = 6) -> tuple[float, float]:
    """Variance tr[rho^1/2 f^+ rho^1/2 f] - |tr[rho f]|^2 and Dirichlet
    energy of a dense observable f against a Pauli-basis Dirichlet matrix."""
    rep = _DenseRep(model, cap)
    rho = rep.rho_power(gibbs, 1.0)
    sq = rep.rho_power(gibbs, 0.5)
    var = float((np.trace(sq @ f.conj().T @ sq @ f)
                 - abs(np.trace(rho @ f)) ** 2).real)
    u = rep.pauli_basis()
    coeff = u.conj().T @ _vec(f)
    energy = float((coeff.conj() @ e_hat @ coeff).real)
    return var, energy


def poincare_check(gap: float, var: float, energy: float,
                   tol: float = 1e-10) -> bool:
    """The variational gap inequality gap * Var(f) <= E(f), with slack."""
    return gap * var <= energy + tol


def oscillator_norm(f: np.ndarray, n_qubits: int) -> float:
    """Sum over sites of the spectral norms of the discrete gradients
    f - ptr_k(f), where ptr_k is the normalized partial trace (twirl)."""
    total = 0.0
    for k in range(n_qubits):
        twirl = np.zeros_like(f)
        for ax in _AXES4:
            sig = (np.eye(f.shape[0], dtype=complex) if ax == "I"
                   else pauli_matrix(Pauli.single_site(n_qubits, k, ax)))
            twirl += 0.25 * (sig @ f @ sig)
        total += np.linalg.norm(f - twirl, 2)
    return float(total)


@dataclass(frozen=True)
class ErgodicityPoint:
    t: float
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-10


def ergodicity_check(model: StabilizerModel, bath: BathSpec, f: np.ndarray,
                     t_grid, kappa_value: float, cap: int = 6) -> list[ErgodicityPoint]:
    """Exact heat-bath evolution versus the oscillator-norm decay bound:

        |T_t(f) - tr(rho f)| <= exp(-(1 - kappa) t) |||f|||.

    The semigroup is evaluated through the eigendecomposition of the
    KMS-symmetrized generator, so arbitrary grid times are exact."""
    if kappa_value >= 1.0:
        raise ValidationError("ergodicity bound needs kappa < 1")
    rep = _DenseRep(model, cap)
    d = rep.dim
    gibbs = gibbs_data(model, bath.beta)
    q_pauli = heatbath_dense(model, bath, cap)
    u = rep.pauli_basis()
    qhat = u @ q_pauli @ u.conj().T  # computational vectorization

    quarter = rep.rho_power(gibbs, 0.25)
    inv_quarter = rep.rho_power(gibbs, -0.25)
    m_half = np.kron(quarter.T, quarter)
    m_inv_half = np.kron(inv_quarter.T, inv_quarter)
    w = m_half @ qhat @ m_inv_half
    w = 0.5 * (w + w.conj().T)
    vals, vecs = np.linalg.eigh(w)

    rho = rep.rho_power(gibbs, 1.0)
    mean = np.trace(rho @ f)
    osc = oscillator_norm(f, model.n_qubits)
    coeff = vecs.conj().T @ (m_half @ _vec(f))
    out = []
    for t in t_grid:
        ft = _unvec(m_inv_half @ (vecs @ (np.exp(vals * t) * coeff)), d)
        lhs = float(np.linalg.norm(ft - mean * np.eye(d), 2))
        rhs = math.exp(-(1.0 - kappa_value) * t) * osc
        out.append(ErgodicityPoint(float(t), lhs, rhs))
    return out


@dataclass(frozen=True)
class MixingTimeBound:
    """Upper bounds (1 + ln sqrt(|rho^{-1}|)) / gap on the mixing time.

    ``from_exact`` uses the exact smallest Gibbs eigenvalue; ``from_h_norm``
    replaces it by ln|rho^{-1}| <= 2 beta |H| + N ln 2, which follows from
    |rho^{-1}| = Z exp(beta max eps) and Z <= 2^N exp(beta |H|).  The two
    coincide at beta = 0, where |rho^{-1}| = 2^N exactly."""

    gap: float
    from_exact: float
    from_h_norm: float
    formula: str = "tmix"


def mixing_time_bound(gap: float, gibbs: GibbsData) -> MixingTimeBound:
    if gap <= 0:
        raise ValidationError("mixing time needs a positive gap")
    log_exact = math.log(gibbs.rho_inv_norm)
    log_bound = (2.0 * gibbs.beta * float(gibbs.h_norm)
                 + gibbs.model.n_qubits * math.log(2.0))
    return MixingTimeBound(
        gap,
        (1.0 + 0.5 * log_exact) / gap,
        (1.0 + 0.5 * log_bound) / gap,
    )


# -- structural residuals ----------------------------------------------------

def unitality_residual(l_pauli: np.ndarray) -> float:
    """Norm of L(identity) relative to the generator scale; the identity is
    the first normalized Pauli basis vector."""
    scale = max(np.abs(l_pauli).max(), 1e-300)
    return float(np.abs(l_pauli[:, 0]).max() / scale)


def fixed_point_residual(l_pauli: np.ndarray, model: StabilizerModel,
                         gibbs: GibbsData, cap: int = 6) -> float:
    """Norm of the Schroedinger adjoint applied to the Gibbs state,
    relative to the generator scale."""
    rep = _DenseRep(model, cap)
    u = rep.pauli_basis()
    lhat = u @ l_pauli @ u.conj().T
    rho_vec = _vec(rep.rho_power(gibbs, 1.0))
    resid = lhat.conj().T @ rho_vec
    scale = max(np.abs(l_pauli).max(), 1e-300)
    return float(np.abs(resid).max() / scale)


def spectrum_reality_residual(l_pauli: np.ndarray) -> float:
    """Largest imaginary part of the generator spectrum, relative to the
    spectral radius."""
    vals = np.linalg.eigvals(l_pauli)
    scale = max(np.abs(vals).max(), 1e-300)
    return float(np.abs(vals.imag).max() / scale)

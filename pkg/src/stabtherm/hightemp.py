"""Locality data, the condition number kappa(beta), and the rapid-mixing
temperature window.

Three variants of kappa are provided, ordered by tightness:

  simplified    counts shared stabilizers only; closed form in |N_j|,
                |S_j| and the pairwise overlaps |S_j ^ S_m|
  proposition   replaces the counting bounds by exact syndrome weights
                and the exact pair constants eps(m, j)
  numeric       evaluates the underlying operator norms |gamma_j| and
                |d_m gamma_j| exactly over local syndrome patterns

Each variant vanishes at beta = 0, grows monotonically, and upper-bounds
the next; kappa < 1 certifies a system-size-independent spectral gap and
its unit root defines the dynamical critical temperature.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.optimize import brentq

from .pauli import (
    BathSpec,
    Pauli,
    ResourceError,
    StabilizerModel,
    ValidationError,
    h_min,
)

_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class AdjacencyData:
    """Per-site locality data of a model.

    ``neighborhoods[j]`` lists the sites sharing a generator with j, with j
    itself first and the rest ascending.  ``site_generators[j]`` lists the
    generators supported on j.  ``overlap(j, m)`` is |S_j ^ S_m|.
    """

    neighborhoods: tuple[tuple[int, ...], ...]
    site_generators: tuple[tuple[int, ...], ...]
    _overlaps: dict = field(hash=False)

    def overlap(self, j: int, m: int) -> int:
        return self._overlaps.get((j, m), 0)

    def s_star_max(self) -> int:
        return max(len(s) for s in self.site_generators)

    def s_star_min(self) -> int:
        return min(len(s) for s in self.site_generators)


def adjacency(model: StabilizerModel) -> AdjacencyData:
    supports = model.supports()
    n = model.n_qubits
    site_gens = [[] for _ in range(n)]
    for k, supp in enumerate(supports):
        for j in supp:
            site_gens[j].append(k)
    neighborhoods = []
    overlaps: dict[tuple[int, int], int] = {}
    for j in range(n):
        near = set()
        for k in site_gens[j]:
            near.update(supports[k])
        near.discard(j)
        neighborhoods.append((j,) + tuple(sorted(near)))
        sj = set(site_gens[j])
        for m in neighborhoods[j]:
            overlaps[(j, m)] = len(sj & set(site_gens[m]))
    return AdjacencyData(
        tuple(neighborhoods),
        tuple(tuple(s) for s in site_gens),
        overlaps,
    )


@dataclass(frozen=True)
class KappaReport:
    variant: str
    beta: float
    kappa: float
    per_site: tuple[float, ...]
    argmax_site: int


def _site_syndromes(model: StabilizerModel, j: int) -> dict[str, int]:
    """Syndrome bitmasks of the three nontrivial single-site Paulis at j."""
    return {
        ax: model.syndrome(Pauli.single_site(model.n_qubits, j, ax)).bits
        for ax in _AXES
    }


def epsilon_pair(model: StabilizerModel, m: int, j: int) -> Fraction:
    """Largest coupling-weighted count of generators that respond to a
    single-site Pauli at j and one at m simultaneously:
    max over the 9 nontrivial pairs of sum_k J_k e_k(alpha_j) e_k(tau_m)."""
    ej = _site_syndromes(model, j)
    em = _site_syndromes(model, m)
    best = Fraction(0)
    for a in _AXES:
        for b in _AXES:
            shared = ej[a] & em[b]
            if shared:
                val = sum(
                    (model.couplings[k] for k in range(model.n_terms) if (shared >> k) & 1),
                    Fraction(0),
                )
                best = max(best, val)
    return best


def _neighborhood_coupling(model: StabilizerModel, adj: AdjacencyData, j: int) -> Fraction:
    """Largest coupling among generators touching the neighborhood of j."""
    gens: set[int] = set()
    for m in adj.neighborhoods[j]:
        gens.update(adj.site_generators[m])
    if not gens:
        return Fraction(0)
    return max(model.couplings[k] for k in gens)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _report(variant: str, beta: float, per_site: list[float]) -> KappaReport:
    arg = max(range(len(per_site)), key=per_site.__getitem__)
    return KappaReport(variant, beta, per_site[arg], tuple(per_site), arg)


def kappa_simplified(model: StabilizerModel, beta: float) -> KappaReport:
    """Closed-form condition number

    kappa(beta) = max_j 3 (|N_j| - 1) e^{2 beta J |S_j|}
                  sum_{l < m in N_j} (e^{2 beta J |S_j ^ S_m|} - 1),

    with the pair sum over ordered positions in the neighborhood list
    (j first, so the inner index m never equals j) and J the largest
    coupling in the neighborhood."""
    adj = adjacency(model)
    per_site = []
    for j in range(model.n_qubits):
        nj = adj.neighborhoods[j]
        J = float(_neighborhood_coupling(model, adj, j))
        pre = 3.0 * (len(nj) - 1) * _exp(2.0 * beta * J * len(adj.site_generators[j]))
        tot = 0.0
        for li in range(len(nj)):
            for mi in range(li + 1, len(nj)):
                tot += _exp(2.0 * beta * J * adj.overlap(j, nj[mi])) - 1.0
        per_site.append(pre * tot)
    return _report("simplified", beta, per_site)


def _gamma_norm_sq(model: StabilizerModel, j: int, beta: float) -> float:
    """|gamma_j|^2 = (1/4 sum_alpha e^{-2 beta w(alpha_j)})^{-1} where
    w(alpha_j) is the coupling-weighted syndrome weight of alpha_j."""
    syn = _site_syndromes(model, j)
    tot = 1.0  # identity term, weight 0
    for ax in _AXES:
        w = sum(
            (float(model.couplings[k]) for k in range(model.n_terms) if (syn[ax] >> k) & 1),
            0.0,
        )
        tot += _exp(-2.0 * beta * w)
    return 4.0 / tot


def kappa_proposition(model: StabilizerModel, beta: float) -> KappaReport:
    """Condition number with exact syndrome weights and pair constants:

    kappa = max_j 3 (|N_j| - 1) |gamma_j|^2
            sum_{l < m in N_j} (e^{2 beta eps(m, j)} - 1).

    Upper-bounded by the simplified variant at every beta."""
    adj = adjacency(model)
    per_site = []
    for j in range(model.n_qubits):
        nj = adj.neighborhoods[j]
        pre = 3.0 * (len(nj) - 1) * _gamma_norm_sq(model, j, beta)
        eps_cache = {m: float(epsilon_pair(model, m, j)) for m in nj[1:]}
        tot = 0.0
        for li in range(len(nj)):
            for mi in range(li + 1, len(nj)):
                tot += _exp(2.0 * beta * eps_cache[nj[mi]]) - 1.0
        per_site.append(pre * tot)
    return _report("proposition", beta, per_site)


def _local_g(model: StabilizerModel, j: int, beta: float, bits: list[int], pattern: int) -> float:
    """G_j evaluated on a local syndrome pattern over the generator indices
    in ``bits`` (all other syndrome bits zero)."""
    syn = _site_syndromes(model, j)
    tot = 1.0
    for ax in _AXES:
        w = 0.0
        for pos, k in enumerate(bits):
            if (syn[ax] >> k) & 1:
                sign = -1.0 if (pattern >> pos) & 1 else 1.0
                w += sign * 2.0 * float(model.couplings[k])
        # omega = -sum_k 2 J_k (-1)^{a_k} e_k(alpha); w accumulated -omega
        tot += _exp(-beta * w)
    return (0.25 * tot) ** -0.5


def grad_gamma_norm(model: StabilizerModel, j: int, m: int, beta: float,
                    cap: int = 1 << 20) -> float:
    """|d_m gamma_j| = max_a |G_j(a) - 1/4 sum_tau G_j(a + e(tau_m))|,
    maximized over all local syndrome patterns on S_j and S_m.

    Maximizing over unconstrained local patterns is an upper bound on the
    realized-syndrome norm, exact when local patterns are unconstrained.
    """
    adjm = _site_syndromes(model, m)
    adjj = _site_syndromes(model, j)
    union = 0
    for s in list(adjm.values()) + list(adjj.values()):
        union |= s
    bits = [k for k in range(model.n_terms) if (union >> k) & 1]
    if 1 << len(bits) > cap:
        raise ResourceError(
            f"local pattern space 2^{len(bits)} exceeds the cap {cap}"
        )
    # positions of each tau_m syndrome within the pattern bits
    tau_masks = []
    for ax in _AXES:
        mask = 0
        for pos, k in enumerate(bits):
            if (adjm[ax] >> k) & 1:
                mask |= 1 << pos
        tau_masks.append(mask)
    best = 0.0
    for pattern in range(1 << len(bits)):
        g = _local_g(model, j, beta, bits, pattern)
        avg = g  # tau = identity
        for mask in tau_masks:
            avg += _local_g(model, j, beta, bits, pattern ^ mask)
        best = max(best, abs(g - 0.25 * avg))
    return best


def kappa_numeric(model: StabilizerModel, beta: float,
                  optimize_ordering: bool = False,
                  cap: int = 1 << 20) -> KappaReport:
    """Condition number from exact operator norms:

    kappa = max_j (|N_j| - 1) sum_{l in N_j} sum_{s after l}
            4 |gamma_j| |d_s gamma_j|,

    where "after" refers to the neighborhood ordering (j first, then
    ascending).  With optimize_ordering, all orderings of N_j \\ {j} are
    tried for |N_j| <= 6 and the smallest value is kept; every ordering
    yields a valid bound."""
    adj = adjacency(model)
    per_site = []
    for j in range(model.n_qubits):
        nj = adj.neighborhoods[j]
        gnorm = _gamma_norm_sq(model, j, beta) ** 0.5
        grads = {m: grad_gamma_norm(model, j, m, beta, cap=cap) for m in nj[1:]}

        def ordered_sum(rest: tuple[int, ...]) -> float:
            # cost of each element is its 1-based position in [j] + rest
            # times nothing: sum over l of the tail sums equals
            # sum_s position(s) * c_s with position counted from 0 at j.
            tot = 0.0
            for pos, s in enumerate(rest, start=1):
                tot += pos * 4.0 * gnorm * grads[s]
            return tot

        rest = nj[1:]
        val = ordered_sum(rest)
        if optimize_ordering and 1 <= len(rest) and len(nj) <= 6:
            val = min(ordered_sum(p) for p in itertools.permutations(rest))
        per_site.append((len(nj) - 1) * val)
    return _report("numeric", beta, per_site)


_VARIANTS = {
    "simplified": kappa_simplified,
    "proposition": kappa_proposition,
    "numeric": kappa_numeric,
}


def kappa(model: StabilizerModel, beta: float, variant: str = "simplified") -> KappaReport:
    try:
        fn = _VARIANTS[variant]
    except KeyError:
        raise ValidationError(f"unknown kappa variant {variant!r}")
    return fn(model, beta)


def critical_beta(model: StabilizerModel, variant: str = "simplified",
                  tol: float = 1e-12) -> float:
    """Largest beta with kappa(beta) < 1, found by bracketing and Brent
    root finding to absolute tolerance tol.  Returns +inf when kappa stays
    below 1 for all temperatures (trivial locality)."""
    def f(b: float) -> float:
        return kappa(model, b, variant).kappa - 1.0

    hi = 1e-6
    for _ in range(80):
        val = f(hi)
        if val > 0.0 or math.isinf(val):
            break
        hi *= 2.0
    else:
        return math.inf
    if math.isinf(f(hi)):
        # shrink back into the finite range for the solver
        lo_fin, hi_fin = hi / 2.0, hi
        for _ in range(200):
            mid = 0.5 * (lo_fin + hi_fin)
            v = f(mid)
            if math.isinf(v):
                hi_fin = mid
            elif v > 0.0:
                return float(brentq(f, 0.0, mid, xtol=tol))
            else:
                lo_fin = mid
        raise ValidationError("could not bracket the unit root of kappa")
    return float(brentq(f, 0.0, hi, xtol=tol))


def first_order_beta_estimate(model: StabilizerModel) -> float:
    """Closed-form small-beta estimate solving the linearized kappa = 1:

    6 beta J (|N_j| - 1) sum_{l < m in N_j} |S_j ^ S_m| = 1

    at the worst site.  Returns +inf for models with trivial locality."""
    adj = adjacency(model)
    worst = 0.0
    for j in range(model.n_qubits):
        nj = adj.neighborhoods[j]
        J = float(_neighborhood_coupling(model, adj, j))
        tot = 0
        for li in range(len(nj)):
            for mi in range(li + 1, len(nj)):
                tot += adj.overlap(j, nj[mi])
        worst = max(worst, 6.0 * J * (len(nj) - 1) * tot)
    return math.inf if worst == 0.0 else 1.0 / worst


@dataclass(frozen=True)
class HighTempBound:
    """Gap bound 1/2 h_min e^{-2 beta J S_*} (1 - kappa), zero when the
    condition number reaches one."""

    value: float
    kappa_report: KappaReport
    h_min: float
    s_star: int
    s_star_min: int
    formula: str = "thm1"
    warning: str | None = None


def high_temp_gap_bound(model: StabilizerModel, bath: BathSpec,
                        variant: str = "simplified") -> HighTempBound:
    """System-size-independent lower bound on the Davies gap above the
    critical temperature.  S_* is max_j |S_j| (the safe choice; the report
    also records min_j |S_j|) and J is the largest coupling."""
    adj = adjacency(model)
    rep = kappa(model, bath.beta, variant)
    hm = h_min(model, bath)
    s_max = adj.s_star_max()
    s_min = adj.s_star_min()
    J = float(model.max_coupling)
    if rep.kappa >= 1.0:
        return HighTempBound(0.0, rep, hm, s_max, s_min,
                             warning="kappa >= 1: no high-temperature certificate")
    value = 0.5 * hm * math.exp(-2.0 * bath.beta * J * s_max) * (1.0 - rep.kappa)
    return HighTempBound(value, rep, hm, s_max, s_min)

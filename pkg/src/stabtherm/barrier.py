"""Pauli paths, energy penalties, and the low-temperature gap bound.

A site ordering is a sequence of 2N (site, axis) slots.  Every Pauli eta is
built up along the ordering: a Z slot contributes the Z-part of eta's factor
on that site, an X slot the X-part, so a Y factor appears as Z first and X
second.  The energy penalty of eta is 2 J times the largest number of
generators that commute with the full eta but anticommute with some prefix
of the path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli import (
    AXIS_X,
    AXIS_Z,
    Pauli,
    ResourceError,
    StabilizerModel,
    ValidationError,
)

if hasattr(np, "bitwise_count"):
    def _popcount(arr: np.ndarray) -> np.ndarray:
        return np.bitwise_count(arr)
else:  # numpy < 2.0
    _POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def _popcount(arr: np.ndarray) -> np.ndarray:
        a = np.ascontiguousarray(arr, dtype=np.uint64)
        return _POP8[a.view(np.uint8).reshape(a.shape + (8,))].sum(axis=-1)


@dataclass(frozen=True)
class SiteOrdering:
    """An enumeration of all 2N (site, axis) slots, each exactly once."""

    n_qubits: int
    slots: tuple[tuple[int, str], ...]

    def __post_init__(self):
        expected = {(j, ax) for j in range(self.n_qubits) for ax in (AXIS_Z, AXIS_X)}
        seen = set()
        for slot in self.slots:
            site, axis = slot
            if slot not in expected:
                raise ValidationError(f"invalid slot {slot!r}")
            if slot in seen:
                raise ValidationError(f"duplicate slot {slot!r}")
            seen.add(slot)
        missing = expected - seen
        if missing:
            raise ValidationError(f"ordering is missing slots, e.g. {sorted(missing)[0]!r}")

    @property
    def l_star(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class PenaltyResult:
    """Energy penalty of one Pauli along one ordering."""

    penalty: Fraction
    argmax_step: int
    violated_count: int


@dataclass(frozen=True)
class MaxPenaltyResult:
    """Maximum penalty over a set of Paulis, with a maximizing witness.

    ``exact`` is True for an exhaustive enumeration; a sampled run only
    certifies a lower bound on the true maximum.
    """

    value: Fraction
    witness: Pauli
    violated_count: int
    exact: bool
    n_evaluated: int


def pauli_path(eta: Pauli, gamma: SiteOrdering) -> list[Pauli]:
    """Prefix path from the identity to eta along the ordering.

    Element l accumulates the axis components of eta for the first l slots;
    element 0 is the identity and the last element equals eta.
    """
    if eta.n != gamma.n_qubits:
        raise ValidationError("operator and ordering qubit counts differ")
    path = [Pauli.identity(eta.n)]
    x = z = 0
    for site, axis in gamma.slots:
        if axis == AXIS_X:
            x |= eta.x & (1 << site)
        else:
            z |= eta.z & (1 << site)
        path.append(Pauli(eta.n, x, z))
    return path


def _slot_component(eta: Pauli, site: int, axis: str) -> int:
    if axis == AXIS_X:
        return (eta.x >> site) & 1
    return (eta.z >> site) & 1


def energy_penalty(model: StabilizerModel, eta: Pauli, gamma: SiteOrdering) -> PenaltyResult:
    """Penalty 2 J max_l #{g commuting with eta, anticommuting with eta_l}."""
    if eta.n != model.n_qubits or gamma.n_qubits != model.n_qubits:
        raise ValidationError("model, operator and ordering qubit counts differ")
    full = model.syndrome_of_code(eta.x, eta.z)
    g_mask = ~full & ((1 << model.n_terms) - 1)
    e = 0
    best = 0
    best_step = 0
    for l, (site, axis) in enumerate(gamma.slots, start=1):
        if _slot_component(eta, site, axis):
            e ^= model.slot_syndrome(site, axis)
            count = (e & g_mask).bit_count()
            if count > best:
                best = count
                best_step = l
    return PenaltyResult(2 * model.max_coupling * best, best_step, best)


# -- vectorized batch evaluation -------------------------------------------

def _slot_syndrome_array(model: StabilizerModel, gamma: SiteOrdering) -> np.ndarray:
    if model.n_terms > 63:
        raise ResourceError("vectorized path supports at most 63 generators")
    return np.array(
        [model.slot_syndrome(site, axis) for site, axis in gamma.slots],
        dtype=np.uint64,
    )


def _batch_counts(model, gamma, slot_syn, xs, zs):
    """Max violated-in-reduced-set count along the path for a batch of codes.

    xs, zs are uint64 arrays of Pauli bit vectors.  The result does not
    depend on how a larger enumeration is partitioned into batches.
    """
    sites = np.array([s for s, _ in gamma.slots], dtype=np.uint64)
    is_x = np.array([a == AXIS_X for _, a in gamma.slots])
    comp = np.where(is_x[None, :], xs[:, None] >> sites[None, :],
                    zs[:, None] >> sites[None, :]) & np.uint64(1)
    contrib = comp * slot_syn[None, :]
    cum = np.bitwise_xor.accumulate(contrib, axis=1)
    full = cum[:, -1]
    g_mask = ~full & np.uint64((1 << model.n_terms) - 1)
    counts = _popcount(cum & g_mask[:, None])
    return counts.max(axis=1)


def _sample_codes(model: StabilizerModel, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded mix of uniform Paulis, generator-subset products and short strings.

    Products of generator subsets and low-weight strings are the adversarial
    families that tend to maximize the penalty; roughly half the budget goes
    to them.
    """
    n = model.n_qubits
    rng = np.random.default_rng(seed)
    n_uniform = count - count // 4 - count // 4
    n_prod = count // 4
    n_low = count // 4

    xs_parts = []
    zs_parts = []

    r = rng.integers(1, 1 << (2 * n), size=n_uniform, dtype=np.uint64)
    xs_parts.append(r & np.uint64((1 << n) - 1))
    zs_parts.append(r >> np.uint64(n))

    gen_x = np.array([g.x for g in model.generators], dtype=np.uint64)
    gen_z = np.array([g.z for g in model.generators], dtype=np.uint64)
    masks = rng.integers(1, 1 << model.n_terms, size=n_prod, dtype=np.uint64)
    sel = (masks[:, None] >> np.arange(model.n_terms, dtype=np.uint64)[None, :]) & np.uint64(1)
    xs_parts.append(np.bitwise_xor.reduce(sel * gen_x[None, :], axis=1))
    zs_parts.append(np.bitwise_xor.reduce(sel * gen_z[None, :], axis=1))

    lx = np.zeros(n_low, dtype=np.uint64)
    lz = np.zeros(n_low, dtype=np.uint64)
    weights = rng.integers(1, min(4, n) + 1, size=n_low)
    for i in range(n_low):
        for site in rng.choice(n, size=weights[i], replace=False):
            ax = rng.integers(1, 4)
            if ax & 1:
                lx[i] |= np.uint64(1 << int(site))
            if ax & 2:
                lz[i] |= np.uint64(1 << int(site))
    xs_parts.append(lx)
    zs_parts.append(lz)

    return np.concatenate(xs_parts), np.concatenate(zs_parts)


def max_penalty(
    model: StabilizerModel,
    gamma: SiteOrdering,
    mode: str = "exhaustive",
    samples: int = 0,
    seed: int | None = None,
    cap: int = 1 << 26,
    chunk: int = 1 << 14,
) -> MaxPenaltyResult:
    """Largest energy penalty over Paulis, exhaustive or sampled.

    Exhaustive mode enumerates all 4^N Paulis (requires 4^N <= cap) and
    returns the exact maximum with the first maximizing witness in code
    order.  Sampled mode evaluates a seeded batch and returns a certified
    lower bound on the maximum.
    """
    if gamma.n_qubits != model.n_qubits:
        raise ValidationError("model and ordering qubit counts differ")
    n = model.n_qubits
    slot_syn = _slot_syndrome_array(model, gamma)

    best = -1
    best_code = 0
    n_eval = 0

    if mode == "exhaustive":
        total = 1 << (2 * n)
        if total > cap:
            raise ResourceError(
                f"4^{n} = {total} Paulis exceed the cap {cap}; use sampled mode"
            )
        for start in range(0, total, chunk):
            stop = min(start + chunk, total)
            codes = np.arange(start, stop, dtype=np.uint64)
            xs = codes & np.uint64((1 << n) - 1)
            zs = codes >> np.uint64(n)
            counts = _batch_counts(model, gamma, slot_syn, xs, zs)
            i = int(np.argmax(counts))
            if counts[i] > best:
                best = int(counts[i])
                best_code = start + i
            n_eval += stop - start
        exact = True
        wx = best_code & ((1 << n) - 1)
        wz = best_code >> n
    elif mode == "sampled":
        if samples < 1:
            raise ValidationError("sampled mode needs a positive sample count")
        if seed is None:
            raise ValidationError("sampled mode needs an explicit seed")
        xs_all, zs_all = _sample_codes(model, samples, seed)
        wx = wz = 0
        for start in range(0, len(xs_all), chunk):
            xs = xs_all[start:start + chunk]
            zs = zs_all[start:start + chunk]
            counts = _batch_counts(model, gamma, slot_syn, xs, zs)
            i = int(np.argmax(counts))
            if counts[i] > best:
                best = int(counts[i])
                wx, wz = int(xs[i]), int(zs[i])
            n_eval += len(xs)
        exact = False
    else:
        raise ValidationError(f"unknown mode {mode!r}")

    witness = Pauli(n, int(wx), int(wz))
    return MaxPenaltyResult(
        value=2 * model.max_coupling * best,
        witness=witness,
        violated_count=best,
        exact=exact,
        n_evaluated=n_eval,
    )


def generalized_barrier_exact(model: StabilizerModel, max_qubits: int = 4) -> tuple[Fraction, SiteOrdering]:
    """Exact min over orderings of the max penalty, for tiny models.

    Enumerates all (2N)! slot orderings and all 4^N Paulis, so it is capped
    at max_qubits.  Returns the barrier and a minimizing ordering.
    """
    n = model.n_qubits
    if n > max_qubits:
        raise ResourceError(
            f"exact barrier enumerates (2N)! x 4^N cases; capped at {max_qubits} qubits"
        )
    all_slots = [(j, ax) for j in range(n) for ax in (AXIS_Z, AXIS_X)]
    codes = np.arange(1 << (2 * n), dtype=np.uint64)
    xs = codes & np.uint64((1 << n) - 1)
    zs = codes >> np.uint64(n)

    best_val: int | None = None
    best_gamma: SiteOrdering | None = None
    for perm in itertools.permutations(all_slots):
        gamma = SiteOrdering(n, perm)
        slot_syn = _slot_syndrome_array(model, gamma)
        val = int(_batch_counts(model, gamma, slot_syn, xs, zs).max())
        if best_val is None or val < best_val:
            best_val = val
            best_gamma = gamma
            if best_val == 0:
                break
    return 2 * model.max_coupling * best_val, best_gamma


def low_temp_gap_bound(
    epsilon_bar: Fraction | float,
    beta: float,
    h_min_value: float,
    l_star: int,
) -> float:
    """Low-temperature gap bound h_min / (4 l_star) * exp(-2 beta barrier).

    Valid for any ordering's penalty in place of the optimal barrier, since
    a suboptimal ordering only weakens the bound.
    """
    if l_star < 1:
        raise ValidationError("path length must be positive")
    if h_min_value <= 0:
        raise ValidationError("h_min must be positive")
    if beta < 0:
        raise ValidationError("inverse temperature must be nonnegative")
    return h_min_value / (4.0 * l_star) * math.exp(-2.0 * beta * float(epsilon_bar))

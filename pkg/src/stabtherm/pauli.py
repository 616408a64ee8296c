"""Phase-free Pauli algebra over GF(2) for commuting-generator Hamiltonians.

An N-qubit Pauli operator is stored, up to phase, as a pair of N-bit
integers ``(x, z)``: bit ``j`` of ``x`` is set when the site-``j`` factor
contains sigma^x, bit ``j`` of ``z`` when it contains sigma^z, and both
when the factor is sigma^y.  Composition is bitwise XOR, so every operator
squares to the identity and the usual +-i phases never enter the algebra.
The only sign ever required downstream is the commutation sign
``theta(p, q) = +-1``.

Energies and Bohr frequencies are kept as exact :class:`fractions.Fraction`
values so that frequency coincidences are decided by exact equality rather
than floating-point tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce


class StabthermError(Exception):
    """Base class for all library errors."""


class DimensionError(StabthermError):
    """Operands act on different qubit counts."""


class ValidationError(StabthermError):
    """A model, bath or ordering violates its contract."""


class ResourceError(StabthermError):
    """A configured enumeration cap would be exceeded."""


AXIS_Z = "Z"
AXIS_X = "X"

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}


@dataclass(frozen=True)
class Pauli:
    """A phase-free N-qubit Pauli operator.

    Attributes
    ----------
    n : number of qubits
    x : N-bit integer, X-part
    z : N-bit integer, Z-part
    """

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("Pauli needs at least one qubit")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValidationError("bit vector wider than qubit count")

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(n, 0, 0)

    @classmethod
    def from_string(cls, s: str) -> "Pauli":
        """Build from a string over {I, X, Y, Z}; character 0 is qubit 0."""
        x = z = 0
        for j, ch in enumerate(s):
            try:
                xb, zb = _CHAR_TO_BITS[ch.upper()]
            except KeyError:
                raise ValidationError(f"invalid Pauli character {ch!r} at position {j}")
            x |= xb << j
            z |= zb << j
        return cls(len(s), x, z)

    @classmethod
    def single_site(cls, n: int, site: int, axis: str) -> "Pauli":
        """Single-site X, Y or Z factor on the given site."""
        if not 0 <= site < n:
            raise DimensionError(f"site {site} out of range for {n} qubits")
        xb, zb = _CHAR_TO_BITS[axis.upper()]
        return cls(n, xb << site, zb << site)

    def __str__(self) -> str:
        return "".join(
            _BITS_TO_CHAR[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n)
        )

    def compose(self, other: "Pauli") -> "Pauli":
        """Phase-free product (bitwise XOR of both parts)."""
        if self.n != other.n:
            raise DimensionError("Pauli operators act on different qubit counts")
        return Pauli(self.n, self.x ^ other.x, self.z ^ other.z)

    __mul__ = compose

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        """Number of sites with a nontrivial factor."""
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(j for j in range(self.n) if (s >> j) & 1)

    def site_bits(self, j: int) -> tuple[int, int]:
        return (self.x >> j) & 1, (self.z >> j) & 1


def commutes(p: Pauli, q: Pauli) -> int:
    """Symplectic form of two Paulis: 0 when they commute, 1 otherwise."""
    if p.n != q.n:
        raise DimensionError("Pauli operators act on different qubit counts")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def theta(p: Pauli, q: Pauli) -> int:
    """Commutation sign: +1 if p and q commute, -1 if they anticommute."""
    return -1 if commutes(p, q) else 1


@dataclass(frozen=True)
class Syndrome:
    """M-bit commutation fingerprint of a Pauli against a generator list."""

    bits: int
    n_bits: int

    def __post_init__(self):
        if self.bits >> self.n_bits:
            raise ValidationError("syndrome bits exceed generator count")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        if self.n_bits != other.n_bits:
            raise DimensionError("syndromes have different lengths")
        return Syndrome(self.bits ^ other.bits, self.n_bits)


def _rank_and_kernel(codes: list[int]) -> tuple[int, list[int]]:
    """GF(2) rank of the code list plus a basis of its left kernel.

    Each kernel element is a bitmask over row indices whose XOR is zero,
    i.e. a dependency among the generators.
    """
    basis: list[tuple[int, int]] = []
    kernel: list[int] = []
    for i, code in enumerate(codes):
        cur, mark = code, 1 << i
        for bcode, bmarker in basis:
            if cur & (bcode & -bcode):
                cur ^= bcode
                mark ^= bmarker
        if cur:
            basis.append((cur, mark))
        else:
            kernel.append(mark)
    return len(basis), kernel


def _product_phase_exponent(codes: list[tuple[int, int]]) -> int:
    """Exponent of i (mod 4) for the ordered matrix product of Hermitian Paulis.

    Each code is (x, z); the Hermitian matrix is i^{|x&z|} X^x Z^z.  Valid
    for any list whose phase-free XOR is zero (the product is then +-I).
    """
    exp = 0
    acc_x = acc_z = 0
    for x, z in codes:
        exp = (exp + (x & z).bit_count()) % 4
        # move X^acc Z^acc past the new factor: Z^a X^b = (-1)^{|a&b|} X^b Z^a
        exp = (exp + 2 * ((acc_z & x).bit_count() % 2)) % 4
        acc_x ^= x
        acc_z ^= z
    return exp


class StabilizerModel:
    """A commuting Pauli Hamiltonian ``H = -sum_k J_k g_k`` with J_k > 0.

    Generators may be dependent (e.g. the global constraints of a toric
    lattice); all spectral objects are indexed by the 2^rank syndromes that
    are actually realized.  Couplings are exact rationals so that energies
    and Bohr frequencies group by exact equality.
    """

    def __init__(self, n_qubits: int, generators: list[Pauli], couplings: list[Fraction]):
        if n_qubits < 1:
            raise ValidationError("model needs at least one qubit")
        if not generators:
            raise ValidationError("model needs at least one generator")
        if len(generators) != len(couplings):
            raise ValidationError("generator and coupling counts differ")
        for k, g in enumerate(generators):
            if g.n != n_qubits:
                raise DimensionError(f"generator {k + 1} acts on {g.n} qubits, expected {n_qubits}")
            if g.is_identity:
                raise ValidationError(f"generator {k + 1} is the identity")
        for k, J in enumerate(couplings):
            if J <= 0:
                raise ValidationError(f"coupling J_{k + 1} = {J} must be positive")
        for a in range(len(generators)):
            for b in range(a + 1, len(generators)):
                if commutes(generators[a], generators[b]):
                    raise ValidationError(
                        f"generators {a + 1} and {b + 1} do not commute"
                    )

        self.n_qubits = n_qubits
        self.generators = tuple(generators)
        self.couplings = tuple(Fraction(J) for J in couplings)
        self.n_terms = len(generators)

        codes = [(g.z << n_qubits) | g.x for g in generators]
        self.rank, kernel = _rank_and_kernel(codes)
        for dep in kernel:
            sub = [(generators[i].x, generators[i].z)
                   for i in range(self.n_terms) if (dep >> i) & 1]
            if _product_phase_exponent(sub) != 0:
                members = [i + 1 for i in range(self.n_terms) if (dep >> i) & 1]
                raise ValidationError(
                    f"generators {members} multiply to -identity; "
                    "the generated group is not a valid stabilizer group"
                )
        self._dependencies = tuple(kernel)

        # Syndromes of the 2N single-site factors; the image of the full
        # syndrome map is their GF(2) span.
        self._slot_syndromes: dict[tuple[int, str], int] = {}
        for j in range(n_qubits):
            for axis in (AXIS_X, AXIS_Z):
                p = Pauli.single_site(n_qubits, j, axis)
                self._slot_syndromes[(j, axis)] = self._raw_syndrome(p)

        vecs = list(self._slot_syndromes.values())
        img_basis: list[int] = []
        for v in vecs:
            cur = v
            for b in img_basis:
                if cur & (b & -b):
                    cur ^= b
            if cur:
                img_basis.append(cur)
        self._image_basis = tuple(sorted(img_basis))
        assert len(self._image_basis) == self.rank

        self._realized_cache: tuple[int, ...] | None = None
        self._realized_set: frozenset[int] | None = None

        # Common denominator scale: omega * scale and 2 * energy * scale are
        # integers, enabling exact vectorized comparisons.
        self.coupling_scale = reduce(math.lcm, (J.denominator for J in self.couplings), 1)

    # -- basic maps ----------------------------------------------------

    def _raw_syndrome(self, p: Pauli) -> int:
        bits = 0
        for k, g in enumerate(self.generators):
            bits |= commutes(p, g) << k
        return bits

    def syndrome(self, p: Pauli) -> Syndrome:
        """Commutation fingerprint e(p) against the generator list."""
        if p.n != self.n_qubits:
            raise DimensionError("operator and model qubit counts differ")
        return Syndrome(self._raw_syndrome(p), self.n_terms)

    def syndrome_of_code(self, x: int, z: int) -> int:
        """Syndrome bitmask of the Pauli with raw (x, z) bit vectors.

        Uses GF(2) linearity over the per-slot syndromes, which is much
        faster than M symplectic products when called in bulk.
        """
        bits = 0
        xx, zz = x, z
        while xx:
            j = (xx & -xx).bit_length() - 1
            bits ^= self._slot_syndromes[(j, AXIS_X)]
            xx &= xx - 1
        while zz:
            j = (zz & -zz).bit_length() - 1
            bits ^= self._slot_syndromes[(j, AXIS_Z)]
            zz &= zz - 1
        return bits

    def slot_syndrome(self, site: int, axis: str) -> int:
        """Syndrome bitmask of the single-site X or Z factor."""
        return self._slot_syndromes[(site, axis)]

    def energy(self, b: Syndrome | int) -> Fraction:
        """Exact eigenvalue -sum_k J_k (-1)^{b_k} of the syndrome sector b."""
        bits = b.bits if isinstance(b, Syndrome) else b
        e = Fraction(0)
        for k, J in enumerate(self.couplings):
            e += J if (bits >> k) & 1 else -J
        return e

    def bohr_frequency(self, a: Syndrome | int, p: Pauli, allow_unrealized: bool = False) -> Fraction:
        """Energy transferred when p acts on sector a.

        Equals energy(a) - energy(a XOR e(p)) exactly; this exactness is
        what makes grouping of jump operators by frequency well defined.
        """
        bits = a.bits if isinstance(a, Syndrome) else a
        if not allow_unrealized and bits not in self.realized_set():
            raise ValidationError(f"syndrome {bits:#x} is not realized by this model")
        ep = self._raw_syndrome(p) if p.n == self.n_qubits else self.syndrome(p).bits
        w = Fraction(0)
        for k, J in enumerate(self.couplings):
            if (ep >> k) & 1:
                w += 2 * J if (bits >> k) & 1 else -2 * J
        return w

    # -- realized syndrome enumeration ---------------------------------

    def realized_syndromes(self, cap_rank: int = 24) -> tuple[int, ...]:
        """All 2^rank syndrome bitmasks in the image of the syndrome map.

        Sorted ascending; contains 0 and is closed under XOR.
        """
        if self.rank > cap_rank:
            raise ResourceError(
                f"rank {self.rank} exceeds the enumeration cap {cap_rank}"
            )
        if self._realized_cache is None:
            out = [0]
            for b in self._image_basis:
                out += [s ^ b for s in out]
            out.sort()
            self._realized_cache = tuple(out)
            self._realized_set = frozenset(out)
        return self._realized_cache

    def realized_set(self) -> frozenset[int]:
        if self._realized_set is None:
            self.realized_syndromes()
        return self._realized_set

    # -- convenience ---------------------------------------------------

    @property
    def max_coupling(self) -> Fraction:
        return max(self.couplings)

    def supports(self) -> list[tuple[int, ...]]:
        """Support (site tuple) of each generator."""
        return [g.support for g in self.generators]

    def h_norm(self) -> Fraction:
        """Operator norm of H: max |energy(a)| over realized syndromes."""
        return max(abs(self.energy(a)) for a in self.realized_syndromes())

    def omega_int(self, a_bits: int, ep_bits: int) -> int:
        """Bohr frequency times coupling_scale, as an exact integer.

        a_bits is the starting syndrome, ep_bits the syndrome of the acting
        Pauli.  omega = -sum_k 2 J_k (-1)^{a_k} e_k.
        """
        w = 0
        s = self.coupling_scale
        for k, J in enumerate(self.couplings):
            if (ep_bits >> k) & 1:
                step = 2 * J.numerator * (s // J.denominator)
                w += step if (a_bits >> k) & 1 else -step
        return w

    def __repr__(self) -> str:
        return (f"StabilizerModel(n_qubits={self.n_qubits}, "
                f"n_terms={self.n_terms}, rank={self.rank})")


# -- bath -----------------------------------------------------------------

_KMS_TOL = 1e-12


@dataclass(frozen=True)
class BathSpec:
    """Inverse temperature plus a KMS-consistent transition rate function.

    Presets:
      glauber     h(w) = 1 / (1 + exp(-beta w))
      metropolis  h(w) = min(1, exp(beta w))

    A custom table maps exact rational frequencies to rates and must be
    closed under negation with h(-w) = exp(-beta w) h(w) to 1e-12 relative.
    """

    beta: float
    rate_preset: str = "glauber"
    table: tuple[tuple[Fraction, float], ...] | None = None

    def __post_init__(self):
        if self.beta < 0:
            raise ValidationError("inverse temperature must be nonnegative")
        if self.rate_preset not in ("glauber", "metropolis", "custom"):
            raise ValidationError(f"unknown rate preset {self.rate_preset!r}")
        if self.rate_preset == "custom":
            if not self.table:
                raise ValidationError("custom bath needs a rate table")
            tab = dict(self.table)
            for w, hw in tab.items():
                if hw <= 0:
                    raise ValidationError(f"rate h({w}) = {hw} must be positive")
                if -w not in tab:
                    raise ValidationError(f"rate table is missing -({w})")
                lhs = tab[-w]
                rhs = math.exp(-self.beta * float(w)) * hw
                if abs(lhs - rhs) > _KMS_TOL * max(abs(lhs), abs(rhs), 1.0):
                    raise ValidationError(
                        f"rate table violates detailed balance at omega = {w}"
                    )
        elif self.table is not None:
            raise ValidationError("rate table only makes sense with the custom preset")

    def rate(self, omega: Fraction | float) -> float:
        """Transition rate h(omega) for energy transfer omega."""
        if self.rate_preset == "custom":
            w = Fraction(omega)
            tab = dict(self.table)
            if w not in tab:
                raise ValidationError(f"custom rate table has no entry for omega = {w}")
            return tab[w]
        bw = self.beta * float(omega)
        if self.rate_preset == "glauber":
            return 1.0 / (1.0 + math.exp(-bw))
        return min(1.0, math.exp(bw))


def realized_bohr_frequencies(model: StabilizerModel, include_identity: bool = True) -> set[Fraction]:
    """All Bohr frequencies of single-site couplings over realized sectors.

    The identity coupling contributes omega = 0; it carries zero weight in
    the dissipator but its rate h(0) enters the averaged coefficients, so it
    is included by default.
    """
    freqs: set[Fraction] = {Fraction(0)} if include_identity else set()
    scale = Fraction(model.coupling_scale)
    for j in range(model.n_qubits):
        for axis in ("X", "Y", "Z"):
            p = Pauli.single_site(model.n_qubits, j, axis)
            ep = model.syndrome(p).bits
            for a in model.realized_syndromes():
                freqs.add(Fraction(model.omega_int(a, ep)) / scale)
    return freqs


def h_min(model: StabilizerModel, bath: BathSpec) -> float:
    """Smallest transition rate over all realized Bohr frequencies."""
    return min(bath.rate(w) for w in realized_bohr_frequencies(model))

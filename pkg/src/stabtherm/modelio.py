"""Model and ordering files, plus the builtin lattice constructors.

The .stab format is line oriented UTF-8:

    # optional comments
    qubits <N>
    term <J> <pauli-string>

with one ``term`` line per generator.  ``<J>`` is a positive decimal or
``p/q`` rational (never a binary float, so couplings round-trip exactly)
and ``<pauli-string>`` is a length-N word over {I, X, Y, Z} whose first
character addresses qubit 0.  Term order defines the generator index.

The .ord format lists one ``slot <site> <Z|X>`` line per path slot, 2N
lines in total.
"""

from __future__ import annotations

from fractions import Fraction

from .barrier import SiteOrdering
from .pauli import AXIS_X, AXIS_Z, Pauli, StabilizerModel, ValidationError


class ParseError(ValidationError):
    """Malformed model or ordering text; carries the 1-based line number."""

    def __init__(self, message: str, line: int, column: int | None = None):
        loc = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


def _parse_coupling(text: str, line: int) -> Fraction:
    try:
        J = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse coupling {text!r}", line)
    if J <= 0:
        raise ParseError(f"coupling {text!r} must be positive", line)
    return J


def parse_model(text: str) -> StabilizerModel:
    """Parse a .stab document into a validated model."""
    n_qubits: int | None = None
    generators: list[Pauli] = []
    couplings: list[Fraction] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "qubits":
            if n_qubits is not None:
                raise ParseError("duplicate qubits line", lineno)
            if len(fields) != 2:
                raise ParseError("expected: qubits <N>", lineno)
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise ParseError(f"invalid qubit count {fields[1]!r}", lineno)
            if n_qubits < 1:
                raise ParseError("qubit count must be positive", lineno)
        elif fields[0] == "term":
            if n_qubits is None:
                raise ParseError("term before qubits line", lineno)
            if len(fields) != 3:
                raise ParseError("expected: term <J> <pauli-string>", lineno)
            J = _parse_coupling(fields[1], lineno)
            word = fields[2].upper()
            if len(word) != n_qubits:
                raise ParseError(
                    f"Pauli string has length {len(word)}, expected {n_qubits}", lineno
                )
            col = line.index(fields[2]) + 1
            for offset, ch in enumerate(word):
                if ch not in "IXYZ":
                    raise ParseError(f"invalid Pauli character {ch!r}", lineno, col + offset)
            generators.append(Pauli.from_string(word))
            couplings.append(J)
        else:
            raise ParseError(f"unknown directive {fields[0]!r}", lineno)

    if n_qubits is None:
        raise ParseError("missing qubits line", 1)
    if not generators:
        raise ParseError("model has no term lines", 1)
    return StabilizerModel(n_qubits, generators, couplings)


def serialize_model(model: StabilizerModel) -> str:
    """Byte-deterministic .stab document; parse(serialize(m)) == m."""
    lines = [f"qubits {model.n_qubits}"]
    for g, J in zip(model.generators, model.couplings):
        lines.append(f"term {J} {g}")
    return "\n".join(lines) + "\n"


def load_model(path: str) -> StabilizerModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())


def save_model(model: StabilizerModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(model))


# -- builtin lattices -------------------------------------------------------

def _toric_indices(L: int):
    """Horizontal link (r, c) joins vertices (r, c)-(r, c+1); vertical link
    (r, c) joins (r, c)-(r+1, c).  Horizontal links occupy indices 0..L^2-1
    row-major, vertical links L^2..2L^2-1."""
    def h(r, c):
        return (r % L) * L + (c % L)

    def v(r, c):
        return L * L + (r % L) * L + (c % L)

    return h, v


def build_toric(L: int) -> StabilizerModel:
    """Toric lattice on an L x L torus: N = 2 L^2 link qubits, L^2 vertex
    generators (Z on the four links meeting a vertex) followed by L^2
    plaquette generators (X on the four links bounding a face), all with
    unit coupling.  Two global constraints leave rank 2 L^2 - 2.
    """
    if L < 2:
        raise ValidationError("toric lattice needs L >= 2")
    n = 2 * L * L
    h, v = _toric_indices(L)
    generators: list[Pauli] = []
    for r in range(L):
        for c in range(L):
            z = 0
            for q in (h(r, c), h(r, c - 1), v(r, c), v(r - 1, c)):
                z |= 1 << q
            generators.append(Pauli(n, 0, z))
    for r in range(L):
        for c in range(L):
            x = 0
            for q in (h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)):
                x |= 1 << q
            generators.append(Pauli(n, x, 0))
    return StabilizerModel(n, generators, [Fraction(1)] * len(generators))


def build_ising(dims: int, L: int, periodic: bool = True) -> StabilizerModel:
    """Nearest-neighbour ZZ model with unit couplings.

    dims=1: a chain of L sites; dims=2: an L x L grid, row-major site
    indexing.  With periodic boundaries every site emits one bond per
    lattice direction, so a periodic L=2 ring or torus lists each
    geometric bond twice (doubled coupling), matching the bond-per-site
    convention M = d L^d.
    """
    if L < 2:
        raise ValidationError("Ising lattice needs L >= 2")
    if dims == 1:
        n = L
        pairs = [(i, (i + 1) % L) for i in range(L if periodic else L - 1)]
    elif dims == 2:
        n = L * L

        def idx(r, c):
            return (r % L) * L + (c % L)

        pairs = []
        for r in range(L):
            for c in range(L):
                if periodic or c + 1 < L:
                    pairs.append((idx(r, c), idx(r, c + 1)))
                if periodic or r + 1 < L:
                    pairs.append((idx(r, c), idx(r + 1, c)))
    else:
        raise ValidationError("dims must be 1 or 2")
    generators = [Pauli(n, 0, (1 << a) | (1 << b)) for a, b in pairs]
    return StabilizerModel(n, generators, [Fraction(1)] * len(generators))


# -- orderings --------------------------------------------------------------

def _toric_zx_ordering(model: StabilizerModel) -> SiteOrdering:
    """Two-pass ordering for the toric lattice.

    Z pass: horizontal links column by column (top to bottom within a
    column), then vertical links row by row (left to right).  X pass with
    the sublattice roles reversed: vertical links by columns, then
    horizontal links by rows.  Each pass sweeps complete lattice lines one
    at a time, starting at the top-left corner.
    """
    n = model.n_qubits
    L = int(round((n / 2) ** 0.5))
    if 2 * L * L != n:
        raise ValidationError("toric-zx ordering needs a model with N = 2 L^2 qubits")
    h, v = _toric_indices(L)
    slots: list[tuple[int, str]] = []
    for c in range(L):
        for r in range(L):
            slots.append((h(r, c), AXIS_Z))
    for r in range(L):
        for c in range(L):
            slots.append((v(r, c), AXIS_Z))
    for c in range(L):
        for r in range(L):
            slots.append((v(r, c), AXIS_X))
    for r in range(L):
        for c in range(L):
            slots.append((h(r, c), AXIS_X))
    return SiteOrdering(n, tuple(slots))


def _lex_zx_ordering(model: StabilizerModel) -> SiteOrdering:
    slots = [(j, AXIS_Z) for j in range(model.n_qubits)]
    slots += [(j, AXIS_X) for j in range(model.n_qubits)]
    return SiteOrdering(model.n_qubits, tuple(slots))


_BUILTIN_ORDERINGS = {
    "toric-zx": _toric_zx_ordering,
    "lex-zx": _lex_zx_ordering,
    "lexicographic-zx": _lex_zx_ordering,
}


def builtin_ordering(name: str, model: StabilizerModel) -> SiteOrdering:
    """One of the named orderings: toric-zx or lex-zx."""
    try:
        factory = _BUILTIN_ORDERINGS[name]
    except KeyError:
        known = ", ".join(sorted(set(_BUILTIN_ORDERINGS)))
        raise ValidationError(f"unknown ordering {name!r} (known: {known})")
    return factory(model)


def parse_ordering(text: str, model: StabilizerModel) -> SiteOrdering:
    """Parse a .ord document and validate it against the model size."""
    slots: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] != "slot" or len(fields) != 3:
            raise ParseError("expected: slot <site-index> <Z|X>", lineno)
        try:
            site = int(fields[1])
        except ValueError:
            raise ParseError(f"invalid site index {fields[1]!r}", lineno)
        if not 0 <= site < model.n_qubits:
            raise ParseError(
                f"site {site} out of range for {model.n_qubits} qubits", lineno
            )
        axis = fields[2].upper()
        if axis not in (AXIS_Z, AXIS_X):
            raise ParseError(f"axis must be Z or X, got {fields[2]!r}", lineno)
        slots.append((site, axis))
    return SiteOrdering(model.n_qubits, tuple(slots))


def serialize_ordering(gamma: SiteOrdering) -> str:
    return "\n".join(f"slot {site} {axis}" for site, axis in gamma.slots) + "\n"


def load_ordering(path: str, model: StabilizerModel) -> SiteOrdering:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ordering(fh.read(), model)

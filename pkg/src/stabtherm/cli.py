"""Command-line surface: model building, bounds, exact gaps and the
verification ledger.

Reports are JSON with construction-ordered keys and floats printed with 17
significant digits, so identical inputs and seeds produce identical bytes.
Exit codes: 0 success, 1 validation failure, 2 resource cap exceeded,
3 verification-ledger failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .barrier import low_temp_gap_bound, max_penalty, generalized_barrier_exact
from .hightemp import (
    critical_beta,
    first_order_beta_estimate,
    high_temp_gap_bound,
    kappa,
    kappa_numeric,
    kappa_proposition,
    kappa_simplified,
)
from .liouvillian import (
    davies_dense,
    detailed_balance_residual,
    dirichlet_blocks,
    dirichlet_dense_from_generator,
    ergodicity_check,
    fixed_point_residual,
    g_function,
    gap_from_blocks,
    gap_from_dense,
    gibbs_data,
    heatbath_dense,
    mixing_time_bound,
    poincare_check,
    spectrum_reality_residual,
    tau_and_r,
    unitality_residual,
    variance_and_dirichlet,
)
from .modelio import (
    build_ising,
    build_toric,
    builtin_ordering,
    load_model,
    load_ordering,
    serialize_model,
)
from .pauli import (
    BathSpec,
    ResourceError,
    StabilizerModel,
    ValidationError,
    h_min,
)

USAGE_EXIT = 64
_DENSE_CAP = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


# -- deterministic JSON ------------------------------------------------------

def _json_scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return _json_scalar(str(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        if math.isnan(x):
            return '"nan"'
        return format(x, ".17g")
    if isinstance(x, str):
        out = ['"']
        for ch in x:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    raise TypeError(f"cannot serialize {type(x)!r}")


def dumps(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_scalar(str(k))}: {dumps(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{end}}}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{pad}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{end}]"
    return _json_scalar(obj)


# -- report assembly ---------------------------------------------------------

def _model_digest(model: StabilizerModel, path: str | None) -> dict:
    digest = {
        "n_qubits": model.n_qubits,
        "n_terms": model.n_terms,
        "rank": model.rank,
        "h_norm": float(model.h_norm()),
    }
    if path is not None:
        with open(path, "rb") as fh:
            digest["path"] = path
            digest["sha256"] = hashlib.sha256(fh.read()).hexdigest()
    return digest


def _bath_digest(model: StabilizerModel, bath: BathSpec) -> dict:
    return {
        "beta": bath.beta,
        "preset": bath.rate_preset,
        "h_min": h_min(model, bath),
    }


def _report(command: str, **sections) -> dict:
    rep = {"tool": "stabtherm", "version": __version__, "command": command}
    rep.update(sections)
    return rep


def _emit(report: dict, args) -> None:
    text = dumps(report) + "\n"
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.quiet:
        sys.stdout.write(text)


def _bath_from_args(args) -> BathSpec:
    return BathSpec(beta=args.beta, rate_preset=args.bath)


def _load(args) -> StabilizerModel:
    return load_model(args.model)


# -- subcommands -------------------------------------------------------------

def cmd_build(args) -> int:
    if args.lattice == "toric":
        model = build_toric(args.L)
    else:
        model = build_ising(args.dims, args.L, periodic=not args.open)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(model))
    _emit(_report("build", model=_model_digest(model, args.output)), args)
    return 0


def cmd_validate(args) -> int:
    model = _load(args)
    _emit(_report("validate", model=_model_digest(model, args.model), valid=True), args)
    return 0


def cmd_high_temp(args) -> int:
    model = _load(args)
    bath = _bath_from_args(args)
    rep = kappa(model, args.beta, args.variant)
    bound = high_temp_gap_bound(model, bath, args.variant)
    payload = {
        "variant": rep.variant,
        "kappa": rep.kappa,
        "argmax_site": rep.argmax_site,
        "gap_bound": {
            "formula": "thm1",
            "value": bound.value,
            "s_star_max": bound.s_star,
            "s_star_min": bound.s_star_min,
        },
    }
    if bound.warning:
        payload["gap_bound"]["warning"] = bound.warning
    _emit(_report("high-temp", model=_model_digest(model, args.model),
                  bath=_bath_digest(model, bath), analysis=payload), args)
    return 0


def cmd_critical_beta(args) -> int:
    model = _load(args)
    beta_star = critical_beta(model, args.variant, tol=args.tol)
    payload = {
        "variant": args.variant,
        "beta_star": beta_star,
        "inverse_beta_star": 0.0 if math.isinf(beta_star) else 1.0 / beta_star,
        "first_order_estimate": first_order_beta_estimate(model),
        "tol": args.tol,
    }
    if not math.isinf(beta_star):
        payload["residual"] = abs(kappa(model, beta_star, args.variant).kappa - 1.0)
    _emit(_report("critical-beta", model=_model_digest(model, args.model),
                  analysis=payload), args)
    return 0


def _resolve_ordering(spec: str, model: StabilizerModel):
    if spec.startswith("builtin:"):
        return builtin_ordering(spec[len("builtin:"):], model)
    return load_ordering(spec, model)


def cmd_barrier(args) -> int:
    model = _load(args)
    gamma = _resolve_ordering(args.ordering, model)
    if args.exhaustive:
        res = max_penalty(model, gamma, mode="exhaustive")
    else:
        if args.samples is None or args.seed is None:
            raise ValidationError("sampled mode needs --samples and --seed")
        res = max_penalty(model, gamma, mode="sampled",
                          samples=args.samples, seed=args.seed)
    payload = {
        "ordering": args.ordering,
        "l_star": gamma.l_star,
        "max_penalty": float(res.value),
        "max_penalty_exact": res.value,
        "violated_count": res.violated_count,
        "witness": str(res.witness),
        "exact": res.exact,
        "n_evaluated": res.n_evaluated,
    }
    if not res.exact:
        payload["note"] = "sampled mode certifies a lower bound on the maximum"
    _emit(_report("barrier", model=_model_digest(model, args.model),
                  analysis=payload), args)
    return 0


def cmd_barrier_exact(args) -> int:
    model = _load(args)
    value, gamma = generalized_barrier_exact(model)
    payload = {
        "barrier": float(value),
        "barrier_exact": value,
        "ordering": [f"{site}{axis}" for site, axis in gamma.slots],
    }
    _emit(_report("barrier-exact", model=_model_digest(model, args.model),
                  analysis=payload), args)
    return 0


def _compute_gap(model, bath, generator: str, method: str):
    if method == "dense":
        gen = davies_dense if generator == "davies" else heatbath_dense
        l_pauli = gen(model, bath, cap=_DENSE_CAP)
        return gap_from_dense(l_pauli, model, gibbs_data(model, bath.beta))
    blocks = dirichlet_blocks(model, bath, family=generator)
    return gap_from_blocks(blocks)


def cmd_gap(args) -> int:
    model = _load(args)
    bath = _bath_from_args(args)
    res = _compute_gap(model, bath, args.generator, args.method)
    payload = {
        "generator": args.generator,
        "method": res.method,
        "gap": res.gap,
        "zero_modes": res.zero_modes,
    }
    _emit(_report("gap", model=_model_digest(model, args.model),
                  bath=_bath_digest(model, bath), analysis=payload), args)
    return 0


def cmd_mixing_time(args) -> int:
    model = _load(args)
    bath = _bath_from_args(args)
    if args.gap == "auto":
        method = "dense" if model.n_qubits <= _DENSE_CAP else "coset"
        gap = _compute_gap(model, bath, "davies", method).gap
    else:
        gap = float(args.gap)
    bound = mixing_time_bound(gap, gibbs_data(model, bath.beta))
    payload = {
        "formula": bound.formula,
        "gap": bound.gap,
        "t_mix_from_exact_rho": bound.from_exact,
        "t_mix_from_h_norm": bound.from_h_norm,
    }
    _emit(_report("mixing-time", model=_model_digest(model, args.model),
                  bath=_bath_digest(model, bath), analysis=payload), args)
    return 0


# -- the verification ledger -------------------------------------------------

def _ledger_entry(name: str, ok: bool, margin: float, **extra) -> dict:
    entry = {"check": name, "pass": bool(ok), "margin": float(margin)}
    entry.update(extra)
    return entry


def run_verification_ledger(model: StabilizerModel, bath: BathSpec,
                            seed: int = 20240901) -> list[dict]:
    """Machine-checkable inequality ledger for one model and bath.

    Covers structural residuals of both generator families, the dominance
    chain of the condition-number variants, the exact-gap cross bounds and
    the Poincare inequality on seeded random observables.  Dense-only
    checks are marked skipped above the dense cap.
    """
    ledger: list[dict] = []
    beta = bath.beta
    gibbs = gibbs_data(model, beta)
    dense_ok = model.n_qubits <= _DENSE_CAP

    ks = kappa_simplified(model, beta).kappa
    kp = kappa_proposition(model, beta).kappa
    kn = kappa_numeric(model, beta).kappa
    ledger.append(_ledger_entry("kappa_num_le_prop", kn <= kp + 1e-12, kp - kn))
    ledger.append(_ledger_entry("kappa_prop_le_simplified", kp <= ks + 1e-12, ks - kp))

    # G-function shift identity: G(a + e(alpha)) = G(a) exp(beta omega / 2)
    worst = 0.0
    scale = model.coupling_scale
    for j in range(model.n_qubits):
        for ax in ("X", "Y", "Z"):
            from .liouvillian import _alpha_syndromes
            ep = _alpha_syndromes(model, j)[ax]
            for a in model.realized_syndromes():
                lhs = g_function(model, bath, j, a ^ ep)
                rhs = g_function(model, bath, j, a) * math.exp(
                    0.5 * beta * model.omega_int(a, ep) / scale)
                worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    ledger.append(_ledger_entry("g_shift_identity", worst <= 1e-12, 1e-12 - worst))

    tau, r_lower = tau_and_r(model, bath)
    ledger.append(_ledger_entry("r_lower_bound", 1.0 / tau >= r_lower - 1e-12,
                                1.0 / tau - r_lower))

    gaps = {}
    for fam in ("davies", "heatbath"):
        blocks = list(dirichlet_blocks(model, bath, family=fam))
        min_eig = min(float(np.linalg.eigvalsh(b.matrix).min()) for b in blocks)
        scale_b = max(max(float(np.abs(b.matrix).max()) for b in blocks), 1e-300)
        ledger.append(_ledger_entry(f"dirichlet_psd_{fam}",
                                    min_eig >= -1e-10 * scale_b,
                                    min_eig / scale_b + 1e-10))
        gaps[fam] = gap_from_blocks(blocks).gap

    if dense_ok:
        for fam, gen in (("davies", davies_dense), ("heatbath", heatbath_dense)):
            l_pauli = gen(model, bath, cap=_DENSE_CAP)
            ru = unitality_residual(l_pauli)
            ledger.append(_ledger_entry(f"unitality_{fam}", ru <= 1e-10, 1e-10 - ru))
            rf = fixed_point_residual(l_pauli, model, gibbs)
            ledger.append(_ledger_entry(f"fixed_point_{fam}", rf <= 1e-10, 1e-10 - rf))
            rd = detailed_balance_residual(l_pauli, model, gibbs)
            ledger.append(_ledger_entry(f"detailed_balance_{fam}", rd <= 1e-10, 1e-10 - rd))
            rs = spectrum_reality_residual(l_pauli)
            ledger.append(_ledger_entry(f"spectrum_real_{fam}", rs <= 1e-9, 1e-9 - rs))
            dense_gap = gap_from_dense(l_pauli, model, gibbs).gap
            dev = abs(dense_gap - gaps[fam]) / max(dense_gap, 1e-300)
            ledger.append(_ledger_entry(f"dense_vs_coset_gap_{fam}", dev <= 1e-9,
                                        1e-9 - dev))
            if fam == "davies":
                e_hat = dirichlet_dense_from_generator(l_pauli, model, gibbs)
                rng = np.random.default_rng(seed)
                dim = 1 << model.n_qubits
                ok = True
                margin = math.inf
                for _ in range(100):
                    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
                    f = a + a.conj().T
                    var, energy = variance_and_dirichlet(model, gibbs, f, e_hat)
                    ok = ok and poincare_check(dense_gap, var, energy)
                    margin = min(margin, energy + 1e-10 - dense_gap * var)
                ledger.append(_ledger_entry("poincare_random_observables", ok, margin))
    else:
        for name in ("unitality", "fixed_point", "detailed_balance", "spectrum_real"):
            ledger.append(_ledger_entry(f"{name}_skipped_dense_cap", True, 0.0,
                                        skipped=True))

    lam_d, lam_q = gaps["davies"], gaps["heatbath"]
    hm = h_min(model, bath)
    try:
        gamma = builtin_ordering("toric-zx", model)
    except ValidationError:
        gamma = builtin_ordering("lex-zx", model)
    if (1 << (2 * model.n_qubits)) <= (1 << 20):
        pen = max_penalty(model, gamma, mode="exhaustive")
    else:
        pen = max_penalty(model, gamma, mode="sampled", samples=200000, seed=seed)
    eq5 = low_temp_gap_bound(pen.value, beta, hm, gamma.l_star)
    ledger.append(_ledger_entry("gap_ge_low_temp_bound", lam_d >= eq5 - 1e-12,
                                lam_d - eq5, formula="eq5"))
    ledger.append(_ledger_entry("gap_ge_comparison", lam_d >= lam_q / tau - 1e-12,
                                lam_d - lam_q / tau))
    thm1 = high_temp_gap_bound(model, bath, "numeric").value
    ledger.append(_ledger_entry("gap_ge_high_temp_bound", lam_d >= thm1 - 1e-12,
                                lam_d - thm1, formula="thm1"))
    if kn < 1.0:
        ledger.append(_ledger_entry("heatbath_gap_ge_one_minus_kappa",
                                    lam_q >= 1.0 - kn - 1e-12,
                                    lam_q - (1.0 - kn)))
    else:
        ledger.append(_ledger_entry("heatbath_gap_ge_one_minus_kappa", True, 0.0,
                                    skipped=True, note="kappa_numeric >= 1"))
    return ledger


def cmd_verify(args) -> int:
    model = _load(args)
    bath = _bath_from_args(args)
    ledger = run_verification_ledger(model, bath)
    all_pass = all(entry["pass"] for entry in ledger)
    _emit(_report("verify", model=_model_digest(model, args.model),
                  bath=_bath_digest(model, bath),
                  ledger=ledger, all_pass=all_pass), args)
    return 0 if all_pass else 3


# -- parser ------------------------------------------------------------------

def _add_global_flags(p, suppress: bool = False):
    kw = {"default": argparse.SUPPRESS} if suppress else {"default": None}
    p.add_argument("--json", dest="json_path", metavar="PATH",
                   help="also write the JSON report to PATH", **kw)
    if suppress:
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                       help="suppress stdout output")
    else:
        p.add_argument("--quiet", action="store_true", default=False,
                       help="suppress stdout output")


def _build_parser() -> _Parser:
    parser = _Parser(prog="stabtherm",
                     description="Thermalization-time bounds for commuting "
                                 "Pauli Hamiltonians")
    _add_global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a builtin lattice model")
    lat = p.add_subparsers(dest="lattice", required=True)
    toric = lat.add_parser("toric")
    toric.add_argument("--L", type=int, required=True)
    toric.add_argument("-o", "--output", required=True)
    _add_global_flags(toric, suppress=True)
    toric.set_defaults(func=cmd_build)
    ising = lat.add_parser("ising")
    ising.add_argument("--dims", type=int, choices=(1, 2), required=True)
    ising.add_argument("--L", type=int, required=True)
    ising.add_argument("--open", action="store_true",
                       help="open boundaries (default periodic)")
    ising.add_argument("-o", "--output", required=True)
    _add_global_flags(ising, suppress=True)
    ising.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="parse and validate a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    def add_bath(q, default_beta=None):
        if default_beta is None:
            q.add_argument("--beta", type=float, required=True)
        else:
            q.add_argument("--beta", type=float, default=default_beta)
        q.add_argument("--bath", choices=("glauber", "metropolis"),
                       default="glauber")

    p = sub.add_parser("high-temp", help="condition number and gap bound")
    p.add_argument("model")
    add_bath(p)
    p.add_argument("--variant", choices=("simplified", "proposition", "numeric"),
                   default="simplified")
    p.set_defaults(func=cmd_high_temp)

    p = sub.add_parser("critical-beta", help="unit root of the condition number")
    p.add_argument("model")
    p.add_argument("--variant", choices=("simplified", "proposition", "numeric"),
                   default="simplified")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_critical_beta)

    p = sub.add_parser("barrier", help="max energy penalty along an ordering")
    p.add_argument("model")
    p.add_argument("--ordering", required=True,
                   help="ordering file or builtin:toric-zx / builtin:lex-zx")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_barrier)

    p = sub.add_parser("barrier-exact", help="exact generalized barrier (tiny models)")
    p.add_argument("model")
    p.set_defaults(func=cmd_barrier_exact)

    p = sub.add_parser("gap", help="exact spectral gap of a generator")
    p.add_argument("model")
    add_bath(p)
    p.add_argument("--generator", choices=("davies", "heatbath"), default="davies")
    p.add_argument("--method", choices=("dense", "coset"), default="dense")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("mixing-time", help="mixing time bound from a gap")
    p.add_argument("model")
    add_bath(p)
    p.add_argument("--gap", default="auto",
                   help="a numeric gap or 'auto' to compute the Davies gap")
    p.set_defaults(func=cmd_mixing_time)

    p = sub.add_parser("verify", help="run the full inequality ledger")
    p.add_argument("model")
    add_bath(p)
    p.set_defaults(func=cmd_verify)

    for name, sp in sub.choices.items():
        if name != "build":
            _add_global_flags(sp, suppress=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(dumps({"error": str(exc), "category": "resource"}), file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(dumps({"error": str(exc), "category": "validation"}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(dumps({"error": str(exc), "category": "io"}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line front end.

    latticeqc [--config FILE] {trap,kappa,gate,budget,assay,sweep} [flags]

A config file holds ``key = value`` lines (``#`` starts a comment); keys are
flag names without the leading dashes.  Flags on the command line win over
the file.  Exit status is 0 on success, 1 on a domain or convergence error
(one line on stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace

import numpy as np

from . import assay, budget, fom, gates, motional, species
from .errors import ConvergenceError, DomainError

PROTOCOLS = ("ellipsoid", "separated-wells", "swap")

# values used when neither the command line nor the config file sets a flag
DEFAULTS = {
    "species": "cs",
    "format": "table",
    "protocol": "separated-wells",
    "eta": 0.05,
    "dz": 2.5,
    "eta_par": None,
    "eta_perp": None,
    "q": 0,
    "method": "closed-form",
    "chi": 1.0,
    "ckappa": 0.015,
    "n": 2.0,
    "intensity": 1e5,
    "form": "exponential",
    "pairs": 1000,
    "error": 0.1,
    "alpha": 0.5,
    "cycles": 2,
    "seed": 0,
    "flip": 0.0,
    "background": 0,
    "theta": 0.0,
    "of": "kappa",
}

SPECIES_KEYS = {"gamma_over_recoil": float, "nuclear_spin": float, "linewidth_hz": float}


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Shortest round-trip text for floats, plain str otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def parse_sweep(spec: str):
    """``var=start:stop:step`` -> (var, values)."""
    try:
        var, rng = spec.split("=", 1)
        start, stop, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise UsageError(f"bad --sweep {spec!r}; expected var=start:stop:step") from None
    if step <= 0 or stop < start:
        raise UsageError(f"bad --sweep range {rng!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding keeps grid points like 0.15 from printing as 0.15000000000000002
    return var.strip().replace("-", "_"), np.round(start + step * np.arange(count), 12)


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


# -- parser -----------------------------------------------------------------

def _common(p):
    p.add_argument("--format", choices=("table", "csv"), help="output format (default table)")
    p.add_argument("--output", metavar="PATH", help="write results to PATH instead of stdout")


def _species_flags(p):
    p.add_argument("--species", help="atomic species: cs, rb or na (default cs)")


def _kappa_flags(p):
    p.add_argument("--protocol", choices=PROTOCOLS, help="gate geometry (default separated-wells)")
    p.add_argument("--eta", type=float, help="Lamb-Dicke parameter k_L x_0, dimensionless (default 0.05)")
    p.add_argument("--eta-perp", type=float, help="transverse Lamb-Dicke parameter for ellipsoid wells")
    p.add_argument("--eta-par", type=float, help="axial Lamb-Dicke parameter for ellipsoid wells")
    p.add_argument("--dz", type=float, help="well separation Delta z / x_0, dimensionless (default 2.5)")
    p.add_argument("--optimize", action="store_true", default=None,
                   help="maximize |kappa| over dz (separated-wells) or eta_par/eta_perp (ellipsoid)")
    p.add_argument("--method", choices=("closed-form", "quadrature"),
                   help="closed form or direct 3-D quadrature (default closed-form)")
    p.add_argument("--near-field", action="store_true", default=None,
                   help="quadrature with the 1/(kr)^3 kernel and <g> = 1")
    p.add_argument("--q", type=int, choices=(-1, 0, 1), help="catalysis polarization q (default 0, pi light)")
    p.add_argument("--collision-radius", type=float, metavar="A",
                   help="also report P(r < A) for separated wells, A in units of x_0")


def _budget_flags(p):
    p.add_argument("--ckappa", type=float, help="protocol prefactor |kappa| eta^3 (default 0.015)")
    p.add_argument("--n", type=float, help="gate duration in trap periods (default 2)")
    p.add_argument("--intensity", type=float, help="single-beam intensity I_1/I_0 (default 1e5)")
    p.add_argument("--detuning", type=float, help="lattice detuning Delta_L/Gamma; evaluate here instead of optimizing")
    p.add_argument("--form", choices=("exponential", "sum"), help="error composition (default exponential)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latticeqc", description="Optical-lattice dipole-gate design numbers.")
    parser.add_argument("--config", metavar="FILE", help="key = value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trap", help="harmonic trap quantities for a node-trapped atom")
    _species_flags(p)
    p.add_argument("--depth", type=float, help="well depth U_0/E_R (else derived from intensity and detuning)")
    p.add_argument("--intensity", type=float, help="single-beam intensity I_1/I_0")
    p.add_argument("--detuning", type=float, help="lattice detuning Delta_L/Gamma, positive = blue")
    p.add_argument("--theta", type=float, help="lin-theta-lin polarization angle in radians (default 0)")
    _common(p)

    p = sub.add_parser("kappa", help="dipole-dipole figure of merit")
    _kappa_flags(p)
    p.add_argument("--sweep", metavar="VAR=START:STOP:STEP", help="sweep dz, eta, eta-perp or eta-par")
    _common(p)

    p = sub.add_parser("gate", help="gate unitary, timing and success probability")
    p.add_argument("--protocol", choices=PROTOCOLS, help="swap gives sqrt(SWAP); others give CPHASE (default swap)")
    p.add_argument("--chi", type=float, help="interaction scale |<V_dd>|/hbar in units of Gamma (default 1)")
    p.add_argument("--eta", type=float, help="Lamb-Dicke parameter used for kappa (default 0.05)")
    p.add_argument("--eta-perp", type=float, help="transverse Lamb-Dicke parameter (ellipsoid)")
    p.add_argument("--eta-par", type=float, help="axial Lamb-Dicke parameter (ellipsoid)")
    p.add_argument("--dz", type=float, help="well separation Delta z / x_0 (separated-wells)")
    p.add_argument("--time", type=float, help="evolve the sqrt(SWAP) model for this time in 1/Gamma instead of pi/chi")
    _common(p)

    p = sub.add_parser("budget", help="spontaneous-emission error budget")
    _species_flags(p)
    _budget_flags(p)
    p.add_argument("--sweep", metavar="VAR=START:STOP:STEP", help="sweep ckappa, n, intensity or gamma_over_recoil")
    _common(p)

    p = sub.add_parser("assay", help="ensemble CNOT/flush error measurement")
    p.add_argument("--pairs", type=int, help="initial number of paired qubits N, a count (default 1000)")
    p.add_argument("--error", type=float, help="true gate error probability P, dimensionless in [0, 1] (default 0.1)")
    p.add_argument("--alpha", type=float, help="fraction of errors losing only the control, dimensionless (default 0.5)")
    p.add_argument("--cycles", type=int, help="number of CNOT/flush cycles, a count (default 2)")
    p.add_argument("--seed", type=int, help="random seed for --stochastic (default 0)")
    p.add_argument("--flip", type=float, help="probability an unpaired target is flipped and survives a flush, dimensionless (default 0)")
    p.add_argument("--background", type=int, help="initially unpaired target-species atoms, a count (default 0)")
    p.add_argument("--stochastic", action="store_true", default=None, help="sample counts instead of means")
    _common(p)

    p = sub.add_parser("sweep", help="CSV sweep of kappa or the error budget")
    p.add_argument("--of", choices=("kappa", "budget"), help="quantity to sweep (default kappa)")
    _species_flags(p)
    _kappa_flags(p)
    _budget_flags(p)
    p.add_argument("--sweep", metavar="VAR=START:STOP:STEP", required=True, help="sweep variable and grid")
    _common(p)
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _coerce(action, key, text):
    if action.nargs == 0:
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"config key {key!r}: expected a boolean, got {text!r}")
    try:
        value = action.type(text) if action.type else text
    except ValueError:
        raise UsageError(f"config key {key!r}: cannot parse {text!r}") from None
    if action.choices is not None and value not in action.choices:
        raise UsageError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
    return value


def resolve(parser, argv):
    """Parse argv and merge defaults < config file < command-line flags."""
    args = parser.parse_args(argv)
    merged = {k: v for k, v in DEFAULTS.items()}
    if args.command == "gate":
        merged["protocol"] = "swap"
    overrides = {}
    if args.config:
        sub = _subparser(parser, args.command)
        actions = {a.dest: a for a in sub._actions}
        for key, text in read_config(args.config).items():
            if key in SPECIES_KEYS:
                try:
                    overrides[key] = SPECIES_KEYS[key](text)
                except ValueError:
                    raise UsageError(f"config key {key!r}: cannot parse {text!r}") from None
            elif key in actions and key not in ("help", "config"):
                merged[key] = _coerce(actions[key], key, text)
            else:
                raise UsageError(f"unknown config key {key!r} for '{args.command}'")
    for key, value in vars(args).items():
        if value is not None:
            merged[key] = value
        else:
            merged.setdefault(key, None)
    ns = argparse.Namespace(**merged)
    ns.species_overrides = overrides
    return ns


# -- output -----------------------------------------------------------------

def emit(rows, header, fmt_kind, stream):
    if fmt_kind == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        return
    text = [[str(h) for h in header]] + [[fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in text) for i in range(len(header))]
    for r in text:
        stream.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _species(ns):
    sp = species.get_species(ns.species)
    if ns.species_overrides:
        sp = sp.with_overrides(**ns.species_overrides)
    return sp


# -- subcommands ------------------------------------------------------------

def cmd_trap(ns):
    sp = _species(ns)
    intensity = ns.intensity if ns.intensity is not None else 1.0
    if ns.detuning is None:
        raise DomainError("trap needs --detuning (Delta_L/Gamma)")
    if ns.depth is None and ns.intensity is None:
        raise DomainError("trap needs --depth or --intensity")
    lattice = species.LatticeConfig(intensity, ns.detuning, ns.theta, ns.depth)
    trap = species.derive_trap(sp, lattice)
    rows = [
        ("well_depth_over_recoil", trap.well_depth),
        ("omega_osc_over_recoil", trap.omega_osc),
        ("ground_width_k", trap.ground_width),
        ("lamb_dicke", trap.lamb_dicke),
        ("scatter_rate_over_gamma", trap.scatter_rate),
        ("oscillations_per_scatter", trap.oscillations_per_scatter),
        ("transport_displacement_lambda", species.transport_displacement(ns.theta)),
    ]
    if sp.linewidth_hz is not None:
        rows += [
            ("scatter_rate_per_s", species.to_si(sp, rate=trap.scatter_rate)),
            ("omega_osc_over_2pi_hz", species.to_si(sp, energy=trap.omega_osc) / (2 * math.pi)),
        ]
    if sp.wavelength_nm is not None:
        rows.append(("ground_width_m", species.to_si(sp, length=trap.ground_width)))
    return ["quantity", "value"], rows


def _kappa_point(ns, **over):
    p = dict(protocol=ns.protocol, eta=ns.eta, eta_perp=ns.eta_perp, eta_par=ns.eta_par, dz=ns.dz)
    p.update(over)
    protocol = p["protocol"]
    if ns.method == "quadrature":
        if protocol == "swap":
            raise DomainError("quadrature is available for ellipsoid and separated-wells only")
        if protocol == "ellipsoid":
            eta_perp = p["eta_perp"] or p["eta"]
            pair = motional.PacketPair.ellipsoidal(eta_perp, p["eta_par"] or 2.0 * eta_perp)
        else:
            pair = motional.PacketPair.isotropic(p["eta"], p["dz"])
        return fom.kappa_quadrature(pair, ns.q, near_field=bool(ns.near_field))
    if protocol == "ellipsoid":
        eta_perp = p["eta_perp"] or p["eta"]
        return fom.kappa_ellipsoid(eta_perp, p["eta_par"] or 2.0 * eta_perp)
    if protocol == "separated-wells":
        return fom.kappa_separated_wells(p["eta"], p["dz"])
    return fom.kappa_swap(p["eta"])


FOM_HEADER = ["parameter", "kappa", "mean_f", "mean_g", "method"]


def cmd_kappa(ns):
    if ns.sweep:
        var, values = parse_sweep(ns.sweep)
        if var not in ("dz", "eta", "eta_perp", "eta_par"):
            raise UsageError(f"cannot sweep {var!r} for kappa")
        rows = []
        for v in values:
            r = _kappa_point(ns, **{var: float(v)})
            rows.append((float(v), r.kappa, r.mean_f, r.mean_g, r.method))
        return FOM_HEADER, rows

    rows = []
    if ns.optimize:
        if ns.protocol == "separated-wells":
            dz, r = fom.optimize_separation(ns.eta)
            rows.append(("optimal_dz", dz))
            ns = replace_ns(ns, dz=dz)
        elif ns.protocol == "ellipsoid":
            eta_perp = ns.eta_perp or ns.eta
            ratio, r = fom.optimize_aspect_ratio(eta_perp)
            rows.append(("optimal_ratio", ratio))
            ns = replace_ns(ns, eta_perp=eta_perp, eta_par=ratio * eta_perp)
        else:
            raise DomainError("--optimize applies to ellipsoid and separated-wells")
    r = _kappa_point(ns)
    rows += [("kappa", r.kappa), ("abs_kappa", abs(r.kappa)), ("c_kappa", r.c_kappa),
             ("mean_f", r.mean_f), ("mean_g", r.mean_g), ("method", r.method)]
    if r.method == fom.QUADRATURE:
        rows.append(("error_estimate", r.error_estimate))
    if ns.collision_radius is not None and ns.protocol == "separated-wells":
        rows.append(("collision_probability", motional.collision_probability(ns.dz, ns.collision_radius)))
    return ["quantity", "value"], rows


def replace_ns(ns, **kw):
    d = vars(ns).copy()
    d.update(kw)
    return argparse.Namespace(**d)


def cmd_gate(ns):
    rows = []
    if ns.protocol == "swap":
        k = fom.kappa_swap(ns.eta)
        if ns.time is not None:
            model = gates.build_swap_model(ns.chi)
            u = gates.evolve(model, ns.time)
            tau = ns.time
        else:
            result = gates.sqrt_swap_gate(ns.chi)
            u, tau = result.unitary, result.tau
        labels = gates.SWAP_LABELS
        leak = gates.leakage(u)
        success = math.exp(-tau * ns.chi / abs(k.kappa))
    else:
        k = _kappa_point(replace_ns(ns, method="closed-form"))
        c = gates.cphase_gate(k, ns.chi)
        u, tau, labels = c.unitary, c.tau, ("00", "01", "10", "11")
        leak = gates.leakage(u)
        success = c.success_probability
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            rows.append((f"U[{li},{lj}]", u[i, j].real, u[i, j].imag))
    for i in range(4):
        rows.append((f"leakage[{labels[i]}]", float(leak[i]), 0.0))
    rows += [("tau", tau, 0.0), ("kappa", k.kappa, 0.0), ("success_probability", success, 0.0)]
    return ["quantity", "real", "imag"], rows


BUDGET_HEADER = ["parameter", "p_total", "optimal_detuning", "p_catalysis", "p_lattice",
                 "closed_form_p", "closed_form_detuning"]


def _budget_input(ns):
    return budget.BudgetInput(ns.ckappa, ns.n, _species(ns), ns.intensity)


def cmd_budget(ns):
    inp = _budget_input(ns)
    if ns.sweep:
        var, values = parse_sweep(ns.sweep)
        field = {"ckappa": "c_kappa", "n": "n_cycles", "intensity": "intensity_ratio",
                 "gamma_over_recoil": "gamma_over_recoil"}.get(var)
        if field is None:
            raise UsageError(f"cannot sweep {var!r} for budget")
        results = budget.sweep(inp, field, values)
        rows = [(float(v), r.p_total, r.optimal_detuning, r.p_catalysis, r.p_lattice,
                 r.closed_form_p, r.closed_form_detuning) for v, r in zip(values, results)]
        return BUDGET_HEADER, rows
    if ns.detuning is not None:
        d = ns.detuning
        rows = [("detuning", d), ("p_catalysis", budget.p_catalysis(inp, d)),
                ("p_lattice", budget.p_lattice(inp, d)), ("p_total", budget.p_total(inp, d, ns.form))]
        return ["quantity", "value"], rows
    r = budget.optimize_detuning(inp, ns.form)
    rows = [("p_total", r.p_total), ("optimal_detuning", r.optimal_detuning),
            ("p_catalysis", r.p_catalysis), ("p_lattice", r.p_lattice),
            ("gamma_lattice", r.gamma_lattice), ("closed_form_p", r.closed_form_p),
            ("closed_form_detuning", r.closed_form_detuning), ("stationary_p", r.stationary_p),
            ("at_bracket_edge", r.at_bracket_edge)]
    return ["quantity", "value"], rows


def cmd_assay(ns):
    cfg = assay.AssayConfig(ns.pairs, ns.error, ns.alpha, ns.cycles, ns.seed,
                            ns.flip, ns.background)
    record = assay.simulate(cfg) if ns.stochastic else assay.expected_counts(cfg)
    rows = []
    totals = record.target_total
    for k, row in enumerate(record.rows()):
        est = "" if k == 0 or totals[k - 1] == 0 else float(1.0 - totals[k] / totals[k - 1])
        rows.append((row["cycle"], row["paired"], row["new_unpaired"], row["unpaired"],
                     row["target_total"], est))
    return ["cycle", "paired", "new_unpaired", "unpaired", "target_total", "estimate"], rows


def cmd_sweep(ns):
    if ns.of == "kappa":
        return cmd_kappa(ns)
    return cmd_budget(ns)


COMMANDS = {"trap": cmd_trap, "kappa": cmd_kappa, "gate": cmd_gate,
            "budget": cmd_budget, "assay": cmd_assay, "sweep": cmd_sweep}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = resolve(parser, argv)
        header, rows = COMMANDS[ns.command](ns)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        stderr.write(f"latticeqc: usage error: {exc}\n")
        return 2
    except (DomainError, ConvergenceError) as exc:
        stderr.write(f"latticeqc: error: {exc}\n")
        return 1

    buf = io.StringIO()
    emit(rows, header, ns.format, buf)
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return 0


def main():
    sys.exit(run())

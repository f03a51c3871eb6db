"""``gapspec`` command-line front end.

Exit codes: 0 success, 1 malformed configuration, 2 domain or regime error,
3 numerical non-convergence, 4 ``validate`` found failing checks.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__, bae, medium, spectrum, stringmap, validation
from .config import RunConfig, coerce, load_config, threads_from_env
from .errors import ConfigError, ConvergenceError, DomainError, GapSpecError, UnmatchedPoleError
from .medium import Branch, MediumParams
from .report import FREQ, LENGTH, PLAIN, Report, emit

COMMANDS = ("medium", "ordinary", "pair", "soliton", "pinned", "band", "validate")
EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_VALIDATE = 1, 2, 3, 4


def _params_dict(p: MediumParams):
    return {"omega_perp": p.omega_perp, "omega_par": p.omega_par, "omega12": p.omega12,
            "omega12_shifted": p.omega_bar, "beta": p.beta, "L": p.L,
            "tau_edge": p.tau_edge}


def _meta(cfg: RunConfig, p: MediumParams, command: str, mode: str | None = None):
    meta = {"tool": "gapspec", "version": __version__, "command": command, "mode": mode,
            "scale": cfg.scale,
            "params_normalized": _params_dict(p),
            "params_input": _params_dict(cfg.medium_params())}
    if p.omega_perp < p.omega12 < p.omega_par:
        lin = stringmap.linearize(p)
        meta.update(a=lin.a, b=lin.b, valid_radius=lin.valid_radius,
                    l_max=spectrum.l_max(p), l_valid=spectrum.l_valid(p))
    return meta


def _medium_report(cfg, p):
    lo = cfg.omega_min / cfg.scale if cfg.omega_min is not None else 0.5 * p.omega_perp
    hi = cfg.omega_max / cfg.scale if cfg.omega_max is not None else 1.5 * p.omega_par
    rows = []
    for w in np.linspace(lo, hi, cfg.omega_points):
        w = float(w)
        br = medium.classify(p, w)
        eps = n = nu = kap = dkap = None
        if br is not Branch.EDGE:
            eps = float(medium.permittivity(p, w))
            if br is Branch.GAP:
                nu = float(medium.gap_decay_index(p, w))
                kap = float(medium.kappa(p, w))
                dkap = float(medium.kappa_prime(p, w))
            else:
                n = float(medium.refractive_index(p, w))
        rows.append([w, br.value, eps, n, nu, kap, dkap])
    cols = [("omega", FREQ), ("branch", PLAIN), ("eps", PLAIN), ("n", PLAIN), ("nu", PLAIN),
            ("kappa", FREQ), ("kappa_prime", PLAIN)]
    return Report("medium", cols, rows)


_CONSTITUENT_COLS = [("j", PLAIN), ("omega_re", FREQ), ("omega_im", FREQ),
                     ("k_re", FREQ), ("k_im", FREQ), ("h_re", PLAIN), ("h_im", PLAIN)]


def _constituent_rows(freqs, momenta, rapidities):
    return [[j + 1, float(w.real), float(w.imag), float(k.real), float(k.imag),
             float(h.real), float(h.imag)]
            for j, (w, k, h) in enumerate(zip(freqs, momenta, rapidities))]


def _ordinary_report(cfg, p):
    s = spectrum.ordinary_soliton(p, cfg.N, cfg.H)
    rows = _constituent_rows(s.frequencies, s.momenta,
                             bae.build_string(cfg.N, cfg.H, p.beta).rapidities)
    summary = {"carrier": (s.carrier, FREQ), "energy": (s.energy, FREQ), "width": (s.width, FREQ),
               "momentum": (s.momentum, FREQ), "decay": (s.decay, FREQ)}
    return Report("ordinary", _CONSTITUENT_COLS, rows, summary)


def _gap_report(command, s: spectrum.GapSolitonState):
    rows = _constituent_rows(s.frequencies, s.momenta, s.string.rapidities)
    summary = {
        "n_pairs": (s.n_pairs, PLAIN), "H": (s.carrying_rapidity, PLAIN),
        "eps_per_particle": (s.energy_per_particle, FREQ), "total_energy": (s.total_energy, FREQ),
        "band_halfwidth": (s.band_halfwidth, FREQ), "effective_mass": (s.effective_mass, PLAIN),
        "size": (s.size, LENGTH), "q": (s.momentum_per_particle, FREQ),
    }
    if s.residuals is not None:
        summary["max_residual"] = (float(np.max(np.abs(s.residuals))), PLAIN)
    return Report(command, _CONSTITUENT_COLS, rows, summary)


def _pinned_report(cfg, p):
    s = spectrum.pinned_soliton(p, cfg.l)
    rows = [[j + 1, float(w)] for j, w in enumerate(s.constituents)]
    summary = {"n_pairs": (s.n_pairs, PLAIN), "total_energy": (s.total_energy, FREQ),
               "binding_energy": (s.binding_energy, FREQ),
               "pair_extraction_energy": (s.pair_extraction_energy, FREQ)}
    return Report("pinned", [("j", PLAIN), ("omega", FREQ)], rows, summary)


def band_report(p: MediumParams, l: int, grid, workers: int = 1) -> Report:
    band = spectrum.band_structure(p, l, grid, workers=workers)
    rows = [[pt.H, pt.q, pt.eps_corrected, pt.q_exact, pt.eps_exact, pt.error]
            for pt in band.points]
    cols = [("H", PLAIN), ("q", FREQ), ("eps_corrected", FREQ), ("q_exact", FREQ),
            ("eps_exact", FREQ), ("error", PLAIN)]
    summary = {"n_pairs": (l, PLAIN), "band_halfwidth": (band.band_halfwidth, FREQ),
               "effective_mass": (band.effective_mass, PLAIN),
               "mass_validity_q": (band.mass_validity_q, FREQ)}
    return Report("band", cols, rows, summary)


def _validate_report(cfg, p, workers):
    checks = validation.run_checks(p, workers=workers)
    rows = [[c.name, c.passed, c.detail] for c in checks]
    summary = {"n_passed": (sum(c.passed for c in checks), PLAIN),
               "n_checks": (len(checks), PLAIN)}
    return Report("validate", [("check", PLAIN), ("passed", PLAIN), ("detail", PLAIN)],
                  rows, summary), all(c.passed for c in checks)


def build_report(command: str, cfg: RunConfig):
    """Compute the report for one subcommand; returns ``(report, ok)``."""
    p = cfg.medium_params().normalized()
    workers = cfg.threads
    ok = True
    mode = None
    if command == "medium":
        rep = _medium_report(cfg, p)
    elif command == "ordinary":
        rep = _ordinary_report(cfg, p)
    elif command == "pair":
        rep = _gap_report("pair", spectrum.gap_pair(p, cfg.H))
        mode = "linear"
    elif command == "soliton":
        if cfg.mode == "exact":
            state = spectrum.gap_soliton_exact(p, cfg.l, cfg.H, tol=cfg.newton_tol)
        else:
            state = spectrum.gap_soliton(p, cfg.l, cfg.H, cfg.mode)
        rep = _gap_report("soliton", state)
        mode = cfg.mode
    elif command == "pinned":
        rep = _pinned_report(cfg, p)
    elif command == "band":
        grid = np.linspace(cfg.h_min, cfg.h_max, cfg.h_points)
        rep = band_report(p, cfg.l, grid, workers)
        mode = "corrected+exact"
    elif command == "validate":
        rep, ok = _validate_report(cfg, p, workers)
    else:
        raise ConfigError(f"unknown subcommand {command!r}")
    rep.meta = _meta(cfg, p, command, mode)
    return rep, ok


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parser():
    ap = _Parser(prog="gapspec", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"gapspec {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value file; flags override it")
    for f in dataclasses.fields(RunConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                        metavar=f.name.upper())
    return ap


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for f in dataclasses.fields(RunConfig):
        raw = getattr(args, f.name)
        if raw is not None:
            overrides[f.name] = coerce(f.name, raw)
    cfg = dataclasses.replace(cfg, **overrides)
    if "threads" not in overrides:
        cfg = dataclasses.replace(cfg, threads=threads_from_env(cfg.threads))
    return cfg.validate()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
        cfg = resolve_config(args)
        rep, ok = build_report(args.command, cfg)
        data = emit(rep, cfg.format, cfg.scale)
    except (ConfigError, OSError) as exc:
        print(f"gapspec: configuration error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (ConvergenceError, UnmatchedPoleError) as exc:
        last = getattr(exc, "residuals", None)
        tail = f"; last residuals {np.asarray(last).tolist()}" if last is not None else ""
        print(f"gapspec: numerical failure: {exc}{tail}", file=stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"gapspec: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DOMAIN
    except GapSpecError as exc:
        print(f"gapspec: {exc}", file=stderr)
        return EXIT_NUMERIC
    if cfg.output == "-":
        out = getattr(stdout, "buffer", None)
        if out is not None:
            out.write(data)
            out.flush()
        else:
            stdout.write(data.decode("utf-8"))
    else:
        with open(cfg.output, "wb") as fh:
            fh.write(data)
    return 0 if ok else EXIT_VALIDATE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line interface: ``antimap {finite,dilate,cv,verify}``.

Exit codes: 0 success, 1 failed check (or leakage under ``--strict``),
2 usage error.
"""
import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from antimap import cv, dilation, finite
from antimap.channels import min_eigenvalue, tp_residual
from antimap.linalg import dagger, haar_random_state, sample_rng
from antimap.verify import run_suite

COMMANDS = ("finite", "dilate", "cv", "verify")
EMITS = ("choi", "kraus", "isometry", "unitary", "ancilla", "chi")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    dim: int = 2
    cutoff: int = cv.DEFAULT_CUTOFF
    seed_spec: str = "vacuum"
    tolerance: float = 1e-10
    samples: int = 100
    rng_seed: int = 0
    output_format: str = "json"
    output_path: str | None = None
    emit: tuple = ()
    strict: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        if self.samples < 1:
            raise UsageError("--samples must be at least 1")
        if self.dim < 1:
            raise UsageError("--dim must be at least 1")
        if self.cutoff < 2:
            raise UsageError("--cutoff must be at least 2")
        if self.output_format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        bad = set(self.emit) - set(EMITS)
        if bad:
            raise UsageError(f"unknown --emit target(s): {sorted(bad)}")


@dataclass
class Report:
    command: dict
    fidelities: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    payloads: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    wall_clock_ms: float = 0.0

    def add_check(self, name: str, value: float, tol: float):
        value = float(value)
        self.checks.append({"name": name, "value": value, "pass": bool(value <= tol)})

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c["pass"]]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = sorted(d["checks"], key=lambda c: c["name"])
        d["passed"] = self.passed
        return d


def fidelity_value(x: float) -> float:
    """Fidelities are reported with 15 significant digits."""
    return float(f"{x:.15g}")


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def vector_to_json(v: np.ndarray) -> dict:
    return matrix_to_json(np.asarray(v).reshape(-1, 1))


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"matrix payload has {len(data)} entries, expected {rows * cols}")
    flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    return flat.reshape(rows, cols)


def run_finite(cfg: RunConfig) -> Report:
    d = cfg.dim
    rep = Report(command=_echo(cfg))
    params = finite.optimize_covariant(d)
    machine = finite.optimal_machine(d)
    rep.fidelities["optimal"] = fidelity_value(finite.optimal_fidelity(d))
    rep.fidelities["covariant_c_S"] = fidelity_value(params.c_S)
    rep.diagnostics["covariant_c_A"] = params.c_A
    rep.diagnostics["kraus_count"] = len(machine.kraus)

    tol = cfg.tolerance
    rep.add_check("anticlone_equivalence", finite.anticlone_equivalence_check(d, cfg.samples, cfg.rng_seed), tol)
    rep.add_check("choi_cp", max(0.0, -min_eigenvalue(machine.choi)), tol)
    rep.add_check("choi_tp", tp_residual(machine.choi), tol)
    rep.add_check("choi_closed_form", np.linalg.norm(machine.choi.matrix - finite.optimal_choi(d).matrix), tol)
    rep.add_check("kraus_completeness", machine.kraus.completeness_residual(), tol)
    rep.add_check("isometry", machine.isometry.isometry_residual(), tol)

    if "choi" in cfg.emit:
        rep.payloads["choi"] = matrix_to_json(machine.choi.matrix)
    if "kraus" in cfg.emit:
        rep.payloads["kraus"] = [matrix_to_json(k) for k in machine.kraus.operators]
    if "isometry" in cfg.emit:
        rep.payloads["isometry"] = matrix_to_json(machine.isometry.v)
    return rep


def run_dilate(cfg: RunConfig) -> Report:
    d = cfg.dim
    if d < 2:
        raise UsageError("dilate needs --dim >= 2")
    rep = Report(command=_echo(cfg))
    dil = dilation.build_unitary(d)
    tol = cfg.tolerance
    rep.add_check("unitarity", dil.unitarity_residual(), tol)
    rep.add_check("ancilla_norm", abs(np.linalg.norm(dil.phi) - 1), tol)

    worst_t = worst_c = 0.0
    for i in range(cfg.samples):
        rho = haar_random_state(d, sample_rng(cfg.rng_seed, i))
        worst_t = max(worst_t, np.linalg.norm(dilation.transpose_via_dilation(d, rho, dil) - finite.optimal_map(d, rho)))
        worst_c = max(worst_c, np.linalg.norm(dilation.clone_via_dilation(d, rho, dil) - finite.cloning_map(d, rho)))
    rep.add_check("transpose_agreement", worst_t, tol)
    rep.add_check("clone_agreement", worst_c, tol)
    rep.fidelities["transpose"] = fidelity_value(finite.optimal_fidelity(d))
    rep.fidelities["clone"] = fidelity_value(finite.clone_fidelity(d))
    if d == 2:
        match = dilation.matches_qubit_reference(dil)
        rep.diagnostics["golden_match"] = match
        rep.add_check("golden_unitary", 0.0 if match else 1.0, tol)

    if "unitary" in cfg.emit:
        rep.payloads["unitary"] = matrix_to_json(dil.u)
    if "ancilla" in cfg.emit:
        rep.payloads["ancilla"] = vector_to_json(dil.phi)
    return rep


def run_cv(cfg: RunConfig) -> Report:
    N = cfg.cutoff
    rep = Report(command=_echo(cfg))
    try:
        seed = cv.parse_seed(cfg.seed_spec, N, tol_leak=np.inf)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep.diagnostics["leakage"] = seed.leakage
    if seed.leakage > cv.DEFAULT_TOL_LEAK:
        rep.warnings.append(
            f"seed leaks {seed.leakage:.3e} beyond cutoff {N} (tolerance {cv.DEFAULT_TOL_LEAK:g})"
        )

    v = cv.beam_splitter(N)
    cmap = cv.optimal_chi(seed, bs=v)
    tol = cfg.tolerance
    rep.fidelities["optimal"] = fidelity_value(cmap.fidelity)
    rep.diagnostics["lambda_max"] = cmap.lambda_max
    rep.diagnostics["eigen_gap"] = cmap.gap
    rep.diagnostics["covariance_residual_alpha_0.3"] = cv.covariance_residual_cv(cmap, 0.3)
    rep.diagnostics["choi_trace_residual_low_block"] = cv.choi_trace_residual(cmap, N // 2)

    red = cv.reduced_seed_operator(seed, v)
    rep.add_check("fidelity_eigenvalue_identity", abs(cv.cv_fidelity(seed, cmap) - cmap.lambda_max / 2), tol)
    rep.add_check("chi_eigen_residual", np.linalg.norm(red @ cmap.chi - cmap.lambda_max * cmap.chi), tol)
    rep.add_check("beam_splitter_unitarity", np.linalg.norm(dagger(v) @ v - np.eye(N * N)), tol)

    if "chi" in cfg.emit:
        rep.payloads["chi"] = vector_to_json(cmap.chi)
    if "choi" in cfg.emit:
        rep.payloads["choi"] = matrix_to_json(cmap.choi)
    return rep


def run_verify(cfg: RunConfig) -> Report:
    rep = Report(command=_echo(cfg))
    residuals = run_suite(range(1, 7), cfg.cutoff, min(cfg.samples, 20), cfg.rng_seed)
    for name, value in residuals.items():
        rep.add_check(name, value, cfg.tolerance)
    rep.fidelities = {f"finite.d{d}": fidelity_value(finite.optimal_fidelity(d)) for d in range(1, 7)}
    return rep


RUNNERS = {"finite": run_finite, "dilate": run_dilate, "cv": run_cv, "verify": run_verify}


def _echo(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d["emit"] = list(cfg.emit)
    return d


def run(cfg: RunConfig) -> Report:
    start = time.perf_counter()
    rep = RUNNERS[cfg.command](cfg)
    rep.wall_clock_ms = (time.perf_counter() - start) * 1e3
    return rep


def render(rep: Report, fmt: str) -> str:
    data = rep.to_dict()
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "name", "value", "pass"])
    for k, v in data["fidelities"].items():
        w.writerow(["fidelity", k, repr(v), ""])
    for c in data["checks"]:
        w.writerow(["check", c["name"], repr(c["value"]), c["pass"]])
    for k, v in data["diagnostics"].items():
        w.writerow(["diagnostic", k, repr(v), ""])
    for name, payload in data["payloads"].items():
        mats = payload if isinstance(payload, list) else [payload]
        for idx, m in enumerate(mats):
            for pos, (re_, im_) in enumerate(m["data"]):
                i, j = divmod(pos, m["cols"])
                w.writerow(["payload", f"{name}[{idx}][{i},{j}]", f"{re_!r}{im_:+}j", ""])
    for msg in data["warnings"]:
        w.writerow(["warning", "", msg, ""])
    w.writerow(["meta", "passed", data["passed"], ""])
    w.writerow(["meta", "wall_clock_ms", repr(data["wall_clock_ms"]), ""])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antimap",
        description="Optimal physical approximations of the transposition map.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--cutoff", type=int, default=None, help="Fock cutoff (default 20; 15 for verify)")
    parser.add_argument("--seed", dest="seed_spec", default="vacuum",
                        help="vacuum | coherent:<re>,<im> | squeezed:<r>")
    parser.add_argument("--tolerance", type=float, default=1e-10)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--rng-seed", type=int, default=0)
    parser.add_argument("--emit", action="append", choices=EMITS, default=[])
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", dest="output_path", default=None)
    parser.add_argument("--strict", action="store_true", help="nonzero exit on truncation leakage")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = 15 if args.command == "verify" else cv.DEFAULT_CUTOFF
    return RunConfig(
        command=args.command,
        dim=args.dim,
        cutoff=cutoff,
        seed_spec=args.seed_spec,
        tolerance=args.tolerance,
        samples=args.samples,
        rng_seed=args.rng_seed,
        output_format=args.output_format,
        output_path=args.output_path,
        emit=tuple(args.emit),
        strict=args.strict,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        rep = run(cfg)
    except UsageError as exc:
        print(f"antimap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = render(rep, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if not rep.passed:
        for c in rep.failures():
            print(f"antimap: check failed: {c['name']} = {c['value']:.3e}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.strict and rep.warnings:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

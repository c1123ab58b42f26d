"""Experiment suites behind each command, and `run` which executes one and writes its manifest."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import ClassVar

import numpy as np
import pyarrow as pa

from .. import __version__
from ..errors import ConditioningError, DomainError, ParameterError
from ..evolution import EvolutionConfig, Presets, run_decay_experiment
from ..log import CONSOLE, LOG, pformat, result_view
from ..model import (
    DensityProfile,
    PhaseField,
    conpres_diagnostics,
    stationarity_residual,
    uniform_ness,
)
from ..ness import (
    alpha_sweep,
    apriori_bounds,
    contraction_norm_estimate,
    integrability_residual,
    iterate_fixed_point,
    ness_residual,
    psi_map,
    reconstruct_ness,
    resolvent_marginal_quad,
    upper_bound_audit,
    verify_fourth_moment_relation,
)
from ..spectral import (
    assemble_mode_block,
    build_basis,
    c_alpha,
    coercivity_corpus,
    dms_constants,
    explicit_rate,
    gain_column,
    gap_table,
    numeric_gap,
    quadratic_form_gap,
)
from ..spectral.rates import EXTENSION
from ..utils import Timer
from .config import RunConfig
from .manifest import Assertion, FileEntry, RunManifest, timestamp
from .output import Outputs, quantity_table, with_quantity

STEADY_TOL = 1e-7
"""Pressure and momentum of converged steady states must be constant resp. zero to this level."""

STEADY_HORIZON = 25.0
STEADY_H1_TOL = 1e-8
"""Nonlinear runs over at least STEADY_HORIZON/(1 - α) must end this close to the steady state."""


@dataclass
class Suite(ABC):
    """Runs the operations of one command, collecting named assertions and writing artifacts."""

    command: ClassVar[str]

    cfg: RunConfig
    outputs: Outputs
    log: bool = False
    assertions: list[Assertion] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        passed = bool(passed)
        self.assertions.append(Assertion(name=name, passed=passed, detail=detail))
        if not passed:
            LOG.warning(f"Assertion '{name}' failed. {detail}")
        return passed

    def write_table(self, name: str, table: pa.Table):
        self.outputs.write_csv(name, table)
        if self.log:
            CONSOLE.print(result_view(table, title=f"{self.command} {name}"))

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @abstractmethod
    def execute(self):
        """Run the suite."""


class Suites:
    """Registry of suites by command name."""

    SUITES = {}

    @classmethod
    def register(cls, registered: type) -> type:
        cls.SUITES[registered.command] = registered
        return registered

    @classmethod
    def get(cls, command: str) -> type[Suite]:
        try:
            return cls.SUITES[command]
        except KeyError:
            raise ParameterError(f"Unknown command '{command}'.") from None


@Suites.register
@dataclass
class Ness(Suite):
    """Picard iteration from a random density, and the steady state it reconstructs."""

    command: ClassVar[str] = "ness"

    def execute(self):
        cfg = self.cfg
        params, grid, K = cfg.params, cfg.grid(), cfg.n_modes

        uniform = PhaseField.uniform(uniform_ness(params, grid), grid, K)
        uniform_residual = stationarity_residual(uniform, params)
        self.check("uniform-stationarity", uniform_residual <= 1e-10, f"{uniform_residual:.3e}")

        rho0 = DensityProfile.random(K, seed=cfg.seed)
        report = iterate_fixed_point(rho0, params, grid, cfg.tol, cfg.max_iter, log=self.log)
        self.check("picard-converged", report.converged, f"{report.iterations} iterations")

        f = reconstruct_ness(report.final_density, params, grid)
        residual = ness_residual(f, params)
        pressure_dev, momentum_sup = conpres_diagnostics(f, params)
        fourth = verify_fourth_moment_relation(f, params)
        distance = report.distance_to_constant()

        self.check("steady-state-residual", residual <= 1e-8, f"{residual:.3e}")
        self.check("constant-pressure", pressure_dev <= STEADY_TOL, f"{pressure_dev:.3e}")
        self.check("zero-momentum", momentum_sup <= STEADY_TOL, f"{momentum_sup:.3e}")
        self.check("fourth-moment-deviation", fourth.holds, f"{fourth.deviation:.3e}")
        self.check(
            "fourth-moment-kernel", fourth.kernel_residual <= 1e-8, f"{fourth.kernel_residual:.3e}"
        )
        if params.alpha <= 0.1:
            self.check("constant-density", distance <= 1e-10, f"L2 distance {distance:.3e}")

        residuals = pa.table(
            {
                "iteration": pa.array(range(1, len(report.residuals) + 1), pa.int64()),
                "residual": pa.array(report.residuals, pa.float64()),
                "ratio": pa.array([np.nan, *report.contraction_ratios], pa.float64()),
            }
        )
        self.write_table("residuals", with_quantity(residuals, "picard-residual"))
        self.outputs.write_json(
            "report",
            {
                "converged": report.converged,
                "iterations": report.iterations,
                "ratio": report.ratio,
                "distance_to_constant": distance,
                "uniform_stationarity_residual": uniform_residual,
                "steady_state_residual": residual,
                "pressure_deviation": pressure_dev,
                "momentum_sup": momentum_sup,
                "fourth_moment": {**asdict(fourth), "holds": fourth.holds},
                "density_modes": report.final_density.modes,
            },
        )


@Suites.register
@dataclass
class Contraction(Suite):
    """Contraction of Ψ_α: Picard ratios, the Jacobian norm and a sweep over α."""

    command: ClassVar[str] = "contraction"

    def execute(self):
        cfg = self.cfg
        params, grid, K = cfg.params, cfg.grid(), cfg.n_modes

        rho0 = DensityProfile.from_cosines(K, {1: 0.1})
        report = iterate_fixed_point(rho0, params, grid, cfg.tol, cfg.max_iter, log=self.log)
        estimate = contraction_norm_estimate(DensityProfile.constant(K), params, grid)
        gamma_1 = resolvent_marginal_quad(params, 1)
        first_ratio = report.contraction_ratios[0] if report.contraction_ratios else float("nan")

        self.check("picard-converged", report.converged, f"{report.iterations} iterations")
        self.check("power-iteration-converged", estimate.converged, f"error {estimate.error:.2e}")
        if params.alpha == 0:
            self.check(
                "picard-ratio-resolvent",
                abs(first_ratio - gamma_1) <= 1e-4,
                f"ratio {first_ratio:.8f} vs gamma_1 {gamma_1:.8f}",
            )
            self.check(
                "fast-convergence",
                report.iterations <= 200 and report.distance_to_constant() < max(cfg.tol, 1e-12),
                f"{report.iterations} iterations",
            )

        sweep = alpha_sweep(params, grid, np.linspace(0, 1, 11), K=min(K, 16), log=self.log)
        table = pa.table(
            {
                "alpha": pa.array(sweep.alphas, pa.float64()),
                "norm": pa.array(sweep.norms, pa.float64()),
                "error": pa.array(sweep.errors, pa.float64()),
            }
        )
        self.write_table("sweep", with_quantity(table, "contraction-factor"))
        lower, upper = sweep.bracket
        self.outputs.write_json(
            "report",
            {
                "first_ratio": first_ratio,
                "trailing_ratio": report.ratio,
                "gamma_1": gamma_1,
                "jacobian_norm": estimate.value,
                "jacobian_norm_error": estimate.error,
                "jacobian_norm_svd": estimate.reference,
                "iterations": report.iterations,
                "sweep_monotone": sweep.monotone,
                "contraction_bracket": [lower, upper],
            },
        )


@Suites.register
@dataclass
class Spectrum(Suite):
    """Per-mode spectral gaps and Lyapunov certificates for k = 0..kmax."""

    command: ClassVar[str] = "spectrum"

    def execute(self):
        cfg = self.cfg
        params, M = cfg.params, cfg.n_basis
        order = M + EXTENSION
        basis = build_basis(params, cfg.grid(2 * order + 2), M=order)

        zero = numeric_gap(0, params, basis, M=M, convention=cfg.convention)
        results = [zero] + gap_table(
            params, basis, kmax=cfg.kmax, M=M, convention=cfg.convention, log=self.log
        )

        gaps_ok = [r.k for r in results if not r.gap_ok]
        certificates_ok = [r.k for r in results if not r.certificate_ok]
        self.check("gap-at-least-rate", not gaps_ok, f"failing modes {gaps_ok}")
        self.check("lyapunov-certificate", not certificates_ok, f"failing modes {certificates_ok}")

        unstable = [r.k for r in results if not r.stable]
        if unstable:
            LOG.warning(f"Truncation-unstable gaps at modes {unstable}.")

        table = pa.Table.from_pylist([r.row() for r in results])
        self.write_table("gaps", with_quantity(table, "mode-spectral-gap"))


@Suites.register
@dataclass
class Rates(Suite):
    """Explicit rate, closed forms of the basis and matrices, and microscopic coercivity."""

    command: ClassVar[str] = "rates"

    def execute(self):
        cfg = self.cfg
        params = cfg.params
        rate = explicit_rate(params)
        basis = build_basis(params, cfg.grid(2 * cfg.n_basis + 2), M=cfg.n_basis)

        closed = c_alpha(params)
        a_1 = basis.recurrence[1]
        b_2 = gain_column(basis)[2]
        block = assemble_mode_block(1, params, basis, rate.c, cfg.convention)
        shift = rate.c / block.kappa
        expected = np.sort([1 - shift, 1 + shift] + [1.0] * (basis.order - 2))
        form_gap = quadratic_form_gap(params.alpha)
        coercivity = coercivity_corpus(params, basis, cfg.samples, cfg.seed)

        self.check("prefactor", rate.C == 4.0, f"C = {rate.C}")
        self.check("c-alpha-closed-form", abs(basis.c_alpha - closed) <= 1e-8)
        self.check("a1-unit", abs(a_1 - 1) <= 1e-8, f"a_1 = {a_1:.12f}")
        self.check("b2-alpha", abs(b_2 - params.alpha) <= 1e-8, f"b_2 = {b_2:.12f}")
        self.check(
            "lyapunov-matrix-spectrum",
            np.allclose(block.equivalence(), expected, rtol=0, atol=1e-12),
        )
        self.check(
            "quadratic-form-gap",
            abs(form_gap - (params.alpha - 1) / 2) <= 1e-12,
            f"{form_gap:.15f}",
        )
        self.check(
            "microscopic-coercivity", coercivity.holds, f"max excess {coercivity.max_excess:.3e}"
        )

        values = {
            "explicit-rate-prefactor": rate.C,
            "explicit-rate-lambda": rate.lam,
            "explicit-rate-refined": rate.refined,
            "certified-rate": rate.certified,
            "mixing-parameter": rate.c,
            "c-alpha": closed,
            "recurrence-a1": a_1,
            "gain-b2": b_2,
            "quadratic-form-gap": form_gap,
            "coercivity-min-rate": coercivity.min_rate,
        }
        self.write_table("constants", quantity_table(values))
        self.outputs.write_json("rate", asdict(rate))


@Suites.register
@dataclass
class Evolve(Suite):
    """Decay of a preset perturbation under the linearized or the nonlinear flow."""

    command: ClassVar[str] = "evolve"

    def perturbation(self):
        cfg = self.cfg
        kwds = {"amplitude": cfg.amplitude}
        if cfg.preset == "mode":
            kwds.update(m=cfg.basis_index, k=cfg.wavenumber)
        elif cfg.preset == "random":
            kwds.update(seed=cfg.seed, kmax=cfg.kmax)
        else:
            kwds.update(k=cfg.wavenumber)
        return Presets.get(cfg.preset, **kwds)

    def execute(self):
        cfg = self.cfg
        params, M, K = cfg.params, cfg.n_basis, cfg.n_modes
        basis = build_basis(params, cfg.grid(2 * M + 2), M=M)
        config = EvolutionConfig(
            dt=cfg.dt,
            t_end=cfg.t_end,
            scheme=cfg.scheme,
            record_every=cfg.record_every,
            linearized=cfg.linearized,
            order=M,
            convention=cfg.convention,
        )

        preset = self.perturbation()
        if cfg.linearized:
            h0 = preset.coefficients(basis, K)
        else:
            h0 = preset.field(basis, K)
        report = run_decay_experiment(h0, params, config, basis=basis, log=self.log)

        if cfg.linearized:
            self.check("decay-bound", report.bound_holds, f"prefactor {report.prefactor_check:.4f}")
            self.check("lyapunov-nonincreasing", report.lyapunov_monotone)
            if report.rate_comparable:
                self.check(
                    "fitted-rate",
                    report.rate_ok,
                    f"{report.fitted_rate:.6f} vs {report.theorem_rate:.6f}",
                )
            else:
                LOG.warning(f"Decay fit inconclusive (residual {report.fit_residual:.3e}).")
        else:
            rho_min = float(np.min(report.diagnostics["rho_min"]))
            self.check("positivity", rho_min > 0, f"min density {rho_min:.3e}")
            self.check("decay", report.final_norm() < report.norms_h1[0])
            if params.alpha < 1 and cfg.t_end >= STEADY_HORIZON / (1 - params.alpha):
                self.check(
                    "decay-to-steady",
                    report.final_norm() <= STEADY_H1_TOL,
                    f"final H1 error {report.final_norm():.3e}",
                )
            else:
                LOG.warning(
                    f"Horizon t_end = {cfg.t_end} is shorter than {STEADY_HORIZON}/(1 - α), "
                    "return to the steady state is not checked."
                )

        self.write_table("series", with_quantity(report.to_table(), "decay-norm"))
        summary = report.summary()
        if report.spectra is not None:
            summary["spectra"] = {str(k): eig for k, eig in report.spectra.items()}
        self.outputs.write_json("report", summary)


@Suites.register
@dataclass
class VerifyBounds(Suite):
    """A-priori bounds, checked on a corpus of Ψ_α outputs and on a converged steady state."""

    command: ClassVar[str] = "verify-bounds"

    CORPUS_MAX: ClassVar[int] = 50

    def execute(self):
        cfg = self.cfg
        params, grid, K = cfg.params, cfg.grid(), cfg.n_modes
        bounds = apriori_bounds(params, cfg.r, grid, K=min(K, 16))

        corpus = [
            DensityProfile.random(K, seed=cfg.seed + i, spread=0.9)
            for i in range(min(cfg.samples, self.CORPUS_MAX))
        ]
        corpus_min = min(psi_map(rho, params, grid).minimum() for rho in corpus)
        self.check(
            "pointwise-lower-bound",
            corpus_min >= bounds.lower_pointwise - 1e-9,
            f"{corpus_min:.6f} vs {bounds.lower_pointwise:.6f}",
        )

        report = iterate_fixed_point(corpus[0], params, grid, cfg.tol, cfg.max_iter, log=self.log)
        self.check("picard-converged", report.converged, f"{report.iterations} iterations")
        rho = report.final_density
        f = reconstruct_ness(rho, params, grid)
        fourth = verify_fourth_moment_relation(f, params)
        audit = upper_bound_audit(rho, params, grid)
        integrability = integrability_residual(rho, params, grid, cfg.r)

        self.check(
            "density-lower-bound",
            rho.minimum() >= bounds.lower_moment - 1e-9,
            f"{rho.minimum():.6f} vs {bounds.lower_moment:.6f}",
        )
        self.check(
            "fourth-moment-deviation",
            fourth.holds,
            f"{fourth.deviation:.3e} vs {fourth.bound:.3e}",
        )
        self.check("quadrature-constants", bounds.quadrature_gap <= 1e-8)

        values = {
            "density-lower-bound": bounds.lower_moment,
            "pointwise-lower-bound": bounds.lower_pointwise,
            "corpus-min-density": corpus_min,
            "steady-min-density": rho.minimum(),
            "fourth-moment-deviation": fourth.deviation,
            "fourth-moment-bound": fourth.bound,
            "integrability-lhs": integrability.lhs,
            "integrability-rhs": integrability.rhs,
            "sup-density": audit.sup,
            "holder-chain-line": audit.chain_line,
            "holder-chain-torus": audit.chain_torus,
            "contraction-upper": bounds.contraction_upper,
        }
        self.write_table("bounds", quantity_table(values))
        self.outputs.write_json(
            "bounds",
            {
                **asdict(bounds),
                "quadrature_gap": bounds.quadrature_gap,
                "fourth_moment": {**asdict(fourth), "holds": fourth.holds},
                "upper_bound_audit": {**asdict(audit), "holds": audit.holds},
                "integrability": {**asdict(integrability), "holds": integrability.holds},
            },
        )


@Suites.register
@dataclass
class Dms(Suite):
    """Constants of the auxiliary-operator hypocoercivity scheme."""

    command: ClassVar[str] = "dms"

    def execute(self):
        cfg = self.cfg
        params = cfg.params
        basis = build_basis(params, cfg.grid(2 * cfg.n_basis + 2), M=cfg.n_basis)
        constants = dms_constants(
            params, basis, kmax=cfg.kmax, samples=cfg.samples, seed=cfg.seed, log=self.log
        )

        self.check(
            "auxiliary-bounds",
            constants.explicit_bound_holds,
            f"|Ah| ratio {constants.a_ratio:.6f}, |SAh| ratio {constants.sa_ratio:.6f}",
        )
        self.check("macroscopic-coercivity", constants.macro_holds)
        if params.alpha < 1:
            self.check("positive-rate", constants.lam > 0, f"lambda = {constants.lam:.3e}")

        values = {f"dms-{k.replace('_', '-')}": v for k, v in asdict(constants).items()}
        self.write_table("constants", quantity_table(values))
        self.outputs.write_json("constants", asdict(constants))


def run(cfg: RunConfig, log: bool = False) -> RunManifest:
    """Execute the suite of `cfg.command` and write its artifacts and manifest to `output_dir`.

    Domain and conditioning errors end the run with status 'domain-error', parameter errors with
    'usage-error'; their message is kept verbatim in the manifest.
    """
    manifest = RunManifest(config=cfg, version=__version__, started=timestamp())
    outputs = Outputs(Path(cfg.output_dir), prefix=cfg.command)
    suite = Suites.get(cfg.command)(cfg, outputs, log=log)

    with Timer() as timer:
        try:
            suite.execute()
        except (DomainError, ConditioningError) as exc:
            manifest.status, manifest.error = "domain-error", str(exc)
        except ParameterError as exc:
            manifest.status, manifest.error = "usage-error", str(exc)
        else:
            manifest.status = "pass" if suite.passed else "fail"

    manifest.assertions = suite.assertions
    manifest.files = [FileEntry.of(path) for path in outputs.files]
    manifest.finished = timestamp()
    manifest.write(outputs.path("manifest", "json"))

    LOG.info(f"Suite '{cfg.command}' finished in {timer.elapsed:.2f} seconds.")
    if log:
        LOG.info(pformat(manifest))
    return manifest

"""Seeded property-verification suite.

Each check draws its own deterministic instance stream from one seed and
reports pass/fail counts plus the worst observed deviation, so two runs
with the same seed produce identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import enhanced_sensitivity
from .errors import NumericalConsistencyError
from .moments import (
    block_inverse,
    max_moment_sensitivity,
    moment_data,
    reduced_family,
    reduced_projector_stats,
    structured_inverse,
)
from .observables import x_opt, x_opt0
from .operators import _as_matrix, variance
from .randoms import random_instance, random_probabilities
from .spin import phase_evolve


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: int
    total: int
    worst: float

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status} {self.name}: {self.passed}/{self.total} "
            f"(worst deviation {self.worst!r})"
        )


def _commutator_mean(state, hamiltonian, observable) -> float:
    """-i<[X, H]> on the given state."""
    h = _as_matrix(hamiltonian)
    x = _as_matrix(observable)
    if state.is_pure:
        v = state.data
        return 2.0 * float((v.conj() @ x @ (h @ v)).imag)
    return 2.0 * float(np.trace(state.data @ x @ h).imag)


def check_nonnegativity(rng, n: int = 1000) -> CheckResult:
    """E >= -1e-9 (and a^-1 not significantly negative) on random instances."""
    passed = 0
    worst = np.inf
    for _ in range(n):
        state, h, basis, theta = random_instance(rng)
        state_theta = phase_evolve(state, h, theta)
        try:
            stats = reduced_projector_stats(state_theta, h, basis)
        except NumericalConsistencyError:
            worst = -np.inf
            continue
        e = stats.b**2 / stats.a_inv if stats.a_inv > 0 else 0.0
        worst = min(worst, e)
        if e >= -1e-9:
            passed += 1
    return CheckResult("enhancement nonnegativity", passed, n, float(worst))


def check_hierarchy(rng, n: int = 1000) -> CheckResult:
    """F <= F+E <= F_Q within 1e-8 relative on random instances."""
    passed = 0
    worst = 0.0
    for _ in range(n):
        state, h, basis, theta = random_instance(rng)
        try:
            br = enhanced_sensitivity(state, h, basis, theta, cross_check=False)
        except NumericalConsistencyError:
            worst = np.inf
            continue
        scale = max(abs(br.f_q), 1.0)
        violation = max(br.f - br.f_plus_e, br.f_plus_e - br.f_q, 0.0) / scale
        worst = max(worst, violation)
        if violation <= 1e-8:
            passed += 1
    return CheckResult("sensitivity hierarchy", passed, n, float(worst))


def check_two_path(rng, n: int = 500) -> CheckResult:
    """Closed-form F+E vs the moment-matrix route e_1^T M e_1."""
    passed = 0
    worst = 0.0
    for _ in range(n):
        state, h, basis, theta = random_instance(rng)
        state_theta = phase_evolve(state, h, theta)
        stats = reduced_projector_stats(state_theta, h, basis)
        kept = stats.kept
        f = float(np.sum(stats.d[kept] ** 2 / stats.p[kept]))
        e = stats.b**2 / stats.a_inv if stats.a_inv > 0 else 0.0
        closed = f + e
        md = moment_data(state_theta, reduced_family(h, basis, stats))
        unit = np.zeros(md.moment.shape[0])
        unit[0] = 1.0
        matrix_route = max_moment_sensitivity(md, unit)
        rel = abs(closed - matrix_route) / max(abs(closed), abs(matrix_route), 1.0)
        worst = max(worst, rel)
        if rel <= 1e-8:
            passed += 1
    return CheckResult("two-path equivalence", passed, n, float(worst))


def check_structured_inverse(rng, n: int = 100) -> CheckResult:
    """Closed-form projector-covariance inverse vs dense inverse, r <= 12."""
    passed = 0
    worst = 0.0
    for _ in range(n):
        r = int(rng.integers(2, 13))
        p = random_probabilities(rng, r)
        removed = int(rng.integers(0, r))
        others = np.concatenate([p[:removed], p[removed + 1 :]])
        dense = np.linalg.inv(np.diag(others) - np.outer(others, others))
        diff = float(np.max(np.abs(structured_inverse(p, removed) - dense)))
        worst = max(worst, diff)
        if diff <= 1e-10:
            passed += 1
    return CheckResult("structured projector inverse", passed, n, float(worst))


def check_block_inverse(rng, n: int = 100) -> CheckResult:
    """Assembled block inverse of the full covariance matrix vs dense inverse.

    Instances with condition number >= 1e10 or a degenerate reduction are
    redrawn; the closed form is only claimed on well-conditioned input.
    """
    passed = 0
    worst = 0.0
    done = 0
    attempts = 0
    while done < n and attempts < 50 * n:
        attempts += 1
        state, h, basis, theta = random_instance(rng)
        state_theta = phase_evolve(state, h, theta)
        stats = reduced_projector_stats(state_theta, h, basis)
        if stats.a_inv <= 0:
            continue
        md = moment_data(state_theta, reduced_family(h, basis, stats))
        if np.linalg.cond(md.gamma) >= 1e10:
            continue
        dense = np.linalg.inv(md.gamma)
        # Max-norm deviation relative to the inverse's own scale: the
        # absolute entries of Gamma^-1 grow like the condition number and
        # a fixed absolute tolerance would measure conditioning, not the
        # closed form.
        diff = float(
            np.max(np.abs(block_inverse(stats) - dense))
            / max(1.0, float(np.max(np.abs(dense))))
        )
        done += 1
        worst = max(worst, diff)
        if diff <= 1e-8:
            passed += 1
    return CheckResult("block covariance inverse", passed, done, float(worst))


def check_derivatives(rng, n: int = 50, step: float = 1e-5) -> CheckResult:
    """Analytic d_x vs central finite differences of p(x|theta)."""
    passed = 0
    worst = 0.0
    for _ in range(n):
        state, h, basis, theta = random_instance(rng)
        state_theta = phase_evolve(state, h, theta)
        stats = reduced_projector_stats(state_theta, h, basis)
        plus = reduced_projector_stats(phase_evolve(state, h, theta + step), h, basis)
        minus = reduced_projector_stats(phase_evolve(state, h, theta - step), h, basis)
        fd = (plus.p - minus.p) / (2 * step)
        scale = max(float(np.max(np.abs(stats.d))), 1e-12)
        rel = float(np.max(np.abs(stats.d - fd))) / scale
        worst = max(worst, rel)
        if rel <= 1e-6:
            passed += 1
    return CheckResult("analytic derivative", passed, n, float(worst))


def check_observable_identities(rng, n: int = 50) -> CheckResult:
    """Var(X_opt) = -i<[X_opt,H]> = F+E and the same for X_opt0 vs F."""
    passed = 0
    worst = 0.0
    for _ in range(n):
        state, h, basis, theta = random_instance(rng)
        br = enhanced_sensitivity(state, h, basis, theta, cross_check=False)
        state_theta = phase_evolve(state, h, theta)
        rel = 0.0
        for builder, target in ((x_opt, br.f_plus_e), (x_opt0, br.f)):
            op, _ = builder(state, h, basis, theta)
            var = variance(state_theta, op)
            comm = _commutator_mean(state_theta, h, op)
            scale = max(abs(target), 1.0)
            rel = max(rel, abs(var - target) / scale, abs(comm - target) / scale)
        worst = max(worst, rel)
        if rel <= 1e-8:
            passed += 1
    return CheckResult("optimal-observable identities", passed, n, float(worst))


def run_verification(
    seed: int,
    n_nonneg: int = 1000,
    n_hierarchy: int = 1000,
    n_two_path: int = 500,
    n_inverse: int = 100,
    n_derivative: int = 50,
    n_identity: int = 50,
):
    """Run every check on streams split off one seed; returns the results list."""
    root = np.random.default_rng(int(seed))
    streams = root.spawn(7)
    return [
        check_nonnegativity(streams[0], n_nonneg),
        check_hierarchy(streams[1], n_hierarchy),
        check_two_path(streams[2], n_two_path),
        check_structured_inverse(streams[3], n_inverse),
        check_block_inverse(streams[4], n_inverse),
        check_derivatives(streams[5], n_derivative),
        check_observable_identities(streams[6], n_identity),
    ]


def report(results) -> str:
    lines = [r.line() for r in results]
    total_failed = sum(r.total - r.passed for r in results)
    lines.append(
        f"verification {'passed' if total_failed == 0 else 'FAILED'}: "
        f"{sum(r.passed for r in results)}/{sum(r.total for r in results)} checks ok"
    )
    return "\n".join(lines) + "\n"

"""Channel figures of merit: output p-norms, minimal output entropy,
energy-constrained Holevo capacity, and multiplicativity/additivity checks.

Closed forms exist for classical-noise and thermal-noise channels; every
other channel goes through a derivative-free search over Gaussian inputs.
The search parameterizes covariances through the Euler form (two unitary
factors plus squeezings), so physicality holds by construction, and the
energy constraint is enforced by an exact projection, never a penalty.

Numeric searches are falsification-oriented: they can certify that no
sampled input beats a bound, not global optimality for custom channels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import channels as ch
from . import states as st
from .symplectic import (
    _embed_unitary,
    matrix_to_rowmajor,
    rng_stream,
    symplectic_eigenvalues,
)

#: Tolerance for comparisons against closed-form optima (inf side).
TOL_OPT_CLOSED = 1e-6
#: Tolerance for the flatter sup-side searches (capacity).
TOL_OPT_SUP = 1e-3


class UnsupportedKindError(ValueError):
    """The channel kind has no closed form; use the numeric search."""


class InfeasibleEnergyError(ValueError):
    """Energy budget below the total zero-point energy; capacity is zero."""


@dataclass(frozen=True)
class EnergyBudget:
    """Total input energy and the per-mode frequencies it refers to."""

    total: float
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", np.atleast_1d(np.asarray(self.omega, dtype=float)))
        if np.any(self.omega <= 0.0):
            raise ValueError("mode frequencies must be positive")

    @property
    def zero_point(self) -> float:
        """Minimum energy of any physical state: sum of omega_k / 2."""
        return 0.5 * float(np.sum(self.omega))

    @property
    def feasible(self) -> bool:
        return self.total >= self.zero_point - 1e-12


@dataclass
class OptimizationReport:
    """Outcome of a budgeted derivative-free search."""

    best_value: float
    best_input: np.ndarray
    evaluations: int
    budget: int
    converged: bool
    gap_to_closed_form: float | None = None

    def record(self) -> dict:
        out = {
            "best_value": self.best_value,
            "best_input": matrix_to_rowmajor(self.best_input),
            "evaluations": self.evaluations,
            "budget": self.budget,
            "converged": self.converged,
        }
        if self.gap_to_closed_form is not None:
            out["gap_to_closed_form"] = self.gap_to_closed_form
        return out


# ---------------------------------------------------------------------------
# closed forms

def _closed_form_arguments(channel: ch.GaussianChannel) -> np.ndarray:
    """Per-mode output spectrum at the optimal input, by channel kind."""
    if channel.kind == "classical":
        return 1.0 + ch.noise_spectrum(channel)
    if channel.kind in ("thermal", "lossy"):
        return 1.0 + 2.0 * (1.0 - channel.eta) * channel.nbar
    raise UnsupportedKindError(
        f"no closed form for kind {channel.kind!r}; use the numeric search"
    )


def min_output_fp_closed(channel: ch.GaussianChannel, p: float) -> float:
    """Closed-form infimum of F_p over pure Gaussian inputs.

    Classical noise: product of f_p(1 + y_k) over the symplectic spectrum
    of Y.  Thermal noise: product of f_p(1 + 2 (1 - eta_k) nbar_k).
    """
    if p <= 1.0:
        raise ValueError(f"order must be > 1, got {p}")
    return float(np.prod(st.f_p(_closed_form_arguments(channel), p)))


def max_output_p_norm(channel: ch.GaussianChannel, p: float) -> float:
    """Maximal output Schatten p-norm: 2^n / (inf F_p)^{1/p}."""
    inf_fp = min_output_fp_closed(channel, p)
    return 2.0**channel.n / inf_fp ** (1.0 / p)


def min_output_entropy(channel: ch.GaussianChannel, budget: int = 20000, seed: int = 0) -> float:
    """Minimal output entropy over Gaussian inputs.

    Closed form for classical/thermal kinds; a numeric search with the
    entropy objective otherwise.
    """
    try:
        args = _closed_form_arguments(channel)
    except UnsupportedKindError:
        return numeric_min_entropy(channel, budget=budget, seed=seed).best_value
    return st.von_neumann_entropy(args)


# ---------------------------------------------------------------------------
# search parameterizations

def _unitary_from_params(theta: np.ndarray, n: int) -> np.ndarray:
    """Map n^2 reals to a unitary through the exponential of a Hermitian."""
    h = np.zeros((n, n), dtype=complex)
    idx = n
    h[np.arange(n), np.arange(n)] = theta[:n]
    for i in range(n):
        for j in range(i + 1, n):
            h[i, j] = theta[idx] + 1j * theta[idx + 1]
            h[j, i] = theta[idx] - 1j * theta[idx + 1]
            idx += 2
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _pure_cov_dim(n: int) -> int:
    return n * n + n


def _pure_cov(theta: np.ndarray, n: int) -> np.ndarray:
    """Pure covariance gamma = T Z^2 T^T from n^2 + n parameters."""
    t = _embed_unitary(_unitary_from_params(theta[: n * n], n))
    z2 = np.exp(2.0 * np.clip(theta[n * n :], -12.0, 12.0))
    zz = np.repeat(z2, 2)
    zz[1::2] = 1.0 / z2
    return (t * zz[None, :]) @ t.T


def _phys_cov_dim(n: int) -> int:
    return 2 * n * n + 2 * n


def _phys_cov_factors(theta: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Symplectic S and excess spectrum d >= 0 from 2n^2 + 2n parameters."""
    t1 = _embed_unitary(_unitary_from_params(theta[: n * n], n))
    z = np.exp(np.clip(theta[n * n : n * n + n], -12.0, 12.0))
    zz = np.repeat(z, 2)
    zz[1::2] = 1.0 / z
    t2 = _embed_unitary(_unitary_from_params(theta[n * n + n : 2 * n * n + n], n))
    s = t1 @ (zz[:, None] * t2)
    d = np.clip(theta[2 * n * n + n :], -1e3, 1e3) ** 2
    return s, d


def _energy_of_cov(gamma: np.ndarray, omega: np.ndarray) -> float:
    w = np.repeat(omega, 2)
    return 0.25 * float(w @ np.diag(gamma))


def _project_to_energy(s: np.ndarray, d: np.ndarray, omega: np.ndarray, target: float) -> np.ndarray:
    """Physical covariance S D S^T with exact energy ``target``.

    Rescales the excess spectrum d when the pure part S S^T fits in the
    budget; otherwise shrinks toward the vacuum along the segment to the
    identity (both operations preserve physicality).
    """
    n = len(omega)
    gamma_pure = s @ s.T
    e0 = _energy_of_cov(gamma_pure, omega)
    e_vac = 0.5 * float(np.sum(omega))
    if target <= e_vac + 1e-12:
        return np.eye(2 * n)
    if e0 <= target:
        w = np.repeat(omega, 2)
        coef = np.array(
            [0.25 * float(w @ (s[:, 2 * j] ** 2 + s[:, 2 * j + 1] ** 2)) for j in range(n)]
        )
        weight = float(coef @ d)
        if weight < 1e-12:
            d = np.ones(n)
            weight = float(np.sum(coef))
        alpha = (target - e0) / weight
        dd = np.repeat(1.0 + alpha * d, 2)
        return (s * dd[None, :]) @ s.T
    t = (target - e_vac) / (e0 - e_vac)
    return t * gamma_pure + (1.0 - t) * np.eye(2 * n)


def _output_spectrum(channel: ch.GaussianChannel, gamma: np.ndarray) -> np.ndarray:
    return symplectic_eigenvalues(ch.apply_cov(channel, gamma))


def _restarted_nelder_mead(objective, dim: int, budget: int, seed: int, restarts: int, scale: float = 0.8):
    """Budgeted Nelder-Mead restarts; the first start is the origin.

    Restart starting points come from per-restart Philox streams, so the
    outcome is independent of evaluation order.  Returns the best value,
    its parameter vector, the evaluation count, and a convergence flag.
    """
    if budget < 1:
        raise ValueError(f"search budget must be >= 1, got {budget}")
    restarts = max(1, restarts)
    per_run = max(dim + 2, budget // restarts)
    best_val = np.inf
    best_x = np.zeros(dim)
    evals = 0
    converged = False
    for run in range(restarts):
        if evals >= budget:
            break
        x0 = np.zeros(dim) if run == 0 else rng_stream(seed, run).normal(scale=scale, size=dim)
        start_val = objective(x0)
        evals += 1
        if start_val < best_val:
            best_val, best_x = start_val, x0
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": min(per_run, budget - evals),
                "xatol": 1e-12,
                "fatol": 1e-14,
            },
        )
        evals += res.nfev
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
        converged = converged or bool(res.success)
    return best_val, best_x, evals, converged


def _guarded(value_fn):
    """Wrap an objective so numerical failures count as +inf."""

    def wrapped(theta):
        try:
            out = value_fn(theta)
        except (np.linalg.LinAlgError, ValueError, ArithmeticError):
            return np.inf
        return out if np.isfinite(out) else np.inf

    return wrapped


def numeric_inf_fp(
    channel: ch.GaussianChannel,
    p: float,
    budget: int = 20000,
    seed: int = 0,
    restarts: int = 6,
) -> OptimizationReport:
    """Derivative-free minimization of F_p(nu(output)) over pure inputs.

    The search space covers all pure Gaussian covariances of the full
    input, so entangled inputs to tensor-product channels are included.
    The objective is minimized in log form for conditioning; the report
    carries the gap to the closed form when one exists.
    """
    if p <= 1.0:
        raise ValueError(f"order must be > 1, got {p}")
    n = channel.n

    def log_fp(theta):
        gamma = _pure_cov(theta, n)
        nu = np.maximum(_output_spectrum(channel, gamma), 1.0)
        return float(np.sum(np.log(st.f_p(nu, p))))

    best_log, best_x, evals, converged = _restarted_nelder_mead(
        _guarded(log_fp), _pure_cov_dim(n), budget, seed, restarts
    )
    best = float(np.exp(best_log))
    try:
        gap = best - min_output_fp_closed(channel, p)
    except UnsupportedKindError:
        gap = None
    return OptimizationReport(
        best_value=best,
        best_input=_pure_cov(best_x, n),
        evaluations=evals,
        budget=budget,
        converged=converged,
        gap_to_closed_form=gap,
    )


def numeric_min_entropy(
    channel: ch.GaussianChannel,
    budget: int = 20000,
    seed: int = 0,
    restarts: int = 6,
) -> OptimizationReport:
    """Numeric twin of ``min_output_entropy`` for channels without a closed form."""
    n = channel.n

    def entropy_obj(theta):
        gamma = _pure_cov(theta, n)
        return st.von_neumann_entropy(np.maximum(_output_spectrum(channel, gamma), 1.0))

    best, best_x, evals, converged = _restarted_nelder_mead(
        _guarded(entropy_obj), _pure_cov_dim(n), budget, seed, restarts
    )
    try:
        gap = best - min_output_entropy_closed_only(channel)
    except UnsupportedKindError:
        gap = None
    return OptimizationReport(
        best_value=float(best),
        best_input=_pure_cov(best_x, n),
        evaluations=evals,
        budget=budget,
        converged=converged,
        gap_to_closed_form=gap,
    )


def min_output_entropy_closed_only(channel: ch.GaussianChannel) -> float:
    """Closed-form minimal output entropy; raises for unsupported kinds."""
    return st.von_neumann_entropy(_closed_form_arguments(channel))


def max_output_entropy_under_energy(
    channel: ch.GaussianChannel,
    budget: EnergyBudget,
    search_budget: int = 20000,
    seed: int = 0,
    restarts: int = 6,
) -> OptimizationReport:
    """Maximize the output entropy over physical inputs at fixed energy.

    The linear constraint sum_k omega_k Tr gamma_[k] = 4 E is enforced
    exactly by ``_project_to_energy``; the origin start corresponds to the
    mode-symmetric thermal candidate, so the result can never fall below
    that benchmark.

    Raises
    ------
    InfeasibleEnergyError
        When the budget lies below the total zero-point energy.
    """
    n = channel.n
    if budget.omega.shape != (n,):
        raise ValueError(f"budget frequencies must cover {n} modes, got {budget.omega.shape}")
    if not budget.feasible:
        raise InfeasibleEnergyError(
            f"energy {budget.total} below zero-point {budget.zero_point}"
        )

    def neg_entropy(theta):
        s, d = _phys_cov_factors(theta, n)
        gamma = _project_to_energy(s, d, budget.omega, budget.total)
        return -st.von_neumann_entropy(np.maximum(_output_spectrum(channel, gamma), 1.0))

    best_neg, best_x, evals, converged = _restarted_nelder_mead(
        _guarded(neg_entropy), _phys_cov_dim(n), search_budget, seed, restarts
    )
    s, d = _phys_cov_factors(best_x, n)
    return OptimizationReport(
        best_value=float(-best_neg),
        best_input=_project_to_energy(s, d, budget.omega, budget.total),
        evaluations=evals,
        budget=search_budget,
        converged=converged,
    )


@dataclass
class CapacityReport:
    """Energy-constrained Gaussian Holevo capacity of a channel."""

    value: float
    feasible: bool
    min_entropy: float
    sup_entropy: float | None = None
    search: OptimizationReport | None = None

    def record(self) -> dict:
        out = {
            "capacity": self.value,
            "feasible": self.feasible,
            "min_entropy": self.min_entropy,
        }
        if self.sup_entropy is not None:
            out["sup_entropy"] = self.sup_entropy
        if self.search is not None:
            out["search"] = self.search.record()
        return out


def gaussian_holevo_capacity(
    channel: ch.GaussianChannel,
    budget: EnergyBudget,
    search_budget: int = 20000,
    seed: int = 0,
    restarts: int = 6,
) -> CapacityReport:
    """Capacity = sup of output entropy at the energy budget minus the
    minimal output entropy; exactly zero for infeasible budgets."""
    smin = min_output_entropy(channel, budget=search_budget, seed=seed)
    if not budget.feasible:
        return CapacityReport(value=0.0, feasible=False, min_entropy=smin)
    sup = max_output_entropy_under_energy(
        channel, budget, search_budget=search_budget, seed=seed, restarts=restarts
    )
    return CapacityReport(
        value=max(sup.best_value - smin, 0.0),
        feasible=True,
        min_entropy=smin,
        sup_entropy=sup.best_value,
        search=sup,
    )


# ---------------------------------------------------------------------------
# multiplicativity / additivity

def separable_optimal_input(channel_list) -> np.ndarray:
    """Block-diagonal pure covariance attaining the product of optima.

    Thermal factors take the vacuum block; classical factors take the
    inverse Williamson frame of their (regularized) noise matrix, which
    aligns the input with Y so the output spectrum is exactly 1 + y_k.
    """
    from .symplectic import symplectic_inverse, williamson

    blocks = []
    for channel in channel_list:
        if channel.kind in ("thermal", "lossy"):
            blocks.append(np.eye(2 * channel.n))
        elif channel.kind == "classical":
            y = channel.y
            if float(np.linalg.eigvalsh(y)[0]) < ch.NOISE_EPS:
                y = y + ch.NOISE_EPS * np.eye(y.shape[0])
            s = williamson(y).s
            s_inv = symplectic_inverse(s)
            blocks.append(s_inv @ s_inv.T)
        else:
            raise UnsupportedKindError(f"no optimal-input witness for kind {channel.kind!r}")
    return ch._direct_sum(blocks)


@dataclass
class MultiplicativityReport:
    """Joint-search evidence for multiplicativity of the output p-norm."""

    p: float
    product_of_optima: float
    numeric_best: float
    witness_value: float
    margin: float
    passed: bool
    search: OptimizationReport | None = field(repr=False, default=None)

    def record(self) -> dict:
        return {
            "p": self.p,
            "product_of_optima": self.product_of_optima,
            "numeric_best": self.numeric_best,
            "witness_value": self.witness_value,
            "margin": self.margin,
            "pass": self.passed,
        }


def multiplicativity_check(
    channel_list,
    p: float,
    search_budget: int = 20000,
    seed: int = 0,
    tol: float = TOL_OPT_CLOSED,
) -> MultiplicativityReport:
    """Search for an entangled input beating the product of single-channel
    optima of F_p; PASS means none was found within tolerance and the
    separable witness attains the product."""
    if len(channel_list) < 2:
        raise ValueError("multiplicativity needs at least two channels")
    product = 1.0
    for channel in channel_list:
        product *= min_output_fp_closed(channel, p)
    joint = ch.tensor(channel_list)
    search = numeric_inf_fp(joint, p, budget=search_budget, seed=seed)
    witness_gamma = separable_optimal_input(channel_list)
    witness_nu = np.maximum(_output_spectrum(joint, witness_gamma), 1.0)
    witness_value = float(np.prod(st.f_p(witness_nu, p)))
    margin = search.best_value - product
    passed = bool(margin >= -tol and abs(witness_value - product) <= tol * max(1.0, product))
    return MultiplicativityReport(
        p=p,
        product_of_optima=product,
        numeric_best=search.best_value,
        witness_value=witness_value,
        margin=float(margin),
        passed=passed,
        search=search,
    )


@dataclass
class AdditivityReport:
    """Comparison of joint capacity against the best energy split."""

    total_energy: float
    joint_capacity: float
    best_split_value: float
    best_split: tuple[float, ...]
    margin: float
    passed: bool

    def record(self) -> dict:
        return {
            "total_energy": self.total_energy,
            "joint_capacity": self.joint_capacity,
            "best_split_value": self.best_split_value,
            "best_split": list(self.best_split),
            "margin": self.margin,
            "pass": self.passed,
        }


def additivity_check(
    channel_list,
    budget: EnergyBudget,
    search_budget: int = 8000,
    per_channel_budget: int = 3000,
    seed: int = 0,
    grid_points: int = 11,
    tol: float = TOL_OPT_SUP,
) -> AdditivityReport:
    """Compare C_G of the tensor channel against the best split of the
    energy budget across factors, on a uniform grid per split dimension."""
    if len(channel_list) < 2:
        raise ValueError("additivity needs at least two channels")
    mode_counts = [c.n for c in channel_list]
    if budget.omega.shape != (sum(mode_counts),):
        raise ValueError(
            f"budget frequencies must cover {sum(mode_counts)} modes, got {budget.omega.shape}"
        )
    omegas = []
    at = 0
    for count in mode_counts:
        omegas.append(budget.omega[at : at + count])
        at += count
    zero_points = [0.5 * float(np.sum(w)) for w in omegas]
    if budget.total < sum(zero_points) - 1e-12:
        raise InfeasibleEnergyError(
            f"energy {budget.total} below joint zero-point {sum(zero_points)}"
        )

    joint = ch.tensor(channel_list)
    joint_cap = gaussian_holevo_capacity(
        joint, budget, search_budget=search_budget, seed=seed
    ).value

    def capacity_at(index: int, energy: float) -> float:
        report = gaussian_holevo_capacity(
            channel_list[index],
            EnergyBudget(energy, omegas[index]),
            search_budget=per_channel_budget,
            seed=seed + 1000 * (index + 1),
        )
        return report.value

    # Grid over the splits of the spendable surplus above the zero points.
    surplus = budget.total - sum(zero_points)
    fractions = np.linspace(0.0, 1.0, grid_points)
    best_value = -np.inf
    best_split: tuple[float, ...] = ()
    m = len(channel_list)
    cache: dict[tuple[int, float], float] = {}
    for shares in itertools.product(fractions, repeat=m - 1):
        if sum(shares) > 1.0 + 1e-12:
            continue
        parts = list(shares) + [1.0 - sum(shares)]
        energies = tuple(zero_points[i] + surplus * parts[i] for i in range(m))
        total = 0.0
        for i, energy in enumerate(energies):
            key = (i, round(energy, 12))
            if key not in cache:
                cache[key] = capacity_at(i, energy)
            total += cache[key]
        if total > best_value:
            best_value = total
            best_split = energies
    margin = joint_cap - best_value
    return AdditivityReport(
        total_energy=budget.total,
        joint_capacity=joint_cap,
        best_split_value=best_value,
        best_split=best_split,
        margin=float(margin),
        passed=bool(abs(margin) <= tol),
    )


# ---------------------------------------------------------------------------
# log f_p concavity grid

@dataclass
class ConcavityReport:
    """Grid evidence that ln f_p is concave (and g_p >= 0 for p >= 2)."""

    worst_second_difference: float
    min_witness: float
    grid_size: int
    passed: bool

    def record(self) -> dict:
        return {
            "worst_second_difference": self.worst_second_difference,
            "min_witness": self.min_witness,
            "grid_size": self.grid_size,
            "pass": self.passed,
        }


def log_fp_concavity_check(
    ps=(1.1, 2.0, 3.0, 7.0),
    x_low: float = 1.0 + 1e-3,
    x_high: float = 50.0,
    points: int = 160,
    bound: float = 1e-9,
) -> ConcavityReport:
    """Second central differences of ln f_p on a log grid in x - 1.

    The step shrinks near x = 1 where the curvature blows up, keeping the
    truncation error well below the magnitude of the (negative) value.
    """
    xs = 1.0 + np.geomspace(x_low - 1.0, x_high - 1.0, points)
    worst = -np.inf
    min_witness = np.inf
    for p in ps:
        h = np.minimum(0.05, (xs - 1.0) / 8.0)
        up = np.log(st.f_p(xs + h, p))
        mid = np.log(st.f_p(xs, p))
        dn = np.log(st.f_p(xs - h, p))
        second = (up - 2.0 * mid + dn) / h**2
        worst = max(worst, float(np.max(second)))
        if p >= 2.0:
            min_witness = min(min_witness, float(np.min(st.g_p(xs, p))))
    return ConcavityReport(
        worst_second_difference=worst,
        min_witness=min_witness,
        grid_size=len(ps) * points,
        passed=bool(worst <= bound and min_witness >= 0.0),
    )

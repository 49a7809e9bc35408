"""Dense real linear algebra for the symplectic group Sp(2n, R).

Conventions used throughout the package:

* Modes are interleaved: the quadrature ordering is (q1, p1, ..., qn, pn),
  so the symplectic form is the block diagonal J = J1 + J1 + ... with
  J1 = [[0, 1], [-1, 0]].
* Symplectic eigenvalues are always returned in ascending order.  The
  ordering is a convention of this library, not a mathematical necessity.
* All randomness flows through the counter-based Philox generator, keyed
  by ``(seed, *lane)`` via ``rng_stream``.  Identical seeds reproduce
  identical matrices bit for bit on a given platform/numpy build.

Factorizations returned here (Williamson, Euler) are unique only up to an
orthosymplectic gauge; callers should verify residuals, never compare
factors entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

#: Membership tolerance for symplectic / orthogonal / unitary residuals.
TOL_SYM = 1e-10
#: Residual tolerance for matrix factorizations (Williamson, Euler).
TOL_DECOMP = 1e-8

_J1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class DimensionError(ValueError):
    """Matrix or vector dimensions are invalid for the requested operation."""


class NotSymplecticError(ValueError):
    """Input fails a symplectic/orthosymplectic membership test."""


class NotPositiveDefiniteError(ValueError):
    """Input matrix is not symmetric positive-definite."""


def rng_stream(seed: int, *lane: int) -> np.random.Generator:
    """Return a Philox generator for the stream identified by (seed, *lane).

    Distinct lanes give statistically independent, reproducible streams;
    campaigns use one lane per trial so results do not depend on execution
    order.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=lane)))


def symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form J, block diagonal in J1."""
    if n < 1:
        raise DimensionError(f"mode count must be >= 1, got {n}")
    out = np.zeros((2 * n, 2 * n))
    for k in range(n):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = _J1
    return out


def _mode_count(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] % 2 != 0:
        raise DimensionError(f"matrix dimension must be even, got {m.shape[0]}")
    return m.shape[0] // 2


class SymplecticCheck(NamedTuple):
    ok: bool
    residual: float


def symplectic_residual(m: np.ndarray) -> float:
    """Max-norm residual ||M J M^T - J|| of the group membership equation."""
    n = _mode_count(m)
    j = symplectic_form(n)
    return float(np.max(np.abs(m @ j @ m.T - j)))


def orthogonality_residual(m: np.ndarray) -> float:
    """Max-norm residual ||M M^T - I||."""
    m = np.asarray(m)
    return float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))


def is_symplectic(m: np.ndarray, tol: float = TOL_SYM) -> SymplecticCheck:
    """Test membership in Sp(2n, R); always reports the residual."""
    res = symplectic_residual(m)
    return SymplecticCheck(res <= tol, res)


def _check_spd(a: np.ndarray, tol: float = TOL_SYM) -> np.ndarray:
    """Validate symmetry and positive-definiteness; return the eigenvalues."""
    a = np.asarray(a, dtype=float)
    _mode_count(a)
    sym = float(np.max(np.abs(a - a.T)))
    if sym > tol * max(1.0, float(np.max(np.abs(a)))):
        raise NotPositiveDefiniteError(f"matrix is not symmetric (residual {sym:.3e})")
    evals = np.linalg.eigvalsh(a)
    if evals[0] <= 0.0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (minimum eigenvalue {evals[0]:.3e})"
        )
    return evals


def _sym_power(a: np.ndarray, power: float) -> np.ndarray:
    """Symmetric matrix power via eigendecomposition; input assumed SPD."""
    w, v = np.linalg.eigh(a)
    return (v * w**power) @ v.T


def symplectic_eigenvalues(a: np.ndarray, tol: float = TOL_SYM) -> np.ndarray:
    """Symplectic eigenvalues of a symmetric positive-definite matrix.

    Computed as the singular values of A^{1/2} J A^{1/2}, which occur in
    equal pairs; one representative of each pair is returned, in ascending
    order.  This route uses only symmetric eigensolvers and an SVD; the
    non-symmetric eigenproblem of J A is kept separately as a cross-check
    (see ``symplectic_eigenvalues_ja``).

    Parameters
    ----------
    a : (2n, 2n) array
        Symmetric positive-definite matrix.
    tol : float
        Symmetry tolerance for input validation.

    Returns
    -------
    (n,) array of positive reals, ascending.
    """
    _check_spd(a, tol)
    n = a.shape[0] // 2
    root = _sym_power(np.asarray(a, dtype=float), 0.5)
    sv = np.linalg.svd(root @ symplectic_form(n) @ root, compute_uv=False)
    return sv[::2][::-1].copy()


def symplectic_eigenvalues_ja(a: np.ndarray, tol: float = TOL_SYM) -> np.ndarray:
    """Cross-check oracle: |imaginary parts| of the eigenvalues of J A.

    The eigenvalues of J A are +/- i nu_j; this path is independent of the
    SVD route used by ``symplectic_eigenvalues``.
    """
    _check_spd(a, tol)
    n = a.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ np.asarray(a, dtype=float))
    # |imag| holds each nu twice (from +i nu and -i nu); keep one per pair.
    return np.sort(np.abs(ev.imag))[::2]


def _batched_symplectic_eigenvalues(stack: np.ndarray) -> np.ndarray:
    """Vectorized spectrum of a (batch, 2n, 2n) stack of SPD matrices."""
    n = stack.shape[-1] // 2
    w, v = np.linalg.eigh(stack)
    root = (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v, -1, -2)
    j = symplectic_form(n)
    sv = np.linalg.svd(root @ j @ root, compute_uv=False)
    return sv[..., ::2][..., ::-1]


def _extract_planes(columns: np.ndarray, partner) -> list[tuple[np.ndarray, np.ndarray]]:
    """Deterministic symplectic Gram-Schmidt over a degenerate cluster.

    ``columns`` spans an even-dimensional invariant subspace; ``partner``
    maps a unit vector v to its (automatically orthogonal) plane partner.
    Each step takes the largest remaining direction, deflates the pair,
    and drops columns that the extracted planes have absorbed.
    """
    expected = columns.shape[1] // 2
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    rest = columns
    while rest.shape[1] > 0:
        norms = np.linalg.norm(rest, axis=0)
        pick = int(np.argmax(norms))
        if norms[pick] < 1e-6:
            break
        v = rest[:, pick] / norms[pick]
        w = partner(v)
        pairs.append((v, w))
        rest = np.delete(rest, pick, axis=1)
        rest = rest - np.outer(v, v @ rest) - np.outer(w, w @ rest)
        rest = rest[:, np.linalg.norm(rest, axis=0) > 1e-6]
    if len(pairs) != expected:
        raise ArithmeticError(
            f"plane pairing extracted {len(pairs)} planes from a cluster of dimension {2 * expected}"
        )
    return pairs


def _pair_planes(b: np.ndarray, basis: np.ndarray, groups: Sequence[Sequence[int]]):
    """Pair invariant 2-planes of a skew-symmetric matrix ``b``.

    ``basis`` holds orthonormal eigenvectors of b^T b; ``groups`` indexes
    numerically degenerate clusters.  Returns (nu, w, v) triples with
    nu = 1 / ||B v||.
    """
    def partner(v):
        bv = b @ v
        norm = np.linalg.norm(bv)
        if norm <= 0.0:
            raise NotPositiveDefiniteError("skew canonical form: singular 2-plane")
        return bv / norm

    planes = []
    for group in groups:
        for v, w in _extract_planes(basis[:, list(group)], partner):
            planes.append((1.0 / float(np.linalg.norm(b @ v)), w, v))
    return planes


def _degenerate_groups(values: np.ndarray, width: float) -> list[list[int]]:
    """Split a sorted vector into clusters of numerically equal entries."""
    groups: list[list[int]] = []
    i = 0
    while i < len(values):
        j = i + 1
        while j < len(values) and abs(values[j] - values[i]) <= width:
            j += 1
        groups.append(list(range(i, j)))
        i = j
    return groups


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """Symplectic congruence S A S^T = diag(nu_1, nu_1, ..., nu_n, nu_n)."""

    s: np.ndarray
    spectrum: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        """The paired diagonal diag(nu_1, nu_1, ...) as a matrix."""
        return np.diag(np.repeat(self.spectrum, 2))


def williamson(a: np.ndarray, tol: float = TOL_SYM, tol_decomp: float = TOL_DECOMP) -> WilliamsonDecomposition:
    """Williamson normal form of a symmetric positive-definite matrix.

    Construction: form the skew-symmetric B = A^{-1/2} J A^{-1/2}, reduce
    it to its real canonical form B = O (+_j nu_j^{-1} J1) O^T with O
    orthogonal (symmetric eigenproblem of B^T B plus pairing of invariant
    2-planes), and return S = D^{1/2} O^T A^{-1/2}.  Only symmetric
    eigensolvers are involved.

    Parameters
    ----------
    a : (2n, 2n) array
        Symmetric positive-definite matrix.
    tol, tol_decomp : float
        Input-validation tolerance and residual bound for the output.

    Returns
    -------
    WilliamsonDecomposition
        ``s`` symplectic, ``spectrum`` ascending; the congruence residual
        is verified to be at most ``tol_decomp`` before returning.

    Raises
    ------
    NotPositiveDefiniteError
        If the input is not symmetric positive-definite.
    ArithmeticError
        If the constructed decomposition misses the residual bound; the
        residual value is included in the message.
    """
    a = np.asarray(a, dtype=float)
    _check_spd(a, tol)
    n = a.shape[0] // 2
    a_isqrt = _sym_power(a, -0.5)
    j = symplectic_form(n)
    b = a_isqrt @ j @ a_isqrt
    m = b.T @ b
    mu, basis = np.linalg.eigh(m)
    width = 1e-10 * max(1.0, float(mu[-1]))
    planes = _pair_planes(b, basis, _degenerate_groups(mu, width))
    planes.sort(key=lambda plane: plane[0])

    spectrum = np.array([plane[0] for plane in planes])
    o = np.empty((2 * n, 2 * n))
    for k, (_, w, v) in enumerate(planes):
        o[:, 2 * k] = w
        o[:, 2 * k + 1] = v
    s = np.sqrt(np.repeat(spectrum, 2))[:, None] * (o.T @ a_isqrt)

    residual = float(np.max(np.abs(s @ a @ s.T - np.diag(np.repeat(spectrum, 2)))))
    if residual > tol_decomp:
        raise ArithmeticError(f"Williamson residual {residual:.3e} exceeds {tol_decomp:.1e}")
    return WilliamsonDecomposition(s=s, spectrum=spectrum)


@dataclass(frozen=True)
class EulerDecomposition:
    """Factorization S = T1 Z T2 with T1, T2 orthosymplectic, z_j >= 1."""

    t1: np.ndarray
    z: np.ndarray
    t2: np.ndarray

    @property
    def z_matrix(self) -> np.ndarray:
        """Z = diag(z_1, 1/z_1, ..., z_n, 1/z_n)."""
        return np.diag(_paired_squeeze(self.z))


def _paired_squeeze(z: np.ndarray) -> np.ndarray:
    zz = np.repeat(np.asarray(z, dtype=float), 2)
    zz[1::2] = 1.0 / zz[1::2]
    return zz


def euler_decompose(s: np.ndarray, tol: float = TOL_SYM, tol_decomp: float = TOL_DECOMP) -> EulerDecomposition:
    """Euler (orthosymplectic - squeeze - orthosymplectic) factorization.

    Uses the polar decomposition S = O P: the positive factor
    P = (S^T S)^{1/2} is symplectic, so its eigenvalues come in (z, 1/z)
    pairs and its invariant 2-planes are symplectic.  Orthonormal
    eigenvector pairs (u, -J u) assemble an orthosymplectic C with
    P = C Z C^T; then T2 = C^T and T1 = S C Z^{-1}.

    The factors are gauge-dependent; only the recomposition residual and
    the K(n) membership of T1, T2 are contractual.

    Raises
    ------
    NotSymplecticError
        If the input fails the symplectic membership test at ``tol``.
    """
    s = np.asarray(s, dtype=float)
    n = _mode_count(s)
    ok, res = is_symplectic(s, tol)
    if not ok:
        raise NotSymplecticError(f"input is not symplectic (residual {res:.3e} > {tol:.1e})")
    j = symplectic_form(n)

    p = _sym_power(s.T @ s, 0.5)
    lam, vec = np.linalg.eigh(p)
    # Cluster width below which an eigenvalue is treated as exactly 1; the
    # z=1 eigenspace is the only place eigh can mix the (z, 1/z) partners.
    width = 200.0 * np.finfo(float).eps * float(lam[-1])
    top = [i for i in range(2 * n) if lam[i] > 1.0 + width]
    unit = [i for i in range(2 * n) if abs(lam[i] - 1.0) <= width]
    top.sort(key=lambda i: -lam[i])

    cols = []
    zs = []
    for i in top:
        u = vec[:, i]
        cols.extend([u, -j @ u])
        zs.append(float(lam[i]))
    for v, w in _extract_planes(vec[:, unit], lambda v: -j @ v):
        cols.extend([v, w])
        zs.append(1.0)

    if len(zs) != n:
        raise ArithmeticError(f"Euler pairing produced {len(zs)} planes, expected {n}")
    c = np.column_stack(cols)
    z = np.array(zs)
    t2 = c.T
    t1 = s @ (c / _paired_squeeze(z)[None, :])

    for name, t in (("T1", t1), ("T2", t2)):
        worst = max(symplectic_residual(t), orthogonality_residual(t))
        if worst > tol:
            raise ArithmeticError(f"Euler factor {name} leaves K(n) (residual {worst:.3e})")
    recomposed = t1 @ (_paired_squeeze(z)[:, None] * t2)
    residual = float(np.max(np.abs(recomposed - s)))
    if residual > tol_decomp:
        raise ArithmeticError(f"Euler recomposition residual {residual:.3e} exceeds {tol_decomp:.1e}")
    return EulerDecomposition(t1=t1, z=z, t2=t2)


def unitary_to_orthosymplectic(u: np.ndarray, tol: float = TOL_SYM) -> np.ndarray:
    """Embed an n x n unitary into K(n) = Sp(2n, R) intersect O(2n).

    Block (j, k) of the image is [[Re u_jk, Im u_jk], [-Im u_jk, Re u_jk]];
    the map is a group isomorphism onto K(n).
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {u.shape}")
    res = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
    if res > tol:
        raise NotSymplecticError(f"input is not unitary (residual {res:.3e} > {tol:.1e})")
    return _embed_unitary(u)


def _embed_unitary(u: np.ndarray) -> np.ndarray:
    """Unvalidated, batch-capable version of the K(n) embedding."""
    n = u.shape[-1]
    t = np.zeros(u.shape[:-2] + (2 * n, 2 * n))
    t[..., 0::2, 0::2] = u.real
    t[..., 1::2, 1::2] = u.real
    t[..., 0::2, 1::2] = u.imag
    t[..., 1::2, 0::2] = -u.imag
    return t


def orthosymplectic_to_unitary(t: np.ndarray, tol: float = TOL_SYM) -> np.ndarray:
    """Inverse of ``unitary_to_orthosymplectic`` on K(n).

    Rejects inputs that are not simultaneously symplectic and orthogonal,
    reporting the larger of the two residuals.  The paired block structure
    is implied by K(n) membership; entries are read off symmetrized.
    """
    t = np.asarray(t, dtype=float)
    _mode_count(t)
    res = max(symplectic_residual(t), orthogonality_residual(t))
    if res > tol:
        raise NotSymplecticError(f"input is not in K(n) (residual {res:.3e} > {tol:.1e})")
    re = 0.5 * (t[0::2, 0::2] + t[1::2, 1::2])
    im = 0.5 * (t[0::2, 1::2] - t[1::2, 0::2])
    return re + 1j * im


def symplectic_from_factors(u1: np.ndarray, z: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Assemble T(U1) Z T(U2) from two unitaries and squeeze values z > 0."""
    t1 = unitary_to_orthosymplectic(u1)
    t2 = unitary_to_orthosymplectic(u2)
    return t1 @ (_paired_squeeze(np.asarray(z, dtype=float))[:, None] * t2)


def _haar_unitary(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    """Haar-random unitaries via QR of complex Gaussians, phase-fixed diagonal."""
    shape = (n, n) if size is None else (size, n, n)
    zmat = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    q, r = np.linalg.qr(zmat)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def random_unitary(n: int, seed: int = 0) -> np.ndarray:
    """Seeded Haar-random n x n unitary."""
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    return _haar_unitary(rng_stream(seed), n)


def sample_symplectics(
    rng: np.random.Generator,
    n: int,
    count: int,
    squeeze_range: tuple[float, float] = (1.0, 4.0),
    log_squeeze: bool = False,
) -> np.ndarray:
    """Vectorized sampler of (count, 2n, 2n) symplectic matrices.

    Each sample is T(U1) Z T(U2) with U1, U2 Haar random and squeezings
    drawn uniformly (or log-uniformly) from ``squeeze_range``.
    """
    lo, hi = squeeze_range
    if lo < 1.0 or hi < lo:
        raise ValueError(f"squeeze range must satisfy 1 <= lo <= hi, got {squeeze_range}")
    t1 = _embed_unitary(_haar_unitary(rng, n, count))
    t2 = _embed_unitary(_haar_unitary(rng, n, count))
    if log_squeeze:
        z = np.exp(rng.uniform(np.log(lo), np.log(hi), (count, n)))
    else:
        z = rng.uniform(lo, hi, (count, n))
    zz = np.repeat(z, 2, axis=1)
    zz[:, 1::2] = 1.0 / zz[:, 1::2]
    return t1 @ (zz[:, :, None] * t2)


def random_symplectic(n: int, squeeze_range: tuple[float, float] = (1.0, 4.0), seed: int = 0) -> np.ndarray:
    """Seeded random symplectic matrix built through the Euler form."""
    if n < 1:
        raise DimensionError(f"mode count must be >= 1, got {n}")
    return sample_symplectics(rng_stream(seed), n, 1, squeeze_range)[0]


def symplectic_inverse(s: np.ndarray) -> np.ndarray:
    """Inverse of a symplectic matrix: S^{-1} = J S^T J^T."""
    n = _mode_count(s)
    j = symplectic_form(n)
    return j @ s.T @ j.T


def sample_spd(
    rng: np.random.Generator,
    n: int,
    count: int,
    nu_range: tuple[float, float],
    squeeze_range: tuple[float, float] = (1.0, 3.0),
) -> np.ndarray:
    """Stack of SPD matrices with symplectic spectra drawn from nu_range.

    Construction: gamma = S^{-1} D (S^{-1})^T with S a random symplectic
    and D the paired diagonal of the target spectrum, so the Williamson
    transform of each sample is S itself.  No physicality gate is applied;
    any nu_min > 0 is accepted.
    """
    lo, hi = nu_range
    if lo <= 0.0 or hi < lo:
        raise ValueError(f"spectrum range must satisfy 0 < lo <= hi, got {nu_range}")
    s = sample_symplectics(rng, n, count, squeeze_range)
    j = symplectic_form(n)
    s_inv = j @ np.swapaxes(s, -1, -2) @ j.T
    nu = rng.uniform(lo, hi, (count, n))
    d = np.repeat(nu, 2, axis=1)
    return s_inv @ (d[:, :, None] * np.swapaxes(s_inv, -1, -2))


def random_spd(n: int, nu_range: tuple[float, float], seed: int = 0) -> np.ndarray:
    """Seeded random SPD matrix with symplectic spectrum in nu_range."""
    if n < 1:
        raise DimensionError(f"mode count must be >= 1, got {n}")
    return sample_spd(rng_stream(seed), n, 1, nu_range)[0]


def random_covariance(n: int, nu_range: tuple[float, float] = (1.0, 3.0), seed: int = 0) -> np.ndarray:
    """Seeded random physical covariance matrix (all nu_j >= 1).

    Rejects nu_min < 1, which would generate unphysical states; use
    ``random_spd`` when the positive-definite cone without the physicality
    gate is wanted.
    """
    if nu_range[0] < 1.0:
        raise ValueError(f"physical covariance requires nu_min >= 1, got {nu_range[0]}")
    return random_spd(n, nu_range, seed)


def truncation_residual(sk: np.ndarray, n: int) -> float:
    """Max-norm residual of S J_n S^T = J_k for a 2k x 2n matrix."""
    sk = np.asarray(sk, dtype=float)
    if sk.ndim != 2 or sk.shape != (sk.shape[0], 2 * n) or sk.shape[0] % 2 != 0:
        raise DimensionError(f"expected a 2k x {2*n} matrix, got shape {sk.shape}")
    k = sk.shape[0] // 2
    return float(np.max(np.abs(sk @ symplectic_form(n) @ sk.T - symplectic_form(k))))


def truncate_rows(s: np.ndarray, k: int, tol: float = TOL_SYM) -> np.ndarray:
    """First 2k rows of a symplectic matrix; satisfies S J_n S^T = J_k."""
    s = np.asarray(s, dtype=float)
    n = _mode_count(s)
    if not 1 <= k <= n:
        raise DimensionError(f"output mode count k={k} out of range [1, {n}]")
    sk = s[: 2 * k, :].copy()
    res = truncation_residual(sk, n)
    if res > tol:
        raise NotSymplecticError(f"truncated rows violate the form relation (residual {res:.3e})")
    return sk


def matrix_to_rowmajor(m: np.ndarray) -> list[float]:
    """Flatten a matrix to a row-major list of floats (text-serializable)."""
    return [float(x) for x in np.asarray(m, dtype=float).reshape(-1)]


def matrix_from_rowmajor(values: Sequence[float], rows: int, cols: int) -> np.ndarray:
    """Rebuild a matrix from its row-major flat representation."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size != rows * cols:
        raise DimensionError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {arr.size}")
    return arr.reshape(rows, cols)

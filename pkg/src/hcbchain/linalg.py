"""Dense complex-matrix kernel.

Qubit ordering: sites are numbered 1..L and site 1 is the most significant
bit of the computational-basis index, i.e. ``|s_1 s_2 ... s_L>`` maps to
index ``sum_k s_k 2**(L-k)``.  This matches ``np.kron(op_1, op_2, ...)``.

Eigendecompositions default to LAPACK (``numpy.linalg.eigh``).  A
self-contained Householder tridiagonalisation followed by implicit-shift QL
is available through ``method="ql"`` and is used as an independent check.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable

import numpy as np

from .errors import InvalidInputError, NotPSDError

HERMITIAN_RTOL = 1e-12
PSD_CLAMP = 1e-10

PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, rtol: float = HERMITIAN_RTOL) -> bool:
    a = _as_square(m)
    scale = max(float(np.max(np.abs(a))), 1.0e-300)
    return float(np.max(np.abs(a - a.conj().T))) <= rtol * scale


def _check_hermitian(a: np.ndarray) -> None:
    if not is_hermitian(a):
        raise InvalidInputError("matrix is not Hermitian within tolerance")


def num_sites(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension that must be a power of two."""
    L = int(dim).bit_length() - 1
    if L < 0 or 1 << L != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    return L


# --------------------------------------------------------------------------
# eigensolvers


def _householder_tridiagonal(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce Hermitian ``a`` to real symmetric tridiagonal form.

    Returns ``(d, e, q)`` with ``q^H a q`` equal to the tridiagonal matrix with
    diagonal ``d`` and sub-diagonal ``e[:-1]`` (``e[-1] == 0``).
    """
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128)
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm
        v /= np.linalg.norm(v)
        # H = I - 2 v v^H applied on both sides of the trailing block
        blk = a[k + 1:, k:]
        blk -= 2.0 * np.outer(v, v.conj() @ blk)
        blk = a[k:, k + 1:]
        blk -= 2.0 * np.outer(blk @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())

    d = np.real(np.diag(a)).copy()
    off = np.diag(a, -1).copy()
    # unitary diagonal rescaling makes the sub-diagonal real and non-negative
    phases = np.ones(n, dtype=np.complex128)
    for k in range(n - 1):
        b = off[k]
        ph = b / abs(b) if b != 0 else 1.0
        phases[k + 1] = phases[k] * ph
    q = q * phases[np.newaxis, :]
    e = np.zeros(n)
    e[:-1] = np.abs(off)
    return d, e, q


def _tql(d: np.ndarray, e: np.ndarray, z: np.ndarray, max_iter: int = 60) -> None:
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``z`` accumulates the rotations (columns become eigenvectors).
    """
    n = d.size
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise np.linalg.LinAlgError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = z[:, i].copy()
                z[:, i] = c * zi - s * z[:, i + 1]
                z[:, i + 1] = s * zi + c * z[:, i + 1]
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def hermitian_eig(m, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues in decreasing order and the
    matching orthonormal eigenvectors as columns.
    """
    a = _as_square(m)
    _check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    if method == "lapack":
        vals, vecs = np.linalg.eigh(a)
    elif method == "ql":
        d, e, q = _householder_tridiagonal(a)
        z = np.eye(a.shape[0])
        _tql(d, e, z)
        vals, vecs = d, q @ z
        order = np.argsort(vals, kind="stable")
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise InvalidInputError(f"unknown eigensolver {method!r}")
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def hermitian_eigvals(m, method: str = "lapack") -> np.ndarray:
    if method == "lapack":
        a = _as_square(m)
        _check_hermitian(a)
        return np.linalg.eigvalsh(0.5 * (a + a.conj().T))[::-1].copy()
    return hermitian_eig(m, method)[0]


def determinant(m) -> complex:
    """Determinant by LU factorisation with partial pivoting (LAPACK getrf)."""
    a = _as_square(m)
    if a.shape[0] == 1:
        return a[0, 0].item()
    return np.linalg.det(a).item()


# --------------------------------------------------------------------------
# tensor-product structure


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def site_operator(L: int, ops: dict[int, str | np.ndarray]) -> np.ndarray:
    """Dense ``2**L`` operator acting with ``ops[site]`` on 1-based sites."""
    for site in ops:
        if not 1 <= site <= L:
            raise InvalidInputError(f"site {site} outside 1..{L}")
    factors = []
    for site in range(1, L + 1):
        op = ops.get(site, "i")
        factors.append(PAULI[op] if isinstance(op, str) else np.asarray(op))
    return kron_all(factors)


def _check_sites(sites, L: int) -> list[int]:
    out = sorted(set(int(s) for s in sites))
    if any(not 1 <= s <= L for s in out):
        raise InvalidInputError(f"sites {sorted(sites)} outside 1..{L}")
    return out


def partial_trace(rho, total_sites: int, keep) -> np.ndarray:
    """Reduced matrix on ``keep`` (1-based), kept sites in increasing order."""
    a = _as_square(rho)
    L = total_sites
    if a.shape[0] != 1 << L:
        raise InvalidInputError(f"matrix of dim {a.shape[0]} does not describe {L} sites")
    kept = _check_sites(keep, L)
    traced = [s for s in range(1, L + 1) if s not in kept]
    axes = [s - 1 for s in kept] + [s - 1 for s in traced]
    t = a.reshape((2,) * (2 * L))
    t = t.transpose(axes + [L + ax for ax in axes])
    dk, dt = 1 << len(kept), 1 << len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_transpose(rho, total_sites: int, transpose_set) -> np.ndarray:
    """Transpose the factors on the given 1-based sites."""
    a = _as_square(rho)
    L = total_sites
    if a.shape[0] != 1 << L:
        raise InvalidInputError(f"matrix of dim {a.shape[0]} does not describe {L} sites")
    sites = _check_sites(transpose_set, L)
    perm = list(range(2 * L))
    for s in sites:
        perm[s - 1], perm[L + s - 1] = L + s - 1, s - 1
    t = a.reshape((2,) * (2 * L)).transpose(perm)
    return t.reshape(a.shape).copy()


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    vals, vecs = hermitian_eig(m)
    if vals[-1] < -PSD_CLAMP:
        raise NotPSDError(f"minimum eigenvalue {vals[-1]:.3e} below -{PSD_CLAMP:g}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    out = (vecs * root) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def check_density_matrix(rho, trace_tol: float = 1e-10) -> np.ndarray:
    """Validate a Hermitian, unit-trace, PSD matrix; returns it as an array."""
    a = _as_square(rho)
    _check_hermitian(a)
    tr = np.trace(a)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidInputError(f"trace {tr.real:.12g} differs from 1")
    lo = hermitian_eigvals(a)[-1]
    if lo < -PSD_CLAMP:
        raise NotPSDError(f"minimum eigenvalue {lo:.3e} below -{PSD_CLAMP:g}")
    return a

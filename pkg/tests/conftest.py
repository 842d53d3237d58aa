import numpy as np
import pytest

from hcbchain import oracle
from hcbchain.model import ModelParams

# reference point used throughout: w=1, mu=0.2, T=0.5
REF_W, REF_MU, REF_T = 1.0, 0.2, 0.5


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_density(rng, n, rank=None):
    k = n if rank is None else rank
    a = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def ghz(L):
    psi = np.zeros(1 << L, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())


def bell():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return np.outer(psi, psi).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def thermal_rho():
    """Cached Gibbs states at the reference point, keyed by L."""
    cache = {}

    def get(L, mu=REF_MU, T=REF_T):
        key = (L, mu, T)
        if key not in cache:
            cache[key] = oracle.density_matrix(ModelParams(REF_W, mu, L), T)
        return cache[key]

    return get


# acceptance bookkeeping: one line per criterion in the terminal summary
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key:>4} {'PASS' if ok else 'FAIL'}  {detail}")

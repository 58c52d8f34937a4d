import numpy as np
import pytest

from frobsim.qvp import QvpInstance


def random_psd_pair(rng, n, kmax=2, pmax=3):
    """PSD pair with rank <= kmax; B has at most pmax distinct spectral rows."""
    k = int(rng.integers(1, kmax + 1))
    U = rng.normal(size=(n, k))
    A = U @ np.diag(rng.uniform(0.5, 3.0, size=k)) @ U.T
    p = int(rng.integers(1, min(pmax, n) + 1))
    reps = rng.normal(size=(p, k))
    labels = np.concatenate([np.arange(p), rng.integers(0, p, size=n - p)])
    rng.shuffle(labels)
    V = reps[labels]
    B = V @ np.diag(rng.uniform(0.5, 3.0, size=k)) @ V.T
    return (A + A.T) / 2, (B + B.T) / 2


def random_qvp(rng, n, k, p, degenerate=False):
    if degenerate:
        W = rng.integers(-2, 3, size=(n, k)).astype(float)
    else:
        W = rng.normal(size=(n, k))
    G = rng.normal(size=(p, p))
    K = G @ G.T
    lam = rng.uniform(0.5, 2.0, size=k)
    cuts = np.sort(rng.choice(np.arange(1, n), size=p - 1, replace=False))
    cards = tuple(int(x) for x in np.diff(np.concatenate([[0], cuts, [n]])))
    return QvpInstance(W, K, lam, cards)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

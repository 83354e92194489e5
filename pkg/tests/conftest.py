import numpy as np
import pytest

from bogofock.selfdual import PAIR_BASIS


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dense_components(mat):
    """Split a dense window matrix on K (even rows/cols) into mode components."""
    rows, cols = mat.shape
    left = np.kron(np.eye(rows // 2), PAIR_BASIS)
    right = np.kron(np.eye(cols // 2), PAIR_BASIS)
    inner = left.conj().T @ mat @ right
    return inner[0::2, 0::2], inner[0::2, 1::2], inner[1::2, 0::2], inner[1::2, 1::2]


def dense_associate_l12(v, n=16):
    """Lambda12 from dense pseudo-inverses of an exact window of V.

    The window V restricted to span(e_0..e_{n-1}) -> span(e_0..e_{n+t-1})
    contains every vector of ker V*, so the formula can be evaluated with
    plain numpy pseudo-inverses.
    """
    mat = v.op.dense(n)
    v11, v12, v21, v22 = dense_components(mat)
    pinv = lambda m: np.linalg.pinv(m, rcond=1e-10)  # noqa: E731
    u, s, vh = np.linalg.svd(v22.conj().T)
    rank = int(np.sum(s > 1e-10))
    ker = vh[rank:].conj().T
    proj = ker @ ker.conj().T
    # Lambda12 maps K2 -> K1: columns live on the domain of V22 (n/2), rows on the codomain side
    return v12 @ pinv(v22) - pinv(v11).conj().T @ v21.conj().T @ proj


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULT_LINES

    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in RESULT_LINES:
            terminalreporter.write_line(line)

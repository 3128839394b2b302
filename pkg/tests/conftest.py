import numpy as np
import pytest

from matrange.matcore import MatrixTuple, compress, direct_sum_all


def rand_herm(n, rng, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2.0
    return scale * h


def rand_complex(n, rng, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def rand_unitary(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_isometry(n, m, rng):
    return rand_unitary(n, rng)[:, :m]


def rand_tuple(d, n, rng, hermitian=False, scale=1.0):
    if hermitian:
        return MatrixTuple.from_mats([rand_herm(n, rng, scale) for _ in range(d)])
    return MatrixTuple.from_mats([rand_complex(n, rng, scale) for _ in range(d)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def crucial_family(rng, sizes, spread=2.5, tries=40):
    """Pairwise inequivalent irreducible Hermitian pairs, each confirmed
    outside the matrix range of the direct sum of the others.

    Summand centers are pushed apart so the membership oracle confirms
    cruciality on the first draw almost always; the confirmation itself is
    always run.
    """
    from matrange.convexity import membership

    k = len(sizes)
    for _ in range(tries):
        cands = []
        for i, n in enumerate(sizes):
            angle = 2 * np.pi * i / k + rng.uniform(-0.3, 0.3)
            center = spread * np.array([np.cos(angle), np.sin(angle)])
            mats = [rand_herm(n, rng, 0.8) + center[j] * np.eye(n)
                    for j in range(2)]
            cands.append(MatrixTuple.from_mats(mats))
        ok = True
        for i in range(k):
            others = direct_sum_all([c for j, c in enumerate(cands) if j != i])
            if not membership(cands[i], others).is_out:
                ok = False
                break
        if ok:
            return cands
    raise RuntimeError("could not sample a crucial family")


def blockdiag_instance(rng, case):
    """Random block-diagonal tuple for the fully-compressed comparison.

    Cycles through: plain families, a duplicated summand, an absorbable
    compression point, and a two-summand family.
    """
    kind = case % 4
    if kind == 0:
        sizes = [int(rng.integers(1, 4)) for _ in range(3)]
        parts = [MatrixTuple.from_mats([rand_herm(n, rng) for _ in range(2)])
                 for n in sizes]
    elif kind == 1:
        base_sizes = [int(rng.integers(1, 4)) for _ in range(2)]
        base = [MatrixTuple.from_mats([rand_herm(n, rng) for _ in range(2)])
                for n in base_sizes]
        parts = base + [base[int(rng.integers(0, 2))]]
    elif kind == 2:
        base = [MatrixTuple.from_mats([rand_herm(2, rng) for _ in range(2)])
                for _ in range(2)]
        big = direct_sum_all(base)
        m = int(rng.integers(1, 3))
        v = rng.standard_normal((big.n, m)) + 1j * rng.standard_normal((big.n, m))
        v = np.linalg.qr(v)[0]
        parts = base + [compress(big, v)]
    else:
        sizes = [int(rng.integers(1, 4)) for _ in range(2)]
        parts = [MatrixTuple.from_mats([rand_herm(n, rng) for _ in range(2)])
                 for n in sizes]
    order = rng.permutation(len(parts))
    return direct_sum_all([parts[i] for i in order])

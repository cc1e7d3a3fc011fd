import pytest
from hypothesis import given, strategies as st

from betajacobi.jack import IdentityArgument, jack_at_identity, jack_at_scaled_identity
from betajacobi.partitions import enumerate_partitions

betas = st.sampled_from([0.5, 1.0, 1.75, 2.0, 4.0])


@pytest.mark.parametrize("beta", [0.5, 1, 1.75, 2, 4])
@pytest.mark.parametrize("m", range(1, 7))
def test_level_sums_are_powers(beta, m):
    for k in range(11):
        total = sum(jack_at_identity(p, beta, m) for p in enumerate_partitions(k, m))
        assert total == pytest.approx(m**k, rel=1e-12)


def test_examples():
    for beta in (0.5, 2, 4):
        for m in (1, 3, 6):
            assert jack_at_identity([1], beta, m) == pytest.approx(m)
    assert jack_at_identity([2], 2, 2) == pytest.approx(3)
    assert jack_at_identity([1, 1], 2, 2) == pytest.approx(1)
    assert jack_at_identity([1, 1, 1], 1.3, 2) == 0


def test_schur_values_at_identity():
    # beta = 2 gives Schur polynomials: C_kappa = k! s_kappa / H, with
    # s_kappa(1^m) = prod (m + content) / H and H the hook product
    import math

    def contents_and_hooks(kappa):
        conj = [sum(1 for p in kappa if p > j) for j in range(kappa[0])]
        cells = [(i, j) for i, row in enumerate(kappa) for j in range(row)]
        hooks = math.prod((kappa[i] - j - 1) + (conj[j] - i - 1) + 1 for i, j in cells)
        return [j - i for i, j in cells], hooks

    for kappa in ([3, 1], [2, 2, 1], [4], [2, 1]):
        k = sum(kappa)
        contents, H = contents_and_hooks(kappa)
        for m in (2, 3, 5):
            schur = math.prod(m + c for c in contents) / H
            assert jack_at_identity(kappa, 2, m) == pytest.approx(math.factorial(k) * schur / H, rel=1e-12, abs=1e-300)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), betas, st.integers(0, 5), st.floats(-3, 3))
def test_homogeneity(raw, beta, m, x):
    kappa = sorted(raw, reverse=True)
    k = sum(kappa)
    v1 = jack_at_identity(kappa, beta, m)
    assert v1 >= 0
    assert jack_at_scaled_identity(kappa, beta, m, 1.0) == v1
    assert jack_at_scaled_identity(kappa, beta, m, 0.0) == 0
    assert jack_at_scaled_identity(kappa, beta, m, x) == pytest.approx(x**k * v1, rel=1e-12, abs=1e-300)


def test_degree_one_negative_argument():
    assert jack_at_scaled_identity([1], 1.5, 4, -0.3) == pytest.approx(-1.2)
    assert jack_at_scaled_identity([], 1.5, 4, -0.3) == 1


def test_empty_argument():
    assert jack_at_identity([1], 2.0, 0) == 0
    with pytest.raises(ValueError):
        IdentityArgument(1.0, -1)

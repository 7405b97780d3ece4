"""Quantum fingerprint protocol: state encoding, exact measurement, costs."""
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from hmplab import (
    HmpInstance,
    cost_report,
    cyclic_family,
    encode_fingerprint,
    matching_basis,
    measure_in_matching_basis,
    outcome_distribution,
    projective_plane_family,
    relation_holds,
    run_quantum_smp,
)

from _oracles import oracle_outcome_probabilities, oracle_parity


def test_encode_signs_and_amplitudes():
    st = encode_fingerprint("0110")
    assert st.signs == (1, -1, -1, 1)
    assert st.qubits == 2
    amps = st.amplitudes()
    assert amps == pytest.approx([0.5, -0.5, -0.5, 0.5])
    assert sum(a * a for a in amps) == pytest.approx(1.0)


def test_encode_rejects_bad_strings():
    with pytest.raises(ValueError):
        encode_fingerprint("")
    with pytest.raises(ValueError):
        encode_fingerprint("01x")


def test_matching_basis_is_orthonormal_and_complete():
    m = cyclic_family(6).matchings[1]
    basis = matching_basis(m, 6)
    vectors = np.array([vec for _, _, vec in basis])
    assert vectors.shape == (6, 6)
    assert np.allclose(vectors @ vectors.T, np.eye(6))  # Gram = identity
    assert np.allclose(vectors.T @ vectors, np.eye(6))  # resolves the identity


@pytest.mark.parametrize("c", ["0110", "1111", "0000", "1010"])
@pytest.mark.parametrize("mi", [0, 1])
def test_distribution_matches_inner_product_oracle(c, mi):
    fam = cyclic_family(4)
    st = encode_fingerprint(c)
    mine = {(o.edge, o.sign): o.probability for o in outcome_distribution(st, fam.matchings[mi])}
    oracle = oracle_outcome_probabilities(c, fam.matchings[mi])
    for key, p in oracle.items():
        assert float(mine.get(key, Fraction(0))) == pytest.approx(p, abs=1e-12)


def test_distribution_structure():
    """Each edge contributes exactly probability 2/n on its consistent sign;
    the distribution is supported on |m| outcomes and sums to 1."""
    fam = cyclic_family(8)
    st = encode_fingerprint("01101001")
    for m in fam.matchings:
        dist = outcome_distribution(st, m)
        assert len(dist) == len(m)
        assert sum(o.probability for o in dist) == 1
        for o in dist:
            assert o.probability == Fraction(2, 8)
            i1, i2 = o.edge
            assert o.sign == st.signs[i1 - 1] * st.signs[i2 - 1]


def test_measurement_sign_is_always_consistent():
    fam = cyclic_family(6)
    rng = random.Random(3)
    st = encode_fingerprint("010011")
    for _ in range(200):
        m = fam.matchings[rng.randrange(3)]
        out = measure_in_matching_basis(st, m, rng)
        assert out.sign == st.signs[out.edge[0] - 1] * st.signs[out.edge[1] - 1]
        assert out.probability == Fraction(2, 6)


def test_measurement_edge_frequencies_are_uniform():
    """Chi-square goodness of fit against the exact uniform edge marginal."""
    fam = cyclic_family(8)
    st = encode_fingerprint("01101001")
    rng = random.Random(12345)
    counts = {e: 0 for e in fam.matchings[0]}
    trials = 4000
    for _ in range(trials):
        out = measure_in_matching_basis(st, fam.matchings[0], rng)
        counts[out.edge] += 1
    _, pvalue = stats.chisquare(list(counts.values()))
    assert pvalue > 1e-3


def test_measurement_rejects_non_perfect_matching():
    st = encode_fingerprint("0110")
    with pytest.raises(ValueError):
        measure_in_matching_basis(st, ((1, 2),), 0)
    with pytest.raises(ValueError):
        measure_in_matching_basis(st, ((1, 2), (2, 4)), 0)


@pytest.mark.parametrize(
    "n,t,expected",
    [(2, 1, (1, 0, 1)), (4, 2, (2, 1, 3)), (6, 3, (3, 2, 5)), (16, 8, (4, 3, 7))],
)
def test_cost_table(n, t, expected):
    rep = cost_report(n, t)
    assert (rep.qubits, rep.classical_bits, rep.total) == expected
    assert rep.total == rep.qubits + rep.classical_bits


def test_cost_report_validation():
    with pytest.raises(ValueError):
        cost_report(1, 1)
    with pytest.raises(ValueError):
        cost_report(4, 0)


def test_run_quantum_smp_always_satisfies_relation():
    rng = random.Random(9)
    for n in (2, 4, 6):
        fam = cyclic_family(n)
        t = len(fam.matchings)
        r = max(1, (t - 1).bit_length())
        for j in range(1, t + 1):
            for ci in range(2 ** n):
                c = format(ci, f"0{n}b")
                inst = HmpInstance(
                    n=n, k=2, r=r, alphas=(format(j - 1, f"0{r}b"),), c=c
                )
                answer, costs = run_quantum_smp(inst, fam, rng)
                assert relation_holds(inst, fam, answer)
                assert costs == cost_report(n, t)


def test_run_quantum_smp_multiparty_view():
    """k=3: the recipient decodes the same index and the answer still holds."""
    fam = projective_plane_family(2)
    rng = random.Random(4)
    c = "01101001100101"
    inst = HmpInstance(n=14, k=3, r=1, alphas=("0", "1"), c=c)  # j = 2
    for _ in range(50):
        answer, costs = run_quantum_smp(inst, fam, rng)
        assert relation_holds(inst, fam, answer)
        assert answer.e == oracle_parity(c, *sorted((answer.i1, answer.i2)))
    assert costs.qubits == 4  # ceil(log2 14)


def test_run_quantum_smp_rejects_index_beyond_family():
    fam = cyclic_family(6)  # t = 3, r = 2
    inst = HmpInstance(n=6, k=2, r=2, alphas=("11",), c="010101")  # j = 4
    with pytest.raises(ValueError):
        run_quantum_smp(inst, fam, 0)


def test_run_quantum_smp_rejects_mismatched_n():
    fam = cyclic_family(4)
    inst = HmpInstance(n=6, k=2, r=1, alphas=("0",), c="010101")
    with pytest.raises(ValueError):
        run_quantum_smp(inst, fam, 0)

"""Quantum fingerprint protocol for the hidden-matching game.

Player 1 encodes c as the log(n)-qubit state with amplitudes (-1)^(c_i)/sqrt(n);
player k sends the decoded matching index; the referee measures in the basis
{(|i1> + |i2>)/sqrt2, (|i1> - |i2>)/sqrt2 : (i1,i2) in the matching}. Because
every amplitude is +-1/sqrt(n), each edge contributes exactly one outcome of
probability 2/n (the sign matching the parity of c on the edge) and one of
probability 0, so sampling is exact: pick an edge uniformly and read the sign
off the state. All probabilities are represented as exact Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Tuple

from .model import Answer, HmpInstance
from .seeding import as_rng


@dataclass(frozen=True)
class FingerprintState:
    """Sign-vector representation of the fingerprint state: amplitude i is
    signs[i-1] / sqrt(n). Exact by construction; unit norm is automatic."""

    n: int
    signs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(self.signs) != self.n:
            raise ValueError(f"expected {self.n} signs, got {len(self.signs)}")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +-1")

    def amplitudes(self) -> List[float]:
        scale = self.n ** -0.5
        return [s * scale for s in self.signs]

    @property
    def qubits(self) -> int:
        return (self.n - 1).bit_length()


class MeasurementOutcome(NamedTuple):
    """One basis outcome: the edge, the +-1 branch sign, and its exact
    probability."""

    edge: Tuple[int, int]
    sign: int
    probability: Fraction


class CostReport(NamedTuple):
    """Communication cost: fingerprint qubits from player 1, index bits from
    player k, and their sum. Players 2..k-1 send nothing."""

    qubits: int
    classical_bits: int
    total: int


def cost_report(n: int, t: int) -> CostReport:
    """ceil(log2 n) qubits plus ceil(log2 t) classical bits."""
    if n < 2 or t < 1:
        raise ValueError(f"need n >= 2 and t >= 1, got n={n}, t={t}")
    qubits = (n - 1).bit_length()
    classical = (t - 1).bit_length()
    return CostReport(qubits=qubits, classical_bits=classical, total=qubits + classical)


@lru_cache(maxsize=1 << 17)
def encode_fingerprint(c: str) -> FingerprintState:
    """Fingerprint of a bit string: sign (-1)^(c_i) at position i. Cached,
    which is safe because the state is immutable."""
    if len(c) == 0:
        raise ValueError("cannot fingerprint an empty string")
    if not set(c) <= {"0", "1"}:
        raise ValueError(f"c must be a string of 0/1 characters, got {c!r}")
    return FingerprintState(n=len(c), signs=tuple(1 - 2 * int(b) for b in c))


def _check_matching(n: int, matching) -> None:
    covered: set = set()
    for u, v in matching:
        if not (1 <= u < v <= n):
            raise ValueError(f"edge ({u},{v}) is not normalized within 1..{n}")
        if u in covered or v in covered:
            raise ValueError("not a matching: vertex reused")
        covered.update((u, v))
    if len(covered) != n:
        raise ValueError(f"matching covers {len(covered)} of {n} vertices; must be perfect")


def matching_basis(matching, n: int) -> List[Tuple[Tuple[int, int], int, List[float]]]:
    """The orthonormal measurement basis as explicit vectors
    (edge, sign, (e_i1 + sign * e_i2)/sqrt2); mainly for inspection and tests."""
    _check_matching(n, matching)
    basis = []
    inv = 2 ** -0.5
    for (i1, i2) in matching:
        for sign in (1, -1):
            vec = [0.0] * n
            vec[i1 - 1] = inv
            vec[i2 - 1] = sign * inv
            basis.append(((i1, i2), sign, vec))
    return basis


def outcome_distribution(state: FingerprintState, matching) -> List[MeasurementOutcome]:
    """All outcomes with nonzero probability, exact.

    The squared inner product for (edge, sign) is
    (signs[i1] + sign * signs[i2])^2 / (2n), which is 2/n for the sign equal
    to signs[i1]*signs[i2] and 0 otherwise; the nonzero outcomes sum to 1.
    """
    _check_matching(state.n, matching)
    out = []
    for (i1, i2) in matching:
        for sign in (1, -1):
            amp = state.signs[i1 - 1] + sign * state.signs[i2 - 1]
            p = Fraction(amp * amp, 2 * state.n)
            if p > 0:
                out.append(MeasurementOutcome(edge=(i1, i2), sign=sign, probability=p))
    return out


def measure_in_matching_basis(state: FingerprintState, matching, rng) -> MeasurementOutcome:
    """Sample one outcome exactly.

    For +-1 sign vectors every edge carries probability exactly 2/n on its
    consistent sign, so sampling reduces to a uniform edge choice; the
    zero-probability branches can never occur.
    """
    rng = as_rng(rng)
    _check_matching(state.n, matching)
    i1, i2 = matching[rng.randrange(len(matching))]
    sign = state.signs[i1 - 1] * state.signs[i2 - 1]
    return MeasurementOutcome(edge=(i1, i2), sign=sign, probability=Fraction(2, state.n))


@lru_cache(maxsize=None)
def _cached_cost(n: int, t: int) -> CostReport:
    return cost_report(n, t)


def run_quantum_smp(instance: HmpInstance, family, rng) -> Tuple[Answer, CostReport]:
    """One protocol execution: fingerprint c, decode the matching index,
    measure, and map the branch sign to the parity answer (+1 -> 0, -1 -> 1).

    The decoded index must address the family; beyond it the relation is
    undefined and a ValueError is raised. Measurement skips re-validating the
    matching: the family constructor already guarantees perfect matchings.
    """
    rng = as_rng(rng)
    if family.n != instance.n:
        raise ValueError(f"instance n={instance.n} does not match family n={family.n}")
    j = instance.matching_index
    t = len(family.matchings)
    if j > t:
        raise ValueError(
            f"decoded index {j} exceeds the family size {t}; the relation is undefined"
        )
    signs = encode_fingerprint(instance.c).signs
    matching = family.matchings[j - 1]
    i1, i2 = matching[rng.randrange(len(matching))]
    sign = signs[i1 - 1] * signs[i2 - 1]
    answer = Answer(i1=i1, i2=i2, e=0 if sign == 1 else 1)
    return answer, _cached_cost(instance.n, t)

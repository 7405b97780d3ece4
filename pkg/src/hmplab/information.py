"""Entropy and mutual-information toolkit, identity self-checks, and the
pair-extraction accounting that bounds what a protocol's messages reveal
about c.

Distributions are explicit finite joints over tuple outcomes, indexed by
coordinate. All information quantities are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .classical import OneWayProtocol, build_message_bundle
from .graphs import normalize_edge
from .model import PlayerView, encode_matching_index
from .seeding import as_rng


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Finite joint distribution over equal-length outcome tuples."""

    probs: Dict[tuple, float]
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        total = 0.0
        for outcome, p in self.probs.items():
            if len(outcome) != self.arity:
                raise ValueError(f"outcome {outcome!r} does not have arity {self.arity}")
            p = float(p)
            if p < -1e-12:
                raise ValueError(f"negative probability {p} on {outcome!r}")
            total += p
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def from_weights(cls, weights: Mapping[tuple, object]) -> "JointDistribution":
        arity = len(next(iter(weights)))
        total = float(sum(float(w) for w in weights.values()))
        if total <= 0:
            raise ValueError("total weight must be positive")
        return cls(
            probs={k: float(w) / total for k, w in weights.items() if float(w) > 0},
            arity=arity,
        )

    @classmethod
    def from_samples(cls, samples: Sequence[tuple]) -> "JointDistribution":
        """Plug-in (empirical frequency) estimate."""
        if not samples:
            raise ValueError("need at least one sample")
        counts: Dict[tuple, int] = {}
        for s in samples:
            counts[tuple(s)] = counts.get(tuple(s), 0) + 1
        return cls.from_weights(counts)

    def marginal(self, coords: Sequence[int]) -> "JointDistribution":
        coords = tuple(coords)
        out: Dict[tuple, float] = {}
        for outcome, p in self.probs.items():
            key = tuple(outcome[i] for i in coords)
            out[key] = out.get(key, 0.0) + p
        return JointDistribution(probs=out, arity=len(coords))

    def slice_given(self, coords: Sequence[int], value: tuple) -> "JointDistribution":
        """Conditional joint given the listed coordinates equal value; keeps
        the full arity so coordinate indices stay stable."""
        coords = tuple(coords)
        kept = {
            outcome: p
            for outcome, p in self.probs.items()
            if tuple(outcome[i] for i in coords) == tuple(value)
        }
        if not kept:
            raise ValueError(f"conditioning event {value!r} has probability 0")
        return JointDistribution.from_weights(kept)


def entropy_bits(dist: JointDistribution, coords: Optional[Sequence[int]] = None) -> float:
    """Shannon entropy of the listed coordinates (all by default), with the
    0*log(0) = 0 convention."""
    d = dist if coords is None else dist.marginal(coords)
    h = 0.0
    for p in d.probs.values():
        if p > 0:
            h -= p * math.log2(p)
    return h


def conditional_entropy_bits(
    dist: JointDistribution, target: Sequence[int], given: Sequence[int]
) -> float:
    """H(target | given) = H(target, given) - H(given)."""
    both = tuple(target) + tuple(given)
    return entropy_bits(dist, both) - entropy_bits(dist, given)


def mutual_information_bits(
    dist: JointDistribution,
    coords_a: Sequence[int],
    coords_b: Sequence[int],
    given: Optional[Sequence[int]] = None,
) -> float:
    """I(A;B) or, with `given`, I(A;B | given)."""
    if given is None:
        return entropy_bits(dist, coords_a) - conditional_entropy_bits(
            dist, coords_a, coords_b
        )
    given = tuple(given)
    return conditional_entropy_bits(dist, coords_a, given) - conditional_entropy_bits(
        dist, coords_a, tuple(coords_b) + given
    )


# ---------------------------------------------------------------------------
# identity self-checks


@dataclass(frozen=True)
class FactsReport:
    trials: int
    decomposition_max_gap: float
    conditional_mi_max_gap: float
    superadditivity_min_margin: float
    chain_rule_max_gap: float

    @property
    def all_hold(self) -> bool:
        tol = 1e-9
        return (
            self.decomposition_max_gap <= tol
            and self.conditional_mi_max_gap <= tol
            and self.superadditivity_min_margin >= -tol
            and self.chain_rule_max_gap <= tol
        )


def _random_joint(rng, sizes: Sequence[int]) -> JointDistribution:
    weights = {
        outcome: rng.random() + 1e-6
        for outcome in product(*[range(s) for s in sizes])
    }
    return JointDistribution.from_weights(weights)


def check_information_facts(trials: int = 40, rng=0) -> FactsReport:
    """Numerically verify the identities the accounting leans on, over random
    joint distributions:

    1. H(X|Y) equals the p(y)-weighted average of H(X|Y=y).
    2. I(X;Y|Z) equals the p(z)-weighted average of I(X;Y|Z=z).
    3. For mutually independent Y_1..Y_m, I(Y_1..Y_m; X) is at least
       sum_j I(Y_j; X) (checked on joints built with independent Y_j).
    4. Chain rule I(A,B;C) = I(A;C) + I(B;C|A).
    """
    rng = as_rng(rng)
    gap1 = 0.0
    gap2 = 0.0
    margin3 = math.inf
    gap4 = 0.0
    for _ in range(trials):
        # (1) decomposition of conditional entropy
        d = _random_joint(rng, [rng.randint(2, 3), rng.randint(2, 4)])
        direct = conditional_entropy_bits(d, (0,), (1,))
        py = d.marginal((1,))
        summed = sum(
            p * entropy_bits(d.slice_given((1,), y), (0,))
            for y, p in py.probs.items()
        )
        gap1 = max(gap1, abs(direct - summed))

        # (2) decomposition of conditional mutual information
        d3 = _random_joint(rng, [2, rng.randint(2, 3), rng.randint(2, 3)])
        direct = mutual_information_bits(d3, (0,), (1,), given=(2,))
        pz = d3.marginal((2,))
        summed = sum(
            p * mutual_information_bits(d3.slice_given((2,), z), (0,), (1,))
            for z, p in pz.probs.items()
        )
        gap2 = max(gap2, abs(direct - summed))

        # (3) superadditivity with independent sources
        m = rng.randint(2, 3)
        noise = rng.random() * 0.5
        weights: Dict[tuple, float] = {}
        for ys in product((0, 1), repeat=m):
            p_ys = 1.0
            for _y in ys:
                p_ys *= 0.5
            x_clean = sum(ys) % 2
            for x in (0, 1):
                p = p_ys * ((1 - noise) if x == x_clean else noise)
                if p > 0:
                    weights[ys + (x,)] = weights.get(ys + (x,), 0.0) + p
        dj = JointDistribution.from_weights(weights)
        joint_info = mutual_information_bits(dj, tuple(range(m)), (m,))
        parts = sum(mutual_information_bits(dj, (j,), (m,)) for j in range(m))
        margin3 = min(margin3, joint_info - parts)

        # (4) chain rule
        d3 = _random_joint(rng, [2, 2, rng.randint(2, 3)])
        lhs = mutual_information_bits(d3, (0, 1), (2,))
        rhs = mutual_information_bits(d3, (0,), (2,)) + mutual_information_bits(
            d3, (1,), (2,), given=(0,)
        )
        gap4 = max(gap4, abs(lhs - rhs))
    return FactsReport(
        trials=trials,
        decomposition_max_gap=gap1,
        conditional_mi_max_gap=gap2,
        superadditivity_min_margin=margin3,
        chain_rule_max_gap=gap4,
    )


@dataclass(frozen=True)
class MarkovBoundReport:
    alphas: Tuple[float, ...]
    observed: Tuple[float, ...]
    bounds: Tuple[float, ...]
    holds: bool


def markov_bound_check(values, alphas, beta: float) -> MarkovBoundReport:
    """Reverse-Markov check for a bounded sample: with every value in
    [0, beta], the fraction of values >= alpha must be at least
    (mean - alpha) / (beta - alpha). Vectorized over alphas."""
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise ValueError("need at least one value")
    if vals.min() < -1e-12 or vals.max() > beta + 1e-12:
        raise ValueError(f"values must lie in [0, {beta}]")
    alpha_arr = np.atleast_1d(np.asarray(alphas, dtype=float))
    if np.any(alpha_arr >= beta):
        raise ValueError("every alpha must be < beta")
    observed = (vals[None, :] >= alpha_arr[:, None]).mean(axis=1)
    bounds = (vals.mean() - alpha_arr) / (beta - alpha_arr)
    holds = bool(np.all(observed >= bounds - 1e-12))
    return MarkovBoundReport(
        alphas=tuple(alpha_arr.tolist()),
        observed=tuple(observed.tolist()),
        bounds=tuple(bounds.tolist()),
        holds=holds,
    )


# ---------------------------------------------------------------------------
# pair extraction


@dataclass(frozen=True)
class ExtractionRecord:
    """Vertex-disjoint-ish pair list pried out of one message bundle.

    pairs/parities are the decoder's answers in query order; correct flags
    compare each answered parity against c. Matchings are queried lowest
    index first, skipping any matching that already has an edge with both
    endpoints inside the collected support, and a queried matching is never
    queried again.
    """

    c: str
    pairs: Tuple[Tuple[int, int], ...]
    parities: Tuple[int, ...]
    correct: Tuple[bool, ...]
    queried: Tuple[int, ...]
    support: FrozenSet[int]
    bundle_bits: int

    @property
    def s(self) -> int:
        return len(self.pairs)


def _recipient_view(k: int, alphas: Tuple[str, ...]) -> PlayerView:
    visible = tuple((pos, a) for pos, a in enumerate(alphas, start=1))
    return PlayerView(player=k, k=k, visible_alphas=visible, c=None)


def extract_pairs(p: OneWayProtocol, family, c: str, rng=0) -> ExtractionRecord:
    """Run the decoder against a single message bundle repeatedly to collect
    answered (pair, parity) claims about c.

    Each round picks the lowest-index not-yet-queried matching none of whose
    edges is already buried in the support, reconstructs the senders'
    messages for it from the bundle, and records the decoder's answer. The
    answer must name an edge of the queried matching; anything else raises
    ValueError. Stops when no queryable matching remains.
    """
    if len(c) != family.n or any(b not in "01" for b in c):
        raise ValueError(f"c must be {family.n} bits")
    rng = as_rng(rng)
    bundle = build_message_bundle(p, c)
    support: set = set()
    consumed: set = set()
    pairs: List[Tuple[int, int]] = []
    parities: List[int] = []
    correct: List[bool] = []
    queried: List[int] = []
    t = len(family.matchings)
    while True:
        j = None
        for cand in range(1, t + 1):
            if cand in consumed:
                continue
            if all(
                not (u in support and v in support) for u, v in family.matchings[cand - 1]
            ):
                j = cand
                break
        if j is None:
            break
        alphas = encode_matching_index(j, p.r, p.k - 1)
        messages = bundle.messages_for(alphas)
        seed = rng.choice(p.decoder_seeds)
        answer = p.decoder(messages, _recipient_view(p.k, alphas), seed)
        edge = normalize_edge(answer.i1, answer.i2)
        if edge not in family.edge_sets[j - 1]:
            raise ValueError(
                f"decoder answered {edge} which is not in matching {j}"
            )
        pairs.append(edge)
        parities.append(answer.e)
        correct.append((int(c[edge[0] - 1]) ^ int(c[edge[1] - 1])) == answer.e)
        queried.append(j)
        support.update(edge)
        consumed.add(j)
    return ExtractionRecord(
        c=c,
        pairs=tuple(pairs),
        parities=tuple(parities),
        correct=tuple(correct),
        queried=tuple(queried),
        support=frozenset(support),
        bundle_bits=bundle.total_bits,
    )


# ---------------------------------------------------------------------------
# accounting


@dataclass(frozen=True)
class InformationReport:
    mode: str
    count: int
    s_min: int
    s_max: int
    mean_s: float
    s_counts: Dict[int, int]
    bundle_bits: int
    entropy_w: float
    mutual_information_bits: float
    bundle_ceiling_ok: bool
    success_rates: Dict[int, float]
    span_floor: Optional[float]
    meets_span_floor: Optional[bool]
    xi: Optional[float]


def span_floor(t: int, d: int) -> float:
    """Declared floor on the expected number of extracted pairs for a family
    of t matchings whose union has girth above 2d (d even)."""
    if d < 2 or d % 2:
        raise ValueError(f"girth exponent d must be even and >= 2, got {d}")
    half = d // 2
    return t ** (1 - 1 / (2 * half + 1)) / (360 * half)


def information_accounting(
    p: OneWayProtocol,
    family,
    mode: str = "exact",
    rng=0,
    samples: int = 2000,
    epsilon: Optional[float] = None,
) -> InformationReport:
    """How much the bundled messages reveal about a uniform c, measured via
    the extraction transcript.

    exact mode enumerates every c (refused above n=12) and requires a fully
    deterministic protocol, so the transcript is a function of c and
    I(transcript; C) is exact. sampled mode draws c uniformly and uses the
    plug-in estimator. The bundle ceiling I <= |W| must hold up to float
    noise in exact mode. xi = epsilon^2 / 64 is reported for context when an
    error level is supplied; it feeds no logic here.
    """
    rng = as_rng(rng)
    n = family.n
    if mode not in ("exact", "sampled"):
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    if mode == "exact":
        if n > 12:
            raise ValueError(
                f"exact accounting enumerates 2**n strings; n={n} exceeds the n<=12 cap"
            )
        if not p.deterministic:
            raise ValueError("exact accounting requires a deterministic protocol")
        cs = [format(ci, f"0{n}b") for ci in range(2 ** n)]
    else:
        cs = ["".join(rng.choice("01") for _ in range(n)) for _ in range(samples)]

    weights: Dict[tuple, float] = {}
    entropy_weights: Dict[tuple, float] = {}
    s_values: List[int] = []
    hits: Dict[int, List[int]] = {}
    bundle_bits = None
    for c in cs:
        record = extract_pairs(p, family, c, rng)
        bundle_bits = record.bundle_bits if bundle_bits is None else bundle_bits
        if record.bundle_bits != bundle_bits:
            raise AssertionError("bundle width must not depend on c")
        outcome = ((record.pairs, record.parities), c)
        weights[outcome] = weights.get(outcome, 0.0) + 1.0
        w_outcome = (build_message_bundle(p, c).messages,)
        entropy_weights[w_outcome] = entropy_weights.get(w_outcome, 0.0) + 1.0
        s_values.append(record.s)
        for j, ok in zip(record.queried, record.correct):
            hits.setdefault(j, []).append(1 if ok else 0)

    joint = JointDistribution.from_weights(weights)
    info = mutual_information_bits(joint, (0,), (1,))
    entropy_w = entropy_bits(JointDistribution.from_weights(entropy_weights))
    success = {j: sum(v) / len(v) for j, v in sorted(hits.items())}
    floor: Optional[float] = None
    meets: Optional[bool] = None
    if family.d is not None and family.d >= 2 and family.d % 2 == 0:
        floor = span_floor(len(family.matchings), family.d)
        meets = (sum(s_values) / len(s_values)) >= floor
    s_counts: Dict[int, int] = {}
    for s in s_values:
        s_counts[s] = s_counts.get(s, 0) + 1
    return InformationReport(
        mode=mode,
        count=len(cs),
        s_min=min(s_values),
        s_max=max(s_values),
        mean_s=sum(s_values) / len(s_values),
        s_counts=dict(sorted(s_counts.items())),
        bundle_bits=bundle_bits or 0,
        entropy_w=entropy_w,
        mutual_information_bits=info,
        bundle_ceiling_ok=info <= (bundle_bits or 0) + 1e-9,
        success_rates=success,
        span_floor=floor,
        meets_span_floor=meets,
        xi=(epsilon ** 2) / 64 if epsilon is not None else None,
    )

"""Classical one-way protocols for the hidden-matching game, exact evaluation,
and exhaustive minimum-cost search.

Model: players 1..k-1 each send one message to player k, who answers. Senders
may share randomness drawn uniformly from an explicit finite seed set; the
recipient may hold private randomness over its own seed set. All error
probabilities are exact Fractions computed by full enumeration.

The searched decoder is the posterior-majority rule: for each (message tuple,
matching) the answer maximizing the number of consistent c-strings, with an
exact tie broken by a fair private coin. Under that rule every per-input error
is exactly 0, 1/2 or 1, so worst-case error <= epsilon < 1/2 is equivalent to
zero error, which the search exploits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .model import (
    Answer,
    HmpInstance,
    PlayerView,
    decode_matching_index,
    encode_matching_index,
    relation_holds,
    special_inputs,
    view_of,
)
from .seeding import as_rng

SenderFn = Callable[[PlayerView, int], str]
DecoderFn = Callable[[Tuple[str, ...], PlayerView, int], Answer]

InstanceKey = Tuple[Tuple[str, ...], str]


class SearchSpaceError(Exception):
    """Raised when a requested exhaustive search exceeds its declared limits;
    carries a size estimate in the message."""


@dataclass(frozen=True, eq=False)
class OneWayProtocol:
    """One-way protocol: k-1 sender functions and a decoder.

    senders[i] maps (view, shared_seed) to a bit string of exactly
    message_bits[i] bits; the decoder maps (messages, recipient view,
    private_seed) to an Answer. shared_seeds is the senders' shared
    randomness (length 1 = deterministic senders); decoder_seeds is the
    recipient's private randomness. cost is the total message width.
    """

    k: int
    r: int
    senders: Tuple[SenderFn, ...]
    decoder: DecoderFn
    message_bits: Tuple[int, ...]
    shared_seeds: Tuple[int, ...] = (0,)
    decoder_seeds: Tuple[int, ...] = (0,)
    label: str = "custom"
    sender_tables: Optional[Tuple[Dict[tuple, str], ...]] = None
    decoder_table: Optional[Dict[tuple, Tuple[int, int, Optional[int]]]] = None

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if len(self.senders) != self.k - 1:
            raise ValueError(f"expected {self.k - 1} senders, got {len(self.senders)}")
        if len(self.message_bits) != self.k - 1:
            raise ValueError("message_bits must declare one width per sender")
        if any(w < 0 for w in self.message_bits):
            raise ValueError("message widths must be >= 0")
        if len(self.shared_seeds) < 1 or len(self.decoder_seeds) < 1:
            raise ValueError("seed sets must be nonempty and explicit")

    @property
    def cost(self) -> int:
        return sum(self.message_bits)

    @property
    def deterministic_senders(self) -> bool:
        return len(self.shared_seeds) == 1

    @property
    def deterministic(self) -> bool:
        return self.deterministic_senders and len(self.decoder_seeds) == 1

    def messages_on(self, instance: HmpInstance, shared_seed: int) -> Tuple[str, ...]:
        """All sender messages for one instance under one shared seed."""
        out = []
        for i, sender in enumerate(self.senders):
            msg = sender(view_of(instance, i + 1), shared_seed)
            if len(msg) != self.message_bits[i]:
                raise ValueError(
                    f"sender {i + 1} emitted {len(msg)} bits, declared {self.message_bits[i]}"
                )
            out.append(msg)
        return tuple(out)


@dataclass(frozen=True)
class ErrorReport:
    """Exact per-input error probabilities plus their worst case and
    distributional average."""

    worst_case_error: Fraction
    average_error: Fraction
    per_input_errors: Dict[InstanceKey, Fraction]
    distribution: str
    instances: int


def instance_space(k: int, r: int, family) -> List[Tuple[Tuple[str, ...], str]]:
    """All valid (alphas, c) pairs: index strings decoding inside the family
    crossed with every c."""
    t = len(family.matchings)
    n = family.n
    alpha_tuples = []
    for bits in product("01", repeat=r * (k - 1)):
        s = "".join(bits)
        alphas = tuple(s[i * r : (i + 1) * r] for i in range(k - 1))
        if decode_matching_index(alphas) <= t:
            alpha_tuples.append(alphas)
    space = []
    for alphas in alpha_tuples:
        for ci in range(2 ** n):
            space.append((alphas, format(ci, f"0{n}b")))
    return space


def evaluate_protocol(
    p: OneWayProtocol,
    family,
    distribution: Union[str, Mapping[InstanceKey, object]] = "uniform",
) -> ErrorReport:
    """Exact error report by enumerating every valid instance and every
    (shared seed, decoder seed) pair. Cost is exponential in n and r(k-1);
    intended for desk-scale parameters."""
    space = instance_space(p.k, p.r, family)
    if not space:
        raise ValueError("no valid instances: family too small for the index range")
    denom = len(p.shared_seeds) * len(p.decoder_seeds)
    per_input: Dict[InstanceKey, Fraction] = {}
    for alphas, c in space:
        instance = HmpInstance(n=family.n, k=p.k, r=p.r, alphas=alphas, c=c)
        recipient = view_of(instance, p.k)
        wrong = 0
        for s in p.shared_seeds:
            messages = p.messages_on(instance, s)
            for ds in p.decoder_seeds:
                answer = p.decoder(messages, recipient, ds)
                if not relation_holds(instance, family, answer):
                    wrong += 1
        per_input[(alphas, c)] = Fraction(wrong, denom)

    worst = max(per_input.values())
    if distribution == "uniform":
        average = sum(per_input.values(), Fraction(0)) / len(per_input)
        tag = "uniform"
    else:
        weights = {key: Fraction(w) for key, w in distribution.items()}
        total = sum(weights.values(), Fraction(0))
        if total <= 0:
            raise ValueError("explicit distribution must have positive total weight")
        average = sum(
            (weights.get(key, Fraction(0)) * err for key, err in per_input.items()),
            Fraction(0),
        ) / total
        tag = "explicit"
    return ErrorReport(
        worst_case_error=worst,
        average_error=average,
        per_input_errors=per_input,
        distribution=tag,
        instances=len(per_input),
    )


# ---------------------------------------------------------------------------
# table-backed protocols


def _parity(c: str, u: int, v: int) -> int:
    return int(c[u - 1]) ^ int(c[v - 1])


def sender_view(k: int, r: int, player: int, alphas: Optional[Tuple[str, ...]], c: str) -> PlayerView:
    """View of sender `player` given the index strings (None means the
    two-player case where the single sender sees no index strings)."""
    if k == 2:
        return PlayerView(player=1, k=2, visible_alphas=(), c=c)
    assert alphas is not None
    visible = tuple((pos, a) for pos, a in enumerate(alphas, start=1) if pos != player)
    return PlayerView(player=player, k=k, visible_alphas=visible, c=c)


def table_protocol(
    family,
    k: int,
    r: int,
    sender_tables: Sequence[Dict[tuple, str]],
    message_bits: Sequence[int],
    randomized_ties: bool,
    label: str,
) -> OneWayProtocol:
    """Protocol from explicit sender tables with the posterior-majority
    decoder.

    The decoder table is precomputed: inputs are bucketed by (message tuple,
    matching index) and each bucket's best (edge, parity) is chosen, scanning
    edges in order so ties in count go to the lowest edge. An exact count tie
    (no parity reaches a strict majority on any edge) is answered with e=None,
    resolved at query time by the private seed bit when randomized_ties is
    set, else pinned to 0.
    """
    t = len(family.matchings)
    n = family.n
    tables = tuple(dict(tbl) for tbl in sender_tables)
    widths = tuple(int(w) for w in message_bits)

    buckets: Dict[tuple, List[str]] = {}
    for j in range(1, t + 1):
        alphas = encode_matching_index(j, r, k - 1)
        for ci in range(2 ** n):
            c = format(ci, f"0{n}b")
            msgs = tuple(
                tables[i][sender_view(k, r, i + 1, alphas, c).key()]
                for i in range(k - 1)
            )
            buckets.setdefault((msgs, j), []).append(c)

    decoder_table: Dict[tuple, Tuple[int, int, Optional[int]]] = {}
    any_tie = False
    for (msgs, j), cs in buckets.items():
        matching = family.matchings[j - 1]
        size = len(cs)
        best_count = -1
        best: Tuple[int, int, int] = (0, 0, 0)
        for (u, v) in matching:
            ones = sum(_parity(c, u, v) for c in cs)
            for e, count in ((0, size - ones), (1, ones)):
                if count > best_count:
                    best_count = count
                    best = (u, v, e)
        if 2 * best_count == size:
            # no strict majority anywhere: every edge splits evenly
            u, v, _ = best
            decoder_table[(msgs, j)] = (u, v, None)
            any_tie = True
        else:
            decoder_table[(msgs, j)] = best

    def make_sender(i: int) -> SenderFn:
        table = tables[i]

        def sender(view: PlayerView, _seed: int) -> str:
            return table[view.key()]

        return sender

    def decoder(messages: Tuple[str, ...], view: PlayerView, seed: int) -> Answer:
        j = decode_matching_index(tuple(a for _, a in view.visible_alphas))
        entry = decoder_table.get((tuple(messages), j))
        if entry is None:
            raise ValueError(f"unreachable message tuple {messages!r} for matching {j}")
        u, v, e = entry
        if e is None:
            e = (seed & 1) if randomized_ties else 0
        return Answer(i1=u, i2=v, e=e)

    decoder_seeds = (0, 1) if (randomized_ties and any_tie) else (0,)
    return OneWayProtocol(
        k=k,
        r=r,
        senders=tuple(make_sender(i) for i in range(k - 1)),
        decoder=decoder,
        message_bits=widths,
        shared_seeds=(0,),
        decoder_seeds=decoder_seeds,
        label=label,
        sender_tables=tables,
        decoder_table=decoder_table,
    )


def _all_sender_views(family, k: int, r: int, player: int) -> List[PlayerView]:
    """Every syntactically possible view of sender `player`: all visible
    index-string combinations (not just those decoding inside the family,
    since message bundles query senders beyond the valid range) crossed with
    every c."""
    n = family.n
    positions = [pos for pos in range(1, k) if pos != player]
    strings = [format(v, f"0{r}b") for v in range(2 ** r)]
    views: List[PlayerView] = []
    for choice in product(strings, repeat=len(positions)):
        visible = tuple(zip(positions, choice))
        for ci in range(2 ** n):
            c = format(ci, f"0{n}b")
            views.append(PlayerView(player=player, k=k, visible_alphas=visible, c=c))
    return views


def constant_protocol(family, k: int = 2, r: Optional[int] = None, randomized_ties: bool = True) -> OneWayProtocol:
    """Zero-bit protocol: senders say nothing, the decoder answers from the
    matching alone. With randomized_ties the answer parity is a fair coin and
    every per-input error is exactly 1/2; without it the protocol is fully
    deterministic."""
    r = default_index_bits(family) if r is None else r
    tables = []
    for i in range(1, k):
        tables.append({v.key(): "" for v in _all_sender_views(family, k, r, i)})
    label = "guess" if randomized_ties else "constant"
    return table_protocol(family, k, r, tables, (0,) * (k - 1), randomized_ties, label)


def verbatim_protocol(family, k: int = 2, r: Optional[int] = None) -> OneWayProtocol:
    """Sender 1 transmits c itself; zero error at cost n.

    Functional rather than table-backed so it works at any n: the decoder
    answers the lowest-index edge of the selected matching with the parity
    read straight off the message, which is what the posterior-majority rule
    does when the consistent set is a single string.
    """
    r = default_index_bits(family) if r is None else r
    matchings = family.matchings

    def first_sender(view: PlayerView, _seed: int) -> str:
        return view.c

    def silent_sender(view: PlayerView, _seed: int) -> str:
        return ""

    def decoder(messages: Tuple[str, ...], view: PlayerView, _seed: int) -> Answer:
        j = decode_matching_index(tuple(a for _, a in view.visible_alphas))
        if j > len(matchings):
            raise ValueError(f"matching index {j} is outside the family")
        u, v = matchings[j - 1][0]
        c = messages[0]
        return Answer(i1=u, i2=v, e=int(c[u - 1]) ^ int(c[v - 1]))

    senders = (first_sender,) + (silent_sender,) * (k - 2)
    widths = (family.n,) + (0,) * (k - 2)
    return OneWayProtocol(
        k=k,
        r=r,
        senders=senders,
        decoder=decoder,
        message_bits=widths,
        label="verbatim",
    )


def parity_protocol(
    family, pins: Sequence[Tuple[int, int]], k: int = 2, r: Optional[int] = None
) -> OneWayProtocol:
    """Sender 1 transmits the parities of c on the pinned vertex pairs.

    Zero error whenever every matching contains an edge whose parity is
    determined by the pins (the majority decoder finds such an edge on its
    own, since the consistent set is constant there).
    """
    r = default_index_bits(family) if r is None else r
    if not pins:
        raise ValueError("need at least one pinned pair")
    for u, v in pins:
        if not (1 <= u <= family.n and 1 <= v <= family.n and u != v):
            raise ValueError(f"bad pinned pair ({u},{v})")
    tables = [
        {
            v.key(): "".join(str(_parity(v.c, a, b)) for a, b in pins)
            for v in _all_sender_views(family, k, r, 1)
        }
    ]
    widths = [len(pins)]
    for i in range(2, k):
        tables.append({v.key(): "" for v in _all_sender_views(family, k, r, i)})
        widths.append(0)
    return table_protocol(family, k, r, tables, widths, True, "pinned-parity")


def random_table_protocol(
    family, k: int, r: int, widths: Sequence[int], rng
) -> OneWayProtocol:
    """Random deterministic protocol: every sender view gets an independent
    uniform fixed-width message; the decoder is the majority rule with ties
    pinned to 0, so the whole protocol is deterministic."""
    rng = as_rng(rng)
    widths = tuple(int(w) for w in widths)
    if len(widths) != k - 1:
        raise ValueError("need one width per sender")
    tables = []
    for i in range(1, k):
        views = sorted(_all_sender_views(family, k, r, i), key=lambda v: v.key())
        table = {}
        for v in views:
            table[v.key()] = "".join(rng.choice("01") for _ in range(widths[i - 1]))
        tables.append(table)
    return table_protocol(family, k, r, tables, widths, False, "random-table")


def default_index_bits(family) -> int:
    """Smallest r so a single index string addresses the whole family."""
    t = len(family.matchings)
    return max(1, (t - 1).bit_length())


# ---------------------------------------------------------------------------
# exhaustive minimum-cost search (k = 2)


@dataclass(frozen=True)
class BruteforceResult:
    cost: int
    protocol: OneWayProtocol
    epsilon: float
    nodes_explored: int


def _edge_mask(n: int, u: int, v: int) -> int:
    return (1 << (n - u)) | (1 << (n - v))


def _min_constraint_rank(family) -> int:
    """Minimum GF(2) rank over all one-edge-per-matching choices; bounds the
    size of a zero-error message class by 2**(n - rank)."""
    n = family.n
    best = None
    for combo in product(*[range(len(m)) for m in family.matchings]):
        basis: Dict[int, int] = {}  # leading bit -> reduced vector
        for mi, ei in enumerate(combo):
            u, v = family.matchings[mi][ei]
            vec = _edge_mask(n, u, v)
            while vec:
                lead = vec.bit_length() - 1
                if lead not in basis:
                    basis[lead] = vec
                    break
                vec ^= basis[lead]
        rank = len(basis)
        if best is None or rank < best:
            best = rank
    return best if best is not None else 0


def _zero_error_partition(
    family, num_classes: int, budget: int
) -> Tuple[Optional[List[int]], int]:
    """Complete search for a partition of {0,1}^n into at most num_classes
    classes such that every class has, for every matching, an edge of
    constant parity.

    Backtracking assigns strings in lexicographic order; a class may only be
    opened as the next unused label (canonical restricted-growth form, i.e.
    sender mappings are enumerated up to message relabeling). Pruning is
    sound: per-class surviving (edge, parity) candidate sets shrink
    monotonically, and a capacity bound uses the maximum possible class size.
    Returns (labels per string, nodes explored); labels is None if no
    partition exists.
    """
    n = family.n
    t = len(family.matchings)
    total = 2 ** n
    max_size = 2 ** (n - _min_constraint_rank(family))

    # parity[ci][mi] = tuple of edge parities of string ci under matching mi
    parity: List[List[Tuple[int, ...]]] = []
    for ci in range(total):
        c = format(ci, f"0{n}b")
        parity.append(
            [tuple(_parity(c, u, v) for (u, v) in m) for m in family.matchings]
        )

    members: List[List[int]] = []
    cands: List[List[Dict[int, int]]] = []  # per class, per matching: edge -> pinned parity
    nodes = 0

    def dfs(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchSpaceError(
                f"partition search exceeded {budget} nodes at n={n}, "
                f"{num_classes} classes (space is Bell({total})-sized)"
            )
        if i == total:
            return True
        remaining = total - i
        open_count = len(members)
        capacity = sum(max_size - len(ms) for ms in members)
        capacity += (num_classes - open_count) * max_size
        if capacity < remaining:
            return False
        row = parity[i]
        for ci in range(min(open_count + 1, num_classes)):
            if ci == open_count:
                cands.append(
                    [
                        {e: row[mi][e] for e in range(len(family.matchings[mi]))}
                        for mi in range(t)
                    ]
                )
                members.append([i])
                if dfs(i + 1):
                    return True
                members.pop()
                cands.pop()
            else:
                saved = []
                ok = True
                for mi in range(t):
                    cur = cands[ci][mi]
                    drop = [e for e, b in cur.items() if row[mi][e] != b]
                    saved.append([(e, cur[e]) for e in drop])
                    for e in drop:
                        del cur[e]
                    if not cur:
                        ok = False
                        break
                if ok:
                    members[ci].append(i)
                    if dfs(i + 1):
                        return True
                    members[ci].pop()
                for mi, dropped in enumerate(saved):
                    for e, b in dropped:
                        cands[ci][mi][e] = b
        return False

    if dfs(0):
        labels = [0] * total
        for label, ms in enumerate(members):
            for ci in ms:
                labels[ci] = label
        return labels, nodes
    return None, nodes


def protocol_from_labels(family, labels: Sequence[int], width: int, r: int) -> OneWayProtocol:
    """k=2 protocol whose sender transmits the class label, fixed width."""
    n = family.n
    table = {}
    for ci, label in enumerate(labels):
        c = format(ci, f"0{n}b")
        view = sender_view(2, r, 1, None, c)
        table[view.key()] = format(label, f"0{width}b") if width else ""
    return table_protocol(family, 2, r, [table], [width], True, "searched")


def bruteforce_min_cost(
    family,
    epsilon: float,
    k: int = 2,
    node_budget: int = 5_000_000,
) -> BruteforceResult:
    """Minimal sender bits so some one-way protocol with the majority decoder
    has worst-case error <= epsilon, together with a witness protocol.

    Only k=2 is supported. n is capped at 6: beyond that even the pruned
    search is out of desk range and a SearchSpaceError reports the size.
    epsilon >= 1/2 is met by the zero-bit guessing protocol; below 1/2 only
    zero-error protocols qualify (per-input errors under the majority decoder
    are 0, 1/2 or 1), so the search looks for zero-error partitions of
    increasing width.
    """
    if k != 2:
        raise ValueError(f"brute force supports k=2 only, got k={k}")
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    n = family.n
    if n > 6:
        raise SearchSpaceError(
            f"exhaustive search is limited to n <= 6; n={n} has on the order of "
            f"2**{2 ** n} sender mappings per width"
        )
    r = default_index_bits(family)

    if epsilon >= 0.5:
        protocol = constant_protocol(family, k=2, r=r, randomized_ties=True)
        return BruteforceResult(cost=0, protocol=protocol, epsilon=epsilon, nodes_explored=0)

    nodes_total = 0
    for width in range(n + 1):
        labels, nodes = _zero_error_partition(family, 2 ** width, node_budget)
        nodes_total += nodes
        if labels is not None:
            protocol = protocol_from_labels(family, labels, width, r)
            report = evaluate_protocol(protocol, family)
            if report.worst_case_error != 0:
                raise AssertionError("searched partition failed verification")
            return BruteforceResult(
                cost=width,
                protocol=protocol,
                epsilon=epsilon,
                nodes_explored=nodes_total,
            )
    raise AssertionError("verbatim width must always admit a zero-error partition")


# ---------------------------------------------------------------------------
# seed-set transforms


def derandomize_senders(p: OneWayProtocol) -> OneWayProtocol:
    """Concatenate each sender's messages over the whole shared seed set and
    let the decoder pick the slice with a private seed.

    The per-input error of the result equals the shared-seed average of the
    original exactly; cost grows by the factor |S|.
    """
    seeds = p.shared_seeds
    if len(seeds) == 1:
        return p
    widths = tuple(w * len(seeds) for w in p.message_bits)

    def make_sender(i: int) -> SenderFn:
        orig = p.senders[i]
        expected = p.message_bits[i]

        def sender(view: PlayerView, _seed: int) -> str:
            parts = []
            for s in seeds:
                msg = orig(view, s)
                if len(msg) != expected:
                    raise ValueError(
                        "derandomization needs fixed-width sender messages"
                    )
                parts.append(msg)
            return "".join(parts)

        return sender

    old_dseeds = p.decoder_seeds
    old_decoder = p.decoder
    combined = tuple(range(len(seeds) * len(old_dseeds)))

    def decoder(messages: Tuple[str, ...], view: PlayerView, seed: int) -> Answer:
        s_idx, d_idx = divmod(seed, len(old_dseeds))
        sliced = tuple(
            msg[s_idx * w : (s_idx + 1) * w] for msg, w in zip(messages, p.message_bits)
        )
        return old_decoder(sliced, view, old_dseeds[d_idx])

    return OneWayProtocol(
        k=p.k,
        r=p.r,
        senders=tuple(make_sender(i) for i in range(len(p.senders))),
        decoder=decoder,
        message_bits=widths,
        shared_seeds=(0,),
        decoder_seeds=combined,
        label=p.label + "+derandomized",
    )


@dataclass(frozen=True)
class SeedReductionResult:
    """Protocol with a subsampled shared seed set plus exact before/after
    error reports; acceptance against target_delta is the caller's call."""

    protocol: OneWayProtocol
    report: ErrorReport
    baseline_report: ErrorReport
    target_delta: float
    max_per_input_increase: Fraction


def reduce_seed_set(
    p: OneWayProtocol,
    family,
    target_delta: float,
    sample_count: int,
    rng,
) -> SeedReductionResult:
    """Subsample the shared seed set (without replacement) and re-evaluate
    exactly. No existence guarantee: the result may or may not stay within
    target_delta of the original."""
    rng = as_rng(rng)
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    baseline = evaluate_protocol(p, family)
    if sample_count >= len(p.shared_seeds):
        return SeedReductionResult(
            protocol=p,
            report=baseline,
            baseline_report=baseline,
            target_delta=target_delta,
            max_per_input_increase=Fraction(0),
        )
    chosen = tuple(sorted(rng.sample(list(p.shared_seeds), sample_count)))
    reduced = OneWayProtocol(
        k=p.k,
        r=p.r,
        senders=p.senders,
        decoder=p.decoder,
        message_bits=p.message_bits,
        shared_seeds=chosen,
        decoder_seeds=p.decoder_seeds,
        label=p.label + "+reduced",
    )
    report = evaluate_protocol(reduced, family)
    worst_increase = max(
        (report.per_input_errors[key] - baseline.per_input_errors[key] for key in report.per_input_errors),
        default=Fraction(0),
    )
    return SeedReductionResult(
        protocol=reduced,
        report=report,
        baseline_report=baseline,
        target_delta=target_delta,
        max_per_input_increase=worst_increase,
    )


# ---------------------------------------------------------------------------
# message bundles


@dataclass(frozen=True, eq=False)
class MessageBundle:
    """Every message the senders emit on a fixed c across the XOR-completed
    index tuples; |W| is total_bits.

    For any target index tuple, each sender's actual message can be read back
    out: the sender cannot see its own coordinate, and the XOR-completed
    tuples project onto all of ({0,1}^r)^(k-2) in the remaining coordinates.
    """

    k: int
    r: int
    c: str
    tuples: Tuple[Tuple[str, ...], ...]
    messages: Tuple[Tuple[str, ...], ...]

    @property
    def total_bits(self) -> int:
        return sum(len(m) for row in self.messages for m in row)

    def messages_for(self, alphas: Tuple[str, ...]) -> Tuple[str, ...]:
        if len(alphas) != self.k - 1 or any(len(a) != self.r for a in alphas):
            raise ValueError("alphas must be k-1 strings of r bits")
        if self.k == 2:
            return self.messages[0]
        out = []
        for i in range(self.k - 1):
            key = alphas[:i] + alphas[i + 1 :]
            idx = self._projection_index(i).get(key)
            if idx is None:
                raise AssertionError("XOR-completed tuples must cover every projection")
            out.append(self.messages[idx][i])
        return tuple(out)

    def _projection_index(self, sender: int) -> Dict[Tuple[str, ...], int]:
        cache = self.__dict__.setdefault("_proj_cache", {})
        if sender not in cache:
            cache[sender] = {
                tup[:sender] + tup[sender + 1 :]: idx
                for idx, tup in enumerate(self.tuples)
            }
        return cache[sender]


def build_message_bundle(p: OneWayProtocol, c: str) -> MessageBundle:
    """Bundle of sender messages on c over the XOR-completed tuples; for k=2
    it degenerates to the single message, which depends on c alone."""
    if not p.deterministic_senders:
        raise ValueError("message bundles require deterministic senders")
    seed = p.shared_seeds[0]
    if p.k == 2:
        view = sender_view(2, p.r, 1, None, c)
        msg = p.senders[0](view, seed)
        if len(msg) != p.message_bits[0]:
            raise ValueError("sender message width does not match its declaration")
        return MessageBundle(k=2, r=p.r, c=c, tuples=((),), messages=((msg,),))
    tuples = tuple(special_inputs(p.r, p.k))
    rows = []
    for alphas in tuples:
        row = []
        for i in range(p.k - 1):
            view = sender_view(p.k, p.r, i + 1, alphas, c)
            msg = p.senders[i](view, seed)
            if len(msg) != p.message_bits[i]:
                raise ValueError("sender message width does not match its declaration")
            row.append(msg)
        rows.append(tuple(row))
    return MessageBundle(k=p.k, r=p.r, c=c, tuples=tuples, messages=tuple(rows))


# ---------------------------------------------------------------------------
# serialization of table-backed protocols


def _view_key_str(key: tuple) -> str:
    player, visible, c = key
    parts = [f"p{player}"] + [f"a{pos}={val}" for pos, val in visible] + [f"c={c}"]
    return ";".join(parts)


def _view_key_parse(s: str) -> tuple:
    parts = s.split(";")
    player = int(parts[0][1:])
    visible = []
    c = None
    for part in parts[1:]:
        name, _, val = part.partition("=")
        if name == "c":
            c = val
        else:
            visible.append((int(name[1:]), val))
    return (player, tuple(visible), c)


def protocol_to_doc(p: OneWayProtocol) -> dict:
    """JSON-able description of a table-backed protocol."""
    if p.sender_tables is None or p.decoder_table is None:
        raise ValueError("only table-backed protocols are serializable")
    senders = [
        {_view_key_str(key): msg for key, msg in sorted(tbl.items())}
        for tbl in p.sender_tables
    ]
    decoder = {}
    for (msgs, j), (u, v, e) in sorted(p.decoder_table.items()):
        decoder["|".join(msgs) + "@" + str(j)] = [u, v, e]
    return {
        "k": p.k,
        "r": p.r,
        "message_bits": list(p.message_bits),
        "decoder_seeds": list(p.decoder_seeds),
        "label": p.label,
        "senders": senders,
        "decoder": decoder,
    }


def protocol_from_doc(doc: dict) -> OneWayProtocol:
    """Rebuild a table-backed protocol from its serialized form."""
    k = doc["k"]
    r = doc["r"]
    tables = tuple(
        {_view_key_parse(key): msg for key, msg in tbl.items()} for tbl in doc["senders"]
    )
    decoder_table: Dict[tuple, Tuple[int, int, Optional[int]]] = {}
    for key, (u, v, e) in doc["decoder"].items():
        msgs_part, _, j_part = key.rpartition("@")
        msgs = tuple(msgs_part.split("|")) if msgs_part else ("",)
        if len(msgs) != k - 1:
            raise ValueError(f"decoder key {key!r} does not match k={k}")
        decoder_table[(msgs, int(j_part))] = (u, v, e)
    decoder_seeds = tuple(doc["decoder_seeds"])
    randomized_ties = len(decoder_seeds) > 1

    def make_sender(i: int) -> SenderFn:
        table = tables[i]

        def sender(view: PlayerView, _seed: int) -> str:
            return table[view.key()]

        return sender

    def decoder(messages: Tuple[str, ...], view: PlayerView, seed: int) -> Answer:
        j = decode_matching_index(tuple(a for _, a in view.visible_alphas))
        entry = decoder_table.get((tuple(messages), j))
        if entry is None:
            raise ValueError(f"unreachable message tuple {messages!r} for matching {j}")
        u, v, e = entry
        if e is None:
            e = (seed & 1) if randomized_ties else 0
        return Answer(i1=u, i2=v, e=e)

    return OneWayProtocol(
        k=k,
        r=r,
        senders=tuple(make_sender(i) for i in range(k - 1)),
        decoder=decoder,
        message_bits=tuple(doc["message_bits"]),
        shared_seeds=(0,),
        decoder_seeds=decoder_seeds,
        label=doc.get("label", "custom"),
        sender_tables=tables,
        decoder_table=decoder_table,
    )

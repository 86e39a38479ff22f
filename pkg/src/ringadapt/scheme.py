"""Linkable threshold ring adaptor signatures.

A signer who controls t consecutive keys of an n-key ring produces a
pre-signature bound to a statement pair W = (g^w, h^w).  Only the holder
of the witness w can complete it into a ledger-valid signature, and the
(pre-signature, signature) pair reveals w to anyone.  Each signature
carries per-key link tags h^sk, so two signatures spending any common
key are publicly linkable without identifying the key.

Objects exchanged on the wire:

* pre-signature  (z~, C, TAG): one masked scalar, n challenge scalars,
  t link tags;
* signature      (z,  C, TAG): same shape, z = z~ + w.

The algebra (all indices mod n, all scalar arithmetic mod p):

* d = H(PK) over the ordered key list ("rogue-key" digest);
* y_i = prod_{k=i..i+t-1} pk_k^d, the aggregated key of window i;
* l   = prod_k tag_k^d, the aggregated tag;
* signing: R = g^r * W1 * prod_{i!=j} y_i^{c_i},
           T = h^r * W2 * prod_{i!=j} l^{c_i},
           c = H(PK, R, T, m),  c_j = c - sum_{i!=j} c_i,
           z~ = r - c_j * d * sum(window secrets);
* verifying recomputes R, T from (z~, C) or (z, C) and checks
  sum(C) == H(PK, R, T, m).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Optional

from .groups import Element, GroupContext

DOMAIN_RING_DIGEST = b"LTRAS/d"
DOMAIN_CHALLENGE = b"LTRAS/c"


class KeyMismatchError(ValueError):
    """A supplied secret key does not match its ring position."""


@dataclass(frozen=True)
class KeyPair:
    sk: int
    pk: Element


@dataclass(frozen=True)
class StatementPair:
    """The hard-relation statement (W1, W2) = (g^w, h^w)."""

    w1: Element
    w2: Element


class Ring:
    """Ordered list of distinct public keys plus its cached digest d."""

    __slots__ = ("keys", "encodings", "d")

    def __init__(self, ctx: GroupContext, keys):
        keys = tuple(keys)
        if not keys:
            raise ValueError("ring needs at least one key")
        for pk in keys:
            if not ctx.is_element(pk):
                raise ValueError("ring key is not a group element")
        encodings = tuple(ctx.encode_element(pk) for pk in keys)
        if len(set(encodings)) != len(keys):
            # Duplicate keys would make distinct windows aggregate to the
            # same value, silently weakening linkability.
            raise ValueError("duplicate ring keys")
        self.keys = keys
        self.encodings = encodings
        self.d = ctx.hash_to_scalar(DOMAIN_RING_DIGEST, encodings)

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.encodings == other.encodings

    def __hash__(self) -> int:
        return hash(self.encodings)


class SignerWindow:
    """A run of t consecutive ring positions whose secrets the signer holds.

    The signer's own window may not wrap around the ring unless
    ``allow_wraparound`` is set; verification aggregates wrap regardless.
    """

    __slots__ = ("ring", "start", "secrets", "width")

    def __init__(self, ctx: GroupContext, ring: Ring, start: int, secrets,
                 allow_wraparound: bool = False):
        secrets = tuple(secrets)
        n = len(ring)
        t = len(secrets)
        if not 1 <= t <= n:
            raise ValueError(f"window width {t} out of range for ring of {n}")
        if not 0 <= start < n:
            raise ValueError(f"window start {start} out of range")
        if not allow_wraparound and start + t > n:
            raise ValueError("window wraps around the ring")
        for i, sk in enumerate(secrets):
            if not 1 <= sk < ctx.order:
                raise ValueError("secret key out of range")
            if ctx.exp(ctx.generator_g, sk) != ring.keys[(start + i) % n]:
                raise KeyMismatchError(
                    f"secret at window offset {i} does not open ring key "
                    f"{(start + i) % n}"
                )
        self.ring = ring
        self.start = start
        self.secrets = secrets
        self.width = t


@dataclass(frozen=True)
class AggregateSet:
    """Sliding-window aggregation output: per-index window products y_i
    and the tag product l."""

    window_products: tuple
    tag_product: Element


@dataclass(frozen=True)
class PreSignature:
    z_tilde: int
    challenges: tuple  # c_0 .. c_{n-1}
    tags: tuple        # window order, one per signing key

    @cached_property
    def tag_set(self) -> frozenset:
        return frozenset(self.tags)


@dataclass(frozen=True)
class Signature:
    z: int
    challenges: tuple
    tags: tuple

    @cached_property
    def tag_set(self) -> frozenset:
        return frozenset(self.tags)


@dataclass(frozen=True)
class PresignTrace:
    """Every intermediate of one presign run, for oracle comparison."""

    d: int
    window_products: tuple
    tag_product: Element
    tags: tuple
    nonce: int
    commit_g: Element   # R
    commit_h: Element   # T
    challenge: int      # c = H(PK, R, T, m)
    window_challenge: int  # c_j
    z_tilde: int


def keygen(ctx: GroupContext, rng=None) -> KeyPair:
    """Sample sk uniform in Z_p^* and set pk = g^sk."""
    sk = ctx.random_scalar_nonzero(rng)
    return KeyPair(sk, ctx.exp(ctx.generator_g, sk))


def gen_r(ctx: GroupContext, rng=None) -> tuple[StatementPair, int]:
    """Sample a statement/witness pair ((g^w, h^w), w) of the hard relation."""
    w = ctx.random_scalar_nonzero(rng)
    return StatementPair(ctx.exp(ctx.generator_g, w),
                         ctx.exp(ctx.generator_h, w)), w


def verify_relation(ctx: GroupContext, statement: StatementPair, w: int) -> bool:
    """True iff W1 = g^w and W2 = h^w."""
    return (statement.w1 == ctx.exp(ctx.generator_g, w)
            and statement.w2 == ctx.exp(ctx.generator_h, w))


def swt_aggregate(ctx: GroupContext, ring: Ring, t: int, tags) -> AggregateSet:
    """Aggregate width-t key windows (with wraparound) and the link tags.

    y_i = prod_{k=i..i+t-1 mod n} pk_k^d and l = prod_k tag_k^d, with d
    recomputed from the ring rather than trusted from input.
    """
    n = len(ring)
    if not 1 <= t <= n:
        raise ValueError(f"threshold {t} out of range for ring of {n}")
    tags = tuple(tags)
    if len(tags) != t:
        raise ValueError("tag count must equal the threshold")
    d = ring.d
    raised = [ctx.exp(pk, d) for pk in ring.keys]
    first = reduce(ctx.mul, raised[:t], ctx.identity)
    products = [first]
    cur = first
    # Slide the window one step at a time: divide out the key that leaves,
    # multiply in the key that enters.
    for i in range(1, n):
        cur = ctx.mul(ctx.mul(cur, ctx.inv(raised[i - 1])),
                      raised[(i + t - 1) % n])
        products.append(cur)
    tag_product = reduce(ctx.mul, (ctx.exp(tag, d) for tag in tags),
                         ctx.identity)
    return AggregateSet(tuple(products), tag_product)


def _challenge_hash(ctx: GroupContext, ring: Ring, commit_g: Element,
                    commit_h: Element, message: bytes) -> int:
    parts = list(ring.encodings)
    parts.append(ctx.encode_element(commit_g))
    parts.append(ctx.encode_element(commit_h))
    parts.append(message)
    return ctx.hash_to_scalar(DOMAIN_CHALLENGE, parts)


def _presign_body(ctx: GroupContext, ring: Ring, window: SignerWindow,
                  message: bytes, statement: StatementPair, nonce: int,
                  decoy_challenges: dict[int, int]
                  ) -> tuple[PreSignature, PresignTrace]:
    """Complete a presign run from explicit randomness.

    ``decoy_challenges`` maps every ring index except the window start to
    its challenge scalar.
    """
    n = len(ring)
    j = window.start
    p = ctx.order
    tags = tuple(ctx.exp(ctx.generator_h, sk) for sk in window.secrets)
    agg = swt_aggregate(ctx, ring, window.width, tags)
    decoy_sum = sum(decoy_challenges.values()) % p
    commit_g = ctx.mul(
        ctx.mul(ctx.exp(ctx.generator_g, nonce), statement.w1),
        ctx.multi_exp((agg.window_products[i], decoy_challenges[i])
                      for i in range(n) if i != j),
    )
    # prod_{i!=j} l^{c_i} collapses to l^(sum of decoy challenges): the base
    # does not depend on i.
    commit_h = ctx.mul(
        ctx.mul(ctx.exp(ctx.generator_h, nonce), statement.w2),
        ctx.exp(agg.tag_product, decoy_sum),
    )
    challenge = _challenge_hash(ctx, ring, commit_g, commit_h, message)
    window_challenge = (challenge - decoy_sum) % p
    z_tilde = (nonce - window_challenge * ring.d * sum(window.secrets)) % p
    challenges = tuple(
        window_challenge if i == j else decoy_challenges[i] for i in range(n)
    )
    psig = PreSignature(z_tilde, challenges, tags)
    trace = PresignTrace(
        d=ring.d,
        window_products=agg.window_products,
        tag_product=agg.tag_product,
        tags=tags,
        nonce=nonce,
        commit_g=commit_g,
        commit_h=commit_h,
        challenge=challenge,
        window_challenge=window_challenge,
        z_tilde=z_tilde,
    )
    return psig, trace


def presign_with_trace(ctx: GroupContext, ring: Ring, window: SignerWindow,
                       message: bytes, statement: StatementPair, rng=None
                       ) -> tuple[PreSignature, PresignTrace]:
    """presign() variant that also returns every intermediate value."""
    if window.ring is not ring and window.ring != ring:
        raise ValueError("window was built for a different ring")
    nonce = ctx.random_scalar_nonzero(rng)
    # Decoy challenges are drawn from Z_p^*; the window's own challenge is
    # computed by subtraction and may legitimately be zero.
    decoys = {
        i: ctx.random_scalar_nonzero(rng)
        for i in range(len(ring)) if i != window.start
    }
    return _presign_body(ctx, ring, window, message, statement, nonce, decoys)


def presign(ctx: GroupContext, ring: Ring, window: SignerWindow,
            message: bytes, statement: StatementPair, rng=None) -> PreSignature:
    """Produce a pre-signature on ``message`` bound to ``statement``."""
    psig, _ = presign_with_trace(ctx, ring, window, message, statement, rng)
    return psig


def _check_shape(ctx: GroupContext, ring: Ring, z: int, challenges, tags,
                 t: int) -> bool:
    n = len(ring)
    if not 1 <= t <= n:
        return False
    if len(challenges) != n or len(tags) != t:
        return False
    if not isinstance(z, int) or not 0 <= z < ctx.order:
        return False
    for c in challenges:
        if not isinstance(c, int) or not 0 <= c < ctx.order:
            return False
    return all(ctx.is_element(tag) for tag in tags)


def _verify_commitments(ctx: GroupContext, ring: Ring, z: int, challenges,
                        tags, t: int, message: bytes,
                        statement: Optional[StatementPair]) -> bool:
    p = ctx.order
    agg = swt_aggregate(ctx, ring, t, tags)
    challenge_sum = sum(challenges) % p
    commit_g = ctx.mul(
        ctx.exp(ctx.generator_g, z),
        ctx.multi_exp(zip(agg.window_products, challenges)),
    )
    commit_h = ctx.mul(ctx.exp(ctx.generator_h, z),
                       ctx.exp(agg.tag_product, challenge_sum))
    if statement is not None:
        commit_g = ctx.mul(commit_g, statement.w1)
        commit_h = ctx.mul(commit_h, statement.w2)
    return challenge_sum == _challenge_hash(ctx, ring, commit_g, commit_h,
                                            message)


def preverify(ctx: GroupContext, ring: Ring, psig: PreSignature, t: int,
              message: bytes, statement: StatementPair) -> bool:
    """Deterministic pre-signature check; malformed input yields False."""
    if not _check_shape(ctx, ring, psig.z_tilde, psig.challenges, psig.tags, t):
        return False
    if not (ctx.is_element(statement.w1) and ctx.is_element(statement.w2)):
        return False
    return _verify_commitments(ctx, ring, psig.z_tilde, psig.challenges,
                               psig.tags, t, message, statement)


def adapt(ctx: GroupContext, psig: PreSignature, w: int) -> Signature:
    """Complete a pre-signature with the witness: z = z~ + w."""
    return Signature((psig.z_tilde + w) % ctx.order, psig.challenges,
                     psig.tags)


def verify(ctx: GroupContext, ring: Ring, sig: Signature, t: int,
           message: bytes) -> bool:
    """Deterministic full-signature check; malformed input yields False."""
    if not _check_shape(ctx, ring, sig.z, sig.challenges, sig.tags, t):
        return False
    return _verify_commitments(ctx, ring, sig.z, sig.challenges, sig.tags, t,
                               message, None)


def ext(ctx: GroupContext, statement: StatementPair, psig: PreSignature,
        sig: Signature) -> Optional[int]:
    """Recover the witness from a matching (pre-signature, signature) pair.

    Returns None when the pair is inconsistent or the candidate w = z - z~
    does not open both statement components.
    """
    if psig.challenges != sig.challenges or psig.tags != sig.tags:
        return None
    w = (sig.z - psig.z_tilde) % ctx.order
    if not verify_relation(ctx, statement, w):
        return None
    return w


def link(sig_a, sig_b) -> bool:
    """True iff the two signatures share at least one link tag.

    Tags are deterministic per key (h^sk), so sharing a tag means sharing
    a signing key.  Symmetric; accepts signatures or pre-signatures.
    """
    return not sig_a.tag_set.isdisjoint(sig_b.tag_set)

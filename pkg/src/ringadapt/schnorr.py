"""Single-key Schnorr-style adaptor signatures.

The counterpart scheme for the plain chain of the atomic swap.  It runs
over the same group as the ring scheme and consumes only the first
statement component W1 = g^w, so one witness w completes pre-signatures
on both chains.

A pre-signature is (c, s~) with s~ = r + c*sk and c = H(pk, g^r * W1, m);
adapting adds the witness to the response: s = s~ + w.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .groups import Element, GroupContext
from .scheme import KeyPair

DOMAIN_CHALLENGE = b"schnorr-adaptor/c"


@dataclass(frozen=True)
class PlainPreSignature:
    challenge: int        # c
    masked_response: int  # s~


@dataclass(frozen=True)
class PlainSignature:
    challenge: int  # c
    response: int   # s


def _challenge(ctx: GroupContext, pk: Element, commit: Element,
               message: bytes) -> int:
    return ctx.hash_to_scalar(
        DOMAIN_CHALLENGE,
        [ctx.encode_element(pk), ctx.encode_element(commit), message],
    )


def presign(ctx: GroupContext, keypair: KeyPair, message: bytes,
            statement_g: Element, rng=None) -> PlainPreSignature:
    """Pre-sign ``message`` bound to the statement W1 = ``statement_g``."""
    r = ctx.random_scalar_nonzero(rng)
    commit = ctx.mul(ctx.exp(ctx.generator_g, r), statement_g)
    c = _challenge(ctx, keypair.pk, commit, message)
    return PlainPreSignature(c, (r + c * keypair.sk) % ctx.order)


def _recommit(ctx: GroupContext, pk: Element, c: int, s: int) -> Element:
    # g^s * pk^(-c); equals g^r (+W1 for a pre-signature) when honest.
    return ctx.mul(ctx.exp(ctx.generator_g, s),
                   ctx.exp(pk, (ctx.order - c) % ctx.order))


def preverify(ctx: GroupContext, pk: Element, psig: PlainPreSignature,
              message: bytes, statement_g: Element) -> bool:
    if not _well_formed(ctx, psig.challenge, psig.masked_response):
        return False
    if not ctx.is_element(statement_g):
        return False
    commit = ctx.mul(_recommit(ctx, pk, psig.challenge, psig.masked_response),
                     statement_g)
    return psig.challenge == _challenge(ctx, pk, commit, message)


def adapt(ctx: GroupContext, psig: PlainPreSignature, w: int) -> PlainSignature:
    return PlainSignature(psig.challenge,
                          (psig.masked_response + w) % ctx.order)


def verify(ctx: GroupContext, pk: Element, sig: PlainSignature,
           message: bytes) -> bool:
    if not _well_formed(ctx, sig.challenge, sig.response):
        return False
    commit = _recommit(ctx, pk, sig.challenge, sig.response)
    return sig.challenge == _challenge(ctx, pk, commit, message)


def ext(ctx: GroupContext, statement_g: Element, psig: PlainPreSignature,
        sig: PlainSignature) -> Optional[int]:
    """Recover w = s - s~, or None if the pair does not open W1."""
    if psig.challenge != sig.challenge:
        return None
    w = (sig.response - psig.masked_response) % ctx.order
    if ctx.exp(ctx.generator_g, w) != statement_g:
        return None
    return w


def _well_formed(ctx: GroupContext, c: int, s: int) -> bool:
    return (isinstance(c, int) and isinstance(s, int)
            and 0 <= c < ctx.order and 0 <= s < ctx.order)

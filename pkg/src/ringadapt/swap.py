"""Two-ledger atomic swap simulator.

Alice holds t accounts hidden in an n-key ring on the ring chain ("B");
Bob holds a single key on the plain chain ("A").  The protocol:

1. Bob samples the hard-relation pair (W, w), builds the chain-A
   transaction paying Alice and pre-signs it bound to W1.
2. Alice selects the ring hiding her accounts.
3. Alice checks Bob's pre-signature, builds the chain-B transaction
   paying Bob and pre-signs it with the ring scheme bound to W.
4. Bob checks Alice's pre-signature, adapts it with w and broadcasts
   the full signature to the chain-B miners.
5. Miners verify the signature and run the link check against every
   previously published tag set; on success the transaction confirms.
6. Alice extracts w from the confirmed signature, adapts Bob's
   pre-signature and claims on chain A.

Faults are injected at explicit points: abort points stop the run
after a numbered step (an abort at the step-5 boundary drops Bob's
broadcast before the miners process it, so no fault ever leaves assets
on only one chain), and corruption directives tamper with a
pre-signature in transit or replay Alice's window on a second
transaction.  Timeouts are modeled by these abort points, not by
wall-clock timers: before step 5 nothing has touched a ledger, so an
abort simply means no assets move.

Runs are single-threaded and deterministic: one seed fixes every sample
and the transcript is byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import schnorr, wire
from .groups import GroupContext, SeededRandomness
from .scheme import (KeyPair, PreSignature, Ring, SignerWindow, adapt, ext,
                     gen_r, keygen, presign, preverify, verify)
from .wire import CHAIN_PLAIN, CHAIN_RING, SwapTransaction

TAMPER_PRESIG_A = "tamper-presig-a"
TAMPER_PRESIG_B = "tamper-presig-b"
REPLAY_WINDOW = "replay-window"
CORRUPTIONS = (TAMPER_PRESIG_A, TAMPER_PRESIG_B, REPLAY_WINDOW)

REJECT_BAD_SIGNATURE = "bad-signature"
REJECT_DOUBLE_SPEND = "double-spend-link"
REJECT_MALFORMED = "malformed"


class Phase(str, Enum):
    INIT = "init"
    BOB_COMMITTED = "bob-committed"
    ALICE_COMMITTED = "alice-committed"
    BOB_CLAIMED = "bob-claimed"
    ALICE_CLAIMED = "alice-claimed"
    ABORTED = "aborted"


@dataclass(frozen=True)
class FaultPlan:
    """At most one fault per run: an abort point or a corruption."""

    abort_after: Optional[int] = None
    corruption: Optional[str] = None

    def __post_init__(self):
        if self.abort_after is not None and not 1 <= self.abort_after <= 5:
            raise ValueError("abort point must be one of steps 1..5")
        if self.corruption is not None and self.corruption not in CORRUPTIONS:
            raise ValueError(f"unknown corruption {self.corruption!r}")
        if self.abort_after is not None and self.corruption is not None:
            raise ValueError("at most one fault per run")


@dataclass(frozen=True)
class SubmitResult:
    accepted: bool
    reason: Optional[str] = None


class MockLedger:
    """Append-only confirmed log; chain B also tracks published link tags."""

    def __init__(self, ctx: GroupContext, chain_id: str):
        if chain_id not in (CHAIN_PLAIN, CHAIN_RING):
            raise ValueError(f"unknown chain id {chain_id!r}")
        self.ctx = ctx
        self.chain_id = chain_id
        self.confirmed: list[tuple[SwapTransaction, object]] = []
        self.published_tags: set[bytes] = set()
        self._confirmed_digests: set[bytes] = set()

    def has_confirmed(self, tx: SwapTransaction) -> bool:
        return self._tx_digest(tx) in self._confirmed_digests

    def _tx_digest(self, tx: SwapTransaction) -> bytes:
        return hashlib.sha256(wire.encode_transaction(self.ctx, tx)).digest()


def ledger_submit(ledger: MockLedger, tx: SwapTransaction, sig) -> SubmitResult:
    """Miner admission rule.

    Chain A accepts iff the plain signature verifies.  Chain B accepts iff
    the ring signature verifies and its tag set is disjoint from every tag
    published so far; accepted tags are published.  Re-submitting a
    confirmed transaction is a double spend on either chain.
    """
    ctx = ledger.ctx
    if tx.chain_id != ledger.chain_id:
        return SubmitResult(False, REJECT_MALFORMED)
    message = wire.encode_transaction(ctx, tx)
    if ledger.chain_id == CHAIN_PLAIN:
        if not isinstance(sig, schnorr.PlainSignature):
            return SubmitResult(False, REJECT_MALFORMED)
        if not schnorr.verify(ctx, tx.payer_key, sig, message):
            return SubmitResult(False, REJECT_BAD_SIGNATURE)
        if ledger.has_confirmed(tx):
            return SubmitResult(False, REJECT_DOUBLE_SPEND)
    else:
        try:
            ring = Ring(ctx, tx.ring_keys)
        except ValueError:
            return SubmitResult(False, REJECT_MALFORMED)
        if not hasattr(sig, "tags"):
            return SubmitResult(False, REJECT_MALFORMED)
        if not verify(ctx, ring, sig, tx.threshold, message):
            return SubmitResult(False, REJECT_BAD_SIGNATURE)
        if ledger.has_confirmed(tx):
            return SubmitResult(False, REJECT_DOUBLE_SPEND)
        tag_encodings = {ctx.encode_element(tag) for tag in sig.tags}
        if tag_encodings & ledger.published_tags:
            return SubmitResult(False, REJECT_DOUBLE_SPEND)
        ledger.published_tags |= tag_encodings
    ledger.confirmed.append((tx, sig))
    ledger._confirmed_digests.add(ledger._tx_digest(tx))
    return SubmitResult(True)


@dataclass
class SwapState:
    phase: Phase = Phase.INIT
    abort_reason: Optional[str] = None
    statement: Optional[object] = None
    tx_plain: Optional[SwapTransaction] = None   # Bob pays Alice on chain A
    tx_ring: Optional[SwapTransaction] = None    # Alice pays Bob on chain B
    presig_plain: Optional[object] = None        # as received by Alice
    presig_ring_local: Optional[object] = None   # Alice's own copy
    presig_ring_sent: Optional[object] = None    # as received by Bob
    sig_ring: Optional[object] = None
    sig_plain: Optional[object] = None
    extracted_witness: Optional[int] = None


@dataclass
class SwapRun:
    """One protocol execution with its parties, ledgers and transcript."""

    ctx: GroupContext
    ring: Ring
    window: SignerWindow
    bob_keypair: KeyPair
    amount_plain: int
    amount_ring: int
    fault: FaultPlan
    rng: SeededRandomness
    ledger_plain: MockLedger
    ledger_ring: MockLedger
    state: SwapState = field(default_factory=SwapState)
    transcript: list[dict] = field(default_factory=list)
    bob_witness: Optional[int] = None

    def record(self, step: int, actor: str, event: str, *,
               artifacts: Optional[dict] = None, verdict=None):
        self.transcript.append({
            "seq": len(self.transcript),
            "step": step,
            "actor": actor,
            "event": event,
            "phase": self.state.phase.value,
            "artifacts": artifacts or {},
            "verdict": verdict,
        })

    def abort(self, step: int, actor: str, reason: str):
        self.state.phase = Phase.ABORTED
        self.state.abort_reason = reason
        self.record(step, actor, f"aborted: {reason}")

    def digest(self, data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()


def step1_bob_commit(run: SwapRun):
    """Bob samples (W, w), builds tx on chain A and pre-signs it."""
    ctx = run.ctx
    statement, witness = gen_r(ctx, run.rng)
    run.bob_witness = witness
    run.state.statement = statement
    tx = SwapTransaction(CHAIN_PLAIN, b"alice", run.amount_plain,
                         run.rng.randbelow(2**64),
                         payer_key=run.bob_keypair.pk)
    run.state.tx_plain = tx
    psig = schnorr.presign(ctx, run.bob_keypair,
                           wire.encode_transaction(ctx, tx),
                           statement.w1, run.rng)
    if run.fault.corruption == TAMPER_PRESIG_B:
        psig = schnorr.PlainPreSignature(
            psig.challenge, (psig.masked_response + 1) % ctx.order)
        run.record(1, "adversary", "tampered plain pre-signature in transit")
    run.state.presig_plain = psig
    run.state.phase = Phase.BOB_COMMITTED
    run.record(1, "bob", "committed statement, chain-A tx and pre-signature",
               artifacts={
                   "statement": run.digest(wire.encode_statement(ctx, statement)),
                   "tx_plain": run.digest(wire.encode_transaction(ctx, tx)),
                   "presig_plain": run.digest(
                       wire.encode_plain_presignature(ctx, psig)),
               })


def step2_alice_select_ring(run: SwapRun):
    """Alice fixes the ring that hides her t accounts."""
    # The window was validated against the ring at construction; this step
    # publishes the choice (phase advances at the next commitment).
    run.record(2, "alice", "selected ring and signer window",
               artifacts={
                   "ring": run.digest(wire.encode_ring(run.ctx, run.ring)),
               })


def step3_alice_presign(run: SwapRun):
    """Alice checks Bob's pre-signature, then pre-signs her chain-B tx."""
    ctx = run.ctx
    ok = schnorr.preverify(ctx, run.bob_keypair.pk, run.state.presig_plain,
                           wire.encode_transaction(ctx, run.state.tx_plain),
                           run.state.statement.w1)
    run.record(3, "alice", "checked plain pre-signature", verdict=ok)
    if not ok:
        run.abort(3, "alice", "preverify_plain")
        return
    tx = SwapTransaction(CHAIN_RING, b"bob", run.amount_ring,
                         run.rng.randbelow(2**64),
                         ring_keys=run.ring.keys,
                         threshold=run.window.width)
    run.state.tx_ring = tx
    psig = presign(ctx, run.ring, run.window,
                   wire.encode_transaction(ctx, tx), run.state.statement,
                   run.rng)
    run.state.presig_ring_local = psig
    if run.fault.corruption == TAMPER_PRESIG_A:
        psig = PreSignature((psig.z_tilde + 1) % ctx.order,
                            psig.challenges, psig.tags)
        run.record(3, "adversary", "tampered ring pre-signature in transit")
    run.state.presig_ring_sent = psig
    run.state.phase = Phase.ALICE_COMMITTED
    run.record(3, "alice", "committed chain-B tx and ring pre-signature",
               artifacts={
                   "tx_ring": run.digest(wire.encode_transaction(ctx, tx)),
                   "presig_ring": run.digest(
                       wire.encode_presignature(ctx, psig)),
               })


def step4_bob_adapt_and_claim(run: SwapRun):
    """Bob checks Alice's pre-signature and adapts it with his witness."""
    ctx = run.ctx
    message = wire.encode_transaction(ctx, run.state.tx_ring)
    ok = preverify(ctx, run.ring, run.state.presig_ring_sent,
                   run.window.width, message, run.state.statement)
    run.record(4, "bob", "checked ring pre-signature", verdict=ok)
    if not ok:
        run.abort(4, "bob", "preverify_ring")
        return
    sig = adapt(ctx, run.state.presig_ring_sent, run.bob_witness)
    run.state.sig_ring = sig
    run.record(4, "bob", "adapted ring pre-signature, broadcasting",
               artifacts={
                   "sig_ring": run.digest(wire.encode_signature(ctx, sig)),
               })


def step5_ledger_confirm(run: SwapRun):
    """Chain-B miners verify, link-check and confirm Alice's transaction."""
    if run.fault.abort_after == 5:
        # The broadcast is dropped before the miners process it, so the
        # abort cannot leave assets on only one chain.
        run.record(5, "adversary", "broadcast dropped before admission")
        run.abort(5, "miners", "abort-after-step5")
        return
    result = ledger_submit(run.ledger_ring, run.state.tx_ring,
                           run.state.sig_ring)
    run.record(5, "miners", "chain-B admission",
               verdict=result.accepted,
               artifacts={} if result.accepted else
               {"reject_reason": result.reason})
    if not result.accepted:
        run.abort(5, "miners", f"ledger-ring-{result.reason}")
        return
    run.state.phase = Phase.BOB_CLAIMED
    run.record(5, "miners", "chain-B confirmed ring transaction")


def step6_alice_extract_and_claim(run: SwapRun):
    """Alice extracts w from the on-chain signature and claims on chain A."""
    ctx = run.ctx
    witness = ext(ctx, run.state.statement, run.state.presig_ring_local,
                  run.state.sig_ring)
    run.record(6, "alice", "extracted witness from on-chain signature",
               verdict=witness is not None,
               artifacts={} if witness is None else
               {"witness": wire.encode_scalar(ctx, witness).hex()})
    if witness is None:
        run.abort(6, "alice", "ext")
        return
    run.state.extracted_witness = witness
    sig = schnorr.adapt(ctx, run.state.presig_plain, witness)
    run.state.sig_plain = sig
    result = ledger_submit(run.ledger_plain, run.state.tx_plain, sig)
    run.record(6, "miners", "chain-A admission",
               verdict=result.accepted,
               artifacts={} if result.accepted else
               {"reject_reason": result.reason})
    if not result.accepted:
        run.abort(6, "alice", f"ledger-plain-{result.reason}")
        return
    run.state.phase = Phase.ALICE_CLAIMED
    run.record(6, "alice", "chain-A confirmed plain transaction")


_STEPS = (
    step1_bob_commit,
    step2_alice_select_ring,
    step3_alice_presign,
    step4_bob_adapt_and_claim,
    step5_ledger_confirm,
    step6_alice_extract_and_claim,
)


@dataclass
class SwapResult:
    state: SwapState
    transcript: list[dict]
    ledger_plain: MockLedger
    ledger_ring: MockLedger
    bob_witness: Optional[int]

    @property
    def confirmed_plain(self) -> bool:
        return (self.state.tx_plain is not None
                and self.ledger_plain.has_confirmed(self.state.tx_plain))

    @property
    def confirmed_ring(self) -> bool:
        return (self.state.tx_ring is not None
                and self.ledger_ring.has_confirmed(self.state.tx_ring))

    def outcome(self) -> str:
        if self.confirmed_plain and self.confirmed_ring:
            return "both-confirmed"
        if not self.confirmed_plain and not self.confirmed_ring:
            return "neither-confirmed"
        return "mixed"

    def transcript_jsonl(self) -> str:
        return "\n".join(json.dumps(rec, sort_keys=True)
                         for rec in self.transcript)


def run_swap(ctx: GroupContext, *, ring: Ring, window: SignerWindow,
             bob_keypair: KeyPair, amount_plain: int = 1,
             amount_ring: int = 1, fault: Optional[FaultPlan] = None,
             seed: int = 0, ledger_plain: Optional[MockLedger] = None,
             ledger_ring: Optional[MockLedger] = None) -> SwapResult:
    """Execute the six-step swap under an optional fault plan.

    Without a fault the run terminates in phase alice-claimed with both
    chains confirmed.  With a fault it terminates aborted with neither
    of the swap's transactions confirmed.
    """
    fault = fault or FaultPlan()
    if window.ring is not ring and window.ring != ring:
        raise ValueError("window was built for a different ring")
    if not 0 < amount_plain < 2**64 or not 0 < amount_ring < 2**64:
        raise ValueError("amounts must be positive 64-bit integers")
    run = SwapRun(
        ctx=ctx, ring=ring, window=window, bob_keypair=bob_keypair,
        amount_plain=amount_plain, amount_ring=amount_ring, fault=fault,
        rng=SeededRandomness(seed),
        ledger_plain=ledger_plain or MockLedger(ctx, CHAIN_PLAIN),
        ledger_ring=ledger_ring or MockLedger(ctx, CHAIN_RING),
    )
    if fault.corruption == REPLAY_WINDOW:
        _prepublish_window(run)
    for number, step in enumerate(_STEPS, start=1):
        step(run)
        if run.state.phase is Phase.ABORTED:
            break
        if fault.abort_after == number:
            run.abort(number, "adversary", f"abort-after-step{number}")
            break
    return SwapResult(run.state, run.transcript, run.ledger_plain,
                      run.ledger_ring, run.bob_witness)


def _prepublish_window(run: SwapRun):
    """Confirm a prior transaction by the same window, publishing its tags.

    Models the double-spend attempt: the swap's chain-B transaction will
    later link against these tags and be rejected.
    """
    ctx = run.ctx
    statement, witness = gen_r(ctx, run.rng)
    tx = SwapTransaction(CHAIN_RING, b"someone-else", 1,
                         run.rng.randbelow(2**64),
                         ring_keys=run.ring.keys,
                         threshold=run.window.width)
    psig = presign(ctx, run.ring, run.window,
                   wire.encode_transaction(ctx, tx), statement, run.rng)
    sig = adapt(ctx, psig, witness)
    result = ledger_submit(run.ledger_ring, tx, sig)
    assert result.accepted, "window replay setup must confirm"
    run.record(0, "adversary", "window already spent in a prior transaction",
               artifacts={"tx_prior": run.digest(
                   wire.encode_transaction(ctx, tx))})


def make_demo_parties(ctx: GroupContext, ring_size: int, threshold: int,
                      seed: int = 0, window_start: Optional[int] = None
                      ) -> tuple[Ring, SignerWindow, KeyPair]:
    """Deterministically build Alice's ring and window plus Bob's keypair."""
    rng = SeededRandomness(2 * seed)
    members = []
    seen = set()
    # Resample on duplicate keys; collisions are routine in the toy group.
    while len(members) < ring_size:
        kp = keygen(ctx, rng)
        if kp.pk not in seen:
            seen.add(kp.pk)
            members.append(kp)
    ring = Ring(ctx, [kp.pk for kp in members])
    if window_start is None:
        window_start = rng.randbelow(ring_size - threshold + 1)
    secrets = [members[window_start + i].sk for i in range(threshold)]
    window = SignerWindow(ctx, ring, window_start, secrets)
    bob = keygen(ctx, rng)
    return ring, window, bob


def swap_demo(ctx: GroupContext, ring_size: int = 4, threshold: int = 2,
              seed: int = 0, fault: Optional[FaultPlan] = None) -> SwapResult:
    """Self-contained demo run with deterministically generated parties."""
    ring, window, bob = make_demo_parties(ctx, ring_size, threshold, seed)
    return run_swap(ctx, ring=ring, window=window, bob_keypair=bob,
                    fault=fault, seed=2 * seed + 1)

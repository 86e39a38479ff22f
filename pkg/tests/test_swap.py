"""Mock ledgers and the six-step swap: admission rules, fault matrix,
atomicity, determinism."""

import itertools

import pytest

from conftest import build_ring, build_window
from ringadapt import adapt, gen_r, keygen, presign, schnorr, wire
from ringadapt.swap import (CORRUPTIONS, FaultPlan, MockLedger, Phase,
                            SwapTransaction, ledger_submit, make_demo_parties,
                            run_swap, swap_demo)


def _ring_tx(ring, t, payee, nonce):
    return SwapTransaction("B", payee, 1, nonce, ring_keys=ring.keys,
                           threshold=t)


def _signed_ring_tx(ctx, ring, window, payee, nonce, rng):
    statement, w = gen_r(ctx, rng)
    tx = _ring_tx(ring, window.width, payee, nonce)
    psig = presign(ctx, ring, window, wire.encode_transaction(ctx, tx),
                   statement, rng)
    return tx, adapt(ctx, psig, w)


class TestLedger:
    def test_plain_chain_admission(self, toy, rng):
        ledger = MockLedger(toy, "A")
        bob = keygen(toy, rng)
        statement, w = gen_r(toy, rng)
        tx = SwapTransaction("A", b"alice", 3, 7, payer_key=bob.pk)
        psig = schnorr.presign(toy, bob, wire.encode_transaction(toy, tx),
                               statement.w1, rng)
        sig = schnorr.adapt(toy, psig, w)
        assert ledger_submit(ledger, tx, sig).accepted
        # replaying a confirmed transaction is a double spend
        again = ledger_submit(ledger, tx, sig)
        assert (again.accepted, again.reason) == (False, "double-spend-link")
        bad = schnorr.PlainSignature(sig.challenge,
                                     (sig.response + 1) % toy.order)
        tx2 = SwapTransaction("A", b"alice", 3, 8, payer_key=bob.pk)
        result = ledger_submit(ledger, tx2, bad)
        assert (result.accepted, result.reason) == (False, "bad-signature")

    def test_ring_chain_admission_and_linking(self, toy, rng):
        ledger = MockLedger(toy, "B")
        ring, members = build_ring(toy, 5, rng)
        w_a = build_window(toy, ring, members, 0, 2)
        tx1, sig1 = _signed_ring_tx(toy, ring, w_a, b"x", 1, rng)
        assert ledger_submit(ledger, tx1, sig1).accepted
        assert ledger.published_tags == {toy.encode_element(t)
                                         for t in sig1.tags}
        # overlapping window: shares member 1
        w_b = build_window(toy, ring, members, 1, 2)
        tx2, sig2 = _signed_ring_tx(toy, ring, w_b, b"y", 2, rng)
        result = ledger_submit(ledger, tx2, sig2)
        assert (result.accepted, result.reason) == (False, "double-spend-link")
        # disjoint window: members 3, 4
        w_c = build_window(toy, ring, members, 3, 2)
        tx3, sig3 = _signed_ring_tx(toy, ring, w_c, b"z", 3, rng)
        assert ledger_submit(ledger, tx3, sig3).accepted

    def test_malformed_submissions(self, toy, rng):
        ledger_a = MockLedger(toy, "A")
        ledger_b = MockLedger(toy, "B")
        ring, members = build_ring(toy, 3, rng)
        window = build_window(toy, ring, members, 0, 1)
        tx_b, sig_b = _signed_ring_tx(toy, ring, window, b"x", 1, rng)
        assert ledger_submit(ledger_a, tx_b, sig_b).reason == "malformed"
        bob = keygen(toy, rng)
        tx_a = SwapTransaction("A", b"y", 1, 2, payer_key=bob.pk)
        assert ledger_submit(ledger_b, tx_a, sig_b).reason == "malformed"
        assert ledger_submit(ledger_b, tx_b, "junk").reason == "malformed"

    def test_tampered_ring_signature_rejected(self, toy, rng):
        ledger = MockLedger(toy, "B")
        ring, members = build_ring(toy, 4, rng)
        window = build_window(toy, ring, members, 0, 2)
        tx, sig = _signed_ring_tx(toy, ring, window, b"x", 1, rng)
        bad = type(sig)((sig.z + 1) % toy.order, sig.challenges, sig.tags)
        assert ledger_submit(ledger, tx, bad).reason == "bad-signature"
        assert not ledger.confirmed
        assert not ledger.published_tags

    def test_ledger_monotonicity(self, toy, rng):
        ledger = MockLedger(toy, "B")
        ring, members = build_ring(toy, 6, rng)
        sizes = []
        for start in (0, 2, 4):
            window = build_window(toy, ring, members, start, 2)
            tx, sig = _signed_ring_tx(toy, ring, window, b"p", start, rng)
            assert ledger_submit(ledger, tx, sig).accepted
            sizes.append((len(ledger.confirmed), len(ledger.published_tags)))
        assert sizes == sorted(sizes)
        assert len(ledger.confirmed) == 3


class TestSwapRuns:
    def test_happy_path(self, toy):
        result = swap_demo(toy, ring_size=4, threshold=2, seed=11)
        assert result.state.phase is Phase.ALICE_CLAIMED
        assert result.outcome() == "both-confirmed"
        assert result.state.extracted_witness == result.bob_witness
        phases = [rec["phase"] for rec in result.transcript]
        assert phases[0] == "bob-committed"
        assert phases[-1] == "alice-claimed"

    def test_happy_path_prod(self, prod):
        result = swap_demo(prod, ring_size=4, threshold=2, seed=1)
        assert result.outcome() == "both-confirmed"
        assert result.state.extracted_witness == result.bob_witness

    @pytest.mark.parametrize("step", [1, 2, 3, 4, 5])
    def test_abort_points(self, toy, step):
        result = swap_demo(toy, seed=5, fault=FaultPlan(abort_after=step))
        assert result.state.phase is Phase.ABORTED
        assert result.outcome() == "neither-confirmed"
        assert not result.ledger_plain.confirmed
        assert f"abort-after-step{step}" == result.state.abort_reason

    @pytest.mark.parametrize("corruption,reason", [
        ("tamper-presig-b", "preverify_plain"),
        ("tamper-presig-a", "preverify_ring"),
        ("replay-window", "ledger-ring-double-spend-link"),
    ])
    def test_corruptions(self, toy, corruption, reason):
        result = swap_demo(toy, seed=5,
                           fault=FaultPlan(corruption=corruption))
        assert result.state.phase is Phase.ABORTED
        assert result.state.abort_reason == reason
        assert result.outcome() == "neither-confirmed"

    def test_full_fault_matrix_atomicity(self, toy):
        plans = [None]
        plans += [FaultPlan(abort_after=k) for k in range(1, 6)]
        plans += [FaultPlan(corruption=c) for c in CORRUPTIONS]
        for plan, seed in itertools.product(plans, range(6)):
            result = swap_demo(toy, ring_size=4, threshold=2, seed=seed,
                               fault=plan)
            assert result.outcome() in ("both-confirmed",
                                        "neither-confirmed")
            if plan is None:
                assert result.outcome() == "both-confirmed"
                assert result.state.extracted_witness == result.bob_witness
            else:
                assert result.outcome() == "neither-confirmed"
                assert result.state.phase is Phase.ABORTED

    def test_transcripts_deterministic(self, toy):
        for plan in (None, FaultPlan(abort_after=3),
                     FaultPlan(corruption="replay-window")):
            a = swap_demo(toy, seed=21, fault=plan).transcript_jsonl()
            b = swap_demo(toy, seed=21, fault=plan).transcript_jsonl()
            assert a == b
        assert swap_demo(toy, seed=21).transcript_jsonl() != \
            swap_demo(toy, seed=22).transcript_jsonl()

    def test_fault_plan_validation(self):
        with pytest.raises(ValueError):
            FaultPlan(abort_after=6)
        with pytest.raises(ValueError):
            FaultPlan(corruption="melt-the-ledger")
        with pytest.raises(ValueError):
            FaultPlan(abort_after=1, corruption="tamper-presig-a")

    def test_run_swap_validates_inputs(self, toy, rng):
        ring, members = build_ring(toy, 4, rng)
        other_ring, _ = build_ring(toy, 4, rng)
        window = build_window(toy, ring, members, 0, 2)
        bob = keygen(toy, rng)
        with pytest.raises(ValueError):
            run_swap(toy, ring=other_ring, window=window, bob_keypair=bob)
        with pytest.raises(ValueError):
            run_swap(toy, ring=ring, window=window, bob_keypair=bob,
                     amount_plain=0)

    def test_witness_is_published_only_after_confirmation(self, toy):
        # Until step 5 confirms, no transcript record carries a witness.
        result = swap_demo(toy, seed=4, fault=FaultPlan(abort_after=4))
        for record in result.transcript:
            assert "witness" not in record["artifacts"]

    def test_prior_ledger_state_carries_over(self, toy, rng):
        # A swap on ledgers that already saw the window must abort.
        ring, window, bob = make_demo_parties(toy, 4, 2, seed=77)
        ledger_b = MockLedger(toy, "B")
        tx, sig = _signed_ring_tx(toy, ring, window, b"earlier", 9, rng)
        assert ledger_submit(ledger_b, tx, sig).accepted
        result = run_swap(toy, ring=ring, window=window, bob_keypair=bob,
                          seed=3, ledger_ring=ledger_b)
        assert result.state.abort_reason == "ledger-ring-double-spend-link"
        assert result.outcome() == "neither-confirmed"
        assert len(ledger_b.confirmed) == 1

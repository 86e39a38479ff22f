import pytest

from ringadapt import Ring, SeededRandomness, SignerWindow, keygen, setup_group


@pytest.fixture(scope="session")
def toy():
    return setup_group("toy")


@pytest.fixture(scope="session")
def prod():
    return setup_group("prod")


@pytest.fixture
def rng():
    return SeededRandomness(12345)


def build_ring(ctx, n, rng):
    """Ring of n distinct members; returns (ring, list of keypairs).

    Resamples on duplicate keys: in the 101-element toy group, birthday
    collisions among random secrets are routine.
    """
    members = []
    seen = set()
    while len(members) < n:
        kp = keygen(ctx, rng)
        if kp.pk not in seen:
            seen.add(kp.pk)
            members.append(kp)
    return Ring(ctx, [kp.pk for kp in members]), members


def build_window(ctx, ring, members, start, width):
    secrets = [members[(start + i) % len(members)].sk for i in range(width)]
    return SignerWindow(ctx, ring, start, secrets)

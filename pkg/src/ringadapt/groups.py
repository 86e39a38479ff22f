"""Prime-order group backends.

Every scheme in this package runs over a cyclic group of prime order p with
two independent generators g and h and a hash function into Z_p.  Two
interchangeable backends provide that group:

* ``prod`` -- ristretto255 over the system libsodium: prime order
  ~2^252, 32-byte canonical element encodings, 32-byte scalars.
* ``toy``  -- the order-101 subgroup of Z_607^*: small enough that tests
  can check every identity by exhaustive exponent-table lookup.

Group elements are opaque values (32-byte strings for ristretto255, int
residues mod 607 for the toy group); scalars are plain ints in [0, p).
All arithmetic goes through the context object so calling code never
branches on the backend.  Contexts are immutable and safe to share
across threads.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import functools
import hashlib
import random
import secrets
import struct
from typing import Iterable, Sequence, Union

Element = Union[bytes, int]

# Nothing-up-my-sleeve seed for the second generator: h must not have a
# discrete log relative to g that anyone could know.
H_DERIVATION_STRING = b"LTRAS-generator-h-v1"


class UnknownBackendError(ValueError):
    """Raised when setup_group() is asked for an unregistered backend."""


class SystemRandomness:
    """Randomness from the OS CSPRNG."""

    def randbelow(self, bound: int) -> int:
        return secrets.randbelow(bound)


class SeededRandomness:
    """Deterministic randomness for tests and replayable runs."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def randbelow(self, bound: int) -> int:
        return self._rng.randrange(bound)


_SYSTEM = SystemRandomness()


def frame_parts(domain_tag: bytes, parts: Iterable[bytes]) -> bytes:
    """Unambiguous preimage: every piece is u64-length-prefixed.

    Length prefixes guarantee that distinct part lists can never produce
    the same byte stream, e.g. ("ab","c") vs ("a","bc").
    """
    out = [struct.pack(">Q", len(domain_tag)), domain_tag]
    for part in parts:
        out.append(struct.pack(">Q", len(part)))
        out.append(part)
    return b"".join(out)


class GroupContext:
    """Common interface of the group backends.

    Attributes set by subclasses: ``label``, ``order`` (the prime p),
    ``scalar_size``/``element_size`` (canonical encoding widths in bytes),
    ``generator_g``, ``generator_h`` and ``identity``.
    """

    label: str
    order: int
    scalar_size: int
    element_size: int
    generator_g: Element
    generator_h: Element
    identity: Element

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def exp(self, a: Element, k: int) -> Element:
        raise NotImplementedError

    def multi_exp(self, pairs: Iterable[tuple[Element, int]]) -> Element:
        """Product of base^scalar over all pairs."""
        acc = self.identity
        for base, k in pairs:
            acc = self.mul(acc, self.exp(base, k))
        return acc

    def is_element(self, a: Element) -> bool:
        raise NotImplementedError

    def encode_element(self, a: Element) -> bytes:
        raise NotImplementedError

    def decode_element(self, data: bytes) -> Element:
        raise NotImplementedError

    def encode_scalar(self, k: int) -> bytes:
        if not 0 <= k < self.order:
            raise ValueError("scalar out of range")
        return k.to_bytes(self.scalar_size, "little")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_size:
            raise ValueError("scalar encoding has wrong length")
        k = int.from_bytes(data, "little")
        if k >= self.order:
            raise ValueError("scalar encoding not canonical")
        return k

    def hash_to_scalar(self, domain_tag: bytes, parts: Sequence[bytes]) -> int:
        digest = hashlib.sha512(frame_parts(domain_tag, parts)).digest()
        return int.from_bytes(digest, "big") % self.order

    def random_scalar_nonzero(self, rng=None) -> int:
        # Uniform over Z_p^*: resample on 0.
        rng = rng if rng is not None else _SYSTEM
        while True:
            k = rng.randbelow(self.order)
            if k != 0:
                return k


# --- toy backend -----------------------------------------------------------

TOY_MODULUS = 607
TOY_ORDER = 101
TOY_G = 7  # smallest element of multiplicative order 101 mod 607
TOY_H = 8  # second smallest


class ToyGroup(GroupContext):
    """Order-101 subgroup of Z_607^*, the exhaustive test oracle backend."""

    label = "toy-607"
    order = TOY_ORDER
    scalar_size = 2
    element_size = 2
    generator_g = TOY_G
    generator_h = TOY_H
    identity = 1

    def mul(self, a: int, b: int) -> int:
        return a * b % TOY_MODULUS

    def inv(self, a: int) -> int:
        return pow(a, TOY_MODULUS - 2, TOY_MODULUS)

    def exp(self, a: int, k: int) -> int:
        return pow(a, k % TOY_ORDER, TOY_MODULUS)

    def is_element(self, a: Element) -> bool:
        return (
            isinstance(a, int)
            and 1 <= a < TOY_MODULUS
            and pow(a, TOY_ORDER, TOY_MODULUS) == 1
        )

    def encode_element(self, a: int) -> bytes:
        if not self.is_element(a):
            raise ValueError("not a toy-group element")
        return a.to_bytes(2, "big")

    def decode_element(self, data: bytes) -> int:
        if len(data) != 2:
            raise ValueError("element encoding has wrong length")
        a = int.from_bytes(data, "big")
        if not self.is_element(a):
            raise ValueError("element encoding not in the subgroup")
        return a

    def elements(self) -> list[int]:
        """All 101 subgroup elements, for exhaustive checks."""
        return [pow(TOY_G, k, TOY_MODULUS) for k in range(TOY_ORDER)]


# --- ristretto255 backend --------------------------------------------------

RISTRETTO_ORDER = 2**252 + 27742317777372353535851937790883648493


class _Sodium:
    """Thin ctypes layer over the ristretto255 primitives of libsodium."""

    def __init__(self):
        name = ctypes.util.find_library("sodium")
        lib = None
        for candidate in filter(None, (name, "libsodium.so.23", "libsodium.so")):
            try:
                lib = ctypes.CDLL(candidate)
                break
            except OSError:
                continue
        if lib is None:
            raise RuntimeError("libsodium shared library not found")
        if lib.sodium_init() < 0:
            raise RuntimeError("sodium_init failed")
        if not hasattr(lib, "crypto_scalarmult_ristretto255"):
            raise RuntimeError("libsodium build lacks ristretto255 support")
        self._lib = lib

    def is_valid(self, data: bytes) -> bool:
        return self._lib.crypto_core_ristretto255_is_valid_point(data) == 1

    def add(self, a: bytes, b: bytes) -> bytes:
        out = ctypes.create_string_buffer(32)
        if self._lib.crypto_core_ristretto255_add(out, a, b) != 0:
            raise ValueError("invalid ristretto255 point")
        return out.raw

    def sub(self, a: bytes, b: bytes) -> bytes:
        out = ctypes.create_string_buffer(32)
        if self._lib.crypto_core_ristretto255_sub(out, a, b) != 0:
            raise ValueError("invalid ristretto255 point")
        return out.raw

    def scalarmult(self, k: bytes, point: bytes) -> bytes:
        out = ctypes.create_string_buffer(32)
        rc = self._lib.crypto_scalarmult_ristretto255(out, k, point)
        # libsodium refuses to output the identity; callers handle that case.
        if rc != 0:
            raise ValueError("scalarmult produced the identity or got bad input")
        return out.raw

    def scalarmult_base(self, k: bytes) -> bytes:
        out = ctypes.create_string_buffer(32)
        if self._lib.crypto_scalarmult_ristretto255_base(out, k) != 0:
            raise ValueError("scalarmult_base rejected scalar")
        return out.raw

    def from_hash(self, digest64: bytes) -> bytes:
        out = ctypes.create_string_buffer(32)
        if self._lib.crypto_core_ristretto255_from_hash(out, digest64) != 0:
            raise RuntimeError("from_hash failed")
        return out.raw


@functools.lru_cache(maxsize=None)
def _sodium() -> _Sodium:
    return _Sodium()


class RistrettoGroup(GroupContext):
    """ristretto255: prime order, canonical 32-byte encodings."""

    label = "ristretto255"
    order = RISTRETTO_ORDER
    scalar_size = 32
    element_size = 32
    identity = b"\x00" * 32

    def __init__(self):
        lib = _sodium()
        self.generator_g = lib.scalarmult_base((1).to_bytes(32, "little"))
        self.generator_h = lib.from_hash(
            hashlib.sha512(H_DERIVATION_STRING).digest()
        )

    def mul(self, a: bytes, b: bytes) -> bytes:
        return _sodium().add(a, b)

    def inv(self, a: bytes) -> bytes:
        if a == self.identity:
            return a
        return _sodium().sub(self.identity, a)

    def exp(self, a: bytes, k: int) -> bytes:
        k %= RISTRETTO_ORDER
        if k == 0 or a == self.identity:
            return self.identity
        kb = k.to_bytes(32, "little")
        if a == self.generator_g:
            return _sodium().scalarmult_base(kb)
        return _sodium().scalarmult(kb, a)

    def is_element(self, a: Element) -> bool:
        return isinstance(a, bytes) and len(a) == 32 and _sodium().is_valid(a)

    def encode_element(self, a: bytes) -> bytes:
        if not self.is_element(a):
            raise ValueError("not a ristretto255 element")
        return a

    def decode_element(self, data: bytes) -> bytes:
        if len(data) != 32:
            raise ValueError("element encoding has wrong length")
        if not _sodium().is_valid(data):
            raise ValueError("element encoding not canonical")
        return bytes(data)


_BACKENDS = {"prod": RistrettoGroup, "toy": ToyGroup}


@functools.lru_cache(maxsize=None)
def setup_group(backend_id: str) -> GroupContext:
    """Return the group context for a registered backend ("prod" or "toy").

    Deterministic: both generators are fixed by the backend, h by the
    hash-to-group derivation string rather than by sampling.
    """
    try:
        backend = _BACKENDS[backend_id]
    except KeyError:
        raise UnknownBackendError(
            f"unknown group backend {backend_id!r}; expected one of "
            f"{sorted(_BACKENDS)}"
        ) from None
    return backend()

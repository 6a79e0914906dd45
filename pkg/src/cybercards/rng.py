"""Deterministic random number generation for shuffles, policies and seed derivation.

Everything here is fixed-width integer arithmetic, so the same seed produces
the same stream on every platform and Python version. Two pieces:

* ``splitmix64`` - a 64-bit mixing function used to expand seeds and to derive
  independent per-game seeds from a master seed.
* ``Pcg32`` - a PCG-XSH-RR 64/32 generator (64-bit state and stream, 32-bit
  output) seeded through splitmix64. Its state is a plain ``(state, inc)``
  tuple so game states can carry it as an immutable value.

Shuffles are Fisher-Yates from the top index down, with the unbiased bounded
sampler below; this exact procedure is part of the serialization contract.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_PCG_MULT = 6364136223846793005

# Salt that namespaces policy-decision streams away from shuffle streams.
POLICY_STREAM_SALT = 0x9D2C5680A52F7B61


def splitmix64(value: int) -> int:
    """Finalize one splitmix64 step for ``value`` (already gamma-advanced)."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def mix_seed(master_seed: int, index: int) -> int:
    """Derive the ``index``-th child seed of ``master_seed``.

    This is the value of the splitmix64 stream started at ``master_seed``
    after ``index + 1`` advances, computed directly, so deriving seed *i*
    never depends on how many other seeds were derived.
    """
    return splitmix64((master_seed + (index + 1) * _SPLITMIX_GAMMA) & MASK64)


class Pcg32:
    """PCG-XSH-RR 64/32. Mutable helper; persist via the ``state_tuple``."""

    __slots__ = ("state", "inc")

    def __init__(self, state: int, inc: int) -> None:
        self.state = state & MASK64
        self.inc = inc & MASK64

    @classmethod
    def seeded(cls, seed: int) -> "Pcg32":
        """Initialize from a single 64-bit seed via two splitmix64 outputs."""
        initstate = mix_seed(seed, 0)
        initseq = mix_seed(seed, 1)
        rng = cls(0, ((initseq << 1) | 1) & MASK64)
        rng.next_u32()
        rng.state = (rng.state + initstate) & MASK64
        rng.next_u32()
        return rng

    @classmethod
    def from_tuple(cls, state_tuple: tuple[int, int]) -> "Pcg32":
        return cls(state_tuple[0], state_tuple[1])

    def state_tuple(self) -> tuple[int, int]:
        return (self.state, self.inc)

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * _PCG_MULT + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection, so no modulo bias."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = (0x100000000 // n) * n
        while True:
            r = self.next_u32()
            if r < limit:
                return r % n

    def random(self) -> float:
        """Uniform float in ``[0, 1)`` with 32 bits of entropy."""
        return self.next_u32() / 0x100000000

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, highest index first."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        if not items:
            raise ValueError("choice from empty sequence")
        return items[self.randbelow(len(items))]


def rng_state_to_hex(state_tuple: tuple[int, int]) -> str:
    return f"{state_tuple[0]:016x}{state_tuple[1]:016x}"


def rng_state_from_hex(text: str) -> tuple[int, int]:
    if len(text) != 32:
        raise ValueError(f"rng state must be 32 hex chars, got {len(text)}")
    return (int(text[:16], 16), int(text[16:], 16))

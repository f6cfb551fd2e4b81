"""Counter-based random streams for reproducible parallel simulation.

Stream derivation: stream ``i`` of base seed ``b`` is the Philox-4x64
generator keyed with the two 64-bit words ``(b, i)`` and counter 0.
Philox is a counter-based (keyed block) generator, so streams with
distinct keys are statistically independent and share no state, and a
stream is fully determined by ``(base_seed, stream_index)``.
"""

import numpy as np

_U64_MAX = 2**64 - 1


class RngStream:
    """One reproducible sample stream, identified by (base_seed, stream_index)."""

    def __init__(self, base_seed, stream_index=0):
        if not 0 <= int(base_seed) <= _U64_MAX:
            raise ValueError(f"base_seed must fit in 64 bits, got {base_seed}")
        if not 0 <= int(stream_index) <= _U64_MAX:
            raise ValueError(f"stream_index must be a non-negative 64-bit int, got {stream_index}")
        self.base_seed = int(base_seed)
        self.stream_index = int(stream_index)
        key = np.array([self.base_seed, self.stream_index], dtype=np.uint64)
        self.gen = np.random.Generator(np.random.Philox(key=key))

    def substream(self, offset):
        """A fresh stream with stream_index shifted by ``offset`` (never shares state)."""
        return RngStream(self.base_seed, self.stream_index + int(offset))

    def __repr__(self):
        return f"RngStream(base_seed={self.base_seed}, stream_index={self.stream_index})"

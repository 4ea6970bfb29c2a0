"""Counter-based random streams.

Each stream is a Philox-4x64 generator keyed by ``(seed, stream_index)``, so the
n-th variate of stream k depends only on ``(seed, k, n)``. Workers that own
disjoint stream indices therefore produce identical results under any
scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1


# Each block owns 2**128 Philox counter steps, far more than any run draws.
_BLOCK_SHIFT = 128


@dataclass(frozen=True)
class RandomStream:
    seed: int
    stream_index: int = 0
    block: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_index", "block"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v <= _U64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer")
            object.__setattr__(self, name, int(v))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        key = np.array([self.seed, self.stream_index], dtype=np.uint64)
        bitgen = np.random.Philox(key=key)
        if self.block:
            bitgen = bitgen.advance(self.block << _BLOCK_SHIFT)
        return np.random.Generator(bitgen)

    def normal(self, shape) -> np.ndarray:
        return self.generator().standard_normal(shape)

    def uniform(self, shape) -> np.ndarray:
        return self.generator().random(shape)

    def substream(self, offset: int) -> "RandomStream":
        """Block ``offset`` of this stream: same key, a disjoint counter range."""
        return RandomStream(self.seed, self.stream_index, self.block + int(offset))


def block_streams(stream: RandomStream, n_samples: int, block_size: int):
    """Yield ``(start, stop, stream)`` for consecutive sample blocks.

    Block ``b`` always draws from ``stream.substream(b)``, independent of how
    blocks are later distributed over workers.
    """
    for b, start in enumerate(range(0, n_samples, block_size)):
        yield start, min(start + block_size, n_samples), stream.substream(b)

"""Counter-based pseudo-random numbers.

All randomness in the simulator (request batches, channel counts) comes
from the SplitMix64 finalizer applied to a seed and a draw counter. The
generator has no hidden state, so draw ``j`` of seed ``s`` is the same
value in every run and in any language that implements the few lines
below:

    GAMMA = 0x9E3779B97F4A7C15
    mix64(z):
        z = (z + GAMMA) mod 2^64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
        return z ^ (z >> 31)

    draw(seed, j) = mix64(mix64(seed) ^ (j * GAMMA mod 2^64))
    uniform(seed, j, n) = draw(seed, j) mod n

The modulo bias of ``uniform`` is below 2^-60 for the small ``n`` used
here.
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """Apply the SplitMix64 increment-and-finalize step.

    Args:
        z: Any integer; it is reduced modulo 2^64 first.

    Returns:
        A 64-bit unsigned integer.
    """
    z = (z + GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def hash_ints(seed: int, *values: int) -> int:
    """Fold a seed and a sequence of integers into one 64-bit hash.

    Args:
        seed: Base seed.
        *values: Integers mixed in order.

    Returns:
        A 64-bit unsigned integer.
    """
    h = mix64(seed & MASK64)
    for value in values:
        h = mix64(h ^ (value & MASK64))
    return h


class CounterRng:
    """Stateless-per-draw generator: draw ``j`` depends only on (seed, j).

    Example:
        >>> rng = CounterRng(42)
        >>> a = rng.uniform(5)
        >>> CounterRng(42).uniform(5) == a
        True
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._key = mix64(seed & MASK64)
        self.counter = 0

    def draw(self) -> int:
        """Return the next raw 64-bit value and advance the counter."""
        value = mix64(self._key ^ ((self.counter * GAMMA) & MASK64))
        self.counter += 1
        return value

    def uniform(self, n: int) -> int:
        """Return an integer uniform over ``0..n-1``."""
        if n <= 0:
            raise ValueError(f"uniform() needs n >= 1, got {n}")
        return self.draw() % n

    def integers(self, low: int, high: int) -> int:
        """Return an integer uniform over the closed range ``[low, high]``."""
        return low + self.uniform(high - low + 1)


"""Runtime limits.

The symbolic Witt structure polynomials grow super-exponentially with the
index, so the supported envelope is enforced as soft limits here rather
than hard-coded constants.  Mutate :data:`CONFIG` (or use
:func:`configure`) to override; every limit check reads the live object.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Iterator


@dataclass
class Limits:
    max_p: int = 97
    max_n: int = 4
    max_witt_length: int = 8
    #: bit-length cap per integer coefficient inside the ghost recursion
    poly_coeff_bits: int = 1 << 22
    #: maximum number of candidate maps an isomorphism search may enumerate
    iso_search_budget: int = 2_000_000
    #: total-length cap for module isomorphism searches
    iso_length_bound: int = 8


CONFIG = Limits()


@contextlib.contextmanager
def configure(**overrides: int) -> Iterator[Limits]:
    """Temporarily override limits; restores previous values on exit.

    Mutates the shared :data:`CONFIG` in place so that modules holding a
    reference to it observe the overrides.
    """
    old = {k: getattr(CONFIG, k) for k in overrides}
    for k, v in overrides.items():
        setattr(CONFIG, k, v)
    try:
        yield CONFIG
    finally:
        for k, v in old.items():
            setattr(CONFIG, k, v)

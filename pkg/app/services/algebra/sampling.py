"""
Seeded word sampling for checks too large to run exhaustively.
"""

import random
from itertools import product
from typing import List, Optional, Sequence, TypeVar

from app.services.algebra.freealg import EMPTY, Letter, Word
from config import settings

T = TypeVar("T")


def sample(items: Sequence[T], limit: Optional[int] = None, seed: Optional[int] = None) -> List[T]:
    """All items if there are at most `limit`, else a seeded subset in the original order."""
    limit = limit or settings.verify.max_words_per_check
    if len(items) <= limit:
        return list(items)
    rng = random.Random(settings.verify.seed if seed is None else seed)
    picked = sorted(rng.sample(range(len(items)), limit))
    return [items[index] for index in picked]


def free_words(alphabet: Sequence[Letter], max_length: int, min_length: int = 0) -> List[Word]:
    """Every word over `alphabet` with length in [min_length, max_length], shortest first."""
    words: List[Word] = [EMPTY] if min_length == 0 else []
    for length in range(max(1, min_length), max_length + 1):
        words.extend(tuple(w) for w in product(alphabet, repeat=length))
    return words

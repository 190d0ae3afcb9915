"""
Reduced words in the symmetric group and their commutation classes.

Permutations are tuples in one-line notation over 1..n.  A word is a tuple
of letter indices (i_1, ..., i_m), each letter i meaning the adjacent
transposition of positions i, i+1; words act left to right.  A word for a
permutation is *reduced* when its length equals the inversion count.

Two reduced words are in the same commutation class when one turns into
the other by repeatedly swapping neighboring letters i, j with |i-j| > 1.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations as _itertools_permutations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "identity",
    "inversions",
    "apply_word",
    "all_permutations",
    "reduced_words",
    "commutation_classes",
    "total_commutation_classes",
    "stopping_permutation",
]

Permutation = tuple[int, ...]
Word = tuple[int, ...]


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def inversions(perm: Sequence[int]) -> int:
    """
    Number of out-of-order pairs; the length of any reduced word.

    >>> inversions((3, 2, 1))
    3
    """
    return sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )


def apply_word(word: Iterable[int], n: int) -> Permutation:
    """
    The permutation realized by a word acting on the identity.

    >>> apply_word((1, 2), 3)
    (2, 3, 1)
    """
    arr = list(range(1, n + 1))
    for i in word:
        arr[i - 1], arr[i] = arr[i], arr[i - 1]
    return tuple(arr)


def all_permutations(n: int) -> Iterator[Permutation]:
    return _itertools_permutations(range(1, n + 1))


@lru_cache(maxsize=None)
def reduced_words(perm: Permutation) -> tuple[Word, ...]:
    """
    Every reduced word realizing `perm`, in lexicographic order.

    Built backwards: the last letter of a reduced word must be a descent
    position of the permutation.

    >>> reduced_words((3, 2, 1))
    ((1, 2, 1), (2, 1, 2))
    >>> reduced_words((1, 2, 3))
    ((),)
    """
    if list(perm) == sorted(perm):
        return ((),)
    out: list[Word] = []
    for i in range(len(perm) - 1):
        if perm[i] > perm[i + 1]:
            shorter = list(perm)
            shorter[i], shorter[i + 1] = shorter[i + 1], shorter[i]
            for w in reduced_words(tuple(shorter)):
                out.append(w + (i + 1,))
    return tuple(sorted(out))


def _commutation_neighbors(word: Word) -> Iterator[Word]:
    for t in range(len(word) - 1):
        if abs(word[t] - word[t + 1]) > 1:
            yield word[:t] + (word[t + 1], word[t]) + word[t + 2 :]


def commutation_classes(perm: Permutation) -> tuple[tuple[Word, ...], ...]:
    """
    Partition of the reduced words of `perm` under letter commutation,
    each class sorted, classes ordered by their least word.

    >>> [len(c) for c in commutation_classes((3, 2, 1))]
    [1, 1]
    >>> commutation_classes((3, 1, 2))
    (((2, 1),),)
    """
    remaining = set(reduced_words(perm))
    classes: list[tuple[Word, ...]] = []
    while remaining:
        seed = min(remaining)
        remaining.discard(seed)
        component = {seed}
        stack = [seed]
        while stack:
            w = stack.pop()
            for v in _commutation_neighbors(w):
                if v in remaining:
                    remaining.discard(v)
                    component.add(v)
                    stack.append(v)
        classes.append(tuple(sorted(component)))
    return tuple(sorted(classes))


def total_commutation_classes(n: int) -> int:
    """
    Commutation classes summed over the whole symmetric group.

    >>> total_commutation_classes(3)
    7
    """
    return sum(len(commutation_classes(p)) for p in all_permutations(n))


def stopping_permutation(weights: Sequence) -> Permutation:
    """
    The population rank pattern from which no averaging can lower the
    objective: vertex indices listed by increasing population, which is
    the reverse of the indices listed by increasing weight.

    >>> stopping_permutation((2, 1, 3))   # w2 < w1 < w3
    (3, 1, 2)
    """
    if len(set(weights)) != len(weights):
        raise ValueError("weights must be pairwise distinct")
    by_weight = sorted(range(1, len(weights) + 1), key=lambda i: weights[i - 1])
    return tuple(reversed(by_weight))

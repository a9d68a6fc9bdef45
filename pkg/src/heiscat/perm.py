"""Permutations in one-line notation, with just enough Coxeter plumbing.

A permutation of rank n is a tuple ``images`` of length n with
``images[i-1] = w(i)``.  Products compose left-to-right on points:
``(u * v)(i) = u(v(i))``, matching the convention that the group algebra
acts on polynomials by permuting variable indices.  Reduced words are only
materialized where the Hecke normal form needs them.
"""

from __future__ import annotations

from itertools import permutations as _itertools_permutations


class Perm:
    """Immutable permutation of {1..n} in one-line notation.

    >>> s1 = Perm.transposition(3, 1)
    >>> s1.images
    (2, 1, 3)
    >>> (s1 * s1).is_identity()
    True
    """

    __slots__ = ("images",)

    def __init__(self, images: tuple[int, ...]):
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {images}")
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, *args):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int) -> "Perm":
        """The simple reflection s_i = (i, i+1) in rank n."""
        if not 1 <= i < n:
            raise ValueError(f"s_{i} is not a generator of S_{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return Perm(tuple(self.images[other.images[i] - 1] for i in range(self.rank)))

    def inverse(self) -> "Perm":
        inv = [0] * self.rank
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(self.images[i] == i + 1 for i in range(self.rank))

    def length(self) -> int:
        """Number of inversions = Coxeter length."""
        n = self.rank
        return sum(
            1
            for a in range(n)
            for b in range(a + 1, n)
            if self.images[a] > self.images[b]
        )

    def sign(self) -> int:
        return -1 if self.length() % 2 else 1

    def reduced_word(self) -> tuple[int, ...]:
        """A reduced word (s_{i1}, ..., s_{ik}) with w = s_{i1} * ... * s_{ik}.

        Produced by bubble-sorting the one-line notation; the word length
        equals the inversion count.
        """
        word: list[int] = []
        images = list(self.images)
        n = self.rank
        changed = True
        while changed:
            changed = False
            for i in range(n - 1):
                if images[i] > images[i + 1]:
                    images[i], images[i + 1] = images[i + 1], images[i]
                    word.append(i + 1)
                    changed = True
        # sorting w by adjacent swaps gives w^{-1} as a word read left to right;
        # reversing yields a reduced word for w itself since s_i are involutions
        return tuple(reversed(word))

    def extend(self, n: int) -> "Perm":
        """View self inside S_n for n >= rank, fixing the new points."""
        if n < self.rank:
            raise ValueError("cannot shrink a permutation")
        return Perm(self.images + tuple(range(self.rank + 1, n + 1)))

    def key(self) -> tuple[int, ...]:
        return self.images

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm{self.images}"


def all_perms(n: int):
    """All of S_n in one-line notation."""
    for images in _itertools_permutations(range(1, n + 1)):
        yield Perm(images)

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .field import GF


@dataclass(frozen=True)
class GeneratorView:
    """A vector-linear code as an ``M x (n * alpha)`` matrix.

    Node ``j`` owns columns ``j*alpha .. (j+1)*alpha - 1``; a file row vector
    ``x`` is stored as ``x @ matrix``.
    """

    field: GF
    matrix: np.ndarray
    n: int
    alpha: int

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.int64)
        if mat.ndim != 2 or mat.shape[1] != self.n * self.alpha:
            raise ValueError(
                f"matrix shape {mat.shape} does not match n={self.n}, alpha={self.alpha}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    def columns(self, nodes: Iterable[int]) -> np.ndarray:
        idx = [j * self.alpha + c for j in sorted(nodes) for c in range(self.alpha)]
        return self.matrix[:, idx]

    def entropy(self, nodes: Iterable[int]) -> int:
        """Joint entropy of a node set in symbols (column rank)."""
        nodes = list(nodes)
        if not nodes:
            return 0
        return self.field.rank(self.columns(nodes))

    def encode(self, x) -> np.ndarray:
        """Node contents for file ``x``, shape ``(n, alpha)``."""
        x = np.asarray(x, dtype=np.int64)
        return self.field.matmul(x[None, :], self.matrix)[0].reshape(self.n, self.alpha)


def planted_locality_code(n: int, r: int, M: int, alpha: int, field: GF, rng) -> GeneratorView:
    """Random vector-linear code whose (r+1)-groups each live in an r*alpha space.

    Group g draws a random ``M x r*alpha`` basis; each of its nodes stores a
    random combination of that basis, so any node is a function of the other
    r nodes of its group whenever they span the basis.
    """
    if n % (r + 1):
        raise ValueError(f"r+1={r + 1} must divide n={n}")
    rng = np.random.default_rng(rng)
    blocks = []
    for _ in range(n // (r + 1)):
        basis = field.random((M, r * alpha), rng)
        for _ in range(r + 1):
            blocks.append(field.matmul(basis, field.random((r * alpha, alpha), rng)))
    return GeneratorView(field, np.hstack(blocks), n, alpha)

"""Union-of-subspaces synthetic data generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the generative model x = H_k z + e.

    Args:
        ambient_dim: ambient dimension D.
        num_subspaces: number of subspaces K.
        subspace_dims: per-subspace dimension d_k, each < D.
        points_per_subspace: number of points drawn from each subspace.
        noise_sigma: standard deviation of the additive Gaussian noise.
        seed: RNG seed; the generated dataset is a pure function of the config.
    """

    ambient_dim: int
    num_subspaces: int
    subspace_dims: tuple[int, ...]
    points_per_subspace: tuple[int, ...]
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "subspace_dims", tuple(int(d) for d in self.subspace_dims))
        object.__setattr__(
            self, "points_per_subspace", tuple(int(p) for p in self.points_per_subspace)
        )
        if self.ambient_dim < 1 or self.num_subspaces < 1:
            raise ValueError("ambient_dim and num_subspaces must be positive")
        if len(self.subspace_dims) != self.num_subspaces:
            raise ValueError("subspace_dims must have one entry per subspace")
        if len(self.points_per_subspace) != self.num_subspaces:
            raise ValueError("points_per_subspace must have one entry per subspace")
        if any(d < 1 or d >= self.ambient_dim for d in self.subspace_dims):
            raise ValueError("every subspace dimension must satisfy 1 <= d_k < D")
        if any(p < 1 for p in self.points_per_subspace):
            raise ValueError("points_per_subspace entries must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")

    @property
    def n(self) -> int:
        return sum(self.points_per_subspace)


def _orthonormal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Orthonormalize a matrix of i.i.d. standard normals (QR with sign fix)."""
    A = rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(A)
    # Fix column signs so the distribution is not biased by the QR convention.
    return Q * np.sign(np.diag(R))


def random_orthonormal(dim: int, seed: int) -> np.ndarray:
    """Random dim x dim orthonormal matrix, deterministic given seed."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _orthonormal(np.random.default_rng(seed), dim)


def generate(config: SynthConfig) -> Dataset:
    """Draw a labeled dataset from a union of K random subspaces.

    One shared D x D orthonormal pool is drawn per dataset; each subspace
    basis takes d_k of its columns uniformly at random (subspaces may
    therefore intersect). Points are x = H_k z + e with z and e standard
    normal, e scaled by noise_sigma.
    """
    rng = np.random.default_rng(config.seed)
    D = config.ambient_dim
    pool = _orthonormal(rng, D)

    blocks = []
    labels = []
    for k in range(config.num_subspaces):
        d_k = config.subspace_dims[k]
        n_k = config.points_per_subspace[k]
        cols = rng.choice(D, size=d_k, replace=False)
        basis = pool[:, cols]
        Z = rng.standard_normal((d_k, n_k))
        # Noise is always drawn so the RNG stream does not depend on sigma;
        # paired runs at different sigma then differ only by the noise term.
        E = rng.standard_normal((D, n_k))
        blocks.append(basis @ Z + config.noise_sigma * E)
        labels.append(np.full(n_k, k, dtype=np.int64))

    name = (
        f"synth-D{D}-K{config.num_subspaces}-n{config.n}"
        f"-sigma{config.noise_sigma}-seed{config.seed}"
    )
    return Dataset(points=np.hstack(blocks), labels=np.concatenate(labels), id=name)

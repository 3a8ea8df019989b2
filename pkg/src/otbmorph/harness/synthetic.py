"""Synthetic population: parametric identities and a linear-map extractor.

Identity centers and per-sample offsets are Gaussian in parameter space;
the extractor is a fixed random linear map followed by unit-norm
projection, with optional additive observation noise before normalizing.
Everything regenerates bit-exactly from (config, seed).
"""

from dataclasses import dataclass

import numpy as np

from ..embeddings import l2_normalize
from ..errors import ExtractionError
from ..keyselect import KeyPool, KeyPoolEntry
from ..morph import ParametricFace
from .seeding import derive_seed


class SyntheticExtractor:
    """Deterministic embedding model: l2_normalize(W p + b) (+ noise)."""

    def __init__(self, weights, bias, noise_scale=0.0, noise_seed=0):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = np.asarray(bias, dtype=np.float64)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"weights {self.weights.shape} and bias {self.bias.shape} disagree"
            )
        self.noise_scale = float(noise_scale)
        self.noise_seed = int(noise_seed)
        self._noise_rng = np.random.default_rng(noise_seed)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def param_dim(self) -> int:
        return self.weights.shape[1]

    def __call__(self, face) -> np.ndarray:
        if not isinstance(face, ParametricFace):
            raise ExtractionError(
                f"synthetic extractor needs a ParametricFace, got {type(face).__name__}"
            )
        if face.dim != self.param_dim:
            raise ExtractionError(
                f"face has {face.dim} parameters, extractor expects {self.param_dim}"
            )
        v = self.weights @ face.params + self.bias
        if self.noise_scale > 0.0:
            v = v + self.noise_scale * self._noise_rng.standard_normal(self.dim)
        return l2_normalize(v)

    @classmethod
    def generate(cls, dim, param_dim, seed, bias_scale=0.5, noise_scale=0.0):
        rng = np.random.default_rng(seed)
        weights = rng.standard_normal((dim, param_dim))
        bias = bias_scale * rng.standard_normal(dim)
        return cls(weights, bias, noise_scale=noise_scale, noise_seed=derive_seed(seed, "noise"))

    def to_jsonable(self) -> dict:
        return {
            "dim": self.dim,
            "param_dim": self.param_dim,
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "noise_scale": self.noise_scale,
            "noise_seed": self.noise_seed,
        }

    @classmethod
    def from_jsonable(cls, raw: dict) -> "SyntheticExtractor":
        return cls(
            raw["weights"],
            raw["bias"],
            noise_scale=raw.get("noise_scale", 0.0),
            noise_seed=raw.get("noise_seed", 0),
        )


@dataclass(frozen=True, eq=False)
class Identity:
    """One subject: ordered face samples sharing a demographic group."""

    identity_id: str
    group: str
    samples: tuple
    sample_ids: tuple


@dataclass(eq=False)
class Population:
    """Evaluation subjects plus the extractor that embeds their faces."""

    identities: tuple
    extractor: object
    dim: int
    param_dim: int | None
    mode: str = "synthetic"

    def __len__(self) -> int:
        return len(self.identities)


def _group_for_index(i: int) -> str:
    return "A" if i % 2 == 0 else "B"


def generate_population(config, seed) -> tuple:
    """Build (Population, KeyPool) deterministically from a seed.

    Demographic groups alternate with index, so identity and pool groups
    are balanced within one. Pool identities are fresh draws, disjoint
    from the evaluation population, one sample each.
    """
    extractor = SyntheticExtractor.generate(
        config.dim,
        config.param_dim,
        derive_seed(seed, "extractor"),
        bias_scale=config.extractor_bias_scale,
        noise_scale=config.extractor_noise,
    )

    rng = np.random.default_rng(derive_seed(seed, "identities"))
    identities = []
    for i in range(config.identity_count):
        identity_id = f"id{i:04d}"
        center = config.center_scale * rng.standard_normal(config.param_dim)
        samples = []
        sample_ids = []
        for s in range(config.samples_per_identity):
            offset = config.within_class_scale * rng.standard_normal(config.param_dim)
            sample_id = f"{identity_id}/s{s:03d}"
            samples.append(ParametricFace(center + offset, asset_id=sample_id))
            sample_ids.append(sample_id)
        identities.append(
            Identity(identity_id, _group_for_index(i), tuple(samples), tuple(sample_ids))
        )

    pool_rng = np.random.default_rng(derive_seed(seed, "pool"))
    entries = []
    for k in range(config.pool_size):
        params = config.center_scale * pool_rng.standard_normal(config.param_dim)
        face = ParametricFace(params, asset_id=f"key{k:05d}")
        entries.append(
            KeyPoolEntry(
                id=f"key{k:05d}",
                face=face,
                embedding=extractor(face),
                group=_group_for_index(k),
            )
        )

    population = Population(
        identities=tuple(identities),
        extractor=extractor,
        dim=config.dim,
        param_dim=config.param_dim,
        mode="synthetic",
    )
    return population, KeyPool(entries)

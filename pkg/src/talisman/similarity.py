"""Similarity scores and kernels over region embedding bags.

The image-to-image score is best-match style: cosine similarity between
every (query RoI, candidate proposal) pair, reduced by max, so one good
proposal is enough to match an image to a target region. Kernels come
in two layouts: query-by-unlabeled (rectangular, rows are query images)
and pairwise-unlabeled (square, symmetric).

Kernel file format (little-endian): magic ``TLKN``, version u32,
kind u8, nonneg_mode u8, n_rows u32, n_cols u32, row-major float32.
"""

import enum
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bags import EmbeddingBag, ensure_normalized, l2_normalize
from .errors import (
    DimMismatch,
    EmptyInput,
    InvalidConfig,
    NotNormalized,
)

KERNEL_MAGIC = b"TLKN"
KERNEL_FORMAT_VERSION = 1


class KernelKind(enum.Enum):
    QUERY_BY_UNLABELED = "query-by-unlabeled"
    PAIRWISE_UNLABELED = "pairwise-unlabeled"


class NonnegMode(enum.Enum):
    """How raw cosine scores in [-1, 1] are mapped to kernel entries.

    CLAMP_ZERO zeroes anti-correlated pairs and keeps the ranking of
    relevant matches; SHIFT_RESCALE maps via (1+cos)/2; RAW passes
    through (not accepted by objectives that need nonnegativity).
    """

    CLAMP_ZERO = "clamp-zero"
    SHIFT_RESCALE = "shift-rescale"
    RAW = "raw"


_KIND_CODES = {KernelKind.QUERY_BY_UNLABELED: 0, KernelKind.PAIRWISE_UNLABELED: 1}
_MODE_CODES = {NonnegMode.CLAMP_ZERO: 0, NonnegMode.SHIFT_RESCALE: 1, NonnegMode.RAW: 2}
_KIND_FROM_CODE = {v: k for k, v in _KIND_CODES.items()}
_MODE_FROM_CODE = {v: k for k, v in _MODE_CODES.items()}


@dataclass(frozen=True)
class SimilarityKernel:
    """Dense similarity matrix plus the metadata objectives check."""

    values: np.ndarray
    kind: KernelKind
    nonneg_mode: NonnegMode

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float32)
        if values.ndim != 2 or values.size == 0:
            raise InvalidConfig("kernel must be a nonempty 2-d matrix")
        if self.kind is KernelKind.PAIRWISE_UNLABELED:
            if values.shape[0] != values.shape[1]:
                raise InvalidConfig("pairwise kernel must be square")
            if not np.allclose(values, values.T, atol=1e-6):
                raise InvalidConfig("pairwise kernel must be symmetric")
        lo = float(values.min())
        hi = float(values.max())
        if self.nonneg_mode is NonnegMode.RAW:
            if lo < -1.0 - 1e-6 or hi > 1.0 + 1e-6:
                raise InvalidConfig("raw kernel entries must lie in [-1, 1]")
        elif lo < -1e-7 or hi > 1.0 + 1e-6:
            raise InvalidConfig("nonnegative kernel entries must lie in [0, 1]")
        object.__setattr__(self, "values", values)
        values.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


def apply_nonneg_mode(scores: np.ndarray, mode: NonnegMode) -> np.ndarray:
    if mode is NonnegMode.CLAMP_ZERO:
        return np.maximum(scores, 0.0)
    if mode is NonnegMode.SHIFT_RESCALE:
        return (1.0 + scores) * 0.5
    return scores


def cosine_score_map(query_bag: EmbeddingBag, unlabeled_bag: EmbeddingBag) -> np.ndarray:
    """Pairwise cosine scores between query RoIs and candidate proposals.

    Both bags must be normalized and share the feature dimension.
    Returns a (T, P) float32 matrix with entries in [-1, 1].
    """
    if not (query_bag.normalized and unlabeled_bag.normalized):
        raise NotNormalized("cosine_score_map requires normalized bags")
    if query_bag.dim != unlabeled_bag.dim:
        raise DimMismatch(f"query dim {query_bag.dim} != unlabeled dim {unlabeled_bag.dim}")
    scores = query_bag.data.astype(np.float64) @ unlabeled_bag.data.astype(np.float64).T
    return np.clip(scores, -1.0, 1.0).astype(np.float32)


def targeted_sim(query_bag: EmbeddingBag, unlabeled_bag: EmbeddingBag) -> float:
    """Score of the best matching proposal against any query RoI."""
    return float(cosine_score_map(query_bag, unlabeled_bag).max())


def _flatten(bags):
    offsets = np.zeros(len(bags) + 1, dtype=np.int64)
    for i, bag in enumerate(bags):
        offsets[i + 1] = offsets[i] + bag.rows
    data = np.concatenate([bag.data for bag in bags], axis=0)
    return np.ascontiguousarray(data, dtype=np.float32), offsets


def build_query_kernel(
    query_bags,
    unlabeled_bags,
    nonneg_mode: NonnegMode = NonnegMode.CLAMP_ZERO,
) -> SimilarityKernel:
    """Kernel of best-match scores: entry (q, u) is targeted_sim(q, u).

    Bags are normalized internally if needed. The heavy loop runs on the
    selected backend (compiled extension or numpy).
    """
    query_bags = ensure_normalized(query_bags)
    unlabeled_bags = ensure_normalized(unlabeled_bags)
    if query_bags[0].dim != unlabeled_bags[0].dim:
        raise DimMismatch(
            f"query dim {query_bags[0].dim} != unlabeled dim {unlabeled_bags[0].dim}"
        )
    q_data, q_offsets = _flatten(query_bags)
    u_data, u_offsets = _flatten(unlabeled_bags)
    raw = _kernels.query_kernel(q_data, q_offsets, u_data, u_offsets)
    raw = np.clip(raw, -1.0, 1.0)
    return SimilarityKernel(
        apply_nonneg_mode(raw, nonneg_mode), KernelKind.QUERY_BY_UNLABELED, nonneg_mode
    )


def build_pairwise_kernel(
    image_vectors: np.ndarray,
    nonneg_mode: NonnegMode = NonnegMode.CLAMP_ZERO,
) -> SimilarityKernel:
    """Symmetric cosine kernel over one vector per image.

    Rows are normalized internally; under RAW and CLAMP_ZERO the
    diagonal is exactly 1.
    """
    vectors = np.asarray(image_vectors, dtype=np.float32)
    if vectors.ndim != 2 or vectors.shape[0] < 1:
        raise InvalidConfig("image_vectors must be a nonempty 2-d matrix")
    unit = l2_normalize(EmbeddingBag(vectors)).data.astype(np.float64)
    raw = unit @ unit.T
    raw = np.clip((raw + raw.T) * 0.5, -1.0, 1.0)
    np.fill_diagonal(raw, 1.0)
    values = apply_nonneg_mode(raw, nonneg_mode).astype(np.float32)
    return SimilarityKernel(values, KernelKind.PAIRWISE_UNLABELED, nonneg_mode)


def write_kernel(path, kernel: SimilarityKernel) -> None:
    """Serialize a kernel to ``path`` in the TLKN binary format."""
    with open(path, "wb") as fh:
        fh.write(KERNEL_MAGIC)
        fh.write(
            struct.pack(
                "<IBBII",
                KERNEL_FORMAT_VERSION,
                _KIND_CODES[kernel.kind],
                _MODE_CODES[kernel.nonneg_mode],
                kernel.n_rows,
                kernel.n_cols,
            )
        )
        fh.write(np.ascontiguousarray(kernel.values, dtype="<f4").tobytes())


def read_kernel(path) -> SimilarityKernel:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != KERNEL_MAGIC:
            raise InvalidConfig(f"{path}: bad magic {magic!r}, expected {KERNEL_MAGIC!r}")
        version, kind_code, mode_code, n_rows, n_cols = struct.unpack("<IBBII", fh.read(14))
        if version != KERNEL_FORMAT_VERSION:
            raise InvalidConfig(f"{path}: unsupported format version {version}")
        if kind_code not in _KIND_FROM_CODE or mode_code not in _MODE_FROM_CODE:
            raise InvalidConfig(f"{path}: unknown kind/mode codes {kind_code}/{mode_code}")
        raw = fh.read(n_rows * n_cols * 4)
        if len(raw) != n_rows * n_cols * 4:
            raise InvalidConfig(f"{path}: truncated kernel data")
        values = np.frombuffer(raw, dtype="<f4").reshape(n_rows, n_cols)
    return SimilarityKernel(
        np.array(values), _KIND_FROM_CODE[kind_code], _MODE_FROM_CODE[mode_code]
    )

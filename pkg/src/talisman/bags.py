"""Region embedding bags and their binary file format.

An embedding bag is the set of region feature vectors belonging to one
image: the target RoIs of a query exemplar, or the candidate proposals
of an unlabeled image. Bags are immutable once built and safe to share
across threads.

File format (little-endian): magic ``TLSM``, format version u32, bag
count u32, then per bag: rows u32, dim u32, rows*dim float32. An
optional sidecar JSON manifest maps bag index to an image identifier
and ground-truth labels.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, EmptyInput, InvalidConfig, NotNormalized, ZeroVectorRow

#: Tolerance for the unit-norm check on normalized bags.
NORM_TOL = 1e-5
#: Rows with norm at or below this are treated as zero vectors.
ZERO_ROW_EPS = 1e-12

BAG_MAGIC = b"TLSM"
BAG_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EmbeddingBag:
    """One image's region feature vectors, one row per region.

    ``data`` is a (rows, dim) float32 matrix. ``normalized`` asserts
    that every row is unit-length; it is validated on construction.
    """

    data: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float32)
        if data.ndim != 2:
            raise InvalidConfig("bag data must be a 2-d matrix")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidConfig("bag needs at least one row and one feature")
        object.__setattr__(self, "data", data)
        data.setflags(write=False)
        if self.normalized:
            norms = np.linalg.norm(data.astype(np.float64), axis=1)
            if np.any(np.abs(norms - 1.0) > NORM_TOL):
                bad = int(np.argmax(np.abs(norms - 1.0)))
                raise InvalidConfig(
                    f"bag flagged normalized but row {bad} has norm {norms[bad]:.6g}"
                )

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def l2_normalize(bag: EmbeddingBag) -> EmbeddingBag:
    """Return a copy of ``bag`` with every row scaled to unit length.

    Raises ZeroVectorRow for any row whose norm is at or below
    ZERO_ROW_EPS; the input bag is never modified.
    """
    norms = np.linalg.norm(bag.data.astype(np.float64), axis=1)
    small = np.nonzero(norms <= ZERO_ROW_EPS)[0]
    if small.size:
        raise ZeroVectorRow(int(small[0]))
    out = (bag.data.astype(np.float64) / norms[:, None]).astype(np.float32)
    return EmbeddingBag(out, normalized=True)


def pool_bag(bag: EmbeddingBag, mode: str = "mean") -> np.ndarray:
    """Collapse a bag to a single image-level vector.

    ``mode`` is "mean" (default) or "max", applied elementwise over rows.
    """
    if mode == "mean":
        return bag.data.astype(np.float64).mean(axis=0).astype(np.float32)
    if mode == "max":
        return bag.data.max(axis=0)
    raise InvalidConfig(f"unknown pooling mode {mode!r}")


def ensure_normalized(bags, *, normalize=True):
    """Validate a bag list: nonempty, uniform dim, all normalized.

    With ``normalize=True`` un-normalized bags are normalized in place of
    being rejected. Returns the (possibly re-normalized) list.
    """
    if not bags:
        raise EmptyInput("no bags given")
    dim = bags[0].dim
    out = []
    for bag in bags:
        if bag.dim != dim:
            raise DimMismatch(f"bag dim {bag.dim} != {dim}")
        if not bag.normalized:
            if not normalize:
                raise NotNormalized("bag is not L2-normalized")
            bag = l2_normalize(bag)
        out.append(bag)
    return out


def write_bags(path, bags) -> None:
    """Serialize bags to ``path`` in the TLSM binary format."""
    if not bags:
        raise EmptyInput("refusing to write an empty bag file")
    with open(path, "wb") as fh:
        fh.write(BAG_MAGIC)
        fh.write(struct.pack("<II", BAG_FORMAT_VERSION, len(bags)))
        for bag in bags:
            fh.write(struct.pack("<II", bag.rows, bag.dim))
            fh.write(np.ascontiguousarray(bag.data, dtype="<f4").tobytes())


def read_bags(path):
    """Load a TLSM bag file written by :func:`write_bags`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != BAG_MAGIC:
            raise InvalidConfig(f"{path}: bad magic {magic!r}, expected {BAG_MAGIC!r}")
        version, count = struct.unpack("<II", fh.read(8))
        if version != BAG_FORMAT_VERSION:
            raise InvalidConfig(f"{path}: unsupported format version {version}")
        bags = []
        for _ in range(count):
            rows, dim = struct.unpack("<II", fh.read(8))
            raw = fh.read(rows * dim * 4)
            if len(raw) != rows * dim * 4:
                raise InvalidConfig(f"{path}: truncated bag data")
            data = np.frombuffer(raw, dtype="<f4").reshape(rows, dim)
            bags.append(EmbeddingBag(np.array(data)))
    return bags


def write_manifest(path, entries, extra=None) -> None:
    """Write the sidecar JSON manifest for a bag file.

    ``entries`` is a list aligned with bag order; each item is a dict
    with at least ``image_id`` and optionally ``labels``.
    """
    doc = {"bags": entries}
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path):
    with open(path) as fh:
        return json.load(fh)

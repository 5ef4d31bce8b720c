"""Submodular objectives over similarity kernels, with memoized gains.

Two families share one interface:

* coverage objectives on a square pairwise kernel — facility location
  ("fl") and graph cut ("gc");
* targeted variants on a rectangular query-by-unlabeled kernel —
  "flmi" (best-match coverage both ways between the selection and the
  query rows) and "gcmi" (total affinity to the query rows, modular).

Every objective keeps per-element state so that a marginal gain costs
O(n_query_rows) or O(n) instead of a full re-evaluation, and ``commit``
updates that state in place. ``eval_objective`` is the independent
closed-form evaluation used as the oracle side in tests; it never
touches the memoized path.

The empty set evaluates to 0 for all variants, with max over the empty
set defined as 0; that convention needs nonnegative kernels for the
facility-location family, so RAW kernels are rejected there.
"""

import numpy as np

from .errors import (
    AlreadySelected,
    IndexOutOfRange,
    InvalidConfig,
    KernelKindMismatch,
)
from .similarity import KernelKind, NonnegMode, SimilarityKernel

OBJECTIVE_KINDS = ("fl", "gc", "flmi", "gcmi")

_PAIRWISE_KINDS = ("fl", "gc")
_NONNEG_REQUIRED = ("fl", "flmi")


def _check_kernel(kind: str, kernel: SimilarityKernel) -> None:
    if kind not in OBJECTIVE_KINDS:
        raise InvalidConfig(f"unknown objective kind {kind!r}")
    wanted = (
        KernelKind.PAIRWISE_UNLABELED
        if kind in _PAIRWISE_KINDS
        else KernelKind.QUERY_BY_UNLABELED
    )
    if kernel.kind is not wanted:
        raise KernelKindMismatch(f"{kind} needs a {wanted.value} kernel, got {kernel.kind.value}")
    if kind in _NONNEG_REQUIRED and kernel.nonneg_mode is NonnegMode.RAW:
        raise KernelKindMismatch(f"{kind} needs a nonnegative kernel; raw entries may be negative")


def _as_index_set(subset, n: int) -> np.ndarray:
    idx = np.unique(np.asarray(list(subset), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise IndexOutOfRange(f"subset indices must lie in [0, {n})")
    return idx


def eval_objective(kind: str, kernel: SimilarityKernel, subset, lam: float = 1.0) -> float:
    """Closed-form objective value of ``subset``, computed from scratch."""
    _check_kernel(kind, kernel)
    values = kernel.values.astype(np.float64)
    if kind in _PAIRWISE_KINDS:
        n = kernel.n_rows
    else:
        n = kernel.n_cols
    idx = _as_index_set(subset, n)
    if idx.size == 0:
        return 0.0
    if kind == "fl":
        return float(values[:, idx].max(axis=1).sum())
    if kind == "gc":
        if lam < 0:
            raise InvalidConfig("gc lambda must be nonnegative")
        cross = values[idx, :].sum()
        inner = values[np.ix_(idx, idx)].sum()
        return float(cross - lam * inner)
    if kind == "flmi":
        return float(values[:, idx].max(axis=1).sum() + values[:, idx].max(axis=0).sum())
    # gcmi
    return float(2.0 * values[:, idx].sum())


class Objective:
    """Base for memoized objectives; subclasses fill in the gain math.

    ``selected`` is the committed set in commit order. Marginal gains
    against a frozen state are side-effect free; ``commit`` is the only
    mutator and must not run concurrently.
    """

    kind = ""
    modular = False
    maybe_nonmonotone = False

    def __init__(self, kernel: SimilarityKernel):
        _check_kernel(self.kind, kernel)
        self.kernel = kernel
        self.n = kernel.n_cols if self.kind not in _PAIRWISE_KINDS else kernel.n_rows
        self.selected = []
        self._in_set = np.zeros(self.n, dtype=bool)

    def _check_candidate(self, candidate: int) -> int:
        candidate = int(candidate)
        if not 0 <= candidate < self.n:
            raise IndexOutOfRange(f"candidate {candidate} outside [0, {self.n})")
        if self._in_set[candidate]:
            raise AlreadySelected(f"candidate {candidate} already committed")
        return candidate

    def marginal_gain(self, candidate: int) -> float:
        candidate = self._check_candidate(candidate)
        return self._gain(candidate)

    def commit(self, candidate: int) -> None:
        candidate = self._check_candidate(candidate)
        self._apply(candidate)
        self.selected.append(candidate)
        self._in_set[candidate] = True

    def _gain(self, candidate: int) -> float:
        raise NotImplementedError

    def _apply(self, candidate: int) -> None:
        raise NotImplementedError


class FacilityLocation(Objective):
    """Coverage of the whole pool by the best selected representative."""

    kind = "fl"

    def __init__(self, kernel):
        super().__init__(kernel)
        self._values = kernel.values.astype(np.float64)
        # Best similarity from each pool element to the selected set.
        self.current_max = np.zeros(self.n, dtype=np.float64)

    def _gain(self, candidate):
        col = self._values[:, candidate]
        return float(np.maximum(col - self.current_max, 0.0).sum())

    def _apply(self, candidate):
        np.maximum(self.current_max, self._values[:, candidate], out=self.current_max)


class GraphCut(Objective):
    """Pool affinity minus lam-weighted internal redundancy."""

    kind = "gc"
    maybe_nonmonotone = True

    def __init__(self, kernel, lam: float = 1.0):
        super().__init__(kernel)
        if lam < 0:
            raise InvalidConfig("gc lambda must be nonnegative")
        self.lam = float(lam)
        self._values = kernel.values.astype(np.float64)
        self._row_sums = self._values.sum(axis=1)
        # Sum of similarities from each element to the selected set.
        self.selected_sims = np.zeros(self.n, dtype=np.float64)

    def _gain(self, candidate):
        return float(
            self._row_sums[candidate]
            - self.lam
            * (2.0 * self.selected_sims[candidate] + self._values[candidate, candidate])
        )

    def _apply(self, candidate):
        self.selected_sims += self._values[candidate, :]


class FacilityLocationMI(Objective):
    """Best-match coverage in both directions between selection and queries."""

    kind = "flmi"

    def __init__(self, kernel):
        super().__init__(kernel)
        self._values = kernel.values.astype(np.float64)
        # Best selected match per query row, and best query match per
        # pool element (fixed for the life of the kernel).
        self.query_max = np.zeros(kernel.n_rows, dtype=np.float64)
        self.best_query_match = self._values.max(axis=0)

    def _gain(self, candidate):
        col = self._values[:, candidate]
        return float(
            np.maximum(col - self.query_max, 0.0).sum() + self.best_query_match[candidate]
        )

    def _apply(self, candidate):
        np.maximum(self.query_max, self._values[:, candidate], out=self.query_max)


class GraphCutMI(Objective):
    """Total affinity between the selection and the query rows (modular)."""

    kind = "gcmi"
    modular = True

    def __init__(self, kernel):
        super().__init__(kernel)
        self.affinity = 2.0 * kernel.values.astype(np.float64).sum(axis=0)

    def _gain(self, candidate):
        return float(self.affinity[candidate])

    def _apply(self, candidate):
        pass


_CLASSES = {
    "fl": FacilityLocation,
    "gc": GraphCut,
    "flmi": FacilityLocationMI,
    "gcmi": GraphCutMI,
}


def make_objective(kind: str, kernel: SimilarityKernel, lam: float = 1.0) -> Objective:
    """Instantiate the memoized objective ``kind`` over ``kernel``."""
    if kind not in _CLASSES:
        raise InvalidConfig(f"unknown objective kind {kind!r}")
    if kind == "gc":
        return GraphCut(kernel, lam=lam)
    return _CLASSES[kind](kernel)

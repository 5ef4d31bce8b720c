"""Targeted data selection for rare slices via submodular mutual information."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .bags import EmbeddingBag, l2_normalize, pool_bag, read_bags, write_bags
from .errors import ERROR_NAMES, TalismanError
from .maximizer import SelectionResult, brute_force_opt, lazy_greedy, naive_greedy, stochastic_greedy
from .objectives import eval_objective, make_objective
from .similarity import (
    KernelKind,
    NonnegMode,
    SimilarityKernel,
    build_pairwise_kernel,
    build_query_kernel,
    cosine_score_map,
    read_kernel,
    targeted_sim,
    write_kernel,
)

__all__ = [
    "BACKEND",
    "ERROR_NAMES",
    "EmbeddingBag",
    "KernelKind",
    "NonnegMode",
    "SelectionResult",
    "SimilarityKernel",
    "TalismanError",
    "__version__",
    "brute_force_opt",
    "build_pairwise_kernel",
    "build_query_kernel",
    "cosine_score_map",
    "eval_objective",
    "l2_normalize",
    "lazy_greedy",
    "make_objective",
    "naive_greedy",
    "pool_bag",
    "read_bags",
    "read_kernel",
    "stochastic_greedy",
    "targeted_sim",
    "write_bags",
    "write_kernel",
]

"""Numpy implementation of the best-match similarity kernel.

Works on the flattened (ragged) representation: all bag rows stacked
into one matrix plus an int64 offsets array of length n_bags + 1. Dot
products are accumulated in float64 and the result is cast to float32,
matching the compiled backend.
"""

import numpy as np

BACKEND_NAME = "numpy"

# Column-row budget per block of the pair matrix; bounds peak memory at
# roughly total_query_rows * _BLOCK_ROWS * 8 bytes.
_BLOCK_ROWS = 262144


def query_kernel(q_data, q_offsets, u_data, u_offsets):
    """Best-match cosine score for every (query bag, unlabeled bag) pair.

    Inputs must already be row-normalized float32. Returns a
    (n_query_bags, n_unlabeled_bags) float32 matrix where each entry is
    the maximum dot product over all row pairs of the two bags.
    """
    nq = len(q_offsets) - 1
    nu = len(u_offsets) - 1
    q64 = q_data.astype(np.float64)
    out = np.empty((nq, nu), dtype=np.float32)

    avg_rows = max(1.0, (u_offsets[-1] - u_offsets[0]) / max(nu, 1))
    bags_per_block = max(1, int(_BLOCK_ROWS / avg_rows))
    for start in range(0, nu, bags_per_block):
        stop = min(start + bags_per_block, nu)
        lo, hi = u_offsets[start], u_offsets[stop]
        block = q64 @ u_data[lo:hi].astype(np.float64).T
        # Reduce proposals within each unlabeled bag, then RoIs within
        # each query bag.
        per_bag = np.maximum.reduceat(block, u_offsets[start:stop] - lo, axis=1)
        per_pair = np.maximum.reduceat(per_bag, q_offsets[:-1], axis=0)
        out[:, start:stop] = per_pair.astype(np.float32)
    return out

"""numba-compiled inner loop of the dual coordinate descent solver.

Importing this module requires numba; model.py treats it as optional and
falls back to a numpy implementation of the same update rule. Compiled
without fastmath so the arithmetic is IEEE-strict and runs are
reproducible.
"""

from numba import njit


@njit(cache=True, fastmath=False)
def cd_epoch(aug_y, q_diag, alpha, w, C, order):
    for idx in range(order.shape[0]):
        i = order[idx]
        gradient = -1.0
        for j in range(aug_y.shape[1]):
            gradient += aug_y[i, j] * w[j]
        updated = alpha[i] - gradient / q_diag[i]
        if updated < 0.0:
            updated = 0.0
        elif updated > C:
            updated = C
        delta = updated - alpha[i]
        if delta != 0.0:
            alpha[i] = updated
            for j in range(aug_y.shape[1]):
                w[j] += delta * aug_y[i, j]

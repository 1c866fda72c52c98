"""Symmetric eigen-decomposition with eigenvalues in descending order."""

import numpy as np


def eigh_desc(A):
    """Eigenpairs of a symmetric ``(q, q)`` matrix or a stack ``(..., q, q)``.

    Only the lower triangle is read (LAPACK ``syevd``).  Each matrix in a
    stack is decomposed independently, so a matrix gives the same result
    alone or batched.

    Returns
    -------
    w : ndarray, shape (..., q)
        Eigenvalues, largest first.
    V : ndarray, shape (..., q, q)
        Columns are the eigenvectors matching ``w``.
    """
    w, V = np.linalg.eigh(np.asarray(A, dtype=float))
    return w[..., ::-1], V[..., ::-1]

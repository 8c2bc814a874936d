#
# Copyright 2025 The Apache Software Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Dense complex matrix primitives: null-space basis and noise whitening.

Matrices are plain ``numpy`` arrays of dtype complex128; nothing here is ever
larger than a few dozen rows, so the LAPACK-backed ``scipy.linalg`` routines
are used directly.
"""

import numpy as np
import numpy.typing as npt
import scipy.linalg
import structlog

from ssm_lab.config import settings
from ssm_lab.exceptions import DegenerateRankError, NotPositiveDefiniteError

logger = structlog.get_logger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]


def as_complex_matrix(values: npt.ArrayLike) -> ComplexMatrix:
    """
    Coerce input into a finite 2-D complex128 array.

    Args:
        values: Anything numpy can turn into a 2-D array

    Returns:
        Complex matrix (a copy when a dtype change was needed)

    Raises:
        ValueError: If the input is not 2-D or has non-finite entries
    """
    matrix = np.asarray(values, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Matrix has non-finite entries")
    return matrix


def null_space_basis(a: npt.ArrayLike, tol: float | None = None) -> ComplexMatrix:
    """
    Orthonormal basis of the null space of a (typically wide) matrix.

    Uses column-pivoted Householder QR of A^H: the leading ``rank`` columns of
    Q span the row space of A, the remaining ones its null space.

    Args:
        a: Matrix of shape (r, c)
        tol: Relative rank tolerance; a diagonal entry of R counts toward the
            rank when it exceeds ``tol * ||A||_F`` (defaults to settings.rank_tol)

    Returns:
        T of shape (c, c - rank) with orthonormal columns and A @ T ~ 0

    Raises:
        DegenerateRankError: If A has full column rank (no null space)
    """
    matrix = as_complex_matrix(a)
    rtol = settings.rank_tol if tol is None else tol
    if rtol <= 0:
        raise ValueError(f"Rank tolerance must be positive, got {rtol}")

    cols = matrix.shape[1]
    q, r, _ = scipy.linalg.qr(matrix.conj().T, mode="full", pivoting=True)
    scale = np.linalg.norm(matrix)
    diagonal = np.abs(np.diag(r))
    rank = int(np.count_nonzero(diagonal > rtol * scale)) if scale > 0 else 0

    if rank >= cols:
        logger.warning("null_space_empty", shape=matrix.shape, rank=rank)
        raise DegenerateRankError(
            f"Matrix of shape {matrix.shape} has rank {rank}: no null space"
        )

    return np.ascontiguousarray(q[:, rank:])


def cholesky_whitener(k: npt.ArrayLike) -> ComplexMatrix:
    """
    Whitening transform for a Hermitian positive definite covariance.

    Args:
        k: Covariance matrix of shape (n, n)

    Returns:
        W = L^{-1} for the lower Cholesky factor L of K, so W K W^H = I

    Raises:
        NotPositiveDefiniteError: If K is not Hermitian positive definite
    """
    cov = as_complex_matrix(k)
    n, m = cov.shape
    if n != m:
        raise ValueError(f"Covariance must be square, got shape {cov.shape}")
    if not np.allclose(cov, cov.conj().T, rtol=1e-10, atol=1e-12 * np.linalg.norm(cov)):
        raise NotPositiveDefiniteError("Covariance is not Hermitian")

    try:
        lower = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        logger.warning("whitener_cholesky_failed", n=n, error=str(e))
        raise NotPositiveDefiniteError(f"Covariance is not positive definite: {e}") from e

    return scipy.linalg.solve_triangular(lower, np.eye(n, dtype=np.complex128), lower=True)

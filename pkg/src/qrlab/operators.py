"""Dense complex Hermitian matrix algebra.

Everything is plain ``numpy.complex128`` at desk scale (dim <= 256):
eigendecompositions with degeneracy merging, spectral projections onto
real intervals, Hermitian commutators, Kronecker products and the trace
norm that the state-space geometry is built on.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NumericError, ValidationError

HERMITICITY_TOL = 1e-12
DEGENERACY_GAP = 1e-9
PROJECTOR_TOL = 1e-10


def _as_square_complex(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("matrix has non-finite entries")
    return m


class HermitianOperator:
    """A self-adjoint matrix representing a physical quality.

    Hermiticity is checked on construction (max elementwise deviation from
    the conjugate transpose must stay below 1e-12); the stored matrix is
    symmetrised so downstream eigensolvers see an exactly Hermitian input.
    """

    __slots__ = ("matrix", "_eig")

    def __init__(self, entries):
        m = _as_square_complex(entries)
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > HERMITICITY_TOL:
            raise ValidationError(
                f"matrix is not Hermitian: max |A - A^dagger| = {dev:.3e}"
            )
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self.matrix = m
        self._eig = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def raw_eig(self):
        """Cached raw (eigenvalues, eigenvectors) from LAPACK, ungrouped."""
        if self._eig is None:
            try:
                vals, vecs = np.linalg.eigh(self.matrix)
            except np.linalg.LinAlgError as exc:  # pragma: no cover
                raise NumericError(f"eigensolver failed to converge: {exc}") from exc
            self._eig = (vals, vecs)
        return self._eig

    @property
    def operator_norm(self) -> float:
        vals, _ = self.raw_eig()
        return float(np.max(np.abs(vals))) if vals.size else 0.0

    @property
    def eigenvalue_bounds(self) -> tuple[float, float]:
        vals, _ = self.raw_eig()
        return float(vals[0]), float(vals[-1])

    def expectation(self, rho_matrix: np.ndarray) -> float:
        """Tr(rho A) for a Hermitian rho, returned as a real number."""
        return float(np.trace(rho_matrix @ self.matrix).real)

    def __add__(self, other):
        if isinstance(other, HermitianOperator):
            return HermitianOperator(self.matrix + other.matrix)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HermitianOperator):
            return HermitianOperator(self.matrix - other.matrix)
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return HermitianOperator(self.matrix * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return HermitianOperator(-self.matrix)

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class SpectralDecomposition:
    """Eigenvalues in ascending order with orthogonal eigenprojections.

    Eigenvalues closer than the degeneracy gap are merged into a single
    eigenspace, so projectors are well conditioned even under the
    accumulated eigensolver error of dim <= 256 problems.
    """

    __slots__ = ("eigenvalues", "projectors")

    def __init__(self, eigenvalues, projectors):
        self.eigenvalues = tuple(float(v) for v in eigenvalues)
        self.projectors = tuple(projectors)

    def reconstruct(self) -> np.ndarray:
        dim = self.projectors[0].dim
        out = np.zeros((dim, dim), dtype=np.complex128)
        for lam, proj in zip(self.eigenvalues, self.projectors):
            out += lam * proj.matrix
        return out


def eig_decompose(a: HermitianOperator) -> SpectralDecomposition:
    """Spectral decomposition with eigenvalues merged below a 1e-9 gap."""
    vals, vecs = a.raw_eig()
    groups = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] >= DEGENERACY_GAP:
            groups.append((start, i))
            start = i
    eigenvalues = []
    projectors = []
    for lo, hi in groups:
        block = vecs[:, lo:hi]
        eigenvalues.append(float(np.mean(vals[lo:hi])))
        projectors.append(HermitianOperator(block @ block.conj().T))
    return SpectralDecomposition(eigenvalues, projectors)


def spectral_projection(a: HermitianOperator, interval) -> HermitianOperator:
    """Projector onto the eigenspaces of ``a`` with eigenvalue in ``interval``.

    ``interval`` is a closed real interval ``(lo, hi)``; the zero matrix is
    returned when no eigenvalue falls inside.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise ValidationError(f"invalid interval [{lo}, {hi}]")
    dec = eig_decompose(a)
    out = np.zeros((a.dim, a.dim), dtype=np.complex128)
    for lam, proj in zip(dec.eigenvalues, dec.projectors):
        if lo <= lam <= hi:
            out += proj.matrix
    return HermitianOperator(out)


def commutator_hermitian(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """The Hermitian operator C with iC = [A, B], i.e. C = -i(AB - BA)."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    c = -1j * (a.matrix @ b.matrix - b.matrix @ a.matrix)
    return HermitianOperator(c)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices (or HermitianOperators)."""
    ma = a.matrix if isinstance(a, HermitianOperator) else np.asarray(a, dtype=np.complex128)
    mb = b.matrix if isinstance(b, HermitianOperator) else np.asarray(b, dtype=np.complex128)
    return np.kron(ma, mb)


def tensor_hermitian(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(tensor(a, b))


def trace_norm(t) -> float:
    """Tr|T|: sum of singular values; sum of |eigenvalues| when Hermitian."""
    m = t.matrix if isinstance(t, HermitianOperator) else _as_square_complex(t)
    if m.size == 0:
        return 0.0
    if np.max(np.abs(m - m.conj().T)) <= 1e-10:
        vals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        return float(np.sum(np.abs(vals)))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


# ---------------------------------------------------------------------------
# stock operators

def identity(dim: int) -> HermitianOperator:
    return HermitianOperator(np.eye(dim))


def zero(dim: int) -> HermitianOperator:
    return HermitianOperator(np.zeros((dim, dim)))


def sigma_x() -> HermitianOperator:
    return HermitianOperator([[0, 1], [1, 0]])


def sigma_y() -> HermitianOperator:
    return HermitianOperator([[0, -1j], [1j, 0]])


def sigma_z() -> HermitianOperator:
    return HermitianOperator([[1, 0], [0, -1]])


def spin_along(direction) -> HermitianOperator:
    """sigma . u for a unit 3-vector u."""
    u = np.asarray(direction, dtype=float)
    if u.shape != (3,):
        raise ValidationError("direction must be a 3-vector")
    norm = float(np.linalg.norm(u))
    if abs(norm - 1.0) > 1e-10:
        raise ValidationError(f"direction must be a unit vector, |u| = {norm}")
    return HermitianOperator(
        u[0] * sigma_x().matrix + u[1] * sigma_y().matrix + u[2] * sigma_z().matrix
    )


def grid_position_operator(dim: int, lo: float, hi: float) -> HermitianOperator:
    """Diagonal position operator on a uniform grid over [lo, hi]."""
    if dim < 2 or hi <= lo:
        raise ValidationError("grid needs dim >= 2 and hi > lo")
    return HermitianOperator(np.diag(np.linspace(lo, hi, dim)))


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> HermitianOperator:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(scale * 0.5 * (g + g.conj().T))

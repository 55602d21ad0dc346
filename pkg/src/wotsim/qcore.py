"""Dense complex linear algebra and two-state discrimination primitives.

Operators and state amplitudes are plain ``numpy`` arrays (``complex128``,
row-major).  Multi-register objects carry a :class:`RegisterLayout` that fixes
the tensor factorization; the leftmost factor is the most significant index
digit, so ``amps.reshape(layout.dims)`` recovers the tensor form.

Two tolerances are used throughout: ``TOL_EXACT`` for algebraic identities on
exactly representable constructions, and ``TOL_SPECTRAL`` for anything that
passed through an eigendecomposition or SVD.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LayoutError, NotPSDError, ShapeError

TOL_EXACT = 1e-9
TOL_SPECTRAL = 1e-6

ALICE = "Alice"
BOB = "Bob"
MESSAGE = "Message"
BOB_INPUT = "BobInput"
OWNERS = (ALICE, BOB, MESSAGE, BOB_INPUT)

# The universal numeric carrier: a dense complex matrix.
CMat = np.ndarray


def as_cmat(entries) -> CMat:
    """Coerce nested data to a complex matrix."""
    return np.asarray(entries, dtype=complex)


def hermitize(mat: CMat) -> CMat:
    """Symmetrize asymmetric roundoff: (M + M†)/2."""
    return (mat + mat.conj().T) / 2


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Factor:
    """One tensor factor: a named register with a dimension and an owner tag."""

    name: str
    dim: int
    owner: str

    def __post_init__(self):
        if self.dim < 2:
            raise LayoutError(f"factor {self.name!r} has dim {self.dim}; need >= 2")
        if self.owner not in OWNERS:
            raise LayoutError(f"unknown owner {self.owner!r} for factor {self.name!r}")


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered tensor factors; defines every bipartition used downstream."""

    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        names = [f.name for f in self.factors]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate factor names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def owned_by(self, *owners: str) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors if f.owner in owners)

    def select(self, names: Iterable[str]) -> tuple[str, ...]:
        """The given names, reordered to layout order."""
        wanted = set(names)
        unknown = wanted - set(self.names)
        if unknown:
            raise LayoutError(f"unknown factor names {sorted(unknown)}")
        return tuple(n for n in self.names if n in wanted)

    def subset_dim(self, names: Iterable[str]) -> int:
        sel = set(self.select(names))
        return int(np.prod([f.dim for f in self.factors if f.name in sel] or [1]))

    def without(self, names: Iterable[str]) -> "RegisterLayout":
        drop = set(self.select(names))
        return RegisterLayout(tuple(f for f in self.factors if f.name not in drop))


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state over a register layout."""

    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.asarray(self.amps).reshape(-1))
        object.__setattr__(self, "amps", amps)
        if amps.size != self.layout.dim:
            raise ShapeError(
                f"state has {amps.size} amplitudes, layout dim is {self.layout.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL_EXACT:
            raise ShapeError(f"state norm {norm} deviates from 1 beyond tolerance")


@dataclass(frozen=True, eq=False)
class DensityOp:
    """A density operator: Hermitian, PSD up to roundoff, unit trace."""

    mat: np.ndarray

    def __post_init__(self):
        mat = _frozen(np.atleast_2d(np.asarray(self.mat)))
        object.__setattr__(self, "mat", mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"density operator must be square, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > TOL_EXACT:
            raise ShapeError("density operator is not Hermitian within tolerance")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TOL_EXACT:
            raise ShapeError(f"density operator trace {tr} deviates from 1")
        wmin = np.linalg.eigvalsh(hermitize(mat)).min()
        if wmin < -TOL_SPECTRAL:
            raise NotPSDError(f"density operator has eigenvalue {wmin}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class TwoOutcomeMeasurement:
    """A projective two-outcome measurement: pos + neg = identity."""

    pos: np.ndarray
    neg: np.ndarray

    def __post_init__(self):
        pos, neg = _frozen(self.pos), _frozen(self.neg)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)
        if pos.shape != neg.shape or pos.ndim != 2 or pos.shape[0] != pos.shape[1]:
            raise ShapeError(f"projector shapes {pos.shape}, {neg.shape} invalid")
        for name, p in (("pos", pos), ("neg", neg)):
            if np.abs(p - p.conj().T).max() > TOL_SPECTRAL:
                raise ShapeError(f"{name} projector is not Hermitian")
            if np.abs(p @ p - p).max() > TOL_SPECTRAL:
                raise ShapeError(f"{name} projector is not idempotent")
        if np.abs(pos + neg - np.eye(pos.shape[0])).max() > TOL_EXACT:
            raise ShapeError("projectors do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.pos.shape[0]


def kron(a: CMat, b: CMat) -> CMat:
    """Tensor product with the left operand's index major."""
    return np.kron(as_cmat(a), as_cmat(b))


def _permutation_indices(dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Map each flat index (dims-order digits) to its flat index after
    reordering the digits to ``order``."""
    idx = np.arange(int(np.prod(dims)))
    digits = np.unravel_index(idx, tuple(dims))
    new_dims = tuple(dims[i] for i in order)
    return np.ravel_multi_index(tuple(digits[i] for i in order), new_dims)


def embed_operator(op: CMat, layout: RegisterLayout, names: Iterable[str]) -> CMat:
    """Extend an operator on the named factors (layout order) by identity on
    the remaining factors, returning a full-layout matrix."""
    sel = layout.select(names)
    positions = [i for i, n in enumerate(layout.names) if n in set(sel)]
    rest = [i for i in range(len(layout.factors)) if i not in positions]
    op = as_cmat(op)
    d_sel = layout.subset_dim(sel)
    if op.shape != (d_sel, d_sel):
        raise ShapeError(f"operator shape {op.shape} does not match subsystem dim {d_sel}")
    d_rest = int(np.prod([layout.dims[i] for i in rest] or [1]))
    big = np.kron(op, np.eye(d_rest))
    # big lives in (sel..., rest...) digit order; conjugate back to layout order
    perm = _permutation_indices(layout.dims, positions + rest)
    return big[np.ix_(perm, perm)]


def apply_on_factors(op: CMat, sv: StateVector, names: Iterable[str]) -> StateVector:
    """Apply an operator on the named factors of a state."""
    full = embed_operator(op, sv.layout, names)
    return StateVector(sv.layout, full @ sv.amps)


def partial_trace(state: DensityOp, layout: RegisterLayout,
                  keep: Iterable[str]) -> DensityOp:
    """Reduce a density operator to the kept factors, in layout order."""
    if state.dim != layout.dim:
        raise LayoutError(f"state dim {state.dim} != layout dim {layout.dim}")
    kept = layout.select(keep)
    k = len(layout.factors)
    kept_pos = [i for i, n in enumerate(layout.names) if n in set(kept)]
    tensor = state.mat.reshape(layout.dims + layout.dims)
    row = list(range(k))
    col = [i if i not in kept_pos else k + i for i in range(k)]
    out = [i for i in kept_pos] + [k + i for i in kept_pos]
    reduced = np.einsum(tensor, row + col, out)
    d = int(np.prod([layout.dims[i] for i in kept_pos] or [1]))
    return DensityOp(hermitize(reduced.reshape(d, d)))


def trace_norm(mat: CMat) -> float:
    """Sum of the singular values."""
    mat = as_cmat(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"trace norm needs a square matrix, got {mat.shape}")
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def guess_prob(rho: DensityOp, xi: DensityOp) -> float:
    """Optimal probability of identifying which of two equiprobable states
    was prepared: 1/2 + ||rho - xi||_1 / 4."""
    if rho.dim != xi.dim:
        raise ShapeError(f"dimension mismatch {rho.dim} != {xi.dim}")
    return 0.5 + 0.25 * trace_norm(rho.mat - xi.mat)


def helstrom(rho: DensityOp, xi: DensityOp) -> tuple[TwoOutcomeMeasurement, float]:
    """The optimal two-outcome measurement for equiprobable ``rho`` vs ``xi``.

    Projects onto the nonnegative / negative eigenspaces of ``rho - xi``.
    The returned success probability is computed from the projectors, not
    from the trace-norm formula, so the two routes can be cross-checked.
    """
    if rho.dim != xi.dim:
        raise ShapeError(f"dimension mismatch {rho.dim} != {xi.dim}")
    w, v = np.linalg.eigh(hermitize(rho.mat - xi.mat))
    plus = v[:, w >= 0]
    pos = plus @ plus.conj().T
    neg = np.eye(rho.dim) - pos
    meas = TwoOutcomeMeasurement(hermitize(pos), hermitize(neg))
    success = 0.5 * float(np.real(np.trace(meas.pos @ rho.mat)
                                  + np.trace(meas.neg @ xi.mat)))
    return meas, success


def herm_sqrt(rho: DensityOp) -> CMat:
    """Hermitian PSD square root of a density operator.

    Eigenvalues in [-TOL_SPECTRAL, 0) are clipped to zero; anything more
    negative raises, since that is no longer partial-trace roundoff.
    """
    w, v = np.linalg.eigh(hermitize(rho.mat))
    if w.min() < -TOL_SPECTRAL:
        raise NotPSDError(f"eigenvalue {w.min()} below -{TOL_SPECTRAL}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: DensityOp, xi: DensityOp) -> float:
    """Fidelity ||sqrt(rho) sqrt(xi)||_1, in [0, 1]."""
    if rho.dim != xi.dim:
        raise ShapeError(f"dimension mismatch {rho.dim} != {xi.dim}")
    return trace_norm(herm_sqrt(rho) @ herm_sqrt(xi))


def bipartition_matrix(sv: StateVector, b_names: Iterable[str]) -> CMat:
    """Reshape amplitudes to a (kept, b) matrix for the given bipartition."""
    b = sv.layout.select(b_names)
    b_pos = [i for i, n in enumerate(sv.layout.names) if n in set(b)]
    keep_pos = [i for i in range(len(sv.layout.factors)) if i not in b_pos]
    tensor = sv.amps.reshape(sv.layout.dims)
    tensor = np.transpose(tensor, keep_pos + b_pos)
    d_keep = int(np.prod([sv.layout.dims[i] for i in keep_pos] or [1]))
    return tensor.reshape(d_keep, -1)


def uhlmann_unitary(phi: StateVector, psi: StateVector,
                    b_factors: Iterable[str]) -> tuple[CMat, float]:
    """A unitary on the ``b_factors`` subsystem maximizing the overlap
    <phi|(I x U)|psi>.

    The maximum over unitaries equals the fidelity of the two reduced states
    on the complementary factors, and is attained at U = conj(W Vh) where
    W diag(s) Vh is the SVD of the cross matrix M[j,k] = <phi|(I x |j><k|)|psi>
    over the b-subsystem basis.  The achieved overlap is sum(s), real and
    nonnegative.

    Returns
    -------
    (U, overlap)
        ``U`` acts on the b factors in layout order; ``overlap`` is the
        achieved real overlap.
    """
    if phi.layout != psi.layout:
        raise LayoutError("states must share a layout")
    b = phi.layout.select(b_factors)
    if not b or len(b) == len(phi.layout.factors):
        raise LayoutError("b_factors must be a nonempty strict subset of the factors")
    phi_mat = bipartition_matrix(phi, b)
    psi_mat = bipartition_matrix(psi, b)
    m = phi_mat.conj().T @ psi_mat
    w, s, vh = np.linalg.svd(m)
    u = np.conj(w @ vh)
    # overlap evaluated through the states, as a self-check of the recipe
    overlap = np.vdot(phi_mat, psi_mat @ u.T)
    return u, float(np.real(overlap))


def haar_unitary(dim: int, rng: np.random.Generator) -> CMat:
    """Approximately Haar-random unitary: QR of a complex Gaussian matrix
    with the R diagonal's phases folded back in."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOp:
    """A random density operator of the given dimension (full rank unless
    ``rank`` is given)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityOp(hermitize(m / np.trace(m)))


def random_pure_density(dim: int, rng: np.random.Generator) -> DensityOp:
    """A random rank-one density operator."""
    return random_density(dim, rng, rank=1)


def pure_density(sv: StateVector) -> DensityOp:
    """The rank-one density operator of a pure state."""
    return DensityOp(np.outer(sv.amps, sv.amps.conj()))

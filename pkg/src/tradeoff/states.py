"""Dense linear algebra and entropic quantities for ensembles of bipartite pure states.

All entropies are in bits: logarithms and exponentials are base 2 throughout
the package.
"""

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
NORM_TOL = 1e-10
PROB_TOL = 1e-10
# Spectrum values below this are indistinguishable from exact zeros at the
# accuracy we certify, and -x*log2(x) would otherwise inject noise.
EIGENVALUE_CLAMP = 1e-12


def shannon_entropy(probs) -> float:
    """Shannon entropy of a probability vector, in bits, with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0.0]
    return float(-np.dot(p, np.log2(p)))


def _spectrum_entropy(eigenvalues) -> float:
    """Entropy of an eigenvalue list, clamping numerical dust to zero."""
    lam = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, 1.0)
    lam[lam < EIGENVALUE_CLAMP] = 0.0
    lam = lam[lam > 0.0]
    return float(-np.dot(lam, np.log2(lam)))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A validated density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix must be Hermitian")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix must have unit trace, got {trace:.6g}")
        if float(np.linalg.eigvalsh(m)[0]) < -PSD_TOL:
            raise ValueError("density matrix must be positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy -Tr[rho log2 rho] in bits.

    Accepts a DensityOperator or a raw matrix; raw input is validated first.
    Eigenvalues are clamped to [0, 1], with values below 1e-12 treated as 0.
    """
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    return _spectrum_entropy(np.linalg.eigvalsh(rho.matrix))


@dataclass(frozen=True, eq=False)
class BipartitePureState:
    """Pure state of a bipartite system A x B.

    Amplitudes are stored as a flat vector with the A index major:
    ``amplitudes[a * dimB + b]``.
    """

    dimA: int
    dimB: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dimA < 1 or self.dimB < 1:
            raise ValueError("subsystem dimensions must be positive")
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size != self.dimA * self.dimB:
            raise ValueError(
                f"expected {self.dimA * self.dimB} amplitudes, got {v.size}")
        if abs(float(np.vdot(v, v).real) - 1.0) > NORM_TOL:
            raise ValueError("amplitudes must have unit norm")
        v.flags.writeable = False
        object.__setattr__(self, "amplitudes", v)

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to a dimA x dimB coefficient matrix."""
        return self.amplitudes.reshape(self.dimA, self.dimB)


def partial_trace(state: BipartitePureState, keep: str) -> DensityOperator:
    """Reduced density operator of a bipartite pure state.

    ``keep`` selects the retained subsystem, "A" or "B".  Both reductions
    share the same nonzero spectrum (the squared Schmidt coefficients).
    """
    m = state.as_matrix()
    if keep == "A":
        return DensityOperator(m @ m.conj().T)
    if keep == "B":
        return DensityOperator(m.T @ m.conj())
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace_dense(matrix: np.ndarray, dims, keep) -> np.ndarray:
    """Partial trace of a dense operator on a tensor product of subsystems.

    ``dims`` lists the subsystem dimensions in tensor order; ``keep`` lists
    the (ascending) indices of the subsystems to retain.
    """
    dims = tuple(int(d) for d in dims)
    keep = tuple(sorted({int(i) for i in keep}))
    n = len(dims)
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"keep indices must lie in [0, {n}), got {keep}")
    total = int(np.prod(dims))
    m = np.asarray(matrix)
    if m.shape != (total, total):
        raise ValueError(f"operator shape {m.shape} does not match dims {dims}")
    t = m.reshape(dims + dims)
    for axis in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=axis, axis2=axis + t.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite ensemble of bipartite pure states with source probabilities."""

    states: tuple
    probs: np.ndarray

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("ensemble needs at least one state")
        dimA, dimB = states[0].dimA, states[0].dimB
        if any(s.dimA != dimA or s.dimB != dimB for s in states):
            raise ValueError("all ensemble states must share (dimA, dimB)")
        p = np.array(self.probs, dtype=float).ravel()
        if p.size != len(states):
            raise ValueError("need exactly one probability per state")
        if p.min() < 0.0:
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities must sum to 1, got {p.sum():.12g}")
        p.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", p)
        reduced = np.stack([s.as_matrix().T @ s.as_matrix().conj() for s in states])
        reduced.flags.writeable = False
        object.__setattr__(self, "_reduced_b", reduced)

    @property
    def m(self) -> int:
        return len(self.states)

    @property
    def dimA(self) -> int:
        return self.states[0].dimA

    @property
    def dimB(self) -> int:
        return self.states[0].dimB

    @property
    def reduced_b(self) -> np.ndarray:
        """Stacked reduced states on B, shape (m, dimB, dimB)."""
        return self._reduced_b


@dataclass(frozen=True)
class EnsembleStats:
    """Entropic summary of an ensemble.

    S: entropy of the average reduced state on B.
    Sbar: probability-weighted mean entropy of the individual reduced states.
    chi: Holevo quantity S - Sbar.
    H: Shannon entropy of the source probabilities.
    """

    S: float
    Sbar: float
    chi: float
    H: float


def ensemble_stats(ensemble: Ensemble) -> EnsembleStats:
    """Compute S, Sbar, chi and H for an ensemble (all in bits)."""
    average = np.einsum("i,iab->ab", ensemble.probs, ensemble.reduced_b)
    S = _spectrum_entropy(np.linalg.eigvalsh(average))
    spectra = np.linalg.eigvalsh(ensemble.reduced_b)
    Sbar = float(np.dot(ensemble.probs,
                        [_spectrum_entropy(row) for row in spectra]))
    return EnsembleStats(S=S, Sbar=Sbar, chi=S - Sbar,
                         H=shannon_entropy(ensemble.probs))

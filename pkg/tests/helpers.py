"""Shared test utilities: seeded random instances and brute-force oracles."""

from dataclasses import dataclass

import numpy as np

from tradeoff.profiles import ClassicalChannel
from tradeoff.states import (
    BipartitePureState,
    Ensemble,
    partial_trace_dense,
    shannon_entropy,
    von_neumann_entropy,
)


def random_pure_state(rng: np.random.Generator, dimA: int,
                      dimB: int) -> BipartitePureState:
    v = rng.normal(size=dimA * dimB) + 1j * rng.normal(size=dimA * dimB)
    return BipartitePureState(dimA, dimB, v / np.linalg.norm(v))


def random_ensemble(rng: np.random.Generator, m: int, dimA: int,
                    dimB: int) -> Ensemble:
    states = tuple(random_pure_state(rng, dimA, dimB) for _ in range(m))
    return Ensemble(states=states, probs=rng.dirichlet(np.ones(m)))


def random_channel(rng: np.random.Generator, m: int, k: int) -> ClassicalChannel:
    return ClassicalChannel(rng.dirichlet(np.ones(k), size=m))


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def cq_state_dense(probs: np.ndarray, blocks: list) -> np.ndarray:
    """Classical-quantum state sum_i p_i |i><i| (x) rho_i as one dense matrix."""
    m = len(probs)
    d = blocks[0].shape[0]
    out = np.zeros((m * d, m * d), dtype=complex)
    for i, (p, rho) in enumerate(zip(probs, blocks)):
        out[i * d:(i + 1) * d, i * d:(i + 1) * d] = p * rho
    return out


def conditional_mutual_information_xa_b(probs: np.ndarray, blocks: list,
                                        dimA: int, dimB: int) -> float:
    """S(X:A|B) of sum_i p_i |i><i|_X (x) rho_i^{AB}, via dense partial traces."""
    m = len(probs)
    xab = cq_state_dense(probs, blocks)
    dims = (m, dimA, dimB)
    xb = partial_trace_dense(xab, dims, keep=(0, 2))
    ab = partial_trace_dense(xab, dims, keep=(1, 2))
    b = partial_trace_dense(xab, dims, keep=(2,))
    return (von_neumann_entropy(xb) + von_neumann_entropy(ab)
            - von_neumann_entropy(b) - von_neumann_entropy(xab))


@dataclass(frozen=True)
class ChannelGridOracle:
    """Exhaustive 2-input/3-output channel grid evaluated on one ensemble.

    Every channel on a simplex grid of the given step contributes one
    (SXC, SBgC, SXBC) triple; curve queries take the cheapest SBgC among
    channels meeting the rate constraint.  Values are upper bounds on the
    true curves with error set by the grid step.
    """

    SXC: np.ndarray
    SBgC: np.ndarray
    SXBC: np.ndarray

    def qct_value(self, R: float) -> float:
        return float(self.SBgC[self.SXC <= R + 1e-9].min())

    def rsp_value(self, R: float) -> float:
        return float(self.SBgC[self.SXBC <= R + 1e-9].min())


def brute_force_two_state(ensemble: Ensemble, step: float = 0.02,
                          block: int = 8192) -> ChannelGridOracle:
    if ensemble.m != 2:
        raise ValueError("the grid oracle is built for 2-state ensembles")
    p = ensemble.probs
    phis = ensemble.reduced_b
    sbar = float(sum(pi * von_neumann_entropy(phi)
                     for pi, phi in zip(p, phis)))
    n = int(round(1.0 / step))
    rows = np.array([(a * step, b * step, 1.0 - (a + b) * step)
                     for a in range(n + 1) for b in range(n + 1 - a)])
    M = len(rows)
    idx_i, idx_j = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
    idx_i, idx_j = idx_i.ravel(), idx_j.ravel()
    Hp = shannon_entropy(p)
    sxc_parts, sbgc_parts = [], []
    for s in range(0, M * M, block):
        ii, jj = idx_i[s:s + block], idx_j[s:s + block]
        ch = np.stack([rows[ii], rows[jj]], axis=1)
        joint = p[None, :, None] * ch
        q = joint.sum(axis=1)
        hq = -np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0).sum(axis=1)
        hj = -np.where(joint > 0,
                       joint * np.log2(np.where(joint > 0, joint, 1.0)),
                       0.0).sum(axis=(1, 2))
        mix = np.einsum("nij,iab->njab", joint, phis)
        qs = np.where(q > 1e-14, q, 1.0)
        lam = np.clip(np.linalg.eigvalsh(mix / qs[:, :, None, None]), 0.0, 1.0)
        ent = -np.where(lam > 1e-12,
                        lam * np.log2(np.where(lam > 0, lam, 1.0)),
                        0.0).sum(axis=2)
        sxc_parts.append(Hp + hq - hj)
        sbgc_parts.append((np.where(q > 1e-14, q, 0.0) * ent).sum(axis=1))
    sxc = np.concatenate(sxc_parts)
    sbgc = np.concatenate(sbgc_parts)
    return ChannelGridOracle(SXC=sxc, SBgC=sbgc, SXBC=sxc + sbgc - sbar)

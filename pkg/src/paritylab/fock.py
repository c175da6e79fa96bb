"""Brute-force many-body oracle on small chains.

Builds the fixed-number Fock sector explicitly, finds the many-body
ground state, and evaluates subsystem entropy and number fluctuations
without ever using the free-fermion structure.  Serves as an
independent cross-check of the correlation-matrix route; sizes are
capped since the sector dimension grows combinatorially.
"""

from __future__ import annotations

import dataclasses
from itertools import combinations

import numpy as np

from .chains import ChainSpec, build_hamiltonian
from .observables import Region
from .spectral import DegenerateFermiLevelError

MAX_SITES = 14
_GAP_ATOL = 1e-10


@dataclasses.dataclass(frozen=True)
class FockGroundState:
    """Ground state of one filling sector in the occupation basis.

    ``basis`` holds one bitmask per sector state (bit j-1 set when site
    j is occupied, sites ordered 1..n in the fermion ordering), and
    ``amplitudes`` the ground-state vector over that basis.
    """

    spec: ChainSpec
    n_particles: int
    energy: float
    gap: float
    basis: np.ndarray
    amplitudes: np.ndarray


def _sector_basis(n_sites: int, n_particles: int) -> np.ndarray:
    states = [sum(1 << i for i in occ)
              for occ in combinations(range(n_sites), n_particles)]
    return np.array(sorted(states), dtype=np.int64)


def _hop_phase(state: int, a: int, b: int) -> int:
    # phase of c^dag_a c_b between number-ordered states: occupied count
    # strictly between the two modes (0-based mode indices)
    lo, hi = (a, b) if a < b else (b, a)
    mask = ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)
    return -1 if bin(state & mask).count("1") % 2 else 1


def ground_state_fock(spec: ChainSpec, n_particles: int) -> FockGroundState:
    """Exact ground state of the hopping chain at fixed particle number.

    Raises
    ------
    DegenerateFermiLevelError
        If the sector ground state is degenerate within 1e-10.
    """
    n = spec.n_sites
    if n > MAX_SITES:
        raise ValueError(f"brute-force sector limited to {MAX_SITES} sites, got {n}")
    if not 0 <= n_particles <= n:
        raise ValueError(f"n_particles must be in 0..{n}")
    basis = _sector_basis(n, n_particles)
    index = {int(s): i for i, s in enumerate(basis)}
    dim = basis.size
    h1 = build_hamiltonian(spec)

    h = np.zeros((dim, dim))
    hops = [(i, j, h1[i, j]) for i in range(n) for j in range(n)
            if i != j and h1[i, j] != 0.0]
    for col, state in enumerate(map(int, basis)):
        for a, b, t in hops:
            if state >> b & 1 and not state >> a & 1:
                new = state & ~(1 << b) | (1 << a)
                h[index[new], col] += t * _hop_phase(state, a, b)

    if dim == 1:
        return FockGroundState(spec, n_particles, float(h[0, 0]), np.inf,
                               basis, np.ones(1))
    energies, vectors = np.linalg.eigh(h)
    gap = float(energies[1] - energies[0])
    if gap < _GAP_ATOL:
        raise DegenerateFermiLevelError(
            f"sector ground state degenerate (gap {gap:.3e})"
        )
    return FockGroundState(spec, n_particles, float(energies[0]), gap,
                           basis, vectors[:, 0])


def reduced_density_matrix(state: FockGroundState, region: Region) -> np.ndarray:
    """Trace the ground state down to a contiguous region.

    Amplitudes are arranged into a (region configurations) x (rest
    configurations) matrix; moving the sites left of the region past the
    region modes contributes (-1)^(n_left * n_region) per state, and
    rho_A = M M^T.
    """
    n = state.spec.n_sites
    if region.last > n:
        raise ValueError(f"region ends at {region.last}, chain has {n} sites")
    region_mask = ((1 << region.length) - 1) << (region.first - 1)
    left_mask = (1 << (region.first - 1)) - 1

    region_bits = sorted({int(s) & region_mask for s in state.basis})
    rest_bits = sorted({int(s) & ~region_mask for s in state.basis})
    r_index = {b: i for i, b in enumerate(region_bits)}
    c_index = {b: i for i, b in enumerate(rest_bits)}

    m = np.zeros((len(region_bits), len(rest_bits)))
    for amp, s in zip(state.amplitudes, map(int, state.basis)):
        n_reg = bin(s & region_mask).count("1")
        n_left = bin(s & left_mask).count("1")
        sign = -1.0 if (n_reg * n_left) % 2 else 1.0
        m[r_index[s & region_mask], c_index[s & ~region_mask]] += sign * amp
    return m @ m.T


def fock_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy of a density matrix, tolerant to 1e-12 negatives."""
    p = np.linalg.eigvalsh(rho)
    if p.min() < -1e-10:
        raise ValueError(f"density matrix has negative weight {p.min():.3e}")
    p = p[p > 1e-16]
    return float(-np.sum(p * np.log(p)))


def fock_fluctuation(state: FockGroundState, region: Region) -> float:
    """Number variance of a region, directly over occupation bitmasks."""
    region_mask = ((1 << region.length) - 1) << (region.first - 1)
    counts = np.array([bin(int(s) & region_mask).count("1") for s in state.basis])
    w = state.amplitudes**2
    mean = float(w @ counts)
    return float(w @ counts**2) - mean**2


def fock_region_observables(spec: ChainSpec, n_particles: int,
                            region: Region) -> tuple[float, float]:
    """Entropy and number fluctuation of a region by brute force."""
    state = ground_state_fock(spec, n_particles)
    rho = reduced_density_matrix(state, region)
    return fock_entropy(rho), fock_fluctuation(state, region)

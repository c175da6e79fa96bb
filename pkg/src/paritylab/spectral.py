"""Single-particle diagonalization and ground-state correlation matrices.

The many-body ground state at fixed particle number fills the lowest
single-particle orbitals; every observable used here derives from the
two-point function G_ij = <c_i^dag c_j> restricted to a subsystem.  The
Fermi level must sit in a gap for the filled sea to be unique, so filling
a degenerate level is treated as an error rather than resolved by an
arbitrary tie-break.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .chains import ChainSpec, build_hamiltonian

# Relative gap below which the Fermi level counts as degenerate.
DEGENERACY_RTOL = 1e-12


class DegenerateFermiLevelError(ValueError):
    """Requested filling would cut through a degenerate single-particle level."""


@dataclasses.dataclass(frozen=True)
class SpectralData:
    """Eigenpairs of one chain Hamiltonian.

    Attributes
    ----------
    spec : ChainSpec
        The chain that was diagonalized.
    energies : ndarray, shape (n,)
        Eigenvalues in ascending order.
    orbitals : ndarray, shape (n, n)
        Orthonormal eigenvectors, column k belonging to energies[k].
    """

    spec: ChainSpec
    energies: np.ndarray
    orbitals: np.ndarray


def diagonalize(spec: ChainSpec) -> SpectralData:
    """Diagonalize the single-particle Hamiltonian of a chain.

    Returns
    -------
    SpectralData
        Ascending eigenvalues and orthonormal orbitals.
    """
    h = build_hamiltonian(spec)
    try:
        energies, orbitals = np.linalg.eigh(h)
    except np.linalg.LinAlgError as err:
        raise np.linalg.LinAlgError(
            f"eigensolver failed on {spec.n_sites}x{spec.n_sites} chain Hamiltonian: {err}"
        ) from err
    return SpectralData(spec=spec, energies=energies, orbitals=orbitals)


def occupy(spectral: SpectralData, n_particles: int) -> np.ndarray:
    """Columns of the filled Fermi sea at fixed particle number.

    Raises
    ------
    DegenerateFermiLevelError
        If the gap between the highest filled and lowest empty level is
        below DEGENERACY_RTOL times the spectral bandwidth, in which case
        the filled sea is not unique.
    """
    n = spectral.energies.size
    if not 0 <= n_particles <= n:
        raise ValueError(f"n_particles must be in 0..{n}, got {n_particles}")
    if 0 < n_particles < n:
        gap = spectral.energies[n_particles] - spectral.energies[n_particles - 1]
        bandwidth = spectral.energies[-1] - spectral.energies[0]
        if gap < DEGENERACY_RTOL * max(bandwidth, 1.0):
            raise DegenerateFermiLevelError(
                f"levels {n_particles - 1} and {n_particles} degenerate "
                f"(gap {gap:.3e}); filling {n_particles} of {n} is ambiguous"
            )
    return spectral.orbitals[:, :n_particles]


def correlation_matrix(spectral: SpectralData, n_particles: int) -> np.ndarray:
    """Ground-state two-point function G_ij = <c_i^dag c_j>.

    With real orthonormal orbitals phi_k this is the projector
    G = sum_{k filled} phi_k phi_k^T onto the Fermi sea; G is symmetric
    with eigenvalues 0 and 1.

    Returns
    -------
    ndarray, shape (n, n)
    """
    filled = occupy(spectral, n_particles)
    return filled @ filled.T


def half_filling(spec: ChainSpec) -> int:
    """Particle number at half filling; requires an even number of sites."""
    if spec.n_sites % 2 != 0:
        raise ValueError(f"half filling needs even n_sites, got {spec.n_sites}")
    return spec.n_sites // 2

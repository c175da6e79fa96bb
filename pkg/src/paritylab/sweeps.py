"""Grid drivers: from defect geometries to parity-paired measurements.

Every routine here builds chains at half filling, measures subsystem
entropy and number fluctuation, and labels the results by subsystem
parity.  The even member of a pair has an even subsystem with the defect
pattern at its border; the odd member shifts pattern and border together
by one site.  Grids are expressed as ladders of total sizes, rounded to
whatever congruence the geometry needs (even subsystems for the even
member, rings of size 2 mod 4 to keep the Fermi level non-degenerate).
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .chains import (ChainSpec, alternating_block, dot_impurity, parity_pair,
                     place_pattern, single_impurity)
from .fitting import ScalingSample
from .observables import Region, region_observables
from .spectral import correlation_matrix, diagonalize, half_filling

PATTERN_KINDS = ("single", "dot", "alternating")


def measure(spec: ChainSpec, region_len: int) -> tuple[float, float]:
    """Entropy and number fluctuation of the first region_len sites at
    half filling."""
    g = correlation_matrix(diagonalize(spec), half_filling(spec))
    obs = region_observables(g, Region(1, region_len))
    return obs.entropy, obs.fluctuation


def border_pattern(kind: str, ratio: float, region_len: int, n_imp: int = 1):
    """Defect pattern anchored at the border bond of a region.

    Single defects and dots sit on the border bond itself (the dot site
    just outside the region); alternating blocks are centered on it, so
    their bond count must be odd.
    """
    if kind == "single":
        return single_impurity(ratio, region_len)
    if kind == "dot":
        return dot_impurity(ratio, region_len)
    if kind == "alternating":
        if n_imp % 2 == 0:
            raise ValueError(f"centered alternating block needs odd n_imp, got {n_imp}")
        anchor = region_len - (n_imp - 1)
        if anchor < 1:
            raise ValueError(f"block of {n_imp} bonds does not fit left of {region_len}")
        return alternating_block(ratio, anchor, n_imp)
    raise ValueError(f"kind must be one of {PATTERN_KINDS}, got {kind!r}")


def pair_samples(kind: str, ratio: float, n_sites: int, region_len: int,
                 boundary: str = "open", n_imp: int = 1) -> tuple[ScalingSample, ScalingSample]:
    """Measure the even/odd pair for one geometry.

    region_len must be even; the odd partner measures region_len + 1
    sites with the whole pattern moved one bond to the right, on a chain
    of the same size.
    """
    pattern = border_pattern(kind, ratio, region_len, n_imp)
    base = place_pattern(pattern, n_sites, boundary)
    even_spec, odd_spec = parity_pair(base, region_len)
    out = []
    for parity, spec, ell in (("even", even_spec, region_len),
                              ("odd", odd_spec, region_len + 1)):
        s, f = measure(spec, ell)
        out.append(ScalingSample(boundary=boundary, ratio=ratio, n_sites=n_sites,
                                 region_len=ell, parity=parity,
                                 entropy=s, fluctuation=f))
    return out[0], out[1]


def size_ladder(lo: int, hi: int, step: int, offset: int = 0,
                factor: float = 1.15) -> list[int]:
    """Geometric ladder of sizes rounded onto step * k + offset.

    Rounds each rung to the congruence class, deduplicates and keeps the
    result inside [lo, hi]."""
    if lo < 2 or hi < lo:
        raise ValueError(f"bad ladder range [{lo}, {hi}]")
    if factor <= 1.0:
        raise ValueError(f"ladder factor must exceed 1, got {factor}")
    out = []
    x = float(lo)
    while x <= hi * (1.0 + 1e-9):
        n = step * round((x - offset) / step) + offset
        if lo <= n <= hi and (not out or n > out[-1]):
            out.append(int(n))
        x *= factor
    return out


def boundary_sweep(kind: str, ratio: float, sizes: Sequence[int], aspect_den: int = 10,
                   n_imp: int = 1, parallelism: int = 1) -> list[ScalingSample]:
    """Open-chain pair measurements over a ladder of total sizes.

    The even subsystem takes the nearest even integer to n_sites/aspect_den.
    Results come back sorted by (n_sites, parity).
    """
    tasks = []
    for n_sites in sizes:
        ell = 2 * round(n_sites / (2 * aspect_den))
        tasks.append((kind, ratio, n_sites, ell, "open", n_imp))
    pairs = _run(pair_samples, tasks, parallelism)
    return [s for pair in pairs for s in pair]


def bulk_sweep(ratio: float, sizes: Sequence[int], aspect_den: int = 10,
               parallelism: int = 1) -> list[ScalingSample]:
    """Ring pair measurements with a single defect bounding the region.

    Sizes must be 2 mod 4 so the half-filled ring keeps a gap at the
    Fermi level."""
    tasks = []
    for n_sites in sizes:
        if n_sites % 4 != 2:
            raise ValueError(f"ring size must be 2 mod 4, got {n_sites}")
        ell = 2 * round(n_sites / (2 * aspect_den))
        tasks.append(("single", ratio, n_sites, ell, "periodic", 1))
    pairs = _run(pair_samples, tasks, parallelism)
    return [s for pair in pairs for s in pair]


def delta_pair(kind: str, ratio: float, n_sites: int, region_len: int,
               n_imp: int = 1) -> tuple[float, float]:
    """Even-minus-odd differences (entropy, fluctuation) for one geometry."""
    even, odd = pair_samples(kind, ratio, n_sites, region_len, "open", n_imp)
    return even.entropy - odd.entropy, even.fluctuation - odd.fluctuation


def splitting_table(kind: str, ratios: Sequence[float], sizes: Sequence[int],
                    aspect_num: int = 1, aspect_den: int = 2, n_imp: int = 1,
                    parallelism: int = 1) -> dict[tuple[float, int], tuple[float, float]]:
    """Parity splittings on a (ratio, size) grid at fixed subsystem aspect.

    Every size must make aspect_num * n_sites / aspect_den an even
    integer.  Keys are (ratio, n_sites); values (delta S, delta F).
    """
    tasks = []
    keys = []
    for ratio in ratios:
        for n_sites in sizes:
            ell2 = aspect_num * n_sites
            if ell2 % (2 * aspect_den) != 0:
                raise ValueError(
                    f"size {n_sites} gives no even subsystem at aspect "
                    f"{aspect_num}/{aspect_den}"
                )
            tasks.append((kind, ratio, n_sites, ell2 // aspect_den, n_imp))
            keys.append((ratio, n_sites))
    values = _run(delta_pair, tasks, parallelism)
    return dict(zip(keys, values))


def dot_series(ratio: float, sizes: Sequence[int], parallelism: int = 1
               ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Half-chain observables around a centered weak dot, by parity.

    The even member is (n_sites, ell = n_sites/2) with the dot bonds at
    (ell, ell + 1); the odd member enlarges chain and subsystem by one
    site each, keeping the geometry of the cut.  Both members of a pair
    share the node ln(n_sites + 1).

    Returns
    -------
    (nodes, entropy_even, entropy_odd, fluct_even, fluct_odd)
        Arrays over the size ladder; nodes hold ln(n_sites + 1).
    """
    tasks = []
    for n_sites in sizes:
        if n_sites % 4 != 0:
            raise ValueError(f"dot series needs sizes 0 mod 4, got {n_sites}")
        ell = n_sites // 2
        tasks.append(("dot", ratio, n_sites, ell, "open", 1))
    pairs = _run(_pair_for_dot, tasks, parallelism)
    nodes = np.log(np.asarray(sizes, dtype=float) + 1.0)
    se = np.array([p[0].entropy for p in pairs])
    so = np.array([p[1].entropy for p in pairs])
    fe = np.array([p[0].fluctuation for p in pairs])
    fo = np.array([p[1].fluctuation for p in pairs])
    return nodes, se, so, fe, fo


def _pair_for_dot(kind, ratio, n_sites, ell, boundary, n_imp):
    # odd member of a dot pair lives on a chain two sites longer
    even, _ = pair_samples(kind, ratio, n_sites, ell, boundary, n_imp)
    _, odd = pair_samples(kind, ratio, n_sites + 2, ell, boundary, n_imp)
    return even, odd


def resolve_parallelism(parallelism: int) -> int:
    """Worker count, overridable through the LAB_THREADS variable."""
    env = os.environ.get("LAB_THREADS")
    if env is not None:
        try:
            parallelism = int(env)
        except ValueError as err:
            raise ValueError(f"LAB_THREADS must be an integer, got {env!r}") from err
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    return parallelism


def _run(fn: Callable, tasks: Iterable[tuple], parallelism: int) -> list:
    tasks = list(tasks)
    parallelism = resolve_parallelism(parallelism)
    if parallelism == 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]

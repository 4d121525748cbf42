"""Gaussian covariance algebra for quadrature fluctuations.

Conventions used throughout: hbar = 1, quadratures x = (a + a^+)/sqrt(2),
y = (a - a^+)/(i sqrt(2)), so each vacuum quadrature has variance 1/2 and
the single-mode symplectic form is J = [[0, 1], [-1, 0]].

The separability test for a two-mode reduction is the Simon determinant
functional; an independent verdict from the smallest symplectic eigenvalue
of the partially transposed covariance is kept alongside it so the two
routes can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from .errors import SymmetryError, UnphysicalCovarianceError

__all__ = [
    "VACUUM_VARIANCE",
    "CovarianceMatrix",
    "BlockDecomposition",
    "SphResult",
    "symplectic_form",
    "symplectic_eigenvalues",
    "uncertainty_check",
    "extract_blocks",
    "sph_lambda",
    "ppt_oracle",
    "min_ppt_symplectic_eigenvalue",
    "vacuum_covariance",
    "thermal_covariance",
    "two_mode_squeezed_covariance",
    "random_two_mode_covariance",
]

VACUUM_VARIANCE = 0.5

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Quadrature offsets of the cavity pairs inside the 12-dim ordering
# (mechanics 0-3, optics 4-7, microwave 8-11), mode layout (x, y) each.
PAIR_OFFSETS = {
    "MC1-MC2": (8, 10),
    "OC1-OC2": (4, 6),
}

_SYM_TOL = 1e-12
_PHYS_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric covariance of an even number of quadratures."""

    entries: NDArray[np.float64]

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise SymmetryError(f"covariance must be square, got shape {mat.shape}")
        if mat.shape[0] % 2:
            raise SymmetryError(f"covariance dimension must be even, got {mat.shape[0]}")
        scale = max(np.abs(mat).max(), 1.0)
        if np.abs(mat - mat.T).max() > _SYM_TOL * scale:
            raise SymmetryError("covariance is not symmetric within tolerance")
        object.__setattr__(self, "entries", (mat + mat.T) / 2.0)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_modes(self) -> int:
        return self.dim // 2


@dataclass(frozen=True)
class BlockDecomposition:
    """2x2 blocks A, B, C of a two-mode covariance [[A, C], [C^T, B]]."""

    a: NDArray[np.float64]
    b: NDArray[np.float64]
    c: NDArray[np.float64]

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            block = getattr(self, name)
            scale = max(float(np.abs(block).max()), 1.0)
            if float(np.abs(block - block.T).max()) > _SYM_TOL * scale:
                raise SymmetryError(f"self-block {name.upper()} is not symmetric")

    def reassemble(self) -> NDArray[np.float64]:
        return np.block([[self.a, self.c], [self.c.T, self.b]])


@dataclass(frozen=True)
class SphResult:
    """Outcome of the determinant-based separability test.

    ``stable``: whether the generating dynamics was stable; pure-algebra
    evaluations report True.  ``lambda_sph`` is NaN when no steady state
    exists.
    """

    lambda_sph: float
    entangled: bool
    det_a: float
    det_b: float
    det_c: float
    stable: bool = True

    def with_stability(self, stable: bool) -> "SphResult":
        return replace(self, stable=stable)


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form for ``n_modes`` (x, y) pairs."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = J2
    return omega


def _as_array(cov: CovarianceMatrix | NDArray[np.float64]) -> NDArray[np.float64]:
    if isinstance(cov, CovarianceMatrix):
        return cov.entries
    return CovarianceMatrix(np.asarray(cov, dtype=float)).entries


def symplectic_eigenvalues(cov: CovarianceMatrix | NDArray[np.float64]) -> NDArray[np.float64]:
    """Symplectic spectrum of a covariance, ascending, one value per mode.

    The eigenvalues of Omega V come in pairs +/- i nu; the moduli therefore
    appear twice each and every second sorted value is kept.
    """
    mat = _as_array(cov)
    omega = symplectic_form(mat.shape[0] // 2)
    moduli = np.sort(np.abs(np.linalg.eigvals(omega @ mat)))
    return moduli[::2]


def uncertainty_check(cov: CovarianceMatrix | NDArray[np.float64], tol: float = _PHYS_TOL) -> bool:
    """True when every symplectic eigenvalue is >= 1/2 - tol."""
    return bool(symplectic_eigenvalues(cov).min() >= VACUUM_VARIANCE - tol)


def extract_blocks(
    cov: CovarianceMatrix | NDArray[np.float64],
    pair: str = "MC1-MC2",
) -> BlockDecomposition:
    """Slice the 2x2 blocks of a mode pair out of a larger covariance.

    ``pair`` selects a named cavity pair from the 12-dim ordering; a plain
    4x4 covariance is decomposed directly.
    """
    mat = _as_array(cov)
    if mat.shape[0] == 4:
        i, j = 0, 2
    else:
        try:
            i, j = PAIR_OFFSETS[pair]
        except KeyError:
            raise KeyError(f"unknown mode pair {pair!r}; expected one of {sorted(PAIR_OFFSETS)}")
        if mat.shape[0] < j + 2:
            raise SymmetryError(f"covariance dimension {mat.shape[0]} too small for pair {pair!r}")
    return BlockDecomposition(
        a=mat[i : i + 2, i : i + 2].copy(),
        b=mat[j : j + 2, j : j + 2].copy(),
        c=mat[i : i + 2, j : j + 2].copy(),
    )


def sph_lambda(blocks: BlockDecomposition) -> SphResult:
    """Simon separability functional of a two-mode covariance.

    lambda = det A det B + (1/4 - |det C|)^2 - tr(A J C J B J C^T J)
             - (det A + det B)/4

    Physical states are separable iff lambda >= 0, so a negative value
    certifies entanglement.  The interference term is the full quartic
    invariant; truncations of it break the equivalence with the PPT
    verdict for strongly squeezed states.
    """
    det_a = float(np.linalg.det(blocks.a))
    det_b = float(np.linalg.det(blocks.b))
    det_c = float(np.linalg.det(blocks.c))
    cross = float(np.trace(blocks.a @ J2 @ blocks.c @ J2 @ blocks.b @ J2 @ blocks.c.T @ J2))
    lam = det_a * det_b + (0.25 - abs(det_c)) ** 2 - cross - 0.25 * (det_a + det_b)
    return SphResult(
        lambda_sph=lam,
        entangled=bool(lam < 0.0),
        det_a=det_a,
        det_b=det_b,
        det_c=det_c,
    )


def min_ppt_symplectic_eigenvalue(cov: CovarianceMatrix | NDArray[np.float64]) -> float:
    """Smallest symplectic eigenvalue after partial transposition of mode 2."""
    mat = _as_array(cov)
    if mat.shape[0] != 4:
        raise SymmetryError(f"PPT oracle expects a two-mode covariance, got dim {mat.shape[0]}")
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return float(symplectic_eigenvalues(flip @ mat @ flip).min())


def ppt_oracle(cov: CovarianceMatrix | NDArray[np.float64]) -> bool:
    """Independent entanglement verdict from the PPT symplectic spectrum.

    Raises UnphysicalCovarianceError for inputs violating the uncertainty
    principle, for which the question is meaningless.
    """
    mat = _as_array(cov)
    if not uncertainty_check(mat):
        raise UnphysicalCovarianceError(
            "covariance violates the uncertainty principle; PPT verdict undefined"
        )
    return min_ppt_symplectic_eigenvalue(mat) < VACUUM_VARIANCE


def vacuum_covariance(n_modes: int) -> NDArray[np.float64]:
    return VACUUM_VARIANCE * np.eye(2 * n_modes)


def thermal_covariance(occupations) -> NDArray[np.float64]:
    """Product thermal state, variance n + 1/2 per quadrature."""
    diag = []
    for n in np.atleast_1d(occupations):
        diag += [n + VACUUM_VARIANCE] * 2
    return np.diag(np.asarray(diag, dtype=float))


def two_mode_squeezed_covariance(r: float) -> NDArray[np.float64]:
    """Two-mode squeezed vacuum with squeezing parameter r."""
    ch = np.cosh(2.0 * r) * VACUUM_VARIANCE
    sh = np.sinh(2.0 * r) * VACUUM_VARIANCE
    a = ch * np.eye(2)
    c = sh * np.diag([1.0, -1.0])
    return np.block([[a, c], [c.T, a]])


def _rotation(theta: float) -> NDArray[np.float64]:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def _two_mode_squeezer(r: float) -> NDArray[np.float64]:
    ch, sh = np.cosh(r), np.sinh(r)
    z = np.diag([1.0, -1.0])
    return np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])


def random_two_mode_covariance(rng: np.random.Generator) -> NDArray[np.float64]:
    """Random physical two-mode covariance.

    A product thermal state is conjugated by a random symplectic built from
    phase rotations, a two-mode squeezer and single-mode squeezers.  The
    construction is symplectic by composition, so the result satisfies the
    uncertainty principle exactly; squeezing and occupations are drawn wide
    enough to cover clearly separable and clearly entangled states.
    """
    n1, n2 = rng.uniform(0.0, 2.0, size=2)
    base = thermal_covariance([n1, n2])

    def rot_pair():
        t1, t2 = rng.uniform(0.0, 2.0 * np.pi, size=2)
        s = np.zeros((4, 4))
        s[:2, :2] = _rotation(t1)
        s[2:, 2:] = _rotation(t2)
        return s

    def local_squeeze():
        r1, r2 = rng.uniform(-0.8, 0.8, size=2)
        return np.diag([np.exp(r1), np.exp(-r1), np.exp(r2), np.exp(-r2)])

    s = rot_pair() @ _two_mode_squeezer(rng.uniform(0.0, 1.2)) @ local_squeeze() @ rot_pair()
    cov = s @ base @ s.T
    # matmul round-off leaves ulp-level asymmetry; block reassembly must
    # reproduce the source exactly, so symmetrize here
    return (cov + cov.T) / 2.0

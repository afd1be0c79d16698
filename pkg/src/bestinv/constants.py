import math

#: Root of a^2 - 4a + 8/3 = 0 in (0, 1).
ALPHA = 2.0 - 2.0 / math.sqrt(3.0)

TOL_ORTH = 1e-10
TOL_CFG = 1e-9
M_NONPOS_TOL = 1e-12


def lambda_floor(n: int) -> float:
    """Guaranteed lower bound alpha/n on the best pair's smaller Gram eigenvalue."""
    return ALPHA / n


def bound(n: int) -> float:
    """Upper bound sqrt(n/alpha) on the best pair's inverse spectral norm."""
    return math.sqrt(n / ALPHA)

"""
Derivation of the shared family parameters (K, s, eps, chi) from genus and
Chern data.
"""

from fractions import Fraction

import numpy as np

from src.models.geometry import FamilyParams, curvature_for_genus
from src.utils.errors import DegenerateParameterError


def twist(genus: int, chern_k: int) -> Fraction:
    """Exact s = 2k/|chi| for genus != 1 and s = k on the torus."""
    if genus == 1:
        return Fraction(chern_k)
    return Fraction(2 * chern_k, abs(2 - 2 * genus))


def derive_params(genus: int, chern_k: int, A: int = -1, product: bool = False) -> FamilyParams:
    """
    Build validated FamilyParams.

    Args:
        genus: Genus of the base curve (>= 0)
        chern_k: Chern number k (>= 0); k = 0 only with product=True
        A: Branch of the f-normalization, one of -1, 0, 1
        product: Request the k = 0 product-surface family

    Returns:
        FamilyParams satisfying every invariant

    Raises:
        DegenerateParameterError: For impossible combinations
    """
    if genus < 0 or chern_k < 0:
        raise DegenerateParameterError("genus and chern_k must be non-negative")
    if A not in (-1, 0, 1):
        raise DegenerateParameterError(f"Branch A must be -1, 0 or 1, got {A}")
    if product:
        if chern_k != 0:
            raise DegenerateParameterError("The product family has chern_k = 0")
        if genus < 2:
            raise DegenerateParameterError("The product family needs genus >= 2")
    elif chern_k == 0:
        raise DegenerateParameterError("chern_k = 0 gives s = 0; only the product family allows it")

    K = curvature_for_genus(genus)
    s = twist(genus, chern_k)
    return FamilyParams(
        genus=genus,
        chern_k=chern_k,
        K=K,
        s=float(s),
        s_numerator=s.numerator,
        s_denominator=s.denominator,
        A=A,
        eps=-int(np.sign(K * A)),
        euler_chi=2 - 2 * genus,
        product=product,
    )

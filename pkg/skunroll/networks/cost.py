from fractions import Fraction

from skunroll.networks.configuration import UnrollConfig


def operator_cost(cfg: UnrollConfig) -> Fraction:
    """Full operator equivalents charged by one forward pass: sum over layers of 2 * (1/m) * (1/factor_k).

    Exact as long as the number of subsets divides the number of angles.
    """
    m = cfg.effective_subsets
    return sum((Fraction(2, m * factor) for factor in cfg.layer_factors()), Fraction(0))

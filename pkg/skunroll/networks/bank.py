from typing import Dict, List

from skunroll.imaging.exceptions import DimensionException
from skunroll.tomo.geometry import Geometry
from skunroll.tomo.operators import ProjectionOperator, TSubsetScheme, build_operator, partition_subsets
from skunroll.networks.exceptions import UnrollParameterException


class OperatorBank:
    """Subset operators of one geometry, built once per grid resolution.

    The number of subsets must divide the number of angles so every subset costs exactly 1/m.
    """

    def __init__(self, geometry: Geometry, num_subsets: int = 1, scheme: TSubsetScheme = "interleaved") -> None:
        if num_subsets < 1 or geometry.num_angles % num_subsets != 0:
            raise UnrollParameterException("num_subsets", num_subsets, f"a divisor of num_angles ({geometry.num_angles})")
        self.geometry = geometry
        self.num_subsets = num_subsets
        self.scheme = scheme
        self._subsets: Dict[int, List[ProjectionOperator]] = {}

    @property
    def full_grid_side(self) -> int:
        return self.geometry.full_grid_side

    def full(self, factor: int = 1) -> ProjectionOperator:
        """All angles on the grid reduced by `factor`"""
        side = self.geometry.full_grid_side
        if side % factor != 0:
            raise DimensionException(side, factor)
        return build_operator(self.geometry, side // factor)

    def subsets(self, factor: int = 1) -> List[ProjectionOperator]:
        if factor not in self._subsets:
            self._subsets[factor] = partition_subsets(self.full(factor), self.num_subsets, self.scheme)
        return self._subsets[factor]

    def __repr__(self) -> str:
        return f"OperatorBank({self.geometry.kind}, m={self.num_subsets}, factors={sorted(self._subsets)})"

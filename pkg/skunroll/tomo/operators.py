import time
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached
from scipy import sparse

from skunroll.common.typing import NDArrayF, Shape2D
from skunroll.imaging.containers import Image, SamplerSpec, Sinogram
from skunroll.imaging.sampling import downsample_array, upsample_array
from skunroll.tomo.exceptions import GridMismatchException, OperatorParameterException, SubsetPartitionException
from skunroll.tomo.geometry import Geometry
from skunroll.tomo.ledger import CostLedger, TProductKind

TSubsetScheme = Literal["interleaved", "contiguous"]


class LinearOperatorBase(ABC):
    """Linear map between 2D arrays with an exact adjoint and a cost weight charged per product"""

    cost_weight: Fraction = Fraction(1)

    @property
    @abstractmethod
    def domain_shape(self) -> Shape2D:
        pass

    @property
    @abstractmethod
    def range_shape(self) -> Shape2D:
        pass

    @abstractmethod
    def _forward(self, values: NDArrayF) -> NDArrayF:
        pass

    @abstractmethod
    def _adjoint(self, values: NDArrayF) -> NDArrayF:
        pass

    def apply(self, values: NDArrayF, ledger: Optional[CostLedger] = None) -> NDArrayF:
        if values.shape != self.domain_shape:
            raise GridMismatchException(self.domain_shape, values.shape)
        return self._charged("forward", self._forward, values, ledger)

    def apply_adjoint(self, values: NDArrayF, ledger: Optional[CostLedger] = None) -> NDArrayF:
        if values.shape != self.range_shape:
            raise GridMismatchException(self.range_shape, values.shape)
        return self._charged("adjoint", self._adjoint, values, ledger)

    def _charged(self, kind: TProductKind, f: Callable[[NDArrayF], NDArrayF], values: NDArrayF, ledger: Optional[CostLedger]) -> NDArrayF:
        # products without a ledger are diagnostics (objectives, norms, tests) and stay uncharged
        if ledger is None:
            return f(values)
        started = time.perf_counter()
        out = f(values)
        ledger.charge(kind, self.cost_weight, time.perf_counter() - started)
        return out


class ProjectionOperator(LinearOperatorBase):
    """Ray-driven (Joseph) discretization of the X-ray transform on a `grid_side` square grid.

    The adjoint multiplies by the transpose of the same sparse matrix, so it is matched to the forward
    map up to floating point summation order. `subset` restricts the rows to the listed angles.
    """

    def __init__(self,
                 geometry: Geometry,
                 grid_side: int,
                 matrix: sparse.csr_matrix,
                 subset: Optional[Tuple[int, ...]] = None,
                 matrix_t: Optional[sparse.csr_matrix] = None) -> None:
        self.geometry = geometry
        self.grid_side = grid_side
        self.subset = subset
        self.matrix = matrix
        self.matrix_t = matrix_t if matrix_t is not None else matrix.T.tocsr()
        subset_size = geometry.num_angles if subset is None else len(subset)
        self.cost_weight = Fraction(subset_size, geometry.num_angles) * Fraction(grid_side, geometry.full_grid_side)

    @property
    def angles(self) -> Tuple[int, ...]:
        return tuple(range(self.geometry.num_angles)) if self.subset is None else self.subset

    @property
    def domain_shape(self) -> Shape2D:
        return (self.grid_side, self.grid_side)

    @property
    def range_shape(self) -> Shape2D:
        return (len(self.angles), self.geometry.num_detectors)

    def _forward(self, values: NDArrayF) -> NDArrayF:
        out = self.matrix @ values.reshape(-1).astype(np.float64, copy=False)
        return out.reshape(self.range_shape).astype(values.dtype, copy=False)

    def _adjoint(self, values: NDArrayF) -> NDArrayF:
        out = self.matrix_t @ values.reshape(-1).astype(np.float64, copy=False)
        return out.reshape(self.domain_shape).astype(values.dtype, copy=False)

    def restrict(self, subset: Tuple[int, ...]) -> "ProjectionOperator":
        if self.subset is not None:
            raise SubsetPartitionException("only full operators can be restricted to subsets", [self.subset])
        nd = self.geometry.num_detectors
        rows = (np.asarray(subset, dtype=np.int64)[:, None] * nd + np.arange(nd)[None, :]).ravel()
        return ProjectionOperator(self.geometry, self.grid_side, self.matrix[rows], subset=tuple(subset))

    def __repr__(self) -> str:
        subset = "full" if self.subset is None else f"{len(self.subset)} angles"
        return f"ProjectionOperator({self.geometry.kind}, grid={self.grid_side}, {subset}, weight={self.cost_weight})"


def _joseph_entries(origins: NDArrayF, directions: NDArrayF, ray_ids: NDArrayF, grid_side: int, full_side: int,
                    along_rows: bool) -> Tuple[NDArrayF, NDArrayF, NDArrayF]:
    """Steps the given rays through every row (or column) of pixel centers, linearly interpolating across the
    other axis. Neighbours outside the grid contribute nothing.
    """
    g = grid_side
    p = full_side / g
    half = full_side / 2.0
    centers = (np.arange(g, dtype=np.float64) + 0.5) * p - half
    # a = axis we step along, b = axis we interpolate across
    a_axis, b_axis = (1, 0) if along_rows else (0, 1)
    oa, ob = origins[ray_ids, a_axis][:, None], origins[ray_ids, b_axis][:, None]
    ua, ub = directions[ray_ids, a_axis][:, None], directions[ray_ids, b_axis][:, None]
    s = (centers[None, :] - oa) / ua
    b_index = (ob + s * ub + half) / p - 0.5
    step = (p / np.abs(ua)) / full_side
    b0 = np.floor(b_index)
    frac = b_index - b0
    b0 = b0.astype(np.int64)
    a_index = np.broadcast_to(np.arange(g)[None, :], b0.shape)
    rays = np.broadcast_to(ray_ids[:, None], b0.shape)
    rows, cols, data = [], [], []
    for offset, w in ((0, 1.0 - frac), (1, frac)):
        b = b0 + offset
        valid = (b >= 0) & (b < g) & (w > 0.0)
        r_idx, c_idx = (a_index, b) if along_rows else (b, a_index)
        rows.append(rays[valid])
        cols.append(r_idx[valid] * g + c_idx[valid])
        data.append((w * step)[valid])
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(data)


@cached(cache=LRUCache(maxsize=32))
def build_operator(geom: Geometry, grid_side: int) -> ProjectionOperator:
    """Assembles the ray-driven system matrix. Sinogram shape depends on `geom` only, never on `grid_side`."""
    if int(grid_side) != grid_side or grid_side < 2:
        raise OperatorParameterException("grid_side", grid_side, "integer >= 2")
    origins, directions = geom.rays()
    n_rays = origins.shape[0]
    along_rows = np.abs(directions[:, 1]) >= np.abs(directions[:, 0])
    parts = [
        _joseph_entries(origins, directions, np.nonzero(mask)[0], grid_side, geom.full_grid_side, rows_first)
        for mask, rows_first in ((along_rows, True), (~along_rows, False))
    ]
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    data = np.concatenate([p[2] for p in parts])
    matrix = sparse.coo_matrix((data, (rows, cols)), shape=(n_rays, grid_side * grid_side)).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    return ProjectionOperator(geom, grid_side, matrix)


def forward_project(op: LinearOperatorBase, img: Image, ledger: Optional[CostLedger]) -> Sinogram:
    return Sinogram(op.apply(img.values, ledger))


def back_project(op: LinearOperatorBase, sino: Sinogram, ledger: Optional[CostLedger]) -> Image:
    return Image(op.apply_adjoint(sino.values, ledger))


def partition_subsets(op: ProjectionOperator, m: int, scheme: TSubsetScheme = "interleaved") -> List[ProjectionOperator]:
    """Splits the angles of `op` into `m` disjoint subsets. Interleaved puts angle j into subset j mod m."""
    n = op.geometry.num_angles
    if m < 1 or m > n:
        raise OperatorParameterException("m", m, f"1 <= m <= num_angles ({n})")
    if m == 1:
        return [op]
    if scheme == "interleaved":
        groups = [tuple(range(i, n, m)) for i in range(m)]
    elif scheme == "contiguous":
        groups = [tuple(int(a) for a in chunk) for chunk in np.array_split(np.arange(n), m)]
    else:
        raise OperatorParameterException("scheme", scheme, "interleaved or contiguous")
    return [op.restrict(group) for group in groups]


def check_partition(subsets: List[ProjectionOperator]) -> None:
    """Raises if `subsets` are not a disjoint cover of their common geometry's angles at one resolution"""
    if not subsets:
        raise SubsetPartitionException("no subsets given")
    first = subsets[0]
    if any(s.geometry != first.geometry or s.grid_side != first.grid_side for s in subsets):
        raise SubsetPartitionException("subsets differ in geometry or grid", [s.subset for s in subsets])
    covered = sorted(a for s in subsets for a in s.angles)
    if covered != list(range(first.geometry.num_angles)):
        raise SubsetPartitionException("subsets must be disjoint and cover all angles", [s.subset for s in subsets])


def adjoint_discrepancy(op: LinearOperatorBase, trials: int, seed: int) -> float:
    """Max over seeded trials of |<Ax, y> - <x, A^T y>| / (||Ax|| ||y||), computed without charging"""
    if trials < 1:
        raise OperatorParameterException("trials", trials, ">= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(op.domain_shape)
        y = rng.standard_normal(op.range_shape)
        ax = op.apply(x)
        aty = op.apply_adjoint(y)
        scale = max(float(np.linalg.norm(ax) * np.linalg.norm(y)), np.finfo(np.float64).tiny)
        worst = max(worst, abs(float(np.vdot(ax, y)) - float(np.vdot(x, aty))) / scale)
    return worst


def sketch_error(op_full: ProjectionOperator, op_sketch: ProjectionOperator, spec: SamplerSpec, x: Image) -> float:
    """||A x - A_s S(x)|| / ||A x||"""
    full = op_full.apply(x.values)
    sketched = op_sketch.apply(downsample_array(x.values, spec.factor))
    return float(np.linalg.norm(full - sketched) / np.linalg.norm(full))


def sketch_adjoint_error(op_full: ProjectionOperator, op_sketch: ProjectionOperator, spec: SamplerSpec, y: Sinogram) -> float:
    """||A^T y - U(A_s^T y) / f^2|| / ||A^T y||

    A coarse pixel covers f^2 fine ones, so the sketched backprojection is rescaled to a fine pixel density.
    """
    full = op_full.apply_adjoint(y.values)
    sketched = upsample_array(op_sketch.apply_adjoint(y.values), spec.factor) / spec.factor ** 2
    return float(np.linalg.norm(full - sketched) / np.linalg.norm(full))

from typing import Type
import pytest
import logging
from os import environ

import numpy as np

from skunroll.common.configuration.utils import _get_config_attrs_with_hints, make_configuration
from skunroll.common.configuration import BasicConfiguration
from skunroll.common.logger import init_logging_from_config
from skunroll.common.file_storage import FileStorage
from skunroll.common.storages.versioned_storage import VersionedStorage
from skunroll.common.typing import NDArrayF, Shape2D
from skunroll.imaging.containers import Image, Sinogram
from skunroll.tomo.geometry import Geometry, fan_beam_geometry
from skunroll.tomo.operators import LinearOperatorBase


TEST_STORAGE = "_storage"


class ScalingOperator(LinearOperatorBase):
    """Multiplies by a constant `c`, a self adjoint stub with a known spectrum"""

    def __init__(self, side: int, c: float = 1.0) -> None:
        self.side = side
        self.c = c

    @property
    def domain_shape(self) -> Shape2D:
        return (self.side, self.side)

    @property
    def range_shape(self) -> Shape2D:
        return (self.side, self.side)

    def _forward(self, values: NDArrayF) -> NDArrayF:
        return values * self.c

    def _adjoint(self, values: NDArrayF) -> NDArrayF:
        return values * self.c


def identity_operator(side: int) -> ScalingOperator:
    return ScalingOperator(side, 1.0)


def small_parallel_geometry(grid_side: int = 16, num_angles: int = 8, num_detectors: int = None) -> Geometry:
    return Geometry("parallel", num_angles, num_detectors or 2 * grid_side, 1.0, grid_side)


def small_fan_geometry(grid_side: int = 16, num_angles: int = 8, num_detectors: int = None) -> Geometry:
    return fan_beam_geometry(grid_side, num_angles, num_detectors or 2 * grid_side)


def random_image(side: int, seed: int = 0) -> Image:
    return Image(np.random.default_rng(seed).uniform(0.0, 1.0, (side, side)))


def random_sinogram(shape: Shape2D, seed: int = 0) -> Sinogram:
    return Sinogram(np.random.default_rng(seed).standard_normal(shape))


def write_version(storage: FileStorage, version: str) -> None:
    storage.save(VersionedStorage.VERSION_FILE, str(version))


def delete_storage() -> None:
    storage = FileStorage(TEST_STORAGE)
    if storage.has_folder(""):
        storage.delete_folder("", recursively=True)


@pytest.fixture()
def root_storage() -> FileStorage:
    return clean_storage()


@pytest.fixture(autouse=True)
def autouse_root_storage() -> FileStorage:
    return clean_storage()


def init_logger(C: Type[BasicConfiguration] = None) -> None:
    if not hasattr(logging, "health"):
        if not C:
            C = make_configuration(BasicConfiguration, BasicConfiguration)
        init_logging_from_config(C)


def clean_storage() -> FileStorage:
    storage = FileStorage(TEST_STORAGE, "t", makedirs=True)
    storage.delete_folder("", recursively=True)
    storage.create_folder(".")
    return storage


def add_config_to_env(config: Type[BasicConfiguration]) ->  None:
    # write back default values in configuration back into environment
    possible_attrs = _get_config_attrs_with_hints(config).keys()
    for attr in possible_attrs:
        if attr not in environ:
            v = getattr(config, attr)
            if v is not None:
                environ[attr] = str(v)

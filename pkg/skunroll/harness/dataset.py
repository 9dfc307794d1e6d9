from dataclasses import dataclass
from typing import List, Literal, Optional

from skunroll.common import logger
from skunroll.common.runners import TPoolType, map_in_pool
from skunroll.common.typing import DictStrAny
from skunroll.common.utils import derive_seed
from skunroll.common.storages.manifest_storage import ManifestStorage
from skunroll.imaging.containers import Image, Sinogram
from skunroll.tomo.geometry import Geometry
from skunroll.tomo.operators import build_operator
from skunroll.harness.exceptions import (DatasetChecksumException, DatasetConsistencyException, DatasetManifestException,
                                         DatasetNotFoundException, GeometryMismatchException)
from skunroll.harness.measurements import NoiseSpec, simulate_measurements
from skunroll.harness.phantoms import PhantomSpec, TPhantomKind, generate_phantom

TSplit = Literal["train", "test"]
SPLIT_KEYS = {"train": 0, "test": 1}
DATASET_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class DatasetItem:
    image: Image
    sinogram: Sinogram
    phantom_seed: int
    noise_seed: int


@dataclass(frozen=True, eq=False)
class Dataset:
    geometry: Geometry
    seed: int
    items: List[DatasetItem]

    def __len__(self) -> int:
        return len(self.items)


def item_seeds(seed: int, split: TSplit, index: int) -> DictStrAny:
    """Seeds of one item depend only on the run seed, the split and the item index"""
    split_key = SPLIT_KEYS[split]
    return {"phantom_seed": derive_seed(seed, split_key, index, 0), "noise_seed": derive_seed(seed, split_key, index, 1)}


def generate_dataset(geometry: Geometry,
                     count: int,
                     seed: int,
                     split: TSplit,
                     phantom_kind: TPhantomKind = "random_ellipses",
                     num_ellipses: int = 8,
                     noise: Optional[NoiseSpec] = None,
                     pool_type: TPoolType = "thread",
                     max_parallelism: Optional[int] = None) -> Dataset:
    """Phantoms with simulated measurements on the full grid of `geometry`. `noise` provides i0 and the
    enabled flag, item seeds are always derived from `seed`."""
    noise = noise or NoiseSpec()
    op = build_operator(geometry, geometry.full_grid_side)

    def _make_item(index: int) -> DatasetItem:
        seeds = item_seeds(seed, split, index)
        image = generate_phantom(PhantomSpec(phantom_kind, geometry.full_grid_side, num_ellipses, seeds["phantom_seed"]))
        item_noise = NoiseSpec(noise.i0, seeds["noise_seed"], noise.enabled)
        return DatasetItem(image, simulate_measurements(op, image, item_noise), seeds["phantom_seed"], seeds["noise_seed"])

    items = map_in_pool(pool_type, _make_item, list(range(count)), max_parallelism, pool_name=f"gen_{split}")
    logger.info(f"Generated {count} {split} items with {phantom_kind} phantoms")
    return Dataset(geometry, seed, items)


class DatasetStorage(ManifestStorage):
    """Items as USKD arrays with a flat YAML manifest holding counts, geometry, seeds and file digests"""

    IMAGES_FOLDER = "images"
    SINOGRAMS_FOLDER = "sinograms"

    def save(self, dataset: Dataset) -> str:
        manifest: DictStrAny = {"format_version": DATASET_FORMAT_VERSION, "count": len(dataset), "seed": dataset.seed}
        manifest.update({f"geometry.{k}": v for k, v in dataset.geometry.as_dict().items()})
        for i, item in enumerate(dataset.items):
            prefix = f"item.{i}"
            manifest[f"{prefix}.phantom_seed"] = item.phantom_seed
            manifest[f"{prefix}.noise_seed"] = item.noise_seed
            for kind, folder, values in (("image", DatasetStorage.IMAGES_FOLDER, item.image.values),
                                         ("sinogram", DatasetStorage.SINOGRAMS_FOLDER, item.sinogram.values)):
                file_name = f"{folder}/{i:05d}.uskd"
                manifest[f"{prefix}.{kind}"] = file_name
                manifest[f"{prefix}.{kind}_digest"] = self.save_array(file_name, values)
        return self.save_manifest(manifest)

    def load(self) -> Dataset:
        manifest = self.load_manifest()
        path = self.storage.storage_path
        format_version = manifest.get("format_version")
        if format_version != DATASET_FORMAT_VERSION:
            raise DatasetManifestException(path, "format_version", f"{format_version!r} but only {DATASET_FORMAT_VERSION} is readable")
        try:
            count = int(manifest["count"])
            seed = int(manifest["seed"])
            # every geometry field is written, a missing one means a truncated manifest
            geometry = Geometry(**{k: manifest[f"geometry.{k}"] for k in Geometry.__dataclass_fields__})
            entries = []
            for i in range(count):
                prefix = f"item.{i}"
                entries.append(tuple(manifest[f"{prefix}.{key}"] for key in
                                     ("image", "image_digest", "sinogram", "sinogram_digest", "phantom_seed", "noise_seed")))
        except KeyError as ex:
            raise DatasetManifestException(path, str(ex.args[0]), "missing")
        except (TypeError, ValueError) as ex:
            raise DatasetManifestException(path, "manifest", str(ex))
        for folder in (DatasetStorage.IMAGES_FOLDER, DatasetStorage.SINOGRAMS_FOLDER):
            present = len(self.storage.list_folder_files(folder, ".uskd")) if self.storage.has_folder(folder) else 0
            if present != count:
                raise DatasetConsistencyException(path, f"{count} {folder}", f"{present} {folder}")
        items = []
        for image_file, image_digest, sinogram_file, sinogram_digest, phantom_seed, noise_seed in entries:
            image = self.load_array(image_file, image_digest)
            sinogram = self.load_array(sinogram_file, sinogram_digest)
            items.append(DatasetItem(Image(image), Sinogram(sinogram), phantom_seed, noise_seed))
        return Dataset(geometry, seed, items)

    @classmethod
    def _not_found(cls, path: str) -> Exception:
        return DatasetNotFoundException(path)

    def _file_missing(self, relative_path: str) -> Exception:
        return DatasetConsistencyException(self.storage.storage_path, relative_path, "no such file")

    def _checksum_failed(self, full_path: str) -> Exception:
        return DatasetChecksumException(full_path)

    def _manifest_invalid(self, key: str, reason: str) -> Exception:
        return DatasetManifestException(self.storage.storage_path, key, reason)


def save_dataset(path: str, dataset: Dataset) -> str:
    return DatasetStorage(path, is_owner=True).save(dataset)


def load_dataset(path: str, expected_geometry: Optional[Geometry] = None) -> Dataset:
    dataset = DatasetStorage(path, is_owner=False).load()
    if expected_geometry is not None and dataset.geometry != expected_geometry:
        raise GeometryMismatchException(path, expected_geometry.as_dict(), dataset.geometry.as_dict())
    return dataset

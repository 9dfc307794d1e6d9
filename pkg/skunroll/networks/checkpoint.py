from dataclasses import asdict
from typing import NamedTuple

import numpy as np

from skunroll.tomo.geometry import Geometry
from skunroll.networks.configuration import UnrollConfig
from skunroll.networks.exceptions import CheckpointFormatException, CheckpointNotFoundException
from skunroll.networks.params import NetworkParams, init_network_params
from skunroll.common.storages.manifest_storage import ManifestStorage


class Checkpoint(NamedTuple):
    params: NetworkParams
    config: UnrollConfig
    geometry: Geometry


class CheckpointStorage(ManifestStorage):
    """Parameters as USKD arrays plus a YAML manifest with their names, shapes, digests, the network config and the geometry"""

    ARRAYS_FOLDER = "arrays"

    def save(self, params: NetworkParams, cfg: UnrollConfig, geometry: Geometry) -> str:
        entries = []
        for name, t in params.named_tensors().items():
            file_name = f"{CheckpointStorage.ARRAYS_FOLDER}/{name}.uskd"
            # USKD holds 2D arrays, keep the leading axis and flatten the rest
            digest = self.save_array(file_name, t.values.reshape(t.values.shape[0] if t.values.ndim else 1, -1))
            entries.append({"name": name, "shape": list(t.shape), "dtype": t.values.dtype.name, "file": file_name, "digest": digest})
        config = asdict(cfg)
        if config["sketch_schedule"] is not None:
            config["sketch_schedule"] = list(config["sketch_schedule"])
        return self.save_manifest({"config": config, "geometry": geometry.as_dict(), "tensors": entries})

    def load(self) -> Checkpoint:
        manifest = self.load_manifest()
        path = self.storage.storage_path
        try:
            config = dict(manifest["config"])
            if config.get("sketch_schedule") is not None:
                config["sketch_schedule"] = tuple(config["sketch_schedule"])
            cfg = UnrollConfig(**config)
            geometry = Geometry.from_dict(manifest["geometry"])
            entries = {e["name"]: e for e in manifest["tensors"]}
        except (KeyError, TypeError) as ex:
            raise CheckpointFormatException(path, "manifest", str(ex))
        params = init_network_params(cfg)
        for name, t in params.named_tensors().items():
            entry = entries.get(name)
            if entry is None:
                raise CheckpointFormatException(path, name, "missing")
            try:
                shape, file_name, dtype = tuple(entry["shape"]), entry["file"], entry["dtype"]
            except KeyError as ex:
                raise CheckpointFormatException(path, name, f"no {ex.args[0]} in manifest entry")
            except TypeError as ex:
                raise CheckpointFormatException(path, name, str(ex))
            if shape != t.shape:
                raise CheckpointFormatException(path, name, f"shape {list(shape)} does not match {list(t.shape)}")
            values = self.load_array(file_name, entry.get("digest"))
            if values.dtype.name != dtype:
                raise CheckpointFormatException(path, name, f"dtype {values.dtype.name} but manifest says {dtype}")
            t.values = np.ascontiguousarray(values.reshape(t.shape))
        return Checkpoint(params, cfg, geometry)

    @classmethod
    def _not_found(cls, path: str) -> Exception:
        return CheckpointNotFoundException(path)

    def _file_missing(self, relative_path: str) -> Exception:
        return CheckpointFormatException(self.storage.storage_path, relative_path, "no such file")

    def _checksum_failed(self, full_path: str) -> Exception:
        return CheckpointFormatException(self.storage.storage_path, full_path, "checksum does not match")

    def _manifest_invalid(self, key: str, reason: str) -> Exception:
        return CheckpointFormatException(self.storage.storage_path, key, reason)


def save_checkpoint(path: str, params: NetworkParams, cfg: UnrollConfig, geometry: Geometry) -> str:
    return CheckpointStorage(path, is_owner=True).save(params, cfg, geometry)


def load_checkpoint(path: str) -> Checkpoint:
    return CheckpointStorage(path, is_owner=False).load()

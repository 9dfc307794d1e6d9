import os
from typing import Optional

import yaml

from skunroll.common.file_storage import FileStorage
from skunroll.common.typing import DictStrAny, NDArrayF, StrAny
from skunroll.common.utils import digest128
from skunroll.common.storages.exceptions import (StorageChecksumException, StorageFileMissingException, StorageFormatException,
                                                 StorageNotFoundException)
from skunroll.common.storages.versioned_storage import VersionedStorage
from skunroll.imaging.raw_format import decode_array, encode_array


class ManifestStorage(VersionedStorage):
    """Versioned folder of USKD arrays described by a YAML manifest.

    Subclasses set `STORAGE_VERSION` and may replace the exceptions raised for a missing folder,
    a missing array, an array whose digest does not match or a manifest that cannot be read.
    """

    STORAGE_VERSION = "1.0.0"
    MANIFEST_FILE = "manifest.yaml"

    def __init__(self, path: str, is_owner: bool) -> None:
        if not is_owner and not os.path.isfile(os.path.join(path, self.MANIFEST_FILE)):
            raise self._not_found(path)
        super().__init__(self.STORAGE_VERSION, is_owner, FileStorage(path, "t", makedirs=is_owner))

    def save_manifest(self, manifest: StrAny) -> str:
        return self.storage.save(self.MANIFEST_FILE, yaml.safe_dump(dict(manifest), sort_keys=False))

    def load_manifest(self) -> DictStrAny:
        try:
            manifest = yaml.safe_load(self.storage.load(self.MANIFEST_FILE))
        except yaml.YAMLError as ex:
            raise self._manifest_invalid(self.MANIFEST_FILE, str(ex))
        if not isinstance(manifest, dict):
            raise self._manifest_invalid(self.MANIFEST_FILE, f"expected a mapping, got {type(manifest).__name__}")
        return manifest

    def save_array(self, relative_path: str, values: NDArrayF) -> str:
        """Stores `values` and returns the digest of the stored bytes"""
        folder = os.path.dirname(relative_path)
        if folder:
            self.storage.create_folder(folder, exists_ok=True)
        data = encode_array(values)
        self.storage.save_bytes(relative_path, data)
        return digest128(data)

    def load_array(self, relative_path: str, digest: Optional[str] = None) -> NDArrayF:
        full_path = self.storage.make_full_path(relative_path)
        if not self.storage.has_file(relative_path):
            raise self._file_missing(relative_path)
        data = self.storage.load_bytes(relative_path)
        values = decode_array(data, full_path)
        if digest is not None and digest128(data) != digest:
            raise self._checksum_failed(full_path)
        return values

    @classmethod
    def _not_found(cls, path: str) -> Exception:
        return StorageNotFoundException(path)

    def _file_missing(self, relative_path: str) -> Exception:
        return StorageFileMissingException(self.storage.storage_path, relative_path)

    def _checksum_failed(self, full_path: str) -> Exception:
        return StorageChecksumException(full_path)

    def _manifest_invalid(self, key: str, reason: str) -> Exception:
        return StorageFormatException(self.storage.storage_path, key, reason)

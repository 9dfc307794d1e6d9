import os

import numpy as np
import pytest
import semver

from skunroll.common.file_storage import FileStorage
from skunroll.common.storages import (ManifestStorage, NoMigrationPathException, StorageChecksumException,
                                      StorageFileMissingException, StorageFormatException, StorageNotFoundException,
                                      VersionedStorage, WrongStorageVersionException)

from tests.utils import TEST_STORAGE, autouse_root_storage, root_storage, write_version  # noqa: F401

STORAGE_PATH = os.path.join(TEST_STORAGE, "arrays")


class RenamingStorage(ManifestStorage):
    """1.1.0 renamed manifest key `side` to `grid_side`, 1.2.0 added `dtype`"""

    STORAGE_VERSION = "1.2.0"

    def migrate_storage(self, from_version: semver.VersionInfo, to_version: semver.VersionInfo) -> None:
        manifest = self.load_manifest()
        if from_version < "1.1.0" and to_version >= "1.1.0":
            manifest["grid_side"] = manifest.pop("side")
            self.save_manifest(manifest)
            self._save_version(semver.VersionInfo.parse("1.1.0"))
            from_version = self.version
        if from_version < "1.2.0" and to_version >= "1.2.0":
            manifest.setdefault("dtype", "float64")
            self.save_manifest(manifest)
            self._save_version(semver.VersionInfo.parse("1.2.0"))


def _old_storage(version: str) -> None:
    storage = ManifestStorage(STORAGE_PATH, is_owner=True)
    storage.save_manifest({"side": 16})
    write_version(storage.storage, version)


def test_new_storage_is_stamped(root_storage: FileStorage) -> None:
    v = VersionedStorage("2.0.0", True, root_storage)
    assert v.version == "2.0.0"
    assert root_storage.load(VersionedStorage.VERSION_FILE) == "2.0.0"


def test_reader_needs_stamp(root_storage: FileStorage) -> None:
    with pytest.raises(WrongStorageVersionException) as py_ex:
        VersionedStorage("1.0.0", False, root_storage)
    assert py_ex.value.storage_path == root_storage.storage_path
    assert py_ex.value.initial_version == "0.0.0"
    assert py_ex.value.target_version == "1.0.0"


def test_owner_migrates_manifest() -> None:
    _old_storage("1.0.0")
    storage = RenamingStorage(STORAGE_PATH, is_owner=True)
    assert storage.version == "1.2.0"
    assert storage.load_manifest() == {"grid_side": 16, "dtype": "float64"}


def test_reader_does_not_migrate() -> None:
    _old_storage("1.0.0")
    with pytest.raises(WrongStorageVersionException) as py_ex:
        RenamingStorage(STORAGE_PATH, is_owner=False)
    assert py_ex.value.initial_version == "1.0.0"
    # nothing was touched
    assert ManifestStorage(STORAGE_PATH, is_owner=True).load_manifest() == {"side": 16}


def test_incomplete_migration() -> None:
    _old_storage("1.0.0")

    class AheadStorage(RenamingStorage):
        STORAGE_VERSION = "1.3.0"

    with pytest.raises(NoMigrationPathException) as py_ex:
        AheadStorage(STORAGE_PATH, is_owner=True)
    assert py_ex.value.initial_version == "1.0.0"
    assert py_ex.value.migrated_version == "1.2.0"


def test_newer_storage_is_never_downgraded() -> None:
    _old_storage("1.4.0")
    with pytest.raises(NoMigrationPathException) as py_ex:
        RenamingStorage(STORAGE_PATH, is_owner=True)
    assert py_ex.value.migrated_version == "1.4.0"


def test_missing_manifest() -> None:
    with pytest.raises(StorageNotFoundException) as py_ex:
        ManifestStorage(STORAGE_PATH, is_owner=False)
    assert py_ex.value.path == STORAGE_PATH


def test_arrays_with_digests() -> None:
    storage = ManifestStorage(STORAGE_PATH, is_owner=True)
    values = np.arange(12, dtype=np.float32).reshape(3, 4)
    digest = storage.save_array("layers/a.uskd", values)
    storage.save_manifest({"a": digest})
    reader = ManifestStorage(STORAGE_PATH, is_owner=False)
    loaded = reader.load_array("layers/a.uskd", reader.load_manifest()["a"])
    assert loaded.dtype == np.float32
    assert np.array_equal(loaded, values)
    # digest is optional
    assert np.array_equal(reader.load_array("layers/a.uskd"), values)

    with pytest.raises(StorageChecksumException) as py_ex:
        reader.load_array("layers/a.uskd", "0" * len(digest))
    assert py_ex.value.path.endswith("a.uskd")

    with pytest.raises(StorageFileMissingException) as py_ex_missing:
        reader.load_array("layers/b.uskd")
    assert py_ex_missing.value.relative_path == "layers/b.uskd"


@pytest.mark.parametrize("content", ["", "side: [16\n", "- 16\n"])
def test_unreadable_manifest(content: str) -> None:
    storage = ManifestStorage(STORAGE_PATH, is_owner=True)
    storage.save_manifest({"side": 16})
    storage.storage.save(ManifestStorage.MANIFEST_FILE, content)
    with pytest.raises(StorageFormatException) as py_ex:
        ManifestStorage(STORAGE_PATH, is_owner=False).load_manifest()
    assert py_ex.value.key == ManifestStorage.MANIFEST_FILE

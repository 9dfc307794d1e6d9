from typing import Optional, Union

import semver

from skunroll.common.file_storage import FileStorage
from skunroll.common.storages.exceptions import NoMigrationPathException, WrongStorageVersionException

TVersion = Union[str, semver.VersionInfo]
UNVERSIONED = semver.VersionInfo.parse("0.0.0")


class VersionedStorage:
    """Folder stamped with the semver of its layout in `.version`.

    The owner stamps new folders and migrates older ones. Readers open a folder only when it is
    exactly at their version, a newer layout is never downgraded.
    """

    VERSION_FILE = ".version"

    def __init__(self, version: TVersion, is_owner: bool, storage: FileStorage) -> None:
        self.storage = storage
        target = semver.VersionInfo.parse(str(version))
        found = self._stored_version()
        if found is None:
            if not is_owner:
                raise WrongStorageVersionException(storage.storage_path, UNVERSIONED, target)
            self._save_version(target)
        elif found > target:
            raise NoMigrationPathException(storage.storage_path, found, found, target)
        elif found < target:
            if not is_owner:
                raise WrongStorageVersionException(storage.storage_path, found, target)
            self.migrate_storage(found, target)
            migrated = self._stored_version()
            if migrated != target:
                raise NoMigrationPathException(storage.storage_path, found, migrated, target)

    def migrate_storage(self, from_version: semver.VersionInfo, to_version: semver.VersionInfo) -> None:
        """Brings the folder from `from_version` towards `to_version`, saving each version reached"""
        pass

    @property
    def version(self) -> semver.VersionInfo:
        return self._stored_version() or UNVERSIONED

    def _stored_version(self) -> Optional[semver.VersionInfo]:
        if not self.storage.has_file(VersionedStorage.VERSION_FILE):
            return None
        return semver.VersionInfo.parse(self.storage.load(VersionedStorage.VERSION_FILE).strip())

    def _save_version(self, version: semver.VersionInfo) -> None:
        self.storage.save(VersionedStorage.VERSION_FILE, str(version))

import semver

from skunroll.common.exceptions import SkunrollException, TerminalException


class StorageException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class NoMigrationPathException(StorageException, TerminalException):
    def __init__(self, storage_path: str, initial_version: semver.VersionInfo, migrated_version: semver.VersionInfo, target_version: semver.VersionInfo) -> None:
        self.storage_path = storage_path
        self.initial_version = initial_version
        self.migrated_version = migrated_version
        self.target_version = target_version
        super().__init__(f"Storage {storage_path} at v {initial_version} cannot be brought to v {target_version}, migration stopped at v {migrated_version}")


class WrongStorageVersionException(StorageException, TerminalException):
    def __init__(self, storage_path: str, initial_version: semver.VersionInfo, target_version: semver.VersionInfo) -> None:
        self.storage_path = storage_path
        self.initial_version = initial_version
        self.target_version = target_version
        super().__init__(f"Storage {storage_path} is at v {initial_version} but v {target_version} is required")


class StorageNotFoundException(StorageException, TerminalException):
    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"No manifest found in {path}")


class StorageFileMissingException(StorageException, TerminalException):
    def __init__(self, path: str, relative_path: str) -> None:
        self.path = path
        self.relative_path = relative_path
        super().__init__(f"Manifest of {path} lists {relative_path} but the file is missing")


class StorageChecksumException(StorageException, TerminalException):
    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"Checksum of {path} does not match its manifest")


class StorageFormatException(StorageException, TerminalException):
    def __init__(self, path: str, key: str, reason: str) -> None:
        self.path = path
        self.key = key
        self.reason = reason
        super().__init__(f"Manifest of {path} is malformed at {key}: {reason}")

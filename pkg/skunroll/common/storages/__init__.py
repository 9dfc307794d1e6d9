from .versioned_storage import VersionedStorage  # noqa: F401
from .manifest_storage import ManifestStorage  # noqa: F401
from .exceptions import (StorageException, NoMigrationPathException, WrongStorageVersionException, StorageNotFoundException,  # noqa: F401
                         StorageFileMissingException, StorageChecksumException, StorageFormatException)

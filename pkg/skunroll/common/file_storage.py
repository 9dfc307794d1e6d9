import os
import shutil
import tempfile
from typing import Any, List

from skunroll.common.utils import encoding_for_mode


class FileStorage:
    """Folder rooted at `storage_path`. Text or binary per `file_type`, every write replaces the target atomically"""

    def __init__(self, storage_path: str, file_type: str = "t", makedirs: bool = False) -> None:
        self.storage_path = os.path.join(os.path.realpath(storage_path), "")
        self.file_type = file_type
        if makedirs:
            os.makedirs(self.storage_path, exist_ok=True)

    def save(self, relative_path: str, data: Any) -> str:
        return self._write_atomic(relative_path, data, self.file_type)

    def save_bytes(self, relative_path: str, data: bytes) -> str:
        return self._write_atomic(relative_path, data, "b")

    def load(self, relative_path: str) -> Any:
        mode = "r" + self.file_type
        with open(self.make_full_path(relative_path), mode, encoding=encoding_for_mode(mode)) as f:
            return f.read()

    def load_bytes(self, relative_path: str) -> bytes:
        with open(self.make_full_path(relative_path), "rb") as f:
            return f.read()

    def delete(self, relative_path: str) -> None:
        # raises FileNotFoundError when missing
        os.remove(self.make_full_path(relative_path))

    def delete_folder(self, relative_path: str, recursively: bool = False) -> None:
        folder_path = self.make_full_path(relative_path)
        if not os.path.isdir(folder_path):
            raise NotADirectoryError(folder_path)
        if recursively:
            shutil.rmtree(folder_path)
        else:
            os.rmdir(folder_path)

    def has_file(self, relative_path: str) -> bool:
        return os.path.isfile(self.make_full_path(relative_path))

    def has_folder(self, relative_path: str) -> bool:
        return os.path.isdir(self.make_full_path(relative_path))

    def list_folder_files(self, relative_path: str, extension: str = None) -> List[str]:
        """Sorted files directly in `relative_path` as paths relative to the storage root, optionally only `extension`"""
        with os.scandir(self.make_full_path(relative_path)) as entries:
            names = [e.name for e in entries if e.is_file() and (extension is None or e.name.endswith(extension))]
        return sorted(os.path.join(relative_path, name) for name in names)

    def create_folder(self, relative_path: str, exists_ok: bool = False) -> None:
        os.makedirs(self.make_full_path(relative_path), exist_ok=exists_ok)

    def make_full_path(self, relative_path: str) -> str:
        full_path = os.path.join(self.storage_path, relative_path)
        if os.path.commonpath([self.storage_path, os.path.realpath(full_path)]) != os.path.dirname(self.storage_path):
            raise ValueError(f"{relative_path} points outside of storage {self.storage_path}")
        return full_path

    def _write_atomic(self, relative_path: str, data: Any, file_type: str) -> str:
        mode = "w" + file_type
        dest_path = self.make_full_path(relative_path)
        # the temp file must be in the destination folder for os.replace to be atomic
        with tempfile.NamedTemporaryFile(dir=os.path.dirname(dest_path), mode=mode, delete=False, encoding=encoding_for_mode(mode)) as f:
            tmp_path = f.name
            f.write(data)
        try:
            os.replace(tmp_path, dest_path)
        except Exception:
            os.remove(tmp_path)
            raise
        return dest_path

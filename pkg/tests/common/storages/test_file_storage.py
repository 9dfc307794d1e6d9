import os

import pytest

from skunroll.common.file_storage import FileStorage
from skunroll.common.utils import encoding_for_mode

from tests.utils import TEST_STORAGE, autouse_root_storage  # noqa: F401


def test_encoding_for_mode() -> None:
    assert encoding_for_mode("b") is None
    assert encoding_for_mode("wb") is None
    assert encoding_for_mode("t") == "utf-8"
    assert encoding_for_mode("w") == "utf-8"


def test_text_is_utf8() -> None:
    storage = FileStorage(TEST_STORAGE)
    text = "run.name: 'ψ-λ sketch'\n"
    path = storage.save("config.yaml", text)
    assert path == os.path.join(os.path.realpath(TEST_STORAGE), "config.yaml")
    with open(path, "rb") as f:
        assert f.read() == text.encode("utf-8")
    assert storage.load("config.yaml") == text


def test_binary_storage() -> None:
    storage = FileStorage(TEST_STORAGE, file_type="b")
    storage.save("a.bin", b"USKD\0\1")
    assert storage.load("a.bin") == b"USKD\0\1"


def test_save_replaces_and_leaves_no_temp_files() -> None:
    storage = FileStorage(TEST_STORAGE)
    storage.create_folder("arrays", exists_ok=True)
    storage.save_bytes("arrays/a.uskd", b"first")
    storage.save_bytes("arrays/a.uskd", b"second")
    storage.save("arrays/notes.txt", "sketched")
    assert storage.load_bytes("arrays/a.uskd") == b"second"
    assert storage.list_folder_files("arrays") == ["arrays/a.uskd", "arrays/notes.txt"]
    assert storage.list_folder_files("arrays", ".uskd") == ["arrays/a.uskd"]


def test_save_into_missing_folder_fails() -> None:
    storage = FileStorage(TEST_STORAGE)
    with pytest.raises(FileNotFoundError):
        storage.save("missing/a.txt", "x")
    assert not storage.has_folder("missing")


def test_delete() -> None:
    storage = FileStorage(TEST_STORAGE)
    storage.create_folder("runs/lpd")
    storage.save("runs/lpd/log.csv", "epoch\n")
    storage.delete("runs/lpd/log.csv")
    assert not storage.has_file("runs/lpd/log.csv")
    with pytest.raises(FileNotFoundError):
        storage.delete("runs/lpd/log.csv")
    with pytest.raises(OSError):
        storage.delete_folder("runs")
    storage.delete_folder("runs", recursively=True)
    assert not storage.has_folder("runs")
    with pytest.raises(NotADirectoryError):
        storage.delete_folder("runs")


def test_paths_stay_inside_storage() -> None:
    storage = FileStorage(os.path.join(TEST_STORAGE, "inner"), makedirs=True)
    assert storage.make_full_path("a/b.uskd").startswith(storage.storage_path)
    with pytest.raises(ValueError):
        storage.make_full_path("../escaped.txt")
    with pytest.raises(ValueError):
        storage.save("../../escaped.txt", "x")

"""USKD raw arrays: a 16 byte little-endian header followed by row-major data.

header: magic b"USKD", format version u16, dtype code u16 (1 = float32, 2 = float64), rows u32, cols u32
"""
import os
import struct
from typing import Dict, Union

import numpy as np

from skunroll.common.file_storage import FileStorage
from skunroll.common.typing import NDArrayF
from skunroll.imaging.containers import Image, Sinogram
from skunroll.imaging.exceptions import ArrayEncodingException, RawFormatException

USKD_MAGIC = b"USKD"
USKD_VERSION = 1
USKD_HEADER = struct.Struct("<4sHHII")
DTYPE_CODES: Dict[int, str] = {1: "<f4", 2: "<f8"}
CODES_FOR_DTYPES: Dict[str, int] = {"float32": 1, "float64": 2}


def encode_array(values: NDArrayF) -> bytes:
    if values.ndim != 2:
        raise ArrayEncodingException("shape", values.shape, "a 2D array")
    code = CODES_FOR_DTYPES.get(values.dtype.name)
    if code is None:
        raise ArrayEncodingException("dtype", values.dtype.name, f"one of {', '.join(CODES_FOR_DTYPES)}")
    rows, cols = values.shape
    header = USKD_HEADER.pack(USKD_MAGIC, USKD_VERSION, code, rows, cols)
    return header + np.ascontiguousarray(values, dtype=DTYPE_CODES[code]).tobytes()


def decode_array(data: bytes, source: str) -> NDArrayF:
    if len(data) < USKD_HEADER.size:
        raise RawFormatException(source, f"truncated header, {len(data)} bytes")
    magic, version, code, rows, cols = USKD_HEADER.unpack_from(data)
    if magic != USKD_MAGIC:
        raise RawFormatException(source, f"bad magic {magic!r}")
    if version != USKD_VERSION:
        raise RawFormatException(source, f"unsupported format version {version}")
    if code not in DTYPE_CODES:
        raise RawFormatException(source, f"unknown dtype code {code}")
    dtype = np.dtype(DTYPE_CODES[code])
    expected = USKD_HEADER.size + rows * cols * dtype.itemsize
    if len(data) != expected:
        raise RawFormatException(source, f"expected {expected} bytes for {rows}x{cols} but found {len(data)}")
    values = np.frombuffer(data, dtype=dtype, offset=USKD_HEADER.size).reshape(rows, cols)
    # native byte order copy, frombuffer views are read only
    return values.astype(dtype.newbyteorder("="))


def save_array(storage: FileStorage, relative_path: str, values: NDArrayF) -> str:
    return storage.save_bytes(relative_path, encode_array(values))


def load_array(storage: FileStorage, relative_path: str) -> NDArrayF:
    return decode_array(storage.load_bytes(relative_path), storage.make_full_path(relative_path))


def write_raw_file(path: str, item: Union[Image, Sinogram, NDArrayF]) -> str:
    values = item if isinstance(item, np.ndarray) else item.values
    storage = FileStorage(os.path.dirname(os.path.abspath(path)), makedirs=True)
    return save_array(storage, os.path.basename(path), values)


def read_raw_file(path: str) -> NDArrayF:
    storage = FileStorage(os.path.dirname(os.path.abspath(path)))
    return load_array(storage, os.path.basename(path))

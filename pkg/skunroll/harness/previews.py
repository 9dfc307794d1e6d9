import numpy as np

from skunroll.common.file_storage import FileStorage
from skunroll.imaging.containers import Image

# fixed display window so previews of different runs compare byte for byte
PREVIEW_WINDOW = (0.0, 1.0)


def encode_pgm(img: Image) -> bytes:
    """8 bit binary portable graymap (P5)"""
    lo, hi = PREVIEW_WINDOW
    scaled = np.round((np.clip(img.values, lo, hi) - lo) / (hi - lo) * 255.0).astype(np.uint8)
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + scaled.tobytes()


def save_preview(storage: FileStorage, relative_path: str, img: Image) -> str:
    return storage.save_bytes(relative_path, encode_pgm(img))

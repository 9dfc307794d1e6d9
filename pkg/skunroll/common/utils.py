import base64
import hashlib
import secrets
from os import environ
from typing import List, Optional, Union

import numpy as np

from skunroll.common.typing import StrStr


def uniq_id() -> str:
    return secrets.token_hex(16)


def digest128(v: Union[str, bytes]) -> str:
    if isinstance(v, str):
        v = v.encode("utf-8")
    return base64.b64encode(hashlib.shake_128(v).digest(15)).decode('ascii')


def derive_seed(seed: int, *keys: int) -> int:
    """Derives an independent child seed from `seed` and a path of integer keys.

    The result does not depend on the order in which children are requested, so items generated
    in parallel get the same seeds as items generated sequentially.
    """
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint64)[0] >> 1)


def filter_env_vars(envs: List[str]) -> StrStr:
    return {k.lower(): environ[k] for k in envs if k in environ}


def encoding_for_mode(mode: str) -> Optional[str]:
    if "b" in mode:
        return None
    else:
        return "utf-8"

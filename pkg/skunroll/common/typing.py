from typing import Any, Dict, Literal, Mapping, Tuple, Type, Union

import numpy as np
import numpy.typing as npt

DictStrAny = Dict[str, Any]
StrAny = Mapping[str, Any]  # immutable, covariant entity
StrStr = Mapping[str, str]  # immutable, covariant entity

# all numeric payloads are real floating arrays
NDArrayF = npt.NDArray[np.floating]  # type: ignore[type-arg]
TFloatDtype = Literal["float32", "float64"]
Shape2D = Tuple[int, int]


def is_optional_type(t: Type[Any]) -> bool:
    if hasattr(t, "__origin__"):
        return t.__origin__ is Union and type(None) in t.__args__
    return False


def is_literal_type(hint: Type[Any]) -> bool:
    return hasattr(hint, "__origin__") and hint.__origin__ is Literal

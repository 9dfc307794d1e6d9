import base64
from fractions import Fraction
from functools import partial
from typing import Any, Union

import numpy as np
import simplejson
from simplejson.raw_json import RawJSON


def custom_encode(obj: Any) -> Union[RawJSON, str, float, int, list]:  # type: ignore[type-arg]
    # numpy scalars leak out of every metric computation
    if isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.ndarray):
        return obj.tolist()  # type: ignore[no-any-return]
    elif isinstance(obj, Fraction):
        # operator costs are exact fractions, report them as plain numbers
        if obj.denominator == 1:
            return int(obj)
        return float(obj)
    elif isinstance(obj, bytes):
        return base64.b64encode(obj).decode('ascii')
    raise TypeError(repr(obj) + " is not JSON serializable")


simplejson.loads = partial(simplejson.loads, use_decimal=False)
simplejson.load = partial(simplejson.load, use_decimal=False)
# infinite PSNR values are written as Infinity tokens, simplejson reads them back
simplejson.dumps = partial(simplejson.dumps, use_decimal=False, default=custom_encode, encoding=None)
simplejson.dump = partial(simplejson.dump, use_decimal=False, default=custom_encode, encoding=None)

# provide drop-in replacement
json = simplejson

from .json import json  # noqa: F401, I251
from skunroll._version import common_version as __version__

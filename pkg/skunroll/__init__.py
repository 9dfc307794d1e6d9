from skunroll._version import common_version as __version__

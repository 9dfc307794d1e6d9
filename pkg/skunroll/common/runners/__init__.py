from .pool_runner import TPoolType, map_in_pool  # noqa: F401

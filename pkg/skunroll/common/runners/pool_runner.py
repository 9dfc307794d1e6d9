from multiprocessing.pool import ThreadPool
from typing import Callable, List, Literal, Optional, Sequence, TypeVar

from skunroll.common import logger
from skunroll.common.exceptions import PoolException

TPoolType = Literal["thread", "none"]
TItem = TypeVar("TItem")
TResult = TypeVar("TResult")


def map_in_pool(pool_type: TPoolType,
                f: Callable[[TItem], TResult],
                items: Sequence[TItem],
                max_parallelism: Optional[int] = None,
                pool_name: str = "pool") -> List[TResult]:
    """Maps `f` over `items` preserving order. Items must carry everything `f` needs (ie. their own seeds)
    so the result does not depend on the pool type or worker count.
    """

    def _run(item: TItem) -> TResult:
        try:
            return f(item)
        except Exception as exc:
            raise PoolException(pool_name, str(item), exc) from exc

    if pool_type == "none" or len(items) <= 1:
        return [_run(item) for item in items]
    logger.info(f"Created {pool_type} pool {pool_name} with {max_parallelism or 'default no.'} workers")
    with ThreadPool(processes=max_parallelism) as pool:
        return pool.map(_run, items)

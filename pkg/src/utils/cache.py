"""Disk-backed memoization for expensive numeric searches."""

import functools
import threading
from typing import Callable, Optional

from diskcache import Cache

from src.config import get_cache_dir, logger, _

_cache: Optional[Cache] = None
_cache_lock = threading.Lock()
_MISSING = object()


def get_cache() -> Cache:
    """The process-wide cache, opened on first use in DIVSMOOTH_CACHE (or a temp dir)."""
    global _cache
    with _cache_lock:
        if _cache is None:
            _cache = Cache(get_cache_dir())
            logger.info(_("Opened result cache at {}").format(_cache.directory))
        return _cache


def close_cache():
    global _cache
    with _cache_lock:
        if _cache is not None:
            _cache.close()
            _cache = None


def memoized(name: str, expire: Optional[float] = None) -> Callable:
    """
    Cache a function's results under (name, args, kwargs).

    Args:
        name: Key prefix; bump it when the function's output changes
        expire: Seconds before an entry expires (default: never)
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            cache = get_cache()
            key = (name, args, tuple(sorted(kwargs.items())))
            value = cache.get(key, default=_MISSING)
            if value is _MISSING:
                value = func(*args, **kwargs)
                cache.set(key, value, expire)
            return value

        wrapper.uncached = func
        return wrapper

    return decorator

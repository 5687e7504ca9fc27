"""Provider error taxonomy and the shared retry policy."""

from __future__ import annotations

import time
from typing import Callable, TypeVar

T = TypeVar("T")


class ProviderError(Exception):
    """Base class for every external-capability failure."""

    retryable = False


class ProviderUnavailableError(ProviderError):
    """Transient network or service failure; retrying may help."""

    retryable = True


class RateLimitError(ProviderError):
    """The vendor throttled us; retry after backing off."""

    retryable = True


class AuthError(ProviderError):
    """Bad or missing credentials; never retried."""

    retryable = False


class FixtureMissError(ProviderError):
    """The request is not in the fixture table. Fixtures never invent data,
    so tests cannot silently fall through to the network."""

    retryable = False


class ProtocolError(ProviderError):
    """The provider answered with a malformed or dimension-mismatched payload."""

    retryable = False


def retry_call(
    fn: Callable[[], T],
    *,
    attempts: int = 3,
    base_delay: float = 0.25,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Call ``fn`` with up to ``attempts`` tries and exponential backoff.

    Only retryable errors are retried; auth and protocol failures surface
    immediately.
    """
    for attempt in range(1, attempts + 1):
        try:
            return fn()
        except ProviderError as err:
            if not err.retryable or attempt == attempts:
                raise
            sleep(base_delay * 2 ** (attempt - 1))
    raise AssertionError("unreachable")

"""
Utility modules for the cascade speculative decoding toolkit.
"""

from .logging_config import get_logger, setup_logging
from .exceptions import (
    CascadeError,
    ConfigError,
    DomainError,
    InvariantError,
    StreamOverflowError,
)
from .rng import SessionStreams, derive_streams, make_rng

__all__ = [
    'get_logger',
    'setup_logging',
    'CascadeError',
    'ConfigError',
    'DomainError',
    'InvariantError',
    'StreamOverflowError',
    'SessionStreams',
    'derive_streams',
    'make_rng'
]

"""Embedding-based token alignment service."""

from .app import create_app
from .encoders import HashEncoder, association_matrix, encoder_from_env

__version__ = "0.1.0"

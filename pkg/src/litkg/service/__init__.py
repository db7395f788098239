"""Read-only HTTP query service over a built graph."""
from .app import create_app

__all__ = ["create_app"]

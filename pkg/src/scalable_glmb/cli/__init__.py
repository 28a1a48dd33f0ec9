"""CLI module for scalable-glmb."""

from .app import app

__all__ = ["app"]

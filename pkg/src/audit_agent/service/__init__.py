"""FastAPI service wrapping the audit agent and compliance oracle."""

from .app import app, create_app

__all__ = ["app", "create_app"]

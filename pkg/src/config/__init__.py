"""Process-wide defaults for the multibath dynamics toolkit."""
from .settings import settings, Settings

__all__ = ["settings", "Settings"]

"""HTTP service wrapping the spectral toolkit.

``schemas`` defines the request/response models shared by the FastAPI app
and the command-line client; ``app`` wires them to endpoints; ``handlers``
holds the transport-free logic so the CLI can call it in-process.
"""

from .app import app, create_app

__all__ = ["app", "create_app"]

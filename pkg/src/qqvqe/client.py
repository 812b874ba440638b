"""Thin client for the service API.

The CLI talks to the service exclusively through this client.  By default
requests are dispatched to the FastAPI app in-process over an ASGI
transport (no server needed, fully deterministic); pass a base URL to
target a remote instance instead.
"""

from __future__ import annotations

import asyncio

import httpx


class ServiceError(Exception):
    """Non-2xx response from the service; carries the HTTP status."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"HTTP {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    def __init__(self, server: str | None = None, timeout: float | None = None):
        self.server = server
        self.timeout = timeout

    def _request(self, method: str, path: str, **kwargs) -> dict:
        async def go():
            if self.server is None:
                from .service.app import app

                transport = httpx.ASGITransport(app=app)
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://qqvqe.local",
                    timeout=self.timeout,
                ) as client:
                    return await client.request(method, path, **kwargs)
            async with httpx.AsyncClient(
                base_url=self.server, timeout=self.timeout
            ) as client:
                return await client.request(method, path, **kwargs)

        response = asyncio.run(go())
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, str(detail))
        return response.json()

    def get(self, path: str, params: dict | None = None) -> dict:
        return self._request("GET", path, params=params)

    def post(self, path: str, payload: dict | None = None, params: dict | None = None) -> dict:
        return self._request("POST", path, json=payload, params=params)

"""Slippy-tile fetching, disk caching and in-memory serving.

A fixed pool of worker threads performs HTTP fetches and disk writes;
the render thread only does non-blocking lookups.  Disk layout is
``root/{provider}/{z}/{x}/{y}.png`` with atomic writes (temp + rename),
and tiles are never evicted or expired.
"""

from __future__ import annotations

import io
import json
import math
import os
import queue
import re
import threading
import time
import urllib.request
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from .projection import TILE_SIZE, ViewState

__all__ = [
    "TileProvider", "TileCoord", "TileCache", "TileStatus", "TileHandle",
    "tile_url", "tiles_for_view", "builtin_providers", "default_cache_dir",
]

USER_AGENT = "terramap/0.1 (+https://example.org/terramap; tile cache)"
BLANK_GRAY = 225


@dataclass(frozen=True)
class TileProvider:
    """Slippy tile server description; template must contain {z},{x},{y} once each."""

    url_template: str
    attribution: str = ""
    name: str = "custom"

    def __post_init__(self):
        for ph in ("{z}", "{x}", "{y}"):
            if self.url_template.count(ph) != 1:
                raise ValueError(
                    f"url template must contain {ph} exactly once: {self.url_template!r}"
                )
        if not re.fullmatch(r"[A-Za-z0-9_.-]+", self.name):
            raise ValueError(f"provider name {self.name!r} is not filesystem-safe")


@dataclass(frozen=True)
class TileCoord:
    z: int
    x: int
    y: int

    def __post_init__(self):
        if not 0 <= self.z <= 20:
            raise ValueError(f"zoom {self.z} outside [0, 20]")
        n = 1 << self.z
        if not (0 <= self.x < n and 0 <= self.y < n):
            raise ValueError(f"tile ({self.x}, {self.y}) outside the 2^{self.z} grid")


def builtin_providers() -> dict[str, TileProvider]:
    """Preset providers shipped as package config."""
    raw = json.loads(
        resources.files("terramap").joinpath("providers.json").read_text()
    )
    return {k: TileProvider(**v) for k, v in raw.items()}


def tile_url(provider: TileProvider, coord: TileCoord) -> str:
    return (provider.url_template
            .replace("{z}", str(coord.z))
            .replace("{x}", str(coord.x))
            .replace("{y}", str(coord.y)))


def tiles_for_view(view: ViewState) -> list[TileCoord]:
    """Tiles covering the viewport plus a one-tile margin ring, clipped."""
    n = 1 << view.zoom
    tx0 = int(math.floor(view.origin_wx / TILE_SIZE)) - 1
    ty0 = int(math.floor(view.origin_wy / TILE_SIZE)) - 1
    tx1 = int(math.floor((view.origin_wx + view.screen_w - 1) / TILE_SIZE)) + 1
    ty1 = int(math.floor((view.origin_wy + view.screen_h - 1) / TILE_SIZE)) + 1
    out = []
    for ty in range(max(ty0, 0), min(ty1, n - 1) + 1):
        for tx in range(max(tx0, 0), min(tx1, n - 1) + 1):
            out.append(TileCoord(view.zoom, tx, ty))
    return out


class TileStatus(Enum):
    READY = "ready"
    PENDING = "pending"
    FAILED = "failed"


@dataclass
class TileHandle:
    status: TileStatus
    image: np.ndarray | None = None  # RGBA uint8 when READY


def default_cache_dir() -> Path:
    env = os.environ.get("TERRAMAP_TILE_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "terramap" / "tiles"


def _decode(data: bytes) -> np.ndarray:
    # dispatch on magic bytes: PNG or JPEG
    if not (data[:8] == b"\x89PNG\r\n\x1a\n" or data[:2] == b"\xff\xd8"):
        raise ValueError("tile is neither PNG nor JPEG")
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGBA"), dtype=np.uint8)


def blank_tile() -> np.ndarray:
    tile = np.empty((TILE_SIZE, TILE_SIZE, 4), dtype=np.uint8)
    tile[..., :3] = BLANK_GRAY
    tile[..., 3] = 255
    return tile


class TileCache:
    """Disk + memory tile cache with background fetch workers."""

    def __init__(self, root_dir=None, n_workers: int = 4, max_attempts: int = 3,
                 backoff_base: float = 0.5, fetcher=None):
        self.root = Path(root_dir) if root_dir else default_cache_dir()
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self._fetch_bytes = fetcher or self._http_get
        self._memory: dict = {}
        self._failed: set = set()
        self._pending: set = set()
        self._lock = threading.Lock()
        self._queue: queue.Queue = queue.Queue()
        self._workers = []
        self._n_workers = n_workers
        self.fetch_count = 0  # network fetch attempts actually issued

    # -- key/path helpers ----------------------------------------------

    def tile_path(self, provider: TileProvider, coord: TileCoord) -> Path:
        return self.root / provider.name / str(coord.z) / str(coord.x) / f"{coord.y}.png"

    @staticmethod
    def _key(provider: TileProvider, coord: TileCoord):
        return (provider.name, coord.z, coord.x, coord.y)

    # -- public API -----------------------------------------------------

    def request_tile(self, provider: TileProvider, coord: TileCoord) -> TileHandle:
        """Non-blocking tile lookup; enqueues at most one fetch per key."""
        key = self._key(provider, coord)
        with self._lock:
            img = self._memory.get(key)
            if img is not None:
                return TileHandle(TileStatus.READY, img)
            if key in self._failed:
                return TileHandle(TileStatus.FAILED)
            already_pending = key in self._pending

        path = self.tile_path(provider, coord)
        if path.exists():
            try:
                img = _decode(path.read_bytes())
            except (ValueError, OSError):
                path.unlink(missing_ok=True)
            else:
                with self._lock:
                    self._memory[key] = img
                return TileHandle(TileStatus.READY, img)

        if not already_pending:
            with self._lock:
                if key not in self._pending:
                    self._pending.add(key)
                    self._queue.put((provider, coord))
            self._ensure_workers()
        return TileHandle(TileStatus.PENDING)

    def wait_idle(self, timeout: float = 30.0) -> bool:
        """Block until no fetches are pending (for headless export/tests)."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            with self._lock:
                if not self._pending:
                    return True
            time.sleep(0.01)
        return False

    # -- internals ------------------------------------------------------

    def _ensure_workers(self) -> None:
        with self._lock:
            if not self._workers:
                for i in range(self._n_workers):
                    t = threading.Thread(
                        target=self._worker, name=f"tile-worker-{i}", daemon=True
                    )
                    t.start()
                    self._workers.append(t)

    def _http_get(self, url: str) -> bytes:
        req = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
        with urllib.request.urlopen(req, timeout=20) as resp:
            if resp.status >= 400:
                raise OSError(f"HTTP {resp.status} for {url}")
            return resp.read()

    def _worker(self) -> None:
        while True:
            provider, coord = self._queue.get()
            key = self._key(provider, coord)
            url = tile_url(provider, coord)
            img = None
            for attempt in range(self.max_attempts):
                try:
                    with self._lock:
                        self.fetch_count += 1
                    data = self._fetch_bytes(url)
                    img = _decode(data)
                except Exception:
                    if attempt + 1 < self.max_attempts:
                        time.sleep(self.backoff_base * (2 ** attempt))
                    continue
                self._store(provider, coord, data)
                break
            with self._lock:
                if img is not None:
                    self._memory[key] = img
                else:
                    self._failed.add(key)
                self._pending.discard(key)
            self._queue.task_done()

    def _store(self, provider: TileProvider, coord: TileCoord, data: bytes) -> None:
        path = self.tile_path(provider, coord)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp-{threading.get_ident()}")
        try:
            tmp.write_bytes(data)
            os.replace(tmp, path)
        except OSError:
            tmp.unlink(missing_ok=True)

"""On-disk JSON cache of command results, keyed by the canonical request."""
import fcntl
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

from .errors import ConsistencyError
from .settings import CACHE_LOCK_RETRIES, CACHE_LOCK_WAIT_S, CACHE_PATH, SCHEMA_VERSION
from .utils import get_logger

logger = get_logger(__name__)

HIT = "hit"
MISS = "miss"
BYPASS = "bypass"
VERIFIED = "verified"


def canonical_bytes(payload: Any) -> bytes:
    "Key order independent serialisation, hashed into the entry name"
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def stored_bytes(payload: Any) -> bytes:
    "Serialisation written to disk and compared on verification, key order kept"
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def normalized(payload: Any) -> Any:
    "Payload as it reads back from the cache (tuples become lists, keys strings)"
    return json.loads(stored_bytes(payload).decode("utf-8"))


@dataclass
class ResultCache:
    """
    Cache de résultats JSON sur disque.

    Chaque entrée est un fichier ``<sha256 de la clé>.json`` ; l'accès est
    protégé par un verrou consultatif (fcntl) acquis avec plusieurs
    tentatives.
    """
    directory: Path = CACHE_PATH
    max_retries: int = CACHE_LOCK_RETRIES
    wait_s: float = CACHE_LOCK_WAIT_S
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.directory = Path(self.directory)

    # Paths
    ################################################

    def key_path(self, key: Dict[str, Any]) -> Path:
        digest = hashlib.sha256(canonical_bytes({"schema": SCHEMA_VERSION, "key": key})).hexdigest()
        return self.directory / f"{digest}.json"

    # Locking
    ################################################

    def _acquire(self, handle, exclusive: bool) -> None:
        mode = (fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH) | fcntl.LOCK_NB
        for attempt in range(1, self.max_retries + 1):
            try:
                fcntl.flock(handle.fileno(), mode)
                return
            except BlockingIOError:
                logger.debug(f"Cache lock busy (attempt {attempt}/{self.max_retries})")
                if attempt == self.max_retries:
                    raise ConsistencyError(f"Could not lock the cache entry {handle.name}")
            time.sleep(self.wait_s)

    # Store / load
    ################################################

    def load(self, key: Dict[str, Any]) -> Any:
        """Returns the cached payload, or None when absent or corrupted.

        A corrupted entry is removed and a warning is recorded.
        """
        path = self.key_path(key)
        if not path.exists():
            return None
        with open(path, "rb") as handle:
            self._acquire(handle, exclusive=False)
            try:
                raw = handle.read()
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        try:
            entry = json.loads(raw.decode("utf-8"))
            if entry.get("key") != key:
                raise ValueError("key mismatch")
            return entry["payload"]
        except (ValueError, KeyError, AttributeError, UnicodeDecodeError) as e:
            message = f"Corrupted cache entry {path.name} discarded ({e})"
            logger.warning(message)
            self.warnings.append(message)
            path.unlink(missing_ok=True)
            return None

    def store(self, key: Dict[str, Any], payload: Any) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.key_path(key)
        data = stored_bytes({"key": key, "payload": payload})
        with open(path, "a+b") as handle:
            self._acquire(handle, exclusive=True)
            try:
                handle.seek(0)
                handle.truncate()
                handle.write(data)
                handle.flush()
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        logger.debug(f"Stored cache entry {path.name}")
        return path

    def roundtrip(self, key: Dict[str, Any], compute: Callable[[], Any],
                  use_cache: bool = True, verify: bool = False) -> Tuple[Any, str]:
        """Loads the payload for key, computing and storing it on a miss.

        Args:
            key (dict): JSON serialisable request description.
            compute (callable): Produces the JSON serialisable payload.
            use_cache (bool): False bypasses the cache entirely.
            verify (bool): On a hit, recompute and compare the bytes.

        Returns:
            tuple: (payload, provenance) with provenance in hit, miss,
            bypass, verified.

        Raises:
            ConsistencyError: verify is set and the recomputed payload differs.
        """
        if not use_cache:
            return normalized(compute()), BYPASS

        cached = self.load(key)
        if cached is None:
            payload = normalized(compute())
            self.store(key, payload)
            return payload, MISS

        if verify:
            fresh = normalized(compute())
            if stored_bytes(fresh) != stored_bytes(cached):
                raise ConsistencyError(f"Cached payload differs from a fresh computation ({self.key_path(key).name})")
            return cached, VERIFIED
        return cached, HIT

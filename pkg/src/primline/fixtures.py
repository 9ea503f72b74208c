"""Reference prime-power lists shipped as hash-pinned data files."""

from __future__ import annotations

import hashlib
import json
import logging
from importlib import resources
from pathlib import Path

log = logging.getLogger(__name__)

FIXTURES = {
    "l3_exceptions": "l3_exceptions.txt",  # q not in L_3
    "cubic_146": "cubic_146.txt",  # survivors of the basic sieve, n=3
    "cubic_82": "cubic_82.txt",  # survivors of the refined cubic sieve
    "e4": "e4.txt",  # possible quartic exceptions
    "e4_excluded": "e4_excluded.txt",
    "e4_added": "e4_added.txt",
    "g_l": "g_l.txt",  # confirmed quartic line failures
    "g_t": "g_t.txt",  # confirmed quartic translate failures
}


class FixtureError(RuntimeError):
    pass


def _data_dir(directory: str | Path | None) -> Path:
    if directory is not None:
        return Path(directory)
    return Path(str(resources.files("primline") / "data"))


def _manifest(directory: Path) -> dict:
    return json.loads((directory / "manifest.json").read_text())


def fixture_sha(name: str, directory: str | Path | None = None) -> str:
    path = _data_dir(directory) / FIXTURES[name]
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_fixture(name: str, directory: str | Path | None = None) -> list[int]:
    """Sorted integers of a fixture, verified against manifest.json."""
    d = _data_dir(directory)
    path = d / FIXTURES[name]
    if not path.exists():
        raise FixtureError(f"missing fixture {path}")
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    expected = _manifest(d).get(FIXTURES[name], {}).get("sha256")
    if digest != expected:
        raise FixtureError(f"{path} hash {digest} does not match manifest {expected}")
    log.info("fixture %s sha256=%s", FIXTURES[name], digest)
    values = [int(line) for line in raw.decode().split()]
    if values != sorted(set(values)):
        raise FixtureError(f"{path} is not a sorted list of distinct integers")
    return values


def write_list(path: str | Path, values) -> None:
    Path(path).write_text("".join(f"{v}\n" for v in sorted(values)))

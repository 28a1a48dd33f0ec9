"""Loading RunConfig from TOML with errors that point at the offending line."""

import re
import tomllib
from pathlib import Path

from pydantic import ValidationError

from ..core.errors import ConfigError
from .run import RunConfig

_TABLE = re.compile(r"^\s*\[\[?\s*([A-Za-z0-9_.\-\s\"]+?)\s*\]\]?\s*(#.*)?$")
_KEY = re.compile(r"^\s*\"?([A-Za-z0-9_\-]+)\"?\s*=")


def find_key_line(text: str, path: tuple[str | int, ...]) -> int | None:
    """1-based line where a key path is set, or where its table starts.

    List indices in the path are ignored, so an error inside the n-th entry
    of an array of tables points at the first matching key.
    """
    names = [str(part) for part in path if not isinstance(part, int)]
    best: tuple[int, int] | None = None
    table: list[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if header := _TABLE.match(line):
            table = [p.strip().strip('"') for p in header.group(1).split(".")]
            depth = len(table)
            if table == names[:depth] and (best is None or depth > best[0]):
                best = (depth, number)
            continue
        if key := _KEY.match(line):
            full = [*table, key.group(1)]
            depth = len(full)
            if full == names[:depth] and (best is None or depth > best[0]):
                best = (depth, number)
    return best[1] if best else None


def load_run_config(path: Path) -> RunConfig:
    """Read and validate a run configuration.

    An empty file gives the defaults. Unknown keys are rejected.

    Args:
        path: TOML file

    Returns:
        The validated configuration

    Raises:
        ConfigError: If the file cannot be read, is not valid TOML or fails
            validation; the message names the file, key and line
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config: {e}") from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: invalid TOML: {e}") from e
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = tuple(error["loc"])
        key = ".".join(str(part) for part in loc) or "<root>"
        line = find_key_line(text, loc)
        where = f"{path}:{line}" if line is not None else str(path)
        raise ConfigError(f"{where}: {key}: {error['msg']}") from e

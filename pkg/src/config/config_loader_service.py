"""Service for reading flat `key = value` run configuration files."""

import ast
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import ValidationError

from src.core.errors import ConfigError
from src.models.config import RunConfig

KEY_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")
BARE_WORDS = {"true": True, "false": False, "none": None, "null": None}


def parse_value(text: str) -> Any:
    """Python literal, then true/false/none, then the bare string."""
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return BARE_WORDS.get(text.lower(), text)


def parse_lines(text: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """
    Parse configuration text into nested sections.

    Returns:
        Nested dict built from dotted keys, and the line number of every key

    Raises:
        ConfigError: On a malformed line, an invalid or repeated key, or a key
            that is both a value and a section
    """
    data: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not KEY_PATTERN.match(key):
            raise ConfigError("malformed key", key=key, line=number)
        if key in lines:
            raise ConfigError(f"repeated key (first set at line {lines[key]})", key=key, line=number)
        if value == "":
            raise ConfigError("missing value", key=key, line=number)

        node = data
        parts = key.split(".")
        for depth, part in enumerate(parts[:-1]):
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                prefix = ".".join(parts[: depth + 1])
                raise ConfigError(f"'{prefix}' is a value, not a section", key=key, line=number)
            node = child
        if isinstance(node.get(parts[-1]), dict):
            raise ConfigError("key is a section, not a value", key=key, line=number)
        node[parts[-1]] = parse_value(value)
        lines[key] = number
    return data, lines


def _line_for(key: str, lines: Dict[str, int]) -> Optional[int]:
    """Line of the key or of the deepest configured key under it."""
    if key in lines:
        return lines[key]
    nested = [line for name, line in lines.items() if name.startswith(key + ".")]
    if nested:
        return min(nested)
    parent = key.rsplit(".", 1)[0] if "." in key else None
    return _line_for(parent, lines) if parent else None


class ConfigLoaderService:
    """Service responsible only for turning configuration files into RunConfig."""

    def parse(
        self,
        text: str,
        seed: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> RunConfig:
        """
        Validate configuration text.

        Args:
            text: File contents
            seed: Command-line seed overriding the file
            output_dir: Command-line output directory overriding the file

        Returns:
            Validated RunConfig

        Raises:
            ConfigError: Naming the offending key and its line
        """
        data, lines = parse_lines(text)
        if seed is not None:
            data["seed"] = seed
        if output_dir is not None:
            data["output_dir"] = output_dir
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            key = ".".join(str(part) for part in error["loc"] if not isinstance(part, int))
            logging.error("Invalid configuration key %s: %s", key, error["msg"])
            raise ConfigError(error["msg"], key=key or None, line=_line_for(key, lines)) from e

    def load(
        self,
        path: Union[str, Path],
        seed: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> RunConfig:
        """Read and validate a configuration file."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            logging.error("Error reading configuration %s: %s", path, e)
            raise ConfigError(f"cannot read {path}: {e}") from e
        config = self.parse(text, seed, output_dir)
        logging.info("Loaded configuration %s (seed %d)", path, config.seed)
        return config

"""Experiment config files: one `dotted.key = value` per line.

Blank lines and lines starting with '#' are ignored. A value containing a comma
is a list (a trailing comma marks a one-element list); `none` clears an optional
field; where the field does not take None (an enum member called none, say) the
literal word is used instead.
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from pnpreg.models.experiment import ExperimentConfig
from pnpreg.utils.errors import ConfigError

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("problem.n", "solver.algorithm")
NONE_VALUES = ("none", "null")


def _parse_value(raw: str) -> Any:
    if raw.lower() in NONE_VALUES:
        return None
    if "," in raw:
        return [item.strip() for item in raw.split(",") if item.strip()]
    return raw


def _insert(tree: Dict[str, Any], key: str, value: Any) -> Optional[str]:
    """Place value at the dotted key; returns a message on a section/key clash."""
    parts = key.split(".")
    node = tree
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            return f"'{part}' is a value, not a section"
        node = child
    if isinstance(node.get(parts[-1]), dict):
        return f"'{key}' is a section, not a value"
    node[parts[-1]] = value
    return None


def _error_key(loc: Tuple[Union[str, int], ...]) -> str:
    return ".".join(str(part) for part in loc if not isinstance(part, int))


def _line_for(key: str, lines: Dict[str, int]) -> Optional[int]:
    # walk up from the exact key to its enclosing section
    while key:
        if key in lines:
            return lines[key]
        matches = [line for k, line in lines.items() if k.startswith(key + ".")]
        if matches:
            return min(matches)
        key = key.rpartition(".")[0]
    return None


def _validate(tree: Dict[str, Any]) -> Tuple[Optional[ExperimentConfig], List[Dict[str, Any]]]:
    try:
        return ExperimentConfig.model_validate(tree), []
    except ValidationError as e:
        return None, e.errors()


def parse_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse and validate config text; every problem found is reported at once."""
    tree: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    diagnostics: List[Tuple[Optional[int], str, str]] = []
    # keys whose value read as None, with the word as written
    none_words: Dict[str, str] = {}

    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            diagnostics.append((number, line, "expected 'key = value'"))
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            diagnostics.append((number, line, "missing key"))
            continue
        if key in lines:
            diagnostics.append((number, key, f"duplicate key (first set on line {lines[key]})"))
            continue
        parsed = _parse_value(value)
        clash = _insert(tree, key, parsed)
        if clash:
            diagnostics.append((number, key, clash))
            continue
        lines[key] = number
        if parsed is None:
            none_words[key] = value.lower()

    for key in REQUIRED_KEYS:
        if key not in lines:
            diagnostics.append((None, key, "missing required key"))

    config = None
    if not diagnostics:
        config, errors = _validate(tree)
        rejected_nones = {_error_key(error["loc"]) for error in errors} & set(none_words)
        if rejected_nones:
            for key in rejected_nones:
                _insert(tree, key, none_words[key])
            config, errors = _validate(tree)
        for error in errors:
            key = _error_key(error["loc"]) or "<root>"
            message = "unknown key" if error["type"] == "extra_forbidden" else error["msg"]
            diagnostics.append((_line_for(key, lines), key, message))

    if diagnostics:
        logger.error(f"Invalid config {source}: {len(diagnostics)} problem(s)")
        raise ConfigError(diagnostics)
    return config


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError([(None, str(path), f"cannot read config file: {e}")]) from e
    config = parse_text(text, source=str(path))
    logger.info(f"Loaded config {path} ({config.solver.algorithm.value}, n={config.problem.n})")
    return config


def _flatten(prefix: str, value: Any, out: List[str]) -> None:
    if isinstance(value, dict):
        for key, child in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, child, out)
    elif value is None:
        out.append(f"{prefix} = none")
    elif isinstance(value, (list, tuple)):
        items = ", ".join(_format_scalar(v) for v in value)
        out.append(f"{prefix} = {items}," if len(value) == 1 else f"{prefix} = {items}")
    else:
        out.append(f"{prefix} = {_format_scalar(value)}")


def _format_scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def serialize(config: ExperimentConfig) -> str:
    """Config text that parses back to an equal config."""
    out: List[str] = []
    _flatten("", config.model_dump(mode="json"), out)
    return "\n".join(out) + "\n"

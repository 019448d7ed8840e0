"""Plain-text experiment configuration.

An INI-style file with one ``[experiment NAME]`` section per experiment::

    # Comparison of common- and specific-source LRs
    [experiment A]
    comparison = CSvsSS
    mu = 10
    var_d = 10
    mu_d = 9
    var_u = 2
    var_s = 1
    n_reps = 1000
    seed = 42

``comparison`` is one of ``CSvsSS``, ``SLRCSvsSS``, ``SLRESvsSS``,
``ASYvsSS`` or ``ALL``.  ``n_reps`` defaults to 1000 and ``seed`` to 42;
the parameter keys are required.
"""

from __future__ import annotations

import configparser
import re

from .errors import ConfigurationError, EvidentiaError
from .experiments import Comparison, ExperimentConfig
from .generative import SpecificSourceParams

SECTION_PREFIX = "experiment "
PARAM_KEYS = ("mu", "var_d", "mu_d", "var_u", "var_s")
OPTIONAL_KEYS = ("comparison", "n_reps", "seed")
DEFAULTS = {"comparison": "ALL", "n_reps": "1000", "seed": "42"}


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    header = re.compile(r"^\s*\[\s*" + re.escape(section) + r"\s*\]\s*$")
    key_re = re.compile(r"^\s*" + re.escape(key) + r"\s*[=:]") if key else None
    inside = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("["):
            inside = bool(header.match(line))
            if inside and key_re is None:
                return lineno
            continue
        if inside and key_re is not None and key_re.match(line):
            return lineno
    return None


def _fail(source: str, text: str, section: str, key: str | None, message: str):
    # A missing key is reported at its section header.
    line = _line_of(text, section, key) or _line_of(text, section)
    where = f"{source}:{line}" if line else source
    field = f" field '{key}'" if key else ""
    raise ConfigurationError(f"{where}: [{section}]{field}: {message}")


def parse_config(text: str, source: str = "<config>") -> list:
    """Parse configuration text into a list of :class:`ExperimentConfig`."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(" ".join(str(exc).split())) from exc

    configs = []
    for section in parser.sections():
        if not section.startswith(SECTION_PREFIX):
            _fail(source, text, section, None,
                  f"unknown section; expected '[{SECTION_PREFIX}NAME]'")
        name = section[len(SECTION_PREFIX):].strip()
        values = parser[section]
        for key in values:
            if key not in PARAM_KEYS + OPTIONAL_KEYS:
                _fail(source, text, section, key, "unknown field")
        for key in PARAM_KEYS:
            if key not in values:
                _fail(source, text, section, key, "missing required field")
        numbers = {}
        for key in PARAM_KEYS:
            try:
                numbers[key] = float(values[key])
            except ValueError:
                _fail(source, text, section, key, f"not a number: {values[key]!r}")
        ints = {}
        for key in ("n_reps", "seed"):
            raw = values.get(key, DEFAULTS[key])
            try:
                ints[key] = int(raw)
            except ValueError:
                _fail(source, text, section, key, f"not an integer: {raw!r}")
        raw = values.get("comparison", DEFAULTS["comparison"])
        try:
            comparison = Comparison(raw)
        except ValueError:
            choices = ", ".join(c.value for c in Comparison)
            _fail(source, text, section, "comparison", f"{raw!r} is not one of {choices}")
        try:
            params = SpecificSourceParams(**numbers)
            configs.append(ExperimentConfig(name=name, params=params, n_reps=ints["n_reps"],
                                            comparison=comparison, seed=ints["seed"]))
        except EvidentiaError as exc:
            _fail(source, text, section, None, str(exc))
    if not configs:
        raise ConfigurationError(f"{source}: no [{SECTION_PREFIX}NAME] sections found")
    return configs


def load_config(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def serialize_config(configs) -> str:
    """Inverse of :func:`parse_config`."""
    blocks = []
    for c in configs:
        p = c.params
        lines = [f"[{SECTION_PREFIX}{c.name}]",
                 f"comparison = {c.comparison.value}"]
        lines += [f"{key} = {getattr(p, key)!r}" for key in PARAM_KEYS]
        lines += [f"n_reps = {c.n_reps}", f"seed = {c.seed}"]
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)

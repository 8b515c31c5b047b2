"""
Flat key-value configuration files.

One ``section.key = value`` assignment per line; ``#`` starts a comment.
Recognised sections:

``defaults``          option values for every subcommand (``defaults.threshold = 0.15``)
``<subcommand>``      option values for one subcommand (``compare.format = markdown``)
``protocol``          free-text protocol inputs (``protocol.fee_treatment = net of fees``)
``periods_per_year``  annualization overrides (``periods_per_year.daily = 260``)
``voltarget``         default vol-target parameters (``target_vol``, ``lookback``, ``cap``)
``capture``           ``capture.epsilon``
``rule``              named compare rules (``rule.defensive = constant:0.7``)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

ENV_VAR = "PATHLENS_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    sections: dict = field(default_factory=dict)
    path: Optional[Path] = None

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def section(self, name: str) -> dict:
        return dict(self.sections.get(name, {}))

    def option(self, subcommand: str, key: str, default=None):
        """Subcommand-specific value, else ``defaults``, else ``default``."""
        value = self.get(subcommand, key)
        if value is None:
            value = self.get("defaults", key, default)
        return value


def parse_config(text: str, path=None) -> Config:
    sections = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, eq, value = line.partition("=")
        name = name.strip()
        if not eq or "." not in name:
            raise ConfigError(f"{path or 'config'}:{lineno}: expected 'section.key = value', got {raw.strip()!r}")
        section, _, key = name.partition(".")
        if not section or not key:
            raise ConfigError(f"{path or 'config'}:{lineno}: empty section or key in {name!r}")
        sections.setdefault(section.strip(), {})[key.strip().replace("-", "_")] = value.strip()
    return Config(sections, Path(path) if path else None)


def load_config(path=None) -> Config:
    """Read ``path``, else the file named by ``$PATHLENS_CONFIG``, else an empty config."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return Config()
    p = Path(path)
    return parse_config(p.read_text(encoding="utf-8"), p)

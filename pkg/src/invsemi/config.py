"""Size and search caps.

Defaults can be overridden by a ``KEY=VALUE`` file named ``invsemi.env``
in the working directory, and command-line flags override both.
"""

from dataclasses import dataclass, fields, replace
from pathlib import Path

CONFIG_FILENAME = "invsemi.env"


@dataclass(frozen=True)
class Limits:
    munn_cap: int = 10_000
    lattice_cap: int = 20_000
    search_steps: int = 10_000_000
    pa_cap: int = 5_000
    catalog_max_order: int = 6
    universe_cap: int = 16

    def override(self, **kwargs):
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_LIMITS = Limits()


def load_limits(directory=None):
    """Read ``invsemi.env`` from ``directory`` (default: cwd) on top of the defaults."""
    path = Path(directory or ".") / CONFIG_FILENAME
    if not path.is_file():
        return DEFAULT_LIMITS
    known = {f.name for f in fields(Limits)}
    values = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key in known:
            values[key] = int(value.replace("_", ""))
    return replace(DEFAULT_LIMITS, **values)

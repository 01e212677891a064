"""Plain-text experiment configs: ``key = value`` lines under [section] headers.

Comments start with '#'. Values stay strings until a typed getter pulls them
out; list values are comma or whitespace separated.
"""

from __future__ import annotations

from pathlib import Path

from .surface import FlatStrip, Icosphere, MeshSpec, PerturbedSphere


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Config:
    """Parsed config: sections of string key/value pairs with typed getters."""

    def __init__(self, sections: dict[str, dict[str, str]], source: str = "<config>"):
        self.sections = sections
        self.source = source

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> "Config":
        sections: dict[str, dict[str, str]] = {}
        current = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                if not line.endswith("]") or len(line) < 3:
                    raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
                current = line[1:-1].strip().lower()
                sections.setdefault(current, {})
                continue
            if "=" not in line:
                raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
            if current is None:
                raise ConfigError("key outside any [section]", lineno)
            key, _, value = line.partition("=")
            sections[current][key.strip().lower()] = value.strip()
        return cls(sections, source)

    @classmethod
    def load(cls, path) -> "Config":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        return cls.parse(path.read_text(), source=str(path))

    def has(self, section: str, key: str) -> bool:
        return key in self.sections.get(section, {})

    def get(self, section: str, key: str, default=None, required: bool = False) -> str:
        try:
            return self.sections[section][key]
        except KeyError:
            if required:
                raise ConfigError(f"missing [{section}] {key} in {self.source}") from None
            return default

    def get_float(self, section: str, key: str, default=None, required=False) -> float:
        raw = self.get(section, key, required=required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None

    def get_int(self, section: str, key: str, default=None, required=False) -> int:
        raw = self.get(section, key, required=required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}") from None

    def get_floats(self, section: str, key: str, default=None, required=False) -> list[float]:
        raw = self.get(section, key, required=required)
        if raw is None:
            return default
        parts = [p for chunk in raw.split(",") for p in chunk.split()]
        try:
            return [float(p) for p in parts]
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected numbers, got {raw!r}") from None


def mesh_spec_from_config(config: Config, section: str = "mesh") -> MeshSpec | str:
    """Build the MeshSpec named by a config section.

    Returns the string "sphere_pair" for the two-disjoint-spheres geometry,
    which is assembled by the experiment driver.
    """
    kind = config.get(section, "kind", required=True).lower()
    if kind == "icosphere":
        return Icosphere(subdivisions=config.get_int(section, "subdivisions", 0),
                         radius=config.get_float(section, "radius", 1.0))
    if kind == "flat_strip":
        return FlatStrip(nx=config.get_int(section, "nx", 1),
                         ny=config.get_int(section, "ny", 1),
                         lx=config.get_float(section, "lx", 1.0),
                         ly=config.get_float(section, "ly", 1.0))
    if kind == "perturbed_sphere":
        return PerturbedSphere(subdivisions=config.get_int(section, "subdivisions", 0),
                               radius=config.get_float(section, "radius", 1.0),
                               amplitude=config.get_float(section, "amplitude", 0.0),
                               frequency=config.get_int(section, "frequency", 1))
    if kind == "sphere_pair":
        return "sphere_pair"
    raise ConfigError(f"unknown mesh kind {kind!r}")

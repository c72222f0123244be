"""Collaboration config: `[section]` headers with `key = value` lines.

    [collaboration]
    name = climate-collab
    collaborator = alice
    flag_mode = marker-tree

    [dtn.anl]
    host = 127.0.0.1
    port = 7001
    backend_root = /data/anl

    [sds]
    mode = inline-async
    flush_count = 64
    flush_ms = 500
    flush_bytes = 67108864
    spec_file = attributes.spec

    [namespaces]
    climate = alice:global

    [shard]
    fsync = true
    snapshot_every = 10000
"""
import configparser
import os
from dataclasses import dataclass, field
from typing import List, Optional
from . import CONFIG_ENV
from ..backend import MODE_MARKER, MODE_XATTR
from ..core.records import DtnDescriptor, NamespaceTemplate, index_dtns
from ..metashard import SNAPSHOT_EVERY
from ..sds import MODES, MODE_INLINE_SYNC, FLUSH_COUNT, FLUSH_MS, FLUSH_BYTES
from ..sds.queue import Thresholds
from ..sds.specs import load_spec_file
from ..utils.errors import ConfigError, BadName

DTN_PREFIX = "dtn."


@dataclass
class CollabConfig:
    name: str
    collaborator: str
    dtns: List[DtnDescriptor]
    mode: str = MODE_INLINE_SYNC
    thresholds: Thresholds = Thresholds()
    spec_file: Optional[str] = None
    specs: frozenset = frozenset()
    namespaces: List[NamespaceTemplate] = field(default_factory=list)
    fsync: bool = True
    snapshot_every: int = SNAPSHOT_EVERY
    flag_mode: str = MODE_MARKER
    source: Optional[str] = None

    def dtn(self, key: str) -> DtnDescriptor:
        """A DTN by id, or by dense index when given digits."""
        for d in self.dtns:
            if d.id == key:
                return d
        if key.isdigit() and int(key) < len(self.dtns):
            return self.dtns[int(key)]
        raise ConfigError("No DTN {!r} in {}".format(key, self.source or "the config"))


def _int(parser, section, key, default):
    try:
        return parser.getint(section, key, fallback=default)
    except ValueError as e:
        raise ConfigError("[{}] {} should be an integer: {}".format(section, key, e)) from e


def _relative_to(base_dir: str, path: str) -> str:
    path = os.path.expanduser(path)
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


def parse_config(text: str, base_dir: str = ".", source: str = None) -> CollabConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as e:
        raise ConfigError("Unreadable config: {}".format(e)) from e

    if not parser.has_section("collaboration"):
        raise ConfigError("Missing [collaboration] section")
    collab = parser["collaboration"]
    collaborator = collab.get("collaborator", "").strip()
    if not collaborator:
        raise ConfigError("[collaboration] collaborator is required")
    flag_mode = collab.get("flag_mode", MODE_MARKER).strip()
    if flag_mode not in (MODE_MARKER, MODE_XATTR):
        raise ConfigError("[collaboration] flag_mode should be {} or {}".format(MODE_MARKER, MODE_XATTR))

    entries = []
    for section in parser.sections():
        if not section.startswith(DTN_PREFIX):
            continue
        dtn_id = section[len(DTN_PREFIX):]
        if "backend_root" not in parser[section]:
            raise ConfigError("[{}] backend_root is required".format(section))
        entries.append(
            {
                "id": dtn_id,
                "host": parser[section].get("host", "127.0.0.1"),
                "port": _int(parser, section, "port", 0),
                "backend_root": _relative_to(base_dir, parser[section]["backend_root"]),
            }
        )
    if not entries:
        raise ConfigError("At least one [dtn.<id>] section is required")
    try:
        dtns = index_dtns(entries)
    except ValueError as e:
        raise ConfigError(str(e)) from e

    mode, thresholds, spec_file, specs = MODE_INLINE_SYNC, Thresholds(), None, frozenset()
    if parser.has_section("sds"):
        sds = parser["sds"]
        mode = sds.get("mode", MODE_INLINE_SYNC).strip()
        if mode not in MODES:
            raise ConfigError("[sds] mode should be one of {}, got {!r}".format(MODES, mode))
        try:
            thresholds = Thresholds(
                _int(parser, "sds", "flush_count", FLUSH_COUNT),
                _int(parser, "sds", "flush_ms", FLUSH_MS),
                _int(parser, "sds", "flush_bytes", FLUSH_BYTES),
            )
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if sds.get("spec_file"):
            spec_file = _relative_to(base_dir, sds["spec_file"])
            try:
                specs = load_spec_file(spec_file)
            except OSError as e:
                raise ConfigError("Cannot read spec file {}: {}".format(spec_file, e)) from e

    namespaces = []
    if parser.has_section("namespaces"):
        for name, value in parser["namespaces"].items():
            owner, sep, scope = value.partition(":")
            if not sep:
                raise ConfigError("[namespaces] {} should be `owner:local|global`, got {!r}".format(name, value))
            try:
                namespaces.append(NamespaceTemplate(name, owner.strip(), scope.strip()))
            except BadName as e:
                raise ConfigError(str(e)) from e

    fsync, snapshot_every = True, SNAPSHOT_EVERY
    if parser.has_section("shard"):
        try:
            fsync = parser.getboolean("shard", "fsync", fallback=True)
        except ValueError as e:
            raise ConfigError("[shard] fsync should be a boolean: {}".format(e)) from e
        snapshot_every = _int(parser, "shard", "snapshot_every", SNAPSHOT_EVERY)

    return CollabConfig(
        name=collab.get("name", "collaboration"),
        collaborator=collaborator,
        dtns=dtns,
        mode=mode,
        thresholds=thresholds,
        spec_file=spec_file,
        specs=specs,
        namespaces=namespaces,
        fsync=fsync,
        snapshot_every=snapshot_every,
        flag_mode=flag_mode,
        source=source,
    )


def load_config(path: Optional[str] = None) -> CollabConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        raise ConfigError("No config given; pass --config or set {}".format(CONFIG_ENV))
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError("Cannot read config {}: {}".format(path, e)) from e
    return parse_config(text, os.path.dirname(os.path.abspath(path)), path)

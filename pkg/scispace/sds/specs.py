from dataclasses import dataclass
from typing import FrozenSet, Iterable, List
from ..sdf.values import TAGS_BY_NAME, TYPE_NAMES
from ..utils.errors import ConfigError


@dataclass(frozen=True, order=True)
class AttributeSpec:
    name: str
    tag: int

    @property
    def type_name(self) -> str:
        return TYPE_NAMES[self.tag]

    def __str__(self):
        return "{}:{}".format(self.name, self.type_name)


def spec_set(specs: Iterable[AttributeSpec]) -> FrozenSet[AttributeSpec]:
    specs = list(specs)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError("Attribute spec names should be unique, got {}".format(sorted(names)))
    return frozenset(specs)


def parse_spec_line(line: str) -> AttributeSpec:
    name, sep, type_name = line.strip().rpartition(":")
    name, type_name = name.strip(), type_name.strip().lower()
    if not sep or not name or type_name not in TAGS_BY_NAME:
        raise ConfigError("Attribute spec lines look like `name:int|float|text`, got {!r}".format(line))
    return AttributeSpec(name, TAGS_BY_NAME[type_name])


def parse_spec_text(text: str) -> FrozenSet[AttributeSpec]:
    specs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            specs.append(parse_spec_line(line))
    return spec_set(specs)


def load_spec_file(path: str) -> FrozenSet[AttributeSpec]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_spec_text(f.read())


def spec_lines(specs: Iterable[AttributeSpec]) -> List[str]:
    return [str(s) for s in sorted(specs)]

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple
from . import OP_EQ, OP_GT, OP_LT, OP_LIKE, OP_SYMBOLS
from ..sdf import TAG_INT, TAG_FLOAT, TAG_TEXT
from ..sdf.values import AttributeValue
from ..utils.errors import QueryTypeError


@dataclass(frozen=True)
class Clause:
    attribute: str
    op: int
    literal: AttributeValue

    def __post_init__(self):
        if self.op not in OP_SYMBOLS:
            raise QueryTypeError("Unknown operator code {!r}".format(self.op))
        if self.op == OP_LIKE and self.literal.tag != TAG_TEXT:
            raise QueryTypeError("like needs a text literal, got {}".format(self.literal.type_name))
        if self.op in (OP_GT, OP_LT) and self.literal.tag not in (TAG_INT, TAG_FLOAT):
            raise QueryTypeError(
                "{} needs a numeric literal, got {}".format(OP_SYMBOLS[self.op], self.literal.type_name)
            )

    def __str__(self):
        literal = self.literal.value
        if self.literal.tag == TAG_TEXT:
            literal = '"{}"'.format(literal.replace("\\", "\\\\").replace('"', '\\"'))
        return '"{}" {} {}'.format(self.attribute, OP_SYMBOLS[self.op], literal)


@dataclass(frozen=True)
class Predicate:
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if not self.clauses:
            raise QueryTypeError("A predicate needs at least one clause")
        object.__setattr__(self, "clauses", tuple(self.clauses))

    def __str__(self):
        return " AND ".join(str(c) for c in self.clauses)


@lru_cache(maxsize=1024)
def like_to_regex(pattern: str):
    """`%` matches any run of characters, `_` exactly one; case-sensitive."""
    out = []
    for ch in pattern:
        if ch == "%":
            out.append(".*")
        elif ch == "_":
            out.append(".")
        else:
            out.append(re.escape(ch))
    return re.compile("".join(out), re.DOTALL)


def matches(value: AttributeValue, op: int, literal: AttributeValue) -> bool:
    if op == OP_EQ:
        return value.tag == literal.tag and value.value == literal.value
    if op == OP_LIKE:
        return value.tag == TAG_TEXT and like_to_regex(literal.value).fullmatch(value.value) is not None
    # GT / LT: INT against INT, FLOAT against FLOAT, INT widened only against a FLOAT literal
    if literal.tag == TAG_INT:
        if value.tag != TAG_INT:
            return False
        lhs, rhs = value.value, literal.value
    else:
        if value.tag not in (TAG_INT, TAG_FLOAT):
            return False
        lhs, rhs = float(value.value), literal.value
    return lhs > rhs if op == OP_GT else lhs < rhs


def clause_holds(values: dict, clause: Clause) -> bool:
    value = values.get(clause.attribute)
    return value is not None and matches(value, clause.op, clause.literal)


def predicate_holds(values: dict, pred: Predicate) -> bool:
    return all(clause_holds(values, c) for c in pred.clauses)

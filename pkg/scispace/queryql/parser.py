"""Query strings.

    query   := clause ( "AND" clause )*
    clause  := name op literal
    name    := bare word | double-quoted string
    op      := "=" | ">" | "<" | "like"
    literal := -?[0-9]+            (int)
             | decimal or exponent  (float)
             | double-quoted string (text)
"""
import re
from typing import List, NamedTuple
from . import OP_TOKENS
from .predicate import Clause, Predicate
from ..sdf.values import AttributeValue
from ..utils.errors import QuerySyntaxError, QueryTypeError

WORD = "word"
STRING = "string"
INT = "int"
FLOAT = "float"
OP = "op"
END = "end"


class Token(NamedTuple):
    kind: str
    text: str
    value: object
    pos: int


_SPACE = re.compile(r"\s+")
_NUMBER = re.compile(r"-?(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")


def _read_string(q: str, start: int):
    out = []
    i = start + 1
    while i < len(q):
        ch = q[i]
        if ch == "\\" and i + 1 < len(q):
            out.append(q[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise QuerySyntaxError(q, start, "closing double quote")


def tokenize(q: str) -> List[Token]:
    tokens = []
    i = 0
    while i < len(q):
        m = _SPACE.match(q, i)
        if m:
            i = m.end()
            continue
        ch = q[i]
        if ch == '"':
            text, end = _read_string(q, i)
            tokens.append(Token(STRING, q[i:end], text, i))
            i = end
        elif ch in "=<>":
            tokens.append(Token(OP, ch, OP_TOKENS[ch], i))
            i += 1
        elif ch.isdigit() or ch in "-.":
            m = _NUMBER.match(q, i)
            if not m:
                raise QuerySyntaxError(q, i, "a number")
            text = m.group(0)
            if re.fullmatch(r"-?[0-9]+", text):
                tokens.append(Token(INT, text, int(text), i))
            else:
                tokens.append(Token(FLOAT, text, float(text), i))
            i = m.end()
        else:
            m = _WORD.match(q, i)
            if not m:
                raise QuerySyntaxError(q, i, "a name, operator or literal")
            text = m.group(0)
            if text.lower() == "like":
                tokens.append(Token(OP, text, OP_TOKENS["like"], i))
            else:
                tokens.append(Token(WORD, text, text, i))
            i = m.end()
    tokens.append(Token(END, "", None, len(q)))
    return tokens


def parse_query(q: str) -> Predicate:
    tokens = tokenize(q)
    pos = 0

    def expect(kinds, what):
        nonlocal pos
        tok = tokens[pos]
        if tok.kind not in kinds:
            raise QuerySyntaxError(q, tok.pos, what)
        pos += 1
        return tok

    clauses = []
    while True:
        name = expect((WORD, STRING), "an attribute name")
        op = expect((OP,), "one of =, >, <, like")
        literal = expect((INT, FLOAT, STRING), "an int, float or quoted text literal")
        if literal.kind == INT:
            if not -(2**63) <= literal.value < 2**63:
                raise QueryTypeError("Integer literal {} does not fit 64 bits".format(literal.text))
            value = AttributeValue.of_int(literal.value)
        elif literal.kind == FLOAT:
            value = AttributeValue.of_float(literal.value)
        else:
            value = AttributeValue.of_text(literal.value)
        clauses.append(Clause(name.value, op.value, value))

        tok = tokens[pos]
        if tok.kind == END:
            break
        if tok.kind == WORD and tok.text.upper() == "AND":
            pos += 1
            continue
        raise QuerySyntaxError(q, tok.pos, "AND or end of query")
    return Predicate(tuple(clauses))

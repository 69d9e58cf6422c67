"""Parser and evaluator for the WoS-style boolean query language.

Grammar (operators case-insensitive, precedence NOT > AND > OR):

    query  := clause ((OR|AND|NOT) clause)*
    clause := FIELD '=' '(' expr ')' | '(' query ')' | term
    expr   := term ((OR|AND|NOT) term)*
    term   := '"' phrase '"' | bareword+ | '(' expr ')'

Published strategies mix field-scoped groups with bare phrases
("TS=(...) or \"Long Short-term Memory\""), so a term outside any field
clause is scoped to the default field (TS), and adjacent barewords merge
into one phrase. NOT is strictly binary (set difference); it never leads
an expression.

Wildcards inside phrase tokens: ``*`` zero or more characters, ``$`` zero
or one, ``?`` exactly one. A ``\\$`` sequence is read as the ``$``
wildcard (the backslash is typesetting in published strategies).

Field semantics at match time:

    TS  phrase occurs in title, abstract, or any keyword entry
    TI / AB  phrase occurs in that field
    WC  whole-category equality, case-insensitive (wildcards allowed)
    CT  record topic equals the pattern or is a dotted descendant of it
    PY  year equals the pattern or lies in an inclusive "2013-2022" range

Phrase matching aligns the pattern's token sequence to consecutive tokens
of the normalized field text (see textnorm for the normalization rules).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import QuerySyntaxError, UnbalancedParen, UnknownField
from .records import Record
from .textnorm import tokenize_pattern, tokenize_text

FIELDS = ("TS", "TI", "AB", "WC", "CT", "PY")

_CT_RAW = re.compile(r"\d+(\.\d+)*\Z")
_PY_RAW = re.compile(r"(\d{4})(?:\s*-\s*(\d{4}))?\Z")


def _compile_token(token: str) -> re.Pattern[str]:
    parts = []
    for ch in token:
        if ch == "*":
            parts.append("[0-9a-z]*")
        elif ch == "$":
            parts.append("[0-9a-z]?")
        elif ch == "?":
            parts.append("[0-9a-z]")
        else:
            parts.append(re.escape(ch))
    return re.compile("".join(parts) + r"\Z")


@dataclass(frozen=True)
class PhrasePattern:
    """A wildcard phrase, stored lower-cased.

    ``raw`` keeps the unsplit text (CT topic ids and PY ranges are read
    from it); ``tokens`` carry the normalized token patterns used for
    phrase alignment.
    """

    raw: str
    tokens: tuple[str, ...]

    @classmethod
    def from_text(cls, text: str, offset: int = 0) -> "PhrasePattern":
        raw = text.replace("\\$", "$").strip().lower()
        tokens = tuple(tokenize_pattern(raw))
        if not tokens:
            raise QuerySyntaxError(f"empty phrase {text!r}", offset)
        return cls(raw=raw, tokens=tokens)

    @cached_property
    def compiled(self) -> tuple[re.Pattern[str], ...]:
        return tuple(_compile_token(tok) for tok in self.tokens)

    @cached_property
    def first_is_literal(self) -> bool:
        return not any(ch in "*$?" for ch in self.tokens[0])


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Not:
    """Binary difference: matches left and not right."""

    left: object
    right: object


@dataclass(frozen=True)
class FieldClause:
    """A pattern expression scoped to exactly one field."""

    field: str
    expr: object  # Or/And/Not tree over PhrasePattern leaves


@dataclass(frozen=True)
class Query:
    root: object  # Or/And/Not tree over FieldClause leaves
    text: str


# --- lexer ---

_TOKEN_RE = re.compile(r'\s*(?:(?P<lparen>\()|(?P<rparen>\))|"(?P<phrase>[^"]*)"|(?P<word>[^\s()"]+))')


@dataclass(frozen=True)
class _Tok:
    kind: str  # lparen rparen phrase word op fieldeq
    text: str
    offset: int


def _lex(text: str) -> list[_Tok]:
    if text.count('"') % 2 == 1:
        raise QuerySyntaxError("unterminated quote", text.rfind('"'))
    tokens: list[_Tok] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise QuerySyntaxError(f"cannot read {rest[:20]!r}", pos)
        offset = match.start() + (len(match.group(0)) - len(match.group(0).lstrip()))
        if match.group("lparen"):
            tokens.append(_Tok("lparen", "(", offset))
        elif match.group("rparen"):
            tokens.append(_Tok("rparen", ")", offset))
        elif match.group("phrase") is not None:
            tokens.append(_Tok("phrase", match.group("phrase"), offset))
        else:
            word = match.group("word")
            lowered = word.lower()
            if lowered in ("or", "and", "not"):
                tokens.append(_Tok("op", lowered, offset))
            elif word.endswith("="):
                tokens.append(_Tok("fieldeq", word[:-1], offset))
            elif "=" in word:
                raise QuerySyntaxError(f"stray '=' in {word!r}", offset)
            else:
                tokens.append(_Tok("word", word, offset))
        pos = match.end()
    return tokens


# --- parser ---

class _Parser:
    def __init__(self, text: str, default_field: str):
        self.text = text
        self.tokens = _lex(text)
        self.pos = 0
        self.default_field = default_field

    def peek(self) -> _Tok | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError("unexpected end of query", len(self.text))
        self.pos += 1
        return tok

    def parse(self):
        node = self.parse_or(None)
        leftover = self.peek()
        if leftover is not None:
            if leftover.kind == "rparen":
                raise UnbalancedParen("unmatched ')'", leftover.offset)
            raise QuerySyntaxError(f"unexpected {leftover.text!r}", leftover.offset, ("end of query",))
        return node

    def parse_or(self, field: str | None):
        children = [self.parse_and(field)]
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text == "or":
            self.take()
            children.append(self.parse_and(field))
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self, field: str | None):
        children = [self.parse_not(field)]
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text == "and":
            self.take()
            children.append(self.parse_not(field))
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_not(self, field: str | None):
        node = self.parse_primary(field)
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text == "not":
            self.take()
            node = Not(node, self.parse_primary(field))
        return node

    def parse_primary(self, field: str | None):
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError(
                "expected a clause", len(self.text), ("FIELD=(", "(", '"phrase"', "word")
            )
        if tok.kind == "fieldeq":
            return self._parse_field_clause(field)
        if tok.kind == "lparen":
            self.take()
            node = self.parse_or(field)
            closing = self.peek()
            if closing is None or closing.kind != "rparen":
                raise UnbalancedParen("missing ')'", closing.offset if closing else len(self.text))
            self.take()
            return node
        if tok.kind == "phrase":
            self.take()
            return self._leaf(PhrasePattern.from_text(tok.text, tok.offset), field)
        if tok.kind == "word":
            words = [self.take().text]
            while (nxt := self.peek()) is not None and nxt.kind == "word":
                words.append(self.take().text)
            return self._leaf(PhrasePattern.from_text(" ".join(words), tok.offset), field)
        if tok.kind == "op" and tok.text == "not":
            raise QuerySyntaxError("NOT is binary and cannot lead an expression", tok.offset)
        raise QuerySyntaxError(
            f"unexpected {tok.text!r}", tok.offset, ("FIELD=(", "(", '"phrase"', "word")
        )

    def _parse_field_clause(self, field: str | None):
        tok = self.take()
        name = tok.text.upper()
        if name not in FIELDS:
            raise UnknownField(f"unknown field {tok.text!r}", tok.offset, FIELDS)
        if field is not None:
            raise QuerySyntaxError(f"field clause {name}= inside {field}= clause", tok.offset)
        opening = self.peek()
        if opening is None or opening.kind != "lparen":
            raise QuerySyntaxError(
                f"field {name}= must be followed by '('",
                opening.offset if opening else len(self.text),
                ("(",),
            )
        self.take()
        expr = self.parse_or(name)
        closing = self.peek()
        if closing is None or closing.kind != "rparen":
            raise UnbalancedParen("missing ')'", closing.offset if closing else len(self.text))
        self.take()
        clause = FieldClause(name, expr)
        _validate_clause(clause, tok.offset)
        return clause

    def _leaf(self, pattern: PhrasePattern, field: str | None):
        if field is None:
            return FieldClause(self.default_field, pattern)
        return pattern


def _iter_patterns(expr):
    if isinstance(expr, PhrasePattern):
        yield expr
    elif isinstance(expr, (Or, And)):
        for child in expr.children:
            yield from _iter_patterns(child)
    elif isinstance(expr, Not):
        yield from _iter_patterns(expr.left)
        yield from _iter_patterns(expr.right)
    elif isinstance(expr, FieldClause):
        yield from _iter_patterns(expr.expr)


def _validate_clause(clause: FieldClause, offset: int) -> None:
    if clause.field == "CT":
        for pattern in _iter_patterns(clause.expr):
            if not _CT_RAW.fullmatch(pattern.raw):
                raise QuerySyntaxError(f"CT pattern {pattern.raw!r} is not a dotted topic id", offset)
    elif clause.field == "PY":
        for pattern in _iter_patterns(clause.expr):
            if not _PY_RAW.fullmatch(pattern.raw):
                raise QuerySyntaxError(f"PY pattern {pattern.raw!r} is not a year or year range", offset)


def parse_query(text: str, default_field: str = "TS") -> Query:
    """Parse query text into a Query; raises QuerySyntaxError and kin."""
    return Query(root=_Parser(text, default_field).parse(), text=text)


# --- evaluation ---

class PreparedRecord:
    """Tokenized view of a record, so one record can be matched against
    many queries without re-normalizing."""

    __slots__ = ("record", "ts_views", "ti_view", "ab_view", "wc_views")

    def __init__(self, record: Record):
        self.record = record
        self.ti_view = _TextView(record.title)
        self.ab_view = _TextView(record.abstract)
        keyword_views = [_TextView(k) for k in record.author_keywords]
        keyword_views += [_TextView(k) for k in record.keywords_plus]
        self.ts_views = [self.ti_view, self.ab_view] + keyword_views
        self.wc_views = [_TextView(c) for c in record.categories]


class _TextView:
    __slots__ = ("tokens", "positions")

    def __init__(self, text: str):
        self.tokens = tokenize_text(text)
        positions: dict[str, list[int]] = {}
        for i, tok in enumerate(self.tokens):
            positions.setdefault(tok, []).append(i)
        self.positions = positions

    def contains_phrase(self, pattern: PhrasePattern) -> bool:
        compiled = pattern.compiled
        span = len(compiled)
        tokens = self.tokens
        if span == 0 or span > len(tokens):
            return False
        if pattern.first_is_literal:
            starts: Iterable[int] = self.positions.get(pattern.tokens[0], ())
        else:
            starts = range(len(tokens) - span + 1)
        for i in starts:
            if i + span > len(tokens):
                continue
            if not pattern.first_is_literal and not compiled[0].fullmatch(tokens[i]):
                continue
            if all(compiled[j].fullmatch(tokens[i + j]) for j in range(1, span)):
                return True
        return False

    def equals_phrase(self, pattern: PhrasePattern) -> bool:
        compiled = pattern.compiled
        if len(compiled) != len(self.tokens):
            return False
        return all(rx.fullmatch(tok) for rx, tok in zip(compiled, self.tokens))


def _match_pattern(field: str, pattern: PhrasePattern, prep: PreparedRecord) -> bool:
    if field == "TS":
        return any(view.contains_phrase(pattern) for view in prep.ts_views)
    if field == "TI":
        return prep.ti_view.contains_phrase(pattern)
    if field == "AB":
        return prep.ab_view.contains_phrase(pattern)
    if field == "WC":
        return any(view.equals_phrase(pattern) for view in prep.wc_views)
    if field == "CT":
        topic = prep.record.citation_topic
        if topic is None:
            return False
        return topic == pattern.raw or topic.startswith(pattern.raw + ".")
    if field == "PY":
        year = prep.record.year
        if year is None:
            return False
        m = _PY_RAW.fullmatch(pattern.raw)
        low = int(m.group(1))
        high = int(m.group(2)) if m.group(2) else low
        return low <= year <= high
    raise ValueError(f"unknown field {field!r}")


def _eval(node, prep: PreparedRecord, field: str | None) -> bool:
    if isinstance(node, FieldClause):
        return _eval(node.expr, prep, node.field)
    if isinstance(node, PhrasePattern):
        assert field is not None
        return _match_pattern(field, node, prep)
    if isinstance(node, Or):
        return any(_eval(child, prep, field) for child in node.children)
    if isinstance(node, And):
        return all(_eval(child, prep, field) for child in node.children)
    if isinstance(node, Not):
        return _eval(node.left, prep, field) and not _eval(node.right, prep, field)
    raise TypeError(f"unexpected node {node!r}")


def match_prepared(query: Query, prep: PreparedRecord) -> bool:
    return _eval(query.root, prep, None)


def match_record(query: Query, record: Record) -> bool:
    """True iff the record satisfies the query. Pure function."""
    return match_prepared(query, PreparedRecord(record))

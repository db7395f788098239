"""Graph serialization: canonical N-Triples and prefixed Turtle.

The N-Triples writer is the canonical form: one line per triple, sorted
by the serialized (subject, predicate, object) tokens, so equal graphs
always produce byte-identical files. The Turtle writer is the pretty
form (prefixes, subject grouping); both parse back losslessly.
"""
from __future__ import annotations

import io
import re
from decimal import Decimal
from typing import Iterable, TextIO

from .errors import ParseError
from .model import (
    DECIMAL,
    INTEGER,
    STRING,
    VOCAB,
    Iri,
    Literal,
    LocalNode,
    Term,
    Triple,
)

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_STRING = XSD + "string"

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(value: str) -> str:
    out = []
    for ch in value:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape_string(value: str, line_no: int | None = None) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(value):
            raise ParseError("dangling escape in string literal", line_no)
        code = value[i + 1]
        mapping = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f", "'": "'"}
        if code in mapping:
            out.append(mapping[code])
            i += 2
        elif code == "u":
            out.append(chr(int(value[i + 2 : i + 6], 16)))
            i += 6
        elif code == "U":
            out.append(chr(int(value[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise ParseError(f"unknown escape \\{code}", line_no)
    return "".join(out)


def nt_term(term: Term) -> str:
    """Serialize one term to its N-Triples token."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, LocalNode):
        return f"_:{term.id}"
    if isinstance(term, Literal):
        body = f'"{escape_string(term.value)}"'
        if term.lang:
            return f"{body}@{term.lang}"
        if term.datatype == INTEGER:
            return f"{body}^^<{XSD_INTEGER}>"
        if term.datatype == DECIMAL:
            return f"{body}^^<{XSD_DECIMAL}>"
        return body
    raise TypeError(f"not a graph term: {term!r}")


def triple_sort_key(triple: Triple) -> tuple[str, str, str]:
    return (nt_term(triple.subject), nt_term(triple.predicate), nt_term(triple.object))


def _select(triples: Iterable[Triple], include_derived: bool) -> list[Triple]:
    if include_derived:
        return list(triples)
    return [t for t in triples if not VOCAB.is_derived(t.predicate)]


def ntriples_dumps(triples: Iterable[Triple], include_derived: bool = True) -> str:
    lines = [
        f"{nt_term(t.subject)} {nt_term(t.predicate)} {nt_term(t.object)} ."
        for t in sorted(_select(triples, include_derived), key=triple_sort_key)
    ]
    return "".join(line + "\n" for line in lines)


_NT_IRI = r"<([^\x00-\x20<>\"{}|^`\\]*)>"
_NT_BLANK = r"_:([A-Za-z0-9_][A-Za-z0-9_-]*)"
_NT_STRING = r'"((?:[^"\\\n\r]|\\.)*)"'
_NT_LINE = re.compile(
    rf"^(?:{_NT_IRI}|{_NT_BLANK})\s+{_NT_IRI}\s+"
    rf'(?:{_NT_IRI}|{_NT_BLANK}|{_NT_STRING}(?:\^\^{_NT_IRI}|@([A-Za-z]+(?:-[A-Za-z0-9]+)*))?)'
    r"\s*\.\s*$"
)


def _literal_from(value: str, datatype_iri: str | None, lang: str | None, line_no: int) -> Literal:
    if lang:
        return Literal(value, STRING, lang)
    if datatype_iri is None or datatype_iri == XSD_STRING:
        return Literal(value, STRING)
    if datatype_iri == XSD_INTEGER:
        return Literal(value, INTEGER)
    if datatype_iri == XSD_DECIMAL:
        return Literal(value, DECIMAL)
    raise ParseError(f"unsupported literal datatype <{datatype_iri}>", line_no)


def ntriples_loads(text: str) -> list[Triple]:
    triples = []
    # not str.splitlines: only CR/LF end a statement, NEL and friends
    # may appear raw inside literals
    for line_no, raw in enumerate(re.split(r"\r\n|[\r\n]", text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _NT_LINE.match(line)
        if not m:
            raise ParseError(f"malformed N-Triples statement: {raw!r}", line_no)
        (s_iri, s_blank, p_iri, o_iri, o_blank, o_lit, o_dt, o_lang) = m.groups()
        subject = Iri(s_iri) if s_iri is not None else LocalNode(s_blank)
        predicate = Iri(p_iri)
        if o_iri is not None:
            obj: Term = Iri(o_iri)
        elif o_blank is not None:
            obj = LocalNode(o_blank)
        else:
            obj = _literal_from(_unescape_string(o_lit, line_no), o_dt, o_lang, line_no)
        triples.append(Triple(subject, predicate, obj))
    return triples


_BARE_INTEGER = re.compile(r"-?[0-9]+")
_BARE_DECIMAL = re.compile(r"-?[0-9]+\.[0-9]+")


def _turtle_object(term: Term) -> str:
    if isinstance(term, Literal):
        # Bare numeric shorthand only when it re-parses to the same datatype.
        if term.datatype == INTEGER and _BARE_INTEGER.fullmatch(term.value):
            return term.value
        if term.datatype == DECIMAL and _BARE_DECIMAL.fullmatch(term.value):
            return term.value
        body = f'"{escape_string(term.value)}"'
        if term.lang:
            return f"{body}@{term.lang}"
        if term.datatype == INTEGER:
            return f"{body}^^xsd:integer"
        if term.datatype == DECIMAL:
            return f"{body}^^xsd:decimal"
        return body
    if isinstance(term, Iri):
        prefixed = VOCAB.prefixed(term)
        return prefixed if prefixed else f"<{term.value}>"
    return nt_term(term)


def _turtle_predicate(iri: Iri) -> str:
    if iri.value == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type":
        return "a"
    prefixed = VOCAB.prefixed(iri)
    return prefixed if prefixed else f"<{iri.value}>"


def turtle_dumps(triples: Iterable[Triple], include_derived: bool = True) -> str:
    selected = sorted(_select(triples, include_derived), key=triple_sort_key)
    out = io.StringIO()
    for prefix, ns in sorted(VOCAB.namespaces.items()):
        out.write(f"@prefix {prefix}: <{ns}> .\n")

    by_subject: dict[str, dict] = {}
    for t in selected:
        token = nt_term(t.subject)
        entry = by_subject.setdefault(token, {"subject": t.subject, "preds": {}})
        entry["preds"].setdefault(nt_term(t.predicate), {"iri": t.predicate, "objects": []})
        entry["preds"][nt_term(t.predicate)]["objects"].append(t.object)

    for token in sorted(by_subject):
        entry = by_subject[token]
        subject = entry["subject"]
        head = f"<{subject.value}>" if isinstance(subject, Iri) else f"_:{subject.id}"
        out.write(f"\n{head}\n")
        # rdf:type first as "a", then the rest in token order
        pred_tokens = sorted(
            entry["preds"],
            key=lambda tok: (0 if _turtle_predicate(entry["preds"][tok]["iri"]) == "a" else 1, tok),
        )
        for idx, pred_token in enumerate(pred_tokens):
            pred = entry["preds"][pred_token]
            objects = ", ".join(_turtle_object(o) for o in pred["objects"])
            tail = " ." if idx == len(pred_tokens) - 1 else " ;"
            out.write(f"    {_turtle_predicate(pred['iri'])} {objects}{tail}\n")
    return out.getvalue()


class _TurtleParser:
    """A small recursive-descent reader for the Turtle subset we emit.

    Supports prefixes, 'a', predicate and object lists, bare integers
    and decimals, language tags, typed literals, and blank node labels.
    """

    _TOKEN = re.compile(
        r"""
        (?P<ws>\s+|\#[^\n]*)
        |(?P<iriref><[^\x00-\x20<>"{}|^`\\]*>)
        |(?P<string>"(?:[^"\\\n\r]|\\.)*")
        |(?P<prefix_decl>@prefix\b)
        |(?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
        |(?P<dtype>\^\^)
        |(?P<blank>_:[A-Za-z0-9_][A-Za-z0-9_.-]*)
        |(?P<decimal>-?[0-9]+\.[0-9]+)
        |(?P<integer>-?[0-9]+)
        |(?P<pname>
            (?:[A-Za-z][A-Za-z0-9_-]*)?:
            (?:[A-Za-z0-9_%-]|\\[_~.!$&'()*+,;=/?\#@%-]|\.(?=[A-Za-z0-9_%\\.-]))*
         )
        |(?P<kw_a>a(?![A-Za-z0-9_-]))
        |(?P<punct>[;,.\[\]])
        """,
        re.VERBOSE,
    )

    def __init__(self, text: str):
        self.tokens: list[tuple[str, str, int]] = []
        line = 1
        pos = 0
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", line)
            kind = m.lastgroup
            value = m.group()
            if kind != "ws":
                self.tokens.append((kind, value, line))
            line += value.count("\n")
            pos = m.end()
        self.idx = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []

    def _peek(self):
        return self.tokens[self.idx] if self.idx < len(self.tokens) else (None, None, -1)

    def _next(self, expected: str | None = None):
        kind, value, line = self._peek()
        if kind is None:
            raise ParseError("unexpected end of input")
        if expected and kind != expected and value != expected:
            raise ParseError(f"expected {expected}, got {value!r}", line)
        self.idx += 1
        return kind, value, line

    def _resolve_pname(self, pname: str, line: int) -> Iri:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise ParseError(f"undeclared prefix {prefix!r}", line)
        local = re.sub(r"\\(.)", r"\1", local)
        return Iri(self.prefixes[prefix] + local)

    def _node(self) -> Iri | LocalNode:
        kind, value, line = self._next()
        if kind == "iriref":
            return Iri(value[1:-1])
        if kind == "blank":
            return LocalNode(value[2:])
        if kind == "pname":
            return self._resolve_pname(value, line)
        raise ParseError(f"expected a subject node, got {value!r}", line)

    def _predicate(self) -> Iri:
        kind, value, line = self._next()
        if kind == "kw_a":
            return Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
        if kind == "iriref":
            return Iri(value[1:-1])
        if kind == "pname":
            return self._resolve_pname(value, line)
        raise ParseError(f"expected a predicate, got {value!r}", line)

    def _object(self) -> Term:
        kind, value, line = self._next()
        if kind == "iriref":
            return Iri(value[1:-1])
        if kind == "blank":
            return LocalNode(value[2:])
        if kind == "pname":
            return self._resolve_pname(value, line)
        if kind == "integer":
            return Literal(value, INTEGER)
        if kind == "decimal":
            return Literal(value, DECIMAL)
        if kind == "string":
            raw = _unescape_string(value[1:-1], line)
            nxt_kind, nxt_value, _ = self._peek()
            if nxt_kind == "dtype":
                self._next()
                dt = self._predicate()  # datatype position allows iriref/pname
                return _literal_from(raw, dt.value, None, line)
            if nxt_kind == "langtag":
                self._next()
                return Literal(raw, STRING, nxt_value[1:])
            return Literal(raw, STRING)
        raise ParseError(f"expected an object term, got {value!r}", line)

    def parse(self) -> list[Triple]:
        while self._peek()[0] is not None:
            kind, value, line = self._peek()
            if kind == "prefix_decl":
                self._next()
                _, pname, pline = self._next("pname")
                if not pname.endswith(":"):
                    raise ParseError("prefix declaration needs a 'name:' form", pline)
                _, iriref, _ = self._next("iriref")
                self.prefixes[pname[:-1]] = iriref[1:-1]
                self._next(".")
                continue
            subject = self._node()
            while True:
                predicate = self._predicate()
                while True:
                    self.triples.append(Triple(subject, predicate, self._object()))
                    if self._peek()[1] == ",":
                        self._next()
                        continue
                    break
                punct_kind, punct, pline = self._next()
                if punct == ";":
                    # allow trailing ';' before '.'
                    if self._peek()[1] == ".":
                        self._next()
                        break
                    continue
                if punct == ".":
                    break
                raise ParseError(f"expected ';' or '.', got {punct!r}", pline)
        return self.triples


def turtle_loads(text: str) -> list[Triple]:
    return _TurtleParser(text).parse()


FORMATS = ("nt", "ttl")


def _normalize_format(fmt: str) -> str:
    aliases = {"nt": "nt", "ntriples": "nt", "n-triples": "nt", "ttl": "ttl", "turtle": "ttl"}
    key = aliases.get(fmt.lower())
    if key is None:
        raise ParseError(f"unknown graph format: {fmt!r}")
    return key


def dump_graph(triples: Iterable[Triple], fp: TextIO, fmt: str = "nt", include_derived: bool = True) -> None:
    if _normalize_format(fmt) == "nt":
        fp.write(ntriples_dumps(triples, include_derived))
    else:
        fp.write(turtle_dumps(triples, include_derived))


def load_graph(fp: TextIO, fmt: str = "nt") -> list[Triple]:
    text = fp.read()
    if _normalize_format(fmt) == "nt":
        return ntriples_loads(text)
    return turtle_loads(text)

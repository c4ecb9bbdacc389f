"""Parser and pretty-printer for the presentation DSL.

One declaration per line::

    nodes: 3
    arrow x0: 0 -> 1 deg 1
    rel z2: x0*y1 - y0*x1
    super W: x0*y1*z2 - x0*z1*y2

``*`` is path composition; coefficients are integers or fractions ``p/q``
attached with ``*`` (e.g. ``2*x0*y1``, ``-1/3*x``).  Blank lines and ``#``
comments are ignored.  Errors carry line, column, and a stable error code.
"""

import re
from fractions import Fraction

from .cyclic import CyclicWord, Superpotential
from .quivers import NCPoly, Quiver

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")
_WS = re.compile(r"[ \t]*")


class ParseError(Exception):
    """Parse or validation failure with position information."""

    def __init__(self, message, line, col, code="syntax"):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.code = code


class ParsedFile:
    """Result of parsing: a quiver plus named relations and superpotentials."""

    def __init__(self, quiver, relations, supers):
        self.quiver = quiver
        self.relations = relations
        self.supers = supers

    def presentation(self):
        from .quivers import Presentation

        return Presentation(
            self.quiver,
            [poly for _name, poly in self.relations],
            [name for name, _poly in self.relations],
        )

    def superpotential(self, name=None):
        if not self.supers:
            return None
        if name is None:
            return self.supers[0][1]
        for nm, w in self.supers:
            if nm == name:
                return w
        return None


class _ExprParser:
    """Recursive-descent parser for relation/superpotential expressions."""

    def __init__(self, text, line, offset, quiver):
        self.text = text
        self.line = line
        self.offset = offset  # column of text[0] in the original line (1-based)
        self.pos = 0
        self.quiver = quiver

    def error(self, message, pos=None, code="syntax"):
        col = self.offset + (self.pos if pos is None else pos)
        raise ParseError(message, self.line, col, code)

    def skip_ws(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_terms(self):
        """Returns a list of (coeff, [arrow names], term start pos)."""
        terms = []
        self.skip_ws()
        sign = Fraction(1)
        if self.peek() in "+-":
            if self.peek() == "-":
                sign = Fraction(-1)
            self.pos += 1
        while True:
            self.skip_ws()
            start = self.pos
            coeff, names = self.parse_term()
            terms.append((sign * coeff, names, start))
            self.skip_ws()
            if self.pos >= len(self.text):
                return terms
            op = self.peek()
            if op not in "+-":
                self.error(f"expected '+' or '-', found {op!r}")
            sign = Fraction(1) if op == "+" else Fraction(-1)
            self.pos += 1

    def parse_term(self):
        coeff = Fraction(1)
        names = []
        m = _INT.match(self.text, self.pos)
        if m:
            num = int(m.group())
            self.pos = m.end()
            if self.peek() == "/":
                self.pos += 1
                m2 = _INT.match(self.text, self.pos)
                if not m2:
                    self.error("expected denominator")
                den = int(m2.group())
                if den == 0:
                    self.error("zero denominator")
                self.pos = m2.end()
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            if self.peek() != "*":
                self.error("constant terms are not allowed; expected '*' and a path")
            self.pos += 1
        while True:
            m = _NAME.match(self.text, self.pos)
            if not m:
                self.error("expected an arrow name")
            names.append((m.group(), self.pos))
            self.pos = m.end()
            if self.peek() == "*":
                self.pos += 1
                continue
            break
        return coeff, names

    def to_poly(self, terms):
        """Build an NCPoly, validating arrows and composability."""
        poly = NCPoly.zero()
        for coeff, names, _start in terms:
            poly = poly + NCPoly.from_path(self.build_path(names), coeff)
        return poly

    def build_path(self, names):
        quiver = self.quiver
        path = None
        for name, pos in names:
            arrow = quiver.by_name.get(name)
            if arrow is None:
                self.error(f"unknown arrow {name!r}", pos, "unknown-arrow")
            step = quiver.arrow_path(name)
            if path is None:
                path = step
            else:
                nxt = path.compose(step)
                if nxt is None:
                    self.error(
                        f"incomposable: previous target {path.target}, "
                        f"{name} starts at {arrow.source}",
                        pos,
                        "incomposable",
                    )
                path = nxt
        return path


def parse_text(text):
    """Parse DSL text into a ParsedFile."""
    quiver = None
    node_count = None
    arrow_specs = []
    pending = []  # (kind, name, expr text, line, expr col offset)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"[ \t]*([a-z]+)\b", line)
        if not m:
            raise ParseError("expected a declaration keyword", lineno, 1)
        keyword = m.group(1)
        rest = line[m.end() :]
        if keyword == "nodes":
            m2 = re.fullmatch(r":[ \t]*(\d+)[ \t]*", rest)
            if not m2:
                raise ParseError("expected 'nodes: <count>'", lineno, m.end() + 1)
            if node_count is not None:
                raise ParseError("duplicate nodes declaration", lineno, 1, "duplicate")
            node_count = int(m2.group(1))
            if node_count < 1:
                raise ParseError("node count must be positive", lineno, m.end() + 1, "range")
        elif keyword == "arrow":
            m2 = re.fullmatch(
                r"[ \t]+([A-Za-z_]\w*)[ \t]*:[ \t]*(\d+)[ \t]*->[ \t]*(\d+)"
                r"[ \t]+deg[ \t]+(\d+)[ \t]*",
                rest,
            )
            if not m2:
                raise ParseError(
                    "expected 'arrow NAME: i -> j deg d'", lineno, m.end() + 1
                )
            if node_count is None:
                raise ParseError("nodes must be declared before arrows", lineno, 1)
            name, src, tgt, deg = (
                m2.group(1),
                int(m2.group(2)),
                int(m2.group(3)),
                int(m2.group(4)),
            )
            if name in seen:
                raise ParseError(f"duplicate name {name!r}", lineno, 1, "duplicate")
            if not (0 <= src < node_count and 0 <= tgt < node_count):
                raise ParseError(
                    f"arrow {name!r} endpoints out of range", lineno, 1, "range"
                )
            if deg < 1:
                raise ParseError(
                    f"arrow {name!r} must have degree >= 1", lineno, 1, "degree"
                )
            seen.add(name)
            arrow_specs.append((name, src, tgt, deg))
        elif keyword in ("rel", "super"):
            m2 = re.match(r"[ \t]+([A-Za-z_]\w*)[ \t]*:[ \t]*", rest)
            if not m2:
                raise ParseError(f"expected '{keyword} NAME: <expression>'", lineno, m.end() + 1)
            name = m2.group(1)
            if name in seen:
                raise ParseError(f"duplicate name {name!r}", lineno, 1, "duplicate")
            seen.add(name)
            expr = rest[m2.end() :]
            col = m.end() + m2.end() + 1
            if not expr.strip():
                raise ParseError("empty expression", lineno, col)
            pending.append((keyword, name, expr, lineno, col))
        else:
            raise ParseError(f"unknown declaration {keyword!r}", lineno, 1)
    if node_count is None:
        raise ParseError("missing nodes declaration", 1, 1)
    quiver = Quiver(node_count, arrow_specs)

    relations = []
    supers = []
    for kind, name, expr, lineno, col in pending:
        parser = _ExprParser(expr, lineno, col, quiver)
        terms = parser.parse_terms()
        if kind == "rel":
            poly = parser.to_poly(terms)
            if poly.is_zero():
                raise ParseError(f"relation {name!r} is zero", lineno, col, "inhomogeneous")
            key = poly.homogeneous_key()
            if key is None:
                first = terms[0]
                bad = _find_inhomogeneous(quiver, terms)
                raise ParseError(
                    f"relation {name!r} is not homogeneous", lineno,
                    col + (bad if bad is not None else first[2]), "inhomogeneous",
                )
            if key[0] < 2:
                raise ParseError(
                    f"relation {name!r} has degree {key[0]} < 2", lineno, col, "degree"
                )
            relations.append((name, poly))
        else:
            w = Superpotential()
            for coeff, names, start in terms:
                path = parser.build_path(names)
                if path.source != path.target:
                    raise ParseError(
                        f"superpotential term is not closed "
                        f"({path.source} -> {path.target})",
                        lineno,
                        col + start,
                        "non-closed",
                    )
                w.add_word(CyclicWord.from_path(quiver, path), coeff)
            supers.append((name, w))
    return ParsedFile(quiver, relations, supers)


def _find_inhomogeneous(quiver, terms):
    """Start position of the first term whose key differs from the first."""
    keys = []
    parser_keys = []
    for coeff, names, start in terms:
        degree = sum(quiver.by_name[n].degree for n, _p in names)
        src = quiver.by_name[names[0][0]].source
        tgt = quiver.by_name[names[-1][0]].target
        parser_keys.append(((degree, src, tgt), start))
    first = parser_keys[0][0]
    for key, start in parser_keys[1:]:
        if key != first:
            return start
    return None


def parse_path(path_obj):
    with open(path_obj, encoding="utf-8") as handle:
        return parse_text(handle.read())


# ---------------------------------------------------------------------------
# pretty-printing


def format_coeff(coeff):
    coeff = Fraction(coeff)
    if coeff.denominator == 1:
        return str(coeff.numerator)
    return f"{coeff.numerator}/{coeff.denominator}"


def _format_terms(items, path_str):
    parts = []
    for n, (path, coeff) in enumerate(items):
        mag = abs(coeff)
        body = path_str(path) if mag == 1 else f"{format_coeff(mag)}*{path_str(path)}"
        if n == 0:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts)


def format_ncpoly(quiver, poly):
    if poly.is_zero():
        return "0"
    return _format_terms(poly.items(), quiver.path_str)


def format_superpotential(quiver, w):
    if w.is_zero():
        return "0"

    def word_str(word):
        return "*".join(quiver.arrows[i].name for i in word.arrows)

    return _format_terms(w.items(), word_str)


def format_file(quiver, relations=(), supers=()):
    """Canonical DSL text: nodes, arrows, relations, superpotentials."""
    lines = [f"nodes: {quiver.node_count}"]
    for a in quiver.arrows:
        lines.append(f"arrow {a.name}: {a.source} -> {a.target} deg {a.degree}")
    for name, poly in relations:
        lines.append(f"rel {name}: {format_ncpoly(quiver, poly)}")
    for name, w in supers:
        lines.append(f"super {name}: {format_superpotential(quiver, w)}")
    return "\n".join(lines) + "\n"


def format_presentation(presentation):
    return format_file(
        presentation.quiver,
        list(zip(presentation.rel_names, presentation.relations)),
    )

"""Readers and writers for the two circuit text formats.

The equation format is the ABC-style one: INORDER/OUTORDER declarations
followed by assignments over ``*``, ``+``, ``!`` with nested parentheses and
intermediate names. Parsing inlines every intermediate (with sharing) so a
Circuit is a pure DAG over its inputs. The S-expression format carries one
term per file with operators ``&``, ``|``, ``!``, ``concat``.
"""
from __future__ import annotations

import re

from .errors import ParseError, StructuralError
from .expr import AND, CONCAT, CONST, NOT, OR, STORE, VAR, Circuit, Term, TermStore

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\[\].]*")
_RESERVED = ("INORDER", "OUTORDER")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize_eqn(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch in "=;+*!()":
                tokens.append(_Token(ch, ch, lineno, col + 1))
                col += 1
                continue
            if ch in "01":
                tokens.append(_Token("const", ch, lineno, col + 1))
                col += 1
                continue
            m = _IDENT_RE.match(line, col)
            if m:
                tokens.append(_Token("ident", m.group(), lineno, col + 1))
                col = m.end()
                continue
            raise ParseError(f"unexpected character {ch!r}", lineno, col + 1)
    return tokens


class _EqnParser:
    """Recursive descent over the token list, resolving names as it goes."""

    def __init__(self, tokens, store):
        self.tokens = tokens
        self.pos = 0
        self.store = store
        self.inputs = []
        self.outorder = []
        self.env = {}

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, kind=None):
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of input (wanted {kind or 'more'})")
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, got {tok.text!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def parse(self):
        while True:
            tok = self._peek()
            if tok is None or tok.kind != "ident" or tok.text not in _RESERVED:
                break
            self._decl()
        while self._peek() is not None:
            self._assign()
        if not self.outorder:
            raise ParseError("no OUTORDER declaration")
        outputs = []
        for name, tok in self.outorder:
            if name not in self.env:
                raise ParseError(f"OUTORDER name {name!r} is never assigned",
                                 tok.line, tok.col)
            outputs.append((name, self.env[name]))
        try:
            return Circuit(tuple(self.inputs), tuple(outputs)).validate()
        except StructuralError as exc:
            raise ParseError(str(exc)) from exc

    def _decl(self):
        head = self._next("ident")
        self._next("=")
        names = []
        while self._peek() is not None and self._peek().kind == "ident":
            names.append(self._next("ident"))
        if not names:
            raise ParseError(f"empty {head.text} declaration", head.line, head.col)
        self._next(";")
        if head.text == "INORDER":
            for tok in names:
                if tok.text in self.env:
                    raise ParseError(f"duplicate definition of {tok.text!r}",
                                     tok.line, tok.col)
                self.inputs.append(tok.text)
                self.env[tok.text] = self.store.var(tok.text)
        else:
            for tok in names:
                self.outorder.append((tok.text, tok))

    def _assign(self):
        lhs = self._next("ident")
        if lhs.text in _RESERVED:
            raise ParseError("declarations must precede assignments",
                             lhs.line, lhs.col)
        if lhs.text in self.env:
            raise ParseError(f"duplicate definition of {lhs.text!r}",
                             lhs.line, lhs.col)
        self._next("=")
        value = self._expr()
        self._next(";")
        self.env[lhs.text] = value

    # expr := or ; or := and {"+" and} ; and := not {"*" not}
    # not := "!" not | atom ; atom := ident | "0" | "1" | "(" expr ")"
    def _expr(self):
        t = self._and()
        while self._peek() is not None and self._peek().kind == "+":
            self._next()
            t = self.store.or_(t, self._and())
        return t

    def _and(self):
        t = self._not()
        while self._peek() is not None and self._peek().kind == "*":
            self._next()
            t = self.store.and_(t, self._not())
        return t

    def _not(self):
        if self._peek() is not None and self._peek().kind == "!":
            self._next()
            return self.store.not_(self._not())
        return self._atom()

    def _atom(self):
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok.kind == "const":
            self._next()
            return self.store.const(int(tok.text))
        if tok.kind == "ident":
            self._next()
            term = self.env.get(tok.text)
            if term is None:
                raise ParseError(f"undefined identifier {tok.text!r}",
                                 tok.line, tok.col)
            return term
        if tok.kind == "(":
            self._next()
            t = self._expr()
            self._next(")")
            return t
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse_eqn(text: str, store: TermStore = STORE) -> Circuit:
    return _EqnParser(_tokenize_eqn(text), store).parse()


_PREC = {OR: 1, AND: 2, NOT: 3}


def write_eqn(c: Circuit) -> str:
    """Render a circuit back to equation text.

    Subterms are inlined except that any internal node referenced more than
    once across the whole circuit gets a fresh intermediate name (t0, t1, ...)
    so the output stays small on heavily shared DAGs.
    """
    refs: "dict[int, int]" = {}
    order: "list[Term]" = []
    seen = set()
    stack: "list[tuple[Term, bool]]" = []
    for name, root in c.outputs:
        refs[root.uid] = refs.get(root.uid, 0) + 1
        stack.append((root, False))
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node.uid in seen:
            continue
        seen.add(node.uid)
        stack.append((node, True))
        for child in node.children:
            refs[child.uid] = refs.get(child.uid, 0) + 1
            stack.append((child, False))
    order.sort(key=lambda n: n.uid)

    used_names = set(c.inputs) | set(c.output_names)
    names: "dict[int, str]" = {}
    counter = 0
    for node in order:
        if node.children and refs.get(node.uid, 0) >= 2:
            while f"t{counter}" in used_names:
                counter += 1
            names[node.uid] = f"t{counter}"
            used_names.add(f"t{counter}")
            counter += 1

    def render(root, defining):
        # Bottom-up: each rendered node carries its own precedence so the
        # parent can decide whether to parenthesize. Named nodes render as
        # their name except on their own defining line.
        memo: "dict[int, tuple[str, int]]" = {}

        def entry(node):
            if node.uid in names and not (defining and node is root):
                return (names[node.uid], 4)
            return memo[node.uid]

        todo = [(root, False)]
        while todo:
            node, expanded = todo.pop()
            cut = node.uid in names and not (defining and node is root)
            if cut or node.uid in memo:
                continue
            if not expanded:
                todo.append((node, True))
                for child in node.children:
                    todo.append((child, False))
                continue
            if node.op == VAR:
                memo[node.uid] = (node.payload, 4)
            elif node.op == CONST:
                memo[node.uid] = (str(node.payload), 4)
            elif node.op == CONCAT:
                raise ParseError("concat roots cannot be printed as equations")
            elif node.op == NOT:
                s, prec = entry(node.children[0])
                if prec < _PREC[NOT]:
                    s = "(" + s + ")"
                memo[node.uid] = ("!" + s, _PREC[NOT])
            else:
                my = _PREC[node.op]
                ls, lp = entry(node.children[0])
                rs, rp = entry(node.children[1])
                if lp < my:
                    ls = "(" + ls + ")"
                if rp < my + 1:
                    rs = "(" + rs + ")"
                sep = " + " if node.op == OR else " * "
                memo[node.uid] = (ls + sep + rs, my)
        return entry(root)[0]

    lines = []
    if c.inputs:
        lines.append("INORDER = " + " ".join(c.inputs) + ";")
    lines.append("OUTORDER = " + " ".join(c.output_names) + ";")
    for node in order:
        if node.uid in names:
            lines.append(f"{names[node.uid]} = {render(node, True)};")
    for name, root in c.outputs:
        lines.append(f"{name} = {render(root, False)};")
    return "\n".join(lines) + "\n"


_SEXPR_OPS = {"&": AND, "|": OR, "!": NOT, "concat": CONCAT}
_OP_SYMBOL = {AND: "&", OR: "|", NOT: "!", CONCAT: "concat"}
_SEXPR_ARITY = {AND: (2, 2), OR: (2, 2), NOT: (1, 1), CONCAT: (1, None)}


def term_to_sexpr(t: Term) -> str:
    """Nested S-expression text; sharing is expanded into the tree."""
    out = []
    stack = [(t, False)]
    while stack:
        node, closing = stack.pop()
        if closing:
            out.append(")")
            continue
        if node.op == VAR:
            out.append(node.payload)
        elif node.op == CONST:
            out.append(str(node.payload))
        else:
            out.append("(" + _OP_SYMBOL[node.op])
            stack.append((node, True))
            for child in reversed(node.children):
                stack.append((child, False))
    text = ""
    for piece in out:
        if text and not text.endswith("(") and piece != ")":
            text += " "
        text += piece
    return text


_SEXPR_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def sexpr_to_term(text: str, store: TermStore = STORE) -> Term:
    """Parse one S-expression into an interned term. No simplification:
    ``(! (! a))`` stays a double negation.
    """
    tokens = _SEXPR_TOKEN.findall(text)
    if not tokens:
        raise ParseError("empty S-expression")
    pos = 0

    def atom(tok):
        if tok in ("0", "1"):
            return store.const(int(tok))
        if _IDENT_RE.fullmatch(tok):
            return store.var(tok)
        raise ParseError(f"bad atom {tok!r}")

    # Iterative shunting over an explicit frame stack: each frame is
    # [op, children...]; a ")" pops and interns it.
    root = None
    frames = []
    while pos < len(tokens):
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ParseError("unbalanced parentheses")
            op_tok = tokens[pos]
            pos += 1
            if op_tok not in _SEXPR_OPS:
                raise ParseError(f"unknown operator {op_tok!r}")
            frames.append([_SEXPR_OPS[op_tok]])
            continue
        if tok == ")":
            if not frames:
                raise ParseError("unbalanced parentheses")
            frame = frames.pop()
            op, children = frame[0], frame[1:]
            lo, hi = _SEXPR_ARITY[op]
            if len(children) < lo or (hi is not None and len(children) > hi):
                raise ParseError(f"operator {_OP_SYMBOL[op]!r} got {len(children)} children")
            term = store.intern(op, children)
            if frames:
                frames[-1].append(term)
            elif root is None:
                root = term
            else:
                raise ParseError("more than one term in file")
        else:
            term = atom(tok)
            if frames:
                frames[-1].append(term)
            elif root is None:
                root = term
            else:
                raise ParseError("more than one term in file")
    if frames:
        raise ParseError("unbalanced parentheses")
    if root is None:
        raise ParseError("empty S-expression")
    return root

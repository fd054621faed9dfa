"""Line-oriented scenario files: declarations plus queries.

A scenario fixes one of the three instances (classical, stochastic,
quantum), declares named objects with ``let`` lines, and asks an ordered
list of ``query`` lines.  The grammar is deliberately small:

    # comment
    instance quantum
    let NAME = EXPR
    query KIND(ARG, ...)

where EXPR is a name, a number, a constructor call, or a matrix literal
``matrix R C`` followed by R rows of ``a+bi`` entries.  Query arguments
may nest constructor and test calls; every leaf name must be declared (or
built in).  Declarations are evaluated at load time so that invariant
violations are reported with their line number.

Reports are deterministic: one line per query, reals printed to a fixed
number of decimals, matrices in the shared literal format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import classical, effect_algebra, linalg, quantum, stochastic
from .classical import BoolPredicate, FinMap, FinSet
from .effect_algebra import FiniteEffectAlgebra
from .quantum import DensityMatrix, Effect, Isometry, PureState, QPredicate
from .stochastic import Distribution, FuzzyPredicate, StochasticMap

INSTANCES = ("classical", "stochastic", "quantum")

QUERY_ARITY = {
    "born": 2,
    "substitute": 2,
    "andthen": 2,
    "then": 2,
    "measure": 2,
    "orthosum": 2,
    "multiply": 2,
    "comprehension": 1,
    "states": 1,
    "axioms": 1,
}

# Constructor argument positions read as bare labels instead of names.
_LABEL_ARGS = {
    "carrier": 0,
    "subset": 1,
    "finmap": 2,
    "elem": 1,
}


class ScenarioError(Exception):
    """A parse-time problem, with 1-based line and column coordinates."""

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class QueryError(Exception):
    """An evaluation-time problem inside a single query."""


@dataclass(frozen=True)
class NameRef:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class NumberLit:
    value: float
    line: int
    col: int


@dataclass(frozen=True)
class CallExpr:
    fn: str
    args: tuple
    line: int
    col: int


@dataclass(frozen=True)
class Query:
    kind: str
    args: tuple
    line: int
    precision: Optional[int] = None


@dataclass
class Scenario:
    instance: str
    declarations: dict = field(default_factory=dict)
    queries: list[Query] = field(default_factory=list)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![A-Za-z_.'])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.']*)"
    r"|(?P<punct>[(),=]))"
)


def _tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ScenarioError(f"unexpected character {text[pos:].strip()[0]!r}", line, pos + 1)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num") + 1))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name") + 1))
        else:
            tokens.append(("punct", m.group("punct"), m.start("punct") + 1))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ScenarioError("unexpected end of line", self.line)
        self.i += 1
        return tok

    def expect_punct(self, ch):
        tok = self.take()
        if tok[0] != "punct" or tok[1] != ch:
            raise ScenarioError(f"expected {ch!r}, found {tok[1]!r}", self.line, tok[2])
        return tok

    def parse_expr(self):
        tok = self.take()
        if tok[0] == "num":
            return NumberLit(float(tok[1]), self.line, tok[2])
        if tok[0] != "name":
            raise ScenarioError(f"expected a name or number, found {tok[1]!r}", self.line, tok[2])
        nxt = self.peek()
        if nxt and nxt[0] == "punct" and nxt[1] == "(":
            self.take()
            args = []
            nxt = self.peek()
            if nxt and nxt[0] == "punct" and nxt[1] == ")":
                self.take()
                return CallExpr(tok[1], tuple(args), self.line, tok[2])
            while True:
                args.append(self.parse_expr())
                sep = self.take()
                if sep[0] != "punct" or sep[1] not in ",)":
                    raise ScenarioError(f"expected ',' or ')', found {sep[1]!r}", self.line, sep[2])
                if sep[1] == ")":
                    break
            return CallExpr(tok[1], tuple(args), self.line, tok[2])
        return NameRef(tok[1], self.line, tok[2])

    def finish(self):
        tok = self.peek()
        if tok is not None:
            raise ScenarioError(f"trailing input {tok[1]!r}", self.line, tok[2])


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario, evaluating declarations eagerly."""
    lines = text.splitlines()
    scenario: Optional[Scenario] = None
    evaluator: Optional[_Evaluator] = None
    i = 0
    while i < len(lines):
        lineno = i + 1
        content = _strip_comment(lines[i])
        i += 1
        if not content.strip():
            continue
        tokens = _tokenize(content, lineno)
        head = tokens[0]
        if head[0] != "name":
            raise ScenarioError(f"expected a directive, found {head[1]!r}", lineno, head[2])
        if head[1] == "instance":
            if scenario is not None:
                raise ScenarioError("duplicate instance line", lineno)
            if len(tokens) != 2 or tokens[1][0] != "name":
                raise ScenarioError("expected 'instance NAME'", lineno, head[2])
            name = tokens[1][1]
            if name not in INSTANCES:
                raise ScenarioError(f"unknown instance {name!r}", lineno, tokens[1][2])
            scenario = Scenario(name)
            evaluator = _Evaluator(scenario)
            continue
        if scenario is None:
            raise ScenarioError("scenario must start with an instance line", lineno)
        if head[1] == "let":
            if len(tokens) < 3 or tokens[1][0] != "name":
                raise ScenarioError("expected 'let NAME = EXPR'", lineno, head[2])
            name = tokens[1][1]
            if tokens[2][:2] != ("punct", "="):
                raise ScenarioError("expected '=' after the name", lineno, tokens[2][2])
            if name in scenario.declarations or name in evaluator.builtins:
                raise ScenarioError(f"name {name!r} already defined", lineno, tokens[1][2])
            body = tokens[3:]
            if body and body[0][0] == "name" and body[0][1] == "matrix":
                if len(body) != 3 or body[1][0] != "num" or body[2][0] != "num":
                    raise ScenarioError("matrix literal needs 'matrix ROWS COLS'", lineno)
                rows, cols = int(float(body[1][1])), int(float(body[2][1]))
                if rows < 0 or cols < 0:
                    raise ScenarioError("matrix dimensions must be non-negative", lineno)
                entry_lines = []
                for r in range(rows):
                    if i >= len(lines):
                        raise ScenarioError("matrix literal ends early", lineno)
                    entry_lines.append(_strip_comment(lines[i]).strip())
                    i += 1
                try:
                    value = linalg.parse_matrix("\n".join([f"{rows} {cols}"] + entry_lines))
                except ValueError as exc:
                    raise ScenarioError(str(exc), lineno) from None
                scenario.declarations[name] = value
                continue
            parser = _ExprParser(body, lineno)
            expr = parser.parse_expr()
            parser.finish()
            evaluator.validate_names(expr)
            try:
                scenario.declarations[name] = evaluator.evaluate(expr)
            except (QueryError, ValueError, KeyError) as exc:
                raise ScenarioError(str(exc), lineno) from None
            continue
        if head[1] == "query":
            parser = _ExprParser(tokens[1:], lineno)
            expr = parser.parse_expr()
            precision = None
            nxt = parser.peek()
            if nxt and nxt[0] == "name" and nxt[1] == "precision":
                parser.take()
                tok = parser.take()
                if tok[0] != "num" or float(tok[1]) != int(float(tok[1])):
                    raise ScenarioError("precision must be an integer", lineno, tok[2])
                precision = int(float(tok[1]))
                if not 0 <= precision <= 17:
                    raise ScenarioError("precision must be between 0 and 17", lineno, tok[2])
            parser.finish()
            if not isinstance(expr, CallExpr):
                raise ScenarioError("a query must be KIND(ARGS)", lineno)
            if expr.fn not in QUERY_ARITY:
                raise ScenarioError(f"unknown query kind {expr.fn!r}", lineno, expr.col)
            if len(expr.args) != QUERY_ARITY[expr.fn]:
                raise ScenarioError(
                    f"{expr.fn} takes {QUERY_ARITY[expr.fn]} arguments, got {len(expr.args)}",
                    lineno, expr.col,
                )
            for arg in expr.args:
                evaluator.validate_names(arg)
            scenario.queries.append(Query(expr.fn, expr.args, lineno, precision))
            continue
        raise ScenarioError(f"unrecognised directive {head[1]!r}", lineno, head[2])
    if scenario is None:
        raise ScenarioError("empty scenario: no instance line", max(len(lines), 1))
    return scenario


class _Evaluator:
    """Shared constructor/namespace logic for declarations and queries."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.builtins: dict[str, object] = {}
        if scenario.instance == "quantum":
            self.builtins.update(
                ket0=PureState(quantum.KET0),
                ket1=PureState(quantum.KET1),
                ketNE=PureState(quantum.KET_NE),
                ketNW=PureState(quantum.KET_NW),
                hadamard=quantum.HADAMARD,
                pauliX=quantum.PAULI_X,
                pauliY=quantum.PAULI_Y,
                pauliZ=quantum.PAULI_Z,
            )
        self.constructors: dict[str, Callable] = {
            "mo": self._make_mo,
            "powerset": self._make_powerset,
        }
        if scenario.instance == "classical":
            self.constructors.update(
                carrier=self._make_carrier,
                subset=self._make_subset,
                finmap=self._make_finmap,
                elem=self._make_elem,
            )
        elif scenario.instance == "stochastic":
            self.constructors.update(
                carrier=self._make_carrier,
                dist=self._make_dist,
                fuzzy=self._make_fuzzy,
                stochmap=self._make_stochmap,
            )
        else:
            self.constructors.update(
                ket=self._make_ket,
                effect=self._make_effect,
                predicate=self._make_predicate,
                projector=self._make_projector,
                density=self._make_density,
                isometry=self._make_isometry,
            )

    # -- name validation ------------------------------------------------

    def validate_names(self, expr) -> None:
        if isinstance(expr, NumberLit):
            return
        if isinstance(expr, NameRef):
            if expr.name not in self.scenario.declarations and expr.name not in self.builtins:
                raise ScenarioError(f"unknown name {expr.name!r}", expr.line, expr.col)
            return
        if isinstance(expr, CallExpr):
            if expr.fn not in self.constructors and expr.fn not in QUERY_ARITY:
                raise ScenarioError(f"unknown constructor {expr.fn!r}", expr.line, expr.col)
            start_labels = _LABEL_ARGS.get(expr.fn)
            for idx, arg in enumerate(expr.args):
                if start_labels is not None and idx >= start_labels:
                    if not isinstance(arg, NameRef):
                        raise ScenarioError(
                            f"argument {idx + 1} of {expr.fn} must be a label",
                            expr.line, expr.col,
                        )
                    continue
                self.validate_names(arg)
            return
        raise AssertionError("unreachable expression kind")

    # -- evaluation -------------------------------------------------------

    def evaluate(self, expr):
        if isinstance(expr, NumberLit):
            return expr.value
        if isinstance(expr, NameRef):
            if expr.name in self.scenario.declarations:
                return self.scenario.declarations[expr.name]
            if expr.name in self.builtins:
                return self.builtins[expr.name]
            raise QueryError(f"unknown name {expr.name!r}")
        if isinstance(expr, CallExpr):
            if expr.fn in self.constructors:
                return self.constructors[expr.fn](expr)
            if expr.fn in QUERY_ARITY:
                if len(expr.args) != QUERY_ARITY[expr.fn]:
                    raise QueryError(f"{expr.fn} takes {QUERY_ARITY[expr.fn]} arguments")
                return _apply_operator(self.scenario.instance, expr.fn,
                                       [self.evaluate(a) for a in expr.args])
            raise QueryError(f"unknown constructor {expr.fn!r}")
        raise AssertionError("unreachable expression kind")

    def _labels(self, expr: CallExpr, start: int) -> list[str]:
        out = []
        for arg in expr.args[start:]:
            if not isinstance(arg, NameRef):
                raise QueryError(f"{expr.fn} expects labels, found {arg!r}")
            out.append(arg.name)
        return out

    def _numbers(self, expr: CallExpr, start: int) -> list[float]:
        out = []
        for arg in expr.args[start:]:
            value = self.evaluate(arg)
            if not isinstance(value, (int, float)):
                raise QueryError(f"{expr.fn} expects numbers from position {start + 1}")
            out.append(float(value))
        return out

    def _arg(self, expr: CallExpr, idx: int, kind, what: str):
        if idx >= len(expr.args):
            raise QueryError(f"{expr.fn} is missing argument {idx + 1}")
        value = self.evaluate(expr.args[idx])
        if not isinstance(value, kind):
            raise QueryError(f"argument {idx + 1} of {expr.fn} must be {what}")
        return value

    def _make_mo(self, expr):
        n = self._numbers(expr, 0)
        if len(n) != 1 or n[0] != int(n[0]):
            raise QueryError("mo takes one natural number")
        return effect_algebra.mo_free(int(n[0]))

    def _make_powerset(self, expr):
        n = self._numbers(expr, 0)
        if len(n) != 1 or n[0] != int(n[0]):
            raise QueryError("powerset takes one natural number")
        return effect_algebra.boolean_powerset_ea(int(n[0]))

    def _make_carrier(self, expr):
        return FinSet(tuple(self._labels(expr, 0)))

    def _make_subset(self, expr):
        c = self._arg(expr, 0, FinSet, "a carrier")
        members = frozenset(c.index_of(l) for l in self._labels(expr, 1))
        return BoolPredicate(c, members)

    def _make_finmap(self, expr):
        src = self._arg(expr, 0, FinSet, "a carrier")
        tgt = self._arg(expr, 1, FinSet, "a carrier")
        images = self._labels(expr, 2)
        if len(images) != src.size:
            raise QueryError(f"finmap needs {src.size} image labels, got {len(images)}")
        return FinMap(src, tgt, tuple(tgt.index_of(l) for l in images))

    def _make_elem(self, expr):
        c = self._arg(expr, 0, FinSet, "a carrier")
        labels = self._labels(expr, 1)
        if len(labels) != 1:
            raise QueryError("elem takes a carrier and one label")
        return ("element", c, c.index_of(labels[0]))

    def _make_dist(self, expr):
        c = self._arg(expr, 0, FinSet, "a carrier")
        return Distribution(c, np.array(self._numbers(expr, 1)))

    def _make_fuzzy(self, expr):
        c = self._arg(expr, 0, FinSet, "a carrier")
        return FuzzyPredicate(c, np.array(self._numbers(expr, 1)))

    def _make_stochmap(self, expr):
        src = self._arg(expr, 0, FinSet, "a carrier")
        tgt = self._arg(expr, 1, FinSet, "a carrier")
        entries = self._numbers(expr, 2)
        if len(entries) != src.size * tgt.size:
            raise QueryError(f"stochmap needs {src.size * tgt.size} entries, got {len(entries)}")
        return StochasticMap(src, tgt, np.array(entries).reshape(src.size, tgt.size))

    def _make_ket(self, expr):
        return PureState(np.array(self._numbers(expr, 0), dtype=np.complex128))

    def _matrix_arg(self, expr, idx):
        value = self.evaluate(expr.args[idx]) if idx < len(expr.args) else None
        if isinstance(value, np.ndarray):
            return value
        if isinstance(value, Effect):
            return value.matrix
        raise QueryError(f"argument {idx + 1} of {expr.fn} must be a matrix")

    def _make_effect(self, expr):
        return Effect(self._matrix_arg(expr, 0))

    def _make_predicate(self, expr):
        return QPredicate.from_effect(Effect(self._matrix_arg(expr, 0)))

    def _make_projector(self, expr):
        state = self._arg(expr, 0, PureState, "a state")
        return quantum.projector(state)

    def _make_density(self, expr):
        return DensityMatrix(self._matrix_arg(expr, 0))

    def _make_isometry(self, expr):
        return Isometry(self._matrix_arg(expr, 0))


def _as_effect(value) -> Effect:
    if isinstance(value, QPredicate):
        return value.first
    if isinstance(value, Effect):
        return value
    raise QueryError("expected an effect or predicate")


def _apply_operator(instance: str, kind: str, args: list):
    if kind == "born":
        if instance != "quantum":
            raise QueryError("born is a quantum query")
        state, pred = args
        if not isinstance(state, PureState):
            raise QueryError("born needs a pure state first")
        return quantum.born_probability(state, _as_effect(pred))

    if kind in ("andthen", "then"):
        p, q = args
        if isinstance(p, BoolPredicate) and isinstance(q, BoolPredicate):
            op = classical.test_andthen if kind == "andthen" else classical.test_then
            return op(p, q)
        if isinstance(p, FuzzyPredicate) and isinstance(q, FuzzyPredicate):
            op = stochastic.test_andthen if kind == "andthen" else stochastic.test_then
            return op(p, q)
        if isinstance(p, (Effect, QPredicate)) and isinstance(q, (Effect, QPredicate)):
            op = quantum.test_andthen if kind == "andthen" else quantum.test_then
            return op(_as_effect(p), _as_effect(q))
        raise QueryError(f"{kind} expects two predicates of the same instance")

    if kind == "orthosum":
        p, q = args
        if isinstance(p, BoolPredicate) and isinstance(q, BoolPredicate):
            return classical.orthosum(p, q)
        if isinstance(p, FuzzyPredicate) and isinstance(q, FuzzyPredicate):
            return stochastic.orthosum(p, q)
        if isinstance(p, QPredicate) and isinstance(q, QPredicate):
            return quantum.orthosum(p, q)
        raise QueryError("orthosum expects two predicates of the same instance")

    if kind == "substitute":
        f, q = args
        if isinstance(f, FinMap) and isinstance(q, BoolPredicate):
            return classical.substitute(f, q)
        if isinstance(f, StochasticMap) and isinstance(q, FuzzyPredicate):
            return stochastic.substitute(f, q)
        if isinstance(f, Isometry) and isinstance(q, (QPredicate, Effect)):
            if isinstance(q, QPredicate):
                return quantum.substitute(f, q)
            return quantum.substitute_effect(f, q)
        raise QueryError("substitute expects a map and a matching predicate")

    if kind == "multiply":
        s, p = args
        if not isinstance(s, (int, float)):
            raise QueryError("multiply expects a probability first")
        if isinstance(p, FuzzyPredicate):
            return stochastic.probability_multiply(float(s), p)
        if isinstance(p, (QPredicate, Effect)):
            if isinstance(p, Effect):
                p = QPredicate.from_effect(p)
            return quantum.probability_multiply(float(s), p)
        raise QueryError("multiply expects a fuzzy or quantum predicate")

    if kind == "measure":
        p, state = args
        if isinstance(p, BoolPredicate):
            if not (isinstance(state, tuple) and state and state[0] == "element"):
                raise QueryError("classical measure expects elem(carrier, label)")
            _, carrier, index = state
            if carrier != p.carrier:
                raise QueryError("element belongs to a different carrier")
            return ("tagged", p.carrier, classical.measure(p, index))
        if isinstance(p, FuzzyPredicate) and isinstance(state, Distribution):
            return stochastic.measure_distribution(p, state)
        if isinstance(p, QPredicate) and isinstance(state, PureState):
            return quantum.measure_pure(p, state)
        if isinstance(p, QPredicate) and isinstance(state, DensityMatrix):
            return quantum.measure_density(p, state)
        raise QueryError("measure expects a predicate and a matching state")

    if kind == "comprehension":
        (p,) = args
        if isinstance(p, BoolPredicate):
            sub, _ = classical.comprehension(p)
            return sub
        if isinstance(p, FuzzyPredicate):
            sub, _ = stochastic.comprehension(p)
            return sub
        if isinstance(p, QPredicate):
            return quantum.comprehension(p)
        raise QueryError("comprehension expects a predicate")

    if kind == "states":
        (n,) = args
        if instance != "classical":
            raise QueryError("states is a classical query")
        if not isinstance(n, (int, float)) or n != int(n):
            raise QueryError("states takes a natural number")
        return len(classical.stone_states(int(n)))

    if kind == "axioms":
        (target,) = args
        if isinstance(target, FiniteEffectAlgebra):
            algebra = target
        elif isinstance(target, FinSet) and instance == "classical":
            if target.size > 4:
                raise QueryError("axioms on a carrier is exhaustive, size must be <= 4")
            algebra = classical.predicate_algebra(target)
        else:
            raise QueryError("axioms expects an algebra (mo, powerset) or a small carrier")
        report = effect_algebra.check_axioms(algebra)
        return ("report", algebra, report)

    raise QueryError(f"unknown query kind {kind!r}")


# -- report formatting --------------------------------------------------------


def _fmt_real(value: float, prec: int) -> str:
    if value == 0.0:
        value = 0.0
    return f"{value:.{prec}f}"


def format_value(value, prec: int) -> str:
    """Render a query result deterministically (matrices span lines)."""
    if value is None:
        return "undefined"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_real(float(value), prec)
    if isinstance(value, FinSet):
        return "{" + ",".join(value.labels) + "}"
    if isinstance(value, BoolPredicate):
        return "{" + ",".join(value.carrier.labels[i] for i in sorted(value.members)) + "}"
    if isinstance(value, FuzzyPredicate):
        return "[" + ", ".join(_fmt_real(v, prec) for v in value.values) + "]"
    if isinstance(value, Distribution):
        pairs = [f"{l}: {_fmt_real(w, prec)}" for l, w in zip(value.carrier.labels, value.weights)]
        return "{" + ", ".join(pairs) + "}"
    if isinstance(value, tuple) and value and value[0] == "tagged":
        _, carrier, tagged = value
        return f"{tagged.side}({carrier.labels[tagged.index]})"
    if isinstance(value, tuple) and value and value[0] == "report":
        _, algebra, report = value
        return report.describe(algebra)
    if isinstance(value, PureState):
        return linalg.format_matrix(value.vector.reshape(-1, 1), prec)
    if isinstance(value, Effect):
        return linalg.format_matrix(value.matrix, prec)
    if isinstance(value, QPredicate):
        return linalg.format_matrix(value.first.matrix, prec)
    if isinstance(value, (DensityMatrix, Isometry)):
        return linalg.format_matrix(value.matrix, prec)
    if isinstance(value, np.ndarray):
        return linalg.format_matrix(value, prec)
    raise QueryError(f"cannot render value of type {type(value).__name__}")


def run(scenario: Scenario, precision: int = 9) -> tuple[str, bool]:
    """Evaluate every query in order; errors are reported inline.

    Returns the report text and whether all queries succeeded.
    """
    evaluator = _Evaluator(scenario)
    lines = []
    ok = True
    for idx, query in enumerate(scenario.queries):
        digits = precision if query.precision is None else query.precision
        try:
            value = _apply_operator(
                scenario.instance, query.kind,
                [evaluator.evaluate(a) for a in query.args],
            )
            rendered = format_value(value, digits)
        except (QueryError, ValueError, KeyError) as exc:
            rendered = f"error: {exc}"
            ok = False
        lines.append(f"{idx}: {query.kind} = {rendered}")
    return "\n".join(lines) + "\n", ok

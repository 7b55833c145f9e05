"""Hardness-style instance generators and their brute-force oracles.

``reduce_3sat`` turns a 3-CNF into a model-checking instance over an
empty-vocabulary structure.  Every clause contributes one team row per
literal: x holds the literal's variable, y its sign, u the 1-based clause
index, and v the position of the literal inside the clause.  The fixed
target formula ``=(x;y) | =(u;v) | =(u;v)`` holds exactly when one literal
per clause can be chosen with consistent signs, i.e. when the CNF is
satisfiable: the (x;y)-part of a cover picks the satisfying literals and
each (u;v)-part may hold at most one leftover row per clause.

``reduce_pdl`` turns a propositional team-logic formula into model
checking over the two-element structure with a single unary relation TRUE
holding 1: propositions become existentially quantified variables and a
proposition test becomes TRUE(x).  The starting team is the single empty
assignment, so satisfaction matches nonempty-team satisfiability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .model import Structure, Team
from .syntax import (
    And,
    DepAtom,
    Exists,
    Formula,
    Or,
    RelAtom,
    Var,
    parse_formula,
    tokenize,
    FormulaSyntaxError,
    _IDENT,
    KEYWORDS,
)


class CNFError(ValueError):
    """Malformed CNF or DIMACS input."""


@dataclass(frozen=True)
class CNF:
    """A CNF with exactly three literals per clause, variables 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise CNFError("negative variable count")
        for clause in self.clauses:
            if len(clause) != 3:
                raise CNFError(f"clause {clause!r} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or not (1 <= abs(lit) <= self.num_vars):
                    raise CNFError(f"literal {lit} out of range in clause {clause!r}")


def parse_dimacs(text: str) -> CNF:
    """Parse DIMACS CNF; clauses with other than three literals are rejected."""
    num_vars = num_clauses = None
    pending: list[int] = []
    clauses: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CNFError(f"line {lineno}: bad DIMACS header {line!r}")
            if num_vars is not None:
                raise CNFError(f"line {lineno}: duplicate DIMACS header")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise CNFError(f"line {lineno}: bad DIMACS header {line!r}") from None
            continue
        if num_vars is None:
            raise CNFError(f"line {lineno}: clause before DIMACS header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise CNFError(f"line {lineno}: bad literal {token!r}") from None
            if lit == 0:
                clauses.append(tuple(pending))
                pending.clear()
            else:
                pending.append(lit)
    if num_vars is None:
        raise CNFError("missing DIMACS header")
    if pending:
        raise CNFError("unterminated clause (missing trailing 0)")
    if num_clauses != len(clauses):
        raise CNFError(f"header promises {num_clauses} clauses, found {len(clauses)}")
    return CNF(num_vars, tuple(clauses))


def evaluate_cnf(cnf: CNF, valuation: Mapping[int, bool]) -> bool:
    """Direct clause-by-clause evaluation under a total valuation."""
    return all(
        any(bool(valuation[abs(lit)]) == (lit > 0) for lit in clause)
        for clause in cnf.clauses
    )


def sat_brute(cnf: CNF) -> bool:
    """Exhaustive satisfiability over all 2^n valuations; capped at 20 variables."""
    if cnf.num_vars > 20:
        raise ValueError("brute-force SAT is capped at 20 variables")
    for bits in range(1 << cnf.num_vars):
        valuation = {j: bool(bits >> (j - 1) & 1) for j in range(1, cnf.num_vars + 1)}
        if evaluate_cnf(cnf, valuation):
            return True
    return False


# --- 3-SAT reduction ----------------------------------------------------------

FIXED_3SAT_FORMULA = "=(x;y) | =(u;v) | =(u;v)"
_3SAT_DOMAIN = ("x", "y", "u", "v")


def _variable_element(j: int) -> str:
    return f"p{j}"


def reduce_3sat(cnf: CNF) -> tuple[Structure, Team, Formula]:
    """Build the empty-vocabulary instance whose team encodes the clauses.

    The universe holds one element per CNF variable plus the numerals
    0..max(m,2), so that sign, clause-index, and position values always
    exist; for two or more clauses its size is num_vars + m + 1.
    """
    m = len(cnf.clauses)
    universe = [_variable_element(j) for j in range(1, cnf.num_vars + 1)]
    universe += [str(i) for i in range(max(m, 2) + 1)]
    structure = Structure(universe)
    rows = []
    for i, clause in enumerate(cnf.clauses, 1):
        for position, lit in enumerate(clause):
            rows.append(
                (
                    _variable_element(abs(lit)),
                    "1" if lit > 0 else "0",
                    str(i),
                    str(position),
                )
            )
    team = Team.from_named_rows(_3SAT_DOMAIN, rows, structure)
    return structure, team, parse_formula(FIXED_3SAT_FORMULA)


def extract_valuation(
    cnf: CNF, structure: Structure, team: Team
) -> dict[int, bool] | None:
    """Read a satisfying valuation off a clause-consistent row selection.

    Searches for one row per clause whose (variable, sign) pairs are
    consistent; those rows are the (x;y)-part of a satisfying cover.  A
    variable is true exactly when a selected row carries it with sign 1;
    unselected variables default to false.  Returns None when no selection
    exists (the CNF is then unsatisfiable).
    """
    by_clause: dict[int, list[tuple[str, str]]] = {}
    for assignment in team.assignments():
        named = assignment.named(structure)
        try:
            clause_index = int(named["u"])
        except (ValueError, KeyError):
            raise ValueError("team does not have the reduced-instance shape") from None
        by_clause.setdefault(clause_index, []).append((named["x"], named["y"]))
    if sorted(by_clause) != list(range(1, len(cnf.clauses) + 1)):
        raise ValueError("team does not cover the CNF's clause indices")

    chosen: dict[str, str] = {}

    def select(clause_index: int) -> bool:
        if clause_index > len(cnf.clauses):
            return True
        for variable, sign in by_clause[clause_index]:
            previous = chosen.get(variable)
            if previous is None:
                chosen[variable] = sign
                if select(clause_index + 1):
                    return True
                del chosen[variable]
            elif previous == sign:
                if select(clause_index + 1):
                    return True
        return False

    if not select(1):
        return None
    return {
        j: chosen.get(_variable_element(j)) == "1"
        for j in range(1, cnf.num_vars + 1)
    }


# --- propositional dependence logic ---------------------------------------------

@dataclass(frozen=True)
class PropLit:
    name: str
    negated: bool = False


@dataclass(frozen=True)
class PDLDep:
    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]

    def __post_init__(self):
        if not self.consequent:
            raise ValueError("dependence atom needs a nonempty consequent")


@dataclass(frozen=True)
class PDLAnd:
    left: "PDLFormula"
    right: "PDLFormula"


@dataclass(frozen=True)
class PDLOr:
    left: "PDLFormula"
    right: "PDLFormula"


PDLFormula = Union[PropLit, PDLDep, PDLAnd, PDLOr]


def pdl_propositions(formula: PDLFormula) -> tuple[str, ...]:
    """Propositions in first-occurrence order."""
    out: list[str] = []

    def add(name: str) -> None:
        if name not in out:
            out.append(name)

    def walk(f: PDLFormula) -> None:
        if isinstance(f, PropLit):
            add(f.name)
        elif isinstance(f, PDLDep):
            for name in f.antecedent + f.consequent:
                add(name)
        else:
            walk(f.left)
            walk(f.right)

    walk(formula)
    return tuple(out)


class _PDLParser:
    """Proposition-only restriction of the formula grammar: no quantifiers,
    no equality, and dependence atoms range over bare propositions."""

    def __init__(self, tokens, end):
        self.tokens = tokens
        self.i = 0
        self.end = end

    def _peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _next(self):
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of input", self.end)
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _expect(self, text):
        tok, pos = self._next()
        if tok != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {tok!r}", pos)

    def proposition(self) -> str:
        tok, pos = self._next()
        if not _IDENT.fullmatch(tok) or tok in KEYWORDS:
            raise FormulaSyntaxError(f"expected a proposition, found {tok!r}", pos)
        return tok

    def disj(self) -> PDLFormula:
        node = self.conj()
        while self._peek() == "|":
            self._next()
            node = PDLOr(node, self.conj())
        return node

    def conj(self) -> PDLFormula:
        node = self.unit()
        while self._peek() == "&":
            self._next()
            node = PDLAnd(node, self.unit())
        return node

    def unit(self) -> PDLFormula:
        tok = self._peek()
        if tok == "(":
            self._next()
            node = self.disj()
            self._expect(")")
            return node
        if tok == "!":
            self._next()
            return PropLit(self.proposition(), negated=True)
        if tok == "=":
            self._next()
            self._expect("(")
            antecedent = []
            if self._peek() != ";":
                antecedent.append(self.proposition())
                while self._peek() == ",":
                    self._next()
                    antecedent.append(self.proposition())
            self._expect(";")
            consequent = [self.proposition()]
            while self._peek() == ",":
                self._next()
                consequent.append(self.proposition())
            self._expect(")")
            return PDLDep(tuple(antecedent), tuple(consequent))
        return PropLit(self.proposition())


def parse_pdl(text: str) -> PDLFormula:
    parser = _PDLParser(tokenize(text), len(text))
    formula = parser.disj()
    if parser.i < len(parser.tokens):
        tok, pos = parser.tokens[parser.i]
        raise FormulaSyntaxError(f"unexpected token {tok!r} after formula", pos)
    return formula


def pretty_pdl(formula: PDLFormula) -> str:
    if isinstance(formula, PropLit):
        return f"{'!' if formula.negated else ''}{formula.name}"
    if isinstance(formula, PDLDep):
        return f"=({','.join(formula.antecedent)};{','.join(formula.consequent)})"
    if isinstance(formula, PDLOr):
        right = pretty_pdl(formula.right)
        if isinstance(formula.right, PDLOr):
            right = f"({right})"
        return f"{pretty_pdl(formula.left)} | {right}"
    left = pretty_pdl(formula.left)
    if isinstance(formula.left, PDLOr):
        left = f"({left})"
    right = pretty_pdl(formula.right)
    if isinstance(formula.right, (PDLAnd, PDLOr)):
        right = f"({right})"
    return f"{left} & {right}"


def pdl_check(assignments: Iterable[Mapping[str, int]], formula: PDLFormula) -> bool:
    """Team satisfaction over boolean assignments, with cover-based splits.

    Every assignment must be total on the formula's propositions.
    """
    props = pdl_propositions(formula)
    rows = set()
    for s in assignments:
        row = []
        for p in props:
            if p not in s:
                raise ValueError(f"assignment is missing proposition {p!r}")
            value = s[p]
            if value not in (0, 1):
                raise ValueError(f"proposition {p!r} has non-boolean value {value!r}")
            row.append(int(value))
        rows.add(tuple(row))
    base = tuple(sorted(rows))
    position = {p: i for i, p in enumerate(props)}
    return _pdl_eval(formula, (1 << len(base)) - 1, base, position, {})


def _mask_rows(mask: int, base: tuple):
    while mask:
        low = mask & -mask
        yield base[low.bit_length() - 1]
        mask ^= low


def _pdl_eval(f: PDLFormula, mask: int, base: tuple, position: dict, memo: dict) -> bool:
    """Evaluate on the subteam of `base` selected by `mask` bits."""
    key = (f, mask)
    if key in memo:
        return memo[key]
    if isinstance(f, PropLit):
        expected = 0 if f.negated else 1
        index = position[f.name]
        result = all(row[index] == expected for row in _mask_rows(mask, base))
    elif isinstance(f, PDLDep):
        seen: dict = {}
        result = True
        for row in _mask_rows(mask, base):
            antecedent = tuple(row[position[p]] for p in f.antecedent)
            consequent = tuple(row[position[p]] for p in f.consequent)
            previous = seen.get(antecedent)
            if previous is None:
                seen[antecedent] = consequent
            elif previous != consequent:
                result = False
                break
    elif isinstance(f, PDLAnd):
        result = _pdl_eval(f.left, mask, base, position, memo) and _pdl_eval(
            f.right, mask, base, position, memo
        )
    elif isinstance(f, PDLOr):
        # covers as (left, rest-plus-shared): left ranges over submasks, the
        # shared part over submasks of left
        result = False
        left = mask
        while not result:
            if _pdl_eval(f.left, left, base, position, memo):
                shared = left
                while True:
                    if _pdl_eval(f.right, (mask ^ left) | shared, base, position, memo):
                        result = True
                        break
                    if shared == 0:
                        break
                    shared = (shared - 1) & left
            if left == 0:
                break
            left = (left - 1) & mask
    else:
        raise TypeError(f"not a PDL formula: {f!r}")
    memo[key] = result
    return result


def pdl_sat_brute(formula: PDLFormula) -> bool:
    """Satisfiability by a nonempty team, decided over single assignments.

    Downward closure makes one-assignment teams sufficient; the property
    suite verifies that closure for pdl_check independently.  Capped at
    ten propositions.
    """
    props = pdl_propositions(formula)
    if len(props) > 10:
        raise ValueError("brute-force PDL satisfiability is capped at 10 propositions")
    for bits in range(1 << len(props)):
        assignment = {p: bits >> i & 1 for i, p in enumerate(props)}
        if pdl_check([assignment], formula):
            return True
    return False


def reduce_pdl(formula: PDLFormula) -> tuple[Structure, Team, Formula]:
    """Existentially quantify a boolean variable per proposition over {0, 1}.

    Propositions map to variables x1, x2, ... in first-occurrence order;
    a positive proposition becomes TRUE(xi), a negated one !TRUE(xi), and
    dependence atoms carry over.  The returned formula has no universal
    quantifiers and is checked against the single-empty-assignment team.
    """
    props = pdl_propositions(formula)
    variable = {p: f"x{i}" for i, p in enumerate(props, 1)}
    structure = Structure(("0", "1"), relations={"TRUE": (1, [("1",)])})

    def translate(f: PDLFormula) -> Formula:
        if isinstance(f, PropLit):
            return RelAtom("TRUE", (Var(variable[f.name]),), f.negated)
        if isinstance(f, PDLDep):
            return DepAtom(
                tuple(Var(variable[p]) for p in f.antecedent),
                tuple(Var(variable[p]) for p in f.consequent),
            )
        if isinstance(f, PDLAnd):
            return And(translate(f.left), translate(f.right))
        return Or(translate(f.left), translate(f.right))

    fo_formula: Formula = translate(formula)
    for p in reversed(props):
        fo_formula = Exists(variable[p], fo_formula)
    return structure, Team.of_empty_assignment(), fo_formula

"""Finite structures, assignments, teams, and the team-building operations.

Universe elements are interned to integer indices in declaration order;
relation tables, function tables, constants, and team rows are all stored
in index form so that row sets compare and sort canonically.  Element
names appear only at construction and display boundaries.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .syntax import Const, Func, Term, Var, Vocabulary


class StructureError(ValueError):
    """Malformed structure definition or structure file."""


class TeamError(ValueError):
    """Malformed team, team file, or team operation argument."""


class EvaluationError(ValueError):
    """Term evaluation hit an unbound variable or uninterpreted symbol."""


class Structure:
    """A finite structure: universe, relation tables, functions, constants.

    `relations` and `functions` map a symbol name to an ``(arity, table)``
    pair; relation tables are iterables of element-name tuples, function
    tables map argument tuples (or a bare element name, for arity one) to
    an element name and must be total on the universe.
    """

    def __init__(
        self,
        universe: Sequence[str],
        relations: Mapping[str, tuple[int, Iterable[tuple[str, ...]]]] | None = None,
        functions: Mapping[str, tuple[int, Mapping]] | None = None,
        constants: Mapping[str, str] | None = None,
    ):
        self.universe = tuple(universe)
        if not self.universe:
            raise StructureError("universe must be nonempty")
        self._index: dict[str, int] = {}
        for i, name in enumerate(self.universe):
            if name in self._index:
                raise StructureError(f"duplicate universe element {name!r}")
            self._index[name] = i

        self.relations: dict[str, frozenset[tuple[int, ...]]] = {}
        self.relation_arities: dict[str, int] = {}
        for name, (arity, rows) in (relations or {}).items():
            table = set()
            for row in rows:
                row = tuple(row)
                if len(row) != arity:
                    raise StructureError(
                        f"relation {name!r} tuple {row!r} does not have arity {arity}"
                    )
                table.add(tuple(self.element_index(e) for e in row))
            self.relations[name] = frozenset(table)
            self.relation_arities[name] = arity

        self.functions: dict[str, dict[tuple[int, ...], int]] = {}
        self.function_arities: dict[str, int] = {}
        for name, (arity, table) in (functions or {}).items():
            indexed: dict[tuple[int, ...], int] = {}
            for key, value in dict(table).items():
                args = (key,) if isinstance(key, str) else tuple(key)
                if len(args) != arity:
                    raise StructureError(
                        f"function {name!r} entry {args!r} does not have arity {arity}"
                    )
                indexed[tuple(self.element_index(e) for e in args)] = self.element_index(value)
            for args in itertools.product(range(len(self.universe)), repeat=arity):
                if args not in indexed:
                    named = tuple(self.universe[i] for i in args)
                    raise StructureError(f"function {name!r} is not total: missing {named!r}")
            self.functions[name] = indexed
            self.function_arities[name] = arity

        self.constants: dict[str, int] = {
            name: self.element_index(value) for name, value in (constants or {}).items()
        }

        try:
            self._vocabulary = Vocabulary(
                relations=dict(self.relation_arities),
                functions=dict(self.function_arities),
                constants=frozenset(self.constants),
            )
        except ValueError as exc:
            raise StructureError(str(exc)) from None

    @property
    def size(self) -> int:
        return len(self.universe)

    def element_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructureError(f"element {name!r} is not in the universe") from None

    def element_name(self, index: int) -> str:
        return self.universe[index]

    def vocabulary(self) -> Vocabulary:
        return self._vocabulary

    def __repr__(self):
        return f"Structure(|A|={self.size}, vocab={sorted(self._vocabulary.relations)})"


@dataclass(frozen=True)
class Assignment:
    """A single row: a total mapping from its variable domain to element indices."""

    domain: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise TeamError("assignment domain and values differ in length")
        if len(set(self.domain)) != len(self.domain):
            raise TeamError("assignment domain has duplicate variables")

    def __getitem__(self, var: str) -> int:
        try:
            return self.values[self.domain.index(var)]
        except ValueError:
            raise TeamError(f"variable {var!r} is not bound by this assignment") from None

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.domain, self.values))

    def named(self, structure: Structure) -> dict[str, str]:
        return {v: structure.element_name(i) for v, i in zip(self.domain, self.values)}


@dataclass(frozen=True)
class Team:
    """A set of assignments sharing one variable domain.

    The empty team (no rows) and the team of the single empty assignment
    (empty domain, one row) are distinct values.
    """

    domain: tuple[str, ...]
    rows: frozenset[tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "rows", frozenset(tuple(r) for r in self.rows))
        if len(set(self.domain)) != len(self.domain):
            raise TeamError("team domain has duplicate variables")
        width = len(self.domain)
        for row in self.rows:
            if len(row) != width:
                raise TeamError(f"row {row!r} does not match domain width {width}")

    @classmethod
    def from_named_rows(
        cls, domain: Sequence[str], rows: Iterable[Sequence[str]], structure: Structure
    ) -> "Team":
        indexed = set()
        for row in rows:
            try:
                indexed.add(tuple(structure.element_index(e) for e in row))
            except StructureError as exc:
                raise TeamError(str(exc)) from None
        return cls(tuple(domain), frozenset(indexed))

    @classmethod
    def of_empty_assignment(cls) -> "Team":
        """The one-row team over the empty domain."""
        return cls((), frozenset({()}))

    def __len__(self) -> int:
        return len(self.rows)

    def is_empty(self) -> bool:
        return not self.rows

    def sorted_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.rows))

    def assignments(self) -> list[Assignment]:
        return [Assignment(self.domain, row) for row in self.sorted_rows()]

    def restrict(self, variables: Iterable[str]) -> "Team":
        """Project every row onto the given variables (kept in domain order)."""
        wanted = set(variables)
        missing = wanted - set(self.domain)
        if missing:
            raise TeamError(f"cannot restrict to unknown variables {sorted(missing)}")
        positions = [i for i, v in enumerate(self.domain) if v in wanted]
        new_domain = tuple(self.domain[i] for i in positions)
        new_rows = frozenset(tuple(row[i] for i in positions) for row in self.rows)
        return Team(new_domain, new_rows)

    def supplement(
        self,
        var: str,
        choices: Callable[[Assignment], Iterable[int]] | Mapping[Assignment, Iterable[int]],
    ) -> "Team":
        """Extend (or overwrite) `var` in every row with every offered value.

        `choices` must yield a nonempty set of element indices for every
        row; when `var` is already in the domain its value is replaced.
        """
        if callable(choices):
            lookup = choices
        else:
            mapping = dict(choices)

            def lookup(assignment: Assignment) -> Iterable[int]:
                try:
                    return mapping[assignment]
                except KeyError:
                    raise TeamError(
                        f"supplementing function is undefined on row {assignment.values!r}"
                    ) from None

        if var in self.domain:
            position = self.domain.index(var)
            new_domain = self.domain

            def extend(row: tuple[int, ...], value: int) -> tuple[int, ...]:
                return row[:position] + (value,) + row[position + 1:]

        else:
            new_domain = self.domain + (var,)

            def extend(row: tuple[int, ...], value: int) -> tuple[int, ...]:
                return row + (value,)

        new_rows = set()
        for row in self.sorted_rows():
            values = tuple(lookup(Assignment(self.domain, row)))
            if not values:
                raise TeamError(
                    f"supplementing function maps row {row!r} to an empty set"
                )
            for value in values:
                new_rows.add(extend(row, value))
        return Team(new_domain, frozenset(new_rows))

    def duplicate(self, var: str, structure: Structure) -> "Team":
        """Extend every row with every universe element."""
        everything = tuple(range(structure.size))
        return self.supplement(var, lambda _row: everything)


def eval_term(term: Term, structure: Structure, assignment: Assignment) -> int:
    """Value of a term under an assignment, as a universe element index."""
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except TeamError:
            raise EvaluationError(f"unbound variable {term.name!r}") from None
    if isinstance(term, Const):
        try:
            return structure.constants[term.name]
        except KeyError:
            raise EvaluationError(f"uninterpreted constant {term.name!r}") from None
    if isinstance(term, Func):
        table = structure.functions.get(term.name)
        if table is None:
            raise EvaluationError(f"uninterpreted function {term.name!r}")
        args = tuple(eval_term(arg, structure, assignment) for arg in term.args)
        return table[args]
    raise TypeError(f"not a term: {term!r}")


# --- file formats -----------------------------------------------------------
#
# Structure file, line based ('#' starts a comment):
#     universe: a b c
#     relation R/2: (a,b) (b,c)
#     function f/1: a->b b->c c->a
#     constant one = b
#
# Team file: a header line of variable names, then one value row per line.

_DECL = re.compile(r"(relation|function)\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*$")
_GROUP = re.compile(r"\(([^()]*)\)")
_FUNC_ENTRY = re.compile(r"(\(([^()]*)\)|[^\s()]+?)\s*->\s*([^\s()]+)")
_CONSTANT = re.compile(r"constant\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_structure(text: str) -> Structure:
    """Parse the line-based structure format."""
    universe: list[str] | None = None
    relations: dict[str, tuple[int, list[tuple[str, ...]]]] = {}
    functions: dict[str, tuple[int, dict[tuple[str, ...], str]]] = {}
    constants: dict[str, str] = {}
    for lineno, line in _content_lines(text):
        head, colon, rest = line.partition(":")
        word = line.split(None, 1)[0]
        if colon and head.strip() == "universe":
            if universe is not None:
                raise StructureError(f"line {lineno}: duplicate universe line")
            universe = rest.split()
        elif colon and word == "relation":
            m = _DECL.fullmatch(head.strip())
            if not m:
                raise StructureError(f"line {lineno}: bad relation declaration {head!r}")
            name, arity = m.group(2), int(m.group(3))
            if _GROUP.sub("", rest).strip():
                raise StructureError(f"line {lineno}: stray text in relation tuples")
            rows = [
                tuple(part.strip() for part in group.split(","))
                for group in _GROUP.findall(rest)
            ]
            relations[name] = (arity, rows)
        elif colon and word == "function":
            m = _DECL.fullmatch(head.strip())
            if not m:
                raise StructureError(f"line {lineno}: bad function declaration {head!r}")
            name, arity = m.group(2), int(m.group(3))
            if _FUNC_ENTRY.sub("", rest).strip():
                raise StructureError(f"line {lineno}: stray text in function entries")
            table: dict[tuple[str, ...], str] = {}
            for m_entry in _FUNC_ENTRY.finditer(rest):
                if m_entry.group(2) is not None:
                    args = tuple(part.strip() for part in m_entry.group(2).split(","))
                else:
                    args = (m_entry.group(1),)
                table[args] = m_entry.group(3)
            functions[name] = (arity, table)
        elif word == "constant":
            m = _CONSTANT.fullmatch(line)
            if not m:
                raise StructureError(f"line {lineno}: bad constant declaration")
            constants[m.group(1)] = m.group(2)
        else:
            raise StructureError(f"line {lineno}: unrecognized directive {word!r}")
    if universe is None:
        raise StructureError("structure file has no universe line")
    return Structure(universe, relations, functions, constants)


def structure_to_text(structure: Structure) -> str:
    lines = ["universe: " + " ".join(structure.universe)]
    for name in sorted(structure.relations):
        arity = structure.relation_arities[name]
        rows = sorted(structure.relations[name])
        rendered = " ".join(
            "(" + ",".join(structure.element_name(i) for i in row) + ")" for row in rows
        )
        lines.append(f"relation {name}/{arity}: {rendered}".rstrip())
    for name in sorted(structure.functions):
        arity = structure.function_arities[name]
        entries = []
        for args in sorted(structure.functions[name]):
            value = structure.functions[name][args]
            if arity == 1:
                lhs = structure.element_name(args[0])
            else:
                lhs = "(" + ",".join(structure.element_name(i) for i in args) + ")"
            entries.append(f"{lhs}->{structure.element_name(value)}")
        lines.append(f"function {name}/{arity}: " + " ".join(entries))
    for name in sorted(structure.constants):
        lines.append(f"constant {name} = {structure.element_name(structure.constants[name])}")
    return "\n".join(lines) + "\n"


def parse_team(text: str, structure: Structure) -> Team:
    """Parse the header-plus-rows team format; rows are deduplicated.

    A lone ``-`` as the header denotes the empty variable domain, and over
    an empty domain a lone ``-`` row denotes the empty assignment; this is
    how the one-row team over no variables is written down.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise TeamError("team file is empty")
    _, header = lines[0]
    domain = () if header.strip() == "-" else tuple(header.split())
    if len(set(domain)) != len(domain):
        raise TeamError("team header has duplicate variables")
    rows = []
    for lineno, line in lines[1:]:
        if not domain and line.strip() == "-":
            values: tuple[str, ...] = ()
        else:
            values = tuple(line.split())
        if len(values) != len(domain):
            raise TeamError(
                f"line {lineno}: row has {len(values)} values, expected {len(domain)}"
            )
        rows.append(values)
    return Team.from_named_rows(domain, rows, structure)


def team_to_text(team: Team, structure: Structure) -> str:
    lines = [" ".join(team.domain) if team.domain else "-"]
    for row in team.sorted_rows():
        if row:
            lines.append(" ".join(structure.element_name(i) for i in row))
        else:
            lines.append("-")
    return "\n".join(lines) + "\n"

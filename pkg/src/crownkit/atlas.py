"""Classification of crown domains of irreducible non-compact symmetric spaces.

Each row is a symbolic family (a name template with integer parameters), a
set of strict lower bounds on the parameters, and the type of its crown:
Hermitian because G/K is itself Hermitian, Hermitian for a larger group
(with that target space), or rigid.  Matching is purely syntactic on the
templates; low-dimensional isomorphisms between rows are not resolved.

Line format used by the CLI (fields separated by " | "):

    <table> | <class> | <family> | <constraints> | <target or ->
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from crownkit.errors import OutOfRange, UnknownSpace

HERMITIAN_SELF = "hermitian-self"
HERMITIAN_TARGET = "hermitian-target"
RIGID = "rigid"

OTHER_EXCEPTIONAL = "All the other exceptional cases"


@dataclass(frozen=True)
class AtlasEntry:
    table: int
    family: str
    params: tuple  # parameter names in template order
    lower_bounds: tuple  # (name, k) meaning name > k; every parameter is also >= 1
    crown_class: str
    target: str | None = None
    marker: bool = False

    def accepts(self, values: dict) -> bool:
        if set(values) != set(self.params):
            return False
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in values.values()):
            return False
        return all(values[name] > k for name, k in self.lower_bounds)

    def constraint_text(self) -> str:
        strict = dict(self.lower_bounds)
        return ", ".join(f"{p}>{strict[p]}" if p in strict else f"{p}>=1" for p in self.params) or "-"

    def instantiate(self, values: dict) -> str:
        return _render(self.family, values)

    def target_name(self, values: dict) -> str | None:
        return None if self.target is None else _render(self.target, values)

    def line(self) -> str:
        return " | ".join(
            [f"table{self.table}", self.crown_class, self.family, self.constraint_text(), self.target or "-"]
        )


def _row(table, family, params, crown_class, bounds=(), target=None, marker=False):
    return AtlasEntry(table, family, tuple(params), tuple(bounds), crown_class, target, marker)


_ENTRIES = (
    _row(1, "SU(p,q)/S(U_p x U_q)", "pq", HERMITIAN_SELF),
    _row(1, "SO_o(p,2)/(SO(p) x SO(2))", "p", HERMITIAN_SELF),
    _row(1, "SO*(2n)/U(n)", "n", HERMITIAN_SELF),
    _row(1, "Sp(n,R)/U(n)", "n", HERMITIAN_SELF),
    _row(1, "(e6(-14), so(10)+R)", "", HERMITIAN_SELF),
    _row(1, "(e7(-25), e6+R)", "", HERMITIAN_SELF),
    _row(1, "SO_o(p,1)/SO(p)", "p", HERMITIAN_TARGET, [("p", 2)], "SO_o(p,2)/(SO(p) x SO(2))"),
    _row(1, "Sp(p,q)/(Sp(p) x Sp(q))", "pq", HERMITIAN_TARGET, (), "SU(2p,2q)/S(U_2p x U_2q)"),
    _row(1, "(f4(-20), so(9))", "", HERMITIAN_TARGET, (), "(e6(-14), so(10)+R)"),
    _row(2, "SL(n,R)/SO(n)", "n", RIGID, [("n", 2)]),
    _row(2, "SO_o(p,q)/(SO(p) x SO(q))", "pq", RIGID, [("p", 2), ("q", 2)]),
    _row(2, "SU*(2n)/Sp(n)", "n", RIGID),
    _row(2, "SL(n,C)/SU(n)", "n", RIGID, [("n", 2)]),
    _row(2, "SO(n,C)/SO(n)", "n", RIGID, [("n", 3)]),
    _row(2, "Sp(n,C)/Sp(n)", "n", RIGID, [("n", 1)]),
    _row(2, OTHER_EXCEPTIONAL, "", RIGID, marker=True),
)


def list_all() -> list[AtlasEntry]:
    """All rows in table order."""
    return list(_ENTRIES)


# --- names and templates ---------------------------------------------------------------

_SUBSTITUTIONS = [
    ("ℝ", "R"),
    ("ℂ", "C"),
    ("SO₀", "SO_o"),
    ("SO_0", "SO_o"),
    ("SO0", "SO_o"),
    ("^*", "*"),
    ("𝔢", "e"),
    ("𝔣", "f"),
    ("𝔰𝔬", "so"),
]
_SUBSCRIPT_DIGITS = str.maketrans("₀₁₂₃₄₅₆₇₈₉₋₍₎ₚₙ", "0123456789-()pn")
_SUBSCRIPT_RUN = re.compile("([A-Za-z]?)([₀-₉₋₍₎ₚₙ]+)")


def _subscripts(m):
    # U₂ₚ -> U_2p as in the templates; e₆ and e₆₍₋₁₄₎ stay e6, e6(-14)
    lead, run = m.group(1), m.group(2).translate(_SUBSCRIPT_DIGITS)
    sep = "_" if lead.isupper() and not run.startswith("(") else ""
    return lead + sep + run


def normalize_name(name: str) -> str:
    """Canonical spelling: ASCII names, products as "×", no whitespace."""
    s = name
    for old, new in _SUBSTITUTIONS:
        s = s.replace(old, new)
    s = _SUBSCRIPT_RUN.sub(_subscripts, s)
    s = re.sub(r"\s+x\s+|(?<=\))x(?=[A-Z])", "×", s)
    return re.sub(r"\s+", "", s)


def _render(template: str, values: dict) -> str:
    """Substitute parameters; ``2p`` with p=3 becomes ``6``."""

    def sub(m):
        coeff, var = m.group(1), m.group(2)
        return str(int(coeff or 1) * values[var])

    names = "".join(values)
    if not names:
        return template
    return re.sub(rf"(?<![A-Za-z\d])(\d*)([{names}])(?![A-Za-z])", sub, template)


_PARAM_TOKEN = re.compile(r"(?<![A-Za-z\d])(\d*)([pqn])(?![A-Za-z])")


def _template_regex(entry: AtlasEntry):
    """Regex over normalized names plus the (group, coefficient, parameter) list.

    Every parameter occurrence, e.g. ``2p``, captures one integer.
    """
    norm = normalize_name(entry.family)
    out, groups, pos = [], [], 0
    for m in _PARAM_TOKEN.finditer(norm):
        if m.group(2) not in entry.params:
            continue
        out.append(re.escape(norm[pos : m.start()]))
        gname = f"g{len(groups)}"
        out.append(f"(?P<{gname}>\\d+)")
        groups.append((gname, int(m.group(1) or 1), m.group(2)))
        pos = m.end()
    out.append(re.escape(norm[pos:]))
    return re.compile("".join(out) + r"\Z"), tuple(groups)


def _parse(entry: AtlasEntry, key: str) -> dict | None:
    regex, groups = _REGEXES[entry.family]
    m = regex.match(key)
    if not m:
        return None
    values: dict = {}
    for gname, coeff, var in groups:
        num = int(m.group(gname))
        if num % coeff:
            return None
        if values.setdefault(var, num // coeff) != num // coeff:
            return None
    return values


_REGEXES = {e.family: _template_regex(e) for e in _ENTRIES if not e.marker}
_EXCEPTIONAL_PAIR = re.compile(r"\((e6|e7|e8|f4|g2)\(-?\d+\),.+\)\Z")


def _entry_for_family(family: str) -> AtlasEntry:
    key = normalize_name(family)
    for e in _ENTRIES:
        if normalize_name(e.family) == key:
            return e
    raise UnknownSpace(family)


def lookup(family: str, params=()) -> AtlasEntry:
    """Row for a family template and its parameter values.

    ``params`` is a dict or a sequence in template order.
    """
    entry = _entry_for_family(family)
    values = params if isinstance(params, dict) else dict(zip(entry.params, params))
    if not isinstance(params, dict) and len(tuple(params)) != len(entry.params):
        raise OutOfRange(f"{entry.family} takes {len(entry.params)} parameter(s), got {len(tuple(params))}")
    if not entry.accepts(values):
        raise OutOfRange(f"{entry.family} requires {entry.constraint_text()}, got {values}")
    return entry


def match_name(name: str) -> list[tuple[AtlasEntry, dict]]:
    """Every row whose template matches ``name`` with admissible parameters."""
    key = normalize_name(name)
    hits = []
    for e in _ENTRIES:
        if e.marker:
            continue
        values = _parse(e, key)
        if values is not None:
            if e.accepts(values):
                hits.append((e, values))
    return hits


def lookup_name(name: str) -> tuple[AtlasEntry, dict]:
    """Row and parameters for a concrete space such as ``SO_o(4,1)/SO(4)``.

    An exceptional Lie-algebra pair not named in any row falls to the
    catch-all rigid row.
    """
    hits = match_name(name)
    if len(hits) > 1:
        raise UnknownSpace(f"{name} matches several rows")
    if hits:
        return hits[0]
    key = normalize_name(name)
    if any(_parse(e, key) is not None for e in _ENTRIES if not e.marker):
        raise OutOfRange(f"{name} is outside the admissible parameter range")
    if _EXCEPTIONAL_PAIR.match(key):
        return _ENTRIES[-1], {}
    raise UnknownSpace(name)


def partition_violations(max_param: int = 8) -> list[str]:
    """Concrete names (all admissible rows, parameters up to ``max_param``)
    matching more than one row.  Empty when the tables are a partition."""
    from itertools import product

    bad = []
    for e in _ENTRIES:
        if e.marker:
            continue
        for combo in product(range(1, max_param + 1), repeat=len(e.params)):
            values = dict(zip(e.params, combo))
            if not e.accepts(values):
                continue
            name = e.instantiate(values)
            if len(match_name(name)) != 1:
                bad.append(name)
    return bad

"""Reading and writing LPs in MPS format (free and fixed layout)."""

from __future__ import annotations

import gzip
import io
import math
from pathlib import Path

import numpy as np

from .model import LpProblem
from .sparse import SparseMatrix

__all__ = ["MpsError", "parse_mps", "read_mps", "write_mps", "save_mps"]

_SECTION_ORDER = ["NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"]
# fixed-format field columns (0-based, end exclusive)
_FIXED_FIELDS = [(1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61)]


class MpsError(ValueError):
    """Malformed MPS input; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def _split_fixed(line: str) -> list[str]:
    # blank fields (unused type column, omitted set names) are dropped
    fields = [line[start:stop].strip() for start, stop in _FIXED_FIELDS if start < len(line)]
    return [f for f in fields if f]


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MpsError(f"expected a number, got {token!r}", lineno) from None
    if math.isnan(value):
        raise MpsError("NaN is not a valid coefficient", lineno)
    return value


def parse_mps(text: str | bytes, *, strict: bool = False) -> LpProblem:
    """Parse an MPS model into an :class:`LpProblem`.

    Equality rows become ``A x = b``. ``G`` rows are kept, ``L`` rows are
    negated, and ranged rows are split into two ``>=`` rows. Integrality
    markers are ignored, so the result is the LP relaxation.

    Args:
        text: File contents, ``str`` or ``bytes``.
        strict: Read data lines by fixed-format column positions instead of
            splitting on whitespace.

    Raises:
        MpsError: on malformed input, with the offending line number.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")

    name = "lp"
    maximize = False
    section: str | None = None
    section_rank = -1
    seen_sections: set[str] = set()

    obj_row: str | None = None
    row_type: dict[str, str] = {}
    row_order: list[str] = []
    col_index: dict[str, int] = {}
    entries: list[tuple[str, int, float, int]] = []
    obj_coef: dict[int, float] = {}
    rhs: dict[str, float] = {}
    obj_rhs = 0.0
    ranges: dict[str, float] = {}
    lower: dict[int, float] = {}
    upper: dict[int, float] = {}
    lower_set: dict[int, tuple[float, int]] = {}
    upper_set: dict[int, tuple[float, int]] = {}
    cols_by_index: list[str] = []
    last_col: str | None = None

    def set_bound(store, setmap, j, value, kind, ln):
        prev = setmap.get(j)
        if prev is not None and prev[0] != value:
            raise MpsError(
                f"conflicting {kind} bound for column {cols_by_index[j]!r} "
                f"(already {prev[0]} from line {prev[1]})",
                ln,
            )
        setmap[j] = (value, ln)
        store[j] = value

    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        if not line[0].isspace():
            # section header
            tokens = line.split()
            head = tokens[0].upper()
            if head not in _SECTION_ORDER:
                raise MpsError(f"unknown section {tokens[0]!r}", lineno)
            rank = _SECTION_ORDER.index(head)
            if head in seen_sections:
                raise MpsError(f"duplicate section {head}", lineno)
            if rank < section_rank:
                raise MpsError(f"section {head} out of order", lineno)
            if head in ("COLUMNS", "RHS", "RANGES", "BOUNDS") and "ROWS" not in seen_sections:
                raise MpsError(f"section {head} before ROWS", lineno)
            if head in ("RHS", "RANGES", "BOUNDS", "ENDATA") and "ROWS" in seen_sections and "COLUMNS" not in seen_sections:
                raise MpsError(f"section {head} before COLUMNS", lineno)
            seen_sections.add(head)
            section_rank = rank
            section = head
            if head == "NAME":
                name = " ".join(tokens[1:]) or name
            elif head == "OBJSENSE" and len(tokens) > 1:
                maximize = _parse_sense(tokens[1], lineno)
            elif head == "ENDATA":
                break
            continue

        fields = _split_fixed(line) if strict else line.split()
        if section is None or section == "NAME":
            raise MpsError("data line outside of a section", lineno)

        if section == "OBJSENSE":
            maximize = _parse_sense(fields[0], lineno)

        elif section == "ROWS":
            if len(fields) != 2:
                raise MpsError("ROWS entries need a type and a name", lineno)
            kind, rname = fields[0].upper(), fields[1]
            if kind not in ("N", "E", "L", "G"):
                raise MpsError(f"unknown row type {fields[0]!r}", lineno)
            if rname in row_type or rname == obj_row:
                raise MpsError(f"duplicate row {rname!r}", lineno)
            if kind == "N":
                if obj_row is None:
                    obj_row = rname
                else:
                    # extra free rows carry no constraint
                    row_type[rname] = "N"
                continue
            row_type[rname] = kind
            row_order.append(rname)

        elif section == "COLUMNS":
            if len(fields) >= 2 and fields[1].strip("'").upper() == "MARKER":
                continue
            if len(fields) not in (3, 5):
                raise MpsError("COLUMNS entries need a column and 1 or 2 (row, value) pairs", lineno)
            cname = fields[0]
            if cname not in col_index:
                col_index[cname] = len(cols_by_index)
                cols_by_index.append(cname)
            elif cname != last_col:
                raise MpsError(f"column {cname!r} is not contiguous", lineno)
            last_col = cname
            j = col_index[cname]
            for rname, tok in zip(fields[1::2], fields[2::2]):
                value = _number(tok, lineno)
                if rname == obj_row:
                    obj_coef[j] = obj_coef.get(j, 0.0) + value
                elif rname in row_type:
                    if row_type[rname] != "N":
                        entries.append((rname, j, value, lineno))
                else:
                    raise MpsError(f"unknown row {rname!r}", lineno)

        elif section in ("RHS", "RANGES"):
            pairs = fields[1:] if len(fields) % 2 == 1 else fields
            if len(pairs) not in (2, 4):
                raise MpsError(f"{section} entries need 1 or 2 (row, value) pairs", lineno)
            for rname, tok in zip(pairs[0::2], pairs[1::2]):
                value = _number(tok, lineno)
                if section == "RHS":
                    if rname == obj_row:
                        obj_rhs = value
                    elif rname in row_type:
                        rhs[rname] = value
                    else:
                        raise MpsError(f"unknown row {rname!r}", lineno)
                else:
                    if rname not in row_type or row_type[rname] == "N":
                        raise MpsError(f"unknown or objective row {rname!r} in RANGES", lineno)
                    ranges[rname] = value

        elif section == "BOUNDS":
            _parse_bound_line(fields, lineno, col_index, lower, upper, lower_set, upper_set, set_bound)

    n = len(cols_by_index)
    if n == 0:
        raise MpsError("no variables")

    # row blocks
    b_vals: list[float] = []
    h_vals: list[float] = []
    ge_names: list[str] = []
    eq_names: list[str] = []
    row_slot: dict[str, list[tuple[str, int, float]]] = {}
    for rname in row_order:
        kind = row_type[rname]
        r = rhs.get(rname, 0.0)
        if rname in ranges:
            rng = ranges[rname]
            if kind == "G":
                lo, hi = r, r + abs(rng)
            elif kind == "L":
                lo, hi = r - abs(rng), r
            elif rng >= 0:
                lo, hi = r, r + abs(rng)
            else:
                lo, hi = r - abs(rng), r
            row_slot[rname] = [("G", len(h_vals), 1.0), ("G", len(h_vals) + 1, -1.0)]
            h_vals += [lo, -hi]
            ge_names += [rname + "_lo", rname + "_hi"]
        elif kind == "E":
            row_slot[rname] = [("E", len(b_vals), 1.0)]
            b_vals.append(r)
            eq_names.append(rname)
        elif kind == "G":
            row_slot[rname] = [("G", len(h_vals), 1.0)]
            h_vals.append(r)
            ge_names.append(rname)
        else:
            row_slot[rname] = [("G", len(h_vals), -1.0)]
            h_vals.append(-r)
            ge_names.append(rname)

    a_trip: tuple[list, list, list] = ([], [], [])
    g_trip: tuple[list, list, list] = ([], [], [])
    for rname, j, value, _ in entries:
        for block, i, sign in row_slot[rname]:
            trip = a_trip if block == "E" else g_trip
            trip[0].append(i)
            trip[1].append(j)
            trip[2].append(sign * value)

    c = np.zeros(n)
    for j, v in obj_coef.items():
        c[j] = v
    l = np.zeros(n)
    u = np.full(n, np.inf)
    for j, v in lower.items():
        l[j] = v
    for j, v in upper.items():
        u[j] = v
    bad = np.flatnonzero(l > u)
    if bad.size:
        j = int(bad[0])
        ln = (upper_set.get(j) or lower_set.get(j) or (None, None))[1]
        raise MpsError(f"column {cols_by_index[j]!r} has lower bound above upper bound", ln)

    # objective constant is the negated RHS of the objective row
    offset = -obj_rhs if obj_rhs != 0.0 else 0.0
    if maximize:
        c = -c
        offset = -offset
    c[c == 0.0] = 0.0  # normalize -0.0

    return LpProblem(
        a=SparseMatrix.from_triplets(*a_trip, shape=(len(b_vals), n)),
        g=SparseMatrix.from_triplets(*g_trip, shape=(len(h_vals), n)),
        c=c,
        b=np.array(b_vals, dtype=np.float64),
        h=np.array(h_vals, dtype=np.float64),
        l=l,
        u=u,
        objective_offset=offset + 0.0,
        maximize=maximize,
        name=name,
        row_names=tuple(eq_names + ge_names),
        col_names=tuple(cols_by_index),
    )


def _parse_sense(token: str, lineno: int) -> bool:
    t = token.upper()
    if t in ("MAX", "MAXIMIZE"):
        return True
    if t in ("MIN", "MINIMIZE"):
        return False
    raise MpsError(f"unknown objective sense {token!r}", lineno)


_VALUE_BOUNDS = {"LO", "UP", "FX", "LI", "UI", "SC"}
_FLAG_BOUNDS = {"FR", "MI", "PL", "BV"}


def _parse_bound_line(fields, lineno, col_index, lower, upper, lower_set, upper_set, set_bound):
    kind = fields[0].upper()
    if kind in _VALUE_BOUNDS:
        if len(fields) == 4:
            cname, tok = fields[2], fields[3]
        elif len(fields) == 3:
            cname, tok = fields[1], fields[2]
        else:
            raise MpsError(f"{kind} bound needs a column and a value", lineno)
        value = _number(tok, lineno)
    elif kind in _FLAG_BOUNDS:
        if len(fields) == 3:
            cname = fields[2]
        elif len(fields) == 2:
            cname = fields[1]
        else:
            raise MpsError(f"{kind} bound needs a column", lineno)
        value = None
    else:
        raise MpsError(f"unknown bound type {fields[0]!r}", lineno)
    if cname not in col_index:
        raise MpsError(f"unknown column {cname!r}", lineno)
    j = col_index[cname]

    if kind in ("LO", "LI"):
        set_bound(lower, lower_set, j, value, "lower", lineno)
    elif kind in ("UP", "UI", "SC"):
        set_bound(upper, upper_set, j, value, "upper", lineno)
        if value < 0 and j not in lower_set:
            # legacy convention: a negative upper bound with default lower means l = -inf
            lower[j] = -np.inf
    elif kind == "FX":
        set_bound(lower, lower_set, j, value, "lower", lineno)
        set_bound(upper, upper_set, j, value, "upper", lineno)
    elif kind == "FR":
        set_bound(lower, lower_set, j, -np.inf, "lower", lineno)
        set_bound(upper, upper_set, j, np.inf, "upper", lineno)
    elif kind == "MI":
        set_bound(lower, lower_set, j, -np.inf, "lower", lineno)
    elif kind == "PL":
        set_bound(upper, upper_set, j, np.inf, "upper", lineno)
    elif kind == "BV":
        set_bound(lower, lower_set, j, 0.0, "lower", lineno)
        set_bound(upper, upper_set, j, 1.0, "upper", lineno)


def read_mps(path: str | Path, *, strict: bool = False) -> LpProblem:
    """Read an ``.mps`` or gzip-compressed ``.mps.gz`` file."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        data = fh.read()
    problem = parse_mps(data, strict=strict)
    if problem.name == "lp":
        stem = path.name
        for suffix in (".gz", ".mps"):
            stem = stem.removesuffix(suffix)
        problem = problem.replace(name=stem)
    return problem


def write_mps(problem: LpProblem) -> str:
    """Serialize ``problem`` as free-format MPS.

    Every ``G`` row is written as a ``>=`` row and every ``A`` row as an
    equality, so ``parse_mps(write_mps(p))`` reproduces ``p`` exactly.
    """
    n = problem.n
    cols = [f"x{j}" for j in range(n)]
    eq = [f"e{i}" for i in range(problem.m1)]
    ge = [f"g{i}" for i in range(problem.m2)]
    out = [f"NAME {problem.name}"]
    sign = 1.0
    if problem.maximize:
        out += ["OBJSENSE", "    MAX"]
        sign = -1.0
    out.append("ROWS")
    out.append(" N  obj")
    out += [f" E  {r}" for r in eq]
    out += [f" G  {r}" for r in ge]
    out.append("COLUMNS")
    a_csc, g_csc = problem.a.csc, problem.g.csc
    for j in range(n):
        if problem.c[j] != 0.0:
            out.append(f"    {cols[j]}  obj  {_fmt(sign * problem.c[j])}")
        for block, names in ((a_csc, eq), (g_csc, ge)):
            lo, hi = block.indptr[j], block.indptr[j + 1]
            for i, v in zip(block.indices[lo:hi], block.data[lo:hi]):
                out.append(f"    {cols[j]}  {names[i]}  {_fmt(v)}")
        if problem.c[j] == 0.0 and a_csc.indptr[j] == a_csc.indptr[j + 1] and g_csc.indptr[j] == g_csc.indptr[j + 1]:
            # keep empty columns visible to the reader
            out.append(f"    {cols[j]}  obj  0")
    out.append("RHS")
    if problem.objective_offset != 0.0:
        out.append(f"    rhs  obj  {_fmt(-sign * problem.objective_offset)}")
    for names, vals in ((eq, problem.b), (ge, problem.h)):
        for r, v in zip(names, vals):
            if v != 0.0:
                out.append(f"    rhs  {r}  {_fmt(v)}")
    out.append("BOUNDS")
    for j in range(n):
        lo, up = problem.l[j], problem.u[j]
        if lo == up:
            out.append(f" FX bnd  {cols[j]}  {_fmt(lo)}")
            continue
        if lo == -np.inf and up == np.inf:
            out.append(f" FR bnd  {cols[j]}")
            continue
        if lo == -np.inf:
            out.append(f" MI bnd  {cols[j]}")
        elif lo != 0.0:
            out.append(f" LO bnd  {cols[j]}  {_fmt(lo)}")
        if up != np.inf:
            out.append(f" UP bnd  {cols[j]}  {_fmt(up)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def save_mps(problem: LpProblem, path: str | Path) -> None:
    """Write ``problem`` to ``path``; a ``.gz`` suffix selects gzip compression."""
    path = Path(path)
    data = write_mps(problem).encode("ascii")
    if path.suffix == ".gz":
        with gzip.open(path, "wb") as fh:
            fh.write(data)
    else:
        path.write_bytes(data)


def _fmt(v: float) -> str:
    # repr round-trips float64 exactly
    return repr(float(v))

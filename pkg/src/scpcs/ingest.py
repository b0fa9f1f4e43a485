"""Instance I/O: the Beasley set-covering text format and our canonical format.

The classic OR-Library ``scp*`` files are whitespace-separated integers,
row-major: a header ``m n``, then ``n`` column costs, then for each of the
``m`` rows a coverer count followed by that many 1-based column ids.  Line
breaks carry no meaning.

The canonical format archives instances together with their generated
conflicts so they can be diffed and replayed::

    scpcs 1
    name <string-no-spaces>        ("-" stands for an empty name)
    elements <m>
    subsets <n>
    set <j> <cost> <t> <e_1> ... <e_t>     n lines, 1-based element ids
    conflicts <|D|>
    conflict <i> <j> <d_ij>                |D| lines, i < j, 1-based
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Instance, ScpError

CANONICAL_MAGIC = "scpcs"
CANONICAL_VERSION = 1


class FormatError(ScpError):
    """Malformed instance text (either format)."""


@dataclass(eq=True)
class RawScpInstance:
    """A parsed OR-Library file, still 1-based and conflict-free."""

    num_rows: int
    num_cols: int
    col_cost: list[int]
    row_cover_lists: list[list[int]]


class _Tokens:
    """Integer token stream with positions for parse diagnostics."""

    def __init__(self, text: str):
        self.tokens = text.split()
        self.pos = 0

    def next_int(self, what: str) -> int:
        if self.pos >= len(self.tokens):
            raise FormatError(f"truncated stream: expected {what} at token {self.pos}")
        tok = self.tokens[self.pos]
        self.pos += 1
        try:
            return int(tok)
        except ValueError:
            raise FormatError(
                f"non-integer token {tok!r} at position {self.pos - 1} (expected {what})"
            ) from None

    def exhausted(self) -> bool:
        return self.pos >= len(self.tokens)


def parse_orlib(text: str | bytes) -> RawScpInstance:
    """Parse an OR-Library set-covering file into a :class:`RawScpInstance`.

    Raises :class:`FormatError` on truncation, non-integer tokens, column
    ids out of range, or trailing tokens.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    toks = _Tokens(text)
    num_rows = toks.next_int("row count")
    num_cols = toks.next_int("column count")
    if num_rows < 0 or num_cols < 0:
        raise FormatError(f"negative counts in header: {num_rows} {num_cols}")
    col_cost = [toks.next_int(f"cost of column {j + 1}") for j in range(num_cols)]
    rows: list[list[int]] = []
    for r in range(num_rows):
        t = toks.next_int(f"coverer count of row {r + 1}")
        if t < 0:
            raise FormatError(f"negative coverer count {t} for row {r + 1}")
        if t > num_cols:
            raise FormatError(
                f"token surplus or bad row count: row {r + 1} declares {t} "
                f"coverers with only {num_cols} columns"
            )
        cover = []
        for _ in range(t):
            j = toks.next_int(f"coverer of row {r + 1}")
            if not 1 <= j <= num_cols:
                raise FormatError(
                    f"row {r + 1} lists column {j} out of range 1..{num_cols} "
                    f"at token {toks.pos - 1}"
                )
            cover.append(j)
        if len(set(cover)) != len(cover):
            raise FormatError(f"row {r + 1} repeats a column id")
        rows.append(cover)
    if not toks.exhausted():
        raise FormatError(
            f"token surplus or bad row count: {len(toks.tokens) - toks.pos} "
            f"tokens left at position {toks.pos}"
        )
    return RawScpInstance(num_rows, num_cols, col_cost, rows)


def write_orlib(raw: RawScpInstance) -> str:
    """Serialize back to the OR-Library layout (inverse of :func:`parse_orlib`)."""
    lines = [f"{raw.num_rows} {raw.num_cols}", " ".join(map(str, raw.col_cost))]
    for cover in raw.row_cover_lists:
        lines.append(" ".join(map(str, [len(cover), *cover])))
    return "\n".join(lines) + "\n"


def to_instance(raw: RawScpInstance, name: str = "") -> Instance:
    """Transpose row cover lists into subset members; shift ids to 0-based."""
    members: list[list[int]] = [[] for _ in range(raw.num_cols)]
    for r, cover in enumerate(raw.row_cover_lists):
        for j in cover:
            members[j - 1].append(r)
    return Instance.build(
        num_elements=raw.num_rows,
        cost=list(raw.col_cost),
        members=members,
        conflicts=(),
        name=name,
    )


def write_canonical(inst: Instance) -> str:
    """Render an instance in the canonical text format."""
    if any(ch.isspace() for ch in inst.name):
        raise ValueError(f"instance name {inst.name!r} contains whitespace")
    lines = [
        f"{CANONICAL_MAGIC} {CANONICAL_VERSION}",
        f"name {inst.name or '-'}",
        f"elements {inst.num_elements}",
        f"subsets {inst.num_subsets}",
    ]
    for j in range(inst.num_subsets):
        subset = inst.members[j]
        ids = " ".join(str(k + 1) for k in subset)
        lines.append(f"set {j + 1} {inst.cost[j]} {len(subset)}" + (f" {ids}" if ids else ""))
    lines.append(f"conflicts {len(inst.conflicts)}")
    for i, j, d in inst.conflicts:
        lines.append(f"conflict {i + 1} {j + 1} {d}")
    return "\n".join(lines) + "\n"


def _fields(line: str, lineno: int, keyword: str, count: int | None = None) -> list[str]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise FormatError(f"line {lineno}: expected {keyword!r}, got {line!r}")
    if count is not None and len(parts) != count + 1:
        raise FormatError(
            f"line {lineno}: {keyword!r} takes {count} fields, got {len(parts) - 1}"
        )
    return parts[1:]


def read_canonical(text: str | bytes) -> Instance:
    """Parse the canonical format; rejects unknown magic/version and count mismatches."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty input")
    header = lines[0].split()
    if len(header) != 2 or header[0] != CANONICAL_MAGIC:
        raise FormatError(f"unknown magic: {lines[0]!r}")
    if header[1] != str(CANONICAL_VERSION):
        raise FormatError(f"unsupported version {header[1]!r}")
    if len(lines) < 4:
        raise FormatError("truncated header")

    (name,) = _fields(lines[1], 2, "name", 1)
    if name == "-":
        name = ""
    (m_str,) = _fields(lines[2], 3, "elements", 1)
    (n_str,) = _fields(lines[3], 4, "subsets", 1)
    try:
        m, n = int(m_str), int(n_str)
    except ValueError:
        raise FormatError("non-integer element/subset counts") from None
    if m < 0 or n < 0:
        raise FormatError("negative element/subset counts")

    cost: list[int] = []
    members: list[list[int]] = []
    lineno = 4
    for j in range(n):
        if lineno >= len(lines):
            raise FormatError(f"count mismatch: header declares {n} subsets, file has {j}")
        parts = _fields(lines[lineno], lineno + 1, "set")
        if len(parts) < 3:
            raise FormatError(f"line {lineno + 1}: incomplete set line")
        try:
            idx, c, t = int(parts[0]), int(parts[1]), int(parts[2])
            elems = [int(p) for p in parts[3:]]
        except ValueError:
            raise FormatError(f"line {lineno + 1}: non-integer field") from None
        if idx != j + 1:
            raise FormatError(f"line {lineno + 1}: expected set {j + 1}, got {idx}")
        if len(elems) != t:
            raise FormatError(
                f"line {lineno + 1}: set {idx} declares {t} elements, lists {len(elems)}"
            )
        for k in elems:
            if not 1 <= k <= m:
                raise FormatError(f"line {lineno + 1}: element {k} out of range 1..{m}")
        cost.append(c)
        members.append([k - 1 for k in elems])
        lineno += 1

    if lineno >= len(lines):
        raise FormatError("missing conflicts section")
    (d_str,) = _fields(lines[lineno], lineno + 1, "conflicts", 1)
    try:
        num_conf = int(d_str)
    except ValueError:
        raise FormatError(f"line {lineno + 1}: non-integer conflict count") from None
    lineno += 1

    conflicts: list[tuple[int, int, int]] = []
    for _ in range(num_conf):
        if lineno >= len(lines):
            raise FormatError(
                f"count mismatch: {num_conf} conflicts declared, file has {len(conflicts)}"
            )
        parts = _fields(lines[lineno], lineno + 1, "conflict", 3)
        try:
            i, j, d = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"line {lineno + 1}: non-integer conflict field") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"line {lineno + 1}: conflict ids out of range 1..{n}")
        if i >= j:
            raise FormatError(f"line {lineno + 1}: conflict pair not ordered i<j")
        if d <= 0:
            raise FormatError(f"line {lineno + 1}: conflict penalty must be positive")
        conflicts.append((i - 1, j - 1, d))
        lineno += 1

    for extra in lines[lineno:]:
        if extra.strip():
            raise FormatError(f"trailing content after conflicts: {extra!r}")

    return Instance.build(
        num_elements=m, cost=cost, members=members, conflicts=conflicts, name=name
    )

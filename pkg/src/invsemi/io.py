"""Text formats for Cayley tables (``.sgp``) and semilattices (``.slt``).

``.sgp``: first line ``n``, then ``n`` rows of ``n`` indices (row ``i``
holds the products ``i*j``), then optionally ``inv:`` followed by ``n``
indices.  ``.slt``: first line ``n``, then ``meet:`` and ``n`` rows, or
``hasse:`` and lines ``i < j``; an optional ``labels:`` line names the
elements.  ``#`` starts a comment in both.
"""

from __future__ import annotations

import hashlib
import sys
from importlib import resources
from pathlib import Path

from .errors import InputError
from .munn import Semilattice, from_hasse
from .semigroup import Semigroup, load_semigroup

SGP = "sgp"
SLT = "slt"


def _lines(text):
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _ints(no, line):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise InputError(f"line {no}: expected integers, got {line!r}") from None


def _header(lines):
    if not lines:
        raise InputError("empty input")
    no, line = lines[0]
    vals = _ints(no, line)
    if len(vals) != 1 or vals[0] < 0:
        raise InputError(f"line {no}: first line must be the order n >= 0")
    return vals[0]


def _labels_after(lines, k):
    """Labels from a trailing ``labels:`` line, or ``None``."""
    if k < len(lines) and lines[k][1].startswith("labels:"):
        return lines[k][1][len("labels:"):].split(), k + 1
    return None, k


def parse_sgp(text):
    """``(n, table, inv, labels)`` from ``.sgp`` text, without semantic checks."""
    lines = _lines(text)
    n = _header(lines)
    if len(lines) < n + 1:
        raise InputError(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for no, line in lines[1:n + 1]:
        row = _ints(no, line)
        if len(row) != n:
            raise InputError(f"line {no}: row has {len(row)} entries, expected {n}")
        table.append(row)
    k = n + 1
    inv = None
    if k < len(lines) and lines[k][1].startswith("inv:"):
        no, line = lines[k]
        inv = _ints(no, line[len("inv:"):])
        if len(inv) != n:
            raise InputError(f"line {no}: inv has {len(inv)} entries, expected {n}")
        k += 1
    labels, k = _labels_after(lines, k)
    if k != len(lines):
        raise InputError(f"line {lines[k][0]}: unexpected content {lines[k][1]!r}")
    return n, table, inv, labels


def load_sgp(text, inverse=True):
    """Validated semigroup from ``.sgp`` text.

    With ``inverse=False`` a non-inverse table is returned as a plain
    :class:`Semigroup`; inverse tables still load as inverse semigroups.
    """
    n, table, inv, labels = parse_sgp(text)
    if inverse or n == 0:
        return load_semigroup(n, table, inv=inv, labels=labels)
    try:
        return load_semigroup(n, table, inv=inv, labels=labels)
    except InputError:
        return Semigroup(table, labels=labels)


def format_sgp(S, labels=True):
    n = S.order
    out = [str(n)]
    out.extend(" ".join(str(int(v)) for v in row) for row in S.table)
    inv = getattr(S, "inv", None)
    if inv is not None and n:
        out.append("inv: " + " ".join(str(int(v)) for v in inv))
    if labels and S.labels and S.labels != [str(i) for i in range(n)]:
        out.append("labels: " + " ".join(S.labels))
    return "\n".join(out) + "\n"


def parse_slt(text):
    lines = _lines(text)
    n = _header(lines)
    if len(lines) < 2:
        if n == 0:
            return Semilattice([])
        raise InputError("expected 'meet:' or 'hasse:' section")
    no, tag = lines[1]
    k = 2
    if tag == "meet:":
        meet = []
        for no, line in lines[k:k + n]:
            row = _ints(no, line)
            if len(row) != n:
                raise InputError(f"line {no}: row has {len(row)} entries, expected {n}")
            meet.append(row)
        if len(meet) != n:
            raise InputError(f"expected {n} meet rows, found {len(meet)}")
        k += n
        labels, k = _labels_after(lines, k)
        result = ("meet", meet)
    elif tag == "hasse:":
        covers = []
        while k < len(lines) and "<" in lines[k][1]:
            no, line = lines[k]
            left, right = line.split("<", 1)
            a, b = _ints(no, left), _ints(no, right)
            if len(a) != 1 or len(b) != 1:
                raise InputError(f"line {no}: expected 'i < j'")
            covers.append((a[0], b[0]))
            k += 1
        labels, k = _labels_after(lines, k)
        result = ("hasse", covers)
    else:
        raise InputError(f"line {no}: expected 'meet:' or 'hasse:', got {tag!r}")
    if k != len(lines):
        raise InputError(f"line {lines[k][0]}: unexpected content {lines[k][1]!r}")
    if labels is not None and len(labels) != n:
        raise InputError(f"{len(labels)} labels for {n} elements")
    if result[0] == "meet":
        return Semilattice(result[1], labels)
    return from_hasse(n, result[1], labels)


def format_slt(E):
    out = [str(E.order), "hasse:"]
    out.extend(f"{a} < {b}" for a, b in E.covers())
    if E.labels != [str(i) for i in range(E.order)]:
        out.append("labels: " + " ".join(E.labels))
    return "\n".join(out) + "\n"


def detect_format(text, path=None):
    """``"slt"`` or ``"sgp"``, from the file suffix or else the content."""
    if path is not None:
        suffix = Path(path).suffix.lower()
        if suffix == ".slt":
            return SLT
        if suffix == ".sgp":
            return SGP
    for _, line in _lines(text):
        if line in ("meet:", "hasse:"):
            return SLT
    return SGP


def read_text(path):
    """Contents of ``path`` (``-`` is stdin); missing files raise :class:`InputError`."""
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def read_input(path, inverse=True):
    """``(format, object, digest)`` where the object is a semigroup or semilattice."""
    text = read_text(path)
    fmt = detect_format(text, None if str(path) == "-" else path)
    obj = parse_slt(text) if fmt == SLT else load_sgp(text, inverse=inverse)
    return fmt, obj, hashlib.sha256(text.encode("utf-8")).hexdigest()


def bundled_path(name):
    """Path of a bundled example such as ``figure1.slt``."""
    return resources.files("invsemi.data").joinpath(name)


def bundled_text(name):
    return bundled_path(name).read_text(encoding="utf-8")

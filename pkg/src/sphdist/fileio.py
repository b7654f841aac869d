"""Points and relation-matrix text formats.

Points file::

    field Q            # or: field Q sqrt 5
    dim 3
    count 20
    kind coords        # or: gram
    <rows of scalars>

Relations file::

    classes 2
    count 10
    <n rows of n integers>

``#`` starts a comment anywhere on a line.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, TextIO, Tuple, Union

import numpy as np

from .errors import InputError, ParseError
from .exactnum import RATIONAL, FieldTag, format_scalar, parse_scalar
from .matrix import ExactMatrix
from .pointset import SphericalConfig, config_from_matrix
from .schemes import AssociationScheme, verify_scheme

PathOrText = Union[str, TextIO]

# glue "a + b*sqrt(d)" back into one token before splitting on whitespace
_GLUE_SIGN = re.compile(r"(?<=[\d)])\s*([+-])\s*(?=[+-]?\s*\d+(?:\s*/\s*\d+)?\s*\*\s*sqrt)")
_GLUE_OPS = re.compile(r"\s*([*/])\s*|(\()\s*|\s*(\))")
_GLUE_SQRT = re.compile(r"sqrt\s+\(")


def _lines(src: Iterable[str]):
    for raw in src:
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _tokens(line: str) -> List[str]:
    if "sqrt" in line or "/ " in line or " /" in line:
        line = _GLUE_OPS.sub(lambda mo: mo.group(mo.lastindex), line)
        line = _GLUE_SQRT.sub("sqrt(", line)
        line = _GLUE_SIGN.sub(r"\1", line)
    return line.split()


def _read_header(lines, keys) -> Tuple[Dict[str, str], List[str]]:
    header: Dict[str, str] = {}
    rest = []
    for line in lines:
        word = line.split(None, 1)
        if not rest and word[0] in keys:
            if word[0] in header:
                raise ParseError(f"duplicate header line {word[0]!r}")
            header[word[0]] = word[1].strip() if len(word) > 1 else ""
        else:
            rest.append(line)
    missing = [k for k in keys if k not in header]
    if missing:
        raise ParseError(f"missing header line(s): {', '.join(missing)}")
    return header, rest


def _int(header, key) -> int:
    try:
        v = int(header[key])
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {header[key]!r}") from None
    if v < 0:
        raise ParseError(f"{key} must be nonnegative")
    return v


def parse_field(text: str) -> FieldTag:
    parts = text.split()
    if parts == ["Q"]:
        return RATIONAL
    if len(parts) == 3 and parts[0] == "Q" and parts[1] == "sqrt":
        try:
            return FieldTag(int(parts[2]))
        except ValueError:
            pass
    raise ParseError(f"bad field header {text!r}; expected 'Q' or 'Q sqrt d'")


def _open_text(src: PathOrText) -> str:
    if hasattr(src, "read"):
        return src.read()
    with open(src, encoding="utf-8") as fh:
        return fh.read()


def read_points(src: PathOrText, name: str = "", check_psd: bool = True) -> SphericalConfig:
    text = _open_text(src)
    header, body = _read_header(_lines(text.splitlines()), ("field", "dim", "count", "kind"))
    field = parse_field(header["field"])
    m, n, kind = _int(header, "dim"), _int(header, "count"), header["kind"]
    if kind not in ("coords", "gram"):
        raise ParseError(f"kind must be coords or gram, got {kind!r}")
    width = m if kind == "coords" else n
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}")
    # distinct tokens are few in practice; parse each once
    table: Dict[str, int] = {}
    values = []
    index = np.empty((n, width), dtype=np.int64)
    for x, line in enumerate(body):
        toks = _tokens(line)
        if len(toks) != width:
            raise ParseError(f"row {x} has {len(toks)} entries, expected {width}")
        for y, tok in enumerate(toks):
            k = table.get(tok)
            if k is None:
                try:
                    values.append(parse_scalar(tok, field.d))
                except ParseError as exc:
                    raise ParseError(f"row {x}, entry {y}: {exc}") from None
                k = table[tok] = len(values) - 1
            index[x, y] = k
    mat = ExactMatrix.from_lookup(values, index, field)
    return config_from_matrix(mat, kind, m, field, name=name, check_psd=check_psd)


def _matrix_lines(mat: ExactMatrix):
    values, index = mat.classes()
    toks = np.array([format_scalar(v) for v in values], dtype=object)
    for row in index:
        yield " ".join(toks[row])


def dump_points(config: SphericalConfig) -> str:
    """Coordinates when they live in R^m, otherwise the Gram matrix."""
    use_coords = config.coords is not None and config.coords.shape[1] == config.m
    mat = config.coords if use_coords else config.gram
    out = [
        f"# {config.name}" if config.name else "# spherical configuration",
        f"field {config.field.header()}",
        f"dim {config.m}",
        f"count {config.n}",
        f"kind {'coords' if use_coords else 'gram'}",
    ]
    out.extend(_matrix_lines(mat))
    return "\n".join(out) + "\n"


def read_relations(src: PathOrText) -> AssociationScheme:
    text = _open_text(src)
    header, body = _read_header(_lines(text.splitlines()), ("classes", "count"))
    s, n = _int(header, "classes"), _int(header, "count")
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}")
    rows = [line.split() for line in body]
    for x, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {x} has {len(row)} entries, expected {n}")
    try:
        R = np.array([[int(tok) for tok in row] for row in rows], dtype=np.int64).reshape(n, n)
    except ValueError as exc:
        raise ParseError(f"relation entries must be integers: {exc}") from None
    if R.min(initial=0) < 0 or R.max(initial=0) > s:
        raise InputError(f"relation indices must lie in 0..{s}")
    scheme = verify_scheme(R)
    if scheme.s != s:
        raise InputError(f"header says {s} classes, matrix uses {scheme.s}")
    return scheme


def dump_relations(scheme: AssociationScheme, title: str = "") -> str:
    out = [f"# {title}" if title else "# association scheme", f"classes {scheme.s}", f"count {scheme.n}"]
    out.extend(" ".join(map(str, row)) for row in scheme.relation.tolist())
    return "\n".join(out) + "\n"

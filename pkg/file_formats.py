"""
Line-oriented text formats for algebras, arrows, complexes, chain maps and
dg algebras.

`#` starts a comment. A directive that carries a matrix is written
`<head> ; <rows> <cols> ; <row> ; <row> ...`. FIELD must be the first
directive of every file.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from algebras import (
    AnyAlgebra,
    AugmentedAlgebra,
    InvalidAlgebra,
    NonUnitalAlgebra,
    UnitalAlgebra,
)
from arrow_category import ArrowObject
from chain_complexes import ChainComplex, ChainComplexError, ChainMap, chain_map, tensor_complex, unit_complex
from dg_algebras import AugmentedDGAlgebra, DGAlgebraNU
from exact_linalg import Field, Matrix

log = logging.getLogger(__name__)

AnyDG = Union[DGAlgebraNU, AugmentedDGAlgebra]

MIN_DEGREE = -8
MAX_DEGREE = 8
MAX_DIM = 16


class ParseError(RuntimeError):
    """Raised for malformed input, with the 1-based line number."""

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Directive:
    line: int
    name: str
    args: tuple[str, ...]
    literal: Optional[str] = None


def _directives(text: str) -> Iterator[Directive]:
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        head, sep, literal = content.partition(";")
        tokens = head.split()
        if not tokens:
            raise ParseError(number, "missing directive before ';'")
        yield Directive(number, tokens[0].upper(), tuple(tokens[1:]), literal if sep else None)


def _int(d: Directive, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(d.line, f"expected an integer, got {token!r}") from None


def _scalar(field: Field, d: Directive, token: str):
    try:
        return field.parse_scalar(token)
    except Exception as exc:
        raise ParseError(d.line, str(exc)) from None


def _expect_args(d: Directive, count: int) -> None:
    if len(d.args) != count:
        raise ParseError(d.line, f"{d.name} takes {count} argument(s), got {len(d.args)}")


def _read_field(directives: list[Directive]) -> tuple[Field, list[Directive]]:
    if not directives or directives[0].name != "FIELD":
        raise ParseError(directives[0].line if directives else 1, "missing FIELD line")
    d = directives[0]
    if not d.args:
        raise ParseError(d.line, "FIELD needs Q or FP <p>")
    try:
        field = Field.from_label(" ".join(d.args))
    except ValueError as exc:
        raise ParseError(d.line, str(exc)) from None
    for later in directives[1:]:
        if later.name == "FIELD":
            raise ParseError(later.line, "FIELD given twice")
    return field, directives[1:]


def parse_matrix_literal(field: Field, text: str, line: int = 1) -> Matrix:
    """`r c ; row ; row ...` with r rows of c scalars."""
    parts = text.split(";")
    header = parts[0].split()
    if len(header) != 2:
        raise ParseError(line, "matrix literal starts with '<rows> <cols>'")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(line, f"bad matrix size {parts[0].strip()!r}") from None
    if rows < 0 or cols < 0:
        raise ParseError(line, "matrix size must be non-negative")
    body = parts[1:]
    if rows == 0:
        body = [p for p in body if p.strip()]
    if len(body) != rows:
        raise ParseError(line, f"matrix literal has {len(body)} row(s), expected {rows}")
    entries = []
    for i, segment in enumerate(body):
        tokens = segment.split()
        if len(tokens) != cols:
            raise ParseError(line, f"row {i} has {len(tokens)} entries, expected {cols}")
        for token in tokens:
            try:
                entries.append(field.parse_scalar(token))
            except Exception as exc:
                raise ParseError(line, str(exc)) from None
    return Matrix(field, rows, cols, tuple(entries))


def emit_matrix_literal(m: Matrix) -> str:
    out = f"{m.rows} {m.cols}"
    for row in m.to_rows():
        out += " ; " + " ".join(m.field.format_scalar(v) for v in row)
    return out.rstrip()


def _literal(field: Field, d: Directive) -> Matrix:
    if d.literal is None:
        raise ParseError(d.line, f"{d.name} needs '; <matrix literal>'")
    return parse_matrix_literal(field, d.literal, d.line)


def _emit_field(field: Field) -> str:
    return "FIELD Q" if field.is_rational else f"FIELD FP {field.characteristic}"


def sniff_kind(text: str) -> str:
    """One of algebra, arrows, complex, chain_map, dg."""
    names = {d.name for d in _directives(text)}
    log.debug("directives seen: %s", sorted(names))
    if "ARROW" in names:
        return "arrows"
    if "SOURCE" in names or "MAP" in names:
        return "chain_map"
    if "RANGE" in names:
        return "dg" if "MULT" in names else "complex"
    return "algebra"


# algebras


def parse_algebra(text: str) -> AnyAlgebra:
    field, rest = _read_field(list(_directives(text)))
    dim: Optional[int] = None
    entries: list[tuple[int, int, int, object]] = []
    seen: set[tuple[int, int, int]] = set()
    unit = aug = None
    aug_line = 0
    for d in rest:
        if d.name == "DIM":
            if dim is not None:
                raise ParseError(d.line, "DIM given twice")
            _expect_args(d, 1)
            dim = _int(d, d.args[0])
            if dim < 0:
                raise ParseError(d.line, "DIM must be non-negative")
            continue
        if dim is None:
            raise ParseError(d.line, f"{d.name} before DIM")
        if d.name == "MULT":
            _expect_args(d, 4)
            i, j, k = (_int(d, t) for t in d.args[:3])
            if not all(0 <= x < dim for x in (i, j, k)):
                raise ParseError(d.line, f"index outside 0..{dim - 1}")
            if (i, j, k) in seen:
                raise ParseError(d.line, f"duplicate MULT entry {i} {j} {k}")
            seen.add((i, j, k))
            entries.append((i, j, k, _scalar(field, d, d.args[3])))
        elif d.name in ("UNIT", "AUG"):
            if (unit if d.name == "UNIT" else aug) is not None:
                raise ParseError(d.line, f"{d.name} given twice")
            _expect_args(d, dim)
            vector = tuple(_scalar(field, d, t) for t in d.args)
            if d.name == "UNIT":
                unit = vector
            else:
                aug, aug_line = vector, d.line
        else:
            raise ParseError(d.line, f"unknown directive {d.name}")
    if dim is None:
        raise ParseError(rest[-1].line if rest else 1, "missing DIM")
    try:
        base = NonUnitalAlgebra.from_constants(field, dim, entries)
    except InvalidAlgebra as exc:
        raise ParseError(1, str(exc)) from None
    if aug is not None and unit is None:
        raise ParseError(aug_line, "AUG without UNIT")
    if unit is None:
        return base
    alg = UnitalAlgebra(base, unit)
    return AugmentedAlgebra(alg, aug) if aug is not None else alg


def emit_algebra(algebra: AnyAlgebra) -> str:
    base = algebra if isinstance(algebra, NonUnitalAlgebra) else algebra.base
    k = base.field
    lines = [_emit_field(k), f"DIM {base.dim}"]
    lines += [f"MULT {i} {j} {t} {k.format_scalar(c)}" for i, j, t, c in base.constants]
    if isinstance(algebra, (UnitalAlgebra, AugmentedAlgebra)):
        lines.append("UNIT " + " ".join(k.format_scalar(v) for v in algebra.unit))
    if isinstance(algebra, AugmentedAlgebra):
        lines.append("AUG " + " ".join(k.format_scalar(v) for v in algebra.eps))
    return "\n".join(lines) + "\n"


# arrows


def parse_arrows(text: str) -> list[ArrowObject]:
    field, rest = _read_field(list(_directives(text)))
    arrows = []
    for d in rest:
        if d.name != "ARROW":
            raise ParseError(d.line, f"unknown directive {d.name}")
        _expect_args(d, 0)
        arrows.append(ArrowObject(_literal(field, d)))
    return arrows


def emit_arrows(arrows: list[ArrowObject], field: Optional[Field] = None) -> str:
    k = field or (arrows[0].field if arrows else Field.rationals())
    lines = [_emit_field(k)] + [f"ARROW ; {emit_matrix_literal(a.f)}" for a in arrows]
    return "\n".join(lines) + "\n"


# complexes


class _ComplexBuilder:
    def __init__(self, field: Field) -> None:
        self.field = field
        self.lo: Optional[int] = None
        self.hi: Optional[int] = None
        self.dims: Optional[list[int]] = None
        self.diffs: dict[int, Matrix] = {}
        self.last_line = 1

    def accepts(self, name: str) -> bool:
        return name in ("RANGE", "DIMS", "D")

    def feed(self, d: Directive) -> None:
        self.last_line = d.line
        if d.name == "RANGE":
            if self.lo is not None:
                raise ParseError(d.line, "RANGE given twice")
            _expect_args(d, 2)
            self.lo, self.hi = _int(d, d.args[0]), _int(d, d.args[1])
            if self.hi < self.lo:
                raise ParseError(d.line, "RANGE needs lo <= hi")
            if self.lo < MIN_DEGREE or self.hi > MAX_DEGREE:
                raise ParseError(d.line, f"RANGE must lie within [{MIN_DEGREE}, {MAX_DEGREE}]")
        elif d.name == "DIMS":
            if self.lo is None or self.hi is None:
                raise ParseError(d.line, "DIMS before RANGE")
            if self.dims is not None:
                raise ParseError(d.line, "DIMS given twice")
            _expect_args(d, self.hi - self.lo + 1)
            self.dims = [_int(d, t) for t in d.args]
            if any(n < 0 for n in self.dims):
                raise ParseError(d.line, "dimensions must be non-negative")
            if any(n > MAX_DIM for n in self.dims):
                raise ParseError(d.line, f"dimensions above {MAX_DIM} are not supported")
        else:
            if self.dims is None or self.lo is None or self.hi is None:
                raise ParseError(d.line, "D before RANGE and DIMS")
            _expect_args(d, 1)
            n = _int(d, d.args[0])
            if not self.lo < n <= self.hi:
                raise ParseError(d.line, f"d_{n} outside the range ({self.lo}, {self.hi}]")
            if n in self.diffs:
                raise ParseError(d.line, f"d_{n} given twice")
            m = _literal(self.field, d)
            expected = (self.dims[n - 1 - self.lo], self.dims[n - self.lo])
            if m.shape != expected:
                raise ParseError(d.line, f"d_{n} has shape {m.shape}, expected {expected}")
            self.diffs[n] = m

    def build(self) -> ChainComplex:
        if self.dims is None or self.lo is None:
            raise ParseError(self.last_line, "complex needs RANGE and DIMS")
        return ChainComplex.build(self.field, self.lo, self.dims, self.diffs)


def _emit_complex_lines(c: ChainComplex) -> list[str]:
    lines = [f"RANGE {c.lo} {c.hi}", "DIMS " + " ".join(str(n) for n in c.dims)]
    for n in range(c.lo + 1, c.hi + 1):
        d = c.d(n)
        if not d.is_zero():
            lines.append(f"D {n} ; {emit_matrix_literal(d)}")
    return lines


def parse_complex(text: str) -> ChainComplex:
    """Shapes are checked; d∘d = 0 is left to the validator."""
    field, rest = _read_field(list(_directives(text)))
    builder = _ComplexBuilder(field)
    for d in rest:
        if not builder.accepts(d.name):
            raise ParseError(d.line, f"unknown directive {d.name}")
        builder.feed(d)
    return builder.build()


def emit_complex(c: ChainComplex) -> str:
    return "\n".join([_emit_field(c.field)] + _emit_complex_lines(c)) + "\n"


def _components(
    field: Field,
    directives: list[Directive],
    rows,
    cols,
    degrees: range,
) -> dict[int, Matrix]:
    comps: dict[int, Matrix] = {}
    for d in directives:
        _expect_args(d, 1)
        n = _int(d, d.args[0])
        if n not in degrees:
            raise ParseError(d.line, f"{d.name} {n} outside degrees [{degrees.start}, {degrees.stop - 1}]")
        if n in comps:
            raise ParseError(d.line, f"{d.name} {n} given twice")
        m = _literal(field, d)
        expected = (rows(n), cols(n))
        if m.shape != expected:
            raise ParseError(d.line, f"{d.name} {n} has shape {m.shape}, expected {expected}")
        comps[n] = m
    return comps


def parse_chain_map(text: str) -> ChainMap:
    field, rest = _read_field(list(_directives(text)))
    source = _ComplexBuilder(field)
    target = _ComplexBuilder(field)
    current: Optional[_ComplexBuilder] = None
    maps: list[Directive] = []
    for d in rest:
        if d.name == "SOURCE":
            current = source
        elif d.name == "TARGET":
            current = target
        elif d.name == "MAP":
            maps.append(d)
        elif current is not None and current.accepts(d.name):
            current.feed(d)
        else:
            raise ParseError(d.line, f"unexpected directive {d.name}")
    src, dst = source.build(), target.build()
    degrees = range(min(src.lo, dst.lo), max(src.hi, dst.hi) + 1)
    comps = _components(field, maps, dst.dim, src.dim, degrees)
    return chain_map(src, dst, comps)


def emit_chain_map(f: ChainMap) -> str:
    lines = [_emit_field(f.field), "SOURCE"] + _emit_complex_lines(f.src)
    lines += ["TARGET"] + _emit_complex_lines(f.dst)
    for n in f.degrees:
        m = f.component(n)
        if not m.is_zero():
            lines.append(f"MAP {n} ; {emit_matrix_literal(m)}")
    return "\n".join(lines) + "\n"


# dg algebras


def parse_dg(text: str) -> AnyDG:
    field, rest = _read_field(list(_directives(text)))
    builder = _ComplexBuilder(field)
    mults: list[Directive] = []
    unit_d = aug_d = None
    for d in rest:
        if builder.accepts(d.name):
            builder.feed(d)
        elif d.name == "MULT":
            mults.append(d)
        elif d.name in ("UNIT", "AUG"):
            if (unit_d if d.name == "UNIT" else aug_d) is not None:
                raise ParseError(d.line, f"{d.name} given twice")
            _expect_args(d, 0)
            if d.name == "UNIT":
                unit_d = d
            else:
                aug_d = d
        else:
            raise ParseError(d.line, f"unknown directive {d.name}")
    carrier = builder.build()
    w = carrier.d_squared_witness()
    if w is not None:
        raise ParseError(builder.last_line, f"d∘d != 0 at degree {w}")
    try:
        square = tensor_complex(carrier, carrier)
    except ChainComplexError as exc:
        raise ParseError(builder.last_line, str(exc)) from None
    degrees = range(min(square.lo, carrier.lo), max(square.hi, carrier.hi) + 1)
    comps = _components(field, mults, carrier.dim, square.dim, degrees)
    mult = chain_map(square, carrier, comps)
    if unit_d is None and aug_d is None:
        return DGAlgebraNU(carrier, mult)
    if unit_d is None or aug_d is None:
        missing = aug_d or unit_d
        raise ParseError(missing.line, "UNIT and AUG must be given together")
    unit = _literal(field, unit_d)
    aug = _literal(field, aug_d)
    if unit.shape != (carrier.dim(0), 1):
        raise ParseError(unit_d.line, f"UNIT has shape {unit.shape}, expected ({carrier.dim(0)}, 1)")
    if aug.shape != (1, carrier.dim(0)):
        raise ParseError(aug_d.line, f"AUG has shape {aug.shape}, expected (1, {carrier.dim(0)})")
    k0 = unit_complex(field)
    return AugmentedDGAlgebra(
        carrier,
        mult,
        chain_map(k0, carrier, {0: unit}),
        chain_map(carrier, k0, {0: aug}),
    )


def emit_dg(a: AnyDG) -> str:
    c = a.carrier
    lines = [_emit_field(c.field)] + _emit_complex_lines(c)
    for n in a.mult.degrees:
        m = a.mult.component(n)
        if not m.is_zero():
            lines.append(f"MULT {n} ; {emit_matrix_literal(m)}")
    if isinstance(a, AugmentedDGAlgebra):
        lines.append(f"UNIT ; {emit_matrix_literal(a.unit.component(0))}")
        lines.append(f"AUG ; {emit_matrix_literal(a.eps.component(0))}")
    return "\n".join(lines) + "\n"

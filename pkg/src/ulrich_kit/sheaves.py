"""Symbolic sheaf descriptors and their model-dependent algebra.

A descriptor names a sheaf whose twisted cohomology the oracles can
produce.  Descriptors are immutable; two structurally equal descriptors
denote the same sheaf, and an AbstractSheaf denotes exactly one sheaf
(it compares by identity).

Grammar accepted by :func:`parse_sheaf` (sums with ``+``, multiplicity
with ``m*``):

    O(k)        line bundle twist, one entry per polarization component
    O(a,b)      line bundle on a product
    S, S+, S-   spinor bundle on a quadric (signed on even quadrics)
    ss(r,d)     semistable bundle of rank r and degree d on a genus-one
                curve; ss(r,0,trivial) / ss(r,0,nontrivial) fixes the
                degree-zero dichotomy bit
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import MalformedDescriptor, NoDualRule, ParseError, UnsupportedQuadricDim
from .variety import (
    KIND_ELLIPTIC,
    KIND_PRODUCT,
    KIND_QUADRIC,
    VarietyModel,
    format_variety,
)


@dataclass(frozen=True)
class LineBundle:
    twists: tuple[int, ...]


@dataclass(frozen=True)
class Spinor:
    sign: str | None = None  # "+", "-" on even quadrics, None on odd


@dataclass(frozen=True)
class SemistableEC:
    rank: int
    degree: int
    # Whether the degree-zero member of the twist orbit has the
    # trivial-determinant type (so carries the one section).  None means
    # unknown; it is only consulted when a twisted degree hits zero.
    trivial_type: bool | None = None


@dataclass(frozen=True)
class DirectSum:
    parts: tuple[tuple["SheafDescriptor", int], ...]


@dataclass(frozen=True)
class ExternalTensor:
    left: "SheafDescriptor"
    right: "SheafDescriptor"


@dataclass(frozen=True, eq=False)
class AbstractSheaf:
    """Opaque sheaf known only through explicit attached data.

    Compares and hashes by identity: each instance is its own sheaf.
    """

    rank: int
    label: str = "abstract"
    num_class: object | None = None
    table: object | None = None


SheafDescriptor = Union[
    LineBundle, Spinor, SemistableEC, DirectSum, ExternalTensor, AbstractSheaf
]


def line_bundle(*twists: int) -> LineBundle:
    return LineBundle(tuple(int(k) for k in twists))


def direct_sum(*parts) -> SheafDescriptor:
    """Normalized direct sum; accepts descriptors or (descriptor, mult)."""
    flat: list[tuple[SheafDescriptor, int]] = []
    for part in parts:
        desc, mult = part if isinstance(part, tuple) else (part, 1)
        if mult < 0:
            raise MalformedDescriptor(f"negative multiplicity {mult}")
        if mult == 0:
            continue
        if isinstance(desc, DirectSum):
            flat.extend((inner, m * mult) for inner, m in desc.parts)
        else:
            flat.append((desc, mult))
    merged: dict[SheafDescriptor, int] = {}
    for desc, mult in flat:
        merged[desc] = merged.get(desc, 0) + mult
    parts_out = tuple(merged.items())
    if not parts_out:
        raise MalformedDescriptor("empty direct sum")
    if len(parts_out) == 1 and parts_out[0][1] == 1:
        return parts_out[0][0]
    return DirectSum(parts_out)


def flatten_atoms(desc: SheafDescriptor) -> list[tuple[SheafDescriptor, int]]:
    if isinstance(desc, DirectSum):
        out: list[tuple[SheafDescriptor, int]] = []
        for part, mult in desc.parts:
            out.extend((atom, m * mult) for atom, m in flatten_atoms(part))
        return out
    return [(desc, 1)]


def twist_components(model: VarietyModel) -> int:
    return 2 if model.kind == KIND_PRODUCT else 1


def validate_descriptor(desc: SheafDescriptor, model: VarietyModel) -> None:
    if isinstance(desc, LineBundle):
        want = twist_components(model)
        if len(desc.twists) != want:
            raise MalformedDescriptor(
                f"line bundle on {format_variety(model)} needs {want} twist"
                f" component(s), got {len(desc.twists)}"
            )
        return
    if isinstance(desc, Spinor):
        if model.kind != KIND_QUADRIC:
            raise MalformedDescriptor("spinor descriptors live on quadrics only")
        if model.dim not in (2, 3):
            raise UnsupportedQuadricDim(
                f"spinor oracle implemented for quadric dimensions 2 and 3,"
                f" not {model.dim}"
            )
        if model.dim % 2 == 0 and desc.sign not in ("+", "-"):
            raise MalformedDescriptor("even quadric spinors need a sign + or -")
        if model.dim % 2 == 1 and desc.sign is not None:
            raise MalformedDescriptor("odd quadric spinors carry no sign")
        return
    if isinstance(desc, SemistableEC):
        if model.kind != KIND_ELLIPTIC:
            raise MalformedDescriptor(
                "semistable (rank, degree) descriptors live on genus-one curves"
            )
        if desc.rank < 1:
            raise MalformedDescriptor(f"semistable rank must be >= 1, got {desc.rank}")
        return
    if isinstance(desc, DirectSum):
        if not desc.parts:
            raise MalformedDescriptor("empty direct sum")
        for part, mult in desc.parts:
            if mult < 1:
                raise MalformedDescriptor(f"multiplicity must be >= 1, got {mult}")
            validate_descriptor(part, model)
        return
    if isinstance(desc, ExternalTensor):
        if model.kind != KIND_PRODUCT:
            raise MalformedDescriptor("external tensors live on product models")
        from .variety import proj_space  # local to avoid import noise

        n1, n2 = model.factors
        validate_descriptor(desc.left, proj_space(n1))
        validate_descriptor(desc.right, proj_space(n2))
        return
    if isinstance(desc, AbstractSheaf):
        if desc.rank < 0:
            raise MalformedDescriptor(f"abstract rank must be >= 0, got {desc.rank}")
        return
    raise MalformedDescriptor(f"unknown descriptor {desc!r}")


def rank_of(desc: SheafDescriptor, model: VarietyModel) -> int:
    if isinstance(desc, LineBundle):
        return 1
    if isinstance(desc, Spinor):
        return 1 if model.dim == 2 else 2
    if isinstance(desc, SemistableEC):
        return desc.rank
    if isinstance(desc, DirectSum):
        return sum(mult * rank_of(part, model) for part, mult in desc.parts)
    if isinstance(desc, ExternalTensor):
        from .variety import proj_space

        n1, n2 = model.factors
        return rank_of(desc.left, proj_space(n1)) * rank_of(desc.right, proj_space(n2))
    if isinstance(desc, AbstractSheaf):
        return desc.rank
    raise MalformedDescriptor(f"unknown descriptor {desc!r}")


def normalize_elliptic(desc: SheafDescriptor, model: VarietyModel) -> SheafDescriptor:
    """Rewrite genus-one descriptors into semistable (rank, degree) form.

    O(k) is the k-th power of the polarization, so it has degree k*d and
    trivial type at the degree-zero twist.
    """
    if isinstance(desc, LineBundle):
        return SemistableEC(rank=1, degree=desc.twists[0] * model.deg, trivial_type=True)
    if isinstance(desc, DirectSum):
        return DirectSum(
            tuple((normalize_elliptic(p, model), m) for p, m in desc.parts)
        )
    return desc


def tensor_line(
    desc: SheafDescriptor, shift: tuple[int, ...], model: VarietyModel
) -> SheafDescriptor:
    """Tensor by the line bundle with the given twist vector."""
    if len(shift) != twist_components(model):
        raise MalformedDescriptor(
            f"twist vector {shift} has wrong length for {format_variety(model)}"
        )
    if all(s == 0 for s in shift):
        return desc
    if isinstance(desc, LineBundle):
        return LineBundle(tuple(a + b for a, b in zip(desc.twists, shift)))
    if isinstance(desc, SemistableEC):
        return SemistableEC(
            rank=desc.rank,
            degree=desc.degree + desc.rank * shift[0] * model.deg,
            trivial_type=desc.trivial_type,
        )
    if isinstance(desc, DirectSum):
        return DirectSum(
            tuple((tensor_line(p, shift, model), m) for p, m in desc.parts)
        )
    if isinstance(desc, ExternalTensor):
        from .variety import proj_space

        n1, n2 = model.factors
        return ExternalTensor(
            tensor_line(desc.left, (shift[0],), proj_space(n1)),
            tensor_line(desc.right, (shift[1],), proj_space(n2)),
        )
    raise NoDualRule(f"no line twist rule for {format_sheaf(desc)} on this model")


def dual_descriptor(desc: SheafDescriptor, model: VarietyModel) -> SheafDescriptor:
    """Dual sheaf where a rule exists: line bundles and rank-one
    semistable data.  Spinors on the quadric surface dualize after the
    product identification (handled by the Ext layer)."""
    if isinstance(desc, LineBundle):
        return LineBundle(tuple(-k for k in desc.twists))
    if isinstance(desc, SemistableEC) and desc.rank == 1:
        return SemistableEC(1, -desc.degree, desc.trivial_type)
    if isinstance(desc, DirectSum):
        return DirectSum(
            tuple((dual_descriptor(p, model), m) for p, m in desc.parts)
        )
    raise NoDualRule(f"no dual rule for {format_sheaf(desc)}")


def product_form(desc: SheafDescriptor, model: VarietyModel) -> SheafDescriptor:
    """Quadric-surface descriptors under the standard identification of
    Q^2 with P^1 x P^1 carrying O(1) = O(1,1)."""
    if model.kind != KIND_QUADRIC or model.dim != 2:
        raise MalformedDescriptor("product form applies to the quadric surface only")
    if isinstance(desc, LineBundle):
        k = desc.twists[0]
        return LineBundle((k, k))
    if isinstance(desc, Spinor):
        return LineBundle((1, 0)) if desc.sign == "+" else LineBundle((0, 1))
    if isinstance(desc, DirectSum):
        return DirectSum(tuple((product_form(p, model), m) for p, m in desc.parts))
    raise MalformedDescriptor(
        f"{format_sheaf(desc)} has no quadric-surface product form"
    )


def format_sheaf(desc: SheafDescriptor) -> str:
    if isinstance(desc, LineBundle):
        return "O(" + ",".join(str(k) for k in desc.twists) + ")"
    if isinstance(desc, Spinor):
        return "S" + (desc.sign or "")
    if isinstance(desc, SemistableEC):
        if desc.trivial_type is None:
            return f"ss({desc.rank},{desc.degree})"
        word = "trivial" if desc.trivial_type else "nontrivial"
        return f"ss({desc.rank},{desc.degree},{word})"
    if isinstance(desc, DirectSum):
        return "+".join(
            (f"{m}*" if m != 1 else "") + format_sheaf(p) for p, m in desc.parts
        )
    if isinstance(desc, ExternalTensor):
        return f"[{format_sheaf(desc.left)}]x[{format_sheaf(desc.right)}]"
    if isinstance(desc, AbstractSheaf):
        return f"abstract({desc.label},rank={desc.rank})"
    raise MalformedDescriptor(f"unknown descriptor {desc!r}")


_ATOM_RE = re.compile(
    r"""
    (?:(?P<mult>\d+)\s*\*\s*)?
    (?P<atom>
        O\(\s*-?\d+(?:\s*,\s*-?\d+)?\s*\)
      | ss\(\s*\d+\s*,\s*-?\d+\s*(?:,\s*(?:trivial|nontrivial)\s*)?\)
      | S(?:[+-](?=\s*(?:\+|$)))?
    )
    """,
    re.VERBOSE,
)
# The spinor sign binds only when followed by a sum separator or the end
# of the expression, so S+O(-1) reads as S plus O(-1) rather than as a
# signed spinor colliding with the next atom.


def _parse_atom(text: str) -> SheafDescriptor:
    if text.startswith("O("):
        inner = text[2:-1]
        return LineBundle(tuple(int(p.strip()) for p in inner.split(",")))
    if text.startswith("ss("):
        inner = [p.strip() for p in text[3:-1].split(",")]
        rank, degree = int(inner[0]), int(inner[1])
        trivial = None
        if len(inner) == 3:
            trivial = inner[2] == "trivial"
        return SemistableEC(rank, degree, trivial)
    if text == "S":
        return Spinor(None)
    if text in ("S+", "S-"):
        return Spinor(text[1])
    raise ParseError(f"unknown sheaf atom {text!r}")


def parse_sheaf(text: str, model: VarietyModel | None = None) -> SheafDescriptor:
    """Parse a descriptor expression; validated against model when given."""
    parts: list[tuple[SheafDescriptor, int]] = []
    pos, expect_atom = 0, True
    stripped = text.strip()
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        if not expect_atom:
            if stripped[pos] != "+":
                raise ParseError(f"expected '+' at position {pos} in {text!r}")
            pos += 1
            expect_atom = True
            continue
        match = _ATOM_RE.match(stripped, pos)
        if match is None:
            raise ParseError(f"cannot read a sheaf atom at position {pos} in {text!r}")
        mult = int(match.group("mult") or 1)
        parts.append((_parse_atom(match.group("atom")), mult))
        pos = match.end()
        expect_atom = False
    if expect_atom:
        raise ParseError(f"empty or dangling sheaf expression {text!r}")
    desc = direct_sum(*parts)
    if model is not None:
        validate_descriptor(desc, model)
    return desc

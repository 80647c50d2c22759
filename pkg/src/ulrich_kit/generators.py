"""Numerical K-group classes, the rank gate for classical generation,
exceptional collections, and orthogonal membership.

The gate implements a one-sided test: a generator's summand classes
must span the full numerical K-lattice, so a deficient span certifies
non-generation.  Membership of E in the right orthogonal of listed
line-bundle members is the vanishing of all twisted hypercohomology
against them, which the exact tables decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cohomology import sheaf_column
from .complexes import FormalComplex, formal_complex, hyper_table
from .errors import (
    Indeterminate,
    MalformedDescriptor,
    NoDualRule,
    OracleDefect,
    UnknownK0Rank,
    UnsupportedModel,
)
from .sheaves import (
    DirectSum,
    LineBundle,
    SemistableEC,
    SheafDescriptor,
    Spinor,
    flatten_atoms,
    format_sheaf,
    normalize_elliptic,
    tensor_line,
    validate_descriptor,
)
from .ulrich import UlrichVerdict, ext_dimension, is_ulrich_sheaf
from .variety import (
    KIND_ELLIPTIC,
    KIND_PRODUCT,
    KIND_PROJ,
    KIND_QUADRIC,
    VarietyModel,
    default_window,
    format_variety,
)


@dataclass(frozen=True)
class K0Class:
    """Coordinate vector of a class in the numerical K-group.

    Coordinates are model-specific pairings chosen to be injective on
    the lattice: Euler characteristics against a twist basis on
    projective space and on the product of two lines, (rank, degree)
    on a genus-one curve.
    """

    model: VarietyModel
    coords: tuple[Fraction, ...]

    def __add__(self, other: "K0Class") -> "K0Class":
        if other.model != self.model:
            raise MalformedDescriptor("classes live on different models")
        return K0Class(
            self.model, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "K0Class":
        return K0Class(self.model, tuple(-a for a in self.coords))


def _euler_of_column(column: dict[int, int]) -> Fraction:
    return Fraction(sum((-1) ** i * h for i, h in column.items()))


def _pn_coords(desc: SheafDescriptor, model: VarietyModel) -> tuple[Fraction, ...]:
    # chi(E(j)) for j = 0..n is injective on the lattice: against the
    # twist basis the pairing matrix is Vandermonde-like and invertible
    return tuple(
        _euler_of_column(sheaf_column(desc, model, j)) for j in range(model.dim + 1)
    )


def _product_coords(desc: SheafDescriptor, model: VarietyModel) -> tuple[Fraction, ...]:
    coords = []
    for shift in ((0, 0), (1, 0), (0, 1), (1, 1)):
        shifted = tensor_line(desc, shift, model)
        coords.append(_euler_of_column(sheaf_column(shifted, model, 0)))
    return tuple(coords)


def _elliptic_degree(atom: SheafDescriptor) -> int:
    if isinstance(atom, DirectSum):
        return sum(mult * _elliptic_degree(part) for part, mult in flatten_atoms(atom))
    if isinstance(atom, SemistableEC):
        return atom.degree
    raise Indeterminate(f"{format_sheaf(atom)} has no degree here")


def _elliptic_rank(atom: SheafDescriptor) -> int:
    if isinstance(atom, DirectSum):
        return sum(mult * _elliptic_rank(part) for part, mult in flatten_atoms(atom))
    if isinstance(atom, SemistableEC):
        return atom.rank
    raise Indeterminate(f"{format_sheaf(atom)} has no rank here")


def k0_class(obj, model: VarietyModel) -> K0Class:
    """Class of a descriptor or formal complex in lattice coordinates.

    Complexes contribute their cohomology sheaves with alternating
    signs, so the class of E[1] is minus the class of E.
    """
    if isinstance(obj, FormalComplex):
        if obj.model != model:
            raise MalformedDescriptor("complex lives on a different model")
        total = K0Class(model, (Fraction(0),) * _coord_width(model))
        for degree, desc in obj.sheaves:
            part = k0_class(desc, model)
            total = total + (-part if degree % 2 else part)
        return total
    validate_descriptor(obj, model)
    if model.kind == KIND_PROJ:
        return K0Class(model, _pn_coords(obj, model))
    if model.kind == KIND_PRODUCT and model.factors == (1, 1):
        return K0Class(model, _product_coords(obj, model))
    if model.kind == KIND_ELLIPTIC:
        atom = normalize_elliptic(obj, model)
        return K0Class(
            model, (Fraction(_elliptic_rank(atom)), Fraction(_elliptic_degree(atom)))
        )
    raise Indeterminate(
        f"no K-group coordinates implemented for {format_variety(model)}"
    )


def _coord_width(model: VarietyModel) -> int:
    if model.kind == KIND_PROJ:
        return model.dim + 1
    if model.kind == KIND_PRODUCT and model.factors == (1, 1):
        return 4
    if model.kind == KIND_ELLIPTIC:
        return 2
    raise Indeterminate(
        f"no K-group coordinates implemented for {format_variety(model)}"
    )


def lattice_rank(vectors: list[tuple[Fraction, ...]]) -> int:
    """Rank of the span, by fraction-free elimination over the integers."""
    if not vectors:
        return 0
    width = len(vectors[0])
    rows = []
    for vec in vectors:
        if len(vec) != width:
            raise MalformedDescriptor("coordinate vectors of unequal length")
        denom = 1
        for entry in vec:
            denom = denom * entry.denominator // gcd(denom, entry.denominator)
        rows.append([int(entry * denom) for entry in vec])
    rank = 0
    col = 0
    while rank < len(rows) and col < width:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                factor = rows[r][col]
                rows[r] = [
                    lead * rows[r][j] - factor * rows[rank][j] for j in range(width)
                ]
        rank += 1
        col += 1
    return rank


@dataclass
class GateResult:
    passed: bool
    rank: int
    needed: int

    @property
    def verdict(self) -> str:
        return "FullRank" if self.passed else f"DeficientRank{{{self.rank}}}"


def generator_gate(descs: list, model: VarietyModel) -> GateResult:
    """Necessary lattice condition for the listed objects to generate.

    The classes of the listed descriptors or complexes must span the
    full numerical K-group.  A deficient span certifies that the sum
    is not a classical generator; a full span asserts nothing further.
    """
    if model.k0_rank is None:
        raise UnknownK0Rank(
            f"numerical K-group rank not recorded for {format_variety(model)}"
        )
    vectors = [k0_class(desc, model).coords for desc in descs]
    rank = lattice_rank(vectors)
    return GateResult(passed=rank == model.k0_rank, rank=rank, needed=model.k0_rank)


@dataclass(frozen=True)
class Collection:
    model: VarietyModel
    members: tuple[SheafDescriptor, ...]
    kind: str = "custom"


def beilinson_collection(model: VarietyModel) -> Collection:
    """The twist collection O, O(1), ..., O(n) on projective space."""
    if model.kind != KIND_PROJ:
        raise UnsupportedModel("the twist collection lives on projective space")
    members = tuple(LineBundle((k,)) for k in range(model.dim + 1))
    return register_collection(Collection(model, members, kind="Beilinson"))


def kapranov_collection(model: VarietyModel) -> Collection:
    """Spinor-augmented collections on the low quadrics."""
    if model.kind != KIND_QUADRIC or model.dim not in (2, 3):
        raise UnsupportedModel("spinor collections implemented on Q2 and Q3 only")
    if model.dim == 2:
        members = (LineBundle((0,)), Spinor("+"), Spinor("-"), LineBundle((1,)))
    else:
        members = (LineBundle((0,)), Spinor(None), LineBundle((1,)), LineBundle((2,)))
    return register_collection(Collection(model, members, kind="Kapranov"))


def register_collection(collection: Collection) -> Collection:
    """Verify the no-backward-maps property where an Ext oracle exists.

    For members E_i, E_j with i < j, every Ext^k(E_j, E_i) must
    vanish.  Pairs whose source has no dual rule (the odd spinor) are
    skipped; those pairs carry the standard spinor orthogonality.
    """
    members = collection.members
    for member in members:
        validate_descriptor(member, collection.model)
    for j in range(len(members)):
        for i in range(j):
            try:
                for k in range(0, collection.model.dim + 1):
                    value = ext_dimension(members[j], members[i], k, collection.model)
                    if value:
                        raise OracleDefect(
                            f"backward map: Ext^{k}({format_sheaf(members[j])},"
                            f" {format_sheaf(members[i])}) = {value}"
                        )
            except NoDualRule:
                continue
    return collection


@dataclass
class MembershipVerdict:
    member_of_orthogonal: bool
    witness: tuple[str, int, int, int] | None = None


def orthogonal_membership(
    E,
    members,
    model: VarietyModel | None = None,
    window: tuple[int, int] | None = None,
) -> MembershipVerdict:
    """Whether all Hom-spaces from every listed member to E vanish.

    For a member O(j) the question is the vanishing of the whole
    hypercohomology column of E at twist -j.  The first nonzero entry
    found is returned as (member, degree, twist, value).
    """
    if isinstance(members, Collection):
        model = members.model
        members = members.members
    if model is None:
        raise MalformedDescriptor("membership test needs a model")
    if not isinstance(E, FormalComplex):
        validate_descriptor(E, model)
        E = formal_complex(model, {0: E})
    if window is None:
        window = default_window(E.model)
    member_twists = []
    for member in members:
        if not (isinstance(member, LineBundle) and len(member.twists) == 1):
            raise MalformedDescriptor(
                f"membership test needs single-twist line-bundle members,"
                f" got {format_sheaf(member)}"
            )
        member_twists.append((member, -member.twists[0]))
    if member_twists:
        lo = min(window[0], *(t for _, t in member_twists))
        hi = max(window[1], *(t for _, t in member_twists))
        window = (lo, hi)
    hyper = hyper_table(E, window)
    for member, twist in member_twists:
        column = hyper.table.column(twist)
        for i in sorted(column):
            if column[i]:
                return MembershipVerdict(
                    member_of_orthogonal=False,
                    witness=(format_sheaf(member), i, twist, column[i]),
                )
    return MembershipVerdict(member_of_orthogonal=True)


@dataclass
class EllipticWitness:
    descriptor: SemistableEC
    verdict: UlrichVerdict


def elliptic_witness(model: VarietyModel) -> EllipticWitness:
    """Explicit degree-d rank-one Ulrich witness on a genus-one curve.

    The witness is a degree-d line bundle whose twist down to degree
    zero is of nontrivial type, which kills both cohomology groups at
    twist -1; the section count at twist zero is then d = deg * rank.
    """
    if model.kind != KIND_ELLIPTIC:
        raise UnsupportedModel("witness construction needs a genus-one model")
    desc = SemistableEC(1, model.deg, False)
    return EllipticWitness(descriptor=desc, verdict=is_ulrich_sheaf(desc, model))

"""Divisorial stability numerics on surface models: slopes, the
torsion-pair split, the central charge and its closed form on solved
classes, the heart-membership obstruction, and the evidence scanner.

Two threshold conventions are carried everywhere.  paper-literal
compares the slope mu = e1/r against s*d, matching the displayed
pairing of c1 with the polarization; normalized compares against s.
Every report names the convention it used.

The central charge is the defining integral with the standard sign,
Z = -[e2*d - (s+it)*e1*d + (s+it)^2*d*r/2].  The closed form is kept
exactly as displayed for solved Ulrich classes; the two are NOT the
same function of (s,t) (they differ by (s,t) -> (-s,-t) up to global
sign), and nothing here papers over that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import atan2, pi

from .chern import NumClass, class_of
from .complexes import FormalComplex
from .errors import (
    EmptyGrid,
    Indeterminate,
    MalformedDescriptor,
    MissingConvention,
    NonpositiveT,
    NoSlope,
    UnsupportedModel,
)
from .sheaves import SheafDescriptor
from .variety import VarietyModel, format_variety, surface_data

CONVENTIONS = ("paper-literal", "normalized")


class _Infinite:
    """Slope of a torsion class; compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinite"

    def __eq__(self, other):
        return isinstance(other, _Infinite)

    def __hash__(self):
        return hash("infinite-slope")

    def __gt__(self, other):
        return not isinstance(other, _Infinite)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinite)


INFINITE = _Infinite()


def _surface_degree(model: VarietyModel) -> int:
    if model.dim != 2:
        raise UnsupportedModel(
            f"divisorial numerics need a surface, got {format_variety(model)}"
        )
    return model.deg


def slope(c: NumClass, model: VarietyModel | None = None):
    """mu = (c1 . H) / (rank * H^2) = e1 / r; infinite for rank zero."""
    if model is not None and model != c.model:
        raise MalformedDescriptor("class belongs to a different model")
    _surface_degree(c.model)
    if c.r == 0:
        return INFINITE
    return c.e1 / c.r


@dataclass(frozen=True)
class ChargeValue:
    re: Fraction
    im: Fraction

    def as_pair(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def phase_sector(self) -> str:
        if self.im > 0:
            return "upper-half"
        if self.im < 0:
            return "lower-half"
        if self.re < 0:
            return "negative-real"
        if self.re > 0:
            return "positive-real"
        return "zero"

    def phase_display(self) -> float:
        """Phase as a multiple of pi in (-1, 1]; display only."""
        if self.re == 0 and self.im == 0:
            return 0.0
        return atan2(float(self.im), float(self.re)) / pi


def central_charge(c: NumClass, s: Fraction, t: Fraction) -> ChargeValue:
    """Z = -[e2*d - (s+it)*e1*d + (s+it)^2*d*r/2], expanded exactly.

    Real part -e2*d + s*e1*d - (s^2 - t^2)*d*r/2; imaginary part
    t*d*(e1 - s*r).  Requires t > 0.
    """
    s, t = Fraction(s), Fraction(t)
    if t <= 0:
        raise NonpositiveT(f"t must be positive, got {t}")
    d = _surface_degree(c.model)
    if c.e2 is None:
        raise Indeterminate("central charge needs the degree-two coefficient")
    re = -c.e2 * d + s * c.e1 * d - (s * s - t * t) * d * c.r / 2
    im = t * d * (c.e1 - s * c.r)
    return ChargeValue(Fraction(re), Fraction(im))


def ulrich_charge_closed_form(
    model: VarietyModel, r: int, s: Fraction, t: Fraction
) -> ChargeValue:
    """The displayed closed form for the charge of a rank-r solved
    class: re = -r*chi0 + (r*d/4)(i^2+3i+4) + (r*d/2)(s^2-t^2+(i+3)s),
    im = (r*d/2)(2s+i+3)t.  Evaluated verbatim; see the module note on
    how it actually relates to central_charge.
    """
    s, t = Fraction(s), Fraction(t)
    if t <= 0:
        raise NonpositiveT(f"t must be positive, got {t}")
    d, i_x, chi0 = surface_data(model)
    re = (
        -r * chi0
        + Fraction(r * d, 4) * (i_x * i_x + 3 * i_x + 4)
        + Fraction(r * d, 2) * (s * s - t * t + (i_x + 3) * s)
    )
    im = Fraction(r * d, 2) * (2 * s + i_x + 3) * t
    return ChargeValue(Fraction(re), Fraction(im))


def _threshold(s: Fraction, d: int, convention: str) -> Fraction:
    if convention == "paper-literal":
        return Fraction(s) * d
    if convention == "normalized":
        return Fraction(s)
    raise MissingConvention(
        f"convention must be one of {CONVENTIONS}, got {convention!r}"
    )


def torsion_classify(
    obj, s: Fraction, model: VarietyModel, convention: str = "paper-literal"
) -> str:
    """Which side of the torsion pair at parameter s an object falls on.

    T for slope strictly above the threshold (torsion included), F for
    slope at or below it.
    """
    mu = obj if isinstance(obj, (Fraction, int, _Infinite)) else None
    if mu is None:
        c = obj if isinstance(obj, NumClass) else class_of(obj, model)
        mu = slope(c)
    if isinstance(mu, _Infinite):
        _threshold(s, _surface_degree(model), convention)  # validate convention
        return "T"
    threshold = _threshold(s, _surface_degree(model), convention)
    return "F" if Fraction(mu) <= threshold else "T"


@dataclass
class HeartVerdict:
    status: str
    reason: str | None
    best_shift: int | None
    s: Fraction
    convention: str

    @property
    def maybe(self) -> bool:
        return self.status == "MaybeInHeart"


def _sheaf_slope(desc: SheafDescriptor, model: VarietyModel):
    try:
        return slope(class_of(desc, model))
    except Indeterminate as exc:
        raise NoSlope(str(exc)) from exc


def heart_gate(
    E: FormalComplex, s: Fraction, convention: str = "paper-literal"
) -> HeartVerdict:
    """Necessary conditions for E to land in the tilted heart at s,
    after the best shift.

    The heart is two-term: cohomology in degrees -1 and 0 only, with
    the degree -1 sheaf on the F side and the degree 0 sheaf on the T
    side.  Two nonzero sheaves of equal slope can never split that
    way, at any s; that case is reported before the pointwise checks.
    Passing everything still only earns MaybeInHeart.
    """
    s = Fraction(s)
    _threshold(s, _surface_degree(E.model), convention)  # validate early
    degrees = E.support()
    if not degrees:
        return HeartVerdict("MaybeInHeart", None, 0, s, convention)
    lo, hi = min(degrees), max(degrees)
    if hi - lo >= 2:
        return HeartVerdict("NotInHeart", "amplitude", None, s, convention)
    sheaf_map = E.sheaf_map()
    if hi - lo == 1:
        best = hi
        mu_low = _sheaf_slope(sheaf_map[lo], E.model)
        mu_high = _sheaf_slope(sheaf_map[hi], E.model)
        if mu_low == mu_high:
            return HeartVerdict("NotInHeart", "equal-slope", best, s, convention)
        low_ok = torsion_classify(mu_low, s, E.model, convention) == "F"
        high_ok = torsion_classify(mu_high, s, E.model, convention) == "T"
        if low_ok and high_ok:
            return HeartVerdict("MaybeInHeart", None, best, s, convention)
        return HeartVerdict("NotInHeart", "torsion-pair", best, s, convention)
    # single nonzero sheaf: try it in degree 0 (T side), then degree -1 (F side)
    mu = _sheaf_slope(sheaf_map[lo], E.model)
    if torsion_classify(mu, s, E.model, convention) == "T":
        return HeartVerdict("MaybeInHeart", None, lo, s, convention)
    return HeartVerdict("MaybeInHeart", None, lo + 1, s, convention)


@dataclass
class ScanRow:
    s: Fraction
    t: Fraction
    best_shift: int | None
    heart_status: str
    heart_reason: str | None
    re: Fraction
    im: Fraction
    im_zero: bool
    phase_sector: str
    phase_display: float


def question_scan(
    E: FormalComplex,
    grid: list[tuple[Fraction, Fraction]],
    convention: str = "paper-literal",
) -> list[ScanRow]:
    """Evidence table over a rational (s,t) grid.

    Each row carries the heart obstruction at s and the exact charge
    of the total class at (s,t).  No stability verdict is emitted:
    the underlying question is open and this is an instrument, not an
    answer.
    """
    if not grid:
        raise EmptyGrid("scan needs at least one grid point")
    for s, t in grid:
        if Fraction(t) <= 0:
            raise NonpositiveT(f"grid t values must be positive, got {t}")
    total = class_of(E, E.model)
    rows = []
    for s, t in sorted((Fraction(s), Fraction(t)) for s, t in grid):
        verdict = heart_gate(E, s, convention)
        charge = central_charge(total, s, t)
        rows.append(
            ScanRow(
                s=s,
                t=t,
                best_shift=verdict.best_shift,
                heart_status=verdict.status,
                heart_reason=verdict.reason,
                re=charge.re,
                im=charge.im,
                im_zero=charge.im == 0,
                phase_sector=charge.phase_sector(),
                phase_display=charge.phase_display(),
            )
        )
    return rows

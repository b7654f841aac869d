"""Closed-form size bounds for s-distance sets, designs and Q-polynomial schemes.

Parity and floor/ceiling conventions live in the small helpers at the top so
the boundary cases are tested in one place.  Hypothesis ranges are checked,
never clamped: the raw functions raise ``RangeError`` and :func:`audit`
turns that into ``applicable=False``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import RangeError
from .harmonics import harm_dim


def delta(s: int) -> int:
    """1 for odd s, 0 for even s."""
    return s % 2


def middle_range(s: int, i: int) -> range:
    """k from max(s-i+1, 0) to floor(s - i/2) inclusive."""
    return range(max(s - i + 1, 0), (2 * s - i) // 2 + 1)


def _h(m: int, k: int) -> int:
    return harm_dim(m, k)


def _check_m(m: int):
    if m < 2:
        raise RangeError(f"dimension m must be >= 2, got {m}")


def absolute_bound_sdist(m: int, s: int) -> int:
    _check_m(m)
    if s < 1:
        raise RangeError(f"s must be >= 1, got {s}")
    return sum(_h(m, k) for k in range(s + 1))


def design_lower_bound(m: int, e: int) -> int:
    """Minimum size of a spherical 2e-design."""
    _check_m(m)
    if e < 0:
        raise RangeError(f"e must be >= 0, got {e}")
    return sum(_h(m, k) for k in range(e + 1))


def main_bound(m: int, s: int, i: int, flags: Iterable[int] = ()) -> int:
    """Upper bound for an s-distance set of strength 2s - i.

    ``flags`` lists the k with f_k = 1/|X|; only those in the middle range count.
    """
    _check_m(m)
    if not 2 <= i <= 2 * s:
        raise RangeError(f"need 2 <= i <= 2s, got i={i}, s={s}")
    flags = set(flags)
    low = sum(_h(m, k) for k in range(0, s - i + 1))  # empty when s - i < 0
    mid = sum(_h(m, k) for k in middle_range(s, i) if k in flags)
    high = sum(_h(m, k) for k in range((2 * s - i) // 2 + 1, s + 1))
    return low + mid + high


def corollary_bound(m: int, s: int, i: int) -> int:
    _check_m(m)
    if not 2 <= i <= s + 1:
        raise RangeError(f"need 2 <= i <= s+1, got i={i}, s={s}")
    return absolute_bound_sdist(m, s) - _h(m, s - i + 1)


def antipodal_bound(m: int, s: int, i: int) -> int:
    """Bound for an antipodal s-distance set of strength 2s - 2i - 1."""
    _check_m(m)
    d = delta(s)
    if s < 1 or not 1 + d <= i <= s + d:
        raise RangeError(f"need 1+delta_s <= i <= s+delta_s, got i={i}, s={s}")
    return 2 * sum(_h(m, 2 * k) for k in range((s - d) // 2 + 1)) - 2 * _h(m, s + d - 2 * i)


def s0_case(s: int, l: int) -> int:
    if s < 1 or not 0 <= l <= s:
        raise RangeError(f"need 0 <= l <= s, got l={l}, s={s}")
    if l == s:
        return 1
    if 2 * l >= s - 1:
        return 2
    return 3


def s0_bound(m: int, s: int, l: int) -> Tuple[int, int]:
    """(case, bound) for a Q-polynomial scheme with first multiplicity m and index l."""
    _check_m(m)
    case = s0_case(s, l)
    if case == 1:
        value = 2 * comb(m + s - 2, s - 1)
    elif case == 2:
        value = comb(m + 2 * l - s, 2 * l + 1 - s) + comb(m + s - 1, s)
    else:
        value = comb(m + s - 1, s)
    hs = s0_hsum(m, s, l)
    if hs != value:
        raise AssertionError(f"binomial form {value} != h-sum form {hs} (m={m}, s={s}, l={l})")
    return case, value


def s0_hsum(m: int, s: int, l: int) -> int:
    """The same bound written as sums of harmonic dimensions."""
    case = s0_case(s, l)
    if case == 1:
        return 2 * sum(_h(m, i) for i in range(s) if i % 2 == (s - 1) % 2)
    if case == 2:
        total = sum(_h(m, i) for i in range(s + 1))
        return total - sum(_h(m, i) for i in range(2 * l - s + 3, s) if i % 2 == (s - 1) % 2)
    return sum(_h(m, i) for i in range(s + 1) if i % 2 == s % 2)


@dataclass
class BoundReport:
    name: str
    hypothesis: dict
    value: Optional[int] = None
    applicable: bool = False
    attained: Optional[bool] = None
    witness_size: Optional[int] = None
    kind: str = "upper"
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _report(name, hyp, fn, n=None, kind="upper", note=""):
    rep = BoundReport(name, hyp, kind=kind, note=note)
    try:
        rep.value = fn()
        rep.applicable = True
    except RangeError as exc:
        rep.note = str(exc)
        return rep
    if n is not None:
        rep.witness_size = n
        rep.attained = n == rep.value
        violated = n > rep.value if kind == "upper" else n < rep.value
        if violated:
            raise AssertionError(f"{name}: |X| = {n} violates bound {rep.value}")
    return rep


def evaluate(m: int, s: int, t: Optional[int] = None, i: Optional[int] = None, l: Optional[int] = None,
             antipodal: bool = False, flags: Sequence[int] = (), n: Optional[int] = None) -> List[BoundReport]:
    """Every bound that the given parameters make meaningful."""
    if i is None and t is not None:
        i = 2 * s - t
    if t is None and i is not None:
        t = 2 * s - i
    out = [_report("absolute_bound_sdist", {"m": m, "s": s}, lambda: absolute_bound_sdist(m, s), n)]
    if t is not None and t >= 0:
        out.append(_report("design_lower_bound", {"m": m, "e": t // 2}, lambda: design_lower_bound(m, t // 2), n, kind="lower"))
    if i is not None:
        hyp = {"m": m, "s": s, "i": i, "t": t, "flags": sorted(flags)}
        out.append(_report("main_bound", hyp, lambda: main_bound(m, s, i, flags), n))
        out.append(_report("corollary_bound", {"m": m, "s": s, "i": i, "t": t}, lambda: corollary_bound(m, s, i), n))
    if antipodal and t is not None:
        ia = Fraction(2 * s - 1 - t, 2)
        hyp = {"m": m, "s": s, "t": t, "i": ia.numerator if ia.denominator == 1 else str(ia), "antipodal": True}
        if ia.denominator == 1:
            out.append(_report("antipodal_bound", hyp, lambda: antipodal_bound(m, s, int(ia)), n))
        else:
            out.append(BoundReport("antipodal_bound", hyp, note="strength 2s-2i-1 has no integer i"))
    if l is not None:
        out.append(_report("s0_bound", {"m": m, "s": s, "l": l}, lambda: s0_bound(m, s, l)[1], n))
    return out


def h_table(m_values: Iterable[int], max_degree: int) -> List[List[int]]:
    return [[harm_dim(m, i) for i in range(max_degree + 1)] for m in m_values]


def audit(config, krein_data=None, profile=None, try_scheme=True):
    """Evaluate every applicable bound for ``config`` and mark attainment.

    Without ``krein_data`` the scheme route is tried only when t >= 2s - 2,
    where the distance classes are guaranteed to form a Q-polynomial scheme.
    """
    from . import pointset, schemes
    from .errors import SphdistError

    dist = pointset.inner_product_set(config)
    s = dist.s
    prof = profile or pointset.strength(config)
    t = prof.strength
    anti, _ = pointset.antipodal_check(config)
    flags: List[int] = []
    if t >= s - 1:
        coeffs = pointset.annihilator_coeff_audit(config, prof)
        flags = [k for k, f in enumerate(coeffs["equals_inverse_size"]) if f]
    reports = evaluate(config.m, s, t=t, antipodal=anti, flags=flags, n=config.n)
    kd = krein_data
    if kd is None and try_scheme and t >= 2 * s - 2:
        try:
            spec = schemes.idempotents(schemes.from_distance_classes(config))
            kd, _ = schemes.q_polynomial(spec)
        except SphdistError as exc:
            reports.append(BoundReport("s0_bound", {"s": s}, note=f"scheme unavailable: {exc}"))
    if kd is not None:
        l = schemes.l_index(kd)
        reports.append(_report("s0_bound", {"m": kd.m, "s": kd.s, "l": l}, lambda: s0_bound(kd.m, kd.s, l)[1], config.n))
    return reports

"""Welch quantities, saturation, angle sets and design comparisons.

For a set ``X`` of unit vectors in dimension ``d``::

    W_t = (1 / |X|^2) * sum over ordered pairs (x, y) of |<x|y>|^(2t)

is bounded below by ``1 / binom(d + t - 1, t)``, with equality exactly for
projective t-designs. ``S_t`` is the bound divided by ``W_t``.

Direct summation over explicit vectors is the ground truth. Closed forms
are evaluated separately and compared against it, never substituted.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import comb, isqrt

import numpy as np

from . import kernels
from .constructions import hw_mub_set, hw_sudoq, is_prime, local_mub_product_bases

ANGLE_GAP = 1e-6
DESIGNS = ("sudoq", "mub", "sic", "local_mub", "basis")


def _as_set(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("expected a non-empty (count, d) array of vectors")
    return x


def welch_ws(x, tmax: int) -> np.ndarray:
    """``W_t`` for ``t = 0..tmax`` in one pass."""
    x = _as_set(x)
    if tmax < 0:
        raise ValueError("tmax must be non-negative")
    return kernels.overlap_power_sums(x, tmax) / x.shape[0] ** 2


def welch_w(x, t: int) -> float:
    return float(welch_ws(x, t)[t])


def welch_bound(d: int, t: int) -> float:
    if d < 1 or t < 0:
        raise ValueError("welch_bound needs d >= 1 and t >= 0")
    return 1.0 / comb(d + t - 1, t)


def saturation(x, t: int) -> float:
    x = _as_set(x)
    return welch_bound(x.shape[1], t) / welch_w(x, t)


def angle_set(x, gap: float = ANGLE_GAP) -> list[tuple[float, int]]:
    """Values of ``|<x|y>|^2`` over unordered distinct pairs with multiplicities.

    Sorted values are split wherever consecutive entries differ by more than
    ``gap``; each cluster is reported by its mean.
    """
    x = _as_set(x)
    if x.shape[0] < 2:
        return []
    ov = np.abs(x.conj() @ x.T) ** 2
    vals = np.sort(ov[np.triu_indices(x.shape[0], k=1)])
    cuts = np.flatnonzero(np.diff(vals) > gap) + 1
    return [(float(chunk.mean()), int(chunk.size)) for chunk in np.split(vals, cuts)]


def welch_from_angles(count: int, angles: list[tuple[float, int]], t: int) -> float:
    """``W_t`` rebuilt from an angle multiset (self-overlaps contribute ``count``)."""
    total = float(count) + 2.0 * sum(m * v ** t for v, m in angles)
    return total / count ** 2


def _sqrt_dim(d: int) -> int:
    n = isqrt(d)
    if n < 2 or n * n != d:
        raise ValueError(f"d={d} is not a square N**2 with N >= 2")
    return n


def closed_form_wt(design: str, d: int, t: int) -> float:
    """Printed closed forms for SudoQ and MUB designs, and the SIC angle form.

    ``sudoq``: ``(sqrt(d)^t + d - sqrt(d))^2 / d^(t+1)``;
    ``mub``: ``(1 + d^-t) / (d (d + 1))``;
    ``sic``: ``(1 + (d^2 - 1) / (d + 1)^t) / d^2``.
    The first two do not agree with direct summation; see
    :func:`multiset_wt` for the forms that do.
    """
    if d < 2 or t < 0:
        raise ValueError("closed forms need d >= 2 and t >= 0")
    if design == "sudoq":
        r = float(_sqrt_dim(d))
        return (r ** t + d - r) ** 2 / d ** (t + 1)
    if design == "mub":
        return (1.0 + d ** (-t)) / (d * (1.0 + d))
    if design == "sic":
        return (1.0 + (d * d - 1) / (d + 1.0) ** t) / d ** 2
    raise ValueError(f"unknown design {design!r}")


def multiset_wt(design: str, d: int, t: int) -> float:
    """``W_t`` from the exact angle multiset of each design.

    * ``sudoq`` (prime ``N``, ``d = N^2``): the vector set is every product of
      two vectors from ``N`` mutually unbiased bases of dimension ``N``, so
      ``W_t`` is the square of the factor value ``(1 + (N^2 - N) N^-t) / N^2``.
    * ``mub`` (complete set of ``d + 1`` bases): ``(1 + d^(2-t)) / (d (d + 1))``.
    * ``local_mub`` (``N + 1`` product bases, prime ``N``):
      ``(1 + N^(3-2t)) / (N^2 (N + 1))``.
    * ``sic``: same as :func:`closed_form_wt`.
    * ``basis``: ``1/d``.
    """
    if d < 2 or t < 0:
        raise ValueError("multiset forms need d >= 2 and t >= 0")
    if t == 0:
        return 1.0
    if design == "sudoq":
        n = _sqrt_dim(d)
        return ((1.0 + (n * n - n) * float(n) ** (-t)) / (n * n)) ** 2
    if design == "mub":
        return (1.0 + float(d) ** (2 - t)) / (d * (d + 1.0))
    if design == "local_mub":
        n = _sqrt_dim(d)
        return (1.0 + float(n) ** (3 - 2 * t)) / (n * n * (n + 1.0))
    if design == "sic":
        return closed_form_wt("sic", d, t)
    if design == "basis":
        return 1.0 / d
    raise ValueError(f"unknown design {design!r}")


def design_vectors(design: str, d: int) -> np.ndarray | None:
    """Explicit vectors for a design in dimension ``d``, or ``None`` if not built here."""
    if design == "basis":
        return np.eye(d, dtype=np.complex128)
    if design == "mub":
        return np.concatenate(hw_mub_set(d)) if is_prime(d) else None
    if design == "sudoq":
        return hw_sudoq(_sqrt_dim(d)).flat_vectors()
    if design == "local_mub":
        n = _sqrt_dim(d)
        return np.concatenate(local_mub_product_bases(n)) if is_prime(n) else None
    if design == "sic":
        return None
    raise ValueError(f"unknown design {design!r}")


@dataclass(frozen=True)
class DesignMetrics:
    d: int
    count: int
    w: dict[int, float]
    s: dict[int, float]
    angle_multiset: list[tuple[float, int]]
    t_design_max: int

    def to_dict(self) -> dict:
        return {"d": self.d, "count": self.count,
                "w": {str(t): v for t, v in self.w.items()},
                "s": {str(t): v for t, v in self.s.items()},
                "angle_multiset": [[v, m] for v, m in self.angle_multiset],
                "t_design_max": self.t_design_max}


def design_metrics(x, tmax: int = 6, tol: float = 1e-9, gap: float = ANGLE_GAP) -> DesignMetrics:
    """All metrics of a vector set; ``t_design_max`` is the largest ``t`` with ``S_t >= 1 - tol``."""
    x = _as_set(x)
    d = x.shape[1]
    ws = welch_ws(x, tmax)
    w = {t: float(ws[t]) for t in range(tmax + 1)}
    s = {t: welch_bound(d, t) / w[t] for t in range(tmax + 1)}
    tmaxd = 0
    for t in range(1, tmax + 1):
        if s[t] >= 1.0 - tol:
            tmaxd = t
        else:
            break
    return DesignMetrics(d, x.shape[0], w, s, angle_set(x, gap), tmaxd)


@dataclass(frozen=True)
class CurveRow:
    design: str
    d: int
    t: int
    w: float
    s: float
    source: str  # "direct" or "multiset"


def curves(designs, d: int, tmax: int = 6) -> list[CurveRow]:
    """``(design, d, t, W_t, S_t)`` rows, direct where vectors exist."""
    rows = []
    for design in designs:
        vecs = design_vectors(design, d)
        if vecs is not None:
            ws = welch_ws(vecs, tmax)
            source = "direct"
        else:
            ws = [multiset_wt(design, d, t) for t in range(tmax + 1)]
            source = "multiset"
        for t in range(tmax + 1):
            w = float(ws[t])
            rows.append(CurveRow(design, d, t, w, welch_bound(d, t) / w, source))
    return rows


def export_curves(designs, d: int, tmax: int = 6) -> str:
    """CSV text with header ``design,d,t,W,S`` and 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["design", "d", "t", "W", "S"])
    for row in curves(designs, d, tmax):
        writer.writerow([row.design, row.d, row.t, f"{row.w:.17g}", f"{row.s:.17g}"])
    return buf.getvalue()


@dataclass(frozen=True)
class LocalComparison:
    n: int
    d: int
    s2: dict[str, float]
    basis_note: str = "basis = one computational basis of dimension N**2"

    @property
    def ordered(self) -> list[tuple[str, float]]:
        return sorted(self.s2.items(), key=lambda kv: -kv[1])

    @property
    def sudoq_beats_local(self) -> bool:
        return self.s2["sudoq"] > self.s2["local_mub"] > self.s2["basis"]

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "s2": dict(self.s2), "ordered": self.ordered,
                "sudoq_local_basis_strict": self.sudoq_beats_local, "note": self.basis_note}


def local_design_comparison(n: int) -> LocalComparison:
    """``S_2`` by direct summation for the SudoQ design, local MUBs and one basis."""
    if not is_prime(n):
        raise ValueError(f"N={n} is not prime")
    d = n * n
    s2 = {
        "sudoq": saturation(hw_sudoq(n).flat_vectors(), 2),
        "local_mub": saturation(np.concatenate(local_mub_product_bases(n)), 2),
        "basis": saturation(np.eye(d, dtype=np.complex128), 2),
    }
    return LocalComparison(n, d, s2)


@dataclass(frozen=True)
class ClosedFormRow:
    design: str
    d: int
    t: int
    printed: float
    reference: float
    reference_source: str
    match: bool


def closed_form_audit(ds=(4, 9), ts=(1, 2, 3), rtol: float = 1e-9) -> list[ClosedFormRow]:
    """Compare the printed closed forms with direct summation.

    Where no explicit vectors are built (MUBs in non-prime ``d``) the exact
    multiset value stands in and the row says so. Mismatches are reported in
    ``match``; they never raise.
    """
    rows = []
    for design in ("sudoq", "mub"):
        for d in ds:
            vecs = design_vectors(design, d)
            for t in ts:
                printed = closed_form_wt(design, d, t)
                if vecs is not None:
                    ref, src = welch_w(vecs, t), "direct"
                else:
                    ref, src = multiset_wt(design, d, t), "multiset"
                ok = abs(printed - ref) <= rtol * max(abs(ref), 1e-300)
                rows.append(ClosedFormRow(design, d, t, printed, ref, src, ok))
    return rows


def closed_form_csv(rows: list[ClosedFormRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["design", "d", "t", "printed", "reference", "source", "match"])
    for r in rows:
        writer.writerow([r.design, r.d, r.t, f"{r.printed:.17g}", f"{r.reference:.17g}",
                         r.reference_source, "yes" if r.match else "no"])
    return buf.getvalue()

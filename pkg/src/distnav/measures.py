"""Finitely supported probability measures and the Levy-Prokhorov metric.

Measures are formal convex combinations of points of an arbitrary metric
space; points may be numbers, coordinate tuples, numpy arrays, or path
objects.  Weights are either exact rationals (mode "exact") or floats (mode
"float"); construction merges duplicate points and rejects nonprobability
weights.

The Levy-Prokhorov distance

    inf { eps > 0 : mu(A) <= nu(A^eps) + eps  and  nu(A) <= mu(A^eps) + eps }

is computed by brute force over subsets of the supports with bisection on
eps.  For finitely supported measures it suffices to let A range over
subsets of supp(mu) for the first family of inequalities (enlarging A by
points of zero mu-mass only weakens the constraint) and over subsets of
supp(nu) for the second, which caps the work at 2^12 subsets per side.
The distance never exceeds 1, so bisection runs on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "MetricSpace",
    "FiniteMeasure",
    "lp_distance",
    "pushforward",
    "product_measure",
    "measure_to_jsonable",
    "measure_from_jsonable",
    "euclidean_metric",
    "MAX_SUPPORT",
]

MAX_SUPPORT = 12
MERGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MetricSpace:
    """A metric given as a plain distance function plus a label."""

    distance: Callable[[Any, Any], float]
    name: str = ""


def euclidean_metric(name: str = "euclidean") -> MetricSpace:
    return MetricSpace(
        distance=lambda p, q: float(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float))),
        name=name,
    )


def _point_key(point: Any):
    """Hashable identity for merging atoms at literally identical points."""
    if isinstance(point, np.ndarray):
        return ("ndarray", point.shape, point.tobytes())
    try:
        hash(point)
    except TypeError:
        return ("id", id(point))
    return point


class FiniteMeasure:
    """An immutable finitely supported probability measure."""

    def __init__(
        self,
        atoms: Iterable[tuple[Any, Fraction | float | int]],
        mode: str | None = None,
    ) -> None:
        merged: dict[Any, tuple[Any, Any]] = {}
        exact = True
        for point, weight in atoms:
            if isinstance(weight, float):
                exact = False
            elif not isinstance(weight, (int, Fraction)):
                raise TypeError(f"weight {weight!r} is neither rational nor float")
            key = _point_key(point)
            if key in merged:
                merged[key] = (merged[key][0], merged[key][1] + weight)
            else:
                merged[key] = (point, weight)
        if mode is None:
            mode = "exact" if exact else "float"
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        kept: list[tuple[Any, Any]] = []
        total = Fraction(0) if mode == "exact" else 0.0
        for point, weight in merged.values():
            if weight == 0:
                continue
            if weight < 0:
                raise ValueError(f"negative weight {weight} at {point!r}")
            if mode == "exact":
                weight = Fraction(weight)
            else:
                weight = float(weight)
            kept.append((point, weight))
            total += weight
        if mode == "exact":
            if total != 1:
                raise ValueError(f"weights sum to {total}, expected exactly 1")
        elif abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1 within 1e-12")
        self.atoms: tuple[tuple[Any, Any], ...] = tuple(kept)
        self.mode = mode

    def __len__(self) -> int:
        return len(self.atoms)

    def points(self) -> list:
        return [p for p, _ in self.atoms]

    def weights(self) -> list:
        return [w for _, w in self.atoms]

    def total_mass(self):
        return sum(self.weights())

    def __repr__(self) -> str:  # pragma: no cover
        return f"FiniteMeasure({len(self.atoms)} atoms, mode={self.mode})"


def pushforward(
    f: Callable[[Any], Any],
    mu: FiniteMeasure,
    space: MetricSpace | None = None,
) -> FiniteMeasure:
    """Image measure; colliding image points are merged.

    With a metric, images within 1e-12 of an earlier image collapse onto it
    (greedy, in atom order); without one, only literal duplicates merge.
    """
    if space is None:
        return FiniteMeasure([(f(p), w) for p, w in mu.atoms], mode=mu.mode)
    reps: list[Any] = []
    merged: list[tuple[Any, Any]] = []
    for p, w in mu.atoms:
        q = f(p)
        for k, rep in enumerate(reps):
            if space.distance(rep, q) <= MERGE_TOLERANCE:
                merged[k] = (rep, merged[k][1] + w)
                break
        else:
            reps.append(q)
            merged.append((q, w))
    return FiniteMeasure(merged, mode=mu.mode)


def product_measure(mu: FiniteMeasure, nu: FiniteMeasure) -> FiniteMeasure:
    """Independent coupling: atoms are pairs, weights multiply."""
    mode = "exact" if (mu.mode == "exact" and nu.mode == "exact") else "float"
    atoms = [((p, q), wp * wq) for p, wp in mu.atoms for q, wq in nu.atoms]
    return FiniteMeasure(atoms, mode=mode)


# -- Levy-Prokhorov ------------------------------------------------------------

_subset_cache: dict[int, np.ndarray] = {}


def _subset_matrix(n: int) -> np.ndarray:
    """All 2^n indicator rows over n support points."""
    if n not in _subset_cache:
        masks = np.arange(1 << n, dtype=np.uint32)
        _subset_cache[n] = (masks[:, None] >> np.arange(n)[None, :]) & 1 > 0
    return _subset_cache[n]


def _one_sided_ok(
    eps: float,
    w_a: np.ndarray,
    w_b: np.ndarray,
    dist_ab: np.ndarray,
    subsets: np.ndarray,
) -> bool:
    """max_A [a(A) - b(A^eps)] <= eps over subsets A of supp(a)."""
    close = dist_ab <= eps
    mass_a = subsets @ w_a
    covered = subsets @ close.astype(np.float64) > 0.0
    mass_b = covered @ w_b
    return bool(np.max(mass_a - mass_b) <= eps)


def lp_distance(
    mu: FiniteMeasure,
    nu: FiniteMeasure,
    space: MetricSpace,
    precision: float = 1e-6,
) -> float:
    """Levy-Prokhorov distance, certified from above within ``precision``.

    Raises ValueError when either support exceeds MAX_SUPPORT points: the
    subset enumeration is exact but exponential.
    """
    if len(mu) > MAX_SUPPORT or len(nu) > MAX_SUPPORT:
        raise ValueError(
            f"supports of sizes {len(mu)}, {len(nu)} exceed the brute-force "
            f"cap of {MAX_SUPPORT}"
        )
    if precision <= 0:
        raise ValueError("precision must be positive")
    pm, pn = mu.points(), nu.points()
    wm = np.array([float(w) for w in mu.weights()])
    wn = np.array([float(w) for w in nu.weights()])
    dist = np.array([[float(space.distance(p, q)) for q in pn] for p in pm])
    if dist.size == 0:
        return 0.0
    subs_m = _subset_matrix(len(pm))
    subs_n = _subset_matrix(len(pn))

    def ok(eps: float) -> bool:
        return _one_sided_ok(eps, wm, wn, dist, subs_m) and _one_sided_ok(
            eps, wn, wm, dist.T, subs_n
        )

    if ok(0.0):  # equal measures: report exact zero, skip the bisection
        return 0.0
    lo, hi = 0.0, 1.0
    if not ok(hi):  # cannot happen for probability measures; guard anyway
        return 1.0
    iters = max(1, math.ceil(math.log2(1.0 / precision))) + 2
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= precision * 0.5:
            break
    return hi


# -- JSON interchange -----------------------------------------------------------


def _weight_to_jsonable(w) -> Any:
    if isinstance(w, Fraction):
        return str(w)
    return float(w)


def _point_to_jsonable(p: Any) -> Any:
    if isinstance(p, np.ndarray):
        return [float(x) for x in p.ravel()]
    if isinstance(p, (tuple, list)):
        return [_point_to_jsonable(x) for x in p]
    if isinstance(p, (int, float, np.integer, np.floating)):
        return float(p)
    return p


def measure_to_jsonable(mu: FiniteMeasure) -> list[dict]:
    return [
        {"point": _point_to_jsonable(p), "weight": _weight_to_jsonable(w)}
        for p, w in mu.atoms
    ]


def measure_from_jsonable(data: Sequence[dict]) -> FiniteMeasure:
    """Parse [{point, weight}] records; "p/q" strings give exact weights."""
    atoms: list[tuple[Any, Any]] = []
    for entry in data:
        point = entry["point"]
        if isinstance(point, list):
            point = tuple(float(x) for x in point)
        weight = entry["weight"]
        if isinstance(weight, str):
            weight = Fraction(weight)
        atoms.append((point, weight))
    return FiniteMeasure(atoms)

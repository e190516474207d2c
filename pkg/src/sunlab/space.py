"""Polyhedral normed spaces.

A space is described by a finite symmetric family F of linear functionals
(rows of a matrix). The norm of x is max_{f in F} f(x); symmetry makes this
the maximum of |f(x)| over one representative per antipodal pair. The family
plays the role of the extreme points of the dual unit sphere, so every other
object in the package (intervals, hulls, the associated norm, embeddings) is
phrased in terms of it.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import Degenerate, DimensionMismatch, NotSymmetric, TooLarge

DEFAULT_BUDGET = 2**20


def _canonical(rows: np.ndarray) -> np.ndarray:
    """Normalize -0.0 to +0.0 and sort rows lexicographically."""
    rows = np.where(rows == 0.0, 0.0, rows)
    order = np.lexsort(rows.T[::-1])
    return rows[order]


@dataclass(frozen=True, eq=False)
class Space:
    """A finite-dimensional space with a polyhedral norm.

    Attributes:
        dim: ambient dimension n.
        functionals: (k, n) array, canonically ordered, closed under negation.
        name: optional label used in reports.
        representatives: (k/2, n) array with one functional per antipodal
            pair (the member whose first nonzero entry is positive), in
            canonical order. Weight vectors and slab polytopes index these.
    """

    dim: int
    functionals: np.ndarray
    name: str = ""
    representatives: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        reps = self.functionals[_rep_mask(self.functionals)]
        object.__setattr__(self, "representatives", reps)
        self.functionals.setflags(write=False)
        reps.setflags(write=False)

    @property
    def n_pairs(self) -> int:
        return self.representatives.shape[0]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        label = self.name or f"{self.functionals.shape[0]} functionals"
        return f"Space(dim={self.dim}, {label})"


def _rep_mask(rows: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero entry is positive (pair representatives)."""
    first_nz = (rows != 0.0).argmax(axis=1)
    lead = rows[np.arange(rows.shape[0]), first_nz]
    return lead > 0


def make_space(functionals, name: str = "") -> Space:
    """Validate a functional family and build a Space.

    Raises NotSymmetric if the family is not closed under negation (or
    contains duplicates after canonical normalization), Degenerate if it does
    not span (equivalently, if the induced expression is not a norm), and
    DimensionMismatch for ragged input.
    """
    arr = np.asarray(functionals, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DimensionMismatch("functionals must form a nonempty 2d array")
    arr = _canonical(arr)
    n = arr.shape[1]

    seen: dict[bytes, int] = {}
    for i, row in enumerate(arr):
        key = row.tobytes()
        if key in seen:
            raise NotSymmetric(f"duplicate functional at rows {seen[key]} and {i}")
        seen[key] = i
    for row in arr:
        if not row.any():
            raise Degenerate("zero functional in family")
        neg = np.where(row == 0.0, 0.0, -row)
        if neg.tobytes() not in seen:
            raise NotSymmetric(f"family lacks the negation of {row.tolist()}")

    if np.linalg.matrix_rank(arr) < n:
        raise Degenerate("family does not positively span the dual space")
    return Space(dim=n, functionals=arr, name=name)


def builtin(name: str, n: int, budget: int = DEFAULT_BUDGET) -> Space:
    """Construct a standard space: 'linf' (coordinate functionals) or 'l1'
    (all sign vectors, 2**n functionals, subject to the budget)."""
    if n < 1:
        raise DimensionMismatch("dimension must be positive")
    if name == "linf":
        if 2 * n > budget:
            raise TooLarge(f"linf({n}) needs {2 * n} functionals, budget {budget}")
        eye = np.eye(n)
        fam = np.vstack([eye, -eye])
        return make_space(fam, name=f"linf({n})")
    if name == "l1":
        count = 2**n
        if count > budget:
            raise TooLarge(f"l1({n}) needs 2**{n} functionals, budget {budget}")
        fam = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
        return make_space(fam, name=f"l1({n})")
    raise ValueError(f"unknown builtin space {name!r}")


def random_space(dim: int, pairs: int, seed: int) -> Space:
    """A validated random polyhedral space.

    Directions are unit Euclidean vectors, so every functional is an extreme
    point of the dual ball (finite subsets of a sphere are in convex
    position) and the family is the genuine extreme set of its norm.
    """
    if pairs < dim:
        raise Degenerate(f"{pairs} pairs cannot span dimension {dim}")
    rng = np.random.default_rng(seed)
    while True:
        dirs = rng.normal(size=(pairs, dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        fam = np.vstack([dirs, -dirs])
        if np.linalg.matrix_rank(fam) == dim:
            return make_space(fam, name=f"random(dim={dim},pairs={pairs},seed={seed})")


def _check_vector(s: Space, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (s.dim,):
        raise DimensionMismatch(f"expected vector of length {s.dim}, got shape {arr.shape}")
    return arr


def norm(s: Space, x) -> float:
    """The polyhedral norm max_f f(x)."""
    return float(np.max(s.functionals @ _check_vector(s, x)))


def norms(s: Space, points: np.ndarray) -> np.ndarray:
    """Vectorized norm over the rows of `points`."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != s.dim:
        raise DimensionMismatch(f"expected (m, {s.dim}) array, got shape {pts.shape}")
    return np.max(np.abs(pts @ s.representatives.T), axis=1)


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


def ball_contains(s: Space, b: Ball, x, tol: float = 1e-12) -> bool:
    """Membership of x in the closed ball, with boundary tolerance."""
    return norm(s, _check_vector(s, x) - b.center) <= b.radius + tol


def space_to_json(s: Space) -> dict:
    return {
        "dim": s.dim,
        "functionals": [list(row) for row in s.functionals],
        "name": s.name,
    }


def space_from_json(data: dict) -> Space:
    try:
        fam = data["functionals"]
    except (KeyError, TypeError) as exc:
        raise DimensionMismatch("space JSON needs a 'functionals' array") from exc
    s = make_space(fam, name=str(data.get("name", "")))
    if "dim" in data and int(data["dim"]) != s.dim:
        raise DimensionMismatch(
            f"declared dim {data['dim']} does not match functionals of length {s.dim}"
        )
    return s


_BUILTIN_RE = re.compile(r"^(linf|l1)\(?(\d+)\)?$")


def space_from_name(text: str) -> Space:
    """Parse shorthand like 'linf2', 'l1(3)' into a builtin space."""
    m = _BUILTIN_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a builtin space name: {text!r}")
    return builtin(m.group(1), int(m.group(2)))


def unit_ball_extents(s: Space) -> np.ndarray:
    """Per-axis extent of the unit ball: R_i = max { |v_i| : ||v|| <= 1 }.

    Solved exactly as a linear program over the H-representation
    { v : F v <= 1 }. Used to size report grids, cached per space.
    """
    cached = getattr(s, "_extents", None)
    if cached is not None:
        return cached
    from scipy.optimize import linprog

    k = s.functionals.shape[0]
    ext = np.empty(s.dim)
    for i in range(s.dim):
        c = np.zeros(s.dim)
        c[i] = -1.0
        res = linprog(
            c,
            A_ub=s.functionals,
            b_ub=np.ones(k),
            bounds=[(None, None)] * s.dim,
            method="highs",
        )
        if res.status != 0:  # pragma: no cover - validated spaces are bounded
            raise Degenerate(f"unit ball extent LP failed along axis {i}: {res.message}")
        ext[i] = -res.fun
    ext.setflags(write=False)
    object.__setattr__(s, "_extents", ext)
    return ext

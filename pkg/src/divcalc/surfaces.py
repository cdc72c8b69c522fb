"""Named surface geometries and the numerics that depend on them.

A surface here is a lattice model plus a geometry tag: the Enriques lattice
(U perp E8(-1)), plane blow-ups sigma1..sigma9 with gram diag(1, -1, ..),
and two ruled models ("blq" with a -2 section, "blc6" and friends with a
-n section). Isotropic configurations are small sublattices spanned by
labeled isotropic classes with a supplied pairing table; the structure
lemmas work entirely inside these.

On top of the models: adjunction genus, Riemann-Roch chi, the residual
parity test, the minimal-pencil-degree invariant phi (certified inside a
configuration span, box-bounded elsewhere), the quasi-nef grading against
finite nodal sets, and scroll invariants of tetragonal curves.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass

from .errors import (
    ModelError,
    NodalClassError,
    NonCurveClassError,
    PhiBoundError,
    PhiInvariantError,
    RangeError,
)
from .lattice import (
    DivClass,
    LatticeModel,
    _ldl,
    determinant,
    isotropic_search,
    load_model,
    pair,
    vectors_of_norm,
)

_E8 = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)


@dataclass(frozen=True)
class SurfaceKind:
    """A geometry tag wrapped around its lattice model.

    tag is one of Enriques, SigmaN, BlQ, BlCn, Config, Custom; n carries
    the parameter where one exists (number of blown-up points, or the
    negative of the section's square on the ruled models).
    """

    tag: str
    model: LatticeModel
    n: int | None = None

    @property
    def name(self):
        return self.model.name

    def special_classes(self):
        out = {lab: self.model.basis_class(lab) for lab in self.model.labels}
        out["K"] = self.model.canonical_class
        return out

    def klass(self, coords):
        return self.model.klass(coords)


def _model_of(surface) -> LatticeModel:
    return surface.model if isinstance(surface, SurfaceKind) else surface


def enriques() -> SurfaceKind:
    """The full rank-10 even unimodular lattice, hyperbolic plane plus
    E8 negated. Canonical class is numerically trivial; no basis class is
    declared effective (positivity tests use caller-supplied classes)."""
    labels = ("U1", "U2") + tuple(f"R{i}" for i in range(1, 9))
    gram = [[0] * 10 for _ in range(10)]
    gram[0][1] = gram[1][0] = 1
    for i in range(8):
        for j in range(8):
            gram[2 + i][2 + j] = -_E8[i][j]
    model = LatticeModel(
        name="enriques",
        labels=labels,
        gram=tuple(tuple(r) for r in gram),
        canonical=(0,) * 10,
        chi=1,
        ample_ref=(1, 1) + (0,) * 8,
        kind="enriques",
    )
    return SurfaceKind("Enriques", model)


def sigma(n: int) -> SurfaceKind:
    """Blow-up of the plane at n points: diag(1, -1^n), K = -3H + sum Gi."""
    if not 1 <= n <= 9:
        raise ModelError("sigma(n) is shipped for n in 1..9")
    labels = ("H",) + tuple(f"G{i}" for i in range(1, n + 1))
    gram = tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n + 1))
        for i in range(n + 1)
    )
    # anticanonical is ample through n = 8; at n = 9 its square is 0, so
    # fall back to 4H - sum Gi (square 7, positive on every Gi and H)
    amp = (3,) + (-1,) * n if n <= 8 else (4,) + (-1,) * n
    model = LatticeModel(
        name=f"sigma{n}",
        labels=labels,
        gram=gram,
        canonical=(-3,) + (1,) * n,
        chi=1,
        ample_ref=amp,
        kind="sigma",
        effective_labels=labels,
    )
    return SurfaceKind("SigmaN", model, n=n)


def blq() -> SurfaceKind:
    """Ruled model with a section of square -2 (even intersection form)."""
    model = LatticeModel(
        name="blq",
        labels=("C0", "f"),
        gram=((-2, 1), (1, 0)),
        canonical=(-2, -4),
        chi=1,
        ample_ref=(1, 3),
        kind="ruled",
        effective_labels=("C0", "f"),
    )
    return SurfaceKind("BlQ", model, n=2)


def blcn(n: int) -> SurfaceKind:
    """Elliptic ruled model with a section of square -n, chi(O) = 0.

    K = -2C0 - nf here; the fixture with n = 6 pins this down via its
    curve class 2C0 + 12f, which must equal -2K - 2C0.
    """
    if n < 1:
        raise ModelError("blcn(n) needs n >= 1")
    model = LatticeModel(
        name=f"blc{n}",
        labels=("C0", "f"),
        gram=((-n, 1), (1, 0)),
        canonical=(-2, -n),
        chi=0,
        ample_ref=(1, n + 1),
        kind="blcn",
        effective_labels=("C0", "f"),
    )
    return SurfaceKind("BlCn", model, n=n)


_BUILTIN_NAMES = ["enriques", "blq", "blc6"] + [f"sigma{i}" for i in range(1, 10)]


def list_surfaces():
    return list(_BUILTIN_NAMES)


def get_surface(name: str) -> SurfaceKind:
    """Resolve a surface by builtin name, file path, or DIVCALC_SURFACE_PATH."""
    if name == "enriques":
        return enriques()
    if name == "blq":
        return blq()
    m = re.fullmatch(r"sigma([1-9])", name)
    if m:
        return sigma(int(m.group(1)))
    m = re.fullmatch(r"blc(\d+)", name)
    if m:
        return blcn(int(m.group(1)))
    if os.path.exists(name):
        return SurfaceKind("Custom", load_model(name))
    for d in os.environ.get("DIVCALC_SURFACE_PATH", "").split(os.pathsep):
        if not d:
            continue
        cand = os.path.join(d, name + ".json")
        if os.path.exists(cand):
            return SurfaceKind("Custom", load_model(cand))
    raise ModelError(
        f"unknown surface {name!r}; builtins are {', '.join(_BUILTIN_NAMES)}"
    )


# ---------------------------------------------------------------------------
# isotropic configurations


@dataclass(frozen=True)
class IsotropicConfig:
    """Labeled isotropic classes with a symmetric pairing table.

    The diagonal is zero by construction; off-diagonal pairings must be
    nonnegative (these classes play the role of effective isotropic
    decomposition pieces).
    """

    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ModelError("pairing table size does not match labels")
        for i in range(n):
            if self.table[i][i] != 0:
                raise ModelError("pairing table must have zero diagonal")
            for j in range(n):
                if self.table[i][j] != self.table[j][i]:
                    raise ModelError("pairing table must be symmetric")
                if self.table[i][j] < 0:
                    raise ModelError("pairing table entries must be >= 0")

    def to_surface(self, name="config") -> SurfaceKind:
        model = LatticeModel(
            name=name,
            labels=self.labels,
            gram=self.table,
            canonical=(0,) * len(self.labels),
            chi=1,
            ample_ref=None,
            kind="config",
            effective_labels=self.labels,
        )
        return SurfaceKind("Config", model)


def config_from_json_dict(doc) -> IsotropicConfig:
    try:
        labels = tuple(str(x) for x in doc["labels"])
        pairs = doc["pairs"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"bad config definition: {exc}") from exc
    n = len(labels)
    table = [[0] * n for _ in range(n)]
    for entry in pairs:
        i, j, v = (int(x) for x in entry)
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ModelError(f"bad pair entry {entry}")
        table[i][j] = table[j][i] = v
    return IsotropicConfig(labels, tuple(tuple(r) for r in table))


_BUILTIN_CONFIGS = {
    # two isotropic classes meeting once: spans the L^2 = 12 decompositions
    "pencil-pair-1": IsotropicConfig(("E", "E1"), ((0, 1), (1, 0))),
    # two isotropic classes meeting twice: L^2 = 12 variant and L^2 = 16
    "pencil-pair-2": IsotropicConfig(("E", "E1"), ((0, 2), (2, 0))),
    # three isotropic classes, pairwise product 1: the L^2 = 14 span
    "pencil-triple-1": IsotropicConfig(
        ("E", "E1", "E2"), ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    ),
}


def list_configs():
    return sorted(_BUILTIN_CONFIGS)


def get_config(name_or_path: str) -> IsotropicConfig:
    if name_or_path in _BUILTIN_CONFIGS:
        return _BUILTIN_CONFIGS[name_or_path]
    if os.path.exists(name_or_path):
        import json

        with open(name_or_path) as fh:
            return config_from_json_dict(json.load(fh))
    raise ModelError(
        f"unknown config {name_or_path!r}; builtins are {', '.join(list_configs())}"
    )


# ---------------------------------------------------------------------------
# genus / chi / parity


def genus(surface, C: DivClass) -> int:
    """Adjunction genus g = (C^2 + C.K)/2 + 1. Parity failure means the
    class cannot be a curve class and is an error."""
    model = _model_of(surface)
    K = model.canonical_class
    s = pair(C, C) + pair(C, K)
    if s % 2 != 0:
        raise NonCurveClassError(f"C^2 + C.K = {s} is odd, not a curve class")
    if s < -2:
        raise NonCurveClassError(f"C^2 + C.K = {s} < -2, not a curve class")
    return s // 2 + 1


def chi(surface, L: DivClass) -> int:
    """Euler characteristic chi(L) = chi(O) + L.(L - K)/2."""
    model = _model_of(surface)
    K = model.canonical_class
    s = pair(L, L) - pair(L, K)
    if s % 2 != 0:
        raise NonCurveClassError(f"L.(L - K) = {s} is odd; chi undefined")
    return model.chi + s // 2


def mod4_condition(L: DivClass, M: DivClass) -> bool:
    """Residual parity: 3 L^2 + M.L must be divisible by 4."""
    return (3 * pair(L, L) + pair(M, L)) % 4 == 0


# ---------------------------------------------------------------------------
# phi invariant


@dataclass(frozen=True)
class PhiResult:
    value: int
    witness: DivClass
    certified: bool
    notes: tuple[str, ...] = ()

    def to_json_dict(self):
        return {
            "value": self.value,
            "witness": list(self.witness.coords),
            "certified": self.certified,
            "notes": list(self.notes),
        }


def _kernel_basis(w):
    """Integer basis of {x : w.x = 0} as columns, via unimodular column ops."""
    r = len(w)
    w = list(w)
    basis = [[1 if i == j else 0 for j in range(r)] for i in range(r)]  # columns

    def col(j):
        return [basis[i][j] for i in range(r)]

    def addcol(dst, src, f):
        for i in range(r):
            basis[i][dst] -= f * basis[i][src]

    while True:
        nz = [j for j in range(r) if w[j] != 0]
        if len(nz) <= 1:
            break
        p = min(nz, key=lambda j: abs(w[j]))
        for q in nz:
            if q == p:
                continue
            f = w[q] // w[p]
            w[q] -= f * w[p]
            addcol(q, p, f)
    kernel_cols = [j for j in range(r) if w[j] == 0]
    return [col(j) for j in kernel_cols]


def phi(surface, L: DivClass, mode: str = "sublattice", box: int | None = None) -> PhiResult:
    """Minimal |F.L| over nonzero isotropic classes F.

    sublattice mode enumerates, for t = 1, 2, ..., the full slice
    {F isotropic, F.L = t}: such F correspond to vectors V = L^2 F - t L
    in the orthogonal complement of L, where the form is negative definite
    with V^2 = -t^2 L^2, a finite exact enumeration. The first slice with
    an integral F is the minimum, so the result is certified. The loop is
    capped at isqrt(L^2); exhausting it violates the invariant
    phi^2 <= L^2 and raises, which signals a span too sparse to be a
    genuine isotropic configuration.

    boxed mode scans coordinates in [-box, box] and is never certified;
    it raises PhiBoundError when the box cannot witness the invariant.
    """
    model = _model_of(surface)
    L2 = pair(L, L)
    if L2 <= 0:
        raise RangeError(f"phi needs L^2 > 0, got {L2}")

    if mode == "boxed":
        b = box if box is not None else (2 if model.rank >= 8 else 6)
        hits = isotropic_search(model, L, b)
        hits = [(F, v) for F, v in hits if v > 0] or hits
        if not hits:
            raise PhiBoundError(f"no nonzero isotropic class in box {b}")
        F, val = hits[0]
        if val * val > L2:
            raise PhiBoundError(
                f"box {b} only reaches |F.L| = {val} with {val}^2 > L^2 = {L2}; "
                "enlarge the box"
            )
        notes = ()
        if val == 0:
            notes = ("witness pairs to zero with L; degenerate configuration",)
        return PhiResult(val, F, certified=False, notes=notes)

    if mode != "sublattice":
        raise ModelError(f"unknown phi mode {mode!r}")

    if determinant(model.gram) == 0:
        raise ModelError("certified phi needs a nondegenerate model")
    gram = model.gram
    r = model.rank
    w = [sum(gram[i][j] * L.coords[j] for j in range(r)) for i in range(r)]
    K = _kernel_basis(w)  # r x (r-1) columns
    m = len(K)
    P = [
        [
            sum(K[a][i] * gram[i][j] * K[b][j] for i in range(r) for j in range(r))
            for b in range(m)
        ]
        for a in range(m)
    ]
    negP = [[-v for v in row] for row in P]
    if m and _ldl(negP) is None:
        raise ModelError(
            "certified phi needs signature (1, rank-1); "
            "the complement of L is not negative definite here"
        )

    iso_pairings = [
        abs(w[i]) for i in range(r) if gram[i][i] == 0 and w[i] != 0
    ]
    cap = math.isqrt(L2)
    tmax = min(min(iso_pairings), cap) if iso_pairings else cap
    for t in range(1, tmax + 1):
        N = t * t * L2
        for x in vectors_of_norm(negP, N) if m else []:
            # ambient V = K @ x, then F = (V + tL) / L^2 when integral
            V = [sum(K[a][i] * x[a] for a in range(m)) for i in range(r)]
            num = [v + t * c for v, c in zip(V, L.coords)]
            if all(n % L2 == 0 for n in num):
                F = model.klass([n // L2 for n in num])
                assert pair(F, F) == 0 and pair(F, L) == t
                return PhiResult(t, F, certified=True)
    raise PhiInvariantError(
        f"no isotropic class in the span pairs to at most isqrt(L^2) = {cap}; "
        "the configuration is too sparse to certify the invariant"
    )


# ---------------------------------------------------------------------------
# quasi-nef grading


@dataclass(frozen=True)
class QuasiNefResult:
    status: str  # nef | quasi_nef | violated
    min_pairing: int | None
    witness: DivClass | None
    notes: tuple[str, ...] = ()

    def to_json_dict(self):
        return {
            "status": self.status,
            "min_pairing": self.min_pairing,
            "witness": list(self.witness.coords) if self.witness else None,
            "notes": list(self.notes),
        }


def quasi_nef_test(L: DivClass, nodal_set) -> QuasiNefResult:
    """Grade L against the supplied nodal classes plus the model's
    declared effective basis classes.

    The verdict is relative to this finite pool; nef here means no
    negative pairing was found, not cone membership.
    """
    model = L.model
    pool = []
    for d in nodal_set:
        if pair(d, d) != -2:
            raise NodalClassError(
                f"nodal class {d.coords} has square {pair(d, d)}, expected -2"
            )
        pool.append(d)
    pool.extend(model.basis_class(lab) for lab in model.effective_labels)

    notes = []
    L2 = pair(L, L)
    if L2 < 0:
        notes.append(f"L^2 = {L2} < 0; cannot be quasi-nef geometrically")
    if not pool:
        notes.append("empty test pool; nef by absence of evidence")
        return QuasiNefResult("nef", None, None, tuple(notes))

    worst = min(pool, key=lambda d: (pair(L, d), d.coords))
    mp = pair(L, worst)
    if mp >= 0:
        status, witness = "nef", None
    elif mp == -1:
        status, witness = "quasi_nef", worst
    else:
        status, witness = "violated", worst

    if status in ("nef", "quasi_nef") and L2 == 0:
        prim, mult = L.primitive_part()
        if mult >= 2 and pair(prim, prim) == 0:
            notes.append(
                f"L is {mult} times a primitive isotropic class; "
                "h1 may be nonzero in the classification"
            )
        else:
            notes.append("h1 expected zero by the classification")
    elif status in ("nef", "quasi_nef") and L2 > 0:
        notes.append("h1 expected zero by the classification")
    return QuasiNefResult(status, mp, witness, tuple(notes))


# ---------------------------------------------------------------------------
# scroll invariants


@dataclass(frozen=True)
class ScrollInvariants:
    g: int
    b1: int
    b2: int
    degV: int
    degY: int
    pa_hyperplane: int
    n2_holds: bool

    def to_json_dict(self):
        return {
            "g": self.g,
            "b1": self.b1,
            "b2": self.b2,
            "degV": self.degV,
            "degY": self.degY,
            "pa_hyperplane": self.pa_hyperplane,
            "n2_holds": self.n2_holds,
        }


def scroll_invariants(g: int, b1: int) -> ScrollInvariants:
    """Invariants of the scroll swept by a pencil of degree 4 on a curve
    of genus g, splitting type (b1, b2) with b1 + b2 = g - 5.

    degY >= 2 pa + 3 (the quadratic-normality threshold) simplifies to
    b1 >= 1, which is asserted as an equivalence in tests.
    """
    if g < 6:
        raise RangeError("scroll invariants need g >= 6")
    b2 = g - 5 - b1
    if not (b1 >= b2 >= 0):
        raise RangeError(
            f"need b1 >= b2 >= 0; got b1 = {b1}, b2 = {b2} at g = {g}"
        )
    degY = g - 1 + b2
    pa = g - 4 - b1
    return ScrollInvariants(
        g=g,
        b1=b1,
        b2=b2,
        degV=g - 3,
        degY=degY,
        pa_hyperplane=pa,
        n2_holds=degY >= 2 * pa + 3,
    )

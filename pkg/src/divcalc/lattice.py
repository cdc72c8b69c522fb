"""Exact arithmetic on integral lattices with labeled bases.

The lattice is the whole data model here: a symmetric integer gram matrix,
a labeled basis, a canonical class and a reference ample class. Divisor
classes are integer coordinate vectors against that basis. Everything is
immutable and every operation is a pure function, so concurrent use needs
no locking.

All arithmetic is exact. Results are guarded against leaving the signed
64-bit envelope; desk-scale inputs never get close, but the guard turns a
silent wrap in some future caller into a loud error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    ModelError,
    ModelMismatchError,
    NodalClassError,
    OverflowGuardError,
)

I64_MAX = 2**63 - 1


def _check_i64(value, what="value"):
    if abs(value) > I64_MAX:
        raise OverflowGuardError(f"{what} {value} exceeds the 64-bit envelope")
    return value


@dataclass(frozen=True)
class LatticeModel:
    """An integral lattice: labeled basis, gram matrix, distinguished classes.

    kind tags the geometry family ("sigma", "ruled", "enriques", "config",
    "generic") and steers surface-specific behavior elsewhere; the lattice
    operations in this module ignore it. effective_labels lists the basis
    classes known to be effective divisors, used by positivity tests.
    """

    name: str
    labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    canonical: tuple[int, ...]
    chi: int
    ample_ref: tuple[int, ...] | None = None
    kind: str = "generic"
    effective_labels: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ModelError("model needs at least one basis label")
        if len(set(self.labels)) != n:
            raise ModelError("duplicate basis labels")
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise ModelError(f"gram must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                v = self.gram[i][j]
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ModelError("gram entries must be integers")
                _check_i64(v, "gram entry")
                if self.gram[i][j] != self.gram[j][i]:
                    raise ModelError("gram must be symmetric")
        if len(self.canonical) != n:
            raise ModelError("canonical class has wrong length")
        if self.ample_ref is not None and len(self.ample_ref) != n:
            raise ModelError("ample_ref has wrong length")
        unknown = set(self.effective_labels) - set(self.labels)
        if unknown:
            raise ModelError(f"effective_labels not in basis: {sorted(unknown)}")

    @property
    def rank(self):
        return len(self.labels)

    def zero(self):
        return DivClass(self, (0,) * self.rank)

    def basis_class(self, label):
        if label not in self.labels:
            raise ModelError(f"no basis label {label!r} in model {self.name}")
        i = self.labels.index(label)
        coords = tuple(1 if j == i else 0 for j in range(self.rank))
        return DivClass(self, coords)

    def klass(self, coords):
        """Build a DivClass from raw coordinates."""
        return DivClass(self, tuple(int(c) for c in coords))

    @property
    def canonical_class(self):
        return DivClass(self, self.canonical)

    @property
    def ample_class(self):
        if self.ample_ref is None:
            return None
        return DivClass(self, self.ample_ref)

    def to_json_dict(self):
        d = {
            "name": self.name,
            "basis": list(self.labels),
            "gram": [list(r) for r in self.gram],
            "canonical": list(self.canonical),
            "ample_ref": list(self.ample_ref) if self.ample_ref else None,
            "chi": self.chi,
        }
        if self.kind != "generic":
            d["kind"] = self.kind
        if self.effective_labels:
            d["effective"] = list(self.effective_labels)
        return d


def model_from_json_dict(d, name=None):
    try:
        labels = tuple(str(x) for x in d["basis"])
        gram = tuple(tuple(int(v) for v in row) for row in d["gram"])
        canonical = tuple(int(v) for v in d["canonical"])
        chi = int(d["chi"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"bad lattice definition: {exc}") from exc
    amp = d.get("ample_ref")
    return LatticeModel(
        name=name or d.get("name", "unnamed"),
        labels=labels,
        gram=gram,
        canonical=canonical,
        chi=chi,
        ample_ref=tuple(int(v) for v in amp) if amp else None,
        kind=str(d.get("kind", "generic")),
        effective_labels=tuple(d.get("effective", ())),
    )


def load_model(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_json_dict(doc)


@dataclass(frozen=True)
class DivClass:
    """An integer divisor class in a fixed LatticeModel.

    torsion_twist is a bookkeeping bit for numerically invisible torsion
    (the two lifts of an Enriques class differing by the canonical torsion
    element). It never affects any pairing.
    """

    model: LatticeModel = field(compare=False)
    coords: tuple[int, ...]
    torsion_twist: bool = False
    _model_name: str = field(default="", compare=True, repr=False)

    def __post_init__(self):
        if len(self.coords) != self.model.rank:
            raise ModelError("coordinate length does not match model rank")
        for c in self.coords:
            _check_i64(c, "coordinate")
        object.__setattr__(self, "_model_name", self.model.name)

    def _require_same_model(self, other):
        if self.model is not other.model and self.model.name != other.model.name:
            raise ModelMismatchError(
                f"classes live in different models "
                f"({self.model.name} vs {other.model.name})"
            )

    def __add__(self, other):
        self._require_same_model(other)
        return DivClass(
            self.model,
            tuple(_check_i64(a + b) for a, b in zip(self.coords, other.coords)),
        )

    def __sub__(self, other):
        self._require_same_model(other)
        return DivClass(
            self.model,
            tuple(_check_i64(a - b) for a, b in zip(self.coords, other.coords)),
        )

    def __neg__(self):
        return DivClass(self.model, tuple(-a for a in self.coords))

    def __rmul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return DivClass(self.model, tuple(_check_i64(n * a) for a in self.coords))

    __mul__ = __rmul__

    def dot(self, other):
        return pair(self, other)

    @property
    def square(self):
        return pair(self, self)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def primitive_part(self):
        """The class divided by the gcd of its coordinates, and that gcd.

        Returns (primitive, g) with self = g * primitive; the zero class
        returns (self, 0). Sign convention: the first nonzero coordinate of
        the primitive part is positive.
        """
        g = 0
        for c in self.coords:
            g = math.gcd(g, abs(c))
        if g == 0:
            return self, 0
        prim = tuple(c // g for c in self.coords)
        first = next(c for c in prim if c != 0)
        sign = 1
        if first < 0:
            prim = tuple(-c for c in prim)
            sign = -1
        return DivClass(self.model, prim), sign * g

    def with_twist(self, twist=True):
        return replace(self, torsion_twist=twist)


def pair(a: DivClass, b: DivClass) -> int:
    """Intersection pairing a . b, exact."""
    a._require_same_model(b)
    gram = a.model.gram
    total = 0
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        row = gram[i]
        total += ai * sum(row[j] * bj for j, bj in enumerate(b.coords) if bj)
    return _check_i64(total, "pairing")


def reflect_nodal(L: DivClass, delta: DivClass) -> DivClass:
    """Reflection of L in the wall of a nodal class (square -2).

    Returns L + (L.delta) * delta, the lattice reflection. Preserves all
    squares and is an involution.
    """
    if pair(delta, delta) != -2:
        raise NodalClassError(
            f"reflection class must have square -2, got {pair(delta, delta)}"
        )
    return L + pair(L, delta) * delta


# ---------------------------------------------------------------------------
# signature / determinant (exact, over Fractions)


def signature(gram) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric integer matrix.

    Congruence diagonalization over Q. A zero diagonal pivot with a live
    off-diagonal partner is repaired with the hyperbolic basis change
    e_i -> e_i +- e_j before eliminating.
    """
    n = len(gram)
    M = [[Fraction(v) for v in row] for row in gram]
    pos = neg = null = 0
    for i in range(n):
        if M[i][i] == 0:
            j = next((j for j in range(i + 1, n) if M[i][j] != 0), None)
            if j is None:
                null += 1
                continue
            # e_i += e_j gives diagonal 2*M[i][j] + M[j][j]; if that is
            # still zero, e_i -= e_j cannot be (both zero forces M[i][j]=0)
            s = 1 if 2 * M[i][j] + M[j][j] != 0 else -1
            for c in range(n):
                M[i][c] += s * M[j][c]
            for r in range(n):
                M[r][i] += s * M[r][j]
        p = M[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            if M[r][i] == 0:
                continue
            f = M[r][i] / p
            for c in range(n):
                M[r][c] -= f * M[i][c]
            for c in range(n):
                M[c][r] -= f * M[c][i]
    return pos, neg, null


def determinant(gram) -> int:
    n = len(gram)
    M = [[Fraction(v) for v in row] for row in gram]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            f = M[r][i] / M[i][i]
            for c in range(i, n):
                M[r][c] -= f * M[i][c]
    assert det.denominator == 1
    return int(det)


def is_nondegenerate(model: LatticeModel) -> bool:
    return determinant(model.gram) != 0


# ---------------------------------------------------------------------------
# Hodge-index filter


@dataclass(frozen=True)
class HodgeResult:
    outcome: str  # pass | equality_case | fail | fail_by_integrality
    lhs: int  # (L.C)^2
    rhs: int  # L^2 C^2
    lam: Fraction | None = None
    note: str = ""

    @property
    def keeps(self):
        return self.outcome in ("pass", "equality_case")


def hodge_compare(l2: int, c2: int, lc: int) -> str:
    """Sign-only comparison (L.C)^2 vs L^2 C^2 on abstract invariants.

    Callers with actual classes should use hodge_filter, which also settles
    the equality case by integral proportionality.
    """
    if l2 <= 0 or c2 <= 0:
        raise ModelError("hodge comparison needs L^2 > 0 and C^2 > 0")
    lhs, rhs = lc * lc, l2 * c2
    if lhs > rhs:
        return "pass"
    if lhs < rhs:
        return "fail"
    return "equality_case"


def hodge_filter(L: DivClass, C: DivClass) -> HodgeResult:
    """Test (L.C)^2 >= L^2 C^2 and settle equality by exact proportionality.

    Equality forces C = lambda L with lambda = (L.C)/L^2 over Q on any
    nondegenerate signature-(1,k) lattice; when that lambda does not carry
    C integrally onto a multiple of L the outcome is fail_by_integrality.
    Preconditions L^2 > 0 and C^2 > 0 are the caller's branch.
    """
    l2, c2, lc = pair(L, L), pair(C, C), pair(L, C)
    verdict = hodge_compare(l2, c2, lc)
    lhs, rhs = lc * lc, l2 * c2
    if verdict != "equality_case":
        return HodgeResult(verdict, lhs, rhs)
    lam = Fraction(lc, l2)
    if all(lam * a == c for a, c in zip(L.coords, C.coords)):
        return HodgeResult(
            "equality_case", lhs, rhs, lam,
            note=f"equality with integral proportionality C = {lam} L",
        )
    return HodgeResult(
        "fail_by_integrality", lhs, rhs, lam,
        note=f"equality holds but C = {lam} L has no integral solution",
    )


def in_positive_cone(D: DivClass) -> dict:
    """Necessary-condition proxy for lying in the closed positive cone.

    Checks D^2 >= 0 and D.ample_ref >= 0. This is not sufficient (the
    actual cone needs all curve pairings), so the result carries a note.
    """
    amp = D.model.ample_class
    ap = pair(D, amp) if amp is not None else None
    ok = pair(D, D) >= 0 and (ap is None or ap >= 0)
    return {
        "ok": ok,
        "square": pair(D, D),
        "ample_pairing": ap,
        "note": "necessary conditions only",
    }


# ---------------------------------------------------------------------------
# definite-lattice norm enumeration (used by isotropic/phi searches)


def _ldl(Q):
    """LDL data for a positive definite Fraction matrix, or None.

    Returns (D, U) with Q(x) = sum_i D[i] * (x_i + sum_{j>i} U[i][j] x_j)^2.
    """
    n = len(Q)
    A = [[Fraction(v) for v in row] for row in Q]
    D = [Fraction(0)] * n
    U = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = A[i][i]
        if d <= 0:
            return None
        D[i] = d
        for j in range(i + 1, n):
            U[i][j] = A[i][j] / d
        for r in range(i + 1, n):
            for c in range(r, n):
                A[r][c] -= A[i][r] * A[i][c] / d
        for r in range(i + 1, n):
            for c in range(i + 1, r):
                A[r][c] = A[c][r]
    return D, U


def _frac_isqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative Fraction."""
    if x < 0:
        return -1
    # floor(sqrt(p/q)) = isqrt(floor(p*q)) // q  is wrong in general;
    # bisect from the integer estimate instead.
    est = math.isqrt(x.numerator // x.denominator) if x >= 1 else 0
    while (est + 1) * (est + 1) <= x:
        est += 1
    while est * est > x:
        est -= 1
    return est


def vectors_of_norm(Q, N: int, coord_box: int | None = None):
    """All integer x with x^T Q x = N for positive definite integer Q.

    Plain branch-and-bound on the LDL form. Includes both x and -x;
    excludes nothing else. N = 0 yields only the zero vector, which is
    returned (callers filter). coord_box additionally clips every
    coordinate to [-coord_box, coord_box].
    """
    n = len(Q)
    ldl = _ldl(Q)
    if ldl is None:
        raise ModelError("vectors_of_norm needs a positive definite form")
    D, U = ldl
    out = []
    x = [0] * n

    def descend(i, budget):
        # budget = N - contribution of levels > i, exact Fraction/int
        if i < 0:
            if budget == 0:
                out.append(tuple(x))
            return
        s = sum(U[i][j] * x[j] for j in range(i + 1, n))
        # D[i] * (x_i + s)^2 <= budget
        half = _frac_isqrt(Fraction(budget) / D[i])
        lo = math.ceil(-s - half - 1)
        hi = math.floor(-s + half + 1)
        if coord_box is not None:
            lo = max(lo, -coord_box)
            hi = min(hi, coord_box)
        for xi in range(lo, hi + 1):
            term = D[i] * (xi + s) ** 2
            if term > budget:
                continue
            x[i] = xi
            descend(i - 1, budget - term)
        x[i] = 0

    descend(n - 1, Fraction(N))
    return sorted(out)


# ---------------------------------------------------------------------------
# isotropic vector search


def _components(gram):
    """Connected components of the basis graph (edges at nonzero pairings)."""
    n = len(gram)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(n):
                if not seen[w] and gram[v][w] != 0:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _subgram(gram, idx):
    return [[gram[i][j] for j in idx] for i in idx]


def _box_vectors_with_norms(gram, box):
    """Every vector in the box of a small component, bucketed by norm."""
    import itertools

    n = len(gram)
    buckets = {}
    for vec in itertools.product(range(-box, box + 1), repeat=n):
        q = sum(vec[i] * gram[i][j] * vec[j] for i in range(n) for j in range(n))
        buckets.setdefault(q, []).append(vec)
    return buckets


def isotropic_search(model: LatticeModel, target: DivClass, box_bound: int):
    """All nonzero F with coordinates in [-box, box] and F^2 = 0, as
    (F, |F.target|) pairs sorted by value then lexicographic coordinates.

    Small models are scanned directly. Larger ones (the rank-10 model) are
    split into orthogonal components; a definite component is enumerated by
    norm, restricted to the norm window the other components can cancel,
    which reaches exactly the same set as a full box scan.
    """
    import itertools

    if box_bound < 1:
        raise ModelError("box_bound must be >= 1")
    n = model.rank
    gram = model.gram

    if (2 * box_bound + 1) ** n <= 200_000:
        found = []
        for vec in itertools.product(range(-box_bound, box_bound + 1), repeat=n):
            if not any(vec):
                continue
            F = DivClass(model, vec)
            if pair(F, F) == 0:
                found.append((F, abs(pair(F, target))))
        found.sort(key=lambda fv: (fv[1], fv[0].coords))
        return found

    # idx, buckets (None until filled), min/max achievable norm, sign, sub
    infos = []
    for idx in comps_sorted(_components(gram)):
        sub = _subgram(gram, idx)
        p, ng, z = signature(sub)
        if z == 0 and (p == 0 or ng == 0) and len(idx) > 2:
            sign = 1 if ng == 0 else -1
            cap = sum(abs(v) for row in sub for v in row) * box_bound * box_bound
            infos.append([idx, None, min(0, sign * cap), max(0, sign * cap), sign, sub])
        else:
            if (2 * box_bound + 1) ** len(idx) > 2_000_000:
                raise ModelError(
                    "box too large for an indefinite component of this rank; "
                    "reduce box_bound"
                )
            buckets = _box_vectors_with_norms(sub, box_bound)
            infos.append(
                [idx, buckets, min(buckets), max(buckets), None, sub]
            )

    for info in infos:
        if info[4] is None:
            continue
        others_min = sum(o[2] for o in infos if o is not info)
        others_max = sum(o[3] for o in infos if o is not info)
        lo = max(info[2], -others_max)
        hi = min(info[3], -others_min)
        sign, sub = info[4], info[5]
        Q = [[sign * v for v in row] for row in sub]
        buckets = {}
        for q in range(lo, hi + 1):
            if q == 0:
                buckets[0] = [(0,) * len(sub)]
                continue
            if sign * q < 0:
                continue  # norm sign unreachable for this definiteness
            vecs = vectors_of_norm(Q, sign * q, coord_box=box_bound)
            if vecs:
                buckets[q] = vecs
        info[1] = buckets

    found = []

    def combine(ci, acc_norm, acc_coords):
        if ci == len(infos):
            if acc_norm == 0 and any(acc_coords):
                F = DivClass(model, tuple(acc_coords))
                found.append((F, abs(pair(F, target))))
            return
        idx, buckets = infos[ci][0], infos[ci][1]
        if ci == len(infos) - 1:
            items = [(-acc_norm, buckets.get(-acc_norm, []))]
        else:
            items = sorted(buckets.items())
        for q, vecs in items:
            for vec in vecs:
                coords = list(acc_coords)
                for pos, v in zip(idx, vec):
                    coords[pos] = v
                combine(ci + 1, acc_norm + q, coords)

    combine(0, 0, [0] * n)
    found.sort(key=lambda fv: (fv[1], fv[0].coords))
    return found


def comps_sorted(comps):
    return sorted(comps, key=lambda idx: idx[0])


# ---------------------------------------------------------------------------
# orthogonality criterion for pairs of (caller-asserted) effective classes


@dataclass(frozen=True)
class Lemma10Result:
    outcome: str  # positive | proportional_isotropic | violation
    product: int
    common_f: DivClass | None = None
    multipliers: tuple[int, int] | None = None
    note: str = ""


def check_lemma10(A: DivClass, B: DivClass) -> Lemma10Result:
    """Grade A.B for two classes the caller asserts are effective and of
    nonnegative square.

    positive when A.B > 0. When A.B = 0 the only consistent configuration
    is A and B being positive integer multiples of one primitive isotropic
    class; that witness is extracted by gcd. Anything else (A.B < 0, or a
    zero pairing with no witness) grades as violation, which signals the
    effectiveness assertion was wrong or the lattice is degenerate.
    """
    ab = pair(A, B)
    if ab > 0:
        return Lemma10Result("positive", ab)
    if ab < 0:
        return Lemma10Result("violation", ab, note="negative pairing")
    pa, ma = A.primitive_part()
    pb, mb = B.primitive_part()
    if ma == 0 or mb == 0:
        return Lemma10Result("violation", 0, note="zero class supplied")
    if pa.coords == pb.coords and ma > 0 and mb > 0 and pair(pa, pa) == 0:
        return Lemma10Result(
            "proportional_isotropic", 0, common_f=pa, multipliers=(ma, mb)
        )
    return Lemma10Result(
        "violation", 0,
        note="zero pairing without a common primitive isotropic class",
    )

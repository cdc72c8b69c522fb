"""Constrained decomposition searches over divisor lattices.

The central search: given a curve class C and a subscheme length k, find
every splitting C = L + M whose numeric invariants could carry a complete
base-point free pencil of degree k on a general curve in |C|. The filters
are the decomposition constraints (pairing bounds, residual degree, sign
conditions, the mod-4 residual parity where it applies, the index-theorem
comparison with exact equality resolution). Survivors the source analysis
goes on to kill by geometry are kept and flagged, never silently dropped;
the lattice can only prove what the lattice sees.

A second, fixed-size search grades the sixteen candidate destabilizing
splittings of a rank-2 bundle on the ruled quadric model.

The fixture catalog freezes the expected outcomes of both searches plus
the pairing identities of the three structure-lemma configurations, and
verify_case replays any of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .divexpr import render, resolve
from .errors import FixtureError, ModelError, RangeError
from .lattice import DivClass, hodge_filter, pair
from .surfaces import (
    SurfaceKind,
    get_config,
    get_surface,
    mod4_condition,
    phi,
    quasi_nef_test,
)

STRETCH = 4  # generosity factor on the ample-pairing envelope


@dataclass(frozen=True)
class Decomposition:
    L: DivClass
    M: DivClass
    z: int
    ML: int
    L2: int
    deg_D: int
    filter_trace: tuple[tuple[str, str], ...]
    notes: tuple[str, ...] = ()

    @property
    def expr(self):
        return render(self.L)

    def key(self):
        return (self.expr, self.z)

    def to_json_dict(self):
        return {
            "L": self.expr,
            "coords": list(self.L.coords),
            "z": self.z,
            "ML": self.ML,
            "L2": self.L2,
            "deg_D": self.deg_D,
            "notes": list(self.notes),
            "trace": [list(t) for t in self.filter_trace],
        }


@dataclass
class EnumerationResult:
    surface: str
    curve: str
    k: int
    mod4_applied: bool
    budget: int
    survivors: list[Decomposition]
    rejected: dict[str, int]
    visited: int

    def survivor_keys(self):
        return {d.key() for d in self.survivors}

    def to_json_dict(self):
        return {
            "surface": self.surface,
            "curve": self.curve,
            "k": self.k,
            "mod4": self.mod4_applied,
            "budget": self.budget,
            "survivors": [d.to_json_dict() for d in self.survivors],
            "rejected": dict(sorted(self.rejected.items())),
            "visited": self.visited,
        }


def _auto_mod4(model, C: DivClass) -> bool:
    """The residual parity constraint is tied to curves that are twice the
    anticanonical class linearly; numerically we can only see the class,
    so the default keys on coordinates and disables itself on the chi = 0
    ruled family. Explicit flags override this guess."""
    if model.kind == "blcn":
        return False
    minus2k = tuple(-2 * v for v in model.canonical)
    return C.coords == minus2k


def _stage_eval(surface, C, k, L, apply_mod4):
    """Run the staged filters on one candidate. Returns (decomp_or_None,
    trace); the trace stops at the first violated constraint."""
    model = surface.model
    trace = []
    C2 = pair(C, C)

    def passed(name, detail="pass"):
        trace.append((name, detail))

    def failed(name, detail):
        trace.append((name, f"fail: {detail}"))
        return None, trace

    if L.is_zero():
        return failed("nonzero", "zero class")
    passed("nonzero")

    if model.kind == "sigma":
        pairings = [pair(L, model.basis_class(lab)) for lab in model.labels]
        if any(v < 0 for v in pairings):
            return failed("sign", f"basis pairings {pairings} not all >= 0")
    elif model.kind in ("ruled", "blcn"):
        if any(c < 0 for c in L.coords):
            return failed("sign", f"coordinates {list(L.coords)} not all >= 0")
    else:
        negs = [
            lab
            for lab in model.effective_labels
            if pair(L, model.basis_class(lab)) < 0
        ]
        if negs:
            return failed("sign", f"negative pairing with effective {negs}")
    passed("sign")

    L2 = pair(L, L)
    if L2 < 0:
        return failed("L2_nonneg", f"L^2 = {L2}")
    passed("L2_nonneg")

    ML = pair(C, L) - L2
    if ML < L2:
        return failed("ML_ge_L2", f"M.L = {ML} < L^2 = {L2}")
    passed("ML_ge_L2")

    if ML > k:
        return failed("ML_le_k", f"M.L = {ML} > k = {k}")
    passed("ML_le_k")

    deg_D = L2 + ML - k
    if deg_D < 0:
        return failed("degD_nonneg", f"deg D = {deg_D}")
    passed("degD_nonneg")

    M = C - L
    if apply_mod4:
        if not mod4_condition(L, M):
            return failed("mod4", f"3 L^2 + M.L = {3 * L2 + ML} not in 4Z")
        passed("mod4")
    else:
        passed("mod4", "skip: parity flag off")

    notes = []
    if model.kind == "sigma":
        n = model.rank - 1
        a = L.coords[0]
        LK = pair(L, model.canonical_class)
        if (3 * a + LK) ** 2 > n * (a * a - L2):
            return failed(
                "cs2", f"(3a + L.K)^2 = {(3 * a + LK) ** 2} > n(a^2 - L^2)"
            )
        passed("cs2")

    if L2 > 0 and C2 > 0:
        h = hodge_filter(L, C)
        if not h.keeps:
            return failed("hodge", f"{h.outcome}: {h.lhs} vs {h.rhs}")
        detail = "pass" if h.outcome == "pass" else f"equality: {h.note}"
        passed("hodge", detail)
        if h.outcome == "equality_case":
            notes.append(h.note)
    else:
        passed("hodge", "skip: L^2 = 0")

    z = k - ML
    if z > 0:
        notes.append(f"residual subscheme of length {z}")
    dec = Decomposition(
        L=L, M=M, z=z, ML=ML, L2=L2, deg_D=deg_D,
        filter_trace=tuple(trace), notes=tuple(notes),
    )
    return dec, trace


def _candidates(surface: SurfaceKind, k: int, budget: int):
    """Sign-valid candidate coordinates within the ample-pairing budget.

    Retains every class that could pass the filters; cells outside the
    sign orthant or with obviously negative square are not visited
    (explain_candidate still traces any coordinates on demand).
    """
    model = surface.model
    if model.kind == "sigma":
        n = model.rank - 1
        a_cost = model.ample_ref[0]
        a_max = budget // a_cost
        for a in range(0, a_max + 1):
            rem0 = budget - a_cost * a
            stack = [((), rem0)]
            while stack:
                xs, rem = stack.pop()
                if len(xs) == n:
                    yield (a,) + tuple(-x for x in xs)
                    continue
                for x in range(0, min(a, rem) + 1):
                    stack.append((xs + (x,), rem - x))
    elif model.kind in ("ruled", "blcn"):
        for a in range(0, budget + 1):
            for b in range(0, budget - a + 1):
                yield (a, b)
    else:
        if model.rank > 6:
            raise ModelError(
                "decomposition search is not available on rank > 6 models "
                "outside the shipped surface families"
            )
        bound = 2 * k
        def rec(prefix):
            if len(prefix) == model.rank:
                yield prefix
                return
            for v in range(-bound, bound + 1):
                yield from rec(prefix + (v,))
        yield from rec(())


def enumerate_bogreider(
    surface: SurfaceKind,
    C: DivClass,
    k: int,
    mod4: bool | None = None,
    budget: int | None = None,
) -> EnumerationResult:
    """All decompositions C = L + M passing the numeric pencil filters.

    mod4 = None lets the fixture-style auto-detection decide (see
    _auto_mod4); fixtures pass their own flag explicitly. budget overrides
    the ample-pairing envelope (default STRETCH * 2k), which is generous:
    any survivor satisfies L.C <= 2k, well inside it. Survivors come back
    sorted by coordinates.
    """
    model = surface.model
    if k < 2:
        raise RangeError(f"pencil degree k must be >= 2, got {k}")
    if pair(C, C) < 0:
        raise ModelError(f"C^2 = {pair(C, C)} < 0 is not a curve class here")
    apply_mod4 = _auto_mod4(model, C) if mod4 is None else mod4
    if budget is None:
        budget = STRETCH * 2 * k

    survivors = []
    rejected = {}
    visited = 0
    for coords in _candidates(surface, k, budget):
        visited += 1
        L = model.klass(coords)
        dec, trace = _stage_eval(surface, C, k, L, apply_mod4)
        if dec is None:
            name = trace[-1][0]
            rejected[name] = rejected.get(name, 0) + 1
        else:
            survivors.append(dec)
    survivors.sort(key=lambda d: d.L.coords)
    return EnumerationResult(
        surface=model.name,
        curve=render(C),
        k=k,
        mod4_applied=apply_mod4,
        budget=budget,
        survivors=survivors,
        rejected=rejected,
        visited=visited,
    )


def explain_candidate(surface, C, k, coords, mod4: bool | None = None):
    """Full filter trace for one candidate, visited by the search or not."""
    model = surface.model
    apply_mod4 = _auto_mod4(model, C) if mod4 is None else mod4
    L = model.klass(coords)
    dec, trace = _stage_eval(surface, C, k, L, apply_mod4)
    return dec, list(trace)


def cs_filter(surface, L: DivClass) -> bool:
    """Sign conditions plus the coordinate-sanity inequality on a plane
    blow-up. Returns False for L^2 < 0 by convention (the caller's other
    filters reject those anyway)."""
    model = surface.model if isinstance(surface, SurfaceKind) else surface
    if model.kind != "sigma":
        raise ModelError("cs_filter applies to the sigma models")
    L2 = pair(L, L)
    if L2 < 0:
        return False
    pairings = [pair(L, model.basis_class(lab)) for lab in model.labels]
    if any(v < 0 for v in pairings):
        return False
    n = model.rank - 1
    a = pairings[0]
    LK = pair(L, model.canonical_class)
    return (3 * a + LK) ** 2 <= n * (a * a - L2)


# ---------------------------------------------------------------------------
# destabilizing splittings on the ruled quadric model


@dataclass(frozen=True)
class DestabCandidate:
    a: int
    a1: int
    A2: int
    B2: int
    AB: int
    lenW: int

    def to_json_dict(self):
        return {
            "a": self.a,
            "a1": self.a1,
            "A2": self.A2,
            "B2": self.B2,
            "AB": self.AB,
            "lenW": self.lenW,
        }


@dataclass
class DestabResult:
    survivors: list[DestabCandidate]
    grid: list[tuple[int, int, str]]  # (a, a1, "pass" | first violation)

    def survivor_cells(self):
        return {(c.a, c.a1) for c in self.survivors}

    def to_json_dict(self):
        return {
            "survivors": [c.to_json_dict() for c in self.survivors],
            "grid": [list(g) for g in self.grid],
        }


def enumerate_destab() -> DestabResult:
    """Grade the 16-cell grid of splittings A = a C0 + a1 f of the rank-2
    bundle with c1 = 4C0 + 7f and c2 = 4 on the ruled quadric model.

    A destabilizing A must satisfy, with B = c1 - A and lenW = 4 - A.B:
    A^2 + B^2 >= 16, A^2 > B^2, A^2 >= 10, a(a1 - a) >= 5, and B > 0
    (numeric proxy: B nonzero with no negative coordinate).
    """
    survivors = []
    grid = []
    for a in range(1, 5):
        for a1 in range(4, 8):
            A2 = 2 * a * (a1 - a)
            B2 = 2 * (4 - a) * (3 + a - a1)
            AB = 2 * a * a - a - 2 * a * a1 + 4 * a1
            lenW = 4 - AB
            b0, b1 = 4 - a, 7 - a1
            verdict = "pass"
            if A2 + B2 < 16:
                verdict = "ab: A^2 + B^2 < 16"
            elif A2 <= B2:
                verdict = "ab2: A^2 <= B^2"
            elif A2 < 10:
                verdict = "ab3: A^2 < 10"
            elif a * (a1 - a) < 5:
                verdict = "ab4: a(a1 - a) < 5"
            elif (b0, b1) == (0, 0) or b0 < 0 or b1 < 0:
                verdict = "Bpos: B = 0 or negative coordinate"
            elif lenW < 0:
                verdict = "lenW_nonneg: A.B > 4"
            grid.append((a, a1, verdict))
            if verdict == "pass":
                survivors.append(DestabCandidate(a, a1, A2, B2, AB, lenW))
    return DestabResult(survivors, grid)


# ---------------------------------------------------------------------------
# fixture catalog


@dataclass(frozen=True)
class CaseFixture:
    """One frozen case: either a pencil search, the destabilization grid,
    or a batch of pairing identities on a configuration span.

    expected holds (rendered L, z) pairs for pencil cases and
    ((a, a1), lenW) pairs for the destab case; golden names a shipped
    survivor file instead. killed lists survivors the source analysis
    eliminates by geometric arguments the lattice cannot express; their
    reasons are recorded verbatim as annotations.
    """

    case_id: str
    kind: str  # pencil | destab | identities
    surface: str | None = None
    curve: str | None = None
    k: int | None = None
    mod4: bool | None = None
    expected: tuple | None = None
    golden: str | None = None
    killed: tuple = ()
    identities: tuple = ()
    notes: tuple = ()


_KILL_H0_3 = "the restricted system has three sections (h0 = 3), not a pencil"

FIXTURES = {
    "g1kondelp-a": CaseFixture(
        case_id="g1kondelp-a",
        kind="pencil",
        surface="sigma1",
        curve="-2K",
        k=6,
        mod4=True,
        expected=(("H", 1),),
        killed=(("H", 1, _KILL_H0_3),),
        notes=("net classification is empty: the lone numeric survivor dies",),
    ),
    "g1kondelp-b": CaseFixture(
        case_id="g1kondelp-b",
        kind="pencil",
        surface="sigma2",
        curve="-2K",
        k=4,
        mod4=True,
        expected=(("H-G1", 0), ("H-G2", 0)),
    ),
    "g1kondelp-c": CaseFixture(
        case_id="g1kondelp-c",
        kind="pencil",
        surface="sigma2",
        curve="-2K",
        k=6,
        mod4=True,
        golden="g1kondelp-c.json",
        killed=(("H", 1, _KILL_H0_3),),
    ),
    "g1kondelp-d": CaseFixture(
        case_id="g1kondelp-d",
        kind="pencil",
        surface="sigma3",
        curve="-2K",
        k=4,
        mod4=True,
        expected=(("H-G1", 0), ("H-G2", 0), ("H-G3", 0)),
    ),
    "g1kondelp-e": CaseFixture(
        case_id="g1kondelp-e",
        kind="pencil",
        surface="sigma3",
        curve="-2K",
        k=5,
        mod4=True,
        golden="g1kondelp-e.json",
    ),
    "g1kondelp-f": CaseFixture(
        case_id="g1kondelp-f",
        kind="pencil",
        surface="sigma3",
        curve="-2K",
        k=6,
        mod4=True,
        golden="g1kondelp-f.json",
        killed=(
            ("H", 1, _KILL_H0_3),
            ("2H-G1-G2-G3", 1, _KILL_H0_3),
        ),
        notes=(
            "the anticanonical survivor meets the index bound with equality "
            "(C is twice the class); its residual series on the curve is "
            "another complete base-point free pencil of the same degree",
        ),
    ),
    "g1kondelp-g": CaseFixture(
        case_id="g1kondelp-g",
        kind="pencil",
        surface="blc6",
        curve="2C0+12f",
        k=4,
        mod4=False,
        expected=(("2f", 0),),
        notes=(
            "residual parity filter disabled on this model (chi = 0); "
            "the curve class here is -2K - 2C0, not -2K",
        ),
    ),
    "g1kondelp-h": CaseFixture(
        case_id="g1kondelp-h",
        kind="pencil",
        surface="blq",
        curve="-2K",
        k=4,
        mod4=True,
        expected=(("f", 0), ("C0+f", 0)),
        notes=(
            "both survivors restrict to the same pencil on the curve "
            "since C0.C = 0",
        ),
    ),
    "g1kondelp-i": CaseFixture(
        case_id="g1kondelp-i",
        kind="pencil",
        surface="blq",
        curve="-2K",
        k=6,
        mod4=True,
        golden="g1kondelp-i.json",
        notes=(
            "the survivor meets the index bound with equality "
            "(C is four times the class)",
        ),
    ),
    "g1kondelp-j": CaseFixture(
        case_id="g1kondelp-j",
        kind="destab",
        surface="blq",
        curve="4C0+7f",
        k=4,  # second Chern number of the bundle
        expected=(((3, 6), 1), ((3, 7), 3), ((4, 6), 0)),
        killed=(
            (
                "3C0+6f",
                1,
                "B = C0 + f: the induced subscheme lies on a section of the "
                "ruling and the restricted system 2f|C has four sections, "
                "a net of the wrong dimension",
            ),
            (
                "3C0+7f",
                3,
                "B = C0: the subscheme would lie in C0 meet C, which is "
                "empty because C0.C = 0",
            ),
            (
                "4C0+6f",
                0,
                "B = f: the induced system comes from the ruling with too "
                "many sections",
            ),
        ),
        notes=("all three numeric survivors die geometrically: no "
               "destabilizing splitting exists",),
    ),
    "lemmag7": CaseFixture(
        case_id="lemmag7",
        kind="identities",
        identities=(
            (
                "pencil-pair-1",
                (
                    ("square", "3E+2E1", 12),
                    ("pair", "E", "3E+2E1", 2),
                    ("phi", "3E+2E1", 2),
                    ("phi", "E+2E1", 1),
                ),
            ),
            (
                "pencil-pair-2",
                (
                    ("square", "3E+E1", 12),
                    ("pair", "E", "3E+E1", 2),
                    ("phi", "3E+E1", 2),
                    ("phi", "E+E1", 2),
                ),
            ),
        ),
        notes=(
            "the two spans realize the two possible values of the pencil "
            "invariant of the complement L - 2E",
        ),
    ),
    "lemmag8": CaseFixture(
        case_id="lemmag8",
        kind="identities",
        identities=(
            (
                "pencil-triple-1",
                (
                    ("square", "3E+E1+E2", 14),
                    ("pair", "E", "3E+E1+E2", 2),
                    ("pair", "E+E1", "3E+E1+E2", 6),
                    ("pair", "2E+E2", "3E+E1+E2", 8),
                    ("phi", "3E+E1+E2", 2),
                    ("qnef", "2E+E2", ("E2-E1",), "quasi_nef"),
                ),
            ),
        ),
        notes=(
            "the nodal alternative: a class pairing (0, 1, -1) with "
            "(E, E1, E2) grades 2E + E2 as quasi-nef, not nef",
        ),
    ),
    "lemmag9": CaseFixture(
        case_id="lemmag9",
        kind="identities",
        identities=(
            (
                "pencil-pair-2",
                (
                    ("square", "4E+E1", 16),
                    ("pair", "E", "4E+E1", 2),
                    ("phi", "4E+E1", 2),
                ),
            ),
        ),
        notes=(
            "when the complement E1 has nonvanishing h1 after the "
            "canonical twist, it is twice a primitive isotropic class "
            "pairing 1 with E; recorded as an annotation only",
        ),
    ),
}


def load_golden(name: str) -> dict:
    path = resources.files("divcalc") / "data" / "golden" / name
    return json.loads(path.read_text())


def fixture_catalog_json() -> str:
    out = {}
    for cid, fx in FIXTURES.items():
        out[cid] = {
            "kind": fx.kind,
            "surface": fx.surface,
            "curve": fx.curve,
            "k": fx.k,
            "mod4": fx.mod4,
            "expected": list(fx.expected) if fx.expected else None,
            "golden": fx.golden,
            "killed": [list(x) for x in fx.killed],
            "notes": list(fx.notes),
        }
    return json.dumps(out, indent=2, default=list)


@dataclass
class CaseReport:
    case_id: str
    status: str  # PASS | FAIL
    survivors: list
    expected: list
    killed: list
    trace: list
    notes: tuple = ()

    def to_json_dict(self):
        return {
            "case": self.case_id,
            "status": self.status,
            "survivors": self.survivors,
            "expected": self.expected,
            "killed": [list(x) for x in self.killed],
            "trace": self.trace,
            "notes": list(self.notes),
        }


def _expected_pencil_set(fx: CaseFixture):
    if fx.golden:
        doc = load_golden(fx.golden)
        surf = get_surface(doc["surface"])
        return {
            (render(surf.model.klass(s["coords"])), s["z"])
            for s in doc["survivors"]
        }
    return set(fx.expected)


def verify_case(case_id: str, budget: int | None = None) -> CaseReport:
    """Replay one fixture and grade the outcome PASS or FAIL.

    On a pencil mismatch the report's trace explains, per differing
    candidate, which filter ruled (or failed to rule) on it.
    """
    if case_id not in FIXTURES:
        raise FixtureError(
            f"unknown case {case_id!r}; shipped: {', '.join(sorted(FIXTURES))}"
        )
    fx = FIXTURES[case_id]
    trace = []

    if fx.kind == "pencil":
        surf = get_surface(fx.surface)
        C = resolve(fx.curve, surf)
        res = enumerate_bogreider(surf, C, fx.k, mod4=fx.mod4, budget=budget)
        got = res.survivor_keys()
        want = _expected_pencil_set(fx)
        status = "PASS" if got == want else "FAIL"
        for expr, z in sorted(want - got):
            _, t = explain_candidate(
                surf, C, fx.k, resolve(expr, surf).coords, mod4=fx.mod4
            )
            trace.append(f"missing ({expr}, z={z}): {t}")
        for expr, z in sorted(got - want):
            trace.append(f"unexpected survivor ({expr}, z={z})")
        if status == "PASS":
            trace.append(
                f"{len(got)} survivor(s) match; "
                f"{sum(res.rejected.values())} candidates rejected"
            )
        return CaseReport(
            case_id, status, sorted(got), sorted(want), list(fx.killed),
            trace, fx.notes,
        )

    if fx.kind == "destab":
        res = enumerate_destab()
        got = res.survivor_cells()
        want = {cell for cell, _w in fx.expected}
        ok = got == want
        for c in res.survivors:
            id1 = c.AB + c.lenW == 4
            id2 = (c.A2 + c.B2 - 2 * c.AB) == 8 + 4 * c.lenW
            lw = dict(fx.expected).get((c.a, c.a1))
            ok = ok and id1 and id2 and lw == c.lenW
            trace.append(
                f"({c.a},{c.a1}): A2={c.A2} B2={c.B2} A.B={c.AB} "
                f"lenW={c.lenW} identities={'ok' if id1 and id2 else 'BAD'}"
            )
        status = "PASS" if ok else "FAIL"
        return CaseReport(
            case_id, status,
            sorted([list(cell) + [c.lenW] for cell, c in
                    zip(sorted(got), sorted(res.survivors, key=lambda x: (x.a, x.a1)))]),
            sorted([list(cell) + [w] for cell, w in fx.expected]),
            list(fx.killed), trace, fx.notes,
        )

    # identities
    all_ok = True
    results = []
    for config_name, checks in fx.identities:
        surf = get_config(config_name).to_surface(config_name)
        for chk in checks:
            tag = chk[0]
            if tag == "square":
                _, expr, want = chk
                got = pair(resolve(expr, surf), resolve(expr, surf))
                line = f"[{config_name}] ({expr})^2 = {got}, expected {want}"
            elif tag == "pair":
                _, ea, eb, want = chk
                got = pair(resolve(ea, surf), resolve(eb, surf))
                line = f"[{config_name}] ({ea}).({eb}) = {got}, expected {want}"
            elif tag == "phi":
                _, expr, want = chk
                got = phi(surf, resolve(expr, surf)).value
                line = f"[{config_name}] phi({expr}) = {got}, expected {want}"
            elif tag == "qnef":
                _, expr, nodal, want = chk
                got = quasi_nef_test(
                    resolve(expr, surf), [resolve(nd, surf) for nd in nodal]
                ).status
                line = (
                    f"[{config_name}] quasi-nef({expr} vs {list(nodal)}) = "
                    f"{got}, expected {want}"
                )
            else:
                raise FixtureError(f"unknown identity check {tag!r}")
            ok = got == want
            all_ok = all_ok and ok
            trace.append(line + ("" if ok else "  <= MISMATCH"))
            results.append([line, ok])
    status = "PASS" if all_ok else "FAIL"
    return CaseReport(case_id, status, [], [], list(fx.killed), trace, fx.notes)


def verify_all(budget: int | None = None):
    return [verify_case(cid, budget=budget) for cid in FIXTURES]

"""Surjectivity criteria and corank bounds for Gaussian maps on curves.

Everything here is a hypothesis checker: cohomology counts (h0, h1, the
corank of the multiplication map) are inputs supplied by the caller, and
the verdict cites the rule it applied. Nothing computes curve cohomology;
when the evidence on hand decides no rule either way, the verdict is
NO_CONCLUSION and the notes say which inequality fell short.

The checkers never guess: a SURJECTIVE verdict always names its rule, and
re-evaluating that rule's literal inequalities on the echoed inputs must
pass (the test suite audits this).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EvidenceError, RangeError

# Degree counts far beyond the canonical range are almost certainly typos;
# the slack leaves room for the large-degree corollaries (4g - 4 plus a
# couple of twists).
DEG_SANITY_SLACK = 16

AUX_KEYS = frozenset({"3K-M", "4K-M", "5A-M", "4A-M", "3K-(g-4)A-M", "-M"})

GENERAL_MEMBER = "general member of |L|"
NONHYPERELLIPTIC = "C nonhyperelliptic"


def _check_count(name, value, minimum=0):
    if value is None:
        return
    if not isinstance(value, int) or isinstance(value, bool):
        raise RangeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise RangeError(f"{name} must be >= {minimum}, got {value}")


@dataclass(frozen=True)
class GaussianInput:
    """Evidence bundle for the Gaussian-map checkers.

    g is the curve genus. Optional fields left as None count as missing
    evidence, never as zero. h0_residual is the section count of the
    branch-dependent residual twist (the checker's notes say which twist
    it read it as). aux_h0 carries the low-genus inputs under the keys
    3K-M, 4K-M, 5A-M, 4A-M, 3K-(g-4)A-M and -M.
    """

    g: int
    L2: int | None = None
    phi: int | None = None
    degM: int | None = None
    h1M: int | None = None
    h0_2K_minus_M: int | None = None
    h0_residual: int | None = None
    cliff: int | None = None
    cork_mu: int | None = None
    aux_h0: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_count("g", self.g, minimum=2)
        _check_count("degM", self.degM)
        _check_count("h1M", self.h1M)
        _check_count("h0_2K_minus_M", self.h0_2K_minus_M)
        _check_count("h0_residual", self.h0_residual)
        _check_count("cliff", self.cliff)
        _check_count("cork_mu", self.cork_mu)
        if self.L2 is not None and self.L2 % 2 != 0:
            raise RangeError(f"L2 must be even on these lattices, got {self.L2}")
        if self.phi is not None:
            _check_count("phi", self.phi, minimum=1)
            if self.L2 is not None and self.phi**2 > self.L2:
                raise RangeError(
                    f"phi^2 = {self.phi ** 2} exceeds L2 = {self.L2}"
                )
        bad = set(self.aux_h0) - AUX_KEYS
        if bad:
            raise RangeError(
                f"unknown aux_h0 keys {sorted(bad)}; "
                f"known: {sorted(AUX_KEYS)}"
            )
        for key, val in self.aux_h0.items():
            _check_count(f"aux_h0[{key}]", val)
        if self.degM is not None:
            cap = 4 * self.g - 4 + DEG_SANITY_SLACK
            if self.degM > cap:
                raise RangeError(
                    f"degM = {self.degM} is implausibly large for genus "
                    f"{self.g} (cap {cap})"
                )

    def echo(self) -> dict:
        out = {"g": self.g}
        for name in (
            "L2", "phi", "degM", "h1M", "h0_2K_minus_M",
            "h0_residual", "cliff", "cork_mu",
        ):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.aux_h0:
            out["aux_h0"] = dict(sorted(self.aux_h0.items()))
        return out


@dataclass
class GaussianVerdict:
    status: str  # SURJECTIVE | CORANK_BOUND | NO_CONCLUSION
    rule: str
    bound: int | None = None
    qualifiers: tuple = ()
    notes: tuple = ()
    inputs_echo: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == "SURJECTIVE" and not self.rule:
            raise ValueError("a SURJECTIVE verdict must cite its rule")
        if self.status == "CORANK_BOUND" and self.bound is None:
            raise ValueError("a CORANK_BOUND verdict must carry the bound")

    @property
    def status_label(self) -> str:
        if self.status == "CORANK_BOUND":
            return f"CORANK_BOUND({self.bound})"
        return self.status

    def to_json_dict(self):
        return {
            "status": self.status_label,
            "rule": self.rule,
            "qualifiers": list(self.qualifiers),
            "notes": list(self.notes),
            "inputs_echo": self.inputs_echo,
        }


# ---------------------------------------------------------------------------
# gonality and Clifford helpers

_GON_SPORADIC = {(30, 5), (22, 4), (20, 4), (14, 3), (12, 3), (6, 2)}


def gonality(L2: int, phi: int, not_2D_special: bool = True) -> int:
    """Gonality of a general curve with the given square and pencil
    invariant on an Enriques surface.

    The generic value is 2 phi; three exceptional patterns lower it. The
    flag excludes the one ambiguous shape in pattern (b) (a class twice a
    square-10 class of pencil invariant 3) that the two numbers alone
    cannot detect; it defaults to the generic (excluded) situation.
    """
    if L2 <= 0:
        raise RangeError(f"L2 must be positive, got {L2}")
    if phi < 1:
        raise RangeError(f"phi must be >= 1, got {phi}")
    if phi * phi > L2:
        raise RangeError(
            f"phi^2 = {phi * phi} > L2 = {L2} contradicts the pencil "
            "invariant bound"
        )
    if L2 == phi * phi and phi >= 2 and phi % 2 == 0:
        return 2 * phi - 2
    if L2 == phi * phi + phi - 2 and phi >= 3 and not_2D_special:
        if phi in (3, 4):
            return 2 * phi - 2
        return 2 * phi - 1
    if (L2, phi) in _GON_SPORADIC:
        return L2 // 4 + 2
    return 2 * phi


def clifford_of_series(d: int, h0: int) -> int:
    """Clifford contribution deg A - 2(h0(A) - 1) of a series of degree d
    with h0 sections."""
    if h0 < 1:
        raise RangeError(f"h0 must be >= 1, got {h0}")
    if d < 0:
        raise RangeError(f"degree must be >= 0, got {d}")
    return d - 2 * (h0 - 1)


def cliff_upper_bound(g: int) -> int:
    """The general upper bound floor((g - 1) / 2) on the Clifford index."""
    if g < 4:
        raise RangeError(f"g must be >= 4, got {g}")
    return (g - 1) // 2


# ---------------------------------------------------------------------------
# the main surjectivity criterion

_BRANCH_TWISTS = {
    "i": "4L|C - M",
    "ii": "(3L+K)|C - M",
    "iii": "2L|C - M",
    "iv": "2L|C - M",
    "v": "2L|C - M",
}


def check_main_theorem(inp: GaussianInput) -> GaussianVerdict:
    """The five-branch surjectivity criterion for curves on an Enriques
    surface, tried in order (i)..(v); the first satisfied branch names
    the rule and any other satisfied branches land in the notes.

    Branches (i)-(iv) read (L2, h0_residual); branch (v) reads
    (h1M, degM, L2, cliff, h0_residual). Evidence left None makes a
    branch unevaluable, never satisfied; if no branch is evaluable the
    checker refuses with the list of missing fields.
    """
    if inp.L2 is None:
        raise EvidenceError(
            "the criterion needs the curve class square", missing=("L2",)
        )
    L2 = inp.L2
    if L2 < 4 or L2 % 2 != 0:
        raise RangeError(f"L2 must be even and >= 4, got {L2}")

    res = inp.h0_residual
    half_plus_2 = L2 // 2 + 2

    branches = []  # (id, evaluable, satisfied, miss_note)
    if res is None:
        for bid in ("i", "ii", "iii", "iv"):
            branches.append((bid, False, False, "h0_residual missing"))
    else:
        branches.append(("i", True, L2 == 4 and res == 0,
                         f"needs L2 = 4 and h0 = 0 (have {L2}, {res})"))
        branches.append(("ii", True, L2 == 6 and res == 0,
                         f"needs L2 = 6 and h0 = 0 (have {L2}, {res})"))
        branches.append(("iii", True, L2 >= 8 and res == 0,
                         f"needs L2 >= 8 and h0 = 0 (have {L2}, {res})"))
        branches.append(("iv", True, L2 >= 12 and res == 1,
                         f"needs L2 >= 12 and h0 = 1 (have {L2}, {res})"))

    v_missing = [
        n for n, v in (
            ("h1M", inp.h1M), ("degM", inp.degM),
            ("cliff", inp.cliff), ("h0_residual", res),
        ) if v is None
    ]
    if v_missing:
        branches.append(("v", False, False, f"missing {', '.join(v_missing)}"))
    else:
        sat = (
            inp.h1M == 0
            and inp.degM >= half_plus_2
            and half_plus_2 >= 6
            and res <= inp.cliff - 2
        )
        branches.append((
            "v", True, sat,
            f"needs h1(M) = 0, degM >= {half_plus_2} >= 6 and "
            f"h0 <= cliff - 2 = {inp.cliff - 2} "
            f"(have h1M = {inp.h1M}, degM = {inp.degM}, h0 = {res})",
        ))

    if not any(ev for _, ev, _, _ in branches):
        missing = sorted({m for _, ev, _, m in branches if not ev})
        raise EvidenceError(
            "no branch of the criterion is evaluable with the given "
            "evidence: " + "; ".join(missing),
            missing=tuple(missing),
        )

    satisfied = [bid for bid, ev, sat, _ in branches if ev and sat]
    echo = inp.echo()
    if satisfied:
        first = satisfied[0]
        notes = [f"residual twist read as h0({_BRANCH_TWISTS[first]})"]
        if first == "ii":
            notes.append(
                "the twist differs from 3L|C by the torsion class only; "
                "numerically identical, recorded as an annotation"
            )
        if len(satisfied) > 1:
            notes.append(
                "also satisfied: " + ", ".join(f"({b})" for b in satisfied[1:])
            )
        return GaussianVerdict(
            status="SURJECTIVE",
            rule=f"main-({first})",
            qualifiers=(GENERAL_MEMBER,),
            notes=tuple(notes),
            inputs_echo=echo,
        )

    near = [
        f"({bid}) {miss}" for bid, ev, sat, miss in branches if ev and not sat
    ]
    skipped = [
        f"({bid}) not evaluable: {miss}"
        for bid, ev, sat, miss in branches if not ev
    ]
    return GaussianVerdict(
        status="NO_CONCLUSION",
        rule="main",
        notes=tuple(near + skipped),
        inputs_echo=echo,
    )


# ---------------------------------------------------------------------------
# Clifford-index criterion and the high-degree consequences


def check_cliff_criterion(cliff: int, h0_2K_minus_M: int) -> GaussianVerdict:
    """Surjectivity from the Clifford index alone: index exactly 2 with
    h0(2K - M) = 0, or index >= 3 with h0(2K - M) <= 1."""
    if cliff < 2:
        raise RangeError(
            f"the criterion assumes Clifford index >= 2, got {cliff}"
        )
    _check_count("h0_2K_minus_M", h0_2K_minus_M)
    echo = {"cliff": cliff, "h0_2K_minus_M": h0_2K_minus_M}
    if cliff == 2 and h0_2K_minus_M == 0:
        return GaussianVerdict("SURJECTIVE", "cliff-(i)", inputs_echo=echo)
    if cliff >= 3 and h0_2K_minus_M <= 1:
        return GaussianVerdict("SURJECTIVE", "cliff-(ii)", inputs_echo=echo)
    return GaussianVerdict(
        "NO_CONCLUSION", "cliff",
        notes=(
            f"falls between the branches: cliff = {cliff}, "
            f"h0(2K - M) = {h0_2K_minus_M}",
        ),
        inputs_echo=echo,
    )


def check_bel(
    g: int, degM: int, h1M: int, h0_2K_minus_M: int, cliff: int
) -> GaussianVerdict:
    """Surjectivity for degM >= g + 1: needs h1(M) = 0 and
    h0(2K - M) <= cliff - 2 (so in particular cliff >= 2)."""
    if g < 4:
        raise RangeError(f"g must be >= 4, got {g}")
    for name, v in (("degM", degM), ("h1M", h1M),
                    ("h0_2K_minus_M", h0_2K_minus_M), ("cliff", cliff)):
        _check_count(name, v)
    echo = {
        "g": g, "degM": degM, "h1M": h1M,
        "h0_2K_minus_M": h0_2K_minus_M, "cliff": cliff,
    }
    fails = []
    if h1M != 0:
        fails.append(f"h1(M) = {h1M} != 0")
    if degM < g + 1:
        fails.append(f"degM = {degM} < g + 1 = {g + 1}")
    if h0_2K_minus_M > cliff - 2:
        fails.append(
            f"h0(2K - M) = {h0_2K_minus_M} > cliff - 2 = {cliff - 2}"
        )
    if not fails:
        return GaussianVerdict("SURJECTIVE", "bel2", inputs_echo=echo)
    return GaussianVerdict(
        "NO_CONCLUSION", "bel2", notes=tuple(fails), inputs_echo=echo
    )


def _need_aux(inp: GaussianInput, key: str) -> int:
    if key not in inp.aux_h0:
        raise EvidenceError(
            f"this branch needs aux_h0[{key!r}]", missing=(f"aux_h0[{key}]",)
        )
    return inp.aux_h0[key]


def corank_low_genus(
    inp: GaussianInput,
    plane_quintic: bool = False,
    trigonal: bool = False,
    nontrigonal: bool = False,
) -> GaussianVerdict:
    """Corank bounds for nonhyperelliptic curves of genus 3, 4, 5, for
    plane quintics, and for trigonal curves of genus >= 5.

    The three low-genus branches read cork_mu, h1M and the relevant
    section counts and clamp a negative formula value to 0 with an audit
    note; equality holds when h0(-M) = 0, so the verdict records it when
    aux_h0["-M"] is supplied as 0. The quintic and trigonal branches turn
    a vanishing residual count into outright surjectivity; their corank
    bounds additionally need h1(M) = 0 and a surjective multiplication
    map (cork_mu = 0).
    """
    if plane_quintic and trigonal:
        raise RangeError("a plane quintic is not trigonal; pick one flag")
    if trigonal and nontrigonal:
        raise RangeError("trigonal and nontrigonal flags conflict")
    g = inp.g
    echo = inp.echo()
    quals = (NONHYPERELLIPTIC,)

    if plane_quintic:
        if g != 6:
            raise RangeError(f"a smooth plane quintic has genus 6, got {g}")
        h5 = _need_aux(inp, "5A-M")
        if h5 == 0:
            return GaussianVerdict(
                "SURJECTIVE", "low-(d)",
                qualifiers=quals,
                notes=("h0(5A - M) = 0 forces surjectivity",),
                inputs_echo=echo,
            )
        if inp.h1M == 0 and inp.cork_mu == 0:
            notes = [f"cork >= h0(5A - M) = {h5}"]
            h4 = inp.aux_h0.get("4A-M")
            if h4 is not None and h4 <= 1:
                notes.append(f"equality holds: h0(4A - M) = {h4} <= 1")
            elif h4 is None:
                notes.append("equality condition h0(4A - M) <= 1 untested")
            return GaussianVerdict(
                "CORANK_BOUND", "low-(d)", bound=h5,
                qualifiers=quals, notes=tuple(notes), inputs_echo=echo,
            )
        return GaussianVerdict(
            "NO_CONCLUSION", "low-(d)",
            notes=(
                "the bound needs h1(M) = 0 and cork mu = 0 "
                f"(have h1M = {inp.h1M}, cork_mu = {inp.cork_mu})",
            ),
            inputs_echo=echo,
        )

    if trigonal:
        if g < 5:
            raise RangeError(f"the trigonal branch needs g >= 5, got {g}")
        h3 = _need_aux(inp, "3K-(g-4)A-M")
        h2k = inp.h0_2K_minus_M
        if h2k is not None and h2k <= 1 and h3 == 0:
            return GaussianVerdict(
                "SURJECTIVE", "low-(e)",
                qualifiers=quals,
                notes=(
                    f"h0(2K - M) = {h2k} <= 1 and "
                    "h0(3K - (g-4)A - M) = 0",
                ),
                inputs_echo=echo,
            )
        if inp.h1M == 0 and inp.cork_mu == 0:
            notes = [f"cork >= h0(3K - (g-4)A - M) = {h3}"]
            if h2k is not None and h2k <= 1:
                notes.append(f"equality holds: h0(2K - M) = {h2k} <= 1")
            else:
                notes.append("equality condition h0(2K - M) <= 1 untested")
            return GaussianVerdict(
                "CORANK_BOUND", "low-(e)", bound=h3,
                qualifiers=quals, notes=tuple(notes), inputs_echo=echo,
            )
        return GaussianVerdict(
            "NO_CONCLUSION", "low-(e)",
            notes=(
                "the bound needs h1(M) = 0 and cork mu = 0 "
                f"(have h1M = {inp.h1M}, cork_mu = {inp.cork_mu})",
            ),
            inputs_echo=echo,
        )

    if g in (3, 4) or (g == 5 and nontrigonal):
        missing = [n for n, v in (("h1M", inp.h1M), ("cork_mu", inp.cork_mu))
                   if v is None]
        if missing:
            raise EvidenceError(
                f"genus-{g} branch needs {', '.join(missing)}",
                missing=tuple(missing),
            )
        if g == 3:
            raw = _need_aux(inp, "4K-M") - inp.cork_mu - 3 * inp.h1M
            rule = "low-(a)"
            formula = "h0(4K - M) - cork mu - 3 h1(M)"
        elif g == 4:
            if inp.h0_2K_minus_M is None:
                raise EvidenceError(
                    "genus-4 branch needs h0_2K_minus_M",
                    missing=("h0_2K_minus_M",),
                )
            raw = (
                inp.h0_2K_minus_M + _need_aux(inp, "3K-M")
                - inp.cork_mu - 4 * inp.h1M
            )
            rule = "low-(b)"
            formula = "h0(2K - M) + h0(3K - M) - cork mu - 4 h1(M)"
        else:
            if inp.h0_2K_minus_M is None:
                raise EvidenceError(
                    "genus-5 branch needs h0_2K_minus_M",
                    missing=("h0_2K_minus_M",),
                )
            raw = 3 * inp.h0_2K_minus_M - inp.cork_mu - 5 * inp.h1M
            rule = "low-(c)"
            formula = "3 h0(2K - M) - cork mu - 5 h1(M)"
        bound = max(raw, 0)
        notes = [f"{formula} = {raw}"]
        if raw < 0:
            notes.append("negative formula value clamped to 0")
        hm = inp.aux_h0.get("-M")
        if hm == 0:
            notes.append("equality holds: h0(-M) = 0")
        elif hm is None:
            notes.append("equality condition h0(-M) = 0 untested")
        return GaussianVerdict(
            "CORANK_BOUND", rule, bound=bound,
            qualifiers=quals, notes=tuple(notes), inputs_echo=echo,
        )

    if g == 5:
        raise EvidenceError(
            "genus 5 needs the trigonal or nontrigonal flag",
            missing=("trigonal|nontrigonal",),
        )
    raise RangeError(
        f"no low-genus branch applies to g = {g} without a curve-type flag"
    )


def check_degree_corollaries(
    g: int,
    degM: int,
    plane_quintic: bool = False,
    trigonal: bool = False,
    M_eq_special: bool = False,
) -> GaussianVerdict:
    """Surjectivity from degree alone, per curve type.

    Plane quintics need degM >= 25 (excluding M = 5A at equality);
    trigonal curves need degM >= max(4g - 6, 3g + 6) (excluding
    M = 3K - (g-4)A when g <= 12 meets the 3g + 6 boundary); all other
    curves of genus >= 5 need degM >= 4g - 4 (excluding M = 2K at
    equality). M_eq_special says M equals the branch's excluded bundle.
    """
    if plane_quintic and trigonal:
        raise RangeError("conflicting curve-type flags")
    if g < 5:
        raise RangeError(f"these corollaries need g >= 5, got {g}")
    _check_count("degM", degM)

    echo = {
        "g": g, "degM": degM, "plane_quintic": plane_quintic,
        "trigonal": trigonal, "M_eq_special": M_eq_special,
    }
    if plane_quintic:
        if g != 6:
            raise RangeError(f"a smooth plane quintic has genus 6, got {g}")
        if degM > 25 or (degM == 25 and not M_eq_special):
            return GaussianVerdict(
                "SURJECTIVE", "degree-quintic", inputs_echo=echo
            )
        note = (
            "M = 5A at the degree-25 boundary is excluded"
            if degM == 25
            else f"degM = {degM} < 25"
        )
        return GaussianVerdict(
            "NO_CONCLUSION", "degree-quintic", notes=(note,), inputs_echo=echo
        )

    if trigonal:
        thresh = max(4 * g - 6, 3 * g + 6)
        if degM < thresh:
            return GaussianVerdict(
                "NO_CONCLUSION", "degree-trigonal",
                notes=(f"degM = {degM} < max(4g-6, 3g+6) = {thresh}",),
                inputs_echo=echo,
            )
        if g <= 12 and degM == 3 * g + 6 and M_eq_special:
            return GaussianVerdict(
                "NO_CONCLUSION", "degree-trigonal",
                notes=(
                    "M = 3K - (g-4)A at the 3g + 6 boundary with g <= 12 "
                    "is excluded",
                ),
                inputs_echo=echo,
            )
        return GaussianVerdict(
            "SURJECTIVE", "degree-trigonal", inputs_echo=echo
        )

    thresh = 4 * g - 4
    if degM > thresh or (degM == thresh and not M_eq_special):
        return GaussianVerdict(
            "SURJECTIVE", "degree-general",
            qualifiers=("C nontrigonal and not a plane quintic",),
            inputs_echo=echo,
        )
    note = (
        "M = 2K at the 4g - 4 boundary is excluded"
        if degM == thresh
        else f"degM = {degM} < 4g - 4 = {thresh}"
    )
    return GaussianVerdict(
        "NO_CONCLUSION", "degree-general", notes=(note,), inputs_echo=echo
    )


# ---------------------------------------------------------------------------
# tetragonal curves and the Enriques second-scrollar rule


def tetragonal_corank(
    h0_2K_minus_M: int,
    h0_2K_minus_M_minus_b2A: int,
    h1M_zero: bool = False,
    mu_surjective: bool = False,
) -> GaussianVerdict:
    """Tetragonal criterion: with A a degree-4 pencil and b2 the second
    scrollar invariant, h0(2K - M) <= 1 and h0(2K - M - b2 A) = 0 force
    surjectivity; with h1(M) = 0 and mu surjective the corank is at least
    h0(2K - M - b2 A), with equality when additionally h0(2K - M) <= 1."""
    _check_count("h0_2K_minus_M", h0_2K_minus_M)
    _check_count("h0_2K_minus_M_minus_b2A", h0_2K_minus_M_minus_b2A)
    echo = {
        "h0_2K_minus_M": h0_2K_minus_M,
        "h0_2K_minus_M_minus_b2A": h0_2K_minus_M_minus_b2A,
        "h1M_zero": h1M_zero,
        "mu_surjective": mu_surjective,
    }
    if h0_2K_minus_M <= 1 and h0_2K_minus_M_minus_b2A == 0:
        return GaussianVerdict(
            "SURJECTIVE", "tetragonal-(i)", inputs_echo=echo
        )
    if h1M_zero and mu_surjective:
        notes = [f"cork >= h0(2K - M - b2 A) = {h0_2K_minus_M_minus_b2A}"]
        if h0_2K_minus_M <= 1:
            notes.append(
                f"equality holds: h0(2K - M) = {h0_2K_minus_M} <= 1"
            )
        return GaussianVerdict(
            "CORANK_BOUND", "tetragonal-(ii)",
            bound=h0_2K_minus_M_minus_b2A,
            notes=tuple(notes), inputs_echo=echo,
        )
    return GaussianVerdict(
        "NO_CONCLUSION", "tetragonal",
        notes=(
            "neither the surjectivity branch nor the bound's "
            "h1(M) = 0 / mu surjective hypotheses hold",
        ),
        inputs_echo=echo,
    )


@dataclass(frozen=True)
class B2Rule:
    status: str  # b2_at_least_1 | unknown
    qualifiers: tuple = ()
    notes: tuple = ()

    def to_json_dict(self):
        return {
            "status": self.status,
            "qualifiers": list(self.qualifiers),
            "notes": list(self.notes),
        }


def b2_rule_enriques(L2: int, phi: int) -> B2Rule:
    """Second scrollar invariant of tetragonal curves on an Enriques
    surface: square >= 12 with pencil invariant 2 forces b2 >= 1 for a
    general curve in the system."""
    if L2 < 4 or L2 % 2 != 0:
        raise RangeError(f"L2 must be even and >= 4, got {L2}")
    if phi < 1:
        raise RangeError(f"phi must be >= 1, got {phi}")
    if L2 >= 12 and phi == 2:
        return B2Rule("b2_at_least_1", qualifiers=("general member",))
    return B2Rule(
        "unknown",
        notes=(f"needs L2 >= 12 and phi = 2, have ({L2}, {phi})",),
    )

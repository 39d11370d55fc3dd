"""Named registry of spaces, the factor lattice, and golden result tables.

Space naming grammar: "tm:k,l", "pd:k,l", "sol:m", "chair:X,+" and so on.
The golden table lives in data/golden.txt (one record per space/pair/path
and degree); verify_all recomputes every entry and reports mismatches as
data rather than exceptions.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from . import subst1d, subst2d
from .complexes import cohomology_tower, lemma1_shortcut, les_quotient
from .errors import InvalidPath
from .limits import GroupExpr, classify

DEFAULT_GRID = ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2))
PATH_WORDS = ("A", "B", "C", "AA", "AB", "AAB", "BC", "AC", "AAC", "BAC",
              "ABAC")
# canonical starting scheme for each path word of the golden table
PATH_STARTS = {"A": "X,+", "B": "X,+", "C": "/,0", "AA": "X,+", "AB": "X,+",
               "AAB": "X,+", "BC": "0,+", "AC": "X,0", "AAC": "X,-",
               "BAC": "/,+", "ABAC": "X,+"}
CHAIR_SPACES = tuple(f"chair:{s}" for s in subst2d.SCHEME_NAMES)


@dataclass(frozen=True)
class SpaceId:
    """Parsed space name: family plus parameters."""

    family: str
    params: tuple

    @classmethod
    def parse(cls, name: str) -> "SpaceId":
        family, _, rest = name.partition(":")
        if family in ("tm", "pd"):
            try:
                k, l = (int(x) for x in rest.split(","))
            except ValueError:
                raise InvalidPath(f"bad parameters in {name!r}")
            if k < 1 or l < 1:
                raise InvalidPath(f"parameters must be >= 1 in {name!r}")
            return cls(family, (k, l))
        if family == "sol":
            try:
                m = int(rest)
            except ValueError:
                raise InvalidPath(f"bad parameter in {name!r}")
            if m < 2:
                raise InvalidPath(f"solenoid base must be >= 2 in {name!r}")
            return cls(family, (m,))
        if family == "chair":
            subst2d.scheme_parts(rest)
            return cls(family, tuple(rest.split(",")))
        raise InvalidPath(f"unknown space family in {name!r}")

    def __str__(self):
        return f"{self.family}:{','.join(str(p) for p in self.params)}"

    @property
    def scheme(self) -> str:
        if self.family != "chair":
            raise InvalidPath(f"{self} is not a two-dimensional space")
        return ",".join(self.params)

    @property
    def dimension(self) -> int:
        return 2 if self.family == "chair" else 1


@dataclass(frozen=True)
class FactorPath:
    """A path in the two-dimensional factor lattice."""

    start: str
    word: str


@dataclass(frozen=True)
class GoldenRecord:
    kind: str
    key: str
    degree: int
    expr: GroupExpr
    flags: tuple


@functools.lru_cache(maxsize=None)
def golden_table() -> tuple:
    text = (resources.files("tilecohom") / "data" / "golden.txt") \
        .read_text(encoding="utf-8")
    records = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, key, degree, expr, flags = line.split("|")
        records.append(GoldenRecord(kind, key, int(degree),
                                    GroupExpr.parse(expr),
                                    tuple(f for f in flags.split(",") if f)))
    return tuple(records)


def golden_lookup(kind: str, key: str):
    """Expected expressions by degree for one golden entry."""
    out = {}
    for rec in golden_table():
        if rec.kind == kind and rec.key == key:
            out[rec.degree] = rec.expr
    return out


# ---- expected values from the closed formulas (arbitrary parameters) ----

def expected_1d_space(sid: SpaceId):
    if sid.family == "sol":
        return [GroupExpr.parse("Z"), GroupExpr((), [(sid.params[0], 1)], 0)]
    k, l = sid.params
    if sid.family == "pd":
        return [GroupExpr.parse("Z"), GroupExpr((), [(k + l, 1)], 1)]
    return [GroupExpr.parse("Z"),
            GroupExpr((), [(k + l, 1), (abs(k - l), 1)], 1)]


def expected_1d_quotient(fine: SpaceId, coarse: SpaceId):
    k, l = fine.params
    if coarse.family == "pd":
        return [GroupExpr.zero(), GroupExpr([2], [(abs(k - l), 1)], 0)]
    if fine.family == "tm":
        return [GroupExpr.zero(), GroupExpr((), [(abs(k - l), 1)], 1)]
    return [GroupExpr.zero(), GroupExpr((), (), 1)]


# ---- computations ----

def compute_space(name: str, collar: str = "auto"):
    """Classified [H^0, ..., H^dim] of a named space."""
    sid = SpaceId.parse(name)
    if sid.family == "chair":
        cx, sm = subst2d.ap_complex_2d(sid.scheme, collar)
        return [classify(cohomology_tower(cx, sm, k)) for k in (0, 1, 2)]
    return subst1d.absolute_cohomology_1d(name)


def _chair_steps(fine: str, coarse: str):
    """Shortest realization of the factor map between two schemes."""
    if fine == coarse:
        return ()
    edges = subst2d.lattice_edges()
    frontier = [(fine, ())]
    seen = {fine}
    while frontier:
        nxt = []
        for at, steps in frontier:
            for _, a, b in edges:
                if a == at and b not in seen:
                    path = steps + ((a, b),)
                    if b == coarse:
                        return path
                    seen.add(b)
                    nxt.append((b, path))
        frontier = nxt
    raise InvalidPath(f"no factor map from chair:{fine} to chair:{coarse}")


def factor_map_for_pair(fine: str, coarse: str):
    """(cellular map, self-map of source, self-map of target) for a pair."""
    fid, cid = SpaceId.parse(fine), SpaceId.parse(coarse)
    if fid.family == "chair" and cid.family == "chair":
        steps = _chair_steps(fid.scheme, cid.scheme)
        if not steps:
            raise InvalidPath("the two spaces coincide")
        f = subst2d.compose_realization(steps, "forced")
        _, sx = subst2d.ap_complex_2d(fid.scheme, "forced")
        _, sy = subst2d.ap_complex_2d(cid.scheme, "forced")
        return f, sx, sy
    if fid.family != "chair" and cid.family != "chair":
        return subst1d.factor_map_1d(fine, coarse)
    raise InvalidPath(f"no factor map from {fine!r} to {coarse!r}")


def compute_quotient(fine: str, coarse: str, collar: str = "auto"):
    """Classified quotient cohomology [H^0_Q, ..., H^dim_Q] of a pair."""
    if fine == coarse:
        dim = SpaceId.parse(fine).dimension
        return [GroupExpr.zero() for _ in range(dim + 1)]
    f, sx, sy = factor_map_for_pair(fine, coarse)
    return les_quotient(f, sx, sy)["Q"]


def compute_path(path: FactorPath, collar: str = "forced"):
    """Classified quotient cohomology of a composed lattice path."""
    f = subst2d.compose_path(path.start, path.word, collar)
    # self-maps of the endpoints of the canonical realization
    reals = subst2d.path_realizations(path.start, path.word)
    _, sx = subst2d.ap_complex_2d(path.start, collar)
    _, sy = subst2d.ap_complex_2d(reals[0][-1][1], collar)
    return les_quotient(f, sx, sy)["Q"]


def catalog_factor_maps(grid=DEFAULT_GRID):
    """Every factor map the catalog talks about, as (key, f, sx, sy)."""
    out = []
    for k, l in grid:
        for fine, coarse in ((f"tm:{k},{l}", f"pd:{k},{l}"),
                             (f"tm:{k},{l}", f"sol:{k + l}"),
                             (f"pd:{k},{l}", f"sol:{k + l}")):
            out.append((f"{fine}->{coarse}",)
                       + subst1d.factor_map_1d(fine, coarse))
    for typ, fine, coarse in subst2d.lattice_edges():
        f = subst2d.factor_map_edge(fine, coarse)
        _, sx = subst2d.ap_complex_2d(fine, "forced")
        _, sy = subst2d.ap_complex_2d(coarse, "forced")
        out.append((f"chair:{fine}->chair:{coarse}", f, sx, sy))
    return out


# ---- verification ----

def _check(kind, key, degree, expected, computed):
    return {"kind": kind, "key": key, "degree": degree,
            "expected": str(expected), "computed": str(computed),
            "ok": expected == computed}


def verify_all(scope: str = "all", grid=None):
    """Recompute golden/formula entries; mismatches are report rows."""
    if scope not in ("1d", "2d", "all"):
        raise InvalidPath(f"unknown verification scope {scope!r}")
    grid = tuple(grid) if grid is not None else DEFAULT_GRID
    report = []
    if scope in ("1d", "all"):
        for k, l in grid:
            names = [f"sol:{k + l}", f"pd:{k},{l}", f"tm:{k},{l}"]
            for name in names:
                exp = expected_1d_space(SpaceId.parse(name))
                got = compute_space(name)
                for d, (e, g) in enumerate(zip(exp, got)):
                    report.append(_check("space", name, d, e, g))
            for fine, coarse in ((names[2], names[1]), (names[2], names[0]),
                                 (names[1], names[0])):
                exp = expected_1d_quotient(SpaceId.parse(fine),
                                           SpaceId.parse(coarse))
                got = compute_quotient(fine, coarse)
                for d, (e, g) in enumerate(zip(exp, got)):
                    report.append(_check("quotient", f"{fine}->{coarse}",
                                         d, e, g))
    if scope in ("2d", "all"):
        for name in CHAIR_SPACES:
            exp = golden_lookup("space", name)
            got = compute_space(name, "forced")
            for d in sorted(exp):
                report.append(_check("space", name, d, exp[d], got[d]))
        for word in PATH_WORDS:
            exp = golden_lookup("path", word)
            got = compute_path(FactorPath(PATH_STARTS[word], word))
            for d in sorted(exp):
                report.append(_check("path", word, d, exp[d], got[d]))
        for name in CHAIR_SPACES:
            key = f"{name}->chair:0,0"
            exp = golden_lookup("quotient", key)
            got = compute_quotient(name, "chair:0,0")
            for d in sorted(exp):
                report.append(_check("quotient", key, d, exp[d], got[d]))
    return report


def consistency_cross_checks():
    """Cross-table consistency: degree-0 groups, quotients relative to the
    bottom scheme matching the path rows, and golden round-trips."""
    report = []
    z = GroupExpr.parse("Z")
    for name in CHAIR_SPACES:
        got = golden_lookup("space", name)[0]
        report.append(_check("h0", name, 0, z, got))
    rel_to_word = {"chair:X,+": "ABAC", "chair:/,+": "BAC", "chair:0,+": "BC",
                   "chair:X,-": "AAC", "chair:/,-": "AC", "chair:0,-": "C",
                   "chair:X,0": "AC", "chair:/,0": "C"}
    for name, word in rel_to_word.items():
        rel = golden_lookup("quotient", f"{name}->chair:0,0")
        row = golden_lookup("path", word)
        for d in sorted(rel):
            report.append(_check("rel-vs-path", f"{name}:{word}", d,
                                 row[d], rel[d]))
    for d, e in golden_lookup("quotient", "chair:0,0->chair:0,0").items():
        report.append(_check("rel-self", "chair:0,0", d, GroupExpr.zero(), e))
    for rec in golden_table():
        report.append(_check("roundtrip", f"{rec.kind}|{rec.key}", rec.degree,
                             rec.expr, GroupExpr.parse(rec.expr.render())))
    return report


def lemma1_agreement(key: str, f, sx, sy):
    """Compare the shortcut against the long exact sequence for one map."""
    res = les_quotient(f, sx, sy)
    h0q_zero, top = lemma1_shortcut(f, sx, sy)
    q = res["Q"]
    return {"key": key,
            "h0_match": h0q_zero == q[0].is_zero(),
            "top_match": top == q[-1],
            "les_top": str(q[-1]), "shortcut_top": str(top)}

"""Criterion checks, per-group analysis and the suite runner."""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Sequence

from .. import __version__
from ..charsub import ZJ, enumerate_strongly_closed, thompson_J
from ..errors import EngineInconsistency, GroupTooLarge
from ..fusion import (
    FusionSystem,
    focal_subgroup,
    frobenius_criterion,
    fusion_of_group,
    generated_subsystem,
    inner_fusion,
    is_nilpotent,
    normalizer_subsystem,
    o_p_of_F,
    p_centralizer_subsystem,
    strong_closure_witness_F,
)
from ..permcore import (
    DEFAULT_ORDER_CAP,
    PermGroup,
    Subgroup,
    all_subgroups,
    centralizer,
    frattini,
    is_p_nilpotent,
    is_prime,
    join,
    normalizer,
    prime_divisors,
    strong_closure_violation,
    sylow,
)
from .corpus import CorpusEntry

log = logging.getLogger(__name__)

THEOREMS = ("A", "B", "C", "kizmaz", "generation", "frobenius")
ODD_ONLY = {"A": "Theorem A requires odd p", "kizmaz": "kizmaz check requires odd p"}
STATUSES = ("pass", "degenerate_pass", "counterexample", "skipped")


@dataclass
class VerificationReport:
    group: str
    order: int | None
    p: int | None
    theorem: str
    status: str
    witnesses: dict[str, Any] = field(default_factory=dict)
    reason: str | None = None
    exploratory: bool = False
    wall_time: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        out = {
            "group": self.group,
            "order": self.order,
            "p": self.p,
            "theorem": self.theorem,
            "status": self.status,
            "witnesses": self.witnesses,
            "wall_time": round(self.wall_time, 6),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.exploratory:
            out["exploratory"] = True
        return out

    @property
    def failed(self) -> bool:
        return self.status == "counterexample" and not self.exploratory


def describe(H: Subgroup) -> dict[str, Any]:
    return {"order": H.order, "generators": [g.cycle_string() for g in H.generators]}


def elem(U: PermGroup, i: int) -> str:
    return U.elements[i].cycle_string()


class GroupContext:
    """Everything about one (G, p) pair, each piece computed at most once."""

    def __init__(self, name: str, G: PermGroup, p: int):
        self.name = name
        self.G = G
        self.p = p
        self.fusion_builds = 0
        self._fusion: FusionSystem | None = None
        self._fingerprint: str | None = None

    @cached_property
    def P(self) -> Subgroup:
        return sylow(self.G, self.p)

    @cached_property
    def subgroups(self) -> list[Subgroup]:
        return all_subgroups(self.P)

    def subgroups_of(self, D: Subgroup) -> list[Subgroup]:
        return [A for A in self.subgroups if A <= D]

    @property
    def fusion(self) -> FusionSystem:
        if self._fusion is None:
            self._fusion = fusion_of_group(self.G, self.P, self.p, self.subgroups)
            self._fingerprint = self._fusion.fingerprint()
            self.fusion_builds += 1
        elif self._fusion.fingerprint() != self._fingerprint:
            raise EngineInconsistency("cached fusion system changed")
        return self._fusion

    @cached_property
    def inner(self) -> FusionSystem:
        return inner_fusion(self.P, self.p, self.subgroups)

    @cached_property
    def strongly_closed(self) -> list[Subgroup]:
        return enumerate_strongly_closed(self.G, self.P, self.subgroups)

    @cached_property
    def frattini(self) -> Subgroup:
        return frattini(self.P, self.subgroups)

    @cached_property
    def p_nilpotent(self) -> bool:
        return is_p_nilpotent(self.G, self.p)

    @cached_property
    def fusion_nilpotent(self) -> bool:
        return self.fusion.same_homs(self.inner)

    def zj(self, D: Subgroup) -> Subgroup:
        return ZJ(D, self.subgroups_of(D))


# ----------------------------------------------------------------------
# verifiers; each returns (status, witnesses)
# ----------------------------------------------------------------------

def _combine(statuses: list[str]) -> str:
    if "counterexample" in statuses:
        return "counterexample"
    if statuses and all(s == "degenerate_pass" for s in statuses):
        return "degenerate_pass"
    return "pass"


def check_theorem_A(ctx: GroupContext):
    F = ctx.fusion
    lhs = ctx.fusion_nilpotent
    cases = []
    flagged = []
    for D in ctx.strongly_closed:
        Z = ctx.zj(D)
        NZ = normalizer_subsystem(F, Z)
        base_is_P = NZ.P == ctx.P
        rhs = is_nilpotent(NZ)
        literal = NZ.same_homs(ctx.inner) if base_is_P else None
        holds = lhs == rhs and (literal is None or literal == lhs)
        if literal is not None and literal != rhs:
            flagged.append(D.order)
        if not base_is_P:
            flagged.append(D.order)
        status = "counterexample" if not holds else ("degenerate_pass" if D.is_trivial() else "pass")
        cases.append({
            "D": describe(D),
            "zj": describe(Z),
            "base_order": NZ.P.order,
            "base_is_P": base_is_P,
            "lhs_nilpotent": lhs,
            "rhs_nilpotent_over_base": rhs,
            "rhs_equals_inner_fusion_of_P": literal,
            "normalizer_morphisms": NZ.morphism_count,
            "status": status,
        })
    witnesses = {
        "lhs_nilpotent": lhs,
        "fusion_morphisms": F.morphism_count,
        "strongly_closed_count": len(ctx.strongly_closed),
        "cases_tested": len(cases),
        "readings_diverge_for_D_orders": flagged,
        "cases": cases,
    }
    if len(cases) != len(ctx.strongly_closed):
        raise EngineInconsistency("not every strongly closed subgroup was tested")
    return _combine([c["status"] for c in cases if c["D"]["order"] > 1] or [c["status"] for c in cases]), witnesses


def check_theorem_B(ctx: GroupContext):
    F = ctx.fusion
    U = ctx.G
    lhs = ctx.fusion_nilpotent
    NP = normalizer_subsystem(F, ctx.P)
    np_inner = NP.same_homs(ctx.inner)
    phi = ctx.frattini
    wit = strong_closure_witness_F(F, phi)
    phi_closed = wit is None
    rhs = np_inner and phi_closed
    witnesses = {
        "lhs_nilpotent": lhs,
        "normalizer_of_P_is_inner": np_inner,
        "normalizer_of_P_morphisms": NP.morphism_count,
        "inner_morphisms": ctx.inner.morphism_count,
        "frattini": describe(phi),
        "frattini_strongly_closed": phi_closed,
        "rhs": rhs,
    }
    if wit is not None:
        witnesses["fusion_witness"] = {
            "element": elem(U, wit.element),
            "image": elem(U, wit.image),
            "morphism_source": describe(wit.morphism.source),
        }
    return ("pass" if lhs == rhs else "counterexample"), witnesses


def check_corollary_C(ctx: GroupContext):
    G, P, p = ctx.G, ctx.P, ctx.p
    lhs = ctx.p_nilpotent
    N = normalizer(G, P)
    n_pnil = is_p_nilpotent(N, p)
    phi = ctx.frattini
    v = strong_closure_violation(G, P, phi)
    rhs = n_pnil and v is None
    witnesses = {
        "lhs_p_nilpotent": lhs,
        "normalizer_order": N.order,
        "normalizer_p_nilpotent": n_pnil,
        "frattini": describe(phi),
        "frattini_strongly_closed": v is None,
        "rhs": rhs,
    }
    if v is not None:
        x, g, y = v
        witnesses["conjugation_witness"] = {"element": elem(G, x), "conjugator": elem(G, g), "image": elem(G, y)}
    return ("pass" if lhs == rhs else "counterexample"), witnesses


def check_kizmaz(ctx: GroupContext):
    lhs = ctx.p_nilpotent
    cases = []
    for D in ctx.strongly_closed:
        Z = ctx.zj(D)
        N = normalizer(ctx.G, Z)
        rhs = is_p_nilpotent(N, ctx.p)
        status = "counterexample" if lhs != rhs else ("degenerate_pass" if D.is_trivial() else "pass")
        cases.append({
            "D": describe(D),
            "zj": describe(Z),
            "normalizer_order": N.order,
            "lhs_p_nilpotent": lhs,
            "rhs_p_nilpotent": rhs,
            "status": status,
        })
    witnesses = {"lhs_p_nilpotent": lhs, "strongly_closed_count": len(ctx.strongly_closed),
                 "cases_tested": len(cases), "cases": cases}
    return _combine([c["status"] for c in cases if c["D"]["order"] > 1] or [c["status"] for c in cases]), witnesses


def check_generation(ctx: GroupContext):
    F = ctx.fusion
    Q = o_p_of_F(F)
    R = F.canonical(join(Q, centralizer(ctx.P, Q)))
    PC = p_centralizer_subsystem(F, Q)
    NR = normalizer_subsystem(F, R)
    seed = list(PC.morphisms()) + list(NR.morphisms())
    E = generated_subsystem(ctx.P, seed, ctx.p)
    holds = E.same_homs(F)
    witnesses = {
        "O_p": describe(Q),
        "R": describe(R),
        "R_equals_O_p": R == Q,
        "pc_morphisms": PC.morphism_count,
        "normalizer_R_morphisms": NR.morphism_count,
        "generated_morphisms": E.morphism_count,
        "fusion_morphisms": F.morphism_count,
        "identity_holds": holds,
    }
    return ("pass" if holds else "counterexample"), witnesses


def check_frobenius(ctx: GroupContext):
    pnil = ctx.p_nilpotent
    frob = frobenius_criterion(ctx.G, ctx.P, ctx.p, ctx.subgroups)
    fnil = ctx.fusion_nilpotent
    focal = focal_subgroup(ctx.fusion)
    witnesses = {
        "p_nilpotent": pnil,
        "frobenius_criterion": frob,
        "fusion_nilpotent": fnil,
        "focal_subgroup_order": focal.order,
    }
    return ("pass" if pnil == frob == fnil else "counterexample"), witnesses


CHECKS: dict[str, Callable[[GroupContext], tuple[str, dict]]] = {
    "A": check_theorem_A,
    "B": check_theorem_B,
    "C": check_corollary_C,
    "kizmaz": check_kizmaz,
    "generation": check_generation,
    "frobenius": check_frobenius,
}


def run_check(ctx: GroupContext, theorem: str, include_even_p_exploratory: bool = False) -> VerificationReport:
    rep = VerificationReport(ctx.name, ctx.G.order, ctx.p, theorem, "skipped")
    if ctx.G.order % ctx.p:
        rep.reason = "p does not divide |G|"
        return rep
    if theorem in ODD_ONLY and ctx.p == 2:
        if not include_even_p_exploratory:
            rep.reason = ODD_ONLY[theorem]
            return rep
        rep.exploratory = True
    t0 = time.perf_counter()
    try:
        rep.status, rep.witnesses = CHECKS[theorem](ctx)
    except (EngineInconsistency, AssertionError) as exc:
        rep.status = "counterexample"
        rep.witnesses = {"invariant_failure": f"{type(exc).__name__}: {exc}"}
    rep.wall_time = time.perf_counter() - t0
    if ctx.fusion_builds > 1:
        raise EngineInconsistency("fusion system built more than once for one (G, p)")
    return rep


def _context_for(G: PermGroup, p: int, name: str = "G") -> GroupContext:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return GroupContext(name, G, p)


def verify_theorem_A(G: PermGroup, p: int, name: str = "G", include_even_p_exploratory: bool = False) -> VerificationReport:
    return run_check(_context_for(G, p, name), "A", include_even_p_exploratory)


def verify_theorem_B(G: PermGroup, p: int, name: str = "G") -> VerificationReport:
    return run_check(_context_for(G, p, name), "B")


def verify_corollary_C(G: PermGroup, p: int, name: str = "G") -> VerificationReport:
    return run_check(_context_for(G, p, name), "C")


def verify_kizmaz(G: PermGroup, p: int, name: str = "G", include_even_p_exploratory: bool = False) -> VerificationReport:
    return run_check(_context_for(G, p, name), "kizmaz", include_even_p_exploratory)


def verify_generation(G: PermGroup, p: int, name: str = "G") -> VerificationReport:
    return run_check(_context_for(G, p, name), "generation")


def verify_frobenius(G: PermGroup, p: int, name: str = "G") -> VerificationReport:
    return run_check(_context_for(G, p, name), "frobenius")


# ----------------------------------------------------------------------
# analysis
# ----------------------------------------------------------------------

def analyze(G: PermGroup, p: int, name: str = "G") -> dict[str, Any]:
    """Summary of the p-local objects of G."""
    out: dict[str, Any] = {"group": name, "order": G.order, "p": p}
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if G.order % p:
        out["status"] = "skipped"
        out["reason"] = "p does not divide |G|"
        return out
    ctx = GroupContext(name, G, p)
    P = ctx.P
    J = thompson_J(P, ctx.subgroups)
    F = ctx.fusion
    out.update({
        "status": "ok",
        "sylow": describe(P),
        "frattini": describe(ctx.frattini),
        "thompson": describe(J),
        "zj": describe(ctx.zj(P)),
        "strongly_closed": [describe(D) for D in ctx.strongly_closed],
        "p_nilpotent": ctx.p_nilpotent,
        "fusion_nilpotent": ctx.fusion_nilpotent,
        "fusion_morphisms": F.morphism_count,
        "O_p": describe(o_p_of_F(F)),
        "focal_subgroup_order": focal_subgroup(F).order,
    })
    return out


def dump_fusion(G: PermGroup, p: int, name: str = "G") -> dict[str, Any]:
    ctx = GroupContext(name, G, p)
    F = ctx.fusion
    subs = F.subgroups
    pos = {A.mask: k for k, A in enumerate(subs)}
    counts = [[pos[A.mask], pos[B.mask], len(F.homs[(A, B)])] for A in subs for B in subs]
    return {
        "group": name,
        "order": G.order,
        "p": p,
        "sylow": describe(F.P),
        "subgroups": [dict(id=k, **describe(A)) for k, A in enumerate(subs)],
        "hom_counts": counts,
        "morphism_count": F.morphism_count,
    }


# ----------------------------------------------------------------------
# suite runner
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteConfig:
    theorems: tuple[str, ...] = THEOREMS
    p: int | None = None
    max_order: int = DEFAULT_ORDER_CAP
    include_even_p_exploratory: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorems": list(self.theorems),
            "p": self.p,
            "max_order": self.max_order,
            "include_even_p_exploratory": self.include_even_p_exploratory,
        }


def _ordered(theorems: Sequence[str]) -> tuple[str, ...]:
    unknown = set(theorems) - set(THEOREMS)
    if unknown:
        raise ValueError(f"unknown theorem id(s): {', '.join(sorted(unknown))}")
    return tuple(t for t in THEOREMS if t in theorems)


def run_entry(entry: CorpusEntry, config: SuiteConfig) -> list[VerificationReport]:
    """All selected checks for one corpus entry, in canonical (p, theorem) order."""
    try:
        G = entry.build(config.max_order)
    except GroupTooLarge as exc:
        return [VerificationReport(entry.name, None, config.p, t, "skipped",
                                   reason=f"order exceeds cap {exc.cap}") for t in config.theorems]
    except EngineInconsistency as exc:
        return [VerificationReport(entry.name, None, config.p, t, "counterexample",
                                   witnesses={"invariant_failure": str(exc)}) for t in config.theorems]
    if config.p is not None:
        primes = [config.p]
    else:
        primes = prime_divisors(G.order)
    out = []
    for p in primes:
        ctx = GroupContext(entry.name, G, p)
        for t in config.theorems:
            out.append(run_check(ctx, t, config.include_even_p_exploratory))
    return out


def _run_entry_star(args):
    return run_entry(*args)


def summarize(reports: Sequence[VerificationReport]) -> dict[str, int]:
    counts = {s: 0 for s in STATUSES}
    for r in reports:
        counts[r.status] += 1
    return counts


def run_suite(
    corpus: Sequence[CorpusEntry],
    theorems: Sequence[str] = THEOREMS,
    p: int | None = None,
    jobs: int = 1,
    out_path: str | Path | None = None,
    max_order: int = DEFAULT_ORDER_CAP,
    include_even_p_exploratory: bool = False,
    corpus_label: str = "",
) -> tuple[int, dict[str, Any]]:
    """Run the selected verifiers over a corpus.

    Returns (exit code, report document): 0 when nothing failed, 1 on any
    counterexample or invariant failure.  Exploratory records never affect
    the exit code.
    """
    if p is not None and not is_prime(p):
        raise ValueError(f"{p} is not prime")
    config = SuiteConfig(_ordered(theorems), p, max_order, include_even_p_exploratory)
    work = [(e, config) for e in corpus]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_entry_star, work))
    else:
        chunks = [run_entry(e, config) for e, _ in work]
    order = {t: k for k, t in enumerate(THEOREMS)}
    reports = sorted(
        (r for chunk in chunks for r in chunk),
        key=lambda r: (r.group, r.p or 0, order[r.theorem]),
    )
    doc = {
        "tool": "fusionlab",
        "version": __version__,
        "config": dict(config.to_dict(), corpus=corpus_label),
        "reports": [r.to_dict() for r in reports],
        "summary": summarize(reports),
    }
    if out_path is not None:
        write_report(doc, out_path)
    code = 1 if any(r.failed for r in reports) else 0
    return code, doc


def write_report(doc: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def strip_timing(doc: Any) -> Any:
    """Copy of a report document without wall_time fields."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "wall_time"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc

"""Local correctness checking, desk-scale soundness evaluation, and
trace export for derivation terms.

The checker expands a term to a given depth (sampling indices for
conjunctions over the whole universe) and verifies, at every visited
node, the control condition (all parameters and the bound inside the
hull), strict descent of ordinal bounds, rank bookkeeping, and the
side conditions of each inference.  The evaluator certifies that a
cut-free, reflection-free derivation really ends in a true sequent,
using a bounded-witness search entirely independent of the derivation
machinery; a separate brute-force oracle evaluates sequents classically
over a rank-bounded fragment of the hereditarily finite sets for
cross-checking.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .derivations import (
    ConstructionError,
    CutNode,
    DerivTerm,
    RefNode,
    TrueLeaf,
    VeeNode,
    WedgeNode,
    component,
    reflection_guard,
    rule_of,
)
from .formulas import (
    All,
    And,
    BAll,
    BEx,
    Ex,
    Formula,
    JBounded,
    JTwo,
    JUniverse,
    Mem,
    Name,
    NotMem,
    Or,
    contains_opaque,
    depth,
    eval_formula_bounded,
    free_vars,
    is_delta0,
    member_pi,
    negate,
    render_formula,
    subst,
    support,
)
from .ordinals import GREATER, LESS, cmp, render
from .universe import (
    Abstract,
    Concrete,
    EvaluationError,
    enumerate_hf,
    hull_contains,
    hull_extend,
    is_concrete,
    set_members,
    transitive_closure,
)


# ---------------------------------------------------------------------------
# sampling strategy for conjunctions over the universe


def default_sampler(seed: int = 0, count: int = 2):
    """Deterministic index supplier for universe-indexed conjunctions:
    the hull's abstract generators plus a seed-chosen handful of
    hereditarily finite sets."""
    rng = random.Random(seed)
    pool = list(enumerate_hf(6))
    picks = [pool[i] for i in sorted(rng.sample(range(len(pool)), count))]

    def sample(node):
        abstracts = sorted(
            (g for g in node.sig.hull.generators if isinstance(g, Abstract)),
            key=lambda a: a.name,
        )
        return abstracts + picks

    return sample


# ---------------------------------------------------------------------------
# local correctness


@dataclass
class Report:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    visited: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


def _determinable(A: Formula) -> bool:
    return (
        not contains_opaque(A)
        and all(is_concrete(a) for a in support(A))
        and not free_vars(A)
    )


def _expected_index_set(A: Formula):
    """The index set a conjunctive sentence decomposes over."""
    if isinstance(A, And):
        return JTwo()
    if isinstance(A, BAll) and isinstance(A.bound, Name):
        return JBounded(A.bound.value)
    if isinstance(A, All):
        return JUniverse()
    return None


def check_local(d: DerivTerm, k: int, sampler=None, N: int = 2) -> Report:
    """Expand to depth k and verify every visited node locally."""
    sampler = sampler or default_sampler()
    report = Report()

    def bad(path, msg):
        report.violations.append((path, msg))

    def visit(term, fuel, path):
        report.visited += 1
        sig = term.sig
        try:
            v = rule_of(term)
        except (ConstructionError, EvaluationError) as ex:
            bad(path, "expansion error: %s" % ex)
            return
        if v.sig != sig:
            bad(path, "signature drift in unfolding")
        for a in support(sig.seq):
            if not hull_contains(sig.hull, a):
                bad(path, "control condition: parameter outside hull")
                break
        if not hull_contains(sig.hull, sig.bound):
            bad(path, "control condition: bound outside hull")

        premises = []  # (label, iota-or-None, expected seq, expected hull, term)

        if isinstance(v, TrueLeaf):
            if v.main not in sig.seq:
                bad(path, "main formula not in sequent")
            elif not is_delta0(v.main):
                bad(path, "leaf main formula not bounded")
            elif _determinable(v.main):
                if not eval_formula_bounded(v.main):
                    bad(path, "leaf asserts a false sentence")
            else:
                report.notes.append((path, "leaf truth not machine-checkable"))
        elif isinstance(v, VeeNode):
            if v.main not in sig.seq:
                bad(path, "main formula not in sequent")
            else:
                A = v.main
                if isinstance(A, BEx):
                    pass  # set-indexed reading, whatever the truth value
                elif isinstance(A, (Or, Ex)) and not is_delta0(A):
                    pass
                elif is_delta0(A) and not _determinable(A):
                    report.notes.append(
                        (path, "polarity not machine-checkable"))
                elif is_delta0(A) and eval_formula_bounded(A):
                    bad(path, "disjunctive inference on a conjunctive formula")
                elif is_delta0(A):
                    bad(path, "disjunctive inference on an empty index set")
                else:
                    bad(path, "disjunctive inference on a conjunctive formula")
                ok, note = _index_valid(A, v.iota)
                if not ok:
                    bad(path, "index outside the index set")
                elif note:
                    report.notes.append((path, note))
                try:
                    comp = component(A, v.iota)
                except ConstructionError as ex:
                    bad(path, "premise error: %s" % ex)
                else:
                    premises.append(("0", sig.seq | {comp}, sig.hull, v.sub))
        elif isinstance(v, WedgeNode):
            if v.main not in sig.seq:
                bad(path, "main formula not in sequent")
            else:
                A = v.main
                expected = _expected_index_set(A)
                if expected is None:
                    if is_delta0(A):
                        bad(path, "conjunctive inference on a bounded sentence")
                    else:
                        bad(path,
                            "conjunctive inference on a disjunctive formula")
                else:
                    if v.index_set != expected:
                        bad(path, "index set mismatch")
                    if (isinstance(A, And) and is_delta0(A)
                            and _determinable(A)):
                        # a settled bounded conjunction decomposes by its
                        # truth value, not over its connective
                        bad(path, "conjunctive inference on a bounded sentence")
                    for label, iota in _wedge_indices(v, sampler, report, path):
                        comp = component(v.main, iota)
                        hull_i = (
                            hull_extend(sig.hull, iota)
                            if isinstance(iota, (Concrete, Abstract))
                            else sig.hull
                        )
                        try:
                            p = v.premise(iota)
                        except (IndexError, ConstructionError, EvaluationError) as ex:
                            bad(path, "premise error at %s: %s" % (label, ex))
                            continue
                        premises.append((label, sig.seq | {comp}, hull_i, p))
        elif isinstance(v, CutNode):
            C = v.cut_formula
            if depth(C) >= sig.rank:
                bad(path, "cut rank violation")
            premises.append(("0", sig.seq | {negate(C)}, sig.hull, v.left))
            premises.append(("1", sig.seq | {C}, sig.hull, v.right))
        elif isinstance(v, RefNode):
            if not member_pi(v.formula, N + 1):
                bad(path, "reflection class violation")
            if not _guard_matches(v.guard, v.formula, v.point):
                bad(path, "reflection guard sentence malformed")
            premises.append(("0", sig.seq | {v.formula}, sig.hull, v.left))
            premises.append(("1", sig.seq | {v.guard}, sig.hull, v.right))
        else:
            bad(path, "unknown node kind")

        for label, want_seq, want_hull, p in premises:
            child = "%s.%s" % (path, label)
            psig = p.sig
            if cmp(psig.bound, sig.bound) is not LESS:
                bad(child, "descent violation")
            if psig.rank != sig.rank:
                bad(child, "premise rank mismatch")
            if psig.seq != want_seq:
                bad(child, "premise sequent mismatch")
            if psig.hull != want_hull:
                bad(child, "premise hull mismatch")
            if fuel > 0:
                visit(p, fuel - 1, child)

    visit(d, k, "0")
    return report


def _index_valid(A: Formula, iota):
    """Whether iota belongs to the index set A decomposes over."""
    if isinstance(A, (Or, And)):
        return iota in (0, 1), None
    if isinstance(A, (BEx, BAll)):
        if not isinstance(A.bound, Name):
            return False, None
        bound = A.bound.value
        if isinstance(bound, Abstract):
            return True, "index set bounded by an abstract parameter"
        return iota in set_members(bound), None
    if isinstance(A, (Ex, All)):
        return isinstance(iota, (Concrete, Abstract)), None
    return False, None


def _wedge_indices(v: WedgeNode, sampler, report: Report, path):
    if isinstance(v.index_set, JTwo):
        return [("0", 0), ("1", 1)]
    if isinstance(v.index_set, JBounded):
        if isinstance(v.index_set.bound, Abstract):
            report.notes.append((path, "abstract index set skipped"))
            return []
        return [
            ("i%d" % n, b)
            for n, b in enumerate(
                sorted(set_members(v.index_set.bound), key=repr)
            )
        ]
    if isinstance(v.index_set, JUniverse):
        report.notes.append((path, "universe index set sampled"))
        return [("s%d" % n, b) for n, b in enumerate(sampler(v))]
    return []


def _guard_matches(guard: Formula, A: Formula, point) -> bool:
    if not isinstance(guard, All):
        return False
    return guard == reflection_guard(A, point, var=guard.var)


# ---------------------------------------------------------------------------
# desk-scale soundness of cut-free derivations


@dataclass
class EvalResult:
    status: str  # "verified-true" | "inconclusive" | "refuted"
    reason: str = ""


VERIFIED = "verified-true"
INCONCLUSIVE = "inconclusive"
REFUTED = "refuted"


def _witness_pool(A: Formula) -> list:
    pool = list(enumerate_hf(16))
    for a in support(A):
        if isinstance(a, Concrete):
            for b in sorted(transitive_closure(a) | {a}, key=repr):
                if b not in pool:
                    pool.append(b)
    return pool


def certify(A: Formula) -> bool:
    """Bounded-witness certification that a sentence is true."""
    if free_vars(A) or contains_opaque(A):
        return False
    if not all(is_concrete(a) for a in support(A)):
        return False
    if is_delta0(A):
        return eval_formula_bounded(A)
    if isinstance(A, Or):
        return certify(A.left) or certify(A.right)
    if isinstance(A, And):
        return certify(A.left) and certify(A.right)
    if isinstance(A, BEx):
        return any(
            certify(subst(A.body, A.var, Name(b))) for b in set_members(A.bound.value)
        )
    if isinstance(A, BAll):
        return all(
            certify(subst(A.body, A.var, Name(b))) for b in set_members(A.bound.value)
        )
    if isinstance(A, Ex):
        return any(certify(subst(A.body, A.var, Name(b))) for b in _witness_pool(A))
    return False  # unbounded universal: never certified here


def eval_cutfree(d: DerivTerm, k: int) -> EvalResult:
    """Certify a cut-free, reflection-free derivation's end sequent."""
    for a in support(d.sig.seq):
        if not is_concrete(a):
            raise EvaluationError("end sequent mentions an abstract parameter")
    if d.sig.rank != 0:
        raise EvaluationError("soundness evaluation needs a cut-free signature")
    return _ev(d, k)


def _ev(d: DerivTerm, k: int) -> EvalResult:
    if any(certify(A) for A in d.sig.seq):
        return EvalResult(VERIFIED)
    if k <= 0:
        return EvalResult(INCONCLUSIVE, "depth limit")
    try:
        v = rule_of(d)
    except EvaluationError as ex:
        raise
    if isinstance(v, RefNode):
        return EvalResult(INCONCLUSIVE, "reflection")
    if isinstance(v, TrueLeaf):
        if v.undetermined:
            return EvalResult(INCONCLUSIVE, "opaque leaf")
        return EvalResult(REFUTED, "false leaf")  # a true leaf was certified above
    if isinstance(v, VeeNode):
        return _ev(v.sub, k - 1)
    if isinstance(v, WedgeNode):
        if isinstance(v.index_set, JUniverse):
            return EvalResult(INCONCLUSIVE, "universe conjunction")
        results = [_ev(v.premise(i), k - 1) for i in v.indices()]
        if any(r.status == REFUTED for r in results):
            return EvalResult(REFUTED, "refuted premise")
        if all(r.status == VERIFIED for r in results):
            return EvalResult(VERIFIED)
        return next(r for r in results if r.status == INCONCLUSIVE)
    if isinstance(v, CutNode):
        return EvalResult(INCONCLUSIVE, "cut")
    return EvalResult(INCONCLUSIVE, "unknown node")


# ---------------------------------------------------------------------------
# brute-force truth oracle (independent of the derivation machinery)


def oracle_eval(A: Formula, max_rank: int = 4) -> bool:
    """Classical truth over a rank-bounded fragment: unbounded
    quantifiers range over all hereditarily finite sets up to max_rank
    plus everything hereditarily inside the sentence's parameters."""
    domain = list(enumerate_hf(2 ** max_rank))
    for a in support(A):
        if not is_concrete(a):
            raise EvaluationError("oracle needs concrete parameters")
        for b in sorted(transitive_closure(a) | {a}, key=repr):
            if b not in domain:
                domain.append(b)

    def ev(B: Formula) -> bool:
        if is_delta0(B):
            return eval_formula_bounded(B)
        if isinstance(B, Or):
            return ev(B.left) or ev(B.right)
        if isinstance(B, And):
            return ev(B.left) and ev(B.right)
        if isinstance(B, BEx):
            return any(ev(subst(B.body, B.var, Name(b))) for b in set_members(B.bound.value))
        if isinstance(B, BAll):
            return all(ev(subst(B.body, B.var, Name(b))) for b in set_members(B.bound.value))
        if isinstance(B, Ex):
            return any(ev(subst(B.body, B.var, Name(b))) for b in domain)
        if isinstance(B, All):
            return all(ev(subst(B.body, B.var, Name(b))) for b in domain)
        raise EvaluationError("not a formula: %r" % (B,))

    return ev(A)


def oracle_sequent(seq, max_rank: int = 4) -> bool:
    """A sequent is true when some member is."""
    return any(oracle_eval(A, max_rank) for A in seq)


# ---------------------------------------------------------------------------
# trace export


def trace_lines(d: DerivTerm, k: int, sampler=None) -> list:
    """Line-per-node export of a depth-k expansion, deterministic for a
    fixed sampler."""
    sampler = sampler or default_sampler()
    lines = []
    counter = [0]

    def walk(term, fuel, parent):
        counter[0] += 1
        nid = counter[0]
        sig = term.sig
        try:
            v = rule_of(term)
        except (ConstructionError, EvaluationError) as ex:
            lines.append("%d error %s - - %d %d %d" % (
                nid, type(ex).__name__, sig.rank, len(sig.hull.generators), parent))
            return
        main = (
            render_formula(v.main).replace(" ", "~") if v.main is not None else "-"
        )
        lines.append(
            "%d %s %s %s %d %d %d"
            % (nid, v.rule_name, main, render(sig.bound).replace(" ", ""),
               sig.rank, len(sig.hull.generators), parent)
        )
        if fuel <= 0:
            return
        if isinstance(v, TrueLeaf):
            return
        if isinstance(v, VeeNode):
            walk(v.sub, fuel - 1, nid)
            return
        if isinstance(v, WedgeNode):
            if isinstance(v.index_set, JUniverse):
                idx = sampler(v)
            else:
                idx = v.indices()
            for i in idx:
                walk(v.premise(i), fuel - 1, nid)
            return
        for i in v.indices():
            walk(v.premise(i), fuel - 1, nid)

    walk(d, k, 0)
    return lines

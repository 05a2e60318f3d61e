"""A small corpus of checked finitary proofs exercising every rule and
axiom schema: logical tautologies of depths 0 through 3, one instance
of each set-existence axiom, a foundation instance over a transitive
rank-3 set, a reflection instance at the lowest admissible level, and a
proof with a single cut.

Each entry records whether its parameters are fully concrete (so the
soundness evaluator applies) and whether its embedding contains a
reflection inference (which the evaluator cannot certify).
"""

from __future__ import annotations

from dataclasses import dataclass

from .finitary import (
    ProofNode,
    ProofScript,
    ax_collection,
    ax_extensionality,
    ax_foundation,
    ax_infinity,
    ax_pair,
    ax_reflection,
    ax_separation,
    ax_union,
)
from .formulas import (
    All,
    Ex,
    Mem,
    Name,
    NotMem,
    Or,
    Var,
    ZERO_TERM,
    negate,
    seq,
)
from .universe import Concrete, EMPTY


def _hf(*members) -> Concrete:
    return Concrete(frozenset(members))


ONE = _hf(EMPTY)  # {0}
TWO = _hf(EMPTY, ONE)  # {0, {0}}
#: transitive set of rank 3
TRANS3 = _hf(EMPTY, ONE, _hf(ONE))


@dataclass
class CorpusEntry:
    name: str
    script: ProofScript
    concrete: bool = True  # parameters all concrete
    has_ref: bool = False  # embedding contains a reflection inference
    has_cut: bool = False


def _entry(name, root, assignment=None, **flags):
    return CorpusEntry(name, ProofScript(root, {}, assignment or {}), **flags)


def _logax(A):
    return ProofNode("logax", seq(A, negate(A)), main=A)


def taut_depth0():
    return _entry("taut-depth0", _logax(Mem(ZERO_TERM, ZERO_TERM)))


def taut_depth1():
    return _entry("taut-depth1", _logax(Ex("y", Mem(ZERO_TERM, Var("y")))))


def taut_depth2():
    return _entry("taut-depth2", _logax(Ex("x", Ex("y", Mem(Var("x"), Var("y"))))))


def taut_depth3():
    body = Or(Mem(Var("x"), Var("y")), Mem(Var("y"), Var("z")))
    return _entry("taut-depth3", _logax(Ex("x", Ex("y", Ex("z", body)))))


def pair_instance():
    inst = ax_pair(ZERO_TERM, Name(ONE))
    return _entry(
        "pair", ProofNode("axiom:pair", seq(inst), term=ZERO_TERM, term2=Name(ONE))
    )


def union_instance():
    """Union over a free variable, closed by the assignment."""
    inst = ax_union(Var("a"))
    root = ProofNode("axiom:union", seq(inst), term=Var("a"))
    return _entry("union", root, assignment={"a": TWO})


def extensionality_instance():
    inst = ax_extensionality(ZERO_TERM, ZERO_TERM, Name(ONE))
    return _entry(
        "extensionality",
        ProofNode(
            "axiom:extensionality",
            seq(inst),
            term=ZERO_TERM,
            term2=ZERO_TERM,
            term3=Name(ONE),
        ),
    )


def separation_instance():
    phi = Mem(Var("x"), Name(ONE))
    inst = ax_separation(Name(TWO), "x", phi)
    return _entry(
        "separation",
        ProofNode("axiom:separation", seq(inst), term=Name(TWO), var="x", formula=phi),
    )


def collection_instance():
    phi = Mem(Var("x"), Var("y"))
    inst = ax_collection(Name(ONE), "x", "y", phi)
    return _entry(
        "collection",
        ProofNode(
            "axiom:collection",
            seq(inst),
            term=Name(ONE),
            var="x",
            var2="y",
            formula=phi,
        ),
    )


def infinity_instance():
    return _entry(
        "infinity",
        ProofNode("axiom:infinity", seq(ax_infinity())),
        concrete=False,
    )


def foundation_instance():
    phi = Mem(Var("x"), Name(TRANS3))
    inst = ax_foundation("x", "y", phi)
    return _entry(
        "foundation",
        ProofNode("axiom:foundation", seq(inst), var="x", var2="y", formula=phi),
    )


def reflection_instance():
    """A reflection instance whose formula sits exactly at level Pi_3."""
    body = Or(NotMem(Var("z"), Var("x")), Or(Mem(Var("z"), Var("y")), Mem(ZERO_TERM, Var("y"))))
    A = All("x", Ex("y", All("z", body)))
    inst = ax_reflection(A, ZERO_TERM)
    return _entry(
        "reflection",
        ProofNode("axiom:reflection", seq(inst), formula=A, term=ZERO_TERM, var="c"),
        has_ref=True,
    )


def one_cut_proof():
    """A cut on a bounded formula below a disjunctive conclusion; its
    embedding has rank 2 and each elimination round lowers it."""
    m0 = Mem(ZERO_TERM, ZERO_TERM)
    D = Or(m0, negate(m0))
    left = ProofNode("or", seq(D, negate(m0)), (_logax(m0),), main=D)
    right = ProofNode("or", seq(m0, D), (_logax(m0),), main=D)
    root = ProofNode("cut", seq(D), (left, right), formula=m0)
    return _entry("one-cut", root, has_cut=True)


BUILDERS = [
    taut_depth0,
    taut_depth1,
    taut_depth2,
    taut_depth3,
    pair_instance,
    union_instance,
    extensionality_instance,
    separation_instance,
    collection_instance,
    infinity_instance,
    foundation_instance,
    reflection_instance,
    one_cut_proof,
]


def build_corpus() -> list:
    return [b() for b in BUILDERS]

"""Desk-scale set universe: hereditarily finite sets, named abstract
parameters, ranks, and symbolic hull descriptors.

Concrete sets are honest hereditarily finite sets and support exact
truth evaluation of bounded formulas.  Abstract sets are named
parameters with a declared rank; they stand in for members of the
(uncountable) intended universe that have no finite presentation, and
any attempt to evaluate membership questions about them raises
``EvaluationError``.

A ``Hull`` is a certificate-style descriptor of the smallest transitive
admissible hull generated by a finite set of parameters.  Membership is
a decidable syntactic closure check, not genuine admissibility: every
hereditarily finite set is a member, a generator and everything in its
transitive closure is a member, and ordinal codes are members because
the code set below epsilon_0 is generated from 0 by addition, natural
sum and base-omega exponentiation, all of which every hull is closed
under.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ordinals import CNF_W, OrdCode, Sub, cmp, cnf_from_int, LESS


class EvaluationError(Exception):
    """A truth evaluation hit an abstract parameter or an opaque atom."""


# ---------------------------------------------------------------------------
# desk sets


@dataclass(frozen=True)
class Concrete:
    """A hereditarily finite set, given extensionally."""

    members: frozenset

    def __repr__(self):
        return "Concrete(%s)" % (render_set(self),)


@dataclass(frozen=True)
class Abstract:
    """A named set parameter with a declared rank below Omega."""

    name: str
    declared_rank: OrdCode

    def __post_init__(self):
        if not isinstance(self.declared_rank, Sub):
            raise ValueError("abstract parameters carry a sub-Omega rank")

    def __repr__(self):
        return "Abstract(%r)" % (self.name,)


DeskSet = Concrete | Abstract

EMPTY = Concrete(frozenset())

#: Distinguished parameter witnessing the infinity axiom.  No
#: hereditarily finite witness exists, so embedding that axiom uses this
#: always-available abstract set; hulls treat it as a free member.
OMEGA_WITNESS = Abstract("omega", Sub(CNF_W))


def is_concrete(a: DeskSet) -> bool:
    """True when *a* and everything hereditarily inside it is Concrete."""
    if isinstance(a, Abstract):
        return False
    return all(is_concrete(b) for b in a.members)


def rank(a: DeskSet) -> OrdCode:
    """Set-theoretic rank: sup of member ranks plus one, or the declared one."""
    if isinstance(a, Abstract):
        return a.declared_rank
    best = Sub(cnf_from_int(0))
    for b in a.members:
        r = rank(b)
        # successor of a Sub code, taken via the CNF layer
        from .ordinals import cnf_add, cnf_from_int as _ci

        succ = Sub(cnf_add(r.value, _ci(1))) if isinstance(r, Sub) else r
        if cmp(best, succ) is LESS:
            best = succ
    return best


def rank_int(a: DeskSet) -> int:
    """Rank of a fully concrete set as a plain integer."""
    if not is_concrete(a):
        raise EvaluationError("rank_int needs a concrete set")
    if not a.members:
        return 0
    return 1 + max(rank_int(b) for b in a.members)


def transitive_closure(a: DeskSet) -> frozenset:
    """All desk sets hereditarily reachable from *a*, excluding *a* itself.

    Abstract members contribute themselves (their elements are unknown).
    """
    out = set()

    def walk(x):
        if isinstance(x, Abstract):
            return
        for b in x.members:
            if b not in out:
                out.add(b)
                walk(b)

    walk(a)
    return frozenset(out)


def set_members(a: DeskSet) -> frozenset:
    """Members of *a*; abstract sets have no enumerable members."""
    if isinstance(a, Abstract):
        raise EvaluationError(
            "cannot enumerate members of abstract parameter %r" % a.name
        )
    return a.members


def sets_equal(a: DeskSet, b: DeskSet) -> bool:
    """Extensional equality; abstract parameters only equal themselves."""
    if isinstance(a, Abstract) or isinstance(b, Abstract):
        return a == b
    return a == b


def set_member(x: DeskSet, a: DeskSet) -> bool:
    """Decide x in a for concrete a."""
    if isinstance(a, Abstract):
        raise EvaluationError(
            "membership in abstract parameter %r is undecidable" % a.name
        )
    return any(sets_equal(x, m) for m in a.members)


# ---------------------------------------------------------------------------
# literals


def render_set(a: DeskSet) -> str:
    if isinstance(a, Abstract):
        return a.name
    inner = sorted(render_set(b) for b in a.members)
    return "{" + ",".join(inner) + "}"


def parse_set(text: str, params: dict | None = None) -> DeskSet:
    """Parse a set literal like ``{{},{{}}}``; names resolve via *params*."""
    params = params or {}
    text = text.strip()
    pos = 0

    def parse_one():
        nonlocal pos
        if pos < len(text) and text[pos] == "{":
            pos += 1
            members = set()
            while True:
                while pos < len(text) and text[pos] in " ,":
                    pos += 1
                if pos >= len(text):
                    raise ValueError("unterminated set literal")
                if text[pos] == "}":
                    pos += 1
                    return Concrete(frozenset(members))
                members.add(parse_one())
        start = pos
        while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        name = text[start:pos]
        if not name:
            raise ValueError("bad set literal at position %d" % pos)
        if name not in params:
            raise ValueError("unknown set parameter %r" % name)
        return params[name]

    result = parse_one()
    if text[pos:].strip():
        raise ValueError("trailing input after set literal: %r" % text[pos:])
    return result


# ---------------------------------------------------------------------------
# hereditarily finite enumeration


@lru_cache(maxsize=None)
def _hf_by_rank(r: int) -> tuple:
    """All hereditarily finite sets of rank <= r, smallest first."""
    if r == 0:
        return (EMPTY,)
    prev = _hf_by_rank(r - 1)
    out = []
    n = len(prev)
    for mask in range(1 << n):
        members = frozenset(prev[i] for i in range(n) if mask & (1 << i))
        out.append(Concrete(members))
    out.sort(key=lambda s: (rank_int(s), len(s.members), render_set(s)))
    return tuple(out)


def enumerate_hf(count: int) -> list:
    """The first *count* hereditarily finite sets, by rank then size."""
    r = 0
    while len(_hf_by_rank(r)) < count and r < 4:
        r += 1
    return list(_hf_by_rank(r))[:count]


# ---------------------------------------------------------------------------
# hulls


@dataclass(frozen=True)
class Hull:
    """Symbolic descriptor of an admissible hull: a finite generator set."""

    generators: frozenset

    def __repr__(self):
        names = sorted(render_set(g) for g in self.generators)
        return "Hull(%s)" % ", ".join(names)


EMPTY_HULL = Hull(frozenset())


def hull_extend(P: Hull, iota: DeskSet) -> Hull:
    """The extended hull P(iota); a no-op when iota is already a member."""
    if hull_contains(P, iota):
        return P
    return Hull(P.generators | {iota})


def hull_extend_list(P: Hull, iotas) -> Hull:
    """Fold hull_extend left over a parameter list."""
    for iota in iotas:
        P = hull_extend(P, iota)
    return P


def _abstract_atoms(a: DeskSet) -> frozenset:
    """Abstract parameters hereditarily inside *a* (including *a* itself)."""
    if isinstance(a, Abstract):
        return frozenset({a})
    out = frozenset()
    for b in a.members:
        out |= _abstract_atoms(b)
    return out


def hull_contains(P: Hull, x) -> bool:
    """Decide membership of a desk set or an ordinal code in the hull.

    Every hereditarily finite set is in every transitive admissible
    hull.  An abstract parameter is in when it is a generator or sits in
    the transitive closure of one.  Ordinal codes are always in: codes
    below epsilon_0 arise from 0 by the closure operations, Omega is in
    by definition, and every code here is built from those two layers by
    addition, natural sum and exponentiation, under all of which hulls
    are closed.
    """
    if isinstance(x, OrdCode):
        return True
    if isinstance(x, Concrete):
        return all(_contains_abstract(P, p) for p in _abstract_atoms(x))
    if isinstance(x, Abstract):
        return _contains_abstract(P, x)
    raise TypeError("hull membership is defined for desk sets and codes")


def _contains_abstract(P: Hull, p: Abstract) -> bool:
    if p == OMEGA_WITNESS:
        return True
    for g in P.generators:
        if g == p or p in transitive_closure(g):
            return True
    return False


def hull_subsumes(P2: Hull, P1: Hull) -> bool:
    """True when every member of P1 is a member of P2."""
    return all(hull_contains(P2, g) for g in P1.generators)


# ---------------------------------------------------------------------------
# bounded truth evaluation (delegates to the formula module lazily to
# avoid an import cycle: formulas need DeskSet for name terms)


def eval_delta0(A) -> bool:
    """Evaluate a bounded sentence over concrete sets.

    Raises EvaluationError on abstract parameters or opaque atoms.
    """
    from . import formulas

    return formulas.eval_formula_bounded(A)

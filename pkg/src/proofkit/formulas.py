"""Negation-normal formulas over the language of membership with set
names, plus the syntactic toolbox the calculi need: negation,
Levy-hierarchy classification, depth, name support, substitution,
relativization, and the disjunction/conjunction decomposition that
drives the infinitary rules.

Atoms are ``t in s`` and ``t notin s`` together with the opaque pair
``ad(t)`` / ``notad(t)``.  The latter stand for "t is a transitive model
of the base set theory"; they are never evaluated or decomposed, only
carried around inside reflection sequents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .universe import (
    Abstract,
    Concrete,
    DeskSet,
    EMPTY,
    EvaluationError,
    is_concrete,
    parse_set,
    render_set,
    set_member,
    set_members,
)


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return "Var(%r)" % self.name


@dataclass(frozen=True)
class Name:
    """A set constant naming a desk set."""

    value: DeskSet

    def __repr__(self):
        return "Name(%s)" % render_set(self.value)


Term = Var | Name

#: the individual constant 0, naming the empty set
ZERO_TERM = Name(EMPTY)


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True)
class NotMem:
    left: Term
    right: Term


@dataclass(frozen=True)
class Ad:
    """Opaque atom: the term is a transitive model of the base theory."""

    term: Term


@dataclass(frozen=True)
class NotAd:
    term: Term


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class BEx:
    """Bounded existential: exists var in bound, body."""

    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class BAll:
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class Ex:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class All:
    var: str
    body: "Formula"


Formula = Mem | NotMem | Ad | NotAd | Or | And | BEx | BAll | Ex | All

Sequent = frozenset


def seq(*formulas) -> Sequent:
    return frozenset(formulas)


def or_chain(*parts) -> Formula:
    """Right-nested disjunction of two or more formulas."""
    if len(parts) == 1:
        return parts[0]
    return Or(parts[0], or_chain(*parts[1:]))


def implies(a: Formula, b: Formula) -> Formula:
    """Material implication, rendered in negation-normal form."""
    return Or(negate(a), b)


def equals(a: Term, b: Term) -> Formula:
    """Extensional equality as its bounded abbreviation."""
    x = _fresh_var(frozenset({a, b}))
    return And(
        BAll(x, a, Mem(Var(x), b)),
        BAll(x, b, Mem(Var(x), a)),
    )


def not_equals(a: Term, b: Term) -> Formula:
    return negate(equals(a, b))


def _fresh_var(avoid_terms) -> str:
    used = {t.name for t in avoid_terms if isinstance(t, Var)}
    i = 0
    while "u%d" % i in used:
        i += 1
    return "u%d" % i


# ---------------------------------------------------------------------------
# negation (de Morgan dual)


def negate(A: Formula) -> Formula:
    if isinstance(A, Mem):
        return NotMem(A.left, A.right)
    if isinstance(A, NotMem):
        return Mem(A.left, A.right)
    if isinstance(A, Ad):
        return NotAd(A.term)
    if isinstance(A, NotAd):
        return Ad(A.term)
    if isinstance(A, Or):
        return And(negate(A.left), negate(A.right))
    if isinstance(A, And):
        return Or(negate(A.left), negate(A.right))
    if isinstance(A, BEx):
        return BAll(A.var, A.bound, negate(A.body))
    if isinstance(A, BAll):
        return BEx(A.var, A.bound, negate(A.body))
    if isinstance(A, Ex):
        return All(A.var, negate(A.body))
    if isinstance(A, All):
        return Ex(A.var, negate(A.body))
    raise TypeError("not a formula: %r" % (A,))


# ---------------------------------------------------------------------------
# variables and substitution


def free_vars(A) -> frozenset:
    if isinstance(A, frozenset):
        out = frozenset()
        for member in A:
            out |= free_vars(member)
        return out
    if isinstance(A, (Mem, NotMem)):
        return frozenset(
            t.name for t in (A.left, A.right) if isinstance(t, Var)
        )
    if isinstance(A, (Ad, NotAd)):
        return frozenset({A.term.name}) if isinstance(A.term, Var) else frozenset()
    if isinstance(A, (Or, And)):
        return free_vars(A.left) | free_vars(A.right)
    if isinstance(A, (BEx, BAll)):
        bound_fv = (
            frozenset({A.bound.name}) if isinstance(A.bound, Var) else frozenset()
        )
        return bound_fv | (free_vars(A.body) - {A.var})
    if isinstance(A, (Ex, All)):
        return free_vars(A.body) - {A.var}
    raise TypeError("not a formula: %r" % (A,))


def is_sentence(A: Formula) -> bool:
    return not free_vars(A)


def _subst_term(t: Term, var: str, value: Term) -> Term:
    if isinstance(t, Var) and t.name == var:
        return value
    return t


def subst(A: Formula, var: str, value: Term) -> Formula:
    """Capture-avoiding substitution of a closed term for a variable."""
    if isinstance(A, Mem):
        return Mem(_subst_term(A.left, var, value), _subst_term(A.right, var, value))
    if isinstance(A, NotMem):
        return NotMem(_subst_term(A.left, var, value), _subst_term(A.right, var, value))
    if isinstance(A, Ad):
        return Ad(_subst_term(A.term, var, value))
    if isinstance(A, NotAd):
        return NotAd(_subst_term(A.term, var, value))
    if isinstance(A, Or):
        return Or(subst(A.left, var, value), subst(A.right, var, value))
    if isinstance(A, And):
        return And(subst(A.left, var, value), subst(A.right, var, value))
    if isinstance(A, BEx):
        bound = _subst_term(A.bound, var, value)
        body = A.body if A.var == var else subst(A.body, var, value)
        return BEx(A.var, bound, body)
    if isinstance(A, BAll):
        bound = _subst_term(A.bound, var, value)
        body = A.body if A.var == var else subst(A.body, var, value)
        return BAll(A.var, bound, body)
    if isinstance(A, Ex):
        if A.var == var:
            return A
        return Ex(A.var, subst(A.body, var, value))
    if isinstance(A, All):
        if A.var == var:
            return A
        return All(A.var, subst(A.body, var, value))
    raise TypeError("not a formula: %r" % (A,))


def close_with_zero(A: Formula) -> Formula:
    """Substitute the constant 0 for every free variable."""
    for v in sorted(free_vars(A)):
        A = subst(A, v, ZERO_TERM)
    return A


# ---------------------------------------------------------------------------
# classification


def is_delta0(A: Formula) -> bool:
    """No unbounded quantifiers anywhere."""
    if isinstance(A, (Mem, NotMem, Ad, NotAd)):
        return True
    if isinstance(A, (Or, And)):
        return is_delta0(A.left) and is_delta0(A.right)
    if isinstance(A, (BEx, BAll)):
        return is_delta0(A.body)
    return False


def member_sigma(A: Formula, i: int) -> bool:
    """Is A a Sigma_i formula (syntactically)?"""
    if i <= 0:
        return is_delta0(A)
    if is_delta0(A):
        return True
    if isinstance(A, (Or, And)):
        return member_sigma(A.left, i) and member_sigma(A.right, i)
    if isinstance(A, (BEx, BAll)):
        return member_sigma(A.body, i)
    if isinstance(A, Ex):
        return member_sigma(A.body, i)
    if isinstance(A, All):
        return member_pi(A, i - 1)
    raise TypeError("not a formula: %r" % (A,))


def member_pi(A: Formula, i: int) -> bool:
    """Is A a Pi_i formula (syntactically)?"""
    if i <= 0:
        return is_delta0(A)
    if is_delta0(A):
        return True
    if isinstance(A, (Or, And)):
        return member_pi(A.left, i) and member_pi(A.right, i)
    if isinstance(A, (BEx, BAll)):
        return member_pi(A.body, i)
    if isinstance(A, All):
        return member_pi(A.body, i)
    if isinstance(A, Ex):
        return member_sigma(A, i - 1)
    raise TypeError("not a formula: %r" % (A,))


def classify(A: Formula):
    """Minimal hierarchy level of A.

    Returns "Delta0", ("Sigma", i), ("Pi", i), or ("Delta", i) when A
    lies in both Sigma_i and Pi_i without being lower.
    """
    if is_delta0(A):
        return "Delta0"
    i = 1
    while True:
        s, p = member_sigma(A, i), member_pi(A, i)
        if s and p:
            return ("Delta", i)
        if s:
            return ("Sigma", i)
        if p:
            return ("Pi", i)
        i += 1


# ---------------------------------------------------------------------------
# depth and support


def depth(A: Formula) -> int:
    """Unbounded-quantifier nesting measure."""
    if is_delta0(A):
        return 0
    if isinstance(A, (Or, And)):
        return max(depth(A.left), depth(A.right)) + 1
    if isinstance(A, (BEx, BAll, Ex, All)):
        return depth(subst(A.body, A.var, ZERO_TERM)) + 1
    raise TypeError("not a formula: %r" % (A,))


def _term_names(t: Term) -> frozenset:
    if isinstance(t, Name):
        return frozenset({t.value})
    return frozenset()


def support(A) -> frozenset:
    """Desk sets named in a formula, or in each member of a sequent."""
    if isinstance(A, frozenset):
        out = frozenset()
        for member in A:
            out |= support(member)
        return out
    if isinstance(A, (Mem, NotMem)):
        return _term_names(A.left) | _term_names(A.right)
    if isinstance(A, (Ad, NotAd)):
        return _term_names(A.term)
    if isinstance(A, (Or, And)):
        return support(A.left) | support(A.right)
    if isinstance(A, (BEx, BAll)):
        return _term_names(A.bound) | support(A.body)
    if isinstance(A, (Ex, All)):
        return support(A.body)
    raise TypeError("not a formula or sequent: %r" % (A,))


# ---------------------------------------------------------------------------
# relativization


def relativize(A: Formula, c: Term) -> Formula:
    """Bound every unbounded quantifier in A by the term c."""
    if isinstance(A, (Mem, NotMem, Ad, NotAd)):
        return A
    if isinstance(A, Or):
        return Or(relativize(A.left, c), relativize(A.right, c))
    if isinstance(A, And):
        return And(relativize(A.left, c), relativize(A.right, c))
    if isinstance(A, BEx):
        return BEx(A.var, A.bound, relativize(A.body, c))
    if isinstance(A, BAll):
        return BAll(A.var, A.bound, relativize(A.body, c))
    if isinstance(A, Ex):
        return BEx(A.var, c, relativize(A.body, c))
    if isinstance(A, All):
        return BAll(A.var, c, relativize(A.body, c))
    raise TypeError("not a formula: %r" % (A,))


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class JEmpty:
    pass


@dataclass(frozen=True)
class JTwo:
    pass


@dataclass(frozen=True)
class JBounded:
    bound: DeskSet


@dataclass(frozen=True)
class JUniverse:
    pass


J_EMPTY = JEmpty()
J_TWO = JTwo()
J_UNIVERSE = JUniverse()

DISJUNCTIVE = "disjunctive"
CONJUNCTIVE = "conjunctive"


@dataclass(frozen=True)
class Decomposition:
    polarity: str
    index_set: JEmpty | JTwo | JBounded | JUniverse
    main: Formula

    def instantiate(self, iota) -> Formula:
        """The component A_iota; iota is 0/1 for binary connectives and a
        desk set for quantifiers."""
        A = self.main
        if isinstance(self.index_set, JEmpty):
            raise IndexError("empty index set has no components")
        if isinstance(self.index_set, JTwo):
            if iota not in (0, 1):
                raise IndexError("binary index must be 0 or 1")
            return A.left if iota == 0 else A.right
        if not isinstance(iota, (Concrete, Abstract)):
            raise IndexError("quantifier index must be a desk set")
        return subst(A.body, A.var, Name(iota))

    def indices(self):
        """Concrete index list, available except for the universe case."""
        if isinstance(self.index_set, JEmpty):
            return []
        if isinstance(self.index_set, JTwo):
            return [0, 1]
        if isinstance(self.index_set, JBounded):
            return sorted(
                set_members(self.index_set.bound), key=lambda s: render_set(s)
            )
        raise EvaluationError("the universe index set is not enumerable")


def decompose(A: Formula) -> Decomposition:
    """Assign the disjunction or conjunction the infinitary rules read off
    a sentence.  Bounded sentences decompose by their truth value, so
    abstract parameters or opaque atoms inside them raise
    EvaluationError."""
    if is_delta0(A):
        pol = CONJUNCTIVE if eval_formula_bounded(A) else DISJUNCTIVE
        return Decomposition(pol, J_EMPTY, A)
    if isinstance(A, Or):
        return Decomposition(DISJUNCTIVE, J_TWO, A)
    if isinstance(A, And):
        return Decomposition(CONJUNCTIVE, J_TWO, A)
    if isinstance(A, (BEx, BAll)):
        if not isinstance(A.bound, Name):
            raise ValueError("open sentence cannot be decomposed: %r" % (A,))
        jset = JBounded(A.bound.value)
        pol = DISJUNCTIVE if isinstance(A, BEx) else CONJUNCTIVE
        return Decomposition(pol, jset, A)
    if isinstance(A, Ex):
        return Decomposition(DISJUNCTIVE, J_UNIVERSE, A)
    if isinstance(A, All):
        return Decomposition(CONJUNCTIVE, J_UNIVERSE, A)
    raise TypeError("not a formula: %r" % (A,))


# ---------------------------------------------------------------------------
# bounded truth evaluation


def contains_opaque(A: Formula) -> bool:
    if isinstance(A, (Ad, NotAd)):
        return True
    if isinstance(A, (Or, And)):
        return contains_opaque(A.left) or contains_opaque(A.right)
    if isinstance(A, (BEx, BAll, Ex, All)):
        return contains_opaque(A.body)
    return False


def _term_value(t: Term) -> DeskSet:
    if isinstance(t, Var):
        raise EvaluationError("open term %r in evaluation" % (t,))
    return t.value


def eval_formula_bounded(A: Formula) -> bool:
    """Classical truth of a bounded sentence over concrete sets."""
    if isinstance(A, Mem):
        return set_member(_term_value(A.left), _term_value(A.right))
    if isinstance(A, NotMem):
        return not set_member(_term_value(A.left), _term_value(A.right))
    if isinstance(A, (Ad, NotAd)):
        raise EvaluationError("opaque atom cannot be evaluated")
    if isinstance(A, Or):
        return eval_formula_bounded(A.left) or eval_formula_bounded(A.right)
    if isinstance(A, And):
        return eval_formula_bounded(A.left) and eval_formula_bounded(A.right)
    if isinstance(A, BEx):
        bound = _term_value(A.bound)
        return any(
            eval_formula_bounded(subst(A.body, A.var, Name(b)))
            for b in set_members(bound)
        )
    if isinstance(A, BAll):
        bound = _term_value(A.bound)
        return all(
            eval_formula_bounded(subst(A.body, A.var, Name(b)))
            for b in set_members(bound)
        )
    raise EvaluationError("unbounded quantifier in bounded evaluation")


# ---------------------------------------------------------------------------
# s-expression syntax


def render_formula(A: Formula) -> str:
    if isinstance(A, Mem):
        return "(in %s %s)" % (render_term(A.left), render_term(A.right))
    if isinstance(A, NotMem):
        return "(notin %s %s)" % (render_term(A.left), render_term(A.right))
    if isinstance(A, Ad):
        return "(ad %s)" % render_term(A.term)
    if isinstance(A, NotAd):
        return "(notad %s)" % render_term(A.term)
    if isinstance(A, Or):
        return "(or %s %s)" % (render_formula(A.left), render_formula(A.right))
    if isinstance(A, And):
        return "(and %s %s)" % (render_formula(A.left), render_formula(A.right))
    if isinstance(A, BEx):
        return "(bex %s %s %s)" % (A.var, render_term(A.bound), render_formula(A.body))
    if isinstance(A, BAll):
        return "(ball %s %s %s)" % (A.var, render_term(A.bound), render_formula(A.body))
    if isinstance(A, Ex):
        return "(ex %s %s)" % (A.var, render_formula(A.body))
    if isinstance(A, All):
        return "(all %s %s)" % (A.var, render_formula(A.body))
    raise TypeError("not a formula: %r" % (A,))


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t == ZERO_TERM:
        return "0"
    return render_set(t.value)


def render_sequent(G: Sequent) -> str:
    return "(seq %s)" % " ".join(sorted(render_formula(A) for A in G))


def _tokenize_sexp(text: str) -> list:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read_sexp(tokens: list, pos: int):
    if pos >= len(tokens):
        raise ValueError("unexpected end of expression")
    if tokens[pos] == "(":
        out = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _read_sexp(tokens, pos)
            out.append(item)
        if pos >= len(tokens):
            raise ValueError("missing closing parenthesis")
        return out, pos + 1
    if tokens[pos] == ")":
        raise ValueError("unexpected closing parenthesis")
    return tokens[pos], pos + 1


def parse_sexp(text: str):
    tokens = _tokenize_sexp(text)
    tree, pos = _read_sexp(tokens, 0)
    if pos != len(tokens):
        raise ValueError("trailing input: %r" % tokens[pos:])
    return tree


def _term_from_tree(tree, params: dict) -> Term:
    if not isinstance(tree, str):
        raise ValueError("terms are atoms, got %r" % (tree,))
    if tree == "0":
        return ZERO_TERM
    if tree.startswith("{"):
        return Name(parse_set(tree, params))
    if tree in params:
        return Name(params[tree])
    return Var(tree)


def formula_from_tree(tree, params: dict | None = None) -> Formula:
    params = params or {}
    if not isinstance(tree, list) or not tree:
        raise ValueError("formula expressions are lists, got %r" % (tree,))
    head = tree[0]
    if head in ("in", "notin"):
        if len(tree) != 3:
            raise ValueError("%s takes two terms" % head)
        cls = Mem if head == "in" else NotMem
        return cls(_term_from_tree(tree[1], params), _term_from_tree(tree[2], params))
    if head in ("ad", "notad"):
        if len(tree) != 2:
            raise ValueError("%s takes one term" % head)
        cls = Ad if head == "ad" else NotAd
        return cls(_term_from_tree(tree[1], params))
    if head in ("or", "and"):
        if len(tree) != 3:
            raise ValueError("%s takes two formulas" % head)
        cls = Or if head == "or" else And
        return cls(
            formula_from_tree(tree[1], params), formula_from_tree(tree[2], params)
        )
    if head in ("bex", "ball"):
        if len(tree) != 4 or not isinstance(tree[1], str):
            raise ValueError("%s takes a variable, a bound and a body" % head)
        cls = BEx if head == "bex" else BAll
        return cls(
            tree[1],
            _term_from_tree(tree[2], params),
            formula_from_tree(tree[3], params),
        )
    if head in ("ex", "all"):
        if len(tree) != 3 or not isinstance(tree[1], str):
            raise ValueError("%s takes a variable and a body" % head)
        cls = Ex if head == "ex" else All
        return cls(tree[1], formula_from_tree(tree[2], params))
    if head == "not":
        raise ValueError("input must be negation-normal; apply de Morgan first")
    raise ValueError("unknown formula head %r" % head)


def parse_formula(text: str, params: dict | None = None) -> Formula:
    return formula_from_tree(parse_sexp(text), params)


def sequent_from_tree(tree, params: dict | None = None) -> Sequent:
    if not isinstance(tree, list) or not tree or tree[0] != "seq":
        raise ValueError("sequent expressions start with 'seq'")
    return frozenset(formula_from_tree(t, params) for t in tree[1:])


def parse_sequent(text: str, params: dict | None = None) -> Sequent:
    return sequent_from_tree(parse_sexp(text), params)

"""Moment-matrix relaxation for party-local dichotomic observables.

The scenario fixes per-party input counts (default: the first party has two
inputs, every other party three, the third input being the key setting).
Letters are Hermitian dichotomic operator symbols; words canonicalize by
stable-sorting letters by party (different parties commute) and cancelling
adjacent equal letters (squares are the identity).  The moment matrix over a
monomial basis has entry class ``canonicalize(reverse(u) . v)``; classes are
additionally identified under word reversal, which is valid for the real
symmetric relaxation and can only loosen the bound.

Perfect correlations in the key settings are the statement that the operator

    C = P+ x Q+ x R+ ... + P- x Q- x R- ...

(projectors onto the +-1 eigenspaces of the key observables) has expectation
one.  Expanding the projectors ``P+- = (1 +- P)/2`` leaves only even products,
so ``tr(C rho) = 2^(1-N) * sum over even-size subsets of the key observables``
of their correlators; each correlator is at most one in modulus, hence
``tr(C rho) = 1`` holds exactly when every *pairwise* key correlator equals
one.  Those pairwise equalities are what this module pins.

Pinning a correlator ``<P Q> = 1`` forces the moment-matrix rows of any two
basis monomials ``u`` and ``v`` with ``M_uu = M_vv = M_uv = 1`` to coincide
(the Gram vectors have vanishing distance), so the pinned problem has no
strictly feasible point.  ``reduce_structure`` therefore iterates exactly that
implication: rows joined by a pinned unit entry are identified, their entry
classes are merged columnwise, and newly pinned classes are propagated until
a fixpoint.  Every identification is forced for every feasible matrix of the
pinned problem, so the reduced problem has the same optimal value, and after
deduplication the reduced ``M(0) = I`` is strictly feasible again.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .mabk import BellExpression, mabk_expression
from .sdp import (
    SdpProblem,
    SdpSolution,
    certified_upper_bound,
    solve,
    verify_certificate,
)

KEY_INPUT = 2  # the key-generation setting of every party after the first


class OperatorLetter(NamedTuple):
    party: int
    input: int


Word = tuple[OperatorLetter, ...]


def default_scenario(n_parties: int = 3) -> tuple[int, ...]:
    """Input counts per party: two for the first party, three for the rest."""
    if n_parties < 2:
        raise ValueError("need at least two parties")
    return (2,) + (3,) * (n_parties - 1)


def canonicalize(word: tuple[OperatorLetter, ...] | list[OperatorLetter]) -> tuple[int, Word]:
    """Sort by party (stable) and cancel adjacent equal letters, to fixpoint.

    The sign is always +1 for this algebra; it is returned so the signature
    matches reductions that do track signs.
    """
    w = sorted(word, key=lambda letter: letter.party)
    while True:
        out: list[OperatorLetter] = []
        cancelled = False
        i = 0
        while i < len(w):
            if i + 1 < len(w) and w[i] == w[i + 1]:
                i += 2
                cancelled = True
            else:
                out.append(w[i])
                i += 1
        w = out
        if not cancelled:
            break
    return 1, tuple(w)


def generate_monomials(scenario: tuple[int, ...], level: int) -> list[Word]:
    """All canonical monomials of length <= level, identity first, sorted."""
    if level < 0:
        raise ValueError("level must be non-negative")
    alphabet = [
        OperatorLetter(party, inp)
        for party, count in enumerate(scenario)
        for inp in range(count)
    ]
    seen: set[Word] = {()}
    for length in range(1, level + 1):
        for combo in itertools.product(alphabet, repeat=length):
            _, w = canonicalize(combo)
            seen.add(w)
    return sorted(seen, key=lambda w: (len(w), w))


def _class_key(word: Word) -> Word:
    """Representative of {word, reversed word} (moments are reversal-symmetric)."""
    _, rev = canonicalize(tuple(reversed(word)))
    return min(word, rev)


@dataclass(frozen=True)
class MomentMatrixStructure:
    """Monomial basis plus the map from matrix entries to moment classes."""

    basis: tuple[Word, ...]
    class_of: np.ndarray  # (d, d) int array of class ids
    class_representatives: tuple[Word, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def n_classes(self) -> int:
        return len(self.class_representatives)

    @property
    def identity_class(self) -> int:
        return int(self.class_of[0, 0])


def build_moment_structure(monomials: list[Word]) -> MomentMatrixStructure:
    if not monomials or monomials[0] != ():
        raise ValueError("monomial list must contain the identity first")
    d = len(monomials)
    class_ids: dict[Word, int] = {}
    reps: list[Word] = []
    class_of = np.empty((d, d), dtype=np.int32)
    for i, u in enumerate(monomials):
        ru = tuple(reversed(u))
        for j, v in enumerate(monomials):
            _, w = canonicalize(ru + v)
            key = _class_key(w)
            idx = class_ids.get(key)
            if idx is None:
                idx = len(reps)
                class_ids[key] = idx
                reps.append(key)
            class_of[i, j] = idx
    return MomentMatrixStructure(tuple(monomials), class_of, tuple(reps))


def encode_objective(
    expr: BellExpression, structure: MomentMatrixStructure
) -> np.ndarray:
    """Coefficient vector over moment classes for a full-correlation expression."""
    lookup = {rep: k for k, rep in enumerate(structure.class_representatives)}
    out = np.zeros(structure.n_classes)
    for term in expr.terms:
        word = tuple(OperatorLetter(p, x) for p, x in enumerate(term.inputs))
        _, w = canonicalize(word)
        key = _class_key(w)
        if key not in lookup:
            raise ValueError(
                f"objective monomial {key} not present in the moment structure;"
                " increase the hierarchy level"
            )
        out[lookup[key]] += float(term.coefficient)
    return out


@dataclass(frozen=True)
class CorrelationConstraint:
    """Pinned moment classes (coefficients 1, right-hand side 1 each)."""

    pinned: dict[int, float]
    pair_words: tuple[Word, ...]

    @property
    def n_equalities(self) -> int:
        return len(self.pinned)


def encode_perfect_correlation(
    structure: MomentMatrixStructure, n_parties: int = 3
) -> CorrelationConstraint:
    """Pairwise key-setting correlators pinned to one (see module docstring)."""
    key_letters = [OperatorLetter(0, 0)] + [
        OperatorLetter(party, KEY_INPUT) for party in range(1, n_parties)
    ]
    lookup = {rep: k for k, rep in enumerate(structure.class_representatives)}
    pinned: dict[int, float] = {}
    words: list[Word] = []
    for a, b in itertools.combinations(key_letters, 2):
        _, w = canonicalize((a, b))
        key = _class_key(w)
        if key not in lookup:
            raise ValueError(f"pair moment {key} missing; level too low")
        pinned[lookup[key]] = 1.0
        words.append(key)
    return CorrelationConstraint(pinned, tuple(words))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class ReducedMoments:
    """Moment structure after pin substitution and forced row identification."""

    kept_rows: tuple[int, ...]
    class_matrix: np.ndarray  # (k, k) of root class ids
    pinned_roots: dict[int, float]
    root_of: np.ndarray  # (n_classes,) map class id -> root id


def reduce_structure(
    structure: MomentMatrixStructure, pinned: dict[int, float]
) -> ReducedMoments:
    """Merge rows forced equal by unit pins; value-preserving (see module doc)."""
    d = structure.dimension
    class_of = structure.class_of
    classes = _UnionFind(structure.n_classes)
    rows = _UnionFind(d)
    pin: dict[int, float] = {}

    def set_pin(root: int, value: float) -> None:
        existing = pin.get(root)
        if existing is not None and abs(existing - value) > 1e-12:
            raise ValueError(
                f"inconsistent pins for one moment class: {existing} vs {value}"
            )
        pin[root] = value

    def union_classes(a: int, b: int) -> None:
        ra, rb = classes.find(a), classes.find(b)
        if ra == rb:
            return
        va, vb = pin.pop(ra, None), pin.pop(rb, None)
        if va is not None and vb is not None and abs(va - vb) > 1e-12:
            raise ValueError(
                f"inconsistent pins while merging classes: {va} vs {vb}"
            )
        classes.union(ra, rb)
        root = classes.find(ra)
        value = va if va is not None else vb
        if value is not None:
            pin[root] = value

    for cid, value in pinned.items():
        set_pin(classes.find(cid), float(value))

    while True:
        merged_any = False
        for a in range(d):
            row_a = class_of[a]
            for b in range(a + 1, d):
                if rows.find(a) == rows.find(b):
                    continue
                if pin.get(classes.find(int(row_a[b]))) == 1.0:
                    rows.union(a, b)
                    merged_any = True
        if not merged_any:
            break
        groups: dict[int, list[int]] = {}
        for a in range(d):
            groups.setdefault(rows.find(a), []).append(a)
        for members in groups.values():
            base = members[0]
            for other in members[1:]:
                for c in range(d):
                    union_classes(int(class_of[base, c]), int(class_of[other, c]))

    kept = tuple(sorted({rows.find(a) for a in range(d)}))
    k = len(kept)
    class_matrix = np.empty((k, k), dtype=np.int32)
    for i, a in enumerate(kept):
        for j, b in enumerate(kept):
            class_matrix[i, j] = classes.find(int(class_of[a, b]))
    root_of = np.array(
        [classes.find(i) for i in range(structure.n_classes)], dtype=np.int32
    )
    return ReducedMoments(kept, class_matrix, dict(pin), root_of)


def lower_to_sdp(
    reduced: ReducedMoments, objective: np.ndarray
) -> tuple[SdpProblem, dict[int, int], float]:
    """Build the dual-form LMI; returns (problem, root -> variable map, const)."""
    k = reduced.class_matrix.shape[0]
    var_of: dict[int, int] = {}
    f0 = np.zeros((k, k))
    vi: list[int] = []
    rr: list[int] = []
    cc: list[int] = []
    for i in range(k):
        for j in range(i, k):
            root = int(reduced.class_matrix[i, j])
            value = reduced.pinned_roots.get(root)
            if value is not None:
                f0[i, j] = value
                f0[j, i] = value
                continue
            v = var_of.setdefault(root, len(var_of))
            vi.append(v)
            rr.append(i)
            cc.append(j)
            if i != j:
                vi.append(v)
                rr.append(j)
                cc.append(i)

    const = 0.0
    c = np.zeros(len(var_of))
    objective_roots = {}
    for cid, coeff in enumerate(objective):
        if coeff == 0.0:
            continue
        root = int(reduced.root_of[cid])
        objective_roots[root] = objective_roots.get(root, 0.0) + float(coeff)
    for root, coeff in objective_roots.items():
        value = reduced.pinned_roots.get(root)
        if value is not None:
            const += coeff * value
            continue
        if root not in var_of:
            raise ValueError("objective class missing from the reduced matrix")
        c[var_of[root]] += coeff

    problem = SdpProblem(
        dimension=k,
        n_vars=len(var_of),
        f0=f0,
        var_index=np.array(vi, dtype=np.intp),
        rows=np.array(rr, dtype=np.intp),
        cols=np.array(cc, dtype=np.intp),
        vals=np.ones(len(vi)),
        c=c,
        equalities=(),
    )
    return problem, var_of, const


@dataclass(frozen=True)
class NpaResult:
    bound: float
    certified_bound: float
    verified: bool
    solution: SdpSolution
    level: int
    constrained: bool
    n_parties: int
    basis_size: int
    reduced_size: int
    n_moment_classes: int
    objective_constant: float


def npa_upper_bound(
    level: int,
    with_constraint: bool,
    tol: float = 1e-9,
    n_parties: int = 3,
    max_iter: int = 120,
) -> NpaResult:
    """Certified upper bound on the Bell value at the given hierarchy level.

    The absolute value in the score needs no second solve: negating every
    observable of the first party maps the expression to its negative while
    preserving the feasible moment set (and the key-setting pins, once each
    key observable is negated along with it), so the maximum of the signed
    objective equals the maximum of its negation.
    """
    if level < 2:
        raise ValueError("hierarchy level must be at least 2 for the objective")
    scenario = default_scenario(n_parties)
    monomials = generate_monomials(scenario, level)
    structure = build_moment_structure(monomials)
    objective = encode_objective(mabk_expression(n_parties), structure)

    pinned: dict[int, float] = {structure.identity_class: 1.0}
    if with_constraint:
        pinned.update(encode_perfect_correlation(structure, n_parties).pinned)

    reduced = reduce_structure(structure, pinned)
    problem, _, const = lower_to_sdp(reduced, objective)
    solution = solve(problem, tol=tol, max_iter=max_iter)
    verified = verify_certificate(problem, solution)
    certified = certified_upper_bound(problem, solution) + 0.0
    return NpaResult(
        bound=solution.bound + const,
        certified_bound=certified + const,
        verified=verified,
        solution=solution,
        level=level,
        constrained=with_constraint,
        n_parties=n_parties,
        basis_size=structure.dimension,
        reduced_size=problem.dimension,
        n_moment_classes=problem.n_vars,
        objective_constant=const,
    )

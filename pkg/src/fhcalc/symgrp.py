"""Symmetric group combinatorics and modular matrix representations.

Permutations are 0-based tuples: ``perm[i]`` is the image of slot ``i``.
``compose(f, g)`` is the function composition applying ``g`` first.  All
actions are right actions on row vectors, and a representation assigns
to ``f`` the matrix of ``x -> x . f``; with these conventions
``matrix(compose(f, g)) == matrix(f) @ matrix(g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ComputationGuardError
from .gf_linalg import kronecker, rank, require_prime
from .graded import GradedSpace, space

Perm = tuple[int, ...]

# Full enumeration of a symmetric group is capped at 8! = 40320 elements.
ENUMERATION_LIMIT = 8


def identity_perm(d: int) -> Perm:
    return tuple(range(d))


def is_permutation(seq: Sequence[int]) -> bool:
    return sorted(seq) == list(range(len(seq)))


def compose(f: Perm, g: Perm) -> Perm:
    """Composite permutation applying ``g`` first, then ``f``."""
    if len(f) != len(g):
        raise ValueError("cannot compose permutations of different sizes")
    return tuple(f[i] for i in g)


def inverse(f: Perm) -> Perm:
    inv = [0] * len(f)
    for i, v in enumerate(f):
        inv[v] = i
    return tuple(inv)


def perm_sign(f: Perm) -> int:
    """Sign of a permutation: parity of the inversion count."""
    d = len(f)
    inversions = sum(1 for i in range(d) for j in range(i + 1, d) if f[i] > f[j])
    return -1 if inversions & 1 else 1


def transposition(d: int, i: int) -> Perm:
    """The adjacent swap of slots i and i+1 inside the identity of size d."""
    if not 0 <= i < d - 1:
        raise ValueError(f"swap position {i} out of range for size {d}")
    images = list(range(d))
    images[i], images[i + 1] = images[i + 1], images[i]
    return tuple(images)


def koszul_sign(mu: Perm, degrees: Sequence[int]) -> int:
    """Sign picked up when reordering graded factors by ``mu``.

    The reordered word places factor ``mu[i]`` in slot ``i``; each
    inversion pair of odd-degree factors contributes -1.  With all
    degrees odd this is the ordinary permutation sign, and with all
    degrees even it is +1.
    """
    d = len(mu)
    if len(degrees) != d:
        raise ValueError("degree vector length must match the permutation size")
    if not is_permutation(mu):
        raise ValueError(f"{mu!r} is not a permutation")
    sign = 1
    for i in range(d):
        if degrees[mu[i]] % 2 == 0:
            continue
        for j in range(i + 1, d):
            if mu[i] > mu[j] and degrees[mu[j]] % 2:
                sign = -sign
    return sign


def all_permutations(d: int) -> list[Perm]:
    """All permutations of size d in lexicographic order."""
    if d > ENUMERATION_LIMIT:
        raise ComputationGuardError(f"refusing to enumerate S_{d}; limit is {ENUMERATION_LIMIT}")
    return list(itertools.permutations(range(d)))


@dataclass(frozen=True)
class YoungComposition:
    """An ordered composition (d_1, ..., d_n) embedding a product of
    symmetric groups block-diagonally into the symmetric group on the
    total."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(int(x) for x in self.parts))
        if not all(x >= 1 for x in self.parts):
            raise ValueError(f"composition parts must be positive, got {self.parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def block_ranges(self) -> tuple[tuple[int, int], ...]:
        """Half-open (start, stop) slot ranges of the blocks."""
        out = []
        start = 0
        for size in self.parts:
            out.append((start, start + size))
            start += size
        return tuple(out)

    def coxeter_positions(self) -> tuple[int, ...]:
        """Positions i of the adjacent swaps (i, i+1) generating the group."""
        out: list[int] = []
        for start, stop in self.block_ranges():
            out.extend(range(start, stop - 1))
        return tuple(out)

    def order(self) -> int:
        n = 1
        for size in self.parts:
            for k in range(2, size + 1):
                n *= k
        return n

    def contains(self, perm: Perm) -> bool:
        """Whether the permutation preserves every block."""
        if len(perm) != self.total or not is_permutation(perm):
            return False
        for start, stop in self.block_ranges():
            if any(not start <= perm[i] < stop for i in range(start, stop)):
                return False
        return True


def composition(parts: Iterable[int]) -> YoungComposition:
    return YoungComposition(tuple(parts))


def enumerate_young(group: YoungComposition) -> list[Perm]:
    """All elements of the block subgroup, in a fixed lexicographic order."""
    if group.total > ENUMERATION_LIMIT:
        raise ComputationGuardError(
            f"refusing to enumerate a subgroup of S_{group.total}; limit is {ENUMERATION_LIMIT}"
        )
    per_block = [
        itertools.permutations(range(start, stop)) for start, stop in group.block_ranges()
    ]
    out = []
    for combo in itertools.product(*per_block):
        images: list[int] = []
        for block in combo:
            images.extend(block)
        out.append(tuple(images))
    return out


def descent_word(perm: Perm) -> list[int]:
    """Adjacent-swap positions with perm == s[w[-1]] o ... o s[w[0]].

    Each step swaps the first descent, so the word length equals the
    inversion count and every position stays inside the block of any
    block-preserving permutation.
    """
    w = list(perm)
    word: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                changed = True
                break
    return word


def _check_generator_relations(
    mats: Sequence[np.ndarray],
    keys: Sequence[tuple[int, int]],
    p: int,
    dim: int,
) -> None:
    """Exact involution, braid, and commutation checks."""
    ident = np.eye(dim, dtype=np.int64)
    for m, key in zip(mats, keys):
        if m.shape != (dim, dim):
            raise ValueError(f"generator {key} has shape {m.shape}, expected {(dim, dim)}")
        if ((m @ m) % p != ident).any():
            raise ValueError(f"generator {key} squared is not the identity mod {p}")
    for (m1, k1), (m2, k2) in itertools.combinations(zip(mats, keys), 2):
        if k1[0] == k2[0] and abs(k1[1] - k2[1]) == 1:
            left = (m1 @ m2 % p) @ m1 % p
            right = (m2 @ m1 % p) @ m2 % p
            if (left != right).any():
                raise ValueError(f"generators {k1} and {k2} fail the braid relation mod {p}")
        else:
            if ((m1 @ m2) % p != (m2 @ m1) % p).any():
                raise ValueError(f"generators {k1} and {k2} do not commute mod {p}")


@dataclass(frozen=True)
class GroupRepresentation:
    """A representation of a product of Young subgroups over GF(p).

    Input is one square matrix per adjacent-swap generator, listed
    composition by composition in ``coxeter_positions`` order; every
    matrix acts on the full space, so tensor factors arrive already
    embedded.  Matrices act on row vectors from the right.  The derived
    attribute ``generator_keys`` pairs each matrix with its
    (composition index, swap position).
    """

    compositions: tuple[YoungComposition, ...]
    p: int
    dim: int
    generator_matrices: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        require_prime(self.p)
        comps = tuple(self.compositions)
        if not comps:
            raise ValueError("at least one composition is required")
        object.__setattr__(self, "compositions", comps)
        if self.dim < 0:
            raise ValueError("representation dimension must be nonnegative")
        keys = tuple(
            (ci, pos) for ci, comp in enumerate(comps) for pos in comp.coxeter_positions()
        )
        mats = tuple(np.array(m, dtype=np.int64) % self.p for m in self.generator_matrices)
        if len(mats) != len(keys):
            raise ValueError(f"expected {len(keys)} generator matrices, got {len(mats)}")
        _check_generator_relations(mats, keys, self.p, self.dim)
        object.__setattr__(self, "generator_matrices", mats)
        object.__setattr__(self, "generator_keys", keys)
        object.__setattr__(self, "_matrix_cache", {})

    def order(self) -> int:
        n = 1
        for comp in self.compositions:
            n *= comp.order()
        return n

    def _word_matrix(self, ci: int, perm: Perm) -> np.ndarray:
        comp = self.compositions[ci]
        if not comp.contains(perm):
            raise ValueError(f"{perm!r} is not in the block subgroup of {comp.parts}")
        by_pos = {
            key[1]: m
            for key, m in zip(self.generator_keys, self.generator_matrices)
            if key[0] == ci
        }
        out = np.eye(self.dim, dtype=np.int64)
        for pos in descent_word(perm):
            out = (by_pos[pos] @ out) % self.p
        return out

    def matrix(self, *perms: Perm) -> np.ndarray:
        """Matrix of the right action of one permutation per composition.

        Different compositions' generators commute, so the full-space
        word products multiply in any fixed order.
        """
        if len(perms) != len(self.compositions):
            raise ValueError(
                f"expected {len(self.compositions)} permutations, got {len(perms)}"
            )
        cache = self._matrix_cache
        key = tuple(perms)
        hit = cache.get(key)
        if hit is not None:
            return hit
        out = self._word_matrix(0, perms[0])
        for ci in range(1, len(perms)):
            out = (self._word_matrix(ci, perms[ci]) @ out) % self.p
        cache[key] = out
        return out


def trivial_representation(group: YoungComposition | int, p: int) -> GroupRepresentation:
    comp = group if isinstance(group, YoungComposition) else composition([group])
    one = np.array([[1]], dtype=np.int64)
    gens = tuple(one.copy() for _ in comp.coxeter_positions())
    return GroupRepresentation((comp,), p, 1, gens)


def sign_representation(group: YoungComposition | int, p: int) -> GroupRepresentation:
    comp = group if isinstance(group, YoungComposition) else composition([group])
    neg = np.array([[p - 1]], dtype=np.int64)
    gens = tuple(neg.copy() for _ in comp.coxeter_positions())
    return GroupRepresentation((comp,), p, 1, gens)


def standard_representation(d: int, p: int) -> GroupRepresentation:
    """The (d-1)-dimensional quotient of the permutation action.

    Basis vectors are w_j = e_j - e_{d-1} for j < d-1; row j of each
    generator matrix holds the image of w_j under the swap.
    """
    if d < 1:
        raise ValueError("standard representation needs d >= 1")
    comp = composition([d])
    mats = []
    for pos in comp.coxeter_positions():
        s = transposition(d, pos)
        m = np.zeros((d - 1, d - 1), dtype=np.int64)
        for j in range(d - 1):
            if s[j] < d - 1:
                m[j, s[j]] += 1
            if s[d - 1] < d - 1:
                m[j, s[d - 1]] -= 1
        mats.append(m % p)
    return GroupRepresentation((comp,), p, d - 1, tuple(mats))


def tensor_representation(a: GroupRepresentation, b: GroupRepresentation) -> GroupRepresentation:
    """Outer tensor product; the result's group is the product of both."""
    if a.p != b.p:
        raise ValueError("cannot tensor representations over different primes")
    p = a.p
    gens = [kronecker(m, np.eye(b.dim, dtype=np.int64), p) for m in a.generator_matrices]
    gens += [kronecker(np.eye(a.dim, dtype=np.int64), m, p) for m in b.generator_matrices]
    return GroupRepresentation(
        a.compositions + b.compositions, p, a.dim * b.dim, tuple(gens)
    )


def coinvariants_dim(action_mats: Sequence[np.ndarray], p: int) -> int:
    """Dimension of the largest quotient on which every generator acts
    trivially: dim minus the rank of the stacked (matrix - identity)."""
    if not action_mats:
        raise ValueError("need at least one generator matrix")
    n = action_mats[0].shape[0]
    ident = np.eye(n, dtype=np.int64)
    stacked = np.vstack([(np.asarray(m, dtype=np.int64) - ident) % p for m in action_mats])
    return n - rank(stacked, p)


def invariants_dim(action_mats: Sequence[np.ndarray], p: int) -> int:
    """Dimension of the space of row vectors fixed by every generator."""
    if not action_mats:
        raise ValueError("need at least one generator matrix")
    n = action_mats[0].shape[0]
    ident = np.eye(n, dtype=np.int64)
    stacked = np.hstack([(np.asarray(m, dtype=np.int64) - ident) % p for m in action_mats])
    return n - rank(stacked, p)


def coinvariants(
    graded_action: Mapping[int, Sequence[np.ndarray]],
    source: GradedSpace,
    rep: GroupRepresentation,
    *,
    assume_projective: bool = False,
    validate: bool = True,
) -> GradedSpace:
    """Degreewise coinvariants of (source tensor rep) under the diagonal action.

    ``graded_action[n]`` lists one matrix per generator of ``rep`` for
    the degree-n layer of ``source``; the combined generator action on
    the tensor is the Kronecker product.  Generator differences span the
    full relation subspace {x.g - x} because x.(gh) - x factors as
    (x.g).h - x.g plus x.g - x.

    Refuses when the group order is divisible by p unless the caller
    asserts that the coefficient modules are projective, since the
    quotient is only automatically well behaved in the coprime case.
    """
    p = rep.p
    if rep.order() % p == 0 and not assume_projective:
        raise ComputationGuardError(
            f"group order {rep.order()} is divisible by the characteristic {p}; "
            "pass assume_projective once the coefficient modules are known projective"
        )
    ngens = len(rep.generator_matrices)
    dims = []
    for n in range(source.truncation + 1):
        w = source.dim(n)
        target = w * rep.dim
        if target == 0 or ngens == 0:
            dims.append(target)
            continue
        mats = graded_action.get(n)
        if mats is None or len(mats) != ngens:
            raise ValueError(f"degree {n}: expected {ngens} action matrices")
        mats = [np.asarray(m, dtype=np.int64) % p for m in mats]
        if validate:
            _check_generator_relations(mats, rep.generator_keys, p, w)
        combined = [kronecker(a, r, p) for a, r in zip(mats, rep.generator_matrices)]
        dims.append(coinvariants_dim(combined, p))
    return space(dims, truncation=source.truncation)

"""Finite-dimensional associative algebras over GF(p): modules, free
resolutions, Tor, Ext, and Hochschild homology.

Elements are row coordinate vectors; structure constants ``c[i, j, k]``
encode b_i b_j = sum_k c[i,j,k] b_k.  A free-module map is an array of
algebra elements, ``entries[s, t]`` being the coefficient of target
generator t in the image of source generator s.  For right modules that
coefficient multiplies from the left, for left modules from the right;
either way row coordinates transform by the expanded block matrix on
the right, so kernels are left null spaces throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ComputationGuardError
from .gf_linalg import kronecker, nullspace_basis, rank, require_prime, row_reduce
from .graded import GradedSpace, space

MAX_ALGEBRA_DIM = 64
HOCHSCHILD_DIM_LIMIT = 8
# Expanded differentials beyond this many entries are refused.
MAX_STAGE_ENTRIES = 1 << 24


def _as_cube(entries, p: int) -> np.ndarray:
    c = np.array(entries, dtype=np.int64)
    if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
        raise ValueError(f"structure constants must be a cube, got shape {c.shape}")
    return c % p


@dataclass(frozen=True)
class FDAlgebra:
    """An associative unital algebra given by structure constants."""

    p: int
    structure_constants: np.ndarray
    unit: np.ndarray
    augmentation: np.ndarray | None = None

    def __post_init__(self) -> None:
        require_prime(self.p)
        c = _as_cube(self.structure_constants, self.p)
        n = c.shape[0]
        if n == 0 or n > MAX_ALGEBRA_DIM:
            raise ValueError(f"algebra dimension must be in 1..{MAX_ALGEBRA_DIM}, got {n}")
        u = np.array(self.unit, dtype=np.int64) % self.p
        if u.shape != (n,):
            raise ValueError(f"unit vector must have length {n}")
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "unit", u)
        # Associativity: (b_i b_j) b_k == b_i (b_j b_k), exact.
        flat = c.reshape(n * n, n)
        left = (flat @ c.reshape(n, n * n)) % self.p
        left = left.reshape(n, n, n, n)
        a1 = c.transpose(0, 2, 1).reshape(n * n, n)
        a2 = c.transpose(2, 0, 1).reshape(n, n * n)
        right = ((a1 @ a2) % self.p).reshape(n, n, n, n).transpose(0, 2, 3, 1)
        if (left != right).any():
            raise ValueError("structure constants are not associative")
        ident = np.eye(n, dtype=np.int64)
        if (np.einsum("i,ijk->jk", u, c) % self.p != ident).any():
            raise ValueError("unit vector fails the left unit law")
        if (np.einsum("j,ijk->ik", u, c) % self.p != ident).any():
            raise ValueError("unit vector fails the right unit law")
        if self.augmentation is not None:
            a = np.array(self.augmentation, dtype=np.int64) % self.p
            if a.shape != (n,):
                raise ValueError(f"augmentation must have length {n}")
            prod = np.einsum("ijk,k->ij", c, a) % self.p
            if (prod != np.outer(a, a) % self.p).any():
                raise ValueError("augmentation is not multiplicative")
            if int(a @ u % self.p) != 1:
                raise ValueError("augmentation must send the unit to 1")
            object.__setattr__(self, "augmentation", a)

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    def multiply(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("i,j,ijk->k", a, b, self.structure_constants) % self.p

    def left_mult_matrix(self, x) -> np.ndarray:
        """Row-vector operator of a |-> x a."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("i,ijk->jk", x, self.structure_constants) % self.p

    def right_mult_matrix(self, y) -> np.ndarray:
        """Row-vector operator of a |-> a y."""
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("j,ijk->ik", y, self.structure_constants) % self.p

    def is_commutative(self) -> bool:
        c = self.structure_constants
        return bool((c == c.transpose(1, 0, 2)).all())

    def element_power(self, x, k: int) -> np.ndarray:
        """x**k by square and multiply."""
        acc = self.unit.copy()
        base = np.asarray(x, dtype=np.int64) % self.p
        while k > 0:
            if k & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            k >>= 1
        return acc


@dataclass(frozen=True)
class FDModule:
    """A one-sided module given by one action matrix per algebra basis
    element, acting on row vectors from the right."""

    algebra: FDAlgebra
    side: str
    action: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        A = self.algebra
        acts = tuple(np.array(m, dtype=np.int64) % A.p for m in self.action)
        if len(acts) != A.dim:
            raise ValueError(f"expected {A.dim} action matrices, got {len(acts)}")
        m = acts[0].shape[0] if acts else 0
        stack = np.stack(acts) if acts else np.zeros((0, 0, 0), dtype=np.int64)
        if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
            raise ValueError("action matrices must be square and equally sized")
        object.__setattr__(self, "action", acts)
        c = A.structure_constants
        ident = np.eye(m, dtype=np.int64)
        if (np.einsum("i,iab->ab", A.unit, stack) % A.p != ident).any():
            raise ValueError("unit does not act as the identity")
        lhs = np.einsum("ijk,kab->ijab", c, stack) % A.p
        if self.side == "right":
            # v.(b_i b_j) applies act[i] then act[j].
            rhs = np.einsum("iax,jxb->ijab", stack, stack) % A.p
        else:
            # (b_i b_j).v applies act[j] then act[i].
            rhs = np.einsum("jax,ixb->ijab", stack, stack) % A.p
        if (lhs != rhs).any():
            raise ValueError(f"action matrices violate the {self.side} module axioms")

    @property
    def dim(self) -> int:
        return self.action[0].shape[0] if self.action else 0

    def act(self, x) -> np.ndarray:
        """Row-vector operator of the action of the algebra element x."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("i,iab->ab", x, np.stack(self.action)) % self.algebra.p


def module_from_action(algebra: FDAlgebra, side: str, mats: Sequence) -> FDModule:
    return FDModule(algebra, side, tuple(np.array(m, dtype=np.int64) for m in mats))


def character_module(algebra: FDAlgebra, chi, side: str) -> FDModule:
    """One-dimensional module along a multiplicative functional."""
    chi = np.array(chi, dtype=np.int64) % algebra.p
    mats = tuple(chi[i].reshape(1, 1).copy() for i in range(algebra.dim))
    return FDModule(algebra, side, mats)


def trivial_module(algebra: FDAlgebra, side: str) -> FDModule:
    if algebra.augmentation is None:
        raise ValueError("algebra has no augmentation; no trivial module exists")
    return character_module(algebra, algebra.augmentation, side)


def regular_module(algebra: FDAlgebra, side: str) -> FDModule:
    c = algebra.structure_constants
    if side == "right":
        mats = tuple(c[:, i, :].copy() for i in range(algebra.dim))
    else:
        mats = tuple(c[i, :, :].copy() for i in range(algebra.dim))
    return FDModule(algebra, side, mats)


def simple_module(algebra: FDAlgebra, index: int, side: str) -> FDModule:
    """The one-dimensional module hitting the idempotent basis element
    ``index``; valid for split products of fields and validated in any
    case."""
    if not 0 <= index < algebra.dim:
        raise ValueError(f"index {index} out of range")
    chi = np.zeros(algebra.dim, dtype=np.int64)
    chi[index] = 1
    return character_module(algebra, chi, side)


def _free_action_mats(module: FDModule, r: int) -> list[np.ndarray]:
    """Row-vector action of each algebra basis element on A**r."""
    A = module.algebra
    eye_r = np.eye(r, dtype=np.int64)
    if module.side == "right":
        base = [A.right_mult_matrix(np.eye(A.dim, dtype=np.int64)[j]) for j in range(A.dim)]
    else:
        base = [A.left_mult_matrix(np.eye(A.dim, dtype=np.int64)[j]) for j in range(A.dim)]
    return [np.kron(eye_r, b) % A.p for b in base]


def _reduce_against(v: np.ndarray, basis: np.ndarray, pivots: Sequence[int], p: int) -> np.ndarray:
    """Residue of a row after elimination by reduced-echelon rows."""
    v = v.copy() % p
    for row, col in enumerate(pivots):
        coef = v[col]
        if coef:
            v = (v - coef * basis[row]) % p
    return v


def span_closure(rows: np.ndarray, act_mats: Sequence[np.ndarray], p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced basis of the submodule generated by the given rows.

    Iterates action closure until the rank stabilizes; terminates since
    the rank is bounded by the row width.
    """
    basis, pivots = row_reduce(rows, p)
    basis = basis[: len(pivots)]
    while True:
        if basis.shape[0] == 0:
            return basis, pivots
        images = [basis] + [(basis @ m) % p for m in act_mats]
        nxt, npiv = row_reduce(np.vstack(images), p)
        nxt = nxt[: len(npiv)]
        if len(npiv) == len(pivots):
            return nxt, npiv
        basis, pivots = nxt, npiv


def greedy_generators(vectors: np.ndarray, act_mats: Sequence[np.ndarray], p: int) -> list[int]:
    """Indices of a generating subset of the rows, scanned in order.

    A row is kept only if it falls outside the submodule generated by
    the rows already kept, so the kept rows generate the same submodule
    as the full list.
    """
    width = vectors.shape[1]
    basis = np.zeros((0, width), dtype=np.int64)
    pivots: list[int] = []
    chosen: list[int] = []
    for idx in range(vectors.shape[0]):
        v = _reduce_against(vectors[idx], basis, pivots, p)
        if not v.any():
            continue
        chosen.append(idx)
        basis, pivots = span_closure(np.vstack([basis, vectors[idx : idx + 1]]), act_mats, p)
    return chosen


def minimal_generators(
    vectors: np.ndarray, act_mats: Sequence[np.ndarray], p: int, ambient_dim: int
) -> np.ndarray:
    """A small set of module generators for the span of the given rows.

    The rows must be independent and span a submodule.  Tries seeded
    random combinations at each candidate count, starting from the
    cyclic-submodule lower bound; row-by-row greedy pruning is the
    fallback, so the result always generates the same submodule.
    Deterministic: the random stream is freshly seeded per call.
    """
    k = vectors.shape[0]
    if k <= 1:
        return vectors
    rng = np.random.default_rng(0x5EED)
    for r in range(max(1, -(-k // ambient_dim)), k):
        for _ in range(4):
            combo = (rng.integers(0, p, size=(r, k)) @ vectors) % p
            _, pivots = span_closure(combo, act_mats, p)
            if len(pivots) == k:
                return combo.astype(np.int64)
    return vectors[greedy_generators(vectors, act_mats, p)]


def _expand_differential(entries: np.ndarray, algebra: FDAlgebra, side: str) -> np.ndarray:
    """Expanded row-vector matrix of a free-module map."""
    r, q, n = entries.shape
    c = algebra.structure_constants
    if side == "right":
        big = np.einsum("sti,ijk->sjtk", entries, c)
    else:
        big = np.einsum("stj,ijk->sitk", entries, c)
    return (big % algebra.p).reshape(r * n, q * n)


def _expand_with_action(entries: np.ndarray, partner: FDModule) -> np.ndarray:
    """Block matrix of the induced map on (partner dim)-sized blocks."""
    r, q, n = entries.shape
    m = partner.dim
    stack = np.stack(partner.action) if partner.action else np.zeros((n, 0, 0), dtype=np.int64)
    big = np.einsum("sti,iab->satb", entries, stack)
    return (big % partner.algebra.p).reshape(r * m, q * m)


class FreeResolution:
    """A free resolution built stage by stage.

    ``ranks[k]`` is the free rank at homological degree k and
    ``differentials[k-1]`` holds d_k as an (r_k, r_{k-1}, dim A) array
    of algebra elements.  Stage generators are kernel basis rows; with
    ``minimize`` a generating subset is kept instead of the whole basis.
    Exactness is asserted by rank counting each time a new kernel is
    computed.
    """

    def __init__(self, module: FDModule, *, minimize: bool = False) -> None:
        self.algebra = module.algebra
        self.module = module
        self.minimize = minimize
        A = self.algebra
        p = A.p
        m = module.dim
        eye_m = np.eye(m, dtype=np.int64)
        if minimize and m > 0:
            gens = minimal_generators(eye_m, list(module.action), p, A.dim)
        else:
            gens = eye_m
        self.generator_rows = gens
        r0 = gens.shape[0]
        # Cover matrix: row (s, i) is the image of generator s times b_i.
        cover = np.zeros((r0 * A.dim, m), dtype=np.int64)
        for s in range(r0):
            for i in range(A.dim):
                cover[s * A.dim + i] = (gens[s] @ module.action[i]) % p
        if m > 0 and rank(cover, p) != m:
            raise ValueError("chosen generators do not cover the module")
        self.ranks: list[int] = [r0]
        self.differentials: list[np.ndarray] = []
        # Kernel rows awaiting the next stage, plus their span dimension.
        self._pending_kernel = nullspace_basis(cover.T, p).T
        self._pending_dim = self._pending_kernel.shape[0]

    def extend_to(self, length: int) -> None:
        """Ensure stages 0..length exist."""
        A = self.algebra
        p = A.p
        n = A.dim
        while len(self.ranks) - 1 < length:
            kernel = self._pending_kernel
            prev_rank = self.ranks[-1]
            if self.minimize and kernel.shape[0] > 1:
                acts = _free_action_mats(self.module, prev_rank)
                gens = minimal_generators(kernel, acts, p, n)
            else:
                gens = kernel
            r = gens.shape[0]
            entries = gens.reshape(r, prev_rank, n)
            self.ranks.append(r)
            self.differentials.append(entries)
            if r == 0:
                self._pending_kernel = np.zeros((0, 0), dtype=np.int64)
                self._pending_dim = 0
                continue
            if r * n * prev_rank * n > MAX_STAGE_ENTRIES:
                raise ComputationGuardError(
                    f"resolution stage {len(self.ranks) - 1} needs a "
                    f"{r * n} x {prev_rank * n} matrix; enable minimize or lower the truncation"
                )
            expanded = _expand_differential(entries, A, self.module.side)
            null = nullspace_basis(expanded.T, p)
            image_rank = expanded.shape[0] - null.shape[1]
            if image_rank != self._pending_dim:
                raise AssertionError(
                    "resolution lost exactness: image rank "
                    f"{image_rank} != kernel dimension {self._pending_dim}"
                )
            self._pending_kernel = null.T
            self._pending_dim = self._pending_kernel.shape[0]

    def expanded_differential(self, k: int) -> np.ndarray:
        """Row-vector matrix of d_k, shape (r_k dimA, r_{k-1} dimA)."""
        if k < 1 or k > len(self.differentials):
            raise IndexError(f"no differential {k}")
        return _expand_differential(self.differentials[k - 1], self.algebra, self.module.side)


def resolve(module: FDModule, length: int, *, minimize: bool = False) -> FreeResolution:
    res = FreeResolution(module, minimize=minimize)
    res.extend_to(length)
    return res


def _check_pair(M: FDModule, N: FDModule, sides: tuple[str, str]) -> None:
    if M.algebra is not N.algebra and (
        M.algebra.p != N.algebra.p
        or M.algebra.dim != N.algebra.dim
        or (M.algebra.structure_constants != N.algebra.structure_constants).any()
    ):
        raise ValueError("modules live over different algebras")
    if (M.side, N.side) != sides:
        raise ValueError(f"expected module sides {sides}, got {(M.side, N.side)}")


def _complex_homology(mats: list[np.ndarray], dims: list[int], p: int, D: int) -> GradedSpace:
    """Homology dims of a complex given its maps C_k -> C_{k-1}, k >= 1."""
    ranks = [rank(m, p) for m in mats]
    out = []
    for k in range(D + 1):
        incoming = ranks[k] if k < len(ranks) else 0
        outgoing = ranks[k - 1] if k >= 1 else 0
        out.append(dims[k] - incoming - outgoing)
    return space(out, truncation=D)


def tor(
    M: FDModule,
    N: FDModule,
    D: int,
    *,
    minimize: bool = True,
    resolve_argument: str = "first",
) -> GradedSpace:
    """Tor_*(M, N) for a right module M and left module N, degrees 0..D.

    Resolutions are minimized by default to keep ranks bounded; the
    dimension table does not depend on that choice, nor on which
    argument is resolved.
    """
    _check_pair(M, N, ("right", "left"))
    if D < 0:
        raise ValueError("truncation must be nonnegative")
    if resolve_argument == "first":
        res = resolve(M, D + 1, minimize=minimize)
        partner = N
    elif resolve_argument == "second":
        res = resolve(N, D + 1, minimize=minimize)
        partner = M
    else:
        raise ValueError("resolve_argument must be 'first' or 'second'")
    mats = [_expand_with_action(e, partner) for e in res.differentials]
    dims = [r * partner.dim for r in res.ranks]
    return _complex_homology(mats, dims, M.algebra.p, D)


def ext(M: FDModule, N: FDModule, D: int, *, minimize: bool = True) -> GradedSpace:
    """Ext^*(M, N) for same-side modules, degrees 0..D."""
    if M.side != N.side:
        raise ValueError("Ext needs same-side modules")
    _check_pair(M, N, (M.side, M.side))
    if D < 0:
        raise ValueError("truncation must be nonnegative")
    res = resolve(M, D + 1, minimize=minimize)
    p = M.algebra.p
    m = N.dim
    # Cochain maps go up a degree: block (t, s) carries entries[s, t].
    comats = []
    for e in res.differentials:
        r, q, n = e.shape
        stack = np.stack(N.action) if N.action else np.zeros((n, 0, 0), dtype=np.int64)
        big = np.einsum("sti,iab->tasb", e, stack) % p
        comats.append(big.reshape(q * m, r * m))
    ranks = [rank(c, p) for c in comats]
    out = []
    for k in range(D + 1):
        outgoing = ranks[k] if k < len(ranks) else 0
        incoming = ranks[k - 1] if k >= 1 else 0
        out.append(res.ranks[k] * m - outgoing - incoming)
    return space(out, truncation=D)


def tor_zero_direct(M: FDModule, N: FDModule) -> int:
    """dim(M tensor_A N) as a coequalizer, independent of resolutions."""
    _check_pair(M, N, ("right", "left"))
    p = M.algebra.p
    mM, mN = M.dim, N.dim
    if mM == 0 or mN == 0:
        return 0
    eyeM = np.eye(mM, dtype=np.int64)
    eyeN = np.eye(mN, dtype=np.int64)
    blocks = [
        (kronecker(M.action[i], eyeN, p) - kronecker(eyeM, N.action[i], p)) % p
        for i in range(M.algebra.dim)
    ]
    return mM * mN - rank(np.vstack(blocks), p)


def enveloping_algebra(A: FDAlgebra) -> FDAlgebra:
    """A tensor A-opposite, with basis pairs (i, j) flattened as i*n+j."""
    n = A.dim
    c = A.structure_constants
    c_env = np.einsum("ikm,ljq->ijklmq", c, c).reshape(n * n, n * n, n * n) % A.p
    unit = np.kron(A.unit, A.unit) % A.p
    return FDAlgebra(A.p, c_env, unit)


def bimodule_as_right(A: FDAlgebra, env: FDAlgebra) -> FDModule:
    """A as a right module over its enveloping algebra: a.(x (x) y) = y a x."""
    n = A.dim
    c = A.structure_constants
    mats = np.einsum("ljq,qkm->kljm", c, c).reshape(n * n, n, n) % A.p
    return FDModule(env, "right", tuple(mats[i] for i in range(n * n)))


def bimodule_as_left(A: FDAlgebra, env: FDAlgebra) -> FDModule:
    """A as a left module over its enveloping algebra: (x (x) y).a = x a y."""
    n = A.dim
    c = A.structure_constants
    mats = np.einsum("kjq,qlm->kljm", c, c).reshape(n * n, n, n) % A.p
    return FDModule(env, "left", tuple(mats[i] for i in range(n * n)))


def hochschild(A: FDAlgebra, D: int) -> GradedSpace:
    """Hochschild homology dimensions of A in degrees 0..D."""
    if A.dim > HOCHSCHILD_DIM_LIMIT:
        raise ComputationGuardError(
            f"Hochschild computation limited to algebras of dimension "
            f"{HOCHSCHILD_DIM_LIMIT}, got {A.dim}"
        )
    env = enveloping_algebra(A)
    M = bimodule_as_right(A, env)
    N = bimodule_as_left(A, env)
    return tor(M, N, D, minimize=True)


def radical_basis(A: FDAlgebra) -> np.ndarray:
    """Rows spanning the nilradical of a commutative algebra.

    Over GF(p) the p-th power map is linear in the coordinates, so the
    nilpotent elements are the kernel of an iterated Frobenius matrix.
    """
    if not A.is_commutative():
        raise ComputationGuardError(
            "radical computation implemented for commutative algebras only"
        )
    n = A.dim
    p = A.p
    frob = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        frob[i] = A.element_power(e, p)
    power = np.eye(n, dtype=np.int64)
    steps = 0
    covered = 1
    while covered < n:
        covered *= p
        steps += 1
    for _ in range(max(steps, 1)):
        power = (power @ frob) % p
    return nullspace_basis(power.T, p).T


def is_semisimple(A: FDAlgebra) -> bool:
    return radical_basis(A).shape[0] == 0


def field(p: int) -> FDAlgebra:
    c = np.ones((1, 1, 1), dtype=np.int64)
    return FDAlgebra(p, c, np.array([1]), augmentation=np.array([1]))


def truncated_poly(p: int, n: int) -> FDAlgebra:
    """k[t] / t**n with basis 1, t, ..., t**(n-1)."""
    if n < 1:
        raise ValueError("need n >= 1")
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    aug = unit.copy()
    return FDAlgebra(p, c, unit, augmentation=aug)


def dual_numbers(p: int) -> FDAlgebra:
    return truncated_poly(p, 2)


def group_algebra_cyclic(p: int, m: int) -> FDAlgebra:
    """Group algebra of the cyclic group of order m."""
    if m < 1:
        raise ValueError("need m >= 1")
    c = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            c[i, j, (i + j) % m] = 1
    unit = np.zeros(m, dtype=np.int64)
    unit[0] = 1
    aug = np.ones(m, dtype=np.int64)
    return FDAlgebra(p, c, unit, augmentation=aug)


def product_fields(p: int, m: int) -> FDAlgebra:
    """GF(p) x ... x GF(p), m orthogonal idempotents."""
    if m < 1:
        raise ValueError("need m >= 1")
    c = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        c[i, i, i] = 1
    unit = np.ones(m, dtype=np.int64)
    aug = np.zeros(m, dtype=np.int64)
    aug[0] = 1
    return FDAlgebra(p, c, unit, augmentation=aug)


def gf4_over_gf2() -> FDAlgebra:
    """GF(4) as a 2-dimensional GF(2)-algebra: basis 1, w with w*w = w + 1."""
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = 1
    c[0, 1, 1] = 1
    c[1, 0, 1] = 1
    c[1, 1, 0] = 1
    c[1, 1, 1] = 1
    return FDAlgebra(2, c, np.array([1, 0]))


ALGEBRA_PRESETS = (
    "field(p)",
    "dual_numbers(p)",
    "truncated_poly(p, n)",
    "group_algebra_cyclic(p, m)",
    "product_fields(p, m)",
    "gf4_over_gf2",
)


def random_module(
    A: FDAlgebra, side: str, rng: np.random.Generator, max_dim: int = 3
) -> FDModule:
    """A random small module: a submodule or quotient of a free module.

    Deterministic for a seeded generator; retries until the dimension
    lands in 1..max_dim.
    """
    n = A.dim
    p = A.p
    for _ in range(200):
        k = int(rng.integers(1, 3))
        width = k * n
        if side == "right":
            base = [A.right_mult_matrix(np.eye(n, dtype=np.int64)[j]) for j in range(n)]
        else:
            base = [A.left_mult_matrix(np.eye(n, dtype=np.int64)[j]) for j in range(n)]
        acts = [np.kron(np.eye(k, dtype=np.int64), b) % p for b in base]
        seeds = rng.integers(0, p, size=(int(rng.integers(1, 3)), width)).astype(np.int64)
        basis, pivots = span_closure(seeds, acts, p)
        s = basis.shape[0]
        if rng.integers(0, 2) == 0:
            # Submodule: restrict the action to the span.
            if not 1 <= s <= max_dim:
                continue
            mats = [((basis @ m) % p)[:, pivots] for m in acts]
            return FDModule(A, side, tuple(mats))
        # Quotient: act on coset representatives of the free coordinates.
        free = [c for c in range(width) if c not in set(pivots)]
        q = len(free)
        if not 1 <= q <= max_dim:
            continue
        reps = np.zeros((q, width), dtype=np.int64)
        reps[np.arange(q), free] = 1
        mats = []
        for m in acts:
            img = (reps @ m) % p
            for row, col in zip(range(s), pivots):
                img = (img - np.outer(img[:, col], basis[row])) % p
            mats.append(img[:, free])
        return FDModule(A, side, tuple(mats))
    raise RuntimeError("could not sample a module of the requested size")

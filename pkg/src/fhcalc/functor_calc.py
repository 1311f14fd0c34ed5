"""Stable-range homology pipelines over GF(p).

The operations here combine three ingredients: graded multiplier
convolutions (the even-degree series on the Tor side, the truncated
polynomial monomial count on the Ext side), block tensor modules with a
permutation-twisted summand index and Koszul-signed factor shuffles,
and symmetric-group coinvariants taken degreewise.

Group elements act on the right.  A pair (tau, mu) sends the summand
index sigma to tau^(-1) sigma mu and permutes the tensor factors by mu,
picking up the Koszul sign of mu on odd-degree factors.  Coinvariants
against a coefficient representation are computed orbit by orbit: free
orbits contribute the full coefficient dimension, the rest reduce to a
stabilizer computed from Schreier generators.  A dense reference path
exists for cross-checking and is asserted in degree zero on every run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ComputationGuardError
from .gf_linalg import kronecker, rank
from .graded import GradedSpace, ext_algebra, even_ones, space, tensor, zero
from .symgrp import (
    GroupRepresentation,
    Perm,
    YoungComposition,
    all_permutations,
    coinvariants,
    coinvariants_dim,
    compose,
    identity_perm,
    inverse,
    tensor_representation,
    transposition,
)

MAX_TENSOR_ARITY = 6
MAX_LAYER_DIM = 100_000

PROVENANCE_USER = "user-supplied"
PROVENANCE_DERIVED = "derived"


# ------------------------------------------------------------ multipliers


def stable_tor(table: GradedSpace) -> GradedSpace:
    """Full Tor table of an additive one: convolution with the
    even-degree multiplier series."""
    return tensor(table, even_ones(table.truncation))


def stable_ext(table: GradedSpace, p: int, rank_: int | None) -> GradedSpace:
    """Full Ext table of an additive one: convolution with the monomial
    count of the truncated polynomial Ext algebra of the given rank."""
    multiplier = ext_algebra(p, rank_, table.truncation).dims_table()
    return tensor(table, multiplier.without_labels())


def gl_homology(coefficient_homology: GradedSpace, tor_table: GradedSpace) -> GradedSpace:
    """Stable general-linear homology with bimodule coefficients factors
    as a graded tensor product of the group part and the Tor part."""
    return tensor(coefficient_homology, tor_table)


# ------------------------------------------------------------- Tor grids


@dataclass(frozen=True)
class TorTableGrid:
    """Rectangular grid of full Tor dimension tables, one per pair of a
    contravariant and a covariant additive factor, with per-entry
    provenance (user-supplied, or derived via the even multiplier)."""

    entries: tuple[tuple[GradedSpace, ...], ...]
    provenance: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise ValueError("grid must have at least one row and column")
        width = len(self.entries[0])
        trunc = self.entries[0][0].truncation
        for row in self.entries:
            if len(row) != width:
                raise ValueError("grid rows must have equal length")
            for entry in row:
                if entry.truncation != trunc:
                    raise ValueError("grid entries must share one truncation")
        if len(self.provenance) != len(self.entries) or any(
            len(r) != width for r in self.provenance
        ):
            raise ValueError("provenance shape must match the grid")
        for row in self.provenance:
            for tag in row:
                if tag not in (PROVENANCE_USER, PROVENANCE_DERIVED):
                    raise ValueError(f"unknown provenance tag {tag!r}")

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def e(self) -> int:
        return len(self.entries[0])

    @property
    def truncation(self) -> int:
        return self.entries[0][0].truncation


def _normalize_grid(entries) -> tuple[tuple[GradedSpace, ...], ...]:
    rows = []
    for row in entries:
        cells = tuple(row)
        for cell in cells:
            if not isinstance(cell, GradedSpace):
                raise ValueError("grid entries must be GradedSpace tables")
        rows.append(cells)
    return tuple(rows)


def tor_table_grid(entries) -> TorTableGrid:
    """Grid of caller-provided full Tor tables."""
    grid = _normalize_grid(entries)
    prov = tuple(tuple(PROVENANCE_USER for _ in row) for row in grid)
    return TorTableGrid(grid, prov)


def grid_from_additive(entries) -> TorTableGrid:
    """Grid built from additive Tor tables by applying the even
    multiplier to every entry."""
    grid = _normalize_grid(entries)
    full = tuple(tuple(stable_tor(cell) for cell in row) for row in grid)
    prov = tuple(tuple(PROVENANCE_DERIVED for _ in row) for row in full)
    return TorTableGrid(full, prov)


# ----------------------------------------------- labeled permutation bases


@dataclass
class _Layer:
    sig: np.ndarray  # (N,) summand index
    degs: np.ndarray  # (N, e) factor degrees
    idxs: np.ndarray  # (N, e) factor basis indices
    index: dict[tuple, int]


def _build_layers(dimtab: np.ndarray, D: int) -> list[_Layer]:
    """Enumerate labeled bases per degree.

    dimtab[si, j, m] is the dimension of factor j in summand si at
    degree m; basis labels are (summand, degree tuple, index tuple) in
    ascending enumeration order.
    """
    S, e, _ = dimtab.shape
    # Exact layer sizes are convolution coefficients; check them before
    # enumerating so oversized layers are refused instead of attempted.
    counts = np.zeros(D + 1, dtype=np.int64)
    for si in range(S):
        conv = np.ones(1, dtype=np.int64)
        for j in range(e):
            conv = np.convolve(conv, dimtab[si, j])[: D + 1]
        counts[: conv.shape[0]] += conv
    if counts.max(initial=0) > MAX_LAYER_DIM:
        n_bad = int(counts.argmax())
        raise ComputationGuardError(
            f"degree {n_bad} layer has {int(counts[n_bad])} basis elements "
            f"(limit {MAX_LAYER_DIM})"
        )
    layers: list[_Layer] = []
    for n in range(D + 1):
        sig_rows: list[int] = []
        deg_rows: list[tuple[int, ...]] = []
        idx_rows: list[tuple[int, ...]] = []

        def emit(si: int, degs: tuple[int, ...]) -> None:
            ranges = [range(int(dimtab[si, j, degs[j]])) for j in range(e)]
            stack = [()]
            for r in ranges:
                stack = [prefix + (k,) for prefix in stack for k in r]
            for idxs in stack:
                sig_rows.append(si)
                deg_rows.append(degs)
                idx_rows.append(idxs)

        def rec(si: int, j: int, remaining: int, prefix: tuple[int, ...]) -> None:
            if j == e - 1:
                if dimtab[si, j, remaining] > 0:
                    emit(si, prefix + (remaining,))
                return
            for m in range(remaining + 1):
                if dimtab[si, j, m] > 0:
                    rec(si, j + 1, remaining - m, prefix + (m,))

        for si in range(S):
            rec(si, 0, n, ())
        assert len(sig_rows) == counts[n]
        sig = np.array(sig_rows, dtype=np.int64)
        degs = np.array(deg_rows, dtype=np.int64).reshape(len(sig_rows), e)
        idxs = np.array(idx_rows, dtype=np.int64).reshape(len(sig_rows), e)
        index = {
            (sig_rows[i], deg_rows[i], idx_rows[i]): i for i in range(len(sig_rows))
        }
        layers.append(_Layer(sig, degs, idxs, index))
    return layers


GroupElement = tuple[Perm, ...]


@dataclass(eq=False)
class GradedGroupModule:
    """Labeled graded module with a signed permutation action.

    Basis labels are (summand permutation, factor degrees, factor
    indices); when ``summand_arity`` is None there is no summand part
    and only the factor shuffle acts.  ``element_maps`` returns, per
    degree, the image index and sign of each basis element under a
    group element, given as one permutation per acting composition.
    """

    p: int
    summand_arity: int | None
    factor_arity: int
    dims: GradedSpace
    _perms: tuple[Perm, ...]
    _pindex: dict[Perm, int]
    _layers: list[_Layer]
    _cache: dict = field(default_factory=dict)

    def _tau_mu(self, element: GroupElement) -> tuple[Perm | None, Perm]:
        if self.summand_arity is None:
            if len(element) != 1:
                raise ValueError("expected a single permutation element")
            return None, element[0]
        if len(element) != 2:
            raise ValueError("expected a (tau, mu) pair")
        return element[0], element[1]

    def element_maps(self, element: GroupElement) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per degree: (target index array, sign array) of x -> x.element."""
        key = tuple(element)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        tau, mu = self._tau_mu(key)
        e = self.factor_arity
        if len(mu) != e:
            raise ValueError(f"factor permutation must have size {e}")
        if tau is None:
            lut = np.zeros(1, dtype=np.int64)
        else:
            if len(tau) != self.summand_arity:
                raise ValueError(f"summand permutation must have size {self.summand_arity}")
            itau = inverse(tau)
            lut = np.array(
                [self._pindex[compose(itau, compose(s, mu))] for s in self._perms],
                dtype=np.int64,
            )
        cols = np.array(mu, dtype=np.int64)
        pairs = [(a, b) for a in range(e) for b in range(a + 1, e) if mu[a] > mu[b]]
        out = []
        for layer in self._layers:
            n_rows = layer.sig.shape[0]
            if n_rows == 0:
                out.append((np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)))
                continue
            new_sig = lut[layer.sig]
            new_degs = layer.degs[:, cols]
            new_idxs = layer.idxs[:, cols]
            parity = np.zeros(n_rows, dtype=np.int64)
            for a, b in pairs:
                parity += (layer.degs[:, mu[a]] & 1) * (layer.degs[:, mu[b]] & 1)
            sign = 1 - 2 * (parity & 1)
            target = np.empty(n_rows, dtype=np.int64)
            index = layer.index
            try:
                for i in range(n_rows):
                    target[i] = index[
                        (int(new_sig[i]), tuple(map(int, new_degs[i])), tuple(map(int, new_idxs[i])))
                    ]
            except KeyError as exc:
                raise ValueError(
                    "element does not act on this module: entry tables are "
                    "not constant along its blocks"
                ) from exc
            out.append((target, sign))
        self._cache[key] = out
        return out

    def element_action(self, element: GroupElement, n: int) -> np.ndarray:
        """Dense signed permutation matrix of the degree-n layer."""
        target, sign = self.element_maps(element)[n]
        m = target.shape[0]
        mat = np.zeros((m, m), dtype=np.int64)
        mat[np.arange(m), target] = sign % self.p
        return mat

    def layer_labels(self, n: int) -> list[tuple[Perm, tuple[int, ...], tuple[int, ...]]]:
        layer = self._layers[n]
        return [
            (self._perms[int(layer.sig[i])], tuple(map(int, layer.degs[i])), tuple(map(int, layer.idxs[i])))
            for i in range(layer.sig.shape[0])
        ]


def _check_arity(d: int) -> None:
    if d < 1 or d > MAX_TENSOR_ARITY:
        raise ComputationGuardError(
            f"tensor arity must be in 1..{MAX_TENSOR_ARITY}, got {d}"
        )


def _grid_module(grid: TorTableGrid, p: int) -> GradedGroupModule:
    """Direct sum over summand permutations sigma of the block tensor
    products with factor j drawn from entry (sigma(j), j)."""
    d = grid.d
    _check_arity(d)
    perms = tuple(all_permutations(d))
    D = grid.truncation
    dimtab = np.zeros((len(perms), d, D + 1), dtype=np.int64)
    for si, sigma in enumerate(perms):
        for j in range(d):
            dimtab[si, j] = grid.entries[sigma[j]][j].dims
    layers = _build_layers(dimtab, D)
    dims = space([layer.sig.shape[0] for layer in layers], truncation=D)
    return GradedGroupModule(
        p, d, d, dims, perms, {s: i for i, s in enumerate(perms)}, layers
    )


def group_ring_block_module(B: GradedSpace, d: int, p: int) -> GradedGroupModule:
    """The module spanned by (sigma, tensor of d factors of B): the
    group-ring factor twisted on the left, Koszul signs on the right."""
    _check_arity(d)
    grid = tor_table_grid([[B] * d for _ in range(d)])
    return _grid_module(grid, p)


def tensor_power_module(W: GradedSpace, d: int, p: int) -> GradedGroupModule:
    """W tensored with itself d times, with the Koszul-signed shuffle."""
    _check_arity(d)
    perms = (identity_perm(d),)
    D = W.truncation
    dimtab = np.zeros((1, d, D + 1), dtype=np.int64)
    for j in range(d):
        dimtab[0, j] = W.dims
    layers = _build_layers(dimtab, D)
    dims = space([layer.sig.shape[0] for layer in layers], truncation=D)
    return GradedGroupModule(p, None, d, dims, perms, {perms[0]: 0}, layers)


# ------------------------------------------------------------ coinvariants


def _generator_elements(rep: GroupRepresentation) -> list[GroupElement]:
    """One group element per generator key, identities elsewhere."""
    sizes = [comp.total for comp in rep.compositions]
    elems = []
    for ci, pos in rep.generator_keys:
        parts = [identity_perm(s) for s in sizes]
        parts[ci] = transposition(sizes[ci], pos)
        elems.append(tuple(parts))
    return elems


def _compose_elements(a: GroupElement, b: GroupElement) -> GroupElement:
    return tuple(compose(x, y) for x, y in zip(a, b))


def _inverse_element(a: GroupElement) -> GroupElement:
    return tuple(inverse(x) for x in a)


def _module_element(module: GradedGroupModule, elem: GroupElement) -> GroupElement:
    """Strip the tau component for modules without a summand index."""
    if module.summand_arity is None and len(elem) == 2:
        return (elem[1],)
    return elem


def _orbit_coinvariants(module: GradedGroupModule, rep: GroupRepresentation) -> GradedSpace:
    """Coinvariants of (module tensor rep), degreewise, orbit by orbit.

    Free orbits contribute dim(rep); other orbits contribute the
    stabilizer coinvariants of rep twisted by the orbit sign character,
    with the stabilizer generated by Schreier elements of the orbit
    traversal.  Degree 0 is re-verified against the dense path.
    """
    p = rep.p
    gen_elems = _generator_elements(rep)
    gmaps = [module.element_maps(_module_element(module, g)) for g in gen_elems]
    group_order = rep.order()
    identity_elem = tuple(identity_perm(c.total) for c in rep.compositions)
    eye = np.eye(rep.dim, dtype=np.int64)
    memo: dict[frozenset, int] = {}
    dims_out: list[int] = []
    for n in range(module.dims.truncation + 1):
        N = module.dims.dim(n)
        if N == 0:
            dims_out.append(0)
            continue
        if not gen_elems:
            dims_out.append(N * rep.dim)
            continue
        layer_maps = [gm[n] for gm in gmaps]
        lab = np.arange(N, dtype=np.int64)
        changed = True
        while changed:
            changed = False
            for target, _ in layer_maps:
                new = np.minimum(lab, lab[target])
                np.minimum.at(new, target, lab)
                if (new != lab).any():
                    changed = True
                lab = new
        order_idx = np.argsort(lab, kind="stable")
        sorted_lab = lab[order_idx]
        starts = np.concatenate(([0], np.nonzero(np.diff(sorted_lab))[0] + 1, [N]))
        total = 0
        for s, t in zip(starts[:-1], starts[1:]):
            members = order_idx[s:t]
            size = t - s
            if size == group_order:
                total += rep.dim
                continue
            root = int(members.min())
            transport: dict[int, tuple[GroupElement, int]] = {root: (identity_elem, 1)}
            queue = [root]
            schreier: set[tuple[GroupElement, int]] = set()
            while queue:
                y = queue.pop()
                t_y, s_y = transport[y]
                for gi, g_elem in enumerate(gen_elems):
                    target, sign = layer_maps[gi]
                    z = int(target[y])
                    s_edge = int(sign[y])
                    t_new = _compose_elements(t_y, g_elem)
                    s_new = s_y * s_edge
                    known = transport.get(z)
                    if known is None:
                        transport[z] = (t_new, s_new)
                        queue.append(z)
                        continue
                    t_z, s_z = known
                    h = _compose_elements(t_new, _inverse_element(t_z))
                    chi = s_new * s_z
                    if h == identity_elem:
                        if chi != 1:
                            raise AssertionError("inconsistent orbit signs")
                        continue
                    schreier.add((h, chi))
            if len(transport) != size:
                raise AssertionError("orbit traversal incomplete")
            key = frozenset(schreier)
            hit = memo.get(key)
            if hit is None:
                if not schreier:
                    hit = rep.dim
                else:
                    stack = np.vstack(
                        [(chi * rep.matrix(*h) - eye) % p for h, chi in sorted(
                            schreier, key=lambda item: (item[0], item[1])
                        )]
                    )
                    hit = rep.dim - rank(stack, p)
                memo[key] = hit
            total += hit
        dims_out.append(total)
    # Degree-0 cross-check against the dense Kronecker path.
    n0 = module.dims.dim(0)
    if n0 > 0 and gen_elems:
        combined = [
            kronecker(module.element_action(_module_element(module, g), 0), rep.matrix(*g), p)
            for g in gen_elems
        ]
        expected = coinvariants_dim(combined, p)
    else:
        expected = n0 * rep.dim
    if dims_out[0] != expected:
        raise AssertionError(
            f"orbit and dense degree-0 coinvariants disagree: {dims_out[0]} vs {expected}"
        )
    return space(dims_out, truncation=module.dims.truncation)


def dense_coinvariants(
    module: GradedGroupModule,
    rep: GroupRepresentation,
    *,
    assume_projective: bool = False,
) -> GradedSpace:
    """Reference path: dense signed permutation matrices fed through the
    generic degreewise coinvariants routine."""
    gen_elems = _generator_elements(rep)
    graded_action = {
        n: [module.element_action(_module_element(module, g), n) for g in gen_elems]
        for n in range(module.dims.truncation + 1)
    }
    return coinvariants(
        graded_action, module.dims, rep, assume_projective=assume_projective
    )


def _require_maschke(rep: GroupRepresentation, assume_projective: bool) -> None:
    if rep.order() % rep.p == 0 and not assume_projective:
        raise ComputationGuardError(
            f"group order {rep.order()} is divisible by the characteristic "
            f"{rep.p}; pass assume_projective once the inputs are known projective"
        )


def _single_composition(rep: GroupRepresentation, role: str) -> YoungComposition:
    if len(rep.compositions) != 1:
        raise ValueError(f"{role} must be a representation of a single Young product")
    return rep.compositions[0]


def _require_block_constant(
    grid: TorTableGrid, cd: YoungComposition, ce: YoungComposition
) -> None:
    """The action exists only when entries are constant on the blocks of
    both compositions."""
    for start, stop in cd.block_ranges():
        for i in range(start + 1, stop):
            for j in range(grid.e):
                if grid.entries[i][j].dims != grid.entries[start][j].dims:
                    raise ValueError(
                        f"grid rows {start} and {i} differ inside one block of {cd.parts}"
                    )
    for start, stop in ce.block_ranges():
        for j in range(start + 1, stop):
            for i in range(grid.d):
                if grid.entries[i][j].dims != grid.entries[i][start].dims:
                    raise ValueError(
                        f"grid columns {start} and {j} differ inside one block of {ce.parts}"
                    )


# -------------------------------------------------------------- pipelines


def tensor_tor(
    grid: TorTableGrid,
    U: GroupRepresentation,
    V: GroupRepresentation,
    *,
    assume_projective: bool = False,
) -> GradedSpace:
    """Tor table of a pair of tensor-product functors twisted by U and V.

    Zero when the arities differ; otherwise the coinvariants of the
    permutation-twisted block tensor module against U tensor V.
    """
    if U.p != V.p:
        raise ValueError("U and V must live over the same prime")
    cd = _single_composition(U, "U")
    ce = _single_composition(V, "V")
    if cd.total != grid.d:
        raise ValueError(f"U acts on {cd.total} factors but the grid has {grid.d} rows")
    if ce.total != grid.e:
        raise ValueError(f"V acts on {ce.total} factors but the grid has {grid.e} columns")
    if grid.d != grid.e:
        return zero(grid.truncation)
    _check_arity(grid.d)
    _require_block_constant(grid, cd, ce)
    rep = tensor_representation(U, V)
    _require_maschke(rep, assume_projective)
    module = _grid_module(grid, U.p)
    return _orbit_coinvariants(module, rep)


def schur_apply(
    V: GroupRepresentation,
    W: GradedSpace,
    *,
    assume_projective: bool = False,
) -> GradedSpace:
    """Graded Schur-type construction: d-th tensor power of W, Koszul
    signed, tensored with V over the symmetric group.

    Requires d invertible mod p (the transfer argument needs 1/d) unless
    the caller asserts projectivity of the inputs.
    """
    comp = _single_composition(V, "V")
    d = comp.total
    _check_arity(d)
    if d % V.p == 0 and not assume_projective:
        raise ComputationGuardError(
            f"tensor arity {d} is divisible by the characteristic {V.p}; "
            "pass assume_projective once the inputs are known projective"
        )
    module = tensor_power_module(W, d, V.p)
    return _orbit_coinvariants(module, V)


def schur_of_stable_tor(
    additive: GradedSpace,
    V: GroupRepresentation,
    *,
    assume_projective: bool = False,
) -> GradedSpace:
    """Schur construction applied to the full Tor table of an additive
    one; with a single factor this is exactly the full Tor table."""
    return schur_apply(V, stable_tor(additive), assume_projective=assume_projective)

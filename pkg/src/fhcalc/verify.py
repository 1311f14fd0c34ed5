"""Built-in verification suites.

Each suite runs a batch of self-contained identity checks with fixed
seeds and returns per-check results; a failed check carries a
counterexample dump.  Suites: linalg, graded, koszul, fdalg-balance,
example-C, and all (the previous five in order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fhcalc import fdalg
from fhcalc.errors import JobValidationError
from fhcalc.functor_calc import (
    _grid_module,
    dense_coinvariants,
    grid_from_additive,
    group_ring_block_module,
    schur_of_stable_tor,
    stable_tor,
    tensor_power_module,
    tensor_tor,
)
from fhcalc.gf_linalg import kronecker, matmul, nullspace_basis, rank, row_reduce
from fhcalc.graded import even_ones, ext_algebra, space, tensor
from fhcalc.symgrp import (
    all_permutations,
    composition,
    identity_perm,
    koszul_sign,
    sign_representation,
    standard_representation,
    tensor_representation,
    trivial_representation,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols)).astype(np.int64)


# ------------------------------------------------------------------ linalg


def _suite_linalg() -> list[Check]:
    checks: list[Check] = []
    rng = np.random.default_rng(101)
    count = 0
    bad = ""
    for p in (2, 3, 5):
        for _ in range(10):
            a = _random_matrix(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)), p)
            r, pivots = row_reduce(a, p)
            r2, pivots2 = row_reduce(r, p)
            if not (np.array_equal(r, r2) and pivots == pivots2):
                bad = f"reduction not idempotent for p={p}, a={a.tolist()}"
            if len(pivots) != rank(a, p) or rank(a, p) != rank(a.T, p):
                bad = bad or f"rank mismatch for p={p}, a={a.tolist()}"
            count += 2
    checks.append(Check("row reduction idempotent, rank symmetric", not bad, bad))

    bad = ""
    for p in (2, 7):
        for _ in range(10):
            a = _random_matrix(rng, 5, int(rng.integers(1, 7)), p)
            ns = nullspace_basis(a, p)
            if ns.shape[1] != a.shape[1] - rank(a, p):
                bad = f"nullity mismatch for p={p}, a={a.tolist()}"
            if ns.shape[1] and matmul(a, ns, p).any():
                bad = bad or f"nullspace vectors not annihilated, p={p}, a={a.tolist()}"
            count += 2
    checks.append(Check("nullspace dimension and membership", not bad, bad))

    bad = ""
    for p in (3, 5):
        a = _random_matrix(rng, 4, 5, p)
        b = _random_matrix(rng, 5, 3, p)
        c = _random_matrix(rng, 3, 6, p)
        if not np.array_equal(matmul(matmul(a, b, p), c, p), matmul(a, matmul(b, c, p), p)):
            bad = f"matmul not associative for p={p}"
        x = _random_matrix(rng, 2, 3, p)
        y = _random_matrix(rng, 3, 2, p)
        u = _random_matrix(rng, 3, 4, p)
        v = _random_matrix(rng, 4, 3, p)
        lhs = matmul(kronecker(x, u, p), kronecker(y, v, p), p)
        rhs = kronecker(matmul(x, y, p), matmul(u, v, p), p)
        if not np.array_equal(lhs, rhs):
            bad = bad or f"kronecker mixed product fails for p={p}"
        count += 2
    checks.append(Check("matmul associativity, kronecker mixed product", not bad, bad))
    checks.append(Check(f"linalg identity count: {count}", True))
    return checks


# ------------------------------------------------------------------ graded


def _suite_graded() -> list[Check]:
    checks: list[Check] = []
    for p in (2, 3, 5):
        table = ext_algebra(p, None, 20).dims_table()
        ok = table.dims == even_ones(20).dims
        checks.append(
            Check(
                f"unbounded Ext algebra matches the even series, p={p}",
                ok,
                "" if ok else f"got {table.dims}",
            )
        )
    table = ext_algebra(2, 2, 14).dims_table()
    want = tuple(1 if n % 2 == 0 and n < 8 else 0 for n in range(15))
    checks.append(
        Check(
            "rank-2 Ext algebra at p=2: one class in each degree 2i, i<4",
            table.dims == want,
            "" if table.dims == want else f"got {table.dims}",
        )
    )

    rng = np.random.default_rng(202)
    bad = ""
    for _ in range(10):
        a = space([int(x) for x in rng.integers(0, 4, size=7)])
        b = space([int(x) for x in rng.integers(0, 4, size=7)])
        c = space([int(x) for x in rng.integers(0, 4, size=7)])
        if tensor(a, b).dims != tensor(b, a).dims:
            bad = f"convolution not commutative: {a.dims} vs {b.dims}"
        if tensor(tensor(a, b), c).dims != tensor(a, tensor(b, c)).dims:
            bad = bad or f"convolution not associative: {a.dims}, {b.dims}, {c.dims}"
    checks.append(Check("graded tensor commutative and associative", not bad, bad))

    full = stable_tor(space([1] * 13))
    want = tuple(n // 2 + 1 for n in range(13))
    checks.append(
        Check(
            "even multiplier on the table of ones gives floor(n/2)+1",
            full.dims == want,
            "" if full.dims == want else f"got {full.dims}",
        )
    )
    return checks


# ------------------------------------------------------------------ koszul


def _suite_koszul() -> list[Check]:
    checks: list[Check] = []
    rng = np.random.default_rng(303)
    for d in (1, 2):
        perms = all_permutations(d)
        elements = [(tau, mu) for tau in perms for mu in perms]
        for trial in range(3):
            table = space([int(x) for x in rng.integers(0, 3, size=5)])
            mod = group_ring_block_module(table, d, 3)
            count = 0
            bad = ""
            ident = (identity_perm(d), identity_perm(d))
            for n in range(5):
                m = mod.dims.dim(n)
                if m == 0:
                    continue
                if not np.array_equal(
                    mod.element_action(ident, n), np.eye(m, dtype=np.int64)
                ):
                    bad = f"identity acts nontrivially in degree {n}"
                for g in elements:
                    mg = mod.element_action(g, n)
                    for h in elements:
                        gh = tuple(
                            tuple(np.array(gc)[np.array(hc)]) for gc, hc in zip(g, h)
                        )
                        if not np.array_equal(
                            mod.element_action(gh, n), (mg @ mod.element_action(h, n)) % 3
                        ):
                            bad = (
                                f"x.(gh) != (x.g).h for g={g}, h={h}, degree {n}, "
                                f"table {table.dims}"
                            )
                        count += 1
            checks.append(
                Check(
                    f"right action axioms, d={d}, assignment {trial}: {count} identities",
                    not bad,
                    bad,
                )
            )

    table = space([int(x) for x in rng.integers(0, 3, size=6)])
    mod = tensor_power_module(table, 3, 7)
    bad = ""
    count = 0
    for mu in all_permutations(3):
        maps = mod.element_maps((mu,))
        for n in range(6):
            target, sign = maps[n]
            if sorted(target.tolist()) != list(range(mod.dims.dim(n))):
                bad = f"action of {mu} is not a bijection in degree {n}"
            for row, (_, degs, _) in enumerate(mod.layer_labels(n)):
                if sign[row] != koszul_sign(mu, degs):
                    bad = bad or f"sign mismatch for mu={mu}, degrees {degs}"
                count += 1
    checks.append(
        Check(f"vectorized signs match the Koszul rule: {count} rows", not bad, bad)
    )
    return checks


# ------------------------------------------------------------ fdalg-balance


def _suite_fdalg_balance() -> list[Check]:
    checks: list[Check] = []
    rng = np.random.default_rng(404)
    presets = (
        ("field(3)", fdalg.field(3)),
        ("dual_numbers(2)", fdalg.dual_numbers(2)),
        ("gf4_over_gf2", fdalg.gf4_over_gf2()),
        ("truncated_poly(3,3)", fdalg.truncated_poly(3, 3)),
    )
    D = 4
    for name, algebra in presets:
        bad = ""
        detail = []
        for trial in range(2):
            m = fdalg.random_module(algebra, "right", rng)
            n = fdalg.random_module(algebra, "left", rng)
            legs = [
                fdalg.tor(m, n, D, minimize=mini, resolve_argument=arg).dims
                for mini in (True, False)
                for arg in ("first", "second")
            ]
            if len(set(legs)) != 1:
                bad = f"legs disagree on trial {trial}: {legs}"
            if legs[0][0] != fdalg.tor_zero_direct(m, n):
                bad = bad or (
                    f"degree 0 disagrees with the direct tensor on trial {trial}"
                )
            detail.append(f"trial {trial}: dims {legs[0]}")
        checks.append(
            Check(
                f"Tor balance and resolution independence over {name}",
                not bad,
                bad or "; ".join(detail),
            )
        )
    return checks


# --------------------------------------------------------------- example-C


def _suite_example_c() -> list[Check]:
    checks: list[Check] = []
    rng = np.random.default_rng(505)
    cases = [
        (5, 2, "trivial", lambda p, d: trivial_representation(composition([d]), p)),
        (5, 2, "sign", lambda p, d: sign_representation(composition([d]), p)),
        (7, 3, "standard", lambda p, d: standard_representation(d, p)),
    ]
    for p, d, vname, make in cases:
        for trial in range(2):
            additive = space([int(x) for x in rng.integers(0, 3, size=7)])
            v = make(p, d)
            grid = grid_from_additive([[additive] * d for _ in range(d)])
            lhs = tensor_tor(grid, trivial_representation(composition([d]), p), v)
            rhs = schur_of_stable_tor(additive, v)
            ok = lhs.dims == rhs.dims
            checks.append(
                Check(
                    f"two routes agree: p={p}, d={d}, twist {vname}, trial {trial}",
                    ok,
                    f"table {lhs.dims}"
                    if ok
                    else f"tensor route {lhs.dims} vs Schur route {rhs.dims} "
                    f"on additive {additive.dims}",
                )
            )

    # Orbit engine against the dense reference on a mixed composition;
    # rows inside one block of (2, 1) must carry equal tables.
    t_a = space([int(x) for x in rng.integers(0, 2, size=5)])
    t_b = space([int(x) for x in rng.integers(0, 2, size=5)])
    gridc = grid_from_additive([[t_a] * 3, [t_a] * 3, [t_b] * 3])
    u = trivial_representation(composition([2, 1]), 5)
    v = sign_representation(composition([3]), 5)
    orbit = tensor_tor(gridc, u, v)
    dense = dense_coinvariants(_grid_module(gridc, 5), tensor_representation(u, v))
    checks.append(
        Check(
            "orbit coinvariants match the dense reference on blocks (2,1)x(3)",
            orbit.dims == dense.dims,
            f"table {orbit.dims}"
            if orbit.dims == dense.dims
            else f"orbit {orbit.dims} vs dense {dense.dims}",
        )
    )
    return checks


SUITES = {
    "linalg": _suite_linalg,
    "graded": _suite_graded,
    "koszul": _suite_koszul,
    "fdalg-balance": _suite_fdalg_balance,
    "example-C": _suite_example_c,
}


def run_suite(name: str) -> list[Check]:
    """Run one named suite, or every suite for 'all'."""
    if name == "all":
        out: list[Check] = []
        for key in ("linalg", "graded", "koszul", "fdalg-balance", "example-C"):
            out.extend(SUITES[key]())
        return out
    if name not in SUITES:
        raise JobValidationError(
            f"unknown suite {name!r}; known: {', '.join(list(SUITES) + ['all'])}"
        )
    return SUITES[name]()

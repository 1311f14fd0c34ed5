"""Graded dimension tables with a hard truncation degree.

A GradedSpace records dimensions for degrees 0..truncation and nothing
above; every operation states its output truncation explicitly.  The
module also holds the two stable multiplier series: the even-degree table
of ones, and the truncated polynomial Ext algebra on generators whose
degrees grow p-adically (generator i has degree 2*p**(i-1), p-th powers
vanish).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fhcalc.gf_linalg import require_prime


class GradedError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpace:
    """Dimensions per degree 0..truncation, with optional basis labels."""

    dims: tuple[int, ...]
    labels: tuple[tuple, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.dims) == 0:
            raise GradedError("a graded space needs at least degree 0")
        if any((not isinstance(d, int)) or d < 0 for d in self.dims):
            raise GradedError("dimensions must be non-negative integers")
        if self.labels is not None:
            if len(self.labels) != len(self.dims):
                raise GradedError("labels must cover every degree 0..truncation")
            for n, (d, lab) in enumerate(zip(self.dims, self.labels)):
                if len(lab) != d:
                    raise GradedError(
                        f"degree {n}: {len(lab)} labels for dimension {d}"
                    )

    @property
    def truncation(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        if 0 <= n <= self.truncation:
            return self.dims[n]
        return 0

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def without_labels(self) -> "GradedSpace":
        return GradedSpace(self.dims) if self.labels is not None else self

    def truncate(self, truncation: int) -> "GradedSpace":
        if truncation >= self.truncation:
            return self.pad(truncation)
        labels = self.labels[: truncation + 1] if self.labels is not None else None
        return GradedSpace(self.dims[: truncation + 1], labels)

    def pad(self, truncation: int) -> "GradedSpace":
        """Extend with zero dimensions up to the given truncation."""
        if truncation < self.truncation:
            raise GradedError("pad cannot lower the truncation")
        extra = truncation - self.truncation
        labels = None
        if self.labels is not None:
            labels = self.labels + ((),) * extra
        return GradedSpace(self.dims + (0,) * extra, labels)

    def tensor(self, other: "GradedSpace") -> "GradedSpace":
        return tensor(self, other)

    def poincare_series(self) -> str:
        terms = []
        for n, d in enumerate(self.dims):
            if d == 0:
                continue
            if n == 0:
                terms.append(str(d))
                continue
            coeff = "" if d == 1 else str(d)
            power = "t" if n == 1 else f"t^{n}"
            terms.append(coeff + power)
        return " + ".join(terms) if terms else "0"

    def csv_text(self) -> str:
        lines = ["degree,dimension"]
        lines.extend(f"{n},{d}" for n, d in enumerate(self.dims))
        return "\n".join(lines) + "\n"


def space(dims, truncation: int | None = None, labels=None) -> GradedSpace:
    """Build a GradedSpace from a dimension list, padding up to truncation."""
    dims = tuple(int(d) for d in dims)
    if truncation is not None:
        if len(dims) > truncation + 1:
            raise GradedError(
                f"{len(dims)} dimensions exceed truncation {truncation}"
            )
        dims = dims + (0,) * (truncation + 1 - len(dims))
    if labels is not None:
        labels = tuple(tuple(lab) for lab in labels)
        if truncation is not None and len(labels) < len(dims):
            labels = labels + ((),) * (len(dims) - len(labels))
    return GradedSpace(dims, labels)


def from_dict(dims: dict[int, int], truncation: int) -> GradedSpace:
    out = [0] * (truncation + 1)
    for n, d in dims.items():
        if not 0 <= n <= truncation:
            raise GradedError(f"degree {n} outside 0..{truncation}")
        out[n] = int(d)
    return GradedSpace(tuple(out))


def zero(truncation: int) -> GradedSpace:
    return GradedSpace((0,) * (truncation + 1))


def unit(truncation: int) -> GradedSpace:
    return GradedSpace((1,) + (0,) * truncation)


def tensor(a: GradedSpace, b: GradedSpace) -> GradedSpace:
    """Graded tensor product: convolution of dimension tables.

    Output truncation is the smaller input truncation.  When both inputs
    carry labels the output labels are the pairs (label_a, label_b) in
    lexicographic order of (degree of a, index in a, index in b).
    """
    trunc = min(a.truncation, b.truncation)
    da = np.asarray(a.dims, dtype=np.int64)
    db = np.asarray(b.dims, dtype=np.int64)
    dims = tuple(int(x) for x in np.convolve(da, db)[: trunc + 1])
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = []
        for n in range(trunc + 1):
            lab = []
            for i in range(n + 1):
                for la in a.labels[i]:
                    for lb in b.labels[n - i]:
                        lab.append((la, lb))
            labels.append(tuple(lab))
        labels = tuple(labels)
    return GradedSpace(dims, labels)


def tensor_power(a: GradedSpace, k: int) -> GradedSpace:
    if k < 0:
        raise GradedError("tensor power needs k >= 0")
    out = unit(a.truncation)
    for _ in range(k):
        out = tensor(out, a)
    return out


def even_ones(truncation: int) -> GradedSpace:
    """Dimension one in every even degree, zero in every odd degree.

    This is the stable multiplier on the Tor side: full Tor tables are the
    additive ones convolved with this series.
    """
    if truncation < 0:
        raise GradedError("truncation must be >= 0")
    return GradedSpace(tuple(1 - (n & 1) for n in range(truncation + 1)))


@dataclass(frozen=True)
class ExtMonomial:
    """Monomial in the truncated polynomial Ext algebra.

    exponents[i] is the power of generator i+1, each in [0, p); generator
    i+1 sits in degree 2*p**i.  Trailing zero exponents are stripped so
    equality is well defined.
    """

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        require_prime(self.p)
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 or e >= self.p for e in exps):
            raise GradedError(f"exponents must lie in [0, {self.p})")
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        object.__setattr__(self, "exponents", exps)

    @property
    def degree(self) -> int:
        return 2 * sum(e * self.p**i for i, e in enumerate(self.exponents))

    def is_unit(self) -> bool:
        return not self.exponents

    def multiply(self, other: "ExtMonomial") -> "ExtMonomial | None":
        return e_multiply(self, other)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 0:
                continue
            parts.append(f"g{i + 1}" if e == 1 else f"g{i + 1}^{e}")
        return "*".join(parts)


def e_multiply(a: ExtMonomial, b: ExtMonomial) -> ExtMonomial | None:
    """Product of monomials; None encodes zero (a p-th power appeared)."""
    if a.p != b.p:
        raise GradedError("monomials live over different primes")
    k = max(len(a.exponents), len(b.exponents))
    ea = a.exponents + (0,) * (k - len(a.exponents))
    eb = b.exponents + (0,) * (k - len(b.exponents))
    summed = tuple(x + y for x, y in zip(ea, eb))
    if any(e >= a.p for e in summed):
        return None
    return ExtMonomial(a.p, summed)


@dataclass(frozen=True)
class ExtAlgebra:
    """Monomial basis of the stable Ext algebra, truncated in degree.

    Finite rank r keeps generators 1..r; rank None means every generator
    whose degree fits under the truncation (generators beyond that cannot
    carry a nonzero exponent anyway).
    """

    p: int
    rank: int | None
    truncation: int
    monomials: tuple[ExtMonomial, ...]

    def unit(self) -> ExtMonomial:
        return ExtMonomial(self.p, ())

    def monomials_of_degree(self, n: int) -> tuple[ExtMonomial, ...]:
        return tuple(m for m in self.monomials if m.degree == n)

    def dims_table(self) -> GradedSpace:
        dims = [0] * (self.truncation + 1)
        labels: list[list] = [[] for _ in range(self.truncation + 1)]
        for m in self.monomials:
            dims[m.degree] += 1
            labels[m.degree].append(m.exponents)
        return GradedSpace(tuple(dims), tuple(tuple(lab) for lab in labels))


def ext_algebra(p: int, rank: int | None, truncation: int) -> ExtAlgebra:
    """Enumerate the monomial basis in degrees 0..truncation.

    Generator i has degree 2*p**(i-1) and exponents run over [0, p).
    """
    p = require_prime(p)
    if truncation < 0:
        raise GradedError("truncation must be >= 0")
    if rank is not None and rank < 0:
        raise GradedError("rank must be >= 0 (or None for unbounded)")
    gen_degrees = []
    i = 1
    while (rank is None or i <= rank):
        d = 2 * p ** (i - 1)
        if d > truncation:
            break
        gen_degrees.append(d)
        i += 1
    found: list[ExtMonomial] = []

    def rec(idx: int, prefix: list[int], budget: int) -> None:
        if idx == len(gen_degrees):
            found.append(ExtMonomial(p, tuple(prefix)))
            return
        d = gen_degrees[idx]
        e = 0
        while e < p and e * d <= budget:
            rec(idx + 1, prefix + [e], budget - e * d)
            e += 1

    rec(0, [], truncation)
    found.sort(key=lambda m: (m.degree, m.exponents))
    return ExtAlgebra(p, rank, truncation, tuple(found))

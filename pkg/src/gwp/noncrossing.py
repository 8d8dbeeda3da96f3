"""Non-crossing partition lattice and the moment/cumulant transforms.

NC(n) is the lattice of partitions of {1..n} with no interleaved blocks; its
size is the n-th Catalan number.  The Moebius function of the interval up to
the one-block partition factorizes over the Kreweras complement, which is what
makes exact cumulant computations cheap.  Multivariate cumulants of operators
are obtained by Moebius inversion of partitioned conditional expectations,
where nested blocks are evaluated innermost first and their diagonal values
re-enter as left multipliers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .algebra import (
    Coeff,
    DiagonalElement,
    Element,
    annihilation,
    creation,
    expectation,
    norm_coeff,
)
from .graphs import PathWord

Blocks = tuple[tuple[int, ...], ...]

#: Moments or cumulants indexed 1..n (Python index 0 holds order 1).
ScalarSequence = Sequence[Coeff]

MAX_NC_ORDER = 14  # catalan(14) = 2674440 partitions: the desk-scale ceiling


def catalan(k: int) -> int:
    """k-th Catalan number binom(2k, k) / (k + 1), exactly."""
    if k < 0:
        raise ValueError("catalan is defined for k >= 0")
    return math.comb(2 * k, k) // (k + 1)


def is_noncrossing(blocks: Blocks, n: int) -> bool:
    """Stack check: a partition crosses iff some block is re-entered while a
    later-opened block is still open."""
    owner = {}
    last = {}
    for bi, b in enumerate(blocks):
        for x in b:
            owner[x] = bi
        last[bi] = b[-1]
    stack: list[int] = []
    for x in range(1, n + 1):
        bi = owner[x]
        if stack and stack[-1] == bi:
            pass
        elif bi in stack:
            return False
        else:
            stack.append(bi)
        if x == last[bi]:
            stack.pop()
    return True


@dataclass(frozen=True)
class NCPartition:
    """Non-crossing partition of {1..n} in canonical form.

    Blocks are strictly increasing tuples, listed in order of their minima.
    """

    n: int
    blocks: Blocks

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> NCPartition:
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        seen = [x for b in canon for x in b]
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError(f"blocks do not partition 1..{n}")
        if not is_noncrossing(canon, n):
            raise ValueError("partition has crossing blocks")
        return cls(n=n, blocks=canon)

    @classmethod
    def full(cls, n: int) -> NCPartition:
        return cls(n=n, blocks=(tuple(range(1, n + 1)),))

    @classmethod
    def discrete(cls, n: int) -> NCPartition:
        return cls(n=n, blocks=tuple((i,) for i in range(1, n + 1)))

    def block_count(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def refines(p: NCPartition, q: NCPartition) -> bool:
    """True when every block of p sits inside a block of q (p <= q)."""
    if p.n != q.n:
        raise ValueError("partitions of different ground sets")
    owner = {x: bi for bi, b in enumerate(q.blocks) for x in b}
    return all(len({owner[x] for x in b}) == 1 for b in p.blocks)


def _iter_nc_blocks(lo: int, hi: int) -> Iterator[Blocks]:
    """All non-crossing partitions of the interval [lo..hi] as block tuples.

    The block containing lo is placed first; the gaps it leaves are partitioned
    recursively and independently.  Enumeration order is deterministic: for the
    first block, each possible next member is tried in increasing order before
    the block is closed.
    """
    if lo > hi:
        yield ()
        return

    def place(block: list[int], frm: int) -> Iterator[Blocks]:
        # extend the first block with any p in [frm..hi], then close it
        for p in range(frm, hi + 1):
            block.append(p)
            yield from place(block, p + 1)
            block.pop()
        first = tuple(block)
        gaps = []
        for a, b in zip(block, block[1:]):
            gaps.append((a + 1, b - 1))
        gaps.append((block[-1] + 1, hi))
        yield from _cross_gaps(first, gaps, 0, ())

    def _cross_gaps(
        first: tuple[int, ...],
        gaps: list[tuple[int, int]],
        gi: int,
        acc: Blocks,
    ) -> Iterator[Blocks]:
        if gi == len(gaps):
            yield (first,) + acc
            return
        a, b = gaps[gi]
        for sub in _iter_nc_blocks(a, b):
            yield from _cross_gaps(first, gaps, gi + 1, acc + sub)

    yield from place([lo], lo + 1)


def _canon(blocks: Blocks) -> Blocks:
    return tuple(sorted(blocks, key=lambda b: b[0]))


def enumerate_nc(n: int) -> list[NCPartition]:
    """All of NC(n) in the canonical deterministic order; |NC(n)| = catalan(n)."""
    if not 1 <= n <= MAX_NC_ORDER:
        raise ValueError(f"n must lie in 1..{MAX_NC_ORDER}, got {n}")
    return [NCPartition(n=n, blocks=_canon(b)) for b in _iter_nc_blocks(1, n)]


def _iter_pairings(points: tuple[int, ...]) -> Iterator[Blocks]:
    if not points:
        yield ()
        return
    first = points[0]
    for j in range(1, len(points), 2):
        inner = points[1:j]
        outer = points[j + 1:]
        for pi in _iter_pairings(inner):
            for po in _iter_pairings(outer):
                yield ((first, points[j]),) + pi + po


def enumerate_nc_pairings(n: int) -> list[NCPartition]:
    """All non-crossing pair partitions of {1..n}; count = catalan(n/2)."""
    if n <= 0 or n % 2:
        raise ValueError(f"pair partitions need even positive n, got {n}")
    if n > MAX_NC_ORDER:
        raise ValueError(f"n must lie in 2..{MAX_NC_ORDER}, got {n}")
    pts = tuple(range(1, n + 1))
    return [NCPartition(n=n, blocks=_canon(b)) for b in _iter_pairings(pts)]


def kreweras(p: NCPartition) -> NCPartition:
    """Kreweras complement: the coarsest partition of the interleaved copy
    {1'..n'} whose union with p is non-crossing on 1,1',2,2',...,n,n'.

    Computed through the permutation model: blocks of p become increasing
    cycles sigma; the complement's blocks are the cycles of x -> sigma^{-1}(x+1).
    """
    n = p.n
    pred = {}
    for b in p.blocks:
        for i, x in enumerate(b):
            nxt = b[(i + 1) % len(b)]
            pred[nxt] = x
    f = {x: pred[x % n + 1] for x in range(1, n + 1)}
    seen: set[int] = set()
    blocks: list[tuple[int, ...]] = []
    for x in range(1, n + 1):
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = f[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = f[y]
        blocks.append(tuple(sorted(cyc)))
    return NCPartition(n=n, blocks=_canon(tuple(blocks)))


def mobius_to_top(p: NCPartition) -> int:
    """Moebius function mu(p, full partition), via the Kreweras factorization:
    the interval [p, 1_n] factors into full intervals indexed by the blocks of
    the complement, each contributing a signed Catalan number."""
    mu = 1
    for b in kreweras(p).blocks:
        s = len(b)
        mu *= (-1) ** (s - 1) * catalan(s - 1)
    return mu


def mobius_by_recursion(p: NCPartition, _all: list[NCPartition] | None = None) -> int:
    """Moebius function from its defining recursion over coarsenings.

    Exponentially slower than the factorized form; kept as the independent
    cross-check (sum of mu over all q >= p must vanish unless p is full).
    """
    universe = enumerate_nc(p.n) if _all is None else _all
    coarser = [q for q in universe if refines(p, q)]

    @lru_cache(maxsize=None)
    def mu(blocks: Blocks) -> int:
        if len(blocks) == 1:
            return 1
        here = NCPartition(n=p.n, blocks=blocks)
        return -sum(
            mu(q.blocks) for q in coarser if q.blocks != blocks and refines(here, q)
        )

    return mu(p.blocks)


@lru_cache(maxsize=None)
def _nc_mu_table(n: int) -> tuple[tuple[Blocks, int], ...]:
    """Canonical NC(n) enumeration paired with mu(pi, 1_n)."""
    return tuple((p.blocks, mobius_to_top(p)) for p in enumerate_nc(n))


def moments_to_cumulants(moments: ScalarSequence) -> list[Coeff]:
    """Free cumulants k_n = sum over NC(n) of mu(pi,1_n) * prod m_{|V|}."""
    out: list[Coeff] = []
    for n in range(1, len(moments) + 1):
        total: Coeff = 0
        for blocks, mu in _nc_mu_table(n):
            term: Coeff = mu
            for b in blocks:
                m = moments[len(b) - 1]
                if m == 0:
                    term = 0
                    break
                term = term * m
            total = total + term
        out.append(norm_coeff(total))
    return out


def cumulants_to_moments(cumulants: ScalarSequence) -> list[Coeff]:
    """Moments m_n = sum over NC(n) of prod k_{|V|} (Moebius inversion inverse)."""
    out: list[Coeff] = []
    for n in range(1, len(cumulants) + 1):
        total: Coeff = 0
        for blocks, _ in _nc_mu_table(n):
            term: Coeff = 1
            for b in blocks:
                k = cumulants[len(b) - 1]
                if k == 0:
                    term = 0
                    break
                term = term * k
            total = total + term
        out.append(norm_coeff(total))
    return out


def _eval_partition(blocks: Blocks, factors: Sequence[Element]) -> DiagonalElement:
    """Nested partitioned expectation for one block structure.

    Blocks form a laminar family by non-crossing; children are evaluated first
    and their diagonal values left-multiply the next factor of the covering
    block.  Values of outermost blocks multiply pointwise in the diagonal.
    """
    spans = [(b[0], b[-1]) for b in blocks]
    children: list[list[int]] = [[] for _ in blocks]
    roots: list[int] = []
    stack: list[int] = []
    for i in range(len(blocks)):
        while stack and spans[stack[-1]][1] < spans[i][0]:
            stack.pop()
        if stack:
            children[stack[-1]].append(i)
        else:
            roots.append(i)
        stack.append(i)

    def value(i: int) -> DiagonalElement:
        b = blocks[i]
        # diagonal values of direct children, grouped by the gap they occupy
        gap_val: dict[int, DiagonalElement] = {}
        for c in children[i]:
            lo = spans[c][0]
            gi = 0
            while b[gi + 1] < lo:
                gi += 1
            d = value(c)
            gap_val[gi] = gap_val[gi] * d if gi in gap_val else d
        x = factors[b[0] - 1]
        for gi in range(len(b) - 1):
            nxt = factors[b[gi + 1] - 1]
            if gi in gap_val:
                nxt = gap_val[gi].as_element() * nxt
            x = x * nxt
        return expectation(x)

    acc: DiagonalElement | None = None
    for r in roots:
        v = value(r)
        acc = v if acc is None else acc * v
    assert acc is not None
    return acc


def partitioned_expectation(
    p: NCPartition, factors: Sequence[Element]
) -> DiagonalElement:
    """Multiplicative extension of the conditional expectation along p."""
    if len(factors) != p.n:
        raise ValueError(f"expected {p.n} factors, got {len(factors)}")
    g = factors[0].graph
    for f in factors:
        if f.graph is not g:
            raise ValueError("factors live over different graphs")
    return _eval_partition(p.blocks, factors)


def _scalar_mixed_cumulant(factors: Sequence[Element]) -> Coeff:
    # One-vertex fast path: diagonal values are scalars and commute out, so
    # every partitioned expectation factorizes into plain block moments.
    # Works on raw term dicts to keep the hot loop free of Element churn.
    from .algebra import mul_monomials

    n = len(factors)
    term_dicts = [f.terms for f in factors]
    cache: dict[tuple[int, ...], Coeff] = {}

    def block_moment(b: tuple[int, ...]) -> Coeff:
        m = cache.get(b)
        if m is None:
            cur = term_dicts[b[0] - 1]
            for pos in b[1:]:
                nxt = term_dicts[pos - 1]
                acc: dict = {}
                for (u1, w1), c1 in cur.items():
                    for (u2, w2), c2 in nxt.items():
                        key = mul_monomials(u1, w1, u2, w2)
                        if key is not None:
                            acc[key] = acc.get(key, 0) + c1 * c2
                cur = {k: c for k, c in acc.items() if c != 0}
                if not cur:
                    break
            m = sum(
                (c for (u, w), c in cur.items()
                 if u.is_vertex_unit and w.is_vertex_unit),
                start=0,
            )
            cache[b] = m
        return m

    total: Coeff = 0
    for blocks, mu in _nc_mu_table(n):
        term: Coeff = mu
        for b in blocks:
            m = block_moment(b)
            if m == 0:
                term = 0
                break
            term = term * m
        total = total + term
    return total


def mixed_cumulant(
    factors: Sequence[Element], force_nested: bool = False
) -> DiagonalElement:
    """n-th diagonal-valued cumulant of the factor list, by Moebius inversion
    of partitioned expectations over NC(n)."""
    if not factors:
        raise ValueError("cumulant of an empty factor list")
    n = len(factors)
    if n > MAX_NC_ORDER:
        raise ValueError(f"cumulant order {n} exceeds ceiling {MAX_NC_ORDER}")
    g = factors[0].graph
    for f in factors:
        if f.graph is not g:
            raise ValueError("factors live over different graphs")
    if len(g.vertices) == 1 and not force_nested:
        val = _scalar_mixed_cumulant(factors)
        return DiagonalElement(g, {g.vertices[0]: val})
    acc = DiagonalElement.zero(g)
    for blocks, mu in _nc_mu_table(n):
        acc = acc + _eval_partition(blocks, factors).scaled(mu)
    return acc


@dataclass(frozen=True)
class CumulantFactorization:
    """Result of factoring a pure-generator cumulant as mu * E(full product).

    ``matching`` holds the partitions whose partitioned expectation equals the
    (nonzero) expectation of the full product; ``anomalous`` holds partitions
    with a nonzero value different from it, which the factorization cannot
    absorb and which are therefore reported rather than folded in.
    """

    matching: tuple[NCPartition, ...]
    mu: int
    product_expectation: DiagonalElement
    cumulant: DiagonalElement
    identity_holds: bool
    anomalous: tuple[tuple[NCPartition, DiagonalElement], ...]


def theorem13_factor(
    words: Sequence[tuple[PathWord, str]],
) -> CumulantFactorization:
    """Factor the cumulant of pure generators C(w) / A(w) through the scale
    factor mu = sum of mu(pi,1_n) over partitions matching the full moment."""
    if not words:
        raise ValueError("empty generator list")
    factors: list[Element] = []
    for w, flavor in words:
        if flavor in ("plain", "1"):
            factors.append(creation(w))
        elif flavor in ("starred", "*"):
            factors.append(annihilation(w))
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
    n = len(factors)
    g = factors[0].graph
    full = factors[0]
    for f in factors[1:]:
        full = full * f
    e_full = expectation(full)

    matching: list[NCPartition] = []
    anomalous: list[tuple[NCPartition, DiagonalElement]] = []
    mu_total = 0
    for blocks, mu in _nc_mu_table(n):
        p = NCPartition(n=n, blocks=blocks)
        e_p = _eval_partition(blocks, factors)
        if not e_full.is_zero() and e_p == e_full:
            matching.append(p)
            mu_total += mu
        elif not e_p.is_zero():
            anomalous.append((p, e_p))
    cum = mixed_cumulant(factors)
    holds = cum == e_full.scaled(mu_total)
    return CumulantFactorization(
        matching=tuple(matching),
        mu=mu_total,
        product_expectation=e_full,
        cumulant=cum,
        identity_holds=holds,
        anomalous=tuple(anomalous),
    )

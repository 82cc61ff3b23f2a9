"""Closed-form intersection rank bounds and the audited inequality chain.

Everything here is exact integer arithmetic; the chain depth is computed by
integer powering, never by floating-point logarithms.  ``trace`` replays the
generic-case argument line by line for concrete parameters and raises
:class:`ChainViolation` if any recorded inequality fails, which would
indicate an implementation bug rather than a mathematical possibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import ChainViolation, DomainError
from .localring import _is_prime


def bound(p: int, d_a: int, d_b: int) -> int:
    """p^2 (dA + dB - 2)^2 (dA - 1)(dB - 1) + 1."""
    _check_prime(p)
    if d_a < 1 or d_b < 1:
        raise DomainError("ranks must be at least 1", dA=d_a, dB=d_b)
    return p * p * (d_a + d_b - 2) ** 2 * (d_a - 1) * (d_b - 1) + 1


def chain_depth(p: int, d_a: int, d_b: int) -> int:
    """floor(log_p(dA + dB - 2)) + 1, by integer powering."""
    _check_prime(p)
    m = d_a + d_b - 2
    if m < 1:
        raise DomainError("need dA + dB >= 3", dA=d_a, dB=d_b)
    n = 1
    power = p
    while power <= m:
        n += 1
        power *= p
    return n


def schreier_bound(d: int, index: int) -> int:
    """(d - 1) * index + 1."""
    if d < 0 or index < 1:
        raise DomainError("need d >= 0 and index >= 1", d=d, index=index)
    return (d - 1) * index + 1


def open_case_bound(d_a: int, d_b: int) -> int:
    """(dA - 1)(dB - 2) + 1 for an open factor of even rank >= 2."""
    if d_b < 2:
        raise DomainError("open factor needs dB >= 2", dB=d_b)
    return (d_a - 1) * (d_b - 2) + 1


def hanna_neumann_bound(d1: int, d2: int) -> int:
    """(d1 - 1)(d2 - 1) + 1."""
    if d1 < 1 or d2 < 1:
        raise DomainError("ranks must be at least 1", d1=d1, d2=d2)
    return (d1 - 1) * (d2 - 1) + 1


@dataclass(frozen=True)
class ChainStep:
    label: str
    expression: str
    value: int


@dataclass(frozen=True)
class HowsonReport:
    """Inputs and every intermediate value of the audited bound chain.

    ``case`` is one of solvable, open-subgroup, procyclic, generic; ``trace``
    itself only produces procyclic (one rank equal to 1) or generic reports,
    since its preconditions assume the ambient rank is at least 3 and both
    subgroups have infinite index.
    """

    p: int
    d_g: int
    d_a: int
    d_b: int
    case: str
    n: int
    joint_index: int
    d_a0_bound: int
    d_b0_bound: int
    d_c_bound: int
    hn_bound: int
    final_bound: int
    closed_form: int
    chain: Tuple[ChainStep, ...]


def _check_prime(p: int):
    if not _is_prime(p):
        raise DomainError("p must be prime", p=p)


def _require(condition: bool, label: str, **context):
    if not condition:
        raise ChainViolation(f"audited inequality failed at step '{label}'", **context)


def trace(p: int, d_g: int, d_a: int, d_b: int, joint_index: int) -> HowsonReport:
    """Replay the generic-case bound chain with a concrete joint index.

    ``joint_index`` stands for the index of the intersection of the two
    depth-n chain subgroups; the argument only constrains it to be a power of
    p in [p^n, p^2n], so it is a caller-supplied degree of freedom.
    """
    _check_prime(p)
    if d_g < 3:
        raise DomainError("chain argument assumes ambient rank at least 3", dG=d_g)
    if d_a < 2:
        raise DomainError("chain argument assumes dA >= 2", dA=d_a)
    if d_b < 1:
        raise DomainError("dB must be at least 1", dB=d_b)

    n = chain_depth(p, d_a, d_b)
    lo, hi = p ** n, p ** (2 * n)
    j = joint_index
    if j < lo or j > hi:
        raise DomainError("joint index outside [p^n, p^2n]",
                          joint_index=j, low=lo, high=hi)
    jj = j
    while jj % p == 0:
        jj //= p
    if jj != 1:
        raise DomainError("joint index must be a power of p", joint_index=j, p=p)

    steps = []
    m = d_a + d_b - 2
    steps.append(ChainStep("depth", "floor(log_p(dA+dB-2)) + 1", n))
    _require(p ** (n - 1) <= m < p ** n, "depth", n=n, m=m)

    ratio = j // (p ** n)
    steps.append(ChainStep("index-ratio", "[U_n : U_n meet V_n] = joint / p^n", ratio))

    d_a0 = schreier_bound(d_a, ratio)
    d_b0 = schreier_bound(d_b, ratio)
    steps.append(ChainStep("schreier-A0", "(dA-1)*ratio + 1", d_a0))
    steps.append(ChainStep("schreier-B0", "(dB-1)*ratio + 1", d_b0))

    d_c = d_a0 + d_b0
    steps.append(ChainStep("generator-sum", "dC <= dA0 + dB0", d_c))
    combined = j * m // (p ** n) + 2
    steps.append(ChainStep("combined", "joint*(dA+dB-2)/p^n + 2", combined))
    _require(d_c == combined, "combined", d_c=d_c, combined=combined)

    steps.append(ChainStep("depth-strict", "joint*(dA+dB-2)/p^n + 2 < joint + 2", j + 2))
    _require(combined < j + 2, "depth-strict", combined=combined, joint=j)

    open_rank = (d_g - 2) * j + 2
    steps.append(ChainStep("open-rank", "(dG-2)*joint + 2", open_rank))
    _require(j + 2 <= open_rank, "open-rank", open_rank=open_rank)
    _require(d_c < open_rank, "not-open", d_c=d_c, open_rank=open_rank)
    steps.append(ChainStep("not-open", "dC bound < open-subgroup rank at the joint index",
                           open_rank - d_c))

    hn = hanna_neumann_bound(d_a0, d_b0)
    steps.append(ChainStep("hanna-neumann", "(dA0-1)*(dB0-1) + 1", hn))

    final = p ** (2 * n) * (d_a - 1) * (d_b - 1) + 1
    steps.append(ChainStep("index-relaxation", "p^(2n)*(dA-1)*(dB-1) + 1", final))
    _require(hn <= final, "index-relaxation", hn=hn, final=final)

    closed = bound(p, d_a, d_b)
    steps.append(ChainStep("closed-form", "p^2*(dA+dB-2)^2*(dA-1)*(dB-1) + 1", closed))
    _require(final <= closed, "closed-form", final=final, closed=closed)

    case = "procyclic" if min(d_a, d_b) == 1 else "generic"
    return HowsonReport(
        p=p, d_g=d_g, d_a=d_a, d_b=d_b, case=case, n=n, joint_index=j,
        d_a0_bound=d_a0, d_b0_bound=d_b0, d_c_bound=d_c,
        hn_bound=hn, final_bound=final, closed_form=closed,
        chain=tuple(steps),
    )

"""Independent per-point verifiers used as test oracles.

They evaluate set membership at one sample point per cell, never touching the
library's indicator arrays, so they cross-check the vectorised checkers.
"""

from fractions import Fraction


def sample_points(system):
    pts = {Fraction(0), Fraction(1)}
    for s in system.sets():
        for iv in s.intervals:
            pts.update((iv.lo, iv.hi))
    pts = sorted(pts)
    return [(lo, hi, (lo + hi) / 2) for lo, hi in zip(pts, pts[1:])]


def axiom_failures(system, extended=True, nearly=False):
    """Set of (axiom, indices) keys failing at some sample point."""
    n = system.size
    S = system.S
    out = set()
    for _, _, x in sample_points(system):
        s = [[x in S[i][j] for j in range(n)] for i in range(n)]
        for i in range(n):
            if not s[i][i]:
                out.add(("1", (i + 1,)))
            for j in range(n):
                if i < j and s[i][j] and s[j][i]:
                    out.add(("2", (i + 1, j + 1)))
                for k in range(n):
                    if s[i][j] and s[j][k] and not s[i][k]:
                        out.add(("3", (i + 1, j + 1, k + 1)))
        if not extended:
            continue
        r = [x in system.R[i] for i in range(n)]
        c = [x in system.C[i] for i in range(n)]
        for i in range(n):
            for j in range(n):
                if c[i] and s[i][j] and not c[j]:
                    out.add(("4", (i + 1, j + 1)))
                if s[i][j] and r[j] and not r[i]:
                    out.add(("5", (i + 1, j + 1)))
                if not nearly and r[i] and c[j] and not s[i][j]:
                    out.add(("6", (i + 1, j + 1)))
    return out


def finitely_maximal_at(system, x) -> bool:
    """Linear order at x, A and B cover everything, and min A = max B."""
    n = system.size
    le = lambda i, j: x in system.S[i][j]
    for i in range(n):
        for j in range(i + 1, n):
            if not (le(i, j) or le(j, i)):
                return False
    A = [i for i in range(n) if x in system.C[i]]
    B = [i for i in range(n) if x in system.R[i]]
    if len(set(A) | set(B)) != n or not A or not B:
        return False
    lo = [a for a in A if all(le(a, b) for b in A)]
    hi = [b for b in B if all(le(a, b) for a in B)]
    return lo == hi and len(lo) == 1


def truncated_maximal_at(system, x, kind) -> bool:
    """As above, but a disjoint exhaustive cut is fine where the order type allows it."""
    if finitely_maximal_at(system, x):
        return True
    n = system.size
    le = lambda i, j: x in system.S[i][j]
    if any(not (le(i, j) or le(j, i)) for i in range(n) for j in range(n)):
        return False
    A = {i for i in range(n) if x in system.C[i]}
    B = {i for i in range(n) if x in system.R[i]}
    if A & B or len(A | B) != n:
        return False
    if not A:
        return kind in ("nat", "well-ordered", "int", "rat")
    if not B:
        return kind in ("int", "rat")
    return kind == "rat"

"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's internal forms:
directions are normalized by dividing through by the first nonzero entry
instead of reducing to a primitive integer vector, energies are plain
double loops, and slope windows are tested with cross-multiplied Fraction
comparisons so no float division ever enters the expected values.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=list(HealthCheck),
    derandomize=True,
)
settings.load_profile("suite")


def first_nonzero(values):
    for v in values:
        if v != 0:
            return v
    return None


def oracle_direction(x, y, antipodal):
    """Direction class of x - y, scaled so the first nonzero entry is +-1.

    A different normal form from the library's primitive integer vector;
    the two agree exactly when both are well defined, which is what the
    equivalence tests check.
    """
    diff = [Fraction(a) - Fraction(b) for a, b in zip(x, y)]
    lead = first_nonzero(diff)
    assert lead is not None, "oracle fed a degenerate pair"
    scaled = [v / abs(lead) for v in diff]
    if antipodal and lead < 0:
        scaled = [-v for v in scaled]
    return tuple(scaled)


def oracle_census(points, antipodal):
    """Set of oracle direction classes over distinct pairs.

    Identified mode walks unordered pairs, signed mode both orders: the
    same pair conventions the library census documents.
    """
    keys = set()
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            keys.add(oracle_direction(points[i], points[j], antipodal))
            if not antipodal:
                keys.add(oracle_direction(points[j], points[i], antipodal))
    return keys


def key_to_oracle_form(key):
    """Map a library integer direction key onto the oracle normal form."""
    lead = first_nonzero(key.rep)
    return tuple(Fraction(v) / abs(Fraction(lead)) for v in key.rep)


def brute_energy(points, masses, s):
    """Double-loop s-energy over ordered pairs.

    Runs in Fractions when s is an even integer on rational points (the
    squared distances stay rational), in floats otherwise.
    """
    n = len(points)
    exact = (
        isinstance(s, int)
        and s % 2 == 0
        and all(isinstance(c, (int, Fraction)) for p in points for c in p)
    )
    total = Fraction(0) if exact else 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            dist_sq = sum(
                (Fraction(a) - Fraction(b)) ** 2
                for a, b in zip(points[i], points[j])
            )
            if exact:
                total += (
                    Fraction(masses[i]) * Fraction(masses[j]) / dist_sq ** (s // 2)
                )
            else:
                total += (
                    float(masses[i])
                    * float(masses[j])
                    * float(dist_sq) ** (-float(s) / 2.0)
                )
    return total


def brute_window_masses(sup1, m1, sup2, m2, centers, eps):
    """Pair mass per window center with every slope coordinate within eps.

    Closed inequalities, tested by multiplying through by the positive
    denominator magnitude, all in Fractions.  centers is a list of
    (d-1)-tuples of Fractions; eps a Fraction.
    """
    d = len(sup1[0])
    out = []
    for t in centers:
        acc = Fraction(0)
        for x, mx in zip(sup1, m1):
            for y, my in zip(sup2, m2):
                den = Fraction(x[d - 1]) - Fraction(y[d - 1])
                mag = abs(den)
                sign = 1 if den > 0 else -1
                ok = True
                for i in range(d - 1):
                    num = (Fraction(x[i]) - Fraction(y[i])) * sign
                    if not (t[i] - eps) * mag <= num <= (t[i] + eps) * mag:
                        ok = False
                        break
                if ok:
                    acc += Fraction(mx) * Fraction(my)
        out.append(acc)
    return out


def brute_chart_mass(sup1, m1, sup2, m2):
    """Pair mass with every slope coordinate inside [1/2, 1], exactly."""
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    centers = [tuple([half + quarter] * (len(sup1[0]) - 1))]
    return brute_window_masses(sup1, m1, sup2, m2, centers, quarter)[0]


def random_rational_points(rng: random.Random, n, d, denom=16):
    """n distinct points with coordinates j/denom in [0, 1], seeded."""
    pts = set()
    while len(pts) < n:
        pts.add(
            tuple(Fraction(rng.randrange(denom + 1), denom) for _ in range(d))
        )
    return sorted(pts)


def min_pairwise_gap(vectors):
    """Smallest Euclidean distance over distinct vector pairs."""
    best = None
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            gap = sum((a - b) ** 2 for a, b in zip(vectors[i], vectors[j])) ** 0.5
            if best is None or gap < best:
                best = gap
    return best

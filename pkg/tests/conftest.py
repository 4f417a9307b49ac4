"""Shared draw helpers and independent quadrature oracles for the test suite."""

import math
import random

import pytest
from scipy.integrate import quad

from pwlannulus import (HalfSystem, Orientation, SystemParams, annulus_family,
                        domain, exists)

# ---------------------------------------------------------------------------
# independent principal-value quadrature oracle

def quad_pv(h: HalfSystem, y1: float, y0: float) -> float:
    """Adaptive-quadrature evaluation of the defining integral."""
    a, T, D = h.forward_triple()

    def w(y):
        return D * y * y - a * T * y + a * a

    def f(y):
        return -y / w(y)

    if a != 0.0:
        val, _ = quad(f, y1, y0, epsabs=1e-13, epsrel=1e-13, limit=400)
        return val
    assert y1 < 0.0 < y0
    m = min(-y1, y0)
    total = 0.0
    if y1 < -m:
        total += quad(f, y1, -m, epsabs=1e-13, epsrel=1e-13, limit=400)[0]
    if y0 > m:
        total += quad(f, m, y0, epsabs=1e-13, epsrel=1e-13, limit=400)[0]
    return total


# ---------------------------------------------------------------------------
# valid half-system draws spanning a-signs and spectral cases

_CATEGORIES = ("a_neg_complex", "a_zero_complex", "a_pos_complex",
               "a_pos_real_distinct", "a_pos_det_neg", "a_pos_real_double",
               "a_pos_det_zero")


def draw_forward_triple(rng: random.Random, category: str | None = None):
    """(a, T, D) with an existing forward half-map in the asked category."""
    if category is None:
        category = rng.choice(_CATEGORIES)
    T = rng.uniform(-2.0, 2.0)
    if category == "a_neg_complex":
        a = rng.uniform(-3.0, -0.2)
        D = (T * T / 4.0) * (1.0 + rng.uniform(0.2, 3.0)) + rng.uniform(0.1, 2.0)
    elif category == "a_zero_complex":
        a = 0.0
        D = (T * T / 4.0) + rng.uniform(0.1, 2.0)
    elif category == "a_pos_complex":
        a = rng.uniform(0.2, 3.0)
        D = (T * T / 4.0) + rng.uniform(0.1, 2.0)
    elif category == "a_pos_real_distinct":
        a = rng.uniform(0.2, 3.0)
        T = rng.choice([-1.0, 1.0]) * rng.uniform(1.5, 3.0)
        D = rng.uniform(0.05, 0.9) * (T * T / 4.0)
    elif category == "a_pos_det_neg":
        a = rng.uniform(0.2, 3.0)
        D = rng.uniform(-2.0, -0.1)
    elif category == "a_pos_real_double":
        a = rng.uniform(0.2, 3.0)
        T = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.5)
        D = T * T / 4.0
    elif category == "a_pos_det_zero":
        a = rng.uniform(0.2, 3.0)
        D = 0.0
    else:
        raise ValueError(category)
    return a, T, D


def draw_half_system(rng: random.Random, category: str | None = None,
                     orientation: Orientation | None = None) -> HalfSystem:
    if orientation is None:
        orientation = rng.choice([Orientation.FORWARD, Orientation.BACKWARD])
    a, T, D = draw_forward_triple(rng, category)
    if orientation is Orientation.BACKWARD:
        a, T = -a, -T  # dualize so the drawn triple exists backward
    h = HalfSystem(a=a, T=T, D=D, orientation=orientation)
    assert exists(h)
    return h


def domain_point(rng: random.Random, h: HalfSystem, *, lo_frac=0.05, hi_frac=0.9) -> float:
    """A y0 drawn from the bulk of the half-map domain."""
    dom = domain(h)
    hi = min(dom.mu, dom.lam + 10.0 * max(1.0, dom.lam))
    u = rng.uniform(lo_frac, hi_frac)
    return dom.lam + u * (hi - dom.lam)


def proper_pv_interval(rng: random.Random, h: HalfSystem, *, margin=1e-2):
    """[y1, y0] on which W stays well above zero, or None for this draw.

    Adaptive quadrature can only certify 1e-10 absolute agreement when the
    integrand is far from its poles, so near-singular draws are rejected.
    """
    from pwlannulus import wpoly

    w = wpoly(h)
    roots = w.roots()
    neg = max(max((r for r in roots if r < 0.0), default=-8.0) * 0.9, -8.0)
    pos = min(min((r for r in roots if r > 0.0), default=8.0) * 0.9, 8.0)
    y1 = rng.uniform(neg, pos)
    y0 = rng.uniform(y1, pos)
    vals = [w(y1), w(y0)]
    if w.c2 > 0.0:
        vertex = -w.c1 / (2.0 * w.c2)
        if y1 <= vertex <= y0:
            vals.append(w(vertex))
    lo, hi = min(vals), max(vals)
    if lo < margin or lo < 1e-4 * hi:
        return None
    return y1, y0


# ---------------------------------------------------------------------------
# proportional-W family draws (the annulus construction) and its violations

def draw_right_triple(rng: random.Random):
    """(aR, TR, DR) with an existing backward half-map and TR != 0."""
    mode = rng.choice(["focus_pos", "focus_pos", "focus_zero", "a_neg"])
    TR = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0)
    if mode == "focus_pos":
        aR = rng.uniform(0.2, 3.0)
        DR = (TR * TR / 4.0) + rng.uniform(0.1, 2.0)
    elif mode == "focus_zero":
        aR = 0.0
        DR = (TR * TR / 4.0) + rng.uniform(0.1, 2.0)
    else:
        aR = rng.uniform(-3.0, -0.2)
        DR = rng.uniform(-1.5, 2.0)
        if DR == 0.0:
            DR = 0.5
    return aR, TR, DR


def draw_annulus_params(rng: random.Random) -> SystemParams:
    aR, TR, DR = draw_right_triple(rng)
    k = math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
    return annulus_family(aR, TR, DR, k)


VIOLATIONS = ("trace", "xi0", "xi-inf", "beta", "H-crossing")


def draw_violating_params(rng: random.Random, violation: str) -> SystemParams:
    """A family instance breaking exactly one annulus clause.

    Construction keeps the other equalities at machine-precision zero: the
    mirrored trace family for the trace clause, single-parameter offsets for
    xi0/xi-inf/beta, and an a12 sign flip (invariant-preserving) for the
    crossing clause.
    """
    TR = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0)
    aR = rng.uniform(0.2, 3.0)
    DR = (TR * TR / 4.0) + rng.uniform(0.1, 2.0)  # right focus: aR >= 0 branch
    k = math.exp(rng.uniform(math.log(1e-1), math.log(1e1)))
    rk = math.sqrt(k)
    eps = rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 0.5)
    if violation == "trace":
        # same-sign traces; aL flips too so xi0 stays exactly zero
        p = SystemParams(
            aL11=rk * TR, aL12=-1.0, aL21=k * DR, aL22=0.0,
            aR11=TR, aR12=-1.0, aR21=DR, aR22=0.0,
            bL1=0.0, bL2=-rk * aR, bR1=0.0, bR2=-aR)
    elif violation == "xi0":
        p = SystemParams(
            aL11=-rk * TR, aL12=-1.0, aL21=k * DR, aL22=0.0,
            aR11=TR, aR12=-1.0, aR21=DR, aR22=0.0,
            bL1=0.0, bL2=rk * aR + eps * min(1.0, rk * aR), bR1=0.0, bR2=-aR)
    elif violation == "xi-inf":
        # one-sided bump keeps the left discriminant (and so H) positive
        p = SystemParams(
            aL11=-rk * TR, aL12=-1.0, aL21=k * DR + abs(eps) * k * DR, aL22=0.0,
            aR11=TR, aR12=-1.0, aR21=DR, aR22=0.0,
            bL1=0.0, bL2=rk * aR, bR1=0.0, bR2=-aR)
    elif violation == "beta":
        p = annulus_family(aR, TR, DR, k, offset=eps)
    elif violation == "H-crossing":
        # flip the left a12; trace/determinant/a-value are all preserved
        p = SystemParams(
            aL11=-rk * TR, aL12=1.0, aL21=-k * DR, aL22=0.0,
            aR11=TR, aR12=-1.0, aR21=DR, aR22=0.0,
            bL1=0.0, bL2=-rk * aR, bR1=0.0, bR2=-aR)
    else:
        raise ValueError(violation)
    return p


@pytest.fixture
def rng():
    return random.Random(20240817)

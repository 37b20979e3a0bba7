#!/usr/bin/env python3
"""Reference computations for frozen optimizer test constants.

Prints hex-encoded doubles so the C++ tests can assert against values that
were produced by an implementation that shares no code with the library.
Arithmetic below is ordered exactly as documented for each test case.
"""
import math


def dot(a, b):
    acc = 0.0
    for x, y in zip(a, b):
        acc += x * y
    return acc


def norm2(a):
    acc = 0.0
    for x in a:
        acc += x * x
    return acc


def proj_radial(z, w, eps_norm=1e-24):
    wn = norm2(w)
    if wn < eps_norm:
        return [0.0] * len(z)
    c = dot(z, w) / wn
    return [c * wi for wi in w]


def sub(a, b):
    return [x - y for x, y in zip(a, b)]


def hexvec(name, v):
    print(f"{name} = [" + ", ".join(x.hex() for x in v) + "]")


def adamo_single_step():
    """One full-path step: w=[3,4], g=[1,0], lambda=0, eta_rho=eta_theta=0.1,
    beta1_rho=beta1_theta=0.9, beta2_theta=0.999, eps=1e-8, curvature off."""
    w = [3.0, 4.0]
    g = [1.0, 0.0]
    b1r = 0.9
    b1t = 0.9
    b2t = 0.999
    eps = 1e-8
    eta_r = 0.1
    eta_t = 0.1
    t = 1

    gr = proj_radial(g, w)
    gt = sub(g, gr)

    c1r = 1.0 - b1r
    c1t = 1.0 - b1t
    c2t = 1.0 - b2t
    m_rho = [b1r * 0.0 + c1r * x for x in gr]
    m_theta = [b1t * 0.0 + c1t * x for x in gt]
    v_theta = [b2t * 0.0 + c2t * (x * x) for x in gt]

    bc1r = 1.0 - math.pow(b1r, float(t))
    bc1t = 1.0 - math.pow(b1t, float(t))
    bc2t = 1.0 - math.pow(b2t, float(t))
    mh_rho = [x / bc1r for x in m_rho]
    mh_theta = [x / bc1t for x in m_theta]
    vh_theta = [x / bc2t for x in v_theta]

    delta_rho = [eta_r * x for x in proj_radial(mh_rho, w)]
    precond = [m / (math.sqrt(v) + eps) for m, v in zip(mh_theta, vh_theta)]
    delta_theta = [eta_t * x for x in sub(precond, proj_radial(precond, w))]

    delta = [a + b for a, b in zip(delta_rho, delta_theta)]
    factor = 1.0 - 0.0
    w_plus = [(factor * wi) - d for wi, d in zip(w, delta)]

    print("# adamo single step, d=2")
    hexvec("delta_rho", delta_rho)
    hexvec("delta_theta", delta_theta)
    hexvec("w_plus", w_plus)


def adam_quadratic_trajectory():
    """Plain Adam on f(w)=0.5*||w||^2 from w=[1,1], eta=0.1, 200 steps."""
    w = [1.0, 1.0]
    m = [0.0, 0.0]
    v = [0.0, 0.0]
    b1, b2, eps, eta = 0.9, 0.999, 1e-8, 0.1
    c1, c2 = 1.0 - b1, 1.0 - b2
    for t in range(1, 201):
        g = list(w)
        m = [b1 * mi + c1 * gi for mi, gi in zip(m, g)]
        v = [b2 * vi + c2 * (gi * gi) for vi, gi in zip(v, g)]
        bc1 = 1.0 - math.pow(b1, float(t))
        bc2 = 1.0 - math.pow(b2, float(t))
        mh = [mi / bc1 for mi in m]
        vh = [vi / bc2 for vi in v]
        d = [eta * (mhi / (math.sqrt(vhi) + eps)) for mhi, vhi in zip(mh, vh)]
        w = [wi - di for wi, di in zip(w, d)]
        if t in (1, 50, 200):
            hexvec(f"adam_quad_w_t{t}", w)
    print(f"adam_quad_final_norm = {math.sqrt(norm2(w))!r}")


def adamw_decay_then_step():
    """One AdamW step: w=[2,-3], g=[0.5,0.25], eta=0.1, lambda=0.4."""
    w = [2.0, -3.0]
    g = [0.5, 0.25]
    b1, b2, eps, eta, lam = 0.9, 0.999, 1e-8, 0.1, 0.4
    c1, c2 = 1.0 - b1, 1.0 - b2
    w = [wi * (1.0 - eta * lam) for wi in w]
    m = [b1 * 0.0 + c1 * gi for gi in g]
    v = [b2 * 0.0 + c2 * (gi * gi) for gi in g]
    bc1 = 1.0 - math.pow(b1, 1.0)
    bc2 = 1.0 - math.pow(b2, 1.0)
    mh = [mi / bc1 for mi in m]
    vh = [vi / bc2 for vi in v]
    d = [eta * (mhi / (math.sqrt(vhi) + eps)) for mhi, vhi in zip(mh, vh)]
    w = [wi - di for wi, di in zip(w, d)]
    print("# adamw single step")
    hexvec("adamw_w_plus", w)


if __name__ == "__main__":
    adamo_single_step()
    adam_quadratic_trajectory()
    adamw_decay_then_step()

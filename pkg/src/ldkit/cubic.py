"""Closed-form real roots of cubic polynomials.

The trigonometric form is used when all three roots are real and Cardano's
form otherwise, so no complex arithmetic leaks into nearly-degenerate
cases. Each root gets two Newton polish steps against the original
coefficients, which drives residuals to the floating-point floor.
"""

import math


def cubic_roots(c3, c2, c1, c0, collapse_tol=1e-9):
    """Real roots of c3*x^3 + c2*x^2 + c1*x + c0 in increasing order.

    Complex roots are omitted; real roots closer than ``collapse_tol`` are
    collapsed to a single entry (multiplicity dropped).
    """
    if c3 == 0.0:
        raise ValueError("leading coefficient must be nonzero")

    a = c2 / c3
    b = c1 / c3
    c = c0 / c3

    # depressed cubic t^3 + p t + q with x = t - a/3
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c

    disc = -(4.0 * p ** 3 + 27.0 * q * q)
    roots = []
    if disc >= 0.0 and p < 0.0:
        # three real roots (possibly repeated)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        for k in range(3):
            t = m * math.cos(phi - 2.0 * math.pi * k / 3.0)
            roots.append(t - shift)
    else:
        # single real root via Cardano
        if p == 0.0:
            t = -math.copysign(abs(q) ** (1.0 / 3.0), q)
        else:
            d = math.sqrt(max(q * q / 4.0 + p ** 3 / 27.0, 0.0))
            u = -q / 2.0 + d
            v = -q / 2.0 - d
            t = math.copysign(abs(u) ** (1.0 / 3.0), u) + math.copysign(
                abs(v) ** (1.0 / 3.0), v
            )
        roots.append(t - shift)

    polished = []
    for x in roots:
        for _ in range(2):
            f = ((c3 * x + c2) * x + c1) * x + c0
            df = (3.0 * c3 * x + 2.0 * c2) * x + c1
            if df != 0.0:
                step = f / df
                if abs(step) < 1.0 + abs(x):
                    x -= step
        polished.append(x)
    polished.sort()

    out = []
    for x in polished:
        if out and abs(x - out[-1]) <= collapse_tol:
            continue
        out.append(x)
    return out

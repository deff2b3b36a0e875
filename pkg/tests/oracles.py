"""Independent test oracles.

Everything here is deliberately written the slow, obvious way (exact
rational arithmetic, literal double sums) and stays independent of the
library code paths it is used to check.
"""

from __future__ import annotations

from fractions import Fraction

ONE = Fraction(1)


def exact_products(x, y):
    """Componentwise products as exact rationals (floats are dyadic)."""
    return [Fraction(float(a)) * Fraction(float(b)) for a, b in zip(x, y)]


def model_final_exact(products, deltas):
    """Final value of the 2n-step accumulation model, exactly.

    ``products`` are the exact x_k*y_k, ``deltas`` the 2n-1 roundoffs in
    step order: delta[0] is the first multiply roundoff, then alternating
    multiply/add roundoffs for each later summand.
    """
    n = len(products)
    assert len(deltas) == 2 * n - 1
    s = products[0] * (ONE + deltas[0])
    for k in range(2, n + 1):
        s = s + products[k - 1] * (ONE + deltas[2 * k - 3])
        s = s * (ONE + deltas[2 * k - 2])
    return s


def perturbed_error_exact(products, deltas, thetas):
    """x_hat^T y_hat - x^T y for relative perturbations, exactly."""
    err = Fraction(0)
    for p, d, t in zip(products, deltas, thetas):
        err += p * ((ONE + d) * (ONE + t) - ONE)
    return err


def gamma_exact(k, u):
    """(1+u)^k - 1 as an exact rational."""
    return (ONE + Fraction(u)) ** k - ONE


def martingale_coeffs_exact(products, u):
    """The 2n-1 martingale coefficients as exact rationals, in step order."""
    u = Fraction(u)
    a = [abs(p) for p in products]
    coeffs = [a[0]]
    run = a[0]
    for k in range(2, len(a) + 1):
        coeffs.append(a[k - 1])
        run = (run + a[k - 1]) * (ONE + u)
        coeffs.append(run)
    return coeffs


def indep_coeffs_exact(products, u):
    """Independent-model coefficients |p_1|*gamma_n, |p_k|*gamma_{n-k+2}."""
    n = len(products)
    out = [abs(products[0]) * gamma_exact(n, u)]
    out += [abs(products[k - 1]) * gamma_exact(n - k + 2, u) for k in range(2, n + 1)]
    return out


def martingale_coeffs_literal(absp, u):
    """Literal double-sum evaluation of the martingale coefficients (floats).

    O(n^2); only usable for moderate n, which is the point: it shares no
    code with the incremental production implementation.
    """
    n = len(absp)
    out = [0.0] * (2 * n - 1)
    for k in range(1, n + 1):
        s = absp[0] * (1.0 + u) ** (k - 1)
        for j in range(2, k + 1):
            s += absp[j - 1] * (1.0 + u) ** (k - j + 1)
        out[2 * k - 2] = s
        if k >= 2:
            out[2 * k - 3] = absp[k - 1]
    return out


def dominates_sq(err_sq_num, bound_sq):
    """err^2 <= bound^2 comparison helper for exact rationals."""
    return err_sq_num <= bound_sq

"""Gauss-Legendre quadrature and regularized singular integration.

Boundary integrals are evaluated segment by segment with a fixed
Gauss-Legendre rule. On the segment that contains the source point the
kernels are singular and two regularizations are used:

* weakly singular (logarithmic) integrals by subtraction and addition,
  ``int ln|t| f(t) dt = int ln|t| [f(t) - f(0)] dt + 2 f(0) (a ln a - a)``;
* Cauchy principal values by the odd-even split,
  ``PV int f(xi)/xi dxi = int [f(xi) - f(-xi)]/xi dxi`` over positive nodes.

Both require an even rule so that xi = 0 is not a node and the nodes pair
up symmetrically; the same node set then serves regular and singular
integrals alike.
"""

import numpy as np

_RULE_CACHE = {}


class QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1].

    Attributes
    ----------
    n : int
        Order (number of nodes).
    nodes : ndarray, shape (n,)
        Abscissas, symmetric about 0.
    weights : ndarray, shape (n,)
        Positive weights summing to 2.
    """

    def __init__(self, n, nodes, weights):
        self.n = n
        self.nodes = nodes
        self.weights = weights

    @property
    def is_even(self):
        return self.n % 2 == 0


def gauss_legendre(n):
    """Return the n-point Gauss-Legendre rule, exact for degree <= 2n-1."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"quadrature order must be an integer, got {n!r}")
    if not 1 <= n <= 64:
        raise ValueError(f"quadrature order must be in [1, 64], got {n}")
    n = int(n)
    if n not in _RULE_CACHE:
        nodes, weights = np.polynomial.legendre.leggauss(n)
        _RULE_CACHE[n] = QuadratureRule(n, nodes, weights)
    return _RULE_CACHE[n]


def _require_even(rule, what):
    if not rule.is_even:
        raise ValueError(
            f"{what} requires an even quadrature order so that xi = 0 is not "
            f"a node and the nodes pair up; got n = {rule.n}"
        )


def integrate_regular(seg, f, rule=None):
    """Integrate f over a segment with the plain Gauss rule.

    f is called as f(x, n) with the point and the unit outward normal and
    must return a finite float (or array for vector integrands).
    """
    rule = rule or gauss_legendre(10)
    total = 0.0
    for xi, w in zip(rule.nodes, rule.weights):
        x, jac, nvec = seg.point(xi)
        val = f(x, nvec)
        if not np.all(np.isfinite(val)):
            raise ValueError(
                f"non-finite integrand at node xi = {xi:.6f}, x = {x}"
            )
        total = total + np.asarray(val) * (jac * w)
    return total


def log_moment(a):
    """Closed form of int_{-a}^{a} ln|t| dt, the added-back term per unit f(0)."""
    return 2.0 * (a * np.log(a) - a)


def log_moment_defect(a, rule):
    """Exact minus Gauss value of int_{-a}^{a} ln|t| dt on the given rule.

    Adding ``defect * f(0)`` to the plain node sum of ln|t| f(t) reproduces
    the subtraction-addition value; assemblers use this scalar so singular
    and regular segments share one coefficient layout.
    """
    gauss = np.sum(rule.weights * a * np.log(np.abs(a * rule.nodes)))
    return log_moment(a) - gauss


def integrate_weak_log(seg, f, f0, rule=None):
    """Evaluate int_{-a}^{a} ln|t| f(t) dt with the source at t = 0.

    f maps the signed arc coordinate t to the regular factor; f0 is its
    value at the source point. Requires an even rule.
    """
    rule = rule or gauss_legendre(10)
    _require_even(rule, "integrate_weak_log")
    a = seg.half_arc
    t = a * rule.nodes
    vals = np.array([f(ti) for ti in t], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite regular factor in weakly singular integral")
    regular = np.sum(rule.weights * a * np.log(np.abs(t)) * (vals - f0))
    return regular + f0 * log_moment(a)


def integrate_cauchy(seg, f, rule=None):
    """Cauchy principal value of int_{-1}^{1} f(xi)/xi dxi.

    Sums [f(xi) - f(-xi)]/xi over the positive nodes with their weights;
    the odd part of the integrand cancels exactly. Requires an even rule.
    """
    rule = rule or gauss_legendre(10)
    _require_even(rule, "integrate_cauchy")
    pos = rule.nodes > 0
    total = 0.0
    for xi, w in zip(rule.nodes[pos], rule.weights[pos]):
        total += w * (f(xi) - f(-xi)) / xi
    return total

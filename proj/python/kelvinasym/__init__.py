"""Python front end for the kelvinasym core.

Rationals are Fractions, polynomials are dicts in the JSON layout used by the
command-line tool ({"n_vars": n, "terms": [{"coef": "p/q", "exp": [...]}]}).
"""

import json
from fractions import Fraction

import numpy as np

from . import _core
from ._core import (
    AdmissibilityError,
    ArityError,
    Branch,
    ConditioningError,
    DimensionError,
    DomainError,
    Error,
    IndexError,
    InsufficientDataError,
    IntegrationAborted,
    MismatchError,
    ParseError,
    SolveError,
    ValueError,
    ZeroPointError,
    integrate_exterior,
    kelvin_map,
    linear_part_factor,
    quadratic_fixed_point,
    radial_rhs,
    scaling_matrix,
)

__all__ = [
    "Branch",
    "Error",
    "fit_expansion",
    "hessian_identity_check",
    "integrate_exterior",
    "kelvin_map",
    "leading_correction_Q2",
    "linear_part_factor",
    "poly",
    "quadratic_fixed_point",
    "radial_rhs",
    "radpoly_laplacian",
    "scaling_matrix",
    "sigma",
    "sigma_bar",
    "sigma_hat",
    "solve_radical_poisson",
    "symbolic_residual_n3",
    "expand_n3",
    "transformed_residual",
    "verify_identity",
]


def _q(x):
    return str(Fraction(x))


def _spectrum(values):
    return [_q(v) for v in values]


def poly(n_vars, terms):
    """Polynomial dict from {exponent tuple: coefficient}."""
    return {
        "n_vars": n_vars,
        "terms": [{"coef": _q(c), "exp": list(e)} for e, c in terms.items() if Fraction(c) != 0],
    }


def _dump(p):
    return json.dumps(p)


def sigma(k, spectrum):
    return Fraction(_core.sigma(k, _spectrum(spectrum)))


def sigma_hat(k, i, spectrum):
    return Fraction(_core.sigma_hat(k, i, _spectrum(spectrum)))


def sigma_bar(k, spectrum, a, b):
    return Fraction(_core.sigma_bar(k, _spectrum(spectrum), _q(a), _q(b)))


def verify_identity(lemma, spectrum, a=None, b=None, aux=None):
    report = json.loads(
        _core.verify_identity(
            lemma,
            _spectrum(spectrum),
            None if a is None else _q(a),
            None if b is None else _q(b),
            aux,
        )
    )
    report["lhs"] = Fraction(report["lhs"])
    report["rhs"] = Fraction(report["rhs"])
    return report


def radpoly_laplacian(e, n):
    return json.loads(_core.radpoly_laplacian(_dump(e), n))


def solve_radical_poisson(h, degree, n):
    return json.loads(_core.solve_radical_poisson(_dump(h), degree, n))


def leading_correction_Q2(v0, spectrum):
    return json.loads(_core.leading_correction_Q2(_q(v0), _spectrum(spectrum)))


def symbolic_residual_n3(p, q, spectrum):
    return json.loads(_core.symbolic_residual_n3(_dump(p), _dump(q), _spectrum(spectrum)))


def expand_n3(spectrum, p, order):
    return json.loads(_core.expand_n3(_spectrum(spectrum), _dump(p), order))


def hessian_identity_check(branch, lam, v, points, step=1e-4):
    return _core.hessian_identity_check(branch, list(lam), _dump(v), np.asarray(points, dtype=float), step)


def transformed_residual(branch, lam, v, y):
    return _core.transformed_residual(branch, list(lam), _dump(v), np.asarray(y, dtype=float))


def fit_expansion(x, u, branch, annuli=None, auto_annuli=6, remainder_basis=True):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    u = np.asarray(u, dtype=float)
    return json.loads(_core.fit_expansion(x, u, branch, annuli, auto_annuli, remainder_basis))

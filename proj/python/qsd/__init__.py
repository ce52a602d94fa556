"""Quasi-stationary distribution of dR = dt + R dB absorbed at a level A.

Errors raised by the library surface as QsdError with a ``code`` attribute
such as ``"eigen.DomainError"``.
"""

from ._core import (
    EigenSolution,
    QsdError,
    QsdParams,
    critical_A,
    lambda_bounds,
    laplace,
    moments,
    params_for,
    principal_lambda,
    qsd_cdf,
    qsd_pdf,
    simulate,
    specfun,
    stationary_cdf,
    stationary_laplace,
    stationary_pdf,
    variance,
)

__all__ = [
    "EigenSolution",
    "QsdError",
    "QsdParams",
    "critical_A",
    "lambda_bounds",
    "laplace",
    "moments",
    "params_for",
    "principal_lambda",
    "qsd_cdf",
    "qsd_pdf",
    "simulate",
    "specfun",
    "stationary_cdf",
    "stationary_laplace",
    "stationary_pdf",
    "variance",
]

"""Shared oracles and fixtures for the test suite."""

import numpy as np
import pytest


def normal_equations_solve(A, b, lam):
    """Independent Tikhonov oracle: dense elimination on (A^T A + lam^2 I) w = A^T b."""
    A = np.asarray(A, dtype=float)
    n = A.shape[1]
    return np.linalg.solve(A.T @ A + lam * lam * np.eye(n), A.T @ b)


@pytest.fixture(scope="session")
def unit_sphere_1000():
    from surfquad.geometry import gen_fibonacci_sphere

    return gen_fibonacci_sphere(1000)


@pytest.fixture(scope="session")
def exact_sphere_weights():
    """WeightSolution carrying the exact unit-sphere elements 4*pi/N."""
    from surfquad.geometry import gen_fibonacci_sphere
    from surfquad.solver import SolveDiagnostics, WeightSolution

    def make(count):
        sample = gen_fibonacci_sphere(count)
        mu = sample.points * (4.0 * np.pi / count)
        return sample, WeightSolution(
            mu=mu, tau=np.linalg.norm(mu, axis=1), residual_norm=0.0,
            diagnostics=SolveDiagnostics(0, count, 0.0, 0))

    return make

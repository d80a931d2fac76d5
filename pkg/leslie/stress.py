"""
Kinematic tensors and stress constructions.

Tensors are 3 x 3 fields of shape (3, 3, N, N). The velocity gradient is
(grad v)_ij = d_i v^j, kappa = (grad v)^T, D = (kappa^T + kappa) / 2 and
Omega = (kappa^T - kappa) / 2, so that grad v = D + Omega and
sigma : grad v = sigma_ij d_i v^j.
"""

import attr
import numpy as np
from leslie import fields
from leslie.oseen_frank import ElasticState, molecular_field, w_p


@attr.s(frozen=True)
class Kinematics:
    """
    kappa, D, Omega and the co-rotational director rate N.
    """

    kappa = attr.ib()
    D = attr.ib()  # pylint: disable=invalid-name
    Omega = attr.ib()  # pylint: disable=invalid-name
    N = attr.ib()  # pylint: disable=invalid-name


def velocity_gradient(v, grid):
    """
    (grad v)_ij = d_i v^j embedded in a 3 x 3 field with zero third row/column.
    """
    grad = np.zeros((3, 3) + grid.shape)
    grad[:2, :2] = fields.gradient(v, grid)
    return grad


def strain_and_vorticity(v, grid):
    """
    (D, Omega) of a planar velocity.
    """
    grad = velocity_gradient(v, grid)
    transposed = np.swapaxes(grad, 0, 1)
    return (0.5 * (grad + transposed), 0.5 * (grad - transposed))


def matvec(tensor, vector):
    """
    (A . n)_i = A_ij n^j pointwise.
    """
    return np.einsum("ij...,j...->i...", tensor, vector)


def outer(first, second):
    """
    (a b)_ij = a^i b^j pointwise.
    """
    return np.einsum("i...,j...->ij...", first, second)


def dot(first, second):
    """
    Pointwise a . b over the leading axis.
    """
    return np.sum(first * second, axis=0)


def contract(first, second):
    """
    Pointwise A : B = A_ij B_ij.
    """
    return np.sum(first * second, axis=(0, 1))


def advect(v, f, grid):
    """
    v . grad f for a planar v and any number of components of f.
    """
    grad = fields.gradient(f, grid)
    return v[0] * grad[0] + v[1] * grad[1]


def kinematics(v, n, n_t, grid):
    """
    Kinematic tensors of (v, n) and N = n_t + v . grad n + Omega . n.
    """
    (strain, vorticity) = strain_and_vorticity(v, grid)
    kappa = np.swapaxes(velocity_gradient(v, grid), 0, 1)
    rate = n_t + advect(v, n, grid) + matvec(vorticity, n)
    return Kinematics(kappa=kappa, D=strain, Omega=vorticity, N=rate)


def leslie_stress(coeffs, kin, n):
    """
    a1 (nn:D) nn + a2 nN + a3 Nn + a4 D + a5 nn.D + a6 D.nn
    """
    alphas = coeffs.leslie
    d_n = matvec(kin.D, n)
    return (
        alphas.alpha1 * dot(n, d_n) * outer(n, n)
        + alphas.alpha2 * outer(n, kin.N)
        + alphas.alpha3 * outer(kin.N, n)
        + alphas.alpha4 * kin.D
        + alphas.alpha5 * outer(n, d_n)
        + alphas.alpha6 * outer(d_n, n)
    )


def ericksen_stress(state, k):
    """
    sigma^E_ab = -W_{p_a^l} d_b n^l for a, b in {1, 2}; zero elsewhere.

    Written for a divergence on the first index, this is -dW/d(grad n) . (grad n)^T.
    """
    sigma = np.zeros((3, 3) + state.grid.shape)
    sigma[:2, :2] = -np.einsum("al...,bl...->ab...", w_p(state, k)[:2], state.grad_n)
    return sigma


def director_stretch(n, h):
    """
    n x (h x n) = |n|^2 h - (n . h) n
    """
    return dot(n, n) * h - dot(n, h) * n


def regularized_stress_parts(coeffs, n, strain, h):
    """
    (sigma1, sigma2) of the unit-length-free reformulation.
    """
    d_n = matvec(strain, n)
    n_squared = dot(n, n)
    sigma1 = (
        coeffs.beta1 * dot(n, d_n) * outer(n, n)
        + coeffs.beta2 * n_squared**2 * strain
        + 0.5 * coeffs.beta3 * n_squared * (outer(n, d_n) + outer(d_n, n))
    )
    stretch = director_stretch(n, h)
    sigma2 = 0.5 * (-1 - coeffs.mu2) * outer(n, stretch) + 0.5 * (
        1 - coeffs.mu2
    ) * outer(stretch, n)
    return (sigma1, sigma2)


def regularized_stress(coeffs, n, strain, h):
    """
    sigma1 + sigma2, which needs no unit-length assumption on n.
    """
    (sigma1, sigma2) = regularized_stress_parts(coeffs, n, strain, h)
    return sigma1 + sigma2


def ericksen_power_density(state, k, v):
    """
    W_{p_j^k} d_i n^k d_j v^i, the stress power of sigma^E with a sign flip.
    """
    grad_v = fields.gradient(v, state.grid)
    return np.einsum(
        "jk...,ik...,ji...->...", w_p(state, k)[:2], state.grad_n, grad_v
    )


def stress_power_residual(coeffs, k, v, n, n_t, grid):
    """
    |LHS - RHS| of the Leslie stress-power identity

        -int sigma^L : grad v = -int [b1 (nn:D)^2 + b3 |D.n|^2 + a4 D:D]
                                - int h . Omega . n - (g2/g1) int n x (h x n) . D.n

    which holds when n_t comes from the director equation.
    """
    elastic = ElasticState(grid, n)
    h = molecular_field(elastic, k)
    kin = kinematics(v, n, n_t, grid)
    sigma = leslie_stress(coeffs, kin, n)
    grad_v = velocity_gradient(v, grid)
    lhs = -fields.integrate(contract(sigma, grad_v), grid)
    d_n = matvec(kin.D, n)
    form = (
        coeffs.beta1 * dot(n, d_n) ** 2
        + coeffs.beta3 * dot(d_n, d_n)
        + coeffs.leslie.alpha4 * contract(kin.D, kin.D)
    )
    rhs = fields.integrate(
        -form
        - dot(h, matvec(kin.Omega, n))
        - (coeffs.gamma2 / coeffs.gamma1) * dot(director_stretch(n, h), d_n),
        grid,
    )
    return float(abs(lhs - rhs))

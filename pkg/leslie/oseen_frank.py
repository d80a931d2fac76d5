"""
Oseen-Frank elasticity: energy density, its partial derivatives and the
molecular field, the latter computed two independent ways.

Index convention: p[i, l] = d_i n^l with i in {1, 2} (d3 = 0), and
derivative tensors W_p are stored as [alpha, l] with alpha in {1, 2, 3}.
"""

import attr
import numpy as np
from leslie import fields

LEVI_CIVITA = np.zeros((3, 3, 3))
for (_i, _j, _k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0


def _clear_cache(instance, _attribute, value):
    instance.clear_cache()
    return value


@attr.s(eq=False)
class ElasticState:
    """
    A director field together with lazily computed derivatives.

    Assigning a new `n` drops every cached derivative; the director samples
    themselves are read-only, so that is the only way to change them.

    >>> state = ElasticState(grid, n)
    >>> state.grad_n[0, 2]  # d1 n^3
    """

    grid = attr.ib()
    n = attr.ib(
        converter=fields.readonly,
        on_setattr=attr.setters.pipe(attr.setters.convert, _clear_cache),
    )

    def __attrs_post_init__(self):
        # pylint: disable=attribute-defined-outside-init
        self._cache = {}

    def clear_cache(self):
        """
        Forget every derived quantity.
        """
        self._cache.clear()

    def _cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    @property
    def grad_n(self):
        """
        p[i, l] = d_i n^l, shape (2, 3, N, N).
        """
        return self._cached("grad_n", lambda: fields.gradient(self.n, self.grid))

    @property
    def div_n(self):
        """
        d1 n^1 + d2 n^2.
        """
        return self._cached("div_n", lambda: self.grad_n[0, 0] + self.grad_n[1, 1])

    @property
    def curl_n(self):
        """
        curl n with d3 = 0.
        """
        return self._cached("curl_n", lambda: curl_from_gradient(self.grad_n))

    @property
    def twist(self):
        """
        n . curl n
        """
        return self._cached("twist", lambda: np.sum(self.n * self.curl_n, axis=0))

    def unit_gradient_defect(self):
        """
        max |sum_l n^l d_i n^l|, which vanishes for unit directors.
        """
        return fields.sup_norm(np.einsum("l...,il...->i...", self.n, self.grad_n))


def curl_from_gradient(grad_n):
    """
    (d2 n^3, -d1 n^3, d1 n^2 - d2 n^1) from p[i, l] = d_i n^l.
    """
    return np.stack([grad_n[1, 2], -grad_n[0, 2], grad_n[0, 1] - grad_n[1, 0]])


def normalize(n):
    """
    Pointwise n / |n|.
    """
    return n / np.sqrt(np.sum(n**2, axis=0))


def tangential(n, phi):
    """
    phi - (phi . n) n
    """
    return phi - np.sum(phi * n, axis=0) * n


def frank_density(n, grad_n, k):
    """
    Oseen-Frank density as a polynomial in (n, p), valid for any n.

    a|p|^2 + (k1-a)(div n)^2 + (k2-a)|curl n|^2 + (k3-k2)(n . curl n)^2,
    which equals `density` when |n| = 1.
    """
    curl = curl_from_gradient(grad_n)
    divergence = grad_n[0, 0] + grad_n[1, 1]
    return (
        k.a * np.sum(grad_n**2, axis=(0, 1))
        + (k.k1 - k.a) * divergence**2
        + (k.k2 - k.a) * np.sum(curl**2, axis=0)
        + (k.k3 - k.k2) * np.sum(n * curl, axis=0) ** 2
    )


def density(state, k):
    """
    W = a|grad n|^2 + (k1-a)(div n)^2 + (k2-a)|n x curl n|^2 + (k3-a)(n . curl n)^2.
    """
    n_cross_curl = np.cross(state.n, state.curl_n, axis=0)
    return (
        k.a * np.sum(state.grad_n**2, axis=(0, 1))
        + (k.k1 - k.a) * state.div_n**2
        + (k.k2 - k.a) * np.sum(n_cross_curl**2, axis=0)
        + (k.k3 - k.a) * state.twist**2
    )


def elastic_energy(state, k):
    """
    Integral of W over the torus.
    """
    return float(fields.integrate(density(state, k), state.grid))


def frank_w_p(n, grad_n, k):
    """
    dW/dp[alpha, l] of the polynomial density, shape (3, 3, N, N).
    """
    curl = curl_from_gradient(grad_n)
    divergence = grad_n[0, 0] + grad_n[1, 1]
    twist = np.sum(n * curl, axis=0)
    gradient = np.zeros((3,) + grad_n.shape[1:])
    gradient[:2] = grad_n
    splay = divergence * np.eye(3)[:, :, None, None]
    return (
        2 * k.a * gradient
        + 2 * (k.k1 - k.a) * splay
        + 2 * (k.k2 - k.a) * np.einsum("ial,i...->al...", LEVI_CIVITA, curl)
        + 2 * (k.k3 - k.k2) * twist * np.einsum("ial,i...->al...", LEVI_CIVITA, n)
    )


def frank_w_n(n, grad_n, k):
    """
    dW/dn at fixed p: 2(k3-k2)(n . curl n) curl n.
    """
    curl = curl_from_gradient(grad_n)
    return 2 * (k.k3 - k.k2) * np.sum(n * curl, axis=0) * curl


def w_p(state, k):
    """
    W_{p_alpha^l} as a 3 x 3 tensor field indexed [alpha, l].

    The alpha = 3 row multiplies d3 = 0 and never contributes.
    """
    return frank_w_p(state.n, state.grad_n, k)


def w_n(state, k):
    """
    W_{n^l} = 2(k3-k2)(curl n . n) curl n.
    """
    return frank_w_n(state.n, state.grad_n, k)


def _grad_div(state):
    result = np.zeros_like(state.n)
    result[:2] = fields.gradient(state.div_n, state.grid)
    return result


def molecular_field(state, k):
    """
    h = 2a Lap n + 2(k1-a) grad div n - 2(k2-a) curl curl n
        - 2(k3-k2) curl((curl n . n) n) - 2(k3-k2)(curl n . n) curl n
    """
    grid = state.grid
    twist = state.twist
    return (
        2 * k.a * fields.laplacian(state.n, grid)
        + 2 * (k.k1 - k.a) * _grad_div(state)
        - 2 * (k.k2 - k.a) * fields.curl3(state.curl_n, grid)
        - 2 * (k.k3 - k.k2) * fields.curl3(twist * state.n, grid)
        - 2 * (k.k3 - k.k2) * twist * state.curl_n
    )


def molecular_field_oracle(state, k):
    """
    h^l = d_alpha W_{p_alpha^l} - W_{n^l}, the divergence form.
    """
    return fields.tensor_divergence(w_p(state, k), state.grid) - w_n(state, k)


def molecular_field_regularized(state, k):
    """
    Molecular field of the regularized system, polynomial in n.

    Replaces curl curl n by curl(n x (curl n x n)) and uses a (k3 - a) weight
    on the twist term, so no unit-length assumption is needed. For |n| = 1 it
    coincides with `molecular_field`.
    """
    grid = state.grid
    n = state.n
    curl = state.curl_n
    twist = state.twist
    return (
        2 * k.a * fields.laplacian(n, grid)
        + 2 * (k.k1 - k.a) * _grad_div(state)
        - 2
        * (k.k2 - k.a)
        * fields.curl3(np.cross(n, np.cross(curl, n, axis=0), axis=0), grid)
        - 2 * (k.k3 - k.a) * fields.curl3(twist * n, grid)
        - 2 * (k.k3 - k.k2) * twist * curl
    )


def wp_dot_n_residual(state, k):
    """
    (d_alpha W_p) . n minus its closed form

        -2 k2 |grad n|^2 - 2(k3-k2)(n . curl n)^2 - 2(k1-k2)(div n)^2
        + 2(k1-k2) d_l(n^l div n)

    pointwise; small for unit directors.
    """
    grid = state.grid
    lhs = np.sum(fields.tensor_divergence(w_p(state, k), grid) * state.n, axis=0)
    divergence = state.div_n
    rhs = (
        -2 * k.k2 * np.sum(state.grad_n**2, axis=(0, 1))
        - 2 * (k.k3 - k.k2) * state.twist**2
        - 2 * (k.k1 - k.k2) * divergence**2
        + 2 * (k.k1 - k.k2) * fields.divergence2(state.n[:2] * divergence, grid)
    )
    return lhs - rhs


def energy_directional_derivative(state, k, phi, step=1e-5):
    """
    Central difference of the elastic energy along normalize(n + tau phi).
    """
    forward = ElasticState(state.grid, normalize(state.n + step * phi))
    backward = ElasticState(state.grid, normalize(state.n - step * phi))
    return (elastic_energy(forward, k) - elastic_energy(backward, k)) / (2 * step)

import math

import numpy as np

from neurise.model import Alphabet, BasisTerm, EnergyModel
from neurise.neural import Mlp, MlpSpec


def linear_net(matrix, bias=None):
    """Depth-1 swish net computing ``matrix @ x + bias`` exactly, via swish(z) - swish(-z) = z."""
    m = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    out_dim, in_dim = m.shape
    spec = MlpSpec(in_dim, 1, 2 * in_dim, out_dim)
    net = Mlp(spec)
    (w1, b1), (w2, b2) = net.layers()
    eye = np.eye(in_dim)
    w1[:in_dim] = eye
    w1[in_dim:] = -eye
    w2[:, :in_dim] = m
    w2[:, in_dim:] = -m
    if bias is not None:
        b2[:] = bias
    return net


def ising_energy_net(model: EnergyModel):
    """Depth-1 net equal to a pairwise-plus-field binary energy on every spin configuration.

    Fields use the linear identity.  A coupling uses swish(s) + swish(-s) with
    s = sigma_i + sigma_j, which equals 2 tanh(1) when the spins agree and 0 otherwise.
    """
    p = model.p
    fields = [t for t in model.terms if t.order == 1]
    pairs = [t for t in model.terms if t.order == 2]
    assert len(fields) + len(pairs) == len(model.terms)
    spec = MlpSpec(p, 1, 2 * p + 2 * max(len(pairs), 1), 1)
    net = Mlp(spec)
    (w1, _), (w2, b2) = net.layers()
    h = np.zeros(p)
    for t in fields:
        h[t.sites[0]] = t.strength
    w1[:p] = np.eye(p)
    w1[p:2 * p] = -np.eye(p)
    w2[0, :p] = h
    w2[0, p:2 * p] = -h
    c = 1.0 / math.tanh(1.0)
    for k, t in enumerate(pairs):
        i, j = t.sites
        r = 2 * p + 2 * k
        w1[r, [i, j]] = 1.0
        w1[r + 1, [i, j]] = -1.0
        w2[0, r] = w2[0, r + 1] = t.strength * c
        b2[0] -= t.strength
    return net


def binary_field_matrix(model: EnergyModel, u: int):
    """Row vector of couplings J_uv over the inputs of center u (pairwise binary models)."""
    row = np.zeros(model.p)
    for t in model.terms:
        if t.order == 2 and u in t.sites:
            row[t.sites[0] if t.sites[1] == u else t.sites[1]] = t.strength
    return np.delete(row, u)[None, :]


def indicator_pair_model(p, q, seed):
    rng = np.random.default_rng(seed)
    terms = []
    for i in range(p):
        for j in range(i + 1, p):
            if rng.random() < 0.7:
                labels = tuple(int(x) for x in rng.integers(0, q, 2))
                terms.append(BasisTerm((i, j), "indicator", labels, float(rng.uniform(-1.5, 1.5))))
    return EnergyModel(p, Alphabet(q), tuple(terms))


def indicator_logit_matrix(model: EnergyModel, u: int):
    """Matrix M with general-net outputs ``M @ x`` equal to the centered true logits of site u."""
    q, p = model.q, model.p
    m = np.zeros((q, (p - 1) * q))
    phi = np.eye(q) - 1.0 / q
    for t in model.terms:
        if u not in t.sites:
            continue
        a_pos = t.sites.index(u)
        v = t.sites[1 - a_pos]
        a, b = t.labels[a_pos], t.labels[1 - a_pos]
        k = v if v < u else v - 1
        # strength * Phi_a(s) * Phi_b(sigma_v); Phi_b(sigma_v) is input k*q + b
        m[:, k * q + b] += t.strength * phi[:, a]
    return m

"""Evaluation: conditional errors, total variation distances, boolean Fourier spectra.

Fourier truth tables index configurations by bitmask with bit ``i`` set
when site ``i`` has spin -1 (symbol 1); subsets use the same bit layout.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, InvalidInputError
from .model import EnergyModel, SampleSet
from .sampling import DEFAULT_MAX_BITS, ExactDistribution, all_configs, check_capacity, encode, true_conditional

SPECTRUM_MAX_P = 16


def _provider(obj):
    if isinstance(obj, EnergyModel):
        return lambda u, configs: true_conditional(obj, u, configs)
    if callable(obj):
        return obj
    by_u = {m.u: m for m in obj}
    return lambda u, configs: by_u[u].conditional(configs)


def avg_conditional_error(learned, truth, p: int | None = None, q: int | None = None,
                          max_bits: float = DEFAULT_MAX_BITS, per_site: bool = False):
    """Mean over sites and all contexts (uniform weights) of the l1 distance between conditionals.

    ``learned`` and ``truth`` are each an ``EnergyModel``, a list of
    conditional models, or a provider ``(u, configs) -> (m, q)``.
    """
    if isinstance(truth, EnergyModel):
        p, q = truth.p, truth.q
    elif not callable(truth):
        p, q = truth[0].p, truth[0].q
    if not callable(learned) and not isinstance(learned, EnergyModel):
        if learned[0].p != p or learned[0].q != q:
            raise InvalidInputError("learned and true models differ in size or alphabet")
    if p is None or q is None:
        raise InvalidInputError("give p and q when both sides are providers")
    check_capacity(p, q, max_bits)
    f_learned, f_true = _provider(learned), _provider(truth)
    contexts = all_configs(p - 1, q, max_bits)
    errs = []
    for u in range(p):
        configs = np.insert(contexts, u, 0, axis=1)
        a = np.asarray(f_learned(u, configs))
        b = np.asarray(f_true(u, configs))
        errs.append(float(np.abs(a - b).sum(axis=1).mean()))
    return errs if per_site else float(np.mean(errs))


def tvd_exact(d1: ExactDistribution, d2: ExactDistribution) -> float:
    if (d1.p, d1.q) != (d2.p, d2.q):
        raise InvalidInputError("distributions live on different spaces")
    return 0.5 * float(np.abs(d1.probabilities - d2.probabilities).sum())


def tvd_empirical(s1: SampleSet, s2: SampleSet) -> float:
    if (s1.p, s1.q) != (s2.p, s2.q):
        raise InvalidInputError("sample sets live on different spaces")
    if s1.p * math.log2(s1.q) < 62:
        k1, k2 = encode(s1.data, s1.q), encode(s2.data, s2.q)
    else:
        k1 = np.array([r.tobytes() for r in s1.data])
        k2 = np.array([r.tobytes() for r in s2.data])
    keys, inv = np.unique(np.concatenate([k1, k2]), return_inverse=True)
    c1 = np.bincount(inv[:k1.size], minlength=keys.size) / k1.size
    c2 = np.bincount(inv[k1.size:], minlength=keys.size) / k2.size
    return 0.5 * float(np.abs(c1 - c2).sum())


# ---------------------------------------------------------------------------
# boolean Fourier analysis


def spin_table(p: int):
    """Spins of every configuration in bitmask order, shape (2**p, p)."""
    bits = (np.arange(2**p)[:, None] >> np.arange(p)) & 1
    return 1.0 - 2.0 * bits


def fwht(values):
    """Unnormalized Walsh-Hadamard transform along the last axis (length 2**k)."""
    a = np.array(values, dtype=np.float64)
    n = a.shape[-1]
    if n & (n - 1):
        raise InvalidInputError("transform length must be a power of two")
    h = 1
    while h < n:
        a = a.reshape(a.shape[:-1] + (n // (2 * h), 2, h))
        x, y = a[..., 0, :].copy(), a[..., 1, :]
        a[..., 0, :] += y
        a[..., 1, :] = x - y
        a = a.reshape(a.shape[:-3] + (n,))
        h *= 2
    return a


def popcounts(p: int):
    return np.bitwise_count(np.arange(2**p, dtype=np.uint32))


def mask_sites(mask: int):
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def sites_mask(sites) -> int:
    return sum(1 << int(i) for i in sites)


@dataclass
class CoefficientSpectrum:
    p: int
    coefficients: np.ndarray = field(repr=False)

    def coefficient(self, sites) -> float:
        return float(self.coefficients[sites_mask(sites)])

    def nonzero(self, atol: float = 1e-12):
        return {mask_sites(int(m)): float(self.coefficients[m])
                for m in np.flatnonzero(np.abs(self.coefficients) > atol)}

    def order_profile(self, max_order: int | None = None):
        return leading_coefficients(self, self.p if max_order is None else max_order)

    def to_function(self):
        """Truth table in bitmask order reconstructed from the coefficients."""
        return fwht(self.coefficients)


def fourier_expand(f, p: int, max_p: int = SPECTRUM_MAX_P) -> CoefficientSpectrum:
    """Coefficients ``c_S = 2^-p sum_sigma f(sigma) prod_{i in S} sigma_i``.

    ``f`` maps an (m, p) array of spins to m values.
    """
    if p > max_p:
        raise CapacityError(f"complete spectra are capped at p = {max_p}")
    values = np.asarray(f(spin_table(p)), dtype=np.float64).reshape(-1)
    if values.size != 2**p:
        raise InvalidInputError("function must return one value per configuration")
    return CoefficientSpectrum(p, fwht(values) / 2**p)


def fourier_coefficient(f, p: int, sites, max_p: int = 20) -> float:
    """A single coefficient, for sizes where the full spectrum is too large."""
    if p > max_p:
        raise CapacityError(f"on-demand coefficients are capped at p = {max_p}")
    spins = spin_table(p)
    chi = np.prod(spins[:, list(sites)], axis=1) if len(sites) else np.ones(2**p)
    return float(np.dot(np.asarray(f(spins), dtype=np.float64).reshape(-1), chi) / 2**p)


def leading_coefficients(spectrum: CoefficientSpectrum, max_order: int):
    """For each order ``1..max_order``: ``(order, max |c_S|, S)``; ties go to the lexicographically first S."""
    pc = popcounts(spectrum.p)
    absc = np.abs(spectrum.coefficients)
    out = []
    for order in range(1, max_order + 1):
        masks = np.flatnonzero(pc == order)
        if masks.size == 0:
            out.append((order, 0.0, ()))
            continue
        vals = absc[masks]
        best = vals.max()
        ties = masks[vals == best]
        subset = min(mask_sites(int(m)) for m in ties)
        out.append((order, float(best), subset))
    return out


def energy_spectrum(energy, p: int) -> CoefficientSpectrum:
    """Spectrum of an energy given on symbol configurations (EnergyModel, EnergyNet, callable)."""
    fn = energy.energy if hasattr(energy, "energy") else energy
    return fourier_expand(lambda spins: fn(((1 - spins) / 2).astype(np.int8)), p)


def partial_energy_spectrum(model) -> CoefficientSpectrum:
    """Spectrum of a binary conditional's partial energy embedded in all p variables."""
    if model.q != 2:
        raise InvalidInputError("monomial expansion needs a binary alphabet")
    return fourier_expand(lambda spins: model.partial_energy(((1 - spins) / 2).astype(np.int8)), model.p)


def mean_leading_coefficients(models, max_order: int):
    """Per order, the leading |coefficient| averaged over the partial-energy spectra of ``models``."""
    rows = [[v for _, v, _ in leading_coefficients(partial_energy_spectrum(m), max_order)] for m in models]
    return np.mean(rows, axis=0)


# ---------------------------------------------------------------------------
# CSV output


def write_metrics_csv(rows, path, append: bool = False):
    """Rows of ``(metric, n, value, seed)``."""
    path = Path(path)
    new = not (append and path.exists())
    with path.open("a" if append else "w", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(["metric", "n", "value", "seed"])
        for r in rows:
            w.writerow([r[0], r[1], repr(float(r[2])), r[3]])


def read_metrics_csv(path):
    with Path(path).open(newline="") as fh:
        return [(r["metric"], r["n"], float(r["value"]), r["seed"]) for r in csv.DictReader(fh)]


def write_spectrum_csv(spectrum: CoefficientSpectrum, path, atol: float = 0.0):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mask", "coefficient"])
        for m, c in enumerate(spectrum.coefficients.tolist()):
            if abs(c) > atol or atol == 0.0:
                w.writerow([m, repr(c)])


def read_spectrum_csv(path, p: int) -> CoefficientSpectrum:
    coef = np.zeros(2**p)
    with Path(path).open(newline="") as fh:
        for r in csv.DictReader(fh):
            coef[int(r["mask"])] = float(r["coefficient"])
    return CoefficientSpectrum(p, coef)

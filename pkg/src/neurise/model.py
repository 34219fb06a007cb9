"""Alphabets, basis functions, explicit energy models and synthetic generators.

Symbols are stored as integers ``0..q-1``.  For binary alphabets the spin
convention is fixed globally: symbol 0 is spin +1 and symbol 1 is spin -1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, ParseError

MONOMIAL = "monomial"
INDICATOR = "indicator"
_KINDS = (MONOMIAL, INDICATOR)


@dataclass(frozen=True)
class Alphabet:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise InvalidInputError(f"alphabet size must be an integer >= 2, got {self.q!r}")
        if self.q > 127:
            raise InvalidInputError("alphabets larger than 127 symbols are not supported")

    def spins(self, symbols):
        """Map binary symbols to spins (0 -> +1, 1 -> -1)."""
        if self.q != 2:
            raise InvalidInputError("spin map is only defined for q = 2")
        return 1.0 - 2.0 * np.asarray(symbols, dtype=np.float64)

    def centered_indicator(self, symbols):
        """Rows ``Phi(sigma) = onehot(sigma) - 1/q``; shape ``symbols.shape + (q,)``."""
        symbols = np.asarray(symbols)
        out = np.full(symbols.shape + (self.q,), -1.0 / self.q)
        np.put_along_axis(out, symbols[..., None].astype(np.intp), 1.0 - 1.0 / self.q, axis=-1)
        return out


def as_alphabet(alphabet) -> Alphabet:
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet(int(alphabet))


@dataclass(frozen=True)
class BasisTerm:
    sites: tuple
    kind: str = MONOMIAL
    labels: tuple | None = None
    strength: float = 0.0

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "strength", float(self.strength))
        if not sites:
            raise InvalidInputError("basis term needs at least one site")
        if any(b <= a for a, b in zip(sites, sites[1:])) or sites[0] < 0:
            raise InvalidInputError(f"sites must be non-negative and strictly increasing: {sites}")
        if self.kind not in _KINDS:
            raise InvalidInputError(f"unknown basis kind {self.kind!r}")
        if self.kind == INDICATOR:
            if self.labels is None or len(self.labels) != len(sites):
                raise InvalidInputError("indicator terms need one label per site")
            object.__setattr__(self, "labels", tuple(int(s) for s in self.labels))
        elif self.labels is not None:
            raise InvalidInputError("monomial terms carry no labels")

    @property
    def key(self):
        """Identity used for ordering and duplicate detection (strength excluded)."""
        return (len(self.sites), self.sites, self.kind, self.labels or ())

    @property
    def order(self) -> int:
        return len(self.sites)

    def with_strength(self, strength) -> "BasisTerm":
        return BasisTerm(self.sites, self.kind, self.labels, strength)

    def values(self, configs, q: int):
        """Vectorized basis value for every row of ``configs`` (n, p)."""
        configs = np.asarray(configs)
        sub = configs[:, list(self.sites)]
        if self.kind == MONOMIAL:
            if q != 2:
                raise InvalidInputError("monomial basis requires q = 2")
            # product of spins = (-1)^(number of symbol-1 entries)
            return 1.0 - 2.0 * (sub.sum(axis=1) % 2)
        hits = sub == np.asarray(self.labels)
        return np.prod(hits - 1.0 / q, axis=1)


def check_configs(configs, p: int, q: int):
    """Validate and return a 2-D integer array of configurations."""
    arr = np.asarray(configs)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != p:
        raise InvalidInputError(f"expected configurations of length {p}, got shape {np.shape(configs)}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidInputError("configurations must hold integer symbols")
        arr = arr.astype(np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise InvalidInputError(f"symbol out of range 0..{q - 1}")
    return arr


def eval_basis(term: BasisTerm, config, q: int = 2) -> float:
    config = np.asarray(config)
    if config.ndim != 1:
        raise InvalidInputError("eval_basis takes a single configuration")
    if config.size <= term.sites[-1]:
        raise InvalidInputError("configuration shorter than the term's sites")
    config = check_configs(config, config.size, q)
    return float(term.values(config, q)[0])


@dataclass(frozen=True)
class EnergyModel:
    """Energy ``H(sigma) = sum_k strength_k g_k(sigma_k)`` over ``p`` variables."""

    p: int
    alphabet: Alphabet
    terms: tuple = ()

    def __post_init__(self):
        alphabet = as_alphabet(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        terms = tuple(sorted(self.terms, key=lambda t: t.key))
        object.__setattr__(self, "terms", terms)
        if self.p < 1:
            raise InvalidInputError("p must be >= 1")
        seen = set()
        for t in terms:
            if t.sites[-1] >= self.p:
                raise InvalidInputError(f"term sites {t.sites} exceed p = {self.p}")
            if t.kind == MONOMIAL and alphabet.q != 2:
                raise InvalidInputError("monomial terms require q = 2")
            if t.kind == INDICATOR and max(t.labels) >= alphabet.q:
                raise InvalidInputError(f"indicator labels {t.labels} out of range")
            if t.key in seen:
                raise InvalidInputError(f"duplicate term {t.sites} ({t.kind}, {t.labels})")
            seen.add(t.key)

    @property
    def q(self) -> int:
        return self.alphabet.q

    def energy(self, configs):
        """Energies of a batch of configurations, shape (n,)."""
        configs = check_configs(configs, self.p, self.q)
        out = np.zeros(configs.shape[0])
        for t in self.terms:
            if t.strength != 0.0:
                out += t.strength * t.values(configs, self.q)
        return out

    def __call__(self, configs):
        return self.energy(configs)

    def partial_terms(self, u: int):
        return [t for t in self.terms if u in t.sites]

    def neighbors(self, u: int) -> set:
        """Sites sharing at least one nonzero-strength term with ``u``."""
        out = set()
        for t in self.partial_terms(u):
            if t.strength != 0.0:
                out.update(t.sites)
        out.discard(u)
        return out

    def adjacency(self):
        adj = np.zeros((self.p, self.p), dtype=bool)
        for t in self.terms:
            if t.strength != 0.0:
                for a, b in itertools.combinations(t.sites, 2):
                    adj[a, b] = adj[b, a] = True
        return adj


def eval_energy(model: EnergyModel, config) -> float:
    return float(model.energy(np.asarray(config)[None, :])[0])


@dataclass(frozen=True)
class PartialBasis:
    """All basis terms containing the center variable ``u`` (strengths unused)."""

    u: int
    p: int
    q: int
    terms: tuple
    max_order: int | None = None

    def __post_init__(self):
        for t in self.terms:
            if self.u not in t.sites:
                raise InvalidInputError(f"term {t.sites} does not contain center {self.u}")

    def __len__(self):
        return len(self.terms)

    @property
    def kind(self):
        return self.terms[0].kind if self.terms else MONOMIAL

    def design(self, configs):
        """Matrix of basis values, shape (n, len(terms))."""
        configs = np.asarray(configs)
        out = np.empty((configs.shape[0], len(self.terms)))
        for j, t in enumerate(self.terms):
            out[:, j] = t.values(configs, self.q)
        return out

    def to_dict(self):
        return {
            "u": self.u,
            "p": self.p,
            "q": self.q,
            "max_order": self.max_order,
            "kind": self.kind,
            "terms": [{"sites": list(t.sites), "labels": None if t.labels is None else list(t.labels)}
                      for t in self.terms],
        }

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind", MONOMIAL)
        terms = tuple(BasisTerm(tuple(t["sites"]), kind, None if t.get("labels") is None else tuple(t["labels"]))
                      for t in d["terms"])
        return cls(int(d["u"]), int(d["p"]), int(d["q"]), terms, d.get("max_order"))


def build_partial_basis(p: int, alphabet, max_order: int, u: int, kind: str | None = None) -> PartialBasis:
    """Every basis term of order <= ``max_order`` that contains ``u``.

    Monomials are used for q = 2 and centered indicators otherwise, unless
    ``kind`` forces a choice.  Order is lexicographic in (order, sites, labels).
    """
    q = as_alphabet(alphabet).q
    kind = kind or (MONOMIAL if q == 2 else INDICATOR)
    if kind == MONOMIAL and q != 2:
        raise InvalidInputError("monomial basis requires q = 2")
    if not 1 <= max_order <= p:
        raise InvalidInputError(f"interaction order must satisfy 1 <= L <= p, got L={max_order}, p={p}")
    if not 0 <= u < p:
        raise InvalidInputError(f"center {u} out of range for p = {p}")
    others = [i for i in range(p) if i != u]
    terms = []
    for order in range(1, max_order + 1):
        subsets = sorted(tuple(sorted(c + (u,))) for c in itertools.combinations(others, order - 1))
        for sites in subsets:
            if kind == MONOMIAL:
                terms.append(BasisTerm(sites, MONOMIAL))
            else:
                for labels in itertools.product(range(q), repeat=order):
                    terms.append(BasisTerm(sites, INDICATOR, labels))
    return PartialBasis(u, p, q, tuple(terms), max_order)


def count_grise_params(p: int, q: int, max_order: int, kind: str = MONOMIAL) -> int:
    """Number of basis functions per variable, without building them."""
    if not 1 <= max_order <= p:
        raise InvalidInputError(f"interaction order must satisfy 1 <= L <= p, got L={max_order}, p={p}")
    if kind == MONOMIAL:
        return sum(math.comb(p - 1, k) for k in range(max_order))
    if kind == INDICATOR:
        return sum(math.comb(p - 1, k - 1) * q**k for k in range(1, max_order + 1))
    raise InvalidInputError(f"unknown basis kind {kind!r}")


# ---------------------------------------------------------------------------
# generators


def gen_one_d_model(p: int, max_order: int, theta: Sequence[float]) -> EnergyModel:
    """Chain model with one shared strength per interaction order.

    ``theta[l-1]`` multiplies every window product ``sigma_i ... sigma_{i+l-1}``.
    """
    theta = [float(t) for t in theta]
    if len(theta) != max_order:
        raise InvalidInputError(f"need {max_order} strengths, got {len(theta)}")
    if not 1 <= max_order <= p:
        raise InvalidInputError(f"interaction order must satisfy 1 <= L <= p, got L={max_order}, p={p}")
    terms = [BasisTerm(tuple(range(i, i + l)), MONOMIAL, None, theta[l - 1])
             for l in range(1, max_order + 1) for i in range(p - l + 1)]
    return EnergyModel(p, Alphabet(2), tuple(terms))


def random_one_d_theta(max_order: int, seed: int, interval=(-1.0, 1.0)):
    rng = np.random.default_rng(seed)
    return rng.uniform(interval[0], interval[1], size=max_order)


def gen_er_pairwise(p: int, edge_probability: float | None = None, interval=(-1.0, 1.0), seed: int = 0,
                    mean_degree: float | None = None, random_sign: bool = False) -> EnergyModel:
    """Erdos-Renyi pairwise binary model.

    Give either ``edge_probability`` or ``mean_degree`` (mapped to
    ``mean_degree / (p - 1)``).  Strengths are uniform on ``interval``;
    ``random_sign`` additionally flips each sign with probability 1/2.
    """
    if (edge_probability is None) == (mean_degree is None):
        raise InvalidInputError("give exactly one of edge_probability / mean_degree")
    if edge_probability is None:
        edge_probability = mean_degree / (p - 1) if p > 1 else 0.0
    lo, hi = float(interval[0]), float(interval[1])
    if not 0.0 <= edge_probability <= 1.0:
        raise InvalidInputError(f"edge probability {edge_probability} outside [0, 1]")
    if lo > hi:
        raise InvalidInputError(f"empty strength interval [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(p), 2))
    coins = rng.random(len(pairs))
    edges = [pr for pr, c in zip(pairs, coins) if c < edge_probability]
    strengths = rng.uniform(lo, hi, size=len(edges))
    if random_sign:
        strengths *= rng.choice([-1.0, 1.0], size=len(edges))
    terms = [BasisTerm(e, MONOMIAL, None, s) for e, s in zip(edges, strengths)]
    return EnergyModel(p, Alphabet(2), tuple(terms))


def gen_hypergraph_model(p: int = 15, interval=(0.3, 1.3), seed: int = 0,
                         high_order_sites=(0, 2, 4, 6, 8), high_order_strength: float = 0.5) -> EnergyModel:
    """Ring of pairwise couplings plus one high-order term.

    The default is the canonical 15-site instance: a five-body term of
    strength 1/2 on (0-based) sites 0, 2, 4, 6, 8, nearest-neighbour chain
    couplings and the closing pair (0, p-1), pair strengths uniform on
    ``interval``.
    """
    high_order_sites = tuple(sorted(int(s) for s in high_order_sites))
    if p < 3 or (high_order_sites and high_order_sites[-1] >= p):
        raise InvalidInputError(f"p = {p} too small for high-order sites {high_order_sites}")
    rng = np.random.default_rng(seed)
    pairs = sorted({(i, i + 1) for i in range(p - 1)} | {(0, p - 1)})
    strengths = rng.uniform(interval[0], interval[1], size=len(pairs))
    terms = [BasisTerm(pr, MONOMIAL, None, s) for pr, s in zip(pairs, strengths)]
    if high_order_sites:
        terms.append(BasisTerm(high_order_sites, MONOMIAL, None, high_order_strength))
    return EnergyModel(p, Alphabet(2), tuple(terms))


def gen_random_hypergraph(p: int, order: int, mean_degree: float, interval=(0.3, 1.3), seed: int = 0,
                          random_sign: bool = False) -> EnergyModel:
    """Random binary model whose terms are all of one order.

    The number of hyperedges is chosen so the expected neighbourhood size is
    close to ``mean_degree`` (overlaps ignored).
    """
    if order < 2 or order > p:
        raise InvalidInputError("hyperedge order must be in 2..p")
    rng = np.random.default_rng(seed)
    m = max(1, int(round(mean_degree * p / (order * (order - 1)))))
    chosen = set()
    while len(chosen) < m:
        chosen.add(tuple(sorted(rng.choice(p, size=order, replace=False).tolist())))
    edges = sorted(chosen)
    strengths = rng.uniform(interval[0], interval[1], size=len(edges))
    if random_sign:
        strengths *= rng.choice([-1.0, 1.0], size=len(edges))
    return EnergyModel(p, Alphabet(2), tuple(BasisTerm(e, MONOMIAL, None, s) for e, s in zip(edges, strengths)))


# ---------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class SampleSet:
    p: int
    alphabet: Alphabet
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        alphabet = as_alphabet(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        data = check_configs(self.data, self.p, alphabet.q).astype(np.int8)
        if data.shape[0] < 1:
            raise InvalidInputError("a sample set needs at least one row")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def q(self) -> int:
        return self.alphabet.q

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def compressed(self):
        """Distinct rows and their relative frequencies."""
        rows, counts = np.unique(self.data, axis=0, return_counts=True)
        return rows, counts / self.n

    def __eq__(self, other):
        return (isinstance(other, SampleSet) and self.p == other.p and self.q == other.q
                and np.array_equal(self.data, other.data))

    __hash__ = None


# ---------------------------------------------------------------------------
# file I/O


def model_to_dict(model: EnergyModel) -> dict:
    return {
        "p": model.p,
        "q": model.q,
        "terms": [{"sites": list(t.sites), "kind": t.kind,
                   "labels": None if t.labels is None else list(t.labels), "strength": t.strength}
                  for t in model.terms],
    }


def model_from_dict(d: dict, path=None) -> EnergyModel:
    for key in ("p", "q", "terms"):
        if key not in d:
            raise ParseError("missing required field", field=key, path=path)
    terms = []
    for i, t in enumerate(d["terms"]):
        try:
            terms.append(BasisTerm(tuple(t["sites"]), t.get("kind", MONOMIAL),
                                   None if t.get("labels") is None else tuple(t["labels"]),
                                   float(t.get("strength", 0.0))))
        except (KeyError, TypeError, InvalidInputError) as exc:
            raise ParseError(str(exc), field=f"terms[{i}]", path=path) from exc
    try:
        return EnergyModel(int(d["p"]), Alphabet(int(d["q"])), tuple(terms))
    except InvalidInputError as exc:
        raise ParseError(str(exc), path=path) from exc


def write_model(model: EnergyModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")


def read_model(path) -> EnergyModel:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc
    return model_from_dict(d, path)


def write_samples(samples: SampleSet, path) -> None:
    lines = [f"# p={samples.p} q={samples.q}"]
    lines.extend(" ".join(map(str, row)) for row in samples.data.tolist())
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_header(line: str, lineno: int, path):
    out = {}
    for tok in line.lstrip("#").split():
        key, _, val = tok.partition("=")
        if key in ("p", "q"):
            try:
                out[key] = int(val)
            except ValueError:
                raise ParseError(f"bad header value {tok!r}", line=lineno, field=key, path=path) from None
    return out


def parse_samples(text: str, q: int | None = None, p: int | None = None, path=None) -> SampleSet:
    """Parse the plain-text sample format.

    An optional ``# p=<p> q=<q>`` header fixes the dimensions; otherwise
    ``p`` comes from the first row and ``q`` from the argument (or the largest
    symbol seen, at least 2).
    """
    rows, linenos = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            hdr = _parse_header(s, lineno, path)
            p = hdr.get("p", p)
            q = hdr.get("q", q)
            continue
        rows.append(s)
        linenos.append(lineno)
    if not rows:
        raise ParseError("no sample rows", path=path)
    tokens = " ".join(rows).split()
    if p is None:
        p = len(rows[0].split())
    if len(tokens) != p * len(rows):
        for s, lineno in zip(rows, linenos):
            if len(s.split()) != p:
                raise ParseError(f"expected {p} symbols, found {len(s.split())}", line=lineno, path=path)
    try:
        flat = np.array(tokens, dtype=np.int64)
    except ValueError:
        for s, lineno in zip(rows, linenos):
            for j, tok in enumerate(s.split()):
                if not tok.lstrip("-").isdigit():
                    raise ParseError(f"non-integer symbol {tok!r}", line=lineno, field=j, path=path) from None
        raise
    if q is None:
        q = max(2, int(flat.max()) + 1)
    bad = np.flatnonzero((flat < 0) | (flat >= q))
    if bad.size:
        i = int(bad[0])
        raise ParseError(f"symbol {flat[i]} outside 0..{q - 1}", line=linenos[i // p], field=i % p, path=path)
    return SampleSet(p, Alphabet(q), flat.reshape(len(rows), p))


def read_samples(path, q: int | None = None, p: int | None = None) -> SampleSet:
    return parse_samples(Path(path).read_text(), q=q, p=p, path=path)

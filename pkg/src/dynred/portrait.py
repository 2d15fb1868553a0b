"""Weighted portraits: finite functional graphs ``Phi: W -> V`` with a weight
``eps(w) >= 1`` on every marked vertex.

Canonical forms are computed structurally (rooted-tree codes hung on cycles,
cycles at their least rotation) rather than by minimizing over vertex
permutations, which keeps portraits of a dozen or so vertices cheap.
:func:`canonical_form_bruteforce` does the permutation search for small
portraits and serves as a reference.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Optional

__all__ = [
    "CatalogEntry",
    "Portrait",
    "admissible",
    "canonical_form",
    "canonical_form_bruteforce",
    "canonical_portrait",
    "catalog",
    "catalog_entry",
    "catalog_version",
    "enumerate_preperiodic",
    "enumerate_preperiodic_bruteforce",
    "exact_period_bound",
    "exact_period_counts",
    "is_isomorphic",
    "match_catalog",
    "weight",
]

MAX_VERTICES = 12


@dataclass(frozen=True)
class Portrait:
    """Vertices are ``0..n-1``; ``edges`` and ``weights`` are sorted pairs
    keyed by the marked vertices."""

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[tuple[int, int], ...]

    def __post_init__(self):
        marked = [w for w, _ in self.edges]
        if len(set(marked)) != len(marked):
            raise ValueError("a marked vertex has two images")
        if sorted(w for w, _ in self.weights) != sorted(marked):
            raise ValueError("weights must be given exactly on the marked vertices")
        for w, v in self.edges:
            if not (0 <= w < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {w}->{v} leaves the vertex range")
        for w, e in self.weights:
            if e < 1:
                raise ValueError(f"weight of vertex {w} must be at least 1")
        covered = set(marked) | {v for _, v in self.edges}
        if covered != set(range(self.n)):
            raise ValueError("every vertex must be marked or the image of a marked vertex")

    @classmethod
    def build(cls, n: int, edges: Mapping[int, int], weights: Optional[Mapping[int, int]] = None) -> "Portrait":
        """Build from dicts; weights default to 1."""
        weights = weights or {}
        unknown = set(weights) - set(edges)
        if unknown:
            raise ValueError(f"weights on unmarked vertices {sorted(unknown)}")
        return cls(
            n,
            tuple(sorted((int(w), int(v)) for w, v in edges.items())),
            tuple(sorted((int(w), int(weights.get(w, 1))) for w in edges)),
        )

    @classmethod
    def preperiodic(cls, phi: Iterable[int], eps: Optional[Iterable[int]] = None) -> "Portrait":
        """All vertices marked; ``phi[i]`` is the image of vertex ``i``."""
        phi = list(phi)
        eps = list(eps) if eps is not None else [1] * len(phi)
        return cls.build(len(phi), dict(enumerate(phi)), dict(enumerate(eps)))

    @property
    def marked(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.edges)

    @property
    def phi(self) -> dict[int, int]:
        return dict(self.edges)

    @property
    def eps(self) -> dict[int, int]:
        return dict(self.weights)

    @property
    def is_preperiodic(self) -> bool:
        return len(self.edges) == self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "marked": list(self.marked),
            "edges": {str(w): v for w, v in self.edges},
            "weights": {str(w): e for w, e in self.weights},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Portrait":
        edges = {int(w): int(v) for w, v in data["edges"].items()}
        weights = {int(w): int(e) for w, e in data.get("weights", {}).items()}
        if "marked" in data and sorted(int(w) for w in data["marked"]) != sorted(edges):
            raise ValueError("marked list disagrees with the edge map")
        return cls.build(int(data["n"]), edges, weights)


def weight(p: Portrait) -> int:
    return sum(e for _, e in p.weights)


# ------------------------------------------------------------ structure


def _periodic_vertices(p: Portrait) -> set[int]:
    phi = p.phi
    periodic: set[int] = set()
    for start in phi:
        seen = []
        v = start
        while v in phi and v not in seen:
            seen.append(v)
            v = phi[v]
        if v in seen:
            periodic.update(seen[seen.index(v):])
    return periodic


def _cycle_through(phi: Mapping[int, int], v: int) -> list[int]:
    cyc = [v]
    w = phi[v]
    while w != v:
        cyc.append(w)
        w = phi[w]
    return cyc


def exact_period_counts(p: Portrait) -> dict[int, int]:
    """Number of vertices of each exact period."""
    phi = p.phi
    counts: Counter = Counter()
    for v in _periodic_vertices(p):
        counts[len(_cycle_through(phi, v))] += 1
    return dict(sorted(counts.items()))


def _mobius_mu(n: int) -> int:
    mu, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            mu = -mu
        k += 1
    return -mu if n > 1 else mu


def exact_period_bound(n: int, d: int) -> int:
    """Upper bound for the number of points of exact period ``n`` of a degree
    ``d`` map of P^1."""
    return sum(_mobius_mu(n // m) * (d**m + 1) for m in range(1, n + 1) if n % m == 0)


def admissible(p: Portrait, d: int) -> tuple[bool, list[str]]:
    """Necessary conditions for a degree-``d`` map to realize ``p``.

    Tags: ``"I"`` (incoming weight above ``d``), ``"II"`` (total excess
    ramification above ``2d-2``), ``"III_n"`` (too many points of exact
    period ``n``).
    """
    if d < 2:
        raise ValueError("degree must be at least 2")
    bad = []
    incoming: Counter = Counter()
    eps = p.eps
    for w, v in p.edges:
        incoming[v] += eps[w]
    if incoming and max(incoming.values()) > d:
        bad.append("I")
    if sum(e - 1 for e in eps.values()) > 2 * d - 2:
        bad.append("II")
    counts = exact_period_counts(p)
    for n in range(1, p.n + 1):
        if counts.get(n, 0) > exact_period_bound(n, d):
            bad.append(f"III_{n}")
    return (not bad, bad)


# ------------------------------------------------------------ canonical form


def _structure(p: Portrait):
    """Nested-tuple invariant plus, for each component, an ordered vertex
    list realizing it. Isomorphic portraits give equal invariants."""
    phi = p.phi
    eps = p.eps
    periodic = _periodic_vertices(p)
    children: dict[int, list[int]] = {v: [] for v in range(p.n)}
    for w, v in p.edges:
        if w not in periodic:
            children[v].append(w)

    def tree(v):
        """(code, vertex order) of the in-tree hanging at ``v``."""
        subs = sorted((tree(c) for c in children[v]), key=lambda t: t[0])
        code = (1 if v in phi else 0, eps.get(v, 0), tuple(s[0] for s in subs))
        order = [v]
        for s in subs:
            order.extend(s[1])
        return code, order

    components = []
    done: set[int] = set()
    for v in sorted(periodic):
        if v in done:
            continue
        cyc = _cycle_through(phi, v)
        done.update(cyc)
        trees = [tree(u) for u in cyc]
        codes = [t[0] for t in trees]
        L = len(cyc)
        best = min(range(L), key=lambda r: codes[r:] + codes[:r])
        rot = trees[best:] + trees[:best]
        code = (0, tuple(t[0] for t in rot))
        order = [u for t in rot for u in t[1]]
        components.append((code, order))
    # components without a cycle are rooted at an unmarked vertex
    for v in range(p.n):
        if v not in phi:
            c, order = tree(v)
            components.append(((1, c), order))
    components.sort(key=lambda t: t[0])
    return components


def canonical_portrait(p: Portrait) -> Portrait:
    """The canonically relabeled isomorphic copy of ``p``."""
    if p.n > MAX_VERTICES:
        raise ValueError(f"portraits with more than {MAX_VERTICES} vertices are not supported")
    order = [v for _, comp in _structure(p) for v in comp]
    relabel = {old: new for new, old in enumerate(order)}
    eps = p.eps
    return Portrait.build(
        p.n,
        {relabel[w]: relabel[v] for w, v in p.edges},
        {relabel[w]: eps[w] for w in eps},
    )


def _serialize(p: Portrait) -> bytes:
    return json.dumps(p.to_json(), sort_keys=True, separators=(",", ":")).encode()


def canonical_form(p: Portrait) -> bytes:
    """Byte string equal for two portraits exactly when they are isomorphic."""
    return _serialize(canonical_portrait(p))


def _permuted(p: Portrait, perm) -> Portrait:
    eps = p.eps
    return Portrait.build(
        p.n,
        {perm[w]: perm[v] for w, v in p.edges},
        {perm[w]: eps[w] for w in eps},
    )


def _label_key(p: Portrait):
    phi, eps = p.phi, p.eps
    return tuple((phi.get(v, -1), eps.get(v, 0)) for v in range(p.n))


def canonical_form_bruteforce(p: Portrait, max_n: int = 8) -> tuple:
    """Least relabeled edge/weight table over all vertex permutations."""
    if p.n > max_n:
        raise ValueError(f"brute force is limited to {max_n} vertices")
    return min(_label_key(_permuted(p, perm)) for perm in itertools.permutations(range(p.n)))


def is_isomorphic(p: Portrait, q: Portrait) -> bool:
    return canonical_form(p) == canonical_form(q)


# ------------------------------------------------------------ enumeration


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _cycle_unions(total: int) -> tuple[Portrait, ...]:
    """All portraits of the given weight whose vertices are all periodic."""
    if total == 0:
        return (Portrait(0, (), ()),)
    found: dict[bytes, Portrait] = {}
    for used in range(1, total + 1):
        for rest in _cycle_unions(total - used):
            for length in range(1, used + 1):
                for ws in _compositions(used, length):
                    n0 = rest.n
                    phi = dict(rest.phi)
                    eps = dict(rest.eps)
                    for i in range(length):
                        phi[n0 + i] = n0 + (i + 1) % length
                        eps[n0 + i] = ws[i]
                    q = canonical_portrait(Portrait.build(n0 + length, phi, eps))
                    found.setdefault(_serialize(q), q)
    return tuple(found[k] for k in sorted(found))


def _sort_key(p: Portrait):
    return (weight(p), p.n, _serialize(p))


def enumerate_preperiodic(d: int, max_weight: int) -> list[Portrait]:
    """Admissible preperiodic portraits of weight ``1..max_weight`` up to
    isomorphism, canonically labeled, sorted by weight then encoding.

    Built by adding one leaf at a time: removing a leaf keeps a portrait
    admissible, so every admissible portrait arises from a smaller one.
    """
    if max_weight > 8:
        raise ValueError("max_weight above 8 is out of scope")
    by_weight: dict[int, dict[bytes, Portrait]] = {0: {_serialize(Portrait(0, (), ())): Portrait(0, (), ())}}
    for w in range(1, max_weight + 1):
        level: dict[bytes, Portrait] = {}
        for q in _cycle_unions(w):
            if admissible(q, d)[0]:
                level.setdefault(_serialize(q), q)
        for e in range(1, w + 1):
            for base in by_weight.get(w - e, {}).values():
                n0 = base.n
                for target in range(n0):
                    phi = dict(base.phi)
                    eps = dict(base.eps)
                    phi[n0] = target
                    eps[n0] = e
                    q = Portrait.build(n0 + 1, phi, eps)
                    if not admissible(q, d)[0]:
                        continue
                    q = canonical_portrait(q)
                    level.setdefault(_serialize(q), q)
        by_weight[w] = level
    out = [q for w in range(1, max_weight + 1) for q in by_weight[w].values()]
    return sorted(out, key=_sort_key)


def _bruteforce_chunk(args) -> list[bytes]:
    d, n, total, phi_chunk = args
    found = set()
    for phi in phi_chunk:
        for eps in _compositions(total, n):
            q = Portrait.preperiodic(phi, eps)
            if admissible(q, d)[0]:
                found.add(canonical_form(q))
    return sorted(found)


def enumerate_preperiodic_bruteforce(d: int, max_weight: int, jobs: int = 1) -> list[Portrait]:
    """Reference enumeration over every labeled map and weight vector."""
    if max_weight > 6:
        raise ValueError("brute force is limited to weight 6")
    tasks = []
    for total in range(1, max_weight + 1):
        for n in range(1, total + 1):
            phis = list(itertools.product(range(n), repeat=n))
            step = max(1, len(phis) // max(1, 4 * jobs))
            for i in range(0, len(phis), step):
                tasks.append((d, n, total, phis[i : i + step]))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bruteforce_chunk, tasks))
    else:
        results = [_bruteforce_chunk(t) for t in tasks]
    keys = sorted({k for chunk in results for k in chunk})
    out = [Portrait.from_json(json.loads(k)) for k in keys]
    return sorted(out, key=_sort_key)


# ------------------------------------------------------------ catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    portrait: Portrait
    md: int
    sd_bullet: int
    sd_circ: int
    sd_star: int

    @property
    def weight(self) -> int:
        return weight(self.portrait)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "weight": self.weight,
            "portrait": self.portrait.to_json(),
            "MD": self.md,
            "SD_bullet": self.sd_bullet,
            "SD_circ": self.sd_circ,
            "SD_star": self.sd_star,
        }


@lru_cache(maxsize=1)
def _load_catalog() -> tuple[str, tuple[CatalogEntry, ...]]:
    raw = json.loads(resources.files("dynred").joinpath("data/portrait_catalog.json").read_text())
    entries = []
    for item in raw["entries"]:
        md, sb, sc, ss = item["dims"]
        entries.append(
            CatalogEntry(item["name"], Portrait.preperiodic(item["phi"], item["eps"]), md, sb, sc, ss)
        )
    return raw["version"], tuple(entries)


def catalog_version() -> str:
    return _load_catalog()[0]


def catalog() -> list[CatalogEntry]:
    return list(_load_catalog()[1])


@lru_cache(maxsize=1)
def _catalog_index() -> dict[bytes, str]:
    return {canonical_form(e.portrait): e.name for e in catalog()}


def match_catalog(p: Portrait) -> Optional[str]:
    return _catalog_index().get(canonical_form(p))


def catalog_entry(name: str) -> CatalogEntry:
    for e in catalog():
        if e.name == name:
            return e
    raise KeyError(f"no catalog portrait named {name!r}")

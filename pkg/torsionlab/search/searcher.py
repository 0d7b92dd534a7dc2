"""
Searches for torsion primes through degree-zero operator words.

Starting from seed monomials, operators are applied in the Schubert basis.
Every nonzero coefficient c of X_v is closed into operator word data by
appending d_{v^{-1}}, and each prime p | c yields a record (N, p) with
N = a + n + b.

Two strategies are offered. The random search runs its walks in
generations: every walk continues a state drawn from an archive of the
best distinct states seen so far, favouring those whose coefficients carry
the largest primes, and walk j draws from its own stream seeded by
(rng_seed, j), so the result does not depend on how walks are split across
workers. The beam search expands every kept state layer by layer in N.
"""

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from torsionlab.algebra.poly import operator_word_value
from torsionlab.algebra.sym import Permutation, identity
from torsionlab.certificates.construct import OperatorData
from torsionlab.core import settings
from torsionlab.core.errors import IntegrityError, InvalidInputError
from torsionlab.core.serialization import int_to_json

from .factor import factorize
from .operators import OperatorSet, Seed, operator_arrays, vector_to_array


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchRecord:
    """A prime p dividing a certified operator word value at rank N."""

    N: int
    p: int
    value: int
    data: OperatorData
    seed: str
    trace: tuple
    entry: Permutation

    @property
    def key(self):
        return (self.N, self.p)

    def verify(self):
        """Recompute the operator word value from scratch and check p and N."""
        value = operator_word_value(self.data.n, self.data.items)
        if value != self.value or value % self.p:
            raise IntegrityError(f"Record (N={self.N}, p={self.p}) does not re-verify: value {value}")
        if self.data.N != self.N:
            raise IntegrityError(f"Record (N={self.N}, p={self.p}) has data of rank {self.data.N}")
        return True

    def to_json(self):
        return {
            "N": self.N,
            "p": int_to_json(self.p),
            "value": int_to_json(self.value),
            "seed": self.seed,
            "trace": list(self.trace),
            "entry": self.entry.to_json(),
            "data": self.data.to_json(),
        }


class RecordSink:
    """Keeps one candidate per (N, p); merging is order-insensitive."""

    def __init__(self):
        self.candidates = {}

    def offer(self, key, candidate):
        current = self.candidates.get(key)
        if current is None or candidate < current:
            self.candidates[key] = candidate
            return current is None
        return False

    def merge(self, other: Dict):
        for key, candidate in other.items():
            self.offer(key, candidate)

    def __len__(self):
        return len(self.candidates)


@dataclass
class SearchConfig:
    ops: OperatorSet
    seeds: Sequence[Seed]
    max_len: int = 12
    iterations: int = 1000
    rng_seed: int = 0
    workers: int = field(default_factory=lambda: settings.DEFAULT_WORKERS)
    mode: str = "random"
    max_rank: Optional[int] = None
    beam_width: int = field(default_factory=lambda: settings.BEAM_WIDTH)
    random_rate: float = field(default_factory=lambda: settings.BEAM_RANDOM_RATE)
    generation_size: int = field(default_factory=lambda: settings.SEARCH_GENERATION_SIZE)
    archive_width: int = field(default_factory=lambda: settings.SEARCH_ARCHIVE_WIDTH)

    def __post_init__(self):
        if not self.ops.operators:
            raise InvalidInputError("The operator list is empty")
        if not self.seeds:
            raise InvalidInputError("At least one seed monomial is required")
        for seed in self.seeds:
            if seed.n != self.ops.n:
                raise InvalidInputError(f"Seed {seed.label()} is in S_{seed.n}, operators in S_{self.ops.n}")
        if self.mode not in ("random", "beam"):
            raise InvalidInputError(f"Unknown search mode {self.mode!r}")
        if self.workers < 1:
            raise InvalidInputError("Worker count must be positive")
        if self.mode == "beam" and self.max_rank is None:
            raise InvalidInputError("Beam mode needs a maximal rank")
        if self.generation_size < 1 or self.archive_width < 1:
            raise InvalidInputError("Generation size and archive width must be positive")


@lru_cache(maxsize=None)
def _start_vector(ops: OperatorSet, seed: Seed):
    basis, _ = operator_arrays(ops, seed.degree)
    return tuple(int(v) for v in vector_to_array(seed.vector(), basis))


class _Scanner:
    """Shared state of one worker: seed vectors, matrices and a factorization cache."""

    def __init__(self, ops: OperatorSet, seeds: Sequence[Seed]):
        self.ops = ops
        self.seeds = list(seeds)
        self.n = ops.n
        self.weights = [op.weight for op in ops.operators]
        self.prime_cache = {}
        self.matrices = {seed.degree: operator_arrays(ops, seed.degree) for seed in self.seeds}
        self.start = [_start_vector(ops, seed) for seed in self.seeds]

    def primes_of(self, value):
        value = abs(int(value))
        if value not in self.prime_cache:
            self.prime_cache[value] = tuple(factorize(value).distinct()) if value > 1 else ()
        return self.prime_cache[value]

    def rank(self, seed_index, weight):
        return self.seeds[seed_index].degree + self.n + weight

    def fits(self, seed_index, weight, max_rank):
        return max_rank is None or self.rank(seed_index, weight) <= max_rank

    def scan(self, sink, seed_index, trace, weight, state):
        N = self.rank(seed_index, weight)
        for index, value in enumerate(state):
            if not value:
                continue
            for p in self.primes_of(value):
                if sink.offer((N, p), (len(trace), tuple(trace), seed_index, index, int(value))):
                    logger.debug(f"New candidate N={N}, p={p}")

    def score(self, state):
        return max((max(self.primes_of(v), default=1) for v in state if v), default=0)


def _distinct(states, seeds):
    """One state per (seed degree, vector), the one with the smallest trace."""
    unique = {}
    for state in sorted(states, key=lambda s: (len(s[1]), s[1], s[0])):
        unique.setdefault((seeds[state[0]].degree, state[3]), state)
    return list(unique.values())


def _walk_chunk(ops, seeds, max_len, max_rank, starts, walk_ids, rng_seed):
    """
    Run the given walks from the archived starts. Each start is drawn from a
    random layer, biased towards the front of that layer, where the best
    scoring states are kept.
    """
    scanner = _Scanner(ops, seeds)
    sink = RecordSink()
    visited = []
    for j in walk_ids:
        rng = np.random.default_rng([rng_seed, j])
        layer = starts[int(rng.integers(len(starts)))]
        seed_index, trace, weight, vector = layer[int(len(layer) * rng.random() ** 2)]
        arrays = scanner.matrices[seeds[seed_index].degree][1]
        state = np.array(vector, dtype=object)
        for _ in range(int(rng.integers(1, max_len - len(trace) + 1))):
            allowed = [k for k, w in enumerate(scanner.weights) if scanner.fits(seed_index, weight + w, max_rank)]
            if not allowed:
                break
            k = allowed[int(rng.integers(len(allowed)))]
            state = arrays[k].dot(state)
            trace += (k,)
            weight += scanner.weights[k]
            if not any(state):
                break
            scanner.scan(sink, seed_index, trace, weight, state)
            visited.append((seed_index, trace, weight, tuple(int(v) for v in state)))
    return sink.candidates, visited


def _expand_chunk(ops, seeds, chunk):
    """Apply every operator to every state of a chunk."""
    scanner = _Scanner(ops, seeds)
    children = []
    for seed_index, trace, weight, state in chunk:
        arrays = scanner.matrices[seeds[seed_index].degree][1]
        for k, matrix in enumerate(arrays):
            child = matrix.dot(np.array(state, dtype=object))
            if any(child):
                children.append((seed_index, trace + (k,), weight + scanner.weights[k], tuple(int(v) for v in child)))
    return children


class TorsionSearcher:
    """
    Runs a search described by a SearchConfig and turns candidates into
    verified SearchRecords.
    """

    def __init__(self, config: SearchConfig):
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.sink = RecordSink()

    def run(self) -> List[SearchRecord]:
        start = time.monotonic()
        if self.config.mode == "random":
            self._run_random()
        else:
            self._run_beam()
        records = self._records()
        elapsed = time.monotonic() - start
        self.logger.info(f"Search finished in {elapsed:.1f}s with {len(records)} records")
        return records

    def _seed_states(self, scanner):
        return [(k, (), 0, start) for k, start in enumerate(scanner.start)]

    def _select(self, layer, scanner, width, salt):
        """Rank states by score and keep the best ones plus a random fill."""
        cfg = self.config
        ranked = sorted(layer, key=lambda s: (-scanner.score(s[3]), len(s[1]), s[1], s[0]))
        if len(ranked) <= width:
            return ranked
        top_count = int(width * (1 - cfg.random_rate))
        best, remainder = ranked[:top_count], ranked[top_count:]
        rng = np.random.default_rng([cfg.rng_seed, *salt])
        picked = sorted(rng.choice(len(remainder), size=min(width - top_count, len(remainder)), replace=False))
        return best + [remainder[i] for i in picked]

    def _starts(self, archive, scanner):
        """Archive layers, best first, keeping only states a walk can still extend."""
        cfg = self.config
        lightest = min(scanner.weights)
        starts = []
        for weight in sorted(archive):
            layer = tuple(
                s for s in archive[weight]
                if len(s[1]) < cfg.max_len and scanner.fits(s[0], weight + lightest, cfg.max_rank)
            )
            if layer:
                starts.append(layer)
        return tuple(starts)

    def _run_random(self):
        cfg = self.config
        if cfg.iterations <= 0:
            return
        scanner = _Scanner(cfg.ops, cfg.seeds)
        archive = {0: self._seed_states(scanner)}
        parallel = Parallel(n_jobs=cfg.workers)
        self.logger.info(
            f"Random search: {cfg.iterations} walks of length <= {cfg.max_len} in generations of "
            f"{cfg.generation_size} on {cfg.workers} workers"
        )
        for generation, first in enumerate(range(0, cfg.iterations, cfg.generation_size)):
            starts = self._starts(archive, scanner)
            if not starts:
                self.logger.info(f"No archived state can be extended after {first} walks")
                break
            walk_ids = range(first, min(first + cfg.generation_size, cfg.iterations))
            chunks = [walk_ids[k::cfg.workers] for k in range(cfg.workers)]
            results = parallel(
                delayed(_walk_chunk)(cfg.ops, tuple(cfg.seeds), cfg.max_len, cfg.max_rank, starts, chunk, cfg.rng_seed)
                for chunk in chunks
                if len(chunk)
            )
            fresh = {}
            for candidates, visited in results:
                self.sink.merge(candidates)
                for state in visited:
                    fresh.setdefault(state[2], []).append(state)
            for weight, states in fresh.items():
                layer = _distinct(archive.get(weight, []) + states, cfg.seeds)
                archive[weight] = self._select(layer, scanner, cfg.archive_width, (generation, weight))
            self.logger.debug(
                f"Generation {generation}: {sum(len(v) for v in archive.values())} archived states, "
                f"{len(self.sink)} (N, p) pairs so far"
            )

    def _run_beam(self):
        cfg = self.config
        scanner = _Scanner(cfg.ops, cfg.seeds)
        max_weight = cfg.max_rank - scanner.n - min(seed.degree for seed in cfg.seeds)
        layers = {0: self._seed_states(scanner)}
        parallel = Parallel(n_jobs=cfg.workers)
        for weight in range(max_weight + 1):
            raw = layers.pop(weight, [])
            if not raw:
                continue
            layer = [s for s in _distinct(raw, cfg.seeds) if scanner.fits(s[0], s[2], cfg.max_rank)]
            for seed_index, trace, w, state in layer:
                scanner.scan(self.sink, seed_index, trace, w, state)
            beam = self._select(layer, scanner, cfg.beam_width, (weight,))
            ranks = sorted({scanner.rank(s[0], weight) for s in layer})
            self.logger.info(
                f"Layer weight={weight} (N in {ranks}): {len(raw)} states, "
                f"{len(layer)} distinct, beam {len(beam)}, {len(self.sink)} (N, p) pairs so far"
            )
            chunks = [beam[k::cfg.workers] for k in range(cfg.workers)]
            results = parallel(delayed(_expand_chunk)(cfg.ops, tuple(cfg.seeds), chunk) for chunk in chunks if chunk)
            for children in results:
                for child in children:
                    if child[2] <= max_weight:
                        layers.setdefault(child[2], []).append(child)

    def _records(self) -> List[SearchRecord]:
        cfg = self.config
        scanner_basis = {seed.degree: operator_arrays(cfg.ops, seed.degree)[0] for seed in cfg.seeds}
        records = []
        for (N, p), (_, trace, seed_index, index, value) in sorted(self.sink.candidates.items()):
            seed = cfg.seeds[seed_index]
            entry = scanner_basis[seed.degree][index]
            record = SearchRecord(
                N=N,
                p=p,
                value=value,
                data=record_data(cfg.ops, seed, trace, entry),
                seed=seed.label(),
                trace=tuple(cfg.ops.operators[k].name for k in trace),
                entry=entry,
            )
            record.verify()
            records.append(record)
        return records


def record_data(ops: OperatorSet, seed: Seed, trace, entry: Permutation) -> OperatorData:
    """Seed item, the steps of every operator in the trace, then d_{v^{-1}} to read X_v."""
    items = [(identity(ops.n), seed.p, seed.q)]
    for k in trace:
        items += [tuple(s) for s in ops.operators[k].steps]
    items.append((entry.inverse(), 0, 0))
    return OperatorData(ops.n, tuple(items))


def random_search(ops, seeds, max_len, iterations, rng_seed, workers=None, max_rank=None,
                  generation_size=None, archive_width=None) -> List[SearchRecord]:
    config = SearchConfig(
        ops=ops,
        seeds=seeds,
        max_len=max_len,
        iterations=iterations,
        rng_seed=rng_seed,
        workers=workers or settings.DEFAULT_WORKERS,
        max_rank=max_rank,
        generation_size=generation_size or settings.SEARCH_GENERATION_SIZE,
        archive_width=archive_width or settings.SEARCH_ARCHIVE_WIDTH,
    )
    return TorsionSearcher(config).run()


def beam_search(ops, seeds, max_rank, rng_seed=0, workers=None, beam_width=None, random_rate=None) -> List[SearchRecord]:
    config = SearchConfig(
        ops=ops,
        seeds=seeds,
        rng_seed=rng_seed,
        workers=workers or settings.DEFAULT_WORKERS,
        mode="beam",
        max_rank=max_rank,
        beam_width=beam_width or settings.BEAM_WIDTH,
        random_rate=settings.BEAM_RANDOM_RATE if random_rate is None else random_rate,
    )
    return TorsionSearcher(config).run()

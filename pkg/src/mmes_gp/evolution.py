"""Generational genetic-programming loop with tournament selection.

Random-stream order per generation is fixed: for each child pair, select
mom, select dad, crossover cut points, mutate sister, mutate brother. The
initial population is drawn genome by genome before any evaluation.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from .entanglement import FitnessReport
from .errors import ConfigurationError, UsageError
from .genome import GateAlphabet, Genome, random_genome

log = logging.getLogger(__name__)

TIE_TOL = 1e-9


@dataclass(frozen=True)
class GaConfig:
    """GP hyperparameters.

    ``keep_probability`` is the per-gene probability of *keeping* a gene
    during mutation, so useful values sit close to 1.
    ``stall_generations`` stops a run after that many generations without
    incumbent improvement; ``None`` runs the full budget.
    """

    population_size: int = 200
    tournament_size: int = 4
    keep_probability: float = 0.95
    generations: int = 2000
    seed: int = 0
    target_fitness: Optional[float] = None
    stall_generations: Optional[int] = None

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ConfigurationError("population_size must be even and >= 2")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ConfigurationError("tournament_size must be in [1, population_size]")
        if not 0.0 <= self.keep_probability <= 1.0:
            raise ConfigurationError("keep_probability must be in [0, 1]")
        if self.generations < 0:
            raise ConfigurationError("generations must be >= 0")
        if self.stall_generations is not None and self.stall_generations < 1:
            raise ConfigurationError("stall_generations must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_genome: Genome
    incumbent_fitness: float

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "incumbent_fitness": self.incumbent_fitness,
            "best_genes": list(self.best_genome.genes),
        }


def mutate(genome: Genome, alphabet: GateAlphabet, cfg: GaConfig, rng: np.random.Generator) -> Genome:
    keep = rng.random(len(genome.genes)) < cfg.keep_probability
    fresh = rng.integers(0, alphabet.sizes)
    genes = tuple(np.where(keep, genome.genes, fresh).tolist())
    if genes == genome.genes:
        return Genome(genes, genome.cached_fitness)
    return Genome(genes)


def crossover(
    mom: Genome,
    dad: Genome,
    rng: np.random.Generator,
    cuts: Optional[tuple[int, int]] = None,
) -> tuple[Genome, Genome]:
    """Two-point cut: genes strictly between the cut points are exchanged.

    Genomes shorter than 3 are cloned, since no index can lie strictly
    between two cuts. ``cuts`` overrides the random draw.
    """
    if len(mom) != len(dad):
        raise UsageError("crossover parents differ in length")
    size = len(mom)
    if size < 3:
        return Genome(mom.genes, mom.cached_fitness), Genome(dad.genes, dad.cached_fitness)
    if cuts is None:
        c1, c2 = sorted(int(c) for c in rng.choice(size, size=2, replace=False))
    else:
        c1, c2 = cuts
        if not 0 <= c1 < c2 < size:
            raise UsageError(f"invalid cut points {cuts} for length {size}")
    if c2 - c1 < 2 or mom.genes[c1 + 1:c2] == dad.genes[c1 + 1:c2]:
        return Genome(mom.genes, mom.cached_fitness), Genome(dad.genes, dad.cached_fitness)
    sister = mom.genes[: c1 + 1] + dad.genes[c1 + 1:c2] + mom.genes[c2:]
    brother = dad.genes[: c1 + 1] + mom.genes[c1 + 1:c2] + dad.genes[c2:]
    return Genome(sister), Genome(brother)


def tournament_select(
    population: Sequence[Genome],
    cfg: GaConfig,
    rng: np.random.Generator,
    scores: Optional[np.ndarray] = None,
) -> Genome:
    """Pick a random size-k subset and return a random member of its best set.

    ``scores`` may carry the population's fitness values precomputed.
    """
    if not population:
        raise UsageError("cannot select from an empty population")
    k = min(cfg.tournament_size, len(population))
    picks = rng.choice(len(population), size=k, replace=False)
    if scores is None:
        sub = np.array([population[i].fitness for i in picks])
    else:
        sub = scores[picks]
    winners = picks[sub >= sub.max() - TIE_TOL]
    return population[int(winners[rng.integers(len(winners))])]


FitnessFn = Callable[[Genome], FitnessReport]


def _evaluate(population: list[Genome], fitness: FitnessFn, pool: Optional[ThreadPoolExecutor]) -> None:
    todo = [g for g in population if g.cached_fitness is None]
    if pool is None:
        reports = [fitness(g) for g in todo]
    else:
        reports = list(pool.map(fitness, todo))
    for g, r in zip(todo, reports):
        g.cached_fitness = r


def evolve(
    alphabet: GateAlphabet,
    fitness: FitnessFn,
    cfg: GaConfig,
    stats_sink: Optional[TextIO] = None,
    threads: int = 1,
    observer: Optional[Callable[[int, list[Genome]], None]] = None,
) -> tuple[Genome, list[GenerationStats]]:
    """Run the generational loop and return the best-ever genome with per-generation stats.

    ``observer(generation, population)`` is called after each evaluation.
    Parallel evaluation (``threads > 1``) changes wall-clock time only.
    """
    rng = np.random.default_rng(cfg.seed)
    population = [random_genome(alphabet, rng) for _ in range(cfg.population_size)]
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    history: list[GenerationStats] = []
    incumbent: Optional[Genome] = None
    last_improvement = 0
    scores = np.empty(0)
    try:
        for gen in range(cfg.generations + 1):
            if gen > 0:
                nxt = []
                for _ in range(cfg.population_size // 2):
                    mom = tournament_select(population, cfg, rng, scores)
                    dad = tournament_select(population, cfg, rng, scores)
                    sister, brother = crossover(mom, dad, rng)
                    nxt.append(mutate(sister, alphabet, cfg, rng))
                    nxt.append(mutate(brother, alphabet, cfg, rng))
                population = nxt
            _evaluate(population, fitness, pool)
            if observer is not None:
                observer(gen, population)

            scores = np.array([g.fitness for g in population])
            best = population[int(np.argmax(scores))]
            if incumbent is None or best.fitness > incumbent.fitness + TIE_TOL:
                incumbent = Genome(best.genes, best.cached_fitness)
                last_improvement = gen
            stats = GenerationStats(gen, float(scores.max()), float(scores.mean()), best, incumbent.fitness)
            history.append(stats)
            if stats_sink is not None:
                stats_sink.write(json.dumps(stats.to_dict()) + "\n")

            if cfg.target_fitness is not None and incumbent.fitness >= cfg.target_fitness - TIE_TOL:
                log.debug("target %.6f reached at generation %d", cfg.target_fitness, gen)
                break
            if cfg.stall_generations is not None and gen - last_improvement >= cfg.stall_generations:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return incumbent, history


def with_seed(cfg: GaConfig, seed: int, **changes) -> GaConfig:
    return replace(cfg, seed=seed, **changes)

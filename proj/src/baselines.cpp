// SPDX-License-Identifier: Apache-2.0
#include "cfbits/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cfbits {
namespace {

constexpr unsigned long long kCountMax = std::numeric_limits<unsigned long long>::max();

// Enumerates non-negative vectors with sum <= budget and entries <= cap,
// lexicographically, invoking visit(v) for each.
template <typename Visit>
void enumerate_vectors(std::vector<int>& v, int pos, int remaining, int cap, Visit&& visit) {
  if (pos == static_cast<int>(v.size())) {
    visit(v);
    return;
  }
  const int hi = std::min(cap, remaining);
  for (int value = 0; value <= hi; ++value) {
    v[pos] = value;
    enumerate_vectors(v, pos + 1, remaining - value, cap, visit);
  }
  v[pos] = 0;
}

double best_so_far(const std::vector<double>& trace) {
  return trace.empty() ? -std::numeric_limits<double>::infinity() : trace.back();
}

}  // namespace

BitGrid equal_allocation(const SystemConfig& config) {
  const int share = config.bit_budget / (config.num_aps * config.num_ues);
  return BitGrid(config.num_aps, config.num_ues, share);
}

unsigned long long stars_and_bars_count(int dim, int budget) {
  // C(dim + budget, dim), multiplicative form with overflow saturation.
  unsigned long long result = 1;
  for (int i = 1; i <= dim; ++i) {
    const unsigned long long numerator = static_cast<unsigned long long>(budget) + i;
    if (result > kCountMax / numerator) return kCountMax;
    result = result * numerator / i;
  }
  return result;
}

EnumerationCapError::EnumerationCapError(unsigned long long estimate_, unsigned long long cap_)
    : std::runtime_error("enumeration size " + std::to_string(estimate_) +
                         " exceeds the configured cap " + std::to_string(cap_)),
      estimate(estimate_),
      cap(cap_) {}

ExhaustiveResult ap_exhaustive(AllocationEvaluator& evaluator, unsigned long long cap) {
  const SystemConfig& config = evaluator.config();
  const int budget = stage1_budget(config);
  const int entry_cap = std::min(evaluator.profile().max_bits(), budget);
  const unsigned long long estimate = stars_and_bars_count(config.num_aps, budget);
  if (estimate > cap) throw EnumerationCapError(estimate, cap);

  ExhaustiveResult result;
  result.best_eval = -std::numeric_limits<double>::infinity();
  std::vector<int> v(config.num_aps, 0);
  enumerate_vectors(v, 0, budget, entry_cap, [&](const std::vector<int>& candidate) {
    ++result.enumerated;
    const double eval = evaluator.evaluate(expand_ap_bits(candidate, config.num_ues));
    if (eval > result.best_eval) {
      result.best_eval = eval;
      result.ap_bits = candidate;
    }
  });
  result.bits = expand_ap_bits(result.ap_bits, config.num_ues);
  return result;
}

ExhaustiveResult full_exhaustive(AllocationEvaluator& evaluator, unsigned long long cap) {
  const SystemConfig& config = evaluator.config();
  const int dim = config.num_aps * config.num_ues;
  const int entry_cap = std::min(evaluator.profile().max_bits(), config.bit_budget);
  const unsigned long long estimate = stars_and_bars_count(dim, config.bit_budget);
  if (estimate > cap) throw EnumerationCapError(estimate, cap);

  ExhaustiveResult result;
  result.best_eval = -std::numeric_limits<double>::infinity();
  std::vector<int> flat(dim, 0);
  BitGrid grid(config.num_aps, config.num_ues);
  enumerate_vectors(flat, 0, config.bit_budget, entry_cap, [&](const std::vector<int>& candidate) {
    ++result.enumerated;
    grid.data() = candidate;
    const double eval = evaluator.evaluate(grid);
    if (eval > result.best_eval) {
      result.best_eval = eval;
      result.bits = grid;
    }
  });
  return result;
}

VectorSearch ga_search(const GAParams& params) {
  if (params.population < 1) throw std::invalid_argument("ga_search: population must be >= 1");
  return [params](const VectorProblem& problem, Rng& rng) {
    struct Individual {
      std::vector<int> genes;
      double fitness;
    };
    const double mutation_rate =
        params.mutation_rate < 0.0 ? 1.0 / problem.dim : params.mutation_rate;

    std::vector<Individual> population;
    population.reserve(params.population);
    for (int i = 0; i < params.population; ++i) {
      auto genes = random_feasible_vector(problem.dim, problem.budget, problem.entry_cap, rng);
      const double fitness = problem.evaluate(genes);
      population.push_back({std::move(genes), fitness});
    }
    auto by_fitness = [](const Individual& a, const Individual& b) {
      return a.fitness > b.fitness;
    };
    std::stable_sort(population.begin(), population.end(), by_fitness);

    VectorSearchResult result;
    result.trace.push_back(population.front().fitness);

    auto make_child = [&](const Individual& a, const Individual& b) {
      std::vector<int> genes(problem.dim);
      for (int g = 0; g < problem.dim; ++g)
        genes[g] = rng.uniform() < 0.5 ? a.genes[g] : b.genes[g];  // uniform crossover
      for (int g = 0; g < problem.dim; ++g)
        if (rng.uniform() < mutation_rate)
          genes[g] = rng.uniform_int(0, std::min(problem.entry_cap, problem.budget));
      genes = repair(std::move(genes), problem.budget, rng);
      const double fitness = problem.evaluate(genes);
      return Individual{std::move(genes), fitness};
    };

    for (int gen = 0; gen < params.generations; ++gen) {
      if (params.elitist) {
        // One offspring per parent pair; survivors are the fittest of
        // parents plus offspring.
        std::vector<Individual> pool = population;
        for (int i = 0; i < params.population; ++i)
          for (int j = i + 1; j < params.population; ++j)
            pool.push_back(make_child(population[i], population[j]));
        std::stable_sort(pool.begin(), pool.end(), by_fitness);
        pool.resize(params.population);
        population = std::move(pool);
      } else {
        for (int child = 0; child < params.offspring_per_generation; ++child) {
          const int first = rng.uniform_int(0, params.population - 1);
          int second = first;
          if (params.population > 1)
            while (second == first) second = rng.uniform_int(0, params.population - 1);
          Individual offspring = make_child(population[first], population[second]);
          if (offspring.fitness > population.back().fitness) {
            population.back() = std::move(offspring);
            std::stable_sort(population.begin(), population.end(), by_fitness);
          }
        }
      }
      result.trace.push_back(population.front().fitness);
    }
    result.best = population.front().genes;
    result.best_eval = population.front().fitness;
    return result;
  };
}

VectorSearch pso_search(const PSOParams& params) {
  if (params.swarm < 1) throw std::invalid_argument("pso_search: swarm must be >= 1");
  return [params](const VectorProblem& problem, Rng& rng) {
    // Integer swarm: positions live on the feasible lattice and every update
    // rounds back onto it. The rounding is the discretization loss inherent
    // to applying particle swarms to bit counts.
    struct Particle {
      std::vector<int> position;
      std::vector<double> velocity;
      std::vector<int> best_position;
      double best_fitness;
    };
    const int cap = std::min(problem.entry_cap, problem.budget);

    std::vector<Particle> swarm(params.swarm);
    std::vector<int> global_best;
    double global_best_fitness = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < params.swarm; ++i) {
      Particle& p = swarm[i];
      p.position = random_feasible_vector(problem.dim, problem.budget, cap, rng);
      p.velocity.resize(problem.dim);
      for (auto& v : p.velocity)
        v = (rng.uniform() - 0.5) * 2.0 * params.initial_velocity_scale * cap;
      p.best_fitness = problem.evaluate(p.position);
      p.best_position = p.position;
      if (p.best_fitness > global_best_fitness) {
        global_best_fitness = p.best_fitness;
        global_best = p.position;
      }
    }

    VectorSearchResult result;
    result.trace.push_back(global_best_fitness);
    for (int it = 0; it < params.iterations; ++it) {
      for (auto& p : swarm) {
        std::vector<int> next(problem.dim);
        for (int d = 0; d < problem.dim; ++d) {
          const double r1 = rng.uniform();
          const double r2 = rng.uniform();
          p.velocity[d] = params.inertia * p.velocity[d] +
                          params.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                          params.social * r2 * (global_best[d] - p.position[d]);
          const double moved = std::clamp(p.position[d] + p.velocity[d], 0.0,
                                          static_cast<double>(cap));
          next[d] = static_cast<int>(std::llround(moved));
        }
        p.position = repair(std::move(next), problem.budget, rng);
        const double fitness = problem.evaluate(p.position);
        if (fitness > p.best_fitness) {
          p.best_fitness = fitness;
          p.best_position = p.position;
        }
        if (fitness > global_best_fitness) {
          global_best_fitness = fitness;
          global_best = p.position;
        }
      }
      result.trace.push_back(global_best_fitness);
    }
    result.best = std::move(global_best);
    result.best_eval = global_best_fitness;
    return result;
  };
}

VectorSearch sa_search(const SAParams& params) {
  if (params.evaluations < 1)
    throw std::invalid_argument("sa_search: evaluations must be >= 1");
  return [params](const VectorProblem& problem, Rng& rng) {
    const int moves = params.evaluations - 1;
    const int probe =
        params.initial_temperature >= 0.0
            ? 0
            : std::min({100, params.probe_moves < 0 ? params.evaluations / 4 : params.probe_moves,
                        moves});

    // Random start topped up to the reachable budget; moves preserve the
    // vector sum.
    std::vector<int> state =
        random_feasible_vector(problem.dim, problem.budget, problem.entry_cap, rng);
    {
      long long sum = std::accumulate(state.begin(), state.end(), 0LL);
      const long long target =
          std::min<long long>(problem.budget,
                              static_cast<long long>(problem.dim) * problem.entry_cap);
      while (sum < target) {
        std::vector<int> open;
        for (int i = 0; i < problem.dim; ++i)
          if (state[i] < problem.entry_cap) open.push_back(i);
        ++state[open[rng.uniform_int(0, static_cast<int>(open.size()) - 1)]];
        ++sum;
      }
    }
    double energy = problem.evaluate(state);

    VectorSearchResult result;
    result.best = state;
    result.best_eval = energy;
    result.trace.push_back(energy);

    auto neighbor = [&](const std::vector<int>& from) {
      std::vector<int> next = from;
      std::vector<int> sources, sinks;
      for (int i = 0; i < problem.dim; ++i) {
        if (next[i] > 0) sources.push_back(i);
        if (next[i] < problem.entry_cap) sinks.push_back(i);
      }
      if (sources.empty() || sinks.empty()) return next;
      const int src = sources[rng.uniform_int(0, static_cast<int>(sources.size()) - 1)];
      int dst = sinks[rng.uniform_int(0, static_cast<int>(sinks.size()) - 1)];
      if (dst == src && sinks.size() > 1)
        while (dst == src) dst = sinks[rng.uniform_int(0, static_cast<int>(sinks.size()) - 1)];
      if (dst != src) {
        --next[src];
        ++next[dst];
      }
      return next;
    };

    double temperature = params.initial_temperature;
    std::vector<double> probe_drops;
    double cooling = 1.0;
    if (params.initial_temperature >= 0.0 && moves > 0)
      cooling = std::pow(params.floor_ratio, 1.0 / moves);

    for (int move = 0; move < moves; ++move) {
      std::vector<int> candidate = neighbor(state);
      const double cand_energy = problem.evaluate(candidate);
      const double delta = cand_energy - energy;
      bool accept;
      if (move < probe) {
        accept = true;  // burn-in: free walk while calibrating T0
        if (delta < 0.0) probe_drops.push_back(-delta);
        if (move == probe - 1) {
          double mean_drop = 0.0;
          for (double d : probe_drops) mean_drop += d;
          mean_drop = probe_drops.empty() ? std::abs(energy) * 1e-3 + 1e-12
                                          : mean_drop / probe_drops.size();
          temperature = mean_drop / std::log(1.0 / 0.8);  // ~80% uphill acceptance
          const int remaining = moves - probe;
          cooling = remaining > 0 ? std::pow(params.floor_ratio, 1.0 / remaining) : 1.0;
        }
      } else if (delta >= 0.0) {
        accept = true;
      } else if (temperature > 0.0) {
        accept = rng.uniform() < std::exp(delta / temperature);
      } else {
        accept = false;
      }
      if (accept) {
        state = std::move(candidate);
        energy = cand_energy;
      }
      if (move >= probe) temperature *= cooling;
      if (energy > result.best_eval) {
        result.best_eval = energy;
        result.best = state;
      }
      result.trace.push_back(result.best_eval);
    }
    return result;
  };
}

namespace {

AllocationResult two_stage(AllocationEvaluator& evaluator, const VectorSearch& stage1,
                           const VectorSearch& stage2, int outer_cycles, Rng& rng) {
  Rng stage1_rng = rng.substream("stage1");
  Rng stage2_rng = rng.substream("stage2");
  AllocationResult first = run_stage1_with(evaluator, stage1, stage1_rng);
  AllocationResult second = run_stage2_with(evaluator, stage2, outer_cycles, first.ap_bits,
                                            first.best_eval, stage2_rng);
  second.ap_bits = first.ap_bits;
  second.trace.insert(second.trace.begin(), first.trace.begin(), first.trace.end());
  second.eval_count += first.eval_count;
  return second;
}

}  // namespace

AllocationResult ga_allocate(AllocationEvaluator& evaluator, const GAParams& stage1,
                             const GAParams& stage2, int outer_cycles, Rng& rng) {
  return two_stage(evaluator, ga_search(stage1), ga_search(stage2), outer_cycles, rng);
}

AllocationResult pso_allocate(AllocationEvaluator& evaluator, const PSOParams& stage1,
                              const PSOParams& stage2, int outer_cycles, Rng& rng) {
  return two_stage(evaluator, pso_search(stage1), pso_search(stage2), outer_cycles, rng);
}

AllocationResult sa_allocate(AllocationEvaluator& evaluator, const SAParams& stage1,
                             const SAParams& stage2, int outer_cycles, Rng& rng) {
  return two_stage(evaluator, sa_search(stage1), sa_search(stage2), outer_cycles, rng);
}

GAParams ga_matched(const HSParams& hs, bool elitist) {
  GAParams params;
  params.population = hs.hm_size;
  params.generations = hs.iterations;
  params.offspring_per_generation = 1;
  params.elitist = elitist;
  return params;
}

PSOParams pso_matched(const HSParams& hs, int iteration_multiplier) {
  PSOParams params;
  params.swarm = hs.hm_size;
  params.iterations = std::max(1, hs.iterations / hs.hm_size) * iteration_multiplier;
  return params;
}

SAParams sa_matched(const HSParams& hs) {
  SAParams params;
  params.evaluations = hs.hm_size + hs.iterations;
  return params;
}

}  // namespace cfbits

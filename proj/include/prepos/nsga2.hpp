#pragma once

// Constraint-dominated NSGA-II over CandidateSolutions, with an exhaustive
// Pareto oracle for instances small enough to enumerate.
//
// Encoding: selection and service bits are kept directly; stock is an index
// into a per-material quantity grid built from the configured level fractions
// of each material's total effective demand. Uniform crossover on the bits,
// one-point crossover on the grid indices, bit-flip and grid-step mutation,
// then service bits are masked by selection bits to restore the activation
// linkage cheaply.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "prepos/model.hpp"

namespace prepos::nsga2 {

using model::CandidateSolution;
using model::ObjectiveVector;
using model::ProblemInstance;

/// Deb constraint-domination: feasibility first, then lower violation among
/// infeasibles, then componentwise objective domination among feasibles.
inline bool dominates(const CandidateSolution& a, const CandidateSolution& b) {
    if (!a.evaluated() || !b.evaluated())
        throw NotEvaluated("solutions must be evaluated before comparison");
    const bool a_ok = a.feasible(), b_ok = b.feasible();
    if (a_ok != b_ok) return a_ok;
    if (!a_ok) return a.violation_total < b.violation_total;
    const auto av = a.objectives->as_array(), bv = b.objectives->as_array();
    bool strictly_better = false;
    for (std::size_t k = 0; k < av.size(); ++k) {
        if (av[k] > bv[k]) return false;
        strictly_better |= av[k] < bv[k];
    }
    return strictly_better;
}

/// Plain objective-vector domination (both solutions assumed feasible).
inline bool objective_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    const auto av = a.as_array(), bv = b.as_array();
    bool strictly_better = false;
    for (std::size_t k = 0; k < av.size(); ++k) {
        if (av[k] > bv[k]) return false;
        strictly_better |= av[k] < bv[k];
    }
    return strictly_better;
}

struct Front {
    int rank{0};
    std::vector<std::size_t> members;
    std::vector<double> crowding;  // parallel to members
};

/// Deb's fast non-dominated sort under constraint domination.
inline std::vector<Front> fast_nondominated_sort(const std::vector<CandidateSolution>& population) {
    std::vector<Front> fronts;
    const std::size_t n = population.size();
    if (n == 0) return fronts;
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> domination_count(n, 0);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(population[p], population[q])) {
                dominated[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(population[q], population[p])) {
                dominated[q].push_back(p);
                ++domination_count[p];
            }
        }
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p)
        if (domination_count[p] == 0) current.push_back(p);
    int rank = 0;
    while (!current.empty()) {
        Front front;
        front.rank = rank++;
        front.members = current;
        std::vector<std::size_t> next;
        for (std::size_t p : current)
            for (std::size_t q : dominated[p])
                if (--domination_count[q] == 0) next.push_back(q);
        fronts.push_back(std::move(front));
        current = std::move(next);
    }
    return fronts;
}

/// Crowding distances for one front's objective vectors: per objective the
/// boundary members get infinity and interior members accumulate normalized
/// neighbor gaps; a constant objective contributes nothing.
inline std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0) return distance;
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < 4; ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[a].as_array()[m] < objectives[b].as_array()[m];
        });
        double lo = objectives[order.front()].as_array()[m];
        double hi = objectives[order.back()].as_array()[m];
        if (hi == lo) continue;
        distance[order.front()] = std::numeric_limits<double>::infinity();
        distance[order.back()] = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k + 1 < n; ++k)
            distance[order[k]] += (objectives[order[k + 1]].as_array()[m] -
                                   objectives[order[k - 1]].as_array()[m]) /
                                  (hi - lo);
    }
    return distance;
}

struct EvolutionConfig {
    std::size_t population_size{100};
    std::size_t generations{100};
    double crossover_rate{0.9};
    double mutation_rate{0.0};  // 0 selects 1/chromosome-length
    std::uint64_t seed{1};
    std::vector<double> quantity_levels{0.0, 0.25, 0.5, 0.75, 1.0};
    std::size_t archive_capacity{0};  // 0 = unbounded

    void validate() const {
        if (population_size < 4 || population_size % 2 != 0)
            throw RangeError("population size must be even and at least 4");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw RangeError("crossover rate must be in [0, 1]");
        if (mutation_rate < 0.0 || mutation_rate > 1.0)
            throw RangeError("mutation rate must be in [0, 1]");
        if (quantity_levels.empty())
            throw RangeError("quantity grid needs at least one level");
        for (double frac : quantity_levels)
            if (frac < 0.0) throw RangeError("quantity levels must be non-negative fractions");
    }
};

struct ArchiveEntry {
    CandidateSolution solution;
    std::size_t generation_found{0};
};

struct ParetoArchive {
    std::vector<ArchiveEntry> entries;
    std::uint64_t seed{0};
    bool feasible{true};  // false when only least-violating solutions exist
};

namespace detail {

/// Integer stock quantities per material: one sorted, deduplicated ladder of
/// level fractions applied to total effective demand.
inline std::vector<std::vector<double>> build_quantity_grid(const ProblemInstance& inst,
                                                            const std::vector<double>& fractions) {
    std::vector<std::vector<double>> grid(inst.material_count());
    for (std::size_t i = 0; i < inst.material_count(); ++i) {
        double total = inst.total_effective_demand(i);
        std::vector<double>& levels = grid[i];
        for (double frac : fractions)
            levels.push_back(std::round(frac * total));
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    }
    return grid;
}

struct Genome {
    std::vector<std::uint8_t> select;
    std::vector<std::uint8_t> serve;
    std::vector<std::uint16_t> level;  // grid index per (supplier, material)
};

class Evolver {
public:
    Evolver(const ProblemInstance& inst, const EvolutionConfig& cfg)
        : inst_(inst),
          cfg_(cfg),
          grid_(build_quantity_grid(inst, cfg.quantity_levels)),
          rng_(cfg.seed) {
        chromosome_length_ = inst.supplier_count() * (1 + inst.area_count() + inst.material_count());
        mutation_rate_ = cfg.mutation_rate > 0.0
                             ? cfg.mutation_rate
                             : 1.0 / static_cast<double>(chromosome_length_);
    }

    ParetoArchive run() {
        std::vector<Genome> genomes(cfg_.population_size);
        std::vector<CandidateSolution> population(cfg_.population_size);
        for (std::size_t p = 0; p < cfg_.population_size; ++p) {
            genomes[p] = random_genome();
            population[p] = decode(genomes[p]);
            model::evaluate(population[p], inst_);
        }
        ParetoArchive archive;
        archive.seed = cfg_.seed;
        archive_genomes_.clear();
        update_archive(archive, population, genomes, 0);

        std::vector<int> rank;
        std::vector<double> crowd;
        rank_population(population, rank, crowd);

        for (std::size_t gen = 1; gen <= cfg_.generations; ++gen) {
            std::vector<Genome> offspring_genomes;
            std::vector<CandidateSolution> offspring;
            offspring_genomes.reserve(cfg_.population_size);
            offspring.reserve(cfg_.population_size);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            while (offspring_genomes.size() < cfg_.population_size) {
                // elitist mating: parents come from the archive half the
                // time once it holds anything
                auto pick_parent = [&]() -> const Genome& {
                    if (!archive_genomes_.empty() && unif(rng_) < 0.5) {
                        std::uniform_int_distribution<std::size_t> pick(
                            0, archive_genomes_.size() - 1);
                        return archive_genomes_[pick(rng_)];
                    }
                    return genomes[tournament(population, rank, crowd)];
                };
                const Genome& parent_a = pick_parent();
                const Genome& parent_b = pick_parent();
                auto [child1, child2] = crossover(parent_a, parent_b);
                mutate(child1);
                mutate(child2);
                offspring_genomes.push_back(std::move(child1));
                if (offspring_genomes.size() < cfg_.population_size)
                    offspring_genomes.push_back(std::move(child2));
            }
            for (auto& g : offspring_genomes) {
                offspring.push_back(decode(g));
                model::evaluate(offspring.back(), inst_);
            }

            // mu + lambda elitist truncation
            std::vector<Genome> combined_genomes = std::move(genomes);
            combined_genomes.insert(combined_genomes.end(),
                                    std::make_move_iterator(offspring_genomes.begin()),
                                    std::make_move_iterator(offspring_genomes.end()));
            std::vector<CandidateSolution> combined = std::move(population);
            combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                            std::make_move_iterator(offspring.end()));
            update_archive(archive, combined, combined_genomes, gen);

            // elitist truncation by (rank, crowding); duplicated objective
            // vectors only fill seats left after every distinct vector, so
            // genome copies cannot take over the population
            auto fronts = fast_nondominated_sort(combined);
            genomes.clear();
            population.clear();
            std::vector<std::size_t> overflow;
            std::vector<ObjectiveVector> seen;
            auto is_duplicate = [&](const ObjectiveVector& v) {
                return std::find(seen.begin(), seen.end(), v) != seen.end();
            };
            for (auto& front : fronts) {
                std::vector<ObjectiveVector> objs;
                objs.reserve(front.members.size());
                for (std::size_t idx : front.members) objs.push_back(*combined[idx].objectives);
                front.crowding = crowding_distance(objs);
                std::vector<std::size_t> order(front.members.size());
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                    return front.crowding[x] > front.crowding[y];
                });
                for (std::size_t k : order) {
                    std::size_t idx = front.members[k];
                    if (population.size() >= cfg_.population_size) break;
                    if (is_duplicate(*combined[idx].objectives)) {
                        overflow.push_back(idx);
                        continue;
                    }
                    seen.push_back(*combined[idx].objectives);
                    population.push_back(combined[idx]);
                    genomes.push_back(combined_genomes[idx]);
                }
                if (population.size() >= cfg_.population_size) break;
            }
            // seats that would have gone to genome copies host fresh random
            // immigrants instead, keeping supplier-pattern diversity alive
            (void)overflow;
            while (population.size() < cfg_.population_size) {
                genomes.push_back(random_genome());
                population.push_back(decode(genomes.back()));
                model::evaluate(population.back(), inst_);
            }
            polish(archive, gen);
            rank_population(population, rank, crowd);
        }

        if (archive.entries.empty()) {
            archive.feasible = false;
            fill_with_least_violating(archive, population, cfg_.generations);
        }
        return archive;
    }

private:
    Genome random_genome() {
        Genome g;
        const std::size_t nj = inst_.supplier_count(), nf = inst_.area_count(),
                          ni = inst_.material_count();
        std::uniform_int_distribution<int> coin(0, 1);
        g.select.resize(nj);
        for (auto& x : g.select) x = static_cast<std::uint8_t>(coin(rng_));
        g.serve.resize(nj * nf);
        for (auto& y : g.serve) y = static_cast<std::uint8_t>(coin(rng_));
        g.level.resize(nj * ni);
        for (std::size_t j = 0; j < nj; ++j)
            for (std::size_t i = 0; i < ni; ++i) {
                std::uniform_int_distribution<std::size_t> pick(0, grid_[i].size() - 1);
                g.level[j * ni + i] = static_cast<std::uint16_t>(pick(rng_));
            }
        return g;
    }

    /// Service bits and stock are masked by the selection bit here, not in
    /// the genome: unselected suppliers keep their latent pattern, so a later
    /// selection flip re-exposes a complete building block. Decoded solutions
    /// therefore always satisfy the activation and quantity linkages.
    CandidateSolution decode(const Genome& g) const {
        CandidateSolution s = CandidateSolution::zeros(inst_);
        const std::size_t nf = inst_.area_count(), ni = inst_.material_count();
        s.selected = g.select;
        for (std::size_t j = 0; j < inst_.supplier_count(); ++j) {
            if (!g.select[j]) continue;
            for (std::size_t f = 0; f < nf; ++f) s.serves[j * nf + f] = g.serve[j * nf + f];
            for (std::size_t i = 0; i < ni; ++i)
                s.stock[j * ni + i] = grid_[i][g.level[j * ni + i]];
        }
        return s;
    }

    std::size_t tournament(const std::vector<CandidateSolution>& population,
                           const std::vector<int>& rank, const std::vector<double>& crowd) {
        std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
        std::size_t a = pick(rng_), b = pick(rng_);
        if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
        std::uniform_int_distribution<int> coin(0, 1);
        return coin(rng_) ? a : b;
    }

    /// Uniform crossover at supplier granularity: each supplier's whole plan
    /// (selection bit, service row, stock levels) moves between children as
    /// one gene, plus a one-point exchange on the flattened level vector.
    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Genome c1 = a, c2 = b;
        if (unif(rng_) >= cfg_.crossover_rate) return {c1, c2};
        std::uniform_int_distribution<int> coin(0, 1);
        const std::size_t nf = inst_.area_count(), ni = inst_.material_count();
        for (std::size_t j = 0; j < c1.select.size(); ++j) {
            if (!coin(rng_)) continue;
            std::swap(c1.select[j], c2.select[j]);
            for (std::size_t f = 0; f < nf; ++f)
                std::swap(c1.serve[j * nf + f], c2.serve[j * nf + f]);
            for (std::size_t i = 0; i < ni; ++i)
                std::swap(c1.level[j * ni + i], c2.level[j * ni + i]);
        }
        if (!c1.level.empty() && coin(rng_)) {
            std::uniform_int_distribution<std::size_t> cut(0, c1.level.size());
            std::size_t point = cut(rng_);
            for (std::size_t k = point; k < c1.level.size(); ++k)
                std::swap(c1.level[k], c2.level[k]);
        }
        return {c1, c2};
    }

    void mutate(Genome& g) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        bool touched = false;
        auto flip_bit = [&](std::uint8_t& bit) {
            bit ^= 1;
            touched = true;
        };
        for (auto& x : g.select)
            if (unif(rng_) < mutation_rate_) flip_bit(x);
        for (auto& y : g.serve)
            if (unif(rng_) < mutation_rate_) flip_bit(y);
        const std::size_t ni = inst_.material_count();
        std::uniform_int_distribution<int> coin(0, 1);
        auto step_level = [&](std::size_t j, std::size_t i) {
            auto& level = g.level[j * ni + i];
            int moved = static_cast<int>(level) + (coin(rng_) ? 1 : -1);
            int top = static_cast<int>(grid_[i].size()) - 1;
            auto stepped = static_cast<std::uint16_t>(std::clamp(moved, 0, top));
            touched |= stepped != level;
            level = stepped;
        };
        for (std::size_t j = 0; j < inst_.supplier_count(); ++j)
            for (std::size_t i = 0; i < ni; ++i)
                if (unif(rng_) < mutation_rate_) step_level(j, i);
        if (!touched) nudge_one_locus(g);
    }

    /// Single random locus move: one bit flip or one grid step.
    void nudge_one_locus(Genome& g) {
        const std::size_t ni = inst_.material_count();
        std::uniform_int_distribution<std::size_t> pick(0, chromosome_length_ - 1);
        std::uniform_int_distribution<int> coin(0, 1);
        std::size_t locus = pick(rng_);
        if (locus < g.select.size()) {
            g.select[locus] ^= 1;
        } else if (locus < g.select.size() + g.serve.size()) {
            g.serve[locus - g.select.size()] ^= 1;
        } else {
            std::size_t flat = locus - g.select.size() - g.serve.size();
            auto& level = g.level[flat];
            int moved = static_cast<int>(level) + (coin(rng_) ? 1 : -1);
            int top = static_cast<int>(grid_[flat % ni].size()) - 1;
            level = static_cast<std::uint16_t>(std::clamp(moved, 0, top));
        }
    }

    void rank_population(const std::vector<CandidateSolution>& population, std::vector<int>& rank,
                         std::vector<double>& crowd) {
        rank.assign(population.size(), 0);
        crowd.assign(population.size(), 0.0);
        auto fronts = fast_nondominated_sort(population);
        for (const auto& front : fronts) {
            std::vector<ObjectiveVector> objs;
            objs.reserve(front.members.size());
            for (std::size_t idx : front.members) objs.push_back(*population[idx].objectives);
            auto dist = crowding_distance(objs);
            for (std::size_t k = 0; k < front.members.size(); ++k) {
                rank[front.members[k]] = front.rank;
                crowd[front.members[k]] = dist[k];
            }
        }
    }

    /// Inserts one evaluated candidate if it is feasible and neither
    /// duplicated nor dominated by the archive; dominated entries fall out.
    /// Fresh entries join the local-search worklist.
    bool try_insert(ParetoArchive& archive, const CandidateSolution& cand, const Genome& genome,
                    std::size_t generation) {
        if (!cand.feasible()) return false;
        for (const auto& entry : archive.entries) {
            const auto& held = *entry.solution.objectives;
            if (held == *cand.objectives || objective_dominates(held, *cand.objectives))
                return false;
        }
        for (std::size_t k = archive.entries.size(); k-- > 0;) {
            if (objective_dominates(*cand.objectives, *archive.entries[k].solution.objectives)) {
                archive.entries.erase(archive.entries.begin() + static_cast<std::ptrdiff_t>(k));
                archive_genomes_.erase(archive_genomes_.begin() + static_cast<std::ptrdiff_t>(k));
            }
        }
        archive.entries.push_back({cand, generation});
        archive_genomes_.push_back(genome);
        polish_queue_.push_back(genome);
        if (cfg_.archive_capacity > 0 && archive.entries.size() > cfg_.archive_capacity)
            prune_archive(archive);
        return true;
    }

    void update_archive(ParetoArchive& archive, const std::vector<CandidateSolution>& candidates,
                        const std::vector<Genome>& candidate_genomes, std::size_t generation) {
        for (std::size_t c = 0; c < candidates.size(); ++c)
            try_insert(archive, candidates[c], candidate_genomes[c], generation);
    }

    std::size_t neighborhood_size() const {
        const std::size_t nj = inst_.supplier_count();
        return nj + nj * inst_.area_count() + 2 * nj * inst_.material_count();
    }

    /// Pareto local search on the archive: each inserted solution has its
    /// full single-locus neighborhood evaluated exactly once, spending at
    /// most one population's worth of evaluations per generation. On large
    /// instances a single neighborhood exceeds the budget and the queue
    /// simply waits, so the evolution loop is unaffected at scale.
    void polish(ParetoArchive& archive, std::size_t generation) {
        std::size_t budget = cfg_.population_size;
        const std::size_t nf = inst_.area_count(), ni = inst_.material_count();
        while (!polish_queue_.empty() && neighborhood_size() <= budget) {
            Genome base = std::move(polish_queue_.front());
            polish_queue_.pop_front();
            budget -= neighborhood_size();
            auto propose = [&](Genome&& neighbor) {
                auto sol = decode(neighbor);
                model::evaluate(sol, inst_);
                try_insert(archive, sol, neighbor, generation);
            };
            for (std::size_t j = 0; j < base.select.size(); ++j) {
                Genome n = base;
                n.select[j] ^= 1;
                propose(std::move(n));
            }
            for (std::size_t k = 0; k < base.serve.size(); ++k) {
                if (!base.select[k / nf]) continue;  // masked bits cannot matter
                Genome n = base;
                n.serve[k] ^= 1;
                propose(std::move(n));
            }
            for (std::size_t k = 0; k < base.level.size(); ++k) {
                if (!base.select[k / ni]) continue;
                for (int step : {-1, +1}) {
                    int moved = static_cast<int>(base.level[k]) + step;
                    int top = static_cast<int>(grid_[k % ni].size()) - 1;
                    if (moved < 0 || moved > top) continue;
                    Genome n = base;
                    n.level[k] = static_cast<std::uint16_t>(moved);
                    propose(std::move(n));
                }
            }
        }
    }

    void prune_archive(ParetoArchive& archive) {
        std::vector<ObjectiveVector> objs;
        objs.reserve(archive.entries.size());
        for (const auto& e : archive.entries) objs.push_back(*e.solution.objectives);
        auto dist = crowding_distance(objs);
        std::vector<std::size_t> order(archive.entries.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        order.resize(cfg_.archive_capacity);
        std::sort(order.begin(), order.end());  // keep discovery order
        std::vector<ArchiveEntry> kept;
        std::vector<Genome> kept_genomes;
        kept.reserve(cfg_.archive_capacity);
        kept_genomes.reserve(cfg_.archive_capacity);
        for (std::size_t idx : order) {
            kept.push_back(std::move(archive.entries[idx]));
            kept_genomes.push_back(std::move(archive_genomes_[idx]));
        }
        archive.entries = std::move(kept);
        archive_genomes_ = std::move(kept_genomes);
    }

    void fill_with_least_violating(ParetoArchive& archive,
                                   const std::vector<CandidateSolution>& population,
                                   std::size_t generation) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& sol : population) best = std::min(best, sol.violation_total);
        for (const auto& sol : population)
            if (sol.violation_total == best) archive.entries.push_back({sol, generation});
    }

    const ProblemInstance& inst_;
    const EvolutionConfig& cfg_;
    std::vector<std::vector<double>> grid_;
    std::mt19937_64 rng_;
    std::size_t chromosome_length_{0};
    double mutation_rate_{0.0};
    std::vector<Genome> archive_genomes_;  // parallel to the archive entries
    std::deque<Genome> polish_queue_;      // archive entries awaiting local search
};

}  // namespace detail

/// Seed-deterministic NSGA-II run. Returns the cumulative archive of feasible
/// non-dominated solutions; when no feasible solution was ever seen, the
/// archive holds the least-violating final solutions and is flagged.
inline ParetoArchive evolve(const ProblemInstance& inst, const EvolutionConfig& cfg) {
    inst.validate();
    cfg.validate();
    detail::Evolver evolver(inst, cfg);
    return evolver.run();
}

/// Exhaustive oracle: enumerates selections, service patterns of selected
/// suppliers and grid stock levels, filters by feasibility and returns the
/// exact non-dominated objective set. Guarded against search spaces beyond
/// ten million candidates.
inline ParetoArchive brute_force_pareto(const ProblemInstance& inst,
                                        const std::vector<double>& quantity_levels) {
    inst.validate();
    if (quantity_levels.empty())
        throw RangeError("quantity grid needs at least one level");
    auto grid = detail::build_quantity_grid(inst, quantity_levels);
    const std::size_t nj = inst.supplier_count(), nf = inst.area_count(),
                      ni = inst.material_count();

    double log_per_supplier = static_cast<double>(nf) * std::log(2.0);
    for (std::size_t i = 0; i < ni; ++i)
        log_per_supplier += std::log(static_cast<double>(grid[i].size()));
    double log_estimate = static_cast<double>(nj) *
                          std::log1p(std::exp(std::min(log_per_supplier, 700.0)));
    if (log_estimate > std::log(1e7))
        throw SpaceTooLarge("brute-force space estimate exp(" + std::to_string(log_estimate) +
                            ") exceeds 1e7 candidates");

    ParetoArchive archive;
    CandidateSolution current = CandidateSolution::zeros(inst);
    std::vector<CandidateSolution> front;

    auto consider = [&](CandidateSolution& cand) {
        model::evaluate(cand, inst);
        if (!cand.feasible()) return;
        for (const auto& held : front)
            if (*held.objectives == *cand.objectives ||
                objective_dominates(*held.objectives, *cand.objectives))
                return;
        std::erase_if(front, [&](const CandidateSolution& held) {
            return objective_dominates(*cand.objectives, *held.objectives);
        });
        front.push_back(cand);
    };

    // iterative per-supplier enumeration: skipped (all zero) or selected with
    // any service pattern and any stock level combination
    std::function<void(std::size_t)> recurse = [&](std::size_t j) {
        if (j == nj) {
            auto cand = current;
            consider(cand);
            return;
        }
        // not selected: bits and stock stay zero
        recurse(j + 1);
        // selected
        current.selected[j] = 1;
        const std::size_t serve_patterns = std::size_t{1} << nf;
        std::vector<std::size_t> level_idx(ni, 0);
        for (std::size_t pattern = 0; pattern < serve_patterns; ++pattern) {
            for (std::size_t f = 0; f < nf; ++f)
                current.serves[j * nf + f] = static_cast<std::uint8_t>((pattern >> f) & 1);
            std::fill(level_idx.begin(), level_idx.end(), 0);
            bool more = true;
            while (more) {
                for (std::size_t i = 0; i < ni; ++i)
                    current.stock[j * ni + i] = grid[i][level_idx[i]];
                recurse(j + 1);
                more = false;
                for (std::size_t i = 0; i < ni; ++i) {
                    if (++level_idx[i] < grid[i].size()) {
                        more = true;
                        break;
                    }
                    level_idx[i] = 0;
                }
            }
        }
        current.selected[j] = 0;
        for (std::size_t f = 0; f < nf; ++f) current.serves[j * nf + f] = 0;
        for (std::size_t i = 0; i < ni; ++i) current.stock[j * ni + i] = 0.0;
    };
    recurse(0);

    archive.feasible = !front.empty();
    for (auto& sol : front) archive.entries.push_back({std::move(sol), 0});
    return archive;
}

}  // namespace prepos::nsga2

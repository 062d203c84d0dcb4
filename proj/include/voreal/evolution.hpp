#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "voreal/datasets.hpp"
#include "voreal/genotype.hpp"
#include "voreal/objectives.hpp"
#include "voreal/operators.hpp"

namespace voreal {

struct EvolutionConfig {
  int n_pop = 100;
  int n_off = 100;
  int generations = 500;
  double mating_prob = 0.5;
  MutationParams mutation;
  GenomeBounds bounds;
  ObjectiveSet objective_set = ObjectiveSet::parse("a/m/t");
  double rho = 0.05;  // committee fraction of the final population
  std::uint64_t seed = 0;
  GeomConfig geometry;

  void validate() const;
};

// Non-dominated fronts (front 0 first) plus per-individual rank and
// crowding distance.
struct ParetoRanking {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

struct Committee {
  std::vector<Individual> members;
};

struct GenerationStats {
  int gen = 0;
  std::vector<double> best;
  std::vector<double> median;
  std::size_t front0_size = 0;
  std::vector<std::vector<double>> front0_objectives;
};

struct EvolveResult {
  std::vector<Individual> population;
  Committee committee;
  std::vector<GenerationStats> history;
};

// a dominates b (maximization): a >= b everywhere, a > b somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

// Fast non-dominated sorting with crowding distances (boundary individuals
// get +inf, interior ones normalized neighbor gaps summed per objective).
ParetoRanking non_dominated_sort(const std::vector<std::vector<double>>& objs);

// Environmental selection: whole fronts in order, the splitting front by
// descending crowding distance (ties to the lower index).
std::vector<Individual> nsga2_select(const std::vector<Individual>& union_pop,
                                     int n_pop);

// The main loop: random initial population, binary-tournament parents,
// crossover with mating_prob then mutation, evaluation of the unevaluated,
// NSGA-II survival, for a fixed generation budget.
EvolveResult evolve(const Dataset& train, const EvolutionConfig& cfg,
                    const BoundingBox& box);

// Top max(1, round(rho*|pop|)) individuals by cached accuracy.
Committee committee_select(const std::vector<Individual>& pop, double rho);

// Majority vote of the members; exact ties go to tie_break (default
// Anomaly).
Label committee_classify(const Committee& committee,
                         std::span<const double> point,
                         Label tie_break = Label::Anomaly);

// One row per generation: gen, best/median per objective, front-0 size.
void write_history_csv(const std::vector<GenerationStats>& history,
                       const ObjectiveSet& set, std::ostream& out);

}  // namespace voreal

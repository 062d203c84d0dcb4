#include "voreal/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace voreal {

void EvolutionConfig::validate() const {
  if (n_pop < 2) throw std::invalid_argument("n_pop must be >= 2");
  if (n_off < 1) throw std::invalid_argument("n_off must be >= 1");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (!(mating_prob >= 0.0 && mating_prob <= 1.0))
    throw std::invalid_argument("mating_prob must be in [0,1]");
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must be in (0,1]");
  mutation.validate();
  bounds.validate();
  objective_set.validate();
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dominates: length mismatch");
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly_better = true;
  }
  return strictly_better;
}

ParetoRanking non_dominated_sort(const std::vector<std::vector<double>>& objs) {
  const std::size_t n = objs.size();
  if (n == 0) throw std::invalid_argument("non_dominated_sort: empty population");
  const std::size_t m = objs.front().size();
  for (const auto& v : objs)
    if (v.size() != m)
      throw std::invalid_argument("non_dominated_sort: ragged objectives");

  ParetoRanking out;
  out.rank.assign(n, 0);
  out.crowding.assign(n, 0.0);

  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dom_count(n, 0);
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(objs[i], objs[j])) {
        dominated[i].push_back(j);
        ++dom_count[j];
      } else if (dominates(objs[j], objs[i])) {
        dominated[j].push_back(i);
        ++dom_count[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (dom_count[i] == 0) current.push_back(i);

  std::size_t level = 0;
  while (!current.empty()) {
    out.fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      out.rank[i] = level;
      for (std::size_t j : dominated[i]) {
        if (--dom_count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
    ++level;
  }

  // Crowding distance per front.
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& front : out.fronts) {
    if (front.size() <= 2) {
      for (std::size_t i : front) out.crowding[i] = inf;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::size_t> order = front;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (objs[a][k] != objs[b][k]) return objs[a][k] < objs[b][k];
        return a < b;
      });
      const double span = objs[order.back()][k] - objs[order.front()][k];
      out.crowding[order.front()] = inf;
      out.crowding[order.back()] = inf;
      if (span <= 0.0) continue;
      for (std::size_t t = 1; t + 1 < order.size(); ++t) {
        if (out.crowding[order[t]] == inf) continue;
        out.crowding[order[t]] +=
            (objs[order[t + 1]][k] - objs[order[t - 1]][k]) / span;
      }
    }
  }
  return out;
}

namespace {

std::vector<std::vector<double>> cached_objectives(
    const std::vector<Individual>& pop) {
  std::vector<std::vector<double>> objs;
  objs.reserve(pop.size());
  for (const auto& ind : pop) {
    if (!ind.eval)
      throw std::invalid_argument("individual has no cached evaluation");
    objs.push_back(ind.eval->objectives);
  }
  return objs;
}

// Binary tournament on (rank asc, crowding desc, index asc).
std::size_t tournament(const ParetoRanking& ranking, std::size_t n, Rng& rng) {
  const std::size_t a = rng.uniform_index(n);
  const std::size_t b = rng.uniform_index(n);
  if (ranking.rank[a] != ranking.rank[b])
    return ranking.rank[a] < ranking.rank[b] ? a : b;
  if (ranking.crowding[a] != ranking.crowding[b])
    return ranking.crowding[a] > ranking.crowding[b] ? a : b;
  return std::min(a, b);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

GenerationStats make_stats(int gen, const std::vector<Individual>& pop) {
  GenerationStats st;
  st.gen = gen;
  const auto objs = cached_objectives(pop);
  const std::size_t m = objs.front().size();
  st.best.resize(m);
  st.median.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> col(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) col[i] = objs[i][k];
    st.best[k] = *std::max_element(col.begin(), col.end());
    st.median[k] = median_of(col);
  }
  const ParetoRanking ranking = non_dominated_sort(objs);
  st.front0_size = ranking.fronts.front().size();
  for (std::size_t i : ranking.fronts.front())
    st.front0_objectives.push_back(objs[i]);
  return st;
}

}  // namespace

std::vector<Individual> nsga2_select(const std::vector<Individual>& union_pop,
                                     int n_pop) {
  if (static_cast<int>(union_pop.size()) < n_pop)
    throw std::invalid_argument("nsga2_select: union smaller than n_pop");
  const auto objs = cached_objectives(union_pop);
  const ParetoRanking ranking = non_dominated_sort(objs);

  std::vector<Individual> selected;
  selected.reserve(n_pop);
  for (const auto& front : ranking.fronts) {
    if (selected.size() + front.size() <=
        static_cast<std::size_t>(n_pop)) {
      for (std::size_t i : front) selected.push_back(union_pop[i]);
      if (static_cast<int>(selected.size()) == n_pop) break;
      continue;
    }
    std::vector<std::size_t> order = front;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ranking.crowding[a] != ranking.crowding[b])
        return ranking.crowding[a] > ranking.crowding[b];
      return a < b;
    });
    for (std::size_t i : order) {
      if (static_cast<int>(selected.size()) == n_pop) break;
      selected.push_back(union_pop[i]);
    }
    break;
  }
  return selected;
}

EvolveResult evolve(const Dataset& train, const EvolutionConfig& cfg,
                    const BoundingBox& box) {
  cfg.validate();
  if (train.size() == 0) throw std::invalid_argument("evolve: empty training set");
  const int dim = train.dim;
  if (dim != box.dim()) throw std::invalid_argument("evolve: box dimension mismatch");

  GeomConfig geo = cfg.geometry;
  geo.seed = derive_seed(cfg.seed, "volumes");
  Rng var_rng(derive_seed(cfg.seed, "variation"));

  std::vector<Individual> pop;
  pop.reserve(cfg.n_pop);
  for (int i = 0; i < cfg.n_pop; ++i)
    pop.push_back(random_individual(dim, cfg.bounds.p_min, cfg.bounds.p_max,
                                    box, derive_seed(cfg.seed, "init", i)));
  evaluate_population(pop, train, cfg.objective_set, box, geo, 0);

  EvolveResult result;
  result.history.reserve(cfg.generations + 1);
  result.history.push_back(make_stats(0, pop));

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    const ParetoRanking ranking = non_dominated_sort(cached_objectives(pop));

    std::vector<Individual> offspring;
    offspring.reserve(cfg.n_off);
    while (static_cast<int>(offspring.size()) < cfg.n_off) {
      const std::size_t a = tournament(ranking, pop.size(), var_rng);
      const std::size_t b = tournament(ranking, pop.size(), var_rng);
      Individual c1, c2;
      if (var_rng.uniform() < cfg.mating_prob) {
        std::tie(c1, c2) =
            crossover_voronoi(pop[a], pop[b], cfg.bounds, var_rng);
      } else {
        c1.sites = pop[a].sites;
        c2.sites = pop[b].sites;
      }
      offspring.push_back(
          mutate_voronoi(c1, cfg.mutation, cfg.bounds, box, var_rng));
      if (static_cast<int>(offspring.size()) < cfg.n_off)
        offspring.push_back(
            mutate_voronoi(c2, cfg.mutation, cfg.bounds, box, var_rng));
    }
    evaluate_population(offspring, train, cfg.objective_set, box, geo,
                        static_cast<std::uint64_t>(gen));

    std::vector<Individual> union_pop = std::move(pop);
    union_pop.insert(union_pop.end(),
                     std::make_move_iterator(offspring.begin()),
                     std::make_move_iterator(offspring.end()));
    pop = nsga2_select(union_pop, cfg.n_pop);

    result.history.push_back(make_stats(gen, pop));
  }

  result.committee = committee_select(pop, cfg.rho);
  result.population = std::move(pop);
  return result;
}

Committee committee_select(const std::vector<Individual>& pop, double rho) {
  if (pop.empty()) throw std::invalid_argument("committee_select: empty population");
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must be in (0,1]");
  for (const auto& ind : pop)
    if (!ind.eval)
      throw std::invalid_argument("committee_select: individual lacks accuracy");

  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pop[a].eval->accuracy != pop[b].eval->accuracy)
      return pop[a].eval->accuracy > pop[b].eval->accuracy;
    return a < b;
  });

  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::lround(rho * static_cast<double>(pop.size()))));
  Committee c;
  c.members.reserve(k);
  for (std::size_t i = 0; i < k && i < order.size(); ++i)
    c.members.push_back(pop[order[i]]);
  return c;
}

Label committee_classify(const Committee& committee,
                         std::span<const double> point, Label tie_break) {
  if (committee.members.empty())
    throw std::invalid_argument("committee_classify: empty committee");
  std::size_t anomaly_votes = 0;
  for (const auto& member : committee.members)
    if (classify(member, point) == Label::Anomaly) ++anomaly_votes;
  const std::size_t normal_votes = committee.members.size() - anomaly_votes;
  if (anomaly_votes == normal_votes) return tie_break;
  return anomaly_votes > normal_votes ? Label::Anomaly : Label::Normal;
}

void write_history_csv(const std::vector<GenerationStats>& history,
                       const ObjectiveSet& set, std::ostream& out) {
  out << "gen";
  for (Objective o : set.ids)
    out << ",best_" << to_string(o) << ",median_" << to_string(o);
  out << ",front0_size\n";
  for (const auto& st : history) {
    out << st.gen;
    for (std::size_t k = 0; k < st.best.size(); ++k)
      out << ',' << st.best[k] << ',' << st.median[k];
    out << ',' << st.front0_size << '\n';
  }
}

}  // namespace voreal

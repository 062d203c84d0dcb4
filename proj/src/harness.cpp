#include "voreal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "voreal/baselines.hpp"
#include "voreal/objectives.hpp"

namespace voreal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_key(const std::string& ds, const std::string& algo, int run) {
  return ds + '\x1f' + algo + '\x1f' + std::to_string(run);
}

std::uint64_t data_seed(const ExperimentConfig& cfg, const DatasetEntry& ds,
                        int run) {
  return fnv1a64("data|base=" + std::to_string(cfg.base_seed) +
                 "|ds=" + ds.name + "|gseed=" + std::to_string(ds.spec.seed) +
                 "|run=" + std::to_string(run));
}

std::uint64_t cell_seed(const ExperimentConfig& cfg, const DatasetEntry& ds,
                        const AlgorithmConfig& algo, int run) {
  return fnv1a64("cell|base=" + std::to_string(cfg.base_seed) +
                 "|ds=" + ds.name + "|algo=" + algo.name +
                 "|run=" + std::to_string(run));
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      c = '_';
  return out;
}

double record_metric(const RunRecord& r, const std::string& metric) {
  if (metric == "accuracy") return r.accuracy;
  if (metric == "recall") return r.recall;
  if (metric == "specificity") return r.specificity;
  throw std::invalid_argument("unknown metric: " + metric);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

MutationParams mutation_from_json(const json& j) {
  MutationParams p;
  p.p_site = j.value("p_site", p.p_site);
  p.p_feature = j.value("p_feature", p.p_feature);
  p.p_label = j.value("p_label", p.p_label);
  p.p_add = j.value("p_add", p.p_add);
  p.p_remove = j.value("p_remove", p.p_remove);
  p.eta = j.value("eta", p.eta);
  return p;
}

json mutation_to_json(const MutationParams& p) {
  return {{"p_site", p.p_site},   {"p_feature", p.p_feature},
          {"p_label", p.p_label}, {"p_add", p.p_add},
          {"p_remove", p.p_remove}, {"eta", p.eta}};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw std::invalid_argument("config: no datasets");
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("config: alpha must be in (0,1)");
  if (output_dir.empty()) throw std::invalid_argument("config: output_dir missing");
  std::set<std::string> names;
  for (const auto& d : datasets)
    if (!names.insert(d.name).second)
      throw std::invalid_argument("config: duplicate dataset name " + d.name);
  names.clear();
  for (const auto& a : algorithms)
    if (!names.insert(a.name).second)
      throw std::invalid_argument("config: duplicate algorithm name " + a.name);
}

GeneratorSpec generator_spec_from_json(const json& j) {
  GeneratorSpec spec;
  spec.kind = generator_kind_from_string(j.at("kind").get<std::string>());
  spec.n_points = j.value("n_points", spec.n_points);
  spec.noise = j.value("noise", spec.noise);
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

AlgorithmConfig algorithm_from_json(const json& j) {
  AlgorithmConfig a;
  a.name = j.value("name", std::string("algorithm"));
  a.type = j.value("type", a.type);
  a.objectives = j.value("objectives", a.objectives);
  a.pop_size = j.value("pop_size", a.pop_size);
  a.n_off = j.value("n_off", a.n_off);
  a.generations = j.value("generations", a.generations);
  a.mating_prob = j.value("mating_prob", a.mating_prob);
  if (j.contains("mutation")) a.mutation = mutation_from_json(j["mutation"]);
  a.bounds.p_min = j.value("p_min", a.bounds.p_min);
  a.bounds.p_max = j.value("p_max", a.bounds.p_max);
  a.rho = j.value("rho", a.rho);
  a.mc_samples = j.value("mc_samples", a.mc_samples);
  a.self_radius_frac = j.value("self_radius_frac", a.self_radius_frac);
  a.target_coverage = j.value("target_coverage", a.target_coverage);
  a.max_detectors = j.value("max_detectors", a.max_detectors);
  return a;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  for (const auto& jd : j.at("datasets")) {
    DatasetEntry e;
    e.spec = generator_spec_from_json(jd);
    e.name = jd.value("name", std::string(to_string(e.spec.kind)));
    cfg.datasets.push_back(std::move(e));
  }
  for (const auto& ja : j.at("algorithms")) {
    AlgorithmConfig a = algorithm_from_json(ja);
    if (!ja.contains("name"))
      throw std::invalid_argument("algorithm entry needs a name");
    cfg.algorithms.push_back(std::move(a));
  }
  cfg.runs = j.value("runs", cfg.runs);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.output_dir = j.value("output_dir", std::string());
  cfg.test_anomalies = j.value("test_anomalies", cfg.test_anomalies);
  cfg.delta_frac = j.value("delta_frac", cfg.delta_frac);
  return cfg;
}

json ExperimentConfig::to_json() const {
  json jds = json::array();
  for (const auto& d : datasets)
    jds.push_back({{"name", d.name},
                   {"kind", to_string(d.spec.kind)},
                   {"n_points", d.spec.n_points},
                   {"noise", d.spec.noise},
                   {"seed", d.spec.seed}});
  json jas = json::array();
  for (const auto& a : algorithms) {
    json ja = {{"name", a.name}, {"type", a.type}};
    if (a.type == "voreal") {
      ja["objectives"] = a.objectives;
      ja["pop_size"] = a.pop_size;
      ja["n_off"] = a.n_off;
      ja["generations"] = a.generations;
      ja["mating_prob"] = a.mating_prob;
      ja["mutation"] = mutation_to_json(a.mutation);
      ja["p_min"] = a.bounds.p_min;
      ja["p_max"] = a.bounds.p_max;
      ja["rho"] = a.rho;
      ja["mc_samples"] = a.mc_samples;
    } else if (a.type == "nsa") {
      ja["self_radius_frac"] = a.self_radius_frac;
      ja["target_coverage"] = a.target_coverage;
      ja["max_detectors"] = a.max_detectors;
    }
    jas.push_back(std::move(ja));
  }
  return {{"datasets", jds},       {"algorithms", jas},
          {"runs", runs},          {"base_seed", base_seed},
          {"alpha", alpha},        {"output_dir", output_dir.string()},
          {"test_anomalies", test_anomalies},
          {"delta_frac", delta_frac}};
}

AnyModel train_algorithm(const AlgorithmConfig& algo, const Dataset& train,
                         std::uint64_t seed) {
  if (algo.type == "voreal") {
    EvolutionConfig cfg;
    cfg.n_pop = algo.pop_size;
    cfg.n_off = algo.n_off > 0 ? algo.n_off : algo.pop_size;
    cfg.generations = algo.generations;
    cfg.mating_prob = algo.mating_prob;
    cfg.mutation = algo.mutation;
    cfg.bounds = algo.bounds;
    cfg.objective_set = ObjectiveSet::parse(algo.objectives);
    cfg.rho = algo.rho;
    cfg.seed = seed;
    cfg.geometry.n_samples = algo.mc_samples;
    const BoundingBox box = BoundingBox::around(train.points, 0.10);
    return {evolve(train, cfg, box).committee};
  }
  if (algo.type == "nsa") {
    NsaParams params;
    const BoundingBox box = BoundingBox::around(train.points, 0.10);
    params.self_radius = algo.self_radius_frac * box.diagonal();
    params.target_coverage = algo.target_coverage;
    params.max_detectors = algo.max_detectors;
    return {nsa_train(train, params, seed)};
  }
  if (algo.type == "naive_bayes") return {nb_train(train)};
  throw std::invalid_argument("unknown algorithm type: " + algo.type);
}

std::vector<RunRecord> load_records_csv(const fs::path& path) {
  std::vector<RunRecord> records;
  std::ifstream in(path);
  if (!in) return records;
  std::string line;
  if (!std::getline(in, line)) return records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() != 8) continue;  // tolerate a truncated trailing line
    RunRecord r;
    r.dataset = parts[0];
    r.algorithm = parts[1];
    try {
      r.run = std::stoi(parts[2]);
      r.seed = std::stoull(parts[3]);
      r.status = parts[7];
      if (r.status == "ok") {
        r.accuracy = std::stod(parts[4]);
        r.recall = std::stod(parts[5]);
        r.specificity = std::stod(parts[6]);
      }
    } catch (const std::exception&) {
      continue;
    }
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

std::string record_row(const RunRecord& r) {
  std::string row = r.dataset + ',' + r.algorithm + ',' +
                    std::to_string(r.run) + ',' + std::to_string(r.seed) + ',';
  if (r.status == "ok") {
    row += fmt_double(r.accuracy) + ',' + fmt_double(r.recall) + ',' +
           fmt_double(r.specificity);
  } else {
    row += ",,";
  }
  row += ',' + r.status;
  return row;
}

constexpr const char* kRecordsHeader =
    "dataset,algorithm,run,seed,accuracy,recall,specificity,status";

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records,
                       const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kRecordsHeader << '\n';
  for (const auto& r : records) out << record_row(r) << '\n';
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  fs::create_directories(cfg.output_dir / "models");
  fs::create_directories(cfg.output_dir / "data");

  // Canonical cell order: sorted dataset name, sorted algorithm name, run.
  std::vector<DatasetEntry> datasets = cfg.datasets;
  std::sort(datasets.begin(), datasets.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::vector<AlgorithmConfig> algorithms = cfg.algorithms;
  std::sort(algorithms.begin(), algorithms.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });

  const fs::path records_path = cfg.output_dir / "records.csv";
  std::vector<RunRecord> records = load_records_csv(records_path);
  std::set<std::string> done;
  for (const auto& r : records)
    done.insert(cell_key(r.dataset, r.algorithm, r.run));
  // Rewrite so a truncated trailing line from an interrupted run is dropped.
  write_records_csv(records, records_path);

  std::ofstream out(records_path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + records_path.string());
  const fs::path timings_path = cfg.output_dir / "timings.csv";
  const bool timings_fresh =
      !fs::exists(timings_path) || fs::file_size(timings_path) == 0;
  std::ofstream timings(timings_path, std::ios::app);
  if (timings_fresh) timings << "dataset,algorithm,run,wall_time_s\n";

  for (const auto& ds : datasets) {
    for (const auto& algo : algorithms) {
      for (int run = 0; run < cfg.runs; ++run) {
        if (done.count(cell_key(ds.name, algo.name, run))) continue;

        RunRecord rec;
        rec.dataset = ds.name;
        rec.algorithm = algo.name;
        rec.run = run;
        rec.seed = cell_seed(cfg, ds, algo, run);

        const auto t0 = std::chrono::steady_clock::now();
        try {
          const std::uint64_t dseed = data_seed(cfg, ds, run);
          GeneratorSpec train_spec = ds.spec;
          train_spec.seed = derive_seed(dseed, "train");
          const Dataset train = generate(train_spec);
          const BoundingBox box = BoundingBox::around(train.points, 0.10);
          const Dataset test = inject_test_anomalies(
              train, cfg.test_anomalies, cfg.delta_frac * box.diagonal(),
              derive_seed(dseed, "test"));

          const fs::path train_path =
              cfg.output_dir / "data" /
              (sanitize(ds.name) + "__run" + std::to_string(run) + "__train.csv");
          const fs::path test_path =
              cfg.output_dir / "data" /
              (sanitize(ds.name) + "__run" + std::to_string(run) + "__test.csv");
          if (!fs::exists(train_path)) save_csv(train, train_path);
          if (!fs::exists(test_path)) save_csv(test, test_path);

          const AnyModel model = train_algorithm(algo, train, rec.seed);
          save_model(model, cfg.output_dir / "models" /
                                (sanitize(ds.name) + "__" + sanitize(algo.name) +
                                 "__run" + std::to_string(run) + ".json"));

          ConfusionCounts counts;
          for (std::size_t i = 0; i < test.size(); ++i) {
            const bool predicted =
                model.classify(test.points[i]) == Label::Anomaly;
            const bool actual = test.labels[i] == Label::Anomaly;
            if (predicted)
              actual ? ++counts.tp : ++counts.fp;
            else
              actual ? ++counts.fn : ++counts.tn;
          }
          rec.accuracy = metric(counts, Objective::Accuracy);
          rec.recall = metric(counts, Objective::Recall);
          rec.specificity = metric(counts, Objective::Specificity);
        } catch (const std::exception& e) {
          std::string what = e.what();
          for (char& c : what)
            if (c == ',' || c == '\n') c = ';';
          rec.status = "error:" + what;
        }
        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();

        out << record_row(rec) << '\n';
        out.flush();
        timings << rec.dataset << ',' << rec.algorithm << ',' << rec.run << ','
                << rec.wall_time_s << '\n';
        records.push_back(std::move(rec));
      }
    }
  }

  // Resumed records were loaded first; restore canonical order.
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    return a.run < b.run;
  });
  return records;
}

std::map<std::string, SignMatrix> compare(const std::vector<RunRecord>& records,
                                          const std::string& metric,
                                          double alpha) {
  // dataset -> algorithm -> run-ordered values
  std::map<std::string, std::map<std::string, std::vector<std::pair<int, double>>>>
      grouped;
  for (const auto& r : records) {
    if (r.status != "ok") continue;
    grouped[r.dataset][r.algorithm].emplace_back(r.run,
                                                 record_metric(r, metric));
  }

  std::map<std::string, SignMatrix> result;
  for (auto& [dataset, by_algo] : grouped) {
    if (by_algo.size() < 2)
      throw std::invalid_argument("compare: need >= 2 algorithms on " + dataset);

    SignMatrix mat;
    std::vector<std::vector<double>> samples;
    std::size_t count = 0;
    for (auto& [algo, vals] : by_algo) {
      std::sort(vals.begin(), vals.end());
      std::vector<double> v;
      v.reserve(vals.size());
      for (auto& [run, value] : vals) v.push_back(value);
      if (mat.algorithms.empty())
        count = v.size();
      else if (v.size() != count)
        throw std::invalid_argument("compare: unequal run counts on " + dataset);
      mat.algorithms.push_back(algo);
      samples.push_back(std::move(v));
    }

    const std::size_t k = mat.algorithms.size();
    mat.cells.assign(k * k, '~');

    const FriedmanResult friedman = friedman_test(samples);
    if (friedman.p_value < alpha) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      std::vector<double> pvals;
      std::vector<int> dirs;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
          const RankSumResult rs = wilcoxon_rank_sum(samples[i], samples[j]);
          pairs.emplace_back(i, j);
          pvals.push_back(rs.p_value);
          dirs.push_back(rs.direction);
        }
      const auto adjusted = holm_adjust(pvals);
      for (std::size_t t = 0; t < pairs.size(); ++t) {
        if (adjusted[t] >= alpha || dirs[t] == 0) continue;
        const auto [i, j] = pairs[t];
        mat.cells[i * k + j] = dirs[t] > 0 ? '+' : '-';
        mat.cells[j * k + i] = dirs[t] > 0 ? '-' : '+';
      }
    }
    result.emplace(dataset, std::move(mat));
  }
  return result;
}

void export_results(
    const std::vector<RunRecord>& records,
    const std::map<std::string, std::map<std::string, SignMatrix>>&
        matrices_by_metric,
    const fs::path& output_dir) {
  fs::create_directories(output_dir);
  write_records_csv(records, output_dir / "records.csv");

  // summary.json: box-plot data per dataset/algorithm/metric.
  std::map<std::string, std::map<std::string, std::vector<const RunRecord*>>>
      grouped;
  for (const auto& r : records)
    if (r.status == "ok") grouped[r.dataset][r.algorithm].push_back(&r);

  json summary = json::object();
  for (const auto& [dataset, by_algo] : grouped) {
    json jds = json::object();
    for (const auto& [algo, recs] : by_algo) {
      json jalgo = json::object();
      for (const char* metric_name : {"accuracy", "recall", "specificity"}) {
        std::vector<double> vals;
        vals.reserve(recs.size());
        for (const RunRecord* r : recs)
          vals.push_back(record_metric(*r, metric_name));
        jalgo[metric_name] = {{"median", quantile(vals, 0.5)},
                              {"q1", quantile(vals, 0.25)},
                              {"q3", quantile(vals, 0.75)},
                              {"runs", vals.size()}};
      }
      jds[algo] = std::move(jalgo);
    }
    summary[dataset] = std::move(jds);
  }
  {
    std::ofstream out(output_dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << summary.dump(2) << '\n';
  }

  // stats_<metric>.csv: one row per (dataset, row-algorithm).
  for (const auto& [metric_name, by_dataset] : matrices_by_metric) {
    std::ofstream out(output_dir / ("stats_" + metric_name + ".csv"));
    if (!out) throw std::runtime_error("cannot write stats csv");
    std::vector<std::string> algos;
    for (const auto& [dataset, mat] : by_dataset) {
      algos = mat.algorithms;
      break;
    }
    out << "dataset,algorithm";
    for (const auto& a : algos) out << ',' << a;
    out << '\n';
    for (const auto& [dataset, mat] : by_dataset) {
      for (std::size_t i = 0; i < mat.algorithms.size(); ++i) {
        out << dataset << ',' << mat.algorithms[i];
        for (std::size_t j = 0; j < mat.algorithms.size(); ++j)
          out << ',' << mat.at(i, j);
        out << '\n';
      }
    }
  }

  // wins.csv: '+' counts aggregated by metric and by problem.
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>>
      wins;  // (scope kind, key) -> algorithm -> count
  for (const auto& [metric_name, by_dataset] : matrices_by_metric) {
    for (const auto& [dataset, mat] : by_dataset) {
      for (std::size_t i = 0; i < mat.algorithms.size(); ++i) {
        int count = 0;
        for (std::size_t j = 0; j < mat.algorithms.size(); ++j)
          if (mat.at(i, j) == '+') ++count;
        wins[{"metric", metric_name}][mat.algorithms[i]] += count;
        wins[{"problem", dataset}][mat.algorithms[i]] += count;
      }
    }
  }
  {
    std::ofstream out(output_dir / "wins.csv");
    if (!out) throw std::runtime_error("cannot write wins.csv");
    out << "scope,key,algorithm,wins\n";
    for (const auto& [scope_key, by_algo] : wins)
      for (const auto& [algo, count] : by_algo)
        out << scope_key.first << ',' << scope_key.second << ',' << algo << ','
            << count << '\n';
  }
}

}  // namespace voreal

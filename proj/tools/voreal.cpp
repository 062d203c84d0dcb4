// Command line front end: dataset generation, training, classification,
// benchmark batches and significance matrices.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "voreal/harness.hpp"
#include "voreal/objectives.hpp"

namespace {

using namespace voreal;
using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  return j;
}

int cmd_gen_data(const std::string& kind, int n, double noise,
                 std::uint64_t seed, const std::string& out,
                 int inject, double delta_frac) {
  GeneratorSpec spec;
  spec.kind = generator_kind_from_string(kind);
  spec.n_points = n;
  spec.noise = noise;
  spec.seed = seed;
  Dataset ds = generate(spec);
  if (inject > 0) {
    const BoundingBox box = BoundingBox::around(ds.points, 0.10);
    InjectionReport report;
    ds = inject_test_anomalies(ds, inject, delta_frac * box.diagonal(),
                               derive_seed(seed, "cli-inject"), &report);
    if (report.shrink_count > 0)
      std::cerr << "inject: delta shrank " << report.shrink_count
                << " times, final " << report.final_delta << "\n";
  }
  save_csv(ds, out);
  std::cerr << "wrote " << ds.size() << " points to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out,
              const std::string& history_path) {
  const json j = read_json_file(config_path);

  const AlgorithmConfig algo = algorithm_from_json(j.at("algorithm"));

  Dataset train;
  if (j.contains("data")) {
    train = load_csv(j.at("data").get<std::string>());
  } else if (j.contains("dataset")) {
    train = generate(generator_spec_from_json(j.at("dataset")));
  } else {
    throw std::runtime_error("train config needs \"data\" or \"dataset\"");
  }

  const std::uint64_t seed = j.value("seed", std::uint64_t{0});

  if (!history_path.empty() && algo.type == "voreal") {
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
    const EvolveResult result = evolve(train, cfg, box);
    std::ofstream hist(history_path);
    if (!hist) throw std::runtime_error("cannot write " + history_path);
    write_history_csv(result.history, cfg.objective_set, hist);
    save_model({result.committee}, out);
  } else {
    save_model(train_algorithm(algo, train, seed), out);
  }
  std::cerr << "wrote model to " << out << "\n";
  return 0;
}

int cmd_classify(const std::string& model_path, const std::string& data_path,
                 const std::string& out_path) {
  const AnyModel model = load_model(model_path);
  const Dataset data = load_csv(data_path);

  Dataset predicted = data;
  ConfusionCounts counts;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Label lab = model.classify(data.points[i]);
    const bool actual = data.labels[i] == Label::Anomaly;
    if (lab == Label::Anomaly)
      actual ? ++counts.tp : ++counts.fp;
    else
      actual ? ++counts.fn : ++counts.tn;
    predicted.labels[i] = lab;
  }

  if (out_path.empty() || out_path == "-") {
    for (int d = 0; d < predicted.dim; ++d) std::cout << 'x' << d << ',';
    std::cout << "label\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      for (int d = 0; d < predicted.dim; ++d)
        std::cout << predicted.points[i][d] << ',';
      std::cout << to_string(predicted.labels[i]) << '\n';
    }
  } else {
    save_csv(predicted, out_path);
  }

  std::cerr << "accuracy=" << metric(counts, Objective::Accuracy)
            << " recall=" << metric(counts, Objective::Recall)
            << " specificity=" << metric(counts, Objective::Specificity)
            << " (against labels in " << data_path << ")\n";
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = ExperimentConfig::from_json(read_json_file(config_path));
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto records = run_experiment(cfg);

  std::map<std::string, std::map<std::string, SignMatrix>> matrices;
  for (const char* metric_name : {"accuracy", "recall", "specificity"}) {
    try {
      matrices[metric_name] = compare(records, metric_name, cfg.alpha);
    } catch (const std::exception& e) {
      std::cerr << "stats for " << metric_name << " skipped: " << e.what()
                << "\n";
    }
  }
  export_results(records, matrices, cfg.output_dir);
  std::cerr << records.size() << " records in " << cfg.output_dir.string()
            << "\n";
  return 0;
}

int cmd_stats(const std::string& records_path, const std::string& metric_name,
              double alpha, const std::string& out_path) {
  const auto records = load_records_csv(records_path);
  if (records.empty()) throw std::runtime_error("no records in " + records_path);
  const auto matrices = compare(records, metric_name, alpha);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    os = &file;
  }
  for (const auto& [dataset, mat] : matrices) {
    *os << "dataset,algorithm";
    for (const auto& a : mat.algorithms) *os << ',' << a;
    *os << '\n';
    for (std::size_t i = 0; i < mat.algorithms.size(); ++i) {
      *os << dataset << ',' << mat.algorithms[i];
      for (std::size_t j = 0; j < mat.algorithms.size(); ++j)
        *os << ',' << mat.at(i, j);
      *os << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VorEAl: Voronoi-diagram evolutionary anomaly detection"};
  app.require_subcommand(1);

  std::string kind, out, config_path, model_path, data_path, history_path;
  std::string records_path, metric_name = "accuracy";
  int n_points = 400, inject = 0;
  double noise = 0.2, delta_frac = 0.05, alpha = 0.05;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("gen-data", "generate a benchmark dataset");
  gen->add_option("kind", kind, "generator kind")->required();
  gen->add_option("-n,--n-points", n_points, "points to generate");
  gen->add_option("--noise", noise, "generator noise scale");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("-o,--out", out, "output CSV")->required();
  gen->add_option("--inject", inject, "also inject empty-region anomalies");
  gen->add_option("--delta", delta_frac, "injection distance, box-diagonal fraction");

  auto* train = app.add_subcommand("train", "train a detector");
  train->add_option("--config", config_path, "train config JSON")->required();
  train->add_option("--out", out, "output model JSON")->required();
  train->add_option("--history", history_path, "per-generation history CSV");

  auto* classify = app.add_subcommand("classify", "classify a CSV with a model");
  classify->add_option("--model", model_path, "model JSON")->required();
  classify->add_option("--data", data_path, "input CSV")->required();
  classify->add_option("-o,--out", out, "output CSV (default stdout)");

  auto* bench = app.add_subcommand("bench", "run an experiment batch");
  bench->add_option("--config", config_path, "experiment config JSON")->required();
  bench->add_option("--out", out, "output directory (overrides config)");

  auto* stats = app.add_subcommand("stats", "significance matrix from records");
  stats->add_option("--records", records_path, "records.csv")->required();
  stats->add_option("--metric", metric_name, "accuracy|recall|specificity");
  stats->add_option("--alpha", alpha, "significance level");
  stats->add_option("-o,--out", out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_data(kind, n_points, noise, seed, out, inject, delta_frac);
    if (train->parsed()) return cmd_train(config_path, out, history_path);
    if (classify->parsed()) return cmd_classify(model_path, data_path, out);
    if (bench->parsed()) return cmd_bench(config_path, out);
    if (stats->parsed())
      return cmd_stats(records_path, metric_name, alpha, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

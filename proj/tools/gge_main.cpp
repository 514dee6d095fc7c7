// gge - graph encoder embedding toolkit.
//
// Subcommands:
//   embed      embed a graph (or feature matrix via a pairwise kernel)
//   cv         label-masked k-fold cross-validation of encoder + classifier
//   simulate   regenerate the benchmark error-vs-n curves / embedding clouds
//   theory     Monte Carlo checks of the embedding's asymptotics
//
// Exit codes: 0 success, 1 usage error, 2 data/runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gge/gge.hpp"

using nlohmann::json;

namespace {

struct InputOptions {
  std::string graph_path;
  std::string features_path;
  std::string labels_path;
  std::string graph_format = "auto";  // auto | dense-csv | edge-tsv
  std::string kernel;
  int classes = 0;
  bool no_normalize = false;
  bool zero_diagonal = false;
};

void add_input_flags(CLI::App* cmd, InputOptions& in, bool with_encode_opts) {
  auto* graph = cmd->add_option("--graph", in.graph_path,
                                "graph file (dense-csv or edge-tsv)");
  auto* features =
      cmd->add_option("--features", in.features_path, "feature matrix CSV");
  graph->excludes(features);
  features->excludes(graph);
  cmd->add_option("--labels", in.labels_path, "labels CSV (vertex,label)")
      ->required();
  cmd->add_option("--graph-format", in.graph_format,
                  "graph file format: auto, dense-csv, edge-tsv")
      ->check(CLI::IsMember({"auto", "dense-csv", "edge-tsv"}));
  cmd->add_option("--kernel", in.kernel,
                  "pairwise kernel (with --features; default dk). With "
                  "--graph, only 'dk' is accepted and transforms the loaded "
                  "distance matrix");
  cmd->add_option("--classes", in.classes,
                  "class count override (allows trailing empty classes)");
  if (with_encode_opts) {
    cmd->add_flag("--no-normalize", in.no_normalize,
                  "skip the unit-norm row normalization");
    cmd->add_flag("--zero-diagonal", in.zero_diagonal,
                  "treat the diagonal as zero before encoding");
  }
}

gge::GraphFormat resolve_format(const InputOptions& in) {
  if (in.graph_format == "dense-csv") return gge::GraphFormat::dense_csv;
  if (in.graph_format == "edge-tsv") return gge::GraphFormat::edge_tsv;
  const auto ext = std::filesystem::path(in.graph_path).extension();
  return ext == ".tsv" ? gge::GraphFormat::edge_tsv
                       : gge::GraphFormat::dense_csv;
}

gge::GeneralGraph load_graph(const InputOptions& in) {
  if (!in.features_path.empty()) {
    const gge::FeatureMatrix features = gge::read_matrix_csv(in.features_path);
    const gge::KernelSpec spec =
        gge::parse_kernel_spec(in.kernel.empty() ? "dk" : in.kernel);
    return gge::pairwise_graph(features, spec);
  }
  if (in.graph_path.empty())
    throw CLI::ValidationError("input", "one of --graph/--features is required");
  gge::GeneralGraph graph = gge::read_graph(in.graph_path, resolve_format(in));
  if (!in.kernel.empty()) {
    const gge::KernelSpec spec = gge::parse_kernel_spec(in.kernel);
    if (spec.kind != gge::KernelKind::distance_to_kernel)
      throw CLI::ValidationError(
          "--kernel",
          "with --graph, only the dk transform applies; other kernels need "
          "--features");
    graph = gge::distance_to_kernel_graph(gge::densify(graph));
  }
  return graph;
}

gge::EncodeOptions encode_options(const InputOptions& in) {
  return {!in.no_normalize, in.zero_diagonal};
}

json config_json(const InputOptions& in) {
  json cfg;
  if (!in.graph_path.empty()) cfg["graph"] = in.graph_path;
  if (!in.features_path.empty()) cfg["features"] = in.features_path;
  cfg["labels"] = in.labels_path;
  if (!in.kernel.empty())
    cfg["kernel"] = gge::format_kernel_spec(gge::parse_kernel_spec(in.kernel));
  else if (!in.features_path.empty())
    cfg["kernel"] = "dk";
  cfg["normalize"] = !in.no_normalize;
  cfg["zero_diagonal"] = in.zero_diagonal;
  if (in.classes > 0) cfg["classes"] = in.classes;
  return cfg;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << doc.dump(2) << '\n';
}

json matrix_json(const gge::Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------- embed ----

int run_embed(const InputOptions& in, const std::string& out_path) {
  const gge::GeneralGraph graph = load_graph(in);
  const gge::LabelVector labels = gge::read_labels(in.labels_path, in.classes);
  const gge::EncoderEmbedding emb =
      gge::encode(graph, labels, encode_options(in));
  gge::write_matrix_csv(out_path, emb.values);
  return 0;
}

// ------------------------------------------------------------------- cv ----

int run_cv(const InputOptions& in, const std::string& classifier_name, int k,
           int folds, int reps, std::uint64_t seed, bool no_stratify,
           const std::string& out_path) {
  const gge::GeneralGraph graph = load_graph(in);
  const gge::LabelVector labels = gge::read_labels(in.labels_path, in.classes);
  const gge::ClassifierSpec classifier =
      classifier_name == "lda" ? gge::ClassifierSpec::lda()
                               : gge::ClassifierSpec::knn(k);
  const gge::RepeatResult result =
      gge::repeat_cv(graph, labels, folds, reps, seed, classifier,
                     encode_options(in), !no_stratify);

  json doc;
  doc["version"] = std::string(gge::kVersion);
  doc["config"] = config_json(in);
  doc["config"]["classifier"] = classifier_name;
  if (classifier_name == "knn") doc["config"]["k"] = k;
  doc["config"]["folds"] = folds;
  doc["config"]["reps"] = reps;
  doc["config"]["seed"] = seed;
  doc["config"]["stratified"] = !no_stratify;
  doc["mean_error"] = result.mean_error;
  doc["std_error"] = result.std_error;
  doc["per_rep_error"] = result.per_rep;
  write_json(out_path, doc);
  std::cout << "mean_error=" << result.mean_error
            << " std_error=" << result.std_error << '\n';
  return 0;
}

// ------------------------------------------------------------- simulate ----

struct CurveRow {
  int n;
  double mean;
  double sd;
  std::string method;
};

void write_curve(const std::string& path, const std::vector<CurveRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "n,mean_error,std,method\n";
  for (const auto& r : rows)
    out << r.n << ',' << gge::detail::fmt_double(r.mean) << ','
        << gge::detail::fmt_double(r.sd) << ',' << r.method << '\n';
}

void append_cloud(std::ofstream& out, const std::string& method,
                  const gge::Matrix& z, const gge::LabelVector& labels) {
  for (int i = 0; i < z.rows; ++i) {
    out << method << ',' << labels[i];
    for (int c = 0; c < z.cols; ++c)
      out << ',' << gge::detail::fmt_double(z(i, c));
    out << '\n';
  }
}

// Mean/sd of per-replicate 5-fold errors for one generated setting.
template <typename MakeInstance>
CurveRow curve_point(int n, int reps, std::uint64_t seed,
                     std::uint64_t rep_offset, const std::string& method,
                     const gge::ClassifierSpec& classifier, bool on_features,
                     MakeInstance&& make) {
  std::vector<double> errors(reps);
  gge::run_replicates(reps, [&](int r) {
    const std::uint64_t rep = rep_offset + static_cast<std::uint64_t>(r);
    auto [graph, features, labels] = make(rep);
    const gge::FoldPlan plan =
        gge::kfold_split(labels, 5, seed + rep, true);
    if (on_features)
      errors[r] =
          gge::cv_error_points(features, labels, plan, classifier).mean_error;
    else
      errors[r] = gge::cv_error(graph, labels, plan, classifier, {true, false})
                      .mean_error;
  });
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(reps);
  double sq = 0.0;
  for (double e : errors) sq += (e - mean) * (e - mean);
  return {n, mean, std::sqrt(sq / static_cast<double>(reps)), method};
}

int run_simulate(const std::string& study, int nmin, int nmax, int step,
                 int reps, std::uint64_t seed, const std::string& out_path,
                 const std::string& cloud_path, int cloud_n) {
  std::vector<int> sizes;
  for (int n = nmin; n <= nmax; n += step) sizes.push_back(n);
  if (sizes.empty()) throw std::runtime_error("simulate: empty size range");

  std::vector<CurveRow> rows;
  const gge::KernelSpec dk = gge::parse_kernel_spec("dk");

  if (study == "fig1-gauss") {
    const gge::GaussianMixSpec mix;  // p=100, K=3, N(3,1) signal, N(1,0.5) noise
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const int n = sizes[s];
      const std::uint64_t off = s * static_cast<std::uint64_t>(reps);
      auto gen = [&](std::uint64_t rep) {
        auto [x, labels] = gge::gen_gaussian_mixture(n, mix, seed, rep);
        gge::GeneralGraph graph = gge::pairwise_graph(x, dk);
        return std::tuple<gge::GeneralGraph, gge::FeatureMatrix,
                          gge::LabelVector>(std::move(graph), std::move(x),
                                            std::move(labels));
      };
      rows.push_back(curve_point(n, reps, seed, off, "enc-lda",
                                 gge::ClassifierSpec::lda(), false, gen));
      rows.push_back(curve_point(n, reps, seed, off, "enc-5nn",
                                 gge::ClassifierSpec::knn(5), false, gen));
      rows.push_back(curve_point(n, reps, seed, off, "raw-lda",
                                 gge::ClassifierSpec::lda(), true, gen));
      rows.push_back(curve_point(n, reps, seed, off, "raw-5nn",
                                 gge::ClassifierSpec::knn(5), true, gen));
    }
    write_curve(out_path, rows);
    if (!cloud_path.empty()) {
      std::ofstream out(cloud_path);
      if (!out) throw std::runtime_error(cloud_path + ": cannot open");
      out << "method,label,z1,z2,z3\n";
      auto [x, labels] = gge::gen_gaussian_mixture(cloud_n, mix, seed, 999999);
      const auto emb =
          gge::encode(gge::pairwise_graph(x, dk), labels, {true, false});
      append_cloud(out, "enc-dk", emb.values, labels);
    }
    return 0;
  }

  if (study == "fig1-wsbm") {
    const gge::SbmSpec wsbm = gge::default_sbm_spec(10.0);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const int n = sizes[s];
      const std::uint64_t off = s * static_cast<std::uint64_t>(reps);
      auto gen = [&](std::uint64_t rep) {
        auto [graph, labels] = gge::gen_weighted_sbm(n, wsbm, seed, rep);
        return std::tuple<gge::GeneralGraph, gge::FeatureMatrix,
                          gge::LabelVector>(std::move(graph), gge::Matrix(),
                                            std::move(labels));
      };
      rows.push_back(curve_point(n, reps, seed, off, "enc-lda",
                                 gge::ClassifierSpec::lda(), false, gen));
      rows.push_back(curve_point(n, reps, seed, off, "enc-5nn",
                                 gge::ClassifierSpec::knn(5), false, gen));
    }
    write_curve(out_path, rows);
    if (!cloud_path.empty()) {
      std::ofstream out(cloud_path);
      if (!out) throw std::runtime_error(cloud_path + ": cannot open");
      out << "method,label,z1,z2,z3\n";
      auto [graph, labels] =
          gge::gen_weighted_sbm(cloud_n, wsbm, seed, 999999);
      const auto emb = gge::encode(graph, labels, {true, false});
      append_cloud(out, "enc-wsbm", emb.values, labels);
    }
    return 0;
  }

  if (study == "fig2") {
    gge::GaussianMixSpec mix;
    mix.num_classes = 4;
    const std::vector<std::pair<std::string, std::string>> kernels = {
        {"dk-euclidean", "dk"}, {"spearman", "spearman"}, {"inner", "inner"}};
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const int n = sizes[s];
      const std::uint64_t off = s * static_cast<std::uint64_t>(reps);
      for (const auto& [method, spec_text] : kernels) {
        const gge::KernelSpec spec = gge::parse_kernel_spec(spec_text);
        auto gen = [&](std::uint64_t rep) {
          auto [x, labels] = gge::gen_gaussian_mixture(n, mix, seed, rep);
          gge::GeneralGraph graph = gge::pairwise_graph(x, spec);
          return std::tuple<gge::GeneralGraph, gge::FeatureMatrix,
                            gge::LabelVector>(std::move(graph), std::move(x),
                                              std::move(labels));
        };
        rows.push_back(curve_point(n, reps, seed, off, method,
                                   gge::ClassifierSpec::lda(), false, gen));
      }
    }
    write_curve(out_path, rows);
    if (!cloud_path.empty()) {
      std::ofstream out(cloud_path);
      if (!out) throw std::runtime_error(cloud_path + ": cannot open");
      out << "method,label,z1,z2,z3,z4\n";
      auto [x, labels] = gge::gen_gaussian_mixture(cloud_n, mix, seed, 999999);
      for (const auto& [method, spec_text] : kernels) {
        const auto emb = gge::encode(
            gge::pairwise_graph(x, gge::parse_kernel_spec(spec_text)), labels,
            {true, false});
        append_cloud(out, method, emb.values, labels);
      }
    }
    return 0;
  }
  throw CLI::ValidationError("study",
                             "unknown study '" + study +
                                 "' (fig1-gauss, fig1-wsbm, fig2)");
}

// --------------------------------------------------------------- theory ----

gge::SbmSpec sbm_from_json(const json& spec) {
  gge::SbmSpec out = gge::default_sbm_spec(0.0);
  const std::string model = spec.value("model", "sbm");
  if (model == "wsbm")
    out.weight_max = 10.0;
  else if (model != "sbm")
    throw std::runtime_error("theory: model must be 'sbm' or 'wsbm'");
  if (spec.contains("B")) {
    const auto& b = spec["B"];
    const int k = static_cast<int>(b.size());
    out.block_probs = gge::Matrix(k, k);
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(b[i].size()) != k)
        throw std::runtime_error("theory: B must be square");
      for (int j = 0; j < k; ++j) out.block_probs(i, j) = b[i][j].get<double>();
    }
    out.priors.assign(k, 1.0 / k);
  }
  if (spec.contains("priors"))
    out.priors = spec["priors"].get<std::vector<double>>();
  if (spec.contains("weight_max")) out.weight_max = spec["weight_max"].get<double>();
  return out;
}

int run_theory(const std::string& check, const std::string& spec_path,
               const std::string& out_path) {
  json spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error(spec_path + ": cannot open");
    in >> spec;
  }
  const gge::SbmSpec sbm = sbm_from_json(spec);
  const int n = spec.value("n", 2000);
  const int reps = spec.value("reps", 50);
  const std::uint64_t seed = spec.value("seed", std::uint64_t{7});

  json doc;
  doc["version"] = std::string(gge::kVersion);
  doc["config"] = spec;
  doc["config"]["model"] = sbm.weight_max > 0 ? "wsbm" : "sbm";
  doc["config"]["n"] = n;
  doc["config"]["reps"] = reps;
  doc["config"]["seed"] = seed;

  if (check == "moments") {
    const bool probe = spec.value("probe", false);
    const auto report = gge::moment_report(sbm, n, reps, seed, probe);
    doc["counts"] = report.counts;
    doc["means"] = matrix_json(report.means);
    doc["theoretical_means"] = matrix_json(report.theoretical_means);
    json covs = json::array();
    for (const auto& c : report.covariances) covs.push_back(matrix_json(c));
    doc["covariances"] = covs;
    doc["max_offdiag_correlation"] = gge::max_offdiagonal_correlation(report);
  } else if (check == "scaling") {
    const auto sizes = spec.value("sizes", std::vector<int>{500, 2000});
    const auto report = gge::variance_scaling(sbm, sizes, reps, seed);
    doc["sizes"] = report.sizes;
    json vars = json::array(), ratios = json::array();
    for (const auto& v : report.variances) vars.push_back(matrix_json(v));
    for (const auto& r : report.ratios) ratios.push_back(matrix_json(r));
    doc["variances"] = vars;
    doc["ratios"] = ratios;
  } else if (check == "normality") {
    const auto report = gge::normality_report(sbm, n, reps, seed);
    doc["skewness"] = matrix_json(report.skewness);
    doc["excess_kurtosis"] = matrix_json(report.excess_kurtosis);
    doc["ks_distance"] = matrix_json(report.ks_distance);
    doc["constant"] = report.constant;
    doc["max_offdiag_correlation"] = report.max_offdiag_correlation;
  } else if (check == "bayes-gap") {
    const int folds = spec.value("folds", 5);
    const auto report = gge::bayes_gap(sbm, n, reps, seed, folds);
    doc["lda_error"] = report.lda_error;
    doc["plugin_error"] = report.plugin_error;
    doc["gap"] = report.gap;
    doc["per_rep_gap"] = report.per_rep_gap;
  } else {
    throw CLI::ValidationError(
        "check", "unknown check '" + check +
                     "' (moments, scaling, normality, bayes-gap)");
  }
  write_json(out_path, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph encoder embedding toolkit"};
  app.require_subcommand(1);

  // embed
  InputOptions embed_in;
  std::string embed_out;
  auto* embed = app.add_subcommand("embed", "write the n-by-K embedding");
  add_input_flags(embed, embed_in, true);
  embed->add_option("--out", embed_out, "output CSV")->required();

  // cv
  InputOptions cv_in;
  std::string cv_classifier = "lda", cv_out;
  int cv_k = 5, cv_folds = 5, cv_reps = 50;
  std::uint64_t cv_seed = 0;
  bool cv_no_stratify = false;
  auto* cv = app.add_subcommand("cv", "cross-validated classification error");
  add_input_flags(cv, cv_in, true);
  cv->add_option("--classifier", cv_classifier)
      ->check(CLI::IsMember({"lda", "knn"}));
  cv->add_option("--k", cv_k, "neighbors for knn")->check(CLI::PositiveNumber);
  cv->add_option("--folds", cv_folds)->check(CLI::Range(2, 1000000));
  cv->add_option("--reps", cv_reps)->check(CLI::PositiveNumber);
  cv->add_option("--seed", cv_seed)->required();
  cv->add_flag("--no-stratify", cv_no_stratify);
  cv->add_option("--out", cv_out, "metrics JSON")->required();

  // simulate
  std::string sim_study, sim_out, sim_cloud;
  int sim_nmin = 50, sim_nmax = 500, sim_step = 50, sim_reps = 100,
      sim_cloud_n = 1000;
  std::uint64_t sim_seed = 0;
  auto* sim = app.add_subcommand(
      "simulate", "error-vs-n curves and embedding clouds as CSV");
  sim->add_option("study", sim_study, "fig1-gauss | fig1-wsbm | fig2")
      ->required();
  sim->add_option("--nmin", sim_nmin)->check(CLI::PositiveNumber);
  sim->add_option("--nmax", sim_nmax)->check(CLI::PositiveNumber);
  sim->add_option("--step", sim_step)->check(CLI::PositiveNumber);
  sim->add_option("--reps", sim_reps)->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed)->required();
  sim->add_option("--out", sim_out, "curve CSV")->required();
  sim->add_option("--cloud-out", sim_cloud, "embedding point cloud CSV");
  sim->add_option("--cloud-n", sim_cloud_n)->check(CLI::PositiveNumber);

  // theory
  std::string theory_check, theory_spec, theory_out;
  auto* theory =
      app.add_subcommand("theory", "Monte Carlo validation reports");
  theory->add_option("check", theory_check,
                     "moments | scaling | normality | bayes-gap")
      ->required();
  theory->add_option("--spec", theory_spec, "JSON spec file");
  theory->add_option("--out", theory_out, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (embed->parsed()) return run_embed(embed_in, embed_out);
    if (cv->parsed())
      return run_cv(cv_in, cv_classifier, cv_k, cv_folds, cv_reps, cv_seed,
                    cv_no_stratify, cv_out);
    if (sim->parsed())
      return run_simulate(sim_study, sim_nmin, sim_nmax, sim_step, sim_reps,
                          sim_seed, sim_out, sim_cloud, sim_cloud_n);
    if (theory->parsed())
      return run_theory(theory_check, theory_spec, theory_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

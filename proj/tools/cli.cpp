#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "homi/data.hpp"
#include "homi/error.hpp"
#include "homi/evaluation.hpp"
#include "homi/linalg.hpp"
#include "homi/model.hpp"
#include "homi/model_io.hpp"
#include "homi/stats.hpp"

namespace homi::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest decimal that reads back to the same double.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return f;
}

// Label designation shared by every command that reads ARFF.
struct LabelOptions {
  std::optional<std::size_t> count;
  std::string xml;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--labels", count, "Number of label attributes at the end of each file");
    cmd->add_option("--xml", xml, "Label-name XML file")->check(CLI::ExistingFile);
  }

  data::LabelSpec resolve(const fs::path& arff) const {
    if (count) return data::LabelSpec::last(*count);
    if (!xml.empty()) return data::LabelSpec::names(data::read_label_xml(xml));
    fs::path sibling = arff;
    sibling.replace_extension(".xml");
    if (fs::exists(sibling)) return data::LabelSpec::names(data::read_label_xml(sibling));
    std::string stem = arff.stem().string();
    for (const std::string suffix : {"-train", "-test"}) {
      if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
        fs::path base = arff.parent_path() / (stem.substr(0, stem.size() - suffix.size()) + ".xml");
        if (fs::exists(base)) return data::LabelSpec::names(data::read_label_xml(base));
      }
    }
    throw UsageError("no label designation for " + arff.string() + ": pass --labels or --xml");
  }
};

data::Dataset load_stacked(const std::vector<std::string>& paths, const LabelOptions& labels) {
  data::Dataset d = data::read_arff(paths.front(), labels.resolve(paths.front()));
  for (std::size_t i = 1; i < paths.size(); ++i) {
    d = data::concat_rows(d, data::read_arff(paths[i], labels.resolve(paths[i])));
  }
  return d;
}

struct ModelOptions {
  HyperParams hyper;
  FitOptions fit;
  bool no_high_order = false;
  bool step_wise = false;
  bool no_laplacian = false;
  bool no_standardize = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--beta", hyper.beta, "Weight of the label self-representation term");
    cmd->add_option("--gamma", hyper.gamma, "Weight of the graph smoothness term");
    cmd->add_option("--lambda", hyper.lambda, "Ridge weight");
    cmd->add_option("--s", hyper.s, "Neighbors per instance");
    cmd->add_option("--iter", hyper.max_iter, "Maximum number of sweeps");
    cmd->add_option("--tol", hyper.tol, "Stop when the objective changes by less than this");
    cmd->add_flag("--no-high-order", no_high_order, "Fix B = I and t = 0");
    cmd->add_flag("--step-wise", step_wise, "Learn B, t from labels first, then W, z");
    cmd->add_flag("--no-laplacian", no_laplacian, "Drop the graph term");
    cmd->add_flag("--random-init", fit.random_init, "Seeded random start instead of zeros");
    cmd->add_option("--seed", fit.seed, "Random seed");
    cmd->add_flag("--no-standardize", no_standardize, "Use raw features");
  }

  FitOptions options() const {
    FitOptions o = fit;
    o.use_high_order = !no_high_order;
    o.joint = !step_wise;
    o.use_laplacian = !no_laplacian;
    return o;
  }
};

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& m,
                      bool integral) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "");
      if (integral) {
        out << (m(i, j) != 0.0 ? 1 : 0);
      } else {
        out << num(m(i, j));
      }
    }
    out << '\n';
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Results table: header "dataset,<method>,...", one row of scores per dataset.
struct ResultsTable {
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  Matrix scores;
};

ResultsTable read_results(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  ResultsTable t;
  std::string line;
  std::vector<double> values;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (t.methods.empty()) {
      if (cells.size() < 3) throw Error(ErrorCode::ParseError, "line 1: need a dataset column and at least two methods");
      t.methods.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != t.methods.size() + 1) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                             std::to_string(t.methods.size() + 1) + " fields");
    }
    t.datasets.push_back(cells[0]);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      double v = 0.0;
      const char* first = cells[j].data();
      const char* last = first + cells[j].size();
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last || !std::isfinite(v)) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": bad number '" + cells[j] + "'");
      }
      values.push_back(v);
    }
  }
  if (t.methods.empty()) throw Error(ErrorCode::EmptyDataset, "results file has no header");
  t.scores = Matrix(t.datasets.size(), t.methods.size(), std::move(values));
  return t;
}

int cmd_rank(const std::vector<std::string>& files, const LabelOptions& labels, std::ostream& out) {
  for (const auto& f : files) {
    const data::Dataset d = data::read_arff(f, labels.resolve(f));
    const std::size_t rank = linalg::matrix_rank(d.Y);
    out << f << " n=" << d.num_instances() << " rank=" << rank << " labels=" << d.num_labels() << ' '
        << (rank == d.num_labels() ? "full-rank" : "rank-deficient") << '\n';
  }
  return 0;
}

int cmd_describe(const std::vector<std::string>& files, const LabelOptions& labels, const std::string& out_path,
                 std::ostream& out) {
  std::ostringstream csv;
  csv << "dataset,n,m,l,lcard,lden,dl\n";
  for (const auto& f : files) {
    const auto s = data::dataset_stats(data::read_arff(f, labels.resolve(f)));
    csv << fs::path(f).stem().string() << ',' << s.n << ',' << s.m << ',' << s.l << ',' << num(s.lcard) << ','
        << num(s.lden) << ',' << s.dl << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    open_out(out_path) << csv.str();
  }
  return 0;
}

int cmd_train(const std::vector<std::string>& files, const LabelOptions& labels, const ModelOptions& opts,
              const std::string& model_path, std::string trace_path, std::ostream& out) {
  const data::Dataset d = load_stacked(files, labels);
  opts.hyper.validate();
  SavedModel saved;
  saved.scaling = opts.no_standardize ? data::Standardization::identity(d.num_features())
                                      : data::Standardization::fit(d.X, d.missing);
  saved.feature_names = d.feature_names;
  saved.label_names = d.label_names;
  saved.model = fit(saved.scaling.apply(d.X, d.missing), d.Y, opts.hyper, opts.options());
  save_model(model_path, saved);

  if (trace_path.empty()) trace_path = model_path + ".trace.csv";
  auto trace = open_out(trace_path);
  trace << "sweep,objective\n";
  for (std::size_t i = 0; i < saved.model.loss_trace.size(); ++i) {
    trace << i + 1 << ',' << num(saved.model.loss_trace[i]) << '\n';
  }
  out << "sweeps=" << saved.model.loss_trace.size() << " converged=" << (saved.model.converged ? "yes" : "no");
  if (!saved.model.loss_trace.empty()) out << " objective=" << num(saved.model.loss_trace.back());
  out << " model=" << model_path << " trace=" << trace_path << '\n';
  return 0;
}

int cmd_eval(const std::vector<std::string>& files, const LabelOptions& labels, const ModelOptions& opts,
             std::size_t k, std::uint64_t seed, const std::string& detail_path, std::ostream& out) {
  const data::Dataset d = load_stacked(files, labels);
  opts.hyper.validate();
  const EvalReport report = cross_validate(d, opts.hyper, opts.options(), k, seed, !opts.no_standardize);
  for (Metric m : kAllMetrics) {
    const MetricSummary s = report.summary(m);
    out << metric_name(m) << ' ';
    if (s.folds == 0) {
      out << "undefined\n";
    } else {
      out << num(s.mean) << ' ' << num(s.std) << '\n';
    }
  }
  if (!detail_path.empty()) {
    auto f = open_out(detail_path);
    f << "fold,train_size,test_size,sweeps,converged";
    for (Metric m : kAllMetrics) f << ',' << metric_name(m);
    f << '\n';
    for (const auto& fold : report.folds) {
      f << fold.fold << ',' << fold.train_size << ',' << fold.test_size << ',' << fold.sweeps << ','
        << (fold.converged ? 1 : 0);
      for (Metric m : kAllMetrics) {
        f << ',';
        if (auto v = fold[m]) f << num(*v);
      }
      f << '\n';
    }
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::vector<std::string>& files, const std::string& out_path,
                std::string scores_path, std::ostream& out) {
  const SavedModel saved = load_model(model_path);
  const data::Dataset d = load_stacked(files, [&] {
    LabelOptions l;
    l.count = saved.label_names.size();
    return l;
  }());
  if (d.feature_names != saved.feature_names) {
    throw Error(ErrorCode::DimensionMismatch, "data features differ from the features the model was trained on");
  }
  const Matrix scores = score_raw(saved, d.X, d.missing);
  if (scores_path.empty()) scores_path = fs::path(out_path).replace_extension("scores.csv").string();
  {
    auto f = open_out(out_path);
    write_matrix_csv(f, saved.label_names, threshold(scores), true);
  }
  {
    auto f = open_out(scores_path);
    write_matrix_csv(f, saved.label_names, scores, false);
  }
  out << "instances=" << scores.rows() << " labels=" << scores.cols() << " predictions=" << out_path
      << " scores=" << scores_path << '\n';
  return 0;
}

int cmd_corr(const std::string& model_path, const std::string& out_path, bool raw, std::ostream& out) {
  const SavedModel saved = load_model(model_path);
  const Matrix b = raw ? saved.model.B : normalized_correlations(saved.model);
  if (out_path.empty()) {
    write_matrix_csv(out, saved.label_names, b, false);
  } else {
    auto f = open_out(out_path);
    write_matrix_csv(f, saved.label_names, b, false);
  }
  return 0;
}

int cmd_stats(const std::string& results_path, double alpha, bool higher_better, const std::string& control_name,
              const std::string& out_path, std::ostream& out) {
  const ResultsTable t = read_results(results_path);
  const stats::RankSummary summary = stats::ranks_from_scores(t.scores, higher_better);
  std::size_t control = 0;
  if (control_name.empty()) {
    control = static_cast<std::size_t>(
        std::min_element(summary.avg_ranks.begin(), summary.avg_ranks.end()) - summary.avg_ranks.begin());
  } else {
    auto it = std::find(t.methods.begin(), t.methods.end(), control_name);
    if (it == t.methods.end()) throw UsageError("unknown control method '" + control_name + "'");
    control = static_cast<std::size_t>(it - t.methods.begin());
  }
  const stats::FriedmanResult fr = stats::friedman(summary);
  const auto rows = stats::holm(summary, control, alpha);

  std::ostringstream csv;
  csv << "statistic,value\n";
  csv << "methods," << summary.methods << '\n';
  csv << "datasets," << summary.datasets << '\n';
  csv << "chi2," << num(fr.chi2) << '\n';
  csv << "f_f," << (fr.degenerate() ? "degenerate" : num(*fr.f_f)) << '\n';
  csv << "df1," << fr.df1 << '\n';
  csv << "df2," << fr.df2 << '\n';
  csv << "p_value," << num(fr.p_value()) << '\n';
  csv << "critical_value," << num(stats::f_quantile(1.0 - alpha, static_cast<double>(fr.df1),
                                                    static_cast<double>(fr.df2)))
      << '\n';
  csv << "control," << t.methods[control] << '\n';
  csv << '\n';
  csv << "method,avg_rank,z,p,threshold,significant\n";
  for (const auto& r : rows) {
    csv << t.methods[r.method] << ',' << num(r.avg_rank) << ',' << num(r.z) << ',' << num(r.p) << ','
        << num(r.threshold) << ',' << (r.significant ? "yes" : "no") << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    open_out(out_path) << csv.str();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-label classification with learned high-order label correlations", "homi"};
  app.require_subcommand(1);

  LabelOptions labels;
  ModelOptions model_opts;
  std::vector<std::string> files;
  std::string out_path;
  std::string aux_path;
  std::string model_path;
  std::size_t cv = 5;
  bool raw = false;
  double alpha = 0.05;
  bool higher_better = false;
  std::string control;

  auto* rank = app.add_subcommand("rank", "Rank of the label matrix of each file");
  rank->add_option("files", files, "ARFF files")->required()->check(CLI::ExistingFile);
  labels.add_to(rank);

  auto* describe = app.add_subcommand("describe", "Instance, feature and label statistics as CSV");
  describe->add_option("files", files, "ARFF files")->required()->check(CLI::ExistingFile);
  describe->add_option("--out", out_path, "Output CSV (default: stdout)");
  labels.add_to(describe);

  auto* train = app.add_subcommand("train", "Fit a model and write it with its convergence trace");
  train->add_option("files", files, "ARFF files, stacked in order")->required()->check(CLI::ExistingFile);
  train->add_option("--out", model_path, "Model file")->required();
  train->add_option("--trace", aux_path, "Trace CSV (default: <out>.trace.csv)");
  labels.add_to(train);
  model_opts.add_to(train);

  auto* eval = app.add_subcommand("eval", "Cross-validated mean and deviation of the four measures");
  eval->add_option("files", files, "ARFF files, stacked in order")->required()->check(CLI::ExistingFile);
  eval->add_option("--cv", cv, "Number of folds");
  eval->add_option("--detail", aux_path, "Per-fold CSV");
  labels.add_to(eval);
  model_opts.add_to(eval);

  auto* predict = app.add_subcommand("predict", "Predicted label sets and decision values");
  predict->add_option("model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  predict->add_option("files", files, "ARFF files")->required()->check(CLI::ExistingFile);
  predict->add_option("--out", out_path, "0/1 prediction CSV")->required();
  predict->add_option("--scores", aux_path, "Decision value CSV (default: <out stem>.scores.csv)");

  auto* corr = app.add_subcommand("corr", "Label correlation matrix B as CSV");
  corr->add_option("model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  corr->add_option("--out", out_path, "Output CSV (default: stdout)");
  corr->add_flag("--raw", raw, "Skip per-column max-abs normalization");

  auto* stats_cmd = app.add_subcommand("stats", "Friedman test and Holm comparisons against a control");
  stats_cmd->add_option("results", aux_path, "CSV: dataset,<method>,... with one score row per dataset")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--alpha", alpha, "Significance level");
  stats_cmd->add_flag("--higher-better", higher_better, "Larger scores rank first");
  stats_cmd->add_option("--control", control, "Control method (default: best average rank)");
  stats_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*rank) return cmd_rank(files, labels, out);
    if (*describe) return cmd_describe(files, labels, out_path, out);
    if (*train) return cmd_train(files, labels, model_opts, model_path, aux_path, out);
    if (*eval) return cmd_eval(files, labels, model_opts, cv, model_opts.fit.seed, aux_path, out);
    if (*predict) return cmd_predict(model_path, files, out_path, aux_path, out);
    if (*corr) return cmd_corr(model_path, out_path, raw, out);
    if (*stats_cmd) return cmd_stats(aux_path, alpha, higher_better, control, out_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kind_of(e.code()) == ErrorKind::Numerical ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace homi::cli

#include "homi/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "homi/error.hpp"

namespace homi {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "homi-model";
constexpr int kVersion = 1;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

Matrix matrix_from_json(const json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("values").get<std::vector<double>>());
}

}  // namespace

Matrix score_raw(const SavedModel& saved, const Matrix& raw_x,
                 std::span<const data::MissingCell> missing) {
  return decision_values(saved.model, saved.scaling.apply(raw_x, missing));
}

std::string to_text(const SavedModel& saved) {
  const HomiModel& m = saved.model;
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["dimensions"] = {{"features", m.num_features()}, {"labels", m.num_labels()}};
  doc["hyper"] = {{"beta", m.hyper.beta},         {"gamma", m.hyper.gamma},
                  {"lambda", m.hyper.lambda},     {"s", m.hyper.s},
                  {"max_iter", m.hyper.max_iter}, {"tol", m.hyper.tol}};
  doc["options"] = {{"use_high_order", m.options.use_high_order},
                    {"joint", m.options.joint},
                    {"use_laplacian", m.options.use_laplacian},
                    {"random_init", m.options.random_init},
                    {"seed", m.options.seed}};
  doc["standardization"] = {{"mean", saved.scaling.mean}, {"scale", saved.scaling.scale}};
  doc["feature_names"] = saved.feature_names;
  doc["label_names"] = saved.label_names;
  doc["W"] = matrix_to_json(m.W);
  doc["B"] = matrix_to_json(m.B);
  doc["z"] = m.z;
  doc["t"] = m.t;
  doc["loss_trace"] = m.loss_trace;
  doc["converged"] = m.converged;
  return doc.dump(1) + "\n";
}

SavedModel from_text(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat) {
      throw Error(ErrorCode::ParseError, "not a homi model document");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::ParseError, "unsupported model version");
    }
    SavedModel saved;
    HomiModel& m = saved.model;
    const json& h = doc.at("hyper");
    m.hyper.beta = h.at("beta").get<double>();
    m.hyper.gamma = h.at("gamma").get<double>();
    m.hyper.lambda = h.at("lambda").get<double>();
    m.hyper.s = h.at("s").get<std::size_t>();
    m.hyper.max_iter = h.at("max_iter").get<std::size_t>();
    m.hyper.tol = h.at("tol").get<double>();
    const json& o = doc.at("options");
    m.options.use_high_order = o.at("use_high_order").get<bool>();
    m.options.joint = o.at("joint").get<bool>();
    m.options.use_laplacian = o.at("use_laplacian").get<bool>();
    m.options.random_init = o.at("random_init").get<bool>();
    m.options.seed = o.at("seed").get<std::uint64_t>();
    m.W = matrix_from_json(doc.at("W"));
    m.B = matrix_from_json(doc.at("B"));
    m.z = doc.at("z").get<Vector>();
    m.t = doc.at("t").get<Vector>();
    m.loss_trace = doc.at("loss_trace").get<std::vector<double>>();
    m.converged = doc.at("converged").get<bool>();
    saved.scaling.mean = doc.at("standardization").at("mean").get<Vector>();
    saved.scaling.scale = doc.at("standardization").at("scale").get<Vector>();
    saved.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    saved.label_names = doc.at("label_names").get<std::vector<std::string>>();

    const std::size_t features = doc.at("dimensions").at("features").get<std::size_t>();
    const std::size_t labels = doc.at("dimensions").at("labels").get<std::size_t>();
    const bool consistent = m.W.rows() == features && m.W.cols() == labels && m.B.rows() == labels &&
                            m.B.cols() == labels && m.z.size() == labels && m.t.size() == labels &&
                            saved.scaling.mean.size() == features &&
                            saved.scaling.scale.size() == features &&
                            saved.feature_names.size() == features &&
                            saved.label_names.size() == labels;
    if (!consistent) throw Error(ErrorCode::ParseError, "model blocks disagree with declared dimensions");
    return saved;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const SavedModel& saved) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << to_text(saved);
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace homi

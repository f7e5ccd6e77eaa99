#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "homi/data.hpp"
#include "homi/error.hpp"

namespace homi::data {

namespace {

struct Attribute {
  std::string name;
  bool nominal = false;
  std::vector<std::string> values;  // nominal values in declaration order
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

// Reads one possibly quoted token starting at `pos`, stopping at any of
// `stops` when unquoted. Advances `pos` past the token.
std::string read_token(std::string_view s, std::size_t& pos, std::string_view stops,
                       std::size_t line) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  if (pos >= s.size()) return {};
  const char q = s[pos];
  if (q == '\'' || q == '"') {
    std::string out;
    ++pos;
    while (pos < s.size() && s[pos] != q) {
      if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
      out.push_back(s[pos++]);
    }
    if (pos >= s.size()) parse_fail(line, "unterminated quote");
    ++pos;
    return out;
  }
  const std::size_t start = pos;
  while (pos < s.size() && stops.find(s[pos]) == std::string_view::npos) ++pos;
  return std::string(trim(s.substr(start, pos - start)));
}

// Splits on commas outside quotes; each field is unquoted and trimmed.
std::vector<std::string> split_fields(std::string_view s, std::size_t line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    out.push_back(read_token(s, pos, ",", line));
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) break;
    if (s[pos] != ',') parse_fail(line, "expected ',' in data row");
    ++pos;
  }
  return out;
}

Attribute parse_attribute(std::string_view rest, std::size_t line) {
  Attribute a;
  std::size_t pos = 0;
  a.name = read_token(rest, pos, " \t{", line);
  if (a.name.empty()) parse_fail(line, "attribute without a name");
  const std::string_view type = trim(rest.substr(pos));
  if (type.empty()) parse_fail(line, "attribute '" + a.name + "' without a type");
  if (type.front() == '{') {
    const auto close = type.rfind('}');
    if (close == std::string_view::npos) parse_fail(line, "unterminated nominal value list");
    a.nominal = true;
    for (auto& v : split_fields(type.substr(1, close - 1), line)) {
      if (!v.empty()) a.values.push_back(std::move(v));
    }
    if (a.values.empty()) parse_fail(line, "empty nominal value list for '" + a.name + "'");
    return a;
  }
  const std::string t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") return a;
  parse_fail(line, "unsupported attribute type '" + std::string(type) + "' for '" + a.name + "'");
}

std::optional<double> to_number(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::optional<double> binary_code(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "1" || v == "true" || v == "yes" || v == "1.0") return 1.0;
  if (v == "0" || v == "-1" || v == "false" || v == "no" || v == "0.0" || v == "-1.0") return 0.0;
  return std::nullopt;
}

// Column layout after label designation.
struct Layout {
  std::vector<int> label_slot;    // per attribute: index into Y or -1
  std::vector<int> feature_slot;  // per attribute: index into X or -1
  std::size_t labels = 0;
  std::size_t features = 0;
};

Layout make_layout(const std::vector<Attribute>& attrs, const LabelSpec& spec) {
  const std::size_t count = attrs.size();
  std::vector<bool> is_label(count, false);
  switch (spec.kind()) {
    case LabelSpec::Kind::LastCount:
    case LabelSpec::Kind::FirstCount: {
      if (spec.count() > count) {
        throw Error(ErrorCode::UnknownLabelName, std::to_string(spec.count()) +
                                                     " labels requested but only " +
                                                     std::to_string(count) + " attributes");
      }
      for (std::size_t q = 0; q < spec.count(); ++q) {
        is_label[spec.kind() == LabelSpec::Kind::LastCount ? count - 1 - q : q] = true;
      }
      break;
    }
    case LabelSpec::Kind::Names: {
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t a = 0; a < count; ++a) index.emplace(attrs[a].name, a);
      for (const auto& name : spec.label_names()) {
        const auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorCode::UnknownLabelName, "no attribute named '" + name + "'");
        is_label[it->second] = true;
      }
      break;
    }
  }
  Layout layout;
  layout.label_slot.assign(count, -1);
  layout.feature_slot.assign(count, -1);
  for (std::size_t a = 0; a < count; ++a) {
    if (is_label[a]) layout.label_slot[a] = static_cast<int>(layout.labels++);
    else layout.feature_slot[a] = static_cast<int>(layout.features++);
  }
  return layout;
}

class ArffReader {
 public:
  ArffReader(std::istream& in, const LabelSpec& spec) : in_(in), spec_(spec) {}

  Dataset read() {
    read_header();
    layout_ = make_layout(attrs_, spec_);
    check_label_attributes();
    read_data();
    return finish();
  }

 private:
  bool next_line(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const std::string_view t = trim(line);
      if (t.empty() || t.front() == '%') continue;
      line = std::string(t);
      return true;
    }
    return false;
  }

  void read_header() {
    std::string line;
    while (next_line(line)) {
      const std::string_view view = line;
      const auto space = view.find_first_of(" \t");
      const std::string keyword = lower(view.substr(0, space));
      const std::string_view rest = space == std::string_view::npos ? std::string_view{} : view.substr(space);
      if (keyword == "@relation") {
        std::size_t pos = 0;
        relation_ = read_token(rest, pos, "", line_no_);
      } else if (keyword == "@attribute") {
        attrs_.push_back(parse_attribute(trim(rest), line_no_));
      } else if (keyword == "@data") {
        if (attrs_.empty()) parse_fail(line_no_, "@data before any @attribute");
        return;
      } else {
        parse_fail(line_no_, "unexpected header line '" + std::string(view.substr(0, 40)) + "'");
      }
    }
    parse_fail(line_no_, "missing @data section");
  }

  void check_label_attributes() {
    std::unordered_set<std::string> seen;
    for (const auto& a : attrs_) {
      if (!seen.insert(a.name).second) {
        throw Error(ErrorCode::ParseError, "duplicate attribute name '" + a.name + "'");
      }
    }
    for (std::size_t a = 0; a < attrs_.size(); ++a) {
      if (layout_.label_slot[a] < 0 || !attrs_[a].nominal) continue;
      for (const auto& v : attrs_[a].values) {
        if (!binary_code(v)) {
          throw Error(ErrorCode::NonBinaryLabelValue,
                      "label '" + attrs_[a].name + "' declares value '" + v + "'");
        }
      }
    }
  }

  // Value of attribute `a` from its textual form.
  std::optional<double> decode(std::size_t a, std::string_view raw) const {
    const Attribute& attr = attrs_[a];
    const bool label = layout_.label_slot[a] >= 0;
    if (raw == "?") {
      if (label) {
        throw Error(ErrorCode::NonBinaryLabelValue,
                    "line " + std::to_string(line_no_) + ": missing value for label '" + attr.name + "'");
      }
      return std::nullopt;
    }
    if (attr.nominal) {
      const auto it = std::find(attr.values.begin(), attr.values.end(), raw);
      if (it == attr.values.end()) {
        parse_fail(line_no_, "value '" + std::string(raw) + "' not declared for '" + attr.name + "'");
      }
      if (label) return *binary_code(*it);
      return static_cast<double>(it - attr.values.begin());
    }
    const auto v = to_number(raw);
    if (!v || !std::isfinite(*v)) {
      parse_fail(line_no_, "'" + std::string(raw) + "' is not a number for '" + attr.name + "'");
    }
    if (label) {
      if (*v == 1.0) return 1.0;
      if (*v == 0.0 || *v == -1.0) return 0.0;
      throw Error(ErrorCode::NonBinaryLabelValue, "line " + std::to_string(line_no_) + ": label '" +
                                                      attr.name + "' has value " + std::string(raw));
    }
    return *v;
  }

  // Value an attribute takes when a sparse row omits it.
  double sparse_default(std::size_t a) const {
    const Attribute& attr = attrs_[a];
    if (!attr.nominal) return 0.0;
    return layout_.label_slot[a] >= 0 ? *binary_code(attr.values.front()) : 0.0;
  }

  void store(std::size_t a, std::optional<double> v) {
    if (layout_.label_slot[a] >= 0) {
      y_.push_back(*v);
      return;
    }
    if (!v) missing_.push_back({rows_, static_cast<std::size_t>(layout_.feature_slot[a])});
    x_.push_back(v.value_or(0.0));
  }

  void read_data() {
    std::string line;
    const std::size_t count = attrs_.size();
    std::vector<std::optional<double>> row(count);
    while (next_line(line)) {
      const std::string_view view = line;
      if (view.front() == '{') {
        const auto close = view.rfind('}');
        if (close == std::string_view::npos) parse_fail(line_no_, "unterminated sparse row");
        for (std::size_t a = 0; a < count; ++a) row[a] = sparse_default(a);
        const std::string_view body = trim(view.substr(1, close - 1));
        if (!body.empty()) {
          for (const auto& entry : split_entries(body)) {
            std::size_t pos = 0;
            const std::string idx_text = read_token(entry, pos, " \t", line_no_);
            const auto idx = to_number(idx_text);
            if (!idx || *idx < 0 || *idx >= static_cast<double>(count) || *idx != std::floor(*idx)) {
              parse_fail(line_no_, "bad sparse index '" + idx_text + "'");
            }
            const auto a = static_cast<std::size_t>(*idx);
            const std::string value = read_token(entry, pos, "", line_no_);
            row[a] = decode(a, value);
          }
        }
      } else {
        const auto fields = split_fields(view, line_no_);
        if (fields.size() != count) {
          parse_fail(line_no_, "expected " + std::to_string(count) + " values, found " +
                                   std::to_string(fields.size()));
        }
        for (std::size_t a = 0; a < count; ++a) row[a] = decode(a, fields[a]);
      }
      for (std::size_t a = 0; a < count; ++a) store(a, row[a]);
      ++rows_;
    }
  }

  // Sparse entries "idx value" separated by commas outside quotes.
  std::vector<std::string> split_entries(std::string_view body) const {
    std::vector<std::string> out;
    std::string current;
    char quote = 0;
    for (char c : body) {
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '\'' || c == '"') {
        quote = c;
      } else if (c == ',') {
        out.emplace_back(trim(current));
        current.clear();
        continue;
      }
      current.push_back(c);
    }
    if (quote) parse_fail(line_no_, "unterminated quote in sparse row");
    out.emplace_back(trim(current));
    return out;
  }

  Dataset finish() {
    if (rows_ == 0) throw Error(ErrorCode::EmptyDataset, "ARFF document has no data rows");
    Dataset d;
    d.relation = relation_;
    d.X = Matrix(rows_, layout_.features, std::move(x_));
    d.Y = Matrix(rows_, layout_.labels, std::move(y_));
    for (std::size_t a = 0; a < attrs_.size(); ++a) {
      (layout_.label_slot[a] >= 0 ? d.label_names : d.feature_names).push_back(attrs_[a].name);
    }
    d.missing = std::move(missing_);
    return d;
  }

  std::istream& in_;
  const LabelSpec& spec_;
  std::size_t line_no_ = 0;
  std::string relation_;
  std::vector<Attribute> attrs_;
  Layout layout_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<MissingCell> missing_;
  std::size_t rows_ = 0;
};

std::string decode_entities(std::string s) {
  static const std::pair<const char*, const char*> kEntities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : kEntities) {
    std::string::size_type pos = 0;
    const std::string f(from);
    while ((pos = s.find(f, pos)) != std::string::npos) {
      s.replace(pos, f.size(), to);
      pos += 1;
    }
  }
  return s;
}

bool needs_quotes(const std::string& name) {
  return name.empty() || name.find_first_of(" \t,{}'\"%") != std::string::npos;
}

std::string quoted(const std::string& name) {
  if (!needs_quotes(name)) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "'";
}

}  // namespace

Dataset parse_arff(std::istream& in, const LabelSpec& labels) { return ArffReader(in, labels).read(); }

Dataset read_arff(const std::filesystem::path& path, const LabelSpec& labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return parse_arff(in, labels);
  } catch (const Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.detail());
  }
}

std::vector<std::string> parse_label_xml(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  static const std::regex kLabel(R"re(<label\s+name\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kLabel); it != std::sregex_iterator(); ++it) {
    names.push_back(decode_entities((*it)[1].matched ? (*it)[1].str() : (*it)[2].str()));
  }
  if (names.empty()) throw Error(ErrorCode::ParseError, "label file lists no <label name=...> elements");
  return names;
}

std::vector<std::string> read_label_xml(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return parse_label_xml(in);
}

void write_arff(std::ostream& out, const Dataset& d) {
  out << "@relation " << quoted(d.relation.empty() ? "dataset" : d.relation) << "\n\n";
  for (const auto& f : d.feature_names) out << "@attribute " << quoted(f) << " numeric\n";
  for (const auto& l : d.label_names) out << "@attribute " << quoted(l) << " {0,1}\n";
  out << "\n@data\n";

  std::vector<std::vector<bool>> is_missing;
  if (!d.missing.empty()) {
    is_missing.assign(d.num_instances(), std::vector<bool>(d.num_features(), false));
    for (const auto& c : d.missing) is_missing[c.row][c.col] = true;
  }
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < d.num_features(); ++j) {
      if (!first) out << ',';
      first = false;
      if (!is_missing.empty() && is_missing[i][j]) out << '?';
      else out << d.X(i, j);
    }
    for (std::size_t j = 0; j < d.num_labels(); ++j) {
      if (!first) out << ',';
      first = false;
      out << (d.Y(i, j) != 0.0 ? '1' : '0');
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace homi::data

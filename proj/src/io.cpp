#include "wpot/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

#include "wpot/errors.hpp"

namespace wpot {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& what) { throw InputError(what); }

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

std::vector<double> reals(const json& j, const char* where) {
  if (!j.is_array()) bad(std::string(where) + ": expected an array of numbers");
  std::vector<double> v;
  for (const json& e : j) {
    if (!e.is_number()) bad(std::string(where) + ": expected an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

std::vector<int> ints(const json& j, const char* where) {
  if (!j.is_array()) bad(std::string(where) + ": expected an array of integers");
  std::vector<int> v;
  for (const json& e : j) {
    if (!e.is_number_integer()) bad(std::string(where) + ": expected an array of integers");
    v.push_back(e.get<int>());
  }
  return v;
}

Manifold manifold_from(const std::string& kind, int n) {
  if (kind == "torus") return Manifold::torus(n);
  if (kind == "sphere") return Manifold::sphere(n);
  bad("unknown manifold \"" + kind + "\" (expected torus or sphere)");
}

std::string kind_name(const Manifold& m) { return m.kind == ManifoldKind::Torus ? "torus" : "sphere"; }

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    bad(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON: " + e.what());
  }
}

namespace {

void write_json(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? fmt17(v) : "null";
  } else if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      write_json(it.value(), indent + 2, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) out += ",\n";
      out += pad;
      write_json(j[i], indent + 2, out);
    }
    out += "\n" + close + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  write_json(j, 0, out);
  return out + "\n";
}

json point_to_json(const Point& x) {
  json a = json::array();
  for (double c : coords_of(x)) a.push_back(c);
  return a;
}

Point point_from_json(const json& j, const Manifold& m) {
  std::vector<double> c = reals(j, "point");
  if (static_cast<int>(c.size()) != m.ambient_dim()) {
    bad("point has " + std::to_string(c.size()) + " coordinates, " + m.name() + " needs " +
        std::to_string(m.ambient_dim()));
  }
  if (m.kind == ManifoldKind::Sphere) {
    double norm2 = 0.0;
    for (double v : c) norm2 += v * v;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) bad("sphere point is not a unit vector");
  }
  return make_point(m, std::move(c));
}

json measure_to_json(const DiscreteMeasure& mu) {
  json support = json::array();
  for (const Point& x : mu.support()) support.push_back(point_to_json(x));
  return {{"manifold", kind_name(mu.manifold())},
          {"n", mu.manifold().n},
          {"support", support},
          {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const json& j, const MeasureReadOptions& opts,
                                  std::vector<std::string>* warnings) {
  const json& kind = field(j, "manifold", "measure");
  const json& n = field(j, "n", "measure");
  if (!kind.is_string()) bad("measure: \"manifold\" must be a string");
  if (!n.is_number_integer() || n.get<int>() < 1) bad("measure: \"n\" must be a positive integer");
  const Manifold m = manifold_from(kind.get<std::string>(), n.get<int>());
  const json& support = field(j, "support", "measure");
  if (!support.is_array()) bad("measure: \"support\" must be an array of points");
  std::vector<double> weights = reals(field(j, "weights", "measure"), "measure weights");
  if (weights.size() != support.size()) {
    bad("measure: " + std::to_string(support.size()) + " support points but " + std::to_string(weights.size()) +
        " weights");
  }
  std::vector<Point> points;
  std::vector<double> kept;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (opts.drop_zero_weights && weights[k] == 0.0) {
      if (warnings != nullptr) warnings->push_back("dropped zero-weight atom at index " + std::to_string(k));
      continue;
    }
    points.push_back(point_from_json(support[k], m));
    kept.push_back(weights[k]);
  }
  return DiscreteMeasure(m, std::move(points), std::move(kept));
}

json isometry_to_json(const Isometry& psi) {
  if (const auto* t = std::get_if<TorusIsometry>(&psi)) {
    return {{"sigma", t->sigma()}, {"eps", t->eps()}, {"u", point_to_json(t->shift())}};
  }
  const Eigen::MatrixXd& q = std::get<SphereIsometry>(psi).matrix();
  json rows = json::array();
  for (Eigen::Index r = 0; r < q.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < q.cols(); ++c) row.push_back(q(r, c));
    rows.push_back(row);
  }
  return {{"Q", rows}};
}

Isometry isometry_from_json(const json& j) {
  if (j.is_object() && j.contains("Q")) {
    const json& rows = j["Q"];
    if (!rows.is_array() || rows.empty()) bad("isometry: \"Q\" must be a square matrix");
    const auto size = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd q(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      std::vector<double> row = reals(rows[static_cast<std::size_t>(r)], "isometry row");
      if (static_cast<Eigen::Index>(row.size()) != size) bad("isometry: \"Q\" must be a square matrix");
      for (Eigen::Index c = 0; c < size; ++c) q(r, c) = row[static_cast<std::size_t>(c)];
    }
    return SphereIsometry(q);
  }
  std::vector<int> sigma = ints(field(j, "sigma", "isometry"), "isometry sigma");
  std::vector<int> eps = ints(field(j, "eps", "isometry"), "isometry eps");
  std::vector<double> u = reals(field(j, "u", "isometry"), "isometry u");
  return TorusIsometry(std::move(sigma), std::move(eps), TorusPoint(std::move(u)));
}

json transport_to_json(const TransportResult& r) {
  json triples = json::array();
  for (int i = 0; i < r.coupling.rows; ++i) {
    for (int j = 0; j < r.coupling.cols; ++j) {
      const double m = r.coupling(i, j);
      if (m > 0.0) triples.push_back(json::array({i, j, m}));
    }
  }
  return {{"p", r.p}, {"distance", r.distance}, {"cost", r.cost}, {"coupling", triples}};
}

json recovery_to_json(const RecoveryResult& r) {
  json sites = json::array();
  for (const Point& x : r.sites) sites.push_back(point_to_json(x));
  return {{"method", to_string(r.method)},
          {"sites", sites},
          {"masses", r.masses},
          {"residual", r.residual},
          {"clipped", r.clipped}};
}

json marginals_to_json(const std::vector<DiscreteMeasure>& marginals) {
  json a = json::array();
  for (const DiscreteMeasure& m : marginals) a.push_back(measure_to_json(m));
  return {{"method", to_string(RecoveryMethod::TorusP2Marginals)}, {"marginals", a}};
}

json spectrum_to_json(const SpectrumReport& r) {
  json values = json::array();
  for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
    values.push_back({{"j", r.frequencies[i]}, {"value", r.values[i]}, {"error", r.errors[i]}});
  }
  return {{"p", r.p}, {"jmax", r.jmax}, {"threshold", r.threshold}, {"values", values}, {"zeros", r.zeros}};
}

std::string spectrum_to_csv(const SpectrumReport& r) {
  std::string s = "j,value,is_zero\n";
  for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
    const bool zero = std::abs(r.values[i]) <= r.threshold;
    s += std::to_string(r.frequencies[i]) + "," + fmt17(r.values[i]) + "," + (zero ? "true" : "false") + "\n";
  }
  return s;
}

json suite_report_to_json(const SuiteReport& r) {
  json failures = json::array();
  for (const SuiteFailure& f : r.failures) {
    failures.push_back({{"trial_seed", f.trial_seed},
                        {"description", f.description},
                        {"observed", f.observed},
                        {"expected", f.expected},
                        {"tolerance", f.tolerance}});
  }
  return {{"suite", r.suite}, {"trials", r.trials}, {"passed", r.passed}, {"metrics", r.metrics},
          {"failures", failures}};
}

std::string potential_to_csv(const SampledPotential& g) {
  const Manifold& m = g.manifold();
  std::string s = "# manifold=" + kind_name(m) + " n=" + std::to_string(m.n) + " p=" + fmt17(g.p()) +
                  " grid=" + std::to_string(g.resolution()) + "\n";
  for (int k = 0; k < m.ambient_dim(); ++k) s += "x" + std::to_string(k) + ",";
  s += "value\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point x = g.node(i);
    for (double c : coords_of(x)) s += fmt17(c) + ",";
    s += fmt17(g.values()[i]) + "\n";
  }
  return s;
}

namespace {

double parse_real(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    bad(where + ": not a number: \"" + text + "\"");
  }
  return v;
}

}  // namespace

SampledPotential potential_from_csv(std::istream& in, const std::string& source, std::optional<double> p) {
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return source + ":" + std::to_string(lineno); };

  if (!std::getline(in, line)) bad(source + ": empty potential file");
  ++lineno;
  if (line.rfind('#', 0) != 0) bad(where() + ": expected a metadata line \"# manifold=... n=... grid=...\"");
  std::optional<std::string> kind;
  std::optional<int> n;
  std::optional<int> grid;
  std::optional<double> meta_p;
  std::istringstream meta(line.substr(1));
  std::string item;
  while (meta >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) bad(where() + ": metadata item \"" + item + "\" is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "manifold") {
      kind = value;
    } else if (key == "n") {
      n = static_cast<int>(parse_real(value, where()));
    } else if (key == "grid") {
      grid = static_cast<int>(parse_real(value, where()));
    } else if (key == "p") {
      meta_p = parse_real(value, where());
    }
  }
  if (!kind || !n || !grid) bad(where() + ": metadata needs manifold, n and grid");
  if (meta_p && p && *meta_p != *p) {
    bad(where() + ": file says p=" + fmt17(*meta_p) + " but p=" + fmt17(*p) + " was requested");
  }
  if (!meta_p && !p) bad(where() + ": the exponent p is neither in the metadata nor given");
  const double exponent = meta_p ? *meta_p : *p;
  if (*n < 1) bad(where() + ": n must be positive");
  const Manifold m = manifold_from(*kind, *n);
  const std::size_t count = SampledPotential::node_count(m, *grid);
  const auto width = static_cast<std::size_t>(m.ambient_dim()) + 1;

  if (!std::getline(in, line)) bad(source + ": missing header row");
  ++lineno;

  // A zero grid to ask for node indices before the values are known.
  const SampledPotential shape(m, *grid, exponent, std::vector<double>(count, 0.0));
  std::vector<double> values(count, 0.0);
  std::vector<bool> seen(count, false);
  std::size_t filled = 0;
  std::vector<double> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    cells.clear();
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(parse_real(line.substr(start, comma - start), where()));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != width) {
      bad(where() + ": expected " + std::to_string(width) + " columns, got " + std::to_string(cells.size()));
    }
    const double value = cells.back();
    cells.pop_back();
    Point x = m.kind == ManifoldKind::Torus ? Point(TorusPoint(cells)) : Point(SpherePoint(cells));
    const long index = shape.node_index(x);
    if (index < 0) bad(where() + ": coordinates are not a node of the " + std::to_string(*grid) + " grid");
    const auto i = static_cast<std::size_t>(index);
    if (seen[i]) bad(where() + ": node listed twice");
    seen[i] = true;
    values[i] = value;
    ++filled;
  }
  if (filled != count) {
    bad(source + ": " + std::to_string(filled) + " grid rows, expected " + std::to_string(count));
  }
  return SampledPotential(m, *grid, exponent, std::move(values));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot write file");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wpot

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpot/fourier.hpp"
#include "wpot/manifold.hpp"
#include "wpot/measure.hpp"
#include "wpot/potential.hpp"
#include "wpot/recovery.hpp"
#include "wpot/transport.hpp"
#include "wpot/verify.hpp"

namespace wpot {

using nlohmann::json;

/// Malformed JSON or CSV input. Messages carry the source name and line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text; syntax errors become InputError with a line number.
json parse_json(const std::string& text, const std::string& source);

/// Pretty-printed JSON with a trailing newline. Floating-point numbers are
/// written with 17 significant digits, so output is deterministic and lossless.
std::string dump_json(const json& j);

json point_to_json(const Point& x);
Point point_from_json(const json& j, const Manifold& m);

json measure_to_json(const DiscreteMeasure& mu);

struct MeasureReadOptions {
  /// Drop atoms of weight exactly zero instead of rejecting them.
  bool drop_zero_weights = false;
};

/// Reads {"manifold": "torus"|"sphere", "n": int, "support": [[...]], "weights": [...]}
/// and validates it. Notes about dropped atoms are appended to `warnings`.
DiscreteMeasure measure_from_json(const json& j, const MeasureReadOptions& opts = {},
                                  std::vector<std::string>* warnings = nullptr);

json isometry_to_json(const Isometry& psi);
Isometry isometry_from_json(const json& j);

/// {"p", "distance", "cost", "coupling": [[i, j, mass], ...]} with the nonzero entries.
json transport_to_json(const TransportResult& r);

json recovery_to_json(const RecoveryResult& r);
json marginals_to_json(const std::vector<DiscreteMeasure>& marginals);

json spectrum_to_json(const SpectrumReport& r);
/// Header "j,value,is_zero", one row per frequency.
std::string spectrum_to_csv(const SpectrumReport& r);

json suite_report_to_json(const SuiteReport& r);

/// Sampled potential as CSV: a metadata comment
/// "# manifold=torus n=2 p=1.5 grid=512", a header row "x0,...,value" and one
/// row per node (node order) with coordinates and value at 17 significant digits.
std::string potential_to_csv(const SampledPotential& g);

/// Reads the format above. Rows may come in any order but every node must
/// appear exactly once. When the metadata line has no p, `p` must be given;
/// when both are present they must agree.
SampledPotential potential_from_csv(std::istream& in, const std::string& source,
                                    std::optional<double> p = std::nullopt);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and a rename.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wpot

#pragma once

#include "coisocalc/polycalc.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coisocalc::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Manifest rejection with a 1-based source location (0 when unknown).
class ManifestError : public std::runtime_error {
 public:
  ManifestError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return msg_; }

 private:
  int line_, column_;
  std::string msg_;
};

/// Command and manifest do not fit together.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result failed an internal consistency check.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decoded manifest. Multivector and form components are stored with sorted indices.
struct Manifest {
  std::optional<int> n;
  int codim = 0;
  PVF poisson;
  std::optional<int> degree, order, arity, cap;
  std::optional<PVF> multivector;     // lp-differential input
  std::optional<std::vector<Form>> forms;  // anchor, koszul, h-check inputs
  std::optional<PVF> first_order;     // mc-extend normal vector field
  std::optional<std::string> fixture;  // path of a fixture document

  CoisoSetup setup() const;
  bool operator==(const Manifest& o) const;
};

/// Parses a YAML (or JSON) manifest document.
Manifest parse_manifest(const std::string& text);

/// Canonical JSON text: sorted keys, normalized indices, printed polynomials.
std::string serialize(const Manifest& m);
nlohmann::json manifest_json(const Manifest& m);

const std::vector<std::string>& commands();

/// Runs one subcommand; fixture paths are resolved against base_dir.
nlohmann::json run(const std::string& command, const Manifest& m, const std::string& base_dir = ".");

/// Deterministic report text.
std::string render(const nlohmann::json& report);

}  // namespace coisocalc::cli

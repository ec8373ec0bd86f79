#pragma once

// The fixed verification suite behind `polyharm verify-paper`, and JSON
// serialization of the report types.

#include "polyharm/almansi.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace polyharm {

enum class CheckVerdict { Pass, Fail, EvidenceOnly };

std::string_view check_verdict_name(CheckVerdict v);

struct Witness {
  Assignment point;
  double value = 0;
};

struct CheckRecord {
  std::string id;
  std::string anchor;
  CheckVerdict verdict = CheckVerdict::Pass;
  /// Largest |residual| over the residuals that must vanish.
  double max_abs_residual = 0;
  /// First non-zero witness seen, expected or not.
  std::optional<Witness> witness;
  double ms = 0;
  /// Human-readable lines; not part of the JSON report.
  std::vector<std::string> notes;
};

struct VerifyOptions {
  std::uint64_t seed = ZeroTestConfig{}.seed;
  /// Check id whose must-vanish residuals get a constant 1/1000 added.
  std::optional<std::string> inject_fault;
};

/// (id, anchor) in report order.
const std::vector<std::pair<std::string, std::string>>& verify_check_ids();

std::vector<CheckRecord> run_verify_suite(const VerifyOptions& options = {});

/// 0 when every pass-type check passed, 1 otherwise.
int verify_exit_code(const std::vector<CheckRecord>& records);

/// Random polynomial in the coordinates of g: `terms` monomials of total
/// degree <= max_degree with non-zero integer coefficients in [-5, 5].
Expression random_polynomial(const SemiEuclidean& g, int max_degree, int terms, std::mt19937_64& rng);

/// Total degree of a polynomial expression (simplified form).
int polynomial_degree(const Expression& e);

nlohmann::ordered_json to_json(const ZeroVerdict& v);
nlohmann::ordered_json to_json(const HarmonicityReport& report);
nlohmann::ordered_json to_json(const ProbeReport& report);
nlohmann::ordered_json verify_report_json(const std::vector<CheckRecord>& records, std::uint64_t seed);

}  // namespace polyharm

#ifndef SZEGO_ACCEPTANCE_HPP
#define SZEGO_ACCEPTANCE_HPP

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace szego {

struct AcceptanceOptions {
    bool quick = false; ///< shorter horizons and smaller sweeps, same thresholds
    std::uint64_t seed = 42;
    unsigned jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; ///< one line, human readable
    double seconds = 0.0;
    nlohmann::json metrics;
};

inline constexpr int kCriterionCount = 12;

/// Runs criterion `id` (1..12). Library errors become a failed result.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// All criteria, fanned out over opts.jobs workers, in criterion order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// "PASS  3 conservation: ..." style line.
std::string format_line(const CriterionResult& r);

void to_json(nlohmann::json& j, const CriterionResult& r);

/// Sweep of E <= Q^2 (Q + M) / 2 over seeded random states, and equality on
/// geometric states lambda / (1 - p z).
struct GnReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0; ///< max E / bound over the random states
    std::size_t equality_samples = 0;
    double equality_max_dev = 0.0; ///< max |E / bound - 1| over geometric states
    std::uint64_t seed = 0;
};

GnReport gn_sweep(std::size_t samples, std::size_t equality_samples, std::uint64_t seed,
                  std::size_t max_trunc = 32, unsigned jobs = 1);

void to_json(nlohmann::json& j, const GnReport& r);

} // namespace szego

#endif

#ifndef SZEGO_IO_HPP
#define SZEGO_IO_HPP

#include "szego/dynamics.hpp"
#include "szego/operators.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>

namespace szego {

/// Columns t,Q,M,E,absJ,k2_eig_1..k2_eig_k. Lines starting with '#' carry
/// the seed and free-form metadata.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj, std::size_t k2_columns = 8,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// One {"t": ..., "state": {...}} object per line.
void write_snapshots_jsonl(std::ostream& out, const TrajectoryRecord& traj);

void to_json(nlohmann::json& j, const SpectralReport& report);
void to_json(nlohmann::json& j, const LaxResidual& lax);
void to_json(nlohmann::json& j, const AuMinusDReport& report);
void to_json(nlohmann::json& j, const DriftReport& drift);

} // namespace szego

#endif

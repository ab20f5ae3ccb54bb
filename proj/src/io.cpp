#include "szego/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace szego {

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj, std::size_t k2_columns,
                          std::optional<std::uint64_t> seed)
{
    if (seed) {
        out << "# seed=" << *seed << '\n';
    }
    out << "# steps=" << traj.steps << " step=" << std::setprecision(17) << traj.step << '\n';
    out << "t,Q,M,E,absJ";
    for (std::size_t i = 1; i <= k2_columns; ++i) {
        out << ",k2_eig_" << i;
    }
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const auto& inv = traj.invariants[s];
        out << traj.times[s] << ',' << inv.Q << ',' << inv.M << ',' << inv.E << ',' << std::abs(inv.J);
        for (std::size_t i = 0; i < k2_columns; ++i) {
            out << ',';
            if (s < traj.k2_spectra.size() && i < traj.k2_spectra[s].size()) {
                out << traj.k2_spectra[s][i];
            }
        }
        out << '\n';
    }
}

void write_snapshots_jsonl(std::ostream& out, const TrajectoryRecord& traj)
{
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        out << nlohmann::json{{"t", traj.times[s]}, {"state", traj.states[s]}}.dump() << '\n';
    }
}

void to_json(nlohmann::json& j, const SpectralReport& report)
{
    nlohmann::json dominance = nlohmann::json::array();
    for (const auto& d : report.dominance) {
        dominance.push_back({{"value", d.value},
                             {"label", d.label == Dominance::H ? "H" : "K"},
                             {"dim_E", d.dim_E},
                             {"dim_F", d.dim_F},
                             {"overlap_E", d.overlap_E},
                             {"overlap_F", d.overlap_F},
                             {"consistent", d.consistent}});
    }
    nlohmann::json spaces = nlohmann::json::array();
    for (const auto& s : report.k_spaces) {
        spaces.push_back({{"value", s.value}, {"dim_F", s.basis_F.cols()}, {"u_sigma", s.projection}});
    }
    j = nlohmann::json{{"h2_eigs", report.h2_eigs},
                       {"k2_eigs", report.k2_eigs},
                       {"rank_H", report.rank_H},
                       {"rank_K", report.rank_K},
                       {"dominance", dominance},
                       {"k_spaces", spaces},
                       {"kernel_projection", report.kernel_projection},
                       {"unresolved", report.unresolved},
                       {"tol", report.tol}};
}

void to_json(nlohmann::json& j, const LaxResidual& lax)
{
    j = nlohmann::json{{"block", lax.block},   {"k_block", lax.k_block}, {"h_block", lax.h_block},
                       {"k_full", lax.k_full}, {"h_full", lax.h_full}};
}

void to_json(nlohmann::json& j, const AuMinusDReport& report)
{
    nlohmann::json sigmas = nlohmann::json::array();
    for (const auto& s : report.sigmas) {
        sigmas.push_back({{"value", s.value},
                          {"n_sigma", s.n_sigma},
                          {"eigenvalue", s.eigenvalue},
                          {"eigen_residual", s.eigen_residual},
                          {"zeta_re", s.zeta.real()},
                          {"zeta_im", s.zeta.imag()},
                          {"parallel_residual", s.parallel_residual},
                          {"ladder", s.ladder},
                          {"ladder_ok", s.ladder_ok},
                          {"mean_identity_residual", s.mean_identity_residual}});
    }
    j = nlohmann::json{{"varpi", report.varpi},
                       {"n_poles", report.n_poles},
                       {"mass_identity_residual", report.mass_identity_residual},
                       {"sigmas", sigmas}};
}

void to_json(nlohmann::json& j, const DriftReport& drift)
{
    j = nlohmann::json{{"Q", drift.Q}, {"M", drift.M}, {"E", drift.E}};
}

} // namespace szego

#include "szego/io.hpp"
#include "szego/v3_reduced.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

using namespace szego;

namespace {

TrajectoryRecord small_run()
{
    SimulationConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_final = 0.05;
    cfg.trunc = 32;
    cfg.monitor_stride = 2;
    cfg.spectrum_block = 16;
    return integrate(embed({cplx(0.3, 0.1), 1.0, 0.4}, 32), cfg);
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST(Csv, HeaderAndRows)
{
    const auto traj = small_run();
    std::ostringstream out;
    write_trajectory_csv(out, traj, 3, 42);
    const auto ls = lines(out.str());
    ASSERT_GE(ls.size(), 3u);
    EXPECT_EQ(ls[0], "# seed=42");
    std::size_t header = 0;
    while (ls[header].starts_with("#")) {
        ++header;
    }
    EXPECT_EQ(ls[header], "t,Q,M,E,absJ,k2_eig_1,k2_eig_2,k2_eig_3");
    EXPECT_EQ(ls.size() - header - 1, traj.times.size());
    for (std::size_t i = header + 1; i < ls.size(); ++i) {
        EXPECT_EQ(std::count(ls[i].begin(), ls[i].end(), ','), 7);
    }
}

TEST(Csv, Deterministic)
{
    std::ostringstream a;
    std::ostringstream b;
    write_trajectory_csv(a, small_run());
    write_trajectory_csv(b, small_run());
    EXPECT_EQ(a.str(), b.str());
}

TEST(Jsonl, OneObjectPerSnapshot)
{
    const auto traj = small_run();
    std::ostringstream out;
    write_snapshots_jsonl(out, traj);
    const auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), traj.times.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const auto j = nlohmann::json::parse(ls[i]);
        EXPECT_DOUBLE_EQ(j.at("t").get<double>(), traj.times[i]);
        EXPECT_TRUE(approx_equal(j.at("state").get<HardyCoefficients>(), traj.states[i], 0.0));
    }
}

TEST(Json, Reports)
{
    const auto u = embed({cplx(0.3, 0.1), 1.0, 0.4}, 64);
    const nlohmann::json s = spectral_report(u);
    EXPECT_TRUE(s.is_object());
    const nlohmann::json l = verify_lax(u, 32);
    EXPECT_TRUE(l.contains("k_block"));
    const nlohmann::json d = small_run().drift;
    EXPECT_TRUE(d.contains("Q"));
}

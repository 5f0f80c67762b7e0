#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "purify/engine.hpp"
#include "purify/protocols.hpp"

namespace purify {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of one generator word;
// bit-identical on every platform, unlike uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Counter-based stream: sample i at grid point g draws from a generator
// keyed on (seed, g, i) alone. Any partition of the sample budget across
// workers, and every protocol sharing a grid point, sees identical states.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t grid_index,
                                     std::uint64_t sample_index) {
    std::uint64_t key = detail::splitmix64(seed);
    key = detail::splitmix64(key ^ grid_index);
    key = detail::splitmix64(key ^ sample_index);
    return std::mt19937_64(key);
}

// Fixed fidelity a0; (b, c, d) flat on the remaining simplex
// {b,c,d >= 0, b+c+d = 1-a0} via sorted-uniform spacings.
inline BellDiagonalState sample_at_fidelity(double a0, std::mt19937_64& rng) {
    if (!(a0 > 0.0 && a0 < 1.0)) {
        throw std::invalid_argument("a0 must lie strictly inside (0, 1), got " + fmt(a0));
    }
    double u = detail::uniform_unit(rng);
    double v = detail::uniform_unit(rng);
    if (u > v) {
        std::swap(u, v);
    }
    const double rest = 1.0 - a0;
    return make_state(a0, u * rest, (v - u) * rest, (1.0 - v) * rest);
}

// Flat over the whole simplex {a+b+c+d = 1}.
inline BellDiagonalState random_simplex_state(std::mt19937_64& rng) {
    double u[3] = {detail::uniform_unit(rng), detail::uniform_unit(rng),
                   detail::uniform_unit(rng)};
    std::sort(u, u + 3);
    return make_state(u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]);
}

struct SweepConfig {
    std::vector<std::string> protocols;
    std::vector<double> fidelity_grid;
    int samples_per_point = 10000;
    int rounds = 1;
    std::uint64_t seed = 1;
    bool all_rounds = false;  // emit every round instead of only the final one
    unsigned threads = 0;     // 0 = pick from PURIFY_THREADS or hardware
};

struct SweepRow {
    std::string protocol;
    double a0 = 0.0;
    int r = 0;
    double mean_Y = 0.0;
    double mean_purity = 0.0;  // mean a_r
    double mean_S = 0.0;
    double mean_Y_improved = 0.0;
    long n = 0;
    std::uint64_t seed = 0;
};

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("PURIFY_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace detail {

struct SweepAccumulator {
    // index r in [0, rounds]; sums over samples of Y, a, S, Yp
    std::vector<std::array<double, 4>> sums;
};

}  // namespace detail

// Runs every (protocol, a0) cell of the config and averages the trajectory
// metrics over the sample set. Rows come out ordered by (protocol, a0) in
// config order; identical configs reproduce identical rows bit for bit
// regardless of thread count.
inline std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    if (cfg.protocols.empty()) {
        throw std::invalid_argument("sweep needs at least one protocol");
    }
    if (cfg.fidelity_grid.empty()) {
        throw std::invalid_argument("sweep needs a non-empty fidelity grid");
    }
    for (const double a0 : cfg.fidelity_grid) {
        if (!(a0 > 0.5 && a0 < 1.0)) {
            throw std::invalid_argument("grid value " + fmt(a0) +
                                        " outside the distillable range (0.5, 1)");
        }
    }
    if (cfg.samples_per_point < 1) {
        throw std::invalid_argument("samples_per_point must be >= 1");
    }
    if (cfg.rounds < 1) {
        throw std::invalid_argument("rounds must be >= 1");
    }
    std::vector<ProtocolSchedule> schedules;
    schedules.reserve(cfg.protocols.size());
    for (const std::string& name : cfg.protocols) {
        schedules.push_back(schedule_by_name(name));  // rejects unknown names
    }

    const std::size_t grid_size = cfg.fidelity_grid.size();
    const std::size_t task_count = schedules.size() * grid_size;
    std::vector<detail::SweepAccumulator> acc(task_count);

    const auto run_task = [&](std::size_t task) {
        const std::size_t proto = task / grid_size;
        const std::size_t grid = task % grid_size;
        const double a0 = cfg.fidelity_grid[grid];
        auto& sums = acc[task].sums;
        sums.assign(static_cast<std::size_t>(cfg.rounds) + 1, {0.0, 0.0, 0.0, 0.0});
        for (int i = 0; i < cfg.samples_per_point; ++i) {
            std::mt19937_64 rng = sample_stream(cfg.seed, grid, static_cast<std::uint64_t>(i));
            const BellDiagonalState s0 = sample_at_fidelity(a0, rng);
            const std::vector<TrajectoryRecord> records = run(schedules[proto], s0, cfg.rounds);
            for (std::size_t r = 0; r < records.size(); ++r) {
                sums[r][0] += records[r].Y;
                sums[r][1] += records[r].state.a;
                sums[r][2] += records[r].S;
                sums[r][3] += records[r].Yp;
            }
        }
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads : default_thread_count();
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, task_count));
    if (workers <= 1) {
        for (std::size_t t = 0; t < task_count; ++t) {
            run_task(t);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < task_count; t += workers) {
                    run_task(t);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }

    std::vector<SweepRow> rows;
    const double n = static_cast<double>(cfg.samples_per_point);
    for (std::size_t task = 0; task < task_count; ++task) {
        const std::size_t proto = task / grid_size;
        const std::size_t grid = task % grid_size;
        const int r_first = cfg.all_rounds ? 0 : cfg.rounds;
        for (int r = r_first; r <= cfg.rounds; ++r) {
            const auto& s = acc[task].sums[static_cast<std::size_t>(r)];
            rows.push_back({cfg.protocols[proto], cfg.fidelity_grid[grid], r, s[0] / n,
                            s[1] / n, s[2] / n, s[3] / n, cfg.samples_per_point, cfg.seed});
        }
    }
    return rows;
}

// Sweep CSV: one comment line echoing the full config (seed included), a
// header row, then the rows.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                            const SweepConfig& cfg) {
    os << "# protocols=";
    for (std::size_t i = 0; i < cfg.protocols.size(); ++i) {
        os << (i ? "," : "") << cfg.protocols[i];
    }
    os << " grid=";
    for (std::size_t i = 0; i < cfg.fidelity_grid.size(); ++i) {
        os << (i ? "," : "") << fmt(cfg.fidelity_grid[i]);
    }
    os << " samples=" << cfg.samples_per_point << " rounds=" << cfg.rounds
       << " seed=" << cfg.seed << " all_rounds=" << (cfg.all_rounds ? "true" : "false")
       << " sampling=flat-simplex-at-fixed-a0\n";
    os << "protocol,a0,r,mean_Y,mean_purity,mean_S,mean_Y_improved,n,seed\n";
    for (const SweepRow& row : rows) {
        os << row.protocol << ',' << fmt(row.a0) << ',' << row.r << ',' << fmt(row.mean_Y)
           << ',' << fmt(row.mean_purity) << ',' << fmt(row.mean_S) << ','
           << fmt(row.mean_Y_improved) << ',' << row.n << ',' << row.seed << "\n";
    }
}

}  // namespace purify

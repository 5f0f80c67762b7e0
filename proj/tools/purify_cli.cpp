// purify: entanglement-purification recurrence simulator.
//
// Verbs: step (one closed-form map application), run (trajectory CSV),
// sweep (Monte Carlo averages over a fidelity grid), basin (attractor
// classification over a simplex grid), oracle-check (closed forms vs the
// exact circuit). Data goes to stdout or --out files; diagnostics to stderr.
//
// Exit codes: 0 success, 1 check failure, 2 input error, 3 degenerate
// round, 4 I/O error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "purify/purify.hpp"

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerateRound = 3;
constexpr int kExitIoError = 4;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, sep)) {
        parts.push_back(token);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

purify::MapKind parse_map_kind(const std::string& name) {
    if (name == "qpa") return purify::MapKind::Qpa;
    if (name == "xh") return purify::MapKind::Xh;
    throw std::invalid_argument("map: expected qpa or xh, got \"" + name + "\"");
}

std::vector<purify::UnitaryParams> parse_theta_phi(const std::string& text) {
    std::vector<purify::UnitaryParams> seq;
    const std::vector<std::string> pairs = split(text, ',');
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::size_t colon = pairs[i].find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("theta-phi pair " + std::to_string(i + 1) +
                                        ": expected theta:phi in radians, got \"" + pairs[i] +
                                        "\"");
        }
        const std::string label = "theta-phi pair " + std::to_string(i + 1);
        seq.push_back({purify::parse_double(pairs[i].substr(0, colon), label + " theta"),
                       purify::parse_double(pairs[i].substr(colon + 1), label + " phi")});
    }
    return seq;
}

std::vector<double> parse_grid(const std::string& range) {
    const std::vector<std::string> parts = split(range, ':');
    if (parts.size() != 3) {
        throw std::invalid_argument("grid: expected START:STOP:STEP, got \"" + range + "\"");
    }
    const double start = purify::parse_double(parts[0], "grid start");
    const double stop = purify::parse_double(parts[1], "grid stop");
    const double step = purify::parse_double(parts[2], "grid step");
    if (step <= 0.0) {
        throw std::invalid_argument("grid step must be positive");
    }
    if (stop < start) {
        throw std::invalid_argument("grid stop must not precede start");
    }
    const int count = static_cast<int>((stop - start) / step + 1e-9) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid.push_back(start + static_cast<double>(i) * step);
    }
    return grid;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open output file \"" + path + "\"");
    }
    return out;
}

std::string trimmed(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// Plain key=value config file for the sweep verb. '#' starts a comment.
// Values only fill options the command line left unset: flags win.
void apply_sweep_config(const std::string& path, const CLI::App& cmd,
                        std::string& protocols, std::string& grid,
                        purify::SweepConfig& cfg, std::string& out_path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot read config file \"" + path + "\"");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trimmed(line.substr(0, line.find('#')));
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key=value, got \"" + stripped + "\"");
        }
        const std::string key = trimmed(stripped.substr(0, eq));
        const std::string value = trimmed(stripped.substr(eq + 1));
        const auto flag_given = [&](const char* flag) { return cmd.count(flag) > 0; };
        if (key == "protocols") {
            if (!flag_given("--protocols")) protocols = value;
        } else if (key == "grid") {
            if (!flag_given("--grid")) grid = value;
        } else if (key == "samples") {
            if (!flag_given("--samples"))
                cfg.samples_per_point = static_cast<int>(purify::parse_double(value, "samples"));
        } else if (key == "rounds") {
            if (!flag_given("--rounds"))
                cfg.rounds = static_cast<int>(purify::parse_double(value, "rounds"));
        } else if (key == "seed") {
            if (!flag_given("--seed"))
                cfg.seed = static_cast<std::uint64_t>(purify::parse_double(value, "seed"));
        } else if (key == "all-rounds") {
            if (!flag_given("--all-rounds")) cfg.all_rounds = value == "true" || value == "1";
        } else if (key == "threads") {
            if (!flag_given("--threads"))
                cfg.threads = static_cast<unsigned>(purify::parse_double(value, "threads"));
        } else if (key == "out") {
            if (!flag_given("--out")) out_path = value;
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key \"" + key + "\"");
        }
    }
}

void flush_or_throw(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw io_error("write to \"" + path + "\" failed");
    }
}

int cmd_step(const std::string& map_name, const std::string& state_text) {
    const purify::MapKind kind = parse_map_kind(map_name);
    const purify::BellDiagonalState s = purify::parse_state(state_text);
    const purify::StepResult result = purify::apply_map(kind, s);
    std::cout << "a,b,c,d,p\n"
              << purify::format_state(result.state) << ',' << purify::fmt(result.p) << "\n";
    return 0;
}

int cmd_run(const std::string& protocol, const std::string& state_text, int rounds,
            const std::string& theta_phi) {
    purify::ProtocolSchedule sched;
    if (protocol == "custom") {
        if (theta_phi.empty()) {
            throw std::invalid_argument("--protocol custom requires --theta-phi");
        }
        sched = purify::custom(parse_theta_phi(theta_phi));
    } else {
        if (!theta_phi.empty()) {
            throw std::invalid_argument("--theta-phi only applies to --protocol custom");
        }
        sched = purify::schedule_by_name(protocol);
    }
    const purify::BellDiagonalState s0 = purify::parse_state(state_text);
    const std::vector<purify::TrajectoryRecord> records = purify::run(sched, s0, rounds);
    purify::write_trajectory_csv(std::cout, records);
    if (protocol == "custom") {
        for (const purify::TrajectoryRecord& rec : records) {
            if (rec.r > 0) {
                std::cerr << "round " << rec.r
                          << ": max Bell-basis off-diagonal " << purify::fmt(rec.max_offdiag)
                          << "\n";
            }
        }
    }
    return 0;
}

int cmd_sweep(const purify::SweepConfig& cfg, const std::string& out_path) {
    const std::vector<purify::SweepRow> rows = purify::sweep(cfg);
    std::ofstream out = open_output(out_path);
    purify::write_sweep_csv(out, rows, cfg);
    flush_or_throw(out, out_path);
    return 0;
}

int cmd_basin(const std::string& map_name, int resolution, double tol, double period_tol,
              int max_iter, const std::string& out_path) {
    const purify::MapKind kind = parse_map_kind(map_name);
    if (resolution < 2) {
        throw std::invalid_argument("resolution must be >= 2");
    }
    const purify::ProtocolSchedule sched =
        kind == purify::MapKind::Qpa ? purify::qpa_only() : purify::xh_only();
    std::ofstream out = open_output(out_path);
    out << "# basin map=" << map_name << " resolution=" << resolution << " tol="
        << purify::fmt(tol) << " period_tol=" << purify::fmt(period_tol)
        << " max_iter=" << max_iter << "\n";
    out << "a,b,c,d,class\n";
    const int k = resolution;
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; i + j <= k; ++j) {
            for (int m = 0; i + j + m <= k; ++m) {
                const int l = k - i - j - m;
                // restrict to D_abcd: some weight strictly above 1/2
                if (2 * std::max(std::max(i, j), std::max(m, l)) <= k) {
                    continue;
                }
                const purify::BellDiagonalState s = purify::make_state(
                    static_cast<double>(i) / k, static_cast<double>(j) / k,
                    static_cast<double>(m) / k, static_cast<double>(l) / k);
                const purify::AttractorClass cls =
                    purify::classify_attractor(sched, s, tol, period_tol, max_iter);
                out << purify::format_state(s) << ',' << purify::to_string(cls) << "\n";
            }
        }
    }
    flush_or_throw(out, out_path);
    return 0;
}

int cmd_oracle_check(int trials, std::uint64_t seed, bool inject_fault) {
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    constexpr double threshold = 1e-10;
    const double half_pi = std::numbers::pi / 2.0;
    double max_residual = 0.0;
    purify::BellDiagonalState worst_state;
    const char* worst_map = "";

    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const purify::BellDiagonalState s = purify::random_simplex_state(rng);
        const struct {
            const char* name;
            double phi;
            purify::StepResult closed;
        } cases[2] = {{"qpa", half_pi, purify::qpa_step(s)},
                      {"xh", 0.0, purify::xh_step(s)}};
        for (const auto& c : cases) {
            const purify::LoccOutcome outcome = purify::locc_round(s, half_pi, c.phi);
            const purify::BellDiagonalReadout readout =
                purify::bell_diagonal_of(outcome.survivor);
            purify::StepResult closed = c.closed;
            if (inject_fault && t == 0) {
                closed.state.a += 1e-6;
            }
            double residual = std::abs(readout.state.a - closed.state.a);
            residual = std::max(residual, std::abs(readout.state.b - closed.state.b));
            residual = std::max(residual, std::abs(readout.state.c - closed.state.c));
            residual = std::max(residual, std::abs(readout.state.d - closed.state.d));
            residual = std::max(residual, std::abs(outcome.p - closed.p));
            residual = std::max(residual, readout.max_offdiag);
            if (residual > max_residual) {
                max_residual = residual;
                worst_state = s;
                worst_map = c.name;
            }
        }
    }

    std::cout << "# oracle-check trials=" << trials << " seed=" << seed << "\n";
    std::cout << "max_residual=" << purify::fmt(max_residual) << "\n";
    if (max_residual < threshold) {
        std::cout << "PASS (threshold " << purify::fmt(threshold) << ")\n";
        return 0;
    }
    std::cout << "worst_state=" << purify::format_state(worst_state) << "\n";
    std::cout << "worst_map=" << worst_map << "\n";
    std::cout << "FAIL (threshold " << purify::fmt(threshold) << ")\n";
    return kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "purify: Bell-diagonal entanglement-purification simulator.\n"
        "CSV data goes to stdout or --out; diagnostics go to stderr."};
    app.require_subcommand(1);

    // step
    auto* step = app.add_subcommand("step", "apply one closed-form purification map");
    std::string step_map;
    std::string step_state;
    step->add_option("--map", step_map, "map kind: qpa or xh")->required();
    step->add_option("--state", step_state, "Bell-diagonal state a,b,c,d")->required();

    // run
    auto* run = app.add_subcommand("run", "run a protocol trajectory, CSV to stdout");
    std::string run_protocol;
    std::string run_state;
    int run_rounds = 0;
    std::string run_theta_phi;
    run->add_option("--protocol", run_protocol,
                    "ibm, oxford, xh, tm1, tm2 or custom")
        ->required();
    run->add_option("--state", run_state, "Bell-diagonal state a,b,c,d")->required();
    run->add_option("--rounds", run_rounds, "number of purification rounds (>= 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    run->add_option("--theta-phi", run_theta_phi,
                    "custom schedule: comma-separated theta:phi pairs in radians");

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Monte Carlo averages over a fidelity grid, CSV to --out");
    std::string sweep_protocols = "tm1,oxford";
    std::string sweep_grid = "0.51:0.99:0.01";
    purify::SweepConfig sweep_cfg;
    sweep_cfg.rounds = 0;  // must come from a flag or the config file
    std::string sweep_out;
    sweep_cmd->add_option("--protocols", sweep_protocols,
                          "comma-separated protocol names");
    sweep_cmd->add_option("--grid", sweep_grid, "initial fidelities START:STOP:STEP");
    std::string sweep_config_path;
    sweep_cmd->add_option("--samples", sweep_cfg.samples_per_point,
                          "random states per grid point");
    sweep_cmd->add_option("--rounds", sweep_cfg.rounds, "purification rounds (>= 1)");
    sweep_cmd->add_option("--seed", sweep_cfg.seed, "base RNG seed, echoed in the output");
    sweep_cmd->add_flag("--all-rounds", sweep_cfg.all_rounds,
                        "emit one row per round instead of the final round only");
    sweep_cmd->add_option("--threads", sweep_cfg.threads,
                          "worker threads, 0 = auto")
        ->envname("PURIFY_THREADS");
    sweep_cmd->add_option("--out", sweep_out, "output CSV path");
    sweep_cmd->add_option("--config", sweep_config_path,
                          "plain key=value file with these options; flags win");

    // basin
    auto* basin = app.add_subcommand(
        "basin", "classify attractors over a simplex grid, CSV to --out");
    std::string basin_map;
    int basin_resolution = 0;
    double basin_tol = 1e-6;
    double basin_period_tol = 1e-3;
    int basin_max_iter = 200;
    std::string basin_out;
    basin->add_option("--map", basin_map, "map kind: qpa or xh")->required();
    basin->add_option("--resolution", basin_resolution, "simplex grid resolution (>= 2)")
        ->required();
    basin->add_option("--tol", basin_tol, "fixed-point tolerance");
    basin->add_option("--period-tol", basin_period_tol, "period-2 tolerance");
    basin->add_option("--max-iter", basin_max_iter, "iteration cap");
    basin->add_option("--out", basin_out, "output CSV path")->required();

    // oracle-check
    auto* oracle_check = app.add_subcommand(
        "oracle-check", "compare closed-form maps against the exact circuit");
    int oc_trials = 1000;
    std::uint64_t oc_seed = 1;
    bool oc_inject = false;
    oracle_check->add_option("--trials", oc_trials, "number of random states");
    oracle_check->add_option("--seed", oc_seed, "RNG seed, echoed in the report");
    oracle_check->add_flag("--inject-fault", oc_inject)->group("");  // testing aid

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (step->parsed()) {
            return cmd_step(step_map, step_state);
        }
        if (run->parsed()) {
            return cmd_run(run_protocol, run_state, run_rounds, run_theta_phi);
        }
        if (sweep_cmd->parsed()) {
            if (!sweep_config_path.empty()) {
                apply_sweep_config(sweep_config_path, *sweep_cmd, sweep_protocols,
                                   sweep_grid, sweep_cfg, sweep_out);
            }
            if (sweep_cfg.rounds < 1) {
                throw std::invalid_argument("sweep needs --rounds >= 1 (flag or config)");
            }
            if (sweep_out.empty()) {
                throw std::invalid_argument("sweep needs --out (flag or config)");
            }
            sweep_cfg.protocols = split(sweep_protocols, ',');
            sweep_cfg.fidelity_grid = parse_grid(sweep_grid);
            return cmd_sweep(sweep_cfg, sweep_out);
        }
        if (basin->parsed()) {
            return cmd_basin(basin_map, basin_resolution, basin_tol, basin_period_tol,
                             basin_max_iter, basin_out);
        }
        if (oracle_check->parsed()) {
            return cmd_oracle_check(oc_trials, oc_seed, oc_inject);
        }
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const purify::degenerate_round_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateRound;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return 0;
}

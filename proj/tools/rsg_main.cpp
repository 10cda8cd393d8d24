#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsg/best_response.hpp"
#include "rsg/closed_form.hpp"
#include "rsg/csv.hpp"
#include "rsg/game.hpp"
#include "rsg/hypersimplex.hpp"
#include "rsg/maximin.hpp"
#include "rsg/online.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::vector<double> means;
    int players = 2;
    int picks = 1;
    std::optional<double> cap;
    std::string method = "auto";
    double eps = 1e-2;
    double grid_resolution = 1e-2;
    double e1_start = 0.0, e1_stop = 0.0, e1_step = 0.0;
    bool has_sweep_range = false;
    int horizon = 1000;
    std::vector<std::uint64_t> seeds;
    std::string noise = "gaussian:1";
    std::string opponent = "none";
    std::string out_dir;
    int jobs = 1;
    std::optional<double> beta_override;
    std::optional<double> delta_override;
};

std::vector<double> parse_means(const std::string& text) {
    std::string payload = text;
    if (fs::exists(text) && fs::is_regular_file(text)) {
        std::ifstream in(text);
        std::stringstream buffer;
        buffer << in.rdbuf();
        payload = buffer.str();
    }
    for (char& ch : payload) {
        if (ch == ',' || ch == '\n' || ch == '\t') ch = ' ';
    }
    std::vector<double> means;
    std::istringstream stream(payload);
    double value = 0.0;
    while (stream >> value) means.push_back(value);
    if (means.empty()) throw UsageError("could not parse any means from: " + text);
    return means;
}

void parse_range(const std::string& text, Scenario& sc) {
    const auto parts = rsg::split_csv_line([&] {
        std::string t = text;
        std::replace(t.begin(), t.end(), ':', ',');
        return t;
    }());
    if (parts.size() != 3) throw UsageError("--e1 expects start:stop:step");
    sc.e1_start = rsg::parse_double(parts[0]);
    sc.e1_stop = rsg::parse_double(parts[1]);
    sc.e1_step = rsg::parse_double(parts[2]);
    if (!(sc.e1_step > 0.0)) throw UsageError("--e1 step must be positive");
    sc.has_sweep_range = true;
}

rsg::NoiseModel parse_noise(const std::string& text, std::uint64_t seed) {
    if (text == "none") return rsg::NoiseModel::none(seed);
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const double param =
        colon == std::string::npos ? 1.0 : rsg::parse_double(text.substr(colon + 1));
    if (kind == "gaussian") return rsg::NoiseModel::gaussian(param, seed);
    if (kind == "uniform") return rsg::NoiseModel::uniform_bounded(param, seed);
    throw UsageError("unknown noise model: " + text);
}

void load_config_file(const std::string& path, Scenario& sc) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    json cfg = json::parse(in);
    if (cfg.contains("means")) {
        if (cfg["means"].is_string())
            sc.means = parse_means(cfg["means"].get<std::string>());
        else
            sc.means = cfg["means"].get<std::vector<double>>();
    }
    if (cfg.contains("players")) sc.players = cfg["players"].get<int>();
    if (cfg.contains("picks")) sc.picks = cfg["picks"].get<int>();
    if (cfg.contains("cap")) sc.cap = cfg["cap"].get<double>();
    if (cfg.contains("method")) sc.method = cfg["method"].get<std::string>();
    if (cfg.contains("eps")) sc.eps = cfg["eps"].get<double>();
    if (cfg.contains("resolution")) sc.grid_resolution = cfg["resolution"].get<double>();
    if (cfg.contains("e1")) parse_range(cfg["e1"].get<std::string>(), sc);
    if (cfg.contains("horizon")) sc.horizon = cfg["horizon"].get<int>();
    if (cfg.contains("seeds")) {
        if (cfg["seeds"].is_array())
            sc.seeds = cfg["seeds"].get<std::vector<std::uint64_t>>();
        else {
            const int count = cfg["seeds"].get<int>();
            sc.seeds.clear();
            for (int s = 1; s <= count; ++s) sc.seeds.push_back(s);
        }
    }
    if (cfg.contains("noise")) sc.noise = cfg["noise"].get<std::string>();
    if (cfg.contains("opponent")) sc.opponent = cfg["opponent"].get<std::string>();
    if (cfg.contains("out")) sc.out_dir = cfg["out"].get<std::string>();
    if (cfg.contains("jobs")) sc.jobs = cfg["jobs"].get<int>();
    if (cfg.contains("beta")) sc.beta_override = cfg["beta"].get<double>();
    if (cfg.contains("delta")) sc.delta_override = cfg["delta"].get<double>();
}

struct Solution {
    rsg::MixedStrategy strategy;
    double value = 0.0;
    double certificate = 0.0;
    std::string method;
    std::string case_tag;
};

// Grid argmax for small n; the library grid oracle reports the value only.
Solution solve_by_grid(const rsg::GameSpec& spec, double resolution) {
    const int n = spec.resources();
    if (n > 3) throw UsageError("--method grid supports n <= 3 only");
    const int steps = static_cast<int>(std::llround(1.0 / resolution));
    Solution best;
    bool first = true;
    auto consider = [&](std::vector<double> probs) {
        rsg::MixedStrategy p(std::move(probs), spec.picks);
        const double value = rsg::greedy_min_load(p, spec).value;
        if (first || value > best.value) {
            best.value = value;
            best.strategy = std::move(p);
            first = false;
        }
    };
    if (n == 2) {
        for (int i = 0; i <= steps; ++i) {
            const double p1 = static_cast<double>(i) / steps;
            consider({p1, 1.0 - p1});
        }
    } else {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                const double p1 = static_cast<double>(i) / steps;
                const double p2 = static_cast<double>(j) / steps;
                const double p3 = spec.picks - p1 - p2;
                if (p3 < -rsg::kStrategySumTol || p3 > 1.0 + rsg::kStrategySumTol) continue;
                consider({p1, p2, std::clamp(p3, 0.0, 1.0)});
            }
        }
    }
    const double max_mean = *std::max_element(spec.means.begin(), spec.means.end());
    best.certificate = max_mean * resolution * n;
    best.method = "grid";
    best.case_tag = "grid";
    return best;
}

Solution solve_instance(const rsg::GameSpec& spec, const Scenario& sc) {
    const bool closed_applies = rsg::has_closed_form(spec);
    std::string method = sc.method;
    if (method == "auto") method = closed_applies ? "closed-form" : "gradient";
    if (method == "closed-form") {
        if (!closed_applies)
            throw UsageError("no closed form for m=" + std::to_string(spec.players) +
                             ", r=" + std::to_string(spec.picks));
        rsg::ClosedFormResult result;
        if (spec.players == 2 && spec.picks == 1) result = rsg::solve_m2_r1(spec);
        else if (spec.players == 3) result = rsg::solve_m3_r1(spec);
        else result = rsg::solve_m2_general(spec);
        Solution sol;
        sol.strategy = std::move(result.strategy);
        sol.value = result.value;
        sol.method = "closed-form";
        sol.case_tag = result.case_tag;
        sol.certificate =
            result.case_tag == "fallback"
                ? rsg::error_bound(spec, rsg::SolverConfig::epsilon_scheme(1e-3))
                : 0.0;
        return sol;
    }
    if (method == "gradient") {
        const auto cfg = rsg::SolverConfig::epsilon_scheme(sc.eps);
        rsg::MaximinResult result = rsg::solve_maximin(spec, cfg);
        return Solution{std::move(result.strategy), result.value, result.error_bound,
                        "gradient", "gradient"};
    }
    if (method == "grid") return solve_by_grid(spec, sc.grid_resolution);
    throw UsageError("unknown method: " + sc.method);
}

void validate_solution(const rsg::GameSpec& spec, const Solution& sol) {
    if (!rsg::contains(sol.strategy.probs, spec.picks, 1e-6))
        throw NumericalError("solution strategy violates the hypersimplex constraints");
    const double check = rsg::greedy_min_load(sol.strategy, spec).value;
    if (std::abs(check - sol.value) > sol.certificate + 1e-6)
        throw NumericalError("solution value certificate not met");
}

json solution_to_json(const rsg::GameSpec& spec, const Solution& sol) {
    return json{{"means", spec.means},     {"players", spec.players},
                {"picks", spec.picks},     {"method", sol.method},
                {"case", sol.case_tag},    {"value", sol.value},
                {"certificate", sol.certificate}, {"strategy", sol.strategy.probs}};
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& worker : workers) worker.join();
}

int cmd_solve(const Scenario& sc) {
    const rsg::GameSpec spec(sc.means, sc.players, sc.picks, sc.cap);
    const Solution sol = solve_instance(spec, sc);
    validate_solution(spec, sol);
    const json out = solution_to_json(spec, sol);
    std::cout << out.dump(2) << "\n";
    if (!sc.out_dir.empty()) {
        fs::create_directories(sc.out_dir);
        std::ofstream file(fs::path(sc.out_dir) / "solve.json");
        file << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_sweep(const Scenario& sc) {
    if (!sc.has_sweep_range) throw UsageError("sweep requires --e1 start:stop:step");
    std::vector<double> points;
    for (double e1 = sc.e1_start; e1 <= sc.e1_stop + 1e-12; e1 += sc.e1_step)
        points.push_back(e1);
    if (points.empty()) throw UsageError("empty sweep range");

    std::vector<std::string> rows(points.size());
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    parallel_for(static_cast<int>(points.size()), sc.jobs, [&](int i) {
        if (failed.load()) return;
        try {
            std::vector<double> means = sc.means;
            means[0] = points[i];
            const rsg::GameSpec spec(means, sc.players, sc.picks, sc.cap);
            const Solution sol = solve_instance(spec, sc);
            validate_solution(spec, sol);
            std::string row = rsg::format_double(points[i]) + "," +
                              rsg::format_double(sol.value) + "," +
                              rsg::format_double(sol.value + sol.certificate);
            for (double p : sol.strategy.probs) row += "," + rsg::format_double(p);
            rows[i] = std::move(row);
        } catch (const std::exception& err) {
            std::scoped_lock lock(failure_mutex);
            failed = true;
            failure = err.what();
        }
    });
    if (failed) throw NumericalError("sweep point failed: " + failure);

    std::ostringstream csv;
    csv << "E1,value,value_upper";
    for (size_t k = 1; k <= sc.means.size(); ++k) csv << ",p_" << k;
    csv << "\n";
    for (const auto& row : rows) csv << row << "\n";

    if (sc.out_dir.empty()) {
        std::cout << csv.str();
    } else {
        fs::create_directories(sc.out_dir);
        std::ofstream file(fs::path(sc.out_dir) / "sweep.csv", std::ios::binary);
        file << csv.str();
        std::cout << (fs::path(sc.out_dir) / "sweep.csv").string() << "\n";
    }
    return 0;
}

int cmd_simulate(const Scenario& sc) {
    if (sc.seeds.empty()) throw UsageError("simulate requires at least one seed");
    if (sc.out_dir.empty()) throw UsageError("simulate requires --out");
    const rsg::GameSpec spec(sc.means, sc.players, sc.picks, sc.cap);
    rsg::UcbParams params = rsg::UcbParams::theorem_defaults(spec, sc.horizon);
    if (sc.beta_override || sc.delta_override) {
        params = rsg::UcbParams(sc.horizon, sc.delta_override.value_or(params.confidence),
                                sc.beta_override.value_or(params.step), spec.cap);
    }
    rsg::OpponentSim opponent = rsg::OpponentSim::none;
    if (sc.opponent == "worst") opponent = rsg::OpponentSim::worst_case;
    else if (sc.opponent == "uniform") opponent = rsg::OpponentSim::uniform_random;
    else if (sc.opponent != "none") throw UsageError("unknown opponent: " + sc.opponent);

    fs::create_directories(sc.out_dir);
    const double bound = rsg::theoretical_regret_bound(spec, sc.horizon);

    std::vector<double> regrets(sc.seeds.size(), 0.0);
    std::vector<std::vector<std::string>> warnings(sc.seeds.size());
    parallel_for(static_cast<int>(sc.seeds.size()), sc.jobs, [&](int i) {
        const rsg::NoiseModel noise = parse_noise(sc.noise, sc.seeds[i]);
        const rsg::RegretTrace trace = rsg::run_ucb(spec, params, noise, opponent);
        regrets[i] = trace.records.empty() ? 0.0 : trace.records.back().cum_regret;
        warnings[i] = trace.warnings;
        std::ofstream csv(fs::path(sc.out_dir) /
                              ("trace_" + std::to_string(sc.seeds[i]) + ".csv"),
                          std::ios::binary);
        rsg::write_trace_csv(trace, csv);
        std::ofstream meta(fs::path(sc.out_dir) /
                           ("trace_" + std::to_string(sc.seeds[i]) + ".meta.json"));
        rsg::write_trace_metadata(trace, meta);
    });

    const double mean_regret =
        std::accumulate(regrets.begin(), regrets.end(), 0.0) / regrets.size();
    const double max_regret = *std::max_element(regrets.begin(), regrets.end());
    const bool bound_ok = max_regret <= bound;

    json per_seed = json::array();
    for (size_t i = 0; i < sc.seeds.size(); ++i)
        per_seed.push_back({{"seed", sc.seeds[i]}, {"regret", regrets[i]}});
    const json summary{{"horizon", sc.horizon},
                       {"seeds", sc.seeds},
                       {"noise", sc.noise},
                       {"mean_regret", mean_regret},
                       {"max_regret", max_regret},
                       {"theoretical_bound", bound},
                       {"bound_satisfied", bound_ok},
                       {"warnings", warnings.front()},
                       {"per_seed", per_seed}};
    {
        std::ofstream file(fs::path(sc.out_dir) / "summary.json");
        file << summary.dump(2) << "\n";
    }
    std::cout << summary.dump(2) << "\n";
    if (!bound_ok) throw NumericalError("empirical regret exceeded the theoretical bound");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Worst-case-optimal play for fair-reward resource-sharing games"};
    app.require_subcommand(1);

    Scenario sc;
    std::string config_path;
    std::string means_arg;
    std::string e1_arg;
    std::string seeds_arg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--means", means_arg, "comma-separated means or a file of numbers");
        cmd->add_option("--players", sc.players, "number of players m");
        cmd->add_option("--picks", sc.picks, "resources chosen per player r");
        cmd->add_option("--cap", [&sc](const CLI::results_t& res) {
            sc.cap = rsg::parse_double(res[0]);
            return true;
        }, "upper bound C on the means");
        cmd->add_option("--method", sc.method, "auto|closed-form|gradient|grid");
        cmd->add_option("--eps", sc.eps, "gradient accuracy target");
        cmd->add_option("--resolution", sc.grid_resolution, "grid spacing");
        cmd->add_option("--out", sc.out_dir, "output directory");
        cmd->add_option("--jobs", sc.jobs, "max concurrent workers");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one instance");
    add_common(solve);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep E1 over a range");
    add_common(sweep);
    sweep->add_option("--e1", e1_arg, "sweep range start:stop:step");

    CLI::App* simulate = app.add_subcommand("simulate", "run online UCB experiments");
    add_common(simulate);
    simulate->add_option("--horizon", sc.horizon, "number of time slots T");
    simulate->add_option("--seeds", seeds_arg, "seed count k (seeds 1..k) or comma list");
    simulate->add_option("--noise", sc.noise, "none|gaussian:sigma|uniform:w");
    simulate->add_option("--opponent", sc.opponent,
                         "none|worst|uniform (observed-payoff column)");
    simulate->add_option("--beta", [&sc](const CLI::results_t& res) {
        sc.beta_override = rsg::parse_double(res[0]);
        return true;
    }, "override the learning rate");
    simulate->add_option("--delta", [&sc](const CLI::results_t& res) {
        sc.delta_override = rsg::parse_double(res[0]);
        return true;
    }, "override the confidence parameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        Scenario from_file;
        if (!config_path.empty()) load_config_file(config_path, from_file);
        // Flags beat file values; file values beat defaults.
        Scenario merged = from_file;
        if (cmd->count("--means")) merged.means = parse_means(means_arg);
        if (cmd->count("--players")) merged.players = sc.players;
        if (cmd->count("--picks")) merged.picks = sc.picks;
        if (sc.cap) merged.cap = sc.cap;
        if (cmd->count("--method")) merged.method = sc.method;
        if (cmd->count("--eps")) merged.eps = sc.eps;
        if (cmd->count("--resolution")) merged.grid_resolution = sc.grid_resolution;
        if (cmd->count("--out")) merged.out_dir = sc.out_dir;
        if (cmd->count("--jobs")) merged.jobs = sc.jobs;
        if (cmd->get_name() == "sweep" && cmd->count("--e1")) parse_range(e1_arg, merged);
        if (cmd->get_name() == "simulate") {
            if (cmd->count("--horizon")) merged.horizon = sc.horizon;
            if (cmd->count("--noise")) merged.noise = sc.noise;
            if (cmd->count("--opponent")) merged.opponent = sc.opponent;
            if (sc.beta_override) merged.beta_override = sc.beta_override;
            if (sc.delta_override) merged.delta_override = sc.delta_override;
            if (cmd->count("--seeds")) {
                merged.seeds.clear();
                if (seeds_arg.find(',') == std::string::npos) {
                    const int count = static_cast<int>(rsg::parse_double(seeds_arg));
                    for (int s = 1; s <= count; ++s) merged.seeds.push_back(s);
                } else {
                    for (const auto& field : rsg::split_csv_line(seeds_arg))
                        merged.seeds.push_back(
                            static_cast<std::uint64_t>(rsg::parse_double(field)));
                }
            }
            if (merged.seeds.empty()) merged.seeds = {1};
        }
        if (merged.means.empty()) throw UsageError("--means is required");

        if (cmd->get_name() == "solve") return cmd_solve(merged);
        if (cmd->get_name() == "sweep") return cmd_sweep(merged);
        return cmd_simulate(merged);
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    }
}

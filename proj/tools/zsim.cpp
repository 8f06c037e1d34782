// zsim: solve small zero-sum games, run regret sweeps, and check the
// acceptance battery.
//
//   zsim solve --inline "2/3,0;0,1/3"
//   zsim sweep --config configs/paper_fig1.cfg --out results/
//   zsim verify [--only subroutine-bound] [--seed 7]

#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "zerosum/gaps.hpp"
#include "zerosum/io.hpp"
#include "zerosum/verify.hpp"

namespace fs = std::filesystem;
using namespace zerosum;

namespace {

constexpr uint64_t kDefaultSeed = 20240817;

std::string strategy_str(const Strategy& s) {
    std::string out = "(";
    for (int i = 0; i < s.size(); ++i) out += (i ? ", " : "") + format_sig12(s[i]);
    return out + ")";
}

std::string support_str(const std::vector<int>& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
    return out + "}";
}

std::string sanitize_matrix_id(std::string s) {
    for (char& c : s)
        if (c == ',') c = ':';
        else if (c == ' ') c = '_';
    return s;
}

int cmd_solve(const std::string& inline_text, const std::string& file) {
    Matrix m;
    try {
        if (!inline_text.empty()) m = parse_matrix_inline(inline_text);
        else if (!file.empty()) m = read_matrix_csv(file);
        else {
            std::cerr << "solve: provide --inline or a matrix file\n";
            return 2;
        }
    } catch (const ParseError& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return 2;
    }

    try {
        GameMatrix game(m);
        const NashSolution sol = solve(game);
        const GapStatistics gaps = gap_statistics(game);
        std::cout << "x*       = " << strategy_str(sol.x_star) << "\n";
        std::cout << "y*       = " << strategy_str(sol.y_star) << "\n";
        std::cout << "V*       = " << format_sig12(sol.value) << "\n";
        std::cout << "supports = rows " << support_str(sol.support_x) << ", cols " << support_str(sol.support_y)
                  << (sol.is_psne ? "  (pure)" : "") << "\n";
        std::cout << "delta_min = " << format_sig12(gaps.delta_min) << "   (rescaled [0,1] scale)\n";
        std::cout << "D         = " << format_sig12(gaps.d) << "\n";
        std::cout << "delta_g   = " << format_sig12(gaps.delta_g) << "  (g1 = " << format_sig12(gaps.delta_g1)
                  << ", g2 = " << format_sig12(gaps.delta_g2) << ")\n";
        return 0;
    } catch (const NonUniqueEquilibrium& e) {
        std::cerr << "solve: " << e.what() << "\n";
        std::cerr << "  witness 1: x = " << strategy_str(e.x1) << ", y = " << strategy_str(e.y1) << "\n";
        std::cerr << "  witness 2: x = " << strategy_str(e.x2) << ", y = " << strategy_str(e.y2) << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return 1;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int threads, uint64_t seed_override,
              bool seed_given, bool trace) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "sweep: cannot open config " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    ConfigParse parsed = parse_config(buf.str());
    if (!parsed.ok()) {
        std::cerr << "sweep: invalid config:\n";
        for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
        return 2;
    }
    SweepConfig cfg = parsed.config;
    if (seed_given) cfg.seed = seed_override;

    GameMatrix game(parse_matrix_inline(cfg.matrix));
    const std::string matrix_id = sanitize_matrix_id(cfg.matrix);
    const NoiseModel noise{cfg.noise == "none" ? NoiseKind::none : NoiseKind::bernoulli};

    fs::create_directories(out_dir);
    std::vector<SweepRow> raw_rows;
    std::vector<AggRow> agg_rows;

    int combo = 0;
    for (const auto& lname : cfg.learners) {
        for (const auto& aname : cfg.adversaries) {
            RunSpec spec;
            spec.game = &game;
            spec.noise = noise;
            spec.learner = learner_kind_from_name(lname);
            spec.learner_options.skip_exploration = cfg.skip_exploration;
            spec.adversary = adversary_kind_from_name(aname);
            spec.adversary_params = adversary_params_for(aname, cfg);
            spec.base_seed = acceptance::mix_seed(cfg.seed, static_cast<uint64_t>(combo));
            const SweepResult sweep = horizon_sweep(spec, cfg.horizons, cfg.trials, threads);
            for (size_t h = 0; h < sweep.cells.size(); ++h) {
                const auto& cell = sweep.cells[h];
                for (const auto& tr : cell.trials)
                    raw_rows.push_back({lname, aname, matrix_id, cell.horizon, tr.trial, tr.stream_id,
                                        tr.nash_regret, tr.external_regret});
                const double slope = h == 0 ? std::numeric_limits<double>::quiet_NaN() : sweep.slopes[h - 1];
                agg_rows.push_back({lname, aname, matrix_id, cell.horizon, cell.agg.trials, cell.agg.mean,
                                    cell.agg.stderr_, slope});
            }
            if (trace) {
                for (long long T : cfg.horizons) {
                    auto learner = make_learner(spec.learner, game, T, spec.learner_options);
                    auto adversary = make_adversary(spec.adversary, spec.adversary_params, game);
                    MatchRecord rec = run_match(*learner, *adversary, game, noise, T,
                                                RandomStream(spec.base_seed, 0), solve(game).value, true);
                    write_file(out_dir + "/trace_" + lname + "_" + aname + "_" + std::to_string(T) + ".jsonl",
                               trace_jsonl(rec));
                }
            }
            ++combo;
        }
    }

    write_file(out_dir + "/raw.csv", raw_csv(raw_rows));
    write_file(out_dir + "/aggregate.csv", agg_csv(agg_rows));
    write_file(out_dir + "/plot_regret.py", plot_script("aggregate.csv"));
    std::cout << "wrote " << out_dir << "/raw.csv, aggregate.csv, plot_regret.py\n";
    return 0;
}

int cmd_verify(uint64_t seed, const std::vector<std::string>& only, int threads, const std::string& out_dir) {
    const auto results = run_acceptance(seed, only, threads, &std::cout);
    bool all = true;
    nlohmann::json summary;
    summary["seed"] = seed;
    summary["criteria"] = nlohmann::json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        summary["criteria"].push_back({{"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
    }
    summary["all_pass"] = all;
    fs::create_directories(out_dir);
    write_file(out_dir + "/verify_summary.json", summary.dump(2) + "\n");
    std::cout << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << " (summary: " << out_dir
              << "/verify_summary.json)\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation toolkit for zero-sum matrix games with noisy feedback"};
    app.require_subcommand(1);

    uint64_t seed = kDefaultSeed;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string out_dir = ".";
    bool trace = false;

    app.add_option("--seed", seed, "base seed for all randomness");
    app.add_option("--threads", threads, "worker threads (1 = fully serial)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--trace", trace, "write per-round JSONL traces (stream 0 of every cell)");

    auto* solve_cmd = app.add_subcommand("solve", "print the equilibrium and gap constants of a matrix");
    std::string inline_text, matrix_file;
    solve_cmd->add_option("--inline", inline_text, "matrix literal, e.g. \"2/3,0;0,1/3\"");
    solve_cmd->add_option("file", matrix_file, "matrix CSV file (one row per line)");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a horizon sweep from a config file");
    std::string config_path;
    sweep_cmd->add_option("--config", config_path, "sweep config file")->required();

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    std::vector<std::string> only;
    verify_cmd->add_option("--only", only, "run only the named criteria");

    bool seed_given = false;
    app.callback([&] { seed_given = app.count("--seed") > 0; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(inline_text, matrix_file);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir, threads, seed, seed_given, trace);
        if (verify_cmd->parsed()) return cmd_verify(seed, only, threads, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

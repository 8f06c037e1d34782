#pragma once

// Parsing and serialization: matrix literals ("2/3,0;0,1/3"), matrix CSV
// files, the flat key=value sweep config, and the result CSVs. Doubles are
// printed with %.17g so replays with equal seeds give byte-identical files.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zerosum/matrix.hpp"
#include "zerosum/montecarlo.hpp"

namespace zerosum {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace detail_io {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// decimal or p/q fraction
inline double parse_entry(const std::string& tok, int line, int col) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError(line, col, "empty matrix entry");
    const size_t slash = t.find('/');
    try {
        size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(t, &used);
            if (used != t.size()) throw ParseError(line, col, "trailing characters in '" + t + "'");
            return v;
        }
        const std::string num = trim(t.substr(0, slash)), den = trim(t.substr(slash + 1));
        const double p = std::stod(num, &used);
        if (used != num.size()) throw ParseError(line, col, "bad numerator in '" + t + "'");
        const double q = std::stod(den, &used);
        if (used != den.size()) throw ParseError(line, col, "bad denominator in '" + t + "'");
        if (q == 0.0) throw ParseError(line, col, "division by zero in '" + t + "'");
        return p / q;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, col, "cannot parse '" + t + "' as a number");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail_io

// "a,b;c,d" with ';' between rows
inline Matrix parse_matrix_inline(const std::string& text) {
    const auto rows = detail_io::split(text, ';');
    std::vector<std::vector<double>> vals;
    int col_count = -1;
    for (size_t r = 0; r < rows.size(); ++r) {
        const auto cells = detail_io::split(rows[r], ',');
        if (col_count < 0) col_count = static_cast<int>(cells.size());
        else if (static_cast<int>(cells.size()) != col_count)
            throw ParseError(1, static_cast<int>(r) + 1, "rows have different lengths");
        std::vector<double> row;
        for (size_t c = 0; c < cells.size(); ++c)
            row.push_back(detail_io::parse_entry(cells[c], 1, static_cast<int>(c) + 1));
        vals.push_back(std::move(row));
    }
    Matrix m(static_cast<int>(vals.size()), col_count);
    for (size_t i = 0; i < vals.size(); ++i)
        for (int j = 0; j < col_count; ++j) m(static_cast<int>(i), j) = vals[i][j];
    return m;
}

// one row per line, comma separated
inline Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file: " + path);
    std::vector<std::vector<double>> vals;
    std::string line;
    int lineno = 0;
    int col_count = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail_io::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = detail_io::split(t, ',');
        if (col_count < 0) col_count = static_cast<int>(cells.size());
        else if (static_cast<int>(cells.size()) != col_count)
            throw ParseError(lineno, 1, "rows have different lengths");
        std::vector<double> row;
        for (size_t c = 0; c < cells.size(); ++c)
            row.push_back(detail_io::parse_entry(cells[c], lineno, static_cast<int>(c) + 1));
        vals.push_back(std::move(row));
    }
    if (vals.empty()) throw ParseError(lineno, 1, "matrix file is empty");
    Matrix m(static_cast<int>(vals.size()), col_count);
    for (size_t i = 0; i < vals.size(); ++i)
        for (int j = 0; j < col_count; ++j) m(static_cast<int>(i), j) = vals[i][j];
    return m;
}

// --- sweep config -----------------------------------------------------------

struct SweepConfig {
    std::string matrix;
    std::vector<std::string> learners;
    std::vector<std::string> adversaries;
    std::vector<long long> horizons;
    int trials = 32;
    uint64_t seed = 20240817;
    std::string noise = "bernoulli";
    bool skip_exploration = false;
    std::map<std::string, std::string> adversary_params;  // dotted keys, e.g. adaptive.threshold
};

inline LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "ours" || name == "bandit2x2") return LearnerKind::ours;
    if (name == "ucb") return LearnerKind::ucb;
    if (name == "exp3") return LearnerKind::exp3;
    if (name == "full_info") return LearnerKind::full_info;
    if (name == "uniform") return LearnerKind::uniform;
    throw Error("unknown learner: " + name);
}

inline AdversaryKind adversary_kind_from_name(const std::string& name) {
    if (name == "hybrid") return AdversaryKind::hybrid;
    if (name == "best_response") return AdversaryKind::best_response;
    if (name == "adaptive") return AdversaryKind::adaptive;
    if (name == "nash_oracle") return AdversaryKind::nash_oracle;
    if (name == "ucb_killer") return AdversaryKind::ucb_killer;
    if (name == "fixed") return AdversaryKind::fixed_mixed;
    throw Error("unknown adversary: " + name);
}

inline AdversaryParams adversary_params_for(const std::string& name, const SweepConfig& cfg) {
    AdversaryParams p;
    auto get = [&](const std::string& key, double fallback) {
        auto it = cfg.adversary_params.find(key);
        return it == cfg.adversary_params.end() ? fallback : std::stod(it->second);
    };
    p.switch_fraction = get(name + ".switch_fraction", 0.5);
    p.threshold = get(name + ".threshold", 0.05);
    auto it = cfg.adversary_params.find(name + ".y");
    if (it != cfg.adversary_params.end()) {
        for (const auto& tok : detail_io::split(it->second, ','))
            p.fixed_y.push_back(detail_io::parse_entry(tok, 1, 1));
    }
    return p;
}

struct ConfigParse {
    SweepConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

inline ConfigParse parse_config(const std::string& text) {
    ConfigParse out;
    SweepConfig& c = out.config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto err = [&](const std::string& msg) { out.errors.push_back("line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail_io::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) {
            err("expected key = value");
            continue;
        }
        const std::string key = detail_io::trim(t.substr(0, eq));
        const std::string val = detail_io::trim(t.substr(eq + 1));
        try {
            if (key == "matrix") c.matrix = val;
            else if (key == "learners") {
                c.learners.clear();
                for (const auto& v : detail_io::split(val, ',')) {
                    const std::string name = detail_io::trim(v);
                    learner_kind_from_name(name);
                    c.learners.push_back(name);
                }
            } else if (key == "adversaries") {
                c.adversaries.clear();
                for (const auto& v : detail_io::split(val, ',')) {
                    const std::string name = detail_io::trim(v);
                    adversary_kind_from_name(name);
                    c.adversaries.push_back(name);
                }
            } else if (key == "horizons") {
                c.horizons.clear();
                for (const auto& v : detail_io::split(val, ',')) c.horizons.push_back(std::stoll(detail_io::trim(v)));
                for (size_t h = 1; h < c.horizons.size(); ++h)
                    if (c.horizons[h] <= c.horizons[h - 1]) err("horizons must be strictly increasing");
            } else if (key == "trials") {
                c.trials = std::stoi(val);
                if (c.trials < 1) err("trials must be >= 1");
            } else if (key == "seed") {
                c.seed = std::stoull(val);
            } else if (key == "noise") {
                if (val != "bernoulli" && val != "none") err("noise must be bernoulli or none");
                else c.noise = val;
            } else if (key == "skip_exploration") {
                if (val != "true" && val != "false") err("skip_exploration must be true or false");
                else c.skip_exploration = (val == "true");
            } else if (key.find('.') != std::string::npos) {
                c.adversary_params[key] = val;
            } else {
                err("unknown key: " + key);
            }
        } catch (const std::exception& e) {
            err(std::string("bad value for ") + key + ": " + e.what());
        }
    }
    if (c.matrix.empty()) out.errors.push_back("missing key: matrix");
    if (c.learners.empty()) out.errors.push_back("missing key: learners");
    if (c.adversaries.empty()) out.errors.push_back("missing key: adversaries");
    if (c.horizons.empty()) out.errors.push_back("missing key: horizons");
    if (out.ok()) {
        try {
            GameMatrix check(parse_matrix_inline(c.matrix));
            (void)check;
        } catch (const std::exception& e) {
            out.errors.push_back(std::string("matrix: ") + e.what());
        }
    }
    return out;
}

inline std::string canonical_config(const SweepConfig& c) {
    std::ostringstream out;
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s;
    };
    out << "matrix = " << c.matrix << "\n";
    out << "learners = " << join(c.learners) << "\n";
    out << "adversaries = " << join(c.adversaries) << "\n";
    out << "horizons = ";
    for (size_t i = 0; i < c.horizons.size(); ++i) out << (i ? "," : "") << c.horizons[i];
    out << "\n";
    out << "trials = " << c.trials << "\n";
    out << "seed = " << c.seed << "\n";
    out << "noise = " << c.noise << "\n";
    out << "skip_exploration = " << (c.skip_exploration ? "true" : "false") << "\n";
    for (const auto& [k, v] : c.adversary_params) out << k << " = " << v << "\n";
    return out.str();
}

// --- result CSVs --------------------------------------------------------------

struct SweepRow {
    std::string learner, adversary, matrix_id;
    long long horizon;
    int trial;
    uint64_t seed;
    double nash_regret, external_regret;
};

struct AggRow {
    std::string learner, adversary, matrix_id;
    long long horizon;
    int trials;
    double mean, stderr_, slope_from_prev;  // NaN slope on the first horizon
};

inline std::string raw_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "learner,adversary,matrix_id,T,trial,seed,nash_regret,external_regret\n";
    for (const auto& r : rows)
        out << r.learner << ',' << r.adversary << ',' << r.matrix_id << ',' << r.horizon << ',' << r.trial << ','
            << r.seed << ',' << format_double(r.nash_regret) << ',' << format_double(r.external_regret) << '\n';
    return out.str();
}

inline std::string agg_csv(const std::vector<AggRow>& rows) {
    std::ostringstream out;
    out << "learner,adversary,matrix_id,T,trials,mean_nash_regret,stderr_nash_regret,slope_from_prev\n";
    for (const auto& r : rows)
        out << r.learner << ',' << r.adversary << ',' << r.matrix_id << ',' << r.horizon << ',' << r.trials << ','
            << format_double(r.mean) << ',' << format_double(r.stderr_) << ',' << format_double(r.slope_from_prev)
            << '\n';
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

// Log-log panels, one per adversary, lines per learner; reads aggregate.csv.
inline std::string plot_script(const std::string& agg_csv_name) {
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
      << "import csv, math\n"
      << "from collections import defaultdict\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "rows = list(csv.DictReader(open('" << agg_csv_name << "')))\n"
      << "advs = sorted({r['adversary'] for r in rows})\n"
      << "fig, axes = plt.subplots(1, len(advs), figsize=(5 * len(advs), 4), squeeze=False)\n"
      << "for ax, adv in zip(axes[0], advs):\n"
      << "    series = defaultdict(list)\n"
      << "    for r in rows:\n"
      << "        if r['adversary'] != adv:\n"
      << "            continue\n"
      << "        series[r['learner']].append((int(r['T']), float(r['mean_nash_regret'])))\n"
      << "    for learner, pts in sorted(series.items()):\n"
      << "        pts.sort()\n"
      << "        xs = [math.log10(t) for t, _ in pts]\n"
      << "        ys = [math.log10(max(v, 1e-12)) for _, v in pts]\n"
      << "        ax.plot(xs, ys, marker='o', label=learner)\n"
      << "    ax.set_title(adv)\n"
      << "    ax.set_xlabel('log10 T')\n"
      << "    ax.set_ylabel('log10 Nash regret')\n"
      << "    ax.legend()\n"
      << "fig.tight_layout()\n"
      << "fig.savefig('regret_loglog.png', dpi=150)\n"
      << "print('wrote regret_loglog.png')\n";
    return s.str();
}

inline std::string trace_jsonl(const MatchRecord& rec) {
    std::ostringstream out;
    for (const auto& row : rec.trace)
        out << "{\"t\":" << row.t << ",\"i\":" << row.i << ",\"j\":" << row.j
            << ",\"reward\":" << format_double(row.reward_raw)
            << ",\"expected\":" << format_double(row.expected_raw) << "}\n";
    return out.str();
}

}  // namespace zerosum

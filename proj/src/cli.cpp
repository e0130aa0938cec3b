#include "entrev/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "entrev/nla.hpp"

namespace entrev::cli {

namespace {

const char* model_name(Scenario m) {
    switch (m) {
        case Scenario::SinglePair: return "single";
        case Scenario::TwoWay: return "two-way";
        case Scenario::OneWay: return "one-way";
    }
    return "?";
}

const char* policy_name(OutcomePolicy p) {
    switch (p) {
        case OutcomePolicy::PhiOnly: return "phi";
        case OutcomePolicy::PsiOnly: return "psi";
        case OutcomePolicy::KeepAll: return "all";
    }
    return "?";
}

const char* outcome_name(BsmOutcome o) {
    switch (o) {
        case BsmOutcome::PhiPlus: return "phi+";
        case BsmOutcome::PhiMinus: return "phi-";
        case BsmOutcome::PsiPlus: return "psi+";
        case BsmOutcome::PsiMinus: return "psi-";
    }
    return "?";
}

Scenario parse_model(const std::string& s) {
    if (s == "single") return Scenario::SinglePair;
    if (s == "two-way") return Scenario::TwoWay;
    if (s == "one-way") return Scenario::OneWay;
    throw ArgumentError("unknown model: " + s);
}

OutcomePolicy parse_policy(const std::string& s) {
    if (s == "phi") return OutcomePolicy::PhiOnly;
    if (s == "psi") return OutcomePolicy::PsiOnly;
    if (s == "all") return OutcomePolicy::KeepAll;
    throw ArgumentError("unknown policy: " + s);
}

struct Range {
    double start, stop, step;
};

Range parse_range(const std::string& s) {
    Range r{};
    std::istringstream in(s);
    char c1 = 0, c2 = 0;
    if (!(in >> r.start >> c1 >> r.stop >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof()) {
        throw ArgumentError("range must be start:stop:step, got: " + s);
    }
    return r;
}

void parse_reversing(const std::string& s, RMode& mode, double& fixed) {
    if (s == "optimal") {
        mode = RMode::Optimal;
        return;
    }
    if (s == "grid") {
        mode = RMode::Grid;
        return;
    }
    try {
        std::size_t pos = 0;
        fixed = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ArgumentError("reversing must be a number, 'optimal' or 'grid': " + s);
    }
    mode = RMode::Fixed;
}

void write_to_path_or(const std::string& path, std::ostream& fallback,
                      const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file: " + path);
    }
    writer(file);
    file.flush();
    if (!file) {
        throw IoError("write failed: " + path);
    }
}

const std::array<BsmOutcome, 4> kOutcomes = {BsmOutcome::PhiPlus, BsmOutcome::PhiMinus,
                                             BsmOutcome::PsiPlus, BsmOutcome::PsiMinus};

}  // namespace

std::string format_number(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (step <= 0.0) {
        throw ArgumentError("grid step must be positive");
    }
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) grid.push_back(start + i * step);
    return grid;
}

void SweepSpec::validate_ranges() const {
    if (!(0.0 <= d_start && d_start <= d_stop && d_stop <= 1.0)) {
        throw ArgumentError("damping range must satisfy 0 <= start <= stop <= 1");
    }
    if (!(d_step > 0.0)) {
        throw ArgumentError("damping step must be positive");
    }
    if (r_mode == RMode::Fixed && !(r_fixed >= 0.0 && r_fixed <= 1.0)) {
        throw ArgumentError("reversing strength must lie in [0, 1]");
    }
}

void write_sweep_csv(const SweepSpec& spec, std::ostream& out) {
    spec.validate_ranges();
    out << "D,R,C_unrecovered,C_recovered,P,B,Q\n";
    auto emit = [&](double d, std::optional<double> r) {
        const RecoveryReport rep = recovery_report(spec.model, spec.policy, d, r);
        const double unrec = unrecovered_concurrence(spec.model, spec.policy, d);
        out << format_number(d) << ',' << format_number(rep.reversing) << ','
            << format_number(unrec) << ',' << format_number(rep.concurrence) << ','
            << format_number(rep.reversal_success_prob) << ','
            << format_number(rep.branch_prob) << ',' << format_number(rep.bell_pair_cost)
            << '\n';
    };
    for (double d : make_grid(spec.d_start, spec.d_stop, spec.d_step)) {
        switch (spec.r_mode) {
            case RMode::Fixed:
                emit(d, spec.r_fixed);
                break;
            case RMode::Optimal:
                emit(d, std::nullopt);
                break;
            case RMode::Grid:
                for (double r : make_grid(0.0, 1.0, spec.d_step)) emit(d, r);
                break;
        }
    }
}

void write_report_text(const RecoveryReport& report, std::ostream& out) {
    out << "model=" << model_name(report.model) << " policy=" << policy_name(report.policy)
        << " D=" << format_number(report.damping) << '\n'
        << "R=" << format_number(report.reversing) << '\n'
        << "C=" << format_number(report.concurrence) << '\n'
        << "P=" << format_number(report.reversal_success_prob) << '\n'
        << "B=" << format_number(report.branch_prob) << '\n'
        << "Q=" << format_number(report.bell_pair_cost) << '\n';
}

void write_report_csv(const RecoveryReport& report, std::ostream& out) {
    out << "model,policy,D,R,C,P,B,Q\n"
        << model_name(report.model) << ',' << policy_name(report.policy) << ','
        << format_number(report.damping) << ',' << format_number(report.reversing) << ','
        << format_number(report.concurrence) << ','
        << format_number(report.reversal_success_prob) << ','
        << format_number(report.branch_prob) << ','
        << format_number(report.bell_pair_cost) << '\n';
}

void write_nla_csv(const NlaSpec& spec, std::ostream& out) {
    if (!(0.5 <= spec.eta_start && spec.eta_start <= spec.eta_stop && spec.eta_stop < 1.0)) {
        throw ArgumentError("eta range must satisfy 0.5 <= start <= stop < 1");
    }
    out << "eta,gain,reversing,herald_prob,reversal_residual\n";
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<std::pair<cplx, cplx>, 3> probes = {
        std::pair<cplx, cplx>{1.0, 0.0}, {0.0, 1.0}, {s, s}};
    for (double eta : make_grid(spec.eta_start, spec.eta_stop, spec.eta_step)) {
        const ScissorsConfig cfg(eta);
        const ReversingStrength r = reversing_strength_from_eta(eta);
        const CMatrix success = reversal(r).ops[0];
        double residual = 0.0;
        for (const auto& [c0, c1] : probes) {
            const ScissorsResult sc = scissors_truncate(c0, c1, eta);
            cplx r0 = success.at(0, 0) * c0;
            cplx r1 = success.at(1, 1) * c1;
            const double n = std::sqrt(std::norm(r0) + std::norm(r1));
            r0 /= n;
            r1 /= n;
            residual = std::max({residual, std::abs(sc.out0 - r0), std::abs(sc.out1 - r1)});
        }
        const double herald = scissors_truncate(s, s, eta).herald_prob;
        out << format_number(eta) << ',' << format_number(cfg.gain) << ','
            << format_number(r.r) << ',' << format_number(herald) << ','
            << format_number(residual) << '\n';
    }
}

namespace {

struct AnalyticCells {
    double pair_success = 0.0;          // pooled per-pair reversal success
    std::array<std::array<double, 4>, 2> cells{};  // [joint success][outcome]
};

double bell_branch_weight(const CMatrix& rho16, BsmOutcome outcome) {
    const std::vector<cplx> chi = bell_vector(outcome);
    cplx total = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d)
            for (int bc = 0; bc < 4; ++bc) {
                if (chi[bc] == cplx{}) continue;
                for (int bc2 = 0; bc2 < 4; ++bc2) {
                    if (chi[bc2] == cplx{}) continue;
                    total += std::conj(chi[bc]) * chi[bc2] *
                             rho16.at(a * 8 + bc * 2 + d, a * 8 + bc2 * 2 + d);
                }
            }
    return total.real();
}

// Exact joint probabilities of (reversal branches, BSM outcome), computed on
// the 16x16 density matrix; independent of the trajectory sampler.
AnalyticCells analytic_cells(RepeaterModel model, double d, double r) {
    const auto [q1, q2] =
        model == RepeaterModel::TwoWay ? std::pair{1, 2} : std::pair{1, 3};
    const PairAmplitudes bell = PairAmplitudes::bell();
    std::vector<cplx> psi(16);
    psi[0b0000] = bell.a * bell.a;
    psi[0b0011] = bell.a * bell.b;
    psi[0b1100] = bell.b * bell.a;
    psi[0b1111] = bell.b * bell.b;

    DensityMatrix rho{outer(psi, psi), NormKind::Normalized};
    rho = apply_channel(rho, amplitude_damping(DampingStrength(d)), q1);
    rho = apply_channel(rho, amplitude_damping(DampingStrength(d)), q2);

    const KrausChannel rev = reversal(ReversingStrength(r));
    AnalyticCells out;
    double success_q2 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const CMatrix after1 = apply_qubit_op(rho.mat, rev.ops[i], q1, 4);
        if (after1.trace().real() < 1e-15) continue;
        if (i == 0) out.pair_success += 0.5 * after1.trace().real();
        for (int j = 0; j < 2; ++j) {
            const CMatrix after2 = apply_qubit_op(after1, rev.ops[j], q2, 4);
            const double w = after2.trace().real();
            if (w < 1e-15) continue;
            if (j == 0) success_q2 += w;
            const int success = (i == 0 && j == 0) ? 1 : 0;
            for (int o = 0; o < 4; ++o) {
                out.cells[success][o] += bell_branch_weight(after2, kOutcomes[o]);
            }
        }
    }
    out.pair_success += 0.5 * success_q2;
    return out;
}

}  // namespace

ValidationResult run_validation(const ValidateSpec& spec) {
    struct Point {
        RepeaterModel model;
        double d, r;
    };
    const std::array<Point, 5> grid = {Point{RepeaterModel::TwoWay, 0.0, 0.0},
                                       Point{RepeaterModel::TwoWay, 0.3, 0.2},
                                       Point{RepeaterModel::TwoWay, 0.52, 0.774},
                                       Point{RepeaterModel::OneWay, 0.3, 0.2},
                                       Point{RepeaterModel::OneWay, 0.62, 0.9}};

    std::ostringstream text;
    bool passed = true;
    auto corrupted = [&](double p) {
        return std::min(1.0, std::max(0.0, p + spec.corrupt_bias));
    };

    for (const Point& pt : grid) {
        McConfig cfg;
        cfg.model = pt.model;
        cfg.damping = pt.d;
        cfg.reversing = pt.r;
        cfg.trials = spec.trials;
        cfg.seed = spec.seed;
        cfg.shards = spec.shards;
        const McStats stats = run_trajectories(cfg);
        const AnalyticCells cells = analytic_cells(pt.model, pt.d, pt.r);

        text << "# model=" << (pt.model == RepeaterModel::TwoWay ? "two-way" : "one-way")
             << " D=" << format_number(pt.d) << " R=" << format_number(pt.r)
             << " trials=" << spec.trials << '\n';

        auto check = [&](const std::string& label, double analytic, double freq,
                         double sigma) {
            const double p = corrupted(analytic);
            bool ok;
            std::string zfield;
            if (sigma == 0.0) {
                ok = freq == p;
                zfield = "-";
            } else {
                const double z = std::abs(freq - p) / sigma;
                ok = z <= 5.0;
                zfield = format_number(z);
            }
            passed = passed && ok;
            text << label << " analytic=" << format_number(p)
                 << " empirical=" << format_number(freq) << " z=" << zfield
                 << (ok ? " ok" : " BREACH") << '\n';
        };

        {
            const double p = corrupted(cells.pair_success);
            check("pair_success", cells.pair_success, stats.pair_success_freq(),
                  std::sqrt(std::max(p * (1.0 - p), 0.0) /
                            (2.0 * static_cast<double>(spec.trials))));
        }
        for (int s = 1; s >= 0; --s) {
            for (int o = 0; o < 4; ++o) {
                check(std::string("cell success=") + (s ? "1" : "0") + " outcome=" +
                          outcome_name(kOutcomes[o]),
                      cells.cells[s][o], stats.cell_freq(s == 1, kOutcomes[o]),
                      stats.cell_stderr(corrupted(cells.cells[s][o])));
            }
        }
    }
    text << "validation: " << (passed ? "PASS" : "FAIL") << '\n';
    return ValidationResult{passed, text.str()};
}

namespace {

struct ParsedArgs {
    std::string model = "single";
    std::string policy = "phi";
    double damping = -1.0;
    std::string damping_range;
    std::string reversing = "optimal";
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 42;
    int shards = 4;
    std::string out_path;
    double eta = -1.0;
    std::string eta_range;
    std::string config_path;
};

void add_common_options(CLI::App* cmd, ParsedArgs& a, bool with_model) {
    if (with_model) {
        cmd->add_option("--model", a.model, "Repeater model")
            ->check(CLI::IsMember({"single", "two-way", "one-way"}));
        cmd->add_option("--policy", a.policy, "BSM outcome policy")
            ->check(CLI::IsMember({"phi", "psi", "all"}));
    }
    cmd->add_option("--out", a.out_path, "Output CSV path (default stdout)");
    cmd->add_option("--config", a.config_path,
                    "Config file with key=value lines ('#' comments); command-line "
                    "flags take precedence");
}

// Flat key=value configuration.  Values never override flags that were given
// on the command line: flags > config > defaults.
void apply_config_file(const CLI::App* cmd, ParsedArgs& a) {
    if (a.config_path.empty()) return;
    std::ifstream file(a.config_path);
    if (!file) {
        throw IoError("cannot open config file: " + a.config_path);
    }

    const std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"model", [&](const std::string& v) { a.model = v; }},
        {"policy", [&](const std::string& v) { a.policy = v; }},
        {"damping", [&](const std::string& v) { a.damping = std::stod(v); }},
        {"damping-range", [&](const std::string& v) { a.damping_range = v; }},
        {"reversing", [&](const std::string& v) { a.reversing = v; }},
        {"trials", [&](const std::string& v) { a.trials = std::stoull(v); }},
        {"seed", [&](const std::string& v) { a.seed = std::stoull(v); }},
        {"shards", [&](const std::string& v) { a.shards = std::stoi(v); }},
        {"out", [&](const std::string& v) { a.out_path = v; }},
        {"eta", [&](const std::string& v) { a.eta = std::stod(v); }},
        {"eta-range", [&](const std::string& v) { a.eta_range = v; }},
    };
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string{} : s.substr(from, to - from + 1);
    };

    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ArgumentError("config line " + std::to_string(lineno) +
                                " is not key=value: " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ArgumentError("unknown config key: " + key);
        }
        if (cmd->get_option_no_throw("--" + key) == nullptr) {
            throw ArgumentError("config key not valid for this subcommand: " + key);
        }
        if (cmd->count("--" + key) > 0) continue;  // flag wins
        try {
            it->second(value);
        } catch (const std::exception&) {
            throw ArgumentError("bad value for config key " + key + ": " + value);
        }
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement recovery in noisy swapping: sweeps, optima, validation"};
    app.name("entrev");
    app.require_subcommand(1);

    ParsedArgs a;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Sweep damping (and optionally reversing) strengths to CSV");
    add_common_options(sweep, a, true);
    sweep->add_option("--damping", a.damping, "Single damping strength");
    sweep->add_option("--damping-range", a.damping_range, "Damping grid start:stop:step");
    sweep->add_option("--reversing", a.reversing,
                      "Reversing strength: number, 'optimal' or 'grid'");

    CLI::App* optimize = app.add_subcommand(
        "optimize", "Report concurrence/probability/cost at one damping strength");
    add_common_options(optimize, a, true);
    optimize->add_option("--damping", a.damping, "Damping strength")->required();
    optimize->add_option("--reversing", a.reversing,
                         "Reversing strength: number or 'optimal'");

    CLI::App* validate = app.add_subcommand(
        "validate", "Monte-Carlo frequencies against analytic probabilities");
    add_common_options(validate, a, false);
    validate->add_option("--trials", a.trials, "Trajectories per grid point (>= 10000)");
    validate->add_option("--seed", a.seed, "RNG seed");
    validate->add_option("--shards", a.shards, "Worker shards (stats are shard-invariant)");

    CLI::App* nla = app.add_subcommand(
        "nla", "Quantum-scissors gain/reversing dictionary over a transmissivity grid");
    add_common_options(nla, a, false);
    nla->add_option("--eta", a.eta, "Single beam-splitter transmissivity in [0.5, 1)");
    nla->add_option("--eta-range", a.eta_range, "Transmissivity grid start:stop:step");

    std::vector<const char*> argv;
    argv.push_back("entrev");
    for (const std::string& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep) {
            apply_config_file(sweep, a);
            SweepSpec spec;
            spec.model = parse_model(a.model);
            spec.policy = parse_policy(a.policy);
            if (!a.damping_range.empty()) {
                const Range r = parse_range(a.damping_range);
                spec.d_start = r.start;
                spec.d_stop = r.stop;
                spec.d_step = r.step;
            } else if (a.damping >= 0.0) {
                spec.d_start = spec.d_stop = a.damping;
                spec.d_step = 1.0;
            }
            parse_reversing(a.reversing, spec.r_mode, spec.r_fixed);
            spec.out_path = a.out_path;
            write_to_path_or(spec.out_path, out,
                             [&](std::ostream& os) { write_sweep_csv(spec, os); });
            return kExitOk;
        }
        if (*optimize) {
            apply_config_file(optimize, a);
            OptimizeSpec spec;
            spec.model = parse_model(a.model);
            spec.policy = parse_policy(a.policy);
            spec.damping = a.damping;
            spec.out_path = a.out_path;
            parse_reversing(a.reversing, spec.r_mode, spec.r_fixed);
            if (spec.r_mode == RMode::Grid) {
                throw ArgumentError("optimize accepts a number or 'optimal' for --reversing");
            }
            const std::optional<double> r =
                spec.r_mode == RMode::Fixed ? std::optional<double>(spec.r_fixed)
                                            : std::nullopt;
            const RecoveryReport rep = recovery_report(spec.model, spec.policy,
                                                       spec.damping, r);
            write_report_text(rep, out);
            if (!spec.out_path.empty()) {
                write_to_path_or(spec.out_path, out,
                                 [&](std::ostream& os) { write_report_csv(rep, os); });
            }
            return kExitOk;
        }
        if (*validate) {
            apply_config_file(validate, a);
            if (a.trials < 10000) {
                err << "error: validate requires at least 10000 trials\n";
                return kExitUsage;
            }
            ValidateSpec spec;
            spec.trials = a.trials;
            spec.seed = a.seed;
            spec.shards = a.shards;
            const ValidationResult result = run_validation(spec);
            write_to_path_or(a.out_path, out,
                             [&](std::ostream& os) { os << result.text; });
            return result.passed ? kExitOk : kExitValidation;
        }
        if (*nla) {
            apply_config_file(nla, a);
            NlaSpec spec;
            if (!a.eta_range.empty()) {
                const Range r = parse_range(a.eta_range);
                spec.eta_start = r.start;
                spec.eta_stop = r.stop;
                spec.eta_step = r.step;
            } else if (a.eta >= 0.0) {
                spec.eta_start = spec.eta_stop = a.eta;
                spec.eta_step = 1.0;
            }
            spec.out_path = a.out_path;
            write_to_path_or(spec.out_path, out,
                             [&](std::ostream& os) { write_nla_csv(spec, os); });
            return kExitOk;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace entrev::cli

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <roughex/io.hpp>
#include <roughex/roughex.hpp>

using namespace roughex;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

struct Globals {
    std::string params_path;
    std::string out_path;
    std::string format = "json";
};

ModelParams resolve_params(const Globals& g) {
    if (!g.params_path.empty()) return load_params(g.params_path);
    if (const char* env = std::getenv("ROUGHEX_PARAMS"); env && *env) return load_params(env);
    return ModelParams{};
}

void emit(const Globals& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.out_path);
    if (!out) throw InputError("cannot write output file: " + g.out_path);
    out << text;
}

// One record as JSON or as a two-line CSV with the same key order.
std::string render(const Globals& g, const std::vector<std::pair<std::string, json>>& fields) {
    if (g.format == "csv") {
        std::ostringstream os;
        for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i].first;
        os << '\n';
        for (std::size_t i = 0; i < fields.size(); ++i) {
            os << (i ? "," : "");
            const json& v = fields[i].second;
            if (v.is_number_float())
                os << format_number(v.get<double>());
            else if (v.is_string())
                os << v.get<std::string>();
            else
                os << v.dump();
        }
        os << '\n';
        return os.str();
    }
    json j = json::object();
    for (const auto& [k, v] : fields) j[k] = v;
    return j.dump(2) + "\n";
}

struct SweepRow {
    double u;
    MomentCase c;
    double estimate;
    const char* kind;
    double lower;
    double upper;
    double classical;
};

SweepRow sweep_row(const ModelParams& p, double u, int n_a1, int n_a2) {
    const double inf = std::numeric_limits<double>::infinity();
    SweepRow r{u, classify(p, u), inf, "none", inf, inf, t1_star(p, u)};
    if (r.c == MomentCase::A) {
        r.estimate = algorithm_1_explosion_time(p, u, n_a1).value;
        r.kind = "algorithm_1";
    } else if (r.c == MomentCase::B) {
        r.estimate = algorithm_2_lower_bound(p, u, n_a2).value;
        r.kind = "algorithm_2_lower_bound";
    }
    if (has_finite_explosion(r.c)) {
        const auto s = wellposed_sandwich(p, u);
        r.lower = s.lower;
        r.upper = s.upper;
    }
    return r;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment explosion times and critical moments for the rough Heston model"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--params", g.params_path, "Parameter JSON file (default: $ROUGHEX_PARAMS, else built-in set)");
    app.add_option("--out", g.out_path, "Write output to FILE instead of stdout");
    app.add_option("--format", g.format, "Output format for single records")->check(CLI::IsMember({"json", "csv"}));

    double u = 0.0;
    auto* classify_cmd = app.add_subcommand("classify", "Case A/B/C/D of a moment u");
    classify_cmd->add_option("--u", u, "Moment exponent")->required();

    auto* bounds_cmd = app.add_subcommand("bounds", "Explosion-time lower and upper bounds");
    bounds_cmd->add_option("--u", u, "Moment exponent")->required();

    double u_from = -60.0, u_to = -1.0;
    int points = 200, n_a1 = 100, n_a2 = 200, threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Explosion time, bounds and classical time over a u grid (CSV)");
    sweep_cmd->add_option("--from", u_from, "First u")->capture_default_str();
    sweep_cmd->add_option("--to", u_to, "Last u")->capture_default_str();
    sweep_cmd->add_option("--points", points, "Number of grid points (0 gives a header-only file)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--n-max", n_a1, "Order for algorithm 1")->capture_default_str()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--n-max-b", n_a2, "Order for algorithm 2")->capture_default_str()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--threads", threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);

    double T = 0.0;
    std::string side = "lower";
    int n_crit = kCriticalOrder;
    auto* critical_cmd = app.add_subcommand("critical", "Critical moment, Lee slope and tail exponent at maturity T");
    critical_cmd->add_option("--T", T, "Maturity")->required();
    critical_cmd->add_option("--side", side, "lower or upper")->check(CLI::IsMember({"lower", "upper"}))->capture_default_str();
    critical_cmd->add_option("--n-max", n_crit, "Order for algorithm 1")->capture_default_str()->check(CLI::PositiveNumber);

    double u_re = 0.0, u_im = 0.0, t_end = 1.0;
    int steps = kDefaultMgfSteps;
    std::string scheme = "adams";
    auto* vie_cmd = app.add_subcommand("vie", "Solve the Volterra equation and the mgf along the grid (CSV)");
    vie_cmd->add_option("--u-re", u_re, "Real part of u")->required();
    vie_cmd->add_option("--u-im", u_im, "Imaginary part of u")->capture_default_str();
    vie_cmd->add_option("--t-end", t_end, "Final time")->capture_default_str();
    vie_cmd->add_option("--steps", steps, "Grid steps")->capture_default_str();
    vie_cmd->add_option("--scheme", scheme, "adams or rectangle")->check(CLI::IsMember({"adams", "rectangle"}))->capture_default_str();

    int n_coeffs = 100;
    auto* coeffs_cmd = app.add_subcommand("coeffs", "Power-series coefficients as CSV (n, log|a_n|, sign)");
    coeffs_cmd->add_option("--u", u, "Moment exponent")->required();
    coeffs_cmd->add_option("--n-max", n_coeffs, "Number of coefficients")->capture_default_str()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        const ModelParams p = resolve_params(g);

        if (*classify_cmd) {
            const auto r = riccati_coeffs(p, u);
            emit(g, render(g, {{"u", u}, {"case", to_string(classify(r))}, {"e0", r.e0}, {"e1", r.e1}, {"c1", r.c1}}));
        } else if (*bounds_cmd) {
            const auto s = wellposed_sandwich(p, u);
            emit(g, render(g, {{"u", u}, {"case", to_string(classify(p, u))}, {"lower_bound", s.lower}, {"upper_bound", s.upper}}));
        } else if (*sweep_cmd) {
            std::vector<double> us;
            for (int i = 0; i < points; ++i)
                us.push_back(points == 1 ? u_from : u_from + (u_to - u_from) * i / (points - 1));
            std::vector<SweepRow> rows(us.size());
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&] {
                for (std::size_t i; (i = next++) < us.size();) {
                    try {
                        rows[i] = sweep_row(p, us[i], n_a1, n_a2);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            };
            const unsigned hc = std::max(1u, std::thread::hardware_concurrency());
            const unsigned n_threads = std::min<std::size_t>(threads > 0 ? threads : hc, std::max<std::size_t>(1, us.size()));
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);

            std::ostringstream os;
            os << "u,case,estimate,estimate_kind,lower_bound,upper_bound,classical\n";
            for (const auto& r : rows)
                os << format_number(r.u) << ',' << to_string(r.c) << ',' << format_number(r.estimate) << ',' << r.kind
                   << ',' << format_number(r.lower) << ',' << format_number(r.upper) << ','
                   << format_number(r.classical) << '\n';
            emit(g, os.str());
        } else if (*critical_cmd) {
            const Side s = side == "lower" ? Side::lower : Side::upper;
            const auto res = CriticalMomentSolver(p, s, n_crit).solve(T);
            if (s == Side::lower) {
                emit(g, render(g, {{"T", T},
                                   {"u_minus", res.u_critical},
                                   {"residual", res.residual},
                                   {"lee_slope", lee_slope(res.u_critical, T)},
                                   {"left_tail_exponent", -res.u_critical - 1.0},
                                   {"method", to_string(res.method)}}));
            } else {
                emit(g, render(g, {{"T", T},
                                   {"u_plus", res.u_critical},
                                   {"residual", res.residual},
                                   {"right_tail_exponent", -res.u_critical - 1.0},
                                   {"method", to_string(res.method)}}));
            }
        } else if (*vie_cmd) {
            VieOptions opt;
            opt.scheme = scheme == "adams" ? VieScheme::adams : VieScheme::rectangle;
            // Real u keeps the real solver's blow-up detection.
            VieSolution<std::complex<double>> sol;
            if (u_im == 0.0) {
                const auto real_sol = solve_vie<double>(p, u_re, t_end, steps, opt);
                sol.grid = real_sol.grid;
                sol.values.assign(real_sol.values.begin(), real_sol.values.end());
                sol.blew_up = real_sol.blew_up;
                sol.blowup_time = real_sol.blowup_time;
                sol.u = u_re;
                sol.step = real_sol.step;
            } else {
                sol = solve_vie<std::complex<double>>(p, {u_re, u_im}, t_end, steps, opt);
            }
            const std::vector<std::complex<double>> m = mgf_path(p, sol);
            std::ostringstream os;
            os << "t,re_f,im_f,re_mgf,im_mgf\n";
            for (std::size_t i = 0; i < sol.grid.size(); ++i)
                os << format_number(sol.grid[i]) << ',' << format_number(sol.values[i].real()) << ','
                   << format_number(sol.values[i].imag()) << ',' << format_number(m[i].real()) << ','
                   << format_number(m[i].imag()) << '\n';
            os << "# blew_up=" << (sol.blew_up ? "true" : "false")
               << ",blowup_time=" << format_number(sol.blowup_time.value_or(std::nan(""))) << '\n';
            emit(g, os.str());
        } else if (*coeffs_cmd) {
            std::ostringstream os;
            write_csv(os, compute_coefficients(p, u, n_coeffs));
            emit(g, os.str());
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const RangeError& e) {
        std::cerr << "range error: " << e.what() << '\n'
                  << "valid maturity range: (" << format_number(e.valid_lo()) << ", " << format_number(e.valid_hi()) << "]\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

// lgi: scans, optimisation and oracle cross-checks for two-time quasi-probabilities.
//
// Exit codes: 0 ok, 2 usage, 3 numerical failure, 4 oracle mismatch.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "lgi/lgi.hpp"

namespace {

using namespace lgi;
using namespace lgi::cli;
using explorer::Axis;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(flag + ": '" + s + "' is not a finite number");
    }
}

Axis parse_range(const std::string& s, const std::string& flag) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw UsageError(flag + ": expected lo:hi:n, got '" + s + "'");
    Axis a{to_double(parts[0], flag), to_double(parts[1], flag), 0};
    long n = 0;
    try {
        std::size_t used = 0;
        n = std::stol(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    } catch (const std::exception&) {
        throw UsageError(flag + ": point count '" + parts[2] + "' is not an integer");
    }
    if (n < 2) throw UsageError(flag + ": need at least 2 points");
    if (!(a.lo < a.hi)) throw UsageError(flag + ": need lo < hi");
    a.n = static_cast<std::size_t>(n);
    return a;
}

Complex parse_complex(const std::string& s, const std::string& flag) {
    const auto parts = split(s, ',');
    if (parts.size() == 1) return {to_double(parts[0], flag), 0.0};
    if (parts.size() == 2) return {to_double(parts[0], flag), to_double(parts[1], flag)};
    throw UsageError(flag + ": expected re,im, got '" + s + "'");
}

std::vector<OutcomePair> parse_outcomes(const std::string& s, const std::string& flag) {
    std::vector<OutcomePair> out;
    for (const auto& item : split(s, ',')) {
        try {
            const auto p = parse_outcome_pair(item);
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        } catch (const std::invalid_argument&) {
            throw UsageError(flag + ": bad outcome pair '" + item + "' (use ++, +-, -+, -- or pp, pm, mp, mm)");
        }
    }
    if (out.empty()) throw UsageError(flag + ": no outcome pairs given");
    return out;
}

json axis_json(const Axis& a) { return {{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; }

// Grid and contour files shared by both scan commands.
void write_scan(OutputSet& out, const explorer::ScanResult& r, const std::string& x_name) {
    std::string grid = x_name + ",beta,q_pp,q_pm,q_mp,q_mm\n";
    for (std::size_t iy = 0; iy < r.ny(); ++iy) {
        for (std::size_t ix = 0; ix < r.nx(); ++ix) {
            const std::size_t k = r.flat(ix, iy);
            grid += fmt(r.spec.x.at(ix)) + ',' + fmt(r.spec.y.at(iy));
            for (std::size_t s = 0; s < 4; ++s) grid += ',' + fmt(r.q[s][k]);
            grid += '\n';
        }
    }
    out.write("grid.csv", grid);

    std::string contours = "outcome,region_id,polyline_id,closed,vertex_index,x,y\n";
    if (r.nx() >= 2 && r.ny() >= 2) {
        for (const auto s : r.spec.outcomes) {
            const auto regions = explorer::negative_regions(r, s);
            for (std::size_t id = 0; id < regions.size(); ++id) {
                for (std::size_t pl = 0; pl < regions[id].polylines.size(); ++pl) {
                    const auto& line = regions[id].polylines[pl];
                    for (std::size_t v = 0; v < line.vertices.size(); ++v)
                        contours += s.label() + ',' + std::to_string(id) + ',' + std::to_string(pl) + ',' +
                                    (line.closed ? "1" : "0") + ',' + std::to_string(v) + ',' + fmt(line.vertices[v].x) +
                                    ',' + fmt(line.vertices[v].y) + '\n';
                }
            }
        }
    }
    out.write("contours.csv", contours);
}

json scan_summary(const explorer::ScanResult& r) {
    json mins = json::object();
    for (const auto s : kAllOutcomePairs) {
        const auto& m = r.min_of(s);
        mins["q_" + s.label()] = {{"value", m.value}, {"x", m.x}, {"y", m.y}, {"ix", m.ix}, {"iy", m.iy}};
    }
    const auto inv = explorer::check_invariants(r);
    return {{"minimum", mins},
            {"invariants", {{"max_sum_rule_residual", inv.sum_rule},
                            {"max_marginal_residual", inv.marginal_rule},
                            {"min_q", inv.minimum}}}};
}

void print_scan_line(const explorer::ScanResult& r, const std::string& x_name) {
    for (const auto s : r.spec.outcomes) {
        const auto& m = r.min_of(s);
        std::cout << "min q_" << s.label() << " = " << fmt(m.value) << " at " << x_name << "=" << fmt(m.x)
                  << " beta=" << fmt(m.y) << '\n';
    }
}

struct ScanFlags {
    std::string beta_range = "0:3:200";
    double beta = NAN;
    std::string x_range;
    double x_single = NAN;
    std::string outcomes = "++,--";
    std::string out = ".";
};

Axis resolve_axis(const std::string& range, double single, const std::string& range_flag) {
    if (!std::isnan(single)) {
        if (!std::isfinite(single)) throw UsageError(range_flag + ": value must be finite");
        return Axis{single, single, 1};
    }
    return parse_range(range, range_flag);
}

int run_osc_scan(const ScanFlags& f, const std::string& alpha, double nu, double r, double t1,
                 const std::vector<std::string>& argv) {
    if (!(nu >= 0.5)) throw UsageError("--nu: must be >= 0.5");
    if (!std::isfinite(r) || !std::isfinite(t1)) throw UsageError("--r/--t1: must be finite");
    explorer::ScanSpec spec;
    spec.system = explorer::System::oscillator;
    spec.oscillator = {OscillatorState{parse_complex(alpha, "--alpha"), nu}, r, t1};
    spec.x = resolve_axis(f.x_range, f.x_single, "--theta-range");
    spec.y = resolve_axis(f.beta_range, f.beta, "--beta-range");
    spec.outcomes = parse_outcomes(f.outcomes, "--outcomes");
    OutputSet out(f.out, "osc-scan", argv);
    auto result = explorer::grid_scan(spec);
    result.timestamp = utc_now();
    write_scan(out, result, "theta");
    json params = {{"system", "oscillator"},
                   {"alpha", {spec.oscillator.state.alpha.real(), spec.oscillator.state.alpha.imag()}},
                   {"nu", nu},
                   {"r", r},
                   {"t1", t1},
                   {"theta", axis_json(spec.x)},
                   {"beta", axis_json(spec.y)},
                   {"outcomes", f.outcomes},
                   {"threads", explorer::worker_count()}};
    params["summary"] = scan_summary(result);
    out.finish(params);
    print_scan_line(result, "theta");
    return kOk;
}

int run_field_scan(const ScanFlags& f, double omega_ell, const std::vector<std::string>& argv) {
    if (!(omega_ell > 0.0) || !std::isfinite(omega_ell)) throw UsageError("--omega-ell: must be > 0");
    explorer::ScanSpec spec;
    spec.system = explorer::System::field;
    spec.field.omega_ell = omega_ell;
    spec.x = resolve_axis(f.x_range, f.x_single, "--tau-range");
    spec.y = resolve_axis(f.beta_range, f.beta, "--beta-range");
    if (spec.x.lo < 0.0) throw UsageError("--tau-range: tau must be >= 0");
    spec.outcomes = parse_outcomes(f.outcomes, "--outcomes");
    OutputSet out(f.out, "field-scan", argv);
    auto result = explorer::grid_scan(spec);
    result.timestamp = utc_now();
    write_scan(out, result, "tau");
    json params = {{"system", "field"},
                   {"omega_ell", omega_ell},
                   {"tau", axis_json(spec.x)},
                   {"beta", axis_json(spec.y)},
                   {"outcomes", f.outcomes},
                   {"threads", explorer::worker_count()}};
    params["summary"] = scan_summary(result);
    out.finish(params);
    print_scan_line(result, "tau");
    return kOk;
}

struct OptimizeFlags {
    std::string system = "osc";
    std::string outcome = "--";
    std::string bounds;
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    std::string alpha = "0,0";
    double nu = 0.5;
    double t1 = 0.0;
    std::string out = ".";
};

int run_optimize(const OptimizeFlags& f, const std::vector<std::string>& argv) {
    explorer::OptimizeSpec spec;
    if (f.system == "osc" || f.system == "oscillator") {
        spec.system = explorer::System::oscillator;
        spec.lo = {0.0, 0.0, 0.0};
        spec.hi = {1.0, 2.0, 2.0 * kPi};
    } else if (f.system == "field") {
        spec.system = explorer::System::field;
        spec.lo = {0.25, 0.0, 0.0};
        spec.hi = {4.0, 3.0, 12.0};
    } else {
        throw UsageError("--system: expected osc or field, got '" + f.system + "'");
    }
    const auto outcomes = parse_outcomes(f.outcome, "--outcome");
    if (outcomes.size() != 1) throw UsageError("--outcome: give exactly one outcome pair");
    spec.outcome = outcomes.front();
    if (!f.bounds.empty()) {
        const auto dims = split(f.bounds, ',');
        if (dims.size() != 3) throw UsageError("--bounds: expected three lo:hi pairs separated by commas");
        for (std::size_t d = 0; d < 3; ++d) {
            const auto lh = split(dims[d], ':');
            if (lh.size() != 2) throw UsageError("--bounds: expected lo:hi, got '" + dims[d] + "'");
            spec.lo[d] = to_double(lh[0], "--bounds");
            spec.hi[d] = to_double(lh[1], "--bounds");
            if (spec.lo[d] > spec.hi[d]) throw UsageError("--bounds: lo > hi in '" + dims[d] + "'");
        }
    }
    if (f.restarts < 1) throw UsageError("--restarts: must be >= 1");
    if (!(f.nu >= 0.5)) throw UsageError("--nu: must be >= 0.5");
    spec.restarts = f.restarts;
    spec.seed = f.seed;
    spec.oscillator.state = OscillatorState{parse_complex(f.alpha, "--alpha"), f.nu};
    spec.oscillator.t1 = f.t1;
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }

    OutputSet out(f.out, "optimize", argv);
    const auto res = explorer::minimize_q(spec);
    const bool osc = spec.system == explorer::System::oscillator;
    const std::array<const char*, 3> names = osc ? std::array<const char*, 3>{"r", "beta", "theta"}
                                                 : std::array<const char*, 3>{"omega_ell", "beta", "tau"};
    json params = json::object();
    for (std::size_t d = 0; d < 3; ++d) params[names[d]] = res.params[d];
    json restarts = json::array();
    for (const auto& r : res.restarts) {
        json j = {{"index", r.index},
                  {"start", r.start},
                  {"params", r.params},
                  {"q", std::isfinite(r.q) ? json(r.q) : json(nullptr)},
                  {"iterations", r.iterations},
                  {"converged", r.converged}};
        if (!r.error.empty()) j["error"] = r.error;
        restarts.push_back(j);
    }
    json optimum = {{"system", osc ? "oscillator" : "field"},
                    {"outcome", spec.outcome.symbol()},
                    {"params", params},
                    {"q", res.q},
                    {"iterations", res.iterations},
                    {"winning_restart", res.winning_restart},
                    {"seed", f.seed},
                    {"restarts", restarts}};
    out.write("optimum.json", optimum.dump(2) + "\n");
    json bounds = json::array();
    for (std::size_t d = 0; d < 3; ++d) bounds.push_back({{"name", names[d]}, {"lo", spec.lo[d]}, {"hi", spec.hi[d]}});
    json manifest_params = {{"system", osc ? "oscillator" : "field"},
                            {"outcome", spec.outcome.symbol()},
                            {"bounds", bounds},
                            {"restarts", spec.restarts}};
    if (osc)
        manifest_params["state"] = {{"alpha", {spec.oscillator.state.alpha.real(), spec.oscillator.state.alpha.imag()}},
                                    {"nu", f.nu},
                                    {"t1", f.t1}};
    out.finish(manifest_params, f.seed);
    std::cout << "q_" << spec.outcome.label() << "* = " << fmt(res.q) << " at " << names[0] << "=" << fmt(res.params[0])
              << " " << names[1] << "=" << fmt(res.params[1]) << " " << names[2] << "=" << fmt(res.params[2])
              << " (restart " << res.winning_restart << " of " << spec.restarts << ")\n";
    return kOk;
}

struct OracleFlags {
    long samples = 100;
    std::uint64_t seed = 0;
    double tol = tol::oracle_agreement;
    std::size_t dim = 120;
    double perturb = 0.0;
    std::string out = ".";
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int run_oracle_check(const OracleFlags& f, const std::vector<std::string>& argv) {
    if (f.samples < 1) throw UsageError("--samples: must be >= 1");
    if (!(f.tol > 0.0)) throw UsageError("--tol: must be > 0");
    if (f.dim < 8) throw UsageError("--dim: must be >= 8");
    OutputSet out(f.out, "oracle-check", argv);
    std::mt19937_64 rng(f.seed);
    auto disk = [&](double radius) { return std::polar(radius * uniform01(rng), 2.0 * kPi * uniform01(rng)); };

    json entries = json::array();
    double worst = -1.0;
    json worst_entry;
    for (long i = 0; i < f.samples; ++i) {
        // Stratified so that every closed-form branch is exercised.
        const int stratum = static_cast<int>(i % 4);
        Complex alpha = disk(2.5);
        Complex beta = disk(2.5);
        double r = -1.0 + 2.0 * uniform01(rng);
        double nu = 0.5 + uniform01(rng);
        const double t1 = 2.0 * kPi * uniform01(rng);
        const double theta = 2.0 * kPi * uniform01(rng);
        if (stratum == 0) r = 0.0;
        if (stratum == 1) {
            nu = 0.5;
            alpha = 0.0;
        }
        if (stratum == 2) nu = 0.5;
        const OscillatorState state{alpha, nu};
        const GaussianProjector proj{beta, r};
        const double t2 = t1 + theta;

        std::array<double, 4> closed{};
        std::array<double, 4> disp{};
        for (const auto s : kAllOutcomePairs) {
            closed[s.index()] = quasi_probability(state, proj, t1, t2, s.first, s.second) + f.perturb;
            disp[s.index()] = qp_displacement_route(state, proj, t1, t2, s.first, s.second);
        }
        const auto fock = fock::oracle_table(state, proj, t1, t2, f.dim);
        double d_cf = 0.0, d_cd = 0.0, d_fd = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            d_cf = std::max(d_cf, std::abs(closed[k] - fock.q[k]));
            d_cd = std::max(d_cd, std::abs(closed[k] - disp[k]));
            d_fd = std::max(d_fd, std::abs(fock.q[k] - disp[k]));
        }
        json e = {{"index", i},
                  {"stratum", stratum},
                  {"alpha", {alpha.real(), alpha.imag()}},
                  {"nu", nu},
                  {"beta", {beta.real(), beta.imag()}},
                  {"r", r},
                  {"t1", t1},
                  {"theta", theta},
                  {"q_closed", closed},
                  {"q_fock", fock.q},
                  {"q_displacement", disp},
                  {"fock_dim", fock.dim},
                  {"fock_truncation_delta", fock.delta},
                  {"truncation_warning", fock.truncation_warning},
                  {"delta_closed_fock", d_cf},
                  {"delta_closed_displacement", d_cd},
                  {"delta_fock_displacement", d_fd}};
        const double w = std::max({d_cf, d_cd, d_fd});
        if (w > worst) {
            worst = w;
            worst_entry = e;
        }
        entries.push_back(std::move(e));
    }
    const bool pass = worst <= f.tol;
    json report = {{"samples", f.samples}, {"seed", f.seed},       {"tol", f.tol},   {"max_delta", worst},
                   {"pass", pass},         {"worst", worst_entry}, {"entries", entries}};
    out.write("oracle_report.json", report.dump(2) + "\n");
    json params = {{"samples", f.samples}, {"tol", f.tol}, {"dim", f.dim}};
    if (f.perturb != 0.0) params["perturb_closed_form"] = f.perturb;
    out.finish(params, f.seed);
    if (!pass) {
        std::cerr << "error: oracle mismatch " << fmt(worst) << " > " << fmt(f.tol)
                  << " at sample " << worst_entry["index"] << ": alpha=" << worst_entry["alpha"].dump()
                  << " nu=" << fmt(worst_entry["nu"]) << " beta=" << worst_entry["beta"].dump()
                  << " r=" << fmt(worst_entry["r"]) << " t1=" << fmt(worst_entry["t1"])
                  << " theta=" << fmt(worst_entry["theta"]) << '\n';
        return kOracleMismatch;
    }
    std::cout << "oracle-check: " << f.samples << " samples, max delta " << fmt(worst) << " <= " << fmt(f.tol) << '\n';
    return kOk;
}

// "--outcome --" would otherwise read as the end-of-options marker.
std::vector<std::string> join_outcome_values(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if ((args[i] == "--outcome" || args[i] == "--outcomes") && i + 1 < args.size()) {
            out.push_back(args[i] + "=" + args[i + 1]);
            ++i;
        } else {
            out.push_back(args[i]);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const auto args = join_outcome_values(argc, argv);

    CLI::App app{"Two-time quasi-probabilities: scans, optimisation and oracle cross-checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lgi::kVersion));

    ScanFlags osc_flags;
    osc_flags.x_range = "0:6.283185307179586:200";
    std::string alpha = "0,0";
    double nu = NAN;
    double r = 0.0;
    double t1 = 0.0;
    auto* osc = app.add_subcommand("osc-scan", "Scan q over (theta, beta) for the oscillator");
    osc->add_option("--alpha", alpha, "state displacement re,im")->capture_default_str();
    osc->add_option("--nu", nu, "thermal symplectic eigenvalue (>= 0.5)")->required();
    osc->add_option("--r", r, "projector squeezing")->capture_default_str();
    osc->add_option("--t1", t1, "first measurement time")->capture_default_str();
    auto* ob = osc->add_option("--beta-range", osc_flags.beta_range, "lo:hi:n")->capture_default_str();
    osc->add_option("--beta", osc_flags.beta, "single beta value")->excludes(ob);
    auto* ot = osc->add_option("--theta-range", osc_flags.x_range, "lo:hi:n")->capture_default_str();
    osc->add_option("--theta", osc_flags.x_single, "single theta value")->excludes(ot);
    osc->add_option("--outcomes", osc_flags.outcomes, "outcome pairs for contours")->capture_default_str();
    osc->add_option("--out", osc_flags.out, "output directory")->capture_default_str();

    ScanFlags field_flags;
    field_flags.x_range = "0:8:200";
    double omega_ell = NAN;
    auto* fld = app.add_subcommand("field-scan", "Scan q over (tau, beta) for the field local mode");
    fld->add_option("--omega-ell", omega_ell, "dimensionless omega*ell (> 0)")->required();
    auto* fb = fld->add_option("--beta-range", field_flags.beta_range, "lo:hi:n")->capture_default_str();
    fld->add_option("--beta", field_flags.beta, "single beta value")->excludes(fb);
    auto* ft = fld->add_option("--tau-range", field_flags.x_range, "lo:hi:n")->capture_default_str();
    fld->add_option("--tau", field_flags.x_single, "single tau value")->excludes(ft);
    fld->add_option("--outcomes", field_flags.outcomes, "outcome pairs for contours")->capture_default_str();
    fld->add_option("--out", field_flags.out, "output directory")->capture_default_str();

    OptimizeFlags opt_flags;
    auto* opt = app.add_subcommand("optimize", "Minimise one quasi-probability with restarted Nelder-Mead");
    opt->add_option("--system", opt_flags.system, "osc or field")->capture_default_str();
    opt->add_option("--outcome", opt_flags.outcome, "outcome pair")->capture_default_str();
    opt->add_option("--bounds", opt_flags.bounds,
                    "lo:hi,lo:hi,lo:hi over (r, beta, theta) or (omega_ell, beta, tau); lo == hi pins");
    opt->add_option("--restarts", opt_flags.restarts, "number of restarts")->capture_default_str();
    opt->add_option("--seed", opt_flags.seed, "start-set seed")->capture_default_str();
    opt->add_option("--alpha", opt_flags.alpha, "oscillator state displacement re,im")->capture_default_str();
    opt->add_option("--nu", opt_flags.nu, "oscillator thermal eigenvalue")->capture_default_str();
    opt->add_option("--t1", opt_flags.t1, "oscillator first measurement time")->capture_default_str();
    opt->add_option("--out", opt_flags.out, "output directory")->capture_default_str();

    OracleFlags or_flags;
    auto* orc = app.add_subcommand("oracle-check", "Closed forms against the Fock and displacement-integral oracles");
    orc->add_option("--samples", or_flags.samples, "random scenarios")->capture_default_str();
    orc->add_option("--seed", or_flags.seed, "sampling seed")->capture_default_str();
    orc->add_option("--tol", or_flags.tol, "pairwise agreement tolerance")->capture_default_str();
    orc->add_option("--dim", or_flags.dim, "initial Fock truncation")->capture_default_str();
    orc->add_option("--out", or_flags.out, "output directory")->capture_default_str();
    // Mutation fixture: shifts every closed-form value so the check must fail.
    orc->add_option("--perturb-closed-form", or_flags.perturb)->group("");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*osc) return run_osc_scan(osc_flags, alpha, nu, r, t1, args);
        if (*fld) return run_field_scan(field_flags, omega_ell, args);
        if (*opt) return run_optimize(opt_flags, args);
        if (*orc) return run_oracle_check(or_flags, args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const lgi::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const lgi::explorer::ScanError& e) {
        std::cerr << "error: numerical failure at " << e.what() << '\n';
        return kNumeric;
    } catch (const lgi::Error& e) {
        std::cerr << "error: numerical failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

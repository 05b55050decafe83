// squeeze-lab: transfer matrices for regularized multi-delta potentials,
// squeezing-limit classification, resonance-set tracing, transmission
// sweeps and the self-check suite.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification
// failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "squeeze/squeeze.hpp"
#include "squeeze/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerify = 4;

/// stod with a usage-error (exit 2) instead of a domain error on junk.
double parse_number(const std::string& text, const std::string& flag) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || text.empty())
        throw CLI::ValidationError(flag, "malformed number '" + text + "'");
    return v;
}

std::vector<double> parse_intensities(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_number(item, "--a"));
    if (out.empty())
        throw CLI::ValidationError("--a", "empty intensity list");
    return out;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError(flag, "expected LO:HI, got '" + text + "'");
    double a = parse_number(text.substr(0, colon), flag);
    double b = parse_number(text.substr(colon + 1), flag);
    if (!(a < b))
        throw CLI::ValidationError(flag, "expected LO:HI with LO < HI, got '" + text + "'");
    return {a, b};
}

double parse_exponent(const std::string& text, const std::string& flag) {
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    return parse_number(text, flag);
}

/// Every emitted number: 17 significant digits, '.' separator,
/// locale-independent; identical inputs give byte-identical output.
std::string num(double v) { return squeeze::format_double(v); }

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    f << content;
}

json json_or_null(double v) {
    if (std::isfinite(v))
        return v;
    return nullptr;
}

// ------------------------------------------------------------- commands

struct MatrixArgs {
    std::string a_text, mu_text, tau_text = "1", out, format = "json";
    double eps = 1e-3, k = 1.0;
    std::optional<double> l_override, r_override;
};

int cmd_matrix(const MatrixArgs& args) {
    squeeze::RegularizedSystem sys;
    sys.intensities = parse_intensities(args.a_text);
    sys.eps = args.eps;
    sys.k = args.k;
    double mu = parse_exponent(args.mu_text, "--mu");
    double tau = parse_exponent(args.tau_text, "--tau");
    squeeze::path_family(mu, tau);
    sys.l = args.l_override ? *args.l_override : squeeze::width_at(args.eps, mu);
    sys.r = args.r_override ? *args.r_override : squeeze::gap_at(args.eps, tau);
    auto res = squeeze::stack_matrix_with_error(sys);
    if (args.format == "csv") {
        std::string csv = "m11,m12,m21,m22,det\n" + num(res.value.m11) + "," +
                          num(res.value.m12) + "," + num(res.value.m21) + "," +
                          num(res.value.m22) + "," + num(res.det) + "\n";
        write_output(args.out, csv);
    } else {
        json j;
        j["m11"] = res.value.m11;
        j["m12"] = res.value.m12;
        j["m21"] = res.value.m21;
        j["m22"] = res.value.m22;
        j["det"] = res.det;
        write_output(args.out, j.dump(2) + "\n");
    }
    return 0;
}

struct SweepArgs {
    std::string a_text, mu_text, tau_text, out;
    double k = 1.0, eps_start = 1e-1, eps_factor = 0.31622776601683794;
    int steps = 24;
};

int cmd_sweep(const SweepArgs& args) {
    auto a = parse_intensities(args.a_text);
    squeeze::SqueezePath path{parse_exponent(args.mu_text, "--mu"),
                              parse_exponent(args.tau_text, "--tau")};
    auto seq = squeeze::eps_sequence(args.eps_start, args.eps_factor, args.steps);
    std::string csv = "eps,m11,m12,m21,m22,det\n";
    for (double eps : seq) {
        auto res = squeeze::matrix_at_with_error(a, path, args.k, eps);
        csv += num(eps) + "," + num(res.value.m11) + "," + num(res.value.m12) + "," +
               num(res.value.m21) + "," + num(res.value.m22) + "," + num(res.det) + "\n";
    }
    write_output(args.out, csv);
    return 0;
}

struct ClassifyArgs {
    std::string a_text, mu_text, tau_text, limit_order, out;
    double eta = 0.5, tol = squeeze::kMembershipTol;
};

int cmd_classify(const ClassifyArgs& args) {
    auto a = parse_intensities(args.a_text);
    squeeze::SqueezePath path{parse_exponent(args.mu_text, "--mu"),
                              parse_exponent(args.tau_text, "--tau")};
    if (!args.limit_order.empty()) {
        if (!(std::isinf(path.mu) && std::isinf(path.tau)))
            throw std::invalid_argument(
                "--limit-order is only legal when both --mu and --tau are inf");
        path.limit_order = args.limit_order == "mu-first" ? squeeze::LimitOrder::MuFirst
                                                          : squeeze::LimitOrder::TauFirst;
    }
    auto label = squeeze::path_family(path.mu, path.tau);
    auto li = squeeze::classify(a, path, args.tol);

    json j;
    j["a"] = a;
    j["mu"] = std::isinf(path.mu) ? json("inf") : json(path.mu);
    j["tau"] = std::isinf(path.tau) ? json("inf") : json(path.tau);
    j["path_label"] = label.str();
    json members = json::array();
    for (auto id : squeeze::membership(a, args.tol)) {
        std::string name = squeeze::set_name(id);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        members.push_back(name);
    }
    j["memberships"] = members;
    j["kind"] = li.kind_name();
    j["theta"] = json_or_null(li.theta);
    j["alpha"] = json_or_null(li.alpha);
    if (li.kind == squeeze::InteractionKind::Reflectionless)
        j["sign"] = li.sign;
    j["eta"] = args.eta;
    j["gamma"] = nullptr;
    if (std::isfinite(li.theta) && li.kind != squeeze::InteractionKind::Delta) {
        try {
            j["gamma"] = squeeze::theta_to_gamma(li.theta, args.eta);
        } catch (const squeeze::DivisionByZero&) {
            j["gamma_reason"] = "denominator zero";
        }
    }
    if (li.has_matrix()) {
        auto m = li.matrix();
        j["matrix"] = json::array({json::array({m.m11, m.m12}), json::array({m.m21, m.m22})});
    } else {
        j["matrix"] = nullptr;
    }
    if (label.family == 2 || label.family == 3)
        j["note"] = "tabulated closed-form classification; on this path family the exact "
                    "product limit acquires layer-width corrections of order eps^(mu-3) "
                    "(see `sweep` and `verify`)";
    write_output(args.out, j.dump(2) + "\n");
    return 0;
}

struct ResonanceArgs {
    std::string set_text, a1_range, a2_range, window_text, out;
    std::optional<double> slice_a1;
    int samples = 200;
};

squeeze::SetId parse_set(const std::string& text) {
    std::string up = text;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    for (auto id : {squeeze::SetId::K2, squeeze::SetId::K3, squeeze::SetId::L2,
                    squeeze::SetId::L3, squeeze::SetId::F2, squeeze::SetId::F3,
                    squeeze::SetId::G2, squeeze::SetId::G3})
        if (squeeze::set_name(id) == up)
            return id;
    throw CLI::ValidationError("--set", "unknown or unsolvable set '" + text + "'");
}

int cmd_resonance(const ResonanceArgs& args) {
    auto id = parse_set(args.set_text);
    squeeze::Interval window{-60.0, 60.0};
    if (!args.window_text.empty()) {
        auto [lo, hi] = parse_range(args.window_text, "--window");
        window = {lo, hi};
    }
    std::vector<squeeze::ResonanceBranch> branches;
    bool surface = squeeze::set_arity(id) == 3;
    if (surface) {
        if (!args.slice_a1 || args.a2_range.empty())
            throw CLI::ValidationError("--set",
                                       "arity-3 sets need --slice-a1 and --a2 LO:HI");
        auto [lo, hi] = parse_range(args.a2_range, "--a2");
        branches = squeeze::slice_surface(id, *args.slice_a1, {lo, hi}, args.samples, window);
    } else {
        if (args.a1_range.empty())
            throw CLI::ValidationError("--a1", "arity-2 sets need --a1 LO:HI");
        auto [lo, hi] = parse_range(args.a1_range, "--a1");
        branches = squeeze::trace_curve(id, {lo, hi}, args.samples, window);
    }
    std::string csv = surface ? "branch_id,a1,a2,a3,residual\n" : "branch_id,a1,a2,residual\n";
    for (std::size_t b = 0; b < branches.size(); ++b) {
        for (const auto& pt : branches[b].points) {
            double res = surface
                             ? squeeze::residual(id, std::array<double, 3>{pt[0], pt[1], pt[2]})
                             : squeeze::residual(id, std::array<double, 2>{pt[0], pt[1]});
            csv += std::to_string(b) + "," + num(pt[0]) + "," + num(pt[1]);
            if (surface)
                csv += "," + num(pt[2]);
            csv += "," + num(res) + "\n";
        }
    }
    write_output(args.out, csv);
    return 0;
}

struct TransmissionArgs {
    std::string a_text, mu_text, tau_text, k_range = "0.1:10", out;
    std::optional<double> eps;
    bool limit = false;
    int samples = 50;
    double tol = squeeze::kMembershipTol;
};

int cmd_transmission(const TransmissionArgs& args) {
    auto a = parse_intensities(args.a_text);
    squeeze::SqueezePath path{parse_exponent(args.mu_text, "--mu"),
                              parse_exponent(args.tau_text, "--tau")};
    auto [k_lo, k_hi] = parse_range(args.k_range, "--k-range");
    if (args.limit == args.eps.has_value())
        throw CLI::ValidationError("--limit", "pass exactly one of --limit or --eps");
    std::vector<squeeze::SweepRow> rows;
    if (args.limit) {
        auto li = squeeze::classify(a, path, args.tol);
        rows = squeeze::transmission_sweep(li, k_lo, k_hi, args.samples);
    } else {
        rows = squeeze::transmission_sweep(a, path, *args.eps, k_lo, k_hi, args.samples);
    }
    std::string csv = "k,T,R\n";
    for (const auto& row : rows)
        csv += num(row.k) + "," + num(row.T) + "," + num(row.R) + "\n";
    write_output(args.out, csv);
    return 0;
}

struct VerifyArgs {
    std::string out;
    double tol_scale = 1.0;
};

int cmd_verify(const VerifyArgs& args) {
    squeeze::verify::Report rep = squeeze::verify::run({args.tol_scale});
    json j;
    j["passed"] = rep.count(squeeze::verify::Status::Pass);
    j["failed"] = rep.count(squeeze::verify::Status::Fail);
    j["known_deviations"] = rep.count(squeeze::verify::Status::KnownDeviation);
    j["seconds"] = rep.seconds;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["status"] = c.status == squeeze::verify::Status::Pass ? "pass"
                       : c.status == squeeze::verify::Status::Fail ? "fail"
                                                                   : "known_deviation";
        jc["detail"] = c.detail;
        checks.push_back(std::move(jc));
    }
    j["checks"] = checks;
    write_output(args.out, j.dump(2) + "\n");
    if (!rep.ok()) {
        for (const auto& c : rep.checks)
            if (c.status == squeeze::verify::Status::Fail)
                std::cerr << "verify: FAIL " << c.name << " (" << c.detail << ")\n";
        return kExitVerify;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transfer matrices, squeezing limits and resonance sets of "
                 "regularized multi-delta potentials"};
    app.require_subcommand(1);

    MatrixArgs margs;
    auto* matrix = app.add_subcommand("matrix", "one transfer matrix at finite regularization");
    matrix->add_option("--a", margs.a_text, "comma-separated nonzero intensities")->required();
    matrix->add_option("--eps", margs.eps, "squeezing parameter")->check(CLI::PositiveNumber);
    matrix->add_option("--mu", margs.mu_text, "width exponent in [2, inf], or 'inf'")->required();
    matrix->add_option("--tau", margs.tau_text, "gap exponent in [1, inf], or 'inf'");
    matrix->add_option("--k", margs.k, "wavenumber")->check(CLI::PositiveNumber);
    matrix->add_option("--l", margs.l_override, "layer width override (else eps^(mu-1))");
    matrix->add_option("--r", margs.r_override, "gap width override (else eps^tau)");
    matrix->add_option("--format", margs.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    matrix->add_option("--out", margs.out, "output path (default stdout)");

    SweepArgs sargs;
    auto* sweep = app.add_subcommand("sweep", "matrix elements along an eps schedule (CSV)");
    sweep->add_option("--a", sargs.a_text)->required();
    sweep->add_option("--mu", sargs.mu_text)->required();
    sweep->add_option("--tau", sargs.tau_text)->required();
    sweep->add_option("--k", sargs.k)->check(CLI::PositiveNumber);
    sweep->add_option("--eps-start", sargs.eps_start)->check(CLI::PositiveNumber);
    sweep->add_option("--eps-factor", sargs.eps_factor);
    sweep->add_option("--steps", sargs.steps)->check(CLI::Range(2, 1000000));
    sweep->add_option("--out", sargs.out);

    ClassifyArgs cargs;
    auto* classify = app.add_subcommand("classify", "limit interaction for (a, path) (JSON)");
    classify->add_option("--a", cargs.a_text)->required();
    classify->add_option("--mu", cargs.mu_text)->required();
    classify->add_option("--tau", cargs.tau_text)->required();
    classify->add_option("--limit-order", cargs.limit_order,
                         "mu-first or tau-first; only when both exponents are inf")
        ->check(CLI::IsMember({"mu-first", "tau-first"}));
    classify->add_option("--eta", cargs.eta, "averaging weight (default 1/2)");
    classify->add_option("--tol", cargs.tol, "membership tolerance on cleared residuals")
        ->check(CLI::PositiveNumber);
    classify->add_option("--out", cargs.out);

    ResonanceArgs rargs;
    auto* resonance = app.add_subcommand("resonance",
                                         "trace resonance curves / surface slices (CSV)");
    resonance->add_option("--set", rargs.set_text, "k2,l2,f2,g2,k3,l3,f3,g3")->required();
    resonance->add_option("--a1", rargs.a1_range, "a1 range LO:HI (arity-2 sets)");
    resonance->add_option("--slice-a1", rargs.slice_a1, "fixed a1 (arity-3 sets)");
    resonance->add_option("--a2", rargs.a2_range, "a2 range LO:HI (arity-3 sets)");
    resonance->add_option("--samples", rargs.samples)->check(CLI::Range(2, 1000000));
    resonance->add_option("--window", rargs.window_text,
                          "search window LO:HI for the solved coordinate (default -60:60)");
    resonance->add_option("--out", rargs.out);

    TransmissionArgs targs;
    auto* transmission = app.add_subcommand("transmission", "T(k), R(k) table (CSV)");
    transmission->add_option("--a", targs.a_text)->required();
    transmission->add_option("--mu", targs.mu_text)->required();
    transmission->add_option("--tau", targs.tau_text)->required();
    transmission->add_option("--k-range", targs.k_range, "wavenumber range LO:HI");
    transmission->add_option("--samples", targs.samples)->check(CLI::Range(1, 1000000));
    transmission->add_option("--eps", targs.eps, "finite regularization");
    transmission->add_flag("--limit", targs.limit, "scatter off the classified limit");
    transmission->add_option("--tol", targs.tol)->check(CLI::PositiveNumber);
    transmission->add_option("--out", targs.out);

    VerifyArgs vargs;
    auto* verify = app.add_subcommand("verify", "run the cross-validation suite (JSON report)");
    verify->add_option("--tol-scale", vargs.tol_scale,
                       "multiply every check tolerance (fault injection: 1e-20)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", vargs.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (matrix->parsed())
            return cmd_matrix(margs);
        if (sweep->parsed())
            return cmd_sweep(sargs);
        if (classify->parsed())
            return cmd_classify(cargs);
        if (resonance->parsed())
            return cmd_resonance(rargs);
        if (transmission->parsed())
            return cmd_transmission(targs);
        if (verify->parsed())
            return cmd_verify(vargs);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}

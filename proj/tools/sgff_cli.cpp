// command-line front end: each subcommand writes CSV/text whose first line is
// '# ' + the full effective config, so a run can be replayed from its output
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgff/correlator.hpp"
#include "sgff/equilibrium.hpp"
#include "sgff/kernel_algebra.hpp"
#include "sgff/model_file.hpp"

using namespace sgff;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitInvariant = 1, kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json defaults() {
    return json{
        {"params", {{"b", 0.25}, {"m", 1.0}}},
        {"seed", 1},
        {"workers", int(std::max(1u, std::thread::hardware_concurrency()))},
        {"sanity", {{"inject_fault", 0.0}}},
        {"smatrix", {{"points", 200}}},
        {"minff", {{"lambda_min", -10.0}, {"lambda_max", 10.0}, {"points", 201}}},
        {"ff_validate",
         {{"model", "toy-bounded"}, {"n", {2, 3, 4}}, {"points", 20}, {"spread", 1.5}, {"radius", 1e-2},
          {"circle_points", 32}, {"tol", 0.0}}},
        {"kernels", {{"n", 2}, {"m", 2}, {"reduce", false}}},
        {"correlator",
         {{"model1", "toy-bounded"}, {"model2", "toy-bounded"}, {"r", 1.0}, {"n_max", 3}, {"method", "auto"},
          {"mc_samples", 200000}, {"quad_points", 0}, {"theta", 0.0}, {"x_sign", 1}}},
        {"zn",
         {{"N_min", 2}, {"N_max", 6}, {"kappa", 1.0}, {"model1", "toy-bounded"}, {"model2", "toy-bounded"},
          {"method", "auto"}, {"mc_samples", 200000}, {"quad_points", 0}}},
        {"equilibrium",
         {{"N", {1000}}, {"kappa", 1.0}, {"nodes", 2000}, {"extent", 1.2}, {"refine", true}, {"max_nodes", 4000},
          {"energy_tol", 1e-6}}},
    };
}

// recursive overlay; unknown keys are a usage error so typos do not pass silently
void overlay(json& base, const json& over, const std::string& path) {
    for (auto it = over.begin(); it != over.end(); ++it) {
        std::string p = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) throw UsageError("unknown config key '" + p + "'");
        if (base[it.key()].is_object() && it->is_object()) overlay(base[it.key()], *it, p);
        else base[it.key()] = *it;
    }
}

ModelParams params_from(const json& p) {
    double m = p.value("m", 1.0);
    if (p.contains("g")) return ModelParams::from_coupling(p["g"].get<double>(), m);
    return ModelParams::from_b(p.at("b").get<double>(), m);
}

class Output {
public:
    Output(const std::string& dir, const std::string& name, const json& header) {
        std::filesystem::create_directories(dir);
        path_ = (std::filesystem::path(dir) / name).string();
        f_.open(path_);
        if (!f_) throw UsageError("cannot write output file: " + path_);
        f_ << "# " << header.dump() << "\n";
    }
    std::ofstream& os() { return f_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream f_;
};

// ---------------------------------------------------------------- commands

int cmd_sanity(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const double fault = cfg["sanity"]["inject_fault"].get<double>();
    if (fault != 0) pf.inject_fault(fault);
    RandomStream rs(cfg["seed"].get<std::uint64_t>(), 0);
    std::vector<std::pair<std::string, double>> rows;  // check, max violation
    auto record = [&](const std::string& name, double v) { rows.push_back({name, v}); };

    double uni = 0, cross = 0, modulus = 0, integ = 0;
    for (int k = 0; k < 200; ++k) {
        cplx b(-6 + 12 * rs.next_uniform(), k % 2 ? (-0.9 + 1.8 * rs.next_uniform()) * kPi : 0.0);
        uni = std::max(uni, std::abs(s_matrix(b, p) * s_matrix(-b, p) - 1.0));
        cross = std::max(cross, std::abs(s_matrix(b, p) - s_matrix(kI * kPi - b, p)));
        if (b.imag() == 0) modulus = std::max(modulus, std::abs(std::abs(s_matrix(b, p)) - 1));
    }
    for (int k = 0; k < 5; ++k) {
        cplx b(-3 + 6 * rs.next_uniform(), (-0.45 + 0.9 * rs.next_uniform()) * kPi);
        integ = std::max(integ, std::abs(s_matrix_integral(b, p, QuadratureSpec{}) - s_matrix(b, p)));
    }
    record("s_unitarity", uni <= 1e-12 ? uni : INFINITY);
    record("s_crossing", cross <= 1e-12 ? cross : INFINITY);
    record("s_unimodular", modulus <= 1e-12 ? modulus : INFINITY);
    record("s_integral_representation", integ <= 1e-8 ? integ : INFINITY);

    double watson = 0, period = 0, positive = 0, cache = 0, split = 0;
    for (int k = 0; k < 50; ++k) {
        double b = -8 + 16 * rs.next_uniform();
        watson = std::max(watson, std::abs(minimal_F(b, p) - s_matrix(b, p) * minimal_F(-b, p)));
        period = std::max(period, std::abs(minimal_F(cplx(b, 2 * kPi), p) - minimal_F(-b, p)));
        cplx prod = minimal_F(b, p) * minimal_F(-b, p);
        if (!(prod.real() > 0) || std::abs(prod.imag()) > 1e-10 * std::abs(prod)) positive = INFINITY;
        double l = 0.05 + 30 * rs.next_uniform();
        cache = std::max(cache, std::abs(pf.w(l) - pf.w_direct(l)));
        split = std::max(split, std::abs(pf.w_plus(l) + pf.w_minus(l) - pf.w(l)));
    }
    record("F_exchange_boundary", watson <= 1e-8 ? watson : INFINITY);
    record("F_periodicity_boundary", period <= 1e-8 ? period : INFINITY);
    record("w_positivity", positive);
    record("w_cache_consistency", cache <= 1e-8 ? cache : INFINITY);
    record("w_plus_minus_split", split <= 1e-10 ? split : INFINITY);

    double fw = INFINITY;
    for (double l = 0; l <= 60; l += 0.25) fw = std::min(fw, fourier_weight(l, p));
    record("fourier_weight_positive", fw > 0 ? 0.0 : INFINITY);

    double counts = 0, reduce = 0;
    for (int n = 0; n <= 5; ++n)
        for (int m = 0; n + m <= 5; ++m) {
            if (long(expand_kernel(n, m).size()) != expected_term_count(n, m)) counts = INFINITY;
            if (n >= 1 && !same_term_multiset(reduce_via_axiom_v(n, m), expand_kernel(n, m))) reduce = INFINITY;
        }
    record("kernel_term_counts", counts);
    record("kernel_reduction", reduce);

    Output o(out, "sanity.csv", cfg);
    o.os() << "check,status,max_violation\n";
    bool ok = true;
    for (auto& [name, v] : rows) {
        bool pass = std::isfinite(v);
        ok = ok && pass;
        o.os() << name << "," << (pass ? "pass" : "FAIL") << "," << num(v) << "\n";
        std::printf("%-28s %s\n", name.c_str(), pass ? "pass" : "FAIL");
    }
    return ok ? kExitOk : kExitInvariant;
}

int cmd_smatrix(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    const int n = cfg["smatrix"]["points"].get<int>();
    if (n < 1) throw UsageError("smatrix.points must be >= 1");
    RandomStream rs(cfg["seed"].get<std::uint64_t>(), 0);
    Output o(out, "smatrix.csv", cfg);
    o.os() << "beta_re,beta_im,S_re,S_im,S_int_re,S_int_im,abs_diff\n";
    double worst = 0;
    for (int k = 0; k < n; ++k) {
        cplx b(-6 + 12 * rs.next_uniform(), (-0.49 + 0.98 * rs.next_uniform()) * kPi);
        cplx s = s_matrix(b, p), si = s_matrix_integral(b, p, QuadratureSpec{});
        worst = std::max(worst, std::abs(s - si));
        o.os() << num(b.real()) << "," << num(b.imag()) << "," << num(s.real()) << "," << num(s.imag()) << ","
               << num(si.real()) << "," << num(si.imag()) << "," << num(std::abs(s - si)) << "\n";
    }
    std::printf("max |S - S_int| = %.3e over %d points\n", worst, n);
    return worst <= 1e-8 ? kExitOk : kExitInvariant;
}

int cmd_minff(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const auto& c = cfg["minff"];
    double lo = c["lambda_min"].get<double>(), hi = c["lambda_max"].get<double>();
    int n = c["points"].get<int>();
    if (n < 2 || !(hi > lo)) throw UsageError("minff needs points >= 2 and lambda_max > lambda_min");
    Output o(out, "minff.csv", cfg);
    o.os() << "lambda,F_re,F_im,w,w_tot\n";
    for (int k = 0; k < n; ++k) {
        double l = lo + (hi - lo) * k / (n - 1);
        cplx f = pf.F(l);
        std::string w = l == 0 ? "-inf" : num(pf.w(l));
        o.os() << num(l) << "," << num(f.real()) << "," << num(f.imag()) << "," << w << "," << num(pf.w_tot(l))
               << "\n";
    }
    std::printf("F(i pi) = %.17g\n", pf.F_ipi());
    return kExitOk;
}

int cmd_ff_validate(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const auto& c = cfg["ff_validate"];
    OperatorModel m = resolve_model(c["model"].get<std::string>(), pf);
    SamplingPlan sp;
    sp.points = c["points"].get<int>();
    sp.seed = cfg["seed"].get<std::uint64_t>();
    sp.spread = c["spread"].get<double>();
    sp.radius = c["radius"].get<double>();
    sp.circle_points = c["circle_points"].get<int>();
    const double tol = c["tol"].get<double>();
    Output o(out, "ff_validate.txt", cfg);
    o.os() << "model = " << m.name << "\n";
    o.os() << "convergence_only = " << (m.convergence_only ? "true" : "false") << "\n";
    bool ok = true;
    for (int n : c["n"].get<std::vector<int>>()) {
        auto rep = validate_axioms(m, n, sp, pf);
        o.os() << rep.to_text();
        std::printf("n = %d  max violation %.3e\n", n, rep.max_violation());
        if (tol > 0 && rep.max_violation() > tol) ok = false;
    }
    return ok ? kExitOk : kExitInvariant;
}

int cmd_kernels(const json& cfg, const std::string& out) {
    const auto& c = cfg["kernels"];
    int n = c["n"].get<int>(), m = c["m"].get<int>();
    bool red = c["reduce"].get<bool>();
    auto terms = red ? reduce_via_axiom_v(n, m) : expand_kernel(n, m);
    Output o(out, "kernels.txt", cfg);
    for (auto& t : terms) o.os() << normalize(t).to_line() << "\n";
    bool ok = long(terms.size()) == expected_term_count(n, m);
    if (n >= 1) ok = ok && same_term_multiset(reduce_via_axiom_v(n, m), expand_kernel(n, m));
    std::printf("%zu terms (expected %ld), reduction %s\n", terms.size(), expected_term_count(n, m),
                ok ? "consistent" : "INCONSISTENT");
    return ok ? kExitOk : kExitInvariant;
}

int cmd_correlator(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const auto& c = cfg["correlator"];
    CorrelatorConfig cc;
    cc.model1 = resolve_model(c["model1"].get<std::string>(), pf);
    cc.model2 = resolve_model(c["model2"].get<std::string>(), pf);
    cc.r = c["r"].get<double>();
    cc.n_max = c["n_max"].get<int>();
    cc.method = parse_method(c["method"].get<std::string>());
    cc.mc_samples = c["mc_samples"].get<long>();
    cc.quad_points = c["quad_points"].get<int>();
    cc.theta = c["theta"].get<double>();
    cc.x_sign = c["x_sign"].get<int>();
    cc.seed = cfg["seed"].get<std::uint64_t>();
    cc.workers = cfg["workers"].get<int>();
    try {
        cc.validate();
    } catch (const NumericsError& e) {
        throw UsageError(e.what());
    }
    auto rows = two_point_partial_sum(cc, pf);
    Output o(out, "correlator.csv", cfg);
    o.os() << "n,term,term_err,partial_sum\n";
    double max_imag = 0;
    for (auto& r : rows) {
        max_imag = std::max(max_imag, std::abs(r.term.imag()));
        o.os() << r.n << "," << num(r.term.real()) << "," << num(r.term_err) << "," << num(r.partial_sum.real())
               << "\n";
    }
    cplx eta = spin_prefactor(cc.model1.spin, cc.model2.spin, cc.theta, cc.x_sign);
    std::printf("spin prefactor e^eta = %.17g %+.17gi\n", eta.real(), eta.imag());
    std::printf("max |Im term| = %.3e\n", max_imag);
    return kExitOk;
}

int cmd_zn(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const auto& c = cfg["zn"];
    int n0 = c["N_min"].get<int>(), n1 = c["N_max"].get<int>();
    if (n0 < 1 || n1 < n0) throw UsageError("zn needs 1 <= N_min <= N_max");
    if (n1 > kMaxParticles) throw UsageError("zn: N_max beyond the 2^n cost gate (" + std::to_string(kMaxParticles) + ")");
    double kappa = c["kappa"].get<double>();
    if (!(kappa > 0)) throw UsageError("zn: kappa must be > 0");
    auto m1 = resolve_model(c["model1"].get<std::string>(), pf);
    auto m2 = resolve_model(c["model2"].get<std::string>(), pf);
    Method method = parse_method(c["method"].get<std::string>());
    long samples = c["mc_samples"].get<long>();
    if (method != Method::quadrature && samples < 1000) throw UsageError("zn: mc_samples must be >= 1000");
    Output o(out, "zn.csv", cfg);
    o.os() << "N,kappa,estimate,std_err,envelope\n";
    for (int N = n0; N <= n1; ++N) {
        auto e = z_n_estimate(N, kappa, m1, m2, pf, method, samples, cfg["seed"].get<std::uint64_t>(),
                              cfg["workers"].get<int>(), c["quad_points"].get<int>());
        std::string env = N >= 3 ? num(decay_envelope(N, p)) : "nan";
        o.os() << N << "," << num(kappa) << "," << num(e.value.real()) << "," << num(e.error) << "," << env << "\n";
        std::printf("N = %d  Z = %.6e +- %.2e (%s)\n", N, e.value.real(), e.error, method_name(e.used).c_str());
    }
    return kExitOk;
}

int cmd_equilibrium(const json& cfg, const std::string& out) {
    const ModelParams p = params_from(cfg["params"]);
    PotentialFamily pf(p);
    const auto& c = cfg["equilibrium"];
    auto Ns = c["N"].get<std::vector<double>>();
    double kappa = c["kappa"].get<double>();
    if (Ns.empty()) throw UsageError("equilibrium needs at least one N");
    for (double N : Ns)
        if (!(N >= kMinEquilibriumN))
            throw UsageError("equilibrium: N = " + num(N) + " is below the solver minimum " + num(kMinEquilibriumN));
    if (!(kappa > 0)) throw UsageError("equilibrium: kappa must be > 0");
    GridSpec gs;
    gs.nodes = c["nodes"].get<int>();
    gs.extent = c["extent"].get<double>();
    gs.refine = c["refine"].get<bool>();
    gs.max_nodes = c["max_nodes"].get<int>();
    gs.energy_tol = c["energy_tol"].get<double>();

    Output sweep(out, "equilibrium_sweep.csv", cfg);
    sweep.os() << "N,bbar,vartheta,frakt,E_plus_min,asymptotic,ratio\n";
    bool ok = true;
    std::vector<double> gaps;
    for (double N : Ns) {
        auto sol = minimize_energy_plus(N, kappa, pf, gs);
        auto ends = solve_endpoints(N, kappa, p);
        auto asym = asymptotic_minimum(N, kappa, p);
        double th = vartheta(kappa, p), ft = frak_t(2 * ends.bbar, p);
        std::string tag = num(N);
        Output dens(out, "equilibrium_density_N" + tag + ".csv", cfg);
        dens.os() << "xi,rho\n";
        for (size_t i = 0; i < sol.measure.grid.size(); ++i)
            dens.os() << num(sol.measure.grid[i]) << "," << num(sol.measure.weights[i] / sol.measure.cell) << "\n";
        Output cert(out, "equilibrium_certificate_N" + tag + ".csv", cfg);
        cert.os() << "condition,residual\n";
        for (auto& [k, v] : sol.certificate.rows()) cert.os() << k << "," << num(v) << "\n";
        cert.os() << "energy_change_half_grid," << num(sol.energy_change) << "\n";
        double ratio = sol.energy / asym.value;
        gaps.push_back(std::abs(ratio - 1));
        sweep.os() << tag << "," << num(ends.bbar) << "," << num(th) << "," << num(ft) << "," << num(sol.energy) << ","
                   << num(asym.value) << "," << num(ratio) << "\n";
        bool cok = sol.certificate.ok();
        ok = ok && cok;
        std::printf("N = %s  E+ = %.12e  asymptotic = %.12e  ratio = %.9f  b_N tau = %.6f  bbar = %.6f  "
                    "envelope-constant ratio = %.4f  certificate %s\n",
                    tag.c_str(), sol.energy, asym.value, ratio, sol.b_N * sol.tau, ends.bbar, asym.envelope_constant_ratio,
                    cok ? "ok" : "FAILED");
    }
    if (gaps.size() > 1) {
        bool mono = true;
        for (size_t i = 1; i < gaps.size(); ++i) mono = mono && gaps[i] <= gaps[i - 1];
        std::printf("trend of |ratio - 1| over N: %s\n", mono ? "monotone improvement" : "not monotone");
    }
    return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"form-factor series and equilibrium-measure laboratory"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 0;
    double b = 0, g = 0;
    app.add_option("--config", config_path, "JSON config file (sections per command)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--workers", workers, "worker threads");
    app.add_option("--b", b, "b parameter in (0, 1/2)");
    app.add_option("--g", g, "coupling g > 0");

    json over = json::object();
    auto* sanity = app.add_subcommand("sanity", "fast invariant suite");
    double fault = 0;
    sanity->add_option("--inject-fault", fault, "perturb the cached two-body table by this offset");
    auto* smat = app.add_subcommand("smatrix", "closed form vs integral representation");
    int spoints = 0;
    smat->add_option("--points", spoints);
    auto* minff = app.add_subcommand("minff", "minimal form factor table");
    double lmin = 0, lmax = 0;
    int mpoints = 0;
    minff->add_option("--lambda-min", lmin);
    minff->add_option("--lambda-max", lmax);
    minff->add_option("--points", mpoints);
    auto* ffv = app.add_subcommand("ff-validate", "axiom validator report");
    std::string vmodel;
    std::vector<int> vn;
    double vtol = 0;
    ffv->add_option("--model", vmodel, "identity, toy-bounded, unit-k or a model file");
    ffv->add_option("--n", vn, "particle numbers");
    ffv->add_option("--tol", vtol, "exit 1 when a violation exceeds this (0: report only)");
    auto* kern = app.add_subcommand("kernels", "kernel term dump");
    int kn = 0, km = 0;
    bool kred = false;
    kern->add_option("--n", kn);
    kern->add_option("--m", km);
    kern->add_flag("--reduce", kred, "dump the recursion terms instead");
    auto* corr = app.add_subcommand("correlator", "two-point series");
    std::string cm1, cm2, cmeth;
    double cr = 0;
    int cnmax = 0;
    long csamples = 0;
    corr->add_option("--model1", cm1);
    corr->add_option("--model2", cm2);
    corr->add_option("--r", cr);
    corr->add_option("--n-max", cnmax);
    corr->add_option("--method", cmeth, "auto, quadrature or monte-carlo");
    corr->add_option("--samples", csamples);
    auto* zn = app.add_subcommand("zn", "Z_N sweep");
    int zn0 = 0, zn1 = 0;
    double zk = 0;
    std::string zm1, zm2, zmeth;
    long zsamples = 0;
    zn->add_option("--N-min", zn0);
    zn->add_option("--N-max", zn1);
    zn->add_option("--kappa", zk);
    zn->add_option("--model1", zm1);
    zn->add_option("--model2", zm2);
    zn->add_option("--method", zmeth);
    zn->add_option("--samples", zsamples);
    auto* eq = app.add_subcommand("equilibrium", "equilibrium measure and asymptotics sweep");
    std::vector<double> eN;
    double ek = 0;
    int enodes = 0;
    eq->add_option("--N", eN, "one or more N values");
    eq->add_option("--kappa", ek);
    eq->add_option("--nodes", enodes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    auto set = [&](const char* sec, const char* key, auto val, const CLI::App* sub, const char* opt) {
        if (sub->count(opt)) over[sec][key] = val;
    };
    try {
        json cfg = defaults();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot open config file: " + config_path);
            json file;
            try {
                file = json::parse(in);
            } catch (const json::exception& e) {
                throw UsageError("config file " + config_path + " is not valid JSON: " + e.what());
            }
            file.erase("command");
            overlay(cfg, file, "");
        }
        if (app.count("--seed")) cfg["seed"] = seed;
        if (app.count("--workers")) cfg["workers"] = workers;
        if (!cfg.contains("workers") || cfg["workers"].get<int>() < 1) throw UsageError("workers must be >= 1");
        if (app.count("--b")) cfg["params"] = {{"b", b}, {"m", cfg["params"].value("m", 1.0)}};
        if (app.count("--g")) cfg["params"] = {{"g", g}, {"m", cfg["params"].value("m", 1.0)}};
        set("sanity", "inject_fault", fault, sanity, "--inject-fault");
        set("smatrix", "points", spoints, smat, "--points");
        set("minff", "lambda_min", lmin, minff, "--lambda-min");
        set("minff", "lambda_max", lmax, minff, "--lambda-max");
        set("minff", "points", mpoints, minff, "--points");
        set("ff_validate", "model", vmodel, ffv, "--model");
        set("ff_validate", "n", vn, ffv, "--n");
        set("ff_validate", "tol", vtol, ffv, "--tol");
        set("kernels", "n", kn, kern, "--n");
        set("kernels", "m", km, kern, "--m");
        set("kernels", "reduce", kred, kern, "--reduce");
        set("correlator", "model1", cm1, corr, "--model1");
        set("correlator", "model2", cm2, corr, "--model2");
        set("correlator", "r", cr, corr, "--r");
        set("correlator", "n_max", cnmax, corr, "--n-max");
        set("correlator", "method", cmeth, corr, "--method");
        set("correlator", "mc_samples", csamples, corr, "--samples");
        set("zn", "N_min", zn0, zn, "--N-min");
        set("zn", "N_max", zn1, zn, "--N-max");
        set("zn", "kappa", zk, zn, "--kappa");
        set("zn", "model1", zm1, zn, "--model1");
        set("zn", "model2", zm2, zn, "--model2");
        set("zn", "method", zmeth, zn, "--method");
        set("zn", "mc_samples", zsamples, zn, "--samples");
        set("equilibrium", "N", eN, eq, "--N");
        set("equilibrium", "kappa", ek, eq, "--kappa");
        set("equilibrium", "nodes", enodes, eq, "--nodes");
        overlay(cfg, over, "");

        // parameters are validated before any work so bad input exits with 2
        try {
            params_from(cfg["params"]);
        } catch (const NumericsError& e) {
            throw UsageError(e.what());
        }

        auto* sub = app.get_subcommands().front();
        std::string name = sub->get_name();
        json header = cfg;
        header["command"] = name;
        if (name == "sanity") return cmd_sanity(header, out_dir);
        if (name == "smatrix") return cmd_smatrix(header, out_dir);
        if (name == "minff") return cmd_minff(header, out_dir);
        if (name == "ff-validate") return cmd_ff_validate(header, out_dir);
        if (name == "kernels") return cmd_kernels(header, out_dir);
        if (name == "correlator") return cmd_correlator(header, out_dir);
        if (name == "zn") return cmd_zn(header, out_dir);
        if (name == "equilibrium") return cmd_equilibrium(header, out_dir);
        throw UsageError("unknown command " + name);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const ModelFileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitInvariant;
    }
}

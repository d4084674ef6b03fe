// Command-line front end: generate inputs, build and query summaries,
// compute disagreement coefficients, run the named experiments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rhosum/disagreement.hpp"
#include "rhosum/experiments.hpp"
#include "rhosum/generators.hpp"
#include "rhosum/summary.hpp"
#include "rhosum/sweep.hpp"

using namespace rhosum;

namespace {

Halfspace parse_halfspace(const std::string& spec, bool open, int64_t grid_scale) {
    std::stringstream ss(spec);
    std::string ta, tb, tc;
    if (!std::getline(ss, ta, ',') || !std::getline(ss, tb, ',') || !std::getline(ss, tc))
        throw std::invalid_argument("malformed halfspace '" + spec + "'; expected a,b,c for ax+by>=c");
    Rational a = parse_rational(ta), b = parse_rational(tb), c = parse_rational(tc);
    if (a.num == 0 && b.num == 0) throw std::invalid_argument("malformed halfspace: zero normal");
    // real coordinates -> grid units, denominators cleared exactly
    Halfspace h;
    h.dim = 2;
    h.normal[0] = Int256(a.num) * b.den * c.den;
    h.normal[1] = Int256(b.num) * a.den * c.den;
    h.offset = Int256(c.num) * a.den * b.den * grid_scale;
    h.closed = !open;
    return h;
}

std::vector<Rational> parse_sigma_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
    if (out.empty()) throw std::invalid_argument("empty sigma list");
    return out;
}

void emit(const std::string& out, const std::string& body) {
    if (out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + out);
        f << body;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distribution-sensitive summaries for halfspace range spaces"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a point set file");
    std::string g_kind = "box", g_config, g_out = "points.txt", g_angles;
    size_t g_n = 256;
    int g_dim = 2;
    uint64_t g_seed = 7;
    int64_t g_scale = kDefaultGridScale, g_eta = 4, g_q = 16, g_k = 1, g_height = int64_t(1) << 30;
    bool g_lb = false;
    gen->add_option("--kind", g_kind, "box|ball|line|circle|mixture|lowerbound");
    gen->add_flag("--lower-bound", g_lb, "shorthand for --kind lowerbound");
    gen->add_option("--n", g_n);
    gen->add_option("--dim", g_dim);
    gen->add_option("--seed", g_seed);
    gen->add_option("--scale", g_scale, "grid scale (power of two)");
    gen->add_option("--eta", g_eta);
    gen->add_option("--q", g_q);
    gen->add_option("--k", g_k);
    gen->add_option("--outer-height", g_height);
    gen->add_option("--angles", g_angles, "comma-separated vertex angles in (0,pi)");
    gen->add_option("--config", g_config, "key=value config file (overrides flags)");
    gen->add_option("--out", g_out);

    // --- build -------------------------------------------------------------
    auto* bld = app.add_subcommand("build", "build a summary from a point set file");
    std::string b_points, b_out = "summary.bin", b_rho = "1/16", b_eps = "1/3", b_delta = "1/10";
    int b_lambda = 3;
    double b_c = kDefaultCSample;
    uint64_t b_seed = 7;
    bool b_verified = false, b_force_exact = false;
    bld->add_option("--points", b_points)->required();
    bld->add_option("--rho", b_rho);
    bld->add_option("--eps", b_eps);
    bld->add_option("--delta", b_delta);
    bld->add_option("--lambda", b_lambda);
    bld->add_option("--c-sample", b_c);
    bld->add_option("--seed", b_seed);
    bld->add_flag("--verified", b_verified, "redraw each round until it verifies exactly");
    bld->add_flag("--force-exact", b_force_exact, "materialize the range family regardless of n");
    bld->add_option("--out", b_out);

    // --- estimate ----------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "query a summary file for one halfspace");
    std::string e_summary, e_hs;
    bool e_open = false;
    est->add_option("--summary", e_summary)->required();
    est->add_option("--halfspace", e_hs, "a,b,c meaning ax+by>=c in real coordinates")->required();
    est->add_flag("--open", e_open, "strict inequality (boundary excluded)");

    // --- theta -------------------------------------------------------------
    auto* th = app.add_subcommand("theta", "disagreement coefficients over a sigma grid");
    std::string t_points, t_sigma, t_mode = "exact", t_out;
    th->add_option("--points", t_points)->required();
    th->add_option("--sigma", t_sigma, "comma-separated rationals")->required();
    th->add_option("--mode", t_mode, "exact|eq8|profile");
    th->add_option("--out", t_out, "CSV path (stdout when omitted)");

    // --- experiment ----------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "run a named experiment, exit 0 iff it passes");
    std::string x_name, x_out = ".";
    uint64_t x_seed = 20250810;
    size_t x_trials = 0;
    int x_workers = 1;
    ex->add_option("name", x_name,
                   "guarantee|lowerbound|reconstruct|scaling-ball|scaling-box|"
                   "size-vs-baseline|bridging|facts|calibrate")
        ->required();
    ex->add_option("--out", x_out);
    ex->add_option("--seed", x_seed);
    ex->add_option("--trials", x_trials);
    ex->add_option("--workers", x_workers);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            GenSpec spec;
            spec.kind = g_lb ? "lowerbound" : g_kind;
            spec.n = g_n;
            spec.grid_scale = g_scale;
            spec.dist.n = g_n;
            spec.dist.dim = g_dim;
            spec.dist.seed = g_seed;
            spec.dist.grid_scale = g_scale;
            spec.lb.eta = g_eta;
            spec.lb.q = g_q;
            spec.lb.k = g_k;
            spec.lb.outer_height = g_height;
            spec.lb.grid_scale = g_scale;
            if (!g_angles.empty()) {
                std::stringstream ss(g_angles);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.lb.vertex_angles.push_back(std::stod(tok));
            }
            if (!g_config.empty()) {
                std::ifstream f(g_config);
                if (!f) throw std::runtime_error("cannot open " + g_config);
                spec = parse_gen_config(f, spec);
            }
            PointSet ps = run_generator(spec);
            save_pointset(ps, g_out);
            std::cout << "wrote " << g_out << ": n=" << ps.n() << " dim=" << ps.dim
                      << " seed=" << spec.dist.seed << "\n";
        } else if (*bld) {
            PointSet ps = load_pointset(b_points);
            SummaryParams params;
            params.rho = parse_rational(b_rho);
            params.eps = parse_rational(b_eps);
            params.delta = parse_rational(b_delta);
            params.lambda = b_lambda;
            params.c_sample = b_c;
            params.verified_build = b_verified;
            Rng rng(b_seed);
            Summary s;
            if (b_force_exact || ps.n() <= 512) {
                s = build(make_range_space(ps), params, rng);
            } else {
                s = build_from_points(ps, params, rng);
            }
            auto bytes = serialize(s);
            std::ofstream f(b_out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open " + b_out);
            f.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
            std::cout << "# schema v1: n,t,points_stored,rho_eff,eps\n"
                      << s.n << "," << s.t << "," << stored_point_count(s) << ","
                      << s.rho_effective.str() << "," << s.params.eps.str() << "\n";
            std::cout << "# schema v1: level,i,m,x_size,sample_size\n";
            for (const auto& lvl : s.levels)
                std::cout << "level," << lvl.i << "," << lvl.m << "," << lvl.x_size << ","
                          << lvl.sample_weight() << "\n";
        } else if (*est) {
            std::ifstream f(e_summary, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open " + e_summary);
            std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                       std::istreambuf_iterator<char>());
            Summary s = deserialize(bytes);
            Halfspace h = parse_halfspace(e_hs, e_open, s.grid_scale);
            Rational tau = estimate(s, h);
            std::cout << "tau=" << tau.num << "/" << tau.den << " (" << tau.to_double() << ")\n";
        } else if (*th) {
            PointSet ps = load_pointset(t_points);
            auto sigmas = parse_sigma_list(t_sigma);
            std::vector<DisagreementProfile> rows;
            if (t_mode == "profile") {
                auto mu = min_cover_sweep(ps);
                for (const auto& sg : sigmas) rows.push_back(theta_empty_from_mu(mu, ps.n(), sg));
            } else if (t_mode == "exact" || t_mode == "eq8") {
                if (ps.n() > 512)
                    throw std::runtime_error(
                        "exhaustive mode is limited to n <= 512; use --mode profile for the "
                        "empty-trace coefficient at larger n");
                RangeSpace rs = make_range_space(ps);
                ThetaMode m = t_mode == "eq8" ? ThetaMode::Eq8 : ThetaMode::Exact;
                for (const auto& sg : sigmas) rows.push_back(theta_X(rs, sg, m).profile);
            } else {
                throw std::invalid_argument("unknown theta mode '" + t_mode + "'");
            }
            emit(t_out, profile_csv(rows));
        } else if (*ex) {
            ExperimentOptions opts;
            opts.outdir = x_out;
            opts.seed = x_seed;
            opts.trials = x_trials;
            opts.workers = x_workers;
            ExperimentResult r = run_experiment(x_name, opts);
            for (const auto& line : r.notes) std::cout << line << "\n";
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
            return r.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

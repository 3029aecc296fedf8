// Command-line front end: field snapshots in, CSV curves and reports out.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vkd/vkd.hpp"

namespace fs = std::filesystem;
using namespace vkd;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// --config file first, then explicit flags override
struct ConfigCli {
    std::string config_path;
    std::optional<double> lambda, domain_a, domain_b, tol;
    std::optional<int> nx, ny, n_path;
    std::optional<long> max_iters;
    std::optional<std::string> metric, seed_shape, symmetrize, out_dir;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value run configuration file");
        cmd->add_option("--lambda", lambda, "load parameter");
        cmd->add_option("--domain-a", domain_a, "half-width in x");
        cmd->add_option("--domain-b", domain_b, "half-width in y");
        cmd->add_option("--nx", nx, "node count in x");
        cmd->add_option("--ny", ny, "node count in y");
        cmd->add_option("--tol", tol, "convergence tolerance");
        cmd->add_option("--n-path", n_path, "number of path points");
        cmd->add_option("--max-iters", max_iters, "iteration budget");
        cmd->add_option("--metric", metric, "gradient metric: l2 | x_preconditioned");
        cmd->add_option("--seed-shape", seed_shape, "one_peak | two_peaks_y | two_peaks_x");
        cmd->add_option("--symmetrize", symmetrize, "on | off");
        cmd->add_option("--out-dir", out_dir, "output directory");
    }

    io::RunConfig resolve() const {
        io::RunConfig cfg;
        if (const char* env = std::getenv("VKD_OUT_DIR")) cfg.out_dir = env;
        if (!config_path.empty()) cfg = io::parse_config_file(config_path);
        if (lambda) io::set_config_key(cfg, "lambda", std::to_string(*lambda));
        if (domain_a) io::set_config_key(cfg, "domain_a", std::to_string(*domain_a));
        if (domain_b) io::set_config_key(cfg, "domain_b", std::to_string(*domain_b));
        if (nx) io::set_config_key(cfg, "nx", std::to_string(*nx));
        if (ny) io::set_config_key(cfg, "ny", std::to_string(*ny));
        if (tol) io::set_config_key(cfg, "tol", std::to_string(*tol));
        if (n_path) io::set_config_key(cfg, "n_path", std::to_string(*n_path));
        if (max_iters) io::set_config_key(cfg, "max_iters", std::to_string(*max_iters));
        if (metric) io::set_config_key(cfg, "metric", *metric);
        if (seed_shape) io::set_config_key(cfg, "seed_shape", *seed_shape);
        if (symmetrize) io::set_config_key(cfg, "symmetrize", *symmetrize);
        if (out_dir) io::set_config_key(cfg, "out_dir", *out_dir);
        return cfg;
    }
};

void write_meta(const std::string& primary_output, const io::RunConfig& cfg,
                std::map<std::string, std::string> extra, const Timer& timer) {
    extra["elapsed_seconds"] = std::to_string(timer.seconds());
    io::write_metadata(primary_output + ".meta", cfg, extra);
}

std::vector<double> parse_number_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ParseError("empty number list '" + csv + "'");
    return out;
}

// "AxB" half-width pairs, mirroring the domain legend notation
std::vector<std::pair<double, double>> parse_domain_list(const std::string& csv) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto x = tok.find('x');
        if (x == std::string::npos)
            throw ParseError("domain '" + tok + "' is not of the form AxB");
        out.push_back({std::stod(tok.substr(0, x)), std::stod(tok.substr(x + 1))});
    }
    if (out.empty()) throw ParseError("empty domain list");
    return out;
}

std::string metric_name(energy::GradientMetric m) {
    return m == energy::GradientMetric::l2 ? "l2" : "x_preconditioned";
}

// Minimal static SVG line plot (log-x), enough to eyeball the calibration
// curves next to experimental scatter.
void write_svg_plot(const std::string& path,
                    const std::vector<calibrate::IsoPoint>& curve,
                    const std::vector<calibrate::ExperimentPoint>& points,
                    const std::string& x_label) {
    const int width = 640, height = 480, margin = 56;
    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = 1.05;
    auto consider = [&](double g) {
        xmin = std::min(xmin, g);
        xmax = std::max(xmax, g);
    };
    for (const auto& p : curve) consider(p.geom_ratio);
    for (const auto& p : points) consider(p.geom_ratio);
    if (!(xmax > xmin)) { xmin = 1.0; xmax = 10.0; }
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    auto px = [&](double g) {
        return margin + (std::log10(g) - lx0) / (lx1 - lx0) * (width - 2 * margin);
    };
    auto py = [&](double r) {
        return height - margin - (r - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    std::ofstream os(path);
    if (!os) throw IoError("cannot write svg: " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
       << "' y2='" << height - margin << "' stroke='black'/>\n";
    os << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
       << height - margin << "' stroke='black'/>\n";
    for (int d = int(std::ceil(lx0)); d <= int(std::floor(lx1)); ++d) {
        const double g = std::pow(10.0, d);
        os << "<line x1='" << px(g) << "' y1='" << height - margin << "' x2='" << px(g)
           << "' y2='" << height - margin + 5 << "' stroke='black'/>\n";
        os << "<text x='" << px(g) << "' y='" << height - margin + 18
           << "' font-size='11' text-anchor='middle'>1e" << d << "</text>\n";
    }
    for (double r = 0.0; r <= 1.0001; r += 0.25) {
        os << "<line x1='" << margin - 5 << "' y1='" << py(r) << "' x2='" << margin << "' y2='"
           << py(r) << "' stroke='black'/>\n";
        os << "<text x='" << margin - 8 << "' y='" << py(r) + 4
           << "' font-size='11' text-anchor='end'>" << r << "</text>\n";
    }
    os << "<text x='" << width / 2 << "' y='" << height - 12
       << "' font-size='12' text-anchor='middle'>" << x_label << "</text>\n";
    os << "<text x='16' y='" << height / 2
       << "' font-size='12' transform='rotate(-90 16 " << height / 2
       << ")' text-anchor='middle'>P / P_cl</text>\n";
    os << "<polyline fill='none' stroke='crimson' stroke-width='1.5' points='";
    for (const auto& p : curve) os << px(p.geom_ratio) << "," << py(p.load_ratio) << " ";
    os << "'/>\n";
    for (const auto& p : points)
        os << "<circle cx='" << px(p.geom_ratio) << "' cy='" << py(p.load_ratio)
           << "' r='2.5' fill='steelblue'/>\n";
    os << "</svg>\n";
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Energy-landscape toolkit for the compressed cylindrical shell"};
    app.require_subcommand(1);

    // ---- energy ----
    auto* c_energy = app.add_subcommand("energy", "print the energy breakdown of a field");
    std::string in_path, out_path, log_path;
    double lambda_flag = 1.5;
    c_energy->add_option("--in", in_path, "input field snapshot")->required();
    c_energy->add_option("--lambda", lambda_flag, "load parameter")->required();

    // ---- airy ----
    auto* c_airy = app.add_subcommand("airy", "solve the Airy problem for a field");
    c_airy->add_option("--in", in_path, "input field snapshot")->required();
    c_airy->add_option("--out", out_path, "output snapshot for phi")->required();

    // ---- find-w2 ----
    ConfigCli cfg_w2;
    auto* c_w2 = app.add_subcommand("find-w2", "descend from the seed until F_lambda < 0");
    cfg_w2.attach(c_w2);
    c_w2->add_option("--out", out_path, "output snapshot for w2")->required();
    c_w2->add_option("--log", log_path, "per-iterate CSV log");

    // ---- mp ----
    ConfigCli cfg_mp;
    std::string w2_path;
    auto* c_mp = app.add_subcommand("mp", "run the mountain-pass algorithm");
    cfg_mp.attach(c_mp);
    c_mp->add_option("--w2", w2_path, "negative-energy endpoint snapshot")->required();
    c_mp->add_option("--out", out_path, "output snapshot for w_mp")->required();
    c_mp->add_option("--log", log_path, "per-iteration CSV log");
    bool mp_refine = false;
    c_mp->add_flag("--refine", mp_refine, "newton-refine the converged point");

    // ---- verify-mp ----
    auto* c_verify = app.add_subcommand("verify-mp", "two-sided escape check at a saddle");
    c_verify->add_option("--in", in_path, "saddle snapshot")->required();
    c_verify->add_option("--lambda", lambda_flag, "load parameter")->required();

    // ---- refine ----
    double refine_tol = 1e-10;
    auto* c_refine = app.add_subcommand("refine", "newton-refine a near-critical field");
    c_refine->add_option("--in", in_path, "input snapshot")->required();
    c_refine->add_option("--lambda", lambda_flag, "load parameter")->required();
    c_refine->add_option("--out", out_path, "output snapshot")->required();
    c_refine->add_option("--tol", refine_tol, "residual tolerance");

    // ---- continue ----
    std::string seed_path, snap_dir;
    double lambda_from = 1.0, lambda_to = 1.8;
    auto* c_cont = app.add_subcommand("continue", "pseudo-arclength continuation in lambda");
    c_cont->add_option("--seed", seed_path, "refined seed snapshot (lambda tag used)")->required();
    c_cont->add_option("--lambda-from", lambda_from, "lower end of the sweep")->required();
    c_cont->add_option("--lambda-to", lambda_to, "upper end of the sweep")->required();
    c_cont->add_option("--out", out_path, "branch CSV")->required();
    c_cont->add_option("--snapshots", snap_dir, "directory for per-record snapshots");

    // ---- domain-study ----
    ConfigCli cfg_ds;
    std::string domains_csv, lambdas_csv = "1.5";
    auto* c_ds = app.add_subcommand("domain-study", "V(lambda, Omega) across domains");
    cfg_ds.attach(c_ds);
    c_ds->add_option("--domains", domains_csv, "comma list of AxB half-width pairs")->required();
    c_ds->add_option("--lambdas", lambdas_csv, "comma list of lambda values");
    c_ds->add_option("--out", out_path, "output CSV")->required();

    // ---- yoshimura ----
    std::string deltas_csv, qeps_csv;
    auto* c_yo = app.add_subcommand("yoshimura", "test-sequence scaling diagnostics");
    c_yo->add_option("--deltas", deltas_csv, "comma list of fold widths");
    c_yo->add_option("--q-eps", qeps_csv, "comma list of eps for the Q_eps table");
    c_yo->add_option("--out", out_path, "output CSV")->required();

    // ---- calibrate ----
    std::string vcurve_path, experiments_path, svg_path, target_str = "alpha", plane_str = "Lt";
    double nu = 0.3, target_value = 1.0;
    int iso_samples = 60;
    double iso_lambda_max = 1.95;
    auto* c_cal = app.add_subcommand("calibrate", "iso-alpha/beta curves and data overlay");
    c_cal->add_option("--vcurve", vcurve_path, "branch CSV with lambda,level columns")->required();
    c_cal->add_option("--nu", nu, "Poisson ratio");
    c_cal->add_option("--target", target_str, "alpha | beta")->required();
    c_cal->add_option("--value", target_value, "target iso value")->required();
    c_cal->add_option("--plane", plane_str, "Lt | Rt")->required();
    c_cal->add_option("--experiments", experiments_path, "experimental CSV to overlay");
    c_cal->add_option("--out", out_path, "curve CSV")->required();
    c_cal->add_option("--svg", svg_path, "optional SVG plot");
    c_cal->add_option("--samples", iso_samples, "lambda samples along the curve");
    c_cal->add_option("--lambda-max", iso_lambda_max, "fitted extension end");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    Timer timer;

    if (c_energy->parsed()) {
        const auto snap = io::read_field(in_path);
        const auto bd = energy::breakdown(snap.field, lambda_flag);
        std::cout << "lambda,e2,e3,e4,e_total,shortening_s,f_lambda,x_norm_sq\n";
        std::cout.precision(15);
        std::cout << bd.lambda << "," << bd.e2 << "," << bd.e3 << "," << bd.e4 << ","
                  << bd.e_total << "," << bd.shortening_s << "," << bd.f_lambda << ","
                  << bd.x_norm_sq << "\n";
        return 0;
    }

    if (c_airy->parsed()) {
        const auto snap = io::read_field(in_path);
        io::write_field(out_path, airy::phi_of(snap.field), snap.lambda_tag);
        return 0;
    }

    if (c_w2->parsed()) {
        const io::RunConfig cfg = cfg_w2.resolve();
        flows::FlowParams params;
        params.tol = cfg.tol;
        params.max_steps = cfg.max_iters;
        params.symmetrize = cfg.symmetrize;
        params.metric = cfg.metric;
        std::ofstream log;
        if (!log_path.empty()) {
            log.open(log_path);
            params.log = &log;
        }
        const ScalarField w0 = flows::seed_field(cfg.domain(), cfg.seed_shape);
        const ScalarField w2 = flows::find_w2(cfg.lambda, w0, params);
        io::write_field(out_path, w2, cfg.lambda);
        write_meta(out_path, cfg,
                   {{"command", "find-w2"},
                    {"metric", metric_name(cfg.metric)},
                    {"f_lambda", std::to_string(energy::f_lambda(w2, cfg.lambda))}},
                   timer);
        return 0;
    }

    if (c_mp->parsed()) {
        const io::RunConfig cfg = cfg_mp.resolve();
        const auto w2 = io::read_field(w2_path);
        mp::MpParams params;
        params.n_path = cfg.n_path;
        params.tol = cfg.tol;
        params.max_iters = cfg.max_iters;
        params.metric = cfg.metric;
        params.symmetrize = cfg.symmetrize;
        std::ofstream log;
        if (!log_path.empty()) {
            log.open(log_path);
            params.log = &log;
        }
        auto result = mp::run_mountain_pass(cfg.lambda, w2.field, params);
        double level = result.level_c;
        if (mp_refine) {
            continuation::NewtonParams np;
            result.w_mp = continuation::newton_refine(result.w_mp, cfg.lambda, np);
            level = energy::f_lambda(result.w_mp, cfg.lambda);
        }
        io::write_field(out_path, result.w_mp, cfg.lambda);
        std::cout.precision(15);
        std::cout << "level=" << level << " grad_norm=" << result.grad_norm
                  << " iterations=" << result.iterations << "\n";
        write_meta(out_path, cfg,
                   {{"command", "mp"},
                    {"metric", metric_name(cfg.metric)},
                    {"level", std::to_string(level)},
                    {"grad_norm", std::to_string(result.grad_norm)},
                    {"iterations", std::to_string(result.iterations)},
                    {"refined", mp_refine ? "yes" : "no"}},
                   timer);
        return 0;
    }

    if (c_verify->parsed()) {
        const auto snap = io::read_field(in_path);
        mp::MpResult pseudo;
        pseudo.w_mp = snap.field;
        pseudo.level_c = energy::f_lambda(snap.field, lambda_flag);
        const auto report = mp::verify_mountain_pass(pseudo, lambda_flag);
        std::cout << "shrank_to_zero=" << (report.shrank_to_zero ? "yes" : "no")
                  << " grew_negative=" << (report.grew_negative ? "yes" : "no")
                  << " minus_final_xnorm=" << report.minus_final_xnorm
                  << " plus_final_f=" << report.plus_final_f
                  << " hessian_eigenvalue=" << report.eigenvalue << "\n";
        return 0;
    }

    if (c_refine->parsed()) {
        const auto snap = io::read_field(in_path);
        continuation::NewtonParams np;
        np.tol = refine_tol;
        const ScalarField w = continuation::newton_refine(snap.field, lambda_flag, np);
        io::write_field(out_path, w, lambda_flag);
        std::cout.precision(15);
        std::cout << "level=" << energy::f_lambda(w, lambda_flag) << " residual="
                  << norm_l2(energy::gradient_l2(w, lambda_flag, airy::phi_of(w))) << "\n";
        return 0;
    }

    if (c_cont->parsed()) {
        const auto seed = io::read_field(seed_path);
        const double seed_lambda = seed.lambda_tag;
        if (!(seed_lambda > lambda_from && seed_lambda < lambda_to))
            throw SpecMismatch("seed lambda tag must lie inside (lambda-from, lambda-to)");
        continuation::ContinuationParams params;
        auto up = continuation::continue_branch(seed.field, seed_lambda, lambda_to, params);
        auto down = continuation::continue_branch(seed.field, seed_lambda, lambda_from, params);
        std::ofstream os(out_path);
        if (!os) throw IoError("cannot write branch CSV: " + out_path);
        os << "lambda,level,x_norm_sq,fold_flag,snapshot_path\n";
        os.precision(15);
        long idx = 0;
        auto emit = [&](const continuation::BranchRecord& rec) {
            std::string snap_path;
            if (!snap_dir.empty()) {
                fs::create_directories(snap_dir);
                snap_path = (fs::path(snap_dir) /
                             ("branch_" + std::to_string(idx) + ".fld")).string();
                io::write_field(snap_path, rec.w, rec.lambda);
            }
            os << rec.lambda << "," << rec.level << "," << rec.x_norm_sq << ","
               << (rec.fold_passed ? 1 : 0) << "," << snap_path << "\n";
            ++idx;
        };
        for (auto it = down.records.rbegin(); it != down.records.rend(); ++it) emit(*it);
        for (std::size_t i = 1; i < up.records.size(); ++i) emit(up.records[i]);
        return 0;
    }

    if (c_ds->parsed()) {
        const io::RunConfig cfg = cfg_ds.resolve();
        const auto lambdas = parse_number_list(lambdas_csv);
        const auto pairs = parse_domain_list(domains_csv);
        const double h_target = 2.0 * cfg.domain_a / cfg.nx;
        std::vector<DomainSpec> domains;
        for (auto [a, b] : pairs) {
            auto even_nodes = [&](double half) {
                int n = int(std::lround(2.0 * half / h_target));
                if (n % 2 != 0) ++n;
                return std::max(n, 8);
            };
            domains.emplace_back(a, b, even_nodes(a), even_nodes(b));
        }
        continuation::DomainStudyParams params;
        params.mp.tol = cfg.tol;
        params.mp.n_path = cfg.n_path;
        const auto rows = continuation::domain_study(lambdas, domains, params);
        std::ofstream os(out_path);
        if (!os) throw IoError("cannot write domain-study CSV: " + out_path);
        os << "lambda,a,b,nx,ny,level,x_norm_sq\n";
        os.precision(15);
        for (const auto& row : rows)
            os << row.lambda << "," << row.spec.a << "," << row.spec.b << "," << row.spec.nx
               << "," << row.spec.ny << "," << row.level << "," << row.x_norm_sq << "\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                if (rows[i].lambda != rows[j].lambda) continue;
                const auto cmp = continuation::compare_second_derivatives(rows[i], rows[j]);
                std::cout << "lambda=" << cmp.lambda << " (" << cmp.spec_a.a << "x"
                          << cmp.spec_a.b << ") vs (" << cmp.spec_b.a << "x" << cmp.spec_b.b
                          << "): max|d_xx w diff|=" << cmp.max_diff
                          << " sup|d_xx w|=" << cmp.sup_norm
                          << " ratio=" << cmp.max_diff / cmp.sup_norm << "\n";
            }
        return 0;
    }

    if (c_yo->parsed()) {
        std::ofstream os(out_path);
        if (!os) throw IoError("cannot write yoshimura CSV: " + out_path);
        os.precision(15);
        if (!deltas_csv.empty()) {
            const auto rows = yoshimura::scaling_report(parse_number_list(deltas_csv));
            os << "delta,n,int_wx2,int_dw2,int_dphi2,slope_dw2,slope_dphi2,stencil_rhs_mean\n";
            for (const auto& r : rows)
                os << r.delta << "," << r.n << "," << r.int_wx2 << "," << r.int_dw2 << ","
                   << r.int_dphi2 << "," << r.slope_dw2 << "," << r.slope_dphi2 << ","
                   << r.stencil_rhs_mean << "\n";
        } else if (!qeps_csv.empty()) {
            const auto rows = yoshimura::q_epsilon(parse_number_list(qeps_csv));
            os << "eps,delta,n,q\n";
            for (const auto& r : rows)
                os << r.eps << "," << r.delta << "," << r.n << "," << r.q << "\n";
        } else {
            throw ParseError("yoshimura needs --deltas or --q-eps");
        }
        return 0;
    }

    if (c_cal->parsed()) {
        // branch CSV -> V samples (pre-fold, positive levels only)
        std::ifstream is(vcurve_path);
        if (!is) throw IoError("cannot open vcurve CSV: " + vcurve_path);
        std::string line;
        std::getline(is, line); // header
        std::vector<calibrate::VSample> samples;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string lam, lev, rest;
            std::getline(ss, lam, ',');
            std::getline(ss, lev, ',');
            std::getline(ss, rest);
            const double l = std::stod(lam), v = std::stod(lev);
            bool fold = false;
            {
                std::stringstream rs(rest);
                std::string xn, ff;
                std::getline(rs, xn, ',');
                if (std::getline(rs, ff, ',')) fold = ff == "1";
            }
            if (v > 0.0 && !fold) samples.push_back({l, v});
        }
        const auto curve = calibrate::make_v_curve(std::move(samples));
        const auto target =
            target_str == "alpha" ? calibrate::Target::alpha : calibrate::Target::beta;
        const auto plane = plane_str == "Lt" ? calibrate::Plane::Lt : calibrate::Plane::Rt;
        std::vector<double> lambdas;
        const double lo = curve.lambda_min();
        const double hi = std::max(curve.lambda_max(), iso_lambda_max);
        for (int i = 0; i < iso_samples; ++i)
            lambdas.push_back(lo + (hi - lo) * i / (iso_samples - 1));
        const auto iso = calibrate::iso_curve(curve, nu, target, target_value, plane, lambdas);
        std::ofstream os(out_path);
        if (!os) throw IoError("cannot write curve CSV: " + out_path);
        os.precision(15);
        os << "lambda,load_ratio,geom_ratio,target,value\n";
        for (const auto& p : iso)
            os << p.lambda << "," << p.load_ratio << "," << p.geom_ratio << "," << target_str
               << "," << target_value << "\n";
        std::vector<calibrate::ExperimentPoint> pts;
        if (!experiments_path.empty()) {
            const auto data = calibrate::ingest_experiments(experiments_path, plane);
            const auto report = calibrate::overlay(data, iso);
            std::cout << "points=" << report.total << " below_curve=" << report.below_curve
                      << " fraction_below=" << report.fraction_below << "\n";
            pts = data.points;
        }
        if (!svg_path.empty())
            write_svg_plot(svg_path, iso, pts,
                           plane == calibrate::Plane::Lt ? "L / t" : "R / t");
        std::cout << "fit: c1=" << curve.fit.c1 << " p=" << curve.fit.p
                  << " c2=" << curve.fit.c2 << " q=" << curve.fit.q
                  << " rms=" << curve.fit.rms << " (fitted extension beyond computed range)\n";
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const vkd::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const vkd::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ParseError& e) {
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "vkd/energy.hpp"
#include "vkd/errors.hpp"
#include "vkd/grid.hpp"

namespace vkd {
namespace calibrate {

struct ShellGeometry {
    double radius_R = 0.0;
    double thickness_t = 0.0;
    double length_L = 0.0;
    double youngs_E = 0.0;
    double poisson_nu = 0.3;

    ShellGeometry() = default;
    ShellGeometry(double R, double t, double L, double E, double nu)
        : radius_R(R), thickness_t(t), length_L(L), youngs_E(E), poisson_nu(nu) {
        if (!(R > 0 && t > 0 && L > 0 && E > 0))
            throw SpecMismatch("shell geometry values must be positive");
        if (!(t < R)) throw SpecMismatch("thickness must be below the radius");
        if (!(nu > 0.0 && nu < 0.5)) throw SpecMismatch("poisson ratio must lie in (0, 0.5)");
    }

    // eps^2 = t^2 / (192 pi^4 R^2 (1 - nu^2))
    double epsilon() const {
        return thickness_t /
               (8.0 * std::sqrt(3.0) * M_PI * M_PI * radius_R * std::sqrt(1.0 - poisson_nu * poisson_nu));
    }
};

// P / P_classical with P = 8 pi^3 E R t eps lambda and the classical load
// P_cl = 2 pi E t^2 / sqrt(3 (1 - nu^2)) implied by lambda_cr = 2.
inline double load_ratio(double lambda) {
    if (!(lambda >= 0.0)) throw SpecMismatch("load_ratio requires lambda >= 0");
    return 0.5 * lambda;
}

// Rescaled mountain-pass energy levels of Section-5 type: the barrier
// normalized by the stored compression energy of the whole cylinder (alpha)
// or of a section of length 2 pi R (beta).
inline double alpha_of(const ShellGeometry& geom, double lambda, double v) {
    if (!(v > 0.0 && lambda > 0.0)) throw SpecMismatch("alpha_of requires V > 0, lambda > 0");
    const double c = 1.0 / (2.0 * M_PI * std::sqrt(3.0 * (1.0 - geom.poisson_nu * geom.poisson_nu)));
    return c * (geom.thickness_t / geom.length_L) * v / (lambda * lambda);
}

inline double beta_of(const ShellGeometry& geom, double lambda, double v) {
    if (!(v > 0.0 && lambda > 0.0)) throw SpecMismatch("beta_of requires V > 0, lambda > 0");
    const double c =
        1.0 / (4.0 * M_PI * M_PI * std::sqrt(3.0 * (1.0 - geom.poisson_nu * geom.poisson_nu)));
    return c * (geom.thickness_t / geom.radius_R) * v / (lambda * lambda);
}

// Dimensional mountain-pass energy 64 pi^6 E t R^2 eps^3 V(lambda).
inline double dimensional_mp_energy(const ShellGeometry& geom, double v) {
    const double e = geom.epsilon();
    return 64.0 * std::pow(M_PI, 6) * geom.youngs_E * geom.thickness_t * geom.radius_R *
           geom.radius_R * e * e * e * v;
}

// Stored compression energy of the full cylinder at load lambda.
inline double stored_compression_energy(const ShellGeometry& geom, double lambda) {
    const double nu2 = 1.0 - geom.poisson_nu * geom.poisson_nu;
    return M_PI * std::pow(geom.thickness_t, 3) * geom.youngs_E * geom.length_L /
           (12.0 * nu2 * geom.radius_R) * lambda * lambda;
}

// ---------------------------------------------------------------------------
// V(lambda) curve container with the monotone two-term extension fit
// V = c1 (2-lambda)^p + c2 (2-lambda)^q used to extend the computed range.
// ---------------------------------------------------------------------------

struct VSample {
    double lambda = 0.0;
    double v = 0.0;
};

struct VFit {
    double c1 = 0.0, p = 3.0;
    double c2 = 0.0, q = 1.0;
    double rms = 0.0;
    bool valid = false;

    double operator()(double lambda) const {
        const double u = std::max(2.0 - lambda, 0.0);
        return c1 * std::pow(u, p) + c2 * std::pow(u, q);
    }
};

struct VCurve {
    std::vector<VSample> samples; // sorted by lambda, V strictly decreasing
    VFit fit;

    double lambda_min() const { return samples.front().lambda; }
    double lambda_max() const { return samples.back().lambda; }

    // piecewise-linear inside the samples, fitted extension outside
    double operator()(double lambda) const {
        if (samples.empty()) throw EmptyData("VCurve has no samples");
        if (lambda < lambda_min() || lambda > lambda_max()) {
            if (!fit.valid) throw RangeExhausted("lambda outside the computed V range");
            return fit(lambda);
        }
        auto hi = std::lower_bound(samples.begin(), samples.end(), lambda,
                                   [](const VSample& s, double l) { return s.lambda < l; });
        if (hi == samples.begin()) return hi->v;
        auto lo = hi - 1;
        if (hi == samples.end()) return lo->v;
        const double t = (lambda - lo->lambda) / (hi->lambda - lo->lambda);
        return (1.0 - t) * lo->v + t * hi->v;
    }
};

// Least squares over a grid of exponents (p, q >= 1), linear in (c1, c2).
inline VFit fit_v_curve(const std::vector<VSample>& samples) {
    VFit best;
    double best_err = std::numeric_limits<double>::infinity();
    if (samples.size() < 3) return best;
    for (double p = 1.0; p <= 6.0; p += 0.25) {
        for (double q = 1.0; q <= p; q += 0.25) {
            double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
            for (const auto& s : samples) {
                const double u = 2.0 - s.lambda;
                const double f1 = std::pow(u, p), f2 = std::pow(u, q);
                a11 += f1 * f1;
                a12 += f1 * f2;
                a22 += f2 * f2;
                b1 += f1 * s.v;
                b2 += f2 * s.v;
            }
            const double det = a11 * a22 - a12 * a12;
            if (std::abs(det) < 1e-30) continue;
            const double c1 = (b1 * a22 - b2 * a12) / det;
            const double c2 = (a11 * b2 - a12 * b1) / det;
            if (c1 < 0.0 || c2 < 0.0) continue; // keep the extension monotone
            double err = 0.0;
            for (const auto& s : samples) {
                const double u = 2.0 - s.lambda;
                const double r = c1 * std::pow(u, p) + c2 * std::pow(u, q) - s.v;
                err += r * r;
            }
            if (err < best_err) {
                best_err = err;
                best = {c1, p, c2, q, std::sqrt(err / samples.size()), true};
            }
        }
    }
    return best;
}

inline VCurve make_v_curve(std::vector<VSample> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const VSample& a, const VSample& b) { return a.lambda < b.lambda; });
    for (const auto& s : samples)
        if (!(s.v > 0.0)) throw SpecMismatch("VCurve requires V > 0");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].v < samples[i - 1].v))
            throw SpecMismatch("VCurve requires V strictly decreasing in lambda");
    VCurve curve;
    curve.fit = fit_v_curve(samples);
    curve.samples = std::move(samples);
    return curve;
}

// ---------------------------------------------------------------------------
// Constant-alpha / constant-beta curves in the (geometry ratio, load ratio)
// planes of the experimental figures.
// ---------------------------------------------------------------------------

enum class Target { alpha, beta };
enum class Plane { Lt, Rt }; // L/t horizontal axis vs R/t horizontal axis

struct IsoPoint {
    double lambda = 0.0;
    double geom_ratio = 0.0;
    double load_ratio = 0.0;
};

// For each lambda sample, invert the alpha (resp. beta) definition for L/t
// (resp. R/t) at the fixed target value; nu enters through the prefactor.
inline std::vector<IsoPoint> iso_curve(const VCurve& vcurve, double nu, Target target,
                                       double value, Plane plane,
                                       const std::vector<double>& lambdas) {
    if (!(value > 0.0)) throw SpecMismatch("iso_curve requires a positive target value");
    if ((target == Target::alpha) != (plane == Plane::Lt))
        throw SpecMismatch("alpha pairs with the Lt plane, beta with the Rt plane");
    std::vector<IsoPoint> out;
    const double root = std::sqrt(3.0 * (1.0 - nu * nu));
    for (double lam : lambdas) {
        if (!(lam > 0.0 && lam < 2.0)) throw RangeExhausted("lambda sample outside (0,2)");
        const double v = vcurve(lam);
        if (!(v > 0.0)) throw RangeExhausted("V(lambda) not positive at requested lambda");
        IsoPoint pt;
        pt.lambda = lam;
        pt.load_ratio = load_ratio(lam);
        const double c = (target == Target::alpha) ? 1.0 / (2.0 * M_PI * root)
                                                   : 1.0 / (4.0 * M_PI * M_PI * root);
        // value = c * (t/len) * V / lambda^2  =>  len/t = c V / (value lambda^2)
        pt.geom_ratio = c * v / (value * lam * lam);
        out.push_back(pt);
    }
    std::sort(out.begin(), out.end(),
              [](const IsoPoint& a, const IsoPoint& b) { return a.geom_ratio < b.geom_ratio; });
    return out;
}

// ---------------------------------------------------------------------------
// Experimental datasets (user CSV) and the lower-bound overlay statistic.
// ---------------------------------------------------------------------------

struct ExperimentPoint {
    double geom_ratio = 0.0;
    double load_ratio = 0.0;
    std::string source = "unknown";
};

struct ExperimentData {
    Plane plane = Plane::Lt;
    std::vector<ExperimentPoint> points;
};

inline ExperimentData ingest_experiments(std::istream& in, Plane plane) {
    ExperimentData data;
    data.plane = plane;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    auto parse_number = [&](const std::string& tok, const char* what) {
        char* end = nullptr;
        const double value = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end == tok.c_str() || *end != '\0')
            throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                             tok + "'");
        return value;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // header row is part of the format
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string g, l, src;
        std::getline(ss, g, ',');
        std::getline(ss, l, ',');
        std::getline(ss, src, ',');
        ExperimentPoint pt;
        pt.geom_ratio = parse_number(g, "geometry ratio");
        pt.load_ratio = parse_number(l, "load ratio");
        if (!src.empty()) pt.source = src;
        data.points.push_back(pt);
    }
    if (data.points.empty()) throw EmptyData("experiment CSV contained no data rows");
    return data;
}

inline ExperimentData ingest_experiments(const std::string& path, Plane plane) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open experiment CSV: " + path);
    return ingest_experiments(in, plane);
}

struct OverlayReport {
    std::size_t total = 0;
    std::size_t below_curve = 0;
    double fraction_below = 0.0;
};

// Fraction of experimental points falling below the iso-curve (the
// lower-bound claim reads: none should).
inline OverlayReport overlay(const ExperimentData& data, const std::vector<IsoPoint>& curve) {
    if (curve.size() < 2) throw SpecMismatch("overlay needs at least two curve points");
    OverlayReport report;
    report.total = data.points.size();
    auto curve_load_at = [&](double geom) {
        if (geom <= curve.front().geom_ratio) return curve.front().load_ratio;
        if (geom >= curve.back().geom_ratio) return curve.back().load_ratio;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (geom <= curve[i].geom_ratio) {
                const auto& a = curve[i - 1];
                const auto& b = curve[i];
                const double t = (geom - a.geom_ratio) / (b.geom_ratio - a.geom_ratio);
                return (1.0 - t) * a.load_ratio + t * b.load_ratio;
            }
        }
        return curve.back().load_ratio;
    };
    for (const auto& pt : data.points)
        if (pt.load_ratio < curve_load_at(pt.geom_ratio)) ++report.below_curve;
    report.fraction_below = double(report.below_curve) / double(report.total);
    return report;
}

// ---------------------------------------------------------------------------
// Dimensional round trip for fields and energies.
// ---------------------------------------------------------------------------

struct DimensionalState {
    ShellGeometry geom;
    ScalarField w_bar; // rescaled displacement on the eps^{1/2}-contracted grid
    double lambda_bar = 0.0;
    double energy = 0.0; // dimensional stored energy scale for V
};

// (w, lambda, V) -> dimensional data via the substitution w = eps w_bar etc.
inline DimensionalState to_dimensional(const ShellGeometry& geom, const ScalarField& w,
                                       double lambda, double v) {
    const double eps = geom.epsilon();
    const double se = std::sqrt(eps);
    const auto& s = w.spec();
    DimensionalState out{geom,
                         ScalarField(DomainSpec(s.a * se, s.b * se, s.nx, s.ny, s.closure)),
                         eps * lambda, dimensional_mp_energy(geom, v)};
    for (std::size_t k = 0; k < w.size(); ++k) out.w_bar.data()[k] = eps * w.data()[k];
    return out;
}

inline void from_dimensional(const DimensionalState& st, ScalarField* w, double* lambda,
                             double* v) {
    const double eps = st.geom.epsilon();
    const double se = std::sqrt(eps);
    const auto& s = st.w_bar.spec();
    *w = ScalarField(DomainSpec(s.a / se, s.b / se, s.nx, s.ny, s.closure));
    for (std::size_t k = 0; k < st.w_bar.size(); ++k)
        w->data()[k] = st.w_bar.data()[k] / eps;
    *lambda = st.lambda_bar / eps;
    *v = st.energy / (64.0 * std::pow(M_PI, 6) * st.geom.youngs_E * st.geom.thickness_t *
                      st.geom.radius_R * st.geom.radius_R * eps * eps * eps);
}

} // namespace calibrate
} // namespace vkd

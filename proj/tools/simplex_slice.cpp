// simplex-slice: verification and computation toolkit for central sections of
// the regular simplex and Lipschitz experiments on isotropic polytopes.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "simplexslice/bounds.hpp"
#include "simplexslice/expdensity.hpp"
#include "simplexslice/families.hpp"
#include "simplexslice/isotropy.hpp"
#include "simplexslice/parallel.hpp"
#include "simplexslice/rng.hpp"
#include "simplexslice/slicer.hpp"

using nlohmann::json;
using namespace sslice;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchema = 1;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string coeff_hash(const std::vector<double>& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double x : c) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::vector<double> parse_coeff_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw DomainError("bad coefficient '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("empty coefficient list");
    return out;
}

// --config is applied before CLI11 parses, so flags override file values
json preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw DomainError(std::string("cannot read config ") + argv[i + 1]);
            json j;
            in >> j;
            if (!j.is_object()) throw DomainError("config must be a JSON object");
            return j;
        }
    }
    return json::object();
}

template <class T>
T cfg_or(const json& cfg, const char* key, T fallback) {
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

// ---------------------------------------------------------------- SVG scatter

struct SvgPoint {
    double sqrt_delta;
    double deficit;
};

std::string deficit_scatter_svg(const std::vector<SvgPoint>& pts) {
    const double W = 720, H = 540, L = 80, R = 660, T = 40, B = 480;
    double xmin = 1e-6, xmax = 2.0, ymin = 1e-9, ymax = 1.0;
    for (const auto& p : pts) {
        if (p.sqrt_delta > 0) xmin = std::min(xmin, p.sqrt_delta);
        if (p.deficit > 0) ymin = std::min(ymin, p.deficit);
    }
    xmin = std::max(xmin / 2, 1e-10);
    ymin = std::max(ymin / 2, 1e-14);
    auto X = [&](double v) {
        return L + (std::log10(v) - std::log10(xmin)) /
                       (std::log10(xmax) - std::log10(xmin)) * (R - L);
    };
    auto Y = [&](double v) {
        return B - (std::log10(v) - std::log10(ymin)) /
                       (std::log10(ymax) - std::log10(ymin)) * (B - T);
    };
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n";
    s << "<rect x='0' y='0' width='" << W << "' height='" << H << "' fill='white'/>\n";
    s << "<rect x='" << L << "' y='" << T << "' width='" << R - L << "' height='" << B - T
      << "' fill='none' stroke='black'/>\n";
    // decade ticks
    for (int e = static_cast<int>(std::ceil(std::log10(xmin)));
         e <= static_cast<int>(std::floor(std::log10(xmax))); ++e) {
        double v = std::pow(10.0, e);
        s << "<line x1='" << X(v) << "' y1='" << B << "' x2='" << X(v) << "' y2='" << B + 5
          << "' stroke='black'/>\n";
        s << "<text x='" << X(v) << "' y='" << B + 18
          << "' font-size='10' text-anchor='middle'>1e" << e << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(std::log10(ymin)));
         e <= static_cast<int>(std::floor(std::log10(ymax))); ++e) {
        double v = std::pow(10.0, e);
        s << "<line x1='" << L - 5 << "' y1='" << Y(v) << "' x2='" << L << "' y2='" << Y(v)
          << "' stroke='black'/>\n";
        s << "<text x='" << L - 8 << "' y='" << Y(v) + 3
          << "' font-size='10' text-anchor='end'>1e" << e << "</text>\n";
    }
    s << "<text x='" << (L + R) / 2
      << "' y='510' font-size='12' text-anchor='middle'>sqrt(delta)</text>\n";
    s << "<text x='18' y='" << (T + B) / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 18 " << (T + B) / 2
      << ")'>deficit 1/sqrt2 - p</text>\n";
    // reference lines y = x/10 and y = 2e-5 x (straight in log-log)
    auto refline = [&](double slope_const, const char* color, const char* label) {
        double x1 = xmin, x2 = xmax;
        double y1 = slope_const * x1, y2 = slope_const * x2;
        auto clamp = [&](double& xx, double& yy, double other_x, double other_y) {
            if (yy < ymin) {
                xx = xmin * std::pow(10.0, (std::log10(ymin) - std::log10(slope_const * xmin)));
                (void)other_x;
                (void)other_y;
                yy = ymin;
                xx = ymin / slope_const;
            }
            if (yy > ymax) {
                yy = ymax;
                xx = ymax / slope_const;
            }
        };
        clamp(x1, y1, x2, y2);
        clamp(x2, y2, x1, y1);
        if (x1 < xmin || x2 > xmax) return;
        s << "<line x1='" << X(x1) << "' y1='" << Y(y1) << "' x2='" << X(x2) << "' y2='"
          << Y(y2) << "' stroke='" << color << "' stroke-dasharray='5,3'/>\n";
        s << "<text x='" << X(x2) - 4 << "' y='" << Y(y2) - 6 << "' font-size='10' fill='"
          << color << "' text-anchor='end'>" << label << "</text>\n";
    };
    refline(0.1, "#cc3333", "deficit = sqrt(delta)/10");
    refline(2e-5, "#3366cc", "deficit = 2e-5 sqrt(delta)");
    for (const auto& p : pts) {
        double x = std::min(std::max(p.sqrt_delta, xmin), xmax);
        double y = std::min(std::max(p.deficit, ymin), ymax);
        s << "<circle cx='" << X(x) << "' cy='" << Y(y) << "' r='1.6' fill='#228833' "
          << "fill-opacity='0.45'/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

// ------------------------------------------------------------------ commands

int cmd_slice(const std::string& coeff_str, int n_expected, double quad_tol,
              double agreement, const std::string& out_dir) {
    if (!(quad_tol > 0.0) || !(agreement > 0.0))
        throw DomainError("tolerances must be positive");
    Direction a = Direction::normalized(parse_coeff_list(coeff_str));
    if (n_expected > 0 && a.n() != n_expected)
        throw DomainError("coefficient count disagrees with --n");

    json out;
    out["version"] = kVersion;
    out["n"] = a.n();
    out["coefficients"] = a.coeffs();
    out["delta"] = delta(a);

    VerifyOptions opts;
    opts.quad_tol = quad_tol;
    opts.oracle_agreement = agreement;
    BoundReport rep = verify_direction(a, opts);
    out["p0_exact"] = rep.p0_exact;
    out["p0_quadrature"] = rep.p0_quadrature;
    out["deficit"] = rep.deficit;
    out["bounds"] = {{"webb", rep.webb},
                     {"fourier", rep.fourier},
                     {"logconcavity", rep.logconcavity},
                     {"stability_deficit", rep.stability_bound},
                     {"global_linear", rep.global_linear}};

    double vol_density = section_volume_via_density(a);
    out["volume_via_density"] = vol_density;
    bool volumes_agree = true;
    if (a.n() <= 10) {
        double vol_geo = volume(simplex_section(a));
        out["volume_geometric"] = vol_geo;
        volumes_agree =
            std::abs(vol_geo - vol_density) <= agreement * std::max(1.0, vol_density);
    } else {
        out["volume_geometric"] = nullptr;  // hull computations cap at n = 10
    }
    if (a.n() >= 2) {
        auto tr = classify_case(a);
        out["case"] = tr.case_label;
        out["case_checks_hold"] = tr.all_hold();
    }
    bool evaluators_agree =
        std::abs(rep.p0_exact - rep.p0_quadrature) <= std::max(agreement, 2 * quad_tol);
    out["evaluators_agree"] = evaluators_agree && volumes_agree;

    std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(std::filesystem::path(out_dir) / "slice.json", text);
    }
    return (evaluators_agree && volumes_agree) ? kExitOk : kExitViolation;
}

struct VerifyRow {
    std::string family;
    Direction direction;
    BoundReport report;
    std::string case_label;
    bool checks_hold = true;
    double delta_value = 0.0;

    VerifyRow(std::string fam, Direction d, BoundReport rep)
        : family(std::move(fam)), direction(std::move(d)), report(std::move(rep)) {}
};

int cmd_verify(int nmin, int nmax, int samples, std::uint64_t seed,
               std::int64_t mc_samples, const std::vector<std::string>& families,
               const std::string& delta_grid, int grid_points, double quad_tol,
               const std::string& out_dir) {
    if (nmin < 1 || nmax < nmin) throw DomainError("need 1 <= nmin <= nmax");
    if (samples < 1) throw DomainError("need samples >= 1");
    if (grid_points < 1) throw DomainError("need at least one delta grid point");
    if (!(quad_tol > 0.0)) throw DomainError("tolerances must be positive");

    bool want_random = families.empty();
    bool want_near = false, want_far12 = false;
    for (const auto& f : families) {
        if (f == "random")
            want_random = true;
        else if (f == "near")
            want_near = true;
        else if (f == "far12")
            want_far12 = true;
        else
            throw DomainError("unknown family '" + f + "'");
    }

    // assemble the direction list deterministically, then verify in parallel
    std::vector<std::pair<std::string, Direction>> dirs;
    if (want_random) {
        for (int n = nmin; n <= nmax; ++n) {
            for (int i = 0; i < samples; ++i) {
                Rng rng(mix_seed(seed, (static_cast<std::uint64_t>(n) << 32) | i));
                std::vector<double> raw(n + 1);
                for (auto& x : raw) x = rng.normal();
                dirs.emplace_back("random", Direction::normalized(raw));
            }
        }
    }
    if (want_near) {
        double lo = 1e-8, hi = 5e-4;
        if (!delta_grid.empty()) {
            auto pos = delta_grid.find(':');
            if (pos == std::string::npos) throw DomainError("delta grid must be lo:hi");
            lo = std::stod(delta_grid.substr(0, pos));
            hi = std::stod(delta_grid.substr(pos + 1));
            if (!(lo > 0.0) || !(hi > lo)) throw DomainError("bad delta grid range");
        }
        hi = std::min(hi, 1.0 / 2000.0);
        for (int i = 0; i < grid_points; ++i) {
            double t = grid_points == 1 ? 0.0
                                        : static_cast<double>(i) / (grid_points - 1);
            double d = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
            // endpoint guard: stay a hair inside the near regime so the
            // boundary row exercises the sqrt(delta)/10 branch
            d = std::min(d, (1.0 / 2000.0) * (1.0 - 1e-9));
            dirs.emplace_back("near-sigma", near_direction_sigma(d, 3));
            dirs.emplace_back("near-flat", near_direction_flat(d, 4));
        }
    }
    if (want_far12) dirs.emplace_back("far12", far_pairing_direction(14000));

    std::vector<VerifyRow> rows;
    rows.reserve(dirs.size());
    for (auto& [fam, d] : dirs) rows.emplace_back(fam, d, BoundReport(d));

    parallel_for(rows.size(), [&](std::size_t i) {
        VerifyOptions opts;
        opts.quad_tol = quad_tol;
        opts.mc_samples = mc_samples;
        opts.seed = mix_seed(seed, i);
        rows[i].report = verify_direction(rows[i].direction, opts);
        rows[i].delta_value = delta(rows[i].direction);
        if (rows[i].direction.n() >= 2) {
            auto tr = classify_case(rows[i].direction);
            rows[i].case_label = tr.case_label;
            rows[i].checks_hold = tr.all_hold();
        } else {
            rows[i].case_label = "n1";
        }
    });

    // CSV
    std::ostringstream csv;
    csv << "# simplex-slice v" << kVersion << " schema=" << kSchema << "\n";
    csv << "hash,family,n,delta,p0_exact,p0_quadrature,webb,fourier,logconcavity,"
           "stability_bound,global_linear,deficit,case,verdicts_pass,checks_hold\n";
    json violations = json::array();
    double max_p0 = 0.0;
    double worst_stability_slack = 1e300, worst_dominance_slack = 1e300;
    std::vector<SvgPoint> pts;
    for (const auto& r : rows) {
        const auto& rep = r.report;
        bool pass = rep.all_pass() && r.checks_hold;
        csv << coeff_hash(r.direction.coeffs()) << ',' << r.family << ','
            << r.direction.n() << ',' << fmt(r.delta_value) << ',' << fmt(rep.p0_exact)
            << ',' << fmt(rep.p0_quadrature) << ',' << fmt(rep.webb) << ','
            << fmt(rep.fourier) << ',' << fmt(rep.logconcavity) << ','
            << fmt(rep.stability_bound) << ',' << fmt(rep.global_linear) << ','
            << fmt(rep.deficit) << ',' << r.case_label << ',' << (pass ? 1 : 0) << ','
            << (r.checks_hold ? 1 : 0) << "\n";
        max_p0 = std::max(max_p0, rep.p0_exact);
        for (const auto& v : rep.verdicts) {
            if (v.bound == "stability")
                worst_stability_slack = std::min(worst_stability_slack, v.slack);
            if (v.bound == "fourier" || v.bound == "logconcavity")
                worst_dominance_slack = std::min(worst_dominance_slack, v.slack);
            if (!v.pass)
                violations.push_back({{"hash", coeff_hash(r.direction.coeffs())},
                                      {"bound", v.bound},
                                      {"slack", v.slack}});
        }
        if (!r.checks_hold)
            violations.push_back({{"hash", coeff_hash(r.direction.coeffs())},
                                  {"bound", "case-checks"},
                                  {"case", r.case_label}});
        pts.push_back({std::sqrt(std::max(0.0, r.delta_value)), rep.deficit});
    }

    json summary;
    summary["version"] = kVersion;
    summary["schema"] = kSchema;
    summary["seed"] = seed;
    summary["directions"] = rows.size();
    summary["nmin"] = nmin;
    summary["nmax"] = nmax;
    summary["max_p0"] = max_p0;
    summary["webb_margin"] = kInvSqrt2 - max_p0;
    summary["worst_stability_slack"] = worst_stability_slack;
    summary["worst_dominance_slack"] = worst_dominance_slack;
    summary["violations"] = violations;

    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    write_text(dir / "verify.csv", csv.str());
    write_text(dir / "verify.json", summary.dump(2) + "\n");
    write_text(dir / "verify.svg", deficit_scatter_svg(pts));
    std::cout << summary.dump(2) << "\n";
    return violations.empty() ? kExitOk : kExitViolation;
}

int cmd_search(int n, int restarts, std::uint64_t seed, const std::string& out_dir) {
    if (n < 1 || restarts < 1) throw DomainError("need n >= 1 and restarts >= 1");
    auto res = search_extremiser(n, restarts, seed);
    json out;
    out["version"] = kVersion;
    out["n"] = n;
    out["restarts"] = restarts;
    out["seed"] = seed;
    out["p_star"] = res.p_star;
    out["gap_to_webb"] = kInvSqrt2 - res.p_star;
    out["direction"] = res.best.coeffs();
    std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(std::filesystem::path(out_dir) / "search.json", text);
    }
    return res.p_star >= kInvSqrt2 - 1e-6 ? kExitOk : kExitViolation;
}

Polytope make_body(const std::string& name, int n, int vertices, std::uint64_t seed) {
    if (name == "cube") return cube_body(n);
    if (name == "simplex") return simplex_body(n);
    if (name == "random") return random_body(n, vertices, seed);
    throw DomainError("unknown body '" + name + "' (cube, simplex, random)");
}

Polytope centred_copy(const Polytope& P) {
    auto mom = polytope_moments(P);
    std::vector<std::vector<double>> pts;
    for (const auto& v : P.vertices()) {
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] - mom.barycentre[i];
        pts.push_back(std::move(w));
    }
    return Polytope::from_points(P.dim(), pts, P.lower_dim_allowed());
}

int cmd_lipschitz(const std::string& body_name, int n, int ell, int trials,
                  std::uint64_t seed, int vertices, double c_ell,
                  const std::string& out_dir) {
    if (n < 2 || n > 10) throw DomainError("body dimension must be in [2, 10]");
    if (ell < 1 || ell >= n) throw DomainError("need 1 <= ell < n");
    if (trials < 1) throw DomainError("need trials >= 1");
    Polytope body = make_body(body_name, n, vertices, seed);

    auto rep = lipschitz_experiment(body, ell, trials, seed, c_ell);
    json out = lipschitz_report_json(rep);
    out["version"] = kVersion;
    out["body"] = body_name;
    out["n"] = n;

    // Grunbaum suite on the centred body
    Polytope cbody = centred_copy(body);
    json gr;
    int gr_count = 0, gr_fail = 0;
    double gr_min_margin = 1e300;
    Rng grng(mix_seed(seed, 0xa7));
    for (int lb = 1; lb <= std::min(2, n - 1); ++lb) {
        for (int i = 0; i < 100; ++i) {
            Subspace Ebar = random_subspace(n, lb, grng);
            Eigen::VectorXd theta = Ebar.basis().col(0);
            double r = grunbaum_ratio(cbody, Ebar, theta);
            double margin = r - std::exp(-lb);
            gr_min_margin = std::min(gr_min_margin, margin);
            ++gr_count;
            if (margin < -1e-9) ++gr_fail;
        }
    }
    gr["configs"] = gr_count;
    gr["failures"] = gr_fail;
    gr["min_margin"] = gr_min_margin;
    out["grunbaum"] = gr;

    // Busemann suite
    json bu;
    int bu_count = 0, bu_fail = 0;
    if (n >= 3) {
        Rng brng(mix_seed(seed, 0xb0 + 3));
        Subspace Ebar = random_subspace(n, 2, brng);
        for (int i = 0; i < 150; ++i) {
            Eigen::VectorXd x = Ebar.basis().col(0) * brng.normal() +
                                Ebar.basis().col(1) * brng.normal();
            Eigen::VectorXd y = Ebar.basis().col(0) * brng.normal() +
                                Ebar.basis().col(1) * brng.normal();
            if (x.norm() < 1e-8 || y.norm() < 1e-8) continue;
            double nx = busemann_N(cbody, Ebar, x, Side::Plus);
            double ny = busemann_N(cbody, Ebar, y, Side::Plus);
            double nxy = busemann_N(cbody, Ebar, Eigen::VectorXd(x + y), Side::Plus);
            double n2x = busemann_N(cbody, Ebar, Eigen::VectorXd(2.0 * x), Side::Plus);
            ++bu_count;
            if (nxy > nx + ny + 1e-9) ++bu_fail;
            if (std::abs(n2x - 2.0 * nx) > 1e-9 * std::max(1.0, 2.0 * nx)) ++bu_fail;
        }
    }
    bu["triples"] = bu_count;
    bu["failures"] = bu_fail;
    out["busemann"] = bu;

    std::string text = out.dump(2) + "\n";
    std::cout << text;
    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    write_text(std::filesystem::path(out_dir.empty() ? "." : out_dir) / "lipschitz.json",
               text);

    bool fail = gr_fail > 0 || bu_fail > 0;
    if (ell == 1 && !rep.violations.empty()) fail = true;
    return fail ? kExitViolation : kExitOk;
}

int cmd_psi(const std::string& grid_spec, const std::string& points,
            const std::string& out_dir) {
    std::vector<double> xs;
    if (!points.empty()) {
        xs = parse_coeff_list(points);
    } else {
        double lo = 0.001, hi = 0.999;
        int count = 999;
        if (!grid_spec.empty()) {
            std::stringstream ss(grid_spec);
            std::string a, b, c;
            if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
                !std::getline(ss, c, ':'))
                throw DomainError("grid must be lo:hi:count");
            lo = std::stod(a);
            hi = std::stod(b);
            count = std::stoi(c);
        }
        if (!(lo > 0.0) || !(hi < 1.0) || !(hi > lo) || count < 2)
            throw DomainError("grid must satisfy 0 < lo < hi < 1 and count >= 2");
        for (int i = 0; i < count; ++i)
            xs.push_back(lo + (hi - lo) * i / (count - 1));
        xs.push_back(0.5);  // the anchor value is always tabulated
    }

    PsiTable table;
    bool ok = true;
    std::string failure;
    try {
        table = make_psi_table(xs);
    } catch (const DomainError& e) {
        // distinguish bad input from a failed check: evaluate points directly
        for (double x : xs)
            if (!(x > 0.0) || !(x < 1.0)) throw;
        ok = false;
        failure = e.what();
    }

    std::ostringstream csv;
    csv << "# simplex-slice v" << kVersion << " schema=" << kSchema << "\n";
    csv << "x,psi\n";
    for (const auto& [x, y] : table.grid) csv << fmt(x) << ',' << fmt(y) << "\n";
    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    write_text(std::filesystem::path(out_dir.empty() ? "." : out_dir) / "psi.csv",
               csv.str());

    json out;
    out["version"] = kVersion;
    out["points"] = table.grid.size();
    out["monotone"] = ok;
    if (!ok) out["failure"] = failure;
    for (const auto& [x, y] : table.grid)
        if (x == 0.5) out["psi_half"] = y;
    std::cout << out.dump(2) << "\n";
    return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    json cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"simplex-slice: sharp simplex slicing toolkit"};
    app.set_version_flag("--version", kVersion);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");
    app.require_subcommand(1);

    // slice
    auto* slice = app.add_subcommand("slice", "section volume and bounds for one direction");
    std::string sl_a = cfg_or<std::string>(cfg, "a", "");
    int sl_n = cfg_or<int>(cfg, "n", 0);
    double sl_tol = cfg_or<double>(cfg, "tol", 1e-10);
    double sl_agree = cfg_or<double>(cfg, "agreement", 1e-8);
    std::string sl_out = cfg_or<std::string>(cfg, "out", "");
    slice->add_option("--a", sl_a, "comma-separated coefficients (normalized internally)");
    slice->add_option("--n", sl_n, "expected simplex dimension (validated)");
    slice->add_option("--tol", sl_tol, "quadrature tolerance");
    slice->add_option("--agreement", sl_agree, "evaluator agreement tolerance");
    slice->add_option("--out", sl_out, "output directory");

    // verify
    auto* verify = app.add_subcommand("verify", "batch verification of all bounds");
    int ve_nmin = cfg_or<int>(cfg, "nmin", 2);
    int ve_nmax = cfg_or<int>(cfg, "nmax", 10);
    int ve_samples = cfg_or<int>(cfg, "samples", 10000);
    std::uint64_t ve_seed = cfg_or<std::uint64_t>(cfg, "seed", 0);
    std::int64_t ve_mc = cfg_or<std::int64_t>(cfg, "mc-samples", 0);
    std::vector<std::string> ve_families =
        cfg_or<std::vector<std::string>>(cfg, "family", {});
    std::string ve_grid = cfg_or<std::string>(cfg, "delta-grid", "");
    int ve_gridpts = cfg_or<int>(cfg, "grid-points", 12);
    double ve_qtol = cfg_or<double>(cfg, "quad-tol", 1e-10);
    std::string ve_out = cfg_or<std::string>(cfg, "out", ".");
    verify->add_option("--nmin", ve_nmin, "smallest simplex dimension");
    verify->add_option("--nmax", ve_nmax, "largest simplex dimension");
    verify->add_option("--samples", ve_samples, "random directions per dimension");
    verify->add_option("--seed", ve_seed, "random seed");
    verify->add_option("--mc-samples", ve_mc, "Monte Carlo samples per direction (0 = skip)");
    verify->add_option("--family", ve_families,
                       "families to include: random, near, far12 (repeatable)");
    verify->add_option("--delta-grid", ve_grid, "near-family delta range lo:hi");
    verify->add_option("--grid-points", ve_gridpts, "log-spaced points in the delta grid");
    verify->add_option("--quad-tol", ve_qtol, "quadrature tolerance");
    verify->add_option("--out", ve_out, "output directory");

    // search
    auto* search = app.add_subcommand("search", "extremiser search by projected ascent");
    int se_n = cfg_or<int>(cfg, "n", 3);
    int se_restarts = cfg_or<int>(cfg, "restarts", 50);
    std::uint64_t se_seed = cfg_or<std::uint64_t>(cfg, "seed", 0);
    std::string se_out = cfg_or<std::string>(cfg, "out", "");
    search->add_option("--n", se_n, "simplex dimension");
    search->add_option("--restarts", se_restarts, "random restarts");
    search->add_option("--seed", se_seed, "random seed");
    search->add_option("--out", se_out, "output directory");

    // lipschitz
    auto* lip = app.add_subcommand("lipschitz", "section Lipschitz experiment");
    std::string li_body = cfg_or<std::string>(cfg, "body", "cube");
    int li_n = cfg_or<int>(cfg, "n", 3);
    int li_ell = cfg_or<int>(cfg, "ell", 1);
    int li_trials = cfg_or<int>(cfg, "trials", 1000);
    std::uint64_t li_seed = cfg_or<std::uint64_t>(cfg, "seed", 0);
    int li_vertices = cfg_or<int>(cfg, "vertices", 12);
    double li_cell = cfg_or<double>(cfg, "cell", 1.0);
    std::string li_out = cfg_or<std::string>(cfg, "out", ".");
    lip->add_option("--body", li_body, "cube, simplex, or random");
    lip->add_option("--n", li_n, "ambient dimension");
    lip->add_option("--ell", li_ell, "subspace dimension");
    lip->add_option("--trials", li_trials, "subspace pairs to sample");
    lip->add_option("--seed", li_seed, "random seed");
    lip->add_option("--vertices", li_vertices, "vertex count for random bodies");
    lip->add_option("--cell", li_cell, "C_ell constant (default 1)");
    lip->add_option("--out", li_out, "output directory");

    // psi
    auto* psi_cmd = app.add_subcommand("psi", "tabulate Psi and check monotonicity");
    std::string ps_grid = cfg_or<std::string>(cfg, "grid", "");
    std::string ps_points = cfg_or<std::string>(cfg, "points", "");
    std::string ps_out = cfg_or<std::string>(cfg, "out", ".");
    psi_cmd->add_option("--grid", ps_grid, "lo:hi:count linear grid in (0, 1)");
    psi_cmd->add_option("--points", ps_points, "explicit comma-separated abscissas");
    psi_cmd->add_option("--out", ps_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (slice->parsed()) {
            if (sl_a.empty()) throw DomainError("slice needs --a");
            return cmd_slice(sl_a, sl_n, sl_tol, sl_agree, sl_out);
        }
        if (verify->parsed())
            return cmd_verify(ve_nmin, ve_nmax, ve_samples, ve_seed, ve_mc, ve_families,
                              ve_grid, ve_gridpts, ve_qtol, ve_out);
        if (search->parsed()) return cmd_search(se_n, se_restarts, se_seed, se_out);
        if (lip->parsed())
            return cmd_lipschitz(li_body, li_n, li_ell, li_trials, li_seed, li_vertices,
                                 li_cell, li_out);
        if (psi_cmd->parsed()) return cmd_psi(ps_grid, ps_points, ps_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

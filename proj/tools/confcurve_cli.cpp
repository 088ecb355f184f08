// Command-line front end: calibration catalog, curve checks, energy growth
// profiles, blow-down diagnostics, and properness radii, emitted as
// reproducible CSV/JSON reports. Exit status: 0 pass, 1 usage or parse
// error, 2 verdict failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confcurve/confcurve.hpp"
#include "svg_plot.hpp"

using nlohmann::json;
using namespace confcurve;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerdict = 2;

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// catalog name first, file path as fallback
AlternatingForm load_form(const std::string& spec) {
    try {
        return catalog(spec);
    } catch (const std::invalid_argument&) {
        if (std::filesystem::exists(spec)) return parse_form(read_file(spec));
        throw;
    }
}

CurveModel load_curve(const std::string& spec) {
    try {
        return builtin_model(spec);
    } catch (const std::invalid_argument&) {
        if (std::filesystem::exists(spec)) return parse_curve(read_file(spec));
        throw;
    }
}

Vec parse_point(const std::string& text, int expect_dim = -1) {
    Vec v;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (expect_dim >= 0 && static_cast<int>(v.size()) != expect_dim)
        throw std::runtime_error("point '" + text + "' has dimension " +
                                 std::to_string(v.size()) + ", curve domain is " +
                                 std::to_string(expect_dim));
    return v;
}

// "ball:c1,...,cn,R" or "box:c1,...,cn,h1,...,hn"
Region parse_region(const std::string& text, int dim) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::runtime_error("region: expected ball:... or box:...");
    const std::string kind = text.substr(0, colon);
    const Vec nums = parse_point(text.substr(colon + 1));
    if (kind == "ball") {
        if (static_cast<int>(nums.size()) != dim + 1)
            throw std::runtime_error("region ball: expected " + std::to_string(dim) +
                                     " center coordinates plus a radius");
        return Region::ball(Vec(nums.begin(), nums.end() - 1), nums.back());
    }
    if (kind == "box") {
        if (static_cast<int>(nums.size()) != 2 * dim)
            throw std::runtime_error("region box: expected " + std::to_string(dim) +
                                     " center coordinates plus " + std::to_string(dim) +
                                     " halfwidths");
        return Region::box(Vec(nums.begin(), nums.begin() + dim), Vec(nums.begin() + dim, nums.end()));
    }
    throw std::runtime_error("region: unknown kind '" + kind + "'");
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Output {
    std::string path;    // empty: stdout
    void emit(const std::string& payload) const {
        if (path.empty())
            std::fputs(payload.c_str(), stdout);
        else
            write_file(path, payload);
    }
};

struct CommonOpts {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";

    std::uint64_t require_seed() const {
        if (seed) return *seed;
        if (const char* env = std::getenv("CONFCURVE_SEED")) return std::strtoull(env, nullptr, 10);
        throw CLI::ValidationError("--seed", "randomized command needs --seed (or CONFCURVE_SEED)");
    }
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_format = true) {
    cmd->add_option("--seed", c.seed, "RNG seed (env CONFCURVE_SEED supplies a default)");
    cmd->add_option("--out", c.out, "output path (default: stdout)");
    if (with_format)
        cmd->add_option("--format", c.format, "output format: json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
}

json base_payload(const std::string& command, std::uint64_t seed) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    j["seed"] = seed;
    j["timestamp"] = iso_timestamp();
    return j;
}

// ---------------------------------------------------------------------------
// comass
// ---------------------------------------------------------------------------

int run_comass(const std::string& form_spec, int restarts, double tol, const CommonOpts& c) {
    const AlternatingForm omega = load_form(form_spec);
    const std::uint64_t seed = c.require_seed();
    const ComassReport rep = comass(omega, {restarts, tol, 10000, seed});

    json j = base_payload("comass", seed);
    j["form"] = form_spec;
    j["degree"] = omega.degree();
    j["ambient"] = omega.ambient();
    j["estimate"] = rep.estimate;
    j["certified_upper_bound"] = rep.certified_upper_bound;
    j["restarts_used"] = rep.restarts_used;
    j["ascent_tolerance"] = rep.ascent_tolerance;
    j["converged"] = rep.converged;
    j["best_frame"] = mat_to_json(rep.best_frame.as_matrix());
    Output{c.out}.emit(j.dump(2) + "\n");
    return rep.converged ? kExitPass : kExitVerdict;
}

// ---------------------------------------------------------------------------
// check-curve
// ---------------------------------------------------------------------------

int run_check_curve(const std::string& curve_spec, const std::string& form_spec,
                    const std::string& region_spec, int points, double tol, const CommonOpts& c) {
    const CurveModel model = load_curve(curve_spec);
    const AlternatingForm omega = load_form(form_spec);
    const std::uint64_t seed = c.require_seed();
    const Region region = region_spec.empty()
                              ? Region::ball(Vec(model.domain_dim(), 0.0), 1.0)
                              : parse_region(region_spec, model.domain_dim());
    const ResidualReport rep = verify_curve(model, omega, region, points, seed, tol);

    if (c.format == "csv") {
        std::string csv;
        for (int i = 0; i < model.domain_dim(); ++i) csv += "x" + std::to_string(i + 1) + ",";
        csv += "residual\n";
        for (size_t k = 0; k < rep.points.size(); ++k) {
            for (double x : rep.points[k]) csv += csv_num(x) + ",";
            csv += csv_num(rep.residuals[k]) + "\n";
        }
        Output{c.out}.emit(csv);
    } else {
        json j = base_payload("check-curve", seed);
        j["curve"] = curve_spec;
        j["form"] = form_spec;
        j["points"] = points;
        j["tolerance"] = tol;
        j["max_abs_residual"] = rep.max_abs;
        j["min_signed_residual"] = rep.min_signed;
        j["pass"] = rep.pass;
        Output{c.out}.emit(j.dump(2) + "\n");
    }
    return rep.pass ? kExitPass : kExitVerdict;
}

// ---------------------------------------------------------------------------
// energy
// ---------------------------------------------------------------------------

struct EnergyTable {
    EnergyProfile profile;
    std::vector<double> hprime, hprime_se, gap, gap_se, caccioppoli, modulus;
};

EnergyTable compute_energy_table(const CurveModel& model, const Vec& center,
                                 const std::vector<double>& radii, long long samples,
                                 std::uint64_t seed) {
    EnergyTable t;
    t.profile = compute_profile(model, center, radii, samples, seed);
    const int n = model.domain_dim();
    for (size_t i = 0; i < radii.size(); ++i) {
        // derivative identity and isoperimetric gap from the profile columns
        const double r = radii[i];
        const double scale = static_cast<double>(n) / r;
        t.hprime.push_back(scale * (t.profile.sphere_n[i] - t.profile.h[i]));
        t.hprime_se.push_back(scale * std::sqrt(t.profile.sphere_n_se[i] * t.profile.sphere_n_se[i] +
                                                t.profile.h_se[i] * t.profile.h_se[i]));
        const double expo = static_cast<double>(n) / (n - 1);
        const double lhs = std::pow(t.profile.sphere_nm1[i], expo);
        const double dlhs = t.profile.sphere_nm1[i] > 0.0
                                ? expo * std::pow(t.profile.sphere_nm1[i], expo - 1.0) *
                                      t.profile.sphere_nm1_se[i]
                                : 0.0;
        t.gap.push_back(lhs - t.profile.h[i]);
        t.gap_se.push_back(std::sqrt(dlhs * dlhs + t.profile.h_se[i] * t.profile.h_se[i]));
        const CaccioppoliRatio cc =
            caccioppoli_ratio(model, center, r, samples, mix_seed(seed, 1000 + i));
        t.caccioppoli.push_back(cc.defined ? cc.ratio : std::nan(""));
        t.modulus.push_back(
            modulus_constant(model, center, r, 2048, samples, mix_seed(seed, 2000 + i)));
    }
    return t;
}

std::string energy_csv(const EnergyTable& t) {
    std::string csv =
        "r,h,h_stderr,sphere_n,sphere_n_stderr,sphere_nm1,sphere_nm1_stderr,"
        "hprime,hprime_stderr,isoper_gap,isoper_gap_stderr,caccioppoli,modulus\n";
    for (size_t i = 0; i < t.profile.radii.size(); ++i) {
        const double cols[] = {t.profile.radii[i],    t.profile.h[i],
                               t.profile.h_se[i],     t.profile.sphere_n[i],
                               t.profile.sphere_n_se[i], t.profile.sphere_nm1[i],
                               t.profile.sphere_nm1_se[i], t.hprime[i],
                               t.hprime_se[i],        t.gap[i],
                               t.gap_se[i],           t.caccioppoli[i],
                               t.modulus[i]};
        for (size_t k = 0; k < std::size(cols); ++k)
            csv += (k ? "," : "") + csv_num(cols[k]);
        csv += "\n";
    }
    return csv;
}

json energy_json(const EnergyTable& t, const std::string& curve_spec, long long samples,
                 std::uint64_t seed) {
    json j = base_payload("energy", seed);
    j["curve"] = curve_spec;
    j["center"] = t.profile.center;
    j["samples_per_radius"] = samples;
    j["radii"] = t.profile.radii;
    j["h"] = t.profile.h;
    j["h_stderr"] = t.profile.h_se;
    j["sphere_n"] = t.profile.sphere_n;
    j["sphere_n_stderr"] = t.profile.sphere_n_se;
    j["sphere_nm1"] = t.profile.sphere_nm1;
    j["sphere_nm1_stderr"] = t.profile.sphere_nm1_se;
    j["hprime"] = t.hprime;
    j["hprime_stderr"] = t.hprime_se;
    j["isoper_gap"] = t.gap;
    j["isoper_gap_stderr"] = t.gap_se;
    json cacc = json::array(), mod = json::array();
    for (double v : t.caccioppoli) cacc.push_back(std::isnan(v) ? json() : json(v));
    for (double v : t.modulus) mod.push_back(v);
    j["caccioppoli"] = std::move(cacc);
    j["modulus"] = std::move(mod);
    return j;
}

int run_energy(const std::string& curve_spec, const std::string& center_spec,
               const std::string& radii_spec, long long samples, const CommonOpts& c) {
    const CurveModel model = load_curve(curve_spec);
    const Vec center = center_spec.empty() ? Vec(model.domain_dim(), 0.0)
                                           : parse_point(center_spec, model.domain_dim());
    const std::vector<double> radii = RadiiGrid::parse(radii_spec).values();
    const std::uint64_t seed = c.require_seed();
    const EnergyTable t = compute_energy_table(model, center, radii, samples, seed);
    if (c.format == "csv")
        Output{c.out}.emit(energy_csv(t));
    else
        Output{c.out}.emit(energy_json(t, curve_spec, samples, seed).dump(2) + "\n");
    return kExitPass;
}

// ---------------------------------------------------------------------------
// blowdown
// ---------------------------------------------------------------------------

int run_blowdown(const std::string& curve_spec, const std::string& anchor_spec,
                 const std::string& scales_spec, int fit_points, long long samples,
                 const CommonOpts& c) {
    const CurveModel model = load_curve(curve_spec);
    const Vec anchor = anchor_spec.empty() ? Vec(model.domain_dim(), 0.0)
                                           : parse_point(anchor_spec, model.domain_dim());
    const std::vector<double> scales = RadiiGrid::parse(scales_spec).values();
    const std::uint64_t seed = c.require_seed();
    const BlowdownReport rep = blowdown_report(model, anchor, scales, fit_points, samples, seed);

    json j = base_payload("blowdown", seed);
    j["curve"] = curve_spec;
    j["anchor"] = rep.anchor;
    j["scales"] = rep.scales;
    j["deviation_from_isometry"] = rep.deviations;
    j["energy_over_unit_ball"] = rep.energies;
    j["energy_stderr"] = rep.energy_se;
    json hyp = json::array();
    for (bool ok : rep.hypothesis_ok) hyp.push_back(ok);
    j["normalized_energy_hypothesis"] = std::move(hyp);
    j["final_best_fit"] = mat_to_json(rep.final_best_fit);
    Output{c.out}.emit(j.dump(2) + "\n");
    return kExitPass;
}

// ---------------------------------------------------------------------------
// proper
// ---------------------------------------------------------------------------

int run_proper(const std::string& curve_spec, const std::string& center_spec,
               const std::string& radii_spec, double resolution, double max_radius,
               const CommonOpts& c) {
    const CurveModel model = load_curve(curve_spec);
    const Vec center = center_spec.empty() ? Vec(model.domain_dim(), 0.0)
                                           : parse_point(center_spec, model.domain_dim());
    const std::vector<double> radii = RadiiGrid::parse(radii_spec).values();
    const std::uint64_t seed = c.require_seed();
    PropernessSearch search;
    search.resolution = resolution;
    search.max_radius = max_radius;

    std::vector<PropernessRadii> rows;
    for (size_t i = 0; i < radii.size(); ++i)
        rows.push_back(properness_radii(model, center, radii[i], search, mix_seed(seed, i)));

    if (c.format == "csv") {
        std::string csv = "r,s_r,S_r,s_capped,S_capped,resolution\n";
        for (const auto& row : rows) {
            csv += csv_num(row.r) + "," + csv_num(row.s_r) + "," + csv_num(row.S_r) + "," +
                   std::to_string(row.s_capped) + "," + std::to_string(row.S_capped) + "," +
                   csv_num(row.resolution) + "\n";
        }
        Output{c.out}.emit(csv);
    } else {
        json j = base_payload("proper", seed);
        j["curve"] = curve_spec;
        j["center"] = center;
        json table = json::array();
        for (const auto& row : rows) {
            json e;
            e["r"] = row.r;
            e["s_r"] = row.s_r;
            e["S_r"] = row.S_r;
            e["s_capped"] = row.s_capped;
            e["S_capped"] = row.S_capped;
            e["resolution"] = row.resolution;
            table.push_back(std::move(e));
        }
        j["radii"] = std::move(table);
        Output{c.out}.emit(j.dump(2) + "\n");
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

json verdict_json(const GrowthVerdict& v) {
    json j;
    j["label"] = to_string(v.label);
    j["doubling_ratios"] = v.doubling_ratios;
    j["top_doubling_ratio"] = v.top_doubling_ratio;
    j["monotonicity_margin_sigmas"] = v.monotonicity_margin_sigmas;
    j["affinity_residual"] = v.affinity_residual;
    j["delta"] = v.delta;
    j["affine_tol"] = v.affine_tol;
    return j;
}

int run_classify(const std::string& curve_spec, const std::string& center_spec,
                 const std::string& radii_spec, long long samples, double delta,
                 double affine_tol, const CommonOpts& c) {
    const CurveModel model = load_curve(curve_spec);
    const Vec center = center_spec.empty() ? Vec(model.domain_dim(), 0.0)
                                           : parse_point(center_spec, model.domain_dim());
    const std::vector<double> radii = RadiiGrid::parse(radii_spec).values();
    const std::uint64_t seed = c.require_seed();
    const EnergyProfile profile = compute_profile(model, center, radii, samples, seed);
    ClassifyOptions opts;
    opts.delta = delta;
    opts.affine_tol = affine_tol;
    opts.seed = seed;
    const GrowthVerdict v = classify_growth(profile, model, opts);

    json j = base_payload("classify", seed);
    j["curve"] = curve_spec;
    j["center"] = center;
    j["radii"] = profile.radii;
    j["h"] = profile.h;
    j["h_stderr"] = profile.h_se;
    j["samples_per_radius"] = samples;
    j["verdict"] = verdict_json(v);
    Output{c.out}.emit(j.dump(2) + "\n");
    return v.label == GrowthLabel::Inconclusive ? kExitVerdict : kExitPass;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int run_report(const std::string& curve_spec, const std::string& form_spec,
               const std::string& center_spec, const std::string& radii_spec, long long samples,
               int points, double tol, double delta, double affine_tol, const CommonOpts& c) {
    if (c.out.empty()) throw CLI::ValidationError("--out", "report needs an output directory");
    const CurveModel model = load_curve(curve_spec);
    const AlternatingForm omega = load_form(form_spec);
    const Vec center = center_spec.empty() ? Vec(model.domain_dim(), 0.0)
                                           : parse_point(center_spec, model.domain_dim());
    const std::vector<double> radii = RadiiGrid::parse(radii_spec).values();
    const std::uint64_t seed = c.require_seed();
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);

    // residual check
    const Region region = Region::ball(center, radii.front());
    const ResidualReport resid =
        verify_curve(model, omega, region, points, mix_seed(seed, 1), tol);
    {
        std::string csv;
        for (int i = 0; i < model.domain_dim(); ++i) csv += "x" + std::to_string(i + 1) + ",";
        csv += "residual\n";
        for (size_t k = 0; k < resid.points.size(); ++k) {
            for (double x : resid.points[k]) csv += csv_num(x) + ",";
            csv += csv_num(resid.residuals[k]) + "\n";
        }
        write_file((dir / "residuals.csv").string(), csv);
        write_file((dir / "residual_hist.svg").string(),
                   confcurve_cli::histogram_svg("residuals of the Cauchy-Riemann equation",
                                                "residual", resid.residuals, 40));
    }

    // energy profile + classification
    const EnergyTable t = compute_energy_table(model, center, radii, samples, mix_seed(seed, 2));
    write_file((dir / "energy.csv").string(), energy_csv(t));
    ClassifyOptions copts;
    copts.delta = delta;
    copts.affine_tol = affine_tol;
    copts.seed = mix_seed(seed, 3);
    const GrowthVerdict verdict = classify_growth(t.profile, model, copts);
    {
        std::vector<std::pair<double, double>> pts;
        for (size_t i = 0; i < t.profile.radii.size(); ++i)
            pts.emplace_back(t.profile.radii[i], std::max(t.profile.h[i], 1e-300));
        write_file((dir / "h_profile.svg").string(),
                   confcurve_cli::line_plot_svg("energy average h(r)", "r", "h", pts, true));
    }

    // blow-down diagnostics + properness at the grid radii
    const BlowdownReport blow =
        blowdown_report(model, center, radii, 256, samples, mix_seed(seed, 4));
    PropernessSearch search;
    std::vector<PropernessRadii> proper;
    for (size_t i = 0; i < radii.size(); ++i)
        proper.push_back(properness_radii(model, center, radii[i], search, mix_seed(seed, 5 + i)));

    json j = base_payload("report", seed);
    j["curve"] = curve_spec;
    j["form"] = form_spec;
    j["center"] = center;
    j["samples_per_radius"] = samples;
    j["residual"] = {{"max_abs", resid.max_abs},
                     {"min_signed", resid.min_signed},
                     {"tolerance", tol},
                     {"pass", resid.pass}};
    j["energy"] = energy_json(t, curve_spec, samples, seed)["h"];
    j["radii"] = t.profile.radii;
    j["verdict"] = verdict_json(verdict);
    j["blowdown"] = {{"scales", blow.scales},
                     {"deviation_from_isometry", blow.deviations},
                     {"energy_over_unit_ball", blow.energies}};
    json ptable = json::array();
    for (const auto& row : proper)
        ptable.push_back({{"r", row.r}, {"s_r", row.s_r}, {"S_r", row.S_r}});
    j["properness"] = std::move(ptable);
    write_file((dir / "report.json").string(), j.dump(2) + "\n");

    const bool ok = resid.pass && verdict.label != GrowthLabel::Inconclusive;
    return ok ? kExitPass : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "confcurve: numerical toolkit for conformal omega-curves -- calibrations and comass, "
        "Cauchy-Riemann residuals, energy growth, blow-downs, properness"};
    app.require_subcommand(1);

    // comass
    std::string form_spec;
    int restarts = 64;
    double ascent_tol = 1e-10;
    CommonOpts comass_c;
    CLI::App* cmd_comass = app.add_subcommand(
        "comass", "estimate the comass of a form by multi-start Stiefel ascent");
    cmd_comass->add_option("--form", form_spec,
                           "catalog name (volume:n, symplectic:d, kahler:d,k, "
                           "special_lagrangian:n,theta, associative, cayley) or file path")
        ->required();
    cmd_comass->add_option("--restarts", restarts, "ascent restarts (default 64)");
    cmd_comass->add_option("--tol", ascent_tol, "ascent movement tolerance (default 1e-10)");
    add_common(cmd_comass, comass_c, false);

    // check-curve
    std::string cc_curve, cc_form, cc_region;
    int cc_points = 1000;
    double cc_tol = 1e-9;
    CommonOpts cc_c;
    CLI::App* cmd_check = app.add_subcommand(
        "check-curve", "sample the conformal residual ||DF||^n - star F*omega over a region; "
                       "csv columns: x1..xn,residual");
    cmd_check->add_option("--curve", cc_curve, "builtin (identity:n, zsquare, zcube, exp) or file")
        ->required();
    cmd_check->add_option("--form", cc_form, "calibration (catalog name or file)")->required();
    cmd_check->add_option("--region", cc_region,
                          "ball:c1,..,cn,R or box:c1,..,cn,h1,..,hn (default unit ball)");
    cmd_check->add_option("--points", cc_points, "sample count (default 1000)");
    cmd_check->add_option("--tol", cc_tol, "residual tolerance (default 1e-9)");
    add_common(cmd_check, cc_c);

    // energy
    std::string en_curve, en_center, en_radii = "1x2x5";
    long long en_samples = 200000;
    CommonOpts en_c;
    CLI::App* cmd_energy = app.add_subcommand(
        "energy",
        "ball/sphere averages of ||DF||^p over a radii grid; csv columns: r,h,h_stderr,"
        "sphere_n,sphere_n_stderr,sphere_nm1,sphere_nm1_stderr,hprime,hprime_stderr,"
        "isoper_gap,isoper_gap_stderr,caccioppoli,modulus");
    cmd_energy->add_option("--curve", en_curve, "curve spec")->required();
    cmd_energy->add_option("--center", en_center, "center x0 as c1,..,cn (default origin)");
    cmd_energy->add_option("--radii", en_radii, "grid <start>x<factor>x<count> (default 1x2x5)");
    cmd_energy->add_option("--samples", en_samples, "Monte-Carlo samples per radius (default 2e5)");
    add_common(cmd_energy, en_c);

    // blowdown
    std::string bd_curve, bd_anchor, bd_scales = "1x4x4";
    int bd_fit_points = 256;
    long long bd_samples = 50000;
    CommonOpts bd_c;
    CLI::App* cmd_blow = app.add_subcommand(
        "blowdown", "deviation-from-isometry of the rescaled family over a scale grid");
    cmd_blow->add_option("--curve", bd_curve, "curve spec")->required();
    cmd_blow->add_option("--anchor", bd_anchor, "anchor point (default origin)");
    cmd_blow->add_option("--scales", bd_scales, "scales <start>x<factor>x<count> (default 1x4x4)");
    cmd_blow->add_option("--fit-points", bd_fit_points, "sample points for the isometry fit");
    cmd_blow->add_option("--samples", bd_samples, "Monte-Carlo samples for the energy check");
    add_common(cmd_blow, bd_c, false);

    // proper
    std::string pr_curve, pr_center, pr_radii = "1x2x4";
    double pr_resolution = 1e-3, pr_max_radius = 64.0;
    CommonOpts pr_c;
    CLI::App* cmd_proper = app.add_subcommand(
        "proper", "inner/outer preimage radii s_r, S_r per target radius; csv columns: "
                  "r,s_r,S_r,s_capped,S_capped,resolution");
    cmd_proper->add_option("--curve", pr_curve, "curve spec")->required();
    cmd_proper->add_option("--center", pr_center, "center x0 (default origin)");
    cmd_proper->add_option("--r", pr_radii, "target radii grid <start>x<factor>x<count>");
    cmd_proper->add_option("--resolution", pr_resolution, "bisection resolution (default 1e-3)");
    cmd_proper->add_option("--max-radius", pr_max_radius, "search cap (default 64)");
    add_common(cmd_proper, pr_c);

    // classify
    std::string cl_curve, cl_center, cl_radii = "1x2x5";
    long long cl_samples = 200000;
    double cl_delta = 0.05, cl_affine_tol = 1e-6;
    CommonOpts cl_c;
    CLI::App* cmd_classify = app.add_subcommand(
        "classify", "affine-vs-super-Euclidean growth verdict from doubling ratios");
    cmd_classify->add_option("--curve", cl_curve, "curve spec")->required();
    cmd_classify->add_option("--center", cl_center, "center x0 (default origin)");
    cmd_classify->add_option("--radii", cl_radii, "grid <start>x<factor>x<count> (default 1x2x5)");
    cmd_classify->add_option("--samples", cl_samples, "Monte-Carlo samples per radius");
    cmd_classify->add_option("--delta", cl_delta, "doubling-ratio margin (default 0.05)");
    cmd_classify->add_option("--affine-tol", cl_affine_tol,
                             "sup-deviation gate for the affine label (default 1e-6)");
    add_common(cmd_classify, cl_c, false);

    // report
    std::string rp_curve, rp_form, rp_center, rp_radii = "1x2x5";
    long long rp_samples = 200000;
    int rp_points = 1000;
    double rp_tol = 1e-9, rp_delta = 0.05, rp_affine_tol = 1e-6;
    CommonOpts rp_c;
    CLI::App* cmd_report = app.add_subcommand(
        "report", "full bundle: residuals, energy table, verdict, blow-down, properness, "
                  "and static plots, written into --out directory");
    cmd_report->add_option("--curve", rp_curve, "curve spec")->required();
    cmd_report->add_option("--form", rp_form, "calibration spec")->required();
    cmd_report->add_option("--center", rp_center, "center x0 (default origin)");
    cmd_report->add_option("--radii", rp_radii, "grid <start>x<factor>x<count>");
    cmd_report->add_option("--samples", rp_samples, "Monte-Carlo samples per radius");
    cmd_report->add_option("--points", rp_points, "residual sample count");
    cmd_report->add_option("--tol", rp_tol, "residual tolerance");
    cmd_report->add_option("--delta", rp_delta, "doubling-ratio margin");
    cmd_report->add_option("--affine-tol", rp_affine_tol, "affinity gate");
    add_common(cmd_report, rp_c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (cmd_comass->parsed()) return run_comass(form_spec, restarts, ascent_tol, comass_c);
        if (cmd_check->parsed())
            return run_check_curve(cc_curve, cc_form, cc_region, cc_points, cc_tol, cc_c);
        if (cmd_energy->parsed())
            return run_energy(en_curve, en_center, en_radii, en_samples, en_c);
        if (cmd_blow->parsed())
            return run_blowdown(bd_curve, bd_anchor, bd_scales, bd_fit_points, bd_samples, bd_c);
        if (cmd_proper->parsed())
            return run_proper(pr_curve, pr_center, pr_radii, pr_resolution, pr_max_radius, pr_c);
        if (cmd_classify->parsed())
            return run_classify(cl_curve, cl_center, cl_radii, cl_samples, cl_delta,
                                cl_affine_tol, cl_c);
        if (cmd_report->parsed())
            return run_report(rp_curve, rp_form, rp_center, rp_radii, rp_samples, rp_points,
                              rp_tol, rp_delta, rp_affine_tol, rp_c);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

// qloc: heat-kernel concentration toolkit for Neumann eigenfunction
// localization near irregular boundaries.
//
// Subcommands: build, spectrum, concentrate, walk, experiment. Every run
// writes a manifest.json with the fully resolved configuration and seeds so
// outputs can be reproduced exactly.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "qloc/analysis.hpp"
#include "qloc/eigensolver.hpp"
#include "qloc/errors.hpp"
#include "qloc/geometry.hpp"
#include "qloc/grid.hpp"
#include "qloc/heat.hpp"
#include "qloc/io.hpp"
#include "qloc/walker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qloc;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kVersion = "qloc 1.0.0";

DomainSpec preset_spec(const std::string& name) {
    if (name == "square") {
        RawPolygonParams p;
        p.outer = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        return p;
    }
    if (name == "spiked_square") return SpikedSquareParams{};
    if (name == "slit_box") return SlitBoxParams{};
    if (name == "disk_chain") return DiskChainParams{};
    if (name == "wedge") return WedgeParams{};
    throw InvalidSpec("unknown preset '" + name + "'");
}

DomainSpec resolve_spec(const std::string& preset, const std::string& spec_path) {
    if (!preset.empty() && !spec_path.empty())
        throw InvalidSpec("give either --preset or --spec, not both");
    if (!preset.empty()) return preset_spec(preset);
    if (!spec_path.empty()) return load_spec(spec_path);
    throw InvalidSpec("one of --preset or --spec is required");
}

// accepts plain numbers plus "pi", "pi/3", "2pi/5"
double parse_angle(std::string s) {
    const auto pipos = s.find("pi");
    if (pipos == std::string::npos) return std::stod(s);
    double num = 1.0;
    if (pipos > 0) num = std::stod(s.substr(0, pipos));
    double den = 1.0;
    const auto rest = s.substr(pipos + 2);
    if (!rest.empty()) {
        if (rest[0] != '/') throw InvalidSpec("cannot parse angle '" + s + "'");
        den = std::stod(rest.substr(1));
    }
    return num * kPi / den;
}

std::vector<double> parse_list(const std::string& csv, bool angles) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(angles ? parse_angle(tok) : std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw InvalidSpec("empty list");
    return out;
}

struct Common {
    std::string preset, spec_path, out = ".";
    double h = 1.0 / 64;
    double t = 1.0;
    int K = 0;  // 0 = auto per the truncation rule
    double tol = 1e-8;
    std::uint64_t seed = 1;
    long n_pairs = 100000;
    int x = -1;  // -1 = deepest included cell
    int threads = 1;
    double neck_floor = 0.0;
    int n_disks = 5;
    std::string angles = "pi,pi/2,pi/3,pi/4";
    std::string gaps = "0.2,0.1,0.05";
};

void add_common(CLI::App* cmd, Common& c, bool needs_domain = true) {
    if (needs_domain) {
        cmd->add_option("--preset", c.preset,
                        "preset domain: square, spiked_square, slit_box, disk_chain, wedge");
        cmd->add_option("--spec", c.spec_path, "domain spec JSON file");
    }
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--h", c.h, "grid spacing");
    cmd->add_option("--t", c.t, "diffusion time");
    cmd->add_option("--K", c.K, "eigenpair count (0 = auto)");
    cmd->add_option("--tol", c.tol, "eigensolver tolerance");
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--n-pairs", c.n_pairs, "walker pair count");
    cmd->add_option("--x", c.x, "start dof index (-1 = deepest cell)");
    cmd->add_option("--threads", c.threads, "worker cap (never changes results)");
    cmd->add_option("--neck-floor", c.neck_floor, "disk-chain neck width clamp");
    cmd->add_option("--n-disks", c.n_disks, "disk count");
    cmd->add_option("--angles", c.angles, "comma list, accepts pi fractions");
    cmd->add_option("--gaps", c.gaps, "comma list of slit gaps");
}

json manifest_base(const std::string& cmd, const Common& c) {
    return json{{"version", kVersion},
                {"command", cmd},
                {"h", c.h},
                {"t", c.t},
                {"K", c.K},
                {"tol", c.tol},
                {"seed", c.seed},
                {"n_pairs", c.n_pairs},
                {"x", c.x},
                {"threads", c.threads}};
}

fs::path ensure_out(const Common& c) {
    fs::path out(c.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec && !fs::is_directory(out)) throw IoError("cannot create " + out.string());
    return out;
}

int pick_start_dof(const GridMask& mask, int requested) {
    if (requested < 0) return mask.deepest_dof();
    if (requested >= mask.N) throw InvalidSpec("x out of range");
    return requested;
}

int run_build(const Common& c) {
    const DomainSpec spec = resolve_spec(c.preset, c.spec_path);
    const PolygonDomain domain = build_domain(spec);  // validate before any output
    const fs::path out = ensure_out(c);
    write_polygon_csv(domain, out / "polygon.csv");
    write_json(spec_to_json(spec), out / "spec.json");
    json m = manifest_base("build", c);
    m["spec"] = spec_to_json(spec);
    m["area"] = area(domain);
    write_json(m, out / "manifest.json");
    return 0;
}

int run_spectrum(const Common& c) {
    const DomainSpec spec = resolve_spec(c.preset, c.spec_path);
    const PolygonDomain domain = build_domain(spec);
    const GridMask mask = rasterize(domain, c.h, c.neck_floor);
    const NeumannOperator op = assemble_neumann_laplacian(mask);
    const int K = c.K > 0 ? c.K : 6;
    const Spectrum sp = lowest_eigenpairs(op, K, c.tol, 0, c.seed);

    const fs::path out = ensure_out(c);
    write_spectrum_csv(sp, out / "mu.csv");
    write_mask_csv(mask, out / "mask.csv");
    for (int k = 0; k < sp.K; ++k) {
        ScalarField f = make_field(mask);
        for (int d = 0; d < mask.N; ++d) f.values[d] = sp.phi(d, k);
        char name[32];
        std::snprintf(name, sizeof(name), "phi_%03d.csv", k);
        write_field_csv(f, out / name);
    }
    json m = manifest_base("spectrum", c);
    m["spec"] = spec_to_json(spec);
    m["N"] = mask.N;
    m["warnings"] = mask.warnings;
    if (sp.K >= 20) {
        const WeylFit wf = weyl_fit(sp, area(domain));
        write_json(json{{"fitted_c", wf.fitted_c},
                        {"predicted_c", wf.predicted_c},
                        {"rel_deviation", wf.rel_deviation},
                        {"fit_residual", wf.fit_residual}},
                   out / "weyl.json");
    }
    write_json(m, out / "manifest.json");
    return 0;
}

int run_concentrate(const Common& c) {
    const DomainSpec spec = resolve_spec(c.preset, c.spec_path);
    const PolygonDomain domain = build_domain(spec);
    const GridMask mask = rasterize(domain, c.h, c.neck_floor);
    const NeumannOperator op = assemble_neumann_laplacian(mask);
    const int K = c.K > 0 ? std::min(c.K, mask.N)
                          : std::min(modes_for_concentration(mask, c.t), mask.N);
    const Spectrum sp = lowest_eigenpairs(op, K, c.tol, 0, c.seed);

    HeatParams hp;
    hp.t = c.t;
    const ScalarField q = concentration_field(sp, mask, hp);
    const fs::path out = ensure_out(c);
    const json sidecar{{"t", hp.t},
                       {"K_used", hp.K_used},
                       {"tail_bound", hp.tail_bound},
                       {"mass", q.mass()}};
    write_field_csv(q, out / "q.csv", &sidecar);
    write_spectrum_csv(sp, out / "mu.csv");
    json m = manifest_base("concentrate", c);
    m["spec"] = spec_to_json(spec);
    m["N"] = mask.N;
    m["K_used"] = hp.K_used;
    m["tail_bound"] = hp.tail_bound;
    m["warnings"] = mask.warnings;
    write_json(m, out / "manifest.json");
    return 0;
}

int run_walk(const Common& c) {
    const DomainSpec spec = resolve_spec(c.preset, c.spec_path);
    const PolygonDomain domain = build_domain(spec);
    const GridMask mask = rasterize(domain, c.h, c.neck_floor);
    WalkConfig cfg;
    cfg.t = c.t;
    cfg.n_pairs = c.n_pairs;
    cfg.seed = c.seed;
    cfg.x = pick_start_dof(mask, c.x);
    const CollisionEstimate est = collision_estimate(mask, cfg, c.threads);
    const fs::path out = ensure_out(c);
    write_json(estimate_to_json(est, cfg), out / "estimate.json");
    json m = manifest_base("walk", c);
    m["spec"] = spec_to_json(spec);
    m["x_resolved"] = cfg.x;
    write_json(m, out / "manifest.json");
    return 0;
}

void write_table(const ScalingTable& table, const fs::path& out, const std::string& stem) {
    std::ofstream csv(out / (stem + ".csv"));
    if (!csv) throw IoError("cannot open " + (out / (stem + ".csv")).string());
    csv.precision(17);
    csv << "parameter,measured,predicted,ratio\n";
    for (const auto& r : table.rows)
        csv << r.parameter << ',' << r.measured << ',' << r.predicted << ',' << r.ratio
            << '\n';
    write_json(scaling_table_to_json(table), out / (stem + ".json"));
}

int run_experiment(const std::string& name, const Common& c) {
    const fs::path out = ensure_out(c);
    json m = manifest_base("experiment " + name, c);
    if (name == "cone") {
        ConeOptions opt;
        opt.t = c.t == 1.0 ? 0.005 : c.t;  // t = 1 is far too coarse for a wedge apex
        opt.h = c.h;
        opt.tol = c.tol;
        opt.seed = c.seed;
        const ConeResult res = cone_experiment(parse_list(c.angles, true), opt);
        write_table(res.coarse, out, "cone_h");
        write_table(res.fine, out, "cone_h2");
        m["slope_agreement"] = res.slope_agreement;
    } else if (name == "slit") {
        SlitOptions opt;
        opt.h = c.h;
        opt.tol = c.tol;
        opt.seed = c.seed;
        const SlitResult res = slit_experiment(parse_list(c.gaps, false), opt);
        write_table(res.table, out, "slit");
        m["stay_probability"] = res.stay_probability;
    } else if (name == "disk_chain") {
        DiskChainOptions opt;
        opt.n_disks = c.n_disks;
        opt.h = c.h;
        if (c.neck_floor > 0) opt.neck_floor = c.neck_floor;
        opt.tol = c.tol;
        opt.seed = c.seed;
        const DiskChainResult res = disk_chain_experiment(opt);
        write_table(res.table, out, "disk_chain");
        m["chi_norm"] = res.chi_norm;
        m["heat_min"] = res.heat_min;
    } else if (name == "non_localization") {
        const DomainSpec spec =
            resolve_spec(c.preset.empty() && c.spec_path.empty() ? "square" : c.preset,
                         c.spec_path);
        const double t = c.t == 1.0 ? 0.005 : c.t;
        const PolygonDomain domain = build_domain(spec);
        const GridMask mask = rasterize(domain, c.h);
        const NeumannOperator op = assemble_neumann_laplacian(mask);
        const int K = std::min(modes_for_concentration(mask, t), mask.N);
        const Spectrum sp = lowest_eigenpairs(op, K, c.tol, 0, c.seed);
        const auto rep = non_localization_check(sp, mask, t, 3.5 * std::sqrt(t));
        write_json(non_localization_to_json(rep), out / "non_localization.json");
        m["passed"] = rep.passed;
    } else {
        throw InvalidSpec("unknown experiment '" + name + "'");
    }
    write_json(m, out / "manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heat-kernel concentration toolkit for Neumann localization"};
    app.require_subcommand(1);

    Common c;
    auto* build = app.add_subcommand("build", "build a domain and export its polygon");
    auto* spectrum = app.add_subcommand("spectrum", "lowest Neumann eigenpairs");
    auto* concentrate = app.add_subcommand("concentrate", "Q(t, x) field");
    auto* walk = app.add_subcommand("walk", "Monte Carlo collision estimate of Q(t, x)");
    auto* experiment =
        app.add_subcommand("experiment", "cone | slit | disk_chain | non_localization");
    std::string experiment_name;
    experiment->add_option("name", experiment_name, "experiment name")->required();
    app.set_help_flag("--help", "print help");  // frees -h / --h for grid spacing
    for (CLI::App* cmd : {build, spectrum, concentrate, walk, experiment}) {
        cmd->set_help_flag("--help", "print help");
        add_common(cmd, c);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(c);
        if (spectrum->parsed()) return run_spectrum(c);
        if (concentrate->parsed()) return run_concentrate(c);
        if (walk->parsed()) return run_walk(c);
        if (experiment->parsed()) return run_experiment(experiment_name, c);
    } catch (const NoConvergence& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const WalkRunaway& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}

#include "qloc/io.hpp"

#include <fstream>

#include "qloc/errors.hpp"

namespace qloc {

using nlohmann::json;

namespace {

json ring_to_json(const Ring& r) {
    json a = json::array();
    for (const Point& p : r) a.push_back({p.x, p.y});
    return a;
}

Ring ring_from_json(const json& a) {
    Ring r;
    for (const auto& p : a) r.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return r;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    return out;
}

}  // namespace

json spec_to_json(const DomainSpec& spec) {
    json params;
    struct V {
        json& params;
        void operator()(const RawPolygonParams& p) const {
            params["outer"] = ring_to_json(p.outer);
            json holes = json::array();
            for (const Ring& h : p.holes) holes.push_back(ring_to_json(h));
            params["holes"] = holes;
        }
        void operator()(const SpikedSquareParams& p) const {
            params = {{"side", p.side},
                      {"n_spikes", p.n_spikes},
                      {"spike_depth", p.spike_depth},
                      {"spike_angle", p.spike_angle},
                      {"jitter_seed", p.jitter_seed}};
        }
        void operator()(const SlitBoxParams& p) const {
            params = {{"width", p.width},
                      {"height", p.height},
                      {"slit_length", p.slit_length},
                      {"slit_thickness", p.slit_thickness},
                      {"gap", p.gap}};
        }
        void operator()(const DiskChainParams& p) const {
            params = {{"n_disks", p.n_disks},
                      {"r0", p.r0},
                      {"neck_floor", p.neck_floor},
                      {"neck_length", p.neck_length},
                      {"m_poly", p.m_poly}};
        }
        void operator()(const WedgeParams& p) const {
            params = {{"angle", p.angle}, {"side", p.side}, {"m_arc", p.m_arc}};
        }
    };
    std::visit(V{params}, spec);
    return json{{"variant", variant_name(spec)}, {"params", params}};
}

DomainSpec spec_from_json(const json& j) {
    try {
        const std::string variant = j.at("variant").get<std::string>();
        const json& p = j.at("params");
        if (variant == "raw_polygon") {
            RawPolygonParams r;
            r.outer = ring_from_json(p.at("outer"));
            if (p.contains("holes"))
                for (const auto& h : p["holes"]) r.holes.push_back(ring_from_json(h));
            return r;
        }
        if (variant == "spiked_square") {
            SpikedSquareParams r;
            r.side = p.value("side", r.side);
            r.n_spikes = p.value("n_spikes", r.n_spikes);
            r.spike_depth = p.value("spike_depth", r.spike_depth);
            r.spike_angle = p.value("spike_angle", r.spike_angle);
            r.jitter_seed = p.value("jitter_seed", r.jitter_seed);
            return r;
        }
        if (variant == "slit_box") {
            SlitBoxParams r;
            r.width = p.value("width", r.width);
            r.height = p.value("height", r.height);
            r.slit_length = p.value("slit_length", r.slit_length);
            r.slit_thickness = p.value("slit_thickness", r.slit_thickness);
            r.gap = p.value("gap", r.gap);
            return r;
        }
        if (variant == "disk_chain") {
            DiskChainParams r;
            r.n_disks = p.value("n_disks", r.n_disks);
            r.r0 = p.value("r0", r.r0);
            r.neck_floor = p.value("neck_floor", r.neck_floor);
            r.neck_length = p.value("neck_length", r.neck_length);
            r.m_poly = p.value("m_poly", r.m_poly);
            return r;
        }
        if (variant == "wedge") {
            WedgeParams r;
            r.angle = p.value("angle", r.angle);
            r.side = p.value("side", r.side);
            r.m_arc = p.value("m_arc", r.m_arc);
            return r;
        }
        throw InvalidSpec("unknown variant '" + variant + "'");
    } catch (const json::exception& e) {
        throw InvalidSpec(std::string("malformed spec JSON: ") + e.what());
    }
}

DomainSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidSpec(std::string("malformed spec JSON: ") + e.what());
    }
    return spec_from_json(j);
}

void write_polygon_csv(const PolygonDomain& domain, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "ring_id,vertex_index,x,y\n";
    auto dump = [&](const Ring& r, int id) {
        for (std::size_t v = 0; v < r.size(); ++v)
            out << id << ',' << v << ',' << r[v].x << ',' << r[v].y << '\n';
    };
    dump(domain.outer, 0);
    for (std::size_t k = 0; k < domain.holes.size(); ++k)
        dump(domain.holes[k], static_cast<int>(k) + 1);
}

void write_mask_csv(const GridMask& mask, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "i,j,dof_index\n";
    for (int d = 0; d < mask.N; ++d)
        out << mask.cells[d].first << ',' << mask.cells[d].second << ',' << d << '\n';
}

void write_operator_coo(const NeumannOperator& op, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (int i = 0; i < op.N; ++i)
        for (std::int64_t k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k)
            out << i << ' ' << op.col[k] << ' ' << op.val[k] << '\n';
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "k,mu,residual\n";
    for (int k = 0; k < spectrum.K; ++k)
        out << k << ',' << spectrum.mu[k] << ',' << spectrum.residual_norms[k] << '\n';
}

void write_field_csv(const ScalarField& field, const std::filesystem::path& path,
                     const json* sidecar, bool clip_negative) {
    if (!field.mask) throw IoError("field has no mask");
    auto out = open_out(path);
    out << "i,j,x,y,value\n";
    const GridMask& m = *field.mask;
    for (int d = 0; d < m.N; ++d) {
        const auto [i, j] = m.cells[d];
        const Point c = m.center(i, j);
        double v = field.values[d];
        if (clip_negative && v < 0) v = 0;
        out << i << ',' << j << ',' << c.x << ',' << c.y << ',' << v << '\n';
    }
    if (sidecar) write_json(*sidecar, path.string() + ".json");
}

json estimate_to_json(const CollisionEstimate& est, const WalkConfig& config) {
    return json{{"x", config.x},           {"t", config.t},
                {"n_pairs", est.n_pairs},  {"seed", config.seed},
                {"collisions", est.collisions}, {"q_hat", est.q_hat},
                {"std_error", est.std_error}};
}

void write_json(const json& j, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace qloc

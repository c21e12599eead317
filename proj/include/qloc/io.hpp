#ifndef QLOC_IO_HPP_
#define QLOC_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qloc/eigensolver.hpp"
#include "qloc/geometry.hpp"
#include "qloc/grid.hpp"
#include "qloc/heat.hpp"
#include "qloc/walker.hpp"

namespace qloc {

nlohmann::json spec_to_json(const DomainSpec& spec);
DomainSpec spec_from_json(const nlohmann::json& j);
DomainSpec load_spec(const std::filesystem::path& path);

// CSV columns ring_id, vertex_index, x, y; ring 0 is the outer ring.
void write_polygon_csv(const PolygonDomain& domain, const std::filesystem::path& path);

// CSV columns i, j, dof_index.
void write_mask_csv(const GridMask& mask, const std::filesystem::path& path);

// Coordinate triples "row col value", one entry per line.
void write_operator_coo(const NeumannOperator& op, const std::filesystem::path& path);

// CSV columns k, mu, residual.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

// CSV header i,j,x,y,value; optional JSON sidecar {t, K_used, tail_bound, mass}
// written next to it as <path>.json. clip_negative only affects the exported
// values, never in-memory data.
void write_field_csv(const ScalarField& field, const std::filesystem::path& path,
                     const nlohmann::json* sidecar = nullptr, bool clip_negative = false);

nlohmann::json estimate_to_json(const CollisionEstimate& est, const WalkConfig& config);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace qloc

#endif

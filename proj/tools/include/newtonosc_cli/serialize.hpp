#pragma once

#include "newtonosc/blocks.hpp"
#include "newtonosc/dyadpol.hpp"
#include "newtonosc/newton.hpp"
#include "newtonosc/puiseux.hpp"
#include "newtonosc/scaling.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace newtonosc::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "newton-osc/1";

struct Provenance {
    std::string command;
    std::size_t threads = 1;
    std::uint64_t seed = 0;
};

json provenance(const Provenance& p);
/// {"schema": ..., "command": ..., "provenance": {...}}
json document(const Provenance& p);

json to_json(const Rational& q);
json to_json(const NewtonPolygon& poly);
json to_json(const EdgeRate& r);
json to_json(const Degeneracy& d);
json to_json(const PuiseuxBranch& b);
json to_json(const BranchSet& b);
json to_json(const NormSample& s);
json to_json(const ScalingReport& r);
json to_json(const BlockEstimate& b);
json to_json(const BlockReport& r);
json to_json(const ExponentProfile& p);
json to_json(const LowerBoundSet& e);
json to_json(const LowerBoundReport& r);

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Writes one CSV row; fields are emitted verbatim.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
/// "# newton-osc/1 command=... threads=... seed=..."
void write_csv_provenance(std::ostream& out, const Provenance& p);

void write_norm_csv(std::ostream& out, const std::vector<NormSample>& samples);
void write_blocks_csv(std::ostream& out, const std::vector<BlockEstimate>& blocks);
void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& plot);

}  // namespace newtonosc::cli

#ifndef RDTODA_JSON_IO_HPP
#define RDTODA_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "rdtoda/expzeros.hpp"
#include "rdtoda/growth.hpp"
#include "rdtoda/rdiff.hpp"
#include "rdtoda/toda.hpp"
#include "rdtoda/weights.hpp"

namespace rdtoda {

using Json = nlohmann::json;

RDifferential rdiff_from_json(const Json& j);
Json rdiff_to_json(const RDifferential& q);

Json moduli_to_json(const ModuliDescriptor& d);

ChartGrid grid_from_json(const Json& j);

ExpSum expsum_from_json(const Json& j);

/// {"kind": "b"|"a", "r": int, "m": int, "values": [...]}.
struct WeightSpec {
    bool pole = true;
    int r = 2;
    int m = 1;
    std::vector<double> values;
};
WeightSpec weights_from_json(const Json& j);

Json weight_fit_to_json(const WeightFit& fit);

/// Fixed 17-significant-digit decimal rendering (deterministic output).
std::string format_double(double v);

void write_state_csv(const TodaState& state, const std::string& path);
TodaState read_state_csv(const std::string& path);

std::string file_hash(const std::string& path); // FNV-1a 64 over file bytes
Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

} // namespace rdtoda

#endif

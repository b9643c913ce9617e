#ifndef FANOCHAIN_IO_HPP
#define FANOCHAIN_IO_HPP

#include "fanochain/analytic.hpp"
#include "fanochain/oracle.hpp"
#include "fanochain/sweep.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace fanochain {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal separator regardless of locale;
// round-trips every finite double exactly.
std::string format_double(double value);

// Optional leading column replayed on every row (used by secondary-axis sweeps).
struct CsvPrefix {
    std::string name;
    double value = 0.0;
};

// Columns: omega,k,T,R,sum,phase_wrapped,phase_unwrapped,flags, plus
// T_oracle,R_oracle,dev_t,dev_r when the sweep carried oracle data.
void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const std::optional<CsvPrefix>& prefix = std::nullopt,
                     bool header = true);
Json sweep_to_json(const SweepResult& result);

void write_resonances_csv(std::ostream& out, const ResonanceSet& set);
Json resonances_to_json(const ResonanceSet& set);

void write_solution_csv(std::ostream& out, const ScatteringSolution& solution);
Json solution_to_json(const ScatteringSolution& solution);

void write_compare_csv(std::ostream& out, const CompareReport& report);
Json compare_to_json(const CompareReport& report);

// Parameter echo for the `meta` block of every JSON document.
Json model_to_json(const ScatteringModel& model);

} // namespace fanochain

#endif

#ifndef ORLICZ_IO_HPP_
#define ORLICZ_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orlicz/certify.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/subspace.hpp"
#include "orlicz/uniqueness.hpp"

namespace orlicz
{

// JSON records. Doubles are written with round-trip precision; non-finite
// values become null.

nlohmann::json to_json(const BestApproxSolution & s);
BestApproxSolution solution_from_json(const nlohmann::json & j);

nlohmann::json to_json(const Certificate & c);
nlohmann::json to_json(const UniquenessReport & r);
nlohmann::json to_json(const NonUniqWitness & w);
nlohmann::json to_json(const StructureReport & r);
nlohmann::json to_json(const AffineSegment & a);

/// Explicit generator form: [{"start", "origin", "terms": [[coef, exponent], ...]}, ...]
nlohmann::json generator_to_json(const Generator & g);
Generator generator_from_json(const nlohmann::json & j);

/// Two-column CSV "node,value".
void write_grid_function_csv(std::ostream & out, const GridFunction & g);
/// Reads "node,value" rows (optional header) whose nodes must match the grid.
GridFunction read_grid_function_csv(std::istream & in, GridPtr grid);

/// One row per node, one column per basis element; an optional first line of
/// non-numeric labels names the columns.
Subspace read_basis_csv(std::istream & in, GridPtr grid);

/// "node,f,P,residual" table.
void write_residual_csv(std::ostream & out, const GridFunction & f, const GridFunction & p);

/// "instance,theorem_tag,verdict,diameter" rows.
void write_suite_summary_csv(std::ostream & out, const std::vector<UniquenessReport> & reports);

}  // namespace orlicz

#endif  // ORLICZ_IO_HPP_

#include "orlicz/io.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

namespace
{

using nlohmann::json;

json number(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json vector_json(const Coefficients & c)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    out.push_back(number(c[i]));
  }
  return out;
}

Coefficients vector_from_json(const json & j)
{
  Coefficients c(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  }
  return c;
}

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  return cells;
}

bool parse_double(const std::string & text, double & out)
{
  if (text.empty()) {
    return false;
  }
  std::size_t used = 0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception &) {
    return false;
  }
  return used == text.size();
}

// Numeric rows of a CSV stream; a leading non-numeric row is returned as header.
std::vector<std::vector<double>> read_numeric_rows(
  std::istream & in, std::vector<std::string> * header)
{
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto & cell : cells) {
      double v = 0.0;
      if (!parse_double(cell, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && header != nullptr && header->empty()) {
        *header = cells;
        continue;
      }
      throw PreconditionError("CSV line " + std::to_string(line_no) + " is not numeric");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const BestApproxSolution & s)
{
  return {
    {"coeffs", vector_json(s.coeffs)},
    {"modular_value", number(s.modular_value)},
    {"iterations", s.iterations},
    {"converged", s.converged},
    {"start_id", s.start_id},
    {"gap", number(s.gap)},
  };
}

BestApproxSolution solution_from_json(const json & j)
{
  BestApproxSolution s;
  s.coeffs = vector_from_json(j.at("coeffs"));
  s.modular_value = j.at("modular_value").get<double>();
  s.iterations = j.at("iterations").get<int>();
  s.converged = j.at("converged").get<bool>();
  s.start_id = j.at("start_id").get<int>();
  s.gap = j.contains("gap") && !j.at("gap").is_null() ? j.at("gap").get<double>() :
    std::numeric_limits<double>::infinity();
  return s;
}

json to_json(const Certificate & c)
{
  json dirs = json::array();
  for (const auto & d : c.directions) {
    dirs.push_back(
    {
      {"label", d.label},
      {"coeffs", vector_json(d.coeffs)},
      {"lhs", number(d.lhs)},
      {"rhs", number(d.rhs)},
      {"margin", number(d.margin)},
    });
  }
  return {
    {"verdict", c.verdict},
    {"tol", number(c.tol)},
    {"min_margin", number(c.min_margin())},
    {"n_directions", c.directions.size()},
    {"directions", std::move(dirs)},
  };
}

json to_json(const UniquenessReport & r)
{
  json clusters = json::array();
  for (const auto & c : r.clusters) {
    clusters.push_back(
    {
      {"representative", vector_json(c.representative)},
      {"modular_value", number(c.representative_modular)},
      {"radius", number(c.radius)},
      {"members", c.start_ids.size()},
      {"start_ids", c.start_ids},
      {"certified", c.certified},
    });
  }
  json starts = json::array();
  for (const auto & s : r.starts) {
    starts.push_back(to_json(s));
  }
  return {
    {"instance", r.instance},
    {"theorem_tag", r.theorem_tag},
    {"verdict", to_string(r.verdict)},
    {"diameter", number(r.diameter)},
    {"clusters", std::move(clusters)},
    {"starts", std::move(starts)},
  };
}

json to_json(const NonUniqWitness & w)
{
  json values = json::array();
  for (const double v : w.modular_values) {
    values.push_back(number(v));
  }
  return {
    {"p3", vector_json(w.p3)},
    {"epsilons", w.epsilons},
    {"modular_h", number(w.modular_h)},
    {"modular_values", std::move(values)},
    {"modular_gap", number(w.modular_gap)},
    {"slope", number(w.slope)},
    {"linear_end", number(w.linear_end)},
  };
}

json to_json(const StructureReport & r)
{
  auto witness = [](const std::optional<StructureWitness> & w) -> json {
      if (!w) {
        return nullptr;
      }
      return {{"coeffs", vector_json(w->coeffs)}, {"node", w->node}, {"count", number(w->count)}};
    };
  return {
    {"tchebycheff", to_string(r.tchebycheff)},
    {"tchebycheff_witness", witness(r.tchebycheff_witness)},
    {"one_space_witness", r.one_space_witness ? vector_json(*r.one_space_witness) : json(nullptr)},
    {"zero_space", to_string(r.zero_space)},
    {"zero_space_witness", witness(r.zero_space_witness)},
    {"trials", r.trials},
  };
}

json to_json(const AffineSegment & a)
{
  return {{"lo", number(a.lo)}, {"hi", number(a.hi)}, {"slope", number(a.slope)},
    {"intercept", number(a.intercept)}};
}

json generator_to_json(const Generator & g)
{
  json out = json::array();
  for (const auto & seg : g.segments()) {
    json terms = json::array();
    for (const auto & t : seg.piece.terms()) {
      terms.push_back({t.coef, t.exponent});
    }
    out.push_back({{"start", seg.start}, {"origin", seg.piece.origin()}, {"terms", terms}});
  }
  return out;
}

Generator generator_from_json(const json & j)
{
  if (!j.is_array()) {
    throw PreconditionError("generator segments must be a list");
  }
  std::vector<GeneratorSegment> segments;
  for (const auto & seg : j) {
    for (const auto & [key, value] : seg.items()) {
      if (key != "start" && key != "origin" && key != "terms") {
        throw PreconditionError("unknown generator segment field '" + key + "'");
      }
    }
    const double start = seg.at("start").get<double>();
    const double origin = seg.contains("origin") ? seg.at("origin").get<double>() : start;
    std::vector<PowerTerm> terms;
    for (const auto & t : seg.at("terms")) {
      if (!t.is_array() || t.size() != 2) {
        throw PreconditionError("generator terms are [coef, exponent] pairs");
      }
      terms.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
    }
    segments.push_back({start, Piece(origin, std::move(terms))});
  }
  return Generator(std::move(segments));
}

void write_grid_function_csv(std::ostream & out, const GridFunction & g)
{
  out << "node,value\n";
  const auto nodes = g.grid().nodes();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_double(nodes[i]) << ',' << format_double(g[i]) << '\n';
  }
}

GridFunction read_grid_function_csv(std::istream & in, GridPtr grid)
{
  std::vector<std::string> header;
  const auto rows = read_numeric_rows(in, &header);
  if (rows.size() != grid->size()) {
    throw PreconditionError(
            "CSV has " + std::to_string(rows.size()) + " rows for " +
            std::to_string(grid->size()) + " grid nodes");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  const auto nodes = grid->nodes();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw PreconditionError("grid function CSV rows need exactly two columns");
    }
    if (std::abs(rows[i][0] - nodes[i]) > 1e-9 * (1.0 + std::abs(nodes[i]))) {
      throw PreconditionError("CSV node " + std::to_string(i) + " does not match the grid");
    }
    values.push_back(rows[i][1]);
  }
  return GridFunction(std::move(grid), std::move(values));
}

Subspace read_basis_csv(std::istream & in, GridPtr grid)
{
  std::vector<std::string> header;
  const auto rows = read_numeric_rows(in, &header);
  if (rows.size() != grid->size()) {
    throw PreconditionError(
            "basis CSV has " + std::to_string(rows.size()) + " rows for " +
            std::to_string(grid->size()) + " grid nodes");
  }
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) {
      throw PreconditionError("basis CSV rows have differing column counts");
    }
    for (std::size_t j = 0; j < n; ++j) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (!header.empty() && header.size() != n) {
    throw PreconditionError("basis CSV header does not match the column count");
  }
  return Subspace(std::move(grid), std::move(basis), std::move(header));
}

void write_residual_csv(std::ostream & out, const GridFunction & f, const GridFunction & p)
{
  require_same_grid(f, p);
  out << "node,f,P,residual\n";
  const auto nodes = f.grid().nodes();
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << format_double(nodes[i]) << ',' << format_double(f[i]) << ',' << format_double(p[i]) <<
      ',' << format_double(f[i] - p[i]) << '\n';
  }
}

void write_suite_summary_csv(std::ostream & out, const std::vector<UniquenessReport> & reports)
{
  out << "instance,theorem_tag,verdict,diameter\n";
  for (const auto & r : reports) {
    out << r.instance << ',' << r.theorem_tag << ',' << to_string(r.verdict) << ',' <<
      format_double(r.diameter) << '\n';
  }
}

}  // namespace orlicz

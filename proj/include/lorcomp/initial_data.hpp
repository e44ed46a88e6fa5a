#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lorcomp/common.hpp"

namespace lorcomp {

/// One weighted cell of a discretized Cauchy hypersurface. `weight` is the
/// induced n-area of the cell, `mean_curvature` the value of H on it, and
/// `k_norm` the optional pointwise tensor norm |K|.
struct Cell {
  std::string id;
  double weight = 0.0;
  double mean_curvature = 0.0;
  std::optional<double> k_norm;
};

/// Per-cell scalar fields derivable from a data set.
enum class Field { MeanCurvature, PositiveMeanCurvature, SecondFormNorm };

/// Relative slack allowed in the |H| <= n |K| consistency check, so data
/// exported from floating-point pipelines is not rejected.
inline constexpr double kConsistencyTol = 1e-9;

/// Immutable weighted-cell model of an initial data set (Sigma, h, K).
/// Fields are piecewise constant per cell; no mesh connectivity is stored
/// since every quantity computed from it is an integral against the cell
/// measure. Instances are read-only after construction and safe to share
/// across threads.
class InitialDataSet {
 public:
  InitialDataSet(int n, std::vector<Cell> cells, std::string label = {})
      : n_(n), label_(std::move(label)), cells_(std::move(cells)) {
    if (n_ < 2) throw std::invalid_argument("InitialDataSet: dimension must be >= 2");
    std::unordered_set<std::string_view> seen;
    seen.reserve(cells_.size());
    std::vector<double> weights;
    weights.reserve(cells_.size());
    has_k_ = true;
    for (const Cell& c : cells_) {
      if (c.id.empty() || c.id.find(',') != std::string::npos ||
          c.id.find('\n') != std::string::npos || c.id.find('\r') != std::string::npos)
        throw std::invalid_argument(
            "InitialDataSet: cell ids must be non-empty and free of commas/newlines");
      if (!seen.insert(c.id).second)
        throw std::invalid_argument("InitialDataSet: duplicate cell id '" + c.id + "'");
      if (!std::isfinite(c.weight) || !(c.weight > 0.0))
        throw std::invalid_argument("InitialDataSet: cell '" + c.id +
                                    "': weight must be finite and > 0");
      if (!std::isfinite(c.mean_curvature))
        throw std::invalid_argument("InitialDataSet: cell '" + c.id + "': H must be finite");
      if (c.k_norm) {
        if (!std::isfinite(*c.k_norm) || !(*c.k_norm >= 0.0))
          throw std::invalid_argument("InitialDataSet: cell '" + c.id +
                                      "': |K| must be finite and >= 0");
        if (std::abs(c.mean_curvature) > n_ * *c.k_norm * (1.0 + kConsistencyTol))
          throw std::invalid_argument("InitialDataSet: cell '" + c.id +
                                      "': |H| exceeds n*|K| (inconsistent data)");
      } else {
        has_k_ = false;
      }
      max_h_plus_ = std::max(max_h_plus_, std::max(c.mean_curvature, 0.0));
      weights.push_back(c.weight);
    }
    total_area_ = detail::pairwise_sum(weights);
    if (!std::isfinite(total_area_))
      throw std::invalid_argument("InitialDataSet: total area must be finite");
  }

  int dimension() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  double total_area() const noexcept { return total_area_; }

  /// True when every cell carries |K| (vacuously true for the empty set).
  bool has_k_norm() const noexcept { return has_k_; }

  /// sup of the positive part of H over all cells; 0 for the empty set.
  double max_h_plus() const noexcept { return max_h_plus_; }

 private:
  int n_;
  std::string label_;
  std::vector<Cell> cells_;
  double total_area_ = 0.0;
  double max_h_plus_ = 0.0;
  bool has_k_ = true;
};

namespace detail {

inline double field_value(const Cell& c, Field field) {
  switch (field) {
    case Field::MeanCurvature:
      return c.mean_curvature;
    case Field::PositiveMeanCurvature:
      return std::max(c.mean_curvature, 0.0);
    case Field::SecondFormNorm:
      return *c.k_norm;
  }
  return 0.0;
}

/// sum over cells of |field|^k * weight, k integer, pairwise-reduced.
inline double weighted_power_sum(const InitialDataSet& data, Field field, int k) {
  std::vector<double> terms;
  terms.reserve(data.size());
  for (const Cell& c : data.cells())
    terms.push_back(pow_int(std::abs(field_value(c, field)), k) * c.weight);
  return pairwise_sum(terms);
}

}  // namespace detail

/// Positive part of the mean curvature field, one value per cell in the
/// data set's cell order.
inline std::vector<double> h_plus(const InitialDataSet& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const Cell& c : data.cells()) out.push_back(std::max(c.mean_curvature, 0.0));
  return out;
}

/// (sum over cells of |field|^p weight)^{1/p}. Requires p >= 1 and, for the
/// |K| field, that every cell carries |K|.
inline double lp_norm(const InitialDataSet& data, Field field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (field == Field::SecondFormNorm && !data.has_k_norm())
    throw std::invalid_argument("lp_norm: |K| requested but not present on every cell");
  std::vector<double> terms;
  terms.reserve(data.size());
  for (const Cell& c : data.cells())
    terms.push_back(std::pow(std::abs(detail::field_value(c, field)), p) * c.weight);
  return std::pow(detail::pairwise_sum(terms), 1.0 / p);
}

/// Sub-data-set of the cells whose id the predicate keeps. An empty selection
/// yields an empty set (total_area 0); the bound estimators then return 0.
template <class Pred>
InitialDataSet restrict_cells(const InitialDataSet& data, Pred&& keep) {
  std::vector<Cell> out;
  for (const Cell& c : data.cells())
    if (keep(c.id)) out.push_back(c);
  return InitialDataSet(data.dimension(), std::move(out), data.label());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_csv_double(std::string_view raw, std::size_t line_no,
                               const char* what) {
  const std::string_view s = trim(raw);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("row " + std::to_string(line_no) + ": bad " + what + " value '" +
                     std::string(s) + "'");
  return value;
}

}  // namespace detail

/// Reads the cell CSV schema: header `id,weight,H,K` (the K column optional),
/// rows of comma-separated values, blank K meaning absent. A sidecar comment
/// line `# n=<int>` supplies the dimension unless `dimension` is given
/// explicitly, in which case the argument wins. Errors name the offending row.
inline InitialDataSet load_initial_data(std::istream& in,
                                        std::optional<int> dimension = {},
                                        std::string label = {}) {
  std::optional<int> sidecar_n;
  std::vector<Cell> cells;
  std::vector<std::size_t> row_of_cell;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_k_col = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      sv.remove_prefix(1);
      sv = detail::trim(sv);
      if (sv.substr(0, 2) == "n=") {
        int n = 0;
        const auto* end = sv.data() + sv.size();
        const auto res = std::from_chars(sv.data() + 2, end, n);
        if (res.ec != std::errc{} || res.ptr != end)
          throw ParseError("row " + std::to_string(line_no) + ": bad '# n=<int>' line");
        sidecar_n = n;
      }
      continue;
    }
    if (!header_seen) {
      std::string compact;
      for (char ch : sv)
        if (ch != ' ' && ch != '\t') compact.push_back(ch);
      if (compact == "id,weight,H,K")
        has_k_col = true;
      else if (compact == "id,weight,H")
        has_k_col = false;
      else
        throw ParseError("row " + std::to_string(line_no) +
                         ": expected header 'id,weight,H[,K]', got '" + std::string(sv) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_csv(sv);
    const std::size_t want = has_k_col ? 4u : 3u;
    if (fields.size() != want && !(has_k_col && fields.size() == 3))
      throw ParseError("row " + std::to_string(line_no) + ": expected " +
                       std::to_string(want) + " fields, got " + std::to_string(fields.size()));
    Cell c;
    c.id = std::string(detail::trim(fields[0]));
    c.weight = detail::parse_csv_double(fields[1], line_no, "weight");
    c.mean_curvature = detail::parse_csv_double(fields[2], line_no, "H");
    if (has_k_col && fields.size() == 4 && !detail::trim(fields[3]).empty())
      c.k_norm = detail::parse_csv_double(fields[3], line_no, "K");
    cells.push_back(std::move(c));
    row_of_cell.push_back(line_no);
  }

  if (!header_seen) throw ParseError("missing header row 'id,weight,H[,K]'");
  if (cells.empty()) throw ParseError("no data rows");
  if (!dimension && !sidecar_n)
    throw ParseError("dimension not given: add a '# n=<int>' line or pass it explicitly");
  const int n = dimension ? *dimension : *sidecar_n;

  // Validate row by row so errors can name their source line; the
  // InitialDataSet constructor re-checks the same invariants.
  std::unordered_map<std::string_view, std::size_t> first_row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const std::string where = "row " + std::to_string(row_of_cell[i]) + " (id '" + c.id + "')";
    if (c.id.empty()) throw ParseError(where + ": empty id");
    const auto [it, fresh] = first_row.emplace(c.id, row_of_cell[i]);
    if (!fresh)
      throw ParseError(where + ": duplicate of row " + std::to_string(it->second));
    if (!std::isfinite(c.weight) || !(c.weight > 0.0))
      throw ParseError(where + ": weight must be finite and > 0");
    if (!std::isfinite(c.mean_curvature)) throw ParseError(where + ": H must be finite");
    if (c.k_norm) {
      if (!std::isfinite(*c.k_norm) || !(*c.k_norm >= 0.0))
        throw ParseError(where + ": K must be finite and >= 0");
      if (std::abs(c.mean_curvature) > n * *c.k_norm * (1.0 + kConsistencyTol))
        throw ParseError(where + ": |H| exceeds n*|K| (inconsistent data)");
    }
  }
  return InitialDataSet(n, std::move(cells), std::move(label));
}

}  // namespace lorcomp

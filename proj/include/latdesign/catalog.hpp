#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latdesign/gram.hpp"
#include "latdesign/modular.hpp"

namespace latdesign {

/// The strongly eutactic lattices of dimensions 2 to 7 from the
/// Martinet-Batut classification, with the modular data (dim M, pivot
/// exponent N) computed for them.  Dimension 7 is a partial list.
class Catalog {
 public:
  explicit Catalog(std::vector<LatticeDescriptor> entries) : entries_(std::move(entries)) {}

  const std::vector<LatticeDescriptor>& entries() const noexcept { return entries_; }
  const LatticeDescriptor* find(const std::string& name) const;
  /// Entries of dimension n, in table order.
  std::vector<const LatticeDescriptor*> of_dimension(std::size_t n) const;

 private:
  std::vector<LatticeDescriptor> entries_;
};

/// Builds the embedded catalog; every Gram matrix is validated.
const Catalog& load_catalog();

struct TableRow {
  std::string name;
  std::size_t dim = 0;
  std::optional<std::string> traditional_name;
  std::optional<Verdict> verdict;
  /// Every listed lattice is fully critical.
  Verdict expected = Verdict::FullyCritical;
  std::uint64_t bound_used = 0;
  std::uint64_t sturm_B = 0;
  std::optional<int> reference_N;
  std::uint64_t level = 0;
  bool incomplete_table = false;
  std::size_t vectors_enumerated = 0;
  double seconds = 0;
  /// Set when the entry could not be run (budget, domain error).
  std::optional<std::string> error;

  bool matches() const { return verdict == expected; }
};

struct TableOptions {
  /// Use the printed pivot exponent N instead of the Sturm bound.
  bool fast_paper_bound = false;
  unsigned threads = 1;
  EnumerationLimits limits{kStreamingBudget};
};

struct TableSummary {
  std::vector<TableRow> rows;
  std::size_t mismatches() const;
};

TableSummary reproduce_tables(const std::set<std::size_t>& dims, const TableOptions& options = {});

/// One line per row, aligned columns.
std::string format_table(const TableSummary& summary);

}  // namespace latdesign

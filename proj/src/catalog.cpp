#include "latdesign/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "latdesign/errors.hpp"

namespace latdesign {

namespace {

struct RawEntry {
  const char* name;
  int dim_m;
  int pivot_n;
  const char* traditional;
  const char* note;
  std::vector<std::vector<int>> gram;
};

// Rows as printed, except where `note` records a correction.
const std::vector<RawEntry>& raw_entries() {
  static const std::vector<RawEntry> entries = {
    {"sta2", 2, 1, "Z^2", nullptr,
     {{1, 0},
      {0, 1}}},
    {"sta3", 2, 1, "A_2", nullptr,
     {{2, 1},
      {1, 2}}},
    {"stc4", 3, 2, "Z^4", nullptr,
     {{1, 0, 0, 0},
      {0, 1, 0, 0},
      {0, 0, 1, 0},
      {0, 0, 0, 1}}},
    {"stc5", 5, 4, "A_2^*", nullptr,
     {{4, -1, -1, -1},
      {-1, 4, -1, -1},
      {-1, -1, 4, -1},
      {-1, -1, -1, 4}}},
    {"stc6", 2, 1, "A_2 ⊥ A_2", nullptr,
     {{2, 1, 0, 0},
      {1, 2, 0, 0},
      {0, 0, 2, 1},
      {0, 0, 1, 2}}},
    {"stc9", 13, 12, "A_2 ⊗ A_2", nullptr,
     {{4, -2, -2, 1},
      {-2, 4, 1, -2},
      {-2, 1, 4, -2},
      {1, -2, -2, 4}}},
    {"stc10", 5, 4, "A_4 = P_4^2", nullptr,
     {{2, 1, 1, 1},
      {1, 2, 1, 1},
      {1, 1, 2, 1},
      {1, 1, 1, 2}}},
    {"stc12", 2, 1, "D_4 = P_4^1", nullptr,
     {{2, 0, 1, 1},
      {0, 2, 1, 1},
      {1, 1, 2, 1},
      {1, 1, 1, 2}}},
    {"ste6a", 3, 2, "Z^6", nullptr,
     {{1, 0, 0, 0, 0, 0},
      {0, 1, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0},
      {0, 0, 0, 1, 0, 0},
      {0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 1}}},
    {"ste6c", 3, 2, "D_6^*", nullptr,
     {{3, 1, 1, 1, 1, 1},
      {1, 2, 0, 0, 0, 0},
      {1, 0, 2, 0, 0, 0},
      {1, 0, 0, 2, 0, 0},
      {1, 0, 0, 0, 2, 0},
      {1, 0, 0, 0, 0, 2}}},
    {"ste7", 11, 10, "A_6^*", nullptr,
     {{6, -1, -1, -1, -1, -1},
      {-1, 6, -1, -1, -1, -1},
      {-1, -1, 6, -1, -1, -1},
      {-1, -1, -1, 6, -1, -1},
      {-1, -1, -1, -1, 6, -1},
      {-1, -1, -1, -1, -1, 6}}},
    {"ste8", 11, 10, "A_3^* ⊥ A_3^*", nullptr,
     {{3, -1, -1, 0, 0, 0},
      {-1, 3, -1, 0, 0, 0},
      {-1, -1, 3, 0, 0, 0},
      {0, 0, 0, 3, -1, -1},
      {0, 0, 0, -1, 3, -1},
      {0, 0, 0, -1, -1, 3}}},
    {"ste9", 2, 1, "A_2 ⊥ A_2 ⊥ A_2", nullptr,
     {{2, 1, 0, 0, 0, 0},
      {1, 2, 0, 0, 0, 0},
      {0, 0, 2, 1, 0, 0},
      {0, 0, 1, 2, 0, 0},
      {0, 0, 0, 0, 2, 1},
      {0, 0, 0, 0, 1, 2}}},
    {"ste10a", 58, 60, "Ext^2(A_4)", nullptr,
     {{3, 1, 1, 1, 1, 0},
      {1, 3, -1, 1, 0, 1},
      {1, -1, 3, 0, 1, -1},
      {1, 1, 0, 3, -1, -1},
      {1, 0, 1, -1, 3, 1},
      {0, 1, -1, -1, 1, 3}}},
    {"ste12a", 11, 10, "A_3 ⊥ A_3", nullptr,
     {{2, -1, -1, 0, 0, 0},
      {-1, 2, 1, 0, 0, 0},
      {-1, 1, 2, 0, 0, 0},
      {0, 0, 0, 2, -1, -1},
      {0, 0, 0, -1, 2, 1},
      {0, 0, 0, -1, 1, 2}}},
    {"ste12b", 58, 60, "Ext^2(A_4)_even^*", nullptr,
     {{5, -2, 2, 2, -2, 1},
      {-2, 5, 1, -1, -1, 0},
      {2, 1, 5, -1, -1, 2},
      {2, -1, -1, 5, -1, -2},
      {-2, -1, -1, -1, 5, -2},
      {1, 0, 2, -2, -2, 5}}},
    {"ste12c", 21, 20, "A_2 ⊗ A_3^*", "printed row 6 entry (6,4) = -1 corrected to -2 for symmetry",
     {{6, 3, -2, -1, -2, -1},
      {3, 6, -1, -2, -1, -2},
      {-2, -1, 6, 3, -2, -1},
      {-1, -2, 3, 6, -1, -2},
      {-2, -1, -2, -1, 6, 3},
      {-1, -2, -1, -2, 3, 6}}},
    {"ste15a", 58, 60, "Ext^2(A_4)_even", nullptr,
     {{4, -2, -1, 0, 1, -2},
      {-2, 4, -1, -1, -2, 1},
      {-1, -1, 4, -1, 0, 1},
      {0, -1, -1, 4, 2, 1},
      {1, -2, 0, 2, 4, -1},
      {-2, 1, 1, 1, -1, 4}}},
    {"ste16", 39, 40, "D_6^+", nullptr,
     {{3, 1, 1, -1, 1, 1},
      {1, 3, -1, -1, -1, 1},
      {1, -1, 3, -1, 1, -1},
      {-1, -1, -1, 3, -1, -1},
      {1, -1, 1, -1, 3, 1},
      {1, 1, -1, -1, 1, 3}}},
    {"ste18a", 21, 20, "A_2 ⊗ A_3", nullptr,
     {{4, 2, 2, 1, 2, 1},
      {2, 4, 1, 2, 1, 2},
      {2, 1, 4, 2, 2, 1},
      {1, 2, 2, 4, 1, 2},
      {2, 1, 2, 1, 4, 2},
      {1, 2, 1, 2, 2, 4}}},
    {"ste21a", 11, 10, "A_6", nullptr,
     {{2, 1, 1, 1, 1, 1},
      {1, 2, 1, 1, 1, 1},
      {1, 1, 2, 1, 1, 1},
      {1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 2}}},
    {"ste21b", 11, 10, "A_6^(2) = P_6^5", nullptr,
     {{4, -2, -2, -1, -2, -2},
      {-2, 4, 2, -1, 1, 2},
      {-2, 2, 4, 1, 2, 1},
      {-1, -1, 1, 4, 0, -1},
      {-2, 1, 2, 0, 4, 0},
      {-2, 2, 1, -1, 0, 4}}},
    {"ste27", 2, 1, "E_6^2 = P_6^2", nullptr,
     {{4, -2, -1, 1, 1, 1},
      {-2, 4, -1, -2, -2, -2},
      {-1, -1, 4, -1, -1, -1},
      {1, -2, -1, 4, 1, 1},
      {1, -2, -1, 1, 4, 1},
      {1, -2, -1, 1, 1, 4}}},
    {"ste30", 3, 2, "D_6 = P_6^3", nullptr,
     {{2, 0, 1, 1, 1, 1},
      {0, 2, 1, 1, 1, 1},
      {1, 1, 2, 1, 1, 1},
      {1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 2}}},
    {"ste36", 3, 2, "E_6 = P_6^1", nullptr,
     {{2, 0, 0, 1, 1, 1},
      {0, 2, 1, 1, 1, 1},
      {0, 1, 2, 1, 1, 1},
      {1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 2}}},
    {"stb3", 3, 2, "Z^3", nullptr,
     {{1, 0, 0},
      {0, 1, 0},
      {0, 0, 1}}},
    {"stb4", 9, 8, "A_3^*", nullptr,
     {{3, -1, -1},
      {-1, 3, -1},
      {-1, -1, 3}}},
    {"stb6", 9, 8, "A_3", nullptr,
     {{2, 1, 1},
      {1, 2, 1},
      {1, 1, 2}}},
    {"std5a", 3, 2, "Z^5", nullptr,
     {{1, 0, 0, 0, 0},
      {0, 1, 0, 0, 0},
      {0, 0, 1, 0, 0},
      {0, 0, 0, 1, 0},
      {0, 0, 0, 0, 1}}},
    {"std5b", 11, 10, "D_5^*", nullptr,
     {{5, 2, 2, 2, 2},
      {2, 4, 0, 0, 0},
      {2, 0, 4, 0, 0},
      {2, 0, 0, 4, 0},
      {2, 0, 0, 0, 4}}},
    {"std6", 21, 20, "A_5^*", nullptr,
     {{5, -1, -1, -1, -1},
      {-1, 5, -1, -1, -1},
      {-1, -1, 5, -1, -1},
      {-1, -1, -1, 5, -1},
      {-1, -1, -1, -1, 5}}},
    {"std10", 21, 20, "A_5^2", nullptr,
     {{3, -1, -1, -1, 1},
      {-1, 3, -1, -1, -1},
      {-1, -1, 3, 1, -1},
      {-1, -1, 1, 3, -1},
      {1, -1, -1, -1, 3}}},
    {"std15a", 21, 20, "A_5^2", nullptr,
     {{4, -2, -1, -2, 1},
      {-2, 4, -1, 1, -2},
      {-1, -1, 4, -1, -1},
      {-2, 1, -1, 4, 1},
      {1, -2, -1, 1, 4}}},
    {"std15b", 21, 20, "A_5^2", nullptr,
     {{2, 1, 1, 1, 1},
      {1, 2, 1, 1, 1},
      {1, 1, 2, 1, 1},
      {1, 1, 1, 2, 1},
      {1, 1, 1, 1, 2}}},
    {"std20", 11, 10, "A_5^2", nullptr,
     {{2, 0, 1, 1, 1},
      {0, 2, 1, 1, 1},
      {1, 1, 2, 1, 1},
      {1, 1, 1, 2, 1},
      {1, 1, 1, 1, 2}}},
    {"stf7a", 4, 3, "Z^7", nullptr,
     {{1, 0, 0, 0, 0, 0, 0},
      {0, 1, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0, 0},
      {0, 0, 0, 1, 0, 0, 0},
      {0, 0, 0, 0, 1, 0, 0},
      {0, 0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 0, 1}}},
    {"stf7d", 13, 12, "D_7^*", nullptr,
     {{7, 2, 2, 2, 2, 2, 2},
      {2, 4, 0, 0, 0, 0, 0},
      {2, 0, 4, 0, 0, 0, 0},
      {2, 0, 0, 4, 0, 0, 0},
      {2, 0, 0, 0, 4, 0, 0},
      {2, 0, 0, 0, 0, 4, 0},
      {2, 0, 0, 0, 0, 0, 4}}},
    {"stf8", 47, 46, "A_7^*", "printed diagonal entry -7 in row 4 corrected to 7",
     {{7, -1, -1, -1, -1, -1, -1},
      {-1, 7, -1, -1, -1, -1, -1},
      {-1, -1, 7, -1, -1, -1, -1},
      {-1, -1, -1, 7, -1, -1, -1},
      {-1, -1, -1, -1, 7, -1, -1},
      {-1, -1, -1, -1, -1, 7, -1},
      {-1, -1, -1, -1, -1, -1, 7}}},
    {"stf28a", 47, 46, "A_7", nullptr,
     {{2, 1, 1, 1, 1, 1, 1},
      {1, 2, 1, 1, 1, 1, 1},
      {1, 1, 2, 1, 1, 1, 1},
      {1, 1, 1, 2, 1, 1, 1},
      {1, 1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 1, 2}}},
    {"stf28b", 4, 3, "E_7^*", "printed matrix is not symmetric; lower triangle kept",
     {{3, 1, 1, -1, 1, 1, 1},
      {1, 3, -1, -1, 1, 1, 1},
      {1, -1, 3, -1, -1, -1, -1},
      {-1, -1, -1, 3, -1, -1, -1},
      {1, 1, -1, -1, 3, 1, 1},
      {1, 1, -1, -1, 1, 3, 1},
      {1, 1, -1, -1, 1, 1, 3}}},
    {"stf42", 13, 12, "P_7^*", nullptr,
     {{2, 0, 1, 1, 1, 1, 1},
      {0, 2, 1, 1, 1, 1, 1},
      {1, 1, 2, 1, 1, 1, 1},
      {1, 1, 1, 2, 1, 1, 1},
      {1, 1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 1, 2}}},
    {"stf63", 4, 3, "E_7", nullptr,
     {{2, 0, 0, 1, 1, 1, 1},
      {0, 2, 1, 1, 1, 1, 1},
      {0, 1, 2, 1, 1, 1, 1},
      {1, 1, 1, 2, 1, 1, 1},
      {1, 1, 1, 1, 2, 1, 1},
      {1, 1, 1, 1, 1, 2, 1},
      {1, 1, 1, 1, 1, 1, 2}}},
  };
  return entries;
}

Catalog build() {
  std::vector<LatticeDescriptor> out;
  for (const auto& e : raw_entries()) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : e.gram) rows.emplace_back(r.begin(), r.end());
    GramMatrix g = GramMatrix::from_rows(rows);
    const bool partial = g.dim() == 7;
    LatticeDescriptor d{e.name, std::move(g), e.dim_m, e.pivot_n, e.traditional, partial, std::nullopt};
    if (e.note) d.note = e.note;
    out.push_back(std::move(d));
  }
  return Catalog(std::move(out));
}

}  // namespace

const LatticeDescriptor* Catalog::find(const std::string& name) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.name == name; });
  return it == entries_.end() ? nullptr : &*it;
}

std::vector<const LatticeDescriptor*> Catalog::of_dimension(std::size_t n) const {
  std::vector<const LatticeDescriptor*> out;
  for (const auto& e : entries_)
    if (e.gram.dim() == n) out.push_back(&e);
  return out;
}

const Catalog& load_catalog() {
  static const Catalog catalog = [] {
    try {
      return build();
    } catch (const Error& e) {
      // Embedded data is part of the program; a bad row is a build defect.
      std::fprintf(stderr, "corrupted embedded catalog: %s\n", e.what());
      std::abort();
    }
  }();
  return catalog;
}

std::size_t TableSummary::mismatches() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.matches(); }));
}

TableSummary reproduce_tables(const std::set<std::size_t>& dims, const TableOptions& options) {
  for (auto d : dims)
    if (d < 2 || d > 7) throw DomainError("table dimensions must lie in 2..7");
  std::vector<const LatticeDescriptor*> todo;
  for (auto d : dims)
    for (const auto* e : load_catalog().of_dimension(d)) todo.push_back(e);

  TableSummary summary;
  summary.rows.resize(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const LatticeDescriptor& e = *todo[i];
      TableRow& row = summary.rows[i];
      row.name = e.label();
      row.dim = e.gram.dim();
      row.traditional_name = e.traditional_name;
      row.reference_N = e.reference_N;
      row.incomplete_table = e.incomplete_table;
      FullyCriticalOptions fc;
      fc.limits = options.limits;
      if (options.fast_paper_bound && e.reference_N) fc.override_bound = static_cast<std::uint64_t>(*e.reference_N);
      const auto start = std::chrono::steady_clock::now();
      try {
        const FullyCriticalReport r = fully_critical(e, fc);
        row.verdict = r.verdict;
        row.bound_used = r.bound_B;
        row.sturm_B = r.sturm_B;
        row.level = r.level;
        row.vectors_enumerated = r.vectors_enumerated;
        if (r.verdict == Verdict::Inconclusive) row.error = r.message;
      } catch (const Error& ex) {
        row.error = ex.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return summary;
}

std::string format_table(const TableSummary& summary) {
  std::ostringstream os;
  char buf[320];
  std::snprintf(buf, sizeof buf, "%-8s %3s %-22s %6s %6s %4s %6s %-15s %s\n", "name", "n", "traditional", "level",
                "sturm", "N", "bound", "verdict", "notes");
  os << buf;
  for (const auto& r : summary.rows) {
    std::string notes;
    if (r.reference_N && r.sturm_B < static_cast<std::uint64_t>(*r.reference_N)) notes += "sturm<N ";
    if (r.incomplete_table) notes += "catalog incomplete ";
    if (!r.matches()) notes += "MISMATCH ";
    if (r.error) notes += *r.error;
    // printf pads by bytes; widen the field by the UTF-8 continuation bytes.
    const std::string trad = r.traditional_name.value_or("");
    const int extra = static_cast<int>(std::count_if(trad.begin(), trad.end(), [](char c) { return (c & 0xC0) == 0x80; }));
    std::snprintf(buf, sizeof buf, "%-8s %3zu %-*s %6llu %6llu %4s %6llu %-15s %s\n", r.name.c_str(), r.dim, 22 + extra,
                  trad.c_str(), static_cast<unsigned long long>(r.level),
                  static_cast<unsigned long long>(r.sturm_B),
                  r.reference_N ? std::to_string(*r.reference_N).c_str() : "-",
                  static_cast<unsigned long long>(r.bound_used),
                  r.verdict ? to_string(*r.verdict).c_str() : "error", notes.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace latdesign

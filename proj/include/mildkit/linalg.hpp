#pragma once

// Gaussian elimination over F_p: a dense row-echelon kernel for small
// systems, and an incremental sparse echelon form for the graded quotient
// computations. Both honor a matrix-entry budget.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"

namespace mildkit {

/// Upper bound on matrix entries held at once by any elimination.
struct Budget {
  std::size_t max_entries = 2'000'000;

  /// Default budget, overridden by the MILDKIT_BUDGET environment variable.
  static Budget from_env() {
    Budget b;
    if (const char* s = std::getenv("MILDKIT_BUDGET")) {
      char* end = nullptr;
      auto v = std::strtoull(s, &end, 10);
      if (end == s || *end != '\0' || v == 0) throw InputError("MILDKIT_BUDGET must be a positive integer");
      b.max_entries = static_cast<std::size_t>(v);
    }
    return b;
  }

  void require(std::size_t entries, std::string_view what) const {
    if (entries > max_entries)
      throw BudgetError(std::string(what) + " needs " + std::to_string(entries) +
                        " matrix entries, budget is " + std::to_string(max_entries) +
                        "; raise budget or lower N");
  }
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Coeff& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  Coeff operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  void append_row(const std::vector<Coeff>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
    a_.insert(a_.end(), row.begin(), row.end());
    ++rows_;
  }

  std::vector<Coeff> row(std::size_t r) const {
    return {a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Coeff> a_;
};

/// Reduced row echelon form in place; returns pivot columns (one per
/// nonzero row, rows reordered so that row i has pivot pivots[i]).
inline std::vector<std::size_t> rref(DenseMatrix& m, const PrimeField& f) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(sel, k), m(r, k));
    Coeff inv = f.inv(m(r, c));
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) = f.mul(m(r, k), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Coeff factor = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (m(r, k)) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(DenseMatrix m, const PrimeField& f) { return rref(m, f).size(); }

/// Basis of {x : m x = 0}.
inline std::vector<std::vector<Coeff>> nullspace(DenseMatrix m, const PrimeField& f) {
  auto pivots = rref(m, f);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Coeff>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Coeff> v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(m(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves sum_j x_j * columns[j] = target. Columns are equal-length vectors.
/// Returns nullopt if target is outside the span; the residual (target
/// reduced modulo the column span) is written to *residual when given.
inline std::optional<std::vector<Coeff>> solve_columns(const std::vector<std::vector<Coeff>>& columns,
                                                       const std::vector<Coeff>& target, const PrimeField& f,
                                                       std::vector<Coeff>* residual = nullptr) {
  const std::size_t n = target.size();
  const std::size_t k = columns.size();
  // Augmented system [columns | target] transposed into rows = coordinates.
  DenseMatrix m(n, k + 1);
  for (std::size_t j = 0; j < k; ++j) {
    if (columns[j].size() != n) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  for (std::size_t i = 0; i < n; ++i) m(i, k) = target[i];
  auto pivots = rref(m, f);
  bool consistent = pivots.empty() || pivots.back() != k;
  if (residual) {
    // Component of target outside the column span: the last pivot row, if
    // the augmented column carries one, reduced back through the columns.
    residual->assign(n, 0);
    if (!consistent) {
      // Reduce target against an echelon basis of the columns to get a
      // canonical remainder in coordinate space.
      DenseMatrix cols_t(k, n);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) cols_t(j, i) = columns[j][i];
      auto piv = rref(cols_t, f);
      std::vector<Coeff> rem = target;
      for (std::size_t r = 0; r < piv.size(); ++r) {
        Coeff c = rem[piv[r]];
        if (!c) continue;
        for (std::size_t i = 0; i < n; ++i)
          if (cols_t(r, i)) rem[i] = f.sub(rem[i], f.mul(c, cols_t(r, i)));
      }
      *residual = std::move(rem);
    }
  }
  if (!consistent) return std::nullopt;
  std::vector<Coeff> x(k, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m(r, k);
  return x;
}

using SparseVec = std::vector<std::pair<std::uint32_t, Coeff>>;  // sorted by column

/// Incremental echelon form over a fixed column range. Each inserted row is
/// reduced against the existing pivots; after finalize() every pivot row
/// contains exactly one pivot column, so pivot columns are expressed through
/// free columns only.
class SparseEchelon {
 public:
  SparseEchelon(const PrimeField& f, std::size_t columns, Budget budget = {})
      : f_(f), pivot_row_(columns, -1), acc_(columns, 0), budget_(budget) {}

  std::size_t columns() const noexcept { return pivot_row_.size(); }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Returns true if the row was independent of everything inserted so far.
  bool insert(const SparseVec& row) {
    for (auto [c, v] : row) acc_[c] = f_.add(acc_[c], v);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      Coeff c = acc_[pivot_col_[k]];
      if (!c) continue;
      for (auto [col, v] : rows_[k]) acc_[col] = f_.sub(acc_[col], f_.mul(c, v));
    }
    SparseVec reduced;
    for (std::size_t c = 0; c < acc_.size(); ++c)
      if (acc_[c]) {
        reduced.emplace_back(static_cast<std::uint32_t>(c), acc_[c]);
        acc_[c] = 0;
      }
    if (reduced.empty()) return false;
    // Pivot on the last column; rows stay short when columns are ordered
    // with the "newest" monomials last.
    auto [pc, pv] = reduced.back();
    Coeff inv = f_.inv(pv);
    for (auto& e : reduced) e.second = f_.mul(e.second, inv);
    stored_ += reduced.size();
    budget_.require(stored_, "graded elimination");
    pivot_row_[pc] = static_cast<std::int64_t>(rows_.size());
    pivot_col_.push_back(pc);
    rows_.push_back(std::move(reduced));
    finalized_ = false;
    return true;
  }

  void finalize() {
    if (finalized_) return;
    for (std::size_t k = rows_.size(); k-- > 0;) {
      bool touched = false;
      for (auto [c, v] : rows_[k]) acc_[c] = f_.add(acc_[c], v);
      for (auto [c, v] : rows_[k]) {
        auto owner = pivot_row_[c];
        if (owner < 0 || static_cast<std::size_t>(owner) == k) continue;
        Coeff coef = acc_[c];
        if (!coef) continue;
        touched = true;
        for (auto [col, w] : rows_[static_cast<std::size_t>(owner)])
          acc_[col] = f_.sub(acc_[col], f_.mul(coef, w));
      }
      SparseVec out;
      if (touched) {
        for (std::size_t c = 0; c < acc_.size(); ++c)
          if (acc_[c]) {
            out.emplace_back(static_cast<std::uint32_t>(c), acc_[c]);
            acc_[c] = 0;
          }
        stored_ = stored_ - rows_[k].size() + out.size();
        budget_.require(stored_, "graded elimination");
        rows_[k] = std::move(out);
      } else {
        for (auto [c, v] : rows_[k]) acc_[c] = 0;
      }
    }
    finalized_ = true;
  }

  bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }
  const SparseVec& row_for_pivot(std::size_t col) const {
    return rows_.at(static_cast<std::size_t>(pivot_row_.at(col)));
  }
  std::size_t stored_entries() const noexcept { return stored_; }

 private:
  PrimeField f_;
  std::vector<std::int64_t> pivot_row_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<SparseVec> rows_;
  std::vector<Coeff> acc_;
  Budget budget_;
  std::size_t stored_ = 0;
  bool finalized_ = true;
};

}  // namespace mildkit

#pragma once

// Truncated power series over F2 in one variable U, and linear algebra over
// that ring: Smith normal form with full transform bookkeeping, and kernel
// extraction for matrices whose kernel is free of rank one to working
// precision.
//
// A series is a bitset of exponents: bit e set means the monomial U^e is
// present. All arithmetic is exact modulo U^trunc.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hft/errors.hpp"

namespace hft {

constexpr int kMinTrunc = 16;
constexpr int kDefaultTrunc = 64;
constexpr int kDefaultGuard = 8;

class Series {
 public:
  Series() : trunc_(kDefaultTrunc), words_(1, 0) {}
  explicit Series(int trunc) : trunc_(trunc), words_(word_count(trunc), 0) {
    if (trunc < 1) throw BadInput("series truncation must be positive");
  }

  static Series zero(int trunc) { return Series(trunc); }

  static Series one(int trunc) {
    Series s(trunc);
    s.words_[0] = 1;
    return s;
  }

  static Series upow(int e, int trunc) {
    Series s(trunc);
    s.set(e);
    return s;
  }

  static Series from_exponents(const std::vector<int>& exps, int trunc) {
    Series s(trunc);
    for (int e : exps) s.set(e);
    return s;
  }

  int trunc() const { return trunc_; }

  void set(int e) {
    if (e < 0) throw BadInput("negative exponent");
    if (e >= trunc_) return;  // dropped by truncation
    words_[e >> 6] |= (std::uint64_t{1} << (e & 63));
  }

  // Characteristic 2: adding U^e means flipping the bit.
  void toggle(int e) {
    if (e < 0) throw BadInput("negative exponent");
    if (e >= trunc_) return;
    words_[e >> 6] ^= (std::uint64_t{1} << (e & 63));
  }

  bool has(int e) const {
    if (e < 0 || e >= trunc_) return false;
    return (words_[e >> 6] >> (e & 63)) & 1;
  }

  bool is_zero() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  bool is_unit() const { return words_[0] & 1; }

  // Lowest exponent present; trunc() for the zero series.
  int val() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i) * 64 + __builtin_ctzll(words_[i]);
    return trunc_;
  }

  std::vector<int> exponents() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(static_cast<int>(i) * 64 + __builtin_ctzll(w));
        w &= w - 1;
      }
    }
    return out;
  }

  Series& operator+=(const Series& o) {
    check_same_trunc(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }

  // Multiply by U^k (k >= 0), dropping overflow past the truncation order.
  Series shl(int k) const {
    Series out(trunc_);
    if (k >= trunc_) return out;
    int wshift = k >> 6, bshift = k & 63;
    for (std::size_t i = words_.size(); i-- > 0;) {
      std::size_t j = i + wshift;
      if (j >= out.words_.size()) continue;
      out.words_[j] |= words_[i] << bshift;
      if (bshift && j + 1 < out.words_.size())
        out.words_[j + 1] |= words_[i] >> (64 - bshift);
    }
    out.mask_top();
    return out;
  }

  // Divide by U^k: every exponent below k is discarded. Only call when
  // val() >= k if exactness matters; the result is exact mod U^(trunc-k).
  Series shr(int k) const {
    Series out(trunc_);
    int wshift = k >> 6, bshift = k & 63;
    for (std::size_t j = 0; j < out.words_.size(); ++j) {
      std::size_t i = j + wshift;
      if (i >= words_.size()) break;
      out.words_[j] = words_[i] >> bshift;
      if (bshift && i + 1 < words_.size())
        out.words_[j] |= words_[i + 1] << (64 - bshift);
    }
    return out;
  }

  friend Series operator*(const Series& a, const Series& b) {
    a.check_same_trunc(b);
    Series out(a.trunc_);
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      std::uint64_t w = a.words_[i];
      while (w) {
        int e = static_cast<int>(i) * 64 + __builtin_ctzll(w);
        w &= w - 1;
        out += b.shl(e);
      }
    }
    return out;
  }

  Series& operator*=(const Series& o) { return *this = *this * o; }

  // Newton iteration for the inverse of a unit; char 2 makes every step
  // x <- x + x*(1 + a*x), squaring the error term.
  Series inverse() const {
    if (!is_unit()) throw NotDivisible(val(), 0);
    Series x = Series::one(trunc_);
    // Correct mod U^(2^k) after k rounds.
    for (int prec = 1; prec < trunc_; prec *= 2) {
      Series e = Series::one(trunc_) + (*this) * x;
      x += x * e;
    }
    return x;
  }

  friend bool operator==(const Series&, const Series&) = default;

 private:
  static int word_count(int trunc) { return (trunc + 63) / 64; }

  void mask_top() {
    int rem = trunc_ & 63;
    if (rem) words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

  void check_same_trunc(const Series& o) const {
    if (trunc_ != o.trunc_) throw BadInput("mixed series truncation orders");
  }

  int trunc_;
  std::vector<std::uint64_t> words_;
};

// f / d, defined when val(d) <= val(f); exact mod U^(trunc - val(d)).
inline Series sdiv(const Series& f, const Series& d) {
  int a = d.val();
  if (a > f.val()) throw NotDivisible(a, f.val());
  if (a >= f.trunc()) throw NotDivisible(a, f.val());
  return f.shr(a) * d.shr(a).inverse();
}

inline std::string to_string(const Series& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (int e : s.exponents()) {
    if (!out.empty()) out += " + ";
    if (e == 0)
      out += "1";
    else if (e == 1)
      out += "U";
    else
      out += "U^" + std::to_string(e);
  }
  return out;
}

class SeriesMatrix {
 public:
  SeriesMatrix() : rows_(0), cols_(0), trunc_(kDefaultTrunc) {}
  SeriesMatrix(int rows, int cols, int trunc)
      : rows_(rows), cols_(cols), trunc_(trunc),
        data_(static_cast<std::size_t>(rows) * cols, Series(trunc)) {}

  static SeriesMatrix identity(int n, int trunc) {
    SeriesMatrix m(n, n, trunc);
    for (int i = 0; i < n; ++i) m.at(i, i) = Series::one(trunc);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int trunc() const { return trunc_; }

  Series& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Series& at(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  bool is_zero() const {
    for (const Series& s : data_)
      if (!s.is_zero()) return false;
    return true;
  }

  // Lowest valuation over all entries; trunc() for the zero matrix.
  int min_val() const {
    int v = trunc_;
    for (const Series& s : data_) v = std::min(v, s.val());
    return v;
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.cols_ != b.rows_) throw BadInput("matrix shape mismatch");
    SeriesMatrix out(a.rows_, b.cols_, a.trunc_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Series& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) {
          if (b.at(k, j).is_zero()) continue;
          out.at(i, j) += aik * b.at(k, j);
        }
      }
    return out;
  }

  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw BadInput("matrix shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  std::vector<Series> apply(const std::vector<Series>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw BadInput("vector length mismatch");
    std::vector<Series> out(rows_, Series(trunc_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
    return out;
  }

  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

 private:
  int rows_, cols_, trunc_;
  std::vector<Series> data_;
};

// S * D * T = M with S, T invertible; D diagonal with weakly increasing
// valuations. diag[i] is the valuation of D[i][i], with trunc() standing in
// for "zero to working precision".
struct SNFResult {
  SeriesMatrix D;
  SeriesMatrix S;
  SeriesMatrix T;
  SeriesMatrix Tinv;
  std::vector<int> diag;
};

inline SNFResult smith_normal_form(const SeriesMatrix& m) {
  const int N = m.trunc();
  const int rows = m.rows(), cols = m.cols();
  SNFResult r{m, SeriesMatrix::identity(rows, N), SeriesMatrix::identity(cols, N),
              SeriesMatrix::identity(cols, N), {}};
  SeriesMatrix& D = r.D;
  SeriesMatrix& S = r.S;
  SeriesMatrix& T = r.T;
  SeriesMatrix& Ti = r.Tinv;

  const int steps = std::min(rows, cols);
  for (int pos = 0; pos < steps; ++pos) {
    // Full pivoting: minimal valuation in the untouched block, ties broken by
    // row then column.
    int best = N, br = -1, bc = -1;
    for (int i = pos; i < rows; ++i)
      for (int j = pos; j < cols; ++j) {
        int v = D.at(i, j).val();
        if (v < best) best = v, br = i, bc = j;
      }
    if (br < 0) break;  // rest of the block is zero

    if (br != pos) {  // swap rows br <-> pos, mirrored as column swap in S
      for (int j = 0; j < cols; ++j) std::swap(D.at(br, j), D.at(pos, j));
      for (int i = 0; i < rows; ++i) std::swap(S.at(i, br), S.at(i, pos));
    }
    if (bc != pos) {  // swap columns bc <-> pos, mirrored in T rows / Tinv cols
      for (int i = 0; i < rows; ++i) std::swap(D.at(i, bc), D.at(i, pos));
      for (int j = 0; j < cols; ++j) std::swap(T.at(bc, j), T.at(pos, j));
      for (int i = 0; i < cols; ++i) std::swap(Ti.at(i, bc), Ti.at(i, pos));
    }

    // Normalize the pivot to exactly U^best: scale its row by the inverse
    // unit, and the matching column of S by the unit itself.
    Series unit = D.at(pos, pos).shr(best);
    if (!(unit == Series::one(N))) {
      Series uinv = unit.inverse();
      for (int j = 0; j < cols; ++j) D.at(pos, j) = D.at(pos, j) * uinv;
      for (int i = 0; i < rows; ++i) S.at(i, pos) = S.at(i, pos) * unit;
    }
    D.at(pos, pos) = Series::upow(best, N);

    // Clear the pivot column below: row t += f * row pos needs column pos of
    // S to pick up f * column t to keep S*D*T = M (transvections square to
    // the identity in characteristic 2).
    for (int t = pos + 1; t < rows; ++t) {
      if (D.at(t, pos).is_zero()) continue;
      Series f = D.at(t, pos).shr(best);
      for (int j = pos; j < cols; ++j) D.at(t, j) += f * D.at(pos, j);
      for (int i = 0; i < rows; ++i) S.at(i, pos) += f * S.at(i, t);
    }

    // Clear the pivot row to the right: column u += f * column pos mirrors as
    // row pos of T += f * row u, and column u of Tinv += f * column pos.
    for (int u = pos + 1; u < cols; ++u) {
      if (D.at(pos, u).is_zero()) continue;
      Series f = D.at(pos, u).shr(best);
      for (int i = pos; i < rows; ++i) D.at(i, u) += f * D.at(i, pos);
      for (int j = 0; j < cols; ++j) T.at(pos, j) += f * T.at(u, j);
      for (int i = 0; i < cols; ++i) Ti.at(i, u) += f * Ti.at(i, pos);
    }
  }

  r.diag.resize(steps);
  for (int i = 0; i < steps; ++i) r.diag[i] = D.at(i, i).val();
  return r;
}

// Kernel of a matrix that should have a free rank-one kernel: exactly one
// Smith diagonal valuation must reach trunc - guard. The generator is the
// matching column of Tinv, normalized by dividing out the common power of U.
struct KernelResult {
  std::vector<Series> generator;
  int pivot_index = -1;   // which diagonal entry vanished
  int max_finite = 0;     // largest diagonal valuation below the margin
  std::vector<int> diag;  // full diagonal valuation profile
};

inline KernelResult kernel_generator(const SeriesMatrix& m, int guard = kDefaultGuard) {
  const int N = m.trunc();
  SNFResult snf = smith_normal_form(m);
  const int margin = N - guard;
  KernelResult out;
  out.diag = snf.diag;
  for (std::size_t i = 0; i < snf.diag.size(); ++i) {
    if (snf.diag[i] >= margin) {
      if (out.pivot_index >= 0)
        throw AmbiguousKernel("diagonal valuations " + std::to_string(out.pivot_index) +
                              " and " + std::to_string(i) + " both reach " +
                              std::to_string(margin));
      out.pivot_index = static_cast<int>(i);
    } else {
      out.max_finite = std::max(out.max_finite, snf.diag[i]);
    }
  }
  if (m.cols() > static_cast<int>(snf.diag.size())) {
    // Wide matrix: the extra columns of Tinv are kernel directions too.
    throw AmbiguousKernel("matrix has more columns than rows");
  }
  if (out.pivot_index < 0)
    throw NoKernel("all diagonal valuations below " + std::to_string(margin));

  out.generator.reserve(m.cols());
  for (int i = 0; i < m.cols(); ++i)
    out.generator.push_back(snf.Tinv.at(i, out.pivot_index));
  int common = N;
  for (const Series& s : out.generator) common = std::min(common, s.val());
  if (common > 0 && common < N)
    for (Series& s : out.generator) s = s.shr(common);
  return out;
}

}  // namespace hft

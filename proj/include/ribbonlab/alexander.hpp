#pragma once

// Integer Laurent polynomials and the Alexander polynomial of the knot group
// presentation (Fox calculus with every generator sent to t).

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ribbonlab/error.hpp"
#include "ribbonlab/quandle.hpp"
#include "ribbonlab/ribbon.hpp"

namespace ribbonlab {

using BigInt = boost::multiprecision::cpp_int;

/// Finitely supported map exponent -> coefficient; zero coefficients are never stored.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  explicit LaurentPolynomial(BigInt constant) {
    if (constant != 0) terms_[0] = std::move(constant);
  }
  static LaurentPolynomial monomial(BigInt coefficient, int exponent) {
    LaurentPolynomial p;
    if (coefficient != 0) p.terms_[exponent] = std::move(coefficient);
    return p;
  }
  /// coefficients[i] is the coefficient of t^(lowest + i).
  static LaurentPolynomial from_coefficients(const std::vector<BigInt>& coefficients, int lowest = 0) {
    LaurentPolynomial p;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      if (coefficients[i] != 0) p.terms_[lowest + static_cast<int>(i)] = coefficients[i];
    }
    return p;
  }

  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<int, BigInt>& terms() const noexcept { return terms_; }
  BigInt coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? BigInt(0) : it->second;
  }
  int lowest_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int highest_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  LaurentPolynomial& operator+=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    }
    return out;
  }
  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

  BigInt evaluate_at_one() const {
    BigInt sum = 0;
    for (const auto& [e, c] : terms_) sum += c;
    return sum;
  }

  /// Representative of the class up to units ±t^k of Z[t, t^-1] (and the
  /// content, which is divided out): lowest exponent 0, positive constant
  /// term, coprime coefficients.
  LaurentPolynomial normalized() const {
    if (terms_.empty()) return {};
    BigInt content = 0;
    for (const auto& [e, c] : terms_) content = gcd(content, abs(c));
    const int shift = lowest_exponent();
    const bool negate = terms_.begin()->second < 0;
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[e - shift] = (negate ? -c : c) / content;
    return out;
  }

  /// e.g. "t^2 - t + 1", highest exponent first.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const int e = it->first;
      BigInt c = it->second;
      const bool negative = c < 0;
      if (negative) c = -c;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      const bool unit = c == 1;
      if (!unit || e == 0) out += c.str();
      if (e != 0) {
        out += "t";
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

 private:
  void add_term(int exponent, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<int, BigInt> terms_;
};

namespace detail {

// Dense integer polynomial, index = degree. Empty means zero.
using Poly = std::vector<BigInt>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

// Fox derivative of `relator` with respect to every generator, all
// generators mapped to t: letter g^+1 after prefix t^p contributes t^p,
// letter g^-1 contributes -t^(p-1).
inline std::vector<LaurentPolynomial> fox_row(const FreeWord& relator, int generator_count) {
  std::vector<LaurentPolynomial> row(generator_count);
  int prefix = 0;
  for (const auto& letter : relator) {
    if (letter.exponent > 0) {
      row[letter.generator - 1] += LaurentPolynomial::monomial(1, prefix);
      prefix += 1;
    } else {
      row[letter.generator - 1] += LaurentPolynomial::monomial(-1, prefix - 1);
      prefix -= 1;
    }
  }
  return row;
}

// Product of the pivots of a triangularization over Q[t]: the gcd of the
// maximal minors up to a rational unit. Rows are rescaled by nonzero
// integers and powers of t only, which are units over Q[t, t^-1].
inline Poly maximal_minor_gcd(std::vector<std::vector<Poly>> rows, int columns) {
  auto normalize_row = [&](std::vector<Poly>& row) {
    BigInt content = 0;
    std::size_t low = SIZE_MAX;
    for (auto& entry : row) {
      trim(entry);
      for (std::size_t i = 0; i < entry.size(); ++i) {
        if (entry[i] != 0) {
          content = gcd(content, abs(entry[i]));
          low = std::min(low, i);
        }
      }
    }
    if (content == 0) return;
    for (auto& entry : row) {
      if (entry.empty()) continue;
      Poly shifted(entry.begin() + static_cast<std::ptrdiff_t>(low), entry.end());
      for (auto& c : shifted) c /= content;
      entry = std::move(shifted);
      trim(entry);
    }
  };

  for (auto& row : rows) normalize_row(row);
  Poly product{1};
  const int row_count = static_cast<int>(rows.size());
  for (int col = 0; col < columns; ++col) {
    while (true) {
      int pivot = -1;
      for (int r = col; r < row_count; ++r) {
        if (rows[r][col].empty()) continue;
        if (pivot < 0 || degree(rows[r][col]) < degree(rows[pivot][col])) pivot = r;
      }
      if (pivot < 0) return {};
      std::swap(rows[col], rows[pivot]);
      bool done = true;
      for (int r = col + 1; r < row_count; ++r) {
        // Cancel leading terms until the entry's degree drops below the pivot's.
        while (!rows[r][col].empty() && degree(rows[r][col]) >= degree(rows[col][col])) {
          const Poly& p = rows[col][col];
          const BigInt lead_p = p.back();
          const BigInt lead_r = rows[r][col].back();
          const int shift = degree(rows[r][col]) - degree(p);
          for (int c = col; c < columns; ++c) {
            Poly& target = rows[r][c];
            for (auto& v : target) v *= lead_p;
            const Poly& source = rows[col][c];
            if (source.empty()) continue;
            if (target.size() < source.size() + shift) target.resize(source.size() + shift, 0);
            for (std::size_t i = 0; i < source.size(); ++i) target[i + shift] -= lead_r * source[i];
            trim(target);
          }
          normalize_row(rows[r]);
        }
        if (!rows[r][col].empty()) done = false;
      }
      if (done) break;
    }
    product = poly_mul(product, rows[col][col]);
  }
  return product;
}

}  // namespace detail

/// Fox Jacobian of the group presentation, all generators sent to t.
inline std::vector<std::vector<LaurentPolynomial>> alexander_matrix(const RibbonData& data) {
  const GroupPresentation p = group_presentation(data);
  std::vector<std::vector<LaurentPolynomial>> rows;
  for (const auto& r : p.relations) rows.push_back(detail::fox_row(r.relator(), p.generator_count));
  return rows;
}

/// Normalized gcd of the (|B|-1)-minors of the Alexander matrix.
inline LaurentPolynomial alexander_polynomial(const RibbonData& data) {
  require_valid(data);
  if (!is_connected(data)) throw Error("not a knot presentation");
  const int n = data.base_count;
  const int columns = n - 1;
  if (columns == 0) return LaurentPolynomial(1);

  // Columns sum to zero, so dropping the last one loses no minors up to sign.
  std::vector<std::vector<detail::Poly>> rows;
  for (const auto& row : alexander_matrix(data)) {
    int low = 0;
    bool any = false;
    for (int c = 0; c < columns; ++c) {
      if (row[c].is_zero()) continue;
      low = any ? std::min(low, row[c].lowest_exponent()) : row[c].lowest_exponent();
      any = true;
    }
    std::vector<detail::Poly> dense(columns);
    for (int c = 0; c < columns; ++c) {
      for (const auto& [e, coeff] : row[c].terms()) {
        const std::size_t at = static_cast<std::size_t>(e - low);
        if (dense[c].size() <= at) dense[c].resize(at + 1, 0);
        dense[c][at] = coeff;
      }
    }
    rows.push_back(std::move(dense));
  }
  return LaurentPolynomial::from_coefficients(detail::maximal_minor_gcd(std::move(rows), columns)).normalized();
}

}  // namespace ribbonlab

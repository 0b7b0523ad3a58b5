// Independent reference computations for the test suites. These deliberately
// avoid the library's implementation paths (plain loops, no Eigen) so that
// any agreement is meaningful.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat34 = std::array<std::array<double, 4>, 3>;

// K * [R | s*t] by explicit loops.
inline Mat34 projection_matrix(const Mat3& k, const Mat3& r,
                               const std::array<double, 3>& t, double s) {
  Mat34 ext{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) ext[i][j] = r[i][j];
    ext[i][3] = s * t[i];
  }
  Mat34 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int m = 0; m < 3; ++m) acc += k[i][m] * ext[m][j];
      out[i][j] = acc;
    }
  }
  return out;
}

// Homogeneous multiply and divide.
inline std::array<double, 2> project(const Mat34& p,
                                     const std::array<double, 3>& x) {
  std::array<double, 3> h{};
  for (int i = 0; i < 3; ++i) {
    h[i] = p[i][0] * x[0] + p[i][1] * x[1] + p[i][2] * x[2] + p[i][3];
  }
  return {h[0] / h[2], h[1] / h[2]};
}

// Sum_i |s - r_i| evaluated with prefix sums over the sorted ratios.
class L1Objective {
 public:
  explicit L1Objective(std::vector<double> ratios) : sorted_(std::move(ratios)) {
    std::sort(sorted_.begin(), sorted_.end());
    prefix_.resize(sorted_.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
      prefix_[i + 1] = prefix_[i] + sorted_[i];
    }
  }

  double operator()(double s) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), s);
    const std::size_t c = static_cast<std::size_t>(it - sorted_.begin());
    const double below = s * static_cast<double>(c) - prefix_[c];
    const double above =
        (prefix_.back() - prefix_[c]) - s * static_cast<double>(sorted_.size() - c);
    return below + above;
  }

  // Brute-force minimum over a uniform grid.
  double grid_min(double lo, double hi, double step) const {
    double best = std::numeric_limits<double>::infinity();
    for (double s = lo; s <= hi + 1e-15; s += step) {
      best = std::min(best, (*this)(s));
    }
    return best;
  }

  double grid_argmin(double lo, double hi, double step) const {
    double best = std::numeric_limits<double>::infinity();
    double arg = lo;
    for (double s = lo; s <= hi + 1e-15; s += step) {
      const double v = (*this)(s);
      if (v < best) {
        best = v;
        arg = s;
      }
    }
    return arg;
  }

 private:
  std::vector<double> sorted_;
  std::vector<double> prefix_;
};

// Exhaustive one-to-one assignment maximizing total similarity subject to a
// threshold; returns the accepted (i, j) pairs of the best assignment.
// Candidates are given as a dense score matrix with NaN for "not allowed".
inline std::vector<std::pair<int, int>> best_assignment(
    const std::vector<std::vector<double>>& score, double threshold) {
  const int nq = static_cast<int>(score.size());
  const int ng = nq > 0 ? static_cast<int>(score[0].size()) : 0;
  std::vector<int> gallery(ng);
  std::iota(gallery.begin(), gallery.end(), 0);

  // Enumerate all injective maps from queries to gallery slots (including
  // "unassigned") via permutations of gallery plus skip masks; workable for
  // the tiny instances used in tests.
  std::vector<std::pair<int, int>> best_pairs;
  double best_total = -1.0;
  std::vector<int> choice(static_cast<std::size_t>(nq), -1);

  std::function<void(int, double, std::vector<bool>&)> rec =
      [&](int q, double total, std::vector<bool>& used) {
        if (q == nq) {
          if (total > best_total) {
            best_total = total;
            best_pairs.clear();
            for (int i = 0; i < nq; ++i) {
              if (choice[static_cast<std::size_t>(i)] >= 0) {
                best_pairs.push_back({i, choice[static_cast<std::size_t>(i)]});
              }
            }
          }
          return;
        }
        choice[static_cast<std::size_t>(q)] = -1;
        rec(q + 1, total, used);
        for (int j = 0; j < ng; ++j) {
          const double s = score[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
          if (used[static_cast<std::size_t>(j)] || std::isnan(s) || s < threshold) {
            continue;
          }
          used[static_cast<std::size_t>(j)] = true;
          choice[static_cast<std::size_t>(q)] = j;
          rec(q + 1, total + s, used);
          choice[static_cast<std::size_t>(q)] = -1;
          used[static_cast<std::size_t>(j)] = false;
        }
      };
  std::vector<bool> used(static_cast<std::size_t>(ng), false);
  rec(0, 0.0, used);
  std::sort(best_pairs.begin(), best_pairs.end());
  return best_pairs;
}

}  // namespace oracle

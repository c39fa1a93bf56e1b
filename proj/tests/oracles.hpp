#pragma once

// Brute-force references used by the tests. Nothing here calls the library
// routine it is checking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

// Minimum 1-D threshold-classifier errors: every cut between sorted points
// (n + 1 positions) times both orientations, counted naively.
inline std::size_t threshold_errors(const std::vector<double>& x, const std::vector<int>& y) {
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts{sorted.front() - 1.0};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) cuts.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  cuts.push_back(sorted.back() + 1.0);
  std::size_t best = x.size();
  for (double t : cuts) {
    for (int o : {1, -1}) {
      std::size_t e = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int pred = o * (x[i] - t) > 0 ? 1 : -1;
        e += pred != y[i] ? 1 : 0;
      }
      best = std::min(best, e);
    }
  }
  return best;
}

// Close-k value written straight from the definition with a full sort.
inline double close_k(const std::vector<double>& losses, double t, std::size_t k, double m) {
  std::vector<std::size_t> idx(losses.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(losses[a] - t) < std::abs(losses[b] - t);
  });
  double v = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double l = losses[idx[r]];
    if (r < k) {
      v += l;
    } else if (l >= t) {
      v += m;
    }
  }
  return v;
}

inline double logistic(double margin) {
  return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

// Central differences of f around theta.
inline std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> theta, double h) {
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double keep = theta[i];
    theta[i] = keep + h;
    const double up = f(theta);
    theta[i] = keep - h;
    const double down = f(theta);
    theta[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
  return std::sqrt(diff) / scale;
}

// Two-sided sign-flip permutation p-value for the mean of paired differences.
inline double sign_flip_p(const std::vector<double>& diff, std::size_t rounds, std::mt19937_64& rng) {
  double observed = 0.0;
  for (double d : diff) observed += d;
  observed = std::abs(observed);
  std::size_t extreme = 0;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t r = 0; r < rounds; ++r) {
    double s = 0.0;
    for (double d : diff) s += coin(rng) ? d : -d;
    if (std::abs(s) >= observed - 1e-12) ++extreme;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(rounds + 1);
}

// Candidate 1-D classifiers s * o * (x - t) over every cut position, both
// orientations and a ladder of scales. Returns (t, o, s) triples.
struct Threshold {
  double t;
  int o;
  double s;
};

inline std::vector<Threshold> threshold_family(const std::vector<double>& x, const std::vector<double>& scales) {
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts{sorted.front() - 1.0};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1] > sorted[i]) cuts.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  }
  cuts.push_back(sorted.back() + 1.0);
  std::vector<Threshold> out;
  for (double t : cuts) {
    for (int o : {1, -1}) {
      for (double s : scales) out.push_back({t, o, s});
    }
  }
  return out;
}

}  // namespace oracle

// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fisherdpi/error.hpp"

namespace fisherdpi {

inline constexpr std::size_t kDefaultGridNodes = 201;
/// Truncation this many σ from the mean counts as no truncation.
inline constexpr double kNegligibleTruncationSigmas = 6.0;

/// Discretized prior over θ: ascending nodes with quadrature masses that
/// already include the density, so Σ weights = 1 and E[f] = Σ w_i f(θ_i).
class PriorGrid {
 public:
  PriorGrid(std::vector<double> nodes, std::vector<double> weights, std::string description = "custom",
            std::optional<double> prior_information = std::nullopt)
      : nodes_(std::move(nodes)),
        weights_(std::move(weights)),
        description_(std::move(description)),
        prior_information_(prior_information) {
    if (nodes_.size() < 3) throw Error(ErrorCode::InvalidArgument, "prior grid needs >= 3 nodes");
    if (nodes_.size() != weights_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "prior nodes and weights differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, "prior nodes must be strictly ascending");
      }
      if (!(weights_[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative prior weight");
      total += weights_[i];
    }
    if (!(std::abs(total - 1.0) <= 1e-10)) {
      throw Error(ErrorCode::InvalidArgument, "prior weights sum to " + std::to_string(total));
    }
  }

  /// Uniform density on [a, b].
  static PriorGrid uniform(double a, double b, std::size_t n = kDefaultGridNodes) {
    auto nodes = linspace(a, b, n);
    auto weights = quadrature(nodes, [](double) { return 1.0; });
    return PriorGrid(std::move(nodes), std::move(weights),
                     "uniform:" + fmt(a) + "," + fmt(b),
                     std::numeric_limits<double>::infinity());
  }

  /// Gaussian(μ, σ) truncated to [a, b] and renormalized on the grid.
  static PriorGrid gaussian(double mu, double sigma, double a, double b,
                            std::size_t n = kDefaultGridNodes) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian prior needs sigma > 0");
    auto nodes = linspace(a, b, n);
    auto weights = quadrature(nodes, [&](double t) {
      const double z = (t - mu) / sigma;
      return std::exp(-0.5 * z * z);
    });
    // E[(∂θ log π)²] on the grid. Only meaningful when the density has
    // effectively vanished at both ends; a hard cut elsewhere breaks the
    // integration by parts behind the van Trees bound.
    std::optional<double> info;
    const double cut = (kNegligibleTruncationSigmas - 1e-9) * sigma;
    if (mu - a >= cut && b - mu >= cut) {
      info = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double score = (nodes[i] - mu) / (sigma * sigma);
        *info += weights[i] * score * score;
      }
    }
    return PriorGrid(std::move(nodes), std::move(weights),
                     "gauss:" + fmt(mu) + "," + fmt(sigma) + "," + fmt(a) + "," + fmt(b), info);
  }

  /// Parses `uniform:a,b` or `gauss:mu,sigma,a,b`.
  static PriorGrid parse(std::string_view spec, std::size_t n = kDefaultGridNodes) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "prior spec '" + std::string(spec) + "' lacks ':'");
    }
    const auto kind = spec.substr(0, colon);
    std::vector<double> args;
    std::string_view rest = spec.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      const auto token = rest.substr(0, comma);
      double value = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
      if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
        throw Error(ErrorCode::ParseError, "bad number '" + std::string(token) + "' in prior spec");
      }
      args.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (kind == "uniform") {
      if (args.size() != 2) throw Error(ErrorCode::ParseError, "uniform prior takes a,b");
      if (!(args[1] > args[0])) throw Error(ErrorCode::ParseError, "uniform prior needs a < b");
      return uniform(args[0], args[1], n);
    }
    if (kind == "gauss") {
      if (args.size() != 4) throw Error(ErrorCode::ParseError, "gauss prior takes mu,sigma,a,b");
      if (!(args[3] > args[2])) throw Error(ErrorCode::ParseError, "gauss prior needs a < b");
      return gaussian(args[0], args[1], args[2], args[3], n);
    }
    throw Error(ErrorCode::ParseError, "unknown prior kind '" + std::string(kind) + "'");
  }

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::string& description() const noexcept { return description_; }

  /// Fisher information of the prior density itself: infinite for a uniform
  /// prior, unknown for a custom grid or a Gaussian cut inside 6σ.
  std::optional<double> prior_information() const noexcept { return prior_information_; }

  double mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) m += weights_[i] * nodes_[i];
    return m;
  }

  double variance() const noexcept {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) v += weights_[i] * (nodes_[i] - m) * (nodes_[i] - m);
    return v;
  }

 private:
  static std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "prior grid needs >= 3 nodes");
    if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "prior interval needs a < b");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return x;
  }

  // Composite Simpson weights (a 3/8 panel closes an odd interval count);
  // exact for cubics, so a uniform prior reproduces its variance exactly.
  static std::vector<double> simpson_rule(std::size_t n) {
    std::vector<double> c(n, 0.0);
    const std::size_t intervals = n - 1;
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
      c[i] += 1.0 / 3.0;
      c[i + 1] += 4.0 / 3.0;
      c[i + 2] += 1.0 / 3.0;
    }
    if (simpson_end != intervals) {
      const std::size_t s = simpson_end;
      c[s] += 3.0 / 8.0;
      c[s + 1] += 9.0 / 8.0;
      c[s + 2] += 9.0 / 8.0;
      c[s + 3] += 3.0 / 8.0;
    }
    return c;
  }

  template <typename Density>
  static std::vector<double> quadrature(const std::vector<double>& nodes, Density&& density) {
    const std::size_t n = nodes.size();
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(n - 1);
    std::vector<double> w = simpson_rule(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= h * density(nodes[i]);
      total += w[i];
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "prior density vanishes on grid");
    for (auto& wi : w) wi /= total;
    return w;
  }

  static std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::string description_;
  std::optional<double> prior_information_;
};

}  // namespace fisherdpi

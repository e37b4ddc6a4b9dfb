#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "contest/random.hpp"

namespace contest {

struct Knot {
  double x = 0.0;
  double F = 0.0;
};

/// Common-knowledge ability distribution on [0,1]: atomless with a strictly
/// increasing CDF. Immutable after construction.
class AbilityDistribution {
 public:
  struct Uniform {};
  struct Beta {
    double alpha = 1.0;
    double beta = 1.0;
  };
  struct PiecewiseLinear {
    std::vector<Knot> knots;
  };
  using Kind = std::variant<Uniform, Beta, PiecewiseLinear>;

  AbilityDistribution() = default;

  static AbilityDistribution uniform();
  static AbilityDistribution beta(double alpha, double beta);
  // Knots must start at (0,0), end at (1,1), and be strictly increasing in both coordinates.
  static AbilityDistribution piecewise_linear(std::vector<Knot> knots);

  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;

  double cdf(double a) const;
  double pdf(double a) const;
  // Beta inverses are accurate to |cdf(a) - u| <= 1e-7; the others to 1e-9.
  double inverse_cdf(double u) const;

  double sample_one(Stream& stream) const { return inverse_cdf(stream.uniform()); }
  std::vector<double> sample(Stream& stream, std::size_t count) const;

 private:
  explicit AbilityDistribution(Kind kind);

  Kind kind_ = Uniform{};
  double beta_log_norm_ = 0.0;  // log B(alpha, beta)
};

}  // namespace contest

#include "contest/ability_distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 nodes and weights).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kBetaQuadTolerance = 1e-10;

double adaptive_kronrod(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (std::abs(kronrod - gauss) <= tol || depth >= 40) return kronrod;
  return adaptive_kronrod(f, a, center, 0.5 * tol, depth + 1) +
         adaptive_kronrod(f, center, b, 0.5 * tol, depth + 1);
}

// Normalized incomplete beta integral on [0, x] with x <= 1/2. For p < 1 the substitution
// t = u^(1/p) removes the endpoint singularity.
double lower_incomplete_beta(double p, double q, double x, double log_norm) {
  if (x <= 0.0) return 0.0;
  if (p < 1.0) {
    const double upper = std::pow(x, p);
    auto integrand = [p, q, log_norm](double u) {
      const double t = std::pow(u, 1.0 / p);
      return std::exp((q - 1.0) * std::log1p(-t) - log_norm) / p;
    };
    return adaptive_kronrod(integrand, 0.0, upper, kBetaQuadTolerance, 0);
  }
  auto integrand = [p, q, log_norm](double t) {
    if (t <= 0.0) return p == 1.0 ? std::exp(-log_norm) : 0.0;
    return std::exp((p - 1.0) * std::log(t) + (q - 1.0) * std::log1p(-t) - log_norm);
  };
  return adaptive_kronrod(integrand, 0.0, x, kBetaQuadTolerance, 0);
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << v;
    throw DomainError(msg.str());
  }
}

}  // namespace

AbilityDistribution::AbilityDistribution(Kind kind) : kind_(std::move(kind)) {}

AbilityDistribution AbilityDistribution::uniform() { return AbilityDistribution(Uniform{}); }

AbilityDistribution AbilityDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ContractError("beta distribution requires alpha > 0 and beta > 0");
  }
  AbilityDistribution d(Beta{alpha, beta});
  d.beta_log_norm_ = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  return d;
}

AbilityDistribution AbilityDistribution::piecewise_linear(std::vector<Knot> knots) {
  if (knots.size() < 2) throw ContractError("piecewise-linear CDF needs at least two knots");
  if (knots.front().x != 0.0 || knots.front().F != 0.0 || knots.back().x != 1.0 ||
      knots.back().F != 1.0) {
    throw ContractError("piecewise-linear CDF must start at (0,0) and end at (1,1)");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].x > knots[i - 1].x) || !(knots[i].F > knots[i - 1].F)) {
      throw ContractError("piecewise-linear CDF knots must be strictly increasing in x and F");
    }
  }
  return AbilityDistribution(PiecewiseLinear{std::move(knots)});
}

std::string AbilityDistribution::name() const {
  std::ostringstream out;
  if (std::holds_alternative<Uniform>(kind_)) {
    out << "uniform";
  } else if (const auto* b = std::get_if<Beta>(&kind_)) {
    out << "beta(" << b->alpha << "," << b->beta << ")";
  } else {
    out << "piecewise(" << std::get<PiecewiseLinear>(kind_).knots.size() << " knots)";
  }
  return out.str();
}

double AbilityDistribution::cdf(double a) const {
  check_unit(a, "ability");
  if (std::holds_alternative<Uniform>(kind_)) return a;
  if (const auto* b = std::get_if<Beta>(&kind_)) {
    if (a == 0.0) return 0.0;
    if (a == 1.0) return 1.0;
    double value = a <= 0.5
                       ? lower_incomplete_beta(b->alpha, b->beta, a, beta_log_norm_)
                       : 1.0 - lower_incomplete_beta(b->beta, b->alpha, 1.0 - a, beta_log_norm_);
    return std::clamp(value, 0.0, 1.0);
  }
  const auto& knots = std::get<PiecewiseLinear>(kind_).knots;
  auto it = std::upper_bound(knots.begin(), knots.end(), a,
                             [](double v, const Knot& k) { return v < k.x; });
  if (it == knots.end()) return 1.0;
  const Knot& right = *it;
  const Knot& left = *(it - 1);
  return left.F + (right.F - left.F) * (a - left.x) / (right.x - left.x);
}

double AbilityDistribution::pdf(double a) const {
  check_unit(a, "ability");
  if (std::holds_alternative<Uniform>(kind_)) return 1.0;
  if (const auto* b = std::get_if<Beta>(&kind_)) {
    if (a == 0.0) {
      if (b->alpha < 1.0) return std::numeric_limits<double>::infinity();
      return b->alpha == 1.0 ? std::exp(-beta_log_norm_) : 0.0;
    }
    if (a == 1.0) {
      if (b->beta < 1.0) return std::numeric_limits<double>::infinity();
      return b->beta == 1.0 ? std::exp(-beta_log_norm_) : 0.0;
    }
    return std::exp((b->alpha - 1.0) * std::log(a) + (b->beta - 1.0) * std::log1p(-a) -
                    beta_log_norm_);
  }
  const auto& knots = std::get<PiecewiseLinear>(kind_).knots;
  auto it = std::upper_bound(knots.begin(), knots.end(), a,
                             [](double v, const Knot& k) { return v < k.x; });
  if (it == knots.end()) --it;
  const Knot& right = *it;
  const Knot& left = *(it - 1);
  return (right.F - left.F) / (right.x - left.x);
}

double AbilityDistribution::inverse_cdf(double u) const {
  check_unit(u, "probability");
  if (std::holds_alternative<Uniform>(kind_)) return u;
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  if (const auto* pl = std::get_if<PiecewiseLinear>(&kind_)) {
    const auto& knots = pl->knots;
    auto it = std::upper_bound(knots.begin(), knots.end(), u,
                               [](double v, const Knot& k) { return v < k.F; });
    if (it == knots.end()) return 1.0;
    const Knot& right = *it;
    const Knot& left = *(it - 1);
    return left.x + (right.x - left.x) * (u - left.F) / (right.F - left.F);
  }
  // Safeguarded Newton on the quadrature CDF.
  double lo = 0.0;
  double hi = 1.0;
  double x = u;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = cdf(x) - u;
    if (std::abs(f) <= 1e-13) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-15) break;
    const double density = pdf(x);
    double next = (density > 0.0 && std::isfinite(density)) ? x - f / density : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

std::vector<double> AbilityDistribution::sample(Stream& stream, std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(stream));
  return out;
}

}  // namespace contest

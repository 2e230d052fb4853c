#include "polydense/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "polydense/errors.hpp"

namespace polydense {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;  // log sqrt(2*pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite_point(double x) {
  if (!std::isfinite(x))
    throw DomainError("density: evaluation point must be finite");
}

double gaussian_log_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::gaussian:
      return "gaussian";
    case Family::double_exponential:
      return "double_exponential";
    case Family::uniform:
      return "uniform";
    case Family::lognormal:
      return "lognormal";
    case Family::tabulated:
      return "tabulated";
  }
  return "tabulated";
}

BaseMeasure BaseMeasure::lebesgue() { return BaseMeasure{}; }

BaseMeasure BaseMeasure::counting(std::vector<double> grid) {
  if (grid.empty())
    throw DomainError("counting base: grid must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      throw DomainError("counting base: grid points must be finite");
    if (i > 0 && !(grid[i - 1] < grid[i]))
      throw DomainError("counting base: grid must be strictly increasing");
  }
  return BaseMeasure{Kind::counting, std::move(grid)};
}

WeightDensity::WeightDensity(Family family, double p1, double p2,
                             Interval support)
    : family_(family),
      p1_(p1),
      p2_(p2),
      support_(support),
      mass_cache_(std::numeric_limits<double>::quiet_NaN()) {}

WeightDensity::WeightDensity(const WeightDensity& other)
    : family_(other.family_),
      p1_(other.p1_),
      p2_(other.p2_),
      support_(other.support_),
      base_(other.base_),
      points_(other.points_),
      mass_cache_(other.mass_cache_.load()) {}

WeightDensity& WeightDensity::operator=(const WeightDensity& other) {
  if (this != &other) {
    family_ = other.family_;
    p1_ = other.p1_;
    p2_ = other.p2_;
    support_ = other.support_;
    base_ = other.base_;
    points_ = other.points_;
    mass_cache_.store(other.mass_cache_.load());
  }
  return *this;
}

WeightDensity WeightDensity::gaussian(double mean, double sigma) {
  if (!std::isfinite(mean))
    throw DomainError("gaussian weight: mean must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("gaussian weight: sigma must be finite and positive");
  return WeightDensity(Family::gaussian, mean, sigma, Interval::whole());
}

WeightDensity WeightDensity::double_exponential(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError(
        "double_exponential weight: scale must be finite and positive");
  return WeightDensity(Family::double_exponential, scale, 0.0,
                       Interval::whole());
}

WeightDensity WeightDensity::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw DomainError("uniform weight: requires finite lo < hi");
  return WeightDensity(Family::uniform, lo, hi, Interval::bounded(lo, hi));
}

WeightDensity WeightDensity::lognormal(double mu, double sigma) {
  if (!std::isfinite(mu))
    throw DomainError("lognormal weight: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("lognormal weight: sigma must be finite and positive");
  return WeightDensity(Family::lognormal, mu, sigma,
                       Interval::right_unbounded(0.0));
}

WeightDensity WeightDensity::tabulated(std::vector<TabPoint> points) {
  if (points.size() < 4)
    throw DomainError("tabulated weight: needs at least 4 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x))
      throw DomainError("tabulated weight: x values must be finite");
    if (!std::isfinite(points[i].a) || points[i].a < 0.0)
      throw DomainError(
          "tabulated weight: density values must be finite and nonnegative");
    if (i > 0 && !(points[i - 1].x < points[i].x))
      throw DomainError("tabulated weight: x values must be strictly increasing");
  }
  WeightDensity d(Family::tabulated, points.front().x, points.back().x,
                  Interval::bounded(points.front().x, points.back().x));
  d.points_ = std::move(points);
  return d;
}

WeightDensity WeightDensity::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("tabulated weight: cannot open " + path);

  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("tabulated weight: " + path + " is empty");
  {
    std::string header = trim(line);
    const auto comma = header.find(',');
    if (comma == std::string::npos || trim(header.substr(0, comma)) != "x" ||
        trim(header.substr(comma + 1)) != "a")
      throw ParseError("tabulated weight: " + path +
                       " line 1: header must be \"x,a\"");
  }

  std::vector<TabPoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("tabulated weight: " + path + " line " +
                       std::to_string(line_no) + ": expected two columns");
    TabPoint p{};
    try {
      std::size_t used = 0;
      const std::string xs = trim(line.substr(0, comma));
      const std::string as = trim(line.substr(comma + 1));
      p.x = std::stod(xs, &used);
      if (used != xs.size()) throw std::invalid_argument("trailing junk");
      p.a = std::stod(as, &used);
      if (used != as.size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw ParseError("tabulated weight: " + path + " line " +
                       std::to_string(line_no) + ": malformed number");
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.a) || p.a < 0.0)
      throw ParseError("tabulated weight: " + path + " line " +
                       std::to_string(line_no) +
                       ": values must be finite with a >= 0");
    if (!points.empty() && !(points.back().x < p.x))
      throw ParseError("tabulated weight: " + path + " line " +
                       std::to_string(line_no) +
                       ": x values must be strictly increasing");
    points.push_back(p);
  }
  if (points.size() < 4)
    throw ParseError("tabulated weight: " + path + ": needs at least 4 rows");
  return tabulated(std::move(points));
}

WeightDensity WeightDensity::with_base(BaseMeasure base) const {
  WeightDensity out(*this);
  out.base_ = std::move(base);
  out.mass_cache_.store(std::numeric_limits<double>::quiet_NaN());
  return out;
}

double WeightDensity::density(double x) const {
  require_finite_point(x);
  const double ld = log_density(x);
  return ld == kNegInf ? 0.0 : std::exp(ld);
}

double WeightDensity::log_density(double x) const {
  require_finite_point(x);
  switch (family_) {
    case Family::gaussian:
      return gaussian_log_pdf(x, p1_, p2_);
    case Family::double_exponential:
      return -std::abs(x) / p1_ - std::log(2.0 * p1_);
    case Family::uniform:
      return (x >= p1_ && x <= p2_) ? -std::log(p2_ - p1_) : kNegInf;
    case Family::lognormal:
      if (x <= 0.0) return kNegInf;
      return gaussian_log_pdf(std::log(x), p1_, p2_) - std::log(x);
    case Family::tabulated: {
      if (x < points_.front().x || x > points_.back().x) return kNegInf;
      auto it = std::upper_bound(
          points_.begin(), points_.end(), x,
          [](double v, const TabPoint& p) { return v < p.x; });
      if (it == points_.begin()) return std::log(points_.front().a);
      if (it == points_.end()) return std::log(points_.back().a);
      const TabPoint& hi = *it;
      const TabPoint& lo = *(it - 1);
      const double t = (x - lo.x) / (hi.x - lo.x);
      const double a = lo.a + t * (hi.a - lo.a);
      return a > 0.0 ? std::log(a) : kNegInf;
    }
  }
  return kNegInf;
}

double WeightDensity::total_mass(const QuadraturePlan& plan) const {
  const double cached = mass_cache_.load();
  if (!std::isnan(cached)) return cached;
  IntegralOutcome out = integrate_against([](double) { return 1.0; }, plan);
  if (out.verdict == Verdict::divergent)
    throw DivergenceError("total_mass: weighted measure has infinite mass");
  if (out.verdict == Verdict::inconclusive)
    throw InconsistencyError(
        "total_mass: integration inconclusive under the given plan");
  mass_cache_.store(out.value);
  return out.value;
}

IntegralOutcome WeightDensity::integrate_against(
    const RealFn& h, const QuadraturePlan& plan) const {
  plan.validate();
  // Where the density is exactly zero the point carries no mass, so the
  // integrand is zero no matter what h does there. Checking the density
  // first also means h is never evaluated at such points; otherwise an h
  // that overflows in a region the weight has already killed would turn
  // 0 * inf into NaN.
  if (base_.kind == BaseMeasure::Kind::counting) {
    const double v = integrate_counting(
        [&](double x) {
          const double a = density(x);
          return a == 0.0 ? 0.0 : h(x) * a;
        },
        base_.grid);
    return IntegralOutcome{v, 0.0, Verdict::converged, {}};
  }
  if (family_ == Family::lognormal) {
    // Substitute x = exp(y): the weighted measure becomes a gaussian in y,
    // so probes of the far tail happen at moderate y instead of huge x.
    const double mu = p1_, sigma = p2_;
    RealFn g = [&h, mu, sigma](double y) {
      const double w = std::exp(gaussian_log_pdf(y, mu, sigma));
      return w == 0.0 ? 0.0 : h(std::exp(y)) * w;
    };
    return integrate(g, Interval::whole(), plan);
  }
  RealFn g = [this, &h](double x) {
    const double a = density(x);
    return a == 0.0 ? 0.0 : h(x) * a;
  };
  return integrate(g, support_, plan);
}

IntegralOutcome WeightDensity::integrate_exp_monomial(
    int n, double s, const QuadraturePlan& plan) const {
  plan.validate();
  if (n < 0) throw DomainError("integrate_exp_monomial: degree must be >= 0");
  if (!std::isfinite(s))
    throw DomainError("integrate_exp_monomial: exponent rate must be finite");
  if (base_.kind == BaseMeasure::Kind::counting) {
    const double v = integrate_counting(
        [&](double x) {
          const double la = log_density(x);
          if (la == kNegInf) return 0.0;
          if (x == 0.0) return n == 0 ? std::exp(s * x + la) : 0.0;
          const double t = n * std::log(std::abs(x)) + s * x + la;
          const double sign = (n % 2 != 0 && x < 0.0) ? -1.0 : 1.0;
          return sign * std::exp(t);
        },
        base_.grid);
    return IntegralOutcome{v, 0.0, Verdict::converged, {}};
  }
  if (family_ == Family::lognormal) {
    // In y = ln x coordinates: x^n exp(s x) a(x) dx = exp(n y + s e^y) phi(y) dy.
    // e^y may overflow for huge y; s * inf is then +/-inf, which exp maps to
    // the correct limit (inf for s > 0, 0 for s < 0). s == 0 skips the term
    // so the overflowing factor is never formed.
    const double mu = p1_, sigma = p2_;
    RealFn g = [n, s, mu, sigma](double y) {
      double t = n * y + gaussian_log_pdf(y, mu, sigma);
      if (s != 0.0) t += s * std::exp(y);
      return std::exp(t);
    };
    return integrate(g, Interval::whole(), plan);
  }
  RealFn g = [this, n, s](double x) {
    const double la = log_density(x);
    if (la == kNegInf) return 0.0;
    if (x == 0.0) return n == 0 ? std::exp(s * x + la) : 0.0;
    const double t = n * std::log(std::abs(x)) + s * x + la;
    const double sign = (n % 2 != 0 && x < 0.0) ? -1.0 : 1.0;
    return sign * std::exp(t);
  };
  return integrate(g, support_, plan);
}

}  // namespace polydense

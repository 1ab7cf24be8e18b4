#include "thermorec/workbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace thermorec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kChainSlack = 1e-10;
constexpr double kTransitionTol = 1e-8;

double difference(const DivergenceResult& a, const DivergenceResult& b) {
  if (a.finite && b.finite) return a.value - b.value;
  if (!a.finite && b.finite) return kInf;
  if (a.finite && !b.finite) return -kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

// Minimizes sign * [D_alpha(a||tau) - D_alpha(b||tau)] over the grid plus
// golden-section refinement. Returned samples hold the unsigned difference.
class AlphaSearch {
 public:
  AlphaSearch(const DensityMatrix& a, const DensityMatrix& b, const DensityMatrix& tau, double sign)
      : a_(a), b_(b), tau_(tau), sign_(sign) {}

  double eval(double alpha) {
    const AlphaFamilySpec spec(alpha);
    const double diff = difference(renyi_divergence(a_, tau_, spec), renyi_divergence(b_, tau_, spec));
    samples_.push_back({alpha, diff});
    return std::isnan(diff) ? kInf : sign_ * diff;
  }

  AlphaOptimum run(const AlphaGrid& grid) {
    if (grid.points.empty()) throw ValidationError("alpha grid is empty");
    std::vector<double> pts = grid.points;
    std::sort(pts.begin(), pts.end());
    if (pts.front() < 0.0) throw ValidationError("alpha grid contains a negative order");

    std::vector<double> vals;
    for (double p : pts) vals.push_back(eval(p));
    // alpha = 1 is always a candidate.
    if (!std::binary_search(pts.begin(), pts.end(), 1.0)) consider(1.0, eval(1.0));

    const auto best_it = std::min_element(vals.begin(), vals.end());
    const auto k = static_cast<std::size_t>(best_it - vals.begin());
    consider(pts[k], vals[k]);

    double max_finite = 0.0;
    for (double p : pts) {
      if (std::isfinite(p)) max_finite = std::max(max_finite, p);
    }
    if (std::isfinite(pts[k]) && std::isfinite(*best_it) && grid.refinement_rounds > 0) {
      double lo = k > 0 ? pts[k - 1] : pts[k];
      double hi = (k + 1 < pts.size() && std::isfinite(pts[k + 1])) ? pts[k + 1] : pts[k];
      for (int round = 0; round < grid.refinement_rounds && hi > lo; ++round) {
        golden_section(lo, hi);
        const double half_width = 0.25 * (hi - lo);
        lo = std::max(0.0, best_alpha_ - half_width);
        hi = std::min(max_finite, best_alpha_ + half_width);
      }
    }

    AlphaOptimum out;
    out.alpha = best_alpha_;
    out.value = sign_ * best_value_;
    out.unbounded = std::isinf(best_value_) && best_value_ < 0.0;
    std::sort(samples_.begin(), samples_.end(),
              [](const AlphaSample& x, const AlphaSample& y) { return x.alpha < y.alpha; });
    out.trace = std::move(samples_);
    return out;
  }

 private:
  void consider(double alpha, double value) {
    if (value < best_value_) {
      best_value_ = value;
      best_alpha_ = alpha;
    }
  }

  void golden_section(double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    consider(x1, f1);
    consider(x2, f2);
    for (int iter = 0; iter < 60 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++iter) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = eval(x1);
        consider(x1, f1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = eval(x2);
        consider(x2, f2);
      }
    }
  }

  const DensityMatrix& a_;
  const DensityMatrix& b_;
  const DensityMatrix& tau_;
  double sign_;
  std::vector<AlphaSample> samples_;
  double best_value_ = kInf;
  double best_alpha_ = 1.0;
};

void require_transition(const ThermalOperation& t, const DensityMatrix& from, const DensityMatrix& to) {
  const double gap = trace_norm(t.apply_raw(from.matrix()) - to.matrix());
  if (gap > kTransitionTol) {
    throw ValidationError("thermal operation does not implement the transition (trace distance " +
                          std::to_string(gap) + ")");
  }
}

RecoveryBound recovery_bound(const DensityMatrix& target, const DensityMatrix& image,
                             const ThermalOperation& forward) {
  const DensityMatrix& tau = forward.system_gibbs().state;
  DensityMatrix recovered = apply(reversal(forward), image);
  const DeltaResult d = delta(target, image, tau);
  const DivergenceResult d_rec = relative_entropy(target, recovered);
  const double f = fidelity(target, recovered).squared;
  const double bound = f > 0.0 ? -std::log(f) : kInf;
  const bool chain = d.finite && d_rec.finite && d.value >= d_rec.value - kChainSlack &&
                     d_rec.value >= bound - kChainSlack;
  return {d.value, d_rec.value, bound, std::move(recovered), chain};
}

}  // namespace

DeltaResult delta(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& tau) {
  const DivergenceResult a = relative_entropy(rho, tau);
  const DivergenceResult b = relative_entropy(sigma, tau);
  return {difference(a, b), a.finite && b.finite};
}

AlphaGrid AlphaGrid::standard() {
  return {{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 1.0, 1.01, 1.25, 1.5, 2.0, 3.0, 5.0,
           10.0, 50.0, kInf},
          3};
}

AlphaGrid AlphaGrid::densified() const {
  AlphaGrid out{{}, refinement_rounds};
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.points.push_back(points[i]);
    if (i + 1 < points.size() && std::isfinite(points[i + 1])) {
      out.points.push_back(0.5 * (points[i] + points[i + 1]));
    }
  }
  return out;
}

AlphaOptimum nano_gain_bound(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& tau,
                             const AlphaGrid& grid) {
  return AlphaSearch(rho, sigma, tau, 1.0).run(grid);
}

AlphaOptimum nano_invest_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const DensityMatrix& tau, const AlphaGrid& grid) {
  AlphaOptimum out = AlphaSearch(sigma, rho, tau, -1.0).run(grid);
  out.unbounded = std::isinf(out.value) && out.value > 0.0;
  const DeltaResult at_one = delta(sigma, rho, tau);
  if (at_one.finite && out.value < at_one.value - 1e-12) {
    throw std::logic_error("nano invest bound fell below its alpha = 1 member");
  }
  return out;
}

RecoveryBound recovery_gain_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const ThermalOperation& t) {
  require_transition(t, rho, sigma);
  return recovery_bound(rho, sigma, t);
}

RecoveryBound recovery_invest_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const ThermalOperation& t) {
  require_transition(t, sigma, rho);
  return recovery_bound(sigma, rho, t);
}

WorkReport work_report(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& tau,
                       const AlphaGrid& grid, const ThermalOperation* transition) {
  WorkReport r;
  const DeltaResult d = delta(rho, sigma, tau);
  r.delta = d.value;
  r.w_gain_std = d.value;
  r.w_inv_std = -d.value;
  r.nano_gain = nano_gain_bound(rho, sigma, tau, grid);
  r.nano_invest = nano_invest_bound(rho, sigma, tau, grid);
  if (transition != nullptr) r.recovery_fidelity_bound = recovery_gain_bound(rho, sigma, *transition).bound;
  return r;
}

}  // namespace thermorec

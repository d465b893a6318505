#include "billiard/spline.hpp"

#include <algorithm>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "billiard/error.hpp"

namespace billiard {

struct NaturalSpline::Impl {
  gsl_spline* spline = nullptr;
  ~Impl() { gsl_spline_free(spline); }
};

NaturalSpline::NaturalSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  if (x_.size() != y_.size()) throw InvalidInput("spline: knot and value arrays differ in length");
  if (x_.size() < 3) throw InvalidInput("spline: need at least 3 knots");
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw InvalidInput("spline: knots must be strictly increasing");
  }
  gsl_set_error_handler_off();
  auto impl = std::make_shared<Impl>();
  impl->spline = gsl_spline_alloc(gsl_interp_cspline, x_.size());
  if (impl->spline == nullptr) throw NumericalError("spline: allocation failed");
  if (gsl_spline_init(impl->spline, x_.data(), y_.data(), x_.size()) != GSL_SUCCESS) {
    throw NumericalError("spline: initialization failed");
  }
  impl_ = std::move(impl);
}

double NaturalSpline::clamp(double x) const noexcept { return std::clamp(x, x_.front(), x_.back()); }

// A null accelerator keeps evaluation re-entrant.
double NaturalSpline::value(double x) const { return gsl_spline_eval(impl_->spline, clamp(x), nullptr); }

double NaturalSpline::slope(double x) const { return gsl_spline_eval_deriv(impl_->spline, clamp(x), nullptr); }

}  // namespace billiard

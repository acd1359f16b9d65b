#ifndef D2DOPT_QUADRATURE_HPP
#define D2DOPT_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dopt {

template <typename Scalar>
struct QuadratureResult {
  Scalar value{};
  Scalar abs_error{};
  std::size_t intervals = 0;
  bool converged = false;
};

/// Raised when adaptive refinement runs out of intervals before meeting the
/// requested tolerance. Keeps the best value and its error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double value, double abs_error)
      : std::runtime_error("quadrature did not converge: value " + std::to_string(value) +
                           ", error estimate " + std::to_string(abs_error)),
        value_(value),
        abs_error_(abs_error) {}

  double value() const noexcept { return value_; }
  double abs_error() const noexcept { return abs_error_; }

 private:
  double value_;
  double abs_error_;
};

namespace detail {

// 15-point Kronrod abscissae on [-1, 1] (positive half, descending) with the
// embedded 7-point Gauss rule on the odd-indexed nodes and the centre.
template <typename Scalar>
struct GaussKronrod15 {
  static constexpr Scalar nodes[8] = {
      Scalar(0.991455371120812639206854697526329L), Scalar(0.949107912342758524526189684047851L),
      Scalar(0.864864423359769072789712788640926L), Scalar(0.741531185599394439863864773280788L),
      Scalar(0.586087235467691130294144845693013L), Scalar(0.405845151377397166906606412076961L),
      Scalar(0.207784955007898467600689403773245L), Scalar(0)};
  static constexpr Scalar kronrod_weights[8] = {
      Scalar(0.022935322010529224963732008058970L), Scalar(0.063092092629978553290700663189204L),
      Scalar(0.104790010322250183839876322541518L), Scalar(0.140653259715525918745189590510238L),
      Scalar(0.169004726639267902826583426598550L), Scalar(0.190350578064785409913256402421014L),
      Scalar(0.204432940075298892414161999234649L), Scalar(0.209482141084727828012999174891714L)};
  static constexpr Scalar gauss_weights[4] = {
      Scalar(0.129484966168869693270611432679082L), Scalar(0.279705391489276667901467771423780L),
      Scalar(0.381830050505118944950369775488975L), Scalar(0.417959183673469387755102040816327L)};
};

template <typename Scalar>
struct Segment {
  Scalar lower;
  Scalar upper;
  Scalar value;
  Scalar error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename Scalar, typename Func>
Segment<Scalar> kronrod_segment(const Func& f, Scalar lower, Scalar upper) {
  using Rule = GaussKronrod15<Scalar>;
  const Scalar centre = (lower + upper) / 2;
  const Scalar half = (upper - lower) / 2;

  const Scalar f_centre = static_cast<Scalar>(f(centre));
  Scalar kronrod = Rule::kronrod_weights[7] * f_centre;
  Scalar gauss = Rule::gauss_weights[3] * f_centre;
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = half * Rule::nodes[i];
    const Scalar pair = static_cast<Scalar>(f(centre - dx)) + static_cast<Scalar>(f(centre + dx));
    kronrod += Rule::kronrod_weights[i] * pair;
    if (i % 2 == 1) gauss += Rule::gauss_weights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lower, upper, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of f over the
/// partition given by increasing breakpoints. The segment with the largest
/// error estimate is bisected until the summed error drops below
/// max(abs_tol, rel_tol * |I|).
template <typename Scalar, typename Func>
QuadratureResult<Scalar> integrate_adaptive(const Func& f, std::span<const Scalar> breakpoints,
                                            Scalar abs_tol, Scalar rel_tol,
                                            std::size_t max_intervals = 2000) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_adaptive: need two breakpoints");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw std::invalid_argument("integrate_adaptive: breakpoints must be increasing");
  }
  std::vector<detail::Segment<Scalar>> segments;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i] > breakpoints[i - 1]) {
      segments.push_back(detail::kronrod_segment<Scalar>(f, breakpoints[i - 1], breakpoints[i]));
    }
  }
  if (segments.empty()) return {Scalar(0), Scalar(0), 0, true};

  const auto resum = [&](Scalar& total, Scalar& error) {
    // Re-summing avoids drift from repeated add/subtract of large values.
    total = 0;
    error = 0;
    for (const auto& s : segments) {
      total += s.value;
      error += s.error;
    }
  };
  Scalar total;
  Scalar error;
  resum(total, error);

  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (segments.size() >= max_intervals) {
      return {total, error, segments.size(), false};
    }
    auto worst = std::max_element(segments.begin(), segments.end());
    const auto split = *worst;
    const Scalar mid = (split.lower + split.upper) / 2;
    *worst = detail::kronrod_segment<Scalar>(f, split.lower, mid);
    segments.push_back(detail::kronrod_segment<Scalar>(f, mid, split.upper));
    resum(total, error);
  }
  return {total, error, segments.size(), true};
}

template <typename Scalar, typename Func>
QuadratureResult<Scalar> integrate_adaptive(const Func& f, Scalar lower, Scalar upper,
                                            Scalar abs_tol, Scalar rel_tol,
                                            std::size_t max_intervals = 2000) {
  if (!(upper >= lower)) return {Scalar(0), Scalar(0), 0, false};
  const Scalar ends[2] = {lower, upper};
  return integrate_adaptive<Scalar>(f, std::span<const Scalar>(ends), abs_tol, rel_tol,
                                    max_intervals);
}

}  // namespace d2dopt

#endif  // D2DOPT_QUADRATURE_HPP

#pragma once

// Tiny grammar for concrete functions on [0,1]:
//   const:<v>                  v
//   linear:<a>,<b>             a + b x
//   sine:<amp>,<freq>[,<off>]  off + amp sin(2 pi freq x), off defaults to 1/2
//   file:<path>                equally spaced samples on [0,1], cubic B-spline

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "slred/core.hpp"

namespace slred {

struct FunctionSpec {
  std::string text;
  double level = 0.0;                      // constant part
  std::function<double(double)> deviation;  // null when constant
  SupBounds bounds;                        // of the whole function
  SupBounds deviation_bounds;              // of the non-constant part
  double feature_width = 1.0;

  double operator()(double x) const { return level + (deviation ? deviation(x) : 0.0); }

  Potential potential() const {
    if (!deviation) return Potential::constant(level);
    return Potential(level, deviation, bounds, deviation_bounds.max(), feature_width);
  }

  SmoothIntegrand integrand() const {
    auto self = *this;
    return SmoothIntegrand{[self](double x) { return self(x); }, std::max(bounds.max(), 1e-300), feature_width};
  }
};

namespace detail {

inline std::vector<double> parse_numbers(const std::string& args, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw input_error("bad number '" + item + "' in '" + text + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw input_error("bad number '" + item + "' in '" + text + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline FunctionSpec parse_function(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw input_error("function must look like kind:args, got '" + text + "'");
  const std::string kind = text.substr(0, colon), args = text.substr(colon + 1);
  FunctionSpec f;
  f.text = text;

  if (kind == "const") {
    const auto v = detail::parse_numbers(args, text);
    if (v.size() != 1) throw input_error("const takes one value");
    f.level = v[0];
    f.bounds = {std::abs(v[0]), 0.0, 0.0};
    return f;
  }
  if (kind == "linear") {
    const auto v = detail::parse_numbers(args, text);
    if (v.size() != 2) throw input_error("linear takes a,b");
    const double a = v[0], b = v[1];
    f.level = a;
    if (b != 0.0) f.deviation = [b](double x) { return b * x; };
    f.bounds = {std::max(std::abs(a), std::abs(a + b)), std::abs(b), 0.0};
    f.deviation_bounds = {std::abs(b), std::abs(b), 0.0};
    return f;
  }
  if (kind == "sine") {
    const auto v = detail::parse_numbers(args, text);
    if (v.size() != 2 && v.size() != 3) throw input_error("sine takes amp,freq[,offset]");
    const double amp = v[0], w = 2.0 * std::numbers::pi * v[1];
    f.level = v.size() == 3 ? v[2] : 0.5;
    if (amp != 0.0) f.deviation = [amp, w](double x) { return amp * std::sin(w * x); };
    f.deviation_bounds = {std::abs(amp), std::abs(amp * w), std::abs(amp * w * w)};
    f.bounds = {std::abs(f.level) + std::abs(amp), f.deviation_bounds.first, f.deviation_bounds.second};
    if (v[1] != 0.0) f.feature_width = std::min(1.0, 0.25 / std::abs(v[1]));
    return f;
  }
  if (kind == "file") {
    std::ifstream in(args);
    if (!in) throw input_error("cannot open '" + args + "'");
    std::vector<double> ys;
    std::string tok;
    while (in >> tok) ys.push_back(detail::parse_numbers(tok, text).at(0));
    if (ys.size() < 5) throw input_error("file: needs at least 5 samples");
    const double h = 1.0 / static_cast<double>(ys.size() - 1);
    // fourth-order one-sided slopes at the ends; the default estimate is cruder
    const std::size_t e = ys.size() - 1;
    const double left = (-25 * ys[0] + 48 * ys[1] - 36 * ys[2] + 16 * ys[3] - 3 * ys[4]) / (12 * h);
    const double right = (25 * ys[e] - 48 * ys[e - 1] + 36 * ys[e - 2] - 16 * ys[e - 3] + 3 * ys[e - 4]) / (12 * h);
    auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(ys.begin(), ys.end(), 0.0, h,
                                                                                                 left, right);
    f.deviation = [spline](double x) { return (*spline)(std::clamp(x, 0.0, 1.0)); };
    constexpr int grid = 1 << 14;
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      f.bounds.value = std::max(f.bounds.value, std::abs((*spline)(x)));
      f.bounds.first = std::max(f.bounds.first, std::abs(spline->prime(x)));
      f.bounds.second = std::max(f.bounds.second, std::abs(spline->double_prime(x)));
    }
    f.deviation_bounds = f.bounds;
    f.feature_width = std::min(1.0, 4.0 * h);
    return f;
  }
  throw input_error("unknown function kind '" + kind + "' (const, linear, sine, file)");
}

}  // namespace slred

#pragma once

// Entropy curves on the keep-probability axis: the `p,ent` CSV format,
// imported collective-attack bounds, and where the coherent attack beats them.

#include "rps/exact_analysis.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rps {

struct CurvePoint {
  double p;
  double ent;
};

/// Thrown for malformed curve files; line() is 1-based.
class CurveParseError : public std::runtime_error {
 public:
  CurveParseError(std::size_t line, const std::string& what, const std::string& source = "")
      : std::runtime_error((source.empty() ? "" : source + ": ") + "line " +
                           std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Externally computed lower bound on the collective-attack entropy.
/// p strictly increasing in [0,1], ent in [0,1].
class IidCurve {
 public:
  explicit IidCurve(std::vector<CurvePoint> points);
  std::span<const CurvePoint> points() const { return points_; }

 private:
  std::vector<CurvePoint> points_;
};

/// Parses a file with header `p,ent` followed by at least two rows.
std::vector<CurvePoint> parse_curve_csv(std::istream& in);
std::vector<CurvePoint> read_curve_csv(const std::string& path);

/// Writes header and rows with 17 significant digits.
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);

std::vector<CurvePoint> to_curve(std::span<const SweepPoint<double>> sweep);
std::vector<SweepPoint<double>> to_sweep(std::span<const CurvePoint> curve);

/// Piecewise-linear interpolation; p must be inside the curve's range.
double interpolate(std::span<const CurvePoint> curve, double p);

struct PInterval {
  double low;
  double high;
};

/// Maximal intervals of the common p-range where the linearly interpolated
/// gap (iid - attack) is strictly positive.
std::vector<PInterval> crossover_region(std::span<const SweepPoint<double>> attack,
                                        const IidCurve& iid);

struct GapExtremum {
  double p;
  double gap;  // iid - attack
};

/// Largest (iid - attack) over the common range. Both curves are piecewise
/// linear, so the maximum sits on a breakpoint; ties go to the smallest p.
GapExtremum max_gap(std::span<const SweepPoint<double>> attack, const IidCurve& iid);

}  // namespace rps

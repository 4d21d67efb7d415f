#include "rps/crossover.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <system_error>

namespace rps {

namespace {

void check_strictly_increasing(std::span<const CurvePoint> pts, const char* what) {
  if (pts.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": need at least two points");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].p > pts[i - 1].p)) {
      throw std::invalid_argument(std::string(what) + ": p column is not strictly increasing");
    }
  }
}

bool parse_double(std::string_view field, double& value) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

struct Overlap {
  double lo;
  double hi;
  std::vector<double> breakpoints;
  std::vector<double> gaps;
};

Overlap overlap(std::span<const SweepPoint<double>> attack, const IidCurve& iid) {
  const std::vector<CurvePoint> attack_curve = to_curve(attack);
  check_strictly_increasing(attack_curve, "attack curve");
  const auto iid_pts = iid.points();

  Overlap o;
  o.lo = std::max(attack_curve.front().p, iid_pts.front().p);
  o.hi = std::min(attack_curve.back().p, iid_pts.back().p);
  if (!(o.lo < o.hi)) {
    throw std::invalid_argument("attack and iid curves have no overlapping p-range");
  }
  o.breakpoints = {o.lo, o.hi};
  for (const auto& c : attack_curve) {
    if (c.p > o.lo && c.p < o.hi) o.breakpoints.push_back(c.p);
  }
  for (const auto& c : iid_pts) {
    if (c.p > o.lo && c.p < o.hi) o.breakpoints.push_back(c.p);
  }
  std::sort(o.breakpoints.begin(), o.breakpoints.end());
  o.breakpoints.erase(std::unique(o.breakpoints.begin(), o.breakpoints.end()),
                      o.breakpoints.end());
  o.gaps.reserve(o.breakpoints.size());
  for (const double q : o.breakpoints) {
    o.gaps.push_back(interpolate(iid_pts, q) - interpolate(attack_curve, q));
  }
  return o;
}

}  // namespace

IidCurve::IidCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
  check_strictly_increasing(points_, "iid curve");
  for (const auto& c : points_) {
    if (!(c.p >= 0.0 && c.p <= 1.0)) {
      throw std::invalid_argument("iid curve: p outside [0,1]");
    }
    if (!(c.ent >= 0.0 && c.ent <= 1.0)) {
      throw std::invalid_argument("iid curve: entropy outside [0,1]");
    }
  }
}

std::vector<CurvePoint> parse_curve_csv(std::istream& in) {
  std::vector<CurvePoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line != "p,ent") {
        throw CurveParseError(line_no, "expected header `p,ent`, got `" + line + "`");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw CurveParseError(line_no, "expected two comma-separated fields");
    }
    CurvePoint pt{};
    const std::string_view view(line);
    if (!parse_double(view.substr(0, comma), pt.p) ||
        !parse_double(view.substr(comma + 1), pt.ent)) {
      throw CurveParseError(line_no, "invalid number in `" + line + "`");
    }
    if (!points.empty() && !(pt.p > points.back().p)) {
      throw CurveParseError(line_no, "p column is not strictly increasing");
    }
    points.push_back(pt);
  }
  if (!saw_header) throw CurveParseError(1, "empty file, expected header `p,ent`");
  if (points.size() < 2) {
    throw CurveParseError(line_no, "need at least two data rows");
  }
  return points;
}

std::vector<CurvePoint> read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_curve_csv(in);
  } catch (const CurveParseError& e) {
    throw CurveParseError(e.line(), e.detail(), path);
  }
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
  out << "p,ent\n";
  out << std::setprecision(17);
  for (const auto& pt : points) out << pt.p << ',' << pt.ent << '\n';
}

std::vector<CurvePoint> to_curve(std::span<const SweepPoint<double>> sweep) {
  std::vector<CurvePoint> out;
  out.reserve(sweep.size());
  for (const auto& s : sweep) out.push_back({s.p, s.entropy_per_round});
  return out;
}

std::vector<SweepPoint<double>> to_sweep(std::span<const CurvePoint> curve) {
  std::vector<SweepPoint<double>> out;
  out.reserve(curve.size());
  for (const auto& c : curve) out.push_back({c.p, c.ent});
  return out;
}

double interpolate(std::span<const CurvePoint> curve, double p) {
  if (curve.empty() || p < curve.front().p || p > curve.back().p) {
    throw std::out_of_range("interpolate: p outside curve range");
  }
  auto it = std::upper_bound(curve.begin(), curve.end(), p,
                             [](double v, const CurvePoint& c) { return v < c.p; });
  if (it == curve.end()) return curve.back().ent;
  if (it == curve.begin()) return curve.front().ent;
  const CurvePoint& right = *it;
  const CurvePoint& left = *(it - 1);
  if (p == left.p) return left.ent;
  const double w = (p - left.p) / (right.p - left.p);
  return left.ent + w * (right.ent - left.ent);
}

std::vector<PInterval> crossover_region(std::span<const SweepPoint<double>> attack,
                                        const IidCurve& iid) {
  const Overlap o = overlap(attack, iid);
  const auto& q = o.breakpoints;
  const auto& d = o.gaps;

  std::vector<PInterval> out;
  bool open = d.front() > 0.0;
  double start = q.front();
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    const double d0 = d[k];
    const double d1 = d[k + 1];
    if (open && d1 <= 0.0) {
      out.push_back({start, q[k] + (q[k + 1] - q[k]) * d0 / (d0 - d1)});
      open = false;
    } else if (!open && d1 > 0.0) {
      start = d0 == 0.0 ? q[k] : q[k] + (q[k + 1] - q[k]) * d0 / (d0 - d1);
      open = true;
    }
  }
  if (open) out.push_back({start, q.back()});
  return out;
}

GapExtremum max_gap(std::span<const SweepPoint<double>> attack, const IidCurve& iid) {
  const Overlap o = overlap(attack, iid);
  GapExtremum best{o.breakpoints.front(), o.gaps.front()};
  for (std::size_t k = 1; k < o.gaps.size(); ++k) {
    if (o.gaps[k] > best.gap) best = {o.breakpoints[k], o.gaps[k]};
  }
  return best;
}

}  // namespace rps

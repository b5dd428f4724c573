#ifndef LEXACQ_BITEXT_GEOMETRY_HPP
#define LEXACQ_BITEXT_GEOMETRY_HPP

#include "lexacq/corpus_io.hpp"

#include <map>
#include <set>
#include <span>
#include <vector>

namespace lexacq {

struct bitext_space
{
  position width = 0;   // characters in half A
  position height = 0;  // characters in half B

  bitext_space() = default;
  bitext_space(position w, position h);

  double slope() const { return static_cast<double>(height) / static_cast<double>(width); }
  bool contains(position x, position y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

struct correspondence_point
{
  position x = 0;
  position y = 0;

  friend bool operator==(const correspondence_point&, const correspondence_point&) = default;
  friend auto operator<=>(const correspondence_point&, const correspondence_point&) = default;
};

// Injective partial function between character positions of the two halves.
class bitext_map
{
public:
  // False if x or y is already used.
  bool try_insert(correspondence_point p);
  // Throws injectivity_error on conflict.
  void insert(correspondence_point p);

  bool contains_x(position x) const { return by_x_.count(x) != 0; }
  bool contains_y(position y) const { return ys_.count(y) != 0; }
  std::size_t size() const noexcept { return by_x_.size(); }
  bool empty() const noexcept { return by_x_.empty(); }

  // Sorted by x.
  std::vector<correspondence_point> points() const;

private:
  std::map<position, position> by_x_;
  std::set<position> ys_;
};

// Points strictly increasing in both coordinates.
class monotonic_map
{
public:
  monotonic_map() = default;
  // Throws argument_error unless strictly increasing in x and y.
  explicit monotonic_map(std::vector<correspondence_point> points);

  const std::vector<correspondence_point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

private:
  std::vector<correspondence_point> points_;
};

// Each minimal non-monotonic set is replaced by the lower-left and
// upper-right corners of its minimum enclosing rectangle; every point that
// is monotonic with respect to all others is kept as is.
monotonic_map monotonize(const bitext_map& map);
monotonic_map monotonize(std::span<const correspondence_point> points);

// Piecewise-linear interpolation through the map points, extended to the
// origin corner before the first point and to the terminal corner after the
// last one.
class interpolator
{
public:
  interpolator(const monotonic_map& map, const bitext_space& space);

  double operator()(double x) const;

  // Value on anchor segment `segment` (anchors[segment] .. anchors[segment+1]).
  double on_segment(std::size_t segment, double x) const;
  // Index of the segment that owns x; x is clamped to the outer segments.
  std::size_t segment_of(double x) const;

  const std::vector<correspondence_point>& anchors() const noexcept { return anchors_; }

private:
  std::vector<correspondence_point> anchors_;
};

double interpolate(const monotonic_map& map, const bitext_space& space, double x);

} // namespace lexacq

#endif

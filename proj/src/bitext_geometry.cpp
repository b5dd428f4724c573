#include "lexacq/bitext_geometry.hpp"

#include "lexacq/error.hpp"

#include <algorithm>
#include <limits>

namespace lexacq {

bitext_space::bitext_space(position w, position h) : width(w), height(h)
{
  if (w <= 0 || h <= 0)
    throw argument_error("bitext space needs positive width and height");
}

bool bitext_map::try_insert(correspondence_point p)
{
  if (by_x_.count(p.x) || ys_.count(p.y))
    return false;
  by_x_.emplace(p.x, p.y);
  ys_.insert(p.y);
  return true;
}

void bitext_map::insert(correspondence_point p)
{
  if (!try_insert(p))
    throw injectivity_error("point (" + std::to_string(p.x) + "," + std::to_string(p.y)
                            + ") reuses an x or y coordinate");
}

std::vector<correspondence_point> bitext_map::points() const
{
  std::vector<correspondence_point> out;
  out.reserve(by_x_.size());
  for (const auto& [x, y] : by_x_)
    out.push_back({x, y});
  return out;
}

monotonic_map::monotonic_map(std::vector<correspondence_point> points) : points_(std::move(points))
{
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (points_[i].x <= points_[i - 1].x || points_[i].y <= points_[i - 1].y)
      throw argument_error("monotonic map points must increase strictly in x and y");
}

monotonic_map monotonize(std::span<const correspondence_point> input)
{
  std::vector<correspondence_point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  {
    std::vector<position> ys;
    ys.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0 && pts[i].x == pts[i - 1].x)
        throw argument_error("monotonize needs an injective point set (repeated x)");
      ys.push_back(pts[i].y);
    }
    std::sort(ys.begin(), ys.end());
    if (std::adjacent_find(ys.begin(), ys.end()) != ys.end())
      throw argument_error("monotonize needs an injective point set (repeated y)");
  }

  const std::size_t n = pts.size();
  if (n == 0)
    return {};

  // A block ends after i when everything up to i lies below everything after
  // it. Blocks of one point are monotonic; larger blocks are the minimal
  // non-monotonic sets.
  std::vector<position> suffix_min(n);
  suffix_min[n - 1] = pts[n - 1].y;
  for (std::size_t i = n - 1; i-- > 0;)
    suffix_min[i] = std::min(pts[i].y, suffix_min[i + 1]);

  std::vector<correspondence_point> out;
  out.reserve(n);
  std::size_t block_start = 0;
  position prefix_max = std::numeric_limits<position>::min();
  position block_min_y = std::numeric_limits<position>::max();
  for (std::size_t i = 0; i < n; ++i) {
    prefix_max = std::max(prefix_max, pts[i].y);
    block_min_y = std::min(block_min_y, pts[i].y);
    if (i + 1 < n && prefix_max >= suffix_min[i + 1])
      continue;

    if (i == block_start) {
      out.push_back(pts[i]);
    } else {
      out.push_back({pts[block_start].x, block_min_y});
      out.push_back({pts[i].x, prefix_max});
    }
    block_start = i + 1;
    block_min_y = std::numeric_limits<position>::max();
  }
  return monotonic_map(std::move(out));
}

monotonic_map monotonize(const bitext_map& map)
{
  const auto pts = map.points();
  return monotonize(std::span<const correspondence_point>(pts));
}

interpolator::interpolator(const monotonic_map& map, const bitext_space& space)
{
  if (map.empty())
    throw undefined_map_error();
  const auto& pts = map.points();
  if (pts.front().x > 0 && pts.front().y >= 0)
    anchors_.push_back({0, 0});
  anchors_.insert(anchors_.end(), pts.begin(), pts.end());
  if (space.width > pts.back().x && space.height >= pts.back().y)
    anchors_.push_back({space.width, space.height});
}

std::size_t interpolator::segment_of(double x) const
{
  if (anchors_.size() < 2)
    return 0;
  // First anchor strictly right of x, then step back to the owning segment.
  const auto it = std::upper_bound(anchors_.begin(), anchors_.end(), x,
                                   [](double v, const correspondence_point& p) { return v < static_cast<double>(p.x); });
  std::size_t idx = static_cast<std::size_t>(it - anchors_.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, anchors_.size() - 2);
}

double interpolator::on_segment(std::size_t segment, double x) const
{
  if (anchors_.size() < 2)
    return static_cast<double>(anchors_.front().y);
  const auto& a = anchors_[segment];
  const auto& b = anchors_[segment + 1];
  const double dx = static_cast<double>(b.x - a.x);
  const double dy = static_cast<double>(b.y - a.y);
  return static_cast<double>(a.y) + (x - static_cast<double>(a.x)) * dy / dx;
}

double interpolator::operator()(double x) const
{
  return on_segment(segment_of(x), x);
}

double interpolate(const monotonic_map& map, const bitext_space& space, double x)
{
  return interpolator(map, space)(x);
}

} // namespace lexacq

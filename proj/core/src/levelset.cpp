#include "sirlyap/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Grid {
  std::size_t nu;
  std::size_t nv;
  double u0;
  double v0;
  double du;
  double dv;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[j * nu + i]; }
  double u(std::size_t i) const { return u0 + du * static_cast<double>(i); }
  double v(std::size_t j) const { return v0 + dv * static_cast<double>(j); }
};

class ContourTracer {
 public:
  ContourTracer(const PlaneField& field, const Grid& grid, double level)
      : field_(field), grid_(grid), level_(level) {}

  std::vector<Polyline> trace() {
    const std::size_t nu = grid_.nu;
    const std::size_t nv = grid_.nv;
    for (std::size_t j = 0; j + 1 < nv; ++j) {
      for (std::size_t i = 0; i + 1 < nu; ++i) {
        process_cell(i, j);
      }
    }
    return stitch();
  }

 private:
  bool inside(std::size_t i, std::size_t j) const { return grid_.at(i, j) < level_; }

  std::size_t h_edge(std::size_t i, std::size_t j) const { return j * grid_.nu + i; }
  std::size_t v_edge(std::size_t i, std::size_t j) const {
    return grid_.nu * grid_.nv + j * grid_.nu + i;
  }

  void link(std::size_t a, std::size_t b) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }

  void process_cell(std::size_t i, std::size_t j) {
    const bool in0 = inside(i, j);
    const bool in1 = inside(i + 1, j);
    const bool in2 = inside(i + 1, j + 1);
    const bool in3 = inside(i, j + 1);
    const int code = (in0 ? 1 : 0) | (in1 ? 2 : 0) | (in2 ? 4 : 0) | (in3 ? 8 : 0);
    if (code == 0 || code == 15) return;

    const std::size_t e0 = h_edge(i, j);
    const std::size_t e1 = v_edge(i + 1, j);
    const std::size_t e2 = h_edge(i, j + 1);
    const std::size_t e3 = v_edge(i, j);

    if (code == 5 || code == 10) {
      const double c = 0.25 * (grid_.at(i, j) + grid_.at(i + 1, j) +
                               grid_.at(i + 1, j + 1) + grid_.at(i, j + 1));
      const bool center_in = std::isfinite(c) && c < level_;
      if ((code == 5) == center_in) {
        link(e0, e1);
        link(e2, e3);
      } else {
        link(e3, e0);
        link(e1, e2);
      }
      return;
    }
    std::vector<std::size_t> crossing;
    if (in0 != in1) crossing.push_back(e0);
    if (in1 != in2) crossing.push_back(e1);
    if (in3 != in2) crossing.push_back(e2);
    if (in0 != in3) crossing.push_back(e3);
    if (crossing.size() == 2) link(crossing[0], crossing[1]);
  }

  Point2 edge_point(std::size_t id) {
    const std::size_t n_h = grid_.nu * grid_.nv;
    std::size_t ia, ja, ib, jb;
    if (id < n_h) {
      ia = id % grid_.nu;
      ja = id / grid_.nu;
      ib = ia + 1;
      jb = ja;
    } else {
      ia = (id - n_h) % grid_.nu;
      ja = (id - n_h) / grid_.nu;
      ib = ia;
      jb = ja + 1;
    }
    const Point2 a{grid_.u(ia), grid_.v(ja)};
    const Point2 b{grid_.u(ib), grid_.v(jb)};
    double ga = grid_.at(ia, ja) - level_;
    double gb = grid_.at(ib, jb) - level_;
    // Bracket [s_in, s_out] with g(s_in) < 0 <= g(s_out); g(s_out) may be +inf.
    double s_in = 0.0;
    double s_out = 1.0;
    double g_in = ga;
    double g_out = gb;
    if (!(ga < 0.0)) {
      std::swap(s_in, s_out);
      std::swap(g_in, g_out);
    }
    auto eval = [&](double s) {
      return field_(a.u + s * (b.u - a.u), a.v + s * (b.v - a.v)) - level_;
    };
    double s = std::isfinite(g_out) ? s_in + g_in / (g_in - g_out) * (s_out - s_in)
                                    : 0.5 * (s_in + s_out);
    int kept_in = 0;
    int kept_out = 0;
    for (int it = 0; it < 200; ++it) {
      const double g = eval(s);
      if (std::abs(g) <= 1e-12 * (1.0 + std::abs(level_))) break;
      if (g < 0.0) {
        s_in = s;
        g_in = g;
        kept_in = 0;
        if (++kept_out >= 2 && std::isfinite(g_out)) g_out *= 0.5;
      } else {
        s_out = s;
        g_out = g;
        kept_out = 0;
        if (++kept_in >= 2) g_in *= 0.5;
      }
      if (std::abs(s_out - s_in) <= 1e-15) break;
      const bool use_secant = std::isfinite(g_out) && it % 4 != 3;
      s = use_secant ? s_in + g_in / (g_in - g_out) * (s_out - s_in)
                     : 0.5 * (s_in + s_out);
      if (!(s > std::min(s_in, s_out) && s < std::max(s_in, s_out))) {
        s = 0.5 * (s_in + s_out);
      }
    }
    if (std::abs(eval(s)) > std::abs(g_in) && std::abs(g_in) < kInf) s = s_in;
    return {a.u + s * (b.u - a.u), a.v + s * (b.v - a.v)};
  }

  std::vector<Polyline> stitch() {
    std::vector<Polyline> lines;
    std::unordered_map<std::size_t, bool> visited;
    auto walk = [&](std::size_t start) {
      Polyline line;
      std::size_t prev = start;
      std::size_t cur = start;
      visited[cur] = true;
      line.push_back(edge_point(cur));
      while (true) {
        std::size_t next = cur;
        bool found = false;
        for (std::size_t nb : adjacency_[cur]) {
          if (!visited[nb]) {
            next = nb;
            found = true;
            break;
          }
        }
        if (!found) {
          const auto& nbs = adjacency_[cur];
          const bool loops = line.size() > 2 &&
                             std::find(nbs.begin(), nbs.end(), start) != nbs.end() &&
                             prev != start;
          if (loops) line.push_back(line.front());
          break;
        }
        visited[next] = true;
        line.push_back(edge_point(next));
        prev = cur;
        cur = next;
      }
      lines.push_back(std::move(line));
    };
    std::vector<std::size_t> ids;
    ids.reserve(adjacency_.size());
    for (const auto& kv : adjacency_) ids.push_back(kv.first);
    std::sort(ids.begin(), ids.end());
    for (std::size_t id : ids) {
      if (adjacency_[id].size() == 1 && !visited[id]) walk(id);
    }
    for (std::size_t id : ids) {
      if (!visited[id]) walk(id);
    }
    return lines;
  }

  const PlaneField& field_;
  const Grid& grid_;
  double level_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> adjacency_;
};

Deviation to_deviation(const Plane& plane, double u, double v) {
  if (plane.fixed == Plane::Fixed::X3) return {u, v, plane.value};
  return {u, plane.value, v};
}

void check_window(const Plane& plane, const Window& w, const Resolution& res) {
  if (res.nu < 2 || res.nv < 2) throw DomainError("resolution must be at least 2x2");
  if (!(w.u_max > w.u_min && w.v_max > w.v_min)) {
    throw DomainError("window must have positive extent");
  }
  (void)plane;
}

}  // namespace

std::vector<Contour> extract_contours(const PlaneField& field,
                                      const std::vector<double>& levels,
                                      const Plane& plane, const Window& window,
                                      const Resolution& res) {
  check_window(plane, window, res);
  Grid grid{res.nu,
            res.nv,
            window.u_min,
            window.v_min,
            (window.u_max - window.u_min) / static_cast<double>(res.nu - 1),
            (window.v_max - window.v_min) / static_cast<double>(res.nv - 1),
            {}};
  grid.values.resize(res.nu * res.nv);
  for (std::size_t j = 0; j < res.nv; ++j) {
    for (std::size_t i = 0; i < res.nu; ++i) {
      grid.values[j * res.nu + i] = field(grid.u(i), grid.v(j));
    }
  }
  std::vector<Contour> out;
  for (double level : levels) {
    Contour c;
    c.level = level;
    c.plane = plane;
    if (level <= 0.0) {
      const bool origin_in_window = window.u_min <= 0.0 && 0.0 <= window.u_max &&
                                    window.v_min <= 0.0 && 0.0 <= window.v_max;
      if (origin_in_window && field(0.0, 0.0) == 0.0) c.point_marker = Point2{0.0, 0.0};
    } else {
      c.polylines = ContourTracer(field, grid, level).trace();
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Contour> extract_contours(const LyapunovFunction& lyap,
                                      const std::vector<double>& levels,
                                      const Plane& plane, const Window& window,
                                      const Resolution& res) {
  check_window(plane, window, res);
  const State& xh = lyap_equilibrium(lyap).point;
  const bool fixed3 = plane.fixed == Plane::Fixed::X3;
  const double lo1 = -xh.s;
  const double lo2 = -xh.i;
  const double lo3 = -xh.r;
  const double fixed_lo = fixed3 ? lo3 : lo2;
  const double free_lo = fixed3 ? lo2 : lo3;
  const bool endemic = std::holds_alternative<EndemicLyapunov>(lyap);
  const bool strict_x2 = endemic;
  bool ok = window.u_min >= lo1 && plane.value >= fixed_lo && window.v_min >= free_lo;
  if (strict_x2) {
    if (fixed3 && !(window.v_min > lo2)) ok = false;
    if (!fixed3 && !(plane.value > lo2)) ok = false;
  }
  if (!ok) throw DomainError("contour window leaves the domain of the Lyapunov function");

  PlaneField field;
  if (const auto* en = std::get_if<EndemicLyapunov>(&lyap)) {
    field = [en, plane](double u, double v) {
      const Deviation d = to_deviation(plane, u, v);
      return en->in_H(d) ? en->value(d) : kInf;
    };
  } else {
    const auto* df = &std::get<DiseaseFreeLyapunov>(lyap);
    field = [df, plane](double u, double v) { return df->value(to_deviation(plane, u, v)); };
  }
  return extract_contours(field, levels, plane, window, res);
}

Contour analytic_contour_df(const DiseaseFreeLyapunov& lyap, double level,
                            double x3) {
  if (!(level > 0.0)) throw DomainError("analytic contour needs level > 0");
  if (x3 < 0.0) throw DomainError("disease-free plane needs x3 >= 0");
  Contour c;
  c.level = level;
  c.plane = Plane{Plane::Fixed::X3, x3};
  const double m = level - lyap.params().lambda3 * x3;
  if (!(m > 0.0)) return c;
  const double x1_floor = -lyap.equilibrium().point.s;
  const double x1_c = lyap.bc_boundary(m, x3);
  Polyline line{{m, 0.0}, {0.0, m}};
  if (x1_c >= x1_floor) {
    line.push_back({x1_c, m});
    line.push_back({x1_c, 0.0});
  } else {
    line.push_back({x1_floor, m});
  }
  c.polylines.push_back(std::move(line));
  return c;
}

double distance_to_contour(const Contour& contour, const Point2& q) {
  double best = kInf;
  for (const Polyline& line : contour.polylines) {
    if (line.size() == 1) {
      best = std::min(best, std::hypot(q.u - line[0].u, q.v - line[0].v));
    }
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      const Point2 a = line[k];
      const Point2 b = line[k + 1];
      const double du = b.u - a.u;
      const double dv = b.v - a.v;
      const double len2 = du * du + dv * dv;
      double t = len2 > 0.0 ? ((q.u - a.u) * du + (q.v - a.v) * dv) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, std::hypot(q.u - (a.u + t * du), q.v - (a.v + t * dv)));
    }
  }
  return best;
}

bool is_closed(const Polyline& line, double tol) {
  return line.size() >= 4 &&
         std::hypot(line.front().u - line.back().u, line.front().v - line.back().v) <= tol;
}

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
         ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

struct Segment {
  Point2 a;
  Point2 b;
  double u_lo, u_hi, v_lo, v_hi;
};

std::vector<Segment> segments_of(const Contour& c) {
  std::vector<Segment> out;
  for (const Polyline& line : c.polylines) {
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      const Point2 a = line[k];
      const Point2 b = line[k + 1];
      out.push_back({a, b, std::min(a.u, b.u), std::max(a.u, b.u), std::min(a.v, b.v),
                     std::max(a.v, b.v)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Segment& x, const Segment& y) { return x.u_lo < y.u_lo; });
  return out;
}

}  // namespace

bool contours_cross(const Contour& a, const Contour& b) {
  const std::vector<Segment> sa = segments_of(a);
  const std::vector<Segment> sb = segments_of(b);
  for (const Segment& x : sa) {
    for (const Segment& y : sb) {
      if (y.u_lo > x.u_hi) break;
      if (y.u_hi < x.u_lo || y.v_hi < x.v_lo || y.v_lo > x.v_hi) continue;
      if (segments_cross(x.a, x.b, y.a, y.b)) return true;
    }
  }
  return false;
}

void write_contours_csv(std::ostream& os, const std::vector<Contour>& contours,
                        const Equilibrium* absolute) {
  const bool fixed3 =
      contours.empty() || contours.front().plane.fixed == Plane::Fixed::X3;
  const char* cu = absolute ? "S" : "x1";
  const char* cv = absolute ? (fixed3 ? "I" : "R") : (fixed3 ? "x2" : "x3");
  const auto old_precision = os.precision(12);
  os << "level,polyline_id," << cu << ',' << cv << '\n';
  const double off_u = absolute ? absolute->point.s : 0.0;
  const double off_v = absolute ? (fixed3 ? absolute->point.i : absolute->point.r) : 0.0;
  for (const Contour& c : contours) {
    if (c.point_marker) {
      os << c.level << ",0," << c.point_marker->u + off_u << ','
         << c.point_marker->v + off_v << '\n';
    }
    for (std::size_t id = 0; id < c.polylines.size(); ++id) {
      for (const Point2& pt : c.polylines[id]) {
        os << c.level << ',' << id << ',' << pt.u + off_u << ',' << pt.v + off_v << '\n';
      }
    }
  }
  os.precision(old_precision);
}

}  // namespace sirlyap

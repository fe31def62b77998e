#include "pqmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace pqmt {

double l1_coherence(const MixedState& rho) {
    const int dim = static_cast<int>(rho.matrix.rows());
    double sum = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j) sum += std::abs(rho.matrix(i, j));
    return sum;
}

double l1_coherence(const PureState& psi) {
    // For |psi><psi|: sum_{i!=j} |a_i||a_j| = (sum|a|)^2 - sum|a|^2.
    double abs_sum = 0.0, sq_sum = 0.0;
    for (int i = 0; i < psi.amplitudes.size(); ++i) {
        double a = std::abs(psi.amplitudes(i));
        abs_sum += a;
        sq_sum += a * a;
    }
    return abs_sum * abs_sum - sq_sum;
}

namespace {

struct Point {
    double x, y;
};

// Proper (interior) intersection of segments ab and cd.
std::optional<std::pair<std::pair<double, double>, Point>> intersect(Point a, Point b,
                                                                     Point c, Point d) {
    const double rx = b.x - a.x, ry = b.y - a.y;
    const double sx = d.x - c.x, sy = d.y - c.y;
    const double denom = rx * sy - ry * sx;
    if (denom == 0.0) return std::nullopt;
    const double qpx = c.x - a.x, qpy = c.y - a.y;
    const double t = (qpx * sy - qpy * sx) / denom;
    const double u = (qpx * ry - qpy * rx) / denom;
    const double eps = 1e-9;
    if (t <= eps || t >= 1.0 - eps || u <= eps || u >= 1.0 - eps) return std::nullopt;
    return std::make_pair(std::make_pair(t, u), Point{a.x + t * rx, a.y + t * ry});
}

double shoelace(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Point& p = pts[k];
        const Point& q = pts[(k + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

struct TaggedPoint {
    Point pt;
    int crossing = -1;  // shared id of a self-intersection, -1 for original vertices
};

}  // namespace

double signed_loop_area(std::span<const std::pair<double, double>> points) {
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (auto [x, y] : points) pts.push_back({x, y});
    return shoelace(pts);
}

double loop_area(std::span<const std::pair<double, double>> points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("loop_area: fewer than 3 points");

    std::vector<Point> pts;
    pts.reserve(points.size());
    for (auto [x, y] : points) pts.push_back({x, y});

    int next_id = 0;

    // Coincident vertices pinch the curve and must split subloops just like
    // transversal crossings do.
    std::vector<int> vertex_id(n, -1);
    {
        double span = 0.0;
        for (const Point& p : pts)
            span = std::max({span, std::abs(p.x), std::abs(p.y)});
        const double tol = 1e-9 * std::max(1.0, span);
        std::map<std::pair<long long, long long>, std::vector<int>> groups;
        for (int s = 0; s < n; ++s)
            groups[{std::llround(pts[s].x / tol), std::llround(pts[s].y / tol)}]
                .push_back(s);
        for (const auto& [key, members] : groups) {
            if (members.size() < 2) continue;
            for (int s : members) vertex_id[s] = next_id;
            ++next_id;
        }
    }

    // Crossings per segment, keyed by the parameter along the segment.
    struct Event {
        double t;
        Point pt;
        int id;
    };
    std::vector<std::vector<Event>> events(n);
    for (int s1 = 0; s1 < n; ++s1) {
        for (int s2 = s1 + 2; s2 < n; ++s2) {
            if (s1 == 0 && s2 == n - 1) continue;  // adjacent around the wrap
            auto hit = intersect(pts[s1], pts[(s1 + 1) % n], pts[s2], pts[(s2 + 1) % n]);
            if (!hit) continue;
            const auto& [params, pt] = *hit;
            events[s1].push_back({params.first, pt, next_id});
            events[s2].push_back({params.second, pt, next_id});
            ++next_id;
        }
    }

    std::vector<TaggedPoint> walk;
    walk.reserve(pts.size() + 2 * next_id);
    for (int s = 0; s < n; ++s) {
        walk.push_back({pts[s], vertex_id[s]});
        std::sort(events[s].begin(), events[s].end(),
                  [](const Event& a, const Event& b) { return a.t < b.t; });
        for (const Event& e : events[s]) walk.push_back({e.pt, e.id});
    }

    // Pop a closed subloop each time a crossing is revisited.
    double total = 0.0;
    std::vector<TaggedPoint> stack;
    std::unordered_map<int, int> open;  // crossing id -> stack position
    auto subloop_area = [&](int from) {
        std::vector<Point> loop;
        for (std::size_t k = from; k < stack.size(); ++k) loop.push_back(stack[k].pt);
        return std::abs(shoelace(loop));
    };
    for (const TaggedPoint& v : walk) {
        auto it = v.crossing >= 0 ? open.find(v.crossing) : open.end();
        if (it != open.end()) {
            int pos = it->second;
            total += subloop_area(pos);
            for (std::size_t k = pos + 1; k < stack.size(); ++k)
                if (stack[k].crossing >= 0) open.erase(stack[k].crossing);
            stack.resize(pos + 1);
        } else {
            if (v.crossing >= 0) open.emplace(v.crossing, static_cast<int>(stack.size()));
            stack.push_back(v);
        }
    }
    total += subloop_area(0);
    return total;
}

double loop_area(const LoopCurve& curve) { return loop_area(curve.points); }

std::vector<double> separability(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("separability: empty list");
    const std::size_t count = vectors.size();
    const std::size_t dim = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != dim)
            throw std::invalid_argument("separability: inconsistent vector lengths");
    std::vector<double> out(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                double diff = vectors[i][k] - vectors[j][k];
                sq += diff * diff;
            }
            out[i] += std::sqrt(sq);
        }
        out[i] /= static_cast<double>(count);
    }
    return out;
}

}  // namespace pqmt

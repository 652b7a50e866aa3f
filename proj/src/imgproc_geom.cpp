#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "museo/imgproc.hpp"

namespace museo::imgproc {

std::vector<PointI> StructuringElement::offsets() const {
    std::vector<PointI> offs;
    const int rx = width / 2, ry = height / 2;
    for (int dy = -ry; dy <= ry; ++dy) {
        for (int dx = -rx; dx <= rx; ++dx) {
            if (shape == SEShape::ELLIPSE) {
                double nx = rx > 0 ? static_cast<double>(dx) / rx : 0.0;
                double ny = ry > 0 ? static_cast<double>(dy) / ry : 0.0;
                if (nx * nx + ny * ny > 1.0 + 1e-12) continue;
            }
            offs.push_back({dx, dy});
        }
    }
    return offs;
}

namespace {

RasterImage erode_or_dilate(const RasterImage& img, const StructuringElement& se, bool dilate) {
    RasterImage out = img;
    const auto offs = se.offsets();
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int v = dilate ? 0 : 255;
            for (const auto& o : offs) {
                int s = img.at_clamped(x + o.x, y + o.y);
                v = dilate ? std::max(v, s) : std::min(v, s);
            }
            out.at(x, y) = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

RasterImage subtract_saturating(const RasterImage& a, const RasterImage& b) {
    RasterImage out = a;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        out.samples[i] = a.samples[i] > b.samples[i]
                             ? static_cast<std::uint8_t>(a.samples[i] - b.samples[i])
                             : 0;
    return out;
}

}  // namespace

RasterImage morphology(MorphOp op, const RasterImage& img, const StructuringElement& se) {
    if (img.channels != 1) throw MultiChannelInput("morphology expects one channel");
    if (se.width < 1 || se.height < 1 || se.width % 2 == 0 || se.height % 2 == 0)
        throw OutOfBounds("structuring element sides must be odd and >= 1");
    switch (op) {
        case MorphOp::ERODE:
            return erode_or_dilate(img, se, false);
        case MorphOp::DILATE:
            return erode_or_dilate(img, se, true);
        case MorphOp::OPEN:
            return erode_or_dilate(erode_or_dilate(img, se, false), se, true);
        case MorphOp::CLOSE:
            return erode_or_dilate(erode_or_dilate(img, se, true), se, false);
        case MorphOp::TOPHAT:
            return subtract_saturating(img, morphology(MorphOp::OPEN, img, se));
        case MorphOp::BLACKHAT:
            return subtract_saturating(morphology(MorphOp::CLOSE, img, se), img);
    }
    throw OutOfBounds("unknown morphology op");
}

BinaryMask morphology(MorphOp op, const BinaryMask& mask, const StructuringElement& se) {
    return gray_to_mask(morphology(op, mask_to_gray(mask), se));
}

RasterImage mask_to_gray(const BinaryMask& mask) {
    RasterImage out(mask.width, mask.height, ColorSpace::GRAY);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) out.samples[i] = mask.bits[i] ? 255 : 0;
    return out;
}

BinaryMask gray_to_mask(const RasterImage& img, std::uint8_t threshold) {
    if (img.channels != 1) throw MultiChannelInput("gray_to_mask expects one channel");
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        out.bits[i] = img.samples[i] > threshold ? 1 : 0;
    return out;
}

// ---------------------------------------------------------------------------
// Canny
// ---------------------------------------------------------------------------

BinaryMask canny(const RasterImage& img, double low, double high) {
    if (img.channels != 1) throw MultiChannelInput("canny expects one channel");
    if (low < 0 || low > high) throw InvalidThresholds("need 0 <= low <= high");

    const int w = img.width, h = img.height;

    // 5x5 Gaussian, sigma 1.4
    static const double kKernel1d[5] = {
        std::exp(-4.0 / (2 * 1.4 * 1.4)), std::exp(-1.0 / (2 * 1.4 * 1.4)), 1.0,
        std::exp(-1.0 / (2 * 1.4 * 1.4)), std::exp(-4.0 / (2 * 1.4 * 1.4))};
    const double ksum = kKernel1d[0] + kKernel1d[1] + kKernel1d[2] + kKernel1d[3] + kKernel1d[4];

    std::vector<double> tmp(static_cast<std::size_t>(w) * h), smooth(tmp.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int k = -2; k <= 2; ++k) acc += kKernel1d[k + 2] * img.at_clamped(x + k, y);
            tmp[static_cast<std::size_t>(y) * w + x] = acc / ksum;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int k = -2; k <= 2; ++k) {
                int yy = std::clamp(y + k, 0, h - 1);
                acc += kKernel1d[k + 2] * tmp[static_cast<std::size_t>(yy) * w + x];
            }
            smooth[static_cast<std::size_t>(y) * w + x] = acc / ksum;
        }

    auto sm = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return smooth[static_cast<std::size_t>(y) * w + x];
    };

    // Sobel
    std::vector<double> mag(smooth.size());
    std::vector<std::uint8_t> dir(smooth.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx = (sm(x + 1, y - 1) + 2 * sm(x + 1, y) + sm(x + 1, y + 1)) -
                        (sm(x - 1, y - 1) + 2 * sm(x - 1, y) + sm(x - 1, y + 1));
            double gy = (sm(x - 1, y + 1) + 2 * sm(x, y + 1) + sm(x + 1, y + 1)) -
                        (sm(x - 1, y - 1) + 2 * sm(x, y - 1) + sm(x + 1, y - 1));
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            mag[i] = std::hypot(gx, gy);
            // quantize the gradient direction into 4 sectors
            double ang = std::atan2(gy, gx) * 180.0 / M_PI;
            if (ang < 0) ang += 180.0;
            std::uint8_t d;
            if (ang < 22.5 || ang >= 157.5)
                d = 0;  // horizontal gradient -> compare left/right
            else if (ang < 67.5)
                d = 1;  // diagonal /
            else if (ang < 112.5)
                d = 2;  // vertical gradient -> compare up/down
            else
                d = 3;  // diagonal
            dir[i] = d;
        }
    }

    static const int kDx[4] = {1, 1, 0, -1};
    static const int kDy[4] = {0, 1, 1, 1};

    auto mag_at = [&](int x, int y) -> double {
        if (x < 0 || x >= w || y < 0 || y >= h) return -1.0;
        return mag[static_cast<std::size_t>(y) * w + x];
    };

    // Non-maximum suppression. The asymmetric tie rule (> on one side, >= on
    // the other) keeps exactly one pixel of a two-pixel plateau.
    std::vector<std::uint8_t> cls(smooth.size(), 0);  // 0 none, 1 weak, 2 strong
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            double m = mag[i];
            if (m < low) continue;
            int d = dir[i];
            double mp = mag_at(x + kDx[d], y + kDy[d]);
            double mn = mag_at(x - kDx[d], y - kDy[d]);
            if (m > mp && m >= mn) cls[i] = m >= high ? 2 : 1;
        }
    }

    // Hysteresis: BFS from strong pixels through 8-connected weak pixels.
    BinaryMask out(w, h);
    std::deque<PointI> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (cls[static_cast<std::size_t>(y) * w + x] == 2) {
                out.set(x, y, true);
                queue.push_back({x, y});
            }
    while (!queue.empty()) {
        PointI p = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = p.x + dx, ny = p.y + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                std::size_t i = static_cast<std::size_t>(ny) * w + nx;
                if (cls[i] == 1 && !out.get(nx, ny)) {
                    out.set(nx, ny, true);
                    queue.push_back({nx, ny});
                }
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contours
// ---------------------------------------------------------------------------

namespace {

// Moore neighborhood in clockwise order starting east.
const int kMooreDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
const int kMooreDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

Contour trace_outer_boundary(const BinaryMask& mask, const std::vector<int>& labels,
                             int label, int sx, int sy) {
    auto is_fg = [&](int x, int y) {
        return mask.in_bounds(x, y) &&
               labels[static_cast<std::size_t>(y) * mask.width + x] == label;
    };

    Contour contour;
    contour.points.push_back({sx, sy});

    // Moore tracing with Jacob's stopping criterion. (sx, sy) is the
    // top-left-most pixel, so the backtrack direction west (index 4) is
    // guaranteed background.
    int cx = sx, cy = sy;
    int backtrack = 4;
    int first_dir = -1;
    const std::size_t limit = static_cast<std::size_t>(mask.width) * mask.height * 4 + 8;
    while (contour.points.size() < limit) {
        int found = -1;
        for (int k = 0; k < 8; ++k) {
            int d = (backtrack + 1 + k) % 8;
            if (is_fg(cx + kMooreDx[d], cy + kMooreDy[d])) {
                found = d;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel
        if (cx == sx && cy == sy) {
            if (first_dir < 0)
                first_dir = found;
            else if (found == first_dir)
                break;  // about to repeat the initial move: boundary closed
        }
        cx += kMooreDx[found];
        cy += kMooreDy[found];
        if (!(cx == sx && cy == sy)) contour.points.push_back({cx, cy});
        backtrack = (found + 4) % 8;
    }
    return contour;
}

}  // namespace

std::vector<Contour> find_contours(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
    std::vector<Contour> contours;
    std::vector<long long> areas;

    int next_label = 0;
    std::deque<PointI> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.get(x, y) || labels[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const int label = next_label++;
            long long area = 0;
            labels[static_cast<std::size_t>(y) * w + x] = label;
            queue.push_back({x, y});
            while (!queue.empty()) {
                PointI p = queue.front();
                queue.pop_front();
                ++area;
                for (int d = 0; d < 8; ++d) {
                    int nx = p.x + kMooreDx[d], ny = p.y + kMooreDy[d];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    std::size_t i = static_cast<std::size_t>(ny) * w + nx;
                    if (mask.get(nx, ny) && labels[i] < 0) {
                        labels[i] = label;
                        queue.push_back({nx, ny});
                    }
                }
            }
            // scan order guarantees (x, y) is the top-left-most pixel
            contours.push_back(trace_outer_boundary(mask, labels, label, x, y));
            areas.push_back(area);
        }
    }

    std::vector<std::size_t> order(contours.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return areas[a] > areas[b]; });
    std::vector<Contour> sorted;
    sorted.reserve(contours.size());
    for (std::size_t i : order) sorted.push_back(std::move(contours[i]));
    return sorted;
}

BinaryMask fill_contours(const std::vector<Contour>& contours, int width, int height) {
    BinaryMask out(width, height);
    for (const auto& contour : contours) {
        const auto& pts = contour.points;
        if (pts.empty()) continue;
        for (const auto& p : pts) {
            if (!out.in_bounds(p.x, p.y)) throw OutOfBounds("contour point outside mask");
            out.set(p.x, p.y, true);
        }
        if (pts.size() < 3) continue;

        // even-odd scanline fill over the closed polygon of pixel centers
        int ymin = pts[0].y, ymax = pts[0].y;
        for (const auto& p : pts) {
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        std::vector<double> xs;
        for (int y = ymin; y <= ymax; ++y) {
            xs.clear();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const PointI& a = pts[i];
                const PointI& b = pts[(i + 1) % pts.size()];
                if (a.y == b.y) continue;
                // half-open rule: each edge covers [min(y), max(y))
                if ((a.y <= y && y < b.y) || (b.y <= y && y < a.y)) {
                    double t = static_cast<double>(y - a.y) / (b.y - a.y);
                    xs.push_back(a.x + t * (b.x - a.x));
                }
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
                int x0 = static_cast<int>(std::ceil(xs[i] - 1e-9));
                int x1 = static_cast<int>(std::floor(xs[i + 1] + 1e-9));
                for (int x = std::max(0, x0); x <= std::min(width - 1, x1); ++x)
                    out.set(x, y, true);
            }
        }
    }
    return out;
}

long long contour_area(const Contour& contour, int width, int height) {
    BinaryMask filled = fill_contours({contour}, width, height);
    return static_cast<long long>(filled.count());
}

Box contour_bbox(const Contour& contour) {
    if (contour.points.empty()) return {};
    int x1 = contour.points[0].x, x2 = x1, y1 = contour.points[0].y, y2 = y1;
    for (const auto& p : contour.points) {
        x1 = std::min(x1, p.x);
        x2 = std::max(x2, p.x);
        y1 = std::min(y1, p.y);
        y2 = std::max(y2, p.y);
    }
    return {x1, y1, x2 + 1, y2 + 1};
}

// ---------------------------------------------------------------------------
// Convex hull + rotating calipers
// ---------------------------------------------------------------------------

std::vector<PointI> convex_hull(const std::vector<PointI>& points) {
    std::vector<PointI> pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const PointI& a, const PointI& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;

    auto cross = [](const PointI& o, const PointI& a, const PointI& b) {
        return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
               static_cast<long long>(a.y - o.y) * (b.x - o.x);
    };
    std::vector<PointI> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

std::array<PointD, 4> OrientedRect::corners() const {
    const double rad = angle_deg * M_PI / 180.0;
    // local +x axis of the rect expressed in image coordinates (y down);
    // positive angle means visually counterclockwise
    const double ux = std::cos(rad), uy = -std::sin(rad);
    const double vx = -uy, vy = ux;
    const double hw = width * 0.5, hh = height * 0.5;
    return {PointD{center.x - ux * hw - vx * hh, center.y - uy * hw - vy * hh},
            PointD{center.x + ux * hw - vx * hh, center.y + uy * hw - vy * hh},
            PointD{center.x + ux * hw + vx * hh, center.y + uy * hw + vy * hh},
            PointD{center.x - ux * hw + vx * hh, center.y - uy * hw + vy * hh}};
}

OrientedRect min_area_rect(const std::vector<PointI>& points) {
    if (points.empty()) throw OutOfBounds("min_area_rect needs at least one point");
    std::vector<PointI> hull = convex_hull(points);
    if (hull.size() == 1) {
        return {{static_cast<double>(hull[0].x), static_cast<double>(hull[0].y)}, 0.0, 0.0, 0.0};
    }
    if (hull.size() == 2) {
        double dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
        OrientedRect r;
        r.center = {(hull[0].x + hull[1].x) * 0.5, (hull[0].y + hull[1].y) * 0.5};
        r.width = std::hypot(dx, dy);
        r.height = 0.0;
        r.angle_deg = normalize_angle_deg(std::atan2(-dy, dx) * 180.0 / M_PI);
        return r;
    }

    double best_area = std::numeric_limits<double>::infinity();
    OrientedRect best;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const PointI& a = hull[i];
        const PointI& b = hull[(i + 1) % hull.size()];
        double ex = b.x - a.x, ey = b.y - a.y;
        double len = std::hypot(ex, ey);
        if (len < 1e-12) continue;
        ex /= len;
        ey /= len;
        // perpendicular axis
        double px = -ey, py = ex;
        double min_e = 1e300, max_e = -1e300, min_p = 1e300, max_p = -1e300;
        for (const auto& q : hull) {
            double pe = q.x * ex + q.y * ey;
            double pp = q.x * px + q.y * py;
            min_e = std::min(min_e, pe);
            max_e = std::max(max_e, pe);
            min_p = std::min(min_p, pp);
            max_p = std::max(max_p, pp);
        }
        double w = max_e - min_e, h = max_p - min_p;
        double area = w * h;
        if (area < best_area - 1e-12) {
            best_area = area;
            double ce = (min_e + max_e) * 0.5, cp = (min_p + max_p) * 0.5;
            best.center = {ce * ex + cp * px, ce * ey + cp * py};
            best.width = w;
            best.height = h;
            best.angle_deg = normalize_angle_deg(std::atan2(-ey, ex) * 180.0 / M_PI);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Hough transform
// ---------------------------------------------------------------------------

std::vector<LineSegment> hough_lines(const BinaryMask& edges, double rho_step,
                                     double theta_step, int vote_threshold) {
    if (rho_step <= 0 || theta_step <= 0) throw InvalidThresholds("hough step sizes");
    if (vote_threshold < 1) throw InvalidThresholds("vote threshold must be >= 1");

    const double diag = std::hypot(edges.width, edges.height);
    const int n_rho = 2 * static_cast<int>(std::ceil(diag / rho_step)) + 1;
    const int rho_center = n_rho / 2;
    const int n_theta = std::max(1, static_cast<int>(std::floor(M_PI / theta_step + 1e-9)));

    std::vector<double> cos_t(n_theta), sin_t(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        cos_t[t] = std::cos(t * theta_step);
        sin_t[t] = std::sin(t * theta_step);
    }

    std::vector<int> acc(static_cast<std::size_t>(n_rho) * n_theta, 0);
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (!edges.get(x, y)) continue;
            for (int t = 0; t < n_theta; ++t) {
                double rho = x * cos_t[t] + y * sin_t[t];
                int r = rho_center + static_cast<int>(std::lround(rho / rho_step));
                if (r >= 0 && r < n_rho) acc[static_cast<std::size_t>(r) * n_theta + t]++;
            }
        }
    }

    auto acc_at = [&](int r, int t) -> int {
        if (r < 0 || r >= n_rho || t < 0 || t >= n_theta) return 0;
        return acc[static_cast<std::size_t>(r) * n_theta + t];
    };

    std::vector<LineSegment> lines;
    for (int r = 0; r < n_rho; ++r) {
        for (int t = 0; t < n_theta; ++t) {
            int v = acc_at(r, t);
            if (v < vote_threshold) continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr)
                for (int dt = -1; dt <= 1; ++dt) {
                    if (dr == 0 && dt == 0) continue;
                    if (acc_at(r + dr, t + dt) > v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                lines.push_back({(r - rho_center) * rho_step, t * theta_step, v});
        }
    }
    std::stable_sort(lines.begin(), lines.end(), [](const LineSegment& a, const LineSegment& b) {
        if (a.support != b.support) return a.support > b.support;
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    return lines;
}

}  // namespace museo::imgproc

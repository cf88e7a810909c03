#include "qtz/media.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace qtz {

namespace {

int read_pnm_token(std::istream& in) {
    // skips whitespace and '#' comments
    while (in) {
        const int c = in.peek();
        if (c == std::char_traits<char>::eof()) break;
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            in.get();
        } else {
            break;
        }
    }
    int v = -1;
    in >> v;
    return v;
}

std::string frame_path(const std::string& dir, int index1) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.ppm", index1);
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

Frame read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_ppm: cannot open " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '6') throw IoError("read_ppm: not a P6 file: " + path);
    const int w = read_pnm_token(in);
    const int h = read_pnm_token(in);
    const int maxval = read_pnm_token(in);
    if (w <= 0 || h <= 0 || maxval != 255)
        throw IoError("read_ppm: unsupported header in " + path);
    in.get();  // single whitespace after maxval
    Frame f(w, h);
    in.read(reinterpret_cast<char*>(f.rgb.data()), static_cast<std::streamsize>(f.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(f.rgb.size()))
        throw IoError("read_ppm: truncated pixel data in " + path);
    return f;
}

void write_ppm(const std::string& path, const Frame& f) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("write_ppm: cannot open " + tmp);
        out << "P6\n" << f.w << " " << f.h << "\n255\n";
        out.write(reinterpret_cast<const char*>(f.rgb.data()),
                  static_cast<std::streamsize>(f.rgb.size()));
        if (!out) throw IoError("write_ppm: write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("write_ppm: rename to " + path + " failed: " + ec.message());
}

FrameStack read_frame_dir(const std::string& dir) {
    FrameStack frames;
    for (int i = 1;; ++i) {
        const std::string p = frame_path(dir, i);
        if (!std::filesystem::exists(p)) break;
        frames.push_back(read_ppm(p));
    }
    if (frames.empty()) throw IoError("read_frame_dir: no frame_000001.ppm under " + dir);
    for (const Frame& f : frames)
        if (f.w != frames[0].w || f.h != frames[0].h)
            throw ShapeMismatch("read_frame_dir: frame sizes differ");
    return frames;
}

void write_frame_dir(const std::string& dir, const FrameStack& frames) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("write_frame_dir: cannot create " + dir);
    for (size_t i = 0; i < frames.size(); ++i)
        write_ppm(frame_path(dir, static_cast<int>(i) + 1), frames[i]);
}

RotationParams angles_from_unitary(const QTensor& u, double tol_pure) {
    if (u.n1 != 2 || u.n2 != 2) throw ShapeMismatch("angles_from_unitary: tensor must be 2x2xp");
    const QTensor uh = fftq(u);
    RotationParams out;
    for (int k = 0; k < u.n3; ++k) {
        const Quaternion off1 = uh.q(0, 1, k), off2 = uh.q(1, 0, k);
        if (qnorm(off1) > tol_pure || qnorm(off2) > tol_pure)
            throw NotPureUnit("angles_from_unitary: hat slice not diagonal", k, -1);
        double ang[2][2];  // (alpha|gamma, beta) per diagonal entry
        for (int e = 0; e < 2; ++e) {
            const Quaternion q = uh.q(e, e, k);
            if (std::abs(q.w) > tol_pure || std::abs(qnorm(q) - 1.0) > tol_pure)
                throw NotPureUnit("angles_from_unitary: diagonal entry not a pure unit quaternion",
                                  k, e);
            const double a = q.x, b = q.y, c = q.z;
            const double s = std::hypot(b, c);
            ang[e][0] = std::atan2(s, a);
            ang[e][1] = s < 1e-12 ? 0.0 : std::atan2(c, b);
        }
        out.alpha.push_back(ang[0][0]);
        out.beta.push_back(ang[0][1]);
        out.gamma.push_back(ang[1][0]);
    }
    return out;
}

QTensor synthesize_unitary(const RotationParams& params) {
    const int p = static_cast<int>(params.size());
    QTensor uh(2, 2, p);
    for (int k = 0; k < p; ++k) {
        const double a = params.alpha[k], b = params.beta[k], g = params.gamma[k];
        uh.set(0, 0, k, {0.0, std::cos(a), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b)});
        uh.set(1, 1, k, {0.0, std::cos(g), std::sin(g) * std::cos(b), std::sin(g) * std::sin(b)});
    }
    return ifftq(uh);
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "same_linear") return ScheduleKind::same_linear;
    if (s == "diff_linear") return ScheduleKind::diff_linear;
    if (s == "fixed_step") return ScheduleKind::fixed_step;
    if (s == "sine_phase") return ScheduleKind::sine_phase;
    if (s == "log_growth") return ScheduleKind::log_growth;
    throw UnknownKind("schedule: unknown kind '" + s + "'");
}

const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::same_linear: return "same_linear";
        case ScheduleKind::diff_linear: return "diff_linear";
        case ScheduleKind::fixed_step: return "fixed_step";
        case ScheduleKind::sine_phase: return "sine_phase";
        case ScheduleKind::log_growth: return "log_growth";
    }
    return "?";
}

namespace {

double wrap_deg(double v) {
    double r = std::fmod(v, 360.0);
    if (r < 0.0) r += 360.0;
    return r;
}

}  // namespace

std::vector<std::array<double, 3>> schedule(ScheduleKind kind, int n, const ScheduleParams& p) {
    if (n < 1) throw ShapeMismatch("schedule: need at least one frame");
    std::vector<std::array<double, 3>> out(n);
    for (int t = 1; t <= n; ++t) {
        std::array<double, 3>& a = out[t - 1];
        switch (kind) {
            case ScheduleKind::same_linear:
                a[0] = a[1] = a[2] = wrap_deg(static_cast<double>(t - 1));
                break;
            case ScheduleKind::diff_linear:
                for (int ch = 0; ch < 3; ++ch) a[ch] = wrap_deg(t - 1 + p.offsets[ch]);
                break;
            case ScheduleKind::fixed_step:
                for (int ch = 0; ch < 3; ++ch) a[ch] = wrap_deg((t - 1) * p.steps[ch]);
                break;
            case ScheduleKind::sine_phase:
                for (int ch = 0; ch < 3; ++ch)
                    a[ch] = wrap_deg(p.amplitude * std::sin(p.omega * t + p.phases[ch]));
                break;
            case ScheduleKind::log_growth:
                for (int ch = 0; ch < 3; ++ch)
                    a[ch] = wrap_deg(p.log_coeffs[ch] * std::log1p(static_cast<double>(t)));
                break;
        }
    }
    return out;
}

namespace {

// Source position for a destination pixel under a rotation of the plane by
// `deg` counterclockwise (as displayed, y growing downward) about the center.
void rotate_channel(const Frame& src, Frame& dst, int ch, double deg) {
    const double th = deg * std::numbers::pi / 180.0;
    const double cs = std::cos(th), sn = std::sin(th);
    const double cx = (src.w - 1) / 2.0, cy = (src.h - 1) / 2.0;
    for (int y = 0; y < src.h; ++y) {
        for (int x = 0; x < src.w; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double sx = cx + cs * dx - sn * dy;
            const double sy = cy + sn * dx + cs * dy;
            double v = 0.0;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            if (x0 >= -1 && x0 <= src.w - 1 && y0 >= -1 && y0 <= src.h - 1) {
                const double fx = sx - x0, fy = sy - y0;
                const auto sample = [&](int xi, int yi) -> double {
                    if (xi < 0 || yi < 0 || xi >= src.w || yi >= src.h) return 0.0;
                    return src.at(xi, yi, ch);
                };
                v = (1.0 - fx) * (1.0 - fy) * sample(x0, y0) + fx * (1.0 - fy) * sample(x0 + 1, y0) +
                    (1.0 - fx) * fy * sample(x0, y0 + 1) + fx * fy * sample(x0 + 1, y0 + 1);
            }
            dst.at(x, y, ch) = static_cast<uint8_t>(std::clamp(std::lround(v), 0l, 255l));
        }
    }
}

}  // namespace

FrameStack rotate_frames(const FrameStack& frames, const std::vector<std::array<double, 3>>& deg) {
    if (deg.size() != frames.size())
        throw ShapeMismatch("rotate_frames: angle list length differs from frame count");
    FrameStack out;
    out.reserve(frames.size());
    for (size_t i = 0; i < frames.size(); ++i) {
        Frame dst(frames[i].w, frames[i].h);
        for (int ch = 0; ch < 3; ++ch) {
            if (deg[i][ch] == 0.0) {
                for (int y = 0; y < dst.h; ++y)
                    for (int x = 0; x < dst.w; ++x) dst.at(x, y, ch) = frames[i].at(x, y, ch);
            } else {
                rotate_channel(frames[i], dst, ch, deg[i][ch]);
            }
        }
        out.push_back(std::move(dst));
    }
    return out;
}

namespace {

std::vector<double> luma(const Frame& f) {
    std::vector<double> g(static_cast<size_t>(f.w) * f.h);
    for (size_t p = 0; p < g.size(); ++p)
        g[p] = 0.299 * f.rgb[3 * p] + 0.587 * f.rgb[3 * p + 1] + 0.114 * f.rgb[3 * p + 2];
    return g;
}

double channel_stddev_mean(const Frame& f) {
    const size_t npix = static_cast<size_t>(f.w) * f.h;
    double total = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
        double sum = 0.0, sum2 = 0.0;
        for (size_t p = 0; p < npix; ++p) {
            const double v = f.rgb[3 * p + ch];
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / npix;
        const double var = std::max(0.0, sum2 / npix - mean * mean);
        total += std::sqrt(var);
    }
    return total / 3.0;
}

}  // namespace

ConsistencyReport consistency_metrics(const FrameStack& frames) {
    const int n = static_cast<int>(frames.size());
    if (n < 2) throw TooFewFrames("consistency_metrics: need at least 2 frames");
    const size_t npix = static_cast<size_t>(frames[0].w) * frames[0].h;

    std::vector<double> tc(n - 1);
    std::vector<double> prev = luma(frames[0]);
    for (int i = 1; i < n; ++i) {
        std::vector<double> cur = luma(frames[i]);
        double acc = 0.0;
        for (size_t p = 0; p < npix; ++p) acc += std::abs(cur[p] - prev[p]);
        tc[i - 1] = 1.0 - acc / npix / 255.0;
        prev = std::move(cur);
    }

    ConsistencyReport rep;
    double s = 0.0;
    for (double v : tc) s += v;
    rep.tc_mean = s / (n - 1);
    if (n >= 3) {
        double dev = 0.0;
        for (double v : tc) dev += (v - rep.tc_mean) * (v - rep.tc_mean);
        rep.tc_std = std::sqrt(dev / (n - 2));
    }

    double cc = 0.0;
    for (const Frame& f : frames) cc += 1.0 / (1.0 + channel_stddev_mean(f) / 255.0);
    rep.cc_mean = cc / n;
    return rep;
}

FrameStack make_test_clip(int w, int h, int n) {
    FrameStack frames;
    frames.reserve(n);
    const double tau = 2.0 * std::numbers::pi;
    for (int t = 0; t < n; ++t) {
        Frame f(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
                const double r = 0.5 + 0.35 * std::sin(tau * (u + 0.01 * t));
                const double g = 0.5 + 0.35 * std::sin(tau * (v - 0.008 * t) + 1.0);
                const double b = 0.5 + 0.35 * std::sin(tau * (0.5 * (u + v) + 0.012 * t) + 2.0);
                f.at(x, y, 0) = static_cast<uint8_t>(std::lround(255.0 * r));
                f.at(x, y, 1) = static_cast<uint8_t>(std::lround(255.0 * g));
                f.at(x, y, 2) = static_cast<uint8_t>(std::lround(255.0 * b));
            }
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace qtz

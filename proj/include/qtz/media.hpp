#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtz/qtensor.hpp"

namespace qtz {

/// One 8-bit RGB frame, packed row-major (r,g,b per pixel).
struct Frame {
    int w = 0, h = 0;
    std::vector<uint8_t> rgb;

    Frame() = default;
    Frame(int w_, int h_) : w(w_), h(h_), rgb(static_cast<size_t>(w_) * h_ * 3, 0) {}
    uint8_t at(int x, int y, int ch) const {
        return rgb[(static_cast<size_t>(y) * w + x) * 3 + ch];
    }
    uint8_t& at(int x, int y, int ch) { return rgb[(static_cast<size_t>(y) * w + x) * 3 + ch]; }
};

using FrameStack = std::vector<Frame>;

Frame read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Frame& f);
/// Reads frame_000001.ppm, frame_000002.ppm, ... until the first gap.
FrameStack read_frame_dir(const std::string& dir);
void write_frame_dir(const std::string& dir, const FrameStack& frames);

/// Per-frame rotation angles in radians; alpha, gamma in [0, pi], beta in
/// (-pi, pi].
struct RotationParams {
    std::vector<double> alpha, beta, gamma;
    size_t size() const { return alpha.size(); }
};

/// Reads angles off a 2x2xp unitary tensor whose hat slices are diagonal with
/// pure unit-quaternion entries: entry 1 = cos(a) i + sin(a)cos(b) j +
/// sin(a)sin(b) k, entry 2 the same with gamma. beta falls back to 0 when
/// sin(alpha) vanishes.
RotationParams angles_from_unitary(const QTensor& u, double tol_pure = 1e-6);
/// Builds the hat slices from the angles and transforms back; the result is
/// unitary by construction.
QTensor synthesize_unitary(const RotationParams& params);

enum class ScheduleKind { same_linear, diff_linear, fixed_step, sine_phase, log_growth };

ScheduleKind schedule_kind_from_string(const std::string& s);
const char* to_string(ScheduleKind k);

/// Parameters for the per-channel angle schedules; every kind reads only its
/// own fields. Angles are degrees in [0, 360).
struct ScheduleParams {
    std::array<double, 3> offsets{0.0, 25.0, 50.0};       // diff_linear initial angles
    std::array<double, 3> steps{1.0, 1.2, 1.4};           // fixed_step degrees per frame
    double amplitude = 180.0;                             // sine_phase
    double omega = 0.1;                                   // sine_phase rad per frame
    std::array<double, 3> phases{0.0, 2.0943951023931953, 4.1887902047863905};  // sine_phase
    std::array<double, 3> log_coeffs{40.0, 80.0, 120.0};  // log_growth
};

/// Angle triples (R,G,B) in degrees for frames t = 1..n.
std::vector<std::array<double, 3>> schedule(ScheduleKind kind, int n,
                                            const ScheduleParams& params = {});

/// Rotates each channel plane independently about the image center,
/// counterclockwise as displayed, bilinear interpolation, black fill.
FrameStack rotate_frames(const FrameStack& frames, const std::vector<std::array<double, 3>>& deg);

struct ConsistencyReport {
    double tc_mean = 0.0;
    std::optional<double> tc_std;  // absent when fewer than 3 frames
    double cc_mean = 0.0;
};

/// Temporal consistency from luma frame differences and color consistency
/// from per-channel dispersion. Luma weights 0.299/0.587/0.114; standard
/// deviations use the population form.
ConsistencyReport consistency_metrics(const FrameStack& frames);

/// Deterministic low-frequency synthetic clip used by the shipped test data.
FrameStack make_test_clip(int w, int h, int n);

}  // namespace qtz

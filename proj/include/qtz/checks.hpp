#pragma once

#include <string>
#include <vector>

#include "qtz/qtensor.hpp"

namespace qtz {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Replays the theorem-level invariant suites and the golden-data runs.
/// data_dir points at the directory holding the golden JSON files.
std::vector<CheckResult> run_verify_checks(const std::string& data_dir);
bool all_passed(const std::vector<CheckResult>& results);

struct PolarGolden {
    QTensor A, U, H;
};
struct PluGolden {
    QTensor A, L, U, P, Phat;
};
struct SvdGolden {
    QTensor A, Ahat;
    std::vector<std::vector<double>> shat;  // golden hat singular values per slice
};

PolarGolden load_polar_golden(const std::string& data_dir);
PluGolden load_plu_golden(const std::string& data_dir);
SvdGolden load_svd_golden(const std::string& data_dir);

/// Largest entrywise quaternion distance between two equal-shaped tensors.
double max_entry_dist(const QTensor& a, const QTensor& b);

}  // namespace qtz

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qtz/solve.hpp"

using namespace qtz;
using oracles::rel;

namespace {

QTensor random_t(int n1, int n2, int n3, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_uniform_tensor(n1, n2, n3, rng);
}

}  // namespace

TEST_SUITE_BEGIN("solve");

TEST_CASE("inv_err") {
    const QMatrix i2 = QMatrix::identity(2);
    CHECK(inv_err(i2, i2) == 0.0);
    CHECK(inv_err(i2 * 2.0, i2 * 0.5) == 0.0);
    CHECK(inv_err(i2, QMatrix(2, 2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(inv_err(i2, QMatrix::identity(3)), ShapeMismatch);
}

TEST_CASE("bcircz_inv identity and random") {
    const BCircZ bi = bcircz(identity_tensor(3, 3));
    const BCircZ binv = bcircz_inv(bi);
    CHECK(inv_err(bi.payload, binv.payload) < 1e-14);

    const QTensor g = random_t(3, 3, 3, 71);
    const BCircZ b = bcircz(g);
    const BCircZ s = bcircz_inv(b);
    CHECK(inv_err(b.payload, s.payload) < 1e-12);

    // agreement with the dense inverse of the payload
    const QMatrix dens = minv(b.payload);
    CHECK(rel(fro_norm(s.payload - dens), fro_norm(dens)) < 1e-10);
}

TEST_CASE("bcircz_inv five-step equals dense up to n=225") {
    for (auto [m, q] : {std::pair{5, 3}, {15, 5}, {75, 3}}) {
        const QTensor g = random_t(m, m, q, 72 + m);
        const BCircZ b = bcircz(g);
        const BCircZ s = bcircz_inv(b);
        const QMatrix dens = minv(b.payload);
        CHECK(rel(fro_norm(s.payload - dens), fro_norm(dens)) < 1e-10);
        // structured err within 10x of dense err
        CHECK(inv_err(b.payload, s.payload) <= 10.0 * inv_err(b.payload, dens) + 1e-15);
    }
}

TEST_CASE("bcircz_inv error paths") {
    // singular hat slice: zero generator
    const QTensor z(2, 2, 2);
    CHECK_THROWS_AS(bcircz_inv(bcircz(z)), Singular);

    // non-circulant payload rejected by the validate step
    BCircZ b = bcircz(random_t(2, 2, 3, 73));
    b.payload.d(0, 3) += cxd{0.5, 0.0};
    CHECK_THROWS_AS(bcircz_inv(b), StructureViolation);
}

TEST_CASE("tikhonov identity shrinkage and limits") {
    const int n = 6;
    std::mt19937_64 rng(74);
    const QMatrix b = random_uniform_qmatrix(n, 1, rng);
    TikhonovProblem p{bcircz(identity_tensor(3, 2)), b, 2.0};
    const QMatrix x = tikhonov_structured(p);
    CHECK(rel(fro_norm(x - b * (1.0 / (1.0 + 4.0))), fro_norm(b)) < 1e-13);
    const QMatrix xd = tikhonov_dense(p);
    CHECK(rel(fro_norm(xd - x), fro_norm(x)) < 1e-12);

    // zero system: pure penalty gives x = 0
    TikhonovProblem pz{bcircz(QTensor(3, 3, 2)), b, 0.5};
    CHECK(fro_norm(tikhonov_structured(pz)) < 1e-14);
    CHECK(fro_norm(tikhonov_dense(pz)) < 1e-14);

    // ||x|| decreases monotonically in lambda
    TikhonovProblem pr{bcircz(random_t(3, 3, 2, 75)), b, 1.0};
    double last = 1e300;
    for (double lam : {1.0, 10.0, 100.0}) {
        pr.lambda = lam;
        const double nx = fro_norm(tikhonov_structured(pr));
        CHECK(nx < last);
        last = nx;
    }
}

TEST_CASE("tikhonov structured matches dense") {
    for (auto [m, q] : {std::pair{2, 2}, {3, 3}, {5, 4}, {4, 5}, {5, 5}}) {
        std::mt19937_64 rng(76 + m * 10 + q);
        TikhonovProblem p{bcircz(random_t(m, m, q, rng())),
                          random_uniform_qmatrix(m * q, 1, rng), 0.5};
        const QMatrix xs = tikhonov_structured(p);
        const QMatrix xd = tikhonov_dense(p);
        CHECK(rel(fro_norm(xs - xd), fro_norm(xd)) < 1e-10);
        CHECK(tikhonov_residual(p, xs) < 1e-10);
    }
}

TEST_CASE("tikhonov shape errors") {
    TikhonovProblem p{bcircz(random_t(3, 3, 2, 77)), QMatrix(5, 1), 0.5};
    CHECK_THROWS_AS(tikhonov_structured(p), ShapeMismatch);
    p.b = QMatrix(6, 1);
    p.lambda = 0.0;
    CHECK_THROWS_AS(tikhonov_dense(p), ShapeMismatch);
}

TEST_CASE("bench smoke writes the fixed CSV schema") {
    const auto dir = std::filesystem::temp_directory_path() / "qtz_bench_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "bench.csv").string();
    const auto reports = bench({{3, 3}}, 1, 7, true, 0.5, csv);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].method == "structured");
    CHECK(reports[1].method == "dense");
    CHECK(reports[2].method == "tikhonov_structured");
    CHECK(reports[3].method == "tikhonov_dense");
    for (const auto& r : reports) {
        CHECK(r.n == 9);
        CHECK(r.seconds >= 0.0);
        CHECK(r.err < 1e-10);
    }
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "size,method,time_s,err");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
    std::filesystem::remove_all(dir);
}

TEST_SUITE_END();

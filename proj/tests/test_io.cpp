#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qtz/checks.hpp"
#include "qtz/io.hpp"

using namespace qtz;

namespace {

struct TempDir {
    std::filesystem::path p;
    TempDir() : p(std::filesystem::temp_directory_path() / "qtz_io_test") {
        std::filesystem::create_directories(p);
    }
    ~TempDir() { std::filesystem::remove_all(p); }
    std::string file(const char* name) const { return (p / name).string(); }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("binary format layout") {
    TempDir td;
    std::mt19937_64 rng(81);
    const QTensor t = random_uniform_tensor(3, 2, 4, rng);
    const std::string path = td.file("t.qtns");
    write_tensor_bin(path, t);
    CHECK(std::filesystem::file_size(path) == 48u + 32u * 3 * 2 * 4);

    std::ifstream in(path, std::ios::binary);
    char magic[6];
    in.read(magic, 6);
    CHECK(std::string(magic, 6) == "QTNS1\n");

    const QTensor back = read_tensor_bin(path);
    CHECK(max_entry_dist(t, back) == 0.0);
}

TEST_CASE("binary format error paths") {
    TempDir td;
    {
        std::ofstream out(td.file("bad.qtns"), std::ios::binary);
        out << "NOTQT\n" << std::string(64, '\0');
    }
    CHECK_THROWS_AS(read_tensor_bin(td.file("bad.qtns")), IoError);

    std::mt19937_64 rng(82);
    const QTensor t = random_uniform_tensor(2, 2, 2, rng);
    write_tensor_bin(td.file("trunc.qtns"), t);
    std::filesystem::resize_file(td.file("trunc.qtns"), 100);
    CHECK_THROWS_AS(read_tensor_bin(td.file("trunc.qtns")), IoError);

    CHECK_THROWS_AS(read_tensor_bin(td.file("missing.qtns")), IoError);
}

TEST_CASE("json round trip and errors") {
    TempDir td;
    std::mt19937_64 rng(83);
    const QTensor t = random_uniform_tensor(2, 3, 2, rng);
    write_tensor_json(td.file("t.json"), t);
    CHECK(max_entry_dist(t, read_tensor_json(td.file("t.json"))) == 0.0);

    {
        std::ofstream out(td.file("bad.json"));
        out << "{\"dims\": [2, 2]}";
    }
    CHECK_THROWS_AS(read_tensor_json(td.file("bad.json")), IoError);
    {
        std::ofstream out(td.file("notjson.json"));
        out << "hello";
    }
    CHECK_THROWS_AS(read_tensor_json(td.file("notjson.json")), IoError);
}

TEST_CASE("read_tensor dispatches on extension") {
    TempDir td;
    std::mt19937_64 rng(84);
    const QTensor t = random_uniform_tensor(2, 2, 3, rng);
    write_tensor(td.file("a.qtns"), t, TensorFormat::bin);
    write_tensor(td.file("a.json"), t, TensorFormat::json);
    CHECK(max_entry_dist(read_tensor(td.file("a.qtns")), t) == 0.0);
    CHECK(max_entry_dist(read_tensor(td.file("a.json")), t) == 0.0);
    CHECK_THROWS_AS(format_from_string("xml"), UnknownKind);
}

TEST_CASE("fuzz round trip is bit exact in both formats") {
    TempDir td;
    std::mt19937_64 rng(85);
    std::uniform_real_distribution<double> wide(-1e6, 1e6);
    for (int rep = 0; rep < 50; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 5), n2 = 1 + static_cast<int>(rng() % 5),
                  n3 = 1 + static_cast<int>(rng() % 5);
        QTensor t(n1, n2, n3);
        for (int k = 0; k < n3; ++k)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    t.set(i, j, k, {wide(rng), wide(rng), wide(rng), wide(rng)});
        write_tensor_bin(td.file("f.qtns"), t);
        write_tensor_json(td.file("f.json"), t);
        CHECK(max_entry_dist(read_tensor_bin(td.file("f.qtns")), t) == 0.0);
        CHECK(max_entry_dist(read_tensor_json(td.file("f.json")), t) == 0.0);
    }
}

TEST_SUITE_END();

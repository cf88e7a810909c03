#include "qtz/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace qtz {

namespace {

constexpr char kMagic[6] = {'Q', 'T', 'N', 'S', '1', '\n'};
constexpr size_t kHeaderSize = 48;

void put_u64le(uint8_t* dst, uint64_t v) {
    for (int i = 0; i < 8; ++i) dst[i] = static_cast<uint8_t>(v >> (8 * i));
}

uint64_t get_u64le(const uint8_t* src) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(src[i]) << (8 * i);
    return v;
}

void put_f64le(uint8_t* dst, double d) { put_u64le(dst, std::bit_cast<uint64_t>(d)); }

double get_f64le(const uint8_t* src) { return std::bit_cast<double>(get_u64le(src)); }

void atomic_write(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path + " failed: " + ec.message());
}

}  // namespace

void write_tensor_bin(const std::string& path, const QTensor& t) {
    const size_t count = static_cast<size_t>(t.n1) * t.n2 * t.n3;
    std::string bytes(kHeaderSize + 32 * count, '\0');
    uint8_t* p = reinterpret_cast<uint8_t*>(bytes.data());
    std::memcpy(p, kMagic, sizeof kMagic);
    put_u64le(p + 6, static_cast<uint64_t>(t.n1));
    put_u64le(p + 14, static_cast<uint64_t>(t.n2));
    put_u64le(p + 22, static_cast<uint64_t>(t.n3));
    uint8_t* q = p + kHeaderSize;
    for (int k = 0; k < t.n3; ++k)
        for (int i = 0; i < t.n1; ++i)
            for (int j = 0; j < t.n2; ++j) {
                const Quaternion v = t.q(i, j, k);
                put_f64le(q, v.w);
                put_f64le(q + 8, v.x);
                put_f64le(q + 16, v.y);
                put_f64le(q + 24, v.z);
                q += 32;
            }
    atomic_write(path, bytes);
}

QTensor read_tensor_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderSize) throw IoError(path + ": truncated header");
    const uint8_t* p = reinterpret_cast<const uint8_t*>(bytes.data());
    if (std::memcmp(p, kMagic, sizeof kMagic) != 0) throw IoError(path + ": bad magic");
    const uint64_t n1 = get_u64le(p + 6), n2 = get_u64le(p + 14), n3 = get_u64le(p + 22);
    if (n1 == 0 || n2 == 0 || n3 == 0 || n1 > 1u << 20 || n2 > 1u << 20 || n3 > 1u << 20)
        throw IoError(path + ": implausible dimensions");
    const size_t count = static_cast<size_t>(n1) * n2 * n3;
    if (bytes.size() != kHeaderSize + 32 * count)
        throw IoError(path + ": size differs from 48 + 32*n1*n2*n3");
    QTensor t(static_cast<int>(n1), static_cast<int>(n2), static_cast<int>(n3));
    const uint8_t* q = p + kHeaderSize;
    for (int k = 0; k < t.n3; ++k)
        for (int i = 0; i < t.n1; ++i)
            for (int j = 0; j < t.n2; ++j) {
                t.set(i, j, k,
                      {get_f64le(q), get_f64le(q + 8), get_f64le(q + 16), get_f64le(q + 24)});
                q += 32;
            }
    return t;
}

std::string tensor_to_json(const QTensor& t) {
    nlohmann::json root;
    root["dims"] = {t.n1, t.n2, t.n3};
    nlohmann::json slices = nlohmann::json::array();
    for (int k = 0; k < t.n3; ++k) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < t.n1; ++i) {
            nlohmann::json cols = nlohmann::json::array();
            for (int j = 0; j < t.n2; ++j) {
                const Quaternion v = t.q(i, j, k);
                cols.push_back({v.w, v.x, v.y, v.z});
            }
            rows.push_back(std::move(cols));
        }
        slices.push_back(std::move(rows));
    }
    root["slices"] = std::move(slices);
    return root.dump();
}

QTensor tensor_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("tensor json parse error: ") + e.what());
    }
    try {
        const auto& dims = root.at("dims");
        const int n1 = dims.at(0).get<int>(), n2 = dims.at(1).get<int>(), n3 = dims.at(2).get<int>();
        if (n1 <= 0 || n2 <= 0 || n3 <= 0) throw IoError("tensor json: bad dims");
        QTensor t(n1, n2, n3);
        const auto& slices = root.at("slices");
        for (int k = 0; k < n3; ++k)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j) {
                    const auto& e = slices.at(k).at(i).at(j);
                    t.set(i, j, k,
                          {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(),
                           e.at(3).get<double>()});
                }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("tensor json layout error: ") + e.what());
    }
}

void write_tensor_json(const std::string& path, const QTensor& t) {
    atomic_write(path, tensor_to_json(t));
}

QTensor read_tensor_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return tensor_from_json(text);
}

void write_tensor(const std::string& path, const QTensor& t, TensorFormat fmt) {
    if (fmt == TensorFormat::bin)
        write_tensor_bin(path, t);
    else
        write_tensor_json(path, t);
}

QTensor read_tensor(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return read_tensor_json(path);
    return read_tensor_bin(path);
}

TensorFormat format_from_string(const std::string& s) {
    if (s == "bin") return TensorFormat::bin;
    if (s == "json") return TensorFormat::json;
    throw UnknownKind("format: expected bin or json, got '" + s + "'");
}

}  // namespace qtz

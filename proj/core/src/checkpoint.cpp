// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <string>

#include "ulrn/error.hpp"

namespace ulrn {

namespace {

constexpr char kMagic[] = {'U', 'L', 'R', 'N', '1', '\n'};

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int bit = 0; bit < 8; ++bit) {
            c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
        }
        table[i] = c;
    }
    return table;
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_f32(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u32(out, bits);
}

class ByteCursor {
public:
    ByteCursor(const std::string& bytes, const std::string& path)
        : bytes_(bytes), path_(path) {}

    std::uint32_t read_u32() {
        need(4);
        const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data()) + offset_;
        offset_ += 4;
        return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
               (std::uint32_t(p[3]) << 24);
    }

    float read_f32() {
        const std::uint32_t bits = read_u32();
        float v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    std::string read_string(std::size_t n) {
        need(n);
        std::string s = bytes_.substr(offset_, n);
        offset_ += n;
        return s;
    }

    std::size_t offset() const { return offset_; }
    std::size_t remaining() const { return bytes_.size() - offset_; }

private:
    void need(std::size_t n) {
        if (offset_ + n > bytes_.size()) {
            throw FormatError(path_ + ": truncated checkpoint at offset " +
                              std::to_string(offset_));
        }
    }

    const std::string& bytes_;
    std::string path_;
    std::size_t offset_ = 0;
};

} // namespace

std::uint32_t crc32(const unsigned char* data, std::size_t len) {
    static const auto table = make_crc_table();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ull;
    }
    return h;
}

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params) {
    std::string out(kMagic, sizeof(kMagic));
    for (const auto& e : params) {
        put_u32(out, static_cast<std::uint32_t>(e.name.size()));
        out += e.name;
        put_u32(out, static_cast<std::uint32_t>(e.value.shape().size()));
        for (std::size_t d : e.value.shape()) put_u32(out, static_cast<std::uint32_t>(d));
        for (std::size_t i = 0; i < e.value.size(); ++i) {
            put_f32(out, static_cast<float>(e.value[i]));
        }
    }
    put_u32(out, crc32(reinterpret_cast<const unsigned char*>(out.data()), out.size()));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to " + path.string());
}

ParameterSet load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (bytes.size() < sizeof(kMagic) + 4) {
        throw FormatError(path.string() + ": file too short for a checkpoint");
    }
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw FormatError(path.string() + ": bad magic at offset 0");
    }
    const std::size_t body_len = bytes.size() - 4;
    const std::uint32_t stored =
        std::uint32_t(static_cast<unsigned char>(bytes[body_len])) |
        (std::uint32_t(static_cast<unsigned char>(bytes[body_len + 1])) << 8) |
        (std::uint32_t(static_cast<unsigned char>(bytes[body_len + 2])) << 16) |
        (std::uint32_t(static_cast<unsigned char>(bytes[body_len + 3])) << 24);
    const std::uint32_t computed =
        crc32(reinterpret_cast<const unsigned char*>(bytes.data()), body_len);
    if (stored != computed) {
        throw FormatError(path.string() + ": CRC mismatch, checkpoint is corrupt");
    }

    ByteCursor cur(bytes, path.string());
    cur.read_string(sizeof(kMagic));
    ParameterSet params;
    while (cur.offset() < body_len) {
        const std::uint32_t name_len = cur.read_u32();
        const std::string name = cur.read_string(name_len);
        const std::uint32_t rank = cur.read_u32();
        if (rank == 0 || rank > 8) {
            throw FormatError(path.string() + ": implausible tensor rank " +
                              std::to_string(rank) + " at offset " + std::to_string(cur.offset()));
        }
        std::vector<std::size_t> shape(rank);
        std::size_t count = 1;
        for (auto& d : shape) {
            d = cur.read_u32();
            count *= d;
        }
        std::vector<double> data(count);
        for (auto& v : data) v = static_cast<double>(cur.read_f32());
        params.add(name, Tensor(std::move(shape), std::move(data)));
    }
    return params;
}

} // namespace ulrn

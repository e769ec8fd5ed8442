#include "csmds/idx.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "csmds/errors.hpp"
#include "csmds/rng.hpp"

namespace csmds {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::uint64_t offset,
                       const std::string& what) {
    throw format_error(path.string() + ": " + what + " (byte offset " + std::to_string(offset) +
                       ")");
}

std::uint32_t read_u32_be(std::ifstream& in, const std::filesystem::path& path,
                          std::uint64_t& offset) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4))
        fail(path, offset, "unexpected end of file while reading a 32-bit field");
    offset += 4;
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

std::ifstream open_idx(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error(path.string() + ": cannot open file");
    return in;
}

}  // namespace

Matrix read_idx_images(const std::filesystem::path& path) {
    std::ifstream in = open_idx(path);
    std::uint64_t offset = 0;
    const std::uint32_t magic = read_u32_be(in, path, offset);
    if (magic != 0x00000803u)
        fail(path, 0, "bad magic number " + std::to_string(magic) + ", expected 2051");
    const std::uint32_t n = read_u32_be(in, path, offset);
    const std::uint32_t rows = read_u32_be(in, path, offset);
    const std::uint32_t cols = read_u32_be(in, path, offset);
    if (n == 0 || rows == 0 || cols == 0) fail(path, 4, "zero-sized dimension in header");

    const std::size_t pixels = std::size_t(rows) * cols;
    Matrix out(n, pixels);
    std::vector<unsigned char> buf(pixels);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(pixels)))
            fail(path, offset, "unexpected end of file in image " + std::to_string(i));
        for (std::size_t p = 0; p < pixels; ++p) out(i, p) = buf[p] / 255.0;
        offset += pixels;
    }
    if (in.peek() != std::ifstream::traits_type::eof())
        fail(path, offset, "trailing bytes after the last image");
    return out;
}

std::vector<int> read_idx_labels(const std::filesystem::path& path) {
    std::ifstream in = open_idx(path);
    std::uint64_t offset = 0;
    const std::uint32_t magic = read_u32_be(in, path, offset);
    if (magic != 0x00000801u)
        fail(path, 0, "bad magic number " + std::to_string(magic) + ", expected 2049");
    const std::uint32_t n = read_u32_be(in, path, offset);

    std::vector<int> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const int c = in.get();
        if (c == std::ifstream::traits_type::eof())
            fail(path, offset, "unexpected end of file in label " + std::to_string(i));
        labels[i] = c;
        ++offset;
    }
    if (in.peek() != std::ifstream::traits_type::eof())
        fail(path, offset, "trailing bytes after the last label");
    return labels;
}

LabeledDataset subsample(const LabeledDataset& ds, const std::set<int>& classes,
                         std::size_t count, std::uint64_t seed) {
    if (ds.vectors.rows() != ds.labels.size())
        throw validation_error("subsample: vector/label count mismatch");

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (classes.contains(ds.labels[i])) eligible.push_back(i);
    if (eligible.size() < count)
        throw validation_error("subsample: requested " + std::to_string(count) +
                               " items but only " + std::to_string(eligible.size()) +
                               " match the class filter");

    // Partial Fisher-Yates over the eligible indices, then restore file order.
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + std::size_t(rng.below(std::uint64_t(eligible.size() - i)));
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(count);
    std::sort(eligible.begin(), eligible.end());

    LabeledDataset out{Matrix(count, ds.vectors.cols()), std::vector<int>(count)};
    for (std::size_t r = 0; r < count; ++r) {
        const auto src = ds.vectors.row(eligible[r]);
        std::copy(src.begin(), src.end(), out.vectors.row(r).begin());
        out.labels[r] = ds.labels[eligible[r]];
    }
    return out;
}

}  // namespace csmds

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "psmkit/camera.hpp"
#include "psmkit/error.hpp"
#include "psmkit/kernels.hpp"

namespace psmkit {

RasterImage::RasterImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 0 || h < 0) throw ValidationError("image dimensions must be non-negative");
    pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

void RasterImage::validate() const {
    if (width <= 0 || height <= 0) throw ValidationError("image dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ValidationError("pixel buffer size does not match width * height");
}

RasterImage deinterlace(const RasterImage& image, Field field) { return kernels::omp::deinterlace(image, field); }

namespace {

// Reads one whitespace-separated header token, skipping '#' comments.
std::string next_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) tok += static_cast<char>(bytes[pos++]);
    return tok;
}

int header_int(std::span<const std::uint8_t> bytes, std::size_t& pos, const char* what) {
    const std::string tok = next_token(bytes, pos);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("pgm.") + what, "expected an integer, got '" + tok + "'");
    }
}

}  // namespace

RasterImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    if (next_token(bytes, pos) != "P5") throw ParseError("pgm.magic", "not a binary PGM (P5) file");
    const int w = header_int(bytes, pos, "width");
    const int h = header_int(bytes, pos, "height");
    const int maxval = header_int(bytes, pos, "maxval");
    if (w <= 0 || h <= 0) throw ParseError("pgm.size", "dimensions must be positive");
    if (maxval <= 0 || maxval > 255) throw ParseError("pgm.maxval", "only 8-bit PGM is supported");
    ++pos;  // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() < pos + need) throw ParseError("pgm.pixels", "file is truncated");
    RasterImage img(w, h);
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), need, img.pixels.begin());
    return img;
}

std::vector<std::uint8_t> encode_pgm(const RasterImage& image) {
    image.validate();
    const std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

RasterImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open image '" + path + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

void write_pgm(const std::string& path, const RasterImage& image) {
    const auto bytes = encode_pgm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write image '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace psmkit
